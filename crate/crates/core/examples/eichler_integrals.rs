//! Holomorphic and non-holomorphic Eichler integrals of a vector-valued cusp
//! form of weight 4 attached to index 1, and their periods on `S` and `T S`.

use jacobi_cohomology::cli::verify::default_seeds;
use jacobi_cohomology::eichler::{cusp_expansion, eichler_nonholo, period_hol, period_nonhol};
use jacobi_cohomology::group::GroupElement;
use jacobi_cohomology::numeric::linalg::CVector;
use jacobi_cohomology::numeric::scalar::{c, Q};
use jacobi_cohomology::theta::JacobiType;
use jacobi_cohomology::vvform::PoincareSeries;

fn show(v: &CVector) -> String {
    v.iter().map(|z| format!("{z:.6}")).collect::<Vec<_>>().join(", ")
}

fn main() -> jacobi_cohomology::Result<()> {
    let k = 2;
    let ty = JacobiType::eta(Q::new(9, 2), 1, false)?.vv_type()?;
    let ps = PoincareSeries::new(&ty, &default_seeds(&ty)?, 100)?;
    // The q-expansion is much cheaper than the Poincaré sum; `eval` moves
    // low points into the fundamental domain where it is accurate.
    let form = cusp_expansion(&ps)?;
    let f = |t| form.eval(t);
    let tau = c(0.2, 1.1);
    println!("E^N(τ) = [{}]", show(&eichler_nonholo(&f, &ty, k, tau, 1e-10)?));
    // Periods vanish on T, so those on S and TS agree.
    for g in [GroupElement::S, GroupElement::T * GroupElement::S] {
        let h = period_hol(&f, &ty, &g, k, 1e-10)?;
        let n = period_nonhol(&f, &ty, &g, k, 1e-10)?;
        println!("γ = {:?}", g.as_array());
        println!("  r^H fit residual {:.1e}, value at τ [{}]", h.residual, show(&h.polys.eval(tau)));
        println!("  r^N fit residual {:.1e}, value at τ [{}]", n.residual, show(&n.polys.eval(tau)));
    }
    Ok(())
}
