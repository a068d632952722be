//! The discriminant `Δ` as the weight-12 cusp Poincaré series `P_1`, scaled
//! so its first coefficient is 1, against Ramanujan's `τ(n)`.

use jacobi_cohomology::eichler::cusp_expansion;
use jacobi_cohomology::numeric::scalar::{c, C64};
use jacobi_cohomology::vvform::{FormType, PoincareSeries, PoincareSpec};
use num_traits::One;

const TAU: [f64; 6] = [1.0, -24.0, 252.0, -1472.0, 4830.0, -6048.0];

fn main() -> jacobi_cohomology::Result<()> {
    let ty = FormType::scalar(12)?;
    let spec = PoincareSpec::cusp(1, 0, C64::one(), &ty.kappa)?;
    let ps = PoincareSeries::new(&ty, &[spec], 200)?;
    let form = cusp_expansion(&ps)?;
    let a1 = form.components[0].coeff(1);
    for (n, t) in TAU.iter().enumerate() {
        let a = form.components[0].coeff(n as i64 + 1) / a1;
        println!("n={:<2} a(n)/a(1) = {:>14.6}   τ(n) = {t}", n + 1, a.re);
    }
    let at = c(0.0, 1.0);
    let v = ps.eval_direct(at);
    println!("P_1(i) = {:.12} (truncation estimate {:.1e})", v.value[0], v.truncation_estimate());
    Ok(())
}
