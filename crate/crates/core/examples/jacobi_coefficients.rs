//! A Jacobi cusp form of weight 9/2 and index 1 built from vector-valued
//! Poincaré series through the theta expansion, its Fourier coefficients
//! `c(n, r)`, and the theta decomposition recovering its components.

use jacobi_cohomology::cli::verify::default_seeds;
use jacobi_cohomology::eichler::cusp_expansion;
use jacobi_cohomology::numeric::scalar::{c, Q};
use jacobi_cohomology::theta::{theta_decompose, JacobiFormData, JacobiType};
use jacobi_cohomology::vvform::PoincareSeries;

fn main() -> jacobi_cohomology::Result<()> {
    let jt = JacobiType::eta(Q::new(9, 2), 1, false)?;
    let ty = jt.vv_type()?;
    let ps = PoincareSeries::new(&ty, &default_seeds(&ty)?, 100)?;
    let phi = JacobiFormData::from_vv(jt, cusp_expansion(&ps)?)?;

    for ((n, r), v) in phi.jacobi_coefficients(3)?.into_iter().take(12) {
        if v.norm() > 1e-12 {
            println!("c({n}, {r:>2}) = {v:.8}");
        }
    }

    let tau = c(0.1, 1.2);
    let dec = theta_decompose(&|t, z| phi.eval(t, z), 1, tau, None)?;
    let direct = phi.theta_components(tau);
    println!("decomposition condition {:.1e}, error {:.1e}", dec.condition, (&dec.components - &direct).norm());
    Ok(())
}
