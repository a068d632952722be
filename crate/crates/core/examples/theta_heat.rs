//! Theta series `θ_{2m,a,0}` and the heat operator `L_m = 8πim∂_τ − ∂_z²`.
//!
//! Evaluates each theta component of index `m` at one point and checks that a
//! finite-difference `L_m` annihilates it.
//!
//! ```text
//! cargo run --release --example theta_heat
//! ```

use jacobi_cohomology::numeric::scalar::c;
use jacobi_cohomology::theta::{heat_apply_fd, theta_eval, theta_eval_nonconstant, ThetaSeries};

fn main() -> jacobi_cohomology::Result<()> {
    let (tau, z) = (c(0.13, 1.1), c(0.21, 0.05));
    for m in 1..=3u32 {
        for j in 0..2 * m as usize {
            let th = ThetaSeries::index(m, j);
            // The λ + a = 0 term is constant and lost in rounding next to the rest.
            let est = heat_apply_fd(&|t, w| theta_eval_nonconstant(&th, t, w), m, tau, z, 1e-2)?;
            println!(
                "m={m} a={j}  θ = {:.12}  |L_m θ|/scale = {:.1e}",
                theta_eval(&th, tau, z),
                est.value.norm() / est.scale
            );
        }
    }
    Ok(())
}
