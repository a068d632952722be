//! The Jacobi group acting on `ℍ × ℂ`, and the holomorphic and skew slash
//! operators of weight 9/2 and index 1.
//!
//! Checks that `(Φ|g)|h = Φ|(gh)` for a sample function that is not modular.

use jacobi_cohomology::group::{GroupElement, JacobiElement};
use jacobi_cohomology::numeric::scalar::{c, Q, C64};
use jacobi_cohomology::theta::JacobiType;

fn main() -> jacobi_cohomology::Result<()> {
    let g = JacobiElement::new(GroupElement::new(2, 1, 1, 1)?, 1, -1);
    let h = JacobiElement::new(GroupElement::S, 0, 2);
    let (tau, z) = (c(0.13, 0.9), c(0.3, -0.1));
    let (t2, z2) = g.compose(&h).act(tau, z);
    println!("(gh)·(τ,z) = ({t2:.6}, {z2:.6})");

    let phi = |t: C64, w: C64| (t * 0.7).exp() * (w * w + w * 0.3 + 1.0);
    for skew in [false, true] {
        let ctx = JacobiType::eta(Q::new(9, 2), 1, skew)?.slash_context()?;
        let slash = |f: &dyn Fn(C64, C64) -> C64, e: &JacobiElement, t: C64, w: C64| {
            if skew {
                ctx.skew_slash(f, e, t, w)
            } else {
                ctx.slash(f, e, t, w)
            }
        };
        let once = |t, w| slash(&phi, &g, t, w);
        let twice = slash(&once, &h, tau, z);
        let direct = slash(&phi, &g.compose(&h), tau, z);
        println!("skew={skew}  (Φ|g)|h = {twice:.10}  Φ|(gh) = {direct:.10}");
    }
    Ok(())
}
