//! Eta multipliers, the Weil-type representation attached to index `m`, and
//! the cusp exponents `κ` of the resulting vector-valued type.

use jacobi_cohomology::group::{GroupElement, Word};
use jacobi_cohomology::multiplier::{eta_eval, eta_multiplier, MultiplierSystem};
use jacobi_cohomology::numeric::scalar::{c, Q};
use jacobi_cohomology::theta::JacobiType;

fn main() -> jacobi_cohomology::Result<()> {
    // η(γτ) = ε(γ)(cτ+d)^{1/2} η(τ), checked at one point.
    let g = GroupElement::new(3, 2, 4, 3)?;
    let tau = c(0.05, 0.8);
    let lhs = eta_eval(g.act(tau));
    let rhs = eta_multiplier(&g)? * g.j(tau).sqrt() * eta_eval(tau);
    println!("η transformation defect at {g:?}: {:.1e}", (lhs - rhs).norm());

    let chi = MultiplierSystem::eta_power(3);
    println!("χ = η³ multiplier: relation residual {:.1e}", chi.relation_residuals().max());
    let w = Word::parse("S T^3 S^-1 T")?;
    println!("χ on {w:?} = {:.6}", chi.eval_word(&w));

    for m in 1..=3 {
        let ty = JacobiType::eta(Q::new(9, 2), m, false)?.vv_type()?;
        let skew = JacobiType::eta(Q::new(9, 2), m, true)?.vv_type()?;
        println!(
            "m={m}: dim {}  unitarity defect {:.1e}  κ = {:?}  skew κ = {:?}",
            ty.dim(),
            ty.rho.unitarity_defect(),
            ty.kappa.as_f64(),
            skew.kappa.as_f64()
        );
    }
    Ok(())
}
