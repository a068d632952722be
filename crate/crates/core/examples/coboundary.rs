//! Cocycles of the Jacobi group with polynomial values: a planted
//! coboundary, its extension to a word, the coboundary solve and the
//! parabolic check.

use jacobi_cohomology::cohomology::{coboundary_solve, Cocycle, PolyVector};
use jacobi_cohomology::group::Word;
use jacobi_cohomology::numeric::poly::Poly;
use jacobi_cohomology::numeric::scalar::{c, Q};
use jacobi_cohomology::theta::JacobiType;

fn main() -> jacobi_cohomology::Result<()> {
    let k = 2;
    let jt = JacobiType::eta(Q::new(9, 2), 1, false)?;
    let ty = jt.vv_type()?.with_weight(Q::from_integer(-(k as i64)))?;
    let p = PolyVector::new(
        k,
        vec![Poly::new(vec![c(1.0, 0.0), c(0.0, -2.0), c(0.5, 0.5)]), Poly::new(vec![c(0.0, 1.0), c(3.0, 0.0), c(-1.0, 0.0)])],
    )?;
    let (s, t) = Cocycle::coboundary(&ty, &p);
    let cocycle = Cocycle::jacobi(&jt, k, s, t)?;
    println!("relation residual {:.1e}", cocycle.relation_residual());

    let w = Word::parse("S T^2 S^-1 T")?;
    let g = w.product();
    let direct = p.slash(&ty, &g).sub(&p);
    println!("c(γ) against p|γ − p on {:?}: {:.1e}", g.as_array(), cocycle.extend(&g).sub(&direct).max_coeff());

    let report = coboundary_solve(&cocycle)?;
    println!(
        "coboundary: {} (residual {:.1e}, kernel dim {}), parabolic: {}",
        report.is_coboundary, report.residual, report.kernel_dim, report.is_parabolic
    );
    let witness = report.witness.expect("a coboundary has a witness");
    println!("witness differs from p by {:.1e}", witness.sub(&p).max_coeff());
    Ok(())
}
