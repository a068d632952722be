//! The cocycle `η̃(Φ, Ψ)` attached to a Jacobi cusp form `Φ` and a skew
//! cusp form `Ψ` of weight 9/2 and index 2, and the checks that it is a
//! parabolic cocycle which is not a coboundary.

use jacobi_cohomology::cli::verify::default_seeds;
use jacobi_cohomology::cohomology::{coboundary_solve, eta_map, pe_membership, EtaMapInput, EtaMapOptions};
use jacobi_cohomology::numeric::scalar::Q;
use jacobi_cohomology::theta::JacobiType;

fn main() -> jacobi_cohomology::Result<()> {
    let m = 2;
    let ty = JacobiType::eta(Q::new(9, 2), m, false)?.vv_type()?;
    let input = EtaMapInput {
        weight: Q::new(9, 2),
        m,
        multiplier: None,
        theta_multiplier: None,
        phi: default_seeds(&ty)?,
        psi: default_seeds(&ty.conj()?)?,
        cmax: 100,
    };
    let cocycle = eta_map(&input, EtaMapOptions::default())?;
    println!("relation residual {:.1e}", cocycle.relation_residual());

    let value = cocycle.jacobi_value(&cocycle.s)?;
    let member = pe_membership(&|t, z| value.eval(t, z), m, cocycle.k)?;
    println!("value on S killed by L_m^{}: residual {:.1e}", cocycle.k + 1, member.residual);

    let report = coboundary_solve(&cocycle)?;
    println!(
        "parabolic: {} ({:.1e})  coboundary: {} (residual {:.3})",
        report.is_parabolic, report.parabolic_residual, report.is_coboundary, report.residual
    );
    Ok(())
}
