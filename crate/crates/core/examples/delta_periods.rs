//! The period polynomial `r_S` of `Δ` by quadrature, its odd and even parts,
//! and the same polynomial from the Eichler integral series.

use jacobi_cohomology::eichler::{period_hol, EichlerIntegralSeries};
use jacobi_cohomology::group::GroupElement;
use jacobi_cohomology::numeric::fourier::FourierSeries;
use jacobi_cohomology::numeric::scalar::{c, Q};
use jacobi_cohomology::vvform::{FormKind, FormType, VVForm};
use num_traits::{One, Zero};

/// `q∏(1−qⁿ)²⁴` to `q^n_max`.
fn delta(n_max: usize) -> Vec<f64> {
    let mut p = vec![0.0; n_max + 1];
    p[0] = 1.0;
    for n in 1..=n_max {
        for _ in 0..24 {
            for i in (n..=n_max).rev() {
                p[i] -= p[i - n];
            }
        }
    }
    let mut out = vec![0.0; n_max + 1];
    out[1..].copy_from_slice(&p[..n_max]);
    out
}

fn main() -> jacobi_cohomology::Result<()> {
    let k = 10;
    let coeffs = delta(60).into_iter().enumerate().skip(1).map(|(n, a)| (n as i64, c(a, 0.0))).collect();
    let form = VVForm::new(FormType::scalar(12)?, vec![FourierSeries::new(Q::one(), Q::zero(), coeffs)?], FormKind::Cusp)?;
    let r = period_hol(&|t| form.eval_series(t), &form.ty, &GroupElement::S, k, 1e-13)?;
    let co: Vec<_> = (0..=k).map(|i| r.polys.polys[0].coeff(i)).collect();
    // Normalise each part by its leading coefficient.
    let odd: Vec<f64> = (0..5).map(|i| (co[2 * i + 1] / co[1]).re * 4.0).collect();
    let even: Vec<f64> = (0..6).map(|i| (co[2 * i] / co[0]).re * -36.0).collect();
    println!("odd part  ∝ {odd:.4?}");
    println!("even part ∝ {even:.4?}");
    println!("fit residual {:.1e}", r.residual);

    let series = EichlerIntegralSeries::new(&form, k, None)?;
    let t = c(0.3, 1.0);
    println!("r_S({t}) by quadrature {:.10}", r.polys.eval(t)[0]);
    println!("r_S({t}) by series     {:.10}", series.period_at(&GroupElement::S, t)?[0]);
    Ok(())
}
