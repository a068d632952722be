//! Weakly holomorphic Poincaré series: the data of the supplementary form
//! `f*` for a vector-valued `f` attached to index 1, then for the scalar
//! `f = q⁻¹ + O(1)` of weight 4 the constant `c_f` and the period
//! polynomial of its Eichler integral. That `f` is `−D³(E₁₀/Δ)` with
//! `E₁₀/Δ = q⁻¹ − 240 + O(q)`, so `c_f = 240` and the periods vanish.

use jacobi_cohomology::eichler::EichlerIntegralSeries;
use jacobi_cohomology::group::GroupElement;
use jacobi_cohomology::numeric::scalar::{c, Q};
use jacobi_cohomology::theta::JacobiType;
use jacobi_cohomology::vvform::{supplementary_data, FormType, PoincareSeries, PoincareSpec};

fn main() -> jacobi_cohomology::Result<()> {
    let k = 2;
    let ty = JacobiType::eta(Q::new(9, 2), 1, false)?.vv_type()?;
    let seeds = vec![PoincareSpec::polar(1, 0, c(1.0, 0.0), &ty.kappa)?, PoincareSpec::polar(1, 1, c(0.0, 0.5), &ty.kappa)?];
    for (s, t) in seeds.iter().zip(supplementary_data(&seeds, &ty.kappa)) {
        println!("f: n={} α={} b={:.2} ν={:<6}  f*: n={} b={:.2} ν={}", s.n, s.alpha, s.b, s.nu, t.n, t.b, t.nu);
    }

    let scalar = FormType::scalar(4)?;
    let ps = PoincareSeries::new(&scalar, &[PoincareSpec::polar(1, 0, c(1.0, 0.0), &scalar.kappa)?], 100)?;
    let e = EichlerIntegralSeries::from_weakly_holomorphic(&ps, k, 100)?;
    println!("c_f = {:.10}", e.c_f[0]);
    let r = e.period(&GroupElement::S)?;
    println!("r_S fit residual {:.1e}", r.residual);
    for (j, p) in r.polys.polys.iter().enumerate() {
        let co: Vec<String> = (0..=k).map(|i| format!("{:.6}", p.coeff(i))).collect();
        println!("  component {j}: [{}]", co.join(", "));
    }
    Ok(())
}
