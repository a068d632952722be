//! Invariants of every layer as property tests. Group elements and other
//! structured inputs are drawn from a seeded generator, so a failing case
//! shrinks to its seed.

use jacobi_cohomology::cli::verify::default_seeds;
use jacobi_cohomology::cohomology::{eta_map, slash_matrix, Cocycle, EtaMapInput, EtaMapOptions, JacobiPolyVector, PolyVector};
use jacobi_cohomology::eichler::period_hol;
use jacobi_cohomology::group::{coset_reps, random_element, word_decompose, GroupElement, JacobiElement, Letter, Word};
use jacobi_cohomology::multiplier::{weil_rep, MultiplierSystem};
use jacobi_cohomology::numeric::fourier::{fourier_extract, FourierSeries};
use jacobi_cohomology::numeric::poly::{mobius_substitute, GaussianRational, Poly, RationalPolynomial};
use jacobi_cohomology::numeric::quadrature::{contour_integrate, Segment};
use jacobi_cohomology::numeric::scalar::{c, C64, Q};
use jacobi_cohomology::numeric::linalg::{max_abs, CVector};
use jacobi_cohomology::theta::{heat_apply_fd, theta_combine, theta_decompose, JacobiType};
use jacobi_cohomology::vvform::{
    supplementary_data, vv_slash_eval, FormKind, FormType, PoincareSeries, PoincareSpec, VVForm,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rational_poly<R: Rng>(rng: &mut R, deg: usize) -> RationalPolynomial {
    let q = |rng: &mut R| BigRational::new(BigInt::from(rng.gen_range(-40i64..=40)), BigInt::from(rng.gen_range(1i64..=15)));
    RationalPolynomial::new((0..=deg).map(|_| GaussianRational::new(q(rng), q(rng))).collect())
}

fn complex_poly<R: Rng>(rng: &mut R, k: usize) -> Poly<C64> {
    Poly::new((0..=k).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
}

fn poly_vector<R: Rng>(rng: &mut R, dim: usize, k: usize) -> PolyVector {
    PolyVector::new(k, (0..dim).map(|_| complex_poly(rng, k)).collect()).unwrap()
}

fn jacobi_element<R: Rng>(rng: &mut R, bound: i64) -> JacobiElement {
    JacobiElement::new(random_element(rng, bound), rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound))
}

/// `q∏(1−qⁿ)²⁴` by repeated multiplication by `(1 − qⁿ)`.
fn delta_form(n_max: usize) -> VVForm {
    let mut p = vec![0i128; n_max];
    p[0] = 1;
    for n in 1..n_max {
        for _ in 0..24 {
            for i in (n..n_max).rev() {
                p[i] -= p[i - n];
            }
        }
    }
    let coeffs = p.iter().enumerate().map(|(i, &a)| (i as i64 + 1, c(a as f64, 0.0))).collect();
    let series = FourierSeries::new(Q::one(), Q::zero(), coeffs).unwrap();
    VVForm::new(FormType::scalar(12).unwrap(), vec![series], FormKind::Cusp).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mobius_substitution_is_a_right_action(seed in any::<u64>(), k in 0usize..=8) {
        let mut rng = rng(seed);
        let deg = rng.gen_range(0..=k);
        let p = rational_poly(&mut rng, deg);
        let g1 = random_element(&mut rng, 30);
        let g2 = random_element(&mut rng, 30);
        let lhs = mobius_substitute(&mobius_substitute(&p, &g1, k).unwrap(), &g2, k).unwrap();
        let rhs = mobius_substitute(&p, &(g1 * g2), k).unwrap();
        prop_assert!(lhs.degree().is_none_or(|d| d <= k));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bol_derivative_vanishes_exactly(seed in any::<u64>(), k in 0usize..=8) {
        let mut rng = rng(seed);
        let deg = rng.gen_range(0..=k);
        let p = rational_poly(&mut rng, deg);
        let g = random_element(&mut rng, 50);
        let mut d = mobius_substitute(&p, &g, k).unwrap();
        for _ in 0..=k {
            d = d.derivative();
        }
        prop_assert!(d.is_zero());
    }

    /// Extraction errors are measured at the sampling height, where the
    /// inversion itself works; rescaling to `y = 0` multiplies rounding by
    /// `e^{2πνy}`.
    #[test]
    fn fourier_extraction_inverts_evaluation(seed in any::<u64>(), y in 1.0f64..2.0, kden in prop::sample::select(vec![1i64, 3, 4, 8])) {
        let mut rng = rng(seed);
        let kappa = if kden == 1 { Q::zero() } else { Q::new(1, kden) };
        let coeffs = (-1i64..=6).map(|n| (n, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))).collect();
        let f = FourierSeries::new(Q::one(), kappa, coeffs).unwrap();
        let ex = fourier_extract(&|t| f.eval(t), y, Q::one(), kappa, -3..=9, None).unwrap();
        let sup = f.scale_at(y);
        for n in -3i64..=9 {
            let err = (ex.coeffs[&n] - f.coeff(n)).norm() * (-2.0 * std::f64::consts::PI * f.frequency(n) * y).exp();
            prop_assert!(err < 1e-9 * sup, "n = {n}: {err:.3e}");
        }
    }

    #[test]
    fn contour_integration_is_path_additive(ax in -2.0f64..2.0, ay in -2.0f64..2.0, s in 0.1f64..0.9) {
        let a = c(ax, ay);
        let f = move |z: C64| (a * z).exp() * (z * z + 1.0);
        let (z0, z1) = (c(-0.5, 0.3), c(0.7, 1.4));
        let mid = z0 + (z1 - z0) * s;
        let tol = 1e-10;
        let whole = contour_integrate(&f, &[Segment::Line { from: z0, to: z1 }], tol).unwrap();
        let split = contour_integrate(&f, &[Segment::Line { from: z0, to: mid }], tol).unwrap()
            + contour_integrate(&f, &[Segment::Line { from: mid, to: z1 }], tol).unwrap();
        prop_assert!((whole - split).norm() < 2.0 * tol);
    }

    #[test]
    fn jacobi_composition_is_associative(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (a, b, d) = (jacobi_element(&mut rng, 20), jacobi_element(&mut rng, 20), jacobi_element(&mut rng, 20));
        prop_assert_eq!(a.compose(&b).compose(&d), a.compose(&b.compose(&d)));
        prop_assert_eq!(a.compose(&a.inverse()), JacobiElement::modular(GroupElement::I));
    }

    #[test]
    fn jacobi_action_is_compatible_with_composition(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (g, h) = (jacobi_element(&mut rng, 3), jacobi_element(&mut rng, 3));
        let (tau, z) = (c(rng.gen_range(-0.5..0.5), rng.gen_range(0.5..2.0)), c(rng.gen_range(-1.0..1.0), rng.gen_range(-0.5..0.5)));
        let (t1, z1) = h.act(tau, z);
        let (t2, z2) = g.act(t1, z1);
        let (t3, z3) = g.compose(&h).act(tau, z);
        prop_assert!((t2 - t3).norm() < 1e-9 * t3.norm().max(1.0) && (z2 - z3).norm() < 1e-9 * z3.norm().max(1.0));
    }

    #[test]
    fn word_decomposition_round_trips(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let g = random_element(&mut rng, 1_000_000);
        prop_assert_eq!(word_decompose(&g).product(), g);
    }

    #[test]
    fn multiplier_is_word_independent(r in -12i64..=12, seed in any::<u64>()) {
        let mut rng = rng(seed);
        let chi = MultiplierSystem::eta_power(r);
        let res = chi.relation_residuals();
        prop_assert!(res.max() < 1e-9);
        let g = random_element(&mut rng, 20);
        let base = word_decompose(&g);
        // Insert S⁴ and (ST)³S⁻² at a random position.
        let mut letters = base.0.clone();
        let at = rng.gen_range(0..=letters.len());
        let rel = [Letter::S, Letter::S, Letter::S, Letter::S, Letter::S, Letter::T(1), Letter::S, Letter::T(1),
            Letter::S, Letter::T(1), Letter::SInv, Letter::SInv];
        letters.splice(at..at, rel);
        let longer = Word(letters);
        prop_assert_eq!(longer.product(), g);
        prop_assert!((chi.eval_word(&longer) - chi.eval_word(&base)).norm() < 1e-9);
        prop_assert!((chi.eval(&g).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn theta_multiplier_quotient_is_a_multiplier(r in -12i64..=12, seed in any::<u64>()) {
        let mut rng = rng(seed);
        let chi2 = MultiplierSystem::eta_power(1);
        let chi1 = MultiplierSystem::eta_power(r).product(&chi2.conj());
        prop_assert_eq!(chi1.weight, Q::new(r, 2) - Q::new(1, 2));
        let (g, h) = (random_element(&mut rng, 6), random_element(&mut rng, 6));
        prop_assert!(chi1.consistency_residual(&g, &h) < 1e-9);
        prop_assert!(chi1.relation_residuals().max() < 1e-9);
    }

    #[test]
    fn cocycle_extension_is_word_independent(seed in any::<u64>(), m in 1u32..=2, k in 0usize..=4) {
        let mut rng = rng(seed);
        let jt = JacobiType::eta(Q::new(2 * k as i64 + 5, 2), m, false).unwrap();
        let ty = jt.vv_type().unwrap().with_weight(Q::from_integer(-(k as i64))).unwrap();
        let p = poly_vector(&mut rng, ty.dim(), k);
        let (s, t) = Cocycle::coboundary(&ty, &p);
        let cocycle = Cocycle::jacobi(&jt, k, s, t).unwrap();
        prop_assert!(cocycle.relation_residual() < 1e-8);
        let size = p.max_coeff();
        for _ in 0..8 {
            let g = random_element(&mut rng, 12);
            let direct = p.slash(&ty, &g).sub(&p);
            let via = cocycle.extend(&g);
            prop_assert!(via.sub(&direct).max_coeff() < 1e-8 * size.max(direct.max_coeff()));
            let mut letters = word_decompose(&g).0;
            letters.splice(0..0, [Letter::S, Letter::S, Letter::S, Letter::S]);
            let other = cocycle.eval_letters(&letters);
            prop_assert!(other.sub(&via).max_coeff() < 1e-8 * size.max(via.max_coeff()));
        }
    }

    #[test]
    fn slash_is_closed_on_polynomial_vectors(seed in any::<u64>(), k in 0usize..=6) {
        let mut rng = rng(seed);
        let ty = FormType::scalar(-(k as i64) - (k as i64 % 2)).unwrap().with_weight(Q::from_integer(-(k as i64))).unwrap();
        let p = poly_vector(&mut rng, 1, k);
        let q = p.slash(&ty, &random_element(&mut rng, 10));
        prop_assert!(q.polys.iter().all(|x| x.degree().is_none_or(|d| d <= k)));
    }

    #[test]
    fn heat_powers_kill_theta_polynomials(seed in any::<u64>(), m in 1u32..=3, k in 0usize..=4) {
        let mut rng = rng(seed);
        let jp = JacobiPolyVector::new(m, poly_vector(&mut rng, 2 * m as usize, k)).unwrap();
        prop_assert!(jp.heat_power(k as u32 + 1).components.max_coeff() == 0.0);
        // One step of L_m agrees with finite differences.
        let once = jp.heat_power(1);
        let (tau, z) = (c(rng.gen_range(-0.5..0.5), rng.gen_range(0.8..1.4)), c(rng.gen_range(-0.5..0.5), rng.gen_range(-0.2..0.2)));
        let est = heat_apply_fd(&|t, w| jp.eval(t, w), m, tau, z, 1e-2).unwrap();
        let exact = once.eval(tau, z);
        prop_assert!((est.value - exact).norm() < 1e-6 * est.scale.max(exact.norm()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn coset_reps_are_nested_and_distinct(cmax in 1i64..=25) {
        let small = coset_reps(cmax);
        let large = coset_reps(cmax + 1);
        prop_assert_eq!(&large[..small.len()], &small[..]);
        let mut rows: Vec<(i64, i64)> = large.iter().map(|g| (g.c, g.d)).collect();
        prop_assert!(large.iter().skip(1).all(|g| g.c > 0 && (0..g.c).contains(&g.d)));
        rows.sort();
        rows.dedup();
        prop_assert_eq!(rows.len(), large.len());
    }

    #[test]
    fn weil_representation_is_unitary(m in 1u32..=8) {
        let rho = weil_rep(m, &MultiplierSystem::eta_power(1)).unwrap();
        prop_assert!(rho.unitarity_defect() < 1e-12);
        prop_assert!(rho.relation_residuals().max() < 1e-9);
    }

    #[test]
    fn supplementary_data_is_an_involution(seed in any::<u64>(), m in 1u32..=3) {
        let mut rng = rng(seed);
        let ty = JacobiType::eta(Q::new(9, 2), m, false).unwrap().vv_type().unwrap();
        let specs: Vec<PoincareSpec> = (0..3)
            .map(|_| {
                let a = rng.gen_range(0..ty.dim());
                let n = rng.gen_range(1..4);
                PoincareSpec::cusp(n, a, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)), &ty.kappa).unwrap()
            })
            .collect();
        let star = supplementary_data(&specs, &ty.kappa);
        prop_assert!(star.iter().all(|s| s.nu < Q::zero()));
        prop_assert_eq!(supplementary_data(&star, &ty.kappa.conj()), specs);
    }

    #[test]
    fn theta_expansion_intertwines_slash(seed in any::<u64>(), m in 1u32..=2) {
        let mut rng = rng(seed);
        let jt = JacobiType::eta(Q::new(9, 2), m, false).unwrap();
        let ctx = jt.slash_context().unwrap();
        let ty = jt.vv_type().unwrap();
        let p = 2 * m as usize;
        let w: Vec<C64> = (0..p).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let f = move |t: C64| CVector::from_fn(p, |a, _| (t * w[a]).exp());
        let phi = |t: C64, z: C64| theta_combine(m, &f(t), t, z);
        let g = random_element(&mut rng, 4);
        let tau = c(rng.gen_range(-0.3..0.3), rng.gen_range(0.8..1.2));
        let lhs = theta_decompose(&|t, z| ctx.slash(&phi, &JacobiElement::modular(g), t, z), m, tau, None).unwrap();
        let rhs = vv_slash_eval(&f, &g, &ty, tau);
        prop_assert!((&lhs.components - &rhs).norm() < 1e-7 * rhs.norm());
    }

    #[test]
    fn skew_components_carry_conjugate_type(m in 1u32..=3, k in 0i64..=4, seed in any::<u64>()) {
        let mut rng = rng(seed);
        let w = Q::new(2 * k + 5, 2);
        let hol = JacobiType::eta(w, m, false).unwrap().vv_type().unwrap();
        let skew = JacobiType::eta(w, m, true).unwrap().vv_type().unwrap();
        let g = random_element(&mut rng, 8);
        let diff = (skew.rho.eval(&g) - hol.rho.eval(&g).map(|z| z.conj())).norm();
        prop_assert!(diff < 1e-9);
        prop_assert!((skew.chi.eval(&g) - hol.chi.eval(&g).conj()).norm() < 1e-9);
        prop_assert_eq!(skew.kappa, hol.kappa.conj());
    }

    #[test]
    fn cusp_poincare_has_no_constant_or_polar_terms(m in 1u32..=2, k in 2i64..=4) {
        let ty = JacobiType::eta(Q::new(2 * k + 5, 2), m, false).unwrap().vv_type().unwrap();
        let spec = PoincareSpec::cusp(1, 0, C64::one(), &ty.kappa).unwrap();
        let form = PoincareSeries::new(&ty, &[spec], 40).unwrap().fourier(-2..=4, 1.5, None).unwrap();
        prop_assert!(form.nonpositive_part() < 1e-6, "{:.3e}", form.nonpositive_part());
    }

    #[test]
    fn poincare_series_is_modular(seed in any::<u64>(), m in 1u32..=2) {
        let mut rng = rng(seed);
        let ty = JacobiType::eta(Q::new(9, 2), m, false).unwrap().vv_type().unwrap();
        let ps = PoincareSeries::new(&ty, &default_seeds(&ty).unwrap(), 60).unwrap();
        let g = random_element(&mut rng, 3);
        let tau = c(rng.gen_range(-0.5..0.5), rng.gen_range(0.9..1.5));
        let at = ps.eval_direct(tau);
        let image = ps.eval_direct(g.act(tau));
        let slashed = vv_slash_eval(&|t| ps.eval_direct(t).value, &g, &ty, tau);
        let bound = 2.0 * at.truncation_estimate().max(image.truncation_estimate() / g.j(tau).norm().powf(ty.weight_f64()));
        let diff = max_abs((&slashed - &at.value).as_slice());
        prop_assert!(max_abs(at.value.as_slice()) > 1e-6);
        prop_assert!(diff <= bound.max(1e-12 * max_abs(at.value.as_slice())), "{diff:.3e} vs {bound:.3e}");
    }

    #[test]
    fn delta_periods_form_a_cocycle(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let k = 10;
        let form = delta_form(60);
        let f = |t: C64| form.eval(t);
        let ty_k = FormType::scalar(-(k as i64)).unwrap();
        let (g1, g2) = (random_element(&mut rng, 5), random_element(&mut rng, 5));
        // Periods grow like the entries to the k-th power; the quadrature
        // tolerance is set relative to a first, loose pass.
        let r = |g: &GroupElement| {
            let rough = period_hol(&f, &form.ty, g, k, 1e-2).map(|p| p.polys.max_coeff()).unwrap_or(1e20);
            period_hol(&f, &form.ty, g, k, 1e-12 * rough.max(1.0)).unwrap()
        };
        let (r1, r2, r12) = (r(&g1), r(&g2), r(&(g1 * g2)));
        prop_assert!(r1.residual.max(r2.residual).max(r12.residual) < 1e-6);
        // Coefficient errors of r₁ reach the right side through the slash
        // matrix of γ₂, whose norm grows like the entries to the k-th power,
        // so the identity is judged against that propagated size.
        let m = slash_matrix(&ty_k, k, &g2);
        let norm = (0..=k).map(|i| m.row(i).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max);
        let rhs = r1.polys.slash(&ty_k, &g2).add(&r2.polys);
        let diff = r12.polys.sub(&rhs).max_coeff();
        let size = r12.polys.max_coeff().max(r2.polys.max_coeff()).max(norm * r1.polys.max_coeff());
        prop_assert!(diff < 1e-5 * size, "{g1:?} {g2:?}: {diff:.3e} against {size:.3e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2))]

    #[test]
    fn eta_map_is_linear(a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let jt = JacobiType::eta(Q::new(9, 2), 1, false).unwrap();
        let ty = jt.vv_type().unwrap();
        let s1 = vec![PoincareSpec::cusp(1, 0, C64::one(), &ty.kappa).unwrap()];
        let s2 = vec![PoincareSpec::cusp(0, 1, C64::one(), &ty.kappa).unwrap()];
        let run = |specs: Vec<PoincareSpec>| {
            let inp = EtaMapInput { weight: jt.weight, m: 1, multiplier: None, theta_multiplier: None, phi: specs, psi: vec![], cmax: 100 };
            eta_map(&inp, EtaMapOptions::default()).unwrap()
        };
        let scaled = |s: &[PoincareSpec], x: f64| s.iter().map(|p| PoincareSpec { b: p.b * x, ..p.clone() }).collect::<Vec<_>>();
        let mut both = scaled(&s1, a);
        both.extend(scaled(&s2, b));
        let (c1, c2, c12) = (run(s1), run(s2), run(both));
        let size = c1.s.max_coeff().max(c2.s.max_coeff());
        for tau in [c(0.1, 1.0), c(-0.4, 0.7), c(0.3, 2.0)] {
            let expect = c1.s.eval(tau) * C64::from(a) + c2.s.eval(tau) * C64::from(b);
            let got = c12.s.eval(tau);
            prop_assert!((got - &expect).norm() < 1e-8 * size * (1.0 + tau.norm()).powi(2));
        }
    }
}
