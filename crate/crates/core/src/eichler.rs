//! Holomorphic and non-holomorphic Eichler integrals, period polynomials
//! and the generalized Poincaré series of a parabolic cocycle.
//!
//! With `c_k = −(k−2)!/(2πi)^{k−1}` the holomorphic Eichler integral of a
//! cusp form `f` of weight `k+2` satisfies
//! `c_{k+2}E^H(τ) = ∫_τ^{i∞} f(z)(τ−z)^k dz`, so that
//! `r^H(f,γ;τ) = c_{k+2}(E^H − E^H|_{−k}γ)(τ) = ∫_{γ⁻¹i∞}^{i∞} f(z)(τ−z)^k dz`.

use std::f64::consts::PI;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cohomology::{Cocycle, PolyVector};
use crate::error::{input, Error, Result};
use crate::group::{coset_reps, GroupElement};
use crate::numeric::fourier::FourierSeries;
use crate::numeric::linalg::{max_abs, solve, CMatrix, CVector};
use crate::numeric::poly::Poly;
use crate::numeric::quadrature::{contour_integrate_vec, Decay, Segment};
use crate::numeric::scalar::{cpow, e_real, CompensatedSum, C64, Q};
use crate::vvform::{cf_constant, vv_slash_eval, FormKind, FormType, PoincareSeries, VVForm};

/// `c_k = −(k−2)!/(2πi)^{k−1}`.
pub fn c_const(kk: usize) -> C64 {
    let fact: f64 = (2..=kk.saturating_sub(2)).map(|i| i as f64).product();
    -C64::new(fact, 0.0) / cpow(C64::new(0.0, 2.0 * PI), (kk - 1) as f64)
}

/// `τ_j = −1 + 2j/(k+1) + i`, `j = 0..=k+1`.
pub fn period_nodes(k: usize) -> Vec<C64> {
    (0..=k + 1).map(|j| C64::new(-1.0 + 2.0 * j as f64 / (k + 1) as f64, 1.0)).collect()
}

/// Interpolates each component through the first `k + 1` nodes and returns
/// the discrepancy at the remaining ones, relative to the largest value.
pub fn fit_nodes(nodes: &[C64], values: &[CVector], k: usize) -> Result<(PolyVector, f64)> {
    let n = k + 1;
    if nodes.len() < n || nodes.len() != values.len() {
        return input(format!("need at least {n} nodes with one value each"));
    }
    let p = values[0].len();
    let vand = CMatrix::from_fn(n, n, |r, col| nodes[r].powi(col as i32));
    let mut polys = Vec::with_capacity(p);
    for a in 0..p {
        let rhs = CVector::from_fn(n, |r, _| values[r][a]);
        let x = solve(&vand, &rhs)?;
        polys.push(Poly::new(x.iter().cloned().collect()));
    }
    let pv = PolyVector::new(k, polys)?;
    let scale = values.iter().flat_map(|v| v.iter().map(|z| z.norm())).fold(0.0, f64::max);
    let mut err: f64 = 0.0;
    for (t, v) in nodes.iter().zip(values).skip(n) {
        err = err.max(max_abs((pv.eval(*t) - v).as_slice()));
    }
    let residual = if scale == 0.0 { err } else { err / scale };
    Ok((pv, residual))
}

/// A period polynomial `r_γ` with its fit residual.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PeriodPolynomial {
    pub gamma: GroupElement,
    pub polys: PolyVector,
    pub residual: f64,
}

/// Largest tolerated fit residual before a period is declared
/// non-polynomial.
pub const FIT_TOL: f64 = 1e-6;

fn checked_period(gamma: GroupElement, nodes: &[C64], values: &[CVector], k: usize) -> Result<PeriodPolynomial> {
    let (polys, residual) = fit_nodes(nodes, values, k)?;
    if residual > FIT_TOL {
        return Err(Error::Verification(format!(
            "period for {gamma:?} is not a polynomial of degree ≤ {k} (residual {residual:.3e})"
        )));
    }
    Ok(PeriodPolynomial { gamma, polys, residual })
}

/// Smallest positive frequency `n + κ` a cusp form of this type can carry.
fn min_frequency(ty: &FormType) -> f64 {
    ty.kappa.as_f64().into_iter().map(|k| if k > 0.0 { k } else { 1.0 }).fold(1.0, f64::min)
}

fn check_k(ty: &FormType, k: usize) -> Result<()> {
    if ty.weight != Q::from_integer(k as i64 + 2) {
        return input(format!("form of weight {} does not have weight k+2 = {}", ty.weight, k + 2));
    }
    Ok(())
}

/// `r^H(f,γ;τ) = ∫_{γ⁻¹(i∞)}^{i∞} f(z)(τ−z)^k dz` at all nodes in one
/// vector-valued quadrature, then fitted.
///
/// The path climbs from the cusp `−d/c` to height 1 and continues to `i∞`.
pub fn period_hol(f: &dyn Fn(C64) -> CVector, ty: &FormType, g: &GroupElement, k: usize, tol: f64) -> Result<PeriodPolynomial> {
    check_k(ty, k)?;
    let p = ty.dim();
    let Some(x0) = g.preimage_of_infinity() else {
        return Ok(PeriodPolynomial { gamma: *g, polys: PolyVector::zero(p, k), residual: 0.0 });
    };
    let nodes = period_nodes(k);
    let nn = nodes.len();
    let integrand = |z: C64| -> Vec<C64> {
        let fz = f(z);
        let mut out = Vec::with_capacity(p * nn);
        for &t in &nodes {
            let ker = (t - z).powi(k as i32);
            out.extend(fz.iter().map(|v| v * ker));
        }
        out
    };
    let nu = min_frequency(ty);
    let cc = (g.c as f64).powi(2);
    let w = ty.weight_f64();
    let path = [
        Segment::FromCusp { x: x0, height: 1.0, decay: Decay { rate: 2.0 * PI * nu / cc, degree: w } },
        Segment::ToInfinity { from: C64::new(x0, 1.0), decay: Decay { rate: 2.0 * PI * nu, degree: k as f64 } },
    ];
    let res = contour_integrate_vec(&integrand, p * nn, &path, tol)?;
    let values: Vec<CVector> = (0..nn).map(|j| CVector::from_fn(p, |a, _| res.value[j * p + a])).collect();
    checked_period(*g, &nodes, &values, k)
}

/// `∫_τ^{i∞} f(z)(τ̄−z)^k dz` on the vertical ray.
fn nonhol_integral(f: &dyn Fn(C64) -> CVector, ty: &FormType, k: usize, tau: C64, tol: f64) -> Result<CVector> {
    let p = ty.dim();
    let tb = tau.conj();
    let integrand = |z: C64| -> Vec<C64> {
        let ker = (tb - z).powi(k as i32);
        f(z).iter().map(|v| v * ker).collect()
    };
    let decay = Decay { rate: 2.0 * PI * min_frequency(ty), degree: k as f64 };
    let res = contour_integrate_vec(&integrand, p, &[Segment::ToInfinity { from: tau, decay }], tol)?;
    Ok(CVector::from_vec(res.value))
}

/// `E^N(τ) = (1/c_{k+2})·conj(∫_τ^{i∞} f(z)(τ̄−z)^k dz)`.
pub fn eichler_nonholo(f: &dyn Fn(C64) -> CVector, ty: &FormType, k: usize, tau: C64, tol: f64) -> Result<CVector> {
    check_k(ty, k)?;
    let v = nonhol_integral(f, ty, k, tau, tol)?;
    Ok(v.map(|z| z.conj()) / c_const(k + 2))
}

/// `r^N(f,γ;τ) = c_{k+2}(E^N − E^N|_{−k,χ̄,ρ̄}γ)(τ)` from the definition of
/// `E^N`, at the nodes, then fitted. The result is a polynomial in `τ`.
pub fn period_nonhol(f: &dyn Fn(C64) -> CVector, ty: &FormType, g: &GroupElement, k: usize, tol: f64) -> Result<PeriodPolynomial> {
    check_k(ty, k)?;
    let p = ty.dim();
    if g.c == 0 {
        return Ok(PeriodPolynomial { gamma: *g, polys: PolyVector::zero(p, k), residual: 0.0 });
    }
    let ty_n = ty.conj()?.with_weight(Q::from_integer(-(k as i64)))?;
    // c_{k+2}E^N = conj of the integral.
    let ce = |t: C64| -> Result<CVector> { Ok(nonhol_integral(f, ty, k, t, tol)?.map(|z| z.conj())) };
    let nodes = period_nodes(k);
    let mut values = Vec::with_capacity(nodes.len());
    for &t in &nodes {
        let at_g = ce(g.act(t))?;
        let slashed = vv_slash_eval(&|_| at_g.clone(), g, &ty_n, t);
        values.push(ce(t)? - slashed);
    }
    checked_period(*g, &nodes, &values, k)
}

/// `E^H = c_f + Σ a(n,j)((n+κ_j)/λ)^{−(k+1)} e^{2πi(n+κ_j)τ/λ} e_j`.
#[derive(Clone, Debug)]
pub struct EichlerIntegralSeries {
    /// Type of the source form, weight `k + 2`.
    pub ty: FormType,
    pub k: usize,
    pub components: Vec<FourierSeries>,
    pub c_f: CVector,
}

impl EichlerIntegralSeries {
    /// `eichler_holo`.
    pub fn new(f: &VVForm, k: usize, c_f: Option<CVector>) -> Result<Self> {
        check_k(&f.ty, k)?;
        let p = f.dim();
        let c_f = c_f.unwrap_or_else(|| CVector::zeros(p));
        if c_f.len() != p {
            return input("c_f has the wrong length");
        }
        let mut components = Vec::with_capacity(p);
        for comp in &f.components {
            let mut out = comp.clone();
            for (&n, a) in out.coeffs.iter_mut() {
                let nu = comp.frequency(n);
                if nu == 0.0 {
                    if !a.is_zero() {
                        return input(format!("coefficient at frequency 0 (n = {n}) has no Eichler integral"));
                    }
                    continue;
                }
                *a *= cpow(C64::new(nu, 0.0), -((k + 1) as f64));
            }
            components.push(out);
        }
        Ok(Self { ty: f.ty.clone(), k, components, c_f })
    }

    /// The Eichler integral of a weakly holomorphic Poincaré combination:
    /// coefficients extracted at height ½ (enough for evaluation at
    /// `Im τ ≥ ½`), `c_f` summed to `cmax`.
    pub fn from_weakly_holomorphic(ps: &PoincareSeries, k: usize, cmax: i64) -> Result<Self> {
        let form = weak_expansion(ps)?;
        let cf = cf_constant(&form, cmax)?;
        Self::new(&form, k, Some(cf.value))
    }

    pub fn eval(&self, tau: C64) -> CVector {
        let p = self.components.len();
        CVector::from_iterator(p, self.components.iter().map(|s| s.eval(tau))) + &self.c_f
    }

    /// `c_{k+2}(E^H − E^H|_{−k,χ,ρ}γ)(τ)`.
    pub fn period_at(&self, g: &GroupElement, tau: C64) -> Result<CVector> {
        let ty = self.ty.with_weight(Q::from_integer(-(self.k as i64)))?;
        let slashed = vv_slash_eval(&|t| self.eval(t), g, &ty, tau);
        Ok((self.eval(tau) - slashed) * c_const(self.k + 2))
    }

    /// The series route to `r^H(γ)`. Needs `Im γτ_j ≥ ½` at every node,
    /// which holds for `S` and `TS`.
    pub fn period(&self, g: &GroupElement) -> Result<PeriodPolynomial> {
        let nodes = period_nodes(self.k);
        if nodes.iter().any(|&t| g.act(t).im < 0.5 - 1e-12) {
            return input(format!("{g:?} moves a node below height 1/2, outside the series' reach"));
        }
        let ty = self.ty.with_weight(Q::from_integer(-(self.k as i64)))?;
        let cc = c_const(self.k + 2).norm();
        let mut values = Vec::with_capacity(nodes.len());
        let mut terms: f64 = 0.0;
        for &t in &nodes {
            let here = self.eval(t);
            let slashed = vv_slash_eval(&|u| self.eval(u), g, &ty, t);
            terms = terms.max(cc * max_abs(here.as_slice()).max(max_abs(slashed.as_slice())));
            values.push((here - slashed) * c_const(self.k + 2));
        }
        // The difference may cancel almost completely (for instance when the
        // period vanishes), so the fit is judged against the size of the
        // two terms rather than of the difference.
        let (polys, rel) = fit_nodes(&nodes, &values, self.k)?;
        let size = values.iter().map(|v| max_abs(v.as_slice())).fold(0.0, f64::max);
        let residual = if terms > 0.0 { rel * size.max(f64::MIN_POSITIVE) / terms } else { rel };
        if residual > FIT_TOL {
            return Err(Error::Verification(format!(
                "period for {g:?} is not a polynomial of degree ≤ {} (residual {residual:.3e})",
                self.k
            )));
        }
        Ok(PeriodPolynomial { gamma: *g, polys, residual })
    }
}

/// Coefficients of a cusp-form Poincaré combination for fast evaluation in
/// the fundamental domain: `0 ≤ n ≤ 15` extracted at height 0.85, just
/// below the domain, so errors do not grow where the series is used.
/// Non-positive frequencies are checked to vanish and dropped.
pub fn cusp_expansion(ps: &PoincareSeries) -> Result<VVForm> {
    let form = ps.fourier(0..=15, 0.85, Some(48))?;
    let scale = form
        .components
        .iter()
        .flat_map(|c| c.coeffs.values().map(|z| z.norm()))
        .fold(0.0, f64::max);
    let mut comps = Vec::with_capacity(form.dim());
    for comp in form.components {
        let mut out = FourierSeries::zero(comp.width, comp.kappa);
        for (&n, &a) in &comp.coeffs {
            if comp.frequency(n) > 0.0 {
                out.coeffs.insert(n, a);
            } else if a.norm() > 1e-8 * scale {
                return Err(Error::Verification(format!("cusp combination has a(n={n}) = {a} at frequency ≤ 0")));
            }
        }
        comps.push(out);
    }
    VVForm::new(form.ty, comps, FormKind::Cusp)
}

/// Coefficients of a weakly holomorphic Poincaré combination from the
/// lowest seed up to 48 terms, extracted at height ½. Zero-frequency
/// coefficients are checked to vanish (up to `1e−10` of the sampled values)
/// and dropped.
pub fn weak_expansion(ps: &PoincareSeries) -> Result<VVForm> {
    let n_min = ps
        .specs
        .iter()
        .map(|s| (s.nu - ps.ty.kappa.get(s.alpha)).to_integer())
        .min()
        .unwrap_or(0)
        .min(0);
    let form = ps.fourier(n_min..=n_min + 47, 0.5, Some(96))?;
    // Extraction noise is relative to the size of the samples, not to the
    // coefficients.
    let sampled = form
        .components
        .iter()
        .flat_map(|c| c.coeffs.iter().map(|(&n, z)| z.norm() * (-2.0 * PI * c.frequency(n) * 0.5).exp()))
        .fold(0.0, f64::max);
    let mut comps = Vec::with_capacity(form.dim());
    for comp in form.components {
        let mut out = comp.clone();
        for (&n, &a) in &comp.coeffs {
            if comp.frequency(n) == 0.0 {
                if a.norm() > 1e-10 * sampled {
                    return Err(Error::Verification(format!("constant term {a} does not vanish")));
                }
                out.coeffs.remove(&n);
            }
        }
        comps.push(out);
    }
    VVForm::new(form.ty, comps, FormKind::WeaklyHolomorphic)
}

/// Value of a generalized Poincaré series with its partial sum over
/// `c ≤ C/2`.
#[derive(Clone, Debug)]
pub struct GenPoincareValue {
    pub value: CVector,
    pub half: CVector,
}

impl GenPoincareValue {
    pub fn truncation_estimate(&self) -> f64 {
        max_abs((&self.value - &self.half).as_slice())
    }
}

/// Adds `Σ_j g_V|T^j(τ)/(c(τ+j)+d)^r` with `g_V|T^j(τ) = D^{−j}g_V(τ+j)`,
/// `D = diag(e^{2πiκ})`, summing outward until the terms are negligible.
fn class_sum(acc: &mut [CompensatedSum], gv: &PolyVector, kappa: &[f64], c: i64, d: i64, r: i32, tau: C64) {
    let term = |j: i64| -> CVector {
        let u = tau + j as f64;
        let den = (u * c as f64 + d as f64).powi(r);
        let mut v = gv.eval(u) / den;
        for (a, x) in v.iter_mut().enumerate() {
            *x *= e_real(-kappa[a] * j as f64);
        }
        v
    };
    let add = |acc: &mut [CompensatedSum], v: &CVector| {
        for (s, x) in acc.iter_mut().zip(v.iter()) {
            s.add(*x);
        }
    };
    let t0 = term(0);
    let mut peak = max_abs(t0.as_slice());
    add(acc, &t0);
    for dir in [1i64, -1] {
        let mut j = dir;
        loop {
            let t = term(j);
            let tn = max_abs(t.as_slice());
            add(acc, &t);
            peak = peak.max(tn);
            if j.abs() > 4 && tn <= 1e-18 * peak {
                break;
            }
            j += dir;
        }
    }
}

/// `Σ_{V ∈ ℒ} g_V(τ)/(cτ+d)^r` over one `V` for each lower row `(c,d)`.
///
/// The rows are enumerated as `±V T^j` with `V` running over
/// [`coset_reps`] (`0 < c ≤ C`, `d mod c`) and `j ∈ ℤ`, plus `±I`. Since
/// `g_T = 0`, `g_{T^nV} = g_V`, so the terms do not depend on the chosen
/// representatives.
pub fn gen_poincare_eval(cocycle: &Cocycle, r: u32, tau: C64, cmax: i64) -> Result<GenPoincareValue> {
    if r % 2 != 0 || r < 10 {
        return input(format!("r = {r} must be even and at least 10"));
    }
    if tau.im <= 0.0 {
        return input("τ must lie in the upper half-plane");
    }
    if cocycle.t.max_coeff() != 0.0 {
        return Err(Error::Precondition("the cocycle must vanish on T".into()));
    }
    let p = cocycle.dim();
    let kappa = cocycle.ty.kappa.as_f64();
    let mut acc = vec![CompensatedSum::new(); p];
    // Lower rows (0, ±1): g_I = 0 and (−1)^r = 1.
    let gm = cocycle.extend(&GroupElement::MINUS_I).eval(tau);
    for (s, x) in acc.iter_mut().zip(gm.iter()) {
        s.add(*x);
    }
    let ext = cocycle.extender();
    let mut half = None;
    for v in coset_reps(cmax).iter().skip(1) {
        if half.is_none() && v.c > cmax / 2 {
            half = Some(acc.iter().map(|a| a.value()).collect::<Vec<_>>());
        }
        for g in [*v, v.neg()] {
            let gv = ext.extend(&g);
            class_sum(&mut acc, &gv, &kappa, g.c, g.d, r as i32, tau);
        }
    }
    let value: Vec<C64> = acc.iter().map(|a| a.value()).collect();
    let half = half.unwrap_or_else(|| value.clone());
    let out = GenPoincareValue { value: CVector::from_vec(value), half: CVector::from_vec(half) };
    if out.truncation_estimate() > 1e-4 * max_abs(out.value.as_slice()).max(1.0) {
        log::warn!("gen_poincare_eval: C and C/2 sums differ by {:.3e}", out.truncation_estimate());
    }
    Ok(out)
}
