//! Vector-valued modular forms for `SL(2,ℤ)`: form types, slash action,
//! evaluation through the fundamental domain, Poincaré series, supplementary
//! data and the constant `c_f`.

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::group::{coset_reps, mod_inverse, reduce_to_fundamental, GroupElement};
use crate::multiplier::{basis, kappa_diag, KappaDiagonal, MultiplierSystem, UnitaryRep};
use crate::numeric::fourier::{fourier_extract_vec, FourierSeries};
use crate::numeric::linalg::{CMatrix, CVector};
use crate::numeric::scalar::{complex_pair, cpow, e, e_real, q_to_f64, rational_str, CompensatedSum, C64, Q};

/// Weight, multiplier and representation, with the cusp exponents they
/// determine.
#[derive(Clone, Debug)]
pub struct FormType {
    pub weight: Q,
    pub chi: MultiplierSystem,
    pub rho: UnitaryRep,
    pub kappa: KappaDiagonal,
}

impl FormType {
    /// The multiplier is re-based to `weight` (an integral shift).
    pub fn new(weight: Q, chi: &MultiplierSystem, rho: UnitaryRep) -> Result<Self> {
        let chi = chi.with_weight(weight)?;
        let kappa = kappa_diag(&chi, &rho, &GroupElement::T)?;
        Ok(Self { weight, chi, rho, kappa })
    }

    /// Scalar forms of even weight with trivial multiplier.
    pub fn scalar(weight: i64) -> Result<Self> {
        let w = Q::from_integer(weight);
        Self::new(w, &MultiplierSystem::trivial(w)?, UnitaryRep::trivial(1))
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    pub fn weight_f64(&self) -> f64 {
        q_to_f64(self.weight)
    }

    /// Same weight, conjugate multiplier and representation.
    pub fn conj(&self) -> Result<Self> {
        Self::new(self.weight, &self.chi.conj(), self.rho.conj())
    }

    /// Same multiplier and representation at another weight.
    pub fn with_weight(&self, weight: Q) -> Result<Self> {
        Self::new(weight, &self.chi, self.rho.clone())
    }

    /// `χ(γ)(cτ+d)^w ρ(γ)`.
    pub fn automorphy(&self, g: &GroupElement, tau: C64) -> CMatrix {
        self.rho.eval(g) * (self.chi.eval(g) * cpow(g.j(tau), self.weight_f64()))
    }

    /// The factor `μ` with `term(−γ) = μ·term(γ)` before `ρ(−I)⁻¹` is applied:
    /// `μ = χ(−I)⁻¹e^{−iπw}`.
    fn minus_identity_factor(&self) -> C64 {
        let chi_m = self.chi.eval(&GroupElement::MINUS_I);
        C64::from_polar(1.0, -PI * self.weight_f64()) / chi_m
    }

    /// `½(I + μρ(−I)⁻¹)`: averaging over `±γ`.
    pub fn pm_average(&self) -> CMatrix {
        let p = self.dim();
        let rm = self.rho.eval(&GroupElement::MINUS_I).adjoint();
        (CMatrix::identity(p, p) + rm * self.minus_identity_factor()) * C64::new(0.5, 0.0)
    }
}

/// `(f|_{w,χ,ρ}γ)(τ) = χ(γ)⁻¹(cτ+d)^{−w}ρ(γ)⁻¹f(γτ)`.
pub fn vv_slash_eval(f: &dyn Fn(C64) -> CVector, g: &GroupElement, ty: &FormType, tau: C64) -> CVector {
    let rho_inv = ty.rho.eval(g).adjoint();
    let scal = C64::one() / (ty.chi.eval(g) * cpow(g.j(tau), ty.weight_f64()));
    rho_inv * f(g.act(tau)) * scal
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormKind {
    Cusp,
    Holomorphic,
    WeaklyHolomorphic,
}

/// A vector-valued form known through truncated Fourier expansions of its
/// components at `i∞`. Evaluation first moves `τ` into the fundamental
/// domain.
#[derive(Clone, Debug)]
pub struct VVForm {
    pub ty: FormType,
    pub components: Vec<FourierSeries>,
    pub kind: FormKind,
}

impl VVForm {
    pub fn new(ty: FormType, components: Vec<FourierSeries>, kind: FormKind) -> Result<Self> {
        if components.len() != ty.dim() {
            return input(format!("{} components for a rep of dimension {}", components.len(), ty.dim()));
        }
        for (j, comp) in components.iter().enumerate() {
            if comp.kappa != ty.kappa.get(j) {
                return input(format!("component {j} has κ = {} but the type has {}", comp.kappa, ty.kappa.get(j)));
            }
        }
        Ok(Self { ty, components, kind })
    }

    /// Direct evaluation of the truncated series.
    pub fn eval_series(&self, tau: C64) -> CVector {
        CVector::from_iterator(self.components.len(), self.components.iter().map(|s| s.eval(tau)))
    }

    /// `f(τ) = (χ(γ)(cτ+d)^wρ(γ))⁻¹ f(γτ)` with `γτ` in the fundamental domain.
    pub fn eval(&self, tau: C64) -> CVector {
        eval_reduced(&|t| self.eval_series(t), &self.ty, tau, 0.8)
    }

    /// Largest `|a(n)|` among terms with `n + κ ≤ 0` (zero for cusp forms).
    pub fn nonpositive_part(&self) -> f64 {
        let mut out: f64 = 0.0;
        for comp in &self.components {
            for (&n, a) in &comp.coeffs {
                if comp.frequency(n) <= 0.0 {
                    out = out.max(a.norm());
                }
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }
}

/// Evaluates an automorphic evaluator `f` at `τ` by moving to the
/// fundamental domain whenever `Im τ < min_height`.
pub fn eval_reduced(f: &dyn Fn(C64) -> CVector, ty: &FormType, tau: C64, min_height: f64) -> CVector {
    if tau.im >= min_height {
        return f(tau);
    }
    let (g, tf) = reduce_to_fundamental(tau);
    // The automorphy factor is χ(cτ+d)^w times a unitary matrix.
    let scal = ty.chi.eval(&g) * cpow(g.j(tau), ty.weight_f64());
    ty.rho.eval(&g).adjoint() * f(tf) / scal
}

#[derive(Serialize, Deserialize)]
struct VVFormJson {
    #[serde(with = "rational_str")]
    weight: Q,
    multiplier: MultiplierSystem,
    rep: UnitaryRep,
    kind: FormKind,
    components: Vec<FourierSeries>,
}

impl Serialize for VVForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        VVFormJson {
            weight: self.ty.weight,
            multiplier: self.ty.chi.clone(),
            rep: self.ty.rho.clone(),
            kind: self.kind,
            components: self.components.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for VVForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = VVFormJson::deserialize(d)?;
        let ty = FormType::new(raw.weight, &raw.multiplier, raw.rep).map_err(D::Error::custom)?;
        VVForm::new(ty, raw.components, raw.kind).map_err(D::Error::custom)
    }
}

/// One Poincaré series `b·P_{ν,α}` with its seed `e^{2πiντ}e_α`. The label
/// `n` is kept for bookkeeping; the signed frequency `ν` drives evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoincareSpec {
    pub n: i64,
    pub alpha: usize,
    #[serde(with = "complex_pair")]
    pub b: C64,
    #[serde(with = "rational_str")]
    pub nu: Q,
}

impl PoincareSpec {
    /// Cusp seed of frequency `ν = n + κ_α > 0`.
    pub fn cusp(n: i64, alpha: usize, b: C64, kappa: &KappaDiagonal) -> Result<Self> {
        if alpha >= kappa.len() {
            return input(format!("component index {alpha} out of range"));
        }
        let nu = Q::from_integer(n) + kappa.get(alpha);
        if nu <= Q::zero() {
            return input(format!("n + κ_α = {nu} is not positive"));
        }
        Ok(Self { n, alpha, b, nu })
    }

    /// Polar seed `e^{2πi(−n+κ_α)τ}`, `−n + κ_α < 0`.
    pub fn polar(n: i64, alpha: usize, b: C64, kappa: &KappaDiagonal) -> Result<Self> {
        if alpha >= kappa.len() {
            return input(format!("component index {alpha} out of range"));
        }
        let nu = Q::from_integer(-n) + kappa.get(alpha);
        if nu >= Q::zero() {
            return input(format!("−n + κ_α = {nu} is not negative"));
        }
        Ok(Self { n, alpha, b, nu })
    }

    pub fn nu_f64(&self) -> f64 {
        q_to_f64(self.nu)
    }
}

/// Data of `f*` from that of `f`: each `(n, α, b)` becomes `(n′, α, b̄)` with
/// `n′ = −n` if `κ_α = 0` and `1 − n` otherwise, and the seed frequency is
/// negated, so `f*` has principal part `Σ b̄ e^{−2πiντ}e_α` against `χ̄, ρ̄`.
pub fn supplementary_data(specs: &[PoincareSpec], kappa: &KappaDiagonal) -> Vec<PoincareSpec> {
    specs
        .iter()
        .map(|s| {
            let n = if kappa.get(s.alpha).is_zero() { -s.n } else { 1 - s.n };
            PoincareSpec { n, alpha: s.alpha, b: s.b.conj(), nu: -s.nu }
        })
        .collect()
}

/// Coefficients `c_p(z)` of `1/(1 − z e^t) = Σ c_p t^p`.
fn lerch_coeffs(z: C64, count: usize) -> Vec<C64> {
    let mut out = vec![C64::one() / (C64::one() - z)];
    let ratio = z / (C64::one() - z);
    let mut inv_fact = vec![1.0f64];
    for i in 1..=count {
        inv_fact.push(inv_fact[i - 1] / i as f64);
    }
    for p in 1..=count {
        let mut acc = C64::zero();
        for i in 1..=p {
            acc += out[p - i] * inv_fact[i];
        }
        out.push(ratio * acc);
    }
    out
}

/// Even Bernoulli numbers `B_2, B_4, …, B_{2·count}`.
fn bernoulli_even(count: usize) -> Vec<f64> {
    // Akiyama–Tanigawa on exact rationals.
    let n = 2 * count;
    let mut a: Vec<num_rational::BigRational> = Vec::with_capacity(n + 1);
    let mut b = Vec::with_capacity(n + 1);
    for m in 0..=n {
        a.push(num_rational::BigRational::new(1.into(), ((m + 1) as i64).into()));
        for j in (1..=m).rev() {
            let diff = &a[j - 1] - &a[j];
            a[j - 1] = diff * num_rational::BigRational::from_integer((j as i64).into());
        }
        b.push(a[0].clone());
    }
    (1..=count)
        .map(|k| num_traits::ToPrimitive::to_f64(&b[2 * k]).unwrap())
        .collect()
}

/// Tail sums `Σ_{n≥0} zⁿ (n+q)^{−s}` for one fixed `z`, by the asymptotic
/// expansion in `1/q` (Euler–Maclaurin when `z = 1`).
#[derive(Clone, Debug)]
struct LerchTail {
    z_is_one: bool,
    coeffs: Vec<C64>,
}

const LERCH_TERMS: usize = 60;

impl LerchTail {
    fn new(z: C64, is_one: bool) -> Self {
        if is_one {
            let b = bernoulli_even(LERCH_TERMS / 2);
            // coeffs[p] = B_{2p}/(2p)!
            let mut out = vec![C64::zero()];
            let mut fact = 1.0f64;
            for (i, bi) in b.iter().enumerate() {
                let k = 2 * (i + 1);
                fact *= ((k - 1) * k) as f64;
                out.push(C64::new(bi / fact, 0.0));
            }
            Self { z_is_one: true, coeffs: out }
        } else {
            Self { z_is_one: false, coeffs: lerch_coeffs(z, LERCH_TERMS) }
        }
    }

    fn sum(&self, s: f64, q: C64) -> C64 {
        let qs = cpow(q, -s);
        let inv_q = C64::one() / q;
        if self.z_is_one {
            let mut acc = q * qs / (s - 1.0) + qs * 0.5;
            // Σ B_{2p}/(2p)!·(s)_{2p−1}·q^{−s−2p+1}
            let mut poch = s; // (s)_1
            let mut qpow = qs * inv_q; // q^{−s−1}
            let mut last = f64::INFINITY;
            let mut small = 0;
            for p in 1..self.coeffs.len() {
                let term = self.coeffs[p] * poch * qpow;
                if !asym_step(&mut acc, term, &mut last, &mut small) {
                    break;
                }
                let k = 2 * p - 1;
                poch *= (s + k as f64) * (s + (k + 1) as f64);
                qpow *= inv_q * inv_q;
            }
            acc
        } else {
            let mut acc = C64::zero();
            let mut poch = 1.0; // (−1)^p (s)_p
            let mut qpow = qs;
            let mut last = f64::INFINITY;
            let mut small = 0;
            for (p, cp) in self.coeffs.iter().enumerate() {
                let term = cp * poch * qpow;
                if !asym_step(&mut acc, term, &mut last, &mut small) {
                    break;
                }
                poch *= -(s + p as f64);
                qpow *= inv_q;
            }
            acc
        }
    }
}

/// One step of an asymptotic series: stops at the smallest term or once two
/// consecutive terms are negligible. Some coefficients vanish (up to
/// rounding), so negligible terms neither bound the next one nor end the sum
/// on their own.
fn asym_step(acc: &mut C64, term: C64, last: &mut f64, small: &mut u32) -> bool {
    let tn = term.norm();
    let floor = 1e-17 * acc.norm();
    if tn <= floor {
        *acc += term;
        *small += 1;
        return *small < 2;
    }
    *small = 0;
    if tn > *last {
        return false;
    }
    *acc += term;
    *last = tn;
    true
}

struct ComponentData {
    z: C64,
    z_inv: C64,
    /// Direct terms `|j| ≤ j_max`.
    j_max: i64,
    up: LerchTail,
    down: LerchTail,
}

struct ClassData {
    c: i64,
    d: i64,
    /// `b·e(ν a/c)·χ(γ₀)⁻¹ρ(γ₀)⁻¹ê_α`, one per spec.
    vectors: Vec<CVector>,
}

/// Result of a truncated Poincaré evaluation.
#[derive(Clone, Debug)]
pub struct PoincareValue {
    pub value: CVector,
    /// The partial sum over `c ≤ C/2`.
    pub half: CVector,
}

impl PoincareValue {
    pub fn truncation_estimate(&self) -> f64 {
        (&self.value - &self.half).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// A finite combination `Σ b_i P_{ν_i,α_i}` of Poincaré series of one type,
/// truncated at `c ≤ C`, with per-coset data precomputed.
///
/// Each coset `⟨T⟩γ₀` with `c > 0` is expanded over right translates
/// `γ₀T^j`, using `χ(γ₀T^j)ρ(γ₀T^j) = χ(γ₀)ρ(γ₀)·diag(e^{2πiκ})^j`. The
/// `j`-sum is taken exactly for `|j| ≤ J` and by asymptotic tails beyond.
pub struct PoincareSeries {
    pub ty: FormType,
    pub specs: Vec<PoincareSpec>,
    pub cmax: i64,
    classes: Vec<ClassData>,
    comps: Vec<ComponentData>,
    pm: CMatrix,
}

impl PoincareSeries {
    pub fn new(ty: &FormType, specs: &[PoincareSpec], cmax: i64) -> Result<Self> {
        let w = ty.weight_f64();
        if w <= 2.0 {
            return Err(Error::Precondition(format!("weight {w} ≤ 2: Poincaré series need not converge")));
        }
        if specs.is_empty() {
            return input("empty Poincaré combination");
        }
        let p = ty.dim();
        for s in specs {
            if s.alpha >= p {
                return input(format!("component index {} out of range", s.alpha));
            }
            let offset = s.nu - ty.kappa.get(s.alpha);
            if !offset.is_integer() {
                return input(format!("frequency {} not in ℤ + κ_α", s.nu));
            }
        }
        let pm = ty.pm_average();
        let reps = coset_reps(cmax);
        let mut classes = Vec::with_capacity(reps.len());
        for g in reps.iter().skip(1) {
            let rinv = ty.rho.eval(g).adjoint() / ty.chi.eval(g);
            let vectors = specs
                .iter()
                .map(|s| {
                    let phase = e_real(s.nu_f64() * g.a as f64 / g.c as f64);
                    &rinv * (&pm * basis(p, s.alpha)) * (s.b * phase)
                })
                .collect();
            classes.push(ClassData { c: g.c, d: g.d, vectors });
        }
        let comps = ty
            .kappa
            .as_f64()
            .into_iter()
            .map(|k| {
                let z = e_real(-k);
                let dist = k.min(1.0 - k);
                let is_one = dist == 0.0;
                let delta = if is_one { 2.0 * PI } else { 2.0 * PI * dist };
                let j_max = ((2.0 * (w + 12.0) / delta).ceil() as i64).clamp(8, 1000);
                ComponentData {
                    z,
                    z_inv: z.conj(),
                    j_max,
                    up: LerchTail::new(z, is_one),
                    down: LerchTail::new(z.conj(), is_one),
                }
            })
            .collect();
        Ok(Self { ty: ty.clone(), specs: specs.to_vec(), cmax, classes, comps, pm })
    }

    pub fn dim(&self) -> usize {
        self.ty.dim()
    }

    /// Sum over `j ∈ ℤ` of `z^j G(τ+j)` for `G(u) = e^{y/t}(ct)^{−w}`,
    /// `t = u + d/c`, `y = −2πiν/c²`.
    fn j_sum(&self, comp: &ComponentData, g_vals: &[C64], jm: i64, c: i64, shift: C64, nu: f64) -> C64 {
        let w = self.ty.weight_f64();
        let mut acc = CompensatedSum::new();
        // Direct part, symmetric order.
        let centre = jm as usize;
        let mut zp = C64::one();
        let mut zn = C64::one();
        acc.add(g_vals[centre]);
        for j in 1..=comp.j_max as usize {
            zp *= comp.z;
            zn *= comp.z_inv;
            acc.add(zp * g_vals[centre + j] + zn * g_vals[centre - j]);
        }
        // Tails: e^{y/t} = Σ_r y^r t^{−r}/r!
        let cf = c as f64;
        let y = C64::new(0.0, -2.0 * PI * nu / (cf * cf));
        let big_j = comp.j_max as f64 + 1.0;
        let q_up = shift + big_j;
        let q_dn = -shift + big_j;
        let z_up = comp.z.powf(big_j);
        let z_dn = comp.z_inv.powf(big_j);
        let scale = cf.powf(-w);
        let mut yr = C64::one();
        let mut tail = C64::zero();
        let bound = y.norm() / q_up.norm().min(q_dn.norm());
        for r in 0..40usize {
            if r > 0 {
                yr *= y / r as f64;
            }
            let s = w + r as f64;
            let up = z_up * comp.up.sum(s, q_up);
            let dn = z_dn * comp.down.sum(s, q_dn) * C64::from_polar(1.0, -PI * s);
            let term = yr * (up + dn);
            tail += term;
            if bound.powi(r as i32 + 1) < 1e-18 {
                break;
            }
        }
        acc.add(tail * scale);
        acc.value()
    }

    fn eval_inner(&self, tau: C64) -> PoincareValue {
        let p = self.dim();
        let w = self.ty.weight_f64();
        let mut total: Vec<CompensatedSum> = vec![CompensatedSum::new(); p];
        for s in &self.specs {
            let seed = &self.pm * basis(p, s.alpha) * (s.b * e(tau * s.nu_f64()));
            for (acc, v) in total.iter_mut().zip(seed.iter()) {
                acc.add(*v);
            }
        }
        let jm = self.comps.iter().map(|c| c.j_max).max().unwrap_or(8);
        let mut half: Option<Vec<C64>> = None;
        let mut g_vals = vec![C64::zero(); (2 * jm + 1) as usize];
        for cls in &self.classes {
            if half.is_none() && cls.c > self.cmax / 2 {
                half = Some(total.iter().map(|a| a.value()).collect());
            }
            let cf = cls.c as f64;
            let shift = tau + cls.d as f64 / cf;
            for (si, s) in self.specs.iter().enumerate() {
                let nu = s.nu_f64();
                let y = C64::new(0.0, -2.0 * PI * nu / cf);
                for (idx, slot) in g_vals.iter_mut().enumerate() {
                    let j = idx as i64 - jm;
                    let v = (shift + j as f64) * cf;
                    *slot = (y / v).exp() * cpow(v, -w);
                }
                let vec = &cls.vectors[si];
                for (k, comp) in self.comps.iter().enumerate() {
                    if vec[k].norm() == 0.0 {
                        continue;
                    }
                    let sj = self.j_sum(comp, &g_vals, jm, cls.c, shift, nu);
                    total[k].add(vec[k] * sj);
                }
            }
        }
        let value: Vec<C64> = total.iter().map(|a| a.value()).collect();
        let half = half.unwrap_or_else(|| value.clone());
        PoincareValue { value: CVector::from_vec(value), half: CVector::from_vec(half) }
    }

    /// The truncated series at `τ`, summed directly.
    pub fn eval_direct(&self, tau: C64) -> PoincareValue {
        self.eval_inner(tau)
    }

    /// Value at `τ`; points below height 0.8 are first moved to the
    /// fundamental domain.
    pub fn eval(&self, tau: C64) -> CVector {
        eval_reduced(&|t| self.eval_inner(t).value, &self.ty, tau, 0.8)
    }

    /// Fourier coefficients over `n_range` by extraction at height `y`
    /// (through the fundamental domain when `y < 0.8`).
    pub fn fourier(&self, n_range: RangeInclusive<i64>, y: f64, samples: Option<usize>) -> Result<VVForm> {
        let f = |t: C64| -> Vec<C64> { self.eval(t).iter().cloned().collect() };
        let ex = fourier_extract_vec(&f, y, Q::one(), &self.ty.kappa.kappas, n_range, samples)?;
        let components = ex
            .into_iter()
            .zip(&self.ty.kappa.kappas)
            .map(|(x, &k)| FourierSeries::new(Q::one(), k, x.coeffs))
            .collect::<Result<Vec<_>>>()?;
        let kind = if self.specs.iter().all(|s| s.nu > Q::zero()) {
            FormKind::Cusp
        } else {
            FormKind::WeaklyHolomorphic
        };
        VVForm::new(self.ty.clone(), components, kind)
    }
}

/// `poincare_eval`: one seed, stagnation warning when `C` and `C/2` partial
/// sums differ by more than `10·tol`.
pub fn poincare_eval(spec: &PoincareSpec, ty: &FormType, tau: C64, cmax: i64, tol: f64) -> Result<(CVector, bool)> {
    let ps = PoincareSeries::new(ty, std::slice::from_ref(spec), cmax)?;
    let v = ps.eval_direct(tau);
    let stagnant = v.truncation_estimate() > 10.0 * tol;
    if stagnant {
        log::warn!("poincare_eval: C and C/2 partial sums differ by {:.3e}", v.truncation_estimate());
    }
    Ok((v.value, stagnant))
}

/// `poincare_fourier`: coefficients over `n_range` extracted at height 2.
pub fn poincare_fourier(spec: &PoincareSpec, ty: &FormType, cmax: i64, n_range: RangeInclusive<i64>) -> Result<VVForm> {
    PoincareSeries::new(ty, std::slice::from_ref(spec), cmax)?.fourier(n_range, 2.0, None)
}

/// `c_f` with its `C/2` partial sum.
#[derive(Clone, Debug)]
pub struct CfConstant {
    pub value: CVector,
    pub half: CVector,
}

/// The constant term of the holomorphic Eichler integral of a weakly
/// holomorphic form with a pole only at `i∞`:
///
/// `c_f = Σ_j δ_{κ_j,0} (1/(k+1)!) Σ_t Σ_{n+κ_t<0} Σ_{(a,c)} a(n,t)(−2πi/c)^{k+2}
///        χ(γ)⁻¹ ρ(γ⁻¹)_{j,t} e^{2πi(n+κ_t)a/c} e_j`
///
/// over `γ = [[a,b],[c,d]]` with `c > 0`, `0 ≤ a < c`, `gcd(a,c) = 1`.
pub fn cf_constant(form: &VVForm, cmax: i64) -> Result<CfConstant> {
    let ty = &form.ty;
    let w = ty.weight_f64();
    if w.fract() != 0.0 || w < 3.0 {
        return input("c_f needs integral weight k+2 ≥ 3");
    }
    let k = w as i64 - 2;
    let p = ty.dim();
    let mut principal = Vec::new();
    for (t, comp) in form.components.iter().enumerate() {
        for (&n, &a) in &comp.coeffs {
            if comp.frequency(n) < 0.0 && a.norm() > 0.0 {
                principal.push((t, comp.frequency(n), a));
            }
        }
    }
    let zero_rows: Vec<bool> = ty.kappa.kappas.iter().map(|k| k.is_zero()).collect();
    let mut fact = 1.0;
    for i in 2..=(k + 1) {
        fact *= i as f64;
    }
    let mut acc = vec![CompensatedSum::new(); p];
    let mut half = None;
    if !principal.is_empty() && zero_rows.iter().any(|&z| z) {
        for c in 1..=cmax {
            if half.is_none() && c > cmax / 2 {
                half = Some(acc.iter().map(|a| a.value()).collect::<Vec<_>>());
            }
            let pref = cpow(C64::new(0.0, -2.0 * PI / c as f64), (k + 2) as f64) / fact;
            for a in 0..c {
                if num_integer::gcd(a, c) != 1 {
                    continue;
                }
                let d = if c == 1 { 0 } else { mod_inverse(a, c) };
                let b = (a * d - 1) / c;
                let g = GroupElement::new(a, b, c, d)?;
                let m = ty.rho.eval(&g.inverse()) / ty.chi.eval(&g);
                for &(t, freq, coeff) in &principal {
                    let ph = e_real(freq * a as f64 / c as f64);
                    for j in 0..p {
                        if zero_rows[j] {
                            acc[j].add(pref * coeff * m[(j, t)] * ph);
                        }
                    }
                }
            }
        }
    }
    let value: Vec<C64> = acc.iter().map(|a| a.value()).collect();
    let half = half.unwrap_or_else(|| value.clone());
    Ok(CfConstant { value: CVector::from_vec(value), half: CVector::from_vec(half) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::scalar::c;

    #[test]
    fn bernoulli_numbers() {
        let b = bernoulli_even(4);
        let expect = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0];
        for (x, y) in b.iter().zip(expect) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn lerch_tail_against_direct_sum() {
        for (k, s) in [(0.0, 4.0), (1.0 / 24.0, 4.0), (19.0 / 24.0, 5.0), (0.5, 12.0)] {
            let z = e_real(-k);
            let tail = LerchTail::new(z, k == 0.0);
            let q = c(130.3, 0.7);
            let approx = tail.sum(s, q);
            let mut direct = CompensatedSum::new();
            for n in 0..4_000_000 {
                direct.add(z.powi(n) * cpow(q + n as f64, -s));
            }
            // Truncation of the direct sum is far below the tolerance for s ≥ 4 when z ≠ 1.
            let mut exact = direct.value();
            if k == 0.0 {
                exact += cpow(q + 4_000_000.0, 1.0 - s) / (s - 1.0);
            }
            let rel = (approx - exact).norm() / exact.norm();
            assert!(rel < 1e-9, "κ={k} s={s}: {approx} vs {exact} (rel {rel:.2e})");
        }
    }

    #[test]
    fn supplementary_rules() {
        let k0 = KappaDiagonal { kappas: vec![Q::zero()] };
        let s = PoincareSpec::cusp(1, 0, C64::one(), &k0).unwrap();
        let out = supplementary_data(&[s.clone()], &k0);
        assert_eq!(out[0].n, -1);
        assert_eq!(out[0].nu, Q::from_integer(-1));
        assert_eq!(supplementary_data(&out, &k0.conj())[0], s);
        let kp = KappaDiagonal { kappas: vec![Q::new(1, 24)] };
        let s = PoincareSpec::cusp(1, 0, c(0.0, 2.0), &kp).unwrap();
        let out = supplementary_data(&[s.clone()], &kp);
        assert_eq!(out[0].n, 0);
        assert_eq!(out[0].b, c(0.0, -2.0));
        assert_eq!(out[0].nu, Q::new(-25, 24));
        assert_eq!(supplementary_data(&out, &kp.conj())[0], s);
        assert!(supplementary_data(&[], &kp).is_empty());
    }

    #[test]
    fn weight_two_rejected() {
        let ty = FormType::scalar(2).unwrap();
        let spec = PoincareSpec::cusp(1, 0, C64::one(), &ty.kappa).unwrap();
        assert!(PoincareSeries::new(&ty, &[spec], 10).is_err());
    }

    #[test]
    fn delta_coefficient_ratios() {
        let ty = FormType::scalar(12).unwrap();
        let spec = PoincareSpec::cusp(1, 0, C64::one(), &ty.kappa).unwrap();
        let f = poincare_fourier(&spec, &ty, 60, 0..=4).unwrap();
        let a = |n| f.components[0].coeff(n);
        assert!(a(0).norm() < 1e-8 * a(1).norm());
        assert!((a(2) / a(1) - c(-24.0, 0.0)).norm() < 1e-4, "{}", a(2) / a(1));
        assert!((a(3) / a(1) - c(252.0, 0.0)).norm() < 1e-3, "{}", a(3) / a(1));
    }

    #[test]
    fn cf_scalar_weight_four() {
        let ty = FormType::scalar(4).unwrap();
        let mut coeffs = std::collections::BTreeMap::new();
        coeffs.insert(-1, C64::one());
        let comp = FourierSeries::new(Q::one(), Q::zero(), coeffs).unwrap();
        let f = VVForm::new(ty, vec![comp], FormKind::WeaklyHolomorphic).unwrap();
        let cf = cf_constant(&f, 400).unwrap();
        assert!((cf.value[0] - c(240.0, 0.0)).norm() < 1e-3, "{}", cf.value[0]);
    }
}
