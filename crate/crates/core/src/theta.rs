//! Theta series, the heat operator, Jacobi and skew-holomorphic slash
//! operators, and the theta expansion linking Jacobi forms of index `m` with
//! `2m`-dimensional vector-valued forms.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::group::JacobiElement;
use crate::multiplier::{weil_rep, MultiplierSystem};
use crate::numeric::fourier::FourierSeries;
use crate::numeric::linalg::{condition_number, solve, CMatrix, CVector};
use crate::numeric::scalar::{cpow, q_to_f64, rational_str, C64, I, Q};
use crate::vvform::{FormKind, FormType, VVForm};

/// `θ_{S,a,b}(τ,z) = Σ_λ e^{πiS((λ+a)²τ + 2(λ+a)(z+b))}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ThetaSeries {
    pub s: u32,
    pub a: Q,
    pub b: Q,
}

impl ThetaSeries {
    pub fn new(s: u32, a: Q, b: Q) -> Result<Self> {
        if s == 0 {
            return input("S must be a positive integer");
        }
        Ok(Self { s, a, b })
    }

    /// `θ_{2m,j/(2m),0}`.
    pub fn index(m: u32, j: usize) -> Self {
        Self { s: 2 * m, a: Q::new(j as i64, 2 * m as i64), b: Q::zero() }
    }
}

/// Terms are summed outward from the dominant one until they fall below
/// `1e−17` of the largest term on both sides.
pub fn theta_eval(th: &ThetaSeries, tau: C64, z: C64) -> C64 {
    theta_sum(th, tau, z, false)
}

/// `θ` without its `λ + a = 0` term, which is constant in `τ` and in `z`
/// when `b = 0`. Equals [`theta_eval`] when `a ∉ ℤ`. Differencing this
/// instead of `θ` keeps rounding proportional to the part that varies.
pub fn theta_eval_nonconstant(th: &ThetaSeries, tau: C64, z: C64) -> C64 {
    theta_sum(th, tau, z, true)
}

fn theta_sum(th: &ThetaSeries, tau: C64, z: C64, skip_zero: bool) -> C64 {
    let s = th.s as f64;
    let a = q_to_f64(th.a);
    let zb = z + q_to_f64(th.b);
    let term = |x: f64| {
        if skip_zero && x == 0.0 {
            C64::zero()
        } else {
            (I * PI * s * (tau * x * x + zb * (2.0 * x))).exp()
        }
    };
    // The real part of the exponent is maximal at x = −Im z / Im τ.
    let centre = (-z.im / tau.im - a).round() as i64;
    let mut sum = term(centre as f64 + a);
    let mut peak = sum.norm();
    for dir in [1i64, -1] {
        let mut l = centre + dir;
        loop {
            let t = term(l as f64 + a);
            sum += t;
            let tn = t.norm();
            peak = peak.max(tn);
            if tn < 1e-17 * peak {
                break;
            }
            l += dir;
        }
    }
    sum
}

/// `θ_{2m,a,0}(τ,z)` for all `a ∈ ℤ/2mℤ`.
pub fn theta_vector(m: u32, tau: C64, z: C64) -> CVector {
    let p = 2 * m as usize;
    CVector::from_iterator(p, (0..p).map(|j| theta_eval(&ThetaSeries::index(m, j), tau, z)))
}

/// `Σ_a f_a θ_{2m,a,0}(τ,z)`.
pub fn theta_combine(m: u32, f: &CVector, tau: C64, z: C64) -> C64 {
    theta_vector(m, tau, z).dot(f)
}

/// Finite-difference estimate of `L_m φ = 8πim ∂_τφ − ∂_z²φ`.
#[derive(Clone, Copy, Debug)]
pub struct HeatEstimate {
    pub value: C64,
    /// `|8πim ∂_τφ| + |∂_z²φ|`, the natural size of the two cancelling parts.
    pub scale: f64,
    /// Difference between Richardson extrapolants at `h` and `h/2`.
    pub error: f64,
}

/// Finite differences along the four directions `±h`, `±ih`, which for a
/// function holomorphic in both variables cancel the `h²` error term:
///
/// `f′ ≈ [f(x+h) − f(x−h) − i(f(x+ih) − f(x−ih))]/(4h)`,
/// `f″ ≈ [f(x+h) + f(x−h) − f(x+ih) − f(x−ih)]/(2h²)`,
///
/// both with error `O(h⁴)`, then Richardson-extrapolated at `h` and `h/2`.
/// The larger usable step keeps rounding small even where the derivatives
/// are tiny against the function value. The step is rejected when the
/// extrapolants at `h` and `h/2` disagree by more than `1e−7` of the scale.
pub fn heat_apply_fd(phi: &dyn Fn(C64, C64) -> C64, m: u32, tau: C64, z: C64, h: f64) -> Result<HeatEstimate> {
    if !(h > 0.0) || h >= tau.im {
        return input("step must be positive and below Im τ");
    }
    let d_tau = |h: f64| {
        let (hr, hi) = (C64::new(h, 0.0), C64::new(0.0, h));
        (phi(tau + hr, z) - phi(tau - hr, z) - I * (phi(tau + hi, z) - phi(tau - hi, z))) / (4.0 * h)
    };
    let d_zz = |h: f64| {
        let (hr, hi) = (C64::new(h, 0.0), C64::new(0.0, h));
        (phi(tau, z + hr) + phi(tau, z - hr) - phi(tau, z + hi) - phi(tau, z - hi)) / (2.0 * h * h)
    };
    let rich = |f: &dyn Fn(f64) -> C64, h: f64| (f(h / 2.0) * 16.0 - f(h)) / 15.0;
    let t1 = rich(&d_tau, h);
    let t2 = rich(&d_tau, h / 2.0);
    let z1 = rich(&d_zz, h);
    let z2 = rich(&d_zz, h / 2.0);
    let pref = C64::new(0.0, 8.0 * PI * m as f64);
    let scale = (pref * t2).norm() + z2.norm();
    let error = (pref * (t2 - t1)).norm() + (z2 - z1).norm();
    if error > 1e-7 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Convergence(format!(
            "heat_apply_fd: Richardson estimates disagree ({error:.3e} vs scale {scale:.3e}); change the step"
        )));
    }
    Ok(HeatEstimate { value: pref * t2 - z2, scale, error })
}

/// `(8πim)^{k+1}(d/dτ)^{k+1}` applied termwise to a Fourier series.
pub fn heat_power_series(f: &FourierSeries, m: u32, power: u32) -> FourierSeries {
    let pref = cpow(C64::new(0.0, 8.0 * PI * m as f64), power as f64);
    let coeffs = f
        .coeffs
        .iter()
        .map(|(&n, &a)| {
            let nu = f.frequency(n);
            (n, a * pref * cpow(C64::new(0.0, 2.0 * PI * nu), power as f64))
        })
        .collect();
    FourierSeries { width: f.width, kappa: f.kappa, coeffs }
}

/// Weight, index and multiplier of the Jacobi slash action, with the
/// multiplier rebased to the weight.
#[derive(Clone, Debug)]
pub struct SlashContext {
    pub weight: Q,
    pub m: u32,
    pub chi: MultiplierSystem,
}

impl SlashContext {
    pub fn new(weight: Q, m: u32, chi: &MultiplierSystem) -> Result<Self> {
        if m == 0 {
            return input("index m must be positive");
        }
        Ok(Self { weight, m, chi: chi.with_weight(weight)? })
    }

    /// `e^{2πim(−c(z+λτ+μ)²/(cτ+d) + λ²τ + 2λz)}` and the acted point.
    fn index_factor(&self, g: &JacobiElement, tau: C64, z: C64) -> (C64, (C64, C64)) {
        let gm = &g.gamma;
        let (l, mu) = (g.lambda() as f64, g.mu() as f64);
        let zs = z + tau * l + mu;
        let arg = -(zs * zs) * gm.c as f64 / gm.j(tau) + tau * (l * l) + z * (2.0 * l);
        let fac = (C64::new(0.0, 2.0 * PI * self.m as f64) * arg).exp();
        (fac, g.act(tau, z))
    }

    /// `(Φ|_{k,m,χ}γ|_m X)(τ,z)`.
    pub fn slash(&self, phi: &dyn Fn(C64, C64) -> C64, g: &JacobiElement, tau: C64, z: C64) -> C64 {
        let (fac, (t2, z2)) = self.index_factor(g, tau, z);
        let auto = self.chi.eval(&g.gamma) * cpow(g.gamma.j(tau), q_to_f64(self.weight));
        fac * phi(t2, z2) / auto
    }

    /// Skew-holomorphic slash: automorphy factor
    /// `χ̄(γ)(cτ̄+d)^{1−k}|cτ+d|^{−1}`.
    pub fn skew_slash(&self, phi: &dyn Fn(C64, C64) -> C64, g: &JacobiElement, tau: C64, z: C64) -> C64 {
        let (fac, (t2, z2)) = self.index_factor(g, tau, z);
        fac * phi(t2, z2) * self.skew_factor(g, tau)
    }

    /// `(cτ̄+d)^{1−k}` is read as the conjugate of `(cτ+d)^{1−k}`, so the
    /// factor is a conjugated automorphy factor even where `cτ+d` is a
    /// negative real.
    pub fn skew_factor(&self, g: &JacobiElement, tau: C64) -> C64 {
        let j = g.gamma.j(tau);
        (self.chi.eval(&g.gamma) * cpow(j, 1.0 - q_to_f64(self.weight))).conj() / j.norm()
    }
}

/// `jacobi_slash_eval`: the holomorphic slash at one point.
pub fn jacobi_slash_eval(
    phi: &dyn Fn(C64, C64) -> C64,
    g: &JacobiElement,
    weight: Q,
    m: u32,
    chi: &MultiplierSystem,
    tau: C64,
    z: C64,
) -> Result<C64> {
    Ok(SlashContext::new(weight, m, chi)?.slash(phi, g, tau, z))
}

/// `skew_slash_eval`: the skew-holomorphic slash at one point.
pub fn skew_slash_eval(
    phi: &dyn Fn(C64, C64) -> C64,
    g: &JacobiElement,
    weight: Q,
    m: u32,
    chi: &MultiplierSystem,
    tau: C64,
    z: C64,
) -> Result<C64> {
    Ok(SlashContext::new(weight, m, chi)?.skew_slash(phi, g, tau, z))
}

/// Jacobi weight, index, multiplier `χ`, and the weight-½ system `χ″`
/// entering `ρ′`. Determines the vector-valued type of the theta
/// components: weight `k − ½`, `χ′ = χχ̄″`, `ρ′`, conjugated for skew forms.
#[derive(Clone, Debug)]
pub struct JacobiType {
    pub weight: Q,
    pub m: u32,
    pub chi: MultiplierSystem,
    pub theta_chi: MultiplierSystem,
    pub skew: bool,
}

impl JacobiType {
    pub fn new(weight: Q, m: u32, chi: &MultiplierSystem, theta_chi: &MultiplierSystem, skew: bool) -> Result<Self> {
        if m == 0 {
            return input("index m must be positive");
        }
        if *weight.denom() != 2 {
            return input(format!("Jacobi weight {weight} is not a half-integer"));
        }
        Ok(Self {
            weight,
            m,
            chi: chi.with_weight(weight)?,
            theta_chi: theta_chi.with_weight(Q::new(1, 2))?,
            skew,
        })
    }

    /// `χ = χ″ = χ_η` at the given weight: then `χ′` is trivial.
    pub fn eta(weight: Q, m: u32, skew: bool) -> Result<Self> {
        let eta = MultiplierSystem::eta_power(1);
        Self::new(weight, m, &eta.with_weight(weight)?, &eta, skew)
    }

    pub fn dim(&self) -> usize {
        2 * self.m as usize
    }

    pub fn with_weight(&self, weight: Q) -> Result<Self> {
        Self::new(weight, self.m, &self.chi, &self.theta_chi, self.skew)
    }

    pub fn slash_context(&self) -> Result<SlashContext> {
        SlashContext::new(self.weight, self.m, &self.chi)
    }

    /// `(χ′, ρ′)` at weight `k − ½` (holomorphic), or their conjugates
    /// (skew).
    pub fn vv_type(&self) -> Result<FormType> {
        let w = self.weight - Q::new(1, 2);
        let chi1 = self.chi.product(&self.theta_chi.conj()).with_weight(w)?;
        let rho1 = weil_rep(self.m, &self.theta_chi)?;
        if self.skew {
            FormType::new(w, &chi1.conj(), rho1.conj())
        } else {
            FormType::new(w, &chi1, rho1)
        }
    }

    /// The holomorphic type whose slash the theta expansion intertwines
    /// with `|_{k,m,χ}`, whatever `skew` says.
    pub fn holomorphic_vv_type(&self) -> Result<FormType> {
        let mut t = self.clone();
        t.skew = false;
        t.vv_type()
    }
}

/// A (skew-)holomorphic Jacobi form through its theta components. For skew
/// forms the stored components are the conjugates `f̄_a`, so that they
/// always form a vector-valued form of the type [`JacobiType::vv_type`].
#[derive(Clone, Debug)]
pub struct JacobiFormData {
    pub jtype: JacobiType,
    pub form: VVForm,
}

impl JacobiFormData {
    pub fn new(jtype: JacobiType, components: Vec<FourierSeries>, kind: FormKind) -> Result<Self> {
        if components.len() != jtype.dim() {
            return input(format!("{} components for index {} (need {})", components.len(), jtype.m, jtype.dim()));
        }
        let form = VVForm::new(jtype.vv_type()?, components, kind)?;
        Ok(Self { jtype, form })
    }

    /// Wraps an existing vector-valued form of the matching type.
    pub fn from_vv(jtype: JacobiType, form: VVForm) -> Result<Self> {
        let ty = jtype.vv_type()?;
        if ty.weight != form.ty.weight || ty.kappa != form.ty.kappa || ty.dim() != form.dim() {
            return input("vector-valued form does not match the Jacobi type");
        }
        Ok(Self { jtype, form })
    }

    /// `f_a(τ)`, un-conjugated for skew forms.
    pub fn theta_components(&self, tau: C64) -> CVector {
        let v = self.form.eval(tau);
        if self.jtype.skew {
            v.map(|z| z.conj())
        } else {
            v
        }
    }

    pub fn eval(&self, tau: C64, z: C64) -> C64 {
        theta_combine(self.jtype.m, &self.theta_components(tau), tau, z)
    }

    /// Fourier coefficients `c(n, r)` of `Φ = Σ_n Σ_r c(n,r) qⁿ ζ^r` for
    /// holomorphic data, as a map from `(n, r)` with `n` rational.
    /// Only for validating data against known Jacobi expansions.
    pub fn jacobi_coefficients(&self, r_max: i64) -> Result<BTreeMap<(Q, i64), C64>> {
        if self.jtype.skew {
            return input("Fourier–Jacobi bookkeeping is provided for holomorphic data only");
        }
        let m = self.jtype.m as i64;
        let mut out = BTreeMap::new();
        for (j, comp) in self.form.components.iter().enumerate() {
            for (&n, &c) in &comp.coeffs {
                let base = Q::from_integer(n) + comp.kappa;
                // r = 2m(λ + a) = 2mλ + j, exponent m(λ+a)² = r²/(4m).
                let mut r = j as i64 - 2 * m * ((r_max + j as i64) / (2 * m));
                while r <= r_max {
                    if r >= -r_max {
                        let key = (base + Q::new(r * r, 4 * m), r);
                        *out.entry(key).or_insert_with(C64::zero) += c;
                    }
                    r += 2 * m;
                }
            }
        }
        Ok(out)
    }
}

/// `theta_expand_eval`.
pub fn theta_expand_eval(j: &JacobiFormData, tau: C64, z: C64) -> C64 {
    j.eval(tau, z)
}

#[derive(Serialize, Deserialize)]
struct JacobiJson {
    #[serde(with = "rational_str")]
    weight: Q,
    m: u32,
    skew: bool,
    #[serde(default)]
    multiplier: Option<MultiplierSystem>,
    #[serde(default, rename = "thetaMultiplier")]
    theta_multiplier: Option<MultiplierSystem>,
    #[serde(default = "default_kind")]
    kind: FormKind,
    components: Vec<FourierSeries>,
}

fn default_kind() -> FormKind {
    FormKind::Cusp
}

impl Serialize for JacobiFormData {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        JacobiJson {
            weight: self.jtype.weight,
            m: self.jtype.m,
            skew: self.jtype.skew,
            multiplier: Some(self.jtype.chi.clone()),
            theta_multiplier: Some(self.jtype.theta_chi.clone()),
            kind: self.form.kind,
            components: self.form.components.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for JacobiFormData {
    /// Missing multipliers default to the eta multiplier.
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = JacobiJson::deserialize(d)?;
        let eta = MultiplierSystem::eta_power(1);
        let chi = match raw.multiplier {
            Some(c) => c,
            None => eta.with_weight(raw.weight).map_err(D::Error::custom)?,
        };
        let theta_chi = raw.theta_multiplier.unwrap_or(eta);
        let jt = JacobiType::new(raw.weight, raw.m, &chi, &theta_chi, raw.skew).map_err(D::Error::custom)?;
        JacobiFormData::new(jt, raw.components, raw.kind).map_err(D::Error::custom)
    }
}

/// Theta components recovered at one `τ`.
#[derive(Clone, Debug)]
pub struct ThetaDecomposition {
    pub components: CVector,
    pub condition: f64,
}

const MAX_CONDITION: f64 = 1e8;

/// Default sample points `z_j = j/(4m) + iε`, `ε = Im τ/(8m)`.
pub fn default_z_samples(m: u32, tau: C64) -> Vec<C64> {
    let mf = m as f64;
    let eps = tau.im / (8.0 * mf);
    (0..2 * m as usize).map(|j| C64::new(j as f64 / (4.0 * mf), eps)).collect()
}

/// Solves `Σ_a f_a θ_{2m,a,0}(τ,z_j) = Φ(τ,z_j)` for the `f_a(τ)`.
pub fn theta_decompose(
    phi: &dyn Fn(C64, C64) -> C64,
    m: u32,
    tau: C64,
    zs: Option<&[C64]>,
) -> Result<ThetaDecomposition> {
    let p = 2 * m as usize;
    let owned;
    let zs = match zs {
        Some(z) => z,
        None => {
            owned = default_z_samples(m, tau);
            &owned
        }
    };
    if zs.len() != p {
        return input(format!("need {p} sample points, got {}", zs.len()));
    }
    let mut a = CMatrix::zeros(p, p);
    for (r, &z) in zs.iter().enumerate() {
        let row = theta_vector(m, tau, z);
        for col in 0..p {
            a[(r, col)] = row[col];
        }
    }
    let condition = condition_number(&a);
    if !(condition <= MAX_CONDITION) {
        return Err(Error::IllConditioned(condition));
    }
    let rhs = CVector::from_iterator(p, zs.iter().map(|&z| phi(tau, z)));
    let components = solve(&a, &rhs)?;
    Ok(ThetaDecomposition { components, condition })
}

/// One of the Jacobi form's theta components as a closure, for tests.
pub fn unit_component(m: u32, j: usize) -> impl Fn(C64, C64) -> C64 {
    move |tau, z| theta_eval(&ThetaSeries::index(m, j), tau, z)
}
