//! Multiplier systems, unitary representations of `SL(2,ℤ)` given on the
//! generators, the Weil-type representation attached to theta functions of
//! index `m`, and the cusp exponents `κ`.
//!
//! Values on arbitrary `γ` are obtained from a word in `S`, `T` by
//! accumulating the consistency factors
//! `σ(γ₁,γ₂) = (c₁γ₂τ₀+d₁)^w (c₂τ₀+d₂)^w / (c₃τ₀+d₃)^w` at a fixed point
//! `τ₀`, principal branches throughout.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{input, Error, Result};
use crate::group::{word_decompose, GroupElement, Letter, Word};
use crate::numeric::linalg::{CMatrix, CVector};
use crate::numeric::scalar::{c, cpow, e_real, format_rational, parse_rational, q_to_f64, C64, Q};

/// The point at which consistency factors are evaluated.
pub const TEST_POINT: C64 = C64 { re: 0.0, im: 2.0 };

/// `log η(τ) = πiτ/12 + Σ log(1 − qⁿ)`, stopping once `|qⁿ| < 1e−17`.
pub fn eta_log(tau: C64) -> C64 {
    let q = crate::numeric::scalar::e(tau);
    let mut acc = C64::new(0.0, PI / 12.0) * tau;
    let mut qn = q;
    let mut n = 1u64;
    while qn.norm() >= 1e-17 && n < 50_000_000 {
        acc += (C64::one() - qn).ln();
        qn *= q;
        n += 1;
    }
    acc
}

/// Dedekind eta by the product formula.
pub fn eta_eval(tau: C64) -> C64 {
    eta_log(tau).exp()
}

/// `η(γτ) / ((cτ+d)^{1/2} η(τ))` at `τ = 2i`, checked at a second point.
pub fn eta_multiplier(g: &GroupElement) -> Result<C64> {
    let at = |tau: C64| -> C64 {
        let l = eta_log(g.act(tau)) - eta_log(tau);
        l.exp() / cpow(g.j(tau), 0.5)
    };
    let v1 = at(TEST_POINT);
    let v2 = at(c(0.3, 1.5));
    if (v1 - v2).norm() > 1e-10 {
        return Err(Error::Verification(format!(
            "eta multiplier of {g:?} differs between test points by {:.3e}",
            (v1 - v2).norm()
        )));
    }
    Ok(v1)
}

/// Consistency factor `σ(g, h)` at the test point for weight `w`.
pub fn sigma(g: &GroupElement, h: &GroupElement, w: f64) -> C64 {
    if h.c == 0 && h.d == 1 {
        return C64::one();
    }
    let t0 = TEST_POINT;
    let gh = *g * *h;
    cpow(g.j(h.act(t0)), w) * cpow(h.j(t0), w) / cpow(gh.j(t0), w)
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Source {
    EtaPower(i64),
    Generators,
}

/// A multiplier system of rational weight, given on `S` and `T`.
#[derive(Clone)]
pub struct MultiplierSystem {
    pub weight: Q,
    s: C64,
    t: C64,
    source: Source,
    cache: Arc<RwLock<HashMap<GroupElement, C64>>>,
}

impl std::fmt::Debug for MultiplierSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MultiplierSystem")
            .field("weight", &self.weight)
            .field("S", &self.s)
            .field("T", &self.t)
            .finish()
    }
}

/// Relation residuals `|χ(S⁴) − 1|` and `|χ((ST)³S⁻²) − 1|` from word
/// evaluation.
#[derive(Clone, Copy, Debug)]
pub struct RelationResiduals {
    pub s4: f64,
    pub st3: f64,
}

impl RelationResiduals {
    pub fn max(&self) -> f64 {
        self.s4.max(self.st3)
    }
}

impl MultiplierSystem {
    /// `χ(S) = e^{−iπr/4}`, `χ(T) = e^{iπr/12}` at weight `r/2`.
    pub fn eta_power(r: i64) -> Self {
        Self::eta_power_with_weight(r, Q::new(r, 2)).expect("weight r/2 is compatible")
    }

    /// Eta power `r` regarded at weight `w`; requires `w − r/2 ∈ ℤ`.
    pub fn eta_power_with_weight(r: i64, weight: Q) -> Result<Self> {
        if !(weight - Q::new(r, 2)).is_integer() {
            return input(format!("weight {weight} incompatible with eta power {r}"));
        }
        Ok(Self {
            weight,
            s: e_real(-(r as f64) / 8.0),
            t: e_real(r as f64 / 24.0),
            source: Source::EtaPower(r),
            cache: Default::default(),
        })
    }

    /// The trivial system at an even integer weight.
    pub fn trivial(weight: Q) -> Result<Self> {
        Self::from_generators(weight, C64::one(), C64::one())
    }

    /// A system given by its values on `S` and `T`, validated on the
    /// defining relations.
    pub fn from_generators(weight: Q, s: C64, t: C64) -> Result<Self> {
        if (s.norm() - 1.0).abs() > 1e-12 || (t.norm() - 1.0).abs() > 1e-12 {
            return input("multiplier values must have modulus 1");
        }
        let out = Self { weight, s, t, source: Source::Generators, cache: Default::default() };
        let res = out.relation_residuals();
        if res.max() > 1e-9 {
            return Err(Error::Verification(format!(
                "multiplier violates relations: |χ(S⁴)−1| = {:.3e}, |χ((ST)³S⁻²)−1| = {:.3e}",
                res.s4, res.st3
            )));
        }
        Ok(out)
    }

    pub fn weight_f64(&self) -> f64 {
        q_to_f64(self.weight)
    }

    pub fn on_s(&self) -> C64 {
        self.s
    }

    pub fn on_t(&self) -> C64 {
        self.t
    }

    pub fn eta_exponent(&self) -> Option<i64> {
        match self.source {
            Source::EtaPower(r) => Some(r),
            Source::Generators => None,
        }
    }

    fn letter_value(&self, l: &Letter) -> C64 {
        match *l {
            Letter::S => self.s,
            Letter::SInv => {
                let w = self.weight_f64();
                C64::one() / (self.s * sigma(&GroupElement::S, &GroupElement::S.inverse(), w))
            }
            Letter::T(n) => self.t.powi(n as i32),
        }
    }

    /// Value on the product of a word, accumulating consistency factors.
    pub fn eval_word(&self, word: &Word) -> C64 {
        let w = self.weight_f64();
        let mut g = GroupElement::I;
        let mut val = C64::one();
        for l in word.letters() {
            let h = l.element();
            val *= self.letter_value(l) * sigma(&g, &h, w);
            g = g * h;
        }
        val
    }

    /// `χ(γ)` through the continued-fraction word; cached.
    pub fn eval(&self, g: &GroupElement) -> C64 {
        if let Some(v) = self.cache.read().ok().and_then(|m| m.get(g).copied()) {
            return v;
        }
        let v = self.eval_word(&word_decompose(g));
        if let Ok(mut m) = self.cache.write() {
            m.insert(*g, v);
        }
        v
    }

    pub fn relation_residuals(&self) -> RelationResiduals {
        use Letter::*;
        let s4 = self.eval_word(&Word(vec![S, S, S, S]));
        let st3 = self.eval_word(&Word(vec![S, T(1), S, T(1), S, T(1), SInv, SInv]));
        RelationResiduals { s4: (s4 - 1.0).norm(), st3: (st3 - 1.0).norm() }
    }

    /// Consistency residual `|χ(γ₁γ₂)σ(γ₁,γ₂)⁻¹ − χ(γ₁)χ(γ₂)|`.
    pub fn consistency_residual(&self, g1: &GroupElement, g2: &GroupElement) -> f64 {
        let w = self.weight_f64();
        let lhs = self.eval(&(*g1 * *g2));
        let rhs = self.eval(g1) * self.eval(g2) * sigma(g1, g2, w);
        (lhs - rhs).norm()
    }

    /// Complex conjugate system, weight `−w` in the consistency sense.
    ///
    /// `conj χ` satisfies the consistency condition with `conj σ_w = σ_{−w}`.
    pub fn conj(&self) -> Self {
        Self {
            weight: -self.weight,
            s: self.s.conj(),
            t: self.t.conj(),
            source: match self.source {
                Source::EtaPower(r) => Source::EtaPower(-r),
                s => s,
            },
            cache: Default::default(),
        }
    }

    /// Same generator values, weight shifted by an integer.
    pub fn with_weight(&self, weight: Q) -> Result<Self> {
        if !(weight - self.weight).is_integer() {
            return input("weight shifts must be integral");
        }
        Ok(Self { weight, s: self.s, t: self.t, source: self.source, cache: Default::default() })
    }

    /// Pointwise product `χ₁χ₂`, of weight `w₁ + w₂`.
    pub fn product(&self, o: &MultiplierSystem) -> Self {
        let source = match (self.source, o.source) {
            (Source::EtaPower(a), Source::EtaPower(b)) => Source::EtaPower(a + b),
            _ => Source::Generators,
        };
        Self {
            weight: self.weight + o.weight,
            s: self.s * o.s,
            t: self.t * o.t,
            source,
            cache: Default::default(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum MultiplierJson {
    Eta {
        weight: String,
        #[serde(rename = "etaPower")]
        eta_power: i64,
    },
    Generators {
        weight: String,
        #[serde(rename = "S")]
        s: [f64; 2],
        #[serde(rename = "T")]
        t: [f64; 2],
    },
}

impl Serialize for MultiplierSystem {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let weight = format_rational(self.weight);
        match self.source {
            Source::EtaPower(r) => MultiplierJson::Eta { weight, eta_power: r },
            Source::Generators => MultiplierJson::Generators {
                weight,
                s: [self.s.re, self.s.im],
                t: [self.t.re, self.t.im],
            },
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for MultiplierSystem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match MultiplierJson::deserialize(d)? {
            MultiplierJson::Eta { weight, eta_power } => {
                let w = parse_rational(&weight).map_err(D::Error::custom)?;
                MultiplierSystem::eta_power_with_weight(eta_power, w).map_err(D::Error::custom)
            }
            MultiplierJson::Generators { weight, s, t } => {
                let w = parse_rational(&weight).map_err(D::Error::custom)?;
                MultiplierSystem::from_generators(w, c(s[0], s[1]), c(t[0], t[1])).map_err(D::Error::custom)
            }
        }
    }
}

/// A finite-dimensional unitary representation given on `S` and `T`.
#[derive(Clone)]
pub struct UnitaryRep {
    s: CMatrix,
    t: CMatrix,
    cache: Arc<RwLock<HashMap<GroupElement, CMatrix>>>,
}

impl std::fmt::Debug for UnitaryRep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("UnitaryRep").field("S", &self.s).field("T", &self.t).finish()
    }
}

fn unitarity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    (m.adjoint() * m - CMatrix::identity(n, n)).norm()
}

impl UnitaryRep {
    pub fn new(s: CMatrix, t: CMatrix) -> Result<Self> {
        if !s.is_square() || s.shape() != t.shape() {
            return input("representation matrices must be square of equal size");
        }
        for (name, m) in [("S", &s), ("T", &t)] {
            let d = unitarity_defect(m);
            if d > 1e-12 {
                return input(format!("ρ({name}) not unitary (defect {d:.3e})"));
            }
        }
        Ok(Self { s, t, cache: Default::default() })
    }

    pub fn trivial(dim: usize) -> Self {
        let id = CMatrix::identity(dim, dim);
        Self { s: id.clone(), t: id, cache: Default::default() }
    }

    pub fn dim(&self) -> usize {
        self.s.nrows()
    }

    pub fn on_s(&self) -> &CMatrix {
        &self.s
    }

    pub fn on_t(&self) -> &CMatrix {
        &self.t
    }

    fn letter(&self, l: &Letter) -> CMatrix {
        match *l {
            Letter::S => self.s.clone(),
            Letter::SInv => self.s.adjoint(),
            Letter::T(n) => {
                let base = if n >= 0 { self.t.clone() } else { self.t.adjoint() };
                let mut out = CMatrix::identity(self.dim(), self.dim());
                let mut b = base;
                let mut e = n.unsigned_abs();
                while e > 0 {
                    if e & 1 == 1 {
                        out = &out * &b;
                    }
                    b = &b * &b;
                    e >>= 1;
                }
                out
            }
        }
    }

    pub fn eval_word(&self, w: &Word) -> CMatrix {
        w.letters()
            .iter()
            .fold(CMatrix::identity(self.dim(), self.dim()), |acc, l| acc * self.letter(l))
    }

    pub fn eval(&self, g: &GroupElement) -> CMatrix {
        if let Some(v) = self.cache.read().ok().and_then(|m| m.get(g).cloned()) {
            return v;
        }
        let v = self.eval_word(&word_decompose(g));
        if let Ok(mut m) = self.cache.write() {
            m.insert(*g, v.clone());
        }
        v
    }

    /// `‖ρ(S)⁴ − I‖` and `‖(ρ(S)ρ(T))³ − ρ(S)²‖` (Frobenius).
    pub fn relation_residuals(&self) -> RelationResiduals {
        let n = self.dim();
        let s2 = &self.s * &self.s;
        let s4 = &s2 * &s2;
        let st = &self.s * &self.t;
        let st3 = &st * &st * &st;
        RelationResiduals {
            s4: (s4 - CMatrix::identity(n, n)).norm(),
            st3: (st3 - s2).norm(),
        }
    }

    pub fn conj(&self) -> Self {
        Self { s: self.s.map(|z| z.conj()), t: self.t.map(|z| z.conj()), cache: Default::default() }
    }

    pub fn unitarity_defect(&self) -> f64 {
        unitarity_defect(&self.s).max(unitarity_defect(&self.t))
    }
}

#[derive(Serialize, Deserialize)]
struct RepJson {
    #[serde(rename = "S")]
    s: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "T")]
    t: Vec<Vec<[f64; 2]>>,
}

fn matrix_to_json(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

fn matrix_from_json(rows: &[Vec<[f64; 2]>]) -> Result<CMatrix> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return input("representation matrix must be square");
    }
    Ok(CMatrix::from_fn(n, n, |i, j| c(rows[i][j][0], rows[i][j][1])))
}

impl Serialize for UnitaryRep {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        RepJson { s: matrix_to_json(&self.s), t: matrix_to_json(&self.t) }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for UnitaryRep {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RepJson::deserialize(d)?;
        let s = matrix_from_json(&raw.s).map_err(D::Error::custom)?;
        let t = matrix_from_json(&raw.t).map_err(D::Error::custom)?;
        UnitaryRep::new(s, t).map_err(D::Error::custom)
    }
}

/// The representation attached to `θ_{2m,a,0}`, `a = j/(2m)`:
/// `ρ′(T)e_a = χ″(T)e^{−2πima²}e_a` and
/// `ρ′(S)_{b,a} = χ″(S)·i^{1/2}/√(2m)·e^{2πi·2mab}`.
pub fn weil_rep(m: u32, chi2: &MultiplierSystem) -> Result<UnitaryRep> {
    if m == 0 {
        return input("index m must be positive");
    }
    let p = 2 * m as usize;
    let mf = m as f64;
    let a = |j: usize| j as f64 / p as f64;
    let t = CMatrix::from_fn(p, p, |i, j| {
        if i == j {
            chi2.on_t() * e_real(-mf * a(j) * a(j))
        } else {
            C64::zero()
        }
    });
    let pref = chi2.on_s() * e_real(1.0 / 8.0) / (p as f64).sqrt();
    let s = CMatrix::from_fn(p, p, |b, aa| pref * e_real(2.0 * mf * a(b) * a(aa)));
    let rep = UnitaryRep::new(s, t)?;
    let res = rep.relation_residuals();
    if res.max() > 1e-9 {
        log::warn!("weil_rep(m={m}): relation residuals {res:?}; only projective");
    }
    Ok(rep)
}

/// Exponents `κ_j ∈ [0,1)` with `χ(Q)ρ(Q) = diag(e^{2πiκ_j})`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KappaDiagonal {
    #[serde(with = "kappa_list")]
    pub kappas: Vec<Q>,
}

mod kappa_list {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        let texts: Vec<String> = v.iter().map(|q| format_rational(*q)).collect();
        texts.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

impl KappaDiagonal {
    pub fn len(&self) -> usize {
        self.kappas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kappas.is_empty()
    }

    pub fn get(&self, j: usize) -> Q {
        self.kappas[j]
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.kappas.iter().map(|q| q_to_f64(*q)).collect()
    }

    /// `κ′_j = 0` if `κ_j = 0`, else `1 − κ_j`: the exponents of the
    /// conjugate type.
    pub fn conj(&self) -> Self {
        Self {
            kappas: self
                .kappas
                .iter()
                .map(|k| if k.is_zero() { *k } else { Q::one() - k })
                .collect(),
        }
    }
}

/// Best rational approximation with denominator at most `max_den`.
pub fn rationalize(x: f64, max_den: i64, tol: f64) -> Option<Q> {
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        let ai = a as i64;
        let h2 = ai.checked_mul(h1)?.checked_add(h0)?;
        let k2 = ai.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() < tol {
            return Some(Q::new(h1, k1));
        }
        let f = r - a;
        if f.abs() < 1e-300 {
            break;
        }
        r = 1.0 / f;
    }
    ((x - h1 as f64 / k1 as f64).abs() < tol).then(|| Q::new(h1, k1))
}

/// Reads off `κ` from `χ(Q)ρ(Q)`; rejects a non-diagonal matrix.
pub fn kappa_diag(chi: &MultiplierSystem, rho: &UnitaryRep, q: &GroupElement) -> Result<KappaDiagonal> {
    let m = rho.eval(q) * chi.eval(q);
    let p = m.nrows();
    for i in 0..p {
        for j in 0..p {
            if i != j && m[(i, j)].norm() > 1e-10 {
                return input("χ(Q)ρ(Q) is not diagonal");
            }
        }
    }
    let mut kappas = Vec::with_capacity(p);
    for j in 0..p {
        let phase = m[(j, j)].arg() / (2.0 * PI);
        let x = phase - phase.floor();
        let mut k = rationalize(x, 100_000, 1e-10)
            .ok_or_else(|| Error::Input(format!("κ_{j} = {x} is not a small rational")))?;
        k -= k.floor();
        kappas.push(k);
    }
    Ok(KappaDiagonal { kappas })
}

/// `χ(γ)ρ(γ)` as one matrix.
pub fn automorphy_matrix(chi: &MultiplierSystem, rho: &UnitaryRep, g: &GroupElement) -> CMatrix {
    rho.eval(g) * chi.eval(g)
}

/// Basis vector `e_α`.
pub fn basis(dim: usize, alpha: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[alpha] = C64::one();
    v
}
