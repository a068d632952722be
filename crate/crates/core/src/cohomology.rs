//! The coefficient modules `P_k` (vector-valued polynomials of degree `≤ k`
//! under the weight `−k` slash) and `P^e_{k,m}` (their theta lifts),
//! cocycles stored on `S` and `T`, coboundary and parabolicity solves, and
//! the map `η̃`.

use std::f64::consts::PI;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::eichler::{fit_nodes, period_hol, period_nodes, EichlerIntegralSeries};
use crate::error::{input, Error, Result};
use crate::group::{word_decompose, GroupElement, JacobiElement, Letter};
use crate::multiplier::{MultiplierSystem, UnitaryRep};
use crate::numeric::linalg::{lstsq, CMatrix, CVector};
use crate::numeric::poly::{mobius_substitute, ComplexPolynomial, Poly};
use crate::numeric::scalar::{c, cpow, rational_str, C64, Q};
use crate::theta::{theta_combine, theta_decompose, JacobiType};
use crate::vvform::{supplementary_data, FormType, PoincareSeries, PoincareSpec};

/// `p` polynomials of degree `≤ k`, one per component.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyVector {
    pub k: usize,
    pub polys: Vec<ComplexPolynomial>,
}

impl PolyVector {
    pub fn new(k: usize, polys: Vec<ComplexPolynomial>) -> Result<Self> {
        for (j, p) in polys.iter().enumerate() {
            if p.degree().is_some_and(|d| d > k) {
                return input(format!("component {j} has degree above {k}"));
            }
        }
        Ok(Self { k, polys })
    }

    pub fn zero(dim: usize, k: usize) -> Self {
        Self { k, polys: vec![Poly::zero(); dim] }
    }

    pub fn dim(&self) -> usize {
        self.polys.len()
    }

    pub fn eval(&self, tau: C64) -> CVector {
        CVector::from_iterator(self.dim(), self.polys.iter().map(|p| p.eval(tau)))
    }

    /// Coefficients stacked component by component, `k + 1` each.
    pub fn to_coeffs(&self) -> CVector {
        let n = self.k + 1;
        CVector::from_fn(self.dim() * n, |idx, _| self.polys[idx / n].coeff(idx % n))
    }

    pub fn from_coeffs(k: usize, dim: usize, v: &CVector) -> Self {
        let n = k + 1;
        let polys = (0..dim).map(|j| Poly::new((0..n).map(|i| v[j * n + i]).collect())).collect();
        Self { k, polys }
    }

    /// `(p|_{−k,χ,ρ}γ)(τ) = χ(γ)⁻¹(cτ+d)^k ρ(γ)⁻¹ p(γτ)`; `ty` has weight `−k`.
    pub fn slash(&self, ty: &FormType, g: &GroupElement) -> PolyVector {
        let m = slash_matrix(ty, self.k, g);
        Self::from_coeffs(self.k, self.dim(), &(m * self.to_coeffs()))
    }

    pub fn add(&self, o: &PolyVector) -> PolyVector {
        let polys = self.polys.iter().zip(&o.polys).map(|(a, b)| a + b).collect();
        Self { k: self.k, polys }
    }

    pub fn sub(&self, o: &PolyVector) -> PolyVector {
        let polys = self.polys.iter().zip(&o.polys).map(|(a, b)| a - b).collect();
        Self { k: self.k, polys }
    }

    pub fn scale(&self, s: C64) -> PolyVector {
        Self { k: self.k, polys: self.polys.iter().map(|p| p.scale(s)).collect() }
    }

    /// Conjugates every coefficient: `τ ↦ [p(τ̄)]⁻`.
    pub fn conj_coeffs(&self) -> PolyVector {
        Self { k: self.k, polys: self.polys.iter().map(|p| p.map(|z| z.conj())).collect() }
    }

    /// Largest coefficient modulus.
    pub fn max_coeff(&self) -> f64 {
        self.polys
            .iter()
            .flat_map(|p| p.coeffs().iter().map(|z| z.norm()))
            .fold(0.0, f64::max)
    }
}

impl Serialize for PolyVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = self
            .polys
            .iter()
            .map(|p| (0..=self.k).map(|i| p.coeff(i)).map(|z| [z.re, z.im]).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyVector {
    /// The degree bound is the longest coefficient list minus one.
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        let k = rows.iter().map(|r| r.len()).max().unwrap_or(1).max(1) - 1;
        let polys = rows.iter().map(|r| Poly::new(r.iter().map(|x| c(x[0], x[1])).collect())).collect();
        Ok(Self { k, polys })
    }
}

/// Matrix of `p ↦ p|_{−k,χ,ρ}γ` on stacked coefficients:
/// `(ρ(γ)⁻¹/χ(γ)) ⊗ B`, with `B` the action on monomials.
pub fn slash_matrix(ty: &FormType, k: usize, g: &GroupElement) -> CMatrix {
    let n = k + 1;
    let mut b = CMatrix::zeros(n, n);
    for i in 0..n {
        let img = mobius_substitute(&ComplexPolynomial::monomial(i), g, k).expect("monomial degree ≤ k");
        for r in 0..n {
            b[(r, i)] = img.coeff(r);
        }
    }
    let a = ty.rho.eval(g).adjoint() / ty.chi.eval(g);
    a.kronecker(&b)
}

/// `(8πim)^{power}(d/dτ)^{power}`, exactly on coefficients.
pub fn heat_power_poly(p: &ComplexPolynomial, m: u32, power: u32) -> ComplexPolynomial {
    let mut out = p.clone();
    for _ in 0..power {
        out = out.derivative();
    }
    out.scale(cpow(C64::new(0.0, 8.0 * PI * m as f64), power as f64))
}

/// An element of `P^e_{k,m}` through its theta components.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JacobiPolyVector {
    pub m: u32,
    pub components: PolyVector,
}

impl JacobiPolyVector {
    pub fn new(m: u32, components: PolyVector) -> Result<Self> {
        if components.dim() != 2 * m as usize {
            return input(format!("{} theta components for index {m}", components.dim()));
        }
        Ok(Self { m, components })
    }

    /// `Σ_a g_a(τ)θ_{2m,a,0}(τ,z)`.
    pub fn eval(&self, tau: C64, z: C64) -> C64 {
        theta_combine(self.m, &self.components.eval(tau), tau, z)
    }

    /// `heat_power_components`: `L_m^{power}` acting on the theta expansion.
    pub fn heat_power(&self, power: u32) -> JacobiPolyVector {
        let polys = self.components.polys.iter().map(|p| heat_power_poly(p, self.m, power)).collect();
        JacobiPolyVector { m: self.m, components: PolyVector { k: self.components.k, polys } }
    }
}

/// Result of [`pe_membership`].
#[derive(Clone, Debug)]
pub struct PeMembership {
    pub member: bool,
    pub value: JacobiPolyVector,
    pub residual: f64,
}

/// Extracts theta components of `g` at the `k + 2` period nodes, fits
/// polynomials of degree `≤ k` through `k + 1` of them and validates at the
/// last one. Membership means relative residual below `1e−6`.
pub fn pe_membership(g: &dyn Fn(C64, C64) -> C64, m: u32, k: usize) -> Result<PeMembership> {
    let nodes = period_nodes(k);
    let values = nodes
        .iter()
        .map(|&t| Ok(theta_decompose(g, m, t, None)?.components))
        .collect::<Result<Vec<_>>>()?;
    let (pv, residual) = fit_nodes(&nodes, &values, k)?;
    Ok(PeMembership { member: residual < 1e-6, value: JacobiPolyVector::new(m, pv)?, residual })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CocycleKind {
    Vv,
    Jacobi,
}

/// A cocycle `γ ↦ p_γ` given on `S` and `T`.
///
/// For the Jacobi kind the stored values are theta components and `ty` is
/// the type `(−k, χ′, ρ′)` of the matching vector-valued action; lattice
/// translations carry the zero value.
#[derive(Clone, Debug)]
pub struct Cocycle {
    pub kind: CocycleKind,
    pub k: usize,
    pub ty: FormType,
    pub jtype: Option<JacobiType>,
    pub s: PolyVector,
    pub t: PolyVector,
}

/// Relation residuals beyond this (relative to the value size) reject a
/// cocycle. Exact data satisfies the relations to rounding; cocycles built
/// from truncated Poincaré series carry their truncation error, which
/// shrinks like `C^{−(k+1)}` and reaches `1.5e−6` at `k = 2`, `C = 100`.
pub const RELATION_TOL: f64 = 1e-5;

impl Cocycle {
    /// Vector-valued cocycle for the weight `−k` type `ty`.
    pub fn vv(ty: FormType, k: usize, s: PolyVector, t: PolyVector) -> Result<Self> {
        if ty.weight != Q::from_integer(-(k as i64)) {
            return input(format!("cocycle type has weight {} but k = {k}", ty.weight));
        }
        Self::checked(Cocycle { kind: CocycleKind::Vv, k, ty, jtype: None, s, t })
    }

    /// Jacobi cocycle for the slash `|_{−k+½,m,χ}`; `jtype` may carry any
    /// weight and is rebased.
    pub fn jacobi(jtype: &JacobiType, k: usize, s: PolyVector, t: PolyVector) -> Result<Self> {
        let jt = jtype.with_weight(Q::new(1 - 2 * k as i64, 2))?;
        let ty = jt.holomorphic_vv_type()?;
        Self::checked(Cocycle { kind: CocycleKind::Jacobi, k, ty, jtype: Some(jt), s, t })
    }

    /// Builds without the relation check, for diagnostics on invalid data.
    pub fn unchecked(kind: CocycleKind, k: usize, ty: FormType, jtype: Option<JacobiType>, s: PolyVector, t: PolyVector) -> Self {
        Cocycle { kind, k, ty, jtype, s, t }
    }

    fn checked(c: Cocycle) -> Result<Self> {
        let p = c.ty.dim();
        if c.s.dim() != p || c.t.dim() != p || c.s.k != c.k || c.t.k != c.k {
            return input(format!("cocycle values must have {p} components of degree ≤ {}", c.k));
        }
        let r = c.relation_residual();
        if r > RELATION_TOL {
            return Err(Error::Verification(format!("cocycle relations fail (residual {r:.3e})")));
        }
        Ok(c)
    }

    pub fn dim(&self) -> usize {
        self.ty.dim()
    }

    pub fn zero_value(&self) -> PolyVector {
        PolyVector::zero(self.dim(), self.k)
    }

    /// Generator data for repeated extension.
    pub fn extender(&self) -> Extender<'_> {
        let m = |g: &GroupElement| slash_matrix(&self.ty, self.k, g);
        let (ms, ms_inv, mt, mt_inv) = (
            m(&GroupElement::S),
            m(&GroupElement::S.inverse()),
            m(&GroupElement::T),
            m(&GroupElement::t_pow(-1)),
        );
        let s = self.s.to_coeffs();
        let t = self.t.to_coeffs();
        // 0 = p_{S S⁻¹} = p_S|S⁻¹ + p_{S⁻¹}, and likewise for T.
        let s_inv = -(&ms_inv * &s);
        let t_inv = -(&mt_inv * &t);
        Extender { c: self, ms, ms_inv, mt, mt_inv, s, s_inv, t, t_inv }
    }

    /// Value on a product of letters: `p_{GL} = p_G|L + p_L`.
    pub fn eval_letters(&self, letters: &[Letter]) -> PolyVector {
        self.extender().eval_letters(letters)
    }

    /// `cocycle_extend` on `SL(2,ℤ)`.
    pub fn extend(&self, g: &GroupElement) -> PolyVector {
        self.extender().extend(g)
    }

    /// `cocycle_extend` on the Jacobi group. Since `(γ,X) = (γ,0)(I,X)` and
    /// `P^e` is invariant under `|_m X`, the value is that on `γ`.
    pub fn extend_jacobi(&self, g: &JacobiElement) -> PolyVector {
        self.extend(&g.gamma)
    }

    /// Largest coefficient of the values on `S⁴` and `(ST)³S⁻²`, relative to
    /// the size of the generator values.
    pub fn relation_residual(&self) -> f64 {
        let s4 = self.eval_letters(&[Letter::S; 4]);
        let st = [
            Letter::S,
            Letter::T(1),
            Letter::S,
            Letter::T(1),
            Letter::S,
            Letter::T(1),
            Letter::SInv,
            Letter::SInv,
        ];
        let r = self.eval_letters(&st);
        let scale = self.s.max_coeff().max(self.t.max_coeff()).max(1.0);
        s4.max_coeff().max(r.max_coeff()) / scale
    }

    /// The Jacobi-function value `Σ_a p_a(τ)θ_a(τ,z)` of a cocycle value.
    pub fn jacobi_value(&self, v: &PolyVector) -> Result<JacobiPolyVector> {
        match &self.jtype {
            Some(jt) => JacobiPolyVector::new(jt.m, v.clone()),
            None => input("not a Jacobi cocycle"),
        }
    }

    /// `p|γ − p` on `S` and `T`.
    pub fn coboundary(ty: &FormType, p: &PolyVector) -> (PolyVector, PolyVector) {
        (
            p.slash(ty, &GroupElement::S).sub(p),
            p.slash(ty, &GroupElement::T).sub(p),
        )
    }
}

/// A cocycle with the slash matrices of `S^{±1}`, `T^{±1}` and its values
/// on them precomputed, working on stacked coefficients.
pub struct Extender<'a> {
    c: &'a Cocycle,
    ms: CMatrix,
    ms_inv: CMatrix,
    mt: CMatrix,
    mt_inv: CMatrix,
    s: CVector,
    s_inv: CVector,
    t: CVector,
    t_inv: CVector,
}

impl Extender<'_> {
    /// Applies `|L` to `acc` and adds `p_L`.
    fn step(&self, acc: &CVector, l: &Letter) -> CVector {
        match *l {
            Letter::S => &self.ms * acc + &self.s,
            Letter::SInv => &self.ms_inv * acc + &self.s_inv,
            Letter::T(n) => {
                // p_{T^n} = Σ_{i<n} p_T|T^i, and p_G|T^n by repeated steps.
                let (m, v) = if n >= 0 { (&self.mt, &self.t) } else { (&self.mt_inv, &self.t_inv) };
                let mut out = acc.clone();
                for _ in 0..n.unsigned_abs() {
                    out = m * out + v;
                }
                out
            }
        }
    }

    pub fn eval_letters(&self, letters: &[Letter]) -> PolyVector {
        let mut acc = CVector::zeros(self.c.dim() * (self.c.k + 1));
        for l in letters {
            acc = self.step(&acc, l);
        }
        PolyVector::from_coeffs(self.c.k, self.c.dim(), &acc)
    }

    pub fn extend(&self, g: &GroupElement) -> PolyVector {
        self.eval_letters(word_decompose(g).letters())
    }
}

#[derive(Serialize, Deserialize)]
struct ContextJson {
    k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<u32>,
    multiplier: MultiplierSystem,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rep: Option<UnitaryRep>,
    #[serde(default, rename = "thetaMultiplier", skip_serializing_if = "Option::is_none")]
    theta_multiplier: Option<MultiplierSystem>,
}

#[derive(Serialize, Deserialize)]
struct CocycleJson {
    kind: CocycleKind,
    context: ContextJson,
    #[serde(rename = "S")]
    s: PolyVector,
    #[serde(rename = "T")]
    t: PolyVector,
}

/// Pads (or checks) the degree bound read from JSON.
fn with_degree(p: PolyVector, k: usize) -> Result<PolyVector> {
    PolyVector::new(k, p.polys)
}

impl Serialize for Cocycle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let context = match &self.jtype {
            Some(jt) => ContextJson {
                k: self.k,
                m: Some(jt.m),
                multiplier: jt.chi.clone(),
                rep: None,
                theta_multiplier: Some(jt.theta_chi.clone()),
            },
            None => ContextJson {
                k: self.k,
                m: None,
                multiplier: self.ty.chi.clone(),
                rep: Some(self.ty.rho.clone()),
                theta_multiplier: None,
            },
        };
        CocycleJson { kind: self.kind, context, s: self.s.clone(), t: self.t.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cocycle {
    /// Jacobi contexts default both multipliers to the eta multiplier.
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = CocycleJson::deserialize(d)?;
        build_from_json(raw, true).map_err(D::Error::custom)
    }
}

fn build_from_json(raw: CocycleJson, checked: bool) -> Result<Cocycle> {
    let k = raw.context.k;
    let s = with_degree(raw.s, k)?;
    let t = with_degree(raw.t, k)?;
    let (ty, jtype) = match raw.kind {
        CocycleKind::Vv => {
            let Some(rep) = raw.context.rep else {
                return Err(Error::Schema("vv context needs 'rep'".into()));
            };
            (FormType::new(Q::from_integer(-(k as i64)), &raw.context.multiplier, rep)?, None)
        }
        CocycleKind::Jacobi => {
            let Some(m) = raw.context.m else {
                return Err(Error::Schema("jacobi context needs 'm'".into()));
            };
            let th = raw.context.theta_multiplier.unwrap_or_else(|| MultiplierSystem::eta_power(1));
            let w = Q::new(1 - 2 * k as i64, 2);
            let jt = JacobiType::new(w, m, &raw.context.multiplier, &th, false)?;
            (jt.holomorphic_vv_type()?, Some(jt))
        }
    };
    let c = Cocycle { kind: raw.kind, k, ty, jtype, s, t };
    if checked {
        Cocycle::checked(c)
    } else {
        let p = c.ty.dim();
        if c.s.dim() != p || c.t.dim() != p {
            return input(format!("cocycle values must have {p} components"));
        }
        Ok(c)
    }
}

impl Cocycle {
    /// Reads cocycle JSON without the relation check, so that invalid data
    /// can still be diagnosed.
    pub fn from_json_unchecked(text: &str) -> Result<Cocycle> {
        build_from_json(serde_json::from_str(text)?, false)
    }
}

/// Outcome of the coboundary and parabolicity solves.
#[derive(Clone, Debug, Serialize)]
pub struct CohomologyClassReport {
    pub is_coboundary: bool,
    pub witness: Option<PolyVector>,
    /// `‖(p|S − p, p|T − p) − (c_S, c_T)‖ / ‖(c_S, c_T)‖` at the least-squares `p`.
    pub residual: f64,
    /// Dimension of the slash-invariant vectors.
    pub kernel_dim: usize,
    pub is_parabolic: bool,
    pub parabolic_witness: Option<PolyVector>,
    pub parabolic_residual: f64,
}

const COBOUNDARY_TOL: f64 = 1e-6;
const RANK_TOL: f64 = 1e-10;

fn relative(res: f64, rhs: &CVector) -> f64 {
    let n = rhs.norm();
    if n == 0.0 {
        res
    } else {
        res / n
    }
}

/// Parabolicity for the single cusp of `SL(2,ℤ)`: solves `Q|T − Q = c_T`.
pub fn parabolic_check(c: &Cocycle) -> Result<(bool, PolyVector, f64)> {
    let (p, n) = (c.dim(), c.k + 1);
    let a = slash_matrix(&c.ty, c.k, &GroupElement::T) - CMatrix::identity(p * n, p * n);
    let rhs = c.t.to_coeffs();
    let ls = lstsq(&a, &rhs, RANK_TOL)?;
    let res = relative(ls.residual, &rhs);
    Ok((res < COBOUNDARY_TOL, PolyVector::from_coeffs(c.k, p, &ls.x), res))
}

/// Least-squares solve of `p|S − p = c_S`, `p|T − p = c_T`.
pub fn coboundary_solve(c: &Cocycle) -> Result<CohomologyClassReport> {
    let (p, n) = (c.dim(), c.k + 1);
    let id = CMatrix::identity(p * n, p * n);
    let ms = slash_matrix(&c.ty, c.k, &GroupElement::S) - &id;
    let mt = slash_matrix(&c.ty, c.k, &GroupElement::T) - &id;
    let mut a = CMatrix::zeros(2 * p * n, p * n);
    a.view_mut((0, 0), (p * n, p * n)).copy_from(&ms);
    a.view_mut((p * n, 0), (p * n, p * n)).copy_from(&mt);
    let mut rhs = CVector::zeros(2 * p * n);
    rhs.rows_mut(0, p * n).copy_from(&c.s.to_coeffs());
    rhs.rows_mut(p * n, p * n).copy_from(&c.t.to_coeffs());
    let ls = lstsq(&a, &rhs, RANK_TOL)?;
    let residual = relative(ls.residual, &rhs);
    let is_coboundary = residual < COBOUNDARY_TOL;
    let (is_parabolic, q, pres) = parabolic_check(c)?;
    Ok(CohomologyClassReport {
        is_coboundary,
        witness: is_coboundary.then(|| PolyVector::from_coeffs(c.k, p, &ls.x)),
        residual,
        kernel_dim: ls.kernel_dim,
        is_parabolic,
        parabolic_witness: is_parabolic.then_some(q),
        parabolic_residual: pres,
    })
}

/// Reads a vector-valued cocycle of type `(−k, χ′, ρ′)` as a Jacobi cocycle
/// of index `m`: the theta components are the vector components.
pub fn lift_vv_cocycle(c: &Cocycle, jtype: &JacobiType) -> Result<Cocycle> {
    if c.kind != CocycleKind::Vv {
        return input("lift_vv_cocycle expects a vector-valued cocycle");
    }
    let jt = jtype.with_weight(Q::new(1 - 2 * c.k as i64, 2))?;
    let target = jt.holomorphic_vv_type()?;
    if !same_type(&target, &c.ty) {
        return input("cocycle context does not match (−k, χ′, ρ′) for this Jacobi type");
    }
    Cocycle::jacobi(&jt, c.k, c.s.clone(), c.t.clone())
}

fn same_type(a: &FormType, b: &FormType) -> bool {
    let close = |x: &CMatrix, y: &CMatrix| x.shape() == y.shape() && (x - y).norm() < 1e-9;
    a.weight == b.weight
        && a.dim() == b.dim()
        && (a.chi.on_s() - b.chi.on_s()).norm() < 1e-9
        && (a.chi.on_t() - b.chi.on_t()).norm() < 1e-9
        && close(a.rho.on_s(), b.rho.on_s())
        && close(a.rho.on_t(), b.rho.on_t())
}

/// How the `α̃` branch turns periods of `g*` into a cocycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlphaConvention {
    /// `r^H(g*,γ;τ)` as computed; by the conjugation relations this is
    /// `r^N(g,γ;τ)`, a cocycle for `(χ′, ρ′)`.
    Direct,
    /// Coefficient conjugation `[r^H(g*,γ;τ̄)]⁻`.
    CoefficientConjugate,
}

/// The only place where the overline in the `α̃` branch is interpreted.
pub fn alpha_polynomial(r: &PolyVector, conv: AlphaConvention) -> PolyVector {
    match conv {
        AlphaConvention::Direct => r.clone(),
        AlphaConvention::CoefficientConjugate => r.conj_coeffs(),
    }
}

/// Input of [`eta_map`]: both forms as Poincaré combinations over their
/// vector-valued types.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EtaMapInput {
    /// Jacobi weight `k + 5/2`.
    #[serde(with = "rational_str")]
    pub weight: Q,
    pub m: u32,
    #[serde(default)]
    pub multiplier: Option<MultiplierSystem>,
    #[serde(default, rename = "thetaMultiplier")]
    pub theta_multiplier: Option<MultiplierSystem>,
    /// Cusp seeds for `f`, the form attached to `Φ`.
    #[serde(default)]
    pub phi: Vec<PoincareSpec>,
    /// Cusp seeds for `g`, the form attached to the skew form `Ψ`, over the
    /// conjugate type.
    #[serde(default)]
    pub psi: Vec<PoincareSpec>,
    #[serde(default = "default_cmax", rename = "C")]
    pub cmax: i64,
}

fn default_cmax() -> i64 {
    100
}

impl EtaMapInput {
    pub fn jacobi_type(&self) -> Result<JacobiType> {
        let eta = MultiplierSystem::eta_power(1);
        let chi = match &self.multiplier {
            Some(c) => c.clone(),
            None => eta.with_weight(self.weight)?,
        };
        let th = self.theta_multiplier.clone().unwrap_or(eta);
        JacobiType::new(self.weight, self.m, &chi, &th, false)
    }

    /// `k` from the Jacobi weight `k + 5/2`.
    pub fn k(&self) -> Result<usize> {
        let k = self.weight - Q::new(5, 2);
        if !k.is_integer() || k < Q::zero() {
            return input(format!("Jacobi weight {} is not k + 5/2 with k ≥ 0", self.weight));
        }
        Ok(k.to_integer() as usize)
    }
}

/// Evaluation parameters for [`eta_map`].
#[derive(Clone, Copy, Debug)]
pub struct EtaMapOptions {
    pub convention: AlphaConvention,
    pub tol: f64,
}

impl Default for EtaMapOptions {
    fn default() -> Self {
        Self { convention: AlphaConvention::Direct, tol: 1e-10 }
    }
}

/// Whether `Σ b P_{ν,α}` vanishes term by term: the `±γ` average kills the
/// combined seed at every frequency.
pub fn skew_seeds_vanish(gty: &FormType, psi: &[PoincareSpec]) -> bool {
    let pm = gty.pm_average();
    let p = gty.dim();
    let mut freqs: Vec<Q> = psi.iter().map(|s| s.nu).collect();
    freqs.sort();
    freqs.dedup();
    freqs.iter().all(|nu| {
        let mut v = CVector::zeros(p);
        for s in psi.iter().filter(|s| s.nu == *nu && s.alpha < p) {
            v[s.alpha] += s.b;
        }
        (&pm * v).norm() <= 1e-12 * psi.iter().map(|s| s.b.norm()).fold(0.0, f64::max)
    })
}

/// `η̃(Φ, Ψ) = β̃(Φ) + α̃(Ψ)` on `S` and `T`.
///
/// `β̃`: periods of `f = Σ b P` (type `(k+2, χ′, ρ′)`) by the defining
/// integral. `α̃`: periods of `g* = Σ b̄ P_{n′}` (same type, weakly
/// holomorphic) through its holomorphic Eichler integral, so `g*` is
/// extracted once and its constant `c_{g*}` computed. Both have zero value
/// on `T`.
pub fn eta_map(inp: &EtaMapInput, opts: EtaMapOptions) -> Result<Cocycle> {
    let jt = inp.jacobi_type()?;
    let k = inp.k()?;
    let ty = jt.vv_type()?;
    let p = ty.dim();
    let mut s_val = PolyVector::zero(p, k);
    if !inp.phi.is_empty() {
        let f = PoincareSeries::new(&ty, &inp.phi, inp.cmax)?;
        let form = crate::eichler::cusp_expansion(&f)?;
        let pp = period_hol(&|t| form.eval(t), &ty, &GroupElement::S, k, opts.tol)?;
        s_val = s_val.add(&pp.polys);
    }
    if !inp.psi.is_empty() && skew_seeds_vanish(&ty.conj()?, &inp.psi) {
        // Every seed is odd under −I: the combination g is identically zero,
        // hence so is α̃.
        log::info!("eta_map: the skew Poincaré combination vanishes identically");
    } else if !inp.psi.is_empty() {
        let gty = ty.conj()?;
        let star = supplementary_data(&inp.psi, &gty.kappa);
        let gs = PoincareSeries::new(&ty, &star, inp.cmax)?;
        let e = EichlerIntegralSeries::from_weakly_holomorphic(&gs, k, inp.cmax)?;
        let r = e.period(&GroupElement::S)?;
        s_val = s_val.add(&alpha_polynomial(&r.polys, opts.convention));
    }
    Cocycle::jacobi(&jt, k, s_val, PolyVector::zero(p, k))
}
