//! `SL(2,ℤ)` and the Jacobi group `SL(2,ℤ) ⋉ ℤ²`: products, actions, words
//! in `S` and `T`, reduction to the fundamental domain and coset
//! representatives for Poincaré sums.

use std::fmt;
use std::ops::Mul;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{input, Result};
use crate::numeric::scalar::{lin, C64};

/// Integer matrix `[[a, b], [c, d]]` with `ad − bc = 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl GroupElement {
    pub const I: Self = Self { a: 1, b: 0, c: 0, d: 1 };
    pub const S: Self = Self { a: 0, b: -1, c: 1, d: 0 };
    pub const T: Self = Self { a: 1, b: 1, c: 0, d: 1 };
    pub const MINUS_I: Self = Self { a: -1, b: 0, c: 0, d: -1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        if det != 1 {
            return input(format!("determinant of [[{a},{b}],[{c},{d}]] is {det}, not 1"));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn t_pow(n: i64) -> Self {
        Self { a: 1, b: n, c: 0, d: 1 }
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn neg(&self) -> Self {
        Self { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    /// `cτ + d`.
    pub fn j(&self, tau: C64) -> C64 {
        lin(self.c, self.d, tau)
    }

    /// Möbius action `(aτ+b)/(cτ+d)`.
    pub fn act(&self, tau: C64) -> C64 {
        lin(self.a, self.b, tau) / self.j(tau)
    }

    /// `γ⁻¹∞`, the cusp sent to `i∞`; `None` when it is `i∞` itself.
    pub fn preimage_of_infinity(&self) -> Option<f64> {
        if self.c == 0 {
            None
        } else {
            Some(-(self.d as f64) / self.c as f64)
        }
    }

    pub fn as_array(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;
    fn mul(self, o: GroupElement) -> GroupElement {
        GroupElement {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.as_array().serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [a, b, c, dd] = <[i64; 4]>::deserialize(d)?;
        GroupElement::new(a, b, c, dd).map_err(serde::de::Error::custom)
    }
}

/// `(γ, X)` with `X = (λ, μ) ∈ ℤ²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JacobiElement {
    pub gamma: GroupElement,
    #[serde(rename = "X")]
    pub x: (i64, i64),
}

impl JacobiElement {
    pub fn new(gamma: GroupElement, lambda: i64, mu: i64) -> Self {
        Self { gamma, x: (lambda, mu) }
    }

    pub fn modular(gamma: GroupElement) -> Self {
        Self::new(gamma, 0, 0)
    }

    pub fn translation(lambda: i64, mu: i64) -> Self {
        Self::new(GroupElement::I, lambda, mu)
    }

    pub fn lambda(&self) -> i64 {
        self.x.0
    }

    pub fn mu(&self) -> i64 {
        self.x.1
    }

    /// `(γ₁γ₂, X₁·γ₂ + X₂)`, with `X₁·γ₂` a row vector times a matrix.
    pub fn compose(&self, o: &JacobiElement) -> JacobiElement {
        let g = o.gamma;
        let (l1, m1) = self.x;
        let lam = l1 * g.a + m1 * g.c + o.x.0;
        let mu = l1 * g.b + m1 * g.d + o.x.1;
        JacobiElement::new(self.gamma * o.gamma, lam, mu)
    }

    pub fn inverse(&self) -> JacobiElement {
        // (γ, X)⁻¹ = (γ⁻¹, −X·γ⁻¹)
        let gi = self.gamma.inverse();
        let (l, m) = self.x;
        JacobiElement::new(gi, -(l * gi.a + m * gi.c), -(l * gi.b + m * gi.d))
    }

    /// `(γτ, (z + λτ + μ)/(cτ + d))`.
    pub fn act(&self, tau: C64, z: C64) -> (C64, C64) {
        let (l, m) = self.x;
        let w = (z + tau * l as f64 + m as f64) / self.gamma.j(tau);
        (self.gamma.act(tau), w)
    }
}

/// A generator power in a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    S,
    SInv,
    /// `T^n`, run-length encoded.
    T(i64),
}

impl Letter {
    pub fn element(&self) -> GroupElement {
        match *self {
            Letter::S => GroupElement::S,
            Letter::SInv => GroupElement::S.inverse(),
            Letter::T(n) => GroupElement::t_pow(n),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Letter::S => write!(f, "S"),
            Letter::SInv => write!(f, "S^-1"),
            Letter::T(1) => write!(f, "T"),
            Letter::T(n) => write!(f, "T^{n}"),
        }
    }
}

/// Product of letters, left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn product(&self) -> GroupElement {
        self.0.iter().fold(GroupElement::I, |acc, l| acc * l.element())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// Number of `S`-type letters plus `T`-runs; the length as stored.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses space-separated tokens `S`, `S^-1`, `T`, `T^-1`, `T^n`.
    pub fn parse(text: &str) -> Result<Word> {
        let mut out = Vec::new();
        for tok in text.split(|c: char| c.is_whitespace() || c == ',' || c == '*') {
            let tok = tok.trim();
            if tok.is_empty() {
                continue;
            }
            let letter = match tok {
                "S" => Letter::S,
                "S^-1" | "Sinv" => Letter::SInv,
                "T" => Letter::T(1),
                "Tinv" => Letter::T(-1),
                t if t.starts_with("T^") => Letter::T(
                    t[2..].parse().map_err(|_| crate::Error::Input(format!("bad token '{t}'")))?,
                ),
                t if t.starts_with("S^") => {
                    let n: i64 = t[2..].parse().map_err(|_| crate::Error::Input(format!("bad token '{t}'")))?;
                    let l = if n >= 0 { Letter::S } else { Letter::SInv };
                    for _ in 1..n.unsigned_abs() {
                        out.push(l);
                    }
                    l
                }
                t => return input(format!("bad token '{t}'")),
            };
            out.push(letter);
        }
        Ok(Word(out))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Nearest-integer continued fraction on the first column:
/// `γ = T^{q₁} S T^{q₂} S ⋯`, finishing with `S²` for a sign.
pub fn word_decompose(g: &GroupElement) -> Word {
    let mut m = *g;
    let mut out = Vec::new();
    while m.c != 0 {
        let q = div_round(m.a, m.c);
        if q != 0 {
            out.push(Letter::T(q));
            m = GroupElement::t_pow(-q) * m;
        }
        out.push(Letter::S);
        m = GroupElement::S.inverse() * m;
    }
    // m = ±T^n
    if m.a == -1 {
        out.push(Letter::S);
        out.push(Letter::S);
        m = m.neg();
    }
    if m.b != 0 {
        out.push(Letter::T(m.b));
    }
    Word(out)
}

/// `a / c` rounded to the nearest integer, ties toward zero.
fn div_round(a: i64, c: i64) -> i64 {
    let (q, r) = a.div_mod_floor(&c);
    // r has the sign of c; compare 2|r| with |c|.
    if 2 * r.abs() > c.abs() {
        q + 1
    } else {
        q
    }
}

/// One cusp class for `SL(2,ℤ)`: `i∞` with width 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CuspData {
    pub width: i64,
}

impl CuspData {
    pub const INFINITY: CuspData = CuspData { width: 1 };

    pub fn generator(&self) -> GroupElement {
        GroupElement::t_pow(self.width)
    }
}

/// Identity plus one element `[[a, b], [c, d]]` for each coprime `(c, d)`
/// with `0 < c ≤ C`, `0 ≤ d < c`, ordered by `(c, d)`. The top row is
/// `a = d⁻¹ mod c`, `b = (ad − 1)/c`.
pub fn coset_reps(cmax: i64) -> Vec<GroupElement> {
    let mut out = vec![GroupElement::I];
    for c in 1..=cmax.max(0) {
        for d in 0..c {
            if d.gcd(&c) != 1 {
                continue;
            }
            out.push(coset_rep(c, d));
        }
    }
    out
}

/// The representative with lower row `(c, d)`, `c > 0`, `gcd(c, d) = 1`.
pub fn coset_rep(c: i64, d: i64) -> GroupElement {
    let a = if c == 1 { 0 } else { mod_inverse(d.rem_euclid(c), c) };
    let b = (a * d - 1) / c;
    GroupElement { a, b, c, d }
}

/// Inverse of `x` modulo `m` for coprime `x, m`, in `[0, m)`.
pub fn mod_inverse(x: i64, m: i64) -> i64 {
    let e = x.extended_gcd(&m);
    e.x.rem_euclid(m)
}

/// A random element with all entries in `[−bound, bound]`: a coprime lower
/// row is drawn, then the top row is shifted to be as small as possible.
pub fn random_element<R: rand::Rng + ?Sized>(rng: &mut R, bound: i64) -> GroupElement {
    let bound = bound.max(1);
    loop {
        let c = rng.gen_range(-bound..=bound);
        let d = rng.gen_range(-bound..=bound);
        if c.gcd(&d) != 1 {
            continue;
        }
        // x·d + y·c = 1 gives a = x, b = −y.
        let e = d.extended_gcd(&c);
        let (mut a, mut b) = (e.x, -e.y);
        let t = if c != 0 { (a as f64 / c as f64).round() as i64 } else { (b as f64 / d as f64).round() as i64 };
        a -= t * c;
        b -= t * d;
        if a.abs() <= bound && b.abs() <= bound && a * d - b * c == 1 {
            return GroupElement { a, b, c, d };
        }
    }
}

/// Reduction to the standard fundamental domain: returns `(γ, γτ)` with
/// `|Re γτ| ≤ 1/2` and `|γτ| ≥ 1` (up to rounding).
pub fn reduce_to_fundamental(tau: C64) -> (GroupElement, C64) {
    let mut g = GroupElement::I;
    let mut t = tau;
    for _ in 0..10000 {
        let n = t.re.round();
        if n != 0.0 {
            let ni = n as i64;
            g = GroupElement::t_pow(-ni) * g;
            t = C64::new(t.re - n, t.im);
        }
        if t.norm_sqr() < 1.0 - 1e-14 {
            g = GroupElement::S * g;
            t = -1.0 / t;
        } else {
            break;
        }
    }
    // Recompute from the exact matrix to avoid drift.
    (g, g.act(tau))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ge(a: i64, b: i64, c: i64, d: i64) -> GroupElement {
        GroupElement::new(a, b, c, d).unwrap()
    }

    #[test]
    fn relations() {
        let s = GroupElement::S;
        let t = GroupElement::T;
        assert_eq!(s * s * s * s, GroupElement::I);
        assert_eq!((s * t) * (s * t) * (s * t), s * s);
        assert_eq!(s * s, GroupElement::MINUS_I);
    }

    #[test]
    fn jacobi_composition_examples() {
        let a = JacobiElement::translation(1, 0);
        let b = JacobiElement::translation(0, 1);
        assert_eq!(a.compose(&b), JacobiElement::translation(1, 1));
        let s = JacobiElement::modular(GroupElement::S);
        assert_eq!(a.compose(&s), JacobiElement::new(GroupElement::S, 0, -1));
        let g = JacobiElement::new(ge(2, 1, 1, 1), 3, -2);
        assert_eq!(g.compose(&JacobiElement::modular(GroupElement::I)), g);
        assert_eq!(g.compose(&g.inverse()), JacobiElement::modular(GroupElement::I));
    }

    #[test]
    fn jacobi_action_examples() {
        let i = C64::new(0.0, 1.0);
        let (t, z) = JacobiElement::translation(0, 1).act(i, C64::new(0.0, 0.0));
        assert_eq!((t, z), (i, C64::new(1.0, 0.0)));
        let zz = C64::new(0.3, 0.2);
        let (t, z) = JacobiElement::modular(GroupElement::S).act(i, zz);
        assert!((t - i).norm() < 1e-15 && (z - zz / i).norm() < 1e-15);
    }

    #[test]
    fn word_examples() {
        assert_eq!(word_decompose(&GroupElement::T), Word(vec![Letter::T(1)]));
        let g = ge(1, 0, 1, 1);
        assert_eq!(word_decompose(&g).product(), g);
        let w = word_decompose(&GroupElement::MINUS_I);
        assert_eq!(w.product(), GroupElement::MINUS_I);
        assert_eq!(word_decompose(&GroupElement::I), Word(vec![]));
    }

    #[test]
    fn word_parse_round_trip() {
        let w = Word::parse("S T^-3 S^-1 T").unwrap();
        assert_eq!(w.product(), GroupElement::S * GroupElement::t_pow(-3) * GroupElement::S.inverse() * GroupElement::T);
        assert_eq!(Word::parse(&w.to_string()).unwrap(), w);
    }

    #[test]
    fn cosets_small() {
        let r1 = coset_reps(1);
        assert_eq!(r1, vec![GroupElement::I, GroupElement::S]);
        let r2 = coset_reps(2);
        assert_eq!(r2.len(), 3);
        assert_eq!((r2[2].c, r2[2].d), (2, 1));
        for g in coset_reps(12) {
            assert_eq!(g.a * g.d - g.b * g.c, 1);
        }
    }

    #[test]
    fn fundamental_domain() {
        let tau = C64::new(0.1234, 0.003);
        let (g, t) = reduce_to_fundamental(tau);
        assert!(t.re.abs() <= 0.5 + 1e-12 && t.norm() >= 1.0 - 1e-12);
        assert!((g.act(tau) - t).norm() < 1e-9);
    }

    #[test]
    fn serde_formats() {
        let g = ge(2, 1, 1, 1);
        assert_eq!(serde_json::to_string(&g).unwrap(), "[2,1,1,1]");
        let j = JacobiElement::new(g, 1, -1);
        let text = serde_json::to_string(&j).unwrap();
        assert_eq!(text, r#"{"gamma":[2,1,1,1],"X":[1,-1]}"#);
        assert_eq!(serde_json::from_str::<JacobiElement>(&text).unwrap(), j);
        assert!(serde_json::from_str::<GroupElement>("[1,1,1,1]").is_err());
    }
}
