//! Polynomials over an abstract coefficient ring, with exact Gaussian
//! rationals for the algebraic identities and `Complex64` for numerics.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{precondition, Result};
use crate::group::GroupElement;

/// Coefficient ring for [`Poly`].
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn is_zero(&self) -> bool;
}

impl Coeff for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
}

/// `re + i·im` with arbitrary-size rational parts, always reduced.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(
            BigRational::from_integer(BigInt::from(re)),
            BigRational::from_integer(BigInt::from(im)),
        )
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::new(
            BigRational::new(BigInt::from(p), BigInt::from(q)),
            BigRational::zero(),
        )
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let re = &self.re * &o.re - &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        Self::new(re, im)
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Coeff for GaussianRational {
    fn zero() -> Self {
        Self::from_ints(0, 0)
    }
    fn one() -> Self {
        Self::from_ints(1, 0)
    }
    fn from_int(n: i64) -> Self {
        Self::from_ints(n, 0)
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

/// Dense polynomial `Σ coeffs[i] τ^i`. Trailing zeros are trimmed so the
/// zero polynomial has no coefficients.
#[derive(Clone, PartialEq)]
pub struct Poly<T: Coeff> {
    coeffs: Vec<T>,
}

pub type RationalPolynomial = Poly<GaussianRational>;
pub type ComplexPolynomial = Poly<Complex64>;

impl<T: Coeff> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

impl<T: Coeff> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|x| x.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(x: T) -> Self {
        Self::new(vec![x])
    }

    pub fn monomial(deg: usize) -> Self {
        let mut v = vec![T::zero(); deg + 1];
        v[deg] = T::one();
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, a| acc * x.clone() + a.clone())
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * s.clone()).collect())
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Linear polynomial `uτ + v`.
    fn linear(u: i64, v: i64) -> Self {
        Self::new(vec![T::from_int(v), T::from_int(u)])
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a.clone() * T::from_int(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut out = Self::constant(T::one());
        for _ in 0..n {
            out = &out * self;
        }
        out
    }
}

impl<T: Coeff> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, o: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<T: Coeff> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, o: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<T: Coeff> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, o: &Poly<T>) -> Poly<T> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

/// `(cτ+d)^k · p((aτ+b)/(cτ+d)) = Σ p_i (aτ+b)^i (cτ+d)^{k−i}`, expanded.
pub fn mobius_substitute<T: Coeff>(p: &Poly<T>, g: &GroupElement, k: usize) -> Result<Poly<T>> {
    if let Some(deg) = p.degree() {
        if deg > k {
            return precondition(format!("degree {deg} exceeds bound {k}"));
        }
    }
    let num = Poly::<T>::linear(g.a, g.b);
    let den = Poly::<T>::linear(g.c, g.d);
    // Powers are built once and reused across terms.
    let mut num_pows = vec![Poly::constant(T::one())];
    let mut den_pows = vec![Poly::constant(T::one())];
    for i in 1..=k {
        num_pows.push(&num_pows[i - 1] * &num);
        den_pows.push(&den_pows[i - 1] * &den);
    }
    let mut out = Poly::zero();
    for (i, a) in p.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let term = (&num_pows[i] * &den_pows[k - i]).scale(a.clone());
        out = &out + &term;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gr(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    #[test]
    fn tau_squared_under_s_is_one() {
        let p = RationalPolynomial::monomial(2);
        let out = mobius_substitute(&p, &GroupElement::S, 2).unwrap();
        assert_eq!(out, RationalPolynomial::constant(gr(1)));
    }

    #[test]
    fn constant_under_t() {
        let p = RationalPolynomial::constant(gr(1));
        let out = mobius_substitute(&p, &GroupElement::T, 0).unwrap();
        assert_eq!(out, p);
    }

    #[test]
    fn tau_under_lower_unipotent() {
        // τ(τ+1)² = τ³ + 2τ² + τ
        let p = RationalPolynomial::monomial(1);
        let g = GroupElement::new(1, 0, 1, 1).unwrap();
        let out = mobius_substitute(&p, &g, 3).unwrap();
        let expect = RationalPolynomial::new(vec![gr(0), gr(1), gr(2), gr(1)]);
        assert_eq!(out, expect);
    }

    #[test]
    fn degree_overflow_rejected() {
        let p = RationalPolynomial::monomial(3);
        assert!(mobius_substitute(&p, &GroupElement::S, 2).is_err());
    }

    #[test]
    fn zero_polynomial_has_no_degree() {
        let p = RationalPolynomial::new(vec![gr(0), gr(0)]);
        assert!(p.is_zero());
        assert_eq!(p.degree(), None);
    }
}
