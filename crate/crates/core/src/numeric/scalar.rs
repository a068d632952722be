//! Scalar helpers: principal powers, `e(x)`, compensated sums and the text
//! formats used on the command line (`re+imi`, `p/q`).

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{input, Result};

pub type C64 = Complex64;
pub type Q = Rational64;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `exp(2πi x)`.
#[inline]
pub fn e(x: C64) -> C64 {
    (C64::new(0.0, 2.0 * PI) * x).exp()
}

/// `exp(2πi x)` for real `x`.
#[inline]
pub fn e_real(x: f64) -> C64 {
    let t = 2.0 * PI * x;
    C64::new(t.cos(), t.sin())
}

pub fn q_to_f64(q: Q) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Principal branch `z^w = exp(w Log z)`, `arg z ∈ (−π, π]`.
///
/// A negative real `z` carrying a signed zero imaginary part is treated as
/// lying on the upper side of the cut.
pub fn cpow(z: C64, w: f64) -> C64 {
    if z.is_zero() {
        return if w == 0.0 { C64::new(1.0, 0.0) } else { C64::zero() };
    }
    if w.fract() == 0.0 && w.abs() < 64.0 {
        return z.powi(w as i32);
    }
    let arg = if z.im == 0.0 && z.re < 0.0 { PI } else { z.arg() };
    let lr = z.norm().ln();
    C64::from_polar((w * lr).exp(), w * arg)
}

/// `cτ + d` for integer `c, d`, with a `+0` imaginary part when `c = 0`.
#[inline]
pub fn lin(cc: i64, d: i64, tau: C64) -> C64 {
    if cc == 0 {
        C64::new(d as f64, 0.0)
    } else {
        C64::new(cc as f64 * tau.re + d as f64, cc as f64 * tau.im)
    }
}

/// Neumaier compensated summation for complex terms.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: C64,
    comp: C64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: C64) {
        let (s, cr) = two_sum(self.sum.re, x.re);
        let (t, ci) = two_sum(self.sum.im, x.im);
        self.sum = C64::new(s, t);
        self.comp += C64::new(cr, ci);
    }

    pub fn value(&self) -> C64 {
        self.sum + self.comp
    }
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let corr = if a.abs() >= b.abs() { (a - s) + b } else { (b - s) + a };
    (s, corr)
}

/// Parses `re+imi`, `re-imi`, `re`, `imi`, `i`, `-i`.
pub fn parse_complex(text: &str) -> Result<C64> {
    let s: String = text.chars().filter(|ch| !ch.is_whitespace()).collect();
    if s.is_empty() {
        return input("empty complex number");
    }
    if !s.ends_with('i') {
        return s
            .parse::<f64>()
            .map(|re| C64::new(re, 0.0))
            .map_err(|_| crate::Error::Input(format!("bad complex number '{text}'")));
    }
    let body = &s[..s.len() - 1];
    // The split point is the last sign that is not the leading sign and not
    // part of an exponent.
    let bytes = body.as_bytes();
    let mut split = None;
    for idx in (1..bytes.len()).rev() {
        let ch = bytes[idx];
        if (ch == b'+' || ch == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
            split = Some(idx);
            break;
        }
    }
    let parse_im = |t: &str| -> Result<f64> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t
                .parse::<f64>()
                .map_err(|_| crate::Error::Input(format!("bad complex number '{text}'"))),
        }
    };
    match split {
        Some(idx) => {
            let re = body[..idx]
                .parse::<f64>()
                .map_err(|_| crate::Error::Input(format!("bad complex number '{text}'")))?;
            Ok(C64::new(re, parse_im(&body[idx..])?))
        }
        None => Ok(C64::new(0.0, parse_im(body)?)),
    }
}

pub fn format_complex(z: C64) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Parses `p/q` or an integer.
pub fn parse_rational(text: &str) -> Result<Q> {
    let t = text.trim();
    let bad = || crate::Error::Input(format!("bad rational '{text}'"));
    match t.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Q::new(p, q))
        }
        None => t.parse::<i64>().map(Q::from_integer).map_err(|_| bad()),
    }
}

pub fn format_rational(q: Q) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Fractional part in `[0, 1)`.
pub fn frac_q(q: Q) -> Q {
    q - q.floor()
}

/// Serde adapter storing a rational as `"p/q"`.
pub mod rational_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(*q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter storing a complex number as `[re, im]`.
pub mod complex_pair {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeTuple;
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&z.re)?;
        t.serialize_element(&z.im)?;
        t.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<C64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(C64::new(re, im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_complex_forms() {
        assert_eq!(parse_complex("1.5+2i").unwrap(), c(1.5, 2.0));
        assert_eq!(parse_complex("-0.5-3.25i").unwrap(), c(-0.5, -3.25));
        assert_eq!(parse_complex("2i").unwrap(), c(0.0, 2.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("1e-3+2e+1i").unwrap(), c(1e-3, 20.0));
        assert_eq!(parse_complex("7").unwrap(), c(7.0, 0.0));
        assert!(parse_complex("abc").is_err());
        let z = c(0.25, -1.0);
        assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("3/6").unwrap(), Q::new(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), Q::from_integer(-4));
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn principal_power_on_the_cut() {
        let z = cpow(c(-4.0, 0.0), 0.5);
        assert!((z - c(0.0, 2.0)).norm() < 1e-15);
        let w = cpow(c(-4.0, -1e-300), 0.5);
        assert!((w - c(0.0, -2.0)).norm() < 1e-12);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::new();
        s.add(c(1.0, 0.0));
        for _ in 0..1000 {
            s.add(c(1e-17, 0.0));
        }
        s.add(c(-1.0, 0.0));
        assert!((s.value().re - 1e-14).abs() < 1e-25);
    }
}
