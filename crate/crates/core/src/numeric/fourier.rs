//! Truncated Fourier series at a cusp and their numerical extraction from an
//! evaluator by discrete Fourier inversion on a horizontal line.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::ops::RangeInclusive;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::scalar::{format_rational, frac_q, parse_rational, q_to_f64, CompensatedSum, C64, Q};
use crate::error::{input, Result};

/// `Σ_n a(n) exp(2πi (n+κ) τ / λ)` with finitely many stored coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierSeries {
    pub width: Q,
    pub kappa: Q,
    pub coeffs: BTreeMap<i64, C64>,
}

impl FourierSeries {
    pub fn new(width: Q, kappa: Q, coeffs: BTreeMap<i64, C64>) -> Result<Self> {
        if width <= Q::zero() {
            return input("width must be positive");
        }
        if kappa < Q::zero() || kappa >= Q::from_integer(1) {
            return input(format!("kappa {kappa} outside [0,1)"));
        }
        if coeffs.values().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return input("non-finite coefficient");
        }
        Ok(Self { width, kappa, coeffs })
    }

    pub fn zero(width: Q, kappa: Q) -> Self {
        Self { width, kappa: frac_q(kappa), coeffs: BTreeMap::new() }
    }

    pub fn n_min(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn n_max(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Frequency `(n+κ)/λ` of the `n`-th term.
    pub fn frequency(&self, n: i64) -> f64 {
        (n as f64 + q_to_f64(self.kappa)) / q_to_f64(self.width)
    }

    pub fn coeff(&self, n: i64) -> C64 {
        self.coeffs.get(&n).copied().unwrap_or_default()
    }

    /// Evaluation by a recurrence on `q = e(τ/λ)`, compensated.
    pub fn eval(&self, tau: C64) -> C64 {
        let Some(lo) = self.n_min() else {
            return C64::zero();
        };
        let lambda = q_to_f64(self.width);
        let q = super::scalar::e(tau / lambda);
        let mut qn = super::scalar::e(tau * (lo as f64 + q_to_f64(self.kappa)) / lambda);
        let mut acc = CompensatedSum::new();
        let mut prev = lo;
        for (&n, &a) in &self.coeffs {
            // Large gaps are jumped with a direct exponential.
            if n - prev > 8 {
                qn = super::scalar::e(tau * (n as f64 + q_to_f64(self.kappa)) / lambda);
            } else {
                for _ in prev..n {
                    qn *= q;
                }
            }
            prev = n;
            acc.add(a * qn);
        }
        acc.value()
    }

    /// Largest `|a(n)| e^{-2π(n+κ)y/λ}` over stored terms; a magnitude scale
    /// for the series at height `y`.
    pub fn scale_at(&self, y: f64) -> f64 {
        self.coeffs
            .iter()
            .map(|(&n, a)| a.norm() * (-2.0 * PI * self.frequency(n) * y).exp())
            .fold(0.0, f64::max)
    }

    pub fn conj(&self) -> Self {
        Self {
            width: self.width,
            kappa: self.kappa,
            coeffs: self.coeffs.iter().map(|(&n, a)| (n, a.conj())).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct FourierSeriesJson {
    width: String,
    kappa: String,
    coeffs: Vec<(i64, f64, f64)>,
}

impl Serialize for FourierSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FourierSeriesJson {
            width: format_rational(self.width),
            kappa: format_rational(self.kappa),
            coeffs: self.coeffs.iter().map(|(&n, a)| (n, a.re, a.im)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FourierSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = FourierSeriesJson::deserialize(d)?;
        let width = parse_rational(&raw.width).map_err(D::Error::custom)?;
        let kappa = parse_rational(&raw.kappa).map_err(D::Error::custom)?;
        let mut coeffs = BTreeMap::new();
        let mut last = None;
        for (n, re, im) in raw.coeffs {
            if last.is_some_and(|l| n <= l) {
                return Err(D::Error::custom("coefficient indices must be strictly ascending"));
            }
            last = Some(n);
            coeffs.insert(n, C64::new(re, im));
        }
        FourierSeries::new(width, kappa, coeffs).map_err(D::Error::custom)
    }
}

/// Result of [`fourier_extract`].
#[derive(Clone, Debug)]
pub struct Extraction {
    pub coeffs: BTreeMap<i64, C64>,
    pub samples: usize,
    /// Set when a coefficient at the edge of the range is not small compared
    /// with the largest one (measured at the sampling height).
    pub aliasing_warning: bool,
}

/// Number of uniform samples used for a range: at least four per mode.
pub fn default_samples(n_range: &RangeInclusive<i64>) -> usize {
    let len = (n_range.end() - n_range.start() + 1).max(1) as usize;
    (4 * len).max(8)
}

/// Discrete Fourier inversion at height `y` for several components sharing
/// one evaluator. `kappas[j]` is the offset of component `j`.
pub fn fourier_extract_vec(
    f: &dyn Fn(C64) -> Vec<C64>,
    y: f64,
    width: Q,
    kappas: &[Q],
    n_range: RangeInclusive<i64>,
    samples: Option<usize>,
) -> Result<Vec<Extraction>> {
    if y <= 0.0 {
        return input("sampling height must be positive");
    }
    if n_range.is_empty() {
        return input("empty coefficient range");
    }
    let n = samples.unwrap_or_else(|| default_samples(&n_range));
    let lambda = q_to_f64(width);
    let values: Vec<Vec<C64>> = (0..n)
        .map(|j| f(C64::new(lambda * j as f64 / n as f64, y)))
        .collect();
    let dim = kappas.len();
    if values.iter().any(|v| v.len() != dim) {
        return input("evaluator dimension does not match offsets");
    }
    let mut out = Vec::with_capacity(dim);
    for (comp, &kappa) in kappas.iter().enumerate() {
        let kap = q_to_f64(kappa);
        let mut coeffs = BTreeMap::new();
        let mut raw = Vec::new();
        for m in n_range.clone() {
            let nu = (m as f64 + kap) / lambda;
            let mut acc = CompensatedSum::new();
            for (j, v) in values.iter().enumerate() {
                let x = lambda * j as f64 / n as f64;
                let phase = -2.0 * PI * nu * x;
                acc.add(v[comp] * C64::new(phase.cos(), phase.sin()));
            }
            let mean = acc.value() / n as f64;
            raw.push(mean.norm());
            coeffs.insert(m, mean * (2.0 * PI * nu * y).exp());
        }
        let peak = raw.iter().cloned().fold(0.0, f64::max);
        let edge = raw.first().unwrap().max(*raw.last().unwrap());
        let aliasing_warning = raw.len() > 1 && peak > 0.0 && edge > 1e-6 * peak;
        if aliasing_warning {
            log::warn!("fourier_extract: edge coefficient not small (edge {edge:.3e}, peak {peak:.3e})");
        }
        out.push(Extraction { coeffs, samples: n, aliasing_warning });
    }
    Ok(out)
}

/// Scalar version of [`fourier_extract_vec`].
pub fn fourier_extract(
    f: &dyn Fn(C64) -> C64,
    y: f64,
    width: Q,
    kappa: Q,
    n_range: RangeInclusive<i64>,
    samples: Option<usize>,
) -> Result<Extraction> {
    let g = |tau: C64| vec![f(tau)];
    Ok(fourier_extract_vec(&g, y, width, &[kappa], n_range, samples)?.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::scalar::{c, e};

    #[test]
    fn single_mode() {
        let ex = fourier_extract(&|t| e(t), 2.0, Q::from_integer(1), Q::zero(), 0..=3, None).unwrap();
        assert!((ex.coeffs[&1] - c(1.0, 0.0)).norm() < 1e-10);
        assert!(ex.coeffs[&0].norm() < 1e-10);
    }

    #[test]
    fn zero_function() {
        let ex = fourier_extract(&|_| C64::zero(), 1.0, Q::from_integer(1), Q::zero(), -2..=2, None).unwrap();
        assert!(ex.coeffs.values().all(|a| a.norm() == 0.0));
        assert!(!ex.aliasing_warning);
    }

    #[test]
    fn round_trip_with_offset() {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(0, c(0.5, -1.0));
        coeffs.insert(1, c(2.0, 0.25));
        coeffs.insert(3, c(-1.0, 1.0));
        let s = FourierSeries::new(Q::from_integer(2), Q::new(1, 3), coeffs).unwrap();
        let ex = fourier_extract(&|t| s.eval(t), 1.0, s.width, s.kappa, 0..=4, Some(32)).unwrap();
        for n in 0..=4 {
            assert!((ex.coeffs[&n] - s.coeff(n)).norm() < 1e-9, "n={n}");
        }
    }

    #[test]
    fn json_round_trip_and_validation() {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(-1, c(1.0, 0.0));
        coeffs.insert(2, c(0.0, 3.0));
        let s = FourierSeries::new(Q::from_integer(1), Q::new(5, 24), coeffs).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("\"kappa\":\"5/24\""));
        let back: FourierSeries = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        let bad = r#"{"width":"1","kappa":"3/2","coeffs":[]}"#;
        assert!(serde_json::from_str::<FourierSeries>(bad).is_err());
        let unsorted = r#"{"width":"1","kappa":"0","coeffs":[[2,0,0],[1,0,0]]}"#;
        assert!(serde_json::from_str::<FourierSeries>(unsorted).is_err());
    }
}
