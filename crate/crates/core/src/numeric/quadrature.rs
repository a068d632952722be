//! Adaptive Gauss–Legendre quadrature along piecewise paths in the upper
//! half-plane, including vertical rays to `i∞` and to real cusps.
//!
//! Integrands are vector valued so that many integrals sharing one expensive
//! factor (a modular form on the path) reuse every evaluation.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use super::scalar::{C64, I};
use crate::error::{Error, Result};

const GL_ORDER: usize = 20;
const MAX_PANELS: usize = 4000;

fn gauss_legendre() -> &'static (Vec<f64>, Vec<f64>) {
    static NODES: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    NODES.get_or_init(|| legendre_nodes(GL_ORDER))
}

/// Nodes and weights on `[-1, 1]` by Newton iteration on `P_n`.
pub fn legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Decay envelope `|f| ≤ A·e^{−rate·t}·(1+t)^degree` along a ray, where `t`
/// is the height (ray to `i∞`) or the inverse height (ray to a real cusp).
/// The amplitude `A` is probed from the integrand.
#[derive(Clone, Copy, Debug)]
pub struct Decay {
    pub rate: f64,
    pub degree: f64,
}

/// One piece of an integration path.
#[derive(Clone, Copy, Debug)]
pub enum Segment {
    Line { from: C64, to: C64 },
    /// From `from` straight up to `i∞`.
    ToInfinity { from: C64, decay: Decay },
    /// From the real cusp `x` straight up to `x + i·height`. The envelope is
    /// in the variable `s = 1/Im z`.
    FromCusp { x: f64, height: f64, decay: Decay },
}

#[derive(Clone, Debug)]
pub struct QuadResult {
    pub value: Vec<C64>,
    pub error: f64,
    pub evaluations: usize,
}

fn max_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn axpy(acc: &mut [C64], s: C64, v: &[C64]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a += s * b;
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: Vec<C64>,
    halves: (Vec<C64>, Vec<C64>),
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

/// Adaptive integration of a vector function of a real parameter.
struct RealIntegrator<'a> {
    g: &'a dyn Fn(f64) -> Vec<C64>,
    dim: usize,
    evaluations: usize,
}

impl RealIntegrator<'_> {
    fn rule(&mut self, a: f64, b: f64) -> Vec<C64> {
        let (x, w) = gauss_legendre();
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let mut acc = vec![C64::default(); self.dim];
        for (xi, wi) in x.iter().zip(w) {
            let v = (self.g)(mid + half * xi);
            axpy(&mut acc, C64::new(wi * half, 0.0), &v);
        }
        self.evaluations += GL_ORDER;
        acc
    }

    fn panel(&mut self, a: f64, b: f64, whole: Vec<C64>) -> Panel {
        let m = 0.5 * (a + b);
        let left = self.rule(a, m);
        let right = self.rule(m, b);
        let value: Vec<C64> = left.iter().zip(&right).map(|(l, r)| l + r).collect();
        let diff: Vec<C64> = value.iter().zip(&whole).map(|(v, w)| v - w).collect();
        Panel { a, b, value, halves: (left, right), error: max_norm(&diff) }
    }

    fn integrate(&mut self, breaks: &[f64], tol: f64) -> Result<(Vec<C64>, f64)> {
        let mut heap = BinaryHeap::new();
        for win in breaks.windows(2) {
            let whole = self.rule(win[0], win[1]);
            heap.push(self.panel(win[0], win[1], whole));
        }
        loop {
            let total: f64 = heap.iter().map(|p| p.error).sum();
            if total <= tol || heap.len() >= MAX_PANELS {
                let mut acc = vec![C64::default(); self.dim];
                for p in heap.iter() {
                    axpy(&mut acc, C64::new(1.0, 0.0), &p.value);
                }
                if total > tol {
                    return Err(Error::Convergence(format!(
                        "quadrature error estimate {total:.3e} above {tol:.3e} after {} panels; partial estimate {:?}",
                        heap.len(),
                        acc
                    )));
                }
                return Ok((acc, total));
            }
            let worst = heap.pop().unwrap();
            let m = 0.5 * (worst.a + worst.b);
            // The halves of the worst panel become the coarse estimates of
            // its children; only the quarter rules are new work.
            let (left_whole, right_whole) = worst.halves;
            heap.push(self.panel(worst.a, m, left_whole));
            heap.push(self.panel(m, worst.b, right_whole));
        }
    }
}

fn probe_amplitude(g: &dyn Fn(f64) -> Vec<C64>, t0: f64, decay: Decay) -> f64 {
    let mut amp: f64 = 0.0;
    for dt in [0.0, 0.25, 0.5, 1.0, 2.0, 4.0] {
        let t = t0 + dt;
        let env = (-decay.rate * t).exp() * (1.0 + t).powf(decay.degree);
        let v = max_norm(&g(t));
        if env > 0.0 && v.is_finite() {
            amp = amp.max(v / env);
        }
    }
    amp
}

/// Smallest `T ≥ t0` on a grid of step `max(1/4, T/100)` where the
/// envelope tail beyond `T` is below `bound`. Slow envelopes (cusps of
/// large denominator) need `T` in the thousands.
fn truncation_point(amp: f64, t0: f64, decay: Decay, bound: f64) -> Result<f64> {
    if decay.rate <= 0.0 {
        return Err(Error::Input("decay rate must be positive".into()));
    }
    let mut t = t0;
    for _ in 0..40000 {
        let slope = decay.rate - decay.degree.max(0.0) / (1.0 + t);
        if slope > 0.0 {
            let tail = amp * (-decay.rate * t).exp() * (1.0 + t).powf(decay.degree) / slope;
            if tail < bound {
                return Ok(t);
            }
        }
        t += (0.01 * t).max(0.25);
    }
    Err(Error::Convergence("no truncation height found for ray".into()))
}

/// Unit-spaced break points over `[a, b]`.
fn breaks(a: f64, b: f64, step: f64) -> Vec<f64> {
    let n = ((b - a) / step).ceil().max(1.0) as usize;
    (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect()
}

/// Integrates `f` along `path` (segments joined in order) to absolute
/// tolerance `tol` in the max norm.
pub fn contour_integrate_vec(
    f: &dyn Fn(C64) -> Vec<C64>,
    dim: usize,
    path: &[Segment],
    tol: f64,
) -> Result<QuadResult> {
    let mut total = vec![C64::default(); dim];
    let mut err = 0.0;
    let mut evaluations = 0;
    let share = tol / path.len().max(1) as f64;
    for seg in path {
        let (val, e, n) = match *seg {
            Segment::Line { from, to } => {
                let dz = to - from;
                let g = move |t: f64| -> Vec<C64> {
                    let mut v = f(from + dz * t);
                    v.iter_mut().for_each(|x| *x *= dz);
                    v
                };
                let mut it = RealIntegrator { g: &g, dim, evaluations: 0 };
                let pieces = (dz.norm() / 0.5).ceil().max(1.0);
                let (v, e) = it.integrate(&breaks(0.0, 1.0, 1.0 / pieces), share)?;
                (v, e, it.evaluations)
            }
            Segment::ToInfinity { from, decay } => {
                // z = from + i t, dz = i dt
                let g = move |t: f64| -> Vec<C64> {
                    let mut v = f(from + I * t);
                    v.iter_mut().for_each(|x| *x *= I);
                    v
                };
                let y0 = from.im;
                let gy = |y: f64| g(y - y0);
                let amp = probe_amplitude(&gy, y0, decay);
                let top = truncation_point(amp, y0, decay, share / 10.0)?;
                let mut it = RealIntegrator { g: &g, dim, evaluations: 0 };
                let (v, e) = it.integrate(&breaks(0.0, (top - y0).max(0.25), 1.0), 0.9 * share)?;
                (v, e + share / 10.0, it.evaluations + 6)
            }
            Segment::FromCusp { x, height, decay } => {
                // z = x + i/s, dz = −i s^{-2} ds, s runs from ∞ down to 1/height.
                let g = move |s: f64| -> Vec<C64> {
                    let mut v = f(C64::new(x, 1.0 / s));
                    let w = I / (s * s);
                    v.iter_mut().for_each(|z| *z *= w);
                    v
                };
                let s0 = 1.0 / height;
                let shifted = Decay { rate: decay.rate, degree: decay.degree - 2.0 };
                let amp = probe_amplitude(&g, s0, shifted);
                let top = truncation_point(amp, s0, shifted, share / 10.0)?;
                let mut it = RealIntegrator { g: &g, dim, evaluations: 0 };
                let (v, e) = it.integrate(&breaks(s0, top.max(s0 + 0.25), 1.0), 0.9 * share)?;
                (v, e + share / 10.0, it.evaluations + 6)
            }
        };
        axpy(&mut total, C64::new(1.0, 0.0), &val);
        err += e;
        evaluations += n;
    }
    Ok(QuadResult { value: total, error: err, evaluations })
}

/// Scalar wrapper around [`contour_integrate_vec`].
pub fn contour_integrate(f: &dyn Fn(C64) -> C64, path: &[Segment], tol: f64) -> Result<C64> {
    let g = |z: C64| vec![f(z)];
    Ok(contour_integrate_vec(&g, 1, path, tol)?.value[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::scalar::{c, e};
    use std::f64::consts::PI;

    #[test]
    fn legendre_weights_sum_to_two() {
        let (x, w) = legendre_nodes(20);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        let m4: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(4)).sum();
        assert!((m4 - 0.4).abs() < 1e-14);
    }

    #[test]
    fn constant_on_vertical_segment() {
        let path = [Segment::Line { from: c(0.0, 1.0), to: c(0.0, 2.0) }];
        let v = contour_integrate(&|_| c(1.0, 0.0), &path, 1e-12).unwrap();
        assert!((v - I).norm() < 1e-13);
    }

    #[test]
    fn exponential_to_infinity() {
        let path = [Segment::ToInfinity { from: I, decay: Decay { rate: 2.0 * PI, degree: 0.0 } }];
        let v = contour_integrate(&|z| e(z), &path, 1e-12).unwrap();
        let expect = I * (-2.0 * PI).exp() / (2.0 * PI);
        assert!((v - expect).norm() < 1e-12, "{v} vs {expect}");
    }

    #[test]
    fn polynomial_on_horizontal_segment() {
        let path = [Segment::Line { from: I, to: c(1.0, 1.0) }];
        let v = contour_integrate(&|z| z, &path, 1e-12).unwrap();
        let expect = 0.5 * (c(1.0, 1.0) * c(1.0, 1.0) - I * I);
        assert!((v - expect).norm() < 1e-13);
    }

    #[test]
    fn ray_from_real_cusp() {
        // ∫_0^{i} e^{-2π/(i z)}... use f(z) = exp(2πi(−1/z)) which decays as z → 0.
        let f = |z: C64| e(-1.0 / z);
        let path = [Segment::FromCusp { x: 0.0, height: 1.0, decay: Decay { rate: 2.0 * PI, degree: 0.0 } }];
        let v = contour_integrate(&f, &path, 1e-12).unwrap();
        // Substituting w = −1/z maps the path to the ray from i to i∞ with dz = dw/w².
        let g = |w: C64| e(w) / (w * w);
        let path2 = [Segment::ToInfinity { from: I, decay: Decay { rate: 2.0 * PI, degree: 0.0 } }];
        let expect = contour_integrate(&g, &path2, 1e-12).unwrap();
        assert!((v + expect).norm() < 1e-11, "{v} vs {expect}");
    }
}
