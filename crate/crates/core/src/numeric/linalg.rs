//! Thin wrappers over `nalgebra` for the small complex systems that appear in
//! theta decomposition, polynomial fitting and coboundary solving.

use nalgebra::{DMatrix, DVector};

use super::scalar::C64;
use crate::error::{Error, Result};

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Least-squares solution via SVD.
#[derive(Clone, Debug)]
pub struct LeastSquares {
    pub x: CVector,
    /// `‖Ax − b‖₂`.
    pub residual: f64,
    pub singular_values: Vec<f64>,
    /// Number of singular values below `rank_tol · σ_max`.
    pub kernel_dim: usize,
}

pub fn lstsq(a: &CMatrix, b: &CVector, rank_tol: f64) -> Result<LeastSquares> {
    if a.nrows() != b.len() {
        return Err(Error::Input("least squares: dimension mismatch".into()));
    }
    let svd = a.clone().svd(true, true);
    let sv: Vec<f64> = svd.singular_values.iter().cloned().collect();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let eps = rank_tol * smax.max(f64::MIN_POSITIVE);
    let x = svd
        .solve(b, eps)
        .map_err(|e| Error::Convergence(format!("svd solve: {e}")))?;
    let residual = (a * &x - b).norm();
    let rank = sv.iter().filter(|&&s| s > eps).count();
    let kernel_dim = a.ncols() - rank;
    Ok(LeastSquares { x, residual, singular_values: sv, kernel_dim })
}

/// 2-norm condition number `σ_max / σ_min` of a square matrix.
pub fn condition_number(a: &CMatrix) -> f64 {
    let sv = a.clone().singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if smin == 0.0 {
        f64::INFINITY
    } else {
        smax / smin
    }
}

/// Solves a square system by LU with partial pivoting.
pub fn solve(a: &CMatrix, b: &CVector) -> Result<CVector> {
    a.clone()
        .lu()
        .solve(b)
        .ok_or_else(|| Error::Convergence("singular matrix".into()))
}

pub fn max_abs(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
