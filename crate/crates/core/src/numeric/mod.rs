//! Scalars, exact and floating polynomials, Fourier series, quadrature and
//! small dense linear algebra.

pub mod fourier;
pub mod linalg;
pub mod poly;
pub mod quadrature;
pub mod scalar;

pub use fourier::{fourier_extract, fourier_extract_vec, Extraction, FourierSeries};
pub use linalg::{CMatrix, CVector};
pub use poly::{mobius_substitute, ComplexPolynomial, GaussianRational, Poly, RationalPolynomial};
pub use quadrature::{contour_integrate, contour_integrate_vec, Decay, Segment};
pub use scalar::{c, cpow, e, e_real, C64, I, Q};
