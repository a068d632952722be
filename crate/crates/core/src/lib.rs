//! Jacobi forms, skew-holomorphic Jacobi forms and the parabolic Eichler
//! cohomology of the Jacobi group over `SL(2,ℤ)`, computed numerically.
//!
//! The layers build on each other:
//!
//! - [`numeric`]: scalars, exact polynomials, Fourier series, quadrature.
//! - [`group`]: `SL(2,ℤ)`, the Jacobi group, words and cosets.
//! - [`multiplier`]: multiplier systems, unitary representations, `ρ′`, `κ`.
//! - [`vvform`]: vector-valued forms, Poincaré series, supplementary data.
//! - [`theta`]: theta functions, heat operator, Jacobi slash operators and
//!   the theta decomposition.
//! - [`eichler`]: Eichler integrals and period polynomials.
//! - [`cohomology`]: cocycles, coboundaries, the map `η̃`.
//! - [`cli`]: the command-line driver behind the `jacobi-cohomology` binary.

pub mod cli;
pub mod cohomology;
pub mod eichler;
pub mod error;
pub mod group;
pub mod multiplier;
pub mod numeric;
pub mod theta;
pub mod vvform;

pub use error::{Error, Result};
