//! Random-matrix ensembles, spectral couplings, noncommutative polynomials
//! and the free-probability limit objects they converge to.

pub mod ensembles;
pub mod error;
pub mod freelimit;
pub mod matrix;
pub mod ncalg;
pub mod par;
pub mod rng;
pub mod spectral;

pub use faer::c64;

pub use ensembles::{EnsembleKind, EnsembleSpec, Field};
pub use error::{Error, Result};
pub use freelimit::CompactMeasure;
pub use matrix::{MatrixFlags, SquareMatrix};
pub use par::Execution;
pub use ncalg::{NcPolynomial, StarLetter, StarMonomial};
pub use rng::Seed;
pub use spectral::{QuantileMap, SpectralDecomposition, StepFunction, SupportSet};
