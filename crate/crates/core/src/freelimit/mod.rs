//! Free-probability limit objects: measures and their Cauchy transforms,
//! free convolutions, free Haar traces and norm formulas.

pub mod cauchy;
pub mod haar_trace;
pub mod measure;
pub mod norms;
pub mod subordination;

pub use cauchy::{cauchy_transform, CauchyTransform};
pub use haar_trace::{free_haar_trace, reduce_word};
pub use measure::{
    arcsine_cdf, arcsine_measure, kesten_measure, kolmogorov_distance, kolmogorov_to_cdf, kolmogorov_to_empirical,
    semicircle_cdf, semicircle_measure, semicircle_measure_with, uniform_measure, Atom, CompactMeasure,
};
pub use norms::{
    akemann_ostrand_norm, fell_norm, haagerup_bound, kemp_speicher_bound, kesten_norm, lehner_cross_check,
    lehner_norm, LehnerCrossCheck,
};
pub use subordination::{
    free_add_convolve, free_add_convolve_with, free_compression, free_mult_convolve, free_mult_convolve_with,
};

use crate::error::Result;
use crate::spectral::SupportSet;

/// Atom points plus cells with density above `density_threshold`.
pub fn measure_support(mu: &CompactMeasure, density_threshold: f64) -> Result<SupportSet> {
    mu.support(density_threshold)
}
