//! Construction of the random wavelet series: mother wavelets, coefficient
//! trees from Gibbs measures, multiplicative perturbations, grid sampling.

pub mod coeffs;
pub mod series;
pub mod wavelet;

pub use coeffs::{build_coefficients, perturb, CoefficientTree, PerturbLaw, SignRule};
pub use series::{synthesize, SampledSeries, DUMP_MAGIC};
pub use wavelet::{zero_clearance, MotherWavelet, WaveletKind};
