//! Numerical laboratory for multifractal random wavelet series built from
//! Gibbs measures on binary subshifts of finite type.
//!
//! The crate is organised along the pipeline:
//!
//! * [`symbolic`] — words, cylinders, subshifts from forbidden words,
//!   transitive components and spectral radii;
//! * [`thermo`] — pressure, exact Gibbs cylinder measures, the `tau`/`xi`
//!   spectra and Legendre transforms;
//! * [`synthesis`] — mother wavelets, coefficient trees, multiplicative
//!   perturbations and grid sampling of the series;
//! * [`leaders`] — the wavelet-leader pyramid and scaling-function
//!   estimation;
//! * [`geometry`] — iso-Holder covers, box-counting dimensions of graphs and
//!   ranges, and Riesz-energy diagnostics;
//! * [`verify`] — the end-to-end comparison of predicted against estimated
//!   spectra.
//!
//! A companion guide with worked examples lives in the repository's `book/`
//! directory; its code snippets are compiled and run as doc-tests.

pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod leaders;
pub mod rng;
pub mod stats;
pub mod symbolic;
pub mod synthesis;
pub mod thermo;
pub mod verify;

pub use error::{Error, Result};
