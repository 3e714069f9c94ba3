//! Thermodynamic formalism: pressure, exact Gibbs cylinder measures, the
//! `tau` spectrum and its Legendre transform, and the exponents of restricted
//! equilibrium states.

pub mod curve;
pub mod gibbs;
pub mod potential;
pub mod restricted;

pub use curve::{
    legendre, pressure, pressure_oracle, tau, tau_at, tau_oracle, tau_prime, tau_prime_fd,
    wavelet_scaling_prediction, CurveKind, SpectrumCurve, CONCAVITY_TOL,
};
pub use gibbs::GibbsModel;
pub use potential::Potential;
pub use restricted::{restricted_exponents, theorem_spectra, RestrictedExponents};
