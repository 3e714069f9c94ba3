//! Finite-scale geometry of the synthesized series: iso-Holder covers,
//! box-counting dimensions of graphs and ranges, oscillation exponents and
//! Riesz-energy diagnostics.

pub mod boxdim;
pub mod cover;
pub mod energy;
pub mod oscillation;

pub use boxdim::{
    graph_box_count, graph_box_dimension, range_box_count, range_box_dimension, DimEstimate,
    DimMethod,
};
pub use cover::{carrier_cover, iso_holder_cover, CarrierCover, DyadicCover};
pub use energy::{energy_scan, riesz_energy, EnergyReport, EnergyScan, KernelKind};
pub use oscillation::oscillation_exponent;
