pub mod dims;
pub mod pressure;
pub mod spectrum;
pub mod synth;
pub mod verify;
