//! Degree growth, Weil heights, arithmetic degrees and return densities.

pub mod degree;
pub mod density;
pub mod height;

pub use degree::{degree_sequence, ksm_fit, DegreeSequence, KsmFit, LambdaEstimate};
pub use density::{density_of_return_set, density_profile, dyadic_windows, DensityEntry, DensityProfile};
pub use height::{
    arithmetic_degree_profile, ln_big, orbit_heights, weil_height, ArithmeticDegreeProfile, HPlus, Height,
    HeightRecord, RootValue,
};
