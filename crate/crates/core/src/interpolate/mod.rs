//! p-adic interpolation of iterates on a closed unit polydisc.

pub mod action;
pub mod affinoid;
pub mod inverse;

pub use action::{
    interpolate_action, plan_for_available, plan_terms, series_from_orbit, tail_valuation,
    InterpolationCertificate, InterpolationResult, MahlerPlan,
};
pub use affinoid::{boost_iterate, delta_norm, AffinoidSelfMap, DeltaNorm, Provenance};
pub use inverse::{delta, delta_powers, invert_map, vector_field};
