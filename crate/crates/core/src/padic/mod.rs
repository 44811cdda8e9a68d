//! Capped-precision p-adic numbers, integral power series on the unit disc, binomial
//! (Mahler) polynomials and Strassmann zero counting.

pub mod mahler;
pub mod number;
pub mod rconst;
pub mod series;
pub mod strassmann;

pub use mahler::{factorial_valuation, mahler_term};
pub use number::{valuation, PadicNumber, Valuation};
pub use rconst::RConstant;
pub use series::{PadicSeries, SeriesSummary};
pub use strassmann::{find_integer_zeros, strassmann_bound, DiscReport, StrassmannBound, ZeroSearch};
