//! Exact arithmetic: rationals, 𝔽_p, 𝔽_p(t), sparse polynomials, polynomial maps, and reduction
//! into ℤ/p^e.

pub mod fp;
pub mod map;
pub mod parse;
pub mod poly;
pub mod residue;
pub mod scalar;

pub use fp::{check_prime, is_prime, Fp, FpPoly, RatFunc};
pub use map::{compose_maps, eval_map, PolyMap, Point};
pub use parse::{parse_map, parse_point, parse_poly, parse_scalar};
pub use poly::{Degree, Monomial, MultiPoly};
pub use residue::{reduce_mod_p, PrimePower, Reducible, Residue, ResidueMap, ResiduePoly};
pub use scalar::{rat, FieldKind, Scalar};
