//! Return sets `{n ≥ 0 : f^n(x) ∈ V}`: exact oracle, residue cycles, the p-adic classifier
//! and linear recurrences.

pub mod brute;
pub mod classify;
pub mod cycle;
pub mod problem;
pub mod set;
pub mod sml;

pub use brute::{brute_force_returns, exact_scan, ExactScan};
pub use classify::{attempt_prime, classify_returns, ClassOutcome, ClassReport, PrimeAttempt};
pub use cycle::{good_primes, residue_cycle, select_prime, ResidueCycle};
pub use problem::{OrbitProblem, Recurrence, SolverConfig};
pub use set::{Progression, ReturnSet, Status, UnresolvedClass};
pub use sml::{recurrence_zeros, sml_solve};
