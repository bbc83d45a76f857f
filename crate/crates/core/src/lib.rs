//! Exact-arithmetic calculus for split vector bundles and coherent sheaves on
//! the projective line, with a graded-matrix engine, a binary-forms toolkit,
//! and an audit ledger that replays the dimension counts behind three moduli
//! strata of regular surfaces with K^2 = 8 and p_g = 4 (dimensions 32, 30
//! and 26).
//!
//! Everything is exact: degrees are checked integers, coefficients are
//! arbitrary-precision rationals, and every randomized construction is
//! deterministic in its seed.

pub mod audit;
pub mod expr;
pub mod forms;
pub mod gmat;
pub mod qlinalg;
pub mod splitting;

pub use qlinalg::Rat;
pub use splitting::{SheafSummary, SplittingType};
