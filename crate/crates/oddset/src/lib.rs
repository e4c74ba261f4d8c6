//! Finite point sets whose pairwise Manhattan (ℓ1) distances are all odd
//! integers, over exact rational arithmetic.
//!
//! The crate provides:
//!
//! - [`rational`]: exact scalars, denominator classification, and a
//!   minimum-denominator interval search.
//! - [`geometry`]: points, the ℓ1 metric, odd-distance verification with
//!   machine-checkable certificates, and the half-integer parity audit.
//! - [`construct`]: the doubling construction that produces 2^n points in
//!   (½ℤ)^n with all pairwise distances odd.
//! - [`search`]: exhaustive box enumeration, the odd-distance graph, and an
//!   exact maximum-clique solver with the 2^n pigeonhole cap.
//! - [`rationalize`]: replacement of irrational or unverified coordinates by
//!   nearby small rationals that realize exactly odd pairwise distances, and
//!   dyadic rescaling.
//! - [`json`]: the JSON interchange formats used by the command-line tool.

// Error variants carry exact rationals for diagnostics; they are built on
// cold validation paths, so variant size is not worth boxing for.
#![allow(clippy::result_large_err)]

pub mod construct;
pub mod error;
pub mod geometry;
pub mod json;
pub mod rational;
pub mod rationalize;
pub mod search;

pub use construct::{build_odd_set, dim2_pair, extend_dimension, spread_translate, Dim2Pair};
pub use error::{Error, Result};
pub use geometry::{
    l1_distance, parity_audit, phi_fingerprint, verify_odd_set, OddCertificate, PairResult,
    Parity, ParityAudit, Point, PointSet,
};
pub use rational::{
    best_rational_in_interval, checked_div, classify_rational, is_odd_integer,
    odd_denominator_lcm, parse_decimal, parse_rational, rat, NumberClass, Rational,
};
pub use rationalize::{
    assemble_system, dyadic_scale, ensure_separation, perturb_and_solve, rationalize_set,
    rationalize_set_with_report, rref, DecimalPointSet, LinearSystem, RationalizeReport,
    RrefResult, SignPattern,
};
pub use search::{
    bound_report, build_odd_graph, enumerate_box, max_odd_clique, BoundReport, CliqueResult,
    Lattice, LatticeBox, OddGraph, DEFAULT_VERTEX_LIMIT,
};
