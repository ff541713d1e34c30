//! Anonymous, strategy-proof binary social choice with indifference.
//!
//! A society of `n` voters picks one of two alternatives, `a` or `b`; each
//! voter favors `a`, favors `b`, or declares indifference. Rules that treat
//! voters anonymously factor through the tally `(k, m)` of supporters, so
//! they live on the triangular grid `G = {(k, m) : k + m <= n}` as two-valued
//! functions. The strategy-proof ones among them are exactly the dually
//! monotone functions, and those in turn are exactly the staircase fillings
//! of `G` named by segment-group lists `q = (q_1, ..., q_s)` — `2^(n+1)`
//! rules in all. The same family carries an equivalent naming by up-and-down
//! sequences of majority quotas.
//!
//! The crate provides all the pieces and the machinery to check them against
//! each other:
//!
//! - [`grid`]: the grid, displacement cones, comprehensive sets, dense grid
//!   functions, and the dual-monotonicity test with its four equivalent
//!   characterizations.
//! - [`profiles`]: raw ballot profiles, the anonymity quotient, and
//!   brute-force oracles for anonymity and strategy-proofness.
//! - [`ablist`]: segment-group lists, anchor sets, building the function a
//!   list names, the greedy decomposition back, and enumeration of the whole
//!   family.
//! - [`quota`]: majority-quota sequences, conversions in both directions
//!   (difference formulas cross-checked against the triangular matrix
//!   transform), and a direct region evaluator used as an independent oracle.
//! - [`render`]: text and SVG diagrams of any grid function.
//!
//! Everything is pure and deterministic; randomized sweeps take explicit
//! seeds.

pub mod ablist;
pub mod error;
pub mod grid;
pub mod profiles;
pub mod quota;
pub mod render;
pub mod rng;

pub use ablist::{decompose, enumerate_ablists, AbList, AnchorSets};
pub use error::{Error, Result};
pub use grid::{
    cone_shift, enumerate_grid_functions, Alternative, Cone, Grid, GridFunction, GridPoint,
};
pub use profiles::{
    canonical_profile, eval_scf, find_manipulation, grid_manipulation_check, is_anonymous, Ballot,
    Manipulation, Profile, ScfOracle, SweepConfig, SweepMode,
};
pub use quota::{
    dual_quota, eval_quota_regions, q_from_quotas, quotas_from_q, ConversionMatrix, QuotaSequence,
};
pub use render::{
    horizontal_a_runs, parse_ascii, render_ascii, render_svg, vertical_b_runs, Run, SvgOptions,
};
