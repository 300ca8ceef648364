//! Score-based polytree learning.
//!
//! A polytree is a DAG whose skeleton is a forest. Given per-node candidate
//! parent sets with local scores, the solvers here find a polytree of maximum
//! total score:
//!
//! * [`exactdp`]: an exact dynamic program over `(S, T)` node-set pairs, and a
//!   variant that discards states whose `|S| - |T|` gap exceeds a
//!   logarithmic bound (sound for bounded in-degree).
//! * [`greedy`]: three polynomial-time approximations with certified ratios
//!   (`k + 1` for bounded in-degree, `2` for additive scores, `2q` for
//!   components of at most `q` arcs).
//! * [`oracle`]: brute-force ground truth used by the test suites.
//! * [`reductions`]: hardness constructions from set partitioning and
//!   maximum independent set, usable as structured test instances.

pub mod error;
pub mod exactdp;
pub mod gen;
pub mod greedy;
pub mod model;
pub mod oracle;
pub mod reductions;
pub mod scoreio;
pub mod unionfind;

pub use error::{ModelError, ParseError, SolveError};
pub use model::{Algorithm, Instance, NodeId, NodeSet, Polytree, Score, SolveResult};
