//! Instances, parent-set families, polytrees and their scoring.

mod instance;
mod nodeset;
mod polytree;
mod result;
mod score;

pub use instance::{
    is_additive_consistent, normalize, Instance, InstanceBuilder, NormalizeWarning,
    ParentSetFamily, ADDITIVE_TOLERANCE,
};
pub use nodeset::{Iter as NodeSetIter, NodeId, NodeSet};
pub use polytree::{
    check_bounds, check_constraints, component_arc_counts, score, validate_polytree,
    ConstraintReport, ConstraintViolation, Polytree, PolytreeCheck,
};
pub use result::{Algorithm, SolveResult, SolveStats};
pub use score::Score;
