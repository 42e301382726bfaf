//! Construction and identity checking for algebraic quantum groups.
//!
//! Finite-dimensional Hopf *-algebras are handled from structure constants in
//! exact arithmetic; Pol(SU_q(2)) through a PBW rewriting engine; both feed the
//! analytic one-parameter groups and the duality checks.

// Index loops mirror the structure-constant formulas; `!(x <= tol)` is kept so NaN fails.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod duality;
pub mod finqg;
pub mod linalg;
pub mod oneparam;
pub mod report;
pub mod scalars;
pub mod suq2;
