//! Solvers for diverse multistage combinatorial problems.
//!
//! Given a sequence of problem instances and a diversity threshold, decide
//! and construct per-stage solutions whose consecutive symmetric differences
//! all reach the threshold. The engine computes a small representative
//! family of each stage's solution set through colored exact subproblem
//! queries and then chains stages by dynamic programming. Stage kinds:
//! plurality voting, matroid independent sets (including spanning forests),
//! perfect matchings, and s-t paths.

pub mod budget;
pub mod coloring;
pub mod error;
pub mod polyring;
pub mod solution;
pub mod solver;
pub mod universal;

pub use budget::ErrorBudget;
pub use error::{Error, Result};
pub use solution::{symmetric_difference, Coloring, CountVector, ElementId, Solution};
pub use solver::ColoredExactSolver;
