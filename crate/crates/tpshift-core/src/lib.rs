//! Reachability in temporal graphs built from k time-labeled base paths,
//! with solvers that shift labels to maximize what a source can reach.

pub mod budgeted;
pub mod error;
pub mod format;
pub mod graph;
pub mod ilp;
pub mod instances;
pub mod par;
pub mod switch;
pub mod unbounded;

pub use budgeted::{BudgetedSolution, SolverConfig};
pub use error::{Error, Result};
pub use format::{parse_instance, write_instance};
pub use graph::{BasePath, Label, Mode, PathId, ShiftOperation, TemporalKPathGraph, VertexId};
pub use par::Exec;
pub use switch::{Switch, SwitchPathTree, SwitchVertexSet};
