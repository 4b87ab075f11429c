//! Exact solvers for maximum happy edge (MHE) and maximum happy vertex
//! (MHV) coloring, weighted and unweighted.

pub mod bench;
pub mod dispatch;
pub mod error;
pub mod flow;
pub mod flow2;
pub mod io;
pub mod kernel;
pub mod limits;
pub mod model;
pub mod nddiv;
pub mod oracle;
pub mod partition;
pub mod transforms;
pub mod treedp;
pub mod twdp;

pub use error::{Error, Result};
pub use model::{evaluate_objective, validate_instance, Color, Graph, Instance, Problem, Solution, Variant, Vertex, Weight};
