//! Exact-arithmetic tools for the Held–Karp relaxations of the asymmetric
//! traveling salesman problem and its s-t path version.

pub mod closure;
pub mod error;
pub mod exact;
pub mod flow;
pub mod graph;
pub mod instance;
pub mod instances;
pub mod lp;
pub mod merge;
pub mod rational;
pub mod relaxation;
pub mod structure;
pub mod walk;

pub use error::{Error, Result};
pub use graph::{SccChain, VertexSet};
pub use instance::{validate_instance, Instance, InstanceBuilder, Mode};
pub use rational::Rational;
pub use walk::{walk_cost_and_check, Walk};
