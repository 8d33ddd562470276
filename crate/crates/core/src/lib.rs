//! Fine-grained triangle problems: exact oracles, the reduction chain from
//! all-pairs shortest paths down to zero-weight triangle, an idealized
//! quantum-search cost model, and cost-accounted algorithms for Δ-matching
//! triangles and triangle collection.

pub mod error;
pub mod instances;
pub mod oracles;
pub mod qcost;
pub mod reductions;
pub mod triangles;
pub mod harness;

pub use error::{Error, Result};
