//! Entanglement localization on multiqubit pure states.
//!
//! The crate computes the n-tangle, the entanglement of assistance (EA, the
//! best average tangle of `B` after an arbitrary rank-one measurement of `A`)
//! and lower bounds on the localizable entanglement (LE, the same with
//! product measurements only). For graph states it decides `EA ∈ {0, 1}` with
//! a GF(2) linear system, which scales to graphs far beyond dense simulation.
//!
//! ```
//! use entloc::graphs::{Bipartition, Graph};
//! use entloc::graphtest::ea_graph_test;
//! use entloc::localization::ea;
//! use entloc::quantum::build_graph_state;
//!
//! // Path 0-1-2, measure the end vertex.
//! let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
//! let bp = Bipartition::from_a(3, &[0]).unwrap();
//! assert!(ea_graph_test(&g, &bp).unwrap());
//! let dense = ea(&build_graph_state(&g).unwrap(), &bp).unwrap();
//! assert!((dense - 1.0).abs() < 1e-9);
//! ```

pub mod cluster;
pub mod error;
pub mod gf2;
pub mod graphs;
pub mod graphtest;
pub mod localization;
pub mod quantum;
pub mod rng;

pub use error::{Error, Result};
