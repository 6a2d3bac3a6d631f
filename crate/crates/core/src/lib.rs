//! Divisor theory on finite multigraphs: chip-firing, Dhar reduction,
//! Baker-Norine rank, gonality, harmonic morphisms onto trees and the
//! order-3 automorphisms that realise degree-3 tree quotients.

pub mod automorphism;
pub mod constructions;
pub mod divisor;
pub mod error;
pub mod gonality;
pub mod graph;
pub mod io;
pub mod morphism;

pub use divisor::Divisor;
pub use error::{Error, ErrorKind, Result};
pub use graph::{Multigraph, VertexSet};
