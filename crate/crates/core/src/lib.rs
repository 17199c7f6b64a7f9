//! Subset-sum decision, counting, and sampling through character-sum
//! identities over finite fields and prime-power rings, with empirical
//! working-space instrumentation.

pub mod charsum;
pub mod cli;
pub mod counting;
pub mod decider;
pub mod error;
pub mod model;
pub mod numtheory;
pub mod oracle;
pub mod sampler;
pub mod vector;

pub use error::{Error, Result};
pub use model::{Instance, KnapsackInstance, VectorInstance};
