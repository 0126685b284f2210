//! Exact coherent information of stabilizer codes under Pauli noise.
//!
//! A code's noisy, encoded Bell state with a reference is kept block
//! diagonal in the stabilizer basis, so its entropies reduce to small
//! per-block eigenproblems. Crossings of the resulting curves between code
//! distances estimate error-correction thresholds.

pub mod bits;
pub mod circuit;
pub mod cli;
pub mod codes;
pub mod error;
pub mod frame;
pub mod oracle;
pub mod pauli;
pub mod report;
pub mod state;
pub mod threshold;

pub use error::{Error, Result};
