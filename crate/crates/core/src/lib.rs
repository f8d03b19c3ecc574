//! Target control of asynchronous Boolean networks.
//!
//! The crate computes attractors and basins of attraction symbolically, and
//! searches for minimal node-perturbation sets (instantaneous, temporary or
//! permanent) that drive a network from any admissible initial state into a
//! chosen target attractor. An explicit-state oracle cross-checks the
//! symbolic algorithms on small networks.

pub mod control;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod oracle;
pub mod symbolic;

pub use error::{Error, Result};
