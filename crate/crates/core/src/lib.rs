//! Finite-truncation toolkit for basic sequences in sequence spaces, their
//! constants, and affine fixed-point-free maps on the closed convex hull of
//! a basic sequence.

pub mod basis;
pub mod cli;
pub mod constructions;
pub mod error;
pub mod harness;
pub mod optim;
pub mod spaces;
pub mod tolerance;
pub mod vector;

pub use error::{Error, Result};
pub use vector::CoeffVector;
