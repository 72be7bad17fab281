//! Classical and quantum mechanics of the doubly isotropic planar affine body.

pub mod actions;
pub mod charts;
pub mod dynamics;
pub mod error;
pub mod models;
pub mod quad;
pub mod quantum;
pub mod sturm;

pub use error::{Error, Result};
