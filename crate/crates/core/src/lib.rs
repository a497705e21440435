//! Length-minimizing projection of filling multicurve currents to the
//! Teichmüller space of a closed hyperbolic surface.

// `!(x > 0.0)` is how the numerics reject NaN along with the bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod currents;
mod dd;
pub mod error;
pub mod group;
pub mod holonomy;
pub mod hyp;
pub mod intersection;
pub mod projection;
pub mod verify;

pub use error::{Error, Result};
