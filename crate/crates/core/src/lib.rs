//! Exact polyhedral engine for truncation geometry on root systems.
//!
//! Everything combinatorial is exact over `Q`; floats appear only in the
//! integration oracles, fitted models and the one-dimensional theta toy.

#![cfg_attr(not(test), no_std)]
// index loops read closer to the linear algebra they implement
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod asymptote;
pub mod chambers;
pub mod error;
pub mod linalg;
pub mod lp;
pub mod polyhedra;
pub mod rational;
pub mod regions;
pub mod rootspace;
pub mod tfinite;

pub use error::{Error, Result};
pub use rational::Q;
