//! Exact computer algebra for the group of germs of diffeomorphisms in one
//! variable over exact coefficient rings.
//!
//! The crate provides truncated-series group operations, Koenigs
//! linearization and multiplicative flows, surface-group presentations with
//! Dehn-twist injectivity scans, explicit free germs with integer
//! coefficients, and p-adic Nottingham-group arithmetic, all certified to a
//! chosen jet order with no floating point anywhere.

pub mod error;
pub mod germgroup;
pub mod koenigs;
pub mod presentations;
pub mod rings;
pub mod series;
pub mod words;

pub mod reps;

pub use error::{Error, Result};
