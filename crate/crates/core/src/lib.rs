//! Exact triangulations of small point configurations, bistellar flips,
//! and flip-graph exploration, with everything needed to connect any
//! triangulation of the 4-cube's vertex set to a corner-cut triangulation.

pub mod complex;
pub mod contraction;
pub mod driver;
pub mod enumeration;
pub mod error;
pub mod flips;
pub mod formats;
pub mod kernel;
pub mod presets;
pub mod regularity;
pub mod symmetry;
pub mod walk;

pub use complex::{Triangulation, ValidationError};
pub use error::{Error, Result};
pub use kernel::{Circuit, Config, Face, Rational};
