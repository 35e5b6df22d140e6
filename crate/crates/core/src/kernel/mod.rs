//! Exact rational geometry on labeled point configurations: ranks,
//! volumes, circuits and Radon partitions.

pub mod circuit;
pub mod config;
pub mod face;
pub mod linalg;

pub use circuit::{circuits_through, enumerate_circuits, radon_partition, radon_point, Circuit, CircuitTable};
pub use config::{rat, ratio, Config, Label};
pub use face::{k_subsets, Face, MAX_POINTS};

pub type Rational = num_rational::BigRational;

/// Number of affinely independent points among `labels`.
pub fn affine_rank(labels: Face, cfg: &Config) -> usize {
    cfg.affine_rank(labels)
}

/// Signed volume of a simplex with vertices in label order.
pub fn signed_volume(simplex: Face, cfg: &Config) -> crate::Result<Rational> {
    cfg.signed_volume(simplex)
}
