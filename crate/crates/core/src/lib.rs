//! Laplace spectra of Berger-type metric deformations on odd spheres.
//!
//! The crate studies metrics of the form g + t Y (x) Y, where g is the round
//! metric on S^{2m-1} and Y is the unit Killing field generating the Hopf
//! circle action. It provides:
//!
//! - a charted tensor calculus with analytic derivatives and
//!   finite-difference cross-checks ([`tensor`]),
//! - stereographic charts, the Hopf field, and the deformed spheres
//!   ([`sphere`]),
//! - exact spectra via harmonic polynomial blocks and an independent
//!   quadrature Galerkin route ([`harmonics`], [`spectrum`]),
//! - certification of the deformed-Laplacian identity chain ([`certify`]),
//! - finite symmetry groups acting freely on S^3 and their invariance
//!   certificates ([`groups`]),
//! - the representation-theoretic spectrum of left-invariant metrics on the
//!   rotation group, including fixed-volume families ([`su2`]).
//!
//! The `berger-spectra` binary exposes the same functionality as
//! subcommands; `cargo run --example` entries demonstrate each capability.

pub mod certify;
pub mod cli;
pub mod config;
pub mod error;
pub mod groups;
pub mod harmonics;
pub mod poly;
pub mod report;
pub mod sampling;
pub mod spectrum;
pub mod sphere;
pub mod su2;
pub mod tensor;

pub use error::{Error, Result};
