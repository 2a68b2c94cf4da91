//! Crate-wide error type.
//!
//! Geometry failures carry the measured quantity that triggered them so
//! callers (and the CLI exit-code logic) can report actionable numbers.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// The deformed metric g + t Y (x) Y has lost positive definiteness.
    #[error("singular deformation: 1 + t|Y|^2 = {denom:.3e} at a sample point")]
    SingularDeformation { denom: f64 },

    /// A deformation parameter outside the admissible range (-1, inf).
    #[error("singular deformation: parameter t = {t} must exceed -1")]
    DegenerateParameter { t: f64 },

    /// A point that should lie on the unit sphere does not.
    #[error("point is off the unit sphere: |x| - 1 = {defect:.3e}")]
    InvalidPoint { defect: f64 },

    /// The field handed to a Lemma-path operation failed Killing certification.
    #[error(
        "Killing certification failed: sym {sym:.3e}, div {div:.3e}, length span {length:.3e}, geodesic {geodesic:.3e} (tol {tol:.1e})"
    )]
    KillingCertification {
        sym: f64,
        div: f64,
        length: f64,
        geodesic: f64,
        tol: f64,
    },

    /// Group closure exceeded the element cap without stabilising.
    #[error("group closure not finite within cap of {cap} elements")]
    NotFiniteWithinCap { cap: usize },

    /// Two distinct group elements were closer than the ambiguity guard.
    #[error("ambiguous group element: nearest distinct element at distance {dist:.3e}")]
    AmbiguousElement { dist: f64 },

    /// A group action has a (near-)fixed point on the sphere.
    #[error("action is not free: element {element} moves some point by only {min_displacement:.3e}")]
    NotFree {
        element: String,
        min_displacement: f64,
    },

    /// Quadrature mass matrix failed its positive-definiteness check.
    #[error("quadrature mass matrix is not positive definite (min eigenvalue {min_eig:.3e})")]
    QuadratureRank { min_eig: f64 },

    /// Harmonic block construction violated an internal consistency check.
    #[error("block assembly failed: {0}")]
    BlockAssembly(String),

    /// A certification run finished but a measured quantity missed its target.
    #[error("certification failed: {0}")]
    CertificationFailed(String),

    /// Bad user-facing configuration (grids, cutoffs, sample counts, files).
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the CLI: 1 for a failed certification,
    /// 2 for configuration or environment problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::KillingCertification { .. }
            | Error::NotFiniteWithinCap { .. }
            | Error::AmbiguousElement { .. }
            | Error::NotFree { .. }
            | Error::QuadratureRank { .. }
            | Error::CertificationFailed(_) => 1,
            Error::SingularDeformation { .. }
            | Error::DegenerateParameter { .. }
            | Error::InvalidPoint { .. }
            | Error::BlockAssembly(_)
            | Error::InvalidConfig(_)
            | Error::Io(_)
            | Error::Json(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
