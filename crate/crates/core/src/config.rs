//! Numerical tolerances, shared grids, and sphere volume constants.

use serde::{Deserialize, Serialize};

/// All tolerances used by the certification pipeline, in one record.
///
/// Every check reads its threshold from here so a CLI override in one place
/// propagates everywhere.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Tolerances {
    /// Deformed-Laplacian identity residual.
    pub lemma: f64,
    /// Algebraic identities (traces, inverse contraction, pullbacks).
    pub identity: f64,
    /// Finite-difference cross-checks against analytic derivatives.
    pub fd: f64,
    /// First-eigenvalue branch deviation from the closed form.
    pub branch: f64,
    /// Killing certification (symmetrised derivative, divergence, geodesic).
    pub killing: f64,
    /// Group invariance residuals (metric pullback, field pushforward).
    pub invariance: f64,
    /// Curvature identity residual for the space-form check.
    pub sasaki: f64,
    /// Relative clustering width for exact-path eigenvalue multiplicities.
    pub cluster_exact: f64,
    /// Relative clustering width for quadrature-path multiplicities.
    pub cluster_quadrature: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            lemma: 1e-7,
            identity: 1e-10,
            fd: 1e-4,
            branch: 1e-9,
            killing: 1e-8,
            invariance: 1e-9,
            sasaki: 1e-6,
            cluster_exact: 1e-6,
            cluster_quadrature: 1e-2,
        }
    }
}

/// Deformation parameters used by default across the toolkit.
pub const DEFAULT_T_GRID: [f64; 8] = [-0.9, -0.5, 0.0, 0.5, 1.0, 3.0, 10.0, 100.0];

/// Default harmonic cutoff for spectra and branch tracking.
pub const DEFAULT_CUTOFF: u32 = 4;

/// Largest cutoff the exact assembler is tuned for.
pub const MAX_CUTOFF: u32 = 8;

/// Default quadrature sample count (2^16).
pub const DEFAULT_SAMPLES: usize = 1 << 16;

/// Smallest admissible quadrature sample count (2^14).
pub const MIN_QUADRATURE_SAMPLES: usize = 1 << 14;

/// Smallest admissible sample count for volume estimation.
pub const MIN_VOLUME_SAMPLES: usize = 10_000;

/// Deformation parameters t <= -1 + this margin are rejected outright.
pub const DEGENERACY_MARGIN: f64 = 1e-9;

/// The quadrature path refuses deformations below this value; the exact
/// path still accepts t down to -0.99.
pub const QUADRATURE_T_FLOOR: f64 = -0.9;

/// Volume of the unit round n-sphere for odd n: vol(S^{2m-1}) = 2 pi^m / (m-1)!.
///
/// For the two cases in scope: vol(S^3) = 2 pi^2, vol(S^5) = pi^3.
pub fn round_sphere_volume(n: usize) -> f64 {
    assert!(n % 2 == 1 && n >= 3, "odd sphere dimension required");
    let m = (n + 1) / 2;
    let mut fact = 1.0;
    for k in 2..m {
        fact *= k as f64;
    }
    2.0 * std::f64::consts::PI.powi(m as i32) / fact
}
