//! Left-invariant metrics on SU(2) and their Laplace spectra through
//! representation theory.
//!
//! The unit quaternions are SU(2), and the frame used everywhere in this
//! crate consists of the right-translation fields of the imaginary units
//! (j, k, i in that order, so the third frame direction is the rotation
//! field on the sphere side). A left-invariant metric is a positive matrix
//! Q in that frame; its Laplacian acts on each (2j+1)-dimensional
//! irreducible block as
//!     -sum_a E_a E_a,   E_a = sum_i (Q^{-1/2})_{a i} dpi(X_i),
//! with dpi(X_a) = -2i J_a the standard angular momentum generators scaled
//! so the bi-invariant case reproduces the unit round sphere. Each block
//! eigenvalue enters the function spectrum with multiplicity 2j+1.
//!
//! This route never touches charts, quadrature, or polynomial bases, which
//! makes it an independent witness for the sphere-side spectra.

use nalgebra::{Complex, DMatrix, Matrix3, Vector3};
use serde::Serialize;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::groups::{deformed_pairing, right_multiplication_matrix, UnitQuat};
use crate::sampling::sphere_points;
use crate::spectrum::{cluster_eigenvalues, EigenCluster};
use crate::sphere::BergerSphere;

/// Hard ceiling for the automatic spin extension.
pub const MAX_TWO_J: u32 = 24;

type CMat = DMatrix<Complex<f64>>;

/// Generators dpi(X_1), dpi(X_2), dpi(X_3) of the spin-j irreducible
/// representation, j = two_j / 2.
pub fn irrep_generators(two_j: u32) -> [CMat; 3] {
    let n = (two_j + 1) as usize;
    let j = two_j as f64 / 2.0;
    let m_of = |k: usize| j - k as f64;
    let mut jz = CMat::zeros(n, n);
    let mut jp = CMat::zeros(n, n);
    let mut jm = CMat::zeros(n, n);
    for k in 0..n {
        let m = m_of(k);
        jz[(k, k)] = Complex::new(m, 0.0);
        if k > 0 {
            // raising: |m> -> |m+1>, landing on index k-1
            let amp = (j * (j + 1.0) - m * (m + 1.0)).sqrt();
            jp[(k - 1, k)] = Complex::new(amp, 0.0);
        }
        if k + 1 < n {
            let amp = (j * (j + 1.0) - m * (m - 1.0)).sqrt();
            jm[(k + 1, k)] = Complex::new(amp, 0.0);
        }
    }
    let half = Complex::new(0.5, 0.0);
    let jx = (&jp + &jm) * half;
    let jy = (&jp - &jm) * Complex::new(0.0, -0.5);
    let scale = Complex::new(0.0, -2.0);
    [jx * scale, jy * scale, jz * scale]
}

/// Largest entry of sum_a dpi(X_a)^2 + 4 j (j+1) I; zero for a correct
/// representation.
pub fn casimir_defect(two_j: u32) -> f64 {
    let gens = irrep_generators(two_j);
    let n = (two_j + 1) as usize;
    let j = two_j as f64 / 2.0;
    let mut acc = CMat::zeros(n, n);
    for g in &gens {
        acc += g * g;
    }
    let expected = -4.0 * j * (j + 1.0);
    let mut defect: f64 = 0.0;
    for r in 0..n {
        for c in 0..n {
            let want = if r == c { expected } else { 0.0 };
            defect = defect.max((acc[(r, c)] - Complex::new(want, 0.0)).norm());
        }
    }
    defect
}

/// Largest entry of [dpi(X_a), dpi(X_b)] - 2 eps_abc dpi(X_c) over all
/// index pairs.
pub fn commutator_defect(two_j: u32) -> f64 {
    let gens = irrep_generators(two_j);
    let mut defect: f64 = 0.0;
    let eps = [(0usize, 1usize, 2usize), (1, 2, 0), (2, 0, 1)];
    for &(a, b, c) in &eps {
        let comm = &gens[a] * &gens[b] - &gens[b] * &gens[a];
        let target = &gens[c] * Complex::new(2.0, 0.0);
        defect = defect.max((comm - target).map(|z| z.norm()).max());
    }
    defect
}

fn hermitian_eigenvalues(h: &CMat) -> Vec<f64> {
    // realify: a hermitian N x N matrix becomes a symmetric 2N x 2N real
    // matrix with every eigenvalue doubled
    let n = h.nrows();
    let mut big = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            big[(i, j)] = z.re;
            big[(i, j + n)] = -z.im;
            big[(i + n, j)] = z.im;
            big[(i + n, j + n)] = z.re;
        }
    }
    let mut vals: Vec<f64> = big.symmetric_eigen().eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals.into_iter().step_by(2).collect()
}

/// A positive-definite metric on the Lie algebra frame.
#[derive(Clone, Debug)]
pub struct LeftInvariantMetric {
    pub q: Matrix3<f64>,
}

impl LeftInvariantMetric {
    pub fn new(q: Matrix3<f64>) -> Result<Self> {
        let sym = (q - q.transpose()).abs().max();
        if sym > 1e-12 {
            return Err(Error::InvalidConfig(format!(
                "frame metric must be symmetric; defect {sym:.2e}"
            )));
        }
        let eigs = q.symmetric_eigen().eigenvalues;
        if eigs.iter().any(|&e| e <= 0.0) {
            return Err(Error::InvalidConfig(
                "frame metric must be positive definite".into(),
            ));
        }
        Ok(LeftInvariantMetric { q })
    }

    pub fn diagonal(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(Matrix3::from_diagonal(&Vector3::new(a, b, c)))
    }

    /// diag(1, 1, 1+t): the left-invariant twin of the deformed sphere.
    pub fn berger(t: f64) -> Result<Self> {
        if 1.0 + t <= 0.0 {
            return Err(Error::DegenerateParameter { t });
        }
        Self::diagonal(1.0, 1.0, 1.0 + t)
    }

    pub fn volume(&self) -> f64 {
        2.0 * std::f64::consts::PI.powi(2) * self.q.determinant().sqrt()
    }

    pub fn inv_sqrt(&self) -> Matrix3<f64> {
        let eig = self.q.symmetric_eigen();
        let mut d = Matrix3::zeros();
        for i in 0..3 {
            d[(i, i)] = 1.0 / eig.eigenvalues[i].sqrt();
        }
        eig.eigenvectors * d * eig.eigenvectors.transpose()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IrrepEigenvalues {
    pub two_j: u32,
    /// Block eigenvalues, ascending; each carries multiplicity 2j+1 in the
    /// function spectrum.
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupSpectrum {
    pub metric: [[f64; 3]; 3],
    pub volume: f64,
    pub max_two_j: u32,
    pub per_irrep: Vec<IrrepEigenvalues>,
    pub clusters: Vec<EigenCluster>,
    pub lambda1: f64,
    /// Spin (doubled) of the irreducible block attaining lambda_1.
    pub attained_two_j: u32,
    /// Whether the spin range had to grow beyond the request.
    pub extended: bool,
    /// True when lambda_1 still sits at the top of the extended range, so
    /// the reported value may not be the global minimum.
    pub attained_at_cap: bool,
}

pub fn left_invariant_spectrum(
    metric: &LeftInvariantMetric,
    max_two_j: u32,
    tols: &Tolerances,
) -> Result<GroupSpectrum> {
    if max_two_j < 2 {
        return Err(Error::InvalidConfig(
            "spectrum needs irreducible blocks at least up to two_j = 2".into(),
        ));
    }
    let w = metric.inv_sqrt();
    let mut cap = max_two_j.min(MAX_TWO_J);
    let mut extended = false;
    loop {
        let mut per_irrep = Vec::with_capacity(cap as usize + 1);
        let mut labeled: Vec<(f64, u32)> = Vec::new();
        for two_j in 0..=cap {
            let gens = irrep_generators(two_j);
            let n = (two_j + 1) as usize;
            let mut op = CMat::zeros(n, n);
            for a in 0..3 {
                let mut e = CMat::zeros(n, n);
                for (i, g) in gens.iter().enumerate() {
                    e += g * Complex::new(w[(a, i)], 0.0);
                }
                op -= &e * &e;
            }
            let values = hermitian_eigenvalues(&op);
            for &v in &values {
                for _ in 0..=two_j {
                    labeled.push((v, two_j));
                }
            }
            per_irrep.push(IrrepEigenvalues { two_j, values });
        }
        labeled.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        // the trivial representation contributes the single zero mode
        let rest = &labeled[1..];
        let values: Vec<f64> = rest.iter().map(|p| p.0).collect();
        let clusters = cluster_eigenvalues(&values, tols.cluster_exact);
        let lambda1 = clusters[0].value;
        let attained_two_j = rest
            .iter()
            .take(clusters[0].multiplicity)
            .map(|p| p.1)
            .min()
            .unwrap_or(0);
        if attained_two_j + 1 >= cap && cap < MAX_TWO_J {
            cap = (cap + 2).min(MAX_TWO_J);
            extended = true;
            continue;
        }
        return Ok(GroupSpectrum {
            metric: [
                [metric.q[(0, 0)], metric.q[(0, 1)], metric.q[(0, 2)]],
                [metric.q[(1, 0)], metric.q[(1, 1)], metric.q[(1, 2)]],
                [metric.q[(2, 0)], metric.q[(2, 1)], metric.q[(2, 2)]],
            ],
            volume: metric.volume(),
            max_two_j: cap,
            per_irrep,
            clusters,
            lambda1,
            attained_two_j,
            extended,
            attained_at_cap: attained_two_j + 1 >= cap,
        });
    }
}

// ─────────────────────────────────────────────────────────────────────────
// Fixed-volume families
// ─────────────────────────────────────────────────────────────────────────

/// Berger-type metric rescaled to determinant one (volume 2 pi^2).
/// `shrink` picks the family that contracts the rotation circle instead of
/// stretching it.
pub fn fixed_volume_berger(t: f64, shrink: bool) -> Result<LeftInvariantMetric> {
    if 1.0 + t <= 0.0 {
        return Err(Error::DegenerateParameter { t });
    }
    let third = if shrink { 1.0 / (1.0 + t) } else { 1.0 + t };
    let c = third.powf(-1.0 / 3.0);
    LeftInvariantMetric::diagonal(c, c, c * third)
}

/// Closed-form first eigenvalue of the stretched fixed-volume family.
pub fn stretch_lambda1(t: f64) -> f64 {
    (1.0 + t).powf(1.0 / 3.0) * (3.0 - t / (1.0 + t))
}

/// Closed-form first eigenvalue of the shrinking fixed-volume family for
/// t >= 0: the coordinate branch 3 + t until it crosses the flat mode 8.
pub fn shrink_lambda1(t: f64) -> f64 {
    (3.0 + t).min(8.0) / (1.0 + t).powf(1.0 / 3.0)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct FamilyPoint {
    pub t: f64,
    pub lambda1: f64,
    pub volume: f64,
    pub attained_two_j: u32,
}

pub fn fixed_volume_curve(
    ts: &[f64],
    shrink: bool,
    max_two_j: u32,
    tols: &Tolerances,
) -> Result<Vec<FamilyPoint>> {
    ts.iter()
        .map(|&t| {
            let metric = fixed_volume_berger(t, shrink)?;
            let spec = left_invariant_spectrum(&metric, max_two_j, tols)?;
            Ok(FamilyPoint {
                t,
                lambda1: spec.lambda1,
                volume: spec.volume,
                attained_two_j: spec.attained_two_j,
            })
        })
        .collect()
}

/// Pointwise agreement between the frame metric Q and the deformed sphere
/// metric: expand tangent vectors in the right-translation frame and
/// compare the Q-pairing with the chart evaluation.
pub fn frame_metric_residual(t: f64, samples: usize, seed: u64) -> Result<f64> {
    let berger = BergerSphere::new(3, t)?;
    let q = LeftInvariantMetric::berger(t)?.q;
    let frames = [
        right_multiplication_matrix(&UnitQuat::new(0.0, 0.0, 1.0, 0.0)?),
        right_multiplication_matrix(&UnitQuat::new(0.0, 0.0, 0.0, 1.0)?),
        right_multiplication_matrix(&UnitQuat::new(0.0, 1.0, 0.0, 0.0)?),
    ];
    let d1 = nalgebra::DVector::from_column_slice(&[0.9, -0.2, 0.4, 0.1]);
    let d2 = nalgebra::DVector::from_column_slice(&[-0.3, 0.8, 0.1, 0.5]);
    let mut residual: f64 = 0.0;
    for x in sphere_points(3, samples, seed) {
        let f: Vec<nalgebra::DVector<f64>> = frames.iter().map(|m| m * &x).collect();
        let v = &d1 - &x * d1.dot(&x);
        let w = &d2 - &x * d2.dot(&x);
        let vq: Vec<f64> = f.iter().map(|fa| fa.dot(&v)).collect();
        let wq: Vec<f64> = f.iter().map(|fa| fa.dot(&w)).collect();
        let mut q_pairing = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                q_pairing += q[(a, b)] * vq[a] * wq[b];
            }
        }
        let chart_pairing = deformed_pairing(&berger, &x, &v, &w);
        residual = residual.max((q_pairing - chart_pairing).abs());
    }
    Ok(residual)
}
