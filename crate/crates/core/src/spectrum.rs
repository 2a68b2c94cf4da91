//! Spectra of the deformed Laplacian on S^3 along two independent routes,
//! first-eigenvalue branch tracking, and the volume-normalized eigenvalue
//! functional.
//!
//! Route one restricts the operator to harmonic degree blocks and
//! diagonalizes each small matrix exactly (up to float rounding). Route
//! two never touches that structure: it assembles Rayleigh quotients by
//! quasi-Monte-Carlo quadrature of the raw metric over the charts and
//! solves one dense generalized eigenproblem. Agreement between the two is
//! a genuine cross-check, so nothing here lets one route borrow the
//! other's shortcuts.

use nalgebra::{Cholesky, DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::config::{
    round_sphere_volume, Tolerances, MIN_QUADRATURE_SAMPLES, QUADRATURE_T_FLOOR,
};
use crate::error::{Error, Result};
use crate::harmonics::{assemble_blocks, HarmonicBlock};
use crate::sampling::sphere3_points;
use crate::sphere::chart::{embedding_jacobian, to_chart, AmbientScalar};
use crate::sphere::{BergerSphere, RoundSphere};
use crate::tensor::ChartedMetric;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Quadrature,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Quadrature => "quadrature",
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct EigenCluster {
    pub value: f64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumResult {
    pub t: f64,
    pub cutoff: u32,
    pub method: Method,
    /// The eigenvalue dropped as the constant mode (exactly one per run).
    pub zero_mode: f64,
    pub clusters: Vec<EigenCluster>,
    pub lambda1: f64,
    /// Distance from the first to the second cluster.
    pub spectral_gap: f64,
    /// Harmonic degree whose block attains the smallest nonzero eigenvalue
    /// (exact route only; the quadrature route has no block labels).
    pub minimizing_degree: Option<u32>,
}

/// Group a sorted eigenvalue list into clusters of relative width rel_tol.
pub fn cluster_eigenvalues(sorted: &[f64], rel_tol: f64) -> Vec<EigenCluster> {
    let mut clusters: Vec<EigenCluster> = Vec::new();
    let mut start = 0usize;
    while start < sorted.len() {
        let mut end = start + 1;
        let mut sum = sorted[start];
        while end < sorted.len() {
            let mean = sum / (end - start) as f64;
            if (sorted[end] - mean).abs() <= rel_tol * mean.abs().max(1.0) {
                sum += sorted[end];
                end += 1;
            } else {
                break;
            }
        }
        clusters.push(EigenCluster {
            value: sum / (end - start) as f64,
            multiplicity: end - start,
        });
        start = end;
    }
    clusters
}

fn finish_spectrum(
    t: f64,
    cutoff: u32,
    method: Method,
    mut labeled: Vec<(f64, u32)>,
    rel_tol: f64,
) -> Result<SpectrumResult> {
    labeled.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    if labeled.len() < 3 {
        return Err(Error::InvalidConfig(
            "spectrum needs at least three modes".into(),
        ));
    }
    // exactly one zero mode: the constant function
    let zero_mode = labeled[0].0;
    let rest = &labeled[1..];
    let values: Vec<f64> = rest.iter().map(|p| p.0).collect();
    let clusters = cluster_eigenvalues(&values, rel_tol);
    let lambda1 = clusters[0].value;
    let spectral_gap = if clusters.len() > 1 {
        clusters[1].value - clusters[0].value
    } else {
        f64::INFINITY
    };
    let minimizing_degree = match method {
        Method::Exact => rest
            .iter()
            .take(clusters[0].multiplicity)
            .map(|p| p.1)
            .min(),
        Method::Quadrature => None,
    };
    Ok(SpectrumResult {
        t,
        cutoff,
        method,
        zero_mode,
        clusters,
        lambda1,
        spectral_gap,
        minimizing_degree,
    })
}

/// Closed-form block eigenvalue for rotation weight w at degree l.
pub fn weight_eigenvalue(l: u32, w: i64, t: f64) -> f64 {
    let s = t / (1.0 + t);
    (l * (l + 2)) as f64 - s * (w * w) as f64
}

/// Exact-route spectrum from freshly assembled blocks.
pub fn exact_spectrum(t: f64, cutoff: u32, tols: &Tolerances) -> Result<SpectrumResult> {
    let blocks = assemble_blocks(cutoff)?;
    exact_spectrum_with_blocks(&blocks, t, tols)
}

/// Exact-route spectrum reusing assembled blocks.
pub fn exact_spectrum_with_blocks(
    blocks: &[HarmonicBlock],
    t: f64,
    tols: &Tolerances,
) -> Result<SpectrumResult> {
    if blocks.len() < 3 {
        return Err(Error::InvalidConfig(
            "exact spectra need blocks at least up to degree 2".into(),
        ));
    }
    let mut labeled = Vec::new();
    for block in blocks {
        for ev in block.eigenvalues(t)? {
            labeled.push((ev, block.degree));
        }
    }
    let cutoff = blocks.last().unwrap().degree;
    finish_spectrum(t, cutoff, Method::Exact, labeled, tols.cluster_exact)
}

/// Quadrature Galerkin spectrum: Rayleigh quotients of the raw deformed
/// metric over the same polynomial space, assembled sample by sample.
pub fn quadrature_spectrum(
    t: f64,
    cutoff: u32,
    samples: usize,
    seed: u64,
    tols: &Tolerances,
) -> Result<SpectrumResult> {
    let blocks = assemble_blocks(cutoff)?;
    quadrature_spectrum_with_blocks(&blocks, t, samples, seed, tols)
}

pub fn quadrature_spectrum_with_blocks(
    blocks: &[HarmonicBlock],
    t: f64,
    samples: usize,
    seed: u64,
    tols: &Tolerances,
) -> Result<SpectrumResult> {
    if t < QUADRATURE_T_FLOOR {
        return Err(Error::InvalidConfig(format!(
            "quadrature route supports t >= {QUADRATURE_T_FLOOR}; got t = {t} \
             (the metric is too anisotropic for the sample budget below that)"
        )));
    }
    if samples < MIN_QUADRATURE_SAMPLES {
        return Err(Error::InvalidConfig(format!(
            "quadrature route needs at least {MIN_QUADRATURE_SAMPLES} samples, got {samples}"
        )));
    }
    if blocks.len() < 3 {
        return Err(Error::InvalidConfig(
            "quadrature spectra need blocks at least up to degree 2".into(),
        ));
    }

    let sphere = RoundSphere::new(3)?;
    let berger = BergerSphere::new(3, t)?;
    let metric = berger.metric();
    let round = sphere.metric();
    let vol_round = sphere.volume();

    let funcs: Vec<&dyn AmbientScalar> = blocks
        .iter()
        .flat_map(|b| b.basis.iter().map(|p| p as &dyn AmbientScalar))
        .collect();
    let dim = funcs.len();

    let points = sphere3_points(samples, seed);
    let chunk = 4096usize;
    let mut stiff_parts: Vec<DMatrix<f64>> = Vec::new();
    let mut mass_parts: Vec<DMatrix<f64>> = Vec::new();
    let mut grads = vec![DVector::zeros(3); dim];
    let mut vals = vec![0.0f64; dim];
    for block_pts in points.chunks(chunk) {
        let mut stiff = DMatrix::zeros(dim, dim);
        let mut mass = DMatrix::zeros(dim, dim);
        for x in block_pts {
            let p = to_chart(x);
            let g = metric.eval(&p);
            let det = g.determinant();
            let det_round = round.eval(&p).determinant();
            let ginv = g.try_inverse().ok_or(Error::SingularDeformation {
                denom: det,
            })?;
            let weight = (det / det_round).sqrt();
            let jac = embedding_jacobian(&p);
            let jac_t = jac.transpose();
            for (a, f) in funcs.iter().enumerate() {
                grads[a] = &jac_t * f.grad(x);
                vals[a] = f.eval(x);
            }
            for a in 0..dim {
                let ginv_ga = &ginv * &grads[a];
                for b in a..dim {
                    let sv = weight * ginv_ga.dot(&grads[b]);
                    let mv = weight * vals[a] * vals[b];
                    stiff[(a, b)] += sv;
                    mass[(a, b)] += mv;
                }
            }
        }
        stiff_parts.push(stiff);
        mass_parts.push(mass);
    }
    let scale = vol_round / samples as f64;
    let mut stiff = pairwise_matrix_sum(stiff_parts) * scale;
    let mut mass = pairwise_matrix_sum(mass_parts) * scale;
    for a in 0..dim {
        for b in 0..a {
            stiff[(a, b)] = stiff[(b, a)];
            mass[(a, b)] = mass[(b, a)];
        }
    }

    let chol = match Cholesky::new(mass.clone()) {
        Some(c) => c,
        None => {
            let min_eig = mass
                .symmetric_eigen()
                .eigenvalues
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min);
            return Err(Error::QuadratureRank { min_eig });
        }
    };
    let l = chol.l();
    let y = l
        .clone()
        .solve_lower_triangular(&stiff)
        .ok_or(Error::QuadratureRank { min_eig: 0.0 })?;
    let z = l
        .solve_lower_triangular(&y.transpose())
        .ok_or(Error::QuadratureRank { min_eig: 0.0 })?;
    let sym = (z.clone() + z.transpose()) * 0.5;
    let labeled: Vec<(f64, u32)> = sym
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|&ev| (ev, 0u32))
        .collect();
    let cutoff = blocks.last().unwrap().degree;
    finish_spectrum(
        t,
        cutoff,
        Method::Quadrature,
        labeled,
        tols.cluster_quadrature,
    )
}

fn pairwise_matrix_sum(mut parts: Vec<DMatrix<f64>>) -> DMatrix<f64> {
    assert!(!parts.is_empty());
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut iter = parts.into_iter();
        while let Some(a) = iter.next() {
            match iter.next() {
                Some(b) => next.push(a + b),
                None => next.push(a),
            }
        }
        parts = next;
    }
    parts.pop().unwrap()
}

// ─────────────────────────────────────────────────────────────────────────
// First-eigenvalue branch
// ─────────────────────────────────────────────────────────────────────────

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BranchPoint {
    pub t: f64,
    pub lambda1: f64,
    /// The coordinate-eigenfunction branch n - t/(1+t).
    pub predicted: f64,
    pub deviation: f64,
    pub minimizing_degree: u32,
    pub spectral_gap: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchReport {
    pub cutoff: u32,
    pub points: Vec<BranchPoint>,
    pub max_deviation: f64,
    /// True when lambda_1 follows the degree-1 branch over the whole grid:
    /// every deviation within tolerance and every minimizer at degree 1.
    pub branch_intact: bool,
}

pub fn lambda1_branch(t_grid: &[f64], cutoff: u32, tols: &Tolerances) -> Result<BranchReport> {
    let blocks = assemble_blocks(cutoff)?;
    let mut points = Vec::with_capacity(t_grid.len());
    let mut max_deviation: f64 = 0.0;
    let mut intact = true;
    for &t in t_grid {
        let spec = exact_spectrum_with_blocks(&blocks, t, tols)?;
        let predicted = 3.0 - t / (1.0 + t);
        let deviation = (spec.lambda1 - predicted).abs();
        let minimizing_degree = spec.minimizing_degree.unwrap_or(0);
        max_deviation = max_deviation.max(deviation);
        if deviation > tols.branch || minimizing_degree != 1 {
            intact = false;
        }
        points.push(BranchPoint {
            t,
            lambda1: spec.lambda1,
            predicted,
            deviation,
            minimizing_degree,
            spectral_gap: spec.spectral_gap,
        });
    }
    Ok(BranchReport {
        cutoff,
        points,
        max_deviation,
        branch_intact: intact,
    })
}

/// Parameter at which the degree-1 branch meets the flat degree-2 mode:
/// 3 - t/(1+t) = 8 at t = -5/6. Below it the first eigenvalue leaves the
/// coordinate branch.
pub const BRANCH_CROSSING_T: f64 = -5.0 / 6.0;

// ─────────────────────────────────────────────────────────────────────────
// Volume-normalized functional
// ─────────────────────────────────────────────────────────────────────────

#[derive(Clone, Copy, Debug, Serialize)]
pub struct NormalizedPoint {
    pub t: f64,
    pub lambda1: f64,
    pub volume: f64,
    /// lambda_1 * volume^{2/n}, scale invariant.
    pub normalized: f64,
    /// Closed form along the coordinate branch.
    pub predicted: f64,
    pub rel_error: f64,
}

pub fn lambda1_functional_with_blocks(
    blocks: &[HarmonicBlock],
    t: f64,
    tols: &Tolerances,
) -> Result<NormalizedPoint> {
    let spec = exact_spectrum_with_blocks(blocks, t, tols)?;
    let n = 3.0;
    let volume = (1.0 + t).sqrt() * round_sphere_volume(3);
    let normalized = spec.lambda1 * volume.powf(2.0 / n);
    let predicted = (3.0 - t / (1.0 + t)) * volume.powf(2.0 / n);
    let rel_error = (normalized - predicted).abs() / predicted.abs().max(1e-300);
    Ok(NormalizedPoint {
        t,
        lambda1: spec.lambda1,
        volume,
        normalized,
        predicted,
        rel_error,
    })
}

pub fn lambda1_functional(t: f64, cutoff: u32, tols: &Tolerances) -> Result<NormalizedPoint> {
    let blocks = assemble_blocks(cutoff)?;
    lambda1_functional_with_blocks(&blocks, t, tols)
}

// ─────────────────────────────────────────────────────────────────────────
// Route agreement
// ─────────────────────────────────────────────────────────────────────────

/// Expand clusters back into a flat ascending eigenvalue list.
pub fn flatten_clusters(clusters: &[EigenCluster]) -> Vec<f64> {
    let mut out = Vec::new();
    for c in clusters {
        for _ in 0..c.multiplicity {
            out.push(c.value);
        }
    }
    out
}

/// Worst relative disagreement between two spectra over the eigenvalues the
/// reference lists below `cap`. Compares the flattened lists elementwise, so
/// it is insensitive to how either route grouped near-degenerate values.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SpectrumAgreement {
    pub t: f64,
    pub compared: usize,
    pub worst_rel: f64,
}

pub fn compare_lower_spectra(
    reference: &SpectrumResult,
    other: &SpectrumResult,
    cap: f64,
) -> Result<SpectrumAgreement> {
    let ref_list: Vec<f64> = flatten_clusters(&reference.clusters)
        .into_iter()
        .take_while(|&v| v <= cap)
        .collect();
    let other_list = flatten_clusters(&other.clusters);
    if other_list.len() < ref_list.len() {
        return Err(Error::InvalidConfig(format!(
            "spectra are not comparable: {} reference eigenvalues below {cap} \
             but only {} on the other route",
            ref_list.len(),
            other_list.len()
        )));
    }
    let mut worst: f64 = 0.0;
    for (a, b) in ref_list.iter().zip(other_list.iter()) {
        worst = worst.max((a - b).abs() / a.abs().max(1.0));
    }
    Ok(SpectrumAgreement {
        t: reference.t,
        compared: ref_list.len(),
        worst_rel: worst,
    })
}

// ─────────────────────────────────────────────────────────────────────────
// Tabular output
// ─────────────────────────────────────────────────────────────────────────

/// One spectrum per row group: t,k,lambda_k,multiplicity,method
pub fn spectra_to_csv(results: &[SpectrumResult]) -> String {
    let mut out = String::from("t,k,lambda_k,multiplicity,method\n");
    for res in results {
        for (k, cluster) in res.clusters.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                res.t,
                k + 1,
                cluster.value,
                cluster.multiplicity,
                res.method.as_str()
            ));
        }
    }
    out
}

/// Branch and functional rows: t,lambda1,volume,Lambda1,predicted_Lambda1,rel_error
pub fn normalized_curve_to_csv(points: &[NormalizedPoint]) -> String {
    let mut out = String::from("t,lambda1,volume,Lambda1,predicted_Lambda1,rel_error\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            p.t, p.lambda1, p.volume, p.normalized, p.predicted, p.rel_error
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn clustering_groups_multiplicities() {
        let vals = [3.0, 3.0 + 1e-9, 3.0 + 2e-9, 8.0, 8.0, 15.0];
        let clusters = cluster_eigenvalues(&vals, 1e-6);
        assert_eq!(clusters.len(), 3);
        assert_eq!(clusters[0].multiplicity, 3);
        assert_eq!(clusters[1].multiplicity, 2);
        assert_eq!(clusters[2].multiplicity, 1);
    }

    #[test]
    fn round_sphere_spectrum_is_the_textbook_one() {
        let spec = exact_spectrum(0.0, 4, &tols()).unwrap();
        assert!((spec.zero_mode).abs() < 1e-12);
        let expect = [(3.0, 4), (8.0, 9), (15.0, 16), (24.0, 25)];
        assert_eq!(spec.clusters.len(), 4);
        for (cluster, (v, m)) in spec.clusters.iter().zip(expect) {
            assert!((cluster.value - v).abs() < 1e-9);
            assert_eq!(cluster.multiplicity, m);
        }
        assert_eq!(spec.minimizing_degree, Some(1));
    }

    #[test]
    fn multiplicities_are_conserved_across_t() {
        let blocks = assemble_blocks(4).unwrap();
        let total: usize = (0..=4u32).map(|l| ((l + 1) * (l + 1)) as usize).sum();
        for t in [-0.9, -0.5, 0.5, 1.0, 10.0] {
            let spec = exact_spectrum_with_blocks(&blocks, t, &tols()).unwrap();
            let count: usize = spec.clusters.iter().map(|c| c.multiplicity).sum();
            assert_eq!(count + 1, total, "t = {t}");
        }
    }

    #[test]
    fn deformed_spectrum_at_t_one_leads_with_the_coordinate_branch() {
        let spec = exact_spectrum(1.0, 3, &tols()).unwrap();
        assert!((spec.lambda1 - 2.5).abs() < 1e-9);
        assert_eq!(spec.clusters[0].multiplicity, 4);
        assert_eq!(spec.minimizing_degree, Some(1));
        // next cluster: degree 2 at 8 - 4 s = 6
        assert!((spec.clusters[1].value - 6.0).abs() < 1e-9);
    }

    #[test]
    fn branch_leaves_the_coordinate_family_below_the_crossing() {
        // at t = -0.9 the degree-1 branch sits at 3 + 9 = 12 while the
        // flat degree-2 mode stays at 8, so lambda_1 = 8 with degree 2
        let spec = exact_spectrum(-0.9, 3, &tols()).unwrap();
        assert!((spec.lambda1 - 8.0).abs() < 1e-9);
        assert_eq!(spec.minimizing_degree, Some(2));

        let spec = exact_spectrum(-0.99, 3, &tols()).unwrap();
        assert!((spec.lambda1 - 8.0).abs() < 1e-9);
        assert_eq!(spec.minimizing_degree, Some(2));

        // crossing parameter: branch value equals 8 exactly
        assert!((weight_eigenvalue(1, 1, BRANCH_CROSSING_T) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn branch_report_flags_the_broken_grid_point() {
        let report = lambda1_branch(&[-0.9, 0.0, 1.0, 10.0], 3, &tols()).unwrap();
        assert!(!report.branch_intact);
        assert!(report.points[0].deviation > 3.9); // 12 vs 8
        for p in &report.points[1..] {
            assert!(p.deviation < 1e-9, "t = {}", p.t);
            assert_eq!(p.minimizing_degree, 1);
        }
    }

    #[test]
    fn branch_report_is_clean_above_the_crossing() {
        let report = lambda1_branch(&[-0.5, 0.0, 0.5, 1.0, 3.0, 10.0, 100.0], 4, &tols()).unwrap();
        assert!(report.branch_intact, "max deviation {}", report.max_deviation);
        assert!(report.max_deviation < 1e-9);
        for p in &report.points {
            assert!(p.spectral_gap > 0.0);
        }
    }

    #[test]
    fn normalized_functional_grows_without_bound() {
        let blocks = assemble_blocks(3).unwrap();
        let mut last = 0.0;
        for t in [0.0, 1.0, 10.0, 100.0, 1000.0] {
            let p = lambda1_functional_with_blocks(&blocks, t, &tols()).unwrap();
            assert!(p.normalized > last, "not increasing at t = {t}");
            last = p.normalized;
        }
        // closed form at the round point: 3 (2 pi^2)^{2/3}
        let p0 = lambda1_functional_with_blocks(&blocks, 0.0, &tols()).unwrap();
        let expect = 3.0 * (2.0 * std::f64::consts::PI.powi(2)).powf(2.0 / 3.0);
        assert!((p0.normalized - expect).abs() < 1e-9);
        assert!(p0.rel_error < 1e-12);
    }

    #[test]
    fn quadrature_route_agrees_with_the_exact_route() {
        let blocks = assemble_blocks(2).unwrap();
        let tols = tols();
        for t in [0.0, 1.0] {
            let exact = exact_spectrum_with_blocks(&blocks, t, &tols).unwrap();
            let quad =
                quadrature_spectrum_with_blocks(&blocks, t, 1 << 14, 7, &tols).unwrap();
            assert!(quad.zero_mode.abs() < 1e-2, "zero mode {}", quad.zero_mode);
            assert_eq!(exact.clusters.len(), quad.clusters.len(), "t = {t}");
            for (e, q) in exact.clusters.iter().zip(&quad.clusters) {
                let rel = (e.value - q.value).abs() / e.value.max(1.0);
                assert!(rel < 1e-2, "t = {t}: {} vs {}", e.value, q.value);
                assert_eq!(e.multiplicity, q.multiplicity, "t = {t} at {}", e.value);
            }
        }
    }

    #[test]
    fn quadrature_route_rejects_out_of_range_requests() {
        let tols = tols();
        assert!(matches!(
            quadrature_spectrum(-0.95, 2, 1 << 14, 1, &tols),
            Err(Error::InvalidConfig(_))
        ));
        assert!(matches!(
            quadrature_spectrum(1.0, 2, 100, 1, &tols),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn lower_spectrum_comparison_is_elementwise() {
        let tols = tols();
        let a = exact_spectrum(1.0, 3, &tols).unwrap();
        let same = compare_lower_spectra(&a, &a, 15.0).unwrap();
        assert_eq!(same.worst_rel, 0.0);
        assert!(same.compared > 0);

        let b = exact_spectrum(1.01, 3, &tols).unwrap();
        let close = compare_lower_spectra(&a, &b, 15.0).unwrap();
        assert!(close.worst_rel > 0.0 && close.worst_rel < 1e-2);

        // A reference with more low eigenvalues than the other route lists
        // is flagged rather than silently truncated.
        let tiny = exact_spectrum(1.0, 2, &tols).unwrap();
        assert!(compare_lower_spectra(&a, &tiny, 100.0).is_err());
    }

    #[test]
    fn csv_outputs_are_deterministic() {
        let a = spectra_to_csv(&[exact_spectrum(0.5, 2, &tols()).unwrap()]);
        let b = spectra_to_csv(&[exact_spectrum(0.5, 2, &tols()).unwrap()]);
        assert_eq!(a, b);
        let lines: Vec<&str> = a.lines().collect();
        assert_eq!(lines[0], "t,k,lambda_k,multiplicity,method");
        assert_eq!(lines.len(), 1 + 3); // three clusters at cutoff 2
        assert!(lines[1].ends_with(",4,exact"));

        let curve = normalized_curve_to_csv(&[
            lambda1_functional(0.0, 2, &tols()).unwrap(),
            lambda1_functional(1.0, 2, &tols()).unwrap(),
        ]);
        assert!(curve.starts_with("t,lambda1,volume,Lambda1,predicted_Lambda1,rel_error\n"));
        assert_eq!(curve.lines().count(), 3);
    }
}
