//! End-to-end certification of the deformed-Laplacian identity chain.
//!
//! For each requested sphere dimension this runs, in order:
//!   1. the Killing diagnostics for the deforming field,
//!   2. per-parameter checks: closed-form inverse vs dense inversion,
//!      the volume scaling law, the Christoffel-difference closed form vs
//!      the generic pipeline, its trace identities, the deformed-Laplacian
//!      identity on a family of test functions, and the first-eigenvalue
//!      branch on coordinate functions,
//!   3. the space-form curvature identity for the field.
//!
//! Every measurement lands in a [`CertificationReport`] line; the caller
//! decides what to do with a failing report.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::config::{Tolerances, DEGENERACY_MARGIN, MIN_VOLUME_SAMPLES};
use crate::error::{Error, Result};
use crate::report::CertificationReport;
use crate::sphere::chart::{AmbientScalar, PushedSphereScalar};
use crate::sphere::{estimate_volume, CoordinateFunction, RoundSphere};
use crate::tensor::deform::{
    certify_killing, christoffel_delta_brute_force, christoffel_delta_traces,
    deformed_christoffel_delta, inverse_deformed_metric, verify_deformed_laplacian,
    DeformedMetric,
};
use crate::tensor::{killing_report, sasaki_residual, ChartedMetric};

/// Which deforming field to certify. The gradient field is the designated
/// negative control: it is not Killing, so certification must fail on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeformingField {
    Hopf,
    GradientControl,
}

impl DeformingField {
    pub fn label(&self) -> &'static str {
        match self {
            DeformingField::Hopf => "hopf",
            DeformingField::GradientControl => "gradient_control",
        }
    }
}

/// Product of two ambient coordinates, restricted to the sphere. A clean
/// second-degree test function for the operator identity (not an
/// eigenfunction of the deformed Laplacian in general).
pub struct CoordinateProduct {
    pub ambient_dim: usize,
    pub i: usize,
    pub j: usize,
}

impl AmbientScalar for CoordinateProduct {
    fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    fn eval(&self, x: &DVector<f64>) -> f64 {
        x[self.i] * x[self.j]
    }

    fn grad(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut g = DVector::zeros(x.len());
        g[self.i] += x[self.j];
        g[self.j] += x[self.i];
        g
    }

    fn hess(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let mut h = DMatrix::zeros(x.len(), x.len());
        h[(self.i, self.j)] += 1.0;
        h[(self.j, self.i)] += 1.0;
        h
    }
}

/// Run the full certification battery over `dims` and `t_values`.
///
/// `samples` controls the pointwise sample count per check (the volume check
/// tops it up to its own minimum). Returns the report even when checks fail;
/// hard errors (bad dimensions, singular parameters) are returned as `Err`.
pub fn certify_deformation(
    dims: &[usize],
    t_values: &[f64],
    samples: usize,
    seed: u64,
    field: DeformingField,
    tols: &Tolerances,
) -> Result<CertificationReport> {
    if dims.is_empty() {
        return Err(Error::InvalidConfig("no dimensions requested".into()));
    }
    if t_values.is_empty() {
        return Err(Error::InvalidConfig("empty deformation grid".into()));
    }
    if samples == 0 {
        return Err(Error::InvalidConfig("sample count must be positive".into()));
    }
    for &t in t_values {
        if !(t > -1.0 + DEGENERACY_MARGIN) {
            return Err(Error::DegenerateParameter { t });
        }
    }

    let mut report =
        CertificationReport::new(dims.to_vec(), t_values.to_vec(), samples);

    for &n in dims {
        let sphere = RoundSphere::new(n)?;
        let metric = Arc::new(sphere.metric());
        let deform: Arc<dyn crate::tensor::ChartedVectorField + Send + Sync> = match field {
            DeformingField::Hopf => Arc::new(sphere.hopf_field()),
            DeformingField::GradientControl => Arc::new(sphere.gradient_control_field(0)),
        };
        let points = sphere.sample_chart_points(samples, seed);

        let kr = killing_report(deform.as_ref(), metric.as_ref(), &points);
        let prefix = format!("s{n}");
        report.push(
            format!("{prefix}.killing_symmetry"),
            kr.sym_residual,
            tols.killing,
        );
        report.push(
            format!("{prefix}.killing_divergence"),
            kr.divergence_max,
            tols.killing,
        );
        report.push(
            format!("{prefix}.killing_length_variation"),
            kr.length_variation,
            tols.killing,
        );
        report.push(
            format!("{prefix}.killing_unit_length"),
            (kr.mean_length - 1.0).abs(),
            tols.killing,
        );
        report.push(
            format!("{prefix}.killing_geodesic"),
            kr.geodesic_residual,
            tols.killing,
        );

        // The curvature identity is a property of the round metric and the
        // field alone; it does not need the deformation certificate.
        let sasaki_points = &points[..points.len().min(64)];
        let sasaki = sasaki_residual(metric.as_ref(), deform.as_ref(), sasaki_points, 6, seed);
        report.push(format!("{prefix}.space_form_identity"), sasaki, tols.sasaki);

        // The closed-form routes below are only valid for a certified
        // Killing field of constant length. For a failing field the report
        // already carries the failed lines; skip the dependent checks.
        let dm0 = DeformedMetric::new(Arc::clone(&metric) as _, Arc::clone(&deform), 0.5)?;
        let cert = match certify_killing(&dm0, &points, tols.killing) {
            Ok(c) => c,
            Err(_) => continue,
        };

        // Test functions for the operator identity: every ambient
        // coordinate plus one quadratic product.
        let mut test_functions: Vec<PushedSphereScalar> = (0..=n)
            .map(|axis| {
                PushedSphereScalar::new(
                    n,
                    Box::new(CoordinateFunction {
                        ambient_dim: n + 1,
                        axis,
                    }),
                )
            })
            .collect();
        test_functions.push(PushedSphereScalar::new(
            n,
            Box::new(CoordinateProduct {
                ambient_dim: n + 1,
                i: 0,
                j: 1,
            }),
        ));

        for &t in t_values {
            let dm = dm0.with_t(t)?;
            let tp = format!("{prefix}[t={t}]");

            // Closed-form inverse against dense numeric inversion.
            let mut inv_defect: f64 = 0.0;
            for p in points.iter().take(points.len().min(128)) {
                let closed = inverse_deformed_metric(&dm, p)?;
                let dense = dm
                    .eval(p)
                    .try_inverse()
                    .ok_or(Error::SingularDeformation { denom: 0.0 })?;
                inv_defect = inv_defect.max((closed - dense).abs().max());
            }
            report.push(format!("{tp}.inverse_identity"), inv_defect, tols.identity);

            // Volume scaling: the deformed volume must be sqrt(1 + t) times
            // the round volume.
            let est = estimate_volume(
                &dm,
                n,
                samples.max(MIN_VOLUME_SAMPLES),
                seed,
            )?;
            let expected = (1.0 + t).sqrt() * sphere.volume();
            report.push(
                format!("{tp}.volume_scaling"),
                (est.value - expected).abs() / expected,
                tols.identity,
            );

            // Christoffel difference: closed form vs generic pipeline, and
            // the two trace identities.
            let mut delta_defect: f64 = 0.0;
            let mut trace_g: f64 = 0.0;
            let mut trace_yy: f64 = 0.0;
            for p in points.iter().take(points.len().min(128)) {
                let closed = deformed_christoffel_delta(&dm, p, &cert);
                let brute = christoffel_delta_brute_force(&dm, p);
                delta_defect = delta_defect.max(closed.sub(&brute).max_abs());
                let (tg, ty) = christoffel_delta_traces(&dm, p, &closed);
                trace_g = trace_g.max(tg);
                trace_yy = trace_yy.max(ty);
            }
            report.push(
                format!("{tp}.christoffel_delta"),
                delta_defect,
                tols.identity.max(1e-8),
            );
            report.push(format!("{tp}.christoffel_trace_metric"), trace_g, tols.identity);
            report.push(format!("{tp}.christoffel_trace_field"), trace_yy, tols.identity);

            // The operator identity itself, over the test family.
            let mut lemma_worst: f64 = 0.0;
            for u in &test_functions {
                let check = verify_deformed_laplacian(&dm, u, &points, &cert);
                lemma_worst = lemma_worst.max(check.max_residual);
            }
            report.push(format!("{tp}.laplacian_identity"), lemma_worst, tols.lemma);

            // Coordinate functions stay eigenfunctions with the shifted
            // eigenvalue n - t/(1 + t).
            let expected_ev = n as f64 - t / (1.0 + t);
            let mut branch_worst: f64 = 0.0;
            for u in test_functions.iter().take(n + 1) {
                let check =
                    crate::sphere::check_eigenfunction(&dm, u, expected_ev, t, &points);
                branch_worst = branch_worst.max(check.max_residual);
            }
            report.push(
                format!("{tp}.coordinate_branch"),
                branch_worst,
                tols.lemma,
            );
        }
    }

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hopf_certification_passes_on_s3() {
        let tols = Tolerances::default();
        let report = certify_deformation(
            &[3],
            &[0.5, 3.0],
            120,
            7,
            DeformingField::Hopf,
            &tols,
        )
        .unwrap();
        assert!(report.pass, "{}", report.to_text());
        // Killing, curvature identity, and six per-t checks on two ts.
        assert_eq!(report.checks.len(), 6 + 2 * 7);
    }

    #[test]
    fn hopf_certification_passes_on_s5() {
        let tols = Tolerances::default();
        let report =
            certify_deformation(&[5], &[1.0], 80, 11, DeformingField::Hopf, &tols).unwrap();
        assert!(report.pass, "{}", report.to_text());
    }

    #[test]
    fn gradient_control_fails_killing_and_skips_dependent_checks() {
        let tols = Tolerances::default();
        let report = certify_deformation(
            &[3],
            &[0.5],
            100,
            7,
            DeformingField::GradientControl,
            &tols,
        )
        .unwrap();
        assert!(!report.pass);
        // Only the Killing and curvature lines are present.
        assert_eq!(report.checks.len(), 6);
        let sym = report
            .checks
            .iter()
            .find(|c| c.name.contains("killing_symmetry"))
            .unwrap();
        assert!(!sym.pass, "gradient field must fail the symmetry check");
        assert!(report
            .checks
            .iter()
            .all(|c| !c.name.contains("laplacian_identity")));
    }

    #[test]
    fn singular_parameter_is_rejected() {
        let tols = Tolerances::default();
        let err = certify_deformation(&[3], &[-1.0], 50, 7, DeformingField::Hopf, &tols)
            .unwrap_err();
        assert!(err.to_string().contains("singular deformation"));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn empty_grid_is_invalid_config() {
        let tols = Tolerances::default();
        let err =
            certify_deformation(&[3], &[], 50, 7, DeformingField::Hopf, &tols).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
