//! Round odd spheres, the Hopf circle direction, and the one-parameter
//! family of metrics g + t Y' ⊗ Y' built from it.

pub mod chart;

use std::sync::Arc;

use nalgebra::DVector;

use crate::config::{round_sphere_volume, MIN_VOLUME_SAMPLES};
use crate::error::{Error, Result};
use crate::sampling::{pairwise_sum, sphere_points};
use crate::tensor::deform::DeformedMetric;
use crate::tensor::{laplace_beltrami, ChartPoint, ChartedMetric, ChartedScalarField};
use chart::{
    hopf_matrix, to_chart, AmbientScalar, CoordinateGradientField, LinearAmbientField,
    PushedSphereField, PushedSphereScalar, SphereChartMetric,
};

/// The unit sphere S^n, n odd, carried by its two stereographic charts.
#[derive(Clone, Copy, Debug)]
pub struct RoundSphere {
    pub n: usize,
}

impl RoundSphere {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 || n % 2 == 0 {
            return Err(Error::InvalidConfig(format!(
                "the deformation lives on odd spheres of dimension >= 3, got n = {n}"
            )));
        }
        Ok(RoundSphere { n })
    }

    pub fn ambient_dim(&self) -> usize {
        self.n + 1
    }

    pub fn volume(&self) -> f64 {
        round_sphere_volume(self.n)
    }

    pub fn metric(&self) -> SphereChartMetric {
        SphereChartMetric { n: self.n }
    }

    /// The unit Killing field generating the Hopf circle action, as a chart
    /// field with analytic derivatives.
    pub fn hopf_field(&self) -> PushedSphereField {
        PushedSphereField::new(
            self.n,
            Box::new(LinearAmbientField::new(hopf_matrix(self.n + 1))),
        )
    }

    /// Sphere gradient of a coordinate function; tangent but not Killing.
    /// Useful as a negative control for every Killing-dependent identity.
    pub fn gradient_control_field(&self, axis: usize) -> PushedSphereField {
        assert!(axis <= self.n);
        PushedSphereField::new(
            self.n,
            Box::new(CoordinateGradientField {
                ambient_dim: self.n + 1,
                axis,
            }),
        )
    }

    /// Deterministic low-discrepancy points on the sphere, in chart form.
    pub fn sample_chart_points(&self, count: usize, seed: u64) -> Vec<ChartPoint> {
        sphere_points(self.n, count, seed)
            .iter()
            .map(to_chart)
            .collect()
    }
}

/// Value of the Hopf field at an embedded point of an odd unit sphere.
pub fn hopf_field_at(x: &DVector<f64>) -> Result<DVector<f64>> {
    if x.len() % 2 != 0 || x.len() < 4 {
        return Err(Error::InvalidConfig(format!(
            "Hopf field needs an even ambient dimension >= 4, got {}",
            x.len()
        )));
    }
    chart::check_on_sphere(x, 1e-12)?;
    Ok(hopf_matrix(x.len()) * x)
}

/// S^n with the metric g + t Y' ⊗ Y', Y the Hopf field.
pub struct BergerSphere {
    pub sphere: RoundSphere,
    pub t: f64,
    metric: DeformedMetric,
}

impl BergerSphere {
    pub fn new(n: usize, t: f64) -> Result<Self> {
        let sphere = RoundSphere::new(n)?;
        let metric = DeformedMetric::new(
            Arc::new(sphere.metric()),
            Arc::new(sphere.hopf_field()),
            t,
        )?;
        Ok(BergerSphere { sphere, t, metric })
    }

    pub fn metric(&self) -> &DeformedMetric {
        &self.metric
    }

    /// Exact volume: the deformation scales the volume form by sqrt(1 + t)
    /// everywhere because the deforming field has unit length.
    pub fn volume(&self) -> f64 {
        (1.0 + self.t).sqrt() * self.sphere.volume()
    }

    /// First nonzero eigenvalue of the deformed Laplacian restricted to the
    /// branch through the coordinate eigenfunctions.
    pub fn coordinate_branch_eigenvalue(&self) -> f64 {
        self.sphere.n as f64 - self.t / (1.0 + self.t)
    }
}

/// Monte-Carlo/quasi-Monte-Carlo volume estimate for a charted sphere
/// metric, using the round measure as the reference.
#[derive(Clone, Copy, Debug)]
pub struct VolumeEstimate {
    pub value: f64,
    /// Half the spread between the even-index and odd-index sub-estimates.
    pub error: f64,
    pub samples: usize,
}

pub fn estimate_volume(
    metric: &dyn ChartedMetric,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<VolumeEstimate> {
    if samples < MIN_VOLUME_SAMPLES {
        return Err(Error::InvalidConfig(format!(
            "volume estimation needs at least {MIN_VOLUME_SAMPLES} samples, got {samples}"
        )));
    }
    let round = SphereChartMetric { n };
    let vol_round = round_sphere_volume(n);
    let pts = sphere_points(n, samples, seed);
    let mut ratios = Vec::with_capacity(samples);
    for x in &pts {
        let p = to_chart(x);
        let det = metric.eval(&p).determinant();
        let det_round = round.eval(&p).determinant();
        ratios.push((det / det_round).sqrt());
    }
    let even: Vec<f64> = ratios.iter().step_by(2).copied().collect();
    let odd: Vec<f64> = ratios.iter().skip(1).step_by(2).copied().collect();
    let mean_even = pairwise_sum(&even) / even.len() as f64;
    let mean_odd = pairwise_sum(&odd) / odd.len().max(1) as f64;
    let value = vol_round * pairwise_sum(&ratios) / samples as f64;
    let error = vol_round * 0.5 * (mean_even - mean_odd).abs();
    Ok(VolumeEstimate {
        value,
        error,
        samples,
    })
}

/// The ambient coordinate function x^axis with analytic derivatives.
pub struct CoordinateFunction {
    pub ambient_dim: usize,
    pub axis: usize,
}

impl AmbientScalar for CoordinateFunction {
    fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    fn eval(&self, x: &DVector<f64>) -> f64 {
        x[self.axis]
    }

    fn grad(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut g = DVector::zeros(x.len());
        g[self.axis] = 1.0;
        g
    }

    fn hess(&self, x: &DVector<f64>) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::zeros(x.len(), x.len())
    }
}

/// Restriction of x^axis to the sphere: a first-eigenspace function of the
/// round Laplacian, and still an eigenfunction after the deformation.
pub fn coordinate_eigenfunction(n: usize, axis: usize) -> PushedSphereScalar {
    assert!(axis <= n);
    PushedSphereScalar::new(
        n,
        Box::new(CoordinateFunction {
            ambient_dim: n + 1,
            axis,
        }),
    )
}

/// Pointwise check that u is an eigenfunction of the deformed Laplacian
/// with the given eigenvalue, through the generic chart pipeline.
#[derive(Clone, Copy, Debug)]
pub struct EigenfunctionCheck {
    pub t: f64,
    pub expected_eigenvalue: f64,
    pub max_residual: f64,
    pub max_value: f64,
    pub samples: usize,
}

pub fn check_eigenfunction(
    metric: &dyn ChartedMetric,
    u: &dyn ChartedScalarField,
    eigenvalue: f64,
    t: f64,
    points: &[ChartPoint],
) -> EigenfunctionCheck {
    let mut max_residual: f64 = 0.0;
    let mut max_value: f64 = 0.0;
    for p in points {
        let lap = laplace_beltrami(u, metric, p);
        let val = u.eval(p);
        max_residual = max_residual.max((lap + eigenvalue * val).abs());
        max_value = max_value.max(val.abs());
    }
    EigenfunctionCheck {
        t,
        expected_eigenvalue: eigenvalue,
        max_residual,
        max_value,
        samples: points.len(),
    }
}
