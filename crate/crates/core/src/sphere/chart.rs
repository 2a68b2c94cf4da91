//! Stereographic atlas for the unit sphere S^n in R^{n+1}.
//!
//! Two charts cover the sphere: chart 0 projects from the north pole
//! (its origin is the south pole), chart 1 projects from the south pole.
//! A point is evaluated in the chart whose origin is nearer, which keeps
//! chart coordinates inside the unit ball and the conformal factor in
//! [1, 2]. In both charts the round metric is 4 delta_ij / (1 + |u|^2)^2.
//!
//! Ambient objects (linear fields, polynomial functions of the embedding
//! coordinates) are pushed to the charts with fully analytic first and
//! second derivatives; stereographic projection is rational, so the chain
//! rule closes in elementary formulas.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::tensor::{ChartId, ChartPoint, ChartedMetric, ChartedScalarField, ChartedVectorField, Tensor3, Tensor4};

pub const CHART_NORTH_PROJECTION: ChartId = 0;
pub const CHART_SOUTH_PROJECTION: ChartId = 1;

/// Chart whose origin is nearest to the embedded point.
pub fn nearest_chart(x: &DVector<f64>) -> ChartId {
    let last = x[x.len() - 1];
    if last <= 0.0 {
        CHART_NORTH_PROJECTION
    } else {
        CHART_SOUTH_PROJECTION
    }
}

/// Express an embedded sphere point in a specific chart.
pub fn to_chart_in(x: &DVector<f64>, chart: ChartId) -> ChartPoint {
    let dim = x.len();
    let last = x[dim - 1];
    let denom = match chart {
        CHART_NORTH_PROJECTION => 1.0 - last,
        _ => 1.0 + last,
    };
    assert!(
        denom > 1e-6,
        "point too close to the projection pole for chart {chart}"
    );
    let coords = DVector::from_iterator(dim - 1, (0..dim - 1).map(|i| x[i] / denom));
    ChartPoint::new(chart, coords)
}

/// Express an embedded sphere point in its preferred chart.
pub fn to_chart(x: &DVector<f64>) -> ChartPoint {
    to_chart_in(x, nearest_chart(x))
}

/// Embed a chart point back into R^{n+1}.
pub fn embed(p: &ChartPoint) -> DVector<f64> {
    let n = p.dim();
    let rho = p.coords.norm_squared();
    let scale = 2.0 / (1.0 + rho);
    let mut x = DVector::zeros(n + 1);
    for i in 0..n {
        x[i] = scale * p.coords[i];
    }
    x[n] = match p.chart {
        CHART_NORTH_PROJECTION => (rho - 1.0) / (1.0 + rho),
        _ => (1.0 - rho) / (1.0 + rho),
    };
    x
}

/// Reject points that are measurably off the unit sphere.
pub fn check_on_sphere(x: &DVector<f64>, tol: f64) -> Result<()> {
    let defect = x.norm() - 1.0;
    if defect.abs() > tol {
        Err(Error::InvalidPoint { defect })
    } else {
        Ok(())
    }
}

/// Differential of the chart map applied to an ambient tangent vector at x.
pub fn push_tangent(x: &DVector<f64>, v: &DVector<f64>, chart: ChartId) -> DVector<f64> {
    let dim = x.len();
    let last = x[dim - 1];
    let (denom, sign) = match chart {
        CHART_NORTH_PROJECTION => (1.0 - last, 1.0),
        _ => (1.0 + last, -1.0),
    };
    let mut out = DVector::zeros(dim - 1);
    for a in 0..dim - 1 {
        out[a] = v[a] / denom + sign * x[a] * v[dim - 1] / (denom * denom);
    }
    out
}

/// First derivatives dx^c / du^b of the embedding map at a chart point.
/// Returned as an (n+1) x n matrix.
pub fn embedding_jacobian(p: &ChartPoint) -> DMatrix<f64> {
    let n = p.dim();
    let rho = p.coords.norm_squared();
    let s = 1.0 + rho;
    let sign = if p.chart == CHART_NORTH_PROJECTION {
        1.0
    } else {
        -1.0
    };
    let mut jac = DMatrix::zeros(n + 1, n);
    for c in 0..n {
        for b in 0..n {
            let mut v = -4.0 * p.coords[c] * p.coords[b] / (s * s);
            if c == b {
                v += 2.0 / s;
            }
            jac[(c, b)] = v;
        }
    }
    for b in 0..n {
        jac[(n, b)] = sign * 4.0 * p.coords[b] / (s * s);
    }
    jac
}

/// Second derivatives d^2 x^c / du^a du^b, indexed (a, b) for each ambient
/// component c; component c of the result tensor lives at (c, a, b) with the
/// ambient index first (the tensor is sized n+1 on its first axis only, so
/// it is returned as a Vec of symmetric n x n matrices).
pub fn embedding_second_derivs(p: &ChartPoint) -> Vec<DMatrix<f64>> {
    let n = p.dim();
    let rho = p.coords.norm_squared();
    let s = 1.0 + rho;
    let s2 = s * s;
    let s3 = s2 * s;
    let sign = if p.chart == CHART_NORTH_PROJECTION {
        1.0
    } else {
        -1.0
    };
    let u = &p.coords;
    let mut out = Vec::with_capacity(n + 1);
    for c in 0..n {
        let mut m = DMatrix::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                let mut v = 16.0 * u[c] * u[a] * u[b] / s3;
                if c == b {
                    v += -4.0 * u[a] / s2;
                }
                if c == a {
                    v += -4.0 * u[b] / s2;
                }
                if a == b {
                    v += -4.0 * u[c] / s2;
                }
                m[(a, b)] = v;
            }
        }
        out.push(m);
    }
    let mut m = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            let mut v = -16.0 * u[a] * u[b] / s3;
            if a == b {
                v += 4.0 / s2;
            }
            m[(a, b)] = sign * v;
        }
    }
    out.push(m);
    out
}

// ─────────────────────────────────────────────────────────────────────────
// Round metric in stereographic coordinates
// ─────────────────────────────────────────────────────────────────────────

/// The round metric of the unit n-sphere in stereographic coordinates:
/// g_ij = c(u)^2 delta_ij with c = 2 / (1 + |u|^2), identical in both charts.
pub struct SphereChartMetric {
    pub n: usize,
}

impl SphereChartMetric {
    fn factor(p: &ChartPoint) -> f64 {
        2.0 / (1.0 + p.coords.norm_squared())
    }
}

impl ChartedMetric for SphereChartMetric {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, p: &ChartPoint) -> DMatrix<f64> {
        let c = Self::factor(p);
        DMatrix::identity(self.n, self.n) * (c * c)
    }

    fn deriv(&self, p: &ChartPoint) -> Tensor3 {
        // g_ij,k = -2 c^3 u_k delta_ij
        let c = Self::factor(p);
        let c3 = c * c * c;
        let mut out = Tensor3::zeros(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                out.set(i, i, k, -2.0 * c3 * p.coords[k]);
            }
        }
        out
    }

    fn second_deriv(&self, p: &ChartPoint) -> Tensor4 {
        // g_ij,kl = (6 c^4 u_k u_l - 2 c^3 delta_kl) delta_ij
        let c = Self::factor(p);
        let c3 = c * c * c;
        let c4 = c3 * c;
        let mut out = Tensor4::zeros(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                for l in 0..self.n {
                    let mut v = 6.0 * c4 * p.coords[k] * p.coords[l];
                    if k == l {
                        v -= 2.0 * c3;
                    }
                    out.set(i, i, k, l, v);
                }
            }
        }
        out
    }
}

// ─────────────────────────────────────────────────────────────────────────
// Ambient objects pushed to the charts
// ─────────────────────────────────────────────────────────────────────────

/// A vector field on R^{n+1} tangent to the unit sphere.
pub trait AmbientField: Send + Sync {
    fn ambient_dim(&self) -> usize;
    fn eval(&self, x: &DVector<f64>) -> DVector<f64>;
    /// Jacobian J[(mu, c)] = dY^mu / dx^c.
    fn jacobian(&self, x: &DVector<f64>) -> DMatrix<f64>;
}

/// Linear field x -> M x with M skew-symmetric (hence sphere-tangent).
pub struct LinearAmbientField {
    mat: DMatrix<f64>,
}

impl LinearAmbientField {
    pub fn new(mat: DMatrix<f64>) -> Self {
        let skew = (&mat + mat.transpose()).abs().max();
        assert!(skew < 1e-12, "linear sphere field must be skew-symmetric");
        LinearAmbientField { mat }
    }
}

impl AmbientField for LinearAmbientField {
    fn ambient_dim(&self) -> usize {
        self.mat.nrows()
    }

    fn eval(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.mat * x
    }

    fn jacobian(&self, _x: &DVector<f64>) -> DMatrix<f64> {
        self.mat.clone()
    }
}

/// Sphere gradient of the coordinate function x^axis: Y = e_axis - x_axis x.
/// Tangent to the sphere but not Killing; the standard negative control.
pub struct CoordinateGradientField {
    pub ambient_dim: usize,
    pub axis: usize,
}

impl AmbientField for CoordinateGradientField {
    fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    fn eval(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut out = -x[self.axis] * x;
        out[self.axis] += 1.0;
        out
    }

    fn jacobian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let d = self.ambient_dim;
        let mut jac = DMatrix::zeros(d, d);
        for mu in 0..d {
            for c in 0..d {
                let mut v = 0.0;
                if c == self.axis {
                    v -= x[mu];
                }
                if mu == c {
                    v -= x[self.axis];
                }
                jac[(mu, c)] = v;
            }
        }
        jac
    }
}

/// An ambient tangent field expressed in chart coordinates, with analytic
/// derivatives obtained through the projection chain rule.
pub struct PushedSphereField {
    pub n: usize,
    ambient: Box<dyn AmbientField>,
}

impl PushedSphereField {
    pub fn new(n: usize, ambient: Box<dyn AmbientField>) -> Self {
        assert_eq!(ambient.ambient_dim(), n + 1);
        PushedSphereField { n, ambient }
    }

    pub fn ambient(&self) -> &dyn AmbientField {
        self.ambient.as_ref()
    }
}

impl ChartedVectorField for PushedSphereField {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, p: &ChartPoint) -> DVector<f64> {
        let n = self.n;
        let x = embed(p);
        let y = self.ambient.eval(&x);
        let rho = p.coords.norm_squared();
        let half_s = 0.5 * (1.0 + rho);
        let sign = if p.chart == CHART_NORTH_PROJECTION {
            1.0
        } else {
            -1.0
        };
        let mut out = DVector::zeros(n);
        for a in 0..n {
            out[a] = half_s * (y[a] + sign * p.coords[a] * y[n]);
        }
        out
    }

    fn deriv(&self, p: &ChartPoint) -> DMatrix<f64> {
        let n = self.n;
        let x = embed(p);
        let y = self.ambient.eval(&x);
        let jac_y = self.ambient.jacobian(&x);
        let jac_x = embedding_jacobian(p);
        let rho = p.coords.norm_squared();
        let half_s = 0.5 * (1.0 + rho);
        let sign = if p.chart == CHART_NORTH_PROJECTION {
            1.0
        } else {
            -1.0
        };
        // dY~^mu / du^b through the embedding.
        let dy = &jac_y * &jac_x; // (n+1) x n
        let mut out = DMatrix::zeros(n, n);
        for a in 0..n {
            let w = y[a] + sign * p.coords[a] * y[n];
            for b in 0..n {
                let mut v = p.coords[b] * w;
                let mut inner = dy[(a, b)] + sign * p.coords[a] * dy[(n, b)];
                if a == b {
                    inner += sign * y[n];
                }
                v += half_s * inner;
                out[(a, b)] = v;
            }
        }
        out
    }
}

/// A scalar function on R^{n+1} with analytic gradient and Hessian.
pub trait AmbientScalar: Send + Sync {
    fn ambient_dim(&self) -> usize;
    fn eval(&self, x: &DVector<f64>) -> f64;
    fn grad(&self, x: &DVector<f64>) -> DVector<f64>;
    fn hess(&self, x: &DVector<f64>) -> DMatrix<f64>;
}

/// An ambient scalar restricted to the sphere, as a chart scalar field with
/// analytic chart gradient and Hessian.
pub struct PushedSphereScalar {
    pub n: usize,
    ambient: Box<dyn AmbientScalar>,
}

impl PushedSphereScalar {
    pub fn new(n: usize, ambient: Box<dyn AmbientScalar>) -> Self {
        assert_eq!(ambient.ambient_dim(), n + 1);
        PushedSphereScalar { n, ambient }
    }

    pub fn eval_embedding(&self, x: &DVector<f64>) -> f64 {
        self.ambient.eval(x)
    }
}

impl ChartedScalarField for PushedSphereScalar {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, p: &ChartPoint) -> f64 {
        self.ambient.eval(&embed(p))
    }

    fn grad(&self, p: &ChartPoint) -> DVector<f64> {
        let x = embed(p);
        let g = self.ambient.grad(&x);
        let jac = embedding_jacobian(p);
        jac.transpose() * g
    }

    fn hess(&self, p: &ChartPoint) -> DMatrix<f64> {
        let n = self.n;
        let x = embed(p);
        let g = self.ambient.grad(&x);
        let h = self.ambient.hess(&x);
        let jac = embedding_jacobian(p);
        let second = embedding_second_derivs(p);
        let mut out = jac.transpose() * h * &jac;
        for c in 0..n + 1 {
            out += &second[c] * g[c];
        }
        out
    }
}

/// The rotation generator whose flow is scalar multiplication by i on each
/// complex pair of coordinates: the Hopf direction matrix J with
/// J x = (-x_2, x_1, -x_4, x_3, ...).
pub fn hopf_matrix(ambient_dim: usize) -> DMatrix<f64> {
    assert!(ambient_dim % 2 == 0, "Hopf rotation needs an even ambient dimension");
    let mut j = DMatrix::zeros(ambient_dim, ambient_dim);
    for a in 0..ambient_dim / 2 {
        j[(2 * a, 2 * a + 1)] = -1.0;
        j[(2 * a + 1, 2 * a)] = 1.0;
    }
    j
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::sphere_points;

    #[test]
    fn chart_round_trips_preserve_points() {
        for (i, x) in sphere_points(3, 100, 11).iter().enumerate() {
            let p = to_chart(x);
            assert!(p.coords.norm() <= 1.0 + 1e-12, "chart coords stay in unit ball");
            let back = embed(&p);
            assert!((back - x).norm() < 1e-14, "round trip failed at sample {i}");
        }
    }

    #[test]
    fn both_charts_agree_on_the_equator_band(){
        for x in sphere_points(3, 64, 5) {
            let mut y = x.clone();
            y[3] = 0.0;
            let y = y.normalize();
            let a = embed(&to_chart_in(&y, CHART_NORTH_PROJECTION));
            let b = embed(&to_chart_in(&y, CHART_SOUTH_PROJECTION));
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn embedding_jacobian_matches_finite_differences() {
        let p = ChartPoint::new(0, DVector::from_column_slice(&[0.3, -0.2, 0.5]));
        let jac = embedding_jacobian(&p);
        let h = 1e-6;
        for b in 0..3 {
            let mut plus = p.clone();
            plus.coords[b] += h;
            let mut minus = p.clone();
            minus.coords[b] -= h;
            let fd = (embed(&plus) - embed(&minus)) / (2.0 * h);
            for c in 0..4 {
                assert!((jac[(c, b)] - fd[c]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn embedding_second_derivs_match_finite_differences() {
        for chart in [CHART_NORTH_PROJECTION, CHART_SOUTH_PROJECTION] {
            let p = ChartPoint::new(chart, DVector::from_column_slice(&[0.4, 0.1, -0.3]));
            let second = embedding_second_derivs(&p);
            let h = 1e-4;
            for a in 0..3 {
                let mut plus = p.clone();
                plus.coords[a] += h;
                let mut minus = p.clone();
                minus.coords[a] -= h;
                let jp = embedding_jacobian(&plus);
                let jm = embedding_jacobian(&minus);
                for c in 0..4 {
                    for b in 0..3 {
                        let fd = (jp[(c, b)] - jm[(c, b)]) / (2.0 * h);
                        assert!(
                            (second[c][(a, b)] - fd).abs() < 1e-6,
                            "second deriv mismatch chart {chart} c={c} a={a} b={b}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn round_metric_is_the_pullback_of_the_ambient_dot_product() {
        // Push two ambient tangent vectors into the chart and compare the
        // chart metric's value with the plain Euclidean pairing upstairs.
        let metric = SphereChartMetric { n: 3 };
        for x in sphere_points(3, 50, 23) {
            let p = to_chart(&x);
            // Build tangent vectors by projecting coordinate directions.
            for axis in 0..2 {
                let mut v = DVector::zeros(4);
                v[axis] = 1.0;
                let v = &v - &x * x[axis];
                let mut w = DVector::zeros(4);
                w[axis + 1] = 1.0;
                let w = &w - &x * x[axis + 1];
                let vc = push_tangent(&x, &v, p.chart);
                let wc = push_tangent(&x, &w, p.chart);
                let g = metric.eval(&p);
                let chart_val = (g * &wc).dot(&vc);
                let ambient_val = v.dot(&w);
                assert!(
                    (chart_val - ambient_val).abs() < 1e-12,
                    "pullback mismatch at axis {axis}"
                );
            }
        }
    }

    #[test]
    fn hopf_pushforward_matches_tangent_projection() {
        let field = PushedSphereField::new(3, Box::new(LinearAmbientField::new(hopf_matrix(4))));
        for x in sphere_points(3, 80, 9) {
            let p = to_chart(&x);
            let direct = field.eval(&p);
            let pushed = push_tangent(&x, &(hopf_matrix(4) * &x), p.chart);
            assert!((direct - pushed).norm() < 1e-12);
        }
    }

    #[test]
    fn pushed_field_jacobian_matches_finite_differences() {
        let field = PushedSphereField::new(3, Box::new(LinearAmbientField::new(hopf_matrix(4))));
        let p = ChartPoint::new(1, DVector::from_column_slice(&[0.2, -0.5, 0.3]));
        let jac = field.deriv(&p);
        let h = 1e-6;
        for b in 0..3 {
            let mut plus = p.clone();
            plus.coords[b] += h;
            let mut minus = p.clone();
            minus.coords[b] -= h;
            let fd = (field.eval(&plus) - field.eval(&minus)) / (2.0 * h);
            for a in 0..3 {
                assert!((jac[(a, b)] - fd[a]).abs() < 1e-8);
            }
        }
    }
}
