//! Chart-based tensor calculus on explicit coordinate patches.
//!
//! Everything here works pointwise on a `ChartPoint`: metrics and fields are
//! trait objects that report their components and derivatives in the chart
//! the point lives in. Derivatives are analytic whenever the object can
//! provide them; a finite-difference fallback covers the rest. The
//! operations are deliberately pedestrian dense loops over small dimensions
//! (n = 2..5), favouring auditability over cleverness.

pub mod deform;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Index of a coordinate patch within an atlas (0 = first chart).
pub type ChartId = usize;

/// A point expressed in the coordinates of one chart.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartPoint {
    pub chart: ChartId,
    pub coords: DVector<f64>,
}

impl ChartPoint {
    pub fn new(chart: ChartId, coords: DVector<f64>) -> Self {
        ChartPoint { chart, coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// How an object produces its derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DerivMode {
    Analytic,
    FiniteDifference,
}

/// Central-difference step for first derivatives.
pub fn fd_step(coords: &DVector<f64>) -> f64 {
    f64::EPSILON.cbrt() * coords.norm().max(1.0)
}

/// Central-difference step for nested second derivatives.
pub fn fd_step_second(coords: &DVector<f64>) -> f64 {
    f64::EPSILON.powf(0.25) * coords.norm().max(1.0)
}

// ─────────────────────────────────────────────────────────────────────────
// Small dense tensors
// ─────────────────────────────────────────────────────────────────────────

/// Dense rank-3 tensor with all axes of length `n`.
#[derive(Debug, Clone)]
pub struct Tensor3 {
    n: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(n: usize) -> Self {
        Tensor3 {
            n,
            data: vec![0.0; n * n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.n + j) * self.n + k]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        self.data[(i * self.n + j) * self.n + k] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn sub(&self, other: &Tensor3) -> Tensor3 {
        assert_eq!(self.n, other.n);
        Tensor3 {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Dense rank-4 tensor with all axes of length `n`.
#[derive(Debug, Clone)]
pub struct Tensor4 {
    n: usize,
    data: Vec<f64>,
}

impl Tensor4 {
    pub fn zeros(n: usize) -> Self {
        Tensor4 {
            n,
            data: vec![0.0; n * n * n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.data[((i * self.n + j) * self.n + k) * self.n + l]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        self.data[((i * self.n + j) * self.n + k) * self.n + l] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

// ─────────────────────────────────────────────────────────────────────────
// Geometric objects
// ─────────────────────────────────────────────────────────────────────────

/// A Riemannian metric evaluated pointwise on charts.
pub trait ChartedMetric {
    fn dim(&self) -> usize;

    /// Components g_{ij} at the point.
    fn eval(&self, p: &ChartPoint) -> DMatrix<f64>;

    /// Partial derivatives: tensor indexed (i, j, k) = g_{ij,k}.
    fn deriv(&self, p: &ChartPoint) -> Tensor3 {
        fd_metric_deriv(self, p, fd_step(&p.coords))
    }

    /// Second partials (i, j, k, l) = g_{ij,kl}; defaults to nested central
    /// differences of `deriv` with the coarser second-derivative step.
    fn second_deriv(&self, p: &ChartPoint) -> Tensor4 {
        let n = self.dim();
        let h = fd_step_second(&p.coords);
        let mut out = Tensor4::zeros(n);
        for l in 0..n {
            let mut plus = p.clone();
            plus.coords[l] += h;
            let mut minus = p.clone();
            minus.coords[l] -= h;
            let dp = self.deriv(&plus);
            let dm = self.deriv(&minus);
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        out.set(i, j, k, l, (dp.get(i, j, k) - dm.get(i, j, k)) / (2.0 * h));
                    }
                }
            }
        }
        out
    }

    fn deriv_mode(&self) -> DerivMode {
        DerivMode::Analytic
    }
}

/// A (contravariant) vector field evaluated pointwise on charts.
pub trait ChartedVectorField {
    fn dim(&self) -> usize;

    /// Components Y^i at the point.
    fn eval(&self, p: &ChartPoint) -> DVector<f64>;

    /// Jacobian matrix J[(i, j)] = dY^i / du^j.
    fn deriv(&self, p: &ChartPoint) -> DMatrix<f64> {
        fd_field_deriv(self, p, fd_step(&p.coords))
    }

    fn deriv_mode(&self) -> DerivMode {
        DerivMode::Analytic
    }
}

/// A scalar function evaluated pointwise on charts.
pub trait ChartedScalarField {
    fn dim(&self) -> usize;
    fn eval(&self, p: &ChartPoint) -> f64;
    fn grad(&self, p: &ChartPoint) -> DVector<f64>;
    /// Matrix of plain second partials (no connection correction).
    fn hess(&self, p: &ChartPoint) -> DMatrix<f64>;
}

/// Finite-difference first derivatives of a metric, for cross-checks and
/// as the fallback when no analytic derivative is available.
pub fn fd_metric_deriv<M: ChartedMetric + ?Sized>(m: &M, p: &ChartPoint, h: f64) -> Tensor3 {
    let n = m.dim();
    let mut out = Tensor3::zeros(n);
    for k in 0..n {
        let mut plus = p.clone();
        plus.coords[k] += h;
        let mut minus = p.clone();
        minus.coords[k] -= h;
        let gp = m.eval(&plus);
        let gm = m.eval(&minus);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, k, (gp[(i, j)] - gm[(i, j)]) / (2.0 * h));
            }
        }
    }
    out
}

/// Finite-difference Jacobian of a vector field.
pub fn fd_field_deriv<Y: ChartedVectorField + ?Sized>(
    y: &Y,
    p: &ChartPoint,
    h: f64,
) -> DMatrix<f64> {
    let n = y.dim();
    let mut out = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut plus = p.clone();
        plus.coords[j] += h;
        let mut minus = p.clone();
        minus.coords[j] -= h;
        let yp = y.eval(&plus);
        let ym = y.eval(&minus);
        for i in 0..n {
            out[(i, j)] = (yp[i] - ym[i]) / (2.0 * h);
        }
    }
    out
}

/// Flat Euclidean space as a single-chart metric (identity components).
pub struct EuclideanMetric {
    pub n: usize,
}

impl ChartedMetric for EuclideanMetric {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, _p: &ChartPoint) -> DMatrix<f64> {
        DMatrix::identity(self.n, self.n)
    }

    fn deriv(&self, _p: &ChartPoint) -> Tensor3 {
        Tensor3::zeros(self.n)
    }

    fn second_deriv(&self, _p: &ChartPoint) -> Tensor4 {
        Tensor4::zeros(self.n)
    }
}

/// Metric defined by an evaluation closure only; all derivatives are
/// finite differences. Used to exercise the fallback path.
pub struct FdMetric<F: Fn(&ChartPoint) -> DMatrix<f64>> {
    pub n: usize,
    pub eval_fn: F,
}

impl<F: Fn(&ChartPoint) -> DMatrix<f64>> ChartedMetric for FdMetric<F> {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, p: &ChartPoint) -> DMatrix<f64> {
        (self.eval_fn)(p)
    }

    fn deriv_mode(&self) -> DerivMode {
        DerivMode::FiniteDifference
    }
}

/// Vector field built from closures for components and Jacobian.
pub struct ClosureField {
    pub n: usize,
    pub eval_fn: Box<dyn Fn(&ChartPoint) -> DVector<f64> + Send + Sync>,
    pub deriv_fn: Option<Box<dyn Fn(&ChartPoint) -> DMatrix<f64> + Send + Sync>>,
}

impl ChartedVectorField for ClosureField {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, p: &ChartPoint) -> DVector<f64> {
        (self.eval_fn)(p)
    }

    fn deriv(&self, p: &ChartPoint) -> DMatrix<f64> {
        match &self.deriv_fn {
            Some(f) => f(p),
            None => fd_field_deriv(self, p, fd_step(&p.coords)),
        }
    }

    fn deriv_mode(&self) -> DerivMode {
        if self.deriv_fn.is_some() {
            DerivMode::Analytic
        } else {
            DerivMode::FiniteDifference
        }
    }
}

/// Scalar field built from closures (value, gradient, plain Hessian).
pub struct ClosureScalar {
    pub n: usize,
    pub eval_fn: Box<dyn Fn(&ChartPoint) -> f64 + Send + Sync>,
    pub grad_fn: Box<dyn Fn(&ChartPoint) -> DVector<f64> + Send + Sync>,
    pub hess_fn: Box<dyn Fn(&ChartPoint) -> DMatrix<f64> + Send + Sync>,
}

impl ChartedScalarField for ClosureScalar {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, p: &ChartPoint) -> f64 {
        (self.eval_fn)(p)
    }

    fn grad(&self, p: &ChartPoint) -> DVector<f64> {
        (self.grad_fn)(p)
    }

    fn hess(&self, p: &ChartPoint) -> DMatrix<f64> {
        (self.hess_fn)(p)
    }
}

// ─────────────────────────────────────────────────────────────────────────
// Connection, Laplacian, curvature
// ─────────────────────────────────────────────────────────────────────────

fn invert(g: &DMatrix<f64>) -> DMatrix<f64> {
    g.clone()
        .try_inverse()
        .expect("metric is singular at this point")
}

/// Christoffel symbols of the second kind, indexed (k, i, j) = Gamma^k_{ij}.
pub fn christoffel(m: &dyn ChartedMetric, p: &ChartPoint) -> Tensor3 {
    let n = m.dim();
    let g = m.eval(p);
    let dg = m.deriv(p);
    let ginv = invert(&g);
    let mut gamma = Tensor3::zeros(n);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for l in 0..n {
                    acc += ginv[(k, l)] * (dg.get(i, l, j) + dg.get(j, l, i) - dg.get(i, j, l));
                }
                gamma.set(k, i, j, 0.5 * acc);
            }
        }
    }
    gamma
}

/// Covariant Hessian of a scalar: (i, j) = d_i d_j u - Gamma^k_{ij} d_k u.
pub fn covariant_hessian(
    u: &dyn ChartedScalarField,
    m: &dyn ChartedMetric,
    p: &ChartPoint,
) -> DMatrix<f64> {
    let n = m.dim();
    let grad = u.grad(p);
    let hess = u.hess(p);
    let gamma = christoffel(m, p);
    let mut out = hess;
    for i in 0..n {
        for j in 0..n {
            let mut corr = 0.0;
            for k in 0..n {
                corr += gamma.get(k, i, j) * grad[k];
            }
            out[(i, j)] -= corr;
        }
    }
    out
}

/// Laplace-Beltrami operator: g^{ij} (d_i d_j u - Gamma^k_{ij} d_k u).
pub fn laplace_beltrami(
    u: &dyn ChartedScalarField,
    m: &dyn ChartedMetric,
    p: &ChartPoint,
) -> f64 {
    let g = m.eval(p);
    let ginv = invert(&g);
    let hess = covariant_hessian(u, m, p);
    let mut acc = 0.0;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            acc += ginv[(i, j)] * hess[(i, j)];
        }
    }
    acc
}

/// Covariant derivative of a field with the index down:
/// (i, j) = nabla_i Y_j = d_i Y_j - Gamma^k_{ij} Y_k.
pub fn covariant_deriv_lowered(
    y: &dyn ChartedVectorField,
    m: &dyn ChartedMetric,
    p: &ChartPoint,
) -> DMatrix<f64> {
    let n = m.dim();
    let g = m.eval(p);
    let dg = m.deriv(p);
    let yv = y.eval(p);
    let dy = y.deriv(p);
    let gamma = christoffel(m, p);
    // Lowered components and their partials.
    let y_low = &g * &yv;
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            // d_i Y_j = g_{jk,i} Y^k + g_{jk} dY^k/du^i
            let mut dij = 0.0;
            for k in 0..n {
                dij += dg.get(j, k, i) * yv[k] + g[(j, k)] * dy[(k, i)];
            }
            let mut corr = 0.0;
            for k in 0..n {
                corr += gamma.get(k, i, j) * y_low[k];
            }
            out[(i, j)] = dij - corr;
        }
    }
    out
}

/// Report of the four Killing-field diagnostics over a sample set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KillingReport {
    /// max over samples of |nabla_i Y_j + nabla_j Y_i| (invariant norm).
    pub sym_residual: f64,
    /// max over samples of |div Y|.
    pub divergence_max: f64,
    /// max - min of |Y|_g over samples.
    pub length_variation: f64,
    /// Mean of |Y|_g over samples (reported so unit length is visible).
    pub mean_length: f64,
    /// max over samples of |Y^i nabla_i Y|_g.
    pub geodesic_residual: f64,
    pub samples: usize,
}

impl KillingReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.sym_residual <= tol
            && self.divergence_max <= tol
            && self.length_variation <= tol
            && self.geodesic_residual <= tol
    }
}

/// Evaluate the Killing diagnostics for a field against a metric.
pub fn killing_report(
    y: &dyn ChartedVectorField,
    m: &dyn ChartedMetric,
    points: &[ChartPoint],
) -> KillingReport {
    let n = m.dim();
    let mut sym: f64 = 0.0;
    let mut div: f64 = 0.0;
    let mut len_min = f64::INFINITY;
    let mut len_max = f64::NEG_INFINITY;
    let mut len_sum = 0.0;
    let mut geo: f64 = 0.0;
    for p in points {
        let g = m.eval(p);
        let ginv = invert(&g);
        let yv = y.eval(p);
        let nabla = covariant_deriv_lowered(y, m, p);

        // Invariant squared norm of the symmetrised derivative:
        // g^{ik} g^{jl} K_{ij} K_{kl} with K = nabla Y + (nabla Y)^T.
        let k = &nabla + nabla.transpose();
        let mut k2 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        k2 += ginv[(i, a)] * ginv[(j, b)] * k[(i, j)] * k[(a, b)];
                    }
                }
            }
        }
        sym = sym.max(k2.max(0.0).sqrt());

        // Divergence: g^{ij} nabla_i Y_j.
        let mut d = 0.0;
        for i in 0..n {
            for j in 0..n {
                d += ginv[(i, j)] * nabla[(i, j)];
            }
        }
        div = div.max(d.abs());

        let len2 = (g.clone() * &yv).dot(&yv);
        let len = len2.max(0.0).sqrt();
        len_min = len_min.min(len);
        len_max = len_max.max(len);
        len_sum += len;

        // Geodesic defect Y^i nabla_i Y_j, measured in the metric norm.
        let mut acc = DVector::<f64>::zeros(n);
        for j in 0..n {
            for i in 0..n {
                acc[j] += yv[i] * nabla[(i, j)];
            }
        }
        // acc has the index down; |v|^2 = g^{jl} v_j v_l.
        let mut g2: f64 = 0.0;
        for j in 0..n {
            for l in 0..n {
                g2 += ginv[(j, l)] * acc[j] * acc[l];
            }
        }
        geo = geo.max(g2.max(0.0).sqrt());
    }
    KillingReport {
        sym_residual: sym,
        divergence_max: div,
        length_variation: len_max - len_min,
        mean_length: len_sum / points.len().max(1) as f64,
        geodesic_residual: geo,
        samples: points.len(),
    }
}

/// Riemann tensor, indexed (l, k, i, j) = R^l_{kij}, i.e. the coefficient of
/// R(d_i, d_j) d_k on d_l. Antisymmetric in the last two slots.
pub fn riemann(m: &dyn ChartedMetric, p: &ChartPoint) -> Tensor4 {
    let n = m.dim();
    let g = m.eval(p);
    let dg = m.deriv(p);
    let d2g = m.second_deriv(p);
    let ginv = invert(&g);
    let gamma = christoffel(m, p);

    // dGamma[(m, k, i, j)] = d_m Gamma^k_{ij}, assembled analytically from
    // first and second metric derivatives.
    let mut dgamma = Tensor4::zeros(n);
    // d_m g^{kl} = -g^{ka} g_{ab,m} g^{bl}
    let mut dginv = Tensor3::zeros(n);
    for mm in 0..n {
        for k in 0..n {
            for l in 0..n {
                let mut acc = 0.0;
                for a in 0..n {
                    for b in 0..n {
                        acc -= ginv[(k, a)] * dg.get(a, b, mm) * ginv[(b, l)];
                    }
                }
                dginv.set(k, l, mm, acc);
            }
        }
    }
    for mm in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut acc = 0.0;
                    for l in 0..n {
                        let s = dg.get(i, l, j) + dg.get(j, l, i) - dg.get(i, j, l);
                        let ds = d2g.get(i, l, j, mm) + d2g.get(j, l, i, mm)
                            - d2g.get(i, j, l, mm);
                        acc += dginv.get(k, l, mm) * s + ginv[(k, l)] * ds;
                    }
                    dgamma.set(mm, k, i, j, 0.5 * acc);
                }
            }
        }
    }

    let mut r = Tensor4::zeros(n);
    for l in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut v = dgamma.get(i, l, j, k) - dgamma.get(j, l, i, k);
                    for mm in 0..n {
                        v += gamma.get(l, i, mm) * gamma.get(mm, j, k)
                            - gamma.get(l, j, mm) * gamma.get(mm, i, k);
                    }
                    r.set(l, k, i, j, v);
                }
            }
        }
    }
    r
}

/// Sectional curvature of the plane spanned by chart vectors v, w.
pub fn sectional_curvature(
    m: &dyn ChartedMetric,
    p: &ChartPoint,
    v: &DVector<f64>,
    w: &DVector<f64>,
) -> f64 {
    let n = m.dim();
    let g = m.eval(p);
    let r = riemann(m, p);
    // R(v, w) w, then paired with v.
    let mut rv = DVector::zeros(n);
    for l in 0..n {
        let mut acc = 0.0;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    acc += r.get(l, k, i, j) * w[k] * v[i] * w[j];
                }
            }
        }
        rv[l] = acc;
    }
    let num = (g.clone() * rv).dot(v);
    let vv = (g.clone() * v).dot(v);
    let ww = (g.clone() * w).dot(w);
    let vw = (g * v).dot(w);
    num / (vv * ww - vw * vw)
}

/// First Bianchi identity residual: max |R^l_{kij} + R^l_{ijk} + R^l_{jki}|.
pub fn bianchi_residual(m: &dyn ChartedMetric, p: &ChartPoint) -> f64 {
    let n = m.dim();
    let r = riemann(m, p);
    let mut worst: f64 = 0.0;
    for l in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let cyc = r.get(l, k, i, j) + r.get(l, i, j, k) + r.get(l, j, k, i);
                    worst = worst.max(cyc.abs());
                }
            }
        }
    }
    worst
}

/// Residual of the space-form curvature identity
/// R(A, Y)B = g(Y, B) A - g(A, B) Y, maximised over samples and trial pairs.
///
/// On a unit round sphere with Y the unit Killing field this vanishes; on a
/// flat chart it reduces to |g(Y,B)A - g(A,B)Y| and is the negative control.
pub fn sasaki_residual(
    m: &dyn ChartedMetric,
    y: &dyn ChartedVectorField,
    points: &[ChartPoint],
    pairs_per_point: usize,
    seed: u64,
) -> f64 {
    let n = m.dim();
    let mut halton = crate::sampling::Halton::new(n.min(8), seed);
    let mut worst: f64 = 0.0;
    for p in points {
        let g = m.eval(p);
        let r = riemann(m, p);
        let yv = y.eval(p);
        for _ in 0..pairs_per_point {
            let a = DVector::from_iterator(
                n,
                halton.next_point().into_iter().map(|u| 2.0 * u - 1.0),
            );
            let b = DVector::from_iterator(
                n,
                halton.next_point().into_iter().map(|u| 2.0 * u - 1.0),
            );
            // R(A, Y) B
            let mut rab = DVector::zeros(n);
            for l in 0..n {
                let mut acc = 0.0;
                for k in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            acc += r.get(l, k, i, j) * b[k] * a[i] * yv[j];
                        }
                    }
                }
                rab[l] = acc;
            }
            let gyb = (g.clone() * &yv).dot(&b);
            let gab = (g.clone() * &a).dot(&b);
            let defect = rab - (&a * gyb - &yv * gab);
            // Invariant norm of the defect vector.
            let mut d2 = 0.0;
            for i in 0..n {
                for j in 0..n {
                    d2 += g[(i, j)] * defect[i] * defect[j];
                }
            }
            worst = worst.max(d2.max(0.0).sqrt());
        }
    }
    worst
}
