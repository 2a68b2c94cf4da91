//! Finite isometry groups of the deformed spheres: quaternion subgroups
//! acting by left multiplication, lens-type rotation actions, and the
//! certification that each action is free and preserves both the metric
//! and the deforming direction field.
//!
//! The sphere coordinates are matched to quaternions by
//!   (x_1, x_2, x_3, x_4)  <->  x_1 + x_2 i + x_4 j + x_3 k,
//! chosen so that right multiplication by i is exactly the rotation field
//! used to deform the metric. Left multiplications commute with right
//! multiplications, so every group here automatically preserves the field;
//! the certification still measures it numerically rather than trusting
//! the algebra.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::sampling::sphere_points;
use crate::sphere::chart::{push_tangent, to_chart};
use crate::sphere::BergerSphere;
use crate::tensor::ChartedMetric;

/// Hard cap on closure enumeration before declaring the group infinite.
pub const GROUP_ORDER_CAP: usize = 10_000;

const MATCH_TOL: f64 = 1e-9;
const AMBIGUITY_TOL: f64 = 1e-6;

// ─────────────────────────────────────────────────────────────────────────
// Quaternions
// ─────────────────────────────────────────────────────────────────────────

/// Unit quaternion w + x i + y j + z k, renormalized on every operation.
#[derive(Clone, Copy, Debug)]
pub struct UnitQuat {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl UnitQuat {
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (w * w + x * x + y * y + z * z).sqrt();
        if n < 1e-9 {
            return Err(Error::InvalidConfig(
                "quaternion generator too close to zero".into(),
            ));
        }
        Ok(UnitQuat {
            w: w / n,
            x: x / n,
            y: y / n,
            z: z / n,
        })
    }

    pub fn identity() -> Self {
        UnitQuat {
            w: 1.0,
            x: 0.0,
            y: 0.0,
            z: 0.0,
        }
    }

    pub fn mul(&self, o: &UnitQuat) -> UnitQuat {
        let w = self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z;
        let x = self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y;
        let y = self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x;
        let z = self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w;
        UnitQuat::new(w, x, y, z).expect("product of unit quaternions is a unit quaternion")
    }

    pub fn conj(&self) -> UnitQuat {
        UnitQuat {
            w: self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    pub fn dist(&self, o: &UnitQuat) -> f64 {
        ((self.w - o.w).powi(2)
            + (self.x - o.x).powi(2)
            + (self.y - o.y).powi(2)
            + (self.z - o.z).powi(2))
        .sqrt()
    }

    pub fn components(&self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }
}

/// Sphere point -> quaternion under the pairing fixed for this crate.
pub fn quat_of_sphere(x: &DVector<f64>) -> UnitQuat {
    UnitQuat {
        w: x[0],
        x: x[1],
        y: x[3],
        z: x[2],
    }
}

/// Quaternion -> sphere point, inverse of `quat_of_sphere`.
pub fn sphere_of_quat(q: &UnitQuat) -> DVector<f64> {
    DVector::from_column_slice(&[q.w, q.x, q.z, q.y])
}

/// Matrix of x -> g * x on sphere coordinates.
pub fn left_multiplication_matrix(g: &UnitQuat) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(4, 4);
    for k in 0..4 {
        let mut e = DVector::zeros(4);
        e[k] = 1.0;
        let col = sphere_of_quat(&g_times(&quat_of_sphere(&e), g, true));
        for r in 0..4 {
            m[(r, k)] = col[r];
        }
    }
    m
}

/// Matrix of x -> x * g on sphere coordinates.
pub fn right_multiplication_matrix(g: &UnitQuat) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(4, 4);
    for k in 0..4 {
        let mut e = DVector::zeros(4);
        e[k] = 1.0;
        let col = sphere_of_quat(&g_times(&quat_of_sphere(&e), g, false));
        for r in 0..4 {
            m[(r, k)] = col[r];
        }
    }
    m
}

fn g_times(x: &UnitQuat, g: &UnitQuat, left: bool) -> UnitQuat {
    // raw Hamilton product without renormalization so basis vectors pass
    // through linearly
    let (a, b) = if left { (g, x) } else { (x, g) };
    UnitQuat {
        w: a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        x: a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        y: a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        z: a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    }
}

/// Closure of a generator list under multiplication, breadth first.
pub fn generate_group(generators: &[UnitQuat], cap: usize) -> Result<Vec<UnitQuat>> {
    let mut elements = vec![UnitQuat::identity()];
    let mut frontier = vec![UnitQuat::identity()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for f in &frontier {
            for g in generators {
                let prod = f.mul(g);
                match locate(&elements, &prod)? {
                    Some(_) => {}
                    None => {
                        elements.push(prod);
                        next.push(prod);
                        if elements.len() > cap {
                            return Err(Error::NotFiniteWithinCap { cap });
                        }
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(elements)
}

fn locate(elements: &[UnitQuat], q: &UnitQuat) -> Result<Option<usize>> {
    let mut best = f64::INFINITY;
    let mut best_idx = 0;
    for (i, e) in elements.iter().enumerate() {
        let d = e.dist(q);
        if d < best {
            best = d;
            best_idx = i;
        }
    }
    if best < MATCH_TOL {
        Ok(Some(best_idx))
    } else if best < AMBIGUITY_TOL {
        Err(Error::AmbiguousElement { dist: best })
    } else {
        Ok(None)
    }
}

// ─────────────────────────────────────────────────────────────────────────
// Finite actions on S^3
// ─────────────────────────────────────────────────────────────────────────

#[derive(Clone, Debug, PartialEq)]
pub enum ActionKind {
    LeftQuaternion,
    Lens { m: u32, q: u32 },
}

impl ActionKind {
    pub fn label(&self) -> &'static str {
        match self {
            ActionKind::LeftQuaternion => "left_quaternion",
            ActionKind::Lens { .. } => "lens",
        }
    }
}

pub struct FiniteSymmetryGroup {
    pub name: String,
    pub kind: ActionKind,
    /// Every element as an orthogonal matrix on R^4, identity first.
    pub matrices: Vec<DMatrix<f64>>,
    pub quaternions: Option<Vec<UnitQuat>>,
    /// Exact minimum displacement of any non-identity element over the
    /// sphere; zero means the action is not free.
    pub delta_min: f64,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl FiniteSymmetryGroup {
    pub fn order(&self) -> usize {
        self.matrices.len()
    }

    pub fn from_quaternion_generators(name: &str, gens: &[UnitQuat]) -> Result<Self> {
        let elements = generate_group(gens, GROUP_ORDER_CAP)?;
        let matrices = elements.iter().map(left_multiplication_matrix).collect();
        // left translation displaces every point by exactly |g - 1|
        let identity = UnitQuat::identity();
        let delta_min = elements
            .iter()
            .skip(1)
            .map(|g| g.dist(&identity))
            .fold(f64::INFINITY, f64::min)
            .min(f64::INFINITY);
        let delta_min = if elements.len() == 1 { 0.0 } else { delta_min };
        Ok(FiniteSymmetryGroup {
            name: name.to_string(),
            kind: ActionKind::LeftQuaternion,
            matrices,
            quaternions: Some(elements),
            delta_min,
        })
    }

    /// Lens rotation action: the generator turns the first coordinate pair
    /// by 2 pi / m and the second by 2 pi q / m. Freeness requires q and m
    /// to be coprime, which this constructor enforces.
    pub fn lens(name: &str, m: u32, q: u32) -> Result<Self> {
        if m < 2 || q == 0 || q >= m {
            return Err(Error::InvalidConfig(format!(
                "lens parameters need 2 <= m and 1 <= q < m, got ({m}, {q})"
            )));
        }
        if gcd(m, q) != 1 {
            return Err(Error::InvalidConfig(format!(
                "lens action ({m}, {q}) is not free: the parameters share the factor {}",
                gcd(m, q)
            )));
        }
        Ok(Self::lens_unchecked(name, m, q))
    }

    /// Lens action without the coprimality guard. Exists so the freeness
    /// certification has a genuine failing input to catch.
    pub fn lens_unchecked(name: &str, m: u32, q: u32) -> Self {
        let mut matrices = Vec::with_capacity(m as usize);
        for a in 0..m {
            let th1 = 2.0 * std::f64::consts::PI * a as f64 / m as f64;
            let th2 = 2.0 * std::f64::consts::PI * (a as u64 * q as u64 % m as u64) as f64
                / m as f64;
            let mut mat = DMatrix::zeros(4, 4);
            mat[(0, 0)] = th1.cos();
            mat[(0, 1)] = -th1.sin();
            mat[(1, 0)] = th1.sin();
            mat[(1, 1)] = th1.cos();
            mat[(2, 2)] = th2.cos();
            mat[(2, 3)] = -th2.sin();
            mat[(3, 2)] = th2.sin();
            mat[(3, 3)] = th2.cos();
            matrices.push(mat);
        }
        let mut delta_min = f64::INFINITY;
        for a in 1..m {
            let s1 = (std::f64::consts::PI * a as f64 / m as f64).sin().abs();
            let s2 = (std::f64::consts::PI * (a as u64 * q as u64 % m as u64) as f64
                / m as f64)
                .sin()
                .abs();
            delta_min = delta_min.min(2.0 * s1.min(s2));
        }
        if m == 1 {
            delta_min = 0.0;
        }
        FiniteSymmetryGroup {
            name: name.to_string(),
            kind: ActionKind::Lens { m, q },
            matrices,
            quaternions: None,
            delta_min,
        }
    }

    /// Error out unless every non-identity element displaces every point.
    pub fn certify_free(&self, tol: f64) -> Result<f64> {
        if self.order() > 1 && self.delta_min <= tol {
            let element = match &self.kind {
                ActionKind::LeftQuaternion => "a quaternion at distance ~0 from 1".to_string(),
                ActionKind::Lens { m, q } => {
                    format!("a lens rotation with m = {m}, q = {q} fixing a circle")
                }
            };
            return Err(Error::NotFree {
                element,
                min_displacement: self.delta_min,
            });
        }
        Ok(self.delta_min)
    }

    /// Smallest displacement of any non-identity element over the sample
    /// points; bounded below by delta_min.
    pub fn min_sampled_displacement(&self, points: &[DVector<f64>]) -> f64 {
        let mut best = f64::INFINITY;
        for mat in self.matrices.iter().skip(1) {
            for x in points {
                best = best.min((mat * x - x).norm());
            }
        }
        best
    }
}

/// Closure, identity, and inverse defects measured on the matrix elements.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct AxiomReport {
    pub order: usize,
    pub closure_defect: f64,
    pub inverse_defect: f64,
    pub orthogonality_defect: f64,
}

impl AxiomReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.closure_defect < tol && self.inverse_defect < tol && self.orthogonality_defect < tol
    }
}

pub fn verify_axioms(group: &FiniteSymmetryGroup) -> AxiomReport {
    let mats = &group.matrices;
    let nearest = |target: &DMatrix<f64>| -> f64 {
        mats.iter()
            .map(|m| (m - target).abs().max())
            .fold(f64::INFINITY, f64::min)
    };
    let mut closure_defect: f64 = 0.0;
    for a in mats {
        for b in mats {
            closure_defect = closure_defect.max(nearest(&(a * b)));
        }
    }
    let mut inverse_defect: f64 = 0.0;
    let mut orthogonality_defect: f64 = 0.0;
    let eye = DMatrix::identity(4, 4);
    for m in mats {
        inverse_defect = inverse_defect.max(nearest(&m.transpose()));
        orthogonality_defect =
            orthogonality_defect.max((m.transpose() * m - &eye).abs().max());
    }
    AxiomReport {
        order: mats.len(),
        closure_defect,
        inverse_defect,
        orthogonality_defect,
    }
}

// ─────────────────────────────────────────────────────────────────────────
// Invariance certification
// ─────────────────────────────────────────────────────────────────────────

/// Deformed inner product of two ambient tangent vectors at an embedded
/// point, evaluated through the charts.
pub fn deformed_pairing(
    berger: &BergerSphere,
    x: &DVector<f64>,
    v: &DVector<f64>,
    w: &DVector<f64>,
) -> f64 {
    let p = to_chart(x);
    let vc = push_tangent(x, v, p.chart);
    let wc = push_tangent(x, w, p.chart);
    (berger.metric().eval(&p) * wc).dot(&vc)
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub t: f64,
    pub samples: usize,
    /// max |gbar(dA v, dA w) - gbar(v, w)| over elements A and samples.
    pub metric_residual: f64,
    /// max |A Y(x) - Y(A x)| over elements A and samples.
    pub field_residual: f64,
    /// min over non-identity elements of max |x_1 . A - x_1|: every element
    /// must move the first coordinate function somewhere.
    pub witness_displacement: f64,
}

impl InvarianceReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.metric_residual < tol && self.field_residual < tol
    }
}

pub fn certify_invariance(
    group: &FiniteSymmetryGroup,
    t: f64,
    samples: usize,
    seed: u64,
) -> Result<InvarianceReport> {
    let berger = BergerSphere::new(3, t)?;
    let points = sphere_points(3, samples, seed);
    let d1 = DVector::from_column_slice(&[0.9, -0.2, 0.4, 0.1]);
    let d2 = DVector::from_column_slice(&[-0.3, 0.8, 0.1, 0.5]);
    let hopf = crate::sphere::chart::hopf_matrix(4);

    let mut metric_residual: f64 = 0.0;
    let mut field_residual: f64 = 0.0;
    let mut witness: f64 = f64::INFINITY;
    for (idx, mat) in group.matrices.iter().enumerate() {
        let mut moved: f64 = 0.0;
        for x in &points {
            let v = &d1 - x * d1.dot(x);
            let w = &d2 - x * d2.dot(x);
            let y = mat * x;
            let base = deformed_pairing(&berger, x, &v, &w);
            let pushed = deformed_pairing(&berger, &y, &(mat * &v), &(mat * &w));
            metric_residual = metric_residual.max((pushed - base).abs());
            field_residual = field_residual.max((mat * (&hopf * x) - &hopf * &y).norm());
            moved = moved.max((y[0] - x[0]).abs());
        }
        if idx > 0 {
            witness = witness.min(moved);
        }
    }
    if group.order() == 1 {
        witness = 0.0;
    }
    Ok(InvarianceReport {
        t,
        samples: points.len(),
        metric_residual,
        field_residual,
        witness_displacement: witness,
    })
}

// ─────────────────────────────────────────────────────────────────────────
// Group description files and certificates
// ─────────────────────────────────────────────────────────────────────────

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupSpec {
    pub schema: u32,
    pub name: String,
    pub action: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<[f64; 4]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
}

pub fn parse_group_spec(json: &str) -> Result<GroupSpec> {
    let spec: GroupSpec = serde_json::from_str(json)?;
    if spec.schema != 1 {
        return Err(Error::InvalidConfig(format!(
            "unsupported group file schema {}",
            spec.schema
        )));
    }
    Ok(spec)
}

pub fn build_group(spec: &GroupSpec) -> Result<FiniteSymmetryGroup> {
    let group = match spec.action.as_str() {
        "left_quaternion" => {
            let gens = spec.generators.as_ref().ok_or_else(|| {
                Error::InvalidConfig("left_quaternion action needs generators".into())
            })?;
            let gens: Result<Vec<UnitQuat>> = gens
                .iter()
                .map(|g| UnitQuat::new(g[0], g[1], g[2], g[3]))
                .collect();
            FiniteSymmetryGroup::from_quaternion_generators(&spec.name, &gens?)?
        }
        "lens" => {
            let (m, q) = match (spec.m, spec.q) {
                (Some(m), Some(q)) => (m, q),
                _ => {
                    return Err(Error::InvalidConfig(
                        "lens action needs both m and q".into(),
                    ))
                }
            };
            FiniteSymmetryGroup::lens(&spec.name, m, q)?
        }
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown action kind '{other}'"
            )))
        }
    };
    if let Some(expected) = spec.expected_order {
        if group.order() != expected {
            return Err(Error::CertificationFailed(format!(
                "group '{}' closed with order {} but the file expects {}",
                spec.name,
                group.order(),
                expected
            )));
        }
    }
    Ok(group)
}

/// Group description files shipped with the crate.
pub const BUILTIN_GROUPS: &[(&str, &str)] = &[
    ("cyclic_5", include_str!("../data/groups/cyclic_5.json")),
    ("cyclic_8", include_str!("../data/groups/cyclic_8.json")),
    (
        "binary_dihedral_16",
        include_str!("../data/groups/binary_dihedral_16.json"),
    ),
    (
        "binary_tetrahedral_24",
        include_str!("../data/groups/binary_tetrahedral_24.json"),
    ),
    (
        "binary_octahedral_48",
        include_str!("../data/groups/binary_octahedral_48.json"),
    ),
    (
        "binary_icosahedral_120",
        include_str!("../data/groups/binary_icosahedral_120.json"),
    ),
    ("lens_7_2", include_str!("../data/groups/lens_7_2.json")),
];

pub fn builtin_group_json(name: &str) -> Option<&'static str> {
    BUILTIN_GROUPS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, j)| *j)
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupCertificate {
    pub schema: u32,
    pub name: String,
    pub action: String,
    pub order: usize,
    pub free: bool,
    pub delta_min: f64,
    pub axioms: AxiomReport,
    pub invariance: Vec<InvarianceReport>,
    pub pass: bool,
}

pub fn certify_group(
    group: &FiniteSymmetryGroup,
    t_values: &[f64],
    samples: usize,
    seed: u64,
    tols: &Tolerances,
) -> Result<GroupCertificate> {
    let axioms = verify_axioms(group);
    let free = group.certify_free(1e-9).is_ok();
    let mut invariance = Vec::with_capacity(t_values.len());
    let mut pass = free && axioms.passes(1e-9);
    for &t in t_values {
        let report = certify_invariance(group, t, samples, seed)?;
        if !report.passes(tols.invariance) {
            pass = false;
        }
        if group.order() > 1 && report.witness_displacement < 0.1 {
            pass = false;
        }
        invariance.push(report);
    }
    Ok(GroupCertificate {
        schema: 1,
        name: group.name.clone(),
        action: group.kind.label().to_string(),
        order: group.order(),
        free,
        delta_min: group.delta_min,
        axioms,
        invariance,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn quat(w: f64, x: f64, y: f64, z: f64) -> UnitQuat {
        UnitQuat::new(w, x, y, z).unwrap()
    }

    #[test]
    fn right_multiplication_by_i_is_the_hopf_rotation() {
        let r = right_multiplication_matrix(&quat(0.0, 1.0, 0.0, 0.0));
        let j = crate::sphere::chart::hopf_matrix(4);
        assert!((r - j).abs().max() < 1e-15);
    }

    #[test]
    fn quaternion_cyclic_group_closes_at_the_right_order() {
        let c = (2.0 * std::f64::consts::PI / 5.0).cos();
        let s = (2.0 * std::f64::consts::PI / 5.0).sin();
        let group =
            FiniteSymmetryGroup::from_quaternion_generators("c5", &[quat(c, s, 0.0, 0.0)])
                .unwrap();
        assert_eq!(group.order(), 5);
        let expected = 2.0 * (std::f64::consts::PI / 5.0).sin();
        assert!((group.delta_min - expected).abs() < 1e-12);
    }

    #[test]
    fn binary_dihedral_closes_at_sixteen() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let group = FiniteSymmetryGroup::from_quaternion_generators(
            "bd16",
            &[quat(r, r, 0.0, 0.0), quat(0.0, 0.0, 1.0, 0.0)],
        )
        .unwrap();
        assert_eq!(group.order(), 16);
        let axioms = verify_axioms(&group);
        assert!(axioms.passes(1e-9), "{axioms:?}");
    }

    #[test]
    fn icosahedral_generators_close_at_one_hundred_twenty() {
        let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
        let group = FiniteSymmetryGroup::from_quaternion_generators(
            "2i",
            &[
                quat(0.5, 0.5, 0.5, 0.5),
                quat(phi / 2.0, 1.0 / (2.0 * phi), 0.5, 0.0),
            ],
        )
        .unwrap();
        assert_eq!(group.order(), 120);
        assert!(group.certify_free(1e-9).is_ok());
        // smallest displacement comes from the order-10 elements:
        // |g - 1| = 2 sin(pi/10)
        let expected = 2.0 * (std::f64::consts::PI / 10.0).sin();
        assert!((group.delta_min - expected).abs() < 1e-9);
    }

    #[test]
    fn infinite_groups_hit_the_cap() {
        // an irrational rotation never closes
        let g = quat(0.9, (1.0 - 0.81f64).sqrt(), 0.0, 0.0);
        match generate_group(&[g], 500) {
            Err(Error::NotFiniteWithinCap { cap }) => assert_eq!(cap, 500),
            other => panic!("expected the cap, got {other:?}"),
        }
    }

    #[test]
    fn lens_actions_validate_coprimality() {
        assert!(FiniteSymmetryGroup::lens("l72", 7, 2).is_ok());
        assert!(FiniteSymmetryGroup::lens("l42", 4, 2).is_err());
        let raw = FiniteSymmetryGroup::lens_unchecked("l42", 4, 2);
        assert_eq!(raw.order(), 4);
        assert!(raw.delta_min < 1e-12);
        assert!(matches!(
            raw.certify_free(1e-9),
            Err(Error::NotFree { .. })
        ));
    }

    #[test]
    fn lens_displacement_matches_the_sine_formula() {
        let group = FiniteSymmetryGroup::lens("l72", 7, 2).unwrap();
        assert_eq!(group.order(), 7);
        let mut expected = f64::INFINITY;
        for a in 1..7u32 {
            let s1 = (std::f64::consts::PI * a as f64 / 7.0).sin().abs();
            let s2 = (std::f64::consts::PI * ((2 * a) % 7) as f64 / 7.0).sin().abs();
            expected = expected.min(2.0 * s1.min(s2));
        }
        assert!((group.delta_min - expected).abs() < 1e-12);
        // sampled displacement can only exceed the exact minimum
        let pts = sphere_points(3, 400, 5);
        assert!(group.min_sampled_displacement(&pts) >= group.delta_min - 1e-9);
    }

    #[test]
    fn quaternion_displacement_is_constant_over_the_sphere() {
        let group = FiniteSymmetryGroup::from_quaternion_generators(
            "q8",
            &[quat(0.0, 1.0, 0.0, 0.0), quat(0.0, 0.0, 1.0, 0.0)],
        )
        .unwrap();
        assert_eq!(group.order(), 8);
        let pts = sphere_points(3, 200, 9);
        let sampled = group.min_sampled_displacement(&pts);
        assert!((sampled - group.delta_min).abs() < 1e-9);
    }

    #[test]
    fn quaternion_actions_preserve_metric_and_field() {
        let group = FiniteSymmetryGroup::from_quaternion_generators(
            "bd16",
            &[
                quat(std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2, 0.0, 0.0),
                quat(0.0, 0.0, 1.0, 0.0),
            ],
        )
        .unwrap();
        for t in [-0.5, 1.0, 10.0] {
            let report = certify_invariance(&group, t, 40, 3).unwrap();
            assert!(report.passes(1e-9), "t = {t}: {report:?}");
            assert!(report.witness_displacement > 0.1);
        }
    }

    #[test]
    fn lens_actions_preserve_metric_and_field() {
        let group = FiniteSymmetryGroup::lens("l72", 7, 2).unwrap();
        let report = certify_invariance(&group, 1.0, 40, 3).unwrap();
        assert!(report.passes(1e-9), "{report:?}");
    }

    #[test]
    fn coordinate_swaps_fail_field_equivariance() {
        // (x1,x2,x3,x4) -> (x1,x2,x4,x3) is an isometry of the round sphere
        // that reverses the second rotation plane, so it cannot preserve
        // the field; wire it in as a fake group and watch the check fail.
        let mut swap = DMatrix::identity(4, 4);
        swap[(2, 2)] = 0.0;
        swap[(3, 3)] = 0.0;
        swap[(2, 3)] = 1.0;
        swap[(3, 2)] = 1.0;
        let fake = FiniteSymmetryGroup {
            name: "swap".into(),
            kind: ActionKind::LeftQuaternion,
            matrices: vec![DMatrix::identity(4, 4), swap],
            quaternions: None,
            delta_min: 1.0,
        };
        let report = certify_invariance(&fake, 1.0, 40, 3).unwrap();
        assert!(report.field_residual > 0.5, "{report:?}");
        assert!(report.metric_residual > 1e-3, "{report:?}");
    }

    #[test]
    fn builtin_files_all_build_and_certify() {
        for (name, json) in BUILTIN_GROUPS {
            let spec = parse_group_spec(json).unwrap();
            assert_eq!(&spec.name, name);
            let group = build_group(&spec).unwrap();
            let cert =
                certify_group(&group, &[1.0], 30, 11, &Tolerances::default()).unwrap();
            assert!(cert.pass, "group {name} failed its certificate: {cert:?}");
        }
    }

    #[test]
    fn spec_round_trip_preserves_fields() {
        let json = builtin_group_json("binary_icosahedral_120").unwrap();
        let spec = parse_group_spec(json).unwrap();
        assert_eq!(spec.expected_order, Some(120));
        let back = serde_json::to_string(&spec).unwrap();
        let again = parse_group_spec(&back).unwrap();
        assert_eq!(again.name, spec.name);
    }

    proptest! {
        #[test]
        fn prop_left_multiplication_commutes_with_the_hopf_rotation(
            w in -1.0f64..1.0, x in -1.0f64..1.0,
            y in -1.0f64..1.0, z in -1.0f64..1.0,
        ) {
            prop_assume!(w * w + x * x + y * y + z * z > 0.01);
            let g = UnitQuat::new(w, x, y, z).unwrap();
            let l = left_multiplication_matrix(&g);
            let j = crate::sphere::chart::hopf_matrix(4);
            prop_assert!((&l * &j - &j * &l).abs().max() < 1e-12);
        }

        #[test]
        fn prop_left_multiplication_matrices_are_orthogonal(
            w in -1.0f64..1.0, x in -1.0f64..1.0,
            y in -1.0f64..1.0, z in -1.0f64..1.0,
        ) {
            prop_assume!(w * w + x * x + y * y + z * z > 0.01);
            let g = UnitQuat::new(w, x, y, z).unwrap();
            let l = left_multiplication_matrix(&g);
            let eye = DMatrix::identity(4, 4);
            prop_assert!((l.transpose() * &l - eye).abs().max() < 1e-12);
        }

        #[test]
        fn prop_quaternion_product_is_associative(
            a in proptest::array::uniform4(-1.0f64..1.0),
            b in proptest::array::uniform4(-1.0f64..1.0),
            c in proptest::array::uniform4(-1.0f64..1.0),
        ) {
            prop_assume!(a.iter().map(|v| v * v).sum::<f64>() > 0.01);
            prop_assume!(b.iter().map(|v| v * v).sum::<f64>() > 0.01);
            prop_assume!(c.iter().map(|v| v * v).sum::<f64>() > 0.01);
            let qa = UnitQuat::new(a[0], a[1], a[2], a[3]).unwrap();
            let qb = UnitQuat::new(b[0], b[1], b[2], b[3]).unwrap();
            let qc = UnitQuat::new(c[0], c[1], c[2], c[3]).unwrap();
            let left = qa.mul(&qb).mul(&qc);
            let right = qa.mul(&qb.mul(&qc));
            prop_assert!(left.dist(&right) < 1e-12);
        }
    }
}
