//! Polynomials on the ambient space R^4: exact integer/rational linear
//! algebra for harmonic subspaces, plus compiled float evaluation for
//! quadrature.
//!
//! All spectral bases are built from homogeneous harmonic polynomials, so
//! this module keeps the symbolic part honest: kernels of the flat
//! Laplacian are computed over the rationals and certified exactly, and
//! sphere moments come from a closed product formula, so the only floating
//! point downstream is the final Gram/operator assembly.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, DVector};
use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::sphere::chart::AmbientScalar;

pub type Exponents = Vec<u8>;

/// All monomials of the given total degree in `nv` variables, in a fixed
/// deterministic (lexicographic, leading variable first) order.
pub fn monomials(nv: usize, degree: u32) -> Vec<Exponents> {
    fn rec(nv: usize, degree: u32, prefix: &mut Exponents, out: &mut Vec<Exponents>) {
        if nv == 1 {
            prefix.push(degree as u8);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=degree).rev() {
            prefix.push(e as u8);
            rec(nv - 1, degree - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(nv, degree, &mut Vec::new(), &mut out);
    out
}

/// A fixed monomial basis of one homogeneous degree, with index lookup.
pub struct MonomialMap {
    pub nv: usize,
    pub degree: u32,
    pub exps: Vec<Exponents>,
    index: BTreeMap<Exponents, usize>,
}

impl MonomialMap {
    pub fn new(nv: usize, degree: u32) -> Self {
        let exps = monomials(nv, degree);
        let index = exps
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        MonomialMap {
            nv,
            degree,
            exps,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn index_of(&self, e: &Exponents) -> Option<usize> {
        self.index.get(e).copied()
    }
}

/// Sparse integer matrix in triplet form, for exact operator application.
pub struct SparseIntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub triplets: Vec<(usize, usize, i64)>,
}

impl SparseIntMatrix {
    pub fn apply_big(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![BigInt::zero(); self.rows];
        for &(r, c, val) in &self.triplets {
            out[r] += BigInt::from(val) * &v[c];
        }
        out
    }

    pub fn to_rational(&self) -> Vec<Vec<BigRational>> {
        let mut m = vec![vec![BigRational::zero(); self.cols]; self.rows];
        for &(r, c, val) in &self.triplets {
            m[r][c] += BigRational::from(BigInt::from(val));
        }
        m
    }
}

/// The flat Laplacian sum d^2/dx_i^2 as a map from degree-d monomial
/// coefficients to degree-(d-2) coefficients.
pub fn laplacian_operator(nv: usize, degree: u32) -> (MonomialMap, MonomialMap, SparseIntMatrix) {
    let domain = MonomialMap::new(nv, degree);
    let codomain = if degree >= 2 {
        MonomialMap::new(nv, degree - 2)
    } else {
        MonomialMap {
            nv,
            degree: 0,
            exps: Vec::new(),
            index: BTreeMap::new(),
        }
    };
    let mut triplets = Vec::new();
    for (col, alpha) in domain.exps.iter().enumerate() {
        for i in 0..nv {
            let a = alpha[i] as i64;
            if a >= 2 {
                let mut target = alpha.clone();
                target[i] -= 2;
                let row = codomain
                    .index_of(&target)
                    .expect("laplacian image stays in the lower-degree basis");
                triplets.push((row, col, a * (a - 1)));
            }
        }
    }
    let mat = SparseIntMatrix {
        rows: codomain.len(),
        cols: domain.len(),
        triplets,
    };
    (domain, codomain, mat)
}

/// Derivation along the Hopf rotation: x_0 d_1 - x_1 d_0 + x_2 d_3 - x_3 d_2,
/// acting on degree-d monomial coefficients in four variables. It preserves
/// the degree and commutes with the flat Laplacian.
pub fn hopf_derivation_operator(degree: u32) -> (MonomialMap, SparseIntMatrix) {
    let map = MonomialMap::new(4, degree);
    let mut triplets = Vec::new();
    // pairs (source var, target var, sign): x_target d_source with sign
    let actions: [(usize, usize, i64); 4] = [(1, 0, 1), (0, 1, -1), (3, 2, 1), (2, 3, -1)];
    for (col, alpha) in map.exps.iter().enumerate() {
        for &(src, dst, sign) in &actions {
            let a = alpha[src] as i64;
            if a > 0 {
                let mut target = alpha.clone();
                target[src] -= 1;
                target[dst] += 1;
                let row = map.index_of(&target).expect("derivation preserves degree");
                triplets.push((row, col, sign * a));
            }
        }
    }
    let mat = SparseIntMatrix {
        rows: map.len(),
        cols: map.len(),
        triplets,
    };
    (map, mat)
}

// ─────────────────────────────────────────────────────────────────────────
// Exact linear algebra
// ─────────────────────────────────────────────────────────────────────────

/// Kernel basis of a rational matrix via reduced row echelon form.
/// Returns one vector per free column, in column order.
pub fn rational_kernel(mut m: Vec<Vec<BigRational>>, cols: usize) -> Vec<Vec<BigRational>> {
    let rows = m.len();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let mut piv = None;
        for rr in r..rows {
            if !m[rr][c].is_zero() {
                piv = Some(rr);
                break;
            }
        }
        let Some(piv) = piv else { continue };
        m.swap(r, piv);
        let inv = m[r][c].clone();
        for cc in c..cols {
            let val = &m[r][cc] / &inv;
            m[r][cc] = val;
        }
        let pivot_row = m[r].clone();
        for rr in 0..rows {
            if rr == r || m[rr][c].is_zero() {
                continue;
            }
            let f = m[rr][c].clone();
            for cc in c..cols {
                let val = &m[rr][cc] - &(&f * &pivot_row[cc]);
                m[rr][cc] = val;
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    let pivset: BTreeSet<usize> = pivot_cols.iter().copied().collect();
    let mut kernel = Vec::new();
    for free in 0..cols {
        if pivset.contains(&free) {
            continue;
        }
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::one();
        for (i, &p) in pivot_cols.iter().enumerate() {
            v[p] = -m[i][free].clone();
        }
        kernel.push(v);
    }
    kernel
}

/// Clear denominators and common factors: the smallest integer vector with
/// positive leading entry proportional to the rational input.
pub fn scale_to_integers(v: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        if !x.is_zero() {
            lcm = lcm.lcm(x.denom());
        }
    }
    let mut ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from(lcm.clone())).to_integer()).collect();
    let mut gcd = BigInt::zero();
    for x in &ints {
        gcd = gcd.gcd(x);
    }
    if !gcd.is_zero() && gcd != BigInt::one() {
        for x in ints.iter_mut() {
            *x = &*x / &gcd;
        }
    }
    if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in ints.iter_mut() {
                *x = -&*x;
            }
        }
    }
    ints
}

/// Integer coefficient vectors spanning the harmonic subspace of degree d:
/// the exact kernel of the flat Laplacian on homogeneous polynomials.
pub fn harmonic_kernel(nv: usize, degree: u32) -> (MonomialMap, Vec<Vec<BigInt>>) {
    let (domain, _codomain, lap) = laplacian_operator(nv, degree);
    if degree < 2 {
        // everything of degree 0 or 1 is harmonic
        let dim = domain.len();
        let basis = (0..dim)
            .map(|i| {
                let mut v = vec![BigInt::zero(); dim];
                v[i] = BigInt::one();
                v
            })
            .collect();
        return (domain, basis);
    }
    let kernel = rational_kernel(lap.to_rational(), domain.len());
    let basis = kernel.iter().map(|v| scale_to_integers(v)).collect();
    (domain, basis)
}

// ─────────────────────────────────────────────────────────────────────────
// Sphere moments
// ─────────────────────────────────────────────────────────────────────────

fn double_factorial(m: i64) -> BigInt {
    let mut out = BigInt::one();
    let mut k = m;
    while k > 1 {
        out *= BigInt::from(k);
        k -= 2;
    }
    out
}

fn factorial(m: u64) -> BigInt {
    let mut out = BigInt::one();
    for k in 2..=m {
        out *= BigInt::from(k);
    }
    out
}

/// Moment of a monomial over the unit 3-sphere, as a rational multiple of
/// the total volume 2 pi^2:
///   integral x^alpha dmu = vol(S^3) * prod (alpha_i - 1)!! / (2^h (h+1)!)
/// with h = |alpha| / 2, and zero whenever any exponent is odd.
pub fn sphere_moment_ratio(alpha: &[u8]) -> BigRational {
    assert_eq!(alpha.len(), 4, "moment formula is for S^3 in R^4");
    if alpha.iter().any(|&a| a % 2 == 1) {
        return BigRational::zero();
    }
    let total: u32 = alpha.iter().map(|&a| a as u32).sum();
    let h = (total / 2) as u64;
    let mut num = BigInt::one();
    for &a in alpha {
        num *= double_factorial(a as i64 - 1);
    }
    let den = BigInt::from(2u32).pow(h as u32) * factorial(h + 1);
    BigRational::new(num, den)
}

// ─────────────────────────────────────────────────────────────────────────
// Compiled float polynomials
// ─────────────────────────────────────────────────────────────────────────

/// Multivariate polynomial with float coefficients, normalized term list.
#[derive(Clone, Debug)]
pub struct Poly {
    pub nv: usize,
    pub terms: Vec<(f64, Exponents)>,
}

impl Poly {
    pub fn zero(nv: usize) -> Self {
        Poly {
            nv,
            terms: Vec::new(),
        }
    }

    pub fn from_terms(nv: usize, raw: Vec<(f64, Exponents)>) -> Self {
        let mut map: BTreeMap<Exponents, f64> = BTreeMap::new();
        for (c, e) in raw {
            assert_eq!(e.len(), nv);
            *map.entry(e).or_insert(0.0) += c;
        }
        let terms = map
            .into_iter()
            .filter(|&(_, c)| c != 0.0)
            .map(|(e, c)| (c, e))
            .collect();
        Poly { nv, terms }
    }

    pub fn from_int_coeffs(map: &MonomialMap, coeffs: &[BigInt]) -> Self {
        assert_eq!(coeffs.len(), map.len());
        let raw = coeffs
            .iter()
            .zip(&map.exps)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, e)| {
                (
                    c.to_f64().expect("harmonic coefficients fit in f64"),
                    e.clone(),
                )
            })
            .collect();
        Poly::from_terms(map.nv, raw)
    }

    pub fn eval(&self, x: &DVector<f64>) -> f64 {
        let mut total = 0.0;
        for (c, e) in &self.terms {
            let mut term = *c;
            for (i, &p) in e.iter().enumerate() {
                for _ in 0..p {
                    term *= x[i];
                }
            }
            total += term;
        }
        total
    }

    pub fn partial(&self, i: usize) -> Poly {
        let raw = self
            .terms
            .iter()
            .filter(|(_, e)| e[i] > 0)
            .map(|(c, e)| {
                let mut d = e.clone();
                d[i] -= 1;
                (c * e[i] as f64, d)
            })
            .collect();
        Poly::from_terms(self.nv, raw)
    }
}

/// A polynomial with precompiled first and second partials, usable as an
/// ambient scalar on the sphere charts.
pub struct AmbientPoly {
    pub poly: Poly,
    grads: Vec<Poly>,
    hessians: Vec<Vec<Poly>>,
}

impl AmbientPoly {
    pub fn new(poly: Poly) -> Self {
        let nv = poly.nv;
        let grads: Vec<Poly> = (0..nv).map(|i| poly.partial(i)).collect();
        let hessians = (0..nv)
            .map(|i| (0..nv).map(|j| grads[i].partial(j)).collect())
            .collect();
        AmbientPoly {
            poly,
            grads,
            hessians,
        }
    }
}

impl AmbientScalar for AmbientPoly {
    fn ambient_dim(&self) -> usize {
        self.poly.nv
    }

    fn eval(&self, x: &DVector<f64>) -> f64 {
        self.poly.eval(x)
    }

    fn grad(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(self.poly.nv, self.grads.iter().map(|g| g.eval(x)))
    }

    fn hess(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let nv = self.poly.nv;
        DMatrix::from_fn(nv, nv, |i, j| self.hessians[i][j].eval(x))
    }
}

/// Convenience: check that an integer coefficient vector is exactly killed
/// by the flat Laplacian.
pub fn is_exactly_harmonic(nv: usize, degree: u32, coeffs: &[BigInt]) -> bool {
    if degree < 2 {
        return true;
    }
    let (_domain, _codomain, lap) = laplacian_operator(nv, degree);
    lap.apply_big(coeffs).iter().all(|x| x.is_zero())
}

/// Dimension count for homogeneous harmonics in `nv` variables.
pub fn harmonic_dimension(nv: usize, degree: u32) -> Result<usize> {
    let count_monomials = |d: u32| -> usize { monomials(nv, d).len() };
    if degree < 2 {
        return Ok(count_monomials(degree));
    }
    let full = count_monomials(degree);
    let lower = count_monomials(degree - 2);
    if lower > full {
        return Err(Error::BlockAssembly(format!(
            "monomial count inversion at degree {degree}"
        )));
    }
    Ok(full - lower)
}
