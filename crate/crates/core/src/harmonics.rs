//! Orthonormal bases of spherical harmonics on S^3 and the deformed
//! Laplacian restricted to each degree block.
//!
//! Degree-l harmonics diagonalize the round Laplacian with eigenvalue
//! l(l+2). The deformation only adds the squared derivative along the
//! rotation direction, which preserves each block, so the full spectrum
//! up to a cutoff reduces to one small dense matrix per degree. The
//! derivation is skew-adjoint for the round measure, so its square is
//! assembled from first derivatives only:
//!   <D^2 h_a, h_b> = -<D h_a, D h_b>,
//! with every inner product evaluated from exact monomial moments.

use nalgebra::{Cholesky, DMatrix};
use num::ToPrimitive;

use crate::config::MAX_CUTOFF;
use crate::error::{Error, Result};
use crate::poly::{
    harmonic_kernel, hopf_derivation_operator, is_exactly_harmonic, monomials,
    sphere_moment_ratio, AmbientPoly, Poly,
};

/// One degree block: an orthonormal harmonic basis and the matrix of the
/// squared rotation derivative in that basis.
pub struct HarmonicBlock {
    pub degree: u32,
    pub dim: usize,
    /// Harmonic polynomials, orthonormal for the normalized round measure.
    pub basis: Vec<AmbientPoly>,
    /// Matrix of D^2 in the orthonormal basis; symmetric, negative
    /// semidefinite, eigenvalues -w^2 for integer weights w.
    pub rotation_second_derivative: DMatrix<f64>,
}

impl HarmonicBlock {
    pub fn assemble(degree: u32) -> Result<Self> {
        let (map, int_basis) = harmonic_kernel(4, degree);
        let dim = int_basis.len();
        let expected = ((degree + 1) * (degree + 1)) as usize;
        if dim != expected {
            return Err(Error::BlockAssembly(format!(
                "degree {degree}: kernel has dimension {dim}, expected {expected}"
            )));
        }
        for v in &int_basis {
            if !is_exactly_harmonic(4, degree, v) {
                return Err(Error::BlockAssembly(format!(
                    "degree {degree}: kernel vector fails the exact harmonicity check"
                )));
            }
        }

        let (_dmap, derivation) = hopf_derivation_operator(degree);
        let d_basis: Vec<Vec<num::BigInt>> =
            int_basis.iter().map(|v| derivation.apply_big(v)).collect();
        for v in &d_basis {
            if !is_exactly_harmonic(4, degree, v) {
                return Err(Error::BlockAssembly(format!(
                    "degree {degree}: derivation left the harmonic subspace"
                )));
            }
        }

        let nmono = map.len();
        // moment table for products of two degree-l monomials
        let pair_exps = monomials(4, 2 * degree);
        let mut moment = std::collections::BTreeMap::new();
        for e in &pair_exps {
            let val = sphere_moment_ratio(e)
                .to_f64()
                .ok_or_else(|| Error::BlockAssembly("moment does not fit in f64".into()))?;
            moment.insert(e.clone(), val);
        }
        let mut t_mat = DMatrix::zeros(nmono, nmono);
        for (i, a) in map.exps.iter().enumerate() {
            for (j, b) in map.exps.iter().enumerate() {
                let sum: Vec<u8> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                t_mat[(i, j)] = moment[&sum];
            }
        }

        let to_f64_row = |v: &Vec<num::BigInt>| -> Result<Vec<f64>> {
            v.iter()
                .map(|x| {
                    x.to_f64()
                        .ok_or_else(|| Error::BlockAssembly("coefficient overflow".into()))
                })
                .collect()
        };
        let mut c = DMatrix::zeros(dim, nmono);
        let mut cd = DMatrix::zeros(dim, nmono);
        for (a, v) in int_basis.iter().enumerate() {
            for (m, x) in to_f64_row(v)?.into_iter().enumerate() {
                c[(a, m)] = x;
            }
        }
        for (a, v) in d_basis.iter().enumerate() {
            for (m, x) in to_f64_row(v)?.into_iter().enumerate() {
                cd[(a, m)] = x;
            }
        }

        let gram = &c * &t_mat * c.transpose();
        let m2 = &cd * &t_mat * cd.transpose();

        let chol = Cholesky::new(gram.clone()).ok_or_else(|| {
            Error::BlockAssembly(format!("degree {degree}: Gram matrix is not positive definite"))
        })?;
        let l_mat = chol.l();

        // op = -(L^-1 M2 L^-T), symmetrized
        let y = l_mat.clone().solve_lower_triangular(&m2).ok_or_else(|| {
            Error::BlockAssembly("triangular solve failed".into())
        })?;
        let z = l_mat
            .clone()
            .solve_lower_triangular(&y.transpose())
            .ok_or_else(|| Error::BlockAssembly("triangular solve failed".into()))?;
        let op = -(z.clone() + z.transpose()) * 0.5;

        // orthonormal basis rows: Phi = L^-1 C
        let phi = l_mat
            .solve_lower_triangular(&c)
            .ok_or_else(|| Error::BlockAssembly("triangular solve failed".into()))?;
        let basis = (0..dim)
            .map(|a| {
                let raw: Vec<(f64, Vec<u8>)> = (0..nmono)
                    .filter(|&m| phi[(a, m)] != 0.0)
                    .map(|m| (phi[(a, m)], map.exps[m].clone()))
                    .collect();
                AmbientPoly::new(Poly::from_terms(4, raw))
            })
            .collect();

        Ok(HarmonicBlock {
            degree,
            dim,
            basis,
            rotation_second_derivative: op,
        })
    }

    /// Round-sphere eigenvalue of the block: l(l+2).
    pub fn round_eigenvalue(&self) -> f64 {
        (self.degree * (self.degree + 2)) as f64
    }

    /// Matrix of the (sign-flipped) deformed Laplacian on the block:
    /// l(l+2) I + s D^2 with s = t / (1 + t).
    pub fn operator(&self, t: f64) -> Result<DMatrix<f64>> {
        if 1.0 + t <= 0.0 {
            return Err(Error::DegenerateParameter { t });
        }
        let s = t / (1.0 + t);
        Ok(DMatrix::identity(self.dim, self.dim) * self.round_eigenvalue()
            + &self.rotation_second_derivative * s)
    }

    /// Block eigenvalues at deformation t, ascending.
    pub fn eigenvalues(&self, t: f64) -> Result<Vec<f64>> {
        let op = self.operator(t)?;
        let mut vals: Vec<f64> = op.symmetric_eigen().eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(vals)
    }

    /// Squared rotation weights of the block (eigenvalues of -D^2),
    /// ascending. Near-integers by construction.
    pub fn weight_squares(&self) -> Vec<f64> {
        let mut vals: Vec<f64> = (-self.rotation_second_derivative.clone())
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        vals
    }
}

/// Assemble all blocks up to and including the cutoff degree.
pub fn assemble_blocks(cutoff: u32) -> Result<Vec<HarmonicBlock>> {
    if cutoff > MAX_CUTOFF {
        return Err(Error::InvalidConfig(format!(
            "cutoff {cutoff} exceeds the supported maximum {MAX_CUTOFF}"
        )));
    }
    (0..=cutoff).map(HarmonicBlock::assemble).collect()
}
