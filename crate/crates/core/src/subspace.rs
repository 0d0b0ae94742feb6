//! Subspaces of C^d stored as orthonormal bases.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, kron_all, orthonormal_columns, ComplexMatrix, C64};
use crate::tolerance::Tolerances;

/// An `r`-dimensional subspace of C^d. The zero subspace has `r = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: ComplexMatrix,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: ComplexMatrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: ComplexMatrix::identity(ambient_dim),
        }
    }

    /// Span of arbitrary vectors of length `ambient_dim`.
    pub fn span(ambient_dim: usize, vectors: &[Vec<C64>], tol_rank: f64) -> Self {
        Self {
            ambient_dim,
            basis: orthonormal_columns(ambient_dim, vectors, tol_rank),
        }
    }

    /// Span of the computational basis vectors with the given indices.
    pub fn coordinate(ambient_dim: usize, indices: &[usize]) -> Self {
        let vectors: Vec<Vec<C64>> = indices
            .iter()
            .map(|&i| {
                let mut v = vec![C64::new(0.0, 0.0); ambient_dim];
                v[i] = C64::new(1.0, 0.0);
                v
            })
            .collect();
        Self::span(ambient_dim, &vectors, 1e-9)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<C64>> {
        self.basis.columns()
    }

    /// The orthogonal projector basis * basis^dagger.
    pub fn projector(&self) -> ComplexMatrix {
        self.basis.matmul(&self.basis.adjoint())
    }

    /// Orthogonal complement in C^d.
    pub fn complement(&self, tol_rank: f64) -> Self {
        let d = self.ambient_dim;
        if self.dim() == d {
            return Self::zero(d);
        }
        // Extend the basis with the standard basis and keep the new directions.
        let mut vectors = self.basis_vectors();
        for i in 0..d {
            let mut e = vec![C64::new(0.0, 0.0); d];
            e[i] = C64::new(1.0, 0.0);
            vectors.push(e);
        }
        let extended = orthonormal_columns(d, &vectors, tol_rank);
        debug_assert_eq!(extended.cols(), d);
        let tail: Vec<Vec<C64>> = (self.dim()..extended.cols())
            .map(|c| extended.column(c))
            .collect();
        Self {
            ambient_dim: d,
            basis: ComplexMatrix::from_columns(d, &tail),
        }
    }

    /// Largest entry of (I - P_self) * basis(inner).
    pub fn containment_residual(&self, inner: &Subspace) -> Result<f64> {
        check_same_dim(self, inner)?;
        if inner.is_zero() {
            return Ok(0.0);
        }
        // (I - Q Q^dagger) B = B - Q (Q^dagger B)
        let coeffs = self.basis.adjoint().matmul(&inner.basis);
        let projected = self.basis.matmul(&coeffs);
        Ok(inner.basis.max_abs_diff(&projected))
    }

    /// True iff `inner` lies inside `self` up to `tol`.
    pub fn contains(&self, inner: &Subspace, tol: f64) -> Result<bool> {
        Ok(self.containment_residual(inner)? <= tol)
    }

    /// Mutual containment.
    pub fn same_as(&self, other: &Subspace, tol: f64) -> Result<bool> {
        Ok(self.contains(other, tol)? && other.contains(self, tol)?)
    }

    /// Tensor product of subspaces; bases are Kronecker products of the
    /// factor bases, which stay orthonormal.
    pub fn tensor(factors: &[&Subspace]) -> Self {
        assert!(!factors.is_empty(), "tensor product needs factors");
        let ambient_dim = factors.iter().map(|s| s.ambient_dim).product();
        if factors.iter().any(|s| s.is_zero()) {
            return Self::zero(ambient_dim);
        }
        Self {
            ambient_dim,
            basis: kron_all(factors.iter().map(|s| &s.basis)),
        }
    }
}

fn check_same_dim(a: &Subspace, b: &Subspace) -> Result<()> {
    if a.ambient_dim != b.ambient_dim {
        return Err(Error::DimensionMismatch {
            expected: a.ambient_dim,
            found: b.ambient_dim,
        });
    }
    Ok(())
}

/// Span of eigenvectors whose eigenvalue exceeds `tol.rank * lambda_max`
/// (or `tol.rank` itself when `lambda_max` is zero).
pub fn support_of(h: &ComplexMatrix, tol: &Tolerances) -> Result<Subspace> {
    let eig = hermitian_eigen(h, tol.sym)?;
    let lambda_min = eig.min();
    if lambda_min < -tol.neg {
        return Err(Error::NotPsd {
            min_eigenvalue: lambda_min,
            tol: tol.neg,
        });
    }
    let lambda_max = eig.max();
    let cutoff = if lambda_max > 0.0 {
        tol.rank * lambda_max
    } else {
        tol.rank
    };
    let keep: Vec<Vec<C64>> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|&(_, &l)| l > cutoff)
        .map(|(j, _)| eig.eigenvectors.column(j))
        .collect();
    Ok(Subspace {
        ambient_dim: h.rows(),
        basis: ComplexMatrix::from_columns(h.rows(), &keep),
    })
}

/// Span of all input subspaces.
pub fn sum(ambient_dim: usize, subspaces: &[&Subspace], tol_rank: f64) -> Result<Subspace> {
    let mut vectors = Vec::new();
    for s in subspaces {
        if s.ambient_dim != ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                found: s.ambient_dim,
            });
        }
        vectors.extend(s.basis_vectors());
    }
    Ok(Subspace::span(ambient_dim, &vectors, tol_rank))
}
