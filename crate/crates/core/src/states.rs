//! Density matrices and candidate sets.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{min_eigenvalue, ComplexMatrix, C64};
use crate::subspace::{support_of, Subspace};
use crate::tolerance::Tolerances;

/// A validated mixed state: Hermitian, PSD and unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Checks the density-matrix invariants, naming the first one violated.
    pub fn validate(m: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        if m.rows() == 0 {
            return Err(Error::ShapeMismatch("empty density matrix".into()));
        }
        let residual = m.hermitian_residual();
        if residual > tol.sym {
            return Err(Error::NotHermitian {
                residual,
                tol: tol.sym,
            });
        }
        let min = min_eigenvalue(&m, tol.sym)?;
        if min < -tol.neg {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
                tol: tol.neg,
            });
        }
        let trace = m.trace();
        let trace_residual = (trace - C64::new(1.0, 0.0)).norm();
        if trace_residual > tol.neg {
            return Err(Error::TraceNotOne {
                trace: trace.re,
                residual: trace_residual,
            });
        }
        Ok(Self { matrix: m })
    }

    /// sum_i w_i |psi_i><psi_i|.
    pub fn from_ensemble(weights: &[f64], vectors: &[Vec<C64>], tol: &Tolerances) -> Result<Self> {
        if weights.len() != vectors.len() || vectors.is_empty() {
            return Err(Error::ShapeMismatch(format!(
                "{} weights for {} vectors",
                weights.len(),
                vectors.len()
            )));
        }
        let sum: f64 = weights.iter().sum();
        if weights.iter().any(|&w| w < 0.0 || !w.is_finite()) || (sum - 1.0).abs() > tol.neg {
            return Err(Error::WeightSum { sum });
        }
        let d = vectors[0].len();
        let mut rho = ComplexMatrix::zeros(d, d);
        for (index, (v, &w)) in vectors.iter().zip(weights).enumerate() {
            if v.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: v.len(),
                });
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > tol.neg {
                return Err(Error::NotUnitVector { index, norm });
            }
            rho = rho.add(&ComplexMatrix::outer(v).scale(w));
        }
        Self::validate(rho, tol)
    }

    /// I / d.
    pub fn maximally_mixed(d: usize) -> Self {
        assert!(d >= 1, "dimension must be positive");
        Self {
            matrix: ComplexMatrix::identity(d).scale(1.0 / d as f64),
        }
    }

    /// G G^dagger / Tr(G G^dagger) with G a `d x rank` matrix of standard
    /// complex Gaussians drawn from ChaCha8 seeded with `seed`.
    pub fn random(d: usize, rank: usize, seed: u64) -> Result<Self> {
        if rank == 0 || rank > d {
            return Err(Error::BadRank { rank, dim: d });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scale = std::f64::consts::FRAC_1_SQRT_2;
        let entries: Vec<C64> = (0..d * rank)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                C64::new(re * scale, im * scale)
            })
            .collect();
        let g = ComplexMatrix::new(d, rank, entries)?;
        let gg = g.matmul(&g.adjoint());
        let trace = gg.trace().re;
        Ok(Self {
            matrix: gg.scale(1.0 / trace),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn support(&self, tol: &Tolerances) -> Subspace {
        support_of(&self.matrix, tol).expect("validated density matrix has a support")
    }

    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }
}

/// A labelled candidate state.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub label: String,
    pub state: DensityMatrix,
}

/// The k >= 2 distinct candidate states the unknown states are drawn from.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    dim: usize,
    candidates: Vec<Candidate>,
}

impl CandidateSet {
    pub fn new(candidates: Vec<Candidate>, tol: &Tolerances) -> Result<Self> {
        if candidates.len() < 2 {
            return Err(Error::TooFewStates(candidates.len()));
        }
        let dim = candidates[0].state.dim();
        for c in &candidates {
            if c.state.dim() != dim {
                return Err(Error::InvalidState {
                    label: c.label.clone(),
                    source: Box::new(Error::DimensionMismatch {
                        expected: dim,
                        found: c.state.dim(),
                    }),
                });
            }
        }
        for (i, a) in candidates.iter().enumerate() {
            for b in &candidates[i + 1..] {
                if a.state.matrix().max_abs_diff(b.state.matrix()) <= tol.neg {
                    return Err(Error::DuplicateState {
                        first: a.label.clone(),
                        second: b.label.clone(),
                    });
                }
            }
        }
        Ok(Self { dim, candidates })
    }

    /// Labels `sigma1..sigmak`.
    pub fn from_states(states: Vec<DensityMatrix>, tol: &Tolerances) -> Result<Self> {
        let candidates = states
            .into_iter()
            .enumerate()
            .map(|(i, state)| Candidate {
                label: format!("sigma{}", i + 1),
                state,
            })
            .collect();
        Self::new(candidates, tol)
    }

    /// k seeded random states of the given ranks. State `i` uses seed
    /// `seed * 1_000_003 + i`.
    pub fn random(d: usize, ranks: &[usize], seed: u64, tol: &Tolerances) -> Result<Self> {
        let states = ranks
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                DensityMatrix::random(d, r, seed.wrapping_mul(1_000_003).wrapping_add(i as u64))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_states(states, tol)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn k(&self) -> usize {
        self.candidates.len()
    }

    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    pub fn state(&self, i: usize) -> &DensityMatrix {
        &self.candidates[i].state
    }

    pub fn label(&self, i: usize) -> &str {
        &self.candidates[i].label
    }

    /// Supports of every candidate, in order.
    pub fn supports(&self, tol: &Tolerances) -> Vec<Subspace> {
        self.candidates
            .iter()
            .map(|c| c.state.support(tol))
            .collect()
    }

    /// The same set with one more state appended.
    pub fn with(&self, label: &str, state: DensityMatrix, tol: &Tolerances) -> Result<Self> {
        let mut candidates = self.candidates.clone();
        candidates.push(Candidate {
            label: label.to_string(),
            state,
        });
        Self::new(candidates, tol)
    }
}

pub const BUILTIN_NAMES: [&str; 3] = ["eq26", "orth2", "nested2"];

fn basis_vector(d: usize, i: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); d];
    v[i] = C64::new(1.0, 0.0);
    v
}

fn half_mixture(d: usize, a: usize, b: usize) -> DensityMatrix {
    let tol = Tolerances::default();
    DensityMatrix::from_ensemble(&[0.5, 0.5], &[basis_vector(d, a), basis_vector(d, b)], &tol)
        .expect("equal mixture of basis vectors is valid")
}

fn pure_basis(d: usize, i: usize) -> DensityMatrix {
    DensityMatrix::from_ensemble(&[1.0], &[basis_vector(d, i)], &Tolerances::default())
        .expect("basis projector is valid")
}

/// Three equal mixtures of pairs of an orthonormal basis of C^3:
/// sigma1 on {0,1}, sigma2 on {1,2}, sigma3 on {0,2}.
pub fn eq26() -> CandidateSet {
    CandidateSet::from_states(
        vec![
            half_mixture(3, 0, 1),
            half_mixture(3, 1, 2),
            half_mixture(3, 0, 2),
        ],
        &Tolerances::default(),
    )
    .expect("builtin set is valid")
}

/// |0><0| and |1><1| in C^2.
pub fn orth2() -> CandidateSet {
    CandidateSet::from_states(
        vec![pure_basis(2, 0), pure_basis(2, 1)],
        &Tolerances::default(),
    )
    .expect("builtin set is valid")
}

/// |0><0| and I/2 in C^2.
pub fn nested2() -> CandidateSet {
    CandidateSet::from_states(
        vec![pure_basis(2, 0), DensityMatrix::maximally_mixed(2)],
        &Tolerances::default(),
    )
    .expect("builtin set is valid")
}

pub fn builtin(name: &str) -> Option<CandidateSet> {
    match name {
        "eq26" => Some(eq26()),
        "orth2" => Some(orth2()),
        "nested2" => Some(nested2()),
        _ => None,
    }
}
