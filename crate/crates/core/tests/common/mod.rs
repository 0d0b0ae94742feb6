//! Seeded random candidate sets shared by the integration suites.
#![allow(dead_code)]

use mixcomp::{CandidateSet, ComplexMatrix, DensityMatrix, Tolerances, C64};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// G G^dagger states with random ranks.
    Gaussian,
    /// Random-weight mixtures over random subsets of a random orthonormal
    /// basis; supports are spans of basis subsets, so containments happen.
    BasisSubsets,
}

#[derive(Clone)]
pub struct Instance {
    pub seed: u64,
    pub family: Family,
    pub set: CandidateSet,
    pub ranks: Vec<usize>,
}

fn gaussian_vector(rng: &mut ChaCha8Rng, d: usize) -> Vec<C64> {
    (0..d)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        })
        .collect()
}

/// Classical Gram-Schmidt, written here so the corpus does not lean on the
/// library's own orthonormalization.
fn random_unitary_basis(rng: &mut ChaCha8Rng, d: usize) -> Vec<Vec<C64>> {
    let mut basis: Vec<Vec<C64>> = Vec::new();
    while basis.len() < d {
        let mut v = gaussian_vector(rng, d);
        for _ in 0..2 {
            for b in &basis {
                let dot: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= dot * bi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            basis.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    basis
}

fn subset_state(rng: &mut ChaCha8Rng, basis: &[Vec<C64>], rank: usize) -> DensityMatrix {
    let d = basis.len();
    let picks = sample(rng, d, rank).into_vec();
    let raw: Vec<f64> = (0..rank).map(|_| rng.random_range(0.2..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut m = ComplexMatrix::zeros(d, d);
    for (&i, w) in picks.iter().zip(&raw) {
        m = m.add(&ComplexMatrix::outer(&basis[i]).scale(w / total));
    }
    // Exact Hermitian part so validation sees no round-off asymmetry.
    let m = m.add(&m.adjoint()).scale(0.5);
    DensityMatrix::validate(m, &Tolerances::default()).expect("subset mixture is a state")
}

/// One seeded candidate set with d in {2,3,4} and k in {2,3}.
pub fn instance(seed: u64) -> Instance {
    let tol = Tolerances::default();
    let mut attempt = 0u64;
    loop {
        let mut rng = ChaCha8Rng::seed_from_u64(seed * 7919 + attempt);
        let d = rng.random_range(2..=4usize);
        let k = rng.random_range(2..=3usize);
        let ranks: Vec<usize> = (0..k).map(|_| rng.random_range(1..=d)).collect();
        let family = if seed.is_multiple_of(2) {
            Family::Gaussian
        } else {
            Family::BasisSubsets
        };
        let states: Vec<DensityMatrix> = match family {
            Family::Gaussian => ranks
                .iter()
                .map(|&r| DensityMatrix::random(d, r, rng.random()).unwrap())
                .collect(),
            Family::BasisSubsets => {
                let basis = random_unitary_basis(&mut rng, d);
                ranks
                    .iter()
                    .map(|&r| subset_state(&mut rng, &basis, r))
                    .collect()
            }
        };
        match CandidateSet::from_states(states, &tol) {
            Ok(set) => {
                return Instance {
                    seed,
                    family,
                    set,
                    ranks,
                }
            }
            Err(_) => attempt += 1,
        }
    }
}

pub fn corpus(count: u64) -> Vec<Instance> {
    (0..count).map(instance).collect()
}
