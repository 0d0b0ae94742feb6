//! Brute-force verification over every tuple of candidates.
//!
//! For a candidate set of size k and tuple size n the oracle enumerates all
//! k^n index tuples in lexicographic order, forms the product state
//! rho_{t1} (x) ... (x) rho_{tn} and evaluates Tr(M rho). Nothing is
//! sampled; the verdicts are exact up to the probability tolerance.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::comparison::{build_maximal, MeasurementOperator, OperatorKind};
use crate::error::{Error, Result};
use crate::linalg::{kron_all, ComplexMatrix};
use crate::states::CandidateSet;
use crate::tolerance::Config;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TupleKind {
    /// All indices equal.
    Identical,
    /// Not all indices equal (repeats allowed).
    Different,
}

/// An n-tuple of candidate indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TupleClass {
    indices: Vec<usize>,
    kind: TupleKind,
    pairwise_distinct: bool,
}

impl TupleClass {
    pub fn new(indices: Vec<usize>) -> Self {
        assert!(!indices.is_empty());
        let kind = if indices.iter().all(|&i| i == indices[0]) {
            TupleKind::Identical
        } else {
            TupleKind::Different
        };
        let pairwise_distinct = indices
            .iter()
            .enumerate()
            .all(|(a, x)| indices[a + 1..].iter().all(|y| x != y));
        Self {
            indices,
            kind,
            pairwise_distinct,
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn kind(&self) -> TupleKind {
        self.kind
    }

    pub fn pairwise_distinct(&self) -> bool {
        self.pairwise_distinct
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// All k^n tuples, first position most significant.
pub fn tuples(k: usize, n: usize) -> impl Iterator<Item = TupleClass> {
    let total = k.pow(n as u32);
    (0..total).map(move |mut code| {
        let mut indices = vec![0; n];
        for slot in indices.iter_mut().rev() {
            *slot = code % k;
            code /= k;
        }
        TupleClass::new(indices)
    })
}

/// rho_{t1} (x) ... (x) rho_{tn}.
pub fn product_state(set: &CandidateSet, indices: &[usize]) -> ComplexMatrix {
    kron_all(indices.iter().map(|&i| set.state(i).matrix()))
}

/// Tr(M rho_t) for an arbitrary operator on the composite space.
pub fn probability_of(
    matrix: &ComplexMatrix,
    t: &TupleClass,
    set: &CandidateSet,
    cfg: &Config,
) -> Result<f64> {
    let size = cfg.check_cap(set.dim(), t.len())?;
    if matrix.rows() != size || matrix.cols() != size {
        return Err(Error::ShapeMismatch(format!(
            "operator is {}x{}, tuple space has dimension {size}",
            matrix.rows(),
            matrix.cols()
        )));
    }
    if let Some(&bad) = t.indices().iter().find(|&&i| i >= set.k()) {
        return Err(Error::BadIndex {
            index: bad,
            k: set.k(),
        });
    }
    Ok(matrix.trace_product(&product_state(set, t.indices())).re)
}

/// Probability that `m` fires on tuple `t`. Not clamped.
pub fn outcome_probability(
    m: &MeasurementOperator,
    t: &TupleClass,
    set: &CandidateSet,
    cfg: &Config,
) -> Result<f64> {
    if m.dim() != set.dim() || m.n() != t.len() {
        return Err(Error::ShapeMismatch(format!(
            "operator is for (d={}, n={}), tuple is (d={}, n={})",
            m.dim(),
            m.n(),
            set.dim(),
            t.len()
        )));
    }
    probability_of(m.matrix(), t, set, cfg)
}

/// Every tuple with its probability, in enumeration order.
pub fn probability_table(
    matrix: &ComplexMatrix,
    set: &CandidateSet,
    n: usize,
    cfg: &Config,
) -> Result<Vec<(TupleClass, f64)>> {
    cfg.check_cap(set.dim(), n)?;
    let all: Vec<TupleClass> = tuples(set.k(), n).collect();
    all.into_par_iter()
        .map(|t| {
            let p = probability_of(matrix, &t, set, cfg)?;
            Ok((t, p))
        })
        .collect()
}

fn table_for(
    m: &MeasurementOperator,
    set: &CandidateSet,
    cfg: &Config,
) -> Result<Vec<(TupleClass, f64)>> {
    if m.dim() != set.dim() {
        return Err(Error::DimensionMismatch {
            expected: set.dim(),
            found: m.dim(),
        });
    }
    probability_table(m.matrix(), set, m.n(), cfg)
}

/// Largest probability within a class; ties go to the earliest tuple.
fn best_of<'a>(rows: impl Iterator<Item = &'a (TupleClass, f64)>) -> Option<&'a (TupleClass, f64)> {
    rows.fold(None, |best: Option<&(TupleClass, f64)>, row| match best {
        Some(b) if b.1 >= row.1 => Some(b),
        _ => Some(row),
    })
}

pub fn clamp_probability(p: f64) -> f64 {
    p.clamp(0.0, 1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnambiguityCheck {
    pub unambiguous: bool,
    /// Largest probability on a forbidden tuple.
    pub worst_residual: f64,
    pub worst_tuple: Option<TupleClass>,
}

/// True iff `m` fires with probability at most `tol.prob` on every tuple
/// of the forbidden class.
pub fn verify_unambiguous(
    m: &MeasurementOperator,
    forbidden: TupleKind,
    set: &CandidateSet,
    cfg: &Config,
) -> Result<UnambiguityCheck> {
    let table = table_for(m, set, cfg)?;
    let worst = best_of(table.iter().filter(|(t, _)| t.kind() == forbidden));
    let (worst_tuple, worst_residual) = match worst {
        Some((t, p)) => (Some(t.clone()), *p),
        None => (None, 0.0),
    };
    Ok(UnambiguityCheck {
        unambiguous: worst_residual <= cfg.tol.prob,
        worst_residual,
        worst_tuple,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NontrivialityCheck {
    pub nontrivial: bool,
    pub best_probability: f64,
    pub best_tuple: Option<TupleClass>,
    /// Best among pairwise-distinct tuples of the allowed class; `None`
    /// when n > k leaves no such tuple.
    pub best_distinct_probability: Option<f64>,
    pub best_distinct_tuple: Option<TupleClass>,
}

/// True iff `m` fires with probability above `tol.prob` on at least one
/// tuple of the allowed class.
pub fn verify_nontrivial(
    m: &MeasurementOperator,
    allowed: TupleKind,
    set: &CandidateSet,
    cfg: &Config,
) -> Result<NontrivialityCheck> {
    let table = table_for(m, set, cfg)?;
    let best = best_of(table.iter().filter(|(t, _)| t.kind() == allowed));
    let distinct = best_of(
        table
            .iter()
            .filter(|(t, _)| t.kind() == allowed && t.pairwise_distinct()),
    );
    let best_probability = best.map_or(0.0, |r| r.1);
    Ok(NontrivialityCheck {
        nontrivial: best_probability > cfg.tol.prob,
        best_probability,
        best_tuple: best.map(|r| r.0.clone()),
        best_distinct_probability: distinct.map(|r| r.1),
        best_distinct_tuple: distinct.map(|r| r.0.clone()),
    })
}

/// The maximal operator together with its oracle verdict.
#[derive(Debug, Clone)]
pub struct Decision {
    pub which: OperatorKind,
    pub exists: bool,
    pub operator: MeasurementOperator,
    pub check: NontrivialityCheck,
}

pub fn decide(set: &CandidateSet, n: usize, which: OperatorKind, cfg: &Config) -> Result<Decision> {
    let operator = build_maximal(set, n, which, cfg)?;
    let check = verify_nontrivial(&operator, which.allowed(), set, cfg)?;
    Ok(Decision {
        which,
        exists: check.nontrivial,
        operator,
        check,
    })
}

/// Whether any unambiguous, non-trivial operator of the given kind exists.
pub fn decide_exists(
    set: &CandidateSet,
    n: usize,
    which: OperatorKind,
    cfg: &Config,
) -> Result<bool> {
    Ok(decide(set, n, which, cfg)?.exists)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comparison::{build_m1, build_m2_product, Provenance};
    use crate::states::{eq26, nested2, orth2};
    use crate::subspace::Subspace;
    use crate::tolerance::Tolerances;

    fn cfg() -> Config {
        Config::default()
    }

    fn op(n: usize, d: usize, m: ComplexMatrix) -> MeasurementOperator {
        MeasurementOperator::new(n, d, m, Provenance::External, &Tolerances::default()).unwrap()
    }

    #[test]
    fn tuple_enumeration_order() {
        let ts: Vec<Vec<usize>> = tuples(2, 2).map(|t| t.indices().to_vec()).collect();
        assert_eq!(ts, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(tuples(3, 3).count(), 27);
        let t = TupleClass::new(vec![1, 1, 0]);
        assert_eq!(t.kind(), TupleKind::Different);
        assert!(!t.pairwise_distinct());
        let t = TupleClass::new(vec![2, 2]);
        assert_eq!(t.kind(), TupleKind::Identical);
    }

    #[test]
    fn identity_fires_with_certainty() {
        let m = op(2, 2, ComplexMatrix::identity(4));
        for t in tuples(2, 2) {
            let p = outcome_probability(&m, &t, &nested2(), &cfg()).unwrap();
            assert!((p - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn basis_projector_on_mixed_pair() {
        let m = op(2, 2, Subspace::coordinate(4, &[0]).projector());
        let p = outcome_probability(&m, &TupleClass::new(vec![1, 1]), &nested2(), &cfg()).unwrap();
        assert!((p - 0.25).abs() < 1e-12);
    }

    #[test]
    fn shape_errors() {
        let m = op(2, 2, ComplexMatrix::identity(4));
        let r = outcome_probability(&m, &TupleClass::new(vec![0, 0, 0]), &orth2(), &cfg());
        assert!(matches!(r, Err(Error::ShapeMismatch(_))));
        let r = outcome_probability(&m, &TupleClass::new(vec![0, 0]), &eq26(), &cfg());
        assert!(matches!(r, Err(Error::ShapeMismatch(_))));
        let tiny = Config { cap: 2, ..cfg() };
        let r = outcome_probability(&m, &TupleClass::new(vec![0, 0]), &orth2(), &tiny);
        assert!(matches!(r, Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn identity_is_ambiguous_for_m2() {
        let m = op(2, 2, ComplexMatrix::identity(4));
        let c = verify_unambiguous(&m, TupleKind::Identical, &orth2(), &cfg()).unwrap();
        assert!(!c.unambiguous);
        assert_eq!(c.worst_tuple.unwrap().indices(), &[0, 0]);
    }

    #[test]
    fn constructed_operators_pass() {
        let m1 = build_m1(&orth2(), 2, Some(0), &cfg()).unwrap();
        assert!(
            verify_unambiguous(&m1, TupleKind::Different, &orth2(), &cfg())
                .unwrap()
                .unambiguous
        );
        let m2 = build_m2_product(&eq26(), 3, &cfg()).unwrap();
        assert!(
            verify_unambiguous(&m2, TupleKind::Identical, &eq26(), &cfg())
                .unwrap()
                .unambiguous
        );
        let n = verify_nontrivial(&m2, TupleKind::Different, &eq26(), &cfg()).unwrap();
        assert!(n.nontrivial);
        assert!((n.best_probability - 0.125).abs() < 1e-12);
    }

    #[test]
    fn zero_operator_is_trivial() {
        let m = op(2, 2, ComplexMatrix::zeros(4, 4));
        let c = verify_nontrivial(&m, TupleKind::Different, &orth2(), &cfg()).unwrap();
        assert!(!c.nontrivial);
        assert_eq!(c.best_probability, 0.0);
        // ties resolve to the lexicographically smallest tuple
        assert_eq!(c.best_tuple.unwrap().indices(), &[0, 1]);
    }

    #[test]
    fn distinct_tuples_absent_when_n_exceeds_k() {
        let m = op(3, 2, ComplexMatrix::identity(8));
        let c = verify_nontrivial(&m, TupleKind::Different, &orth2(), &cfg()).unwrap();
        assert!(c.best_distinct_probability.is_none());
    }

    #[test]
    fn decisions_on_builtins() {
        assert!(!decide_exists(&eq26(), 2, OperatorKind::M2, &cfg()).unwrap());
        assert!(decide_exists(&eq26(), 3, OperatorKind::M2, &cfg()).unwrap());
        assert!(!decide_exists(&eq26(), 2, OperatorKind::M1, &cfg()).unwrap());
        assert!(decide_exists(&orth2(), 2, OperatorKind::M1, &cfg()).unwrap());
        assert!(!decide_exists(&nested2(), 3, OperatorKind::M2, &cfg()).unwrap());
    }
}
