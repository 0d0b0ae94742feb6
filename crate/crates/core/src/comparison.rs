//! Existence conditions and explicit constructions for unambiguous
//! comparison measurements.
//!
//! `M1` fires only when all `n` unknown states are the same candidate,
//! `M2` only when they are not all the same. Candidate indices are 0-based
//! throughout the library.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, kron_all, ComplexMatrix};
use crate::oracle::{tuples, TupleKind};
use crate::states::CandidateSet;
use crate::subspace::{sum, Subspace};
use crate::tolerance::{Config, Tolerances};

/// Which conclusive outcome an operator stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    /// "all identical"
    M1,
    /// "not all identical"
    M2,
}

impl OperatorKind {
    /// Tuples on which the outcome must never fire.
    pub fn forbidden(self) -> TupleKind {
        match self {
            OperatorKind::M1 => TupleKind::Different,
            OperatorKind::M2 => TupleKind::Identical,
        }
    }

    /// Tuples on which the outcome is meant to fire.
    pub fn allowed(self) -> TupleKind {
        match self {
            OperatorKind::M1 => TupleKind::Identical,
            OperatorKind::M2 => TupleKind::Different,
        }
    }
}

/// The construction an operator came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Provenance {
    #[serde(rename = "M1_eq13")]
    M1Eq13,
    #[serde(rename = "M2_product_eq27")]
    M2ProductEq27,
    #[serde(rename = "M2_pair_eq24")]
    M2PairEq24,
    #[serde(rename = "M1_maximal")]
    M1Maximal,
    #[serde(rename = "M2_maximal")]
    M2Maximal,
    /// Loaded from a file rather than constructed here.
    #[serde(rename = "external")]
    External,
}

impl Provenance {
    pub fn kind(self) -> Option<OperatorKind> {
        match self {
            Provenance::M1Eq13 | Provenance::M1Maximal => Some(OperatorKind::M1),
            Provenance::M2ProductEq27 | Provenance::M2PairEq24 | Provenance::M2Maximal => {
                Some(OperatorKind::M2)
            }
            Provenance::External => None,
        }
    }
}

/// A Hermitian operator on the n-fold tensor space with 0 <= M <= I.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOperator {
    n: usize,
    dim: usize,
    matrix: ComplexMatrix,
    provenance: Provenance,
}

impl MeasurementOperator {
    /// Validates shape, Hermiticity and 0 <= M <= I.
    pub fn new(
        n: usize,
        dim: usize,
        matrix: ComplexMatrix,
        provenance: Provenance,
        tol: &Tolerances,
    ) -> Result<Self> {
        let size = composite_dim(dim, n);
        if matrix.rows() != size || matrix.cols() != size {
            return Err(Error::ShapeMismatch(format!(
                "operator is {}x{}, expected {size}x{size} for d={dim}, n={n}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let eig = hermitian_eigen(&matrix, tol.sym)?;
        if eig.min() < -tol.neg {
            return Err(Error::NotPsd {
                min_eigenvalue: eig.min(),
                tol: tol.neg,
            });
        }
        if eig.max() > 1.0 + tol.neg {
            return Err(Error::NotPsd {
                min_eigenvalue: 1.0 - eig.max(),
                tol: tol.neg,
            });
        }
        Ok(Self {
            n,
            dim,
            matrix,
            provenance,
        })
    }

    /// Wraps a matrix known to be an orthogonal projector.
    fn projector(n: usize, dim: usize, matrix: ComplexMatrix, provenance: Provenance) -> Self {
        debug_assert_eq!(matrix.rows(), composite_dim(dim, n));
        Self {
            n,
            dim,
            matrix,
            provenance,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: &Tolerances) -> usize {
        hermitian_eigen(&self.matrix, tol.sym)
            .map(|e| e.eigenvalues.iter().filter(|&&l| l > tol.rank).count())
            .unwrap_or(0)
    }

    /// max |M^2 - M|.
    pub fn idempotence_residual(&self) -> f64 {
        self.matrix.matmul(&self.matrix).max_abs_diff(&self.matrix)
    }

    /// `s * M` for `0 <= s <= 1`; keeps 0 <= sM <= I.
    pub fn scaled(&self, s: f64) -> Self {
        assert!((0.0..=1.0).contains(&s));
        Self {
            matrix: self.matrix.scale(s),
            ..self.clone()
        }
    }
}

pub(crate) fn composite_dim(dim: usize, n: usize) -> usize {
    dim.pow(n as u32)
}

/// Per-candidate containment facts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateConditions {
    pub index: usize,
    pub label: String,
    pub support_dim: usize,
    /// dim of the span of all other supports
    pub others_dim: usize,
    /// Supp(sigma_i) not inside the span of the other supports.
    pub not_covered_by_others: bool,
    /// Span of the other supports not inside Supp(sigma_i).
    pub others_not_inside: bool,
    pub covered_residual: f64,
    pub inside_residual: f64,
}

/// Existence condition for a non-trivial M1: some support sticks out of
/// the span of the others.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct M1Condition {
    pub holds: bool,
    /// Every index whose support is not covered by the others.
    pub witnesses: Vec<usize>,
}

/// Necessary condition for a non-trivial M2: no support contains all the
/// others.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct M2Necessary {
    pub holds: bool,
    /// Indices whose support contains the span of all others.
    pub violations: Vec<usize>,
}

/// Sufficient condition for a non-trivial M2 at every n >= 2.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct M2Structural {
    pub holds: bool,
    /// Smallest index usable for the pair construction.
    pub witness: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub per_candidate: Vec<CandidateConditions>,
    pub m1_condition: M1Condition,
    pub m2_necessary: M2Necessary,
    pub m2_structural: M2Structural,
    /// m1 condition and m2 necessary condition together.
    pub corollary1: bool,
}

/// Supports of every candidate plus the span of the others for each one.
struct SupportTable {
    supports: Vec<Subspace>,
    others: Vec<Subspace>,
}

impl SupportTable {
    fn new(set: &CandidateSet, tol: &Tolerances) -> Self {
        let supports = set.supports(tol);
        let others = (0..supports.len())
            .map(|i| {
                let rest: Vec<&Subspace> = supports
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, s)| s)
                    .collect();
                sum(set.dim(), &rest, tol.rank).expect("candidate supports share a dimension")
            })
            .collect();
        Self { supports, others }
    }

    fn covered_residual(&self, i: usize) -> f64 {
        self.others[i]
            .containment_residual(&self.supports[i])
            .unwrap()
    }

    fn inside_residual(&self, i: usize) -> f64 {
        self.supports[i]
            .containment_residual(&self.others[i])
            .unwrap()
    }
}

fn per_candidate(
    set: &CandidateSet,
    table: &SupportTable,
    tol: &Tolerances,
) -> Vec<CandidateConditions> {
    (0..set.k())
        .map(|i| {
            let covered_residual = table.covered_residual(i);
            let inside_residual = table.inside_residual(i);
            CandidateConditions {
                index: i,
                label: set.label(i).to_string(),
                support_dim: table.supports[i].dim(),
                others_dim: table.others[i].dim(),
                not_covered_by_others: covered_residual > tol.contain,
                others_not_inside: inside_residual > tol.contain,
                covered_residual,
                inside_residual,
            }
        })
        .collect()
}

fn m1_from(rows: &[CandidateConditions]) -> M1Condition {
    let witnesses: Vec<usize> = rows
        .iter()
        .filter(|r| r.not_covered_by_others)
        .map(|r| r.index)
        .collect();
    M1Condition {
        holds: !witnesses.is_empty(),
        witnesses,
    }
}

fn m2_necessary_from(rows: &[CandidateConditions]) -> M2Necessary {
    let violations: Vec<usize> = rows
        .iter()
        .filter(|r| !r.others_not_inside)
        .map(|r| r.index)
        .collect();
    M2Necessary {
        holds: violations.is_empty(),
        violations,
    }
}

fn m2_structural_from(rows: &[CandidateConditions]) -> M2Structural {
    let necessary = m2_necessary_from(rows).holds;
    let witness = m1_from(rows).witnesses.first().copied();
    let holds = necessary && witness.is_some();
    M2Structural {
        holds,
        witness: if holds { witness } else { None },
    }
}

/// Every condition at once.
pub fn check_conditions(set: &CandidateSet, tol: &Tolerances) -> ConditionReport {
    let table = SupportTable::new(set, tol);
    let rows = per_candidate(set, &table, tol);
    let m1_condition = m1_from(&rows);
    let m2_necessary = m2_necessary_from(&rows);
    let m2_structural = m2_structural_from(&rows);
    let corollary1 = m1_condition.holds && m2_necessary.holds;
    ConditionReport {
        per_candidate: rows,
        m1_condition,
        m2_necessary,
        m2_structural,
        corollary1,
    }
}

/// Exists i with Supp(sigma_i) not inside the span of the other supports.
pub fn check_m1_condition(set: &CandidateSet, tol: &Tolerances) -> M1Condition {
    check_conditions(set, tol).m1_condition
}

/// For all i, the span of the other supports is not inside Supp(sigma_i).
pub fn check_m2_necessary(set: &CandidateSet, tol: &Tolerances) -> M2Necessary {
    check_conditions(set, tol).m2_necessary
}

/// The necessary condition plus an M1 witness.
pub fn check_m2_structural(set: &CandidateSet, tol: &Tolerances) -> M2Structural {
    check_conditions(set, tol).m2_structural
}

/// Drops every candidate whose support is covered by another one's.
///
/// Among candidates with equal supports only the lowest index survives.
/// Survivors are returned in increasing index order.
pub fn reduce_candidates(set: &CandidateSet, tol: &Tolerances) -> Vec<usize> {
    let supports = set.supports(tol);
    let k = supports.len();
    let inside = |a: usize, b: usize| supports[b].contains(&supports[a], tol.contain).unwrap();
    (0..k)
        .filter(|&i| !(0..k).any(|j| j != i && inside(i, j) && (!inside(j, i) || j < i)))
        .collect()
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::TupleSize(n));
    }
    Ok(())
}

fn identity_factors(d: usize, count: usize) -> Vec<ComplexMatrix> {
    vec![ComplexMatrix::identity(d); count]
}

/// P^{tensor n}, P the projector onto the complement of the span of all
/// supports except the witness's. Uses the smallest witness when `witness`
/// is `None`.
pub fn build_m1(
    set: &CandidateSet,
    n: usize,
    witness: Option<usize>,
    cfg: &Config,
) -> Result<MeasurementOperator> {
    check_n(n)?;
    cfg.check_cap(set.dim(), n)?;
    let tol = &cfg.tol;
    let table = SupportTable::new(set, tol);
    let rows = per_candidate(set, &table, tol);
    let i0 = match witness {
        Some(i) if i >= set.k() => {
            return Err(Error::BadIndex {
                index: i,
                k: set.k(),
            })
        }
        Some(i) => i,
        None => m1_from(&rows).witnesses.first().copied().ok_or_else(|| {
            Error::ConditionNotMet("no support escapes the span of the others".into())
        })?,
    };
    if !rows[i0].not_covered_by_others {
        return Err(Error::ConditionNotMet(format!(
            "support of '{}' lies in the span of the other supports",
            set.label(i0)
        )));
    }
    let p = table.others[i0].complement(tol.rank).projector();
    let factors = vec![p; n];
    Ok(MeasurementOperator::projector(
        n,
        set.dim(),
        kron_all(&factors),
        Provenance::M1Eq13,
    ))
}

/// Product of the support-complement projectors of the reduced candidates,
/// padded with identities.
pub fn build_m2_product(set: &CandidateSet, n: usize, cfg: &Config) -> Result<MeasurementOperator> {
    check_n(n)?;
    let tol = &cfg.tol;
    let necessary = check_m2_necessary(set, tol);
    if !necessary.holds {
        return Err(Error::ConditionNotMet(format!(
            "support of '{}' contains every other support",
            set.label(necessary.violations[0])
        )));
    }
    let survivors = reduce_candidates(set, tol);
    if n < survivors.len() {
        return Err(Error::TupleTooShort {
            n,
            reduced: survivors.len(),
        });
    }
    cfg.check_cap(set.dim(), n)?;
    let mut factors: Vec<ComplexMatrix> = survivors
        .iter()
        .map(|&i| set.state(i).support(tol).complement(tol.rank).projector())
        .collect();
    factors.extend(identity_factors(set.dim(), n - survivors.len()));
    Ok(MeasurementOperator::projector(
        n,
        set.dim(),
        kron_all(&factors),
        Provenance::M2ProductEq27,
    ))
}

/// Proj(Supp^perp(sigma_i0)) (x) Proj((span of others)^perp) (x) I...
pub fn build_m2_pair(set: &CandidateSet, n: usize, cfg: &Config) -> Result<MeasurementOperator> {
    check_n(n)?;
    let tol = &cfg.tol;
    let table = SupportTable::new(set, tol);
    let rows = per_candidate(set, &table, tol);
    let structural = m2_structural_from(&rows);
    let i0 = structural.witness.ok_or_else(|| {
        Error::ConditionNotMet(
            "pair construction needs the necessary condition and an M1 witness".into(),
        )
    })?;
    cfg.check_cap(set.dim(), n)?;
    let mut factors = vec![
        table.supports[i0].complement(tol.rank).projector(),
        table.others[i0].complement(tol.rank).projector(),
    ];
    factors.extend(identity_factors(set.dim(), n - 2));
    Ok(MeasurementOperator::projector(
        n,
        set.dim(),
        kron_all(&factors),
        Provenance::M2PairEq24,
    ))
}

/// The subspace every unambiguous operator of the given kind must avoid:
/// the span of the supports of all forbidden product states.
pub fn forbidden_subspace(
    set: &CandidateSet,
    n: usize,
    which: OperatorKind,
    cfg: &Config,
) -> Result<Subspace> {
    check_n(n)?;
    let size = cfg.check_cap(set.dim(), n)?;
    let tol = &cfg.tol;
    let supports = set.supports(tol);
    let forbidden = which.forbidden();
    let mut vectors = Vec::new();
    for t in tuples(set.k(), n).filter(|t| t.kind() == forbidden) {
        let factors: Vec<&Subspace> = t.indices().iter().map(|&i| &supports[i]).collect();
        vectors.extend(Subspace::tensor(&factors).basis_vectors());
    }
    Ok(Subspace::span(size, &vectors, tol.rank))
}

/// Projector onto the largest subspace compatible with unambiguity.
///
/// Any unambiguous operator of this kind has its support inside the range
/// of the result, so the result is non-trivial exactly when some valid
/// non-trivial operator exists.
pub fn build_maximal(
    set: &CandidateSet,
    n: usize,
    which: OperatorKind,
    cfg: &Config,
) -> Result<MeasurementOperator> {
    let allowed_space = forbidden_subspace(set, n, which, cfg)?.complement(cfg.tol.rank);
    let provenance = match which {
        OperatorKind::M1 => Provenance::M1Maximal,
        OperatorKind::M2 => Provenance::M2Maximal,
    };
    Ok(MeasurementOperator::projector(
        n,
        set.dim(),
        allowed_space.projector(),
        provenance,
    ))
}

/// A three-outcome POVM (M1', M2', M?) with M1' = alpha M1, M2' = beta M2.
#[derive(Debug, Clone)]
pub struct Povm {
    pub alpha: f64,
    pub beta: f64,
    pub m1: MeasurementOperator,
    pub m2: MeasurementOperator,
    pub inconclusive: ComplexMatrix,
    pub inconclusive_min_eigenvalue: f64,
}

/// Completes M1 and M2 with an inconclusive element, halving both when
/// I - M1 - M2 is not PSD.
pub fn assemble_povm(
    m1: &MeasurementOperator,
    m2: &MeasurementOperator,
    tol: &Tolerances,
) -> Result<Povm> {
    if m1.n != m2.n || m1.dim != m2.dim {
        return Err(Error::ShapeMismatch(format!(
            "M1 acts on (d={}, n={}), M2 on (d={}, n={})",
            m1.dim, m1.n, m2.dim, m2.n
        )));
    }
    let id = ComplexMatrix::identity(m1.matrix.rows());
    let rest = id.sub(&m1.matrix).sub(&m2.matrix);
    let min = hermitian_eigen(&rest, tol.sym)?.min();
    if min >= -tol.neg {
        return Ok(Povm {
            alpha: 1.0,
            beta: 1.0,
            m1: m1.clone(),
            m2: m2.clone(),
            inconclusive: rest,
            inconclusive_min_eigenvalue: min,
        });
    }
    let (m1h, m2h) = (m1.scaled(0.5), m2.scaled(0.5));
    let rest = id.sub(&m1h.matrix).sub(&m2h.matrix);
    let min = hermitian_eigen(&rest, tol.sym)?.min();
    Ok(Povm {
        alpha: 0.5,
        beta: 0.5,
        m1: m1h,
        m2: m2h,
        inconclusive: rest,
        inconclusive_min_eigenvalue: min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::kron;
    use crate::states::{eq26, nested2, orth2, DensityMatrix};

    fn cfg() -> Config {
        Config::default()
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn proj(d: usize, idx: &[usize]) -> ComplexMatrix {
        Subspace::coordinate(d, idx).projector()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce_candidates(&nested2(), &tol()), vec![1]);
        assert_eq!(reduce_candidates(&eq26(), &tol()), vec![0, 1, 2]);
        assert_eq!(reduce_candidates(&orth2(), &tol()), vec![0, 1]);
    }

    #[test]
    fn reduce_keeps_lowest_of_equal_supports() {
        let t = tol();
        let a = DensityMatrix::validate(ComplexMatrix::from_diag(&[0.5, 0.5, 0.0]), &t).unwrap();
        let b = DensityMatrix::validate(ComplexMatrix::from_diag(&[0.25, 0.75, 0.0]), &t).unwrap();
        let c = DensityMatrix::validate(ComplexMatrix::from_diag(&[0.0, 0.0, 1.0]), &t).unwrap();
        let set = CandidateSet::from_states(vec![a, b, c], &t).unwrap();
        assert_eq!(reduce_candidates(&set, &t), vec![0, 2]);
    }

    #[test]
    fn m1_condition_examples() {
        let c = check_m1_condition(&orth2(), &tol());
        assert!(c.holds);
        assert_eq!(c.witnesses, vec![0, 1]);
        assert!(!check_m1_condition(&eq26(), &tol()).holds);
        let c = check_m1_condition(&nested2(), &tol());
        assert!(c.holds);
        assert_eq!(c.witnesses, vec![1]);
    }

    #[test]
    fn m2_necessary_examples() {
        assert!(check_m2_necessary(&eq26(), &tol()).holds);
        let c = check_m2_necessary(&nested2(), &tol());
        assert!(!c.holds);
        assert_eq!(c.violations, vec![1]);
        let t = tol();
        let with_mixed = eq26()
            .with("mixed", DensityMatrix::maximally_mixed(3), &t)
            .unwrap();
        assert!(!check_m2_necessary(&with_mixed, &t).holds);
    }

    #[test]
    fn m2_structural_examples() {
        let s = check_m2_structural(&orth2(), &tol());
        assert!(s.holds);
        assert_eq!(s.witness, Some(0));
        assert!(!check_m2_structural(&eq26(), &tol()).holds);
        assert!(!check_m2_structural(&nested2(), &tol()).holds);
    }

    #[test]
    fn combined_is_conjunction() {
        for set in [eq26(), orth2(), nested2()] {
            let r = check_conditions(&set, &tol());
            assert_eq!(r.corollary1, r.m1_condition.holds && r.m2_necessary.holds);
        }
    }

    #[test]
    fn build_m1_examples() {
        let m = build_m1(&orth2(), 2, Some(0), &cfg()).unwrap();
        assert!(m.matrix().max_abs_diff(&proj(4, &[0])) < 1e-12);
        let m = build_m1(&nested2(), 2, Some(1), &cfg()).unwrap();
        assert!(m.matrix().max_abs_diff(&proj(4, &[3])) < 1e-12);
        assert!(matches!(
            build_m1(&eq26(), 2, None, &cfg()),
            Err(Error::ConditionNotMet(_))
        ));
        assert!(matches!(
            build_m1(&nested2(), 2, Some(0), &cfg()),
            Err(Error::ConditionNotMet(_))
        ));
        assert!(matches!(
            build_m1(&orth2(), 2, Some(5), &cfg()),
            Err(Error::BadIndex { .. })
        ));
        assert!(matches!(
            build_m1(&orth2(), 1, None, &cfg()),
            Err(Error::TupleSize(1))
        ));
    }

    #[test]
    fn build_m2_product_examples() {
        let m = build_m2_product(&orth2(), 2, &cfg()).unwrap();
        let expect = kron(&proj(2, &[1]), &proj(2, &[0]));
        assert!(m.matrix().max_abs_diff(&expect) < 1e-12);

        let m = build_m2_product(&eq26(), 3, &cfg()).unwrap();
        let expect = kron_all(&[proj(3, &[2]), proj(3, &[0]), proj(3, &[1])]);
        assert!(m.matrix().max_abs_diff(&expect) < 1e-12);

        assert_eq!(
            build_m2_product(&eq26(), 2, &cfg()),
            Err(Error::TupleTooShort { n: 2, reduced: 3 })
        );
        assert!(matches!(
            build_m2_product(&nested2(), 3, &cfg()),
            Err(Error::ConditionNotMet(_))
        ));
    }

    #[test]
    fn build_m2_pair_examples() {
        let m = build_m2_pair(&orth2(), 2, &cfg()).unwrap();
        assert!(
            m.matrix()
                .max_abs_diff(&kron(&proj(2, &[1]), &proj(2, &[0])))
                < 1e-12
        );
        let m = build_m2_pair(&orth2(), 3, &cfg()).unwrap();
        let expect = kron_all(&[proj(2, &[1]), proj(2, &[0]), ComplexMatrix::identity(2)]);
        assert!(m.matrix().max_abs_diff(&expect) < 1e-12);
        assert!(matches!(
            build_m2_pair(&eq26(), 2, &cfg()),
            Err(Error::ConditionNotMet(_))
        ));
    }

    #[test]
    fn maximal_m2_orth2_is_off_diagonal_block() {
        let m = build_maximal(&orth2(), 2, OperatorKind::M2, &cfg()).unwrap();
        assert!(m.matrix().max_abs_diff(&proj(4, &[1, 2])) < 1e-12);
    }

    #[test]
    fn maximal_m2_eq26() {
        let m = build_maximal(&eq26(), 2, OperatorKind::M2, &cfg()).unwrap();
        assert!(m.matrix().max_abs() < 1e-12);
        let m = build_maximal(&eq26(), 3, OperatorKind::M2, &cfg()).unwrap();
        assert!(m.matrix().max_abs() > 0.5);
        assert!(m.idempotence_residual() < 1e-9);
    }

    #[test]
    fn maximal_respects_cap() {
        let small = Config { cap: 8, ..cfg() };
        assert!(matches!(
            build_maximal(&eq26(), 2, OperatorKind::M1, &small),
            Err(Error::CapExceeded { size: 9, cap: 8 })
        ));
    }

    #[test]
    fn povm_without_overlap() {
        let m1 = build_m1(&orth2(), 2, Some(0), &cfg()).unwrap();
        let m2 = build_m2_product(&orth2(), 2, &cfg()).unwrap();
        let p = assemble_povm(&m1, &m2, &tol()).unwrap();
        assert_eq!((p.alpha, p.beta), (1.0, 1.0));
        assert!(
            p.inconclusive
                .max_abs_diff(&ComplexMatrix::from_diag(&[0.0, 1.0, 0.0, 1.0]))
                < 1e-12
        );
    }

    #[test]
    fn povm_with_overlap_halves() {
        let t = tol();
        let a = DensityMatrix::validate(ComplexMatrix::from_diag(&[1.0, 0.0, 0.0]), &t).unwrap();
        let b = DensityMatrix::validate(ComplexMatrix::from_diag(&[0.0, 1.0, 0.0]), &t).unwrap();
        let set = CandidateSet::from_states(vec![a, b], &t).unwrap();
        let m1 = build_m1(&set, 2, Some(0), &cfg()).unwrap();
        let m2 = build_m2_product(&set, 2, &cfg()).unwrap();
        // |e2 e2> is index 8
        assert!((m1.matrix()[(8, 8)].re - 1.0).abs() < 1e-12);
        assert!((m2.matrix()[(8, 8)].re - 1.0).abs() < 1e-12);
        let p = assemble_povm(&m1, &m2, &t).unwrap();
        assert_eq!((p.alpha, p.beta), (0.5, 0.5));
        assert!(p.inconclusive_min_eigenvalue >= -1e-9);
    }

    #[test]
    fn povm_of_zero_operators_is_identity() {
        let z = MeasurementOperator::new(
            2,
            2,
            ComplexMatrix::zeros(4, 4),
            Provenance::External,
            &tol(),
        )
        .unwrap();
        let p = assemble_povm(&z, &z, &tol()).unwrap();
        assert_eq!(p.inconclusive, ComplexMatrix::identity(4));
        let other = MeasurementOperator::new(
            3,
            2,
            ComplexMatrix::zeros(8, 8),
            Provenance::External,
            &tol(),
        )
        .unwrap();
        assert!(matches!(
            assemble_povm(&z, &other, &tol()),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn operator_validation() {
        let t = tol();
        assert!(MeasurementOperator::new(
            2,
            2,
            ComplexMatrix::identity(3),
            Provenance::External,
            &t
        )
        .is_err());
        let big = ComplexMatrix::identity(4).scale(1.5);
        assert!(MeasurementOperator::new(2, 2, big, Provenance::External, &t).is_err());
        let neg = ComplexMatrix::from_diag(&[-0.1, 0.0, 0.0, 0.0]);
        assert!(MeasurementOperator::new(2, 2, neg, Provenance::External, &t).is_err());
    }
}
