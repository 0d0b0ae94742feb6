//! Worked examples checked against hand-built matrices.

mod common;

use mixcomp::comparison::{build_m1, build_m2_product, build_maximal, check_conditions};
use mixcomp::oracle::{decide, outcome_probability, TupleClass};
use mixcomp::states::{eq26, nested2, orth2};
use mixcomp::{CandidateSet, ComplexMatrix, Config, DensityMatrix, OperatorKind, Tolerances, C64};
use proptest::prelude::*;

fn cfg() -> Config {
    Config::default()
}

/// Plain nested-loop Kronecker product, kept apart from the library one.
fn naive_kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut data = vec![C64::new(0.0, 0.0); ar * br * ac * bc];
    for i in 0..ar {
        for j in 0..ac {
            for k in 0..br {
                for l in 0..bc {
                    data[(i * br + k) * ac * bc + j * bc + l] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    ComplexMatrix::new(ar * br, ac * bc, data).unwrap()
}

fn product(set: &CandidateSet, idx: &[usize]) -> ComplexMatrix {
    idx.iter()
        .skip(1)
        .fold(set.state(idx[0]).matrix().clone(), |acc, &i| {
            naive_kron(&acc, set.state(i).matrix())
        })
}

/// Re Tr(M rho) by the explicit double sum.
fn prob(m: &ComplexMatrix, rho: &ComplexMatrix) -> f64 {
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            acc += m[(i, j)] * rho[(j, i)];
        }
    }
    acc.re
}

#[test]
fn nested_pair_identity_detector_fires_with_one_quarter() {
    let set = nested2();
    let m = build_m1(&set, 2, None, &cfg()).unwrap();
    let expected = ComplexMatrix::from_diag(&[0.0, 0.0, 0.0, 1.0]);
    assert!(m.matrix().max_abs_diff(&expected) <= 1e-12);
    assert!((prob(&expected, &product(&set, &[1, 1])) - 0.25).abs() <= 1e-12);
    for t in [[0, 1], [1, 0]] {
        assert!(prob(m.matrix(), &product(&set, &t)).abs() <= 1e-12);
    }
    let p = outcome_probability(&m, &TupleClass::new(vec![1, 1]), &set, &cfg()).unwrap();
    assert!((p - 0.25).abs() <= 1e-12);
}

#[test]
fn orthogonal_pair_difference_detector_is_the_swap_sector() {
    let set = orth2();
    let m = build_maximal(&set, 2, OperatorKind::M2, &cfg()).unwrap();
    let expected = ComplexMatrix::from_diag(&[0.0, 1.0, 1.0, 0.0]);
    assert!(m.matrix().max_abs_diff(&expected) <= 1e-12);
    for t in [[0, 1], [1, 0]] {
        assert!((prob(m.matrix(), &product(&set, &t)) - 1.0).abs() <= 1e-12);
    }
    for t in [[0, 0], [1, 1]] {
        assert!(prob(m.matrix(), &product(&set, &t)).abs() <= 1e-12);
    }
}

#[test]
fn three_mixtures_need_three_copies() {
    let set = eq26();
    let report = check_conditions(&set, &Tolerances::default());
    assert!(report.m2_necessary.holds);
    assert!(!report.m1_condition.holds);
    assert!(!report.m2_structural.holds);

    let two = decide(&set, 2, OperatorKind::M2, &cfg()).unwrap();
    assert!(!two.exists);
    assert!(two.operator.matrix().max_abs() <= 1e-12);

    let three = decide(&set, 3, OperatorKind::M2, &cfg()).unwrap();
    assert!(three.exists);
    let m = three.operator.matrix();
    assert!(m.matmul(m).max_abs_diff(m) <= 1e-10);
    for i in 0..3 {
        assert!(prob(m, &product(&set, &[i, i, i])).abs() <= 1e-10);
    }
    assert!(prob(m, &product(&set, &[0, 1, 2])) >= 0.25 - 1e-10);

    // the maximal projector dominates the product construction on every tuple
    let product_op = build_m2_product(&set, 3, &cfg()).unwrap();
    let mut best: f64 = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                let rho = product(&set, &[a, b, c]);
                let p = prob(product_op.matrix(), &rho);
                assert!(p <= prob(m, &rho) + 1e-10);
                best = best.max(p);
            }
        }
    }
    assert!((best - 0.125).abs() <= 1e-10);
}

#[test]
fn maximally_mixed_partner_blocks_difference_detection() {
    let tol = Tolerances::default();
    for seed in 0..8 {
        let other = DensityMatrix::random(3, 2, seed).unwrap();
        let set = CandidateSet::from_states(vec![DensityMatrix::maximally_mixed(3), other], &tol)
            .unwrap();
        let report = check_conditions(&set, &tol);
        assert!(!report.m2_necessary.holds);
        assert_eq!(report.m2_necessary.violations, vec![0]);
        assert!(!decide(&set, 2, OperatorKind::M2, &cfg()).unwrap().exists);
        // the full-rank state still sticks out of the rank-2 support
        assert!(decide(&set, 2, OperatorKind::M1, &cfg()).unwrap().exists);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn conditions_agree_with_exhaustive_search(seed in 100_000u64..200_000, n in 2usize..4) {
        let inst = common::instance(seed);
        let set = &inst.set;
        let tol = Tolerances::default();
        let report = check_conditions(set, &tol);
        let m1 = decide(set, n, OperatorKind::M1, &cfg()).unwrap();
        let m2 = decide(set, n, OperatorKind::M2, &cfg()).unwrap();
        prop_assert_eq!(report.m1_condition.holds, m1.exists);
        if m2.exists {
            prop_assert!(report.m2_necessary.holds);
        }
        if report.m2_structural.holds {
            prop_assert!(m2.exists);
        }
        for op in [&m1.operator, &m2.operator] {
            let m = op.matrix();
            prop_assert!(m.matmul(m).max_abs_diff(m) <= 1e-9);
            prop_assert!(m.is_hermitian(1e-10));
        }
    }
}
