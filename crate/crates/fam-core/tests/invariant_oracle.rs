//! Oracle tests for the fixed-point solver: on finite grounds the solver
//! must agree with dense stochastic-matrix computations done independently
//! here (vector-matrix products and the nullspace of the transposed system),
//! and on combined chains the structural solution facts must hold.

mod common;

use common::*;
use fam_core::invariant::{classify_invariants, orbit_closure, solve_invariant};
use fam_core::{
    Generator, GroundSpace, Kernel, KernelRule, MarkovOperator, Measure, MeasureClass, Point,
    RuleValue, SetExpr, SolveOutcome, Q,
};
use num::{One, Zero};
use proptest::prelude::*;

// ---------------------------------------------------------------------------
// dense rational matrix oracle, independent of the library code paths
// ---------------------------------------------------------------------------

fn vec_mat(v: &[Q], m: &[Vec<Q>]) -> Vec<Q> {
    let n = m.len();
    (0..n)
        .map(|j| (0..n).fold(Q::zero(), |acc, i| acc + &v[i] * &m[i][j]))
        .collect()
}

/// Stationary row vectors via elimination on `P^T - I`, done from scratch.
fn oracle_stationary(p: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = p.len();
    // rows of the homogeneous system (P^T - I) x = 0
    let mut a: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut v = p[j][i].clone();
                    if i == j {
                        v -= Q::one();
                    }
                    v
                })
                .collect()
        })
        .collect();
    // forward elimination
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if let Some(r) = (row..n).find(|&r| !a[r][col].is_zero()) {
            a.swap(row, r);
            let pivot = a[row][col].clone();
            for v in a[row].iter_mut() {
                *v /= pivot.clone();
            }
            let reduced = a[row].clone();
            for (r2, target) in a.iter_mut().enumerate() {
                if r2 == row || target[col].is_zero() {
                    continue;
                }
                let f = target[col].clone();
                for (v, p) in target.iter_mut().zip(&reduced) {
                    *v -= &f * p;
                }
            }
            pivot_cols.push(col);
            row += 1;
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::new();
    for f in free {
        let mut x = vec![Q::zero(); n];
        x[f] = Q::one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            x[pc] = -a[r][f].clone();
        }
        basis.push(x);
    }
    basis
}

fn ground_of(n: usize) -> GroundSpace {
    GroundSpace::finite_labeled("S", (0..n).map(|i| format!("s{i}")).collect()).unwrap()
}

fn kernel_of(ground: &GroundSpace, p: &[Vec<Q>]) -> Kernel {
    let labels = ground.enumerated().to_vec();
    let rules = p
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let measure = Measure::from_atoms(
                ground.clone(),
                row.iter()
                    .enumerate()
                    .map(|(j, w)| (Point::label(labels[j].clone()), w.clone())),
            )
            .unwrap();
            KernelRule::new(
                SetExpr::singleton(Point::label(labels[i].clone())),
                RuleValue::Constant(measure),
            )
        })
        .collect();
    Kernel::new(ground.clone(), rules).unwrap()
}

/// Strictly positive stochastic matrix, so the stationary vector is unique.
fn arb_positive_stochastic(max_n: usize) -> impl Strategy<Value = Vec<Vec<Q>>> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(proptest::collection::vec(1..=9u64, n..=n), n..=n).prop_map(
            |rows| {
                rows.into_iter()
                    .map(|row| {
                        let total: u64 = row.iter().sum();
                        row.into_iter()
                            .map(|w| Q::new(w.into(), total.into()))
                            .collect()
                    })
                    .collect()
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// The solver's unique solution equals the oracle's normalized
    /// stationary vector, and the operator agrees with vector-matrix
    /// multiplication.
    #[test]
    fn solver_matches_dense_oracle(p in arb_positive_stochastic(6)) {
        let n = p.len();
        let ground = ground_of(n);
        let kernel = kernel_of(&ground, &p);
        let op = MarkovOperator::new(kernel, &[]).unwrap();

        // apply == vector-matrix product on a point mass
        let start = vec![Q::one()]
            .into_iter()
            .chain(std::iter::repeat_with(Q::zero).take(n - 1))
            .collect::<Vec<Q>>();
        let expected_row = vec_mat(&start, &p);
        let image = op
            .apply(&Measure::dirac(ground.clone(), Point::label("s0")).unwrap())
            .unwrap();
        for (j, label) in ground.enumerated().iter().enumerate() {
            let got = image
                .eval(&SetExpr::singleton(Point::label(label.clone())))
                .unwrap()
                .unwrap_exact();
            prop_assert_eq!(&got, &expected_row[j]);
        }

        // stationary distribution
        let seeds: Vec<Generator> = ground
            .enumerated()
            .iter()
            .map(|l| Generator::Atom(Point::label(l.clone())))
            .collect();
        let closure = orbit_closure(&op, &seeds, 64).unwrap();
        let report = solve_invariant(&closure).unwrap();
        prop_assert_eq!(report.outcome, SolveOutcome::Unique);
        let basis = oracle_stationary(&p);
        prop_assert_eq!(basis.len(), 1);
        let total: Q = basis[0].iter().fold(Q::zero(), |acc, v| acc + v);
        let normalized: Vec<Q> = basis[0].iter().map(|v| v / &total).collect();
        let solution = &report.solutions[0].measure;
        prop_assert_eq!(op.apply(solution).unwrap(), solution.clone());
        for (j, label) in ground.enumerated().iter().enumerate() {
            let got = solution
                .eval(&SetExpr::singleton(Point::label(label.clone())))
                .unwrap()
                .unwrap_exact();
            prop_assert_eq!(&got, &normalized[j]);
        }
    }

    /// Nondegenerate combined chains: every solution has a nonzero pfa part
    /// and no mixed solution has an invariant component.
    #[test]
    fn combined_chains_have_no_ca_solutions(
        q1_seed in 1..=3u64,
        target in arb_point(),
        diagonal in any::<bool>(),
    ) {
        let g = unit();
        let q1 = Q::new(q1_seed.into(), 4.into());
        let q2 = Q::one() - &q1;
        let ca_value = if diagonal {
            RuleValue::Diagonal { coef: q1.clone() }
        } else {
            RuleValue::PointTarget { target: target.clone(), coef: q1.clone() }
        };
        let kernel = Kernel::new(
            g.clone(),
            vec![
                KernelRule::new(SetExpr::Full, ca_value),
                KernelRule::new(
                    SetExpr::Full,
                    RuleValue::Constant(
                        Measure::pure_filter(g.clone(), eta0()).unwrap().scale(&q2),
                    ),
                ),
            ],
        )
        .unwrap();
        let op = MarkovOperator::new(kernel, &[]).unwrap();
        let closure = orbit_closure(
            &op,
            &[Generator::Atom(target), Generator::Atom(Point::rational(1, 2))],
            64,
        )
        .unwrap();
        let report = solve_invariant(&closure).unwrap();
        prop_assert!(report.delta_ba_nonempty);
        let verdicts = classify_invariants(&report, &op).unwrap();
        prop_assert_eq!(verdicts.combined_no_ca_solution, Some(true));
        prop_assert!(verdicts.all_pass);
        for s in &report.solutions {
            prop_assert!(s.class != MeasureClass::CountablyAdditive);
            prop_assert!(!s.measure.pfa().is_zero());
        }
    }
}

/// Two absorbing blocks: the oracle nullspace is two dimensional and the
/// solver reports both extreme stationary vectors.
#[test]
fn reducible_matrix_extremes_match_oracle() {
    let ground = ground_of(4);
    let p = vec![
        vec![q(1, 2), q(1, 2), q(0, 1), q(0, 1)],
        vec![q(1, 2), q(1, 2), q(0, 1), q(0, 1)],
        vec![q(0, 1), q(0, 1), q(1, 3), q(2, 3)],
        vec![q(0, 1), q(0, 1), q(2, 3), q(1, 3)],
    ];
    let kernel = kernel_of(&ground, &p);
    let op = MarkovOperator::new(kernel, &[]).unwrap();
    let seeds: Vec<Generator> = ground
        .enumerated()
        .iter()
        .map(|l| Generator::Atom(Point::label(l.clone())))
        .collect();
    let closure = orbit_closure(&op, &seeds, 16).unwrap();
    let report = solve_invariant(&closure).unwrap();
    assert_eq!(report.nullspace_dimension, 2);
    assert_eq!(report.outcome, SolveOutcome::Extremes);
    assert_eq!(report.solutions.len(), 2);
    assert_eq!(oracle_stationary(&p).len(), 2);
    // the extremes are the per-block stationary vectors
    let expected_a = Measure::from_atoms(
        ground.clone(),
        [(Point::label("s0"), q(1, 2)), (Point::label("s1"), q(1, 2))],
    )
    .unwrap();
    let expected_b = Measure::from_atoms(
        ground,
        [(Point::label("s2"), q(1, 2)), (Point::label("s3"), q(1, 2))],
    )
    .unwrap();
    let got: Vec<&Measure> = report.solutions.iter().map(|s| &s.measure).collect();
    assert!(got.contains(&&expected_a));
    assert!(got.contains(&&expected_b));
}
