//! Shared strategies and fixtures for the integration tests.

#![allow(dead_code)]

use fam_core::{
    FilterFunctional, GroundSpace, Interval, Kernel, KernelRule, Measure, Point, RuleValue,
    SetExpr, TailFamily, Q,
};
use num::{One, Zero};
use proptest::prelude::*;

pub fn unit() -> GroundSpace {
    GroundSpace::unit_interval("X")
}

pub fn q(n: i64, d: i64) -> Q {
    fam_core::rat::q(n, d)
}

pub fn eta_left(id: &str, anchor: Q) -> FilterFunctional {
    FilterFunctional::new(id, TailFamily::LeftOfPoint { point: anchor }, &unit()).unwrap()
}

pub fn eta_right(id: &str, anchor: Q) -> FilterFunctional {
    FilterFunctional::new(id, TailFamily::RightOfPoint { point: anchor }, &unit()).unwrap()
}

/// The canonical scatter functional anchored at the origin.
pub fn eta0() -> FilterFunctional {
    eta_left("eta0plus", q(0, 1))
}

/// A rational in [0, 1] with a small denominator.
pub fn arb_unit_q() -> impl Strategy<Value = Q> {
    (1..=12i64, 0..=12i64).prop_map(|(d, n)| q(n.min(d), d))
}

/// A nonnegative rational with a small denominator.
pub fn arb_pos_q() -> impl Strategy<Value = Q> {
    (0..=9i64, 1..=9i64).prop_map(|(n, d)| q(n, d))
}

/// A signed rational with a small denominator.
pub fn arb_signed_q() -> impl Strategy<Value = Q> {
    (-9..=9i64, 1..=9i64).prop_map(|(n, d)| q(n, d))
}

pub fn arb_point() -> impl Strategy<Value = Point> {
    arb_unit_q().prop_map(Point::Rational)
}

/// One of a fixed pool of distinct filter functionals on the unit ground.
pub fn arb_filter() -> impl Strategy<Value = FilterFunctional> {
    prop_oneof![
        Just(eta0()),
        Just(eta_left("etaThirdPlus", q(1, 3))),
        Just(eta_right("eta1minus", q(1, 1))),
        Just(eta_right("etaHalfMinus", q(1, 2))),
    ]
}

/// A measure on the unit ground with up to four atoms and two filter terms.
pub fn arb_measure(signed: bool) -> impl Strategy<Value = Measure> {
    let coef = move || {
        if signed {
            arb_signed_q().boxed()
        } else {
            arb_pos_q().boxed()
        }
    };
    (
        proptest::collection::vec((arb_point(), coef()), 0..4),
        proptest::collection::vec((arb_filter(), coef()), 0..3),
    )
        .prop_map(|(atoms, terms)| {
            let mut dedup = std::collections::BTreeMap::new();
            for (f, c) in terms {
                dedup.entry(f.id().to_string()).or_insert((f, c));
            }
            Measure::from_parts(unit(), atoms, dedup.into_values()).unwrap()
        })
}

/// A probability measure on the unit ground.
pub fn arb_probability() -> impl Strategy<Value = Measure> {
    (
        proptest::collection::vec((arb_point(), 1..=6u64), 1..4),
        proptest::collection::vec(1..=6u64, 0..3),
    )
        .prop_map(|(atom_seeds, filter_seeds)| {
            let filters = [eta0(), eta_right("eta1minus", q(1, 1))];
            let total: u64 =
                atom_seeds.iter().map(|(_, w)| w).sum::<u64>() + filter_seeds.iter().sum::<u64>();
            let atoms: Vec<(Point, Q)> = atom_seeds
                .into_iter()
                .map(|(p, w)| (p, Q::new(w.into(), total.into())))
                .collect();
            let terms: Vec<(FilterFunctional, Q)> = filter_seeds
                .into_iter()
                .enumerate()
                .map(|(i, w)| (filters[i % 2].clone(), Q::new(w.into(), total.into())))
                .collect();
            let mut dedup: std::collections::BTreeMap<String, (FilterFunctional, Q)> =
                std::collections::BTreeMap::new();
            for (f, c) in terms {
                dedup
                    .entry(f.id().to_string())
                    .and_modify(|(_, acc)| *acc += c.clone())
                    .or_insert((f, c));
            }
            Measure::from_parts(unit(), atoms, dedup.into_values()).unwrap()
        })
        .prop_filter("probability", |m| m.is_probability())
}

fn arb_leaf() -> impl Strategy<Value = SetExpr> {
    prop_oneof![
        2 => (arb_unit_q(), arb_unit_q(), any::<bool>(), any::<bool>()).prop_map(
            |(a, b, lc, hc)| {
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                SetExpr::Interval(Interval::new(Some(lo), lc, Some(hi), hc))
            }
        ),
        1 => proptest::collection::btree_set(arb_point(), 1..4).prop_map(SetExpr::Points),
        1 => Just(SetExpr::Full),
        1 => Just(SetExpr::Empty),
    ]
}

/// A set expression of bounded depth on the unit ground.
pub fn arb_set() -> impl Strategy<Value = SetExpr> {
    arb_leaf().prop_recursive(3, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.union(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.intersection(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.difference(b)),
            inner.prop_map(|a| a.complement()),
        ]
    })
}

/// A random Markov kernel on the unit ground built from one or two pieces
/// with point-target, diagonal and filter-constant terms.
pub fn arb_markov_kernel() -> impl Strategy<Value = Kernel> {
    (
        // cut point for a two-piece partition, or none for a single piece
        proptest::option::of(
            arb_unit_q().prop_filter("inner cut", |c| c > &Q::zero() && c < &Q::one()),
        ),
        proptest::collection::vec(arb_piece_row(), 1..3),
    )
        .prop_map(|(cut, rows)| {
            let ground = unit();
            let pieces: Vec<SetExpr> = match cut {
                None => vec![SetExpr::Full],
                Some(c) => vec![
                    SetExpr::Interval(Interval::new(Some(Q::zero()), true, Some(c.clone()), false)),
                    SetExpr::Interval(Interval::new(Some(c), true, Some(Q::one()), true)),
                ],
            };
            let mut rules = Vec::new();
            for (i, piece) in pieces.iter().enumerate() {
                let row = &rows[i % rows.len()];
                for value in row {
                    rules.push(KernelRule::new(piece.clone(), value.clone()));
                }
            }
            Kernel::new(ground, rules).unwrap()
        })
}

/// Row recipe: normalized mixture of a point target, a diagonal term and a
/// filter constant.
fn arb_piece_row() -> impl Strategy<Value = Vec<RuleValue>> {
    (arb_point(), arb_filter(), 1..=4u64, 0..=4u64, 0..=4u64).prop_map(
        |(target, filter, w_point, w_diag, w_filter)| {
            let total = w_point + w_diag + w_filter;
            let mut values = vec![RuleValue::PointTarget {
                target,
                coef: Q::new(w_point.into(), total.into()),
            }];
            if w_diag > 0 {
                values.push(RuleValue::Diagonal {
                    coef: Q::new(w_diag.into(), total.into()),
                });
            }
            if w_filter > 0 {
                values.push(RuleValue::Constant(
                    Measure::pure_filter(unit(), filter)
                        .unwrap()
                        .scale(&Q::new(w_filter.into(), total.into())),
                ));
            }
            values
        },
    )
}

/// Battery of evaluation sets used to compare measures extensionally.
pub fn eval_battery() -> Vec<SetExpr> {
    vec![
        SetExpr::Full,
        SetExpr::Empty,
        SetExpr::open_interval(q(0, 1), q(1, 2)),
        SetExpr::Interval(Interval::new(Some(q(1, 2)), true, Some(q(1, 1)), true)),
        SetExpr::open_interval(q(0, 1), q(1, 100)),
        SetExpr::Interval(Interval::new(Some(q(99, 100)), false, Some(q(1, 1)), false)),
        SetExpr::singleton(Point::rational(0, 1)),
        SetExpr::singleton(Point::rational(1, 2)),
        SetExpr::singleton(Point::rational(1, 1)),
        SetExpr::points([Point::rational(1, 3), Point::rational(2, 3)]),
    ]
}
