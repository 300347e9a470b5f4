//! Seeded random instance generator for the property suites.
//!
//! Draws stay inside the representable class on purpose: grounds with a
//! small pool of designated atoms, one or two filter functionals, component
//! masses from a fixed rational pool, and rows built from point targets,
//! diagonal terms and filter constants. Everything is exact, so suite
//! verdicts are exact too.

use fam_core::{
    FilterFunctional, GroundSpace, Kernel, KernelRule, Measure, Point, RuleValue, SetExpr,
    TailFamily, Q,
};
use num::{One, Zero};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn q(n: i64, d: i64) -> Q {
    fam_core::rat::q(n, d)
}

/// Component-mass pool for combined chains.
pub fn q1_pool() -> Vec<Q> {
    vec![q(1, 4), q(1, 3), q(1, 2), q(2, 3), q(3, 4)]
}

/// Anchor pool for filter functionals on the unit ground; all families are
/// pairwise distinct.
fn filter_pool(ground: &GroundSpace) -> Vec<FilterFunctional> {
    vec![
        FilterFunctional::new(
            "eta0plus",
            TailFamily::LeftOfPoint { point: q(0, 1) },
            ground,
        )
        .unwrap(),
        FilterFunctional::new(
            "etaThirdPlus",
            TailFamily::LeftOfPoint { point: q(1, 3) },
            ground,
        )
        .unwrap(),
        FilterFunctional::new(
            "eta1minus",
            TailFamily::RightOfPoint { point: q(1, 1) },
            ground,
        )
        .unwrap(),
        FilterFunctional::new(
            "etaHalfMinus",
            TailFamily::RightOfPoint { point: q(1, 2) },
            ground,
        )
        .unwrap(),
    ]
}

/// A random generated chain instance: ground, designated atoms, filters.
#[derive(Debug, Clone)]
pub struct Instance {
    pub ground: GroundSpace,
    pub atoms: Vec<Point>,
    pub filters: Vec<FilterFunctional>,
}

/// Draws a unit-interval ground with three to eight designated atoms and one
/// or two filter functionals.
pub fn gen_instance(rng: &mut ChaCha8Rng) -> Instance {
    let ground = GroundSpace::unit_interval("X");
    let atom_count = rng.gen_range(3..=8usize);
    let mut atoms = Vec::new();
    let denom = 11i64;
    let mut offsets: Vec<i64> = (0..=denom).collect();
    offsets.shuffle(rng);
    for n in offsets.into_iter().take(atom_count) {
        atoms.push(Point::Rational(q(n, denom)));
    }
    atoms.sort();
    let pool = filter_pool(&ground);
    let filter_count = rng.gen_range(1..=2usize);
    let mut indices: Vec<usize> = (0..pool.len()).collect();
    indices.shuffle(rng);
    let mut filters: Vec<FilterFunctional> = indices
        .into_iter()
        .take(filter_count)
        .map(|i| pool[i].clone())
        .collect();
    filters.sort();
    Instance {
        ground,
        atoms,
        filters,
    }
}

/// Exact positive rational simplex with `k` entries.
pub fn gen_simplex(rng: &mut ChaCha8Rng, k: usize) -> Vec<Q> {
    let weights: Vec<u64> = (0..k).map(|_| rng.gen_range(1..=6u64)).collect();
    let total: u64 = weights.iter().sum();
    weights
        .into_iter()
        .map(|w| Q::new(w.into(), total.into()))
        .collect()
}

/// Which parts of the representation a random measure may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureShape {
    AtomicOnly,
    PfaOnly,
    Mixed,
}

/// A random probability measure over the instance's atoms and filters.
pub fn gen_probability(rng: &mut ChaCha8Rng, instance: &Instance, shape: MeasureShape) -> Measure {
    let atom_count = match shape {
        MeasureShape::PfaOnly => 0,
        _ => rng.gen_range(1..=instance.atoms.len().min(3)),
    };
    let filter_count = match shape {
        MeasureShape::AtomicOnly => 0,
        MeasureShape::PfaOnly => rng.gen_range(1..=instance.filters.len()),
        MeasureShape::Mixed => rng.gen_range(1..=instance.filters.len()),
    };
    let coefs = gen_simplex(rng, atom_count + filter_count);
    let mut atom_indices: Vec<usize> = (0..instance.atoms.len()).collect();
    atom_indices.shuffle(rng);
    let atoms: Vec<(Point, Q)> = atom_indices
        .into_iter()
        .take(atom_count)
        .zip(coefs.iter().cloned())
        .map(|(i, w)| (instance.atoms[i].clone(), w))
        .collect();
    let mut filter_indices: Vec<usize> = (0..instance.filters.len()).collect();
    filter_indices.shuffle(rng);
    let terms: Vec<(FilterFunctional, Q)> = filter_indices
        .into_iter()
        .take(filter_count)
        .zip(coefs[atom_count..].iter().cloned())
        .map(|(i, c)| (instance.filters[i].clone(), c))
        .collect();
    Measure::from_parts(instance.ground.clone(), atoms, terms).unwrap()
}

/// A purely pfa probability measure over the instance filters.
fn gen_pfa_row(rng: &mut ChaCha8Rng, instance: &Instance, mass: &Q) -> Vec<RuleValue> {
    let k = rng.gen_range(1..=instance.filters.len());
    let coefs = gen_simplex(rng, k);
    let mut indices: Vec<usize> = (0..instance.filters.len()).collect();
    indices.shuffle(rng);
    indices
        .into_iter()
        .take(k)
        .zip(coefs)
        .map(|(i, c)| {
            RuleValue::Constant(
                Measure::pure_filter(instance.ground.clone(), instance.filters[i].clone())
                    .unwrap()
                    .scale(&(c * mass)),
            )
        })
        .collect()
}

/// A purely atomic row worth `mass`, out of point targets (and optionally a
/// diagonal term).
fn gen_atomic_row(
    rng: &mut ChaCha8Rng,
    instance: &Instance,
    mass: &Q,
    allow_diagonal: bool,
) -> Vec<RuleValue> {
    let k = rng.gen_range(1..=3usize);
    let coefs = gen_simplex(rng, k);
    let mut values = Vec::new();
    for c in coefs {
        let coef = c * mass;
        if allow_diagonal && rng.gen_bool(0.3) {
            values.push(RuleValue::Diagonal { coef });
        } else {
            let target = instance.atoms[rng.gen_range(0..instance.atoms.len())].clone();
            values.push(RuleValue::PointTarget { target, coef });
        }
    }
    values
}

/// Partition of the unit ground into a finite designated-atom piece and its
/// cofinite complement, or just the full space.
fn gen_pieces(rng: &mut ChaCha8Rng, instance: &Instance) -> Vec<SetExpr> {
    if rng.gen_bool(0.5) {
        vec![SetExpr::Full]
    } else {
        let k = rng.gen_range(1..=instance.atoms.len().min(3));
        let finite = SetExpr::points(instance.atoms.iter().take(k).cloned());
        let rest = finite.clone().complement();
        vec![finite, rest]
    }
}

/// A kernel whose every row is purely finitely additive.
pub fn gen_pure_pfa_kernel(rng: &mut ChaCha8Rng, instance: &Instance) -> Kernel {
    let mut rules = Vec::new();
    for piece in gen_pieces(rng, instance) {
        for value in gen_pfa_row(rng, instance, &Q::one()) {
            rules.push(KernelRule::new(piece.clone(), value));
        }
    }
    Kernel::new(instance.ground.clone(), rules).unwrap()
}

/// Range behavior requested of the ca component of a combined chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaStyle {
    /// Point targets everywhere: filters map into atomic measures.
    CaRange,
    /// Diagonal on the cofinite piece: filters map to multiples of
    /// themselves.
    PfaRange,
    /// Free mix.
    Any,
}

/// A nondegenerate combined chain with constant component masses `(q1, q2)`.
/// Point targets land in the designated atom pool, so orbits stay finite.
pub fn gen_combined_kernel(
    rng: &mut ChaCha8Rng,
    instance: &Instance,
    style: CaStyle,
) -> (Kernel, Q) {
    let pool = q1_pool();
    let q1 = pool[rng.gen_range(0..pool.len())].clone();
    let q2 = Q::one() - &q1;
    let pieces = gen_pieces(rng, instance);
    let mut rules = Vec::new();
    for (i, piece) in pieces.iter().enumerate() {
        // the last piece is the cofinite one carrying every filter tail
        let tail_piece = i + 1 == pieces.len();
        let ca_values = match style {
            CaStyle::CaRange => gen_atomic_row(rng, instance, &q1, false),
            CaStyle::PfaRange => {
                if tail_piece {
                    vec![RuleValue::Diagonal { coef: q1.clone() }]
                } else {
                    gen_atomic_row(rng, instance, &q1, false)
                }
            }
            CaStyle::Any => gen_atomic_row(rng, instance, &q1, true),
        };
        for value in ca_values {
            rules.push(KernelRule::new(piece.clone(), value));
        }
        if !q2.is_zero() {
            for value in gen_pfa_row(rng, instance, &q2) {
                rules.push(KernelRule::new(piece.clone(), value));
            }
        }
    }
    (Kernel::new(instance.ground.clone(), rules).unwrap(), q1)
}

/// A strictly positive stochastic matrix on `n` states.
pub fn gen_positive_stochastic(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<Q>> {
    (0..n)
        .map(|_| {
            let row: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=9u64)).collect();
            let total: u64 = row.iter().sum();
            row.into_iter()
                .map(|w| Q::new(w.into(), total.into()))
                .collect()
        })
        .collect()
}

/// A kernel over a finite labeled ground given by a dense stochastic matrix.
pub fn kernel_from_matrix(ground: &GroundSpace, matrix: &[Vec<Q>]) -> Kernel {
    let labels = ground.enumerated().to_vec();
    let rules = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let measure = Measure::from_atoms(
                ground.clone(),
                row.iter()
                    .enumerate()
                    .filter(|(_, w)| !w.is_zero())
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

/// Probability measure over the scenario's ground and registered filters,
/// used by scenario-level randomized checks.
pub fn gen_scenario_probability(
    rng: &mut ChaCha8Rng,
    ground: &GroundSpace,
    filters: &[FilterFunctional],
) -> Measure {
    let atom_pool: Vec<Point> = match ground.kind() {
        fam_core::GroundKind::UnitIntervalRationals => {
            (0..=10i64).map(|n| Point::Rational(q(n, 10))).collect()
        }
        fam_core::GroundKind::Integers => (-5..=5i64).map(Point::integer).collect(),
        fam_core::GroundKind::FiniteLabeled => ground
            .enumerated()
            .iter()
            .map(|l| Point::label(l.clone()))
            .collect(),
    };
    let atom_count = rng.gen_range(1..=3usize);
    let filter_count = if filters.is_empty() {
        0
    } else {
        rng.gen_range(0..=filters.len().min(2))
    };
    let coefs = gen_simplex(rng, atom_count + filter_count);
    let mut pool = atom_pool;
    pool.shuffle(rng);
    let atoms: Vec<(Point, Q)> = pool
        .into_iter()
        .take(atom_count)
        .zip(coefs.iter().cloned())
        .collect();
    let mut filter_pool: Vec<FilterFunctional> = filters.to_vec();
    filter_pool.shuffle(rng);
    let terms: Vec<(FilterFunctional, Q)> = filter_pool
        .into_iter()
        .take(filter_count)
        .zip(coefs[atom_count..].iter().cloned())
        .collect();
    Measure::from_parts(ground.clone(), atoms, terms).unwrap()
}

/// Combined instance serialized as a reproduction scenario skeleton.
pub fn reproduction_scenario(
    instance: &Instance,
    kernel: &Kernel,
    initial: Option<&Measure>,
) -> serde_json::Value {
    use fam_core::codec;
    let filters: Vec<serde_json::Value> =
        instance.filters.iter().map(codec::filter_to_json).collect();
    serde_json::json!({
        "schema": crate::report::SCHEMA,
        "name": "generated-failure",
        "ground": codec::ground_to_json(&instance.ground),
        "filters": filters,
        "kernel": codec::kernel_to_json(kernel),
        "initial": initial.map(codec::measure_to_json).unwrap_or(serde_json::Value::Null),
        "n_max": 10,
        "checks": ["trace", "h_conditions", "invariant", "classification"],
    })
}
