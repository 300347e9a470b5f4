//! Randomized property suites. Each suite generates `count` seeded instances
//! and checks an exact structural fact; any failure carries a reproduction
//! scenario.

use anyhow::{bail, Result};
use num::{One, Zero};
use serde_json::{json, Value};

use fam_core::invariant::{classify_invariants, orbit_closure, solve_invariant, Generator};
use fam_core::rat::q_pow;
use fam_core::{codec, GroundSpace, MarkovOperator, Measure, Point, SetExpr, SolveOutcome, Q};

use crate::gen::{self, CaStyle, MeasureShape};
use crate::oracle;
use crate::report::SCHEMA;

pub const SUITE_NAMES: &[&str] = &[
    "thm_3_5",
    "cor_3_3",
    "thm_4_3_4_4",
    "matrix_oracle",
    "roundtrip",
    "thm_5_1",
    "thm_5_2",
];

/// One-line description of what each suite checks, keyed like the CLI verb.
pub fn describe_suite(name: &str) -> &'static str {
    match name {
        "thm_3_5" => "kernels with purely pfa rows map every measure into the pfa cone",
        "cor_3_3" => "component superposition range inclusions on combined chains",
        "thm_4_3_4_4" => {
            "combined nondegenerate chains: invariants have pfa mass and components move"
        }
        "matrix_oracle" => "finite atomic kernels agree with dense matrix arithmetic",
        "roundtrip" => "measure and kernel decompositions recombine to the identity",
        "thm_5_1" => "ca-range condition locks component norms to (q1, q2)",
        "thm_5_2" => "pfa-range condition gives exact geometric ca-norm decay",
        _ => "unknown suite",
    }
}

#[derive(Debug, Clone)]
pub struct SuiteFailure {
    pub index: usize,
    pub message: String,
    pub scenario: Option<Value>,
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub suite: String,
    pub seed: u64,
    pub count: usize,
    pub passes: usize,
    pub failures: Vec<SuiteFailure>,
}

impl SuiteOutcome {
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_value(&self) -> Value {
        let failures: Vec<Value> = self
            .failures
            .iter()
            .map(|f| {
                json!({
                    "index": f.index,
                    "message": f.message,
                    "scenario": f.scenario.clone().unwrap_or(Value::Null),
                })
            })
            .collect();
        json!({
            "schema": SCHEMA,
            "suite": self.suite,
            "description": describe_suite(&self.suite),
            "seed": self.seed,
            "count": self.count,
            "passes": self.passes,
            "pass": self.all_pass(),
            "failures": failures,
        })
    }

    pub fn render(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.to_value()).expect("valid json");
        text.push('\n');
        text
    }
}

pub fn run_suite(name: &str, seed: u64, count: usize) -> Result<SuiteOutcome> {
    let mut outcome = SuiteOutcome {
        suite: name.to_string(),
        seed,
        count,
        passes: 0,
        failures: Vec::new(),
    };
    let run: fn(&mut SuiteOutcome, u64, usize) -> Result<()> = match name {
        "thm_3_5" => pfa_range_suite,
        "cor_3_3" => superposition_suite,
        "thm_4_3_4_4" => combined_invariant_suite,
        "matrix_oracle" => matrix_oracle_suite,
        "roundtrip" => roundtrip_suite,
        "thm_5_1" => locked_norm_suite,
        "thm_5_2" => geometric_norm_suite,
        other => bail!(
            "unknown suite {other:?}; known suites: {}",
            SUITE_NAMES.join(", ")
        ),
    };
    run(&mut outcome, seed, count)?;
    Ok(outcome)
}

fn record(
    outcome: &mut SuiteOutcome,
    index: usize,
    result: std::result::Result<(), (String, Option<Value>)>,
) {
    match result {
        Ok(()) => outcome.passes += 1,
        Err((message, scenario)) => outcome.failures.push(SuiteFailure {
            index,
            message,
            scenario,
        }),
    }
}

/// Purely pfa kernels send atomic, pfa and mixed measures into the pfa cone.
fn pfa_range_suite(outcome: &mut SuiteOutcome, seed: u64, count: usize) -> Result<()> {
    for index in 0..count {
        let mut rng = gen::rng_for(seed, index as u64);
        let instance = gen::gen_instance(&mut rng);
        let kernel = gen::gen_pure_pfa_kernel(&mut rng, &instance);
        let operator = MarkovOperator::new(kernel.clone(), &instance.filters)?;
        let shapes = [
            MeasureShape::AtomicOnly,
            MeasureShape::PfaOnly,
            MeasureShape::Mixed,
        ];
        let mut verdict = Ok(());
        'shapes: for shape in shapes {
            for _ in 0..3 {
                let mu = gen::gen_probability(&mut rng, &instance, shape);
                let image = operator.apply(&mu)?;
                if !image.is_pfa()? {
                    verdict = Err((
                        format!("image of a {shape:?} seed has atoms"),
                        Some(gen::reproduction_scenario(&instance, &kernel, Some(&mu))),
                    ));
                    break 'shapes;
                }
            }
        }
        record(outcome, index, verdict);
    }
    Ok(())
}

/// Superposition inclusions on randomized combined chains and a 10-measure
/// battery.
fn superposition_suite(outcome: &mut SuiteOutcome, seed: u64, count: usize) -> Result<()> {
    for index in 0..count {
        let mut rng = gen::rng_for(seed, index as u64);
        let instance = gen::gen_instance(&mut rng);
        let (kernel, _q1) = gen::gen_combined_kernel(&mut rng, &instance, CaStyle::Any);
        let operator = MarkovOperator::new(kernel.clone(), &instance.filters)?;
        let battery: Vec<Measure> = (0..10)
            .map(|i| {
                let shape = match i % 3 {
                    0 => MeasureShape::AtomicOnly,
                    1 => MeasureShape::PfaOnly,
                    _ => MeasureShape::Mixed,
                };
                gen::gen_probability(&mut rng, &instance, shape)
            })
            .collect();
        let report = operator.range_inclusions(&battery)?;
        let verdict = if report.violations.is_empty() {
            Ok(())
        } else {
            let v = &report.violations[0];
            Err((
                format!("inclusion {} violated on battery[{}]", v.check, v.index),
                Some(gen::reproduction_scenario(
                    &instance,
                    &kernel,
                    Some(&battery[v.index]),
                )),
            ))
        };
        record(outcome, index, verdict);
    }
    Ok(())
}

/// Nondegenerate combined chains with finite closure: every invariant
/// solution has nonzero pfa part and no mixed solution has a fixed component.
fn combined_invariant_suite(outcome: &mut SuiteOutcome, seed: u64, count: usize) -> Result<()> {
    for index in 0..count {
        let mut rng = gen::rng_for(seed, index as u64);
        let instance = gen::gen_instance(&mut rng);
        let (kernel, _q1) = gen::gen_combined_kernel(&mut rng, &instance, CaStyle::Any);
        let operator = MarkovOperator::new(kernel.clone(), &instance.filters)?;
        let mut seeds: Vec<Generator> = instance
            .atoms
            .iter()
            .map(|p| Generator::Atom(p.clone()))
            .collect();
        seeds.extend(
            instance
                .filters
                .iter()
                .map(|f| Generator::Filter(f.clone())),
        );
        let closure = orbit_closure(&operator, &seeds, 64)?;
        let report = solve_invariant(&closure)?;
        let verdict = (|| {
            if !report.delta_ba_nonempty {
                return Err((
                    "no representable invariant found for a markov chain".to_string(),
                    Some(gen::reproduction_scenario(&instance, &kernel, None)),
                ));
            }
            for s in &report.solutions {
                if s.measure.pfa().is_zero() {
                    return Err((
                        "invariant solution with zero pfa part".to_string(),
                        Some(gen::reproduction_scenario(&instance, &kernel, None)),
                    ));
                }
            }
            let verdicts = classify_invariants(&report, &operator).map_err(|e| {
                (
                    e.to_string(),
                    Some(gen::reproduction_scenario(&instance, &kernel, None)),
                )
            })?;
            if verdicts.combined_no_ca_solution != Some(true) || !verdicts.all_pass {
                return Err((
                    "classification verdicts failed".to_string(),
                    Some(gen::reproduction_scenario(&instance, &kernel, None)),
                ));
            }
            for check in &verdicts.component_checks {
                if !(check.ca_moved && check.pfa_moved) {
                    return Err((
                        format!(
                            "components of mixed solution {} did not both move",
                            check.solution_index
                        ),
                        Some(gen::reproduction_scenario(&instance, &kernel, None)),
                    ));
                }
            }
            Ok(())
        })();
        record(outcome, index, verdict);
    }
    Ok(())
}

/// Finite atomic kernels against the dense oracle: operator application,
/// convolution powers up to five, and the stationary solution.
fn matrix_oracle_suite(outcome: &mut SuiteOutcome, seed: u64, count: usize) -> Result<()> {
    for index in 0..count {
        let mut rng = gen::rng_for(seed, index as u64);
        let n = 2 + (index % 5); // state counts 2..=6
        let matrix = gen::gen_positive_stochastic(&mut rng, n);
        let ground = GroundSpace::finite_labeled("S", (0..n).map(|i| format!("s{i}")).collect())?;
        let kernel = gen::kernel_from_matrix(&ground, &matrix);
        let operator = MarkovOperator::new(kernel.clone(), &[])?;
        let labels = ground.enumerated().to_vec();

        let verdict = (|| -> Result<std::result::Result<(), (String, Option<Value>)>> {
            // apply against vector-matrix products from every unit vector
            for (i, from) in labels.iter().enumerate() {
                let mut v = vec![Q::zero(); n];
                v[i] = Q::one();
                let expected = oracle::vec_mat(&v, &matrix);
                let image =
                    operator.apply(&Measure::dirac(ground.clone(), Point::label(from.clone()))?)?;
                for (j, to) in labels.iter().enumerate() {
                    let got = image
                        .eval(&SetExpr::singleton(Point::label(to.clone())))?
                        .unwrap_exact();
                    if got != expected[j] {
                        return Ok(Err((
                            format!("apply mismatch at row {i}, column {j}"),
                            Some(codec::kernel_to_json(&kernel)),
                        )));
                    }
                }
            }
            // convolution powers
            let steps = 2 + (index % 4); // 2..=5
            let powered = kernel.power(steps)?;
            let expected = oracle::mat_pow(&matrix, steps);
            for (i, from) in labels.iter().enumerate() {
                let row = powered.row(&Point::label(from.clone()))?;
                for (j, to) in labels.iter().enumerate() {
                    let got = row
                        .eval(&SetExpr::singleton(Point::label(to.clone())))?
                        .unwrap_exact();
                    if got != expected[i][j] {
                        return Ok(Err((
                            format!("power-{steps} mismatch at ({i},{j})"),
                            Some(codec::kernel_to_json(&kernel)),
                        )));
                    }
                }
            }
            // stationary solution
            let seeds: Vec<Generator> = labels
                .iter()
                .map(|l| Generator::Atom(Point::label(l.clone())))
                .collect();
            let closure = orbit_closure(&operator, &seeds, 64)?;
            let report = solve_invariant(&closure)?;
            let Some(expected) = oracle::unique_stationary(&matrix) else {
                return Ok(Err((
                    "oracle did not find a unique stationary vector".to_string(),
                    Some(codec::kernel_to_json(&kernel)),
                )));
            };
            if report.outcome != SolveOutcome::Unique {
                return Ok(Err((
                    format!(
                        "solver outcome {} instead of unique",
                        report.outcome.label()
                    ),
                    Some(codec::kernel_to_json(&kernel)),
                )));
            }
            let solution = &report.solutions[0].measure;
            for (j, to) in labels.iter().enumerate() {
                let got = solution
                    .eval(&SetExpr::singleton(Point::label(to.clone())))?
                    .unwrap_exact();
                if got != expected[j] {
                    return Ok(Err((
                        format!("stationary mismatch at coordinate {j}"),
                        Some(codec::kernel_to_json(&kernel)),
                    )));
                }
            }
            Ok(Ok(()))
        })()?;
        record(outcome, index, verdict);
    }
    Ok(())
}

/// Measure and kernel decomposition round-trips; every fifth instance also
/// splits a kernel.
fn roundtrip_suite(outcome: &mut SuiteOutcome, seed: u64, count: usize) -> Result<()> {
    for index in 0..count {
        let mut rng = gen::rng_for(seed, index as u64);
        let instance = gen::gen_instance(&mut rng);
        let shape = match index % 3 {
            0 => MeasureShape::AtomicOnly,
            1 => MeasureShape::PfaOnly,
            _ => MeasureShape::Mixed,
        };
        let mu = gen::gen_probability(&mut rng, &instance, shape);
        let verdict = (|| -> Result<std::result::Result<(), (String, Option<Value>)>> {
            let (ca, pfa) = mu.yosida_hewitt();
            if !ca.pfa().is_zero() {
                return Ok(Err(("ca part has filter terms".into(), None)));
            }
            if !pfa.atomic().is_zero() {
                return Ok(Err(("pfa part has atoms".into(), None)));
            }
            for point in instance.ground.sample_points() {
                let v = pfa.eval(&SetExpr::singleton(point.clone()))?.unwrap_exact();
                if !v.is_zero() {
                    return Ok(Err((
                        format!("pfa part has mass on singleton {point}"),
                        None,
                    )));
                }
            }
            if ca.add(&pfa)? != mu {
                return Ok(Err((
                    "recombination differs from the original measure".into(),
                    Some(codec::measure_to_json(&mu)),
                )));
            }
            if index % 5 == 0 {
                let (kernel, _q1) = gen::gen_combined_kernel(&mut rng, &instance, CaStyle::Any);
                let (kca, kpfa) = kernel.decompose()?;
                if !kca.rows_purely_atomic() || !kpfa.rows_purely_pfa() {
                    return Ok(Err((
                        "kernel decomposition has impure rows".into(),
                        Some(codec::kernel_to_json(&kernel)),
                    )));
                }
                let merged = fam_core::superpose(&kca, &kpfa)?;
                for x in instance
                    .atoms
                    .iter()
                    .chain(instance.ground.sample_points().iter())
                {
                    if merged.row(x)? != kernel.row(x)? {
                        return Ok(Err((
                            format!("kernel recomposition differs at row {x}"),
                            Some(codec::kernel_to_json(&kernel)),
                        )));
                    }
                }
            }
            Ok(Ok(()))
        })()?;
        record(outcome, index, verdict);
    }
    Ok(())
}

/// Under the ca-range condition the component norms lock to `(q1, q2)` from
/// the second row on, for every initial measure.
fn locked_norm_suite(outcome: &mut SuiteOutcome, seed: u64, count: usize) -> Result<()> {
    for index in 0..count {
        let mut rng = gen::rng_for(seed, index as u64);
        let instance = gen::gen_instance(&mut rng);
        let (kernel, q1) = gen::gen_combined_kernel(&mut rng, &instance, CaStyle::CaRange);
        let operator = MarkovOperator::new(kernel.clone(), &instance.filters)?;
        let verdict = (|| -> Result<std::result::Result<(), (String, Option<Value>)>> {
            if !operator.check_h1()?.holds() {
                return Ok(Err((
                    "generated chain does not satisfy the ca-range condition".into(),
                    Some(codec::kernel_to_json(&kernel)),
                )));
            }
            let q2 = Q::one() - &q1;
            for shape in [
                MeasureShape::AtomicOnly,
                MeasureShape::PfaOnly,
                MeasureShape::Mixed,
            ] {
                let initial = gen::gen_probability(&mut rng, &instance, shape);
                let trace = operator.iterate(&initial, 10, 0)?;
                for row in &trace.rows[1..] {
                    if row.ca_norm != q1 || row.pfa_norm != q2 {
                        return Ok(Err((
                            format!(
                                "row {} norms ({}, {}) differ from ({}, {})",
                                row.n, row.ca_norm, row.pfa_norm, q1, q2
                            ),
                            Some(gen::reproduction_scenario(
                                &instance,
                                &kernel,
                                Some(&initial),
                            )),
                        )));
                    }
                }
            }
            Ok(Ok(()))
        })()?;
        record(outcome, index, verdict);
    }
    Ok(())
}

/// Under the pfa-range condition the ca norm decays exactly like
/// `q1^n * |initial ca norm|`, with the same exponent table across all
/// initial measures of one instance.
fn geometric_norm_suite(outcome: &mut SuiteOutcome, seed: u64, count: usize) -> Result<()> {
    for index in 0..count {
        let mut rng = gen::rng_for(seed, index as u64);
        let instance = gen::gen_instance(&mut rng);
        let (kernel, q1) = gen::gen_combined_kernel(&mut rng, &instance, CaStyle::PfaRange);
        let operator = MarkovOperator::new(kernel.clone(), &instance.filters)?;
        let verdict = (|| -> Result<std::result::Result<(), (String, Option<Value>)>> {
            if !operator.check_h2()?.holds() {
                return Ok(Err((
                    "generated chain does not satisfy the pfa-range condition".into(),
                    Some(codec::kernel_to_json(&kernel)),
                )));
            }
            let n_max = 10usize;
            // one exponent table shared by every initial measure
            let powers: Vec<Q> = (0..=n_max).map(|i| q_pow(&q1, i)).collect();
            for shape in [
                MeasureShape::AtomicOnly,
                MeasureShape::PfaOnly,
                MeasureShape::Mixed,
            ] {
                let initial = gen::gen_probability(&mut rng, &instance, shape);
                let trace = operator.iterate(&initial, n_max, 0)?;
                let initial_ca = trace.rows[0].ca_norm.clone();
                for (i, row) in trace.rows.iter().enumerate() {
                    let expected = &powers[i] * &initial_ca;
                    if row.ca_norm != expected {
                        return Ok(Err((
                            format!(
                                "row {} ca norm {} differs from {}",
                                row.n, row.ca_norm, expected
                            ),
                            Some(gen::reproduction_scenario(
                                &instance,
                                &kernel,
                                Some(&initial),
                            )),
                        )));
                    }
                    if row.pfa_norm != Q::one() - expected {
                        return Ok(Err((
                            format!("row {} pfa norm does not complement", row.n),
                            Some(gen::reproduction_scenario(
                                &instance,
                                &kernel,
                                Some(&initial),
                            )),
                        )));
                    }
                }
            }
            Ok(Ok(()))
        })()?;
        record(outcome, index, verdict);
    }
    Ok(())
}
