//! Invariant measures: the operator orbit is closed into a finite generator
//! set (Dirac atoms and filter functionals), on which `mu = A mu` becomes an
//! exact rational linear system.
//!
//! Coefficientwise nonnegativity on the generators characterizes the
//! nonnegative cone because distinct filter functionals have eventually
//! disjoint tails (they are mutually singular, as are distinct atoms).

use num::{One, Signed, Zero};

use crate::error::CoreError;
use crate::filter::FilterFunctional;
use crate::ground::{GroundSpace, Point};
use crate::linalg;
use crate::measure::{Measure, MeasureClass};
use crate::operator::{HVerdict, MarkovOperator};
use crate::rat::Q;

/// A basis element of the representable span.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Generator {
    Atom(Point),
    Filter(FilterFunctional),
}

impl Generator {
    pub fn describe(&self) -> String {
        match self {
            Generator::Atom(p) => format!("delta({p})"),
            Generator::Filter(f) => format!("filter({})", f.id()),
        }
    }

    fn to_measure(&self, ground: &GroundSpace) -> Result<Measure, CoreError> {
        match self {
            Generator::Atom(p) => Measure::dirac(ground.clone(), p.clone()),
            Generator::Filter(f) => Measure::pure_filter(ground.clone(), f.clone()),
        }
    }

    /// Generators spanning a measure's representation.
    pub fn from_measure(measure: &Measure) -> Vec<Generator> {
        let mut out: Vec<Generator> = measure
            .atomic()
            .weights()
            .keys()
            .map(|p| Generator::Atom(p.clone()))
            .collect();
        out.extend(
            measure
                .pfa()
                .terms()
                .keys()
                .map(|f| Generator::Filter(f.clone())),
        );
        out
    }
}

/// A finite generator set closed under the operator, with the exact action
/// matrix `M[i][j]` = coefficient of generator `i` in `A(generator j)`.
#[derive(Debug, Clone)]
pub struct OrbitClosure {
    ground: GroundSpace,
    generators: Vec<Generator>,
    matrix: Vec<Vec<Q>>,
    cap: usize,
}

impl OrbitClosure {
    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn matrix(&self) -> &[Vec<Q>] {
        &self.matrix
    }

    pub fn ground(&self) -> &GroundSpace {
        &self.ground
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Reassembles a coordinate vector into a measure.
    pub fn measure_from_coords(&self, coords: &[Q]) -> Result<Measure, CoreError> {
        let mut out = Measure::zero(self.ground.clone());
        for (generator, coef) in self.generators.iter().zip(coords) {
            if coef.is_zero() {
                continue;
            }
            let g = generator.to_measure(&self.ground)?;
            out = Measure::combine(&Q::one(), &out, coef, &g)?;
        }
        Ok(out)
    }
}

/// Grows the smallest operator-invariant generator set containing the seeds.
/// Fails with `ClosureDiverged` once the basis would exceed `cap` (e.g. for
/// translation kernels on the integers, whose orbits never close).
pub fn orbit_closure(
    operator: &MarkovOperator,
    seeds: &[Generator],
    cap: usize,
) -> Result<OrbitClosure, CoreError> {
    if cap == 0 {
        return Err(CoreError::Invalid("closure cap must be at least 1".into()));
    }
    let ground = operator.kernel().ground().clone();
    let mut generators: Vec<Generator> = Vec::new();
    for seed in seeds {
        if !generators.contains(seed) {
            generators.push(seed.clone());
        }
    }
    if generators.is_empty() {
        return Err(CoreError::Invalid("closure needs at least one seed".into()));
    }
    let mut images: Vec<Measure> = Vec::new();
    let mut cursor = 0;
    while cursor < generators.len() {
        if generators.len() > cap {
            return Err(CoreError::ClosureDiverged { cap });
        }
        let image = operator.apply(&generators[cursor].to_measure(&ground)?)?;
        for discovered in Generator::from_measure(&image) {
            if !generators.contains(&discovered) {
                generators.push(discovered);
                if generators.len() > cap {
                    return Err(CoreError::ClosureDiverged { cap });
                }
            }
        }
        images.push(image);
        cursor += 1;
    }
    let n = generators.len();
    let mut matrix = vec![vec![Q::zero(); n]; n];
    for (j, image) in images.iter().enumerate() {
        for (point, weight) in image.atomic().weights() {
            let i = index_of(&generators, &Generator::Atom(point.clone()))?;
            matrix[i][j] = weight.clone();
        }
        for (filter, coef) in image.pfa().terms() {
            let i = index_of(&generators, &Generator::Filter(filter.clone()))?;
            matrix[i][j] = coef.clone();
        }
    }
    Ok(OrbitClosure {
        ground,
        generators,
        matrix,
        cap,
    })
}

fn index_of(generators: &[Generator], wanted: &Generator) -> Result<usize, CoreError> {
    generators
        .iter()
        .position(|g| g == wanted)
        .ok_or_else(|| CoreError::Invalid("closure image left the generator span".into()))
}

/// How the fixed-point solve concluded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    /// A single probability solution.
    Unique,
    /// The extreme points of the solution segment (nullspace dimension two).
    Extremes,
    /// Nullspace dimension above two: the basis is reported without vertex
    /// enumeration.
    BasisOnly { dimension: usize },
    /// The fixed-point space meets the probability simplex only outside the
    /// representable cone (or is trivial).
    NoRepresentableSolution,
}

impl SolveOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            SolveOutcome::Unique => "unique",
            SolveOutcome::Extremes => "extremes",
            SolveOutcome::BasisOnly { .. } => "basis-only",
            SolveOutcome::NoRepresentableSolution => "no-representable-solution",
        }
    }
}

/// One invariant probability measure together with its classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantSolution {
    pub measure: Measure,
    pub class: MeasureClass,
    pub coords: Vec<Q>,
}

/// Solutions of `mu = A mu` over a closure, with the invariant-set verdicts.
#[derive(Debug, Clone)]
pub struct InvariantReport {
    pub outcome: SolveOutcome,
    pub solutions: Vec<InvariantSolution>,
    pub nullspace_dimension: usize,
    /// Raw nullspace basis vectors over the generators.
    pub nullspace_basis: Vec<Vec<Q>>,
    /// Is the invariant set of probability measures nonempty (on the span)?
    pub delta_ba_nonempty: bool,
    /// Is the countably additive invariant set empty (on the span)?
    pub delta_ca_empty: bool,
    /// Does a purely finitely additive invariant measure exist (on the span)?
    pub delta_pfa_nonempty: bool,
}

/// Solves `mu = A mu` exactly on the closure: rational nullspace of `M - I`
/// intersected with the probability simplex of the generator cone.
pub fn solve_invariant(closure: &OrbitClosure) -> Result<InvariantReport, CoreError> {
    let system = linalg::subtract_identity(closure.matrix());
    let basis = linalg::nullspace(&system);
    let dimension = basis.len();
    let mut solutions: Vec<InvariantSolution> = Vec::new();
    let mut outcome = match dimension {
        0 => SolveOutcome::NoRepresentableSolution,
        1 => {
            if let Some(coords) = normalize_one_signed(&basis[0]) {
                push_solution(closure, &mut solutions, coords)?;
                SolveOutcome::Unique
            } else {
                SolveOutcome::NoRepresentableSolution
            }
        }
        2 => {
            let extremes = segment_extremes(&basis[0], &basis[1]);
            for coords in extremes {
                push_solution(closure, &mut solutions, coords)?;
            }
            if solutions.is_empty() {
                SolveOutcome::NoRepresentableSolution
            } else {
                SolveOutcome::Extremes
            }
        }
        d => SolveOutcome::BasisOnly { dimension: d },
    };
    if matches!(outcome, SolveOutcome::Extremes) && solutions.len() == 1 {
        outcome = SolveOutcome::Unique;
    }
    let delta_ba_nonempty = !solutions.is_empty();
    let delta_ca_empty = !solutions
        .iter()
        .any(|s| s.class == MeasureClass::CountablyAdditive);
    let delta_pfa_nonempty = solutions
        .iter()
        .any(|s| s.class == MeasureClass::PurelyFinitelyAdditive);
    Ok(InvariantReport {
        outcome,
        solutions,
        nullspace_dimension: dimension,
        nullspace_basis: basis,
        delta_ba_nonempty,
        delta_ca_empty,
        delta_pfa_nonempty,
    })
}

fn push_solution(
    closure: &OrbitClosure,
    solutions: &mut Vec<InvariantSolution>,
    coords: Vec<Q>,
) -> Result<(), CoreError> {
    if solutions.iter().any(|s| s.coords == coords) {
        return Ok(());
    }
    let measure = closure.measure_from_coords(&coords)?;
    let class = measure.classify();
    solutions.push(InvariantSolution {
        measure,
        class,
        coords,
    });
    Ok(())
}

/// Scales a one-signed vector to total one; every generator carries unit
/// mass, so the coordinate sum is the total mass.
fn normalize_one_signed(vector: &[Q]) -> Option<Vec<Q>> {
    let total: Q = vector.iter().fold(Q::zero(), |acc, v| acc + v);
    if total.is_zero() {
        return None;
    }
    let scaled: Vec<Q> = vector.iter().map(|v| v / &total).collect();
    scaled.iter().all(|v| !v.is_negative()).then_some(scaled)
}

/// Extreme points of `{a v1 + b v2 : coords >= 0, coord sum = 1}`: the mass
/// constraint leaves a line, clipped by the coordinate signs to a segment.
fn segment_extremes(v1: &[Q], v2: &[Q]) -> Vec<Vec<Q>> {
    let s1: Q = v1.iter().fold(Q::zero(), |acc, v| acc + v);
    let s2: Q = v2.iter().fold(Q::zero(), |acc, v| acc + v);
    // pick a combination with coordinate sum 1: p = a v1 + b v2
    let (point, direction): (Vec<Q>, Vec<Q>) = if !s1.is_zero() {
        let p: Vec<Q> = v1.iter().map(|v| v / &s1).collect();
        // direction with coordinate sum 0
        let d: Vec<Q> = v2
            .iter()
            .zip(v1)
            .map(|(b, a)| b - &(&s2 / &s1) * a)
            .collect();
        (p, d)
    } else if !s2.is_zero() {
        let p: Vec<Q> = v2.iter().map(|v| v / &s2).collect();
        let d = v1.to_vec();
        (p, d)
    } else {
        return Vec::new();
    };
    if direction.iter().all(|d| d.is_zero()) {
        return if point.iter().all(|v| !v.is_negative()) {
            vec![point]
        } else {
            Vec::new()
        };
    }
    // p + t d >= 0 coordinatewise gives a rational interval in t
    let mut t_min: Option<Q> = None;
    let mut t_max: Option<Q> = None;
    for (p, d) in point.iter().zip(&direction) {
        if d.is_zero() {
            if p.is_negative() {
                return Vec::new();
            }
            continue;
        }
        let bound = -(p / d);
        if d.is_positive() {
            // t >= bound
            if t_min.as_ref().is_none_or(|m| bound > *m) {
                t_min = Some(bound);
            }
        } else {
            // t <= bound
            if t_max.as_ref().is_none_or(|m| bound < *m) {
                t_max = Some(bound);
            }
        }
    }
    let (lo, hi) = match (t_min, t_max) {
        (Some(lo), Some(hi)) => (lo, hi),
        // the segment is unbounded in t, which cannot happen with a
        // nontrivial nonnegativity clip; treat as empty
        _ => return Vec::new(),
    };
    if lo > hi {
        return Vec::new();
    }
    let mut out = Vec::new();
    for t in [lo.clone(), hi.clone()] {
        let coords: Vec<Q> = point
            .iter()
            .zip(&direction)
            .map(|(p, d)| p + &t * d)
            .collect();
        if coords.iter().all(|v| !v.is_negative()) && !out.contains(&coords) {
            out.push(coords);
        }
    }
    out
}

/// Structural verdicts about the solutions of a chain.
#[derive(Debug, Clone)]
pub struct ClassificationVerdicts {
    /// For chains whose every row is purely pfa: all solutions are pfa and
    /// no countably additive invariant exists on the span.
    pub pure_pfa_chain: Option<bool>,
    /// For nondegenerate combined chains: no solution is purely atomic.
    pub combined_no_ca_solution: Option<bool>,
    /// For each mixed solution: neither component is fixed by the operator.
    pub component_checks: Vec<ComponentCheck>,
    pub all_pass: bool,
}

/// Exact non-invariance witness for the components of one mixed solution.
#[derive(Debug, Clone)]
pub struct ComponentCheck {
    pub solution_index: usize,
    pub ca_moved: bool,
    pub pfa_moved: bool,
}

/// Checks the structural facts the solutions must satisfy: purely pfa chains
/// only have pfa invariants; nondegenerate combined chains have no countably
/// additive invariant; components of a mixed invariant are never invariant
/// themselves.
pub fn classify_invariants(
    report: &InvariantReport,
    operator: &MarkovOperator,
) -> Result<ClassificationVerdicts, CoreError> {
    let mut all_pass = true;

    let pure_pfa_chain = if operator.kernel().rows_purely_pfa() {
        let ok = report
            .solutions
            .iter()
            .all(|s| s.class == MeasureClass::PurelyFinitelyAdditive)
            && report.delta_ca_empty;
        all_pass &= ok;
        Some(ok)
    } else {
        None
    };

    let combined_no_ca_solution = match operator.combined_masses() {
        Some((q1, q2)) if q1.is_positive() && q2.is_positive() => {
            let ok = report
                .solutions
                .iter()
                .all(|s| s.class != MeasureClass::CountablyAdditive);
            all_pass &= ok;
            Some(ok)
        }
        _ => None,
    };

    let mut component_checks = Vec::new();
    for (solution_index, solution) in report.solutions.iter().enumerate() {
        if solution.class != MeasureClass::Mixed {
            continue;
        }
        let (ca, pfa) = solution.measure.yosida_hewitt();
        let ca_moved = operator.apply(&ca)? != ca;
        let pfa_moved = operator.apply(&pfa)? != pfa;
        all_pass &= ca_moved && pfa_moved;
        component_checks.push(ComponentCheck {
            solution_index,
            ca_moved,
            pfa_moved,
        });
    }

    Ok(ClassificationVerdicts {
        pure_pfa_chain,
        combined_no_ca_solution,
        component_checks,
        all_pass,
    })
}

/// Consequences of the component-range conditions for invariant measures.
#[derive(Debug, Clone)]
pub struct HCorollaryVerdicts {
    /// Checked only for nondegenerate combined chains with a passing check.
    pub applicable: bool,
    /// Under the ca-range condition: every solution splits its norm as
    /// exactly `(q1, q2)`.
    pub h1_norm_split: Option<bool>,
    /// Under the pfa-range condition: every solution is purely pfa.
    pub h2_all_pfa: Option<bool>,
    pub all_pass: bool,
}

/// Verifies the invariant-measure consequences of the range conditions,
/// exactly: under the ca-range condition the components of every invariant
/// measure carry norms `q1` and `q2`; under the pfa-range condition every
/// invariant measure is purely finitely additive.
pub fn h_condition_corollaries(
    operator: &MarkovOperator,
    report: &InvariantReport,
) -> Result<HCorollaryVerdicts, CoreError> {
    let Some((q1, q2)) = operator.combined_masses().cloned() else {
        return Ok(HCorollaryVerdicts {
            applicable: false,
            h1_norm_split: None,
            h2_all_pfa: None,
            all_pass: true,
        });
    };
    if !(q1.is_positive() && q2.is_positive()) {
        return Ok(HCorollaryVerdicts {
            applicable: false,
            h1_norm_split: None,
            h2_all_pfa: None,
            all_pass: true,
        });
    }
    let h1 = operator.check_h1()?;
    let h2 = operator.check_h2()?;
    let mut all_pass = true;
    let h1_norm_split = if matches!(h1, HVerdict::HoldsOnBasis) {
        let ok = report.solutions.iter().all(|s| {
            let (ca, pfa) = s.measure.yosida_hewitt();
            ca.total_mass() == q1 && pfa.total_mass() == q2
        });
        all_pass &= ok;
        Some(ok)
    } else {
        None
    };
    let h2_all_pfa = if matches!(h2, HVerdict::HoldsOnBasis) {
        let ok = report
            .solutions
            .iter()
            .all(|s| s.class == MeasureClass::PurelyFinitelyAdditive);
        all_pass &= ok;
        Some(ok)
    } else {
        None
    };
    Ok(HCorollaryVerdicts {
        applicable: h1_norm_split.is_some() || h2_all_pfa.is_some(),
        h1_norm_split,
        h2_all_pfa,
        all_pass,
    })
}
