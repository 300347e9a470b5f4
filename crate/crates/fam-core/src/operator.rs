//! The Markov operator of a kernel, its countably additive and purely
//! finitely additive components, iteration with norm tracing, and the
//! component-range condition checks.

use num::One;

use crate::error::CoreError;
use crate::filter::FilterFunctional;
use crate::kernel::{CombinedKernel, Kernel, KernelKind};
use crate::measure::{Measure, MeasureClass};
use crate::rat::{decimal_12, Q};
use serde_json::{json, Value};

/// Which component of the operator to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Ca,
    Pfa,
}

/// Verdict of a component-range check over the registered filter basis.
///
/// The conditions quantify over the whole pfa cone; the representable cone
/// is spanned by the registered basis, so a passing verdict is honestly
/// named "holds-on-basis".
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HVerdict {
    HoldsOnBasis,
    Fails {
        witness_filter: String,
        image: Measure,
    },
    Undecided {
        filter: String,
    },
}

impl HVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            HVerdict::HoldsOnBasis => "holds-on-basis",
            HVerdict::Fails { .. } => "fails",
            HVerdict::Undecided { .. } => "undecided",
        }
    }

    pub fn holds(&self) -> bool {
        matches!(self, HVerdict::HoldsOnBasis)
    }
}

/// Integral operator `A mu(E) = integral P(x,E) mu(dx)` together with the
/// cached kernel decomposition `A = A_ca + A_pfa` and the filter basis the
/// range checks quantify over.
#[derive(Debug, Clone)]
pub struct MarkovOperator {
    kernel: Kernel,
    ca: Kernel,
    pfa: Kernel,
    basis: Vec<FilterFunctional>,
    combined_masses: Option<(Q, Q)>,
}

impl MarkovOperator {
    /// Wraps a kernel. `extra_filters` extends the registered basis beyond
    /// the filters appearing in the kernel rows (e.g. those declared by a
    /// scenario for initial measures).
    pub fn new(kernel: Kernel, extra_filters: &[FilterFunctional]) -> Result<Self, CoreError> {
        let (ca, pfa) = kernel.decompose()?;
        let mut basis = kernel.filters();
        for f in extra_filters {
            f.validate_for(kernel.ground())?;
            if !basis.iter().any(|g| g.id() == f.id()) {
                basis.push(f.clone());
            }
        }
        basis.sort();
        crate::filter::check_distinct(&basis)?;
        let combined_masses = detect_combined(&ca, &pfa);
        Ok(MarkovOperator {
            kernel,
            ca,
            pfa,
            basis,
            combined_masses,
        })
    }

    pub fn from_combined(
        combined: &CombinedKernel,
        extra_filters: &[FilterFunctional],
    ) -> Result<Self, CoreError> {
        let kernel = combined.to_kernel()?;
        let mut op = MarkovOperator::new(kernel, extra_filters)?;
        op.combined_masses = Some((combined.q1().clone(), combined.q2().clone()));
        Ok(op)
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn ca_kernel(&self) -> &Kernel {
        &self.ca
    }

    pub fn pfa_kernel(&self) -> &Kernel {
        &self.pfa
    }

    pub fn basis(&self) -> &[FilterFunctional] {
        &self.basis
    }

    /// Component row masses `(q1, q2)` when they are constant across pieces.
    pub fn combined_masses(&self) -> Option<&(Q, Q)> {
        self.combined_masses.as_ref()
    }

    pub fn apply(&self, mu: &Measure) -> Result<Measure, CoreError> {
        self.kernel.integrate(mu)
    }

    pub fn apply_component(
        &self,
        component: Component,
        mu: &Measure,
    ) -> Result<Measure, CoreError> {
        match component {
            Component::Ca => self.ca.integrate(mu),
            Component::Pfa => self.pfa.integrate(mu),
        }
    }

    /// Iterates `mu_{n+1} = A mu_n` from a probability measure and records
    /// the exact component norms of each iterate. Row `n` always decomposes
    /// the n-th iterate itself, never an iterated component. The first
    /// `retain` iterates are kept as full measures.
    pub fn iterate(
        &self,
        initial: &Measure,
        n_max: usize,
        retain: usize,
    ) -> Result<NormTrace, CoreError> {
        if self.kernel.kind() != KernelKind::Markov {
            return Err(CoreError::NotMarkov {
                detail: "iteration requires a markov kernel".into(),
            });
        }
        if !initial.is_probability() {
            return Err(CoreError::NotProbability {
                mass: initial.total_mass().to_string(),
            });
        }
        let mut rows = Vec::with_capacity(n_max + 1);
        let mut retained = Vec::new();
        let mut current = initial.clone();
        for n in 1..=(n_max + 1) {
            let (ca, pfa) = current.yosida_hewitt();
            rows.push(TraceRow {
                n,
                ca_norm: ca.norm()?,
                pfa_norm: pfa.norm()?,
            });
            if n <= retain {
                retained.push(current.clone());
            }
            if n <= n_max {
                current = self.apply(&current)?;
            }
        }
        Ok(NormTrace {
            initial: initial.clone(),
            rows,
            retained,
        })
    }

    /// Does `A_ca` send every basis functional to a countably additive
    /// measure? The zero image counts as both types.
    pub fn check_h1(&self) -> Result<HVerdict, CoreError> {
        self.check_component_range(|class| {
            matches!(
                class,
                MeasureClass::CountablyAdditive | MeasureClass::ZeroBothTypes
            )
        })
    }

    /// Does `A_ca` send every basis functional to a purely finitely additive
    /// measure?
    pub fn check_h2(&self) -> Result<HVerdict, CoreError> {
        self.check_component_range(|class| {
            matches!(
                class,
                MeasureClass::PurelyFinitelyAdditive | MeasureClass::ZeroBothTypes
            )
        })
    }

    fn check_component_range(
        &self,
        accepts: impl Fn(MeasureClass) -> bool,
    ) -> Result<HVerdict, CoreError> {
        for filter in &self.basis {
            let seed = Measure::pure_filter(self.kernel.ground().clone(), filter.clone())?;
            let image = match self.ca.integrate(&seed) {
                Ok(image) => image,
                Err(CoreError::UndecidedLimit { filter, .. }) => {
                    return Ok(HVerdict::Undecided { filter })
                }
                Err(other) => return Err(other),
            };
            if !accepts(image.classify()) {
                return Ok(HVerdict::Fails {
                    witness_filter: filter.id().to_string(),
                    image,
                });
            }
        }
        Ok(HVerdict::HoldsOnBasis)
    }

    /// Verifies the superposition range inclusions on a suite of measures:
    /// `A_ca A_ca` keeps countably additive measures countably additive,
    /// `A_pfa A_pfa` and `A_pfa A_ca` send everything purely finitely
    /// additive. Undecided instances are skipped with a note.
    pub fn range_inclusions(&self, suite: &[Measure]) -> Result<RangeReport, CoreError> {
        let mut report = RangeReport::default();
        for (index, mu) in suite.iter().enumerate() {
            let mut run =
                |name: &str, outcome: Result<Measure, CoreError>, want_pfa: bool| match outcome {
                    Ok(image) => {
                        let ok = if want_pfa {
                            image.atomic().is_zero()
                        } else {
                            image.pfa().is_zero()
                        };
                        if ok {
                            report.passes += 1;
                        } else {
                            report.violations.push(RangeViolation {
                                index,
                                check: name.to_string(),
                                image,
                            });
                        }
                        Ok(())
                    }
                    Err(CoreError::UndecidedLimit { filter, piece }) => {
                        report.skipped.push(RangeSkip {
                            index,
                            check: name.to_string(),
                            filter,
                            piece,
                        });
                        Ok(())
                    }
                    Err(other) => Err(other),
                };

            if mu.pfa().is_zero() {
                let ca_ca = self
                    .apply_component(Component::Ca, mu)
                    .and_then(|m| self.apply_component(Component::Ca, &m));
                run("ca-after-ca-preserves-ca", ca_ca, false)?;
            }
            let pfa_pfa = self
                .apply_component(Component::Pfa, mu)
                .and_then(|m| self.apply_component(Component::Pfa, &m));
            run("pfa-after-pfa-lands-in-pfa", pfa_pfa, true)?;
            let pfa_ca = self
                .apply_component(Component::Ca, mu)
                .and_then(|m| self.apply_component(Component::Pfa, &m));
            run("pfa-after-ca-lands-in-pfa", pfa_ca, true)?;
        }
        Ok(report)
    }
}

fn detect_combined(ca: &Kernel, pfa: &Kernel) -> Option<(Q, Q)> {
    let q1 = constant_piece_mass(ca)?;
    let q2 = constant_piece_mass(pfa)?;
    Some((q1, q2))
}

fn constant_piece_mass(kernel: &Kernel) -> Option<Q> {
    let masses = kernel.piece_masses();
    let (_, first) = masses.first()?;
    masses
        .iter()
        .all(|(_, m)| m == first)
        .then(|| first.clone())
}

/// One row of a norm trace: the component norms of the n-th iterate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRow {
    pub n: usize,
    pub ca_norm: Q,
    pub pfa_norm: Q,
}

/// Per-iteration record of the component norms of a Markov sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormTrace {
    pub initial: Measure,
    pub rows: Vec<TraceRow>,
    /// The first few iterates as full measures, for inspection.
    pub retained: Vec<Measure>,
}

impl NormTrace {
    /// CSV with exact and 12-place decimal norm columns.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,ca_norm,pfa_norm,ca_norm_decimal,pfa_norm_decimal\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                row.n,
                row.ca_norm,
                row.pfa_norm,
                decimal_12(&row.ca_norm),
                decimal_12(&row.pfa_norm),
            ));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                json!({
                    "n": row.n,
                    "ca_norm": row.ca_norm.to_string(),
                    "pfa_norm": row.pfa_norm.to_string(),
                    "ca_norm_decimal": decimal_12(&row.ca_norm),
                    "pfa_norm_decimal": decimal_12(&row.pfa_norm),
                })
            })
            .collect();
        json!({ "rows": rows })
    }

    /// The probability invariant: every row's norms add to one.
    pub fn rows_sum_to_one(&self) -> bool {
        self.rows
            .iter()
            .all(|row| &row.ca_norm + &row.pfa_norm == Q::one())
    }
}

/// Outcome of the range-inclusion suite.
#[derive(Debug, Clone, Default)]
pub struct RangeReport {
    pub passes: usize,
    pub violations: Vec<RangeViolation>,
    pub skipped: Vec<RangeSkip>,
}

#[derive(Debug, Clone)]
pub struct RangeViolation {
    pub index: usize,
    pub check: String,
    pub image: Measure,
}

#[derive(Debug, Clone)]
pub struct RangeSkip {
    pub index: usize,
    pub check: String,
    pub filter: String,
    pub piece: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filter::TailFamily;
    use crate::ground::{GroundSpace, Point};
    use crate::kernel::{KernelRule, RuleValue};
    use crate::rat::{q, q_pow, qi};
    use crate::set::SetExpr;

    fn unit() -> GroundSpace {
        GroundSpace::unit_interval("X")
    }

    fn eta(g: &GroundSpace) -> FilterFunctional {
        FilterFunctional::new("eta0plus", TailFamily::LeftOfPoint { point: q(0, 1) }, g).unwrap()
    }

    fn constant_target_operator() -> MarkovOperator {
        let g = unit();
        let half_eta = Measure::pure_filter(g.clone(), eta(&g))
            .unwrap()
            .scale(&q(1, 2));
        let kernel = Kernel::new(
            g,
            vec![
                KernelRule::new(
                    SetExpr::Full,
                    RuleValue::PointTarget {
                        target: Point::rational(0, 1),
                        coef: q(1, 2),
                    },
                ),
                KernelRule::new(SetExpr::Full, RuleValue::Constant(half_eta)),
            ],
        )
        .unwrap();
        MarkovOperator::new(kernel, &[]).unwrap()
    }

    fn diagonal_operator() -> MarkovOperator {
        let g = unit();
        let half_eta = Measure::pure_filter(g.clone(), eta(&g))
            .unwrap()
            .scale(&q(1, 2));
        let kernel = Kernel::new(
            g,
            vec![
                KernelRule::new(SetExpr::Full, RuleValue::Diagonal { coef: q(1, 2) }),
                KernelRule::new(SetExpr::Full, RuleValue::Constant(half_eta)),
            ],
        )
        .unwrap();
        MarkovOperator::new(kernel, &[]).unwrap()
    }

    fn fixed_point(g: &GroundSpace) -> Measure {
        Measure::from_parts(
            g.clone(),
            [(Point::rational(0, 1), q(1, 2))],
            [(eta(g), q(1, 2))],
        )
        .unwrap()
    }

    #[test]
    fn constant_target_chain_maps_everything_to_its_fixed_point() {
        let op = constant_target_operator();
        let g = unit();
        let expected = fixed_point(&g);
        let inputs = [
            Measure::dirac(g.clone(), Point::rational(1, 1)).unwrap(),
            Measure::dirac(g.clone(), Point::rational(1, 3)).unwrap(),
            Measure::pure_filter(g.clone(), eta(&g)).unwrap(),
            Measure::from_parts(
                g.clone(),
                [(Point::rational(1, 4), q(1, 3))],
                [(eta(&g), q(2, 3))],
            )
            .unwrap(),
        ];
        for mu in inputs {
            assert_eq!(op.apply(&mu).unwrap(), expected);
        }
        assert_eq!(op.apply(&expected).unwrap(), expected);
    }

    #[test]
    fn diagonal_chain_acts_affinely() {
        let op = diagonal_operator();
        let g = unit();
        let mu = Measure::dirac(g.clone(), Point::rational(1, 3)).unwrap();
        let image = op.apply(&mu).unwrap();
        let expected = Measure::from_parts(
            g.clone(),
            [(Point::rational(1, 3), q(1, 2))],
            [(eta(&g), q(1, 2))],
        )
        .unwrap();
        assert_eq!(image, expected);
        // eta is the fixed point
        let pure = Measure::pure_filter(g, eta(&unit())).unwrap();
        assert_eq!(op.apply(&pure).unwrap(), pure);
    }

    #[test]
    fn components_add_up_to_the_operator() {
        let op = diagonal_operator();
        let g = unit();
        let mu = Measure::from_parts(
            g.clone(),
            [(Point::rational(1, 5), q(2, 5))],
            [(eta(&g), q(3, 5))],
        )
        .unwrap();
        let whole = op.apply(&mu).unwrap();
        let ca = op.apply_component(Component::Ca, &mu).unwrap();
        let pfa = op.apply_component(Component::Pfa, &mu).unwrap();
        assert_eq!(ca.add(&pfa).unwrap(), whole);
        // atomic measures stay atomic under the ca component
        let atom = Measure::dirac(g, Point::rational(1, 7)).unwrap();
        assert!(op
            .apply_component(Component::Ca, &atom)
            .unwrap()
            .pfa()
            .is_zero());
    }

    #[test]
    fn ca_component_of_constant_target_chain_sends_eta_to_the_atom() {
        let op = constant_target_operator();
        let g = unit();
        let image = op
            .apply_component(
                Component::Ca,
                &Measure::pure_filter(g.clone(), eta(&g)).unwrap(),
            )
            .unwrap();
        let expected = Measure::from_atoms(g, [(Point::rational(0, 1), q(1, 2))]).unwrap();
        assert_eq!(image, expected);
    }

    #[test]
    fn linearity_and_positivity_and_norm_preservation() {
        let op = diagonal_operator();
        let g = unit();
        let mu = Measure::dirac(g.clone(), Point::rational(1, 3)).unwrap();
        let nu = Measure::pure_filter(g.clone(), eta(&g)).unwrap();
        let a = q(2, 7);
        let b = q(5, 7);
        let lhs = op
            .apply(&Measure::combine(&a, &mu, &b, &nu).unwrap())
            .unwrap();
        let rhs =
            Measure::combine(&a, &op.apply(&mu).unwrap(), &b, &op.apply(&nu).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert!(lhs.is_nonnegative());
        assert_eq!(lhs.norm().unwrap(), qi(1));
    }

    #[test]
    fn h_checks_tell_the_two_golden_chains_apart() {
        let constant = constant_target_operator();
        assert!(constant.check_h1().unwrap().holds());
        match constant.check_h2().unwrap() {
            HVerdict::Fails {
                witness_filter,
                image,
            } => {
                assert_eq!(witness_filter, "eta0plus");
                assert!(image.pfa().is_zero());
            }
            other => panic!("expected failure, got {other:?}"),
        }

        let diagonal = diagonal_operator();
        assert!(diagonal.check_h2().unwrap().holds());
        match diagonal.check_h1().unwrap() {
            HVerdict::Fails {
                witness_filter,
                image,
            } => {
                assert_eq!(witness_filter, "eta0plus");
                assert!(image.atomic().is_zero());
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn mixed_ca_component_fails_both_checks() {
        // ca component sends eta to an atom plus a filter term
        let g = unit();
        let quarter_eta = Measure::pure_filter(g.clone(), eta(&g))
            .unwrap()
            .scale(&q(1, 4));
        let kernel = Kernel::new(
            g.clone(),
            vec![
                KernelRule::new(
                    SetExpr::Full,
                    RuleValue::PointTarget {
                        target: Point::rational(0, 1),
                        coef: q(1, 4),
                    },
                ),
                KernelRule::new(SetExpr::Full, RuleValue::Diagonal { coef: q(1, 4) }),
                KernelRule::new(
                    SetExpr::Full,
                    RuleValue::Constant(quarter_eta.scale(&qi(2))),
                ),
            ],
        )
        .unwrap();
        let op = MarkovOperator::new(kernel, &[]).unwrap();
        let image = op
            .apply_component(
                Component::Ca,
                &Measure::pure_filter(g, eta(&unit())).unwrap(),
            )
            .unwrap();
        assert_eq!(image.classify(), MeasureClass::Mixed);
        assert!(!op.check_h1().unwrap().holds());
        assert!(!op.check_h2().unwrap().holds());
    }

    #[test]
    fn degenerate_all_pfa_chain_holds_vacuously() {
        let g = unit();
        let kernel = Kernel::new(
            g.clone(),
            vec![KernelRule::new(
                SetExpr::Full,
                RuleValue::Constant(Measure::pure_filter(g, eta(&unit())).unwrap()),
            )],
        )
        .unwrap();
        let op = MarkovOperator::new(kernel, &[]).unwrap();
        assert_eq!(op.combined_masses(), Some(&(qi(0), qi(1))));
        assert!(op.check_h1().unwrap().holds());
        assert!(op.check_h2().unwrap().holds());
    }

    #[test]
    fn trace_of_constant_target_chain_is_flat_from_step_two() {
        let op = constant_target_operator();
        let g = unit();
        let initial = Measure::dirac(g, Point::rational(1, 1)).unwrap();
        let trace = op.iterate(&initial, 10, 3).unwrap();
        assert_eq!(trace.rows.len(), 11);
        assert!(trace.rows_sum_to_one());
        assert_eq!(trace.rows[0].ca_norm, qi(1));
        for row in &trace.rows[1..] {
            assert_eq!(row.ca_norm, q(1, 2));
            assert_eq!(row.pfa_norm, q(1, 2));
        }
        assert_eq!(trace.retained.len(), 3);
    }

    #[test]
    fn trace_of_diagonal_chain_decays_geometrically() {
        let op = diagonal_operator();
        let g = unit();
        let initial = Measure::dirac(g, Point::rational(1, 2)).unwrap();
        let trace = op.iterate(&initial, 10, 0).unwrap();
        for (i, row) in trace.rows.iter().enumerate() {
            assert_eq!(row.ca_norm, q_pow(&q(1, 2), i));
        }
    }

    #[test]
    fn trace_of_a_fixed_point_is_constant() {
        let op = constant_target_operator();
        let g = unit();
        let trace = op.iterate(&fixed_point(&g), 6, 0).unwrap();
        for row in &trace.rows {
            assert_eq!(row.ca_norm, q(1, 2));
        }
    }

    #[test]
    fn iterate_rejects_non_probability_seeds() {
        let op = constant_target_operator();
        let g = unit();
        let heavy = Measure::dirac(g, Point::rational(0, 1))
            .unwrap()
            .scale(&qi(2));
        assert!(matches!(
            op.iterate(&heavy, 3, 0),
            Err(CoreError::NotProbability { .. })
        ));
    }

    #[test]
    fn pfa_component_images_are_purely_finitely_additive() {
        let g = unit();
        let inputs = [
            Measure::dirac(g.clone(), Point::rational(1, 4)).unwrap(),
            Measure::pure_filter(g.clone(), eta(&g)).unwrap(),
            fixed_point(&g),
        ];
        for op in [constant_target_operator(), diagonal_operator()] {
            for mu in &inputs {
                let image = op.apply_component(Component::Pfa, mu).unwrap();
                assert!(image.is_pfa().unwrap());
            }
        }
    }

    #[test]
    fn atomic_kernels_have_vacuous_pfa_inclusions() {
        let g = unit();
        let kernel = Kernel::new(
            g.clone(),
            vec![KernelRule::new(
                SetExpr::Full,
                RuleValue::PointTarget {
                    target: Point::rational(1, 2),
                    coef: qi(1),
                },
            )],
        )
        .unwrap();
        let op = MarkovOperator::new(kernel, &[eta(&g)]).unwrap();
        let suite = vec![
            Measure::dirac(g.clone(), Point::rational(0, 1)).unwrap(),
            Measure::pure_filter(g, eta(&unit())).unwrap(),
        ];
        for mu in &suite {
            // the pfa component is the zero operator here
            assert!(op.apply_component(Component::Pfa, mu).unwrap().is_zero());
        }
        let report = op.range_inclusions(&suite).unwrap();
        assert!(report.violations.is_empty());
        assert!(report.skipped.is_empty());
    }

    #[test]
    fn range_inclusions_hold_on_the_golden_chains() {
        let g = unit();
        for op in [constant_target_operator(), diagonal_operator()] {
            let suite = vec![
                Measure::dirac(g.clone(), Point::rational(1, 3)).unwrap(),
                Measure::pure_filter(g.clone(), eta(&g)).unwrap(),
                fixed_point(&g),
            ];
            let report = op.range_inclusions(&suite).unwrap();
            assert!(report.violations.is_empty());
            assert!(report.skipped.is_empty());
            assert!(report.passes > 0);
        }
    }

    /// Contrast case for combined chains: when the whole kernel is countably
    /// additive, both components of an invariant measure are invariant
    /// themselves.
    #[test]
    fn atomic_kernel_fixes_the_components_of_mixed_invariants() {
        let g = unit();
        let origin = SetExpr::singleton(Point::rational(0, 1));
        let rest = origin.clone().complement();
        let kernel = Kernel::new(
            g.clone(),
            vec![
                KernelRule::new(
                    origin,
                    RuleValue::PointTarget {
                        target: Point::rational(0, 1),
                        coef: qi(1),
                    },
                ),
                KernelRule::new(rest, RuleValue::Diagonal { coef: qi(1) }),
            ],
        )
        .unwrap();
        assert!(kernel.rows_purely_atomic());
        let op = MarkovOperator::new(kernel, &[eta(&g)]).unwrap();
        let mixed = fixed_point(&g);
        assert_eq!(op.apply(&mixed).unwrap(), mixed);
        let (ca, pfa) = mixed.yosida_hewitt();
        assert_eq!(op.apply(&ca).unwrap(), ca);
        assert_eq!(op.apply(&pfa).unwrap(), pfa);
    }

    #[test]
    fn undecided_limits_propagate_through_iteration() {
        let z = GroundSpace::integers("Z");
        let inf = FilterFunctional::new("etaInf", TailFamily::GeqThreshold, &z).unwrap();
        let kernel = Kernel::new(
            z.clone(),
            vec![
                KernelRule::new(
                    SetExpr::residue(2, 0),
                    RuleValue::PointTarget {
                        target: Point::integer(0),
                        coef: qi(1),
                    },
                ),
                KernelRule::new(
                    SetExpr::residue(2, 1),
                    RuleValue::PointTarget {
                        target: Point::integer(1),
                        coef: qi(1),
                    },
                ),
            ],
        )
        .unwrap();
        let op = MarkovOperator::new(kernel, std::slice::from_ref(&inf)).unwrap();
        let initial = Measure::pure_filter(z, inf).unwrap();
        match op.iterate(&initial, 3, 0) {
            Err(CoreError::UndecidedLimit { filter, .. }) => assert_eq!(filter, "etaInf"),
            other => panic!("expected undecided limit, got {other:?}"),
        }
    }

    #[test]
    fn csv_export_has_exact_and_decimal_columns() {
        let op = constant_target_operator();
        let g = unit();
        let trace = op
            .iterate(&Measure::dirac(g, Point::rational(1, 1)).unwrap(), 2, 0)
            .unwrap();
        let csv = trace.to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "n,ca_norm,pfa_norm,ca_norm_decimal,pfa_norm_decimal"
        );
        assert_eq!(lines.next().unwrap(), "1,1,0,1.000000000000,0.000000000000");
        assert_eq!(
            lines.next().unwrap(),
            "2,1/2,1/2,0.500000000000,0.500000000000"
        );
    }
}
