//! Markov and sub-Markov kernels, finitely additive in the second argument,
//! given as rule maps `x -> Measure` over a partition of the ground space.
//!
//! A row is the sum of all rule values whose piece contains `x`. Values are
//! constant measures, diagonal terms `c * delta_x`, fixed point targets
//! `c * delta_target`, and (on integer grounds) translations
//! `c * delta_{x+offset}`. This class is closed under decomposition,
//! convolution and operator application, and every limit along a filter
//! functional is either exact or reported as undecided.

use num::bigint::BigInt;
use num::{One, Signed, Zero};

use crate::error::CoreError;
use crate::filter::{filter_eval, FilterFunctional, FilterValue};
use crate::ground::{GroundKind, GroundSpace, Point};
use crate::measure::{Evaluation, Measure};
use crate::rat::Q;
use crate::set::{self, SetExpr};

/// The value a rule contributes to rows over its piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleValue {
    /// The same measure for every `x` in the piece.
    Constant(Measure),
    /// `coef * delta_x`.
    Diagonal { coef: Q },
    /// `coef * delta_target`.
    PointTarget { target: Point, coef: Q },
    /// `coef * delta_{x + offset}`, integer grounds only.
    Shift { offset: BigInt, coef: Q },
}

impl RuleValue {
    /// Row mass contributed by this value (constant in `x` for every kind).
    pub fn mass(&self) -> Q {
        match self {
            RuleValue::Constant(m) => m.total_mass(),
            RuleValue::Diagonal { coef }
            | RuleValue::PointTarget { coef, .. }
            | RuleValue::Shift { coef, .. } => coef.clone(),
        }
    }

    fn scale(&self, factor: &Q) -> RuleValue {
        match self {
            RuleValue::Constant(m) => RuleValue::Constant(m.scale(factor)),
            RuleValue::Diagonal { coef } => RuleValue::Diagonal {
                coef: coef * factor,
            },
            RuleValue::PointTarget { target, coef } => RuleValue::PointTarget {
                target: target.clone(),
                coef: coef * factor,
            },
            RuleValue::Shift { offset, coef } => RuleValue::Shift {
                offset: offset.clone(),
                coef: coef * factor,
            },
        }
    }
}

/// One rule: a piece of the ground space and the value rows take on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelRule {
    pub piece: SetExpr,
    pub value: RuleValue,
}

impl KernelRule {
    pub fn new(piece: SetExpr, value: RuleValue) -> Self {
        KernelRule { piece, value }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    Markov,
    SubMarkov,
}

impl KernelKind {
    pub fn label(&self) -> &'static str {
        match self {
            KernelKind::Markov => "markov",
            KernelKind::SubMarkov => "sub-markov",
        }
    }
}

/// A validated kernel: nonnegative rule values whose distinct pieces
/// partition the ground space, with row mass at most one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kernel {
    ground: GroundSpace,
    rules: Vec<KernelRule>,
    kind: KernelKind,
}

impl Kernel {
    /// Validates and classifies the rules. Rules may share a piece (their
    /// values add up on it); the distinct pieces must partition the space.
    pub fn new(ground: GroundSpace, rules: Vec<KernelRule>) -> Result<Self, CoreError> {
        let kind = validate(&ground, &rules)?;
        Ok(Kernel {
            ground,
            rules,
            kind,
        })
    }

    pub fn ground(&self) -> &GroundSpace {
        &self.ground
    }

    pub fn rules(&self) -> &[KernelRule] {
        &self.rules
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    /// Rules grouped by syntactically equal piece, in first-seen order.
    pub fn groups(&self) -> Vec<(&SetExpr, Vec<&RuleValue>)> {
        let mut groups: Vec<(&SetExpr, Vec<&RuleValue>)> = Vec::new();
        for rule in &self.rules {
            if let Some(entry) = groups.iter_mut().find(|(p, _)| *p == &rule.piece) {
                entry.1.push(&rule.value);
            } else {
                groups.push((&rule.piece, vec![&rule.value]));
            }
        }
        groups
    }

    /// Per-piece row mass, constant in `x` on each piece.
    pub fn piece_masses(&self) -> Vec<(SetExpr, Q)> {
        self.groups()
            .into_iter()
            .map(|(piece, values)| {
                let mass = values.iter().fold(Q::zero(), |acc, v| acc + v.mass());
                (piece.clone(), mass)
            })
            .collect()
    }

    /// The row measure at a point.
    pub fn row(&self, x: &Point) -> Result<Measure, CoreError> {
        self.ground.check_point(x)?;
        let mut row = Measure::zero(self.ground.clone());
        for rule in &self.rules {
            if !set::member(&self.ground, x, &rule.piece)? {
                continue;
            }
            let contribution = match &rule.value {
                RuleValue::Constant(m) => m.clone(),
                RuleValue::Diagonal { coef } => {
                    Measure::dirac(self.ground.clone(), x.clone())?.scale(coef)
                }
                RuleValue::PointTarget { target, coef } => {
                    Measure::dirac(self.ground.clone(), target.clone())?.scale(coef)
                }
                RuleValue::Shift { offset, coef } => match x {
                    Point::Integer(n) => {
                        Measure::dirac(self.ground.clone(), Point::Integer(n + offset))?.scale(coef)
                    }
                    _ => {
                        return Err(CoreError::Invalid(
                            "shift value on a non-integer point".into(),
                        ))
                    }
                },
            };
            row = row.add(&contribution)?;
        }
        Ok(row)
    }

    /// Splits each rule along the measure decomposition: atomic-valued terms
    /// stay on the countably additive side, filter terms go to the purely
    /// finitely additive side. Both sides keep the full piece partition.
    pub fn decompose(&self) -> Result<(Kernel, Kernel), CoreError> {
        let mut ca_rules = Vec::new();
        let mut pfa_rules = Vec::new();
        for (piece, values) in self.groups() {
            let mut ca_here = Vec::new();
            let mut pfa_here = Vec::new();
            for value in values {
                match value {
                    RuleValue::Constant(m) => {
                        let (ca, pfa) = m.yosida_hewitt();
                        if !ca.is_zero() {
                            ca_here.push(RuleValue::Constant(ca));
                        }
                        if !pfa.is_zero() {
                            pfa_here.push(RuleValue::Constant(pfa));
                        }
                    }
                    atomic => ca_here.push(atomic.clone()),
                }
            }
            if ca_here.is_empty() {
                ca_here.push(RuleValue::Constant(Measure::zero(self.ground.clone())));
            }
            if pfa_here.is_empty() {
                pfa_here.push(RuleValue::Constant(Measure::zero(self.ground.clone())));
            }
            for v in ca_here {
                ca_rules.push(KernelRule::new(piece.clone(), v));
            }
            for v in pfa_here {
                pfa_rules.push(KernelRule::new(piece.clone(), v));
            }
        }
        let ca = Kernel::new(self.ground.clone(), ca_rules)?;
        let pfa = Kernel::new(self.ground.clone(), pfa_rules)?;
        Ok((ca, pfa))
    }

    /// The limit of the rows along a filter functional: the row value on the
    /// unique piece carrying a tail. Diagonal and shift terms pass to the
    /// functional itself (the indicator limit), constants and point targets
    /// to their measures.
    pub fn limit_measure(&self, filter: &FilterFunctional) -> Result<Measure, CoreError> {
        let mut undecided_piece: Option<String> = None;
        for (piece, values) in self.groups() {
            match filter_eval(&self.ground, filter, piece)? {
                FilterValue::One => {
                    let mut out = Measure::zero(self.ground.clone());
                    for value in values {
                        let term = match value {
                            RuleValue::Constant(m) => m.clone(),
                            RuleValue::PointTarget { target, coef } => {
                                Measure::dirac(self.ground.clone(), target.clone())?.scale(coef)
                            }
                            RuleValue::Diagonal { coef } | RuleValue::Shift { coef, .. } => {
                                Measure::pure_filter(self.ground.clone(), filter.clone())?
                                    .scale(coef)
                            }
                        };
                        out = out.add(&term)?;
                    }
                    return Ok(out);
                }
                FilterValue::Zero => {}
                FilterValue::Undecided => {
                    undecided_piece.get_or_insert_with(|| piece.describe());
                }
            }
        }
        match undecided_piece {
            Some(piece) => Err(CoreError::UndecidedLimit {
                filter: filter.id().to_string(),
                piece,
            }),
            // pieces partition the space, so a decided scan must hit a tail
            None => Err(CoreError::Invalid(
                "no piece of a partition carried the filter tail".into(),
            )),
        }
    }

    /// Integrates the kernel against a measure:
    /// `(A mu)(E) = integral of P(x, E) d mu(x)`, exactly.
    pub fn integrate(&self, mu: &Measure) -> Result<Measure, CoreError> {
        self.ground.check_same(mu.ground())?;
        let mut out = Measure::zero(self.ground.clone());
        for (point, weight) in mu.atomic().weights() {
            out = out.add(&self.row(point)?.scale(weight))?;
        }
        for (filter, coef) in mu.pfa().terms() {
            out = out.add(&self.limit_measure(filter)?.scale(coef))?;
        }
        Ok(out)
    }

    /// Filter functionals referenced by the rules, deduplicated by id.
    pub fn filters(&self) -> Vec<FilterFunctional> {
        let mut out: Vec<FilterFunctional> = Vec::new();
        for rule in &self.rules {
            if let RuleValue::Constant(m) = &rule.value {
                for f in m.filters() {
                    if !out.iter().any(|g| g.id() == f.id()) {
                        out.push(f.clone());
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// True when every row is purely finitely additive.
    pub fn rows_purely_pfa(&self) -> bool {
        self.rules.iter().all(|r| match &r.value {
            RuleValue::Constant(m) => m.atomic().is_zero(),
            _ => false,
        })
    }

    /// True when every row is purely atomic.
    pub fn rows_purely_atomic(&self) -> bool {
        self.rules.iter().all(|r| match &r.value {
            RuleValue::Constant(m) => m.pfa().is_zero(),
            _ => true,
        })
    }

    /// Integral convolution: `(k1 * k2)(x, E) = integral k2(y, E) k1(x, dy)`.
    ///
    /// Constant and point-target terms integrate to constant measures. A
    /// varying term (diagonal or shift) splices `k2`'s rules onto the piece,
    /// refined against `k2`'s partition pulled back by the offset.
    pub fn convolve(k1: &Kernel, k2: &Kernel) -> Result<Kernel, CoreError> {
        k1.ground.check_same(&k2.ground)?;
        let ground = k1.ground.clone();
        let mut rules: Vec<KernelRule> = Vec::new();
        for (piece, values) in k1.groups() {
            let mut constant = Measure::zero(ground.clone());
            let mut varying: Option<(BigInt, Q)> = None;
            for value in values {
                match value {
                    RuleValue::Constant(m) => {
                        constant = constant.add(&k2.integrate(m)?)?;
                    }
                    RuleValue::PointTarget { target, coef } => {
                        constant = constant.add(&k2.row(target)?.scale(coef))?;
                    }
                    RuleValue::Diagonal { coef } => {
                        merge_varying(&mut varying, BigInt::zero(), coef.clone())?;
                    }
                    RuleValue::Shift { offset, coef } => {
                        merge_varying(&mut varying, offset.clone(), coef.clone())?;
                    }
                }
            }
            match varying {
                None => rules.push(KernelRule::new(
                    piece.clone(),
                    RuleValue::Constant(constant),
                )),
                Some((offset, coef)) => {
                    for (piece2, values2) in k2.groups() {
                        let pulled_back = if offset.is_zero() {
                            piece2.clone()
                        } else {
                            set::translate(piece2, &(-offset.clone()))?
                        };
                        let cell = piece.clone().intersection(pulled_back);
                        if set::is_empty_set(&ground, &cell)? {
                            continue;
                        }
                        rules.push(KernelRule::new(
                            cell.clone(),
                            RuleValue::Constant(constant.clone()),
                        ));
                        for value2 in values2 {
                            let spliced = match value2 {
                                RuleValue::Constant(m) => RuleValue::Constant(m.scale(&coef)),
                                RuleValue::PointTarget { target, coef: c2 } => {
                                    RuleValue::PointTarget {
                                        target: target.clone(),
                                        coef: &coef * c2,
                                    }
                                }
                                RuleValue::Diagonal { coef: c2 } => {
                                    shifted_value(&offset, &(&coef * c2))
                                }
                                RuleValue::Shift {
                                    offset: d2,
                                    coef: c2,
                                } => shifted_value(&(&offset + d2), &(&coef * c2)),
                            };
                            rules.push(KernelRule::new(cell.clone(), spliced));
                        }
                    }
                }
            }
        }
        Kernel::new(ground, rules)
    }

    /// n-fold convolution power, n >= 1.
    pub fn power(&self, n: usize) -> Result<Kernel, CoreError> {
        if n == 0 {
            return Err(CoreError::Invalid("kernel power needs n >= 1".into()));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = Kernel::convolve(&acc, self)?;
        }
        Ok(acc)
    }

    /// Exact values of the n-step kernel on singletons, for the given pairs.
    pub fn power_singletons(
        &self,
        n: usize,
        pairs: &[(Point, Point)],
    ) -> Result<Vec<SingletonEntry>, CoreError> {
        let powered = self.power(n)?;
        let mut table = Vec::with_capacity(pairs.len());
        for (x, y) in pairs {
            let row = powered.row(x)?;
            let value = match row.eval(&SetExpr::singleton(y.clone()))? {
                Evaluation::Exact(v) => v,
                Evaluation::Undecided { filter } => {
                    return Err(CoreError::UndecidedLimit {
                        filter,
                        piece: SetExpr::singleton(y.clone()).describe(),
                    })
                }
            };
            table.push(SingletonEntry {
                x: x.clone(),
                y: y.clone(),
                value,
            });
        }
        Ok(table)
    }

    /// Atomic support of the row at `x`: the finite atom set with weights
    /// summing to the row's countably additive mass. A purely pfa row reports
    /// an empty support, which is a valid outcome rather than an error.
    pub fn row_atomic_support(&self, x: &Point) -> Result<RowSupport, CoreError> {
        let row = self.row(x)?;
        let weights: Vec<(Point, Q)> = row
            .atomic()
            .weights()
            .iter()
            .map(|(p, w)| (p.clone(), w.clone()))
            .collect();
        let ca_total = row.atomic().total();
        let purely_pfa = weights.is_empty() && !row.pfa().is_zero();
        Ok(RowSupport {
            weights,
            ca_total,
            purely_pfa,
        })
    }
}

fn merge_varying(
    varying: &mut Option<(BigInt, Q)>,
    offset: BigInt,
    coef: Q,
) -> Result<(), CoreError> {
    match varying {
        None => {
            *varying = Some((offset, coef));
            Ok(())
        }
        Some((existing, acc)) if *existing == offset => {
            *acc += coef;
            Ok(())
        }
        Some(_) => Err(CoreError::Invalid(
            "multiple distinct varying offsets on one piece are not supported".into(),
        )),
    }
}

fn shifted_value(offset: &BigInt, coef: &Q) -> RuleValue {
    if offset.is_zero() {
        RuleValue::Diagonal { coef: coef.clone() }
    } else {
        RuleValue::Shift {
            offset: offset.clone(),
            coef: coef.clone(),
        }
    }
}

/// Atomic support description of one kernel row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowSupport {
    pub weights: Vec<(Point, Q)>,
    pub ca_total: Q,
    pub purely_pfa: bool,
}

/// One entry of a singleton table `P^n(x, {y})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingletonEntry {
    pub x: Point,
    pub y: Point,
    pub value: Q,
}

/// Validates rule values and the piece partition, returning the kind.
fn validate(ground: &GroundSpace, rules: &[KernelRule]) -> Result<KernelKind, CoreError> {
    if rules.is_empty() {
        return Err(CoreError::Invalid("kernel needs at least one rule".into()));
    }
    for rule in rules {
        set::validate_for_ground(ground, &rule.piece)?;
        match &rule.value {
            RuleValue::Constant(m) => {
                ground.check_same(m.ground())?;
                if !m.is_nonnegative() {
                    return Err(CoreError::NegativeCoefficient {
                        coef: "signed constant measure".into(),
                        context: format!("rule on piece {}", rule.piece.describe()),
                    });
                }
            }
            RuleValue::Diagonal { coef } => {
                if coef.is_negative() {
                    return Err(CoreError::NegativeCoefficient {
                        coef: coef.to_string(),
                        context: format!("diagonal on piece {}", rule.piece.describe()),
                    });
                }
            }
            RuleValue::PointTarget { target, coef } => {
                ground.check_point(target)?;
                if coef.is_negative() {
                    return Err(CoreError::NegativeCoefficient {
                        coef: coef.to_string(),
                        context: format!("point target on piece {}", rule.piece.describe()),
                    });
                }
            }
            RuleValue::Shift { coef, .. } => {
                if ground.kind() != GroundKind::Integers {
                    return Err(CoreError::Invalid(
                        "shift values are only valid on integer grounds".into(),
                    ));
                }
                if coef.is_negative() {
                    return Err(CoreError::NegativeCoefficient {
                        coef: coef.to_string(),
                        context: format!("shift on piece {}", rule.piece.describe()),
                    });
                }
            }
        }
    }

    // distinct pieces, first-seen order
    let mut pieces: Vec<&SetExpr> = Vec::new();
    for rule in rules {
        if !pieces.contains(&&rule.piece) {
            pieces.push(&rule.piece);
        }
    }
    let battery = set::battery(ground, &pieces)?;
    let mut occupied = vec![false; pieces.len()];
    for point in &battery {
        let mut hits = 0usize;
        for (i, piece) in pieces.iter().enumerate() {
            if set::member(ground, point, piece)? {
                hits += 1;
                occupied[i] = true;
            }
        }
        if hits == 0 {
            return Err(CoreError::PartitionViolation {
                detail: format!("point {point} is covered by no piece"),
            });
        }
        if hits > 1 {
            return Err(CoreError::PartitionViolation {
                detail: format!("point {point} is covered by {hits} pieces"),
            });
        }
    }

    // per-piece mass; empty pieces carry no row and are exempt
    let one = Q::one();
    let mut all_one = true;
    for (i, piece) in pieces.iter().enumerate() {
        if !occupied[i] {
            continue;
        }
        let mass: Q = rules
            .iter()
            .filter(|r| &&r.piece == piece)
            .fold(Q::zero(), |acc, r| acc + r.value.mass());
        if mass > one {
            return Err(CoreError::RowMassExceedsOne {
                mass: mass.to_string(),
                piece: piece.describe(),
            });
        }
        if mass != one {
            all_one = false;
        }
    }
    Ok(if all_one {
        KernelKind::Markov
    } else {
        KernelKind::SubMarkov
    })
}

/// Rowwise sum of two kernels on the common refinement of their partitions.
/// Empty refinement cells are dropped.
pub fn superpose(k1: &Kernel, k2: &Kernel) -> Result<Kernel, CoreError> {
    k1.ground().check_same(k2.ground())?;
    let mut rules = Vec::new();
    for (p1, v1) in k1.groups() {
        for (p2, v2) in k2.groups() {
            let cell = p1.clone().intersection(p2.clone());
            if set::is_empty_set(k1.ground(), &cell)? {
                continue;
            }
            for v in v1.iter() {
                rules.push(KernelRule::new(cell.clone(), (*v).clone()));
            }
            for v in v2.iter() {
                rules.push(KernelRule::new(cell.clone(), (*v).clone()));
            }
        }
    }
    Kernel::new(k1.ground().clone(), rules)
}

/// A combined chain: countably additive and purely finitely additive kernel
/// components with constant row masses `q1` and `q2 = 1 - q1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinedKernel {
    q1: Q,
    q2: Q,
    ca_part: Kernel,
    pfa_part: Kernel,
}

impl CombinedKernel {
    /// Builds the combined kernel `q1 * kca + (1 - q1) * kpfa` from two
    /// normalized (mass one) components: `kca` with purely atomic rows,
    /// `kpfa` with purely pfa rows.
    pub fn make_combined(q1: Q, kca: &Kernel, kpfa: &Kernel) -> Result<Self, CoreError> {
        if q1 < Q::zero() || q1 > Q::one() {
            return Err(CoreError::Invalid(format!("q1 = {q1} must lie in [0,1]")));
        }
        kca.ground().check_same(kpfa.ground())?;
        if kca.kind() != KernelKind::Markov {
            return Err(CoreError::NotMarkov {
                detail: "ca component must have row mass one before scaling".into(),
            });
        }
        if kpfa.kind() != KernelKind::Markov {
            return Err(CoreError::NotMarkov {
                detail: "pfa component must have row mass one before scaling".into(),
            });
        }
        if !kca.rows_purely_atomic() {
            return Err(CoreError::Invalid(
                "ca component rows must be purely atomic".into(),
            ));
        }
        if !kpfa.rows_purely_pfa() {
            return Err(CoreError::Invalid(
                "pfa component rows must be purely finitely additive".into(),
            ));
        }
        let q2 = Q::one() - &q1;
        let ca_part = scale_kernel(kca, &q1)?;
        let pfa_part = scale_kernel(kpfa, &q2)?;
        Ok(CombinedKernel {
            q1,
            q2,
            ca_part,
            pfa_part,
        })
    }

    /// Rebuilds a combined chain from already scaled components: the ca part
    /// must be purely atomic with constant row mass `q1`, the pfa part purely
    /// pfa with constant row mass `1 - q1`.
    pub fn from_scaled_parts(q1: Q, ca_part: Kernel, pfa_part: Kernel) -> Result<Self, CoreError> {
        if q1 < Q::zero() || q1 > Q::one() {
            return Err(CoreError::Invalid(format!("q1 = {q1} must lie in [0,1]")));
        }
        ca_part.ground().check_same(pfa_part.ground())?;
        if !ca_part.rows_purely_atomic() {
            return Err(CoreError::Invalid(
                "ca component rows must be purely atomic".into(),
            ));
        }
        if !pfa_part.rows_purely_pfa() {
            return Err(CoreError::Invalid(
                "pfa component rows must be purely finitely additive".into(),
            ));
        }
        let q2 = Q::one() - &q1;
        match constant_mass(&ca_part) {
            Some(mass) if mass == q1 => {}
            _ => {
                return Err(CoreError::Invalid(
                    "ca component row mass must be constantly q1".into(),
                ))
            }
        }
        match constant_mass(&pfa_part) {
            Some(mass) if mass == q2 => {}
            _ => {
                return Err(CoreError::Invalid(
                    "pfa component row mass must be constantly 1 - q1".into(),
                ))
            }
        }
        Ok(CombinedKernel {
            q1,
            q2,
            ca_part,
            pfa_part,
        })
    }

    /// Recognizes a combined chain in an arbitrary Markov kernel: the
    /// decomposed components must have constant row masses.
    pub fn try_from_kernel(kernel: &Kernel) -> Result<Self, CoreError> {
        if kernel.kind() != KernelKind::Markov {
            return Err(CoreError::NotMarkov {
                detail: "combined chains are markov".into(),
            });
        }
        let (ca, pfa) = kernel.decompose()?;
        let q1 = constant_mass(&ca)
            .ok_or_else(|| CoreError::Invalid("ca component mass varies across pieces".into()))?;
        let q2 = constant_mass(&pfa)
            .ok_or_else(|| CoreError::Invalid("pfa component mass varies across pieces".into()))?;
        debug_assert_eq!(&q1 + &q2, Q::one());
        Ok(CombinedKernel {
            q1,
            q2,
            ca_part: ca,
            pfa_part: pfa,
        })
    }

    pub fn q1(&self) -> &Q {
        &self.q1
    }

    pub fn q2(&self) -> &Q {
        &self.q2
    }

    /// Scaled ca component, with row mass `q1`.
    pub fn ca_part(&self) -> &Kernel {
        &self.ca_part
    }

    /// Scaled pfa component, with row mass `q2`.
    pub fn pfa_part(&self) -> &Kernel {
        &self.pfa_part
    }

    pub fn nondegenerate(&self) -> bool {
        self.q1 > Q::zero() && self.q1 < Q::one()
    }

    /// The full Markov kernel, rowwise `ca_part + pfa_part`.
    pub fn to_kernel(&self) -> Result<Kernel, CoreError> {
        superpose(&self.ca_part, &self.pfa_part)
    }
}

fn scale_kernel(kernel: &Kernel, factor: &Q) -> Result<Kernel, CoreError> {
    let rules = kernel
        .rules()
        .iter()
        .map(|r| KernelRule::new(r.piece.clone(), r.value.scale(factor)))
        .collect();
    Kernel::new(kernel.ground().clone(), rules)
}

fn constant_mass(kernel: &Kernel) -> Option<Q> {
    let masses = kernel.piece_masses();
    let (_, first) = masses.first()?;
    if masses.iter().all(|(_, m)| m == first) {
        Some(first.clone())
    } else {
        None
    }
}
