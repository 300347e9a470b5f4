//! Finitely additive measures represented exactly as an atomic part (finite
//! point-to-weight map) plus a purely finitely additive part (rational
//! combination of filter functionals).
//!
//! The representation makes the countably-additive/purely-finitely-additive
//! decomposition a constant-time split, and keeps every evaluation an exact
//! rational.

use num::{One, Signed, Zero};
use std::collections::BTreeMap;

use crate::error::CoreError;
use crate::filter::{filter_eval, FilterFunctional, FilterValue};
use crate::ground::{GroundSpace, Point};
use crate::rat::Q;
use crate::set::SetExpr;

/// Finite-support atomic measure: the countably additive part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomicMeasure {
    ground: GroundSpace,
    weights: BTreeMap<Point, Q>,
}

impl AtomicMeasure {
    pub fn zero(ground: GroundSpace) -> Self {
        AtomicMeasure {
            ground,
            weights: BTreeMap::new(),
        }
    }

    pub fn ground(&self) -> &GroundSpace {
        &self.ground
    }

    pub fn weights(&self) -> &BTreeMap<Point, Q> {
        &self.weights
    }

    pub fn support(&self) -> impl Iterator<Item = &Point> {
        self.weights.keys()
    }

    /// Signed total of all weights.
    pub fn total(&self) -> Q {
        self.weights.values().fold(Q::zero(), |acc, w| acc + w)
    }

    pub fn is_zero(&self) -> bool {
        self.weights.is_empty()
    }

    fn insert(&mut self, point: Point, weight: Q) {
        if weight.is_zero() {
            return;
        }
        let entry = self.weights.entry(point).or_insert_with(Q::zero);
        *entry += weight;
        if entry.is_zero() {
            // re-fetch key: remove zeroed entries to keep the support exact
            let dead: Vec<Point> = self
                .weights
                .iter()
                .filter(|(_, w)| w.is_zero())
                .map(|(p, _)| p.clone())
                .collect();
            for p in dead {
                self.weights.remove(&p);
            }
        }
    }
}

/// Rational combination of filter functionals: the purely finitely additive
/// part. Vanishes on every finite set by construction.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PfaCombination {
    terms: BTreeMap<FilterFunctional, Q>,
}

impl PfaCombination {
    pub fn zero() -> Self {
        PfaCombination::default()
    }

    pub fn terms(&self) -> &BTreeMap<FilterFunctional, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Signed sum of the coefficients.
    pub fn total(&self) -> Q {
        self.terms.values().fold(Q::zero(), |acc, c| acc + c)
    }

    fn insert(&mut self, filter: FilterFunctional, coef: Q) {
        if coef.is_zero() {
            return;
        }
        let entry = self.terms.entry(filter).or_insert_with(Q::zero);
        *entry += coef;
        if entry.is_zero() {
            let dead: Vec<FilterFunctional> = self
                .terms
                .iter()
                .filter(|(_, c)| c.is_zero())
                .map(|(f, _)| f.clone())
                .collect();
            for f in dead {
                self.terms.remove(&f);
            }
        }
    }
}

/// Classification of a measure by its decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureClass {
    CountablyAdditive,
    PurelyFinitelyAdditive,
    Mixed,
    /// The zero measure counts as both countably additive and purely
    /// finitely additive.
    ZeroBothTypes,
}

impl MeasureClass {
    pub fn label(&self) -> &'static str {
        match self {
            MeasureClass::CountablyAdditive => "ca",
            MeasureClass::PurelyFinitelyAdditive => "pfa",
            MeasureClass::Mixed => "mixed",
            MeasureClass::ZeroBothTypes => "zero-both-types",
        }
    }
}

/// Outcome of evaluating a measure on a set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evaluation {
    Exact(Q),
    /// Some filter term could not decide the set.
    Undecided {
        filter: String,
    },
}

impl Evaluation {
    pub fn exact(&self) -> Option<&Q> {
        match self {
            Evaluation::Exact(v) => Some(v),
            Evaluation::Undecided { .. } => None,
        }
    }

    /// Panics on undecided: for tests and callers that proved decidedness.
    pub fn unwrap_exact(self) -> Q {
        match self {
            Evaluation::Exact(v) => v,
            Evaluation::Undecided { filter } => {
                panic!("evaluation undecided along filter {filter}")
            }
        }
    }
}

/// A finitely additive measure: atomic part plus pfa part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measure {
    atomic: AtomicMeasure,
    pfa: PfaCombination,
}

impl Measure {
    pub fn zero(ground: GroundSpace) -> Self {
        Measure {
            atomic: AtomicMeasure::zero(ground),
            pfa: PfaCombination::zero(),
        }
    }

    /// Dirac mass at a point.
    pub fn dirac(ground: GroundSpace, point: Point) -> Result<Self, CoreError> {
        ground.check_point(&point)?;
        let mut m = Measure::zero(ground);
        m.atomic.insert(point, Q::one());
        Ok(m)
    }

    pub fn from_atoms(
        ground: GroundSpace,
        atoms: impl IntoIterator<Item = (Point, Q)>,
    ) -> Result<Self, CoreError> {
        let mut m = Measure::zero(ground);
        for (p, w) in atoms {
            m.atomic.ground.check_point(&p)?;
            m.atomic.insert(p, w);
        }
        Ok(m)
    }

    pub fn from_filters(
        ground: GroundSpace,
        terms: impl IntoIterator<Item = (FilterFunctional, Q)>,
    ) -> Result<Self, CoreError> {
        let mut m = Measure::zero(ground);
        for (f, c) in terms {
            f.validate_for(&m.atomic.ground)?;
            m.pfa.insert(f, c);
        }
        Ok(m)
    }

    pub fn from_parts(
        ground: GroundSpace,
        atoms: impl IntoIterator<Item = (Point, Q)>,
        terms: impl IntoIterator<Item = (FilterFunctional, Q)>,
    ) -> Result<Self, CoreError> {
        let mut m = Measure::from_atoms(ground, atoms)?;
        for (f, c) in terms {
            f.validate_for(&m.atomic.ground)?;
            m.pfa.insert(f, c);
        }
        Ok(m)
    }

    /// Unit mass on a single filter functional.
    pub fn pure_filter(ground: GroundSpace, filter: FilterFunctional) -> Result<Self, CoreError> {
        Measure::from_filters(ground, [(filter, Q::one())])
    }

    pub fn ground(&self) -> &GroundSpace {
        &self.atomic.ground
    }

    pub fn atomic(&self) -> &AtomicMeasure {
        &self.atomic
    }

    pub fn pfa(&self) -> &PfaCombination {
        &self.pfa
    }

    pub fn is_zero(&self) -> bool {
        self.atomic.is_zero() && self.pfa.is_zero()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.atomic.weights.values().all(|w| !w.is_negative())
            && self.pfa.terms.values().all(|c| !c.is_negative())
    }

    /// Signed total mass (the value on the full space, always decided).
    pub fn total_mass(&self) -> Q {
        self.atomic.total() + self.pfa.total()
    }

    pub fn is_probability(&self) -> bool {
        self.is_nonnegative() && self.total_mass().is_one()
    }

    /// Nonnegative with total mass at most one.
    pub fn is_subprobability(&self) -> bool {
        self.is_nonnegative() && self.total_mass() <= Q::one()
    }

    /// Exact evaluation on a set expression.
    pub fn eval(&self, expr: &SetExpr) -> Result<Evaluation, CoreError> {
        crate::set::validate_for_ground(self.ground(), expr)?;
        let mut acc = Q::zero();
        for (point, weight) in &self.atomic.weights {
            if crate::set::member(self.ground(), point, expr)? {
                acc += weight;
            }
        }
        for (filter, coef) in &self.pfa.terms {
            match filter_eval(self.ground(), filter, expr)? {
                FilterValue::One => acc += coef,
                FilterValue::Zero => {}
                FilterValue::Undecided => {
                    return Ok(Evaluation::Undecided {
                        filter: filter.id().to_string(),
                    })
                }
            }
        }
        Ok(Evaluation::Exact(acc))
    }

    /// The unique split into countably additive and purely finitely additive
    /// parts. With this representation the split is the representation
    /// itself; uniqueness is what the representation enforces.
    pub fn yosida_hewitt(&self) -> (Measure, Measure) {
        let ca = Measure {
            atomic: self.atomic.clone(),
            pfa: PfaCombination::zero(),
        };
        let pfa = Measure {
            atomic: AtomicMeasure::zero(self.atomic.ground.clone()),
            pfa: self.pfa.clone(),
        };
        (ca, pfa)
    }

    pub fn classify(&self) -> MeasureClass {
        match (self.atomic.is_zero(), self.pfa.is_zero()) {
            (true, true) => MeasureClass::ZeroBothTypes,
            (false, true) => MeasureClass::CountablyAdditive,
            (true, false) => MeasureClass::PurelyFinitelyAdditive,
            (false, false) => MeasureClass::Mixed,
        }
    }

    /// Exact linear combination `a*mu + b*nu`.
    pub fn combine(a: &Q, mu: &Measure, b: &Q, nu: &Measure) -> Result<Measure, CoreError> {
        mu.ground().check_same(nu.ground())?;
        let mut out = Measure::zero(mu.ground().clone());
        for (p, w) in &mu.atomic.weights {
            out.atomic.insert(p.clone(), a * w);
        }
        for (p, w) in &nu.atomic.weights {
            out.atomic.insert(p.clone(), b * w);
        }
        for (f, c) in &mu.pfa.terms {
            out.pfa.insert(f.clone(), a * c);
        }
        for (f, c) in &nu.pfa.terms {
            out.pfa.insert(f.clone(), b * c);
        }
        Ok(out)
    }

    pub fn add(&self, other: &Measure) -> Result<Measure, CoreError> {
        Measure::combine(&Q::one(), self, &Q::one(), other)
    }

    pub fn scale(&self, factor: &Q) -> Measure {
        Measure::combine(factor, self, &Q::zero(), self).expect("same ground")
    }

    /// Norm of a nonnegative measure: its total mass. Signed measures are
    /// rejected; total variation is out of scope.
    pub fn norm(&self) -> Result<Q, CoreError> {
        if !self.is_nonnegative() {
            return Err(CoreError::SignedMeasure {
                context: "norm".into(),
            });
        }
        Ok(self.total_mass())
    }

    /// A nonnegative measure is purely finitely additive exactly when it has
    /// no atoms, i.e. it vanishes on every singleton.
    pub fn is_pfa(&self) -> Result<bool, CoreError> {
        if !self.is_nonnegative() {
            return Err(CoreError::SignedMeasure {
                context: "is_pfa".into(),
            });
        }
        let verdict = self.atomic.is_zero();
        debug_assert!(self.singleton_cross_check(verdict));
        Ok(verdict)
    }

    /// Representation-level cross-check: on sampled singletons the evaluation
    /// agrees with the stored atom weights, and vanishes everywhere when the
    /// atomic part is empty.
    fn singleton_cross_check(&self, claims_pfa: bool) -> bool {
        let mut points = self.ground().sample_points();
        points.extend(self.atomic.weights.keys().cloned());
        for point in points {
            let expected = self
                .atomic
                .weights
                .get(&point)
                .cloned()
                .unwrap_or_else(Q::zero);
            let got = match self.eval(&SetExpr::singleton(point)) {
                Ok(Evaluation::Exact(v)) => v,
                _ => return false,
            };
            if got != expected {
                return false;
            }
            if claims_pfa && !got.is_zero() {
                return false;
            }
        }
        true
    }

    /// Filters appearing in the pfa part.
    pub fn filters(&self) -> impl Iterator<Item = &FilterFunctional> {
        self.pfa.terms.keys()
    }
}
