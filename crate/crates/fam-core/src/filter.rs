//! Filter functionals: computable {0,1}-valued purely finitely additive
//! charges, pinned down by a monotone family of infinite tail sets.
//!
//! A functional decides a set when some tail is contained in it modulo a
//! finite exception set (value one) or meets it in at most a finite set
//! (value zero). Everything else is `Undecided`, surfaced as a value so that
//! callers never silently pick an ultrafilter extension.

use num::bigint::BigInt;
use num::integer::Integer;
use num::{One, Zero};
use std::collections::BTreeSet;

use crate::error::CoreError;
use crate::ground::{GroundKind, GroundSpace};
use crate::rat::Q;
use crate::set::{Interval, SetExpr};

/// Closed-form descriptor of a monotone decreasing family of infinite tails.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TailFamily {
    /// Tails `(p, p + 1/k)`: the anchor is the open left endpoint.
    /// Rational grounds only; requires `0 <= p < 1`.
    LeftOfPoint { point: Q },
    /// Tails `(p - 1/k, p)`: the anchor is the open right endpoint.
    /// Rational grounds only; requires `0 < p <= 1`.
    RightOfPoint { point: Q },
    /// Tails `{ n : n >= k }` on the integers.
    GeqThreshold,
    /// Tails `{ n : n <= -k }` on the integers.
    LeqThreshold,
}

impl TailFamily {
    pub fn name(&self) -> &'static str {
        match self {
            TailFamily::LeftOfPoint { .. } => "left-of-point",
            TailFamily::RightOfPoint { .. } => "right-of-point",
            TailFamily::GeqThreshold => "geq-threshold",
            TailFamily::LeqThreshold => "leq-threshold",
        }
    }
}

/// A named filter functional over one ground space.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FilterFunctional {
    id: String,
    family: TailFamily,
}

/// Value of a filter functional on a set expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterValue {
    Zero,
    One,
    Undecided,
}

impl FilterValue {
    pub fn label(&self) -> &'static str {
        match self {
            FilterValue::Zero => "zero",
            FilterValue::One => "one",
            FilterValue::Undecided => "undecided",
        }
    }
}

impl FilterFunctional {
    /// Builds a functional after checking the tail family fits the ground:
    /// tails must be infinite subsets of it, so finite grounds reject every
    /// family and each family is tied to one ground kind.
    pub fn new(
        id: impl Into<String>,
        family: TailFamily,
        ground: &GroundSpace,
    ) -> Result<Self, CoreError> {
        let id = id.into();
        if id.is_empty() {
            return Err(CoreError::Invalid("filter id must be nonempty".into()));
        }
        match (&family, ground.kind()) {
            (_, GroundKind::FiniteLabeled) => {
                return Err(CoreError::InvalidTailFamily {
                    reason: format!("no infinite tails over finite ground {}", ground.describe()),
                });
            }
            (TailFamily::LeftOfPoint { point }, GroundKind::UnitIntervalRationals) => {
                if *point < Q::zero() || *point >= Q::one() {
                    return Err(CoreError::InvalidTailFamily {
                        reason: format!("left-of-point anchor {point} must lie in [0,1)"),
                    });
                }
            }
            (TailFamily::RightOfPoint { point }, GroundKind::UnitIntervalRationals) => {
                if *point <= Q::zero() || *point > Q::one() {
                    return Err(CoreError::InvalidTailFamily {
                        reason: format!("right-of-point anchor {point} must lie in (0,1]"),
                    });
                }
            }
            (TailFamily::GeqThreshold | TailFamily::LeqThreshold, GroundKind::Integers) => {}
            (family, _) => {
                return Err(CoreError::InvalidTailFamily {
                    reason: format!(
                        "family {} is not valid on ground {}",
                        family.name(),
                        ground.describe()
                    ),
                });
            }
        }
        Ok(FilterFunctional { id, family })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn family(&self) -> &TailFamily {
        &self.family
    }

    /// Re-checks family/ground compatibility, for values resurrected from
    /// serialized form.
    pub fn validate_for(&self, ground: &GroundSpace) -> Result<(), CoreError> {
        FilterFunctional::new(self.id.clone(), self.family.clone(), ground).map(|_| ())
    }

    /// The k-th tail as a set expression (k >= 1).
    pub fn tail(&self, k: u64) -> SetExpr {
        let k = k.max(1);
        match &self.family {
            TailFamily::LeftOfPoint { point } => {
                SetExpr::open_interval(point.clone(), point + Q::new(1.into(), k.into()))
            }
            TailFamily::RightOfPoint { point } => {
                SetExpr::open_interval(point - Q::new(1.into(), k.into()), point.clone())
            }
            TailFamily::GeqThreshold => {
                SetExpr::Interval(Interval::at_least(Q::from_integer(k.into())))
            }
            TailFamily::LeqThreshold => {
                SetExpr::Interval(Interval::at_most(-Q::from_integer(k.into())))
            }
        }
    }
}

/// Evaluates a filter functional on a set expression: one when some tail is
/// contained in the set modulo a finite exception set, zero when some tail
/// meets it in a finite set, undecided otherwise.
///
/// The decision works on the germ of the expression at the tail location.
/// On rational grounds every leaf is eventually-inside or eventually-outside
/// near the anchor, so the germ algebra is two-valued and the outcome is
/// always decided. On integer grounds the germ is computed per residue class
/// modulo the lcm of the moduli in the expression, which is exact; a mixed
/// germ (some classes in, some out) is genuinely undecided.
pub fn filter_eval(
    ground: &GroundSpace,
    filter: &FilterFunctional,
    expr: &SetExpr,
) -> Result<FilterValue, CoreError> {
    filter.validate_for(ground)?;
    crate::set::validate_for_ground(ground, expr)?;
    match &filter.family {
        TailFamily::LeftOfPoint { point } => {
            let full = germ_at_anchor(expr, point, Side::Right)?;
            Ok(if full {
                FilterValue::One
            } else {
                FilterValue::Zero
            })
        }
        TailFamily::RightOfPoint { point } => {
            let full = germ_at_anchor(expr, point, Side::Left)?;
            Ok(if full {
                FilterValue::One
            } else {
                FilterValue::Zero
            })
        }
        TailFamily::GeqThreshold => germ_at_infinity(expr, Direction::Plus),
        TailFamily::LeqThreshold => germ_at_infinity(expr, Direction::Minus),
    }
}

#[derive(Clone, Copy)]
enum Side {
    /// Tails sit just above the anchor.
    Right,
    /// Tails sit just below the anchor.
    Left,
}

/// Germ of the expression in a punctured one-sided neighborhood of the
/// anchor, modulo finite sets: true means eventually all of the tail,
/// false means eventually none of it.
fn germ_at_anchor(expr: &SetExpr, anchor: &Q, side: Side) -> Result<bool, CoreError> {
    Ok(match expr {
        SetExpr::Empty => false,
        SetExpr::Full => true,
        SetExpr::Points(_) => false,
        SetExpr::Interval(iv) => {
            match side {
                // (p, p+d) ⊆ iv for small d: lower bound at or below the
                // anchor, upper bound strictly above it.
                Side::Right => {
                    let lo_ok = match &iv.lo {
                        None => true,
                        Some(lo) => lo <= anchor,
                    };
                    let hi_ok = match &iv.hi {
                        None => true,
                        Some(hi) => hi > anchor,
                    };
                    lo_ok && hi_ok
                }
                Side::Left => {
                    let lo_ok = match &iv.lo {
                        None => true,
                        Some(lo) => lo < anchor,
                    };
                    let hi_ok = match &iv.hi {
                        None => true,
                        Some(hi) => hi >= anchor,
                    };
                    lo_ok && hi_ok
                }
            }
        }
        SetExpr::Residue { .. } => {
            return Err(CoreError::Invalid(
                "residue leaf reached a rational-ground germ".into(),
            ))
        }
        SetExpr::Union(a, b) => {
            germ_at_anchor(a, anchor, side)? || germ_at_anchor(b, anchor, side)?
        }
        SetExpr::Intersection(a, b) => {
            germ_at_anchor(a, anchor, side)? && germ_at_anchor(b, anchor, side)?
        }
        SetExpr::Difference(a, b) => {
            germ_at_anchor(a, anchor, side)? && !germ_at_anchor(b, anchor, side)?
        }
        SetExpr::Complement(a) => !germ_at_anchor(a, anchor, side)?,
    })
}

#[derive(Clone, Copy)]
enum Direction {
    Plus,
    Minus,
}

fn collect_moduli(expr: &SetExpr, into: &mut BTreeSet<BigInt>) {
    match expr {
        SetExpr::Residue { modulus, .. } => {
            into.insert(modulus.clone());
        }
        SetExpr::Union(a, b) | SetExpr::Intersection(a, b) | SetExpr::Difference(a, b) => {
            collect_moduli(a, into);
            collect_moduli(b, into);
        }
        SetExpr::Complement(a) => collect_moduli(a, into),
        _ => {}
    }
}

fn germ_at_infinity(expr: &SetExpr, dir: Direction) -> Result<FilterValue, CoreError> {
    let mut moduli = BTreeSet::new();
    collect_moduli(expr, &mut moduli);
    let mut period = BigInt::one();
    for m in &moduli {
        period = period.lcm(m);
        if period > BigInt::from(10_000) {
            return Err(CoreError::Invalid(
                "residue moduli too large to analyze exactly".into(),
            ));
        }
    }
    let period_u: u64 = u64::try_from(&period)
        .map_err(|_| CoreError::Invalid("residue period out of range".into()))?;
    let mut any_full = false;
    let mut any_empty = false;
    for class in 0..period_u {
        if class_germ_at_infinity(expr, dir, &BigInt::from(class))? {
            any_full = true;
        } else {
            any_empty = true;
        }
    }
    Ok(match (any_full, any_empty) {
        (true, false) => FilterValue::One,
        (false, true) => FilterValue::Zero,
        _ => FilterValue::Undecided,
    })
}

/// Germ of the expression along an arithmetic progression toward the chosen
/// infinity. The progression is `class` modulo the lcm of the expression's
/// moduli, so each leaf is eventually-all or eventually-none on it and the
/// computation is exact.
fn class_germ_at_infinity(
    expr: &SetExpr,
    dir: Direction,
    class: &BigInt,
) -> Result<bool, CoreError> {
    Ok(match expr {
        SetExpr::Empty => false,
        SetExpr::Full => true,
        SetExpr::Points(_) => false,
        SetExpr::Interval(iv) => match dir {
            Direction::Plus => iv.hi.is_none(),
            Direction::Minus => iv.lo.is_none(),
        },
        SetExpr::Residue { modulus, residue } => {
            // the modulus divides the progression period, so membership is
            // constant along the progression
            (class - residue).mod_floor(modulus).is_zero()
        }
        SetExpr::Union(a, b) => {
            class_germ_at_infinity(a, dir, class)? || class_germ_at_infinity(b, dir, class)?
        }
        SetExpr::Intersection(a, b) => {
            class_germ_at_infinity(a, dir, class)? && class_germ_at_infinity(b, dir, class)?
        }
        SetExpr::Difference(a, b) => {
            class_germ_at_infinity(a, dir, class)? && !class_germ_at_infinity(b, dir, class)?
        }
        SetExpr::Complement(a) => !class_germ_at_infinity(a, dir, class)?,
    })
}

/// Rejects registries with duplicate ids or distinct ids sharing one tail
/// family. Distinct families here have eventually disjoint tails, which is
/// what makes coefficientwise reasoning on combinations of functionals sound.
pub fn check_distinct(filters: &[FilterFunctional]) -> Result<(), CoreError> {
    for (i, a) in filters.iter().enumerate() {
        for b in filters.iter().skip(i + 1) {
            if a.id == b.id {
                return Err(CoreError::ConflictingFilter { id: a.id.clone() });
            }
            if a.family == b.family {
                return Err(CoreError::Invalid(format!(
                    "filters {} and {} share the same tail family",
                    a.id, b.id
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::Point;
    use crate::rat::q;
    use crate::set::member;

    fn unit() -> GroundSpace {
        GroundSpace::unit_interval("X")
    }

    fn eta_origin(g: &GroundSpace) -> FilterFunctional {
        FilterFunctional::new("eta0plus", TailFamily::LeftOfPoint { point: q(0, 1) }, g).unwrap()
    }

    #[test]
    fn small_right_neighborhoods_of_zero_get_mass_one() {
        let g = unit();
        let eta = eta_origin(&g);
        for denom in [2, 10, 1000] {
            let e = SetExpr::open_interval(q(0, 1), q(1, denom));
            assert_eq!(filter_eval(&g, &eta, &e).unwrap(), FilterValue::One);
        }
    }

    #[test]
    fn finite_sets_get_mass_zero() {
        let g = unit();
        let eta = eta_origin(&g);
        let e = SetExpr::points([Point::rational(1, 4), Point::rational(1, 1000)]);
        assert_eq!(filter_eval(&g, &eta, &e).unwrap(), FilterValue::Zero);
        assert_eq!(
            filter_eval(&g, &eta, &SetExpr::singleton(Point::rational(1, 4))).unwrap(),
            FilterValue::Zero
        );
    }

    #[test]
    fn full_and_empty() {
        let g = unit();
        let eta = eta_origin(&g);
        assert_eq!(
            filter_eval(&g, &eta, &SetExpr::Full).unwrap(),
            FilterValue::One
        );
        assert_eq!(
            filter_eval(&g, &eta, &SetExpr::Empty).unwrap(),
            FilterValue::Zero
        );
    }

    #[test]
    fn finite_exceptions_are_absorbed() {
        let g = unit();
        let eta = eta_origin(&g);
        let removed = SetExpr::points([
            Point::rational(1, 10),
            Point::rational(1, 100),
            Point::rational(1, 1000),
        ]);
        let e = SetExpr::open_interval(q(0, 1), q(1, 1)).difference(removed);
        assert_eq!(filter_eval(&g, &eta, &e).unwrap(), FilterValue::One);
    }

    #[test]
    fn residue_classes_at_infinity_are_undecided() {
        let z = GroundSpace::integers("Z");
        let eta = FilterFunctional::new("etaInf", TailFamily::GeqThreshold, &z).unwrap();
        let evens = SetExpr::residue(2, 0);
        assert_eq!(
            filter_eval(&z, &eta, &evens).unwrap(),
            FilterValue::Undecided
        );
        // the union of both classes is decided again
        let both = evens.clone().union(SetExpr::residue(2, 1));
        assert_eq!(filter_eval(&z, &eta, &both).unwrap(), FilterValue::One);
        // bounded sets are decided zero
        let bounded = SetExpr::Interval(Interval::closed(q(0, 1), q(100, 1)));
        assert_eq!(filter_eval(&z, &eta, &bounded).unwrap(), FilterValue::Zero);
        // upper rays are decided one
        let ray = SetExpr::Interval(Interval::at_least(q(37, 1)));
        assert_eq!(filter_eval(&z, &eta, &ray).unwrap(), FilterValue::One);
    }

    #[test]
    fn decided_disjoint_additivity_samples() {
        let g = unit();
        let eta = eta_origin(&g);
        let a = SetExpr::open_interval(q(0, 1), q(1, 3));
        let b = SetExpr::Interval(Interval::closed(q(1, 3), q(1, 1)));
        let u = a.clone().union(b.clone());
        let va = filter_eval(&g, &eta, &a).unwrap();
        let vb = filter_eval(&g, &eta, &b).unwrap();
        let vu = filter_eval(&g, &eta, &u).unwrap();
        assert_eq!(va, FilterValue::One);
        assert_eq!(vb, FilterValue::Zero);
        assert_eq!(vu, FilterValue::One);
    }

    #[test]
    fn tails_are_nested_and_inside_the_family_region() {
        let g = unit();
        let eta = eta_origin(&g);
        for k in 1..6u64 {
            let outer = eta.tail(k);
            let inner = eta.tail(k + 1);
            assert!(crate::set::is_subset(&g, &inner, &outer).unwrap());
            assert_eq!(filter_eval(&g, &eta, &outer).unwrap(), FilterValue::One);
        }
        // spot check: the tail excludes its anchor
        assert!(!member(&g, &Point::rational(0, 1), &eta.tail(3)).unwrap());
    }

    #[test]
    fn invalid_families_are_rejected() {
        let g = unit();
        let z = GroundSpace::integers("Z");
        let f = GroundSpace::finite_labeled("S", vec!["a".into()]).unwrap();
        assert!(FilterFunctional::new("x", TailFamily::GeqThreshold, &g).is_err());
        assert!(
            FilterFunctional::new("x", TailFamily::LeftOfPoint { point: q(1, 1) }, &g).is_err()
        );
        assert!(
            FilterFunctional::new("x", TailFamily::LeftOfPoint { point: q(0, 1) }, &z).is_err()
        );
        assert!(FilterFunctional::new("x", TailFamily::GeqThreshold, &f).is_err());
    }

    #[test]
    fn registry_conflicts_are_rejected() {
        let g = unit();
        let a = eta_origin(&g);
        let b =
            FilterFunctional::new("other", TailFamily::LeftOfPoint { point: q(0, 1) }, &g).unwrap();
        let c = FilterFunctional::new("eta1minus", TailFamily::RightOfPoint { point: q(1, 1) }, &g)
            .unwrap();
        assert!(check_distinct(&[a.clone(), c.clone()]).is_ok());
        assert!(check_distinct(&[a.clone(), a.clone()]).is_err());
        assert!(check_distinct(&[a, b]).is_err());
    }

    #[test]
    fn monotonicity_on_decided_pairs() {
        let g = unit();
        let eta = eta_origin(&g);
        let small = SetExpr::open_interval(q(0, 1), q(1, 8));
        let big = SetExpr::open_interval(q(0, 1), q(1, 2));
        assert!(crate::set::is_subset(&g, &small, &big).unwrap());
        assert_eq!(filter_eval(&g, &eta, &small).unwrap(), FilterValue::One);
        assert_eq!(filter_eval(&g, &eta, &big).unwrap(), FilterValue::One);
    }

    #[test]
    fn leq_threshold_points_to_minus_infinity() {
        let z = GroundSpace::integers("Z");
        let eta = FilterFunctional::new("etaNegInf", TailFamily::LeqThreshold, &z).unwrap();
        let low_ray = SetExpr::Interval(Interval::at_most(q(-5, 1)));
        assert_eq!(filter_eval(&z, &eta, &low_ray).unwrap(), FilterValue::One);
        let high_ray = SetExpr::Interval(Interval::at_least(q(0, 1)));
        assert_eq!(filter_eval(&z, &eta, &high_ray).unwrap(), FilterValue::Zero);
    }
}
