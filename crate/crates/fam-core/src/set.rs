//! Decidable set expressions over a discrete ground space.
//!
//! Leaves are intervals with rational endpoints, finite point sets, and (on
//! integer grounds) residue classes; nodes are the boolean operations. For
//! this class, membership of any expression is piecewise constant between
//! consecutive "critical" values and eventually periodic on integer grounds,
//! so a finite witness battery decides extensional questions exactly rather
//! than by sampling.

use num::bigint::BigInt;
use num::integer::Integer;
use num::{One, Zero};
use std::collections::BTreeSet;

use crate::error::CoreError;
use crate::ground::{GroundKind, GroundSpace, Point};
use crate::rat::Q;

/// An interval with optional (i.e. possibly infinite) rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    pub lo: Option<Q>,
    pub lo_closed: bool,
    pub hi: Option<Q>,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: Option<Q>, lo_closed: bool, hi: Option<Q>, hi_closed: bool) -> Self {
        Interval {
            lo,
            lo_closed,
            hi,
            hi_closed,
        }
    }

    pub fn open(lo: Q, hi: Q) -> Self {
        Interval::new(Some(lo), false, Some(hi), false)
    }

    pub fn closed(lo: Q, hi: Q) -> Self {
        Interval::new(Some(lo), true, Some(hi), true)
    }

    /// `[lo, +inf)`.
    pub fn at_least(lo: Q) -> Self {
        Interval::new(Some(lo), true, None, false)
    }

    /// `(-inf, hi]`.
    pub fn at_most(hi: Q) -> Self {
        Interval::new(None, false, Some(hi), true)
    }

    pub fn contains(&self, value: &Q) -> bool {
        let above_lo = match &self.lo {
            None => true,
            Some(lo) => {
                if self.lo_closed {
                    value >= lo
                } else {
                    value > lo
                }
            }
        };
        let below_hi = match &self.hi {
            None => true,
            Some(hi) => {
                if self.hi_closed {
                    value <= hi
                } else {
                    value < hi
                }
            }
        };
        above_lo && below_hi
    }

    fn describe(&self) -> String {
        let lo = match &self.lo {
            None => "-inf".to_string(),
            Some(v) => v.to_string(),
        };
        let hi = match &self.hi {
            None => "+inf".to_string(),
            Some(v) => v.to_string(),
        };
        format!(
            "{}{},{}{}",
            if self.lo_closed { '[' } else { '(' },
            lo,
            hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// Expression tree over the decidable subalgebra.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SetExpr {
    Empty,
    Full,
    Interval(Interval),
    Points(BTreeSet<Point>),
    /// `{ n : n ≡ residue (mod modulus) }`, integer grounds only.
    Residue {
        modulus: BigInt,
        residue: BigInt,
    },
    Union(Box<SetExpr>, Box<SetExpr>),
    Intersection(Box<SetExpr>, Box<SetExpr>),
    Difference(Box<SetExpr>, Box<SetExpr>),
    Complement(Box<SetExpr>),
}

impl SetExpr {
    pub fn interval(iv: Interval) -> Self {
        SetExpr::Interval(iv)
    }

    pub fn open_interval(lo: Q, hi: Q) -> Self {
        SetExpr::Interval(Interval::open(lo, hi))
    }

    pub fn singleton(point: Point) -> Self {
        SetExpr::Points([point].into_iter().collect())
    }

    pub fn points(points: impl IntoIterator<Item = Point>) -> Self {
        SetExpr::Points(points.into_iter().collect())
    }

    pub fn residue(modulus: i64, residue: i64) -> Self {
        SetExpr::Residue {
            modulus: BigInt::from(modulus),
            residue: BigInt::from(residue),
        }
    }

    pub fn union(self, other: SetExpr) -> Self {
        SetExpr::Union(Box::new(self), Box::new(other))
    }

    pub fn intersection(self, other: SetExpr) -> Self {
        SetExpr::Intersection(Box::new(self), Box::new(other))
    }

    pub fn difference(self, other: SetExpr) -> Self {
        SetExpr::Difference(Box::new(self), Box::new(other))
    }

    pub fn complement(self) -> Self {
        SetExpr::Complement(Box::new(self))
    }

    /// Compact one-line description for error messages.
    pub fn describe(&self) -> String {
        match self {
            SetExpr::Empty => "empty".into(),
            SetExpr::Full => "full".into(),
            SetExpr::Interval(iv) => iv.describe(),
            SetExpr::Points(ps) => {
                let mut names: Vec<String> = ps.iter().take(4).map(|p| p.to_string()).collect();
                if ps.len() > 4 {
                    names.push("...".into());
                }
                format!("{{{}}}", names.join(","))
            }
            SetExpr::Residue { modulus, residue } => format!("{residue} mod {modulus}"),
            SetExpr::Union(a, b) => format!("({} u {})", a.describe(), b.describe()),
            SetExpr::Intersection(a, b) => format!("({} n {})", a.describe(), b.describe()),
            SetExpr::Difference(a, b) => format!("({} \\ {})", a.describe(), b.describe()),
            SetExpr::Complement(a) => format!("~{}", a.describe()),
        }
    }
}

/// Membership of a represented point, under standard set semantics.
pub fn member(ground: &GroundSpace, point: &Point, expr: &SetExpr) -> Result<bool, CoreError> {
    ground.check_point(point)?;
    member_unchecked(ground, point, expr)
}

fn member_unchecked(
    ground: &GroundSpace,
    point: &Point,
    expr: &SetExpr,
) -> Result<bool, CoreError> {
    match expr {
        SetExpr::Empty => Ok(false),
        SetExpr::Full => Ok(true),
        SetExpr::Interval(iv) => match point.as_rational() {
            Some(v) => Ok(iv.contains(&v)),
            None => Err(CoreError::InvalidSetLeaf {
                leaf: iv.describe(),
                ground: ground.describe(),
            }),
        },
        SetExpr::Points(ps) => Ok(ps.contains(point)),
        SetExpr::Residue { modulus, residue } => match point {
            Point::Integer(n) => {
                if modulus <= &BigInt::zero() {
                    return Err(CoreError::Invalid(format!(
                        "residue modulus must be positive, got {modulus}"
                    )));
                }
                Ok((n - residue).mod_floor(modulus).is_zero())
            }
            _ => Err(CoreError::InvalidSetLeaf {
                leaf: expr.describe(),
                ground: ground.describe(),
            }),
        },
        SetExpr::Union(a, b) => {
            Ok(member_unchecked(ground, point, a)? || member_unchecked(ground, point, b)?)
        }
        SetExpr::Intersection(a, b) => {
            Ok(member_unchecked(ground, point, a)? && member_unchecked(ground, point, b)?)
        }
        SetExpr::Difference(a, b) => {
            Ok(member_unchecked(ground, point, a)? && !member_unchecked(ground, point, b)?)
        }
        SetExpr::Complement(a) => Ok(!member_unchecked(ground, point, a)?),
    }
}

/// Checks that every leaf of the expression is legal on the given ground.
pub fn validate_for_ground(ground: &GroundSpace, expr: &SetExpr) -> Result<(), CoreError> {
    match expr {
        SetExpr::Empty | SetExpr::Full => Ok(()),
        SetExpr::Interval(iv) => match ground.kind() {
            GroundKind::UnitIntervalRationals | GroundKind::Integers => Ok(()),
            GroundKind::FiniteLabeled => Err(CoreError::InvalidSetLeaf {
                leaf: iv.describe(),
                ground: ground.describe(),
            }),
        },
        SetExpr::Points(ps) => {
            for p in ps {
                ground.check_point(p)?;
            }
            Ok(())
        }
        SetExpr::Residue { modulus, .. } => {
            if ground.kind() != GroundKind::Integers {
                return Err(CoreError::InvalidSetLeaf {
                    leaf: expr.describe(),
                    ground: ground.describe(),
                });
            }
            if modulus <= &BigInt::zero() {
                return Err(CoreError::Invalid(format!(
                    "residue modulus must be positive, got {modulus}"
                )));
            }
            Ok(())
        }
        SetExpr::Union(a, b) | SetExpr::Intersection(a, b) | SetExpr::Difference(a, b) => {
            validate_for_ground(ground, a)?;
            validate_for_ground(ground, b)
        }
        SetExpr::Complement(a) => validate_for_ground(ground, a),
    }
}

/// Translates an integer-ground expression by an offset.
pub fn translate(expr: &SetExpr, offset: &BigInt) -> Result<SetExpr, CoreError> {
    let shift_q = Q::from_integer(offset.clone());
    Ok(match expr {
        SetExpr::Empty => SetExpr::Empty,
        SetExpr::Full => SetExpr::Full,
        SetExpr::Interval(iv) => SetExpr::Interval(Interval::new(
            iv.lo.as_ref().map(|v| v + &shift_q),
            iv.lo_closed,
            iv.hi.as_ref().map(|v| v + &shift_q),
            iv.hi_closed,
        )),
        SetExpr::Points(ps) => {
            let mut moved = BTreeSet::new();
            for p in ps {
                match p {
                    Point::Integer(n) => {
                        moved.insert(Point::Integer(n + offset));
                    }
                    other => {
                        return Err(CoreError::Invalid(format!(
                            "cannot translate non-integer point {other}"
                        )))
                    }
                }
            }
            SetExpr::Points(moved)
        }
        SetExpr::Residue { modulus, residue } => SetExpr::Residue {
            modulus: modulus.clone(),
            residue: (residue + offset).mod_floor(modulus),
        },
        SetExpr::Union(a, b) => SetExpr::Union(
            Box::new(translate(a, offset)?),
            Box::new(translate(b, offset)?),
        ),
        SetExpr::Intersection(a, b) => SetExpr::Intersection(
            Box::new(translate(a, offset)?),
            Box::new(translate(b, offset)?),
        ),
        SetExpr::Difference(a, b) => SetExpr::Difference(
            Box::new(translate(a, offset)?),
            Box::new(translate(b, offset)?),
        ),
        SetExpr::Complement(a) => SetExpr::Complement(Box::new(translate(a, offset)?)),
    })
}

fn collect_rational_criticals(expr: &SetExpr, into: &mut BTreeSet<Q>) {
    match expr {
        SetExpr::Empty | SetExpr::Full | SetExpr::Residue { .. } => {}
        SetExpr::Interval(iv) => {
            if let Some(lo) = &iv.lo {
                into.insert(lo.clone());
            }
            if let Some(hi) = &iv.hi {
                into.insert(hi.clone());
            }
        }
        SetExpr::Points(ps) => {
            for p in ps {
                if let Point::Rational(v) = p {
                    into.insert(v.clone());
                }
            }
        }
        SetExpr::Union(a, b) | SetExpr::Intersection(a, b) | SetExpr::Difference(a, b) => {
            collect_rational_criticals(a, into);
            collect_rational_criticals(b, into);
        }
        SetExpr::Complement(a) => collect_rational_criticals(a, into),
    }
}

fn collect_integer_criticals(
    expr: &SetExpr,
    bounds: &mut BTreeSet<BigInt>,
    moduli: &mut BTreeSet<BigInt>,
) {
    match expr {
        SetExpr::Empty | SetExpr::Full => {}
        SetExpr::Interval(iv) => {
            for bound in [&iv.lo, &iv.hi].into_iter().flatten() {
                bounds.insert(bound.floor().to_integer());
                bounds.insert(bound.ceil().to_integer());
            }
        }
        SetExpr::Points(ps) => {
            for p in ps {
                if let Point::Integer(n) = p {
                    bounds.insert(n.clone());
                }
            }
        }
        SetExpr::Residue { modulus, .. } => {
            moduli.insert(modulus.clone());
        }
        SetExpr::Union(a, b) | SetExpr::Intersection(a, b) | SetExpr::Difference(a, b) => {
            collect_integer_criticals(a, bounds, moduli);
            collect_integer_criticals(b, bounds, moduli);
        }
        SetExpr::Complement(a) => collect_integer_criticals(a, bounds, moduli),
    }
}

/// A finite point battery that decides extensional questions for the given
/// expressions exactly.
///
/// On the rational ground, membership of each expression is constant on every
/// open gap between consecutive critical values, so the criticals plus one
/// midpoint per gap witness everything. On the integer ground, membership is
/// periodic (with period lcm of the moduli) outside the critical window, so a
/// window padded by one full period on each side suffices. Finite grounds are
/// enumerated outright.
pub fn battery(ground: &GroundSpace, sets: &[&SetExpr]) -> Result<Vec<Point>, CoreError> {
    for s in sets {
        validate_for_ground(ground, s)?;
    }
    match ground.kind() {
        GroundKind::FiniteLabeled => Ok(ground
            .enumerated()
            .iter()
            .map(|l| Point::label(l.clone()))
            .collect()),
        GroundKind::UnitIntervalRationals => {
            let mut criticals: BTreeSet<Q> = BTreeSet::new();
            criticals.insert(Q::zero());
            criticals.insert(Q::one());
            for s in sets {
                collect_rational_criticals(s, &mut criticals);
            }
            criticals.retain(|v| *v >= Q::zero() && *v <= Q::one());
            let ordered: Vec<Q> = criticals.into_iter().collect();
            let mut points: Vec<Point> = Vec::new();
            for (i, v) in ordered.iter().enumerate() {
                points.push(Point::Rational(v.clone()));
                if let Some(next) = ordered.get(i + 1) {
                    points.push(Point::Rational((v + next) / Q::from_integer(2.into())));
                }
            }
            Ok(points)
        }
        GroundKind::Integers => {
            let mut bounds: BTreeSet<BigInt> = BTreeSet::new();
            let mut moduli: BTreeSet<BigInt> = BTreeSet::new();
            for s in sets {
                collect_integer_criticals(s, &mut bounds, &mut moduli);
            }
            let mut period = BigInt::one();
            for m in &moduli {
                period = period.lcm(m);
                if period > BigInt::from(10_000) {
                    return Err(CoreError::Invalid(
                        "residue moduli too large to analyze exactly".into(),
                    ));
                }
            }
            if bounds.is_empty() {
                bounds.insert(BigInt::zero());
            }
            let lo = bounds.iter().next().expect("nonempty").clone() - &period;
            let hi = bounds.iter().next_back().expect("nonempty").clone() + &period;
            let width = (&hi - &lo) + BigInt::one();
            if width > BigInt::from(100_000) {
                return Err(CoreError::Invalid(
                    "integer critical window too wide to analyze exactly".into(),
                ));
            }
            let mut points = Vec::new();
            let mut cursor = lo;
            while cursor <= hi {
                points.push(Point::Integer(cursor.clone()));
                cursor += BigInt::one();
            }
            Ok(points)
        }
    }
}

/// Exact emptiness check: the battery is complete for the expression, so an
/// unoccupied battery means an empty set.
pub fn is_empty_set(ground: &GroundSpace, expr: &SetExpr) -> Result<bool, CoreError> {
    for point in battery(ground, &[expr])? {
        if member(ground, &point, expr)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Extensional equality over the shared witness battery.
pub fn sets_equal(ground: &GroundSpace, a: &SetExpr, b: &SetExpr) -> Result<bool, CoreError> {
    for point in battery(ground, &[a, b])? {
        if member(ground, &point, a)? != member(ground, &point, b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Extensional inclusion over the shared witness battery.
pub fn is_subset(ground: &GroundSpace, a: &SetExpr, b: &SetExpr) -> Result<bool, CoreError> {
    for point in battery(ground, &[a, b])? {
        if member(ground, &point, a)? && !member(ground, &point, b)? {
            return Ok(false);
        }
    }
    Ok(true)
}
