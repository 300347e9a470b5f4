//! Discrete ground spaces and their points.
//!
//! Every set carries the full power-set sigma-algebra, so the only structure a
//! ground space needs is a decidable, totally ordered point type. Three kinds
//! are supported: the rationals of the unit segment, the integers, and an
//! explicitly enumerated finite label set.

use num::bigint::BigInt;
use num::{One, Zero};
use std::fmt;
use std::str::FromStr;

use crate::error::CoreError;
use crate::rat::{q, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroundKind {
    UnitIntervalRationals,
    Integers,
    FiniteLabeled,
}

impl GroundKind {
    pub fn name(&self) -> &'static str {
        match self {
            GroundKind::UnitIntervalRationals => "unit-interval-rationals",
            GroundKind::Integers => "integers",
            GroundKind::FiniteLabeled => "finite-labeled-set",
        }
    }

    pub fn parse(text: &str) -> Result<Self, CoreError> {
        match text {
            "unit-interval-rationals" => Ok(GroundKind::UnitIntervalRationals),
            "integers" => Ok(GroundKind::Integers),
            "finite-labeled-set" => Ok(GroundKind::FiniteLabeled),
            other => Err(CoreError::Invalid(format!("unknown ground kind {other:?}"))),
        }
    }
}

/// A discrete state space: totally ordered points with decidable membership.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundSpace {
    kind: GroundKind,
    label: String,
    /// Enumerated points, only for the finite-labeled kind.
    points: Vec<String>,
}

/// A represented point of some ground space.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Rational(Q),
    Integer(BigInt),
    Label(String),
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Rational(v) => write!(f, "{v}"),
            Point::Integer(v) => write!(f, "{v}"),
            Point::Label(v) => write!(f, "{v}"),
        }
    }
}

impl Point {
    pub fn rational(numer: i64, denom: i64) -> Self {
        Point::Rational(q(numer, denom))
    }

    pub fn integer(value: i64) -> Self {
        Point::Integer(BigInt::from(value))
    }

    pub fn label(text: impl Into<String>) -> Self {
        Point::Label(text.into())
    }

    /// Numeric value of the point, when it has one.
    pub fn as_rational(&self) -> Option<Q> {
        match self {
            Point::Rational(v) => Some(v.clone()),
            Point::Integer(v) => Some(Q::from_integer(v.clone())),
            Point::Label(_) => None,
        }
    }
}

impl GroundSpace {
    pub fn unit_interval(label: impl Into<String>) -> Self {
        GroundSpace {
            kind: GroundKind::UnitIntervalRationals,
            label: label.into(),
            points: Vec::new(),
        }
    }

    pub fn integers(label: impl Into<String>) -> Self {
        GroundSpace {
            kind: GroundKind::Integers,
            label: label.into(),
            points: Vec::new(),
        }
    }

    pub fn finite_labeled(
        label: impl Into<String>,
        points: Vec<String>,
    ) -> Result<Self, CoreError> {
        if points.is_empty() {
            return Err(CoreError::Invalid(
                "finite-labeled ground needs at least one point".into(),
            ));
        }
        let mut seen = points.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != points.len() {
            return Err(CoreError::Invalid(
                "finite-labeled ground has duplicate points".into(),
            ));
        }
        Ok(GroundSpace {
            kind: GroundKind::FiniteLabeled,
            label: label.into(),
            points,
        })
    }

    pub fn kind(&self) -> GroundKind {
        self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Enumerated points of a finite ground; empty for the infinite kinds.
    pub fn enumerated(&self) -> &[String] {
        &self.points
    }

    pub fn is_finite(&self) -> bool {
        self.kind == GroundKind::FiniteLabeled
    }

    /// Short identifier used in error messages.
    pub fn describe(&self) -> String {
        format!("{}:{}", self.kind.name(), self.label)
    }

    pub fn contains(&self, point: &Point) -> bool {
        match (self.kind, point) {
            (GroundKind::UnitIntervalRationals, Point::Rational(v)) => {
                *v >= Q::zero() && *v <= Q::one()
            }
            (GroundKind::Integers, Point::Integer(_)) => true,
            (GroundKind::FiniteLabeled, Point::Label(l)) => self.points.iter().any(|p| p == l),
            _ => false,
        }
    }

    pub fn check_point(&self, point: &Point) -> Result<(), CoreError> {
        if self.contains(point) {
            Ok(())
        } else {
            Err(CoreError::PointOutsideGround {
                point: point.to_string(),
                ground: self.describe(),
            })
        }
    }

    pub fn check_same(&self, other: &GroundSpace) -> Result<(), CoreError> {
        if self == other {
            Ok(())
        } else {
            Err(CoreError::GroundMismatch {
                expected: self.describe(),
                found: other.describe(),
            })
        }
    }

    /// Parses a point from its text form, in the context of this ground.
    pub fn parse_point(&self, text: &str) -> Result<Point, CoreError> {
        let point = match self.kind {
            GroundKind::UnitIntervalRationals => Point::Rational(crate::rat::parse_q(text)?),
            GroundKind::Integers => {
                Point::Integer(BigInt::from_str(text.trim()).map_err(|e| {
                    CoreError::Invalid(format!("invalid integer point {text:?}: {e}"))
                })?)
            }
            GroundKind::FiniteLabeled => Point::Label(text.to_string()),
        };
        self.check_point(&point)?;
        Ok(point)
    }

    /// Small deterministic battery of points, used for representation-level
    /// cross-checks such as "vanishes on sampled singletons".
    pub fn sample_points(&self) -> Vec<Point> {
        match self.kind {
            GroundKind::UnitIntervalRationals => [
                (0, 1),
                (1, 1),
                (1, 2),
                (1, 3),
                (2, 3),
                (1, 4),
                (3, 4),
                (1, 5),
                (1, 7),
            ]
            .iter()
            .map(|&(n, d)| Point::rational(n, d))
            .collect(),
            GroundKind::Integers => (-3..=3).chain([10, -10]).map(Point::integer).collect(),
            GroundKind::FiniteLabeled => self
                .points
                .iter()
                .map(|p| Point::label(p.clone()))
                .collect(),
        }
    }
}
