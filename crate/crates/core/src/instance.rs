//! Two point families and the weights of the inequality relating them.
//!
//! The inequality under study is
//! `λ·Σᵢ ‖v − cᵢ‖ ≥ λ′·Σⱼ ‖v − c′ⱼ‖` for all `v`, where the `cᵢ` are the
//! *primary* points and the `c′ⱼ` the *secondary* points.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact_arith::{format_rational, Rational};
use crate::geometry::Point2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Primary,
    Secondary,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Primary => "primary",
            Family::Secondary => "secondary",
        }
    }
}

/// A point's identity within an instance: `c3` is the third primary point,
/// `c1'` the first secondary point (labels are 1-based, indices 0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    pub family: Family,
    pub index: usize,
}

impl Label {
    pub fn primary(index: usize) -> Self {
        Label {
            family: Family::Primary,
            index,
        }
    }

    pub fn secondary(index: usize) -> Self {
        Label {
            family: Family::Secondary,
            index,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Primary => write!(f, "c{}", self.index + 1),
            Family::Secondary => write!(f, "c{}'", self.index + 1),
        }
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidOrdering(format!("unknown label {s:?}"));
        let s = s.trim();
        let body = s.strip_prefix('c').ok_or_else(bad)?;
        let (digits, family) = match body.strip_suffix('\'').or_else(|| body.strip_suffix('′')) {
            Some(d) => (d, Family::Secondary),
            None => (body, Family::Primary),
        };
        let n: usize = digits.parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(bad());
        }
        Ok(Label {
            family,
            index: n - 1,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    primaries: Vec<Point2>,
    secondaries: Vec<Point2>,
}

impl Instance {
    /// Needs at least one primary point. The secondary family may be empty
    /// for ordering-only work; every certification stage rejects that case.
    pub fn new(primaries: Vec<Point2>, secondaries: Vec<Point2>) -> Result<Self> {
        if primaries.is_empty() {
            return Err(Error::EmptyFamily("primary"));
        }
        Ok(Instance {
            primaries,
            secondaries,
        })
    }

    pub fn primaries(&self) -> &[Point2] {
        &self.primaries
    }

    pub fn secondaries(&self) -> &[Point2] {
        &self.secondaries
    }

    pub fn n(&self) -> usize {
        self.primaries.len()
    }

    pub fn m(&self) -> usize {
        self.secondaries.len()
    }

    pub fn len(&self) -> usize {
        self.n() + self.m()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn family(&self, family: Family) -> &[Point2] {
        match family {
            Family::Primary => &self.primaries,
            Family::Secondary => &self.secondaries,
        }
    }

    pub fn point(&self, label: Label) -> &Point2 {
        &self.family(label.family)[label.index]
    }

    /// Primaries first, then secondaries; this is also the sorted label order.
    pub fn labels(&self) -> Vec<Label> {
        (0..self.n())
            .map(Label::primary)
            .chain((0..self.m()).map(Label::secondary))
            .collect()
    }

    pub fn all_points(&self) -> Vec<Point2> {
        self.primaries
            .iter()
            .chain(&self.secondaries)
            .cloned()
            .collect()
    }

    pub fn translate(&self, shift: &Point2) -> Instance {
        Instance {
            primaries: self.primaries.iter().map(|p| p + shift).collect(),
            secondaries: self.secondaries.iter().map(|p| p + shift).collect(),
        }
    }

    pub(crate) fn require_secondaries(&self) -> Result<()> {
        if self.secondaries.is_empty() {
            return Err(Error::EmptyFamily("secondary"));
        }
        Ok(())
    }
}

/// Weights `(λ, λ′)` of the two sides, normalized so that `n·λ = m·λ′`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weights {
    pub primary: Rational,
    pub secondary: Rational,
}

impl Weights {
    pub fn new(primary: Rational, secondary: Rational) -> Self {
        Weights { primary, secondary }
    }

    /// `(1/n, 1/m)`: the mean-distance inequality.
    pub fn uniform(inst: &Instance) -> Result<Self> {
        inst.require_secondaries()?;
        Ok(Weights {
            primary: Rational::new(BigInt::from(1), BigInt::from(inst.n())),
            secondary: Rational::new(BigInt::from(1), BigInt::from(inst.m())),
        })
    }

    pub fn check(&self, inst: &Instance) -> Result<()> {
        let zero = Rational::zero();
        if self.primary <= zero || self.secondary <= zero {
            return Err(Error::NonPositiveWeight(
                format_rational(&self.primary),
                format_rational(&self.secondary),
            ));
        }
        let total = |k: usize, w: &Rational| Rational::from_integer(BigInt::from(k)) * w;
        if total(inst.n(), &self.primary) != total(inst.m(), &self.secondary) {
            return Err(Error::WeightNormalization {
                n: inst.n(),
                m: inst.m(),
                primary: format_rational(&self.primary),
                secondary: format_rational(&self.secondary),
            });
        }
        Ok(())
    }

    pub fn of(&self, family: Family) -> &Rational {
        match family {
            Family::Primary => &self.primary,
            Family::Secondary => &self.secondary,
        }
    }
}

/// The five-point instance bundled as `data/paper.inst`, weights `(1/3, 1/2)`.
pub fn five_point_instance() -> (Instance, Weights) {
    let r = |p: i64, q: i64| Rational::new(p.into(), q.into());
    let inst = Instance::new(
        vec![
            Point2::from_ints(-1, -1),
            Point2::from_ints(1, -1),
            Point2::from_ints(0, 2),
        ],
        vec![
            Point2::new(r(0, 1), r(11, 10)),
            Point2::new(r(0, 1), r(-11, 10)),
        ],
    )
    .expect("non-empty families");
    let w = Weights::new(r(1, 3), r(1, 2));
    (inst, w)
}
