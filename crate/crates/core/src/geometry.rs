//! Exact planar predicates: orientation, convex hulls and hull membership.

use std::fmt;
use std::ops::{Add, Sub};

use num_bigint::Sign;
use num_traits::Zero;

use crate::error::Result;
use crate::exact_arith::{format_rational, sign_of, Enclosure, HighPrecision, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point2 {
    pub x: Rational,
    pub y: Rational,
}

impl Point2 {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point2 { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point2::new(
            Rational::from_integer(x.into()),
            Rational::from_integer(y.into()),
        )
    }

    pub fn origin() -> Self {
        Point2::new(Rational::zero(), Rational::zero())
    }

    pub fn scale(&self, k: &Rational) -> Point2 {
        Point2::new(&self.x * k, &self.y * k)
    }

    pub fn dot(&self, other: &Point2) -> Rational {
        &self.x * &other.x + &self.y * &other.y
    }

    pub fn is_origin(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {})",
            format_rational(&self.x),
            format_rational(&self.y)
        )
    }
}

impl Add for &Point2 {
    type Output = Point2;
    fn add(self, rhs: &Point2) -> Point2 {
        Point2::new(&self.x + &rhs.x, &self.y + &rhs.y)
    }
}

impl Sub for &Point2 {
    type Output = Point2;
    fn sub(self, rhs: &Point2) -> Point2 {
        Point2::new(&self.x - &rhs.x, &self.y - &rhs.y)
    }
}

/// Ordered list of distinct points.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PointSet(Vec<Point2>);

impl PointSet {
    /// Returns `None` if a point repeats.
    pub fn new(points: Vec<Point2>) -> Option<Self> {
        let mut sorted: Vec<&Point2> = points.iter().collect();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some(PointSet(points))
    }

    pub fn as_slice(&self) -> &[Point2] {
        &self.0
    }
}

pub fn norm_squared(p: &Point2) -> Rational {
    p.dot(p)
}

pub fn distance_squared(a: &Point2, b: &Point2) -> Rational {
    norm_squared(&(a - b))
}

/// Enclosure of the Euclidean distance `‖a − b‖`.
pub fn distance(hp: &HighPrecision, a: &Point2, b: &Point2) -> Result<Enclosure> {
    hp.sqrt(&distance_squared(a, b))
}

/// Sum of distances from `x` to every point of `multiset`.
pub fn distance_sum(hp: &HighPrecision, multiset: &[Point2], x: &Point2) -> Result<Enclosure> {
    multiset
        .iter()
        .try_fold(hp.zero(), |acc, v| Ok(acc + distance(hp, v, x)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Left,
    Right,
    Collinear,
}

/// `(b − a) × (c − a)`.
pub fn cross(a: &Point2, b: &Point2, c: &Point2) -> Rational {
    (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x)
}

pub fn orientation(a: &Point2, b: &Point2, c: &Point2) -> Orientation {
    match sign_of(&cross(a, b, c)) {
        Sign::Plus => Orientation::Left,
        Sign::Minus => Orientation::Right,
        Sign::NoSign => Orientation::Collinear,
    }
}

/// Convex hull vertices in counterclockwise order, starting from the
/// lexicographically smallest point. Collinear boundary points are dropped;
/// a collinear input yields its two endpoints.
pub fn convex_hull(points: &[Point2]) -> Vec<Point2> {
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }

    // Andrew's monotone chain; anything that is not a strict left turn is popped.
    fn half(iter: impl Iterator<Item = Point2>) -> Vec<Point2> {
        let mut chain: Vec<Point2> = Vec::new();
        for p in iter {
            while chain.len() >= 2
                && orientation(&chain[chain.len() - 2], &chain[chain.len() - 1], &p)
                    != Orientation::Left
            {
                chain.pop();
            }
            chain.push(p);
        }
        chain.pop();
        chain
    }
    let mut hull = half(pts.iter().cloned());
    hull.extend(half(pts.into_iter().rev()));
    hull
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HullPosition {
    StrictlyOutside,
    OnBoundary,
    Inside,
}

/// Classifies `p` against the closed convex hull of `points`.
pub fn point_in_hull(p: &Point2, points: &[Point2]) -> HullPosition {
    let hull = convex_hull(points);
    match hull.len() {
        0 => HullPosition::StrictlyOutside,
        1 => {
            if &hull[0] == p {
                HullPosition::OnBoundary
            } else {
                HullPosition::StrictlyOutside
            }
        }
        2 => {
            if on_segment(p, &hull[0], &hull[1]) {
                HullPosition::OnBoundary
            } else {
                HullPosition::StrictlyOutside
            }
        }
        n => {
            let mut boundary = false;
            for i in 0..n {
                match orientation(&hull[i], &hull[(i + 1) % n], p) {
                    Orientation::Right => return HullPosition::StrictlyOutside,
                    Orientation::Collinear => boundary = true,
                    Orientation::Left => {}
                }
            }
            // Collinear with an edge line but left of all others means on that edge.
            if boundary {
                HullPosition::OnBoundary
            } else {
                HullPosition::Inside
            }
        }
    }
}

/// Closed segment membership.
pub fn on_segment(p: &Point2, a: &Point2, b: &Point2) -> bool {
    orientation(a, b, p) == Orientation::Collinear
        && (&p.x - &a.x) * (&p.x - &b.x) <= Rational::zero()
        && (&p.y - &a.y) * (&p.y - &b.y) <= Rational::zero()
}
