//! Compact-region certificate on an integer grid.
//!
//! After scaling by `S` and clearing the weights to integers `w`, `w′`, the
//! gap function
//!
//! ```text
//! f(v) = w·Σᵢ ‖v − S·cᵢ‖ − w′·Σⱼ ‖v − S·c′ⱼ‖
//! ```
//!
//! is bounded below at integer points by the integer surrogate
//!
//! ```text
//! f̃(v) = w·Σᵢ ⌊‖v − S·cᵢ‖⌋ − w′·Σⱼ ⌈‖v − S·c′ⱼ‖⌉
//! ```
//!
//! which needs only integer square roots. `f` is `L`-Lipschitz with
//! `L = n·w + m·w′`, and every point of `[−H, H]²` lies within `√2/2` of an
//! integer point, so `min f̃ > L·√2/2` over the grid proves `f > 0` on the
//! whole box. The test `2·min² > L²` keeps that comparison in integers.

use std::ops::Range;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact_arith::{
    format_rational, isqrt_ceil, isqrt_ceil_u64, isqrt_floor, isqrt_floor_u64, Enclosure,
    HighPrecision, Rational,
};
use crate::geometry::{distance, Point2};
use crate::instance::{Family, Instance, Weights};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPoint {
    pub x: BigInt,
    pub y: BigInt,
}

impl IntPoint {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        IntPoint {
            x: x.into(),
            y: y.into(),
        }
    }

    pub fn to_point(&self) -> Point2 {
        Point2::new(
            Rational::from_integer(self.x.clone()),
            Rational::from_integer(self.y.clone()),
        )
    }

    pub fn distance_squared(&self, other: &IntPoint) -> BigInt {
        let dx = &self.x - &other.x;
        let dy = &self.y - &other.y;
        &dx * &dx + &dy * &dy
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledInstance {
    pub scale: BigInt,
    pub primary_points: Vec<IntPoint>,
    pub secondary_points: Vec<IntPoint>,
    pub primary_weight: BigInt,
    pub secondary_weight: BigInt,
}

impl ScaledInstance {
    /// `n·w + m·w′`, a Lipschitz constant for `f`.
    pub fn lipschitz(&self) -> BigInt {
        BigInt::from(self.primary_points.len()) * &self.primary_weight
            + BigInt::from(self.secondary_points.len()) * &self.secondary_weight
    }
}

/// Scales the instance by `S` and clears the weights to coprime integers.
pub fn scale_instance(
    inst: &Instance,
    weights: &Weights,
    scale: &BigInt,
) -> Result<ScaledInstance> {
    if !scale.is_positive() {
        return Err(Error::NonPositiveScale(scale.to_string()));
    }
    inst.require_secondaries()?;
    weights.check(inst)?;

    let s = Rational::from_integer(scale.clone());
    let mut families: [Vec<IntPoint>; 2] = [Vec::new(), Vec::new()];
    for label in inst.labels() {
        let p = inst.point(label);
        let mut coords = [BigInt::zero(), BigInt::zero()];
        for (slot, (axis, value)) in coords.iter_mut().zip([('x', &p.x), ('y', &p.y)]) {
            let scaled = value * &s;
            if !scaled.is_integer() {
                return Err(Error::ScaleNotClearing {
                    scale: scale.to_string(),
                    label: label.to_string(),
                    axis,
                    value: format_rational(value),
                });
            }
            *slot = scaled.to_integer();
        }
        let [x, y] = coords;
        let idx = usize::from(label.family == Family::Secondary);
        families[idx].push(IntPoint { x, y });
    }
    let [primary_points, secondary_points] = families;

    let (w, wp) = clear_weights(&weights.primary, &weights.secondary);
    Ok(ScaledInstance {
        scale: scale.clone(),
        primary_points,
        secondary_points,
        primary_weight: w,
        secondary_weight: wp,
    })
}

/// Smallest positive integers proportional to `(λ, λ′)`.
fn clear_weights(l: &Rational, lp: &Rational) -> (BigInt, BigInt) {
    let m = l.denom().lcm(lp.denom());
    let w = l.numer() * (&m / l.denom());
    let wp = lp.numer() * (&m / lp.denom());
    let g = w.gcd(&wp);
    (w / &g, wp / &g)
}

/// `w·Σ⌊‖v − pᵢ‖⌋ − w′·Σ⌈‖v − qⱼ‖⌉` in exact integers.
pub fn f_tilde(si: &ScaledInstance, v: &IntPoint) -> BigInt {
    let floors: BigInt = si
        .primary_points
        .iter()
        .map(|p| isqrt_floor(&v.distance_squared(p)).expect("squared distance is non-negative"))
        .sum();
    let ceils: BigInt = si
        .secondary_points
        .iter()
        .map(|q| isqrt_ceil(&v.distance_squared(q)).expect("squared distance is non-negative"))
        .sum();
    &si.primary_weight * floors - &si.secondary_weight * ceils
}

/// Enclosure of the real gap function `f(v)` at any rational point.
pub fn f_enclosure(si: &ScaledInstance, v: &Point2, hp: &HighPrecision) -> Result<Enclosure> {
    let side = |pts: &[IntPoint]| -> Result<Enclosure> {
        pts.iter().try_fold(
            hp.zero(),
            |acc, p| Ok(acc + distance(hp, v, &p.to_point())?),
        )
    };
    Ok(side(&si.primary_points)?.mul_int(&si.primary_weight)
        - side(&si.secondary_points)?.mul_int(&si.secondary_weight))
}

/// True iff `min_value > L·√2/2`, i.e. `min_value > 0` and `2·min_value² > L²`.
pub fn margin_check(min_value: &BigInt, lipschitz: &BigInt) -> bool {
    min_value.is_positive() && BigInt::from(2) * min_value * min_value > lipschitz * lipschitz
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridCertificate {
    pub half_width: BigInt,
    pub min_value: BigInt,
    /// Smallest `(y, x)` among the grid points attaining `min_value`.
    pub argmin: IntPoint,
    pub lipschitz: BigInt,
    pub margin_ok: bool,
}

impl GridCertificate {
    /// Unscaled radius `H/S` of the disk covered by the certificate.
    pub fn covered_radius(&self, scale: &BigInt) -> Rational {
        Rational::new(self.half_width.clone(), scale.clone())
    }
}

/// Largest coordinate magnitude the machine-word kernel accepts: with
/// `|v|, |p| ≤ B`, each squared difference is at most `4B² ≤ 2^62`.
pub const FAST_PATH_COORD_LIMIT: i64 = (1 << 30) - 1;
const FAST_PATH_WEIGHT_LIMIT: i64 = 1 << 40;

/// Whether [`scan_grid`] can evaluate `f̃` with `u64` squared distances.
pub fn fast_path_fits(si: &ScaledInstance, half_width: u64) -> bool {
    let limit = BigInt::from(FAST_PATH_COORD_LIMIT);
    let points_fit = si
        .primary_points
        .iter()
        .chain(&si.secondary_points)
        .all(|p| p.x.abs() <= limit && p.y.abs() <= limit);
    let weights_fit = [&si.primary_weight, &si.secondary_weight]
        .iter()
        .all(|w| w.to_i64().is_some_and(|w| w <= FAST_PATH_WEIGHT_LIMIT));
    points_fit && weights_fit && half_width <= FAST_PATH_COORD_LIMIT as u64
}

struct FastKernel {
    primary: Vec<(i64, i64)>,
    secondary: Vec<(i64, i64)>,
    w: i128,
    wp: i128,
}

impl FastKernel {
    fn new(si: &ScaledInstance) -> Self {
        let conv = |pts: &[IntPoint]| -> Vec<(i64, i64)> {
            pts.iter()
                .map(|p| (p.x.to_i64().unwrap(), p.y.to_i64().unwrap()))
                .collect()
        };
        FastKernel {
            primary: conv(&si.primary_points),
            secondary: conv(&si.secondary_points),
            w: si.primary_weight.to_i128().unwrap(),
            wp: si.secondary_weight.to_i128().unwrap(),
        }
    }

    #[inline]
    fn eval(&self, x: i64, y: i64) -> i128 {
        let d2 = |&(px, py): &(i64, i64)| -> u64 {
            let dx = (x - px).unsigned_abs();
            let dy = (y - py).unsigned_abs();
            dx * dx + dy * dy
        };
        let floors: u64 = self.primary.iter().map(|p| isqrt_floor_u64(d2(p))).sum();
        let ceils: u64 = self.secondary.iter().map(|q| isqrt_ceil_u64(d2(q))).sum();
        self.w * floors as i128 - self.wp * ceils as i128
    }
}

/// Progress callback: `(rows completed, total rows)`.
pub type Progress<'a> = &'a (dyn Fn(u64, u64) + Sync);

#[derive(Clone, Copy, Default)]
pub struct ScanOptions<'a> {
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
    pub progress: Option<Progress<'a>>,
}

/// Exact minimum of `f̃` over `([−H, H] ∩ ℤ)²` using the global thread pool.
pub fn scan_grid(si: &ScaledInstance, half_width: u64) -> GridCertificate {
    scan_grid_with(si, half_width, &ScanOptions::default())
}

pub fn scan_grid_with(
    si: &ScaledInstance,
    half_width: u64,
    opts: &ScanOptions<'_>,
) -> GridCertificate {
    let run = || {
        if fast_path_fits(si, half_width) {
            let kernel = FastKernel::new(si);
            let (v, x, y) = scan_rows(half_width as i64, opts, |x, y| kernel.eval(x, y));
            (BigInt::from(v), x, y)
        } else {
            scan_rows(half_width as i64, opts, |x, y| {
                f_tilde(si, &IntPoint::new(x, y))
            })
        }
    };
    let (min_value, x, y) = match opts.workers {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .expect("thread pool")
            .install(run),
        None => run(),
    };
    let lipschitz = si.lipschitz();
    GridCertificate {
        half_width: BigInt::from(half_width),
        margin_ok: margin_check(&min_value, &lipschitz),
        min_value,
        argmin: IntPoint::new(x, y),
        lipschitz,
    }
}

/// Row-major strips reduced in parallel; each strip keeps its first minimum
/// in `(y, x)` order and strips are folded in order, so the result does not
/// depend on the number of workers.
fn scan_rows<T, F>(h: i64, opts: &ScanOptions<'_>, eval: F) -> (T, i64, i64)
where
    T: Ord + Send,
    F: Fn(i64, i64) -> T + Sync,
{
    let total_rows = (2 * h + 1) as u64;
    let strips = strip_ranges(-h, h + 1, rayon::current_num_threads() * 8);
    let done = AtomicU64::new(0);

    let strip_minima: Vec<(T, i64, i64)> = strips
        .into_par_iter()
        .map(|rows| {
            let mut best: Option<(T, i64, i64)> = None;
            for y in rows {
                for x in -h..=h {
                    let v = eval(x, y);
                    if best.as_ref().is_none_or(|(b, _, _)| v < *b) {
                        best = Some((v, x, y));
                    }
                }
                let finished = done.fetch_add(1, AtomicOrdering::Relaxed) + 1;
                if let Some(progress) = opts.progress {
                    progress(finished, total_rows);
                }
            }
            best.expect("strips are non-empty")
        })
        .collect();

    strip_minima
        .into_iter()
        .reduce(|acc, cand| if cand.0 < acc.0 { cand } else { acc })
        .expect("grid has at least one row")
}

fn strip_ranges(start: i64, end: i64, target: usize) -> Vec<Range<i64>> {
    let rows = (end - start) as usize;
    let count = target.clamp(1, rows);
    let base = rows / count;
    let extra = rows % count;
    let mut out = Vec::with_capacity(count);
    let mut y = start;
    for i in 0..count {
        let len = (base + usize::from(i < extra)) as i64;
        out.push(y..y + len);
        y += len;
    }
    out
}

/// `⌈S·ρ⌉`, the default half-width covering the far-field radius.
pub fn default_half_width(scale: &BigInt, rho: &Rational) -> BigInt {
    let t = rho * Rational::from_integer(scale.clone());
    Integer::div_ceil(t.numer(), t.denom())
}
