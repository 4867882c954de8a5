//! Randomized search for a multiset `V` realizing an ordering as strictly
//! increasing distance sums `D_V`.
//!
//! The search itself runs in `f64`; a candidate is only reported as a
//! witness after its distance sums have been enclosed in fixed-point
//! arithmetic and every consecutive pair separated. The search is
//! one-sided: failing to find a witness proves nothing.

use num_traits::FromPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::Ordering;
use crate::error::Result;
use crate::exact_arith::{Enclosure, HighPrecision, Rational};
use crate::geometry::{distance_sum, Point2};
use crate::instance::Instance;

pub const DEFAULT_WITNESS_DIGITS: u32 = 100;
/// Precision doublings tried before giving up on overlapping enclosures.
pub const WITNESS_RETRIES: u32 = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessBudget {
    pub restarts: usize,
    pub max_multiset_size: usize,
    /// Coordinate-descent sweeps per restart.
    pub descent_sweeps: u32,
    pub seed: u64,
    pub digits: u32,
    /// Side of the sampling box as a multiple of the instance diameter.
    pub box_scale: f64,
}

impl Default for WitnessBudget {
    fn default() -> Self {
        WitnessBudget {
            restarts: 100,
            max_multiset_size: 3,
            descent_sweeps: 60,
            seed: 0,
            digits: DEFAULT_WITNESS_DIGITS,
            box_scale: 10.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessVerdict {
    Witnessed,
    /// Reserved: numerics never establish this.
    NotWitnessed,
    Inconclusive,
}

impl WitnessVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            WitnessVerdict::Witnessed => "WITNESSED",
            WitnessVerdict::NotWitnessed => "NOT_WITNESSED",
            WitnessVerdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Clone, Debug)]
pub struct WitnessAttempt {
    pub multiset: Vec<Point2>,
    /// `D_V` of each point, in ordering order.
    pub distance_sums: Vec<Enclosure>,
    pub verdict: WitnessVerdict,
    /// Restart that produced the witness, if any.
    pub restart: Option<usize>,
}

/// Checks whether `multiset` witnesses `ord`, doubling the working precision
/// up to [`WITNESS_RETRIES`] times while consecutive enclosures overlap.
pub fn verify_witness(
    inst: &Instance,
    ord: &Ordering,
    multiset: &[Point2],
    digits: u32,
) -> Result<(WitnessVerdict, Vec<Enclosure>)> {
    let points = ord.points(inst);
    let mut sums = Vec::new();
    for retry in 0..=WITNESS_RETRIES {
        let hp = HighPrecision::new(digits.max(1) << retry);
        sums = points
            .iter()
            .map(|p| distance_sum(&hp, multiset, p))
            .collect::<Result<Vec<_>>>()?;
        if multiset.is_empty() && sums.len() > 1 {
            break;
        }
        if sums.windows(2).all(|w| w[0].strictly_below(&w[1])) {
            return Ok((WitnessVerdict::Witnessed, sums));
        }
        // a pair already separated the wrong way will not improve
        if sums.windows(2).any(|w| w[1].strictly_below(&w[0])) {
            break;
        }
    }
    Ok((WitnessVerdict::Inconclusive, sums))
}

struct Landscape {
    points: Vec<(f64, f64)>,
    center: (f64, f64),
    diameter: f64,
}

impl Landscape {
    fn new(inst: &Instance, ord: &Ordering) -> Self {
        let to_f = |p: &Point2| {
            use num_traits::ToPrimitive;
            (p.x.to_f64().unwrap_or(0.0), p.y.to_f64().unwrap_or(0.0))
        };
        let points: Vec<(f64, f64)> = ord.points(inst).into_iter().map(to_f).collect();
        let all: Vec<(f64, f64)> = inst.all_points().iter().map(to_f).collect();
        let k = all.len() as f64;
        let center = (
            all.iter().map(|p| p.0).sum::<f64>() / k,
            all.iter().map(|p| p.1).sum::<f64>() / k,
        );
        let mut diameter: f64 = 0.0;
        for a in &all {
            for b in &all {
                diameter = diameter.max((a.0 - b.0).hypot(a.1 - b.1));
            }
        }
        Landscape {
            points,
            center,
            diameter: if diameter > 0.0 { diameter } else { 1.0 },
        }
    }

    /// Smallest consecutive gap `D_V(p_{k+1}) − D_V(p_k)`; positive iff the
    /// ordering is realized (in floating point).
    fn margin(&self, v: &[(f64, f64)]) -> f64 {
        let d = |p: &(f64, f64)| v.iter().map(|q| (p.0 - q.0).hypot(p.1 - q.1)).sum::<f64>();
        let sums: Vec<f64> = self.points.iter().map(d).collect();
        sums.windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }
}

fn descend(
    land: &Landscape,
    budget: &WitnessBudget,
    rng: &mut ChaCha8Rng,
) -> (Vec<(f64, f64)>, f64) {
    let size = rng.gen_range(1..=budget.max_multiset_size.max(1));
    let half = 0.5 * budget.box_scale * land.diameter;
    let mut v: Vec<(f64, f64)> = (0..size)
        .map(|_| {
            (
                land.center.0 + rng.gen_range(-half..=half),
                land.center.1 + rng.gen_range(-half..=half),
            )
        })
        .collect();
    let mut best = land.margin(&v);
    let mut step = 0.25 * land.diameter;
    let healthy = 1e-6 * land.diameter;

    for _ in 0..budget.descent_sweeps {
        if best > healthy || step < 1e-12 * land.diameter {
            break;
        }
        let mut improved = false;
        for i in 0..v.len() {
            for axis in 0..2 {
                for dir in [1.0, -1.0] {
                    let mut trial = v.clone();
                    if axis == 0 {
                        trial[i].0 += dir * step;
                    } else {
                        trial[i].1 += dir * step;
                    }
                    let m = land.margin(&trial);
                    if m > best {
                        best = m;
                        v = trial;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (v, best)
}

/// Runs `budget.restarts` independent restarts in parallel; the witness from
/// the lowest restart index wins, so the result does not depend on thread
/// scheduling.
pub fn search_witness(
    inst: &Instance,
    ord: &Ordering,
    budget: &WitnessBudget,
) -> Result<WitnessAttempt> {
    let inconclusive = WitnessAttempt {
        multiset: Vec::new(),
        distance_sums: Vec::new(),
        verdict: WitnessVerdict::Inconclusive,
        restart: None,
    };
    if budget.restarts == 0 {
        return Ok(inconclusive);
    }
    let land = Landscape::new(inst, ord);
    let found = (0..budget.restarts)
        .into_par_iter()
        .map(|restart| -> Result<Option<WitnessAttempt>> {
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
            rng.set_stream(restart as u64);
            let (v, margin) = descend(&land, budget, &mut rng);
            if margin.is_nan() || margin <= 0.0 {
                return Ok(None);
            }
            let multiset: Vec<Point2> = v
                .iter()
                .map(|&(x, y)| {
                    Point2::new(
                        Rational::from_f64(x).expect("finite coordinate"),
                        Rational::from_f64(y).expect("finite coordinate"),
                    )
                })
                .collect();
            let (verdict, distance_sums) = verify_witness(inst, ord, &multiset, budget.digits)?;
            Ok(
                (verdict == WitnessVerdict::Witnessed).then_some(WitnessAttempt {
                    multiset,
                    distance_sums,
                    verdict,
                    restart: Some(restart),
                }),
            )
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    match found {
        Some(Ok(Some(attempt))) => Ok(attempt),
        Some(Err(e)) => Err(e),
        _ => Ok(inconclusive),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{rat, rat_int};
    use crate::instance::five_point_instance;
    use crate::ordering::{exclusion_report, is_protrusive};

    #[test]
    fn far_point_on_axis_ties() {
        // c1 and c2 are equidistant from (0, 100), so no strict ordering
        let (inst, _) = five_point_instance();
        let ord = Ordering::parse(&inst, "c3,c1',c1,c2,c2'").unwrap();
        let v = [Point2::from_ints(0, 100)];
        let (verdict, sums) = verify_witness(&inst, &ord, &v, 50).unwrap();
        assert_eq!(verdict, WitnessVerdict::Inconclusive);
        assert_eq!(sums[2], sums[3]);
    }

    #[test]
    fn nudged_far_point_witnesses() {
        let (inst, _) = five_point_instance();
        let ord = Ordering::parse(&inst, "c3,c1',c2,c1,c2'").unwrap();
        let v = [Point2::new(rat(1, 10), rat_int(100))];
        let (verdict, sums) = verify_witness(&inst, &ord, &v, 50).unwrap();
        assert_eq!(verdict, WitnessVerdict::Witnessed);
        // ‖v − c3‖ = √9604.01
        assert!(sums[0].lower() > rat_int(98) && sums[0].upper() < rat(980001, 10000));
    }

    #[test]
    fn two_points_single_witness() {
        let a = Point2::from_ints(0, 0);
        let b = Point2::from_ints(3, 4);
        let inst = Instance::new(vec![a.clone()], vec![b]).unwrap();
        let ord = Ordering::parse(&inst, "c1,c1'").unwrap();
        let (verdict, sums) = verify_witness(&inst, &ord, &[a], 20).unwrap();
        assert_eq!(verdict, WitnessVerdict::Witnessed);
        assert!(sums[1].contains(&rat_int(5)));
    }

    #[test]
    fn search_finds_easy_ordering() {
        let (inst, _) = five_point_instance();
        let ord = Ordering::parse(&inst, "c3,c1',c2,c1,c2'").unwrap();
        let attempt = search_witness(&inst, &ord, &WitnessBudget::default()).unwrap();
        assert_eq!(attempt.verdict, WitnessVerdict::Witnessed);
        let (again, _) = verify_witness(&inst, &ord, &attempt.multiset, 100).unwrap();
        assert_eq!(again, WitnessVerdict::Witnessed);
    }

    #[test]
    fn search_is_deterministic() {
        let (inst, _) = five_point_instance();
        let ord = Ordering::parse(&inst, "c1,c1',c2,c3,c2'").unwrap();
        let budget = WitnessBudget {
            seed: 7,
            ..WitnessBudget::default()
        };
        let a = search_witness(&inst, &ord, &budget).unwrap();
        let b = search_witness(&inst, &ord, &budget).unwrap();
        assert_eq!(a.verdict, b.verdict);
        assert_eq!(a.multiset, b.multiset);
        assert_eq!(a.restart, b.restart);
    }

    #[test]
    fn never_witnesses_excluded_ordering() {
        let (inst, w) = five_point_instance();
        let ord = Ordering::parse(&inst, "c1,c2,c1',c3,c2'").unwrap();
        assert!(exclusion_report(&inst, &w, &ord).unwrap().excluded);
        let budget = WitnessBudget {
            restarts: 300,
            ..WitnessBudget::default()
        };
        let attempt = search_witness(&inst, &ord, &budget).unwrap();
        assert_eq!(attempt.verdict, WitnessVerdict::Inconclusive);
    }

    #[test]
    fn zero_budget_is_inconclusive() {
        let (inst, _) = five_point_instance();
        let ord = Ordering::parse(&inst, "c3,c1',c2,c1,c2'").unwrap();
        let budget = WitnessBudget {
            restarts: 0,
            ..WitnessBudget::default()
        };
        assert_eq!(
            search_witness(&inst, &ord, &budget).unwrap().verdict,
            WitnessVerdict::Inconclusive
        );
    }

    #[test]
    fn witnessed_orderings_are_protrusive() {
        let (inst, _) = five_point_instance();
        let budget = WitnessBudget {
            restarts: 20,
            ..WitnessBudget::default()
        };
        let mut witnessed = 0;
        for ord in crate::ordering::all_orderings(&inst).unwrap() {
            let attempt = search_witness(&inst, &ord, &budget).unwrap();
            if attempt.verdict == WitnessVerdict::Witnessed {
                witnessed += 1;
                assert!(
                    is_protrusive(&inst, &ord),
                    "{ord} witnessed but not protrusive"
                );
            }
        }
        assert!(witnessed > 0);
    }
}
