//! Orderings of an instance's points: protrusiveness, exclusion by a
//! certified inequality, and a one-sided witness search.
//!
//! If `λ·Σᵢ ‖v − cᵢ‖ ≥ λ′·Σⱼ ‖v − c′ⱼ‖` holds for every `v`, summing over
//! the points of any multiset `V` gives `Σ aₖ·dₖ ≥ 0`, where `dₖ = D_V(pₖ)`
//! and `aₖ` is `+λ` for a primary point and `−λ′` for a secondary one.
//! For an ordering `d₁ < … < d_N` write `dₖ = d₁ + Σ_{t<k} gₜ` with gaps
//! `gₜ > 0`; since `Σ aₖ = 0`,
//!
//! ```text
//! Σ aₖ·dₖ = Σₜ gₜ · (a_{t+1} + … + a_N).
//! ```
//!
//! That sum is negative for every choice of gaps exactly when all suffix
//! sums are `≤ 0` and at least one is `< 0`; such an ordering cannot be
//! witnessed by any `V`.

mod witness;

pub use witness::{
    search_witness, verify_witness, WitnessAttempt, WitnessBudget, WitnessVerdict,
    DEFAULT_WITNESS_DIGITS,
};

use std::collections::HashSet;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_arith::Rational;
use crate::geometry::{point_in_hull, HullPosition, Point2};
use crate::instance::{Family, Instance, Label, Weights};

/// Largest `n + m` accepted by the exhaustive routines.
pub const MAX_ORDERING_POINTS: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ordering(Vec<Label>);

impl Ordering {
    /// Checks that `labels` is a permutation of the instance's labels.
    pub fn new(inst: &Instance, labels: Vec<Label>) -> Result<Self> {
        let mut sorted = labels.clone();
        sorted.sort();
        if sorted != inst.labels() {
            let shown: Vec<String> = labels.iter().map(Label::to_string).collect();
            return Err(Error::InvalidOrdering(shown.join(",")));
        }
        Ok(Ordering(labels))
    }

    /// Parses a comma-separated label list such as `c1,c2,c1',c3,c2'`.
    pub fn parse(inst: &Instance, text: &str) -> Result<Self> {
        let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
        let labels = inner
            .split(',')
            .map(|s| s.parse::<Label>())
            .collect::<Result<Vec<_>>>()?;
        Ordering::new(inst, labels)
    }

    pub fn labels(&self) -> &[Label] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn points<'a>(&self, inst: &'a Instance) -> Vec<&'a Point2> {
        self.0.iter().map(|&l| inst.point(l)).collect()
    }
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(Label::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn guard(inst: &Instance) -> Result<()> {
    if inst.len() > MAX_ORDERING_POINTS {
        return Err(Error::SizeGuard {
            points: inst.len(),
            limit: MAX_ORDERING_POINTS,
        });
    }
    Ok(())
}

/// Every point lies strictly outside the hull of the points before it.
pub fn is_protrusive(inst: &Instance, ord: &Ordering) -> bool {
    let pts: Vec<Point2> = ord.points(inst).into_iter().cloned().collect();
    (1..pts.len()).all(|k| point_in_hull(&pts[k], &pts[..k]) == HullPosition::StrictlyOutside)
}

/// All protrusive orderings in lexicographic label order, by depth-first
/// extension pruned with the hull test.
pub fn enumerate_protrusive(inst: &Instance) -> Result<Vec<Ordering>> {
    guard(inst)?;
    let labels = inst.labels();
    let mut out = Vec::new();
    let mut prefix: Vec<Label> = Vec::with_capacity(labels.len());
    let mut prefix_points: Vec<Point2> = Vec::with_capacity(labels.len());
    let mut used = vec![false; labels.len()];
    extend(
        inst,
        &labels,
        &mut used,
        &mut prefix,
        &mut prefix_points,
        &mut out,
    );
    out.sort();
    Ok(out)
}

fn extend(
    inst: &Instance,
    labels: &[Label],
    used: &mut [bool],
    prefix: &mut Vec<Label>,
    prefix_points: &mut Vec<Point2>,
    out: &mut Vec<Ordering>,
) {
    if prefix.len() == labels.len() {
        out.push(Ordering(prefix.clone()));
        return;
    }
    for (i, &label) in labels.iter().enumerate() {
        if used[i] {
            continue;
        }
        let p = inst.point(label);
        if point_in_hull(p, prefix_points) != HullPosition::StrictlyOutside {
            continue;
        }
        used[i] = true;
        prefix.push(label);
        prefix_points.push(p.clone());
        extend(inst, labels, used, prefix, prefix_points, out);
        prefix_points.pop();
        prefix.pop();
        used[i] = false;
    }
}

/// All orderings in lexicographic label order (Heap's algorithm would be
/// faster, but the size guard keeps this small).
pub fn all_orderings(inst: &Instance) -> Result<Vec<Ordering>> {
    guard(inst)?;
    let labels = inst.labels();
    let mut out = Vec::new();
    let mut perm = labels.clone();
    loop {
        out.push(Ordering(perm.clone()));
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(out)
}

fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len())
        .rev()
        .find(|&j| v[j] > v[i - 1])
        .expect("pivot has a successor");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExclusionReport {
    /// `+λ` for primaries and `−λ′` for secondaries, in ordering order.
    pub coefficients: Vec<Rational>,
    /// `suffix_sums[k] = Σ_{t ≥ k} coefficients[t]`.
    pub suffix_sums: Vec<Rational>,
    pub excluded: bool,
}

pub fn exclusion_report(
    inst: &Instance,
    weights: &Weights,
    ord: &Ordering,
) -> Result<ExclusionReport> {
    weights.check(inst)?;
    let coefficients: Vec<Rational> = ord
        .labels()
        .iter()
        .map(|l| match l.family {
            Family::Primary => weights.primary.clone(),
            Family::Secondary => -weights.secondary.clone(),
        })
        .collect();
    let mut suffix_sums = vec![Rational::zero(); coefficients.len()];
    let mut acc = Rational::zero();
    for (k, a) in coefficients.iter().enumerate().rev() {
        acc += a;
        suffix_sums[k] = acc.clone();
    }
    let excluded =
        suffix_sums.iter().all(|s| !s.is_positive()) && suffix_sums.iter().any(|s| s.is_negative());
    Ok(ExclusionReport {
        coefficients,
        suffix_sums,
        excluded,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassifiedOrdering {
    pub ordering: Ordering,
    pub protrusive: bool,
    /// `None` when the instance has no secondary points (no inequality).
    pub excluded: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub rows: Vec<ClassifiedOrdering>,
    /// Whether the inequality behind the exclusion column has been certified.
    /// When false, "excluded" is conditional on the inequality holding.
    pub certified: bool,
}

impl Classification {
    /// Orderings that are protrusive yet excluded.
    pub fn headline(&self) -> impl Iterator<Item = &ClassifiedOrdering> {
        self.rows
            .iter()
            .filter(|r| r.protrusive && r.excluded == Some(true))
    }
}

/// Classifies every ordering of the instance (protrusive or not), in
/// lexicographic label order.
pub fn classify_all(
    inst: &Instance,
    weights: Option<&Weights>,
    certified: bool,
) -> Result<Classification> {
    guard(inst)?;
    let protrusive: HashSet<Ordering> = enumerate_protrusive(inst)?.into_iter().collect();
    let weights = if inst.m() == 0 { None } else { weights };
    let rows = all_orderings(inst)?
        .into_iter()
        .map(|ordering| {
            let excluded = match weights {
                Some(w) => Some(exclusion_report(inst, w, &ordering)?.excluded),
                None => None,
            };
            Ok(ClassifiedOrdering {
                protrusive: protrusive.contains(&ordering),
                ordering,
                excluded,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Classification {
        rows,
        certified: certified && weights.is_some(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{rat, rat_int};
    use crate::instance::five_point_instance;

    fn ord(inst: &Instance, s: &str) -> Ordering {
        Ordering::parse(inst, s).unwrap()
    }

    #[test]
    fn ordering_validation() {
        let (inst, _) = five_point_instance();
        assert!(Ordering::parse(&inst, "c1,c2,c1',c3,c2'").is_ok());
        assert!(Ordering::parse(&inst, "(c1,c2,c1',c3,c2')").is_ok());
        assert!(Ordering::parse(&inst, "c1,c2,c1',c3").is_err());
        assert!(Ordering::parse(&inst, "c1,c1,c1',c3,c2'").is_err());
        assert!(Ordering::parse(&inst, "c1,c2,c1',c3,c4'").is_err());
        assert_eq!(
            ord(&inst, "c1,c2,c1',c3,c2'").to_string(),
            "(c1,c2,c1',c3,c2')"
        );
    }

    #[test]
    fn protrusive_examples() {
        let (inst, _) = five_point_instance();
        assert!(is_protrusive(&inst, &ord(&inst, "c1,c2,c1',c3,c2'")));
        assert!(!is_protrusive(&inst, &ord(&inst, "c1,c2,c3,c1',c2'")));
        let single = Instance::new(vec![Point2::from_ints(4, 4)], vec![]).unwrap();
        assert!(is_protrusive(&single, &ord(&single, "c1")));
    }

    #[test]
    fn triangle_all_protrusive() {
        let tri = Instance::new(
            vec![
                Point2::from_ints(0, 0),
                Point2::from_ints(3, 0),
                Point2::from_ints(1, 2),
            ],
            vec![],
        )
        .unwrap();
        assert_eq!(enumerate_protrusive(&tri).unwrap().len(), 6);
    }

    #[test]
    fn collinear_middle_never_last() {
        let line = Instance::new(
            vec![
                Point2::from_ints(0, 0),
                Point2::from_ints(1, 0),
                Point2::from_ints(2, 0),
            ],
            vec![],
        )
        .unwrap();
        let found = enumerate_protrusive(&line).unwrap();
        let brute: Vec<Ordering> = all_orderings(&line)
            .unwrap()
            .into_iter()
            .filter(|o| is_protrusive(&line, o))
            .collect();
        assert_eq!(found, brute);
        assert_eq!(found.len(), 4);
        assert!(found.iter().all(|o| o.labels()[2] != Label::primary(1)));
    }

    #[test]
    fn five_point_protrusive_count() {
        let (inst, _) = five_point_instance();
        let found = enumerate_protrusive(&inst).unwrap();
        // exact-rational brute force over all 120 permutations gives 74
        assert_eq!(found.len(), 74);
        assert!(found.contains(&ord(&inst, "c1,c2,c1',c3,c2'")));
        assert!(found.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn size_guard() {
        let pts: Vec<Point2> = (0..11).map(|i| Point2::from_ints(i, i * i)).collect();
        let inst = Instance::new(pts, vec![]).unwrap();
        assert_eq!(
            enumerate_protrusive(&inst),
            Err(Error::SizeGuard {
                points: 11,
                limit: 10
            })
        );
        assert!(classify_all(&inst, None, false).is_err());
    }

    #[test]
    fn exclusion_examples() {
        let (inst, w) = five_point_instance();
        let r = exclusion_report(&inst, &w, &ord(&inst, "c1,c2,c1',c3,c2'")).unwrap();
        assert_eq!(
            r.coefficients,
            vec![rat(1, 3), rat(1, 3), rat(-1, 2), rat(1, 3), rat(-1, 2)]
        );
        assert_eq!(
            r.suffix_sums,
            vec![rat_int(0), rat(-1, 3), rat(-2, 3), rat(-1, 6), rat(-1, 2)]
        );
        assert!(r.excluded);

        let r = exclusion_report(&inst, &w, &ord(&inst, "c1',c2',c1,c2,c3")).unwrap();
        assert_eq!(r.suffix_sums[2], rat_int(1));
        assert!(!r.excluded);

        let pair =
            Instance::new(vec![Point2::from_ints(0, 0)], vec![Point2::from_ints(1, 0)]).unwrap();
        let lw = Weights::new(rat(3, 7), rat(3, 7));
        let r = exclusion_report(&pair, &lw, &ord(&pair, "c1,c1'")).unwrap();
        assert_eq!(r.suffix_sums, vec![rat_int(0), rat(-3, 7)]);
        assert!(r.excluded);

        let bad = Weights::new(rat(1, 2), rat(1, 2));
        assert!(exclusion_report(&inst, &bad, &ord(&inst, "c1,c2,c1',c3,c2'")).is_err());
    }

    #[test]
    fn all_zero_suffix_sums_not_excluded() {
        let pair =
            Instance::new(vec![Point2::from_ints(0, 0)], vec![Point2::from_ints(1, 0)]).unwrap();
        let w = Weights::uniform(&pair).unwrap();
        let r = exclusion_report(&pair, &w, &ord(&pair, "c1',c1")).unwrap();
        assert_eq!(r.suffix_sums, vec![rat_int(0), rat_int(1)]);
        assert!(!r.excluded);
    }

    #[test]
    fn classification_of_five_point_instance() {
        let (inst, w) = five_point_instance();
        let table = classify_all(&inst, Some(&w), true).unwrap();
        assert_eq!(table.rows.len(), 120);
        assert!(table.certified);
        let find = |s: &str| {
            let o = ord(&inst, s);
            table.rows.iter().find(|r| r.ordering == o).unwrap().clone()
        };
        let headline = find("c1,c2,c1',c3,c2'");
        assert!(headline.protrusive);
        assert_eq!(headline.excluded, Some(true));
        let twin = find("c2,c1,c1',c3,c2'");
        assert_eq!((twin.protrusive, twin.excluded), (true, Some(true)));
        assert!(!find("c1,c2,c3,c1',c2'").protrusive);
        assert_eq!(find("c1',c1,c2,c3,c2'").excluded, Some(false));
        assert_eq!(table.headline().count(), 6);
        assert_eq!(table.rows.iter().filter(|r| r.protrusive).count(), 74);
    }

    #[test]
    fn classification_without_secondaries() {
        let tri = Instance::new(
            vec![
                Point2::from_ints(0, 0),
                Point2::from_ints(3, 0),
                Point2::from_ints(1, 2),
            ],
            vec![],
        )
        .unwrap();
        let table = classify_all(&tri, None, true).unwrap();
        assert!(table
            .rows
            .iter()
            .all(|r| r.excluded.is_none() && r.protrusive));
        assert!(!table.certified);
    }

    #[test]
    fn permutations_in_order() {
        let mut v = vec![1, 2, 3];
        let mut seen = vec![v.clone()];
        while next_permutation(&mut v) {
            seen.push(v.clone());
        }
        assert_eq!(seen.len(), 6);
        assert!(seen.windows(2).all(|w| w[0] < w[1]));
    }
}
