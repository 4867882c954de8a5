//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use distcert::exact_arith::Rational;
use distcert::geometry::{orientation, Orientation, Point2};
use distcert::instance::{Family, Label};
use num_traits::{One, Signed, Zero};

/// One linear constraint `Σ coeffs[i]·x[i] ≥ rhs`.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

/// Exact Fourier–Motzkin elimination: is `{x : every constraint holds}` non-empty?
pub fn fm_feasible(mut system: Vec<Constraint>, vars: usize) -> bool {
    for j in (0..vars).rev() {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for c in system {
            if c.coeffs[j].is_positive() {
                pos.push(c);
            } else if c.coeffs[j].is_negative() {
                neg.push(c);
            } else {
                rest.push(c);
            }
        }
        for p in &pos {
            for q in &neg {
                // (-q_j)·p + p_j·q eliminates x_j; both multipliers are positive.
                let (mp, mq) = (-q.coeffs[j].clone(), p.coeffs[j].clone());
                let coeffs = p
                    .coeffs
                    .iter()
                    .zip(&q.coeffs)
                    .map(|(a, b)| a * &mp + b * &mq)
                    .collect();
                rest.push(Constraint {
                    coeffs,
                    rhs: &p.rhs * &mp + &q.rhs * &mq,
                });
            }
        }
        system = rest;
    }
    // Only `0 ≥ rhs` constraints remain.
    system.iter().all(|c| !c.rhs.is_positive())
}

/// Is there a `d` with `d₁ ≥ 0`, `d_{k+1} − d_k ≥ 1` and `Σ aₖ dₖ ≥ 0`?
/// (Strict gaps can be rescaled to 1 since every constraint is homogeneous
/// apart from the gap bounds.)
pub fn ordering_system_feasible(coefficients: &[Rational]) -> bool {
    let n = coefficients.len();
    let unit = |i: usize, v: i64| {
        let mut c = vec![Rational::zero(); n];
        c[i] = Rational::from_integer(v.into());
        c
    };
    let mut system = vec![Constraint {
        coeffs: unit(0, 1),
        rhs: Rational::zero(),
    }];
    for k in 0..n.saturating_sub(1) {
        let mut coeffs = unit(k + 1, 1);
        coeffs[k] = -Rational::one();
        system.push(Constraint {
            coeffs,
            rhs: Rational::one(),
        });
    }
    system.push(Constraint {
        coeffs: coefficients.to_vec(),
        rhs: Rational::zero(),
    });
    fm_feasible(system, n)
}

/// Coefficients `+λ` / `−λ′` for an ordering, computed from labels only.
pub fn ordering_coefficients(labels: &[Label], l: &Rational, lp: &Rational) -> Vec<Rational> {
    labels
        .iter()
        .map(|lab| match lab.family {
            Family::Primary => l.clone(),
            Family::Secondary => -lp.clone(),
        })
        .collect()
}

/// Non-degenerate triangles only; degenerate ones are covered by segments.
fn in_closed_triangle(p: &Point2, a: &Point2, b: &Point2, c: &Point2) -> bool {
    if orientation(a, b, c) == Orientation::Collinear {
        return false;
    }
    let o = [
        orientation(a, b, p),
        orientation(b, c, p),
        orientation(c, a, p),
    ];
    !(o.contains(&Orientation::Left) && o.contains(&Orientation::Right))
}

fn in_closed_segment(p: &Point2, a: &Point2, b: &Point2) -> bool {
    orientation(a, b, p) == Orientation::Collinear
        && p.x >= a.x.clone().min(b.x.clone())
        && p.x <= a.x.clone().max(b.x.clone())
        && p.y >= a.y.clone().min(b.y.clone())
        && p.y <= a.y.clone().max(b.y.clone())
}

/// Closed convex hull membership by Carathéodory: some point, segment or
/// triangle of `set` contains `p`.
pub fn in_closed_hull(p: &Point2, set: &[Point2]) -> bool {
    let k = set.len();
    for i in 0..k {
        if &set[i] == p {
            return true;
        }
        for j in i + 1..k {
            if in_closed_segment(p, &set[i], &set[j]) {
                return true;
            }
            for l in j + 1..k {
                if in_closed_triangle(p, &set[i], &set[j], &set[l]) {
                    return true;
                }
            }
        }
    }
    false
}

/// Hull vertices: distinct points not in the closed hull of the others.
pub fn brute_force_hull_vertices(points: &[Point2]) -> Vec<Point2> {
    let mut distinct = points.to_vec();
    distinct.sort();
    distinct.dedup();
    let mut out: Vec<Point2> = distinct
        .iter()
        .filter(|p| {
            let others: Vec<Point2> = distinct.iter().filter(|q| q != p).cloned().collect();
            !in_closed_hull(p, &others)
        })
        .cloned()
        .collect();
    out.sort();
    out
}
