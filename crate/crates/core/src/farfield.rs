//! Far-field certificate.
//!
//! For two families with zero centroids, radii `R = maxᵢ‖cᵢ‖`, `R′ = maxⱼ‖c′ⱼ‖`
//! and some `α > 1` making
//! `q(u) = (1/n)Σ⟨cᵢ,u⟩² − α·(1/m)Σ⟨c′ⱼ,u⟩²` positive semidefinite, the
//! mean-distance inequality `(1/n)Σ‖v−cᵢ‖ ≥ (1/m)Σ‖v−c′ⱼ‖` holds whenever
//! `‖v‖ > max{R, (R + αR′)/(α − 1)}`.
//!
//! `R` and `R′` are usually irrational. The certificate stores rational
//! over-estimates of both; the radius bound is increasing in each, so the
//! emitted radius only grows.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_arith::{format_rational, rational_sqrt_exact, sqrt_upper_bound, Rational};
use crate::geometry::{norm_squared, Point2};
use crate::instance::{Family, Instance};

pub const DEFAULT_PRECISION_DENOMINATOR: u64 = 1_000_000;
pub const DEFAULT_ALPHA_ITERATIONS: u32 = 64;
/// Upper bracket for [`search_alpha`] is grown by doubling up to this power of two.
pub const ALPHA_BRACKET_LOG2: u32 = 64;

/// `q(x, y) = a·x² + 2b·xy + c·y²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadForm2 {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl QuadForm2 {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Self {
        QuadForm2 { a, b, c }
    }

    pub fn zero() -> Self {
        QuadForm2::new(Rational::zero(), Rational::zero(), Rational::zero())
    }

    /// `(1/k) Σ p pᵀ` over the given points.
    pub fn second_moment(points: &[Point2]) -> Self {
        let k = Rational::from_integer(BigInt::from(points.len().max(1)));
        let mut q = QuadForm2::zero();
        for p in points {
            q.a += &p.x * &p.x;
            q.b += &p.x * &p.y;
            q.c += &p.y * &p.y;
        }
        q.scale(&k.recip())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        QuadForm2::new(&self.a * k, &self.b * k, &self.c * k)
    }

    pub fn sub(&self, other: &QuadForm2) -> Self {
        QuadForm2::new(&self.a - &other.a, &self.b - &other.b, &self.c - &other.c)
    }

    pub fn determinant(&self) -> Rational {
        &self.a * &self.c - &self.b * &self.b
    }

    pub fn eval(&self, u: &Point2) -> Rational {
        let two = Rational::from_integer(BigInt::from(2));
        &self.a * &u.x * &u.x + two * &self.b * &u.x * &u.y + &self.c * &u.y * &u.y
    }
}

/// Positive semidefiniteness of a symmetric 2×2 form.
pub fn is_psd(form: &QuadForm2) -> bool {
    !form.a.is_negative() && !form.c.is_negative() && !form.determinant().is_negative()
}

pub fn centroid(points: &[Point2]) -> Point2 {
    let k = Rational::from_integer(BigInt::from(points.len().max(1)));
    let sum = points.iter().fold(Point2::origin(), |acc, p| &acc + p);
    sum.scale(&k.recip())
}

pub fn check_centroids(inst: &Instance) -> bool {
    [Family::Primary, Family::Secondary].into_iter().all(|f| {
        inst.family(f)
            .iter()
            .fold(Point2::origin(), |acc, p| &acc + p)
            .is_origin()
    })
}

fn require_centroids(inst: &Instance) -> Result<()> {
    for family in [Family::Primary, Family::Secondary] {
        let c = centroid(inst.family(family));
        if !c.is_origin() {
            return Err(Error::NonZeroCentroid {
                family: family.name(),
                x: format_rational(&c.x),
                y: format_rational(&c.y),
            });
        }
    }
    Ok(())
}

/// Translates both families by their shared centroid.
pub fn recentre(inst: &Instance) -> Result<Instance> {
    inst.require_secondaries()?;
    let cp = centroid(inst.primaries());
    let cs = centroid(inst.secondaries());
    if cp != cs {
        return Err(Error::CentroidMismatch {
            px: format_rational(&cp.x),
            py: format_rational(&cp.y),
            sx: format_rational(&cs.x),
            sy: format_rational(&cs.y),
        });
    }
    Ok(inst.translate(&(&Point2::origin() - &cp)))
}

fn require_alpha(alpha: &Rational) -> Result<()> {
    if alpha <= &Rational::one() {
        return Err(Error::AlphaOutOfRange(format_rational(alpha)));
    }
    Ok(())
}

/// `(1/n)Σ cᵢcᵢᵀ − (α/m)Σ c′ⱼc′ⱼᵀ`.
pub fn build_quadform(inst: &Instance, alpha: &Rational) -> Result<QuadForm2> {
    require_alpha(alpha)?;
    inst.require_secondaries()?;
    require_centroids(inst)?;
    Ok(quadform_unchecked(inst, alpha))
}

fn quadform_unchecked(inst: &Instance, alpha: &Rational) -> QuadForm2 {
    let primary = QuadForm2::second_moment(inst.primaries());
    let secondary = QuadForm2::second_moment(inst.secondaries());
    primary.sub(&secondary.scale(alpha))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FarFieldCertificate {
    pub alpha: Rational,
    pub form: QuadForm2,
    pub psd: bool,
    /// Rational upper bound on `maxᵢ ‖cᵢ‖`.
    pub r_hat: Rational,
    /// Rational upper bound on `maxⱼ ‖c′ⱼ‖`.
    pub rp_hat: Rational,
    /// The inequality holds for every `‖v‖ > rho` when `psd` is true.
    pub rho: Rational,
}

impl FarFieldCertificate {
    pub fn is_valid(&self) -> bool {
        self.psd
    }
}

fn max_norm_squared(points: &[Point2]) -> Rational {
    points
        .iter()
        .map(norm_squared)
        .max()
        .unwrap_or_else(Rational::zero)
}

fn require_radii(inst: &Instance) -> Result<(Rational, Rational)> {
    let r2 = max_norm_squared(inst.primaries());
    let rp2 = max_norm_squared(inst.secondaries());
    if r2.is_zero() {
        return Err(Error::ZeroRadius("primary"));
    }
    if rp2.is_zero() {
        return Err(Error::ZeroRadius("secondary"));
    }
    Ok((r2, rp2))
}

/// `max{R, (R + αR′)/(α − 1)}`.
pub fn radius_bound(r: &Rational, rp: &Rational, alpha: &Rational) -> Rational {
    let far = (r + alpha * rp) / (alpha - Rational::one());
    if &far > r {
        far
    } else {
        r.clone()
    }
}

pub fn certify_farfield(
    inst: &Instance,
    alpha: &Rational,
    precision_denominator: &BigInt,
) -> Result<FarFieldCertificate> {
    require_alpha(alpha)?;
    inst.require_secondaries()?;
    require_centroids(inst)?;
    let (r2, rp2) = require_radii(inst)?;
    let r_hat = sqrt_upper_bound(&r2, precision_denominator)?;
    let rp_hat = sqrt_upper_bound(&rp2, precision_denominator)?;
    let form = quadform_unchecked(inst, alpha);
    Ok(FarFieldCertificate {
        alpha: alpha.clone(),
        psd: is_psd(&form),
        rho: radius_bound(&r_hat, &rp_hat, alpha),
        form,
        r_hat,
        rp_hat,
    })
}

/// Largest PSD-feasible `α` found by bisection.
///
/// `A − αB` decreases in the Loewner order as `α` grows (`B` is PSD), so the
/// feasible set is an interval `(1, α*]`. After bracketing and `iterations`
/// bisection steps, the exact rational boundary points of the constraints
/// `a(α) ≥ 0`, `c(α) ≥ 0`, `det(α) ≥ 0` inside the final bracket are also
/// tried, so a rational `α*` is returned exactly.
pub fn search_alpha(inst: &Instance, iterations: u32) -> Result<Rational> {
    inst.require_secondaries()?;
    require_centroids(inst)?;
    require_radii(inst)?;

    let primary = QuadForm2::second_moment(inst.primaries());
    let secondary = QuadForm2::second_moment(inst.secondaries());
    let feasible = |alpha: &Rational| is_psd(&primary.sub(&secondary.scale(alpha)));

    let one = Rational::one();
    let two = Rational::from_integer(BigInt::from(2));
    let cap = Rational::from_integer(BigInt::one() << ALPHA_BRACKET_LOG2);

    let mut best: Option<Rational> = None;
    let mut hi = two.clone();
    while feasible(&hi) {
        if hi >= cap {
            return Ok(hi);
        }
        best = Some(hi.clone());
        hi = &hi * &two;
    }

    for _ in 0..iterations {
        let lo = best.clone().unwrap_or_else(|| one.clone());
        let mid = (&lo + &hi) / &two;
        if feasible(&mid) {
            best = Some(mid);
        } else {
            hi = mid;
        }
    }

    let floor = best.clone().unwrap_or_else(|| one.clone());
    for candidate in boundary_candidates(&primary, &secondary) {
        if candidate > floor
            && candidate > one
            && candidate <= hi
            && feasible(&candidate)
            && best.as_ref().is_none_or(|b| &candidate > b)
        {
            best = Some(candidate);
        }
    }

    best.ok_or_else(|| Error::NoFeasibleAlpha(format_rational(&hi)))
}

/// Rational roots in `α` of `a(α)`, `c(α)` and `det(A − αB)`.
fn boundary_candidates(pa: &QuadForm2, sb: &QuadForm2) -> Vec<Rational> {
    let mut out = Vec::new();
    for (x, y) in [(&pa.a, &sb.a), (&pa.c, &sb.c)] {
        if !y.is_zero() {
            out.push(x / y);
        }
    }
    // det(α) = k2·α² + k1·α + k0
    let k2 = &sb.a * &sb.c - &sb.b * &sb.b;
    let k1 = -(&pa.a * &sb.c + &sb.a * &pa.c) + Rational::from_integer(2.into()) * &pa.b * &sb.b;
    let k0 = pa.determinant();
    if k2.is_zero() {
        if !k1.is_zero() {
            out.push(-&k0 / &k1);
        }
    } else {
        let disc = &k1 * &k1 - Rational::from_integer(4.into()) * &k2 * &k0;
        if let Some(root) = rational_sqrt_exact(&disc) {
            let denom = Rational::from_integer(2.into()) * &k2;
            out.push((-&k1 + &root) / &denom);
            out.push((-&k1 - &root) / &denom);
        }
    }
    out
}
