//! The normal rational curve N, its derivative curve V, and the 2q+1-point
//! track N ∪ V, together with the closed-form identities behind the
//! one-point and two-point extension arguments.

use crate::error::{Error, Result};
use crate::gfield::PrimeField;
use crate::projgeom::{PointSet, ProjPoint};

/// The assembled construction: the curve N (q+1 points, including the point
/// at infinity (0,0,0,0,1)), the derivative curve V (q points on x0 = 0) and
/// their union (2q+1 points).
///
/// Insertion order is fixed for reproducible indices: N by ascending
/// parameter, then (0,0,0,0,1), then V by ascending parameter.
#[derive(Debug, Clone)]
pub struct TrackFamily {
    pub q: u64,
    pub n: PointSet,
    pub v: PointSet,
    pub full: PointSet,
    /// Whether 3 is a non-square in F_q (the hypothesis of the construction).
    pub three_nonsquare: bool,
}

/// Point (1, t, t^2, t^3, t^4) of the normal rational curve.
pub fn nrc_point(f: &PrimeField, t: u64) -> ProjPoint {
    let t2 = f.mul(t, t);
    let t3 = f.mul(t2, t);
    ProjPoint::new(f, [1, t, t2, t3, f.mul(t3, t)]).expect("leading 1")
}

/// Point (0, 1, 2t, 3t^2, 4t^3) of the derivative curve, on x0 = 0.
pub fn derivative_point(f: &PrimeField, t: u64) -> ProjPoint {
    let t2 = f.mul(t, t);
    let t3 = f.mul(t2, t);
    ProjPoint::new(
        f,
        [0, 1, f.mul(2, t), f.mul(3, t2), f.mul(4 % f.q(), t3)],
    )
    .expect("second coordinate is 1")
}

/// The point at infinity (0,0,0,0,1) completing the normal rational curve.
pub fn infinity_point(f: &PrimeField) -> ProjPoint {
    ProjPoint::new(f, [0, 0, 0, 0, 1]).expect("nonzero")
}

/// The normal rational curve: {(1,t,t^2,t^3,t^4)} for t in F_q, then (0,0,0,0,1).
pub fn build_n(f: &PrimeField) -> PointSet {
    let mut s = PointSet::new(f);
    for t in f.elements() {
        s.insert(nrc_point(f, t));
    }
    s.insert(infinity_point(f));
    s
}

/// The derivative curve: {(0,1,2t,3t^2,4t^3)} for t in F_q, ascending t.
pub fn build_v(f: &PrimeField) -> PointSet {
    let mut s = PointSet::new(f);
    for t in f.elements() {
        s.insert(derivative_point(f, t));
    }
    s
}

/// Assembles the 2q+1-point set N ∪ V.
///
/// When 3 is a square in F_q the construction hypothesis fails and the set is
/// not a track; the build is refused unless `force` is set, in which case the
/// caller gets the set anyway (downstream verification will find a violating
/// 4-subset).
pub fn build_track(f: &PrimeField, force: bool) -> Result<TrackFamily> {
    let three_nonsquare = !f.three_is_square();
    if !three_nonsquare && !force {
        return Err(Error::HypothesisFailed(f.q()));
    }
    let n = build_n(f);
    let v = build_v(f);
    let mut full = PointSet::new(f);
    for t in f.elements() {
        full.insert(nrc_point(f, t));
    }
    full.insert(infinity_point(f));
    for t in f.elements() {
        full.insert(derivative_point(f, t));
    }
    debug_assert_eq!(full.len() as u64, 2 * f.q() + 1);
    Ok(TrackFamily {
        q: f.q(),
        n,
        v,
        full,
        three_nonsquare,
    })
}

/// The two expressions whose simultaneous vanishing makes the plane through
/// (0,0,0,0,1), the derivative point of parameter t, and the curve points of
/// parameters s and u degenerate (rank 3):
/// ((u-s)(u+s-2t), (u-s)(u^2+us+s^2-3t^2)).
///
/// For s ≠ u the two never vanish together, which is the one-point extension
/// argument for planes through the infinity point.
pub fn prop21_infty_conditions(f: &PrimeField, s: u64, t: u64, u: u64) -> (u64, u64) {
    let d = f.sub(u, s);
    let first = f.mul(d, f.sub(f.add(u, s), f.mul(2, t)));
    let u2 = f.mul(u, u);
    let s2 = f.mul(s, s);
    let t2 = f.mul(t, t);
    let second = f.mul(
        d,
        f.sub(f.add(f.add(u2, f.mul(u, s)), s2), f.mul(3, t2)),
    );
    (first, second)
}

/// The quadratic h(x) = x^2 + ax + b forced by a plane through the derivative
/// points of parameters s and t meeting the curve twice: a = -(s+t),
/// b = st - (s-t)^2/2. Returns (a, b, a^2 - 4b); the discriminant always
/// equals 3(s-t)^2, so it is a square exactly when 3 is.
pub fn prop22_h_and_discriminant(f: &PrimeField, s: u64, t: u64) -> Result<(u64, u64, u64)> {
    if s == t {
        return Err(Error::EqualParameters);
    }
    let a = f.neg(f.add(s, t));
    let diff = f.sub(s, t);
    let diff2 = f.mul(diff, diff);
    let half = f.inv(2).expect("char != 2");
    let b = f.sub(f.mul(s, t), f.mul(diff2, half));
    let disc = f.sub(f.mul(a, a), f.mul(4 % f.q(), b));
    debug_assert_eq!(disc, f.mul(3, diff2));
    Ok((a, b, disc))
}
