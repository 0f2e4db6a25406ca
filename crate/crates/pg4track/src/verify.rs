//! Exhaustive certification of the track property and completeness.
//!
//! `is_track` scans every 4-subset; `addable_points` marks all points covered
//! by planes through set triples in a bitset over the lexicographic point
//! order, so that a full completeness check costs C(n,3) plane enumerations
//! instead of a rank test per candidate point. Reports are deterministic
//! regardless of thread count: violating subsets are reduced by minimum
//! lexicographic position, and bit marking is idempotent.

use crate::error::{Error, Result};
use crate::gfield::PrimeField;
use crate::projgeom::{p4_size, point_at_index, point_index, rank_in_place, PointSet, ProjPoint, DIM};
use rayon::prelude::*;
use serde::Serialize;
use std::sync::atomic::{AtomicU64, Ordering};

/// Outcome of the 4-subset scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrackReport {
    pub is_track: bool,
    /// Lexicographically first 4-subset of rank <= 3, when one exists.
    pub violation: Option<[usize; 4]>,
    /// Subsets inspected: all C(n,4) on success, the lexicographic position
    /// of the violation (inclusive) on failure.
    pub checked_subsets: u64,
}

/// Outcome of the completeness scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletenessReport {
    pub is_complete: bool,
    /// Points that can be added while keeping the track property, in
    /// lexicographic order. Empty iff complete.
    pub addable: Vec<ProjPoint>,
    /// Number of points of P^4 lying on some plane through three set points.
    pub covered_count: u64,
}

/// Which triples a cover search may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverRestrict {
    /// Any rank-3 triple of set points.
    Any,
    /// Two points on the hyperplane x0 = 0 (for the track: V and the point at
    /// infinity) and one affine point.
    InfinitePairs,
    /// Two points of the derivative curve (infinite points other than
    /// (0,0,0,0,1)) and one affine point.
    DerivativePairs,
}

fn choose(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Lexicographic position (0-based) of the subset i<j<k<l among all 4-subsets of n.
fn lex_rank4(n: usize, s: [usize; 4]) -> u64 {
    let n = n as u64;
    let [i, j, k, l] = s.map(|x| x as u64);
    let mut r = 0;
    for x in 0..i {
        r += choose(n - 1 - x, 3);
    }
    for y in i + 1..j {
        r += choose(n - 1 - y, 2);
    }
    for z in j + 1..k {
        r += choose(n - 1 - z, 1);
    }
    r + (l - k - 1)
}

/// Packs a 4-subset so that integer order equals lexicographic subset order.
#[inline]
fn pack4(s: [usize; 4]) -> u64 {
    debug_assert!(s.iter().all(|&x| x < (1 << 16)));
    ((s[0] as u64) << 48) | ((s[1] as u64) << 32) | ((s[2] as u64) << 16) | s[3] as u64
}

fn unpack4(p: u64) -> [usize; 4] {
    [
        (p >> 48) as usize,
        ((p >> 32) & 0xffff) as usize,
        ((p >> 16) & 0xffff) as usize,
        (p & 0xffff) as usize,
    ]
}

/// Scans every 4-subset of S for a rank drop. The reported violation is the
/// lexicographically first one no matter how the scan is scheduled.
pub fn is_track(f: &PrimeField, s: &PointSet) -> Result<TrackReport> {
    debug_assert_eq!(f.q(), s.q());
    let n = s.len();
    if n < 4 {
        return Err(Error::TooFewPoints { need: 4, got: n });
    }
    let rows: Vec<[u64; DIM]> = s.iter().map(|p| *p.coords()).collect();
    let best = AtomicU64::new(u64::MAX);
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    pairs.par_iter().for_each(|&(i, j)| {
        // cheapest subset this task could contribute; lets finished regions skip
        if n >= j + 3 && best.load(Ordering::Relaxed) <= pack4([i, j, j + 1, j + 2]) {
            return;
        }
        let mut local: Option<u64> = None;
        'outer: for k in j + 1..n {
            for l in k + 1..n {
                let mut m = [rows[i], rows[j], rows[k], rows[l]];
                if rank_in_place(f, &mut m) < 4 {
                    local = Some(pack4([i, j, k, l]));
                    break 'outer;
                }
            }
        }
        if let Some(p) = local {
            best.fetch_min(p, Ordering::Relaxed);
        }
    });
    let found = best.load(Ordering::Relaxed);
    if found == u64::MAX {
        Ok(TrackReport {
            is_track: true,
            violation: None,
            checked_subsets: choose(n as u64, 4),
        })
    } else {
        let v = unpack4(found);
        Ok(TrackReport {
            is_track: false,
            violation: Some(v),
            checked_subsets: lex_rank4(n, v) + 1,
        })
    }
}

/// True iff every 3-subset has rank 3. Any track of size >= 4 satisfies this:
/// three collinear points plus any fourth are coplanar.
pub fn no_three_collinear(f: &PrimeField, s: &PointSet) -> bool {
    debug_assert_eq!(f.q(), s.q());
    let rows: Vec<[u64; DIM]> = s.iter().map(|p| *p.coords()).collect();
    let n = rows.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut m = [rows[i], rows[j], rows[k]];
                if rank_in_place(f, &mut m) < 3 {
                    return false;
                }
            }
        }
    }
    true
}

/// Bitset over the lexicographic point order with idempotent concurrent writes.
pub(crate) struct AtomicBitSet {
    words: Vec<AtomicU64>,
}

impl AtomicBitSet {
    pub fn new(bits: u64) -> AtomicBitSet {
        let words = (bits as usize).div_ceil(64);
        AtomicBitSet {
            words: (0..words).map(|_| AtomicU64::new(0)).collect(),
        }
    }

    #[inline]
    pub fn set(&self, i: u64) {
        self.words[(i / 64) as usize].fetch_or(1 << (i % 64), Ordering::Relaxed);
    }

    #[inline]
    pub fn get(&self, i: u64) -> bool {
        self.words[(i / 64) as usize].load(Ordering::Relaxed) >> (i % 64) & 1 == 1
    }

    pub fn count_ones(&self) -> u64 {
        self.words
            .iter()
            .map(|w| w.load(Ordering::Relaxed).count_ones() as u64)
            .sum()
    }
}

fn triple_allowed(restrict: CoverRestrict, tri: [&ProjPoint; 3]) -> bool {
    match restrict {
        CoverRestrict::Any => true,
        CoverRestrict::InfinitePairs => {
            let inf = tri.iter().filter(|p| p.is_infinite()).count();
            let aff = 3 - inf;
            inf == 2 && aff == 1
        }
        CoverRestrict::DerivativePairs => {
            let der = tri
                .iter()
                .filter(|p| p.is_infinite() && p.coords()[1] != 0)
                .count();
            let aff = tri.iter().filter(|p| !p.is_infinite()).count();
            der == 2 && aff == 1
        }
    }
}

/// Marks every point lying on a plane through an allowed rank-3 triple of S.
pub(crate) fn mark_covered(
    f: &PrimeField,
    s: &PointSet,
    restrict: CoverRestrict,
) -> AtomicBitSet {
    debug_assert_eq!(f.q(), s.q());
    let bits = AtomicBitSet::new(p4_size(f));
    let q = f.q();
    let inv = f.inverse_table();
    let pts = s.points();
    let n = pts.len();
    let triples: Vec<(u32, u32, u32)> = (0..n)
        .flat_map(|i| {
            let pts = &pts;
            (i + 1..n).flat_map(move |j| {
                (j + 1..n)
                    .filter(move |&k| triple_allowed(restrict, [&pts[i], &pts[j], &pts[k]]))
                    .map(move |k| (i as u32, j as u32, k as u32))
            })
        })
        .collect();

    // normalized index without constructing a ProjPoint; inversions come from the table
    let index_of = |v: &[u64; DIM]| -> u64 {
        let mut lead = 0;
        while v[lead] == 0 {
            lead += 1;
        }
        let mut c = *v;
        if c[lead] != 1 {
            let s = inv[c[lead] as usize];
            for x in &mut c[lead..] {
                *x = f.mul(*x, s);
            }
        }
        point_index(f, &c)
    };

    triples.par_iter().for_each(|&(i, j, k)| {
        let c1 = pts[i as usize].coords();
        let c2 = pts[j as usize].coords();
        let c3 = pts[k as usize].coords();
        {
            let mut m = [*c1, *c2, *c3];
            if rank_in_place(f, &mut m) < 3 {
                return; // degenerate triple contributes no plane
            }
        }
        let mut v = [0u64; DIM];
        for beta in 0..q {
            let mut base = [0u64; DIM];
            for t in 0..DIM {
                base[t] = f.add(c1[t], f.mul(beta, c2[t]));
            }
            for gamma in 0..q {
                for t in 0..DIM {
                    v[t] = f.add(base[t], f.mul(gamma, c3[t]));
                }
                bits.set(index_of(&v));
            }
        }
        for gamma in 0..q {
            for t in 0..DIM {
                v[t] = f.add(c2[t], f.mul(gamma, c3[t]));
            }
            bits.set(index_of(&v));
        }
        bits.set(point_index(f, c3));
    });
    bits
}

/// Completeness by plane marking.
///
/// Requires S to be a track with no three collinear points, so that a point
/// is addable exactly when it avoids every plane through three set points.
pub fn addable_points(f: &PrimeField, s: &PointSet) -> Result<CompletenessReport> {
    let report = is_track(f, s)?;
    if !report.is_track {
        return Err(Error::NotATrack("addable_points needs a track input"));
    }
    if !no_three_collinear(f, s) {
        return Err(Error::Precondition(
            "addable_points needs no three collinear points",
        ));
    }
    let bits = mark_covered(f, s, CoverRestrict::Any);
    let covered_count = bits.count_ones();
    let mut addable = Vec::new();
    for i in 0..p4_size(f) {
        if !bits.get(i) {
            let p = point_at_index(f, i);
            if !s.contains(&p) {
                addable.push(p);
            }
        }
    }
    Ok(CompletenessReport {
        is_complete: addable.is_empty(),
        addable,
        covered_count,
    })
}

/// Affine points (x0 = 1) not lying on any allowed plane, lexicographic order.
pub fn uncovered_affine(f: &PrimeField, s: &PointSet, restrict: CoverRestrict) -> Vec<ProjPoint> {
    let bits = mark_covered(f, s, restrict);
    let q = f.q();
    let affine_start = 1 + q + q * q + q * q * q;
    (affine_start..p4_size(f))
        .filter(|&i| !bits.get(i))
        .map(|i| point_at_index(f, i))
        .collect()
}

/// All index triples (i,j,k), i<j<k, spanning a plane through P, subject to
/// the restriction. P must not belong to S.
pub fn brute_cover_search(
    f: &PrimeField,
    p: &ProjPoint,
    s: &PointSet,
    restrict: CoverRestrict,
) -> Result<Vec<[usize; 3]>> {
    if s.contains(p) {
        return Err(Error::TargetInSet);
    }
    let pts = s.points();
    let n = pts.len();
    let target = *p.coords();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if !triple_allowed(restrict, [&pts[i], &pts[j], &pts[k]]) {
                    continue;
                }
                let mut m3 = [*pts[i].coords(), *pts[j].coords(), *pts[k].coords()];
                if rank_in_place(f, &mut m3) != 3 {
                    continue;
                }
                let mut m4 = [
                    *pts[i].coords(),
                    *pts[j].coords(),
                    *pts[k].coords(),
                    target,
                ];
                if rank_in_place(f, &mut m4) == 3 {
                    out.push([i, j, k]);
                }
            }
        }
    }
    Ok(out)
}

/// Serialized verification report:
/// `{"q", "is_track", "violation", "is_complete", "addable", "covered", "p4_size"}`.
/// Completeness fields are null when the input was not a track.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub q: u64,
    pub is_track: bool,
    pub violation: Option<[usize; 4]>,
    pub is_complete: Option<bool>,
    pub addable: Vec<[u64; DIM]>,
    pub covered: Option<u64>,
    pub p4_size: u64,
}

impl VerifyReport {
    pub fn new(
        f: &PrimeField,
        track: &TrackReport,
        completeness: Option<&CompletenessReport>,
    ) -> VerifyReport {
        VerifyReport {
            q: f.q(),
            is_track: track.is_track,
            violation: track.violation,
            is_complete: completeness.map(|c| c.is_complete),
            addable: completeness
                .map(|c| c.addable.iter().map(|p| *p.coords()).collect())
                .unwrap_or_default(),
            covered: completeness.map(|c| c.covered_count),
            p4_size: p4_size(f),
        }
    }
}
