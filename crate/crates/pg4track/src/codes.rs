//! The coding-theory face of a track: the parity-check matrix whose columns
//! are the track points, minimum distance by subset rank, dual distance by
//! hyperplane scan, and the size bounds around the construction.

use crate::error::{Error, Result};
use crate::gfield::PrimeField;
use crate::projgeom::{p4_size, point_at_index, Hyperplane, PointSet, DIM};
use crate::verify::is_track;
use rayon::prelude::*;
use serde::Serialize;

/// A linear code given by its 5 x n parity-check matrix, stored columnwise.
/// Columns are nonzero and pairwise non-proportional (they are projective
/// points), so the code has parameters [n, n-5, d].
#[derive(Debug, Clone)]
pub struct LinearCodeSpec {
    pub q: u64,
    pub n: usize,
    /// Parity-check columns in the track's insertion order.
    pub columns: Vec<[u64; DIM]>,
}

/// Builds the parity check of the code attached to a track; the input must
/// actually be a track.
pub fn parity_check_from_track(f: &PrimeField, s: &PointSet) -> Result<LinearCodeSpec> {
    let rep = is_track(f, s)?;
    if !rep.is_track {
        return Err(Error::NotATrack("parity_check_from_track needs a track"));
    }
    Ok(LinearCodeSpec {
        q: f.q(),
        n: s.len(),
        columns: s.iter().map(|p| *p.coords()).collect(),
    })
}

impl LinearCodeSpec {
    /// Minimum distance: the smallest w such that some w columns are linearly
    /// dependent. Exhaustive over w = 1..=5; any 6 columns of a 5-row matrix
    /// are dependent, so 6 is the fallback.
    pub fn min_distance(&self, f: &PrimeField) -> usize {
        for w in 1..=5 {
            if self.has_dependent_subset(f, w) {
                return w;
            }
        }
        6
    }

    fn has_dependent_subset(&self, f: &PrimeField, w: usize) -> bool {
        if self.n < w {
            return false;
        }
        // rank of the transposed column subset; dependent iff rank < w
        let mut idx: Vec<usize> = (0..w).collect();
        loop {
            let rows: Vec<[u64; DIM]> = idx.iter().map(|&i| self.columns[i]).collect();
            if crate::projgeom::rank(f, &rows) < w {
                return true;
            }
            // next lexicographic w-subset of 0..n
            let mut i = w;
            loop {
                if i == 0 {
                    return false;
                }
                i -= 1;
                if idx[i] != i + self.n - w {
                    break;
                }
            }
            idx[i] += 1;
            for j in i + 1..w {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    /// Dual minimum distance via point-hyperplane duality: a dual codeword is
    /// a linear form, its weight is n minus the number of columns it kills,
    /// so dual_d = n - max over hyperplanes of |track points on it|.
    pub fn dual_min_distance(&self, f: &PrimeField) -> usize {
        let total = p4_size(f);
        let best = (0..total)
            .into_par_iter()
            .map(|i| {
                let h = Hyperplane::new(f, *point_at_index(f, i).coords()).expect("nonzero");
                self.columns
                    .iter()
                    .filter(|col| {
                        let mut acc = 0;
                        for (a, x) in h.coeffs().iter().zip(col.iter()) {
                            acc = f.add(acc, f.mul(*a, *x));
                        }
                        acc == 0
                    })
                    .count()
            })
            .max()
            .unwrap_or(0);
        self.n - best
    }
}

/// Integer square root.
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).is_none_or(|v| v > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|v| v <= n) {
        x += 1;
    }
    x
}

/// Largest n with (q-1) * C(n,2) <= q^4 + q^3 + q^2 + q + 1 - n: counting
/// bound from the pairwise-disjoint secant lines of a track.
pub fn track_upper_bound(q: u64) -> u64 {
    let q = q as u128;
    let space = q * q * q * q + q * q * q + q * q + q + 1;
    let mut n = 1u128;
    while (q - 1) * n * (n + 1) / 2 <= space - (n + 1) {
        n += 1;
    }
    n as u64
}

/// Length of the longest track obtained from elliptic-curve codes over
/// F_q, q = p^m. Exact integer arithmetic: floor(2 sqrt q) = isqrt(4q).
pub fn elliptic_track_size(q: u64, p: u64, m: u32) -> u64 {
    let fl = isqrt(4 * q);
    if fl.is_multiple_of(p) && m >= 3 && m % 2 == 1 {
        q + fl
    } else {
        q + fl + 1
    }
}

/// Dodunekov-Landgev length bound 2q + k for near-MDS codes of dimension k.
pub fn dodunekov_bound(k: u64, q: u64) -> u64 {
    2 * q + k
}

/// Code report serialized for the CLI:
/// `{"q","n","k","d","dual_d","amds","nmds","upper_bound","elliptic_size","dodunekov"}`.
#[derive(Debug, Clone, Serialize)]
pub struct CodeReport {
    pub q: u64,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub dual_d: usize,
    pub amds: bool,
    pub nmds: bool,
    pub upper_bound: u64,
    pub elliptic_size: u64,
    pub dodunekov: u64,
}

impl CodeReport {
    pub fn compute(f: &PrimeField, spec: &LinearCodeSpec) -> CodeReport {
        let d = spec.min_distance(f);
        let dual_d = spec.dual_min_distance(f);
        let k = spec.n - 5;
        let q = f.q();
        CodeReport {
            q,
            n: spec.n,
            k,
            d,
            dual_d,
            amds: d == spec.n - k,
            // the dual is [n, 5]; near-MDS needs it almost-MDS too
            nmds: d == spec.n - k && dual_d == spec.n - 5,
            upper_bound: track_upper_bound(q),
            elliptic_size: elliptic_track_size(q, q, 1),
            dodunekov: dodunekov_bound(5, q),
        }
    }
}
