//! Points, planes and hyperplanes of P^4 over F_q.
//!
//! Points are stored normalized (leading nonzero coordinate 1), which makes
//! equality, hashing and the lexicographic index well defined. Ranks are
//! computed by fraction-free Gaussian elimination: rows are combined as
//! `pivot * row - entry * pivot_row`, which needs no inversions and cannot
//! change the rank since pivots are nonzero field elements.

use crate::error::{Error, Result};
use crate::gfield::PrimeField;
use serde::{Deserialize, Serialize};

pub const DIM: usize = 5;

/// A normalized point of P^4: five coordinates, leading nonzero coordinate 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: [u64; DIM],
}

impl ProjPoint {
    /// Normalizes a raw coordinate vector. The all-zero vector is rejected.
    pub fn new(f: &PrimeField, raw: [u64; DIM]) -> Result<ProjPoint> {
        let mut c = raw.map(|x| x % f.q());
        let lead = c.iter().position(|&x| x != 0).ok_or(Error::ZeroVector)?;
        if c[lead] != 1 {
            let inv = f.inv(c[lead]).expect("leading coordinate is nonzero");
            for x in &mut c {
                *x = f.mul(*x, inv);
            }
        }
        Ok(ProjPoint { coords: c })
    }

    #[inline]
    pub fn coords(&self) -> &[u64; DIM] {
        &self.coords
    }

    /// Index of the first nonzero coordinate.
    #[inline]
    pub fn leading(&self) -> usize {
        self.coords.iter().position(|&x| x != 0).unwrap()
    }

    /// On the hyperplane at infinity x0 = 0.
    #[inline]
    pub fn is_infinite(&self) -> bool {
        self.coords[0] == 0
    }

    /// Position of this point in the lexicographic enumeration of P^4.
    pub fn index(&self, f: &PrimeField) -> u64 {
        point_index(f, &self.coords)
    }
}

/// Number of points of P^4 over F_q (equals the number of hyperplanes).
pub fn p4_size(f: &PrimeField) -> u64 {
    let q = f.q();
    assert!(q < 1 << 15, "point enumeration supports q < 2^15");
    1 + q + q * q + q * q * q + q * q * q * q
}

/// Lexicographic index of a normalized coordinate vector; inverse of [`point_at_index`].
#[inline]
pub(crate) fn point_index(f: &PrimeField, c: &[u64; DIM]) -> u64 {
    let q = f.q();
    debug_assert!(q < 1 << 15, "index arithmetic needs q^4 to fit in u64");
    let mut lead = 0;
    while c[lead] == 0 {
        lead += 1;
    }
    debug_assert_eq!(c[lead], 1);
    let mut tail = 0u64;
    for &x in &c[lead + 1..] {
        tail = tail * q + x;
    }
    // points with leading index > lead come first in lexicographic order
    let mut offset = 0u64;
    let mut block = 1u64;
    for _ in lead + 1..DIM {
        offset += block;
        block *= q;
    }
    offset + tail
}

/// The point at a given lexicographic position.
pub fn point_at_index(f: &PrimeField, mut idx: u64) -> ProjPoint {
    let q = f.q();
    let mut lead = DIM - 1;
    let mut block = 1u64;
    loop {
        if idx < block {
            break;
        }
        idx -= block;
        block *= q;
        lead -= 1;
    }
    let mut coords = [0u64; DIM];
    coords[lead] = 1;
    for i in (lead + 1..DIM).rev() {
        coords[i] = idx % q;
        idx /= q;
    }
    ProjPoint { coords }
}

/// All points of P^4 in lexicographic order of the normalized tuple.
/// First point is (0,0,0,0,1). Backed by random access, so the range can be
/// chunked for parallel consumption.
pub fn enumerate_p4(f: &PrimeField) -> impl Iterator<Item = ProjPoint> + '_ {
    (0..p4_size(f)).map(move |i| point_at_index(f, i))
}

/// Rank over F_q of the matrix whose rows are the given coordinate vectors.
pub fn rank(f: &PrimeField, rows: &[[u64; DIM]]) -> usize {
    let mut buf = [[0u64; DIM]; 8];
    assert!(rows.len() <= 8, "rank supports at most 8 rows");
    let n = rows.len();
    buf[..n].copy_from_slice(rows);
    rank_in_place(f, &mut buf[..n])
}

/// Fraction-free elimination on a scratch buffer.
#[inline]
pub(crate) fn rank_in_place(f: &PrimeField, m: &mut [[u64; DIM]]) -> usize {
    let n = m.len();
    let mut r = 0;
    for col in 0..DIM {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(r, p);
        let pivot_row = m[r];
        let piv = pivot_row[col];
        for row in &mut m[r + 1..] {
            let e = row[col];
            if e == 0 {
                continue;
            }
            let neg = f.neg(e);
            for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x = f.add(f.mul(piv, *x), f.mul(neg, *p));
            }
        }
        r += 1;
    }
    r
}

/// Rank of a list of points; empty input is an error.
pub fn rank_points(f: &PrimeField, pts: &[ProjPoint]) -> Result<usize> {
    if pts.is_empty() {
        return Err(Error::EmptyRank);
    }
    let rows: Vec<[u64; DIM]> = pts.iter().map(|p| *p.coords()).collect();
    Ok(rank(f, &rows))
}

/// All q^2 + q + 1 points of the plane spanned by three independent points.
///
/// Runs over the coefficient representatives (1,b,g), (0,1,g), (0,0,1), which
/// emits every plane point exactly once, then normalizes.
pub fn plane_points(
    f: &PrimeField,
    p1: &ProjPoint,
    p2: &ProjPoint,
    p3: &ProjPoint,
) -> Result<Vec<ProjPoint>> {
    if rank(f, &[*p1.coords(), *p2.coords(), *p3.coords()]) != 3 {
        return Err(Error::DegenerateSpan);
    }
    let q = f.q();
    let mut out = Vec::with_capacity((q * q + q + 1) as usize);
    let (c1, c2, c3) = (p1.coords(), p2.coords(), p3.coords());
    for beta in 0..q {
        let mut base = [0u64; DIM];
        for i in 0..DIM {
            base[i] = f.add(c1[i], f.mul(beta, c2[i]));
        }
        for gamma in 0..q {
            let mut v = [0u64; DIM];
            for i in 0..DIM {
                v[i] = f.add(base[i], f.mul(gamma, c3[i]));
            }
            out.push(ProjPoint::new(f, v).expect("independent spanning points"));
        }
    }
    for gamma in 0..q {
        let mut v = [0u64; DIM];
        for i in 0..DIM {
            v[i] = f.add(c2[i], f.mul(gamma, c3[i]));
        }
        out.push(ProjPoint::new(f, v).expect("independent spanning points"));
    }
    out.push(*p3);
    Ok(out)
}

/// A hyperplane of P^4, stored as a normalized coefficient vector.
/// A point lies on it iff the dot product of coordinates and coefficients vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    coeffs: [u64; DIM],
}

impl Hyperplane {
    pub fn new(f: &PrimeField, raw: [u64; DIM]) -> Result<Hyperplane> {
        let p = ProjPoint::new(f, raw)?;
        Ok(Hyperplane { coeffs: p.coords })
    }

    #[inline]
    pub fn coeffs(&self) -> &[u64; DIM] {
        &self.coeffs
    }

    #[inline]
    pub fn contains(&self, f: &PrimeField, p: &ProjPoint) -> bool {
        let mut acc = 0;
        for i in 0..DIM {
            acc = f.add(acc, f.mul(self.coeffs[i], p.coords[i]));
        }
        acc == 0
    }
}

/// All hyperplanes, by point-hyperplane duality in the same lexicographic order.
pub fn enumerate_hyperplanes(f: &PrimeField) -> impl Iterator<Item = Hyperplane> + '_ {
    (0..p4_size(f)).map(move |i| Hyperplane {
        coeffs: *point_at_index(f, i).coords(),
    })
}

/// Ordered, duplicate-free collection of points with membership lookup.
///
/// Iteration order is insertion order; membership queries go through a sorted
/// permutation of the normalized tuples (binary search).
#[derive(Debug, Clone)]
pub struct PointSet {
    q: u64,
    points: Vec<ProjPoint>,
    order: Vec<u32>, // permutation sorting `points` by coordinates
}

impl PointSet {
    pub fn new(f: &PrimeField) -> PointSet {
        PointSet {
            q: f.q(),
            points: Vec::new(),
            order: Vec::new(),
        }
    }

    pub fn from_points(f: &PrimeField, pts: impl IntoIterator<Item = ProjPoint>) -> PointSet {
        let mut s = PointSet::new(f);
        for p in pts {
            s.insert(p);
        }
        s
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn get(&self, i: usize) -> &ProjPoint {
        &self.points[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &ProjPoint> {
        self.points.iter()
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    /// Inserts a point, returning false if it was already present.
    pub fn insert(&mut self, p: ProjPoint) -> bool {
        match self.order.binary_search_by(|&i| self.points[i as usize].cmp(&p)) {
            Ok(_) => false,
            Err(slot) => {
                self.order.insert(slot, self.points.len() as u32);
                self.points.push(p);
                true
            }
        }
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.position(p).is_some()
    }

    /// Insertion position of a point, if present.
    pub fn position(&self, p: &ProjPoint) -> Option<usize> {
        self.order
            .binary_search_by(|&i| self.points[i as usize].cmp(p))
            .ok()
            .map(|slot| self.order[slot] as usize)
    }

    /// File form of this set (see [`PointSetFile`]).
    pub fn to_file(&self, family: Option<&str>) -> PointSetFile {
        PointSetFile {
            q: self.q,
            family: family.map(|s| s.to_string()),
            points: self.points.iter().map(|p| *p.coords()).collect(),
        }
    }
}

/// Serialized point-set schema: `{"q": .., "points": [[5 ints], ..]}` with an
/// optional `family` tag ("N", "V" or "track") written by the constructors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointSetFile {
    pub q: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub family: Option<String>,
    pub points: Vec<[u64; DIM]>,
}

impl PointSetFile {
    /// Validates and normalizes the stored points. Duplicate rows (after
    /// normalization) and all-zero rows are rejected.
    pub fn into_point_set(self) -> Result<(PrimeField, PointSet)> {
        let f = PrimeField::new(self.q)?;
        let mut s = PointSet::new(&f);
        for raw in self.points {
            let p = ProjPoint::new(&f, raw)?;
            if !s.insert(p) {
                return Err(Error::Precondition("duplicate point in point-set file"));
            }
        }
        Ok((f, s))
    }
}
