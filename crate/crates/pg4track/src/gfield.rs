//! Exact arithmetic in the prime field F_q and univariate polynomials over it.
//!
//! Field elements are canonical residues in `[0, q)` stored as `u64`; the
//! [`PrimeField`] context carries the modulus and all operations. The modulus
//! is capped at 2^31 - 1 so every product of two canonical residues fits in a
//! `u64` without widening.

use crate::error::{Error, Result};

/// Largest supported modulus. (2^31 - 1)^2 < 2^64, so plain `u64` products never overflow.
pub const MAX_MODULUS: u64 = (1 << 31) - 1;

/// The prime field F_q for an odd prime q >= 5 with q not divisible by 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    q: u64,
}

impl PrimeField {
    /// Validates and wraps a modulus. Characteristic 2 and 3 are rejected:
    /// the constructions downstream divide by 2 and 3 freely.
    pub fn new(q: u64) -> Result<Self> {
        if !(5..=MAX_MODULUS).contains(&q) || q.is_multiple_of(2) || q.is_multiple_of(3) || !is_prime_u64(q) {
            return Err(Error::BadModulus(q));
        }
        Ok(PrimeField { q })
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Canonical residue of a signed integer.
    #[inline]
    pub fn reduce_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.q as i64) as u64
    }

    #[inline]
    pub fn add(&self, x: u64, y: u64) -> u64 {
        let s = x + y;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, x: u64, y: u64) -> u64 {
        if x >= y {
            x - y
        } else {
            self.q - (y - x)
        }
    }

    #[inline]
    pub fn neg(&self, x: u64) -> u64 {
        if x == 0 {
            0
        } else {
            self.q - x
        }
    }

    #[inline]
    pub fn mul(&self, x: u64, y: u64) -> u64 {
        debug_assert!(x < self.q && y < self.q);
        x * y % self.q
    }

    pub fn pow(&self, mut x: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, x);
            }
            x = self.mul(x, x);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat's little theorem.
    pub fn inv(&self, x: u64) -> Result<u64> {
        if x == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(x, self.q - 2))
    }

    /// Table of inverses indexed by residue; entry 0 is unused (set to 0).
    /// Worth building once before a tight normalization loop.
    pub fn inverse_table(&self) -> Vec<u64> {
        let mut t = vec![0u64; self.q as usize];
        for x in 1..self.q {
            t[x as usize] = self.pow(x, self.q - 2);
        }
        t
    }

    /// Euler's criterion: 0 for x = 0, 1 for a nonzero square, -1 otherwise.
    pub fn quadratic_character(&self, x: u64) -> i32 {
        if x == 0 {
            return 0;
        }
        let e = self.pow(x, (self.q - 1) / 2);
        if e == 1 {
            1
        } else {
            -1
        }
    }

    /// Square root by Tonelli-Shanks, canonicalized to the smaller of the two
    /// representatives. `None` signals a non-residue.
    pub fn sqrt(&self, x: u64) -> Option<u64> {
        if x == 0 {
            return Some(0);
        }
        if self.quadratic_character(x) != 1 {
            return None;
        }
        let q = self.q;
        let r = if q % 4 == 3 {
            self.pow(x, (q + 1) / 4)
        } else {
            // q = 1 mod 4: full Tonelli-Shanks
            let mut m = q - 1;
            let mut e = 0u32;
            while m.is_multiple_of(2) {
                m /= 2;
                e += 1;
            }
            let z = (2..q)
                .find(|&z| self.quadratic_character(z) == -1)
                .expect("a non-residue exists in every field with q > 2");
            let mut c = self.pow(z, m);
            let mut t = self.pow(x, m);
            let mut r = self.pow(x, m.div_ceil(2));
            let mut s = e;
            while t != 1 {
                let mut i = 0;
                let mut t2 = t;
                while t2 != 1 {
                    t2 = self.mul(t2, t2);
                    i += 1;
                }
                let b = self.pow(c, 1 << (s - i - 1));
                r = self.mul(r, b);
                c = self.mul(b, b);
                t = self.mul(t, c);
                s = i;
            }
            r
        };
        Some(r.min(q - r))
    }

    /// Whether 3 is a nonzero square in F_q; the track construction needs it not to be.
    pub fn three_is_square(&self) -> bool {
        self.quadratic_character(3 % self.q) == 1
    }

    /// All canonical residues, ascending.
    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.q
    }
}

/// Deterministic Miller-Rabin; the bases 2, 7 and 61 decide primality for all n < 4_759_123_141.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 7, 61] {
        let mut x = 1u64;
        // modular pow with u128 to stay safe for any n < 2^63
        let mut base = a % n;
        let mut e = d;
        while e > 0 {
            if e & 1 == 1 {
                x = (x as u128 * base as u128 % n as u128) as u64;
            }
            base = (base as u128 * base as u128 % n as u128) as u64;
            e >>= 1;
        }
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = (x as u128 * x as u128 % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Dense univariate polynomial over F_q, lowest degree first, no trailing zeros.
/// The zero polynomial is the empty coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<u64>,
}

impl Poly {
    /// Builds from canonical coefficients, trimming trailing zeros.
    pub fn new(coeffs: Vec<u64>) -> Poly {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    /// Builds from signed coefficients, reducing each mod q.
    pub fn from_signed(f: &PrimeField, coeffs: &[i64]) -> Poly {
        Poly::new(coeffs.iter().map(|&c| f.reduce_i64(c)).collect())
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    /// Horner evaluation.
    pub fn eval(&self, f: &PrimeField, x: u64) -> u64 {
        let mut acc = 0;
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        acc
    }

    pub fn mul(&self, f: &PrimeField, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(out)
    }

    pub fn sub(&self, f: &PrimeField, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, o) in out.iter_mut().enumerate() {
            *o = f.sub(self.coeff(i), other.coeff(i));
        }
        Poly::new(out)
    }

    /// All roots in F_q by full scan, ascending. The zero polynomial is rejected.
    pub fn roots(&self, f: &PrimeField) -> Result<Vec<u64>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(f.elements().filter(|&x| self.eval(f, x) == 0).collect())
    }

    /// Polynomial square root, if one exists over F_q.
    ///
    /// Leading coefficient must be a square and the degree even; the remaining
    /// coefficients are determined from the top down and the candidate is
    /// verified by exact multiplication. The returned root has the canonical
    /// (smaller) square root of the leading coefficient, which fixes the sign.
    pub fn square_root(&self, f: &PrimeField) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let d = self.degree().unwrap();
        if d % 2 == 1 {
            return None;
        }
        let lead = f.sqrt(self.coeff(d))?;
        let m = d / 2;
        let mut s = vec![0u64; m + 1];
        s[m] = lead;
        let inv_2lead = f.inv(f.mul(2, lead)).expect("lead is nonzero");
        for j in (0..m).rev() {
            // coefficient of x^(m+j) in S^2 is 2 s_m s_j plus the inner convolution
            let mut inner = 0;
            for i in j + 1..m {
                inner = f.add(inner, f.mul(s[i], s[m + j - i]));
            }
            s[j] = f.mul(f.sub(self.coeff(m + j), inner), inv_2lead);
        }
        let cand = Poly::new(s);
        if cand.mul(f, &cand) == *self {
            Some(cand)
        } else {
            None
        }
    }
}

/// Odd primes q >= 5 with q coprime to 6 and 3 a non-square, ascending up to `limit`.
/// These are exactly the moduli for which the 2q+1 construction applies.
pub fn admissible_moduli(limit: u64) -> Vec<u64> {
    (5..=limit)
        .filter_map(|q| PrimeField::new(q).ok())
        .filter(|f| !f.three_is_square())
        .map(|f| f.q())
        .collect()
}
