//! Table-backed arithmetic in small finite fields `F_q`, `q = p^m`.
//!
//! Elements are identified by an index in `[0, q)`: the little-endian base-`p`
//! digits of the index are the coefficients of the element's polynomial
//! representative modulo a monic irreducible polynomial of degree `m`.
//! Index 0 is zero and index 1 is one, for every field.

use std::fmt;

use crate::error::{Error, Result};

/// Largest field order for which tables are built.
pub const MAX_ORDER: u32 = 125;

/// Built-in irreducible moduli, low-degree coefficient first, leading 1 included.
const BUILTIN_MODULI: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),             // t^2 + t + 1
    (2, 3, &[1, 1, 0, 1]),          // t^3 + t + 1
    (2, 4, &[1, 1, 0, 0, 1]),       // t^4 + t + 1
    (2, 5, &[1, 0, 1, 0, 0, 1]),    // t^5 + t^2 + 1
    (2, 6, &[1, 1, 0, 0, 0, 0, 1]), // t^6 + t + 1
    (3, 2, &[1, 0, 1]),             // t^2 + 1
    (5, 2, &[2, 0, 1]),             // t^2 + 2
    (3, 3, &[1, 2, 0, 1]),          // t^3 + 2t + 1
    (7, 2, &[1, 0, 1]),             // t^2 + 1
    (3, 4, &[2, 0, 0, 2, 1]),       // t^4 + 2t^3 + 2
    (11, 2, &[1, 0, 1]),            // t^2 + 1
    (5, 3, &[3, 3, 0, 1]),          // t^3 + 3t + 3
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    /// Unchecked; callers guarantee `index < q`.
    #[inline]
    pub(crate) fn from_index(index: u32) -> Self {
        FieldElem(index)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite field `F_{p^m}` with precomputed operation tables.
///
/// Immutable after construction; share it freely across threads.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` into `(p, m)` with `q = p^m`, `p` prime.
pub fn prime_power(q: u64) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    if rest != 1 {
        return Err(Error::NotPrimePower(q));
    }
    Ok((p as u32, m))
}

impl FieldSpec {
    /// Builds `F_{p^m}`, taking the modulus from the built-in table when `m > 1`.
    pub fn new(p: u32, m: u32) -> Result<Self> {
        if m == 1 {
            return Self::with_modulus(p, 1, &[0, 1]);
        }
        check_params(p, m)?;
        let modulus = BUILTIN_MODULI
            .iter()
            .find(|(bp, bm, _)| *bp == p && *bm == m)
            .map(|(_, _, poly)| *poly)
            .ok_or(Error::NoBuiltinModulus(p.pow(m)))?;
        Self::with_modulus(p, m, modulus)
    }

    /// Builds the field of order `q`, which must be a prime power.
    pub fn from_order(q: u64) -> Result<Self> {
        let (p, m) = prime_power(q)?;
        Self::new(p, m)
    }

    /// Builds `F_{p^m}` from an explicit monic modulus of degree `m`
    /// (coefficients low degree first, `m + 1` entries, last one 1).
    /// For `m = 1` the modulus is ignored beyond shape validation.
    pub fn with_modulus(p: u32, m: u32, modulus: &[u32]) -> Result<Self> {
        check_params(p, m)?;
        let q = p.pow(m);
        if modulus.len() != m as usize + 1 || modulus[m as usize] != 1 {
            return Err(Error::InvalidModulus(format!(
                "expected a monic polynomial of degree {m}, got {modulus:?}"
            )));
        }
        if let Some(&c) = modulus.iter().find(|&&c| c >= p) {
            return Err(Error::InvalidModulus(format!(
                "coefficient {c} not in [0, {p})"
            )));
        }
        if m > 1 && !is_irreducible(modulus, p) {
            return Err(Error::InvalidModulus(format!(
                "{modulus:?} is reducible over F_{p}"
            )));
        }

        let qs = q as usize;
        let digits: Vec<Vec<u32>> = (0..q).map(|i| to_digits(i, p, m)).collect();
        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        for a in 0..qs {
            for b in 0..qs {
                let sum: Vec<u32> = digits[a]
                    .iter()
                    .zip(&digits[b])
                    .map(|(x, y)| (x + y) % p)
                    .collect();
                add[a * qs + b] = from_digits(&sum, p) as u8;
                let prod = poly_mul_mod(&digits[a], &digits[b], modulus, p);
                mul[a * qs + b] = from_digits(&prod, p) as u8;
            }
        }
        let mut neg = vec![0u8; qs];
        let mut inv = vec![0u8; qs];
        for a in 0..qs {
            neg[a] = (0..qs).find(|&b| add[a * qs + b] == 0).unwrap() as u8;
            if a != 0 {
                inv[a] = (1..qs)
                    .find(|&b| mul[a * qs + b] == 1)
                    .ok_or_else(|| Error::Invariant(format!("{a} has no inverse")))?
                    as u8;
            }
        }
        Ok(FieldSpec {
            p,
            m,
            q,
            modulus: modulus.to_vec(),
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_odd(&self) -> bool {
        self.p != 2
    }

    pub fn elem(&self, index: u32) -> Result<FieldElem> {
        if index < self.q {
            Ok(FieldElem(index))
        } else {
            Err(Error::OutOfRange {
                what: "field element",
                index: index as u64,
                bound: self.q as u64,
            })
        }
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q).map(FieldElem)
    }

    /// Polynomial coefficients of `a`, low degree first.
    pub fn digits(&self, a: FieldElem) -> Vec<u32> {
        to_digits(a.0, self.p, self.m)
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.add[(a.0 * self.q + b.0) as usize] as u32)
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.neg[a.0 as usize] as u32)
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.mul[(a.0 * self.q + b.0) as usize] as u32)
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            Err(Error::ZeroInverse)
        } else {
            Ok(FieldElem(self.inv[a.0 as usize] as u32))
        }
    }

    /// Image of an integer under `Z -> F_p ⊆ F_q`.
    pub fn scalar_from_int(&self, c: i64) -> FieldElem {
        FieldElem(c.rem_euclid(self.p as i64) as u32)
    }
}

fn check_params(p: u32, m: u32) -> Result<()> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if m == 0 {
        return Err(Error::ZeroDegree);
    }
    let q = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
    if q > MAX_ORDER as u64 {
        return Err(Error::FieldTooLarge { q, max: MAX_ORDER });
    }
    Ok(())
}

fn to_digits(mut index: u32, p: u32, m: u32) -> Vec<u32> {
    (0..m)
        .map(|_| {
            let d = index % p;
            index /= p;
            d
        })
        .collect()
}

fn from_digits(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn trim(mut poly: Vec<u32>) -> Vec<u32> {
    while poly.last() == Some(&0) {
        poly.pop();
    }
    poly
}

/// Remainder of `a` modulo the monic polynomial `b`.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    while r.len() > db {
        let lead = r[r.len() - 1];
        let shift = r.len() - 1 - db;
        for (i, &bc) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - (lead * bc) % p) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let m = modulus.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let mut r = poly_rem(&prod, modulus, p);
    r.resize(m, 0);
    r
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        for low in 0..p.pow(d as u32) {
            let mut divisor = to_digits(low, p, d as u32);
            divisor.push(1);
            if poly_rem(poly, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}
