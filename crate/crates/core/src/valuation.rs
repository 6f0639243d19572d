//! Exact p-adic valuations of integers and rationals.
//!
//! Everything in the crate that asks "is this divisible by p^s" goes through
//! [`vp`]. Valuations are found by repeated exact division; no logarithms.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Pow, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A rational prime, checked for primality at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// `p^e` as an exact integer.
    pub fn pow(self, e: u64) -> BigInt {
        Pow::pow(&self.to_bigint(), e)
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Deterministic Miller-Rabin; the witness set below is exact for all u64.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut base: u64, mut e: u64| {
        let mut acc = 1u64;
        base %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &SMALL {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A p-adic valuation of an integer: a nonnegative integer or `Infinity` (for zero).
///
/// Ordered with every finite value below `Infinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u64),
    Infinity,
}

impl Valuation {
    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinity)
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    /// True iff this valuation is at least `bound`.
    pub fn at_least(self, bound: u64) -> bool {
        match self {
            Valuation::Finite(v) => v >= bound,
            Valuation::Infinity => true,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_u64(*v),
            Valuation::Infinity => s.serialize_str("inf"),
        }
    }
}

/// Valuation of a rational number; may be negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignedValuation {
    Finite(i64),
    Infinity,
}

impl PartialOrd for SignedValuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SignedValuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (SignedValuation::Finite(a), SignedValuation::Finite(b)) => a.cmp(b),
            (SignedValuation::Finite(_), SignedValuation::Infinity) => Ordering::Less,
            (SignedValuation::Infinity, SignedValuation::Finite(_)) => Ordering::Greater,
            (SignedValuation::Infinity, SignedValuation::Infinity) => Ordering::Equal,
        }
    }
}

/// Largest `s` with `p^s | z`; `Infinity` iff `z == 0`. The sign of `z` is ignored.
pub fn vp(z: &BigInt, p: Prime) -> Valuation {
    if z.is_zero() {
        return Valuation::Infinity;
    }
    if p.get() == 2 {
        return Valuation::Finite(z.trailing_zeros().unwrap_or(0));
    }
    let pb = p.to_bigint();
    let mut m = z.abs();
    let mut v = 0u64;
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return Valuation::Finite(v);
        }
        m = q;
        v += 1;
    }
}

/// Convenience wrapper for machine integers.
pub fn vp_i64(z: i64, p: Prime) -> Valuation {
    vp(&BigInt::from(z), p)
}

/// `vp(num) - vp(den)`, or `Infinity` when `num == 0`.
pub fn vp_rational(num: &BigInt, den: &BigInt, p: Prime) -> Result<SignedValuation> {
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    let d = vp(den, p).finite().expect("nonzero denominator has finite valuation");
    Ok(match vp(num, p) {
        Valuation::Infinity => SignedValuation::Infinity,
        Valuation::Finite(n) => SignedValuation::Finite(n as i64 - d as i64),
    })
}

/// True iff `p^e` divides `z`.
pub fn divisible_by_power(z: &BigInt, p: Prime, e: u64) -> bool {
    if e == 0 || z.is_zero() {
        return true;
    }
    vp(z, p).at_least(e)
}

/// Splits a nonzero `z` as `p^v * u` with `p` not dividing `u`.
pub(crate) fn split_p_power(z: &BigInt, p: Prime) -> (u64, BigInt) {
    debug_assert!(!z.is_zero());
    let pb = p.to_bigint();
    let mut u = z.clone();
    let mut v = 0u64;
    loop {
        let (q, r) = u.div_rem(&pb);
        if !r.is_zero() {
            return (v, u);
        }
        u = q;
        v += 1;
    }
}
