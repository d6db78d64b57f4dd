//! Nonnegative weights of the form `m * 2^e`.
//!
//! Doubling weights overflow machine integers quickly, so the data
//! structures are generic over [`Weight`]. [`ExpFloat`] keeps a float
//! mantissa next to an integer exponent and is the fast default;
//! [`Dyadic`] is exact and is what the differential tests use.

use std::fmt::Debug;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

pub trait Weight: Clone + Debug + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn pow2(e: i64) -> Self {
        Self::one().mul_pow2(e)
    }
    fn from_u64(v: u64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn mul_pow2(&self, e: i64) -> Self;
    fn is_zero(&self) -> bool;
    /// `(f, e)` with `f` in `[1, 2)` and value `f * 2^e`; `(0, 0)` for zero.
    fn parts(&self) -> (f64, i64);

    fn log2(&self) -> f64 {
        let (f, e) = self.parts();
        if f == 0.0 {
            f64::NEG_INFINITY
        } else {
            f.log2() + e as f64
        }
    }

    /// `self / other` as a float; 0 when `other` is zero.
    fn ratio(&self, other: &Self) -> f64 {
        let (a, ea) = self.parts();
        let (b, eb) = other.parts();
        if b == 0.0 {
            return 0.0;
        }
        if a == 0.0 {
            return 0.0;
        }
        let diff = (ea - eb).clamp(-2000, 2000) as i32;
        (a / b) * 2f64.powi(diff)
    }

    fn to_f64(&self) -> f64 {
        let (f, e) = self.parts();
        f * 2f64.powi(e.clamp(-2000, 2000) as i32)
    }

    /// `self >= c * other`, evaluated in the log domain.
    fn at_least(&self, c: f64, other: &Self) -> bool {
        if other.is_zero() || c <= 0.0 {
            return true;
        }
        if self.is_zero() {
            return false;
        }
        self.ratio(other) >= c
    }
}

/// Float mantissa in `[1, 2)` (or exactly 0) with a 64-bit exponent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpFloat {
    m: f64,
    e: i64,
}

impl ExpFloat {
    fn norm(mut m: f64, mut e: i64) -> Self {
        if m == 0.0 {
            return ExpFloat { m: 0.0, e: 0 };
        }
        while m >= 2.0 {
            m *= 0.5;
            e += 1;
        }
        while m < 1.0 {
            m *= 2.0;
            e -= 1;
        }
        ExpFloat { m, e }
    }
}

impl Weight for ExpFloat {
    fn zero() -> Self {
        ExpFloat { m: 0.0, e: 0 }
    }
    fn one() -> Self {
        ExpFloat { m: 1.0, e: 0 }
    }
    fn from_u64(v: u64) -> Self {
        if v == 0 {
            return Self::zero();
        }
        let lz = 63 - v.leading_zeros() as i64;
        Self::norm(v as f64 / 2f64.powi(lz as i32), lz)
    }
    fn add(&self, o: &Self) -> Self {
        if self.m == 0.0 {
            return *o;
        }
        if o.m == 0.0 {
            return *self;
        }
        let (big, small) = if self.e >= o.e { (self, o) } else { (o, self) };
        let shift = big.e - small.e;
        if shift > 60 {
            return *big;
        }
        Self::norm(big.m + small.m * 2f64.powi(-(shift as i32)), big.e)
    }
    fn mul(&self, o: &Self) -> Self {
        if self.m == 0.0 || o.m == 0.0 {
            return Self::zero();
        }
        Self::norm(self.m * o.m, self.e + o.e)
    }
    fn mul_pow2(&self, e: i64) -> Self {
        if self.m == 0.0 {
            return *self;
        }
        ExpFloat {
            m: self.m,
            e: self.e + e,
        }
    }
    fn is_zero(&self) -> bool {
        self.m == 0.0
    }
    fn parts(&self) -> (f64, i64) {
        (self.m, self.e)
    }
}

/// Exact dyadic rational `m * 2^e`, kept with odd `m` (or `m = 0, e = 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dyadic {
    m: BigUint,
    e: i64,
}

impl Dyadic {
    fn norm(m: BigUint, e: i64) -> Self {
        if m.is_zero() {
            return Dyadic { m, e: 0 };
        }
        let tz = m.trailing_zeros().unwrap_or(0);
        Dyadic {
            m: m >> tz,
            e: e + tz as i64,
        }
    }

    /// Exact value when it is an integer that fits.
    pub fn to_u128(&self) -> Option<u128> {
        if self.e < 0 {
            return None;
        }
        let v: BigUint = self.m.clone() << self.e as u64;
        v.to_u128()
    }
}

impl Weight for Dyadic {
    fn zero() -> Self {
        Dyadic {
            m: BigUint::zero(),
            e: 0,
        }
    }
    fn one() -> Self {
        Dyadic {
            m: BigUint::from(1u32),
            e: 0,
        }
    }
    fn from_u64(v: u64) -> Self {
        Self::norm(BigUint::from(v), 0)
    }
    fn add(&self, o: &Self) -> Self {
        if self.m.is_zero() {
            return o.clone();
        }
        if o.m.is_zero() {
            return self.clone();
        }
        let e = self.e.min(o.e);
        let a = self.m.clone() << (self.e - e) as u64;
        let b = o.m.clone() << (o.e - e) as u64;
        Self::norm(a + b, e)
    }
    fn mul(&self, o: &Self) -> Self {
        if self.m.is_zero() || o.m.is_zero() {
            return Self::zero();
        }
        Self::norm(&self.m * &o.m, self.e + o.e)
    }
    fn mul_pow2(&self, e: i64) -> Self {
        if self.m.is_zero() {
            return self.clone();
        }
        Dyadic {
            m: self.m.clone(),
            e: self.e + e,
        }
    }
    fn is_zero(&self) -> bool {
        self.m.is_zero()
    }
    fn parts(&self) -> (f64, i64) {
        if self.m.is_zero() {
            return (0.0, 0);
        }
        let bits = self.m.bits() as i64;
        let shift = (bits - 60).max(0);
        let top = (&self.m >> shift as u64).to_u64().unwrap();
        let lz = 63 - top.leading_zeros() as i64;
        let f = top as f64 / 2f64.powi(lz as i32);
        (f, self.e + shift + lz)
    }
}
