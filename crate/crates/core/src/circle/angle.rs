use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Degree of the covering map `σ_d(x) = d·x mod 1`. Always at least 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Degree(u32);

impl Degree {
    pub fn new(d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDegree(d));
        }
        Ok(Degree(d))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl TryFrom<u32> for Degree {
    type Error = Error;
    fn try_from(d: u32) -> Result<Self> {
        Degree::new(d)
    }
}

/// A point of the circle `R/Z`: an exact reduced rational in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Angle(BigRational);

impl Ord for Angle {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self.small(), other.small()) {
            (Some((a, b)), Some((c, d))) => (a as u128 * d as u128).cmp(&(c as u128 * b as u128)),
            _ => self.0.cmp(&other.0),
        }
    }
}

impl PartialOrd for Angle {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Angle {
    pub fn zero() -> Self {
        Angle(BigRational::zero())
    }

    /// `numer/denom` reduced mod 1. Fails only for a zero denominator.
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::MalformedAngle("zero denominator".into()));
        }
        Ok(Self::from_ratio(BigRational::new(numer.into(), denom)))
    }

    /// Reduces an arbitrary rational into `[0, 1)`.
    pub fn from_ratio(r: BigRational) -> Self {
        let floor = r.floor();
        Angle(r - floor)
    }

    /// `numer/denom` for small known-good inputs; panics on a zero denominator.
    pub fn frac(numer: i64, denom: i64) -> Self {
        Self::new(numer, denom).expect("nonzero denominator")
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        let n = self.0.numer().to_f64().unwrap_or(f64::NAN);
        let d = self.0.denom().to_f64().unwrap_or(f64::NAN);
        if n.is_finite() && d.is_finite() {
            n / d
        } else {
            // Both huge: shift down to a representable ratio.
            let shift = self.0.denom().bits().saturating_sub(60);
            let n = (self.0.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (self.0.denom() >> shift).to_f64().unwrap_or(1.0);
            n / d
        }
    }

    /// `(numerator, denominator)` when both fit in a machine word.
    fn small(&self) -> Option<(u64, u64)> {
        Some((self.0.numer().to_u64()?, self.0.denom().to_u64()?))
    }

    /// Builds `n/q` from machine integers, reducing.
    fn from_small(n: u64, q: u64) -> Angle {
        let g = crate::arith::gcd(n, q).max(1);
        Angle(BigRational::new_raw(
            BigInt::from(n / g),
            BigInt::from(q / g),
        ))
    }

    /// `σ_d(self)`.
    pub fn sigma(&self, d: Degree) -> Angle {
        if let Some((n, q)) = self.small() {
            return Angle::from_small(((n as u128 * d.get() as u128) % q as u128) as u64, q);
        }
        let q = self.denom();
        let n = (self.numer() * BigInt::from(d.get())).mod_floor(q);
        Angle(BigRational::new(n, q.clone()))
    }

    /// `σ_d^n(self)`.
    pub fn sigma_iter(&self, d: Degree, n: u64) -> Angle {
        let q = self.denom();
        let factor = BigInt::from(d.get()).modpow(&BigInt::from(n), q);
        let m = (self.numer() * factor).mod_floor(q);
        Angle(BigRational::new(m, q.clone()))
    }

    /// The `d` solutions of `σ_d(x) = self`, in increasing order.
    pub fn preimages(&self, d: Degree) -> Vec<Angle> {
        if let Some((n, q)) = self.small() {
            let dq = q as u128 * d.get() as u128;
            if dq <= u64::MAX as u128 {
                return (0..d.get() as u64)
                    .map(|k| Angle::from_small(n + k * q, dq as u64))
                    .collect();
            }
        }
        let dd = BigInt::from(d.get());
        (0..d.get())
            .map(|k| Angle((&self.0 + BigInt::from(k)) / &dd))
            .collect()
    }

    /// Rotation by `offset` (any rational).
    pub fn rotate(&self, offset: &BigRational) -> Angle {
        Angle::from_ratio(&self.0 + offset)
    }

    /// Length of the positively oriented arc from `self` to `other`, in
    /// `[0, 1)`.
    pub fn ccw_to(&self, other: &Angle) -> BigRational {
        let diff = &other.0 - &self.0;
        if diff.is_negative() {
            diff + BigRational::one()
        } else {
            diff
        }
    }

    /// Shortest-arc distance, in `[0, 1/2]`.
    pub fn distance(&self, other: &Angle) -> BigRational {
        let diff = (&self.0 - &other.0).abs();
        let other_way = BigRational::one() - &diff;
        if diff <= other_way {
            diff
        } else {
            other_way
        }
    }

    /// Whether `self` lies in the open positively oriented arc `(start, end)`.
    /// The arc `(a, a)` is the whole circle minus `a`.
    pub fn in_open_arc(&self, start: &Angle, end: &Angle) -> bool {
        match start.cmp(end) {
            std::cmp::Ordering::Less => start < self && self < end,
            std::cmp::Ordering::Greater => self > start || self < end,
            std::cmp::Ordering::Equal => self != start,
        }
    }
}

/// `σ_d(a)`, rejecting degrees below 2.
pub fn sigma(a: &Angle, d: u32) -> Result<Angle> {
    Ok(a.sigma(Degree::new(d)?))
}

/// The `d` preimages of `a` under `σ_d`.
pub fn preimages(a: &Angle, d: u32) -> Result<Vec<Angle>> {
    Ok(a.preimages(Degree::new(d)?))
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            f.write_str("0")
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Angle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::MalformedAngle(s.to_string());
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let valid = |x: &str| {
            let digits = x.strip_prefix('-').unwrap_or(x);
            !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
        };
        if !valid(n) || !valid(d) {
            return Err(bad());
        }
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Angle::from_ratio(BigRational::new(n, d)))
    }
}

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses a rational such as `1/100` (not reduced mod 1).
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::MalformedAngle(s.to_string());
    let t = s.trim();
    let (n, d) = t.split_once('/').unwrap_or((t, "1"));
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Formats a rational as `p/q` (or `p` when integral).
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
