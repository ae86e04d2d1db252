//! Seeded samplers over the space of critical portraits and the
//! area-decay study of triangles near class-𝒦 portraits.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`), seeded from the 64-bit
//! `seed` of a [`SampleSpec`]; independent samples use separate streams of
//! the same key, so results do not depend on evaluation order or thread
//! count.

mod area;
mod cover;
mod sample;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, gcd, multiplicative_order};
use crate::error::{Error, Result};

pub use area::{
    area_decay_experiment, area_decay_with_threshold, AreaDecayOutcome, AreaDecayRecord,
    AreaDecaySummary, ThresholdRow, VerdictCounts, SUMMARY_THRESHOLDS, TRIANGLES_PER_PORTRAIT,
};
pub use cover::{covering_time, max_gap, EpsilonCover};
pub use sample::{
    random_portrait, sample_class_k, sample_dense_chord_portrait, ClassKCertificate, ClassKSample,
    DenseSample, DensityReport, EndpointDensity,
};

/// Mersenne prime `2^31 − 1`.
pub const DEFAULT_PRIME: u64 = (1 << 31) - 1;

/// Largest accepted denominator prime; keeps `d · p · d` inside `u64`.
const PRIME_LIMIT: u64 = 1 << 40;

fn default_prime() -> u64 {
    DEFAULT_PRIME
}

fn default_retries() -> u64 {
    1000
}

/// Parameters shared by every sampler.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub degree: u32,
    pub seed: u64,
    #[serde(default = "default_prime")]
    pub denominator_prime: u64,
    /// Iteration budget for density checks and wandering detection.
    pub horizon: u64,
    /// Density tolerance: every open arc of this length must be visited.
    #[serde(with = "rational_string")]
    pub epsilon: BigRational,
    /// Draws allowed before giving up.
    #[serde(default = "default_retries")]
    pub retries: u64,
}

impl SampleSpec {
    pub fn new(degree: u32, seed: u64, horizon: u64, epsilon: BigRational) -> Self {
        SampleSpec {
            degree,
            seed,
            denominator_prime: DEFAULT_PRIME,
            horizon,
            epsilon,
            retries: default_retries(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        crate::circle::Degree::new(self.degree)?;
        let p = self.denominator_prime;
        if !(2..PRIME_LIMIT).contains(&p) || factorize(p) != [(p, 1)] {
            return Err(Error::InvalidSpec(format!(
                "denominator_prime {p} is not a prime below 2^40"
            )));
        }
        if gcd(p, self.degree as u64) != 1 {
            return Err(Error::InvalidSpec(format!("prime {p} divides the degree")));
        }
        if !self.epsilon.is_positive() || self.epsilon > BigRational::one() {
            return Err(Error::InvalidSpec("epsilon must lie in (0, 1]".into()));
        }
        // Orbits of m/p are cycles of length ord_p(d); shorter than 1/ε
        // they can never be ε-dense (2^31 − 1 with d = 2 or 4, for one).
        let order = multiplicative_order(self.degree as u64 % p, p);
        if BigRational::from_integer(order.into()) * &self.epsilon < BigRational::one() {
            return Err(Error::InvalidSpec(format!(
                "orbits mod {p} have length {order}, too short for epsilon {}",
                crate::circle::format_rational(&self.epsilon)
            )));
        }
        if self.horizon < 1 {
            return Err(Error::InvalidSpec("horizon must be at least 1".into()));
        }
        if self.retries < 1 {
            return Err(Error::InvalidSpec("retries must be at least 1".into()));
        }
        Ok(())
    }

    /// `ε` as a fraction `(num, den)` of machine integers.
    fn epsilon_parts(&self) -> Result<(u128, u128)> {
        use num_traits::ToPrimitive;
        let n = self.epsilon.numer().to_u128();
        let d = self.epsilon.denom().to_u128();
        match (n, d) {
            (Some(n), Some(d)) if d < (1 << 64) => Ok((n, d)),
            _ => Err(Error::InvalidSpec("epsilon denominator too large".into())),
        }
    }
}

/// Generator for stream `stream` of the spec's key.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub(crate) fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

/// Serde adapter writing a rational as `"p/q"`.
pub mod rational_string {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::circle::{format_rational, parse_rational};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eps(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn spec_validation() {
        let ok = SampleSpec::new(3, 1, 100, eps(1, 100));
        assert!(ok.validate().is_ok());
        let mut bad = ok.clone();
        bad.denominator_prime = 91;
        assert!(bad.validate().is_err());
        let mut bad = ok.clone();
        bad.denominator_prime = 3;
        assert!(bad.validate().is_err());
        let mut bad = ok.clone();
        bad.epsilon = eps(0, 1);
        assert!(bad.validate().is_err());
        let mut bad = ok;
        bad.horizon = 0;
        assert!(bad.validate().is_err());
        // 2 has order 31 modulo 2^31 - 1.
        let short = SampleSpec::new(2, 1, 100, eps(1, 100));
        assert!(matches!(short.validate(), Err(Error::InvalidSpec(_))));
        let mut fine = short;
        fine.denominator_prime = 2_147_483_629;
        assert!(fine.validate().is_ok());
    }

    #[test]
    fn spec_json_defaults() {
        let s: SampleSpec =
            serde_json_from(r#"{"degree":3,"seed":7,"horizon":50,"epsilon":"1/10"}"#);
        assert_eq!(s.denominator_prime, DEFAULT_PRIME);
        assert_eq!(s.epsilon, eps(1, 10));
    }

    fn serde_json_from(s: &str) -> SampleSpec {
        serde_json::from_str(s).unwrap()
    }
}
