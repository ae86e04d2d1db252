use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::Serialize;

use super::{big, covering_time, stream_rng, SampleSpec};
use crate::circle::{orbit_reaches, orbit_shape, unlinked, Angle, AngleSet, Degree};
use crate::error::{Error, Result};
use crate::portrait::{validate_portrait, CriticalPortrait};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndpointDensity {
    pub angle: Angle,
    pub covering_time: u64,
}

/// ε-density certificate: every endpoint orbit is ε-dense after the stated
/// number of steps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityReport {
    #[serde(with = "super::rational_string")]
    pub epsilon: num_rational::BigRational,
    pub horizon: u64,
    pub endpoints: Vec<EndpointDensity>,
    /// Maximum over the endpoints.
    pub covering_time: u64,
    /// Draws consumed, including the accepted one.
    pub attempts: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DenseSample {
    pub portrait: CriticalPortrait,
    pub density: DensityReport,
}

/// Exact witnesses for membership of a cubic two-leaf portrait in the
/// class-𝒦 surrogate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassKCertificate {
    /// Critical values `σ(𝐜)` and `σ(𝐝)`.
    pub values: (Angle, Angle),
    /// `σ^a(σ(𝐜)) = σ^b(σ(𝐝))`.
    pub a: u64,
    pub b: u64,
    /// Longest endpoint orbit (preperiod + period); non-incidence was
    /// checked over complete orbits, so this bounds every step.
    pub non_incidence_horizon: u64,
}

impl ClassKCertificate {
    /// Recomputes the common image directly.
    pub fn verify(&self) -> bool {
        let d = Degree::new(3).expect("cubic");
        self.values.0.sigma_iter(d, self.a) == self.values.1.sigma_iter(d, self.b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassKSample {
    pub portrait: CriticalPortrait,
    pub certificate: ClassKCertificate,
    pub density: DensityReport,
}

/// Endpoints as numerators over the common denominator `D = d·p`.
struct Endpoints {
    denom: u64,
    numers: Vec<u64>,
}

impl Endpoints {
    fn angles(&self) -> Vec<Angle> {
        self.numers
            .iter()
            .map(|&n| Angle::new(big(n), big(self.denom)).expect("nonzero denominator"))
            .collect()
    }

    fn density(&self, spec: &SampleSpec, attempts: u64) -> Result<Option<DensityReport>> {
        let eps = spec.epsilon_parts()?;
        let mut endpoints = Vec::with_capacity(self.numers.len());
        for (&n, angle) in self.numers.iter().zip(self.angles()) {
            match covering_time(n, self.denom, spec.degree as u64, eps, spec.horizon) {
                Some(t) => endpoints.push(EndpointDensity {
                    angle,
                    covering_time: t,
                }),
                None => return Ok(None),
            }
        }
        let covering_time = endpoints.iter().map(|e| e.covering_time).max().unwrap_or(0);
        Ok(Some(DensityReport {
            epsilon: spec.epsilon.clone(),
            horizon: spec.horizon,
            endpoints,
            covering_time,
            attempts,
        }))
    }
}

fn portrait_from(d: Degree, sets: Vec<AngleSet>) -> Option<CriticalPortrait> {
    validate_portrait(d, sets).ok()
}

/// Draws `d − 1` critical chords `{m/p, m/p + k/d}` until they form a valid
/// portrait whose endpoint orbits are all ε-dense within the horizon.
pub fn sample_dense_chord_portrait(spec: &SampleSpec) -> Result<DenseSample> {
    spec.validate()?;
    let mut rng = stream_rng(spec.seed, 0);
    dense_chords_with(spec, &mut rng)
}

fn dense_chords_with(spec: &SampleSpec, rng: &mut impl Rng) -> Result<DenseSample> {
    let d = Degree::new(spec.degree)?;
    let p = spec.denominator_prime;
    let dd = spec.degree as u64;
    let denom = dd * p;
    for attempt in 1..=spec.retries {
        let mut numers = Vec::new();
        let mut sets = Vec::new();
        for _ in 1..dd {
            let m = rng.random_range(0..p);
            let k = rng.random_range(1..dd);
            let (x, y) = (m * dd, (m * dd + k * p) % denom);
            numers.extend([x, y]);
            sets.push(AngleSet::new(
                [x, y].map(|n| Angle::new(big(n), big(denom)).expect("D > 0")),
            ));
        }
        let Some(portrait) = portrait_from(d, sets) else {
            continue;
        };
        let ends = Endpoints { denom, numers };
        if let Some(density) = ends.density(spec, attempt)? {
            return Ok(DenseSample { portrait, density });
        }
    }
    Err(Error::SamplingExhausted {
        attempts: spec.retries,
    })
}

/// Samples a cubic portrait of two critical leaves in the class-𝒦
/// surrogate. The critical value of `𝐝` is drawn on the forward orbit of
/// the critical value of `𝐜`, which gives the common image; each leaf is
/// the pair of preimages of its critical value with denominator `3p`.
pub fn sample_class_k(spec: &SampleSpec) -> Result<ClassKSample> {
    spec.validate()?;
    let mut rng = stream_rng(spec.seed, 0);
    class_k_with(spec, &mut rng)
}

/// Largest forward shift between the two critical values.
const MAX_SHIFT: u64 = 64;

pub(super) fn class_k_with(spec: &SampleSpec, rng: &mut impl Rng) -> Result<ClassKSample> {
    if spec.degree != 3 {
        return Err(Error::UnsupportedDegree {
            got: spec.degree,
            expected: 3,
        });
    }
    let d = Degree::new(3)?;
    let p = spec.denominator_prime;
    let denom = 3 * p;
    for attempt in 1..=spec.retries {
        let m = rng.random_range(1..p);
        let shift = rng.random_range(1..=MAX_SHIFT);
        let m2 = (m as u128 * crate::arith::pow_mod(3, shift, p) as u128 % p as u128) as u64;
        if m2 == m {
            continue;
        }
        let leaf =
            |m: u64| -> Vec<u64> { (0..3).map(|j| m + j * p).filter(|n| n % 3 != 0).collect() };
        let (c, dl) = (leaf(m), leaf(m2));
        let to_set = |ns: &[u64]| {
            AngleSet::new(
                ns.iter()
                    .map(|&n| Angle::new(big(n), big(denom)).expect("D > 0")),
            )
        };
        let (cs, ds) = (to_set(&c), to_set(&dl));
        if !unlinked(&cs, &ds) {
            continue;
        }
        let Some(portrait) = portrait_from(d, vec![cs.clone(), ds.clone()]) else {
            continue;
        };
        let numers: Vec<u64> = c.iter().chain(&dl).copied().collect();
        let ends = Endpoints { denom, numers };
        let Some(density) = ends.density(spec, attempt)? else {
            continue;
        };
        let incident = cs
            .iter()
            .any(|x| ds.iter().any(|y| orbit_reaches(x, y, d).is_some()))
            || ds
                .iter()
                .any(|y| cs.iter().any(|x| orbit_reaches(y, x, d).is_some()));
        if incident {
            continue;
        }
        let vc = cs.first().expect("leaf").sigma(d);
        let vd = ds.first().expect("leaf").sigma(d);
        let (a, b) = match (orbit_reaches(&vc, &vd, d), orbit_reaches(&vd, &vc, d)) {
            (Some(a), _) => (a, 0),
            (None, Some(b)) => (0, b),
            (None, None) => continue,
        };
        let non_incidence_horizon = cs
            .iter()
            .chain(ds.iter())
            .map(|x| orbit_shape(x, d).orbit_len())
            .max()
            .unwrap_or(0);
        let certificate = ClassKCertificate {
            values: (vc, vd),
            a,
            b,
            non_incidence_horizon,
        };
        if !certificate.verify() {
            continue;
        }
        return Ok(ClassKSample {
            portrait,
            certificate,
            density,
        });
    }
    Err(Error::SamplingExhausted {
        attempts: spec.retries,
    })
}

/// A random valid portrait of degree `d` whose angles all have denominator
/// at most `max_denominator`. Initial sets are subsets of the preimages of
/// a random critical value, of random sizes, drawn until the count clause
/// is met; polygons occur whenever the degree allows.
pub fn random_portrait(
    d: Degree,
    rng: &mut impl Rng,
    max_denominator: u64,
) -> Result<CriticalPortrait> {
    let dd = d.get() as u64;
    if max_denominator < dd {
        return Err(Error::OutOfRange {
            what: "max_denominator",
            min: dd,
        });
    }
    const ROUNDS: u64 = 10_000;
    for _ in 0..ROUNDS {
        let mut sets: Vec<AngleSet> = Vec::new();
        let mut remaining = dd - 1;
        let mut stuck = 0;
        while remaining > 0 && stuck < 64 {
            let size = rng.random_range(2..=remaining + 1);
            let q = rng.random_range(1..=max_denominator);
            let m = rng.random_range(0..q);
            let mut offsets: Vec<u64> = (1..dd).collect();
            for i in 0..(size as usize - 1) {
                let j = rng.random_range(i..offsets.len());
                offsets.swap(i, j);
            }
            let base = Angle::new(big(m), big(q)).expect("q > 0");
            let members: Vec<Angle> = std::iter::once(0)
                .chain(offsets[..size as usize - 1].iter().copied())
                .map(|k| {
                    base.rotate(&num_rational::BigRational::new(
                        BigInt::from(k),
                        BigInt::from(dd),
                    ))
                })
                .collect();
            let fits = members
                .iter()
                .all(|a| a.denom().to_u64().is_some_and(|q| q <= max_denominator));
            let set = AngleSet::new(members);
            if fits && sets.iter().all(|s| unlinked(s, &set)) {
                sets.push(set);
                remaining -= size - 1;
                stuck = 0;
            } else {
                stuck += 1;
            }
        }
        if remaining == 0 {
            if let Ok(p) = validate_portrait(d, sets) {
                return Ok(p);
            }
        }
    }
    Err(Error::SamplingExhausted { attempts: ROUNDS })
}
