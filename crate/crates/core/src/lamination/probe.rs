use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::LaminationApprox;
use crate::circle::{Angle, CircleArc, Degree};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArcEntry {
    pub arc: CircleArc,
    /// First step at which the image of the seed arc meets this arc.
    pub entered_at: Option<usize>,
    /// Both endpoints lie in one class of the supplied lamination, so the
    /// arc is not seen by the quotient; excluded from obstruction reports.
    pub quotient_degenerate: bool,
    /// Never entered within the horizon and not quotient-degenerate.
    pub obstruction: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub degree: u32,
    pub horizon: usize,
    pub seed: CircleArc,
    /// First step at which `σ^n` of the seed arc is the whole circle.
    pub image_covers_at: Option<usize>,
    /// First step at which the union of the images up to that step covers
    /// the circle.
    pub union_covers_at: Option<usize>,
    pub entries: Vec<ArcEntry>,
}

/// Iterates the closed arc `[seed.start, seed.end]` under `σ_d` for up to
/// `horizon` steps. The image of an arc of length `ℓ` starting at `a` is the
/// arc of length `dℓ` starting at `σ(a)`, or the whole circle once `dℓ ≥ 1`.
pub fn condensity_probe(
    d: Degree,
    seed: &CircleArc,
    tests: &[CircleArc],
    horizon: usize,
    lamination: Option<&LaminationApprox>,
) -> Result<ProbeReport> {
    if seed.start == seed.end {
        return Err(Error::InvalidInput(
            "seed arc must have distinct endpoints".into(),
        ));
    }
    if horizon < 1 {
        return Err(Error::OutOfRange {
            what: "horizon",
            min: 1,
        });
    }
    let factor = BigRational::from_integer(BigInt::from(d.get()));
    let mut entries: Vec<ArcEntry> = tests
        .iter()
        .map(|arc| {
            let quotient_degenerate = lamination.is_some_and(|l| {
                l.classes()
                    .iter()
                    .any(|c| c.contains(&arc.start) && c.contains(&arc.end))
            });
            ArcEntry {
                arc: arc.clone(),
                entered_at: None,
                quotient_degenerate,
                obstruction: false,
            }
        })
        .collect();

    let mut start = seed.start.clone();
    let mut len = seed.length();
    let mut image_covers_at = None;
    let mut union_covers_at = None;
    let mut union: Vec<(BigRational, BigRational)> = Vec::new();

    for n in 0..=horizon {
        let full = len >= BigRational::one();
        if full && image_covers_at.is_none() {
            image_covers_at = Some(n);
        }
        for e in entries.iter_mut().filter(|e| e.entered_at.is_none()) {
            if full || meets(&start, &len, &e.arc) {
                e.entered_at = Some(n);
            }
        }
        if union_covers_at.is_none() {
            if full {
                union_covers_at = Some(n);
            } else {
                add_arc(&mut union, start.value().clone(), start.value() + &len);
                if covers(&union) {
                    union_covers_at = Some(n);
                }
            }
        }
        if full {
            break;
        }
        start = start.sigma(d);
        len = &len * &factor;
    }
    for e in &mut entries {
        e.obstruction = e.entered_at.is_none() && !e.quotient_degenerate;
    }
    Ok(ProbeReport {
        degree: d.get(),
        horizon,
        seed: seed.clone(),
        image_covers_at,
        union_covers_at,
        entries,
    })
}

/// Whether the closed arc of length `len < 1` from `m` meets the open arc
/// `test`: in coordinates measured from `m`, the test arc starts inside
/// the image or wraps past `m`.
fn meets(m: &Angle, len: &BigRational, test: &CircleArc) -> bool {
    let t = m.ccw_to(&test.start);
    &t < len || t + test.length() > BigRational::one()
}

/// Adds the closed interval `[a, b]` (with `0 ≤ a < 1`, `b < a + 1`) to a
/// list of disjoint intervals in `[0, 1]`, splitting at 1.
fn add_arc(union: &mut Vec<(BigRational, BigRational)>, a: BigRational, b: BigRational) {
    let one = BigRational::one();
    if b > one {
        union.push((a, one.clone()));
        union.push((BigRational::zero(), b - one));
    } else {
        union.push((a, b));
    }
    union.sort();
    let mut merged: Vec<(BigRational, BigRational)> = Vec::with_capacity(union.len());
    for (a, b) in union.drain(..) {
        match merged.last_mut() {
            Some(last) if a <= last.1 => {
                if b > last.1 {
                    last.1 = b;
                }
            }
            _ => merged.push((a, b)),
        }
    }
    *union = merged;
}

fn covers(union: &[(BigRational, BigRational)]) -> bool {
    union.len() == 1 && union[0].0.is_zero() && union[0].1 >= BigRational::one()
}
