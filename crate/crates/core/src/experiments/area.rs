use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::sample::class_k_with;
use super::{big, stream_rng, ClassKSample, SampleSpec};
use crate::circle::{
    hull_area, Angle, AngleSet, Degree, AREA_RELATIVE_TOLERANCE, MAX_TRIANGLE_AREA,
};
use crate::error::{Error, Result};
use crate::lamination::{detect_wandering, WanderingVerdict};
use crate::portrait::{in_subbasis_neighborhood, CriticalPortrait};

/// Triangles drawn against each sampled portrait.
pub const TRIANGLES_PER_PORTRAIT: usize = 50;

/// Area thresholds of the summary table, as `(label, value)`.
pub const SUMMARY_THRESHOLDS: [(&str, f64); 4] =
    [("1/10", 0.1), ("1/5", 0.2), ("1/2", 0.5), ("1", 1.0)];

/// Portrait streams are even, triangle streams odd.
fn portrait_stream(id: usize) -> u64 {
    2 * id as u64
}
fn triangle_stream(index: usize) -> u64 {
    2 * index as u64 + 1
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AreaDecayRecord {
    pub portrait_id: usize,
    pub triangle: AngleSet,
    /// Approximate (floating point).
    pub area: f64,
    pub survival: usize,
    pub verdict: WanderingVerdict,
}

impl AreaDecayRecord {
    /// Runs the wandering detector on `triangle` and records the result.
    pub fn evaluate(portrait_id: usize, triangle: AngleSet, d: Degree, horizon: usize) -> Self {
        let verdict = detect_wandering(&triangle, d, horizon);
        AreaDecayRecord {
            portrait_id,
            area: hull_area(&triangle),
            triangle,
            survival: verdict.survival(),
            verdict,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerdictCounts {
    pub collision: usize,
    pub linked: usize,
    pub preperiodic: usize,
    pub wandering_up_to: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdRow {
    pub threshold: String,
    pub count: usize,
    /// `None` when no record reaches the threshold.
    pub max_survival: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AreaDecaySummary {
    pub min_area: f64,
    pub horizon: usize,
    pub portraits: usize,
    pub records: usize,
    pub max_survival: Option<usize>,
    pub verdicts: VerdictCounts,
    pub table: Vec<ThresholdRow>,
    /// Max survival is non-increasing along the table.
    pub antitone: bool,
}

impl AreaDecaySummary {
    pub fn from_records(records: &[AreaDecayRecord], min_area: f64, horizon: usize) -> Self {
        let mut verdicts = VerdictCounts::default();
        for r in records {
            match r.verdict {
                WanderingVerdict::Collision { .. } => verdicts.collision += 1,
                WanderingVerdict::Linked { .. } => verdicts.linked += 1,
                WanderingVerdict::Preperiodic { .. } => verdicts.preperiodic += 1,
                WanderingVerdict::WanderingUpTo { .. } => verdicts.wandering_up_to += 1,
            }
        }
        let table: Vec<ThresholdRow> = SUMMARY_THRESHOLDS
            .iter()
            .map(|&(label, t)| {
                let above: Vec<&AreaDecayRecord> = records.iter().filter(|r| r.area >= t).collect();
                ThresholdRow {
                    threshold: label.to_string(),
                    count: above.len(),
                    max_survival: above.iter().map(|r| r.survival).max(),
                }
            })
            .collect();
        let antitone = table
            .windows(2)
            .all(|w| w[1].max_survival <= w[0].max_survival);
        let mut portraits: Vec<usize> = records.iter().map(|r| r.portrait_id).collect();
        portraits.dedup();
        AreaDecaySummary {
            min_area,
            horizon,
            portraits: portraits.len(),
            records: records.len(),
            max_survival: records.iter().map(|r| r.survival).max(),
            verdicts,
            table,
            antitone,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AreaDecayOutcome {
    pub records: Vec<AreaDecayRecord>,
    pub summary: AreaDecaySummary,
}

/// Area-decay study with threshold `1/n`.
pub fn area_decay_experiment(
    spec: &SampleSpec,
    n: u64,
    triangle_samples: usize,
) -> Result<AreaDecayOutcome> {
    if n < 1 {
        return Err(Error::OutOfRange { what: "n", min: 1 });
    }
    area_decay_with_threshold(spec, 1.0 / n as f64, triangle_samples)
}

/// Samples class-𝒦-surrogate portraits and, against each, triangles with
/// vertices `m/p` inside one unlinked class and hull area at least
/// `min_area`, then runs the wandering detector on every triangle.
///
/// Samples run in parallel; each has its own random stream and results are
/// kept in sample order, so the output depends only on the spec.
pub fn area_decay_with_threshold(
    spec: &SampleSpec,
    min_area: f64,
    triangle_samples: usize,
) -> Result<AreaDecayOutcome> {
    spec.validate()?;
    if spec.degree != 3 {
        return Err(Error::UnsupportedDegree {
            got: spec.degree,
            expected: 3,
        });
    }
    let horizon = usize::try_from(spec.horizon).unwrap_or(usize::MAX);
    // No inscribed triangle is larger than the equilateral one.
    if min_area >= MAX_TRIANGLE_AREA * (1.0 - AREA_RELATIVE_TOLERANCE) || triangle_samples == 0 {
        return Ok(AreaDecayOutcome {
            records: Vec::new(),
            summary: AreaDecaySummary::from_records(&[], min_area, horizon),
        });
    }
    let portraits_needed = triangle_samples.div_ceil(TRIANGLES_PER_PORTRAIT);
    let portraits: Vec<ClassKSample> = (0..portraits_needed)
        .into_par_iter()
        .map(|id| class_k_with(spec, &mut stream_rng(spec.seed, portrait_stream(id))))
        .collect::<Result<_>>()?;

    let d = Degree::new(3)?;
    let budget = spec.retries.saturating_mul(100);
    let records: Vec<AreaDecayRecord> = (0..triangle_samples)
        .into_par_iter()
        .map(|i| {
            let id = i / TRIANGLES_PER_PORTRAIT;
            let mut rng = stream_rng(spec.seed, triangle_stream(i));
            let t = sample_triangle(
                &portraits[id].portrait,
                spec.denominator_prime,
                min_area,
                budget,
                &mut rng,
            )?;
            Ok(AreaDecayRecord::evaluate(id, t, d, horizon))
        })
        .collect::<Result<_>>()?;
    let summary = AreaDecaySummary::from_records(&records, min_area, horizon);
    Ok(AreaDecayOutcome { records, summary })
}

/// A triangle with vertices `m/p` in one unlinked class of `portrait` and
/// hull area at least `min_area`.
fn sample_triangle(
    portrait: &CriticalPortrait,
    p: u64,
    min_area: f64,
    budget: u64,
    rng: &mut impl Rng,
) -> Result<AngleSet> {
    for _ in 0..budget {
        let ms = [0; 3].map(|_| rng.random_range(0..p));
        if ms[0] == ms[1] || ms[1] == ms[2] || ms[0] == ms[2] {
            continue;
        }
        let t = AngleSet::new(ms.map(|m| Angle::new(big(m), big(p)).expect("p > 0")));
        if in_subbasis_neighborhood(portrait, &t) && hull_area(&t) >= min_area {
            return Ok(t);
        }
    }
    Err(Error::SamplingExhausted { attempts: budget })
}
