use std::collections::HashSet;

use serde::Serialize;

use super::{detect_wandering, LaminationApprox, WanderingVerdict};
use crate::circle::{orbit_shape, Angle, AngleSet, Degree};

/// Consistency of the observed structure with each clause. `None` means
/// the clause was not evaluated.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BlClauses {
    /// `Σ(d_j − 2) ≤ k − 1`.
    pub k_inequality: Option<bool>,
    /// `Σ(d_j − 2) + N ≤ d − 2`.
    pub degree_inequality: Option<bool>,
    /// Cubic: Γ is a single triangle.
    pub single_triangle: Option<bool>,
    /// Cubic: no infinite class was observed.
    pub classes_finite: Option<bool>,
    /// Cubic: exactly two critical classes, both leaves, with orbits
    /// disjoint up to the horizon.
    pub critical_leaves: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlAuditReport {
    pub degree: u32,
    pub horizon: usize,
    /// Gaps of `L` that stay wandering up to the horizon.
    pub wandering_candidates: Vec<AngleSet>,
    /// One candidate per grand orbit (orbits compared up to the horizon).
    pub gamma: Vec<AngleSet>,
    pub k_bound_lhs: u64,
    /// Critical classes with degenerate image whose image orbits outlast
    /// the horizon and are pairwise disjoint within it, chosen greedily.
    pub k_estimate: u64,
    /// Cycles of infinite classes. Classes here are finite, so always 0.
    pub n_estimate: u64,
    pub infinite_classes_flagged: bool,
    pub clauses: BlClauses,
    /// False if some evaluated clause fails: evidence of approximation
    /// error in `L`, not of anything else.
    pub consistent: bool,
}

/// Compares the wandering gaps visible in `L` against the bound on their
/// valences.
pub fn bl_bound_audit(l: &LaminationApprox, horizon: usize) -> BlAuditReport {
    let d = l.portrait().degree();
    let candidates: Vec<AngleSet> = l
        .classes()
        .iter()
        .filter(|c| c.len() >= 3)
        .filter(|c| {
            matches!(
                detect_wandering(c, d, horizon),
                WanderingVerdict::WanderingUpTo { .. }
            )
        })
        .cloned()
        .collect();

    let mut gamma: Vec<AngleSet> = Vec::new();
    let mut seen_orbits: Vec<HashSet<AngleSet>> = Vec::new();
    for c in &candidates {
        let orbit = set_orbit(c, d, horizon);
        if seen_orbits.iter().all(|o| o.is_disjoint(&orbit)) {
            gamma.push(c.clone());
            seen_orbits.push(orbit);
        }
    }
    let lhs: u64 = gamma.iter().map(|g| g.len() as u64 - 2).sum();

    let critical: Vec<&AngleSet> = l
        .classes()
        .iter()
        .filter(|c| c.len() >= 2 && c.image(d).len() == 1)
        .collect();
    let mut chosen: Vec<HashSet<Angle>> = Vec::new();
    for c in &critical {
        let v = c.first().expect("non-empty").sigma(d);
        if orbit_shape(&v, d).orbit_len() <= horizon as u64 {
            continue;
        }
        let orbit = point_orbit(&v, d, horizon);
        if chosen.iter().all(|o| o.is_disjoint(&orbit)) {
            chosen.push(orbit);
        }
    }
    let k = chosen.len() as u64;
    let n_est = 0u64;

    let mut clauses = BlClauses::default();
    if !gamma.is_empty() {
        clauses.k_inequality = Some(lhs < k);
        clauses.degree_inequality = Some(lhs + n_est + 2 <= d.get() as u64);
        if d.get() == 3 {
            clauses.single_triangle = Some(gamma.len() == 1 && gamma[0].len() == 3);
            clauses.classes_finite = Some(true);
            clauses.critical_leaves = Some(critical_leaves(&critical, d, horizon));
        }
    }
    let consistent = [
        clauses.k_inequality,
        clauses.degree_inequality,
        clauses.single_triangle,
        clauses.classes_finite,
        clauses.critical_leaves,
    ]
    .iter()
    .all(|c| c.unwrap_or(true));

    BlAuditReport {
        degree: d.get(),
        horizon,
        wandering_candidates: candidates,
        gamma,
        k_bound_lhs: lhs,
        k_estimate: k,
        n_estimate: n_est,
        infinite_classes_flagged: false,
        clauses,
        consistent,
    }
}

fn critical_leaves(critical: &[&AngleSet], d: Degree, horizon: usize) -> bool {
    if critical.len() != 2 || critical.iter().any(|c| c.len() != 2) {
        return false;
    }
    let a = set_orbit(critical[0], d, horizon);
    let b = set_orbit(critical[1], d, horizon);
    a.is_disjoint(&b)
}

fn set_orbit(s: &AngleSet, d: Degree, horizon: usize) -> HashSet<AngleSet> {
    let mut out = HashSet::new();
    let mut x = s.clone();
    for _ in 0..=horizon {
        let next = x.image(d);
        if !out.insert(x) {
            break;
        }
        x = next;
    }
    out
}

fn point_orbit(v: &Angle, d: Degree, horizon: usize) -> HashSet<Angle> {
    let mut out = HashSet::new();
    let mut x = v.clone();
    for _ in 0..=horizon {
        let next = x.sigma(d);
        if !out.insert(x) {
            break;
        }
        x = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lamination::generate_lamination;
    use crate::portrait::validate_portrait;

    fn set(items: &[&str]) -> AngleSet {
        AngleSet::parse(items).unwrap()
    }

    #[test]
    fn quadratic_pipeline_has_no_candidates() {
        let p = validate_portrait(Degree::new(2).unwrap(), vec![set(&["1/12", "7/12"])]).unwrap();
        let l = generate_lamination(&p, 6).unwrap();
        let r = bl_bound_audit(&l, 50);
        assert!(r.wandering_candidates.is_empty());
        assert!(r.gamma.is_empty());
        assert_eq!(r.clauses, BlClauses::default());
        assert!(r.consistent);
    }

    #[test]
    fn critical_triangle_with_wandering_candidate() {
        let d = Degree::new(3).unwrap();
        let p = validate_portrait(d, vec![set(&["0", "1/3", "2/3"])]).unwrap();
        // A triangle whose images stay unlinked for a short horizon.
        let horizon = 3;
        let t = (1..200u64)
            .flat_map(|a| (a + 1..200).flat_map(move |b| (b + 1..200).map(move |c| (a, b, c))))
            .map(|(a, b, c)| AngleSet::new([a, b, c].map(|n| Angle::frac(n as i64, 199))))
            .find(|t| {
                crate::circle::unlinked(t, &set(&["0", "1/3", "2/3"]))
                    && detect_wandering(t, d, horizon)
                        == WanderingVerdict::WanderingUpTo { horizon }
            })
            .expect("some triangle survives three steps");
        let l = LaminationApprox::from_classes(p, 0, vec![set(&["0", "1/3", "2/3"]), t]);
        let r = bl_bound_audit(&l, horizon);
        assert_eq!(r.gamma.len(), 1);
        assert_eq!(r.k_bound_lhs, 1);
        assert_eq!(r.clauses.critical_leaves, Some(false));
        assert_eq!(r.clauses.single_triangle, Some(true));
        assert!(!r.consistent);
    }
}
