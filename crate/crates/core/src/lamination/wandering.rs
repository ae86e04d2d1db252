use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::circle::{orbit_shape, unlinked, AngleSet, Degree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassKind {
    Degenerate,
    Leaf,
    Gap,
}

impl ClassKind {
    pub fn of(set: &AngleSet) -> Self {
        match set.len() {
            0 | 1 => ClassKind::Degenerate,
            2 => ClassKind::Leaf,
            _ => ClassKind::Gap,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ClassStatus {
    /// `σ^step(g)` is critical.
    Precritical { step: usize },
    /// `σ^i(g) = σ^j(g)` with `(i, j)` minimal.
    Preperiodic { i: usize, j: usize },
    /// Neither within the horizon.
    WanderingCandidate { horizon: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassTag {
    pub kind: ClassKind,
    pub critical: bool,
    #[serde(flatten)]
    pub status: ClassStatus,
}

/// Tags `g` by size, criticality and the fate of its forward orbit up to
/// `horizon` steps. A cardinality drop takes precedence over recurrence.
pub fn classify_class(g: &AngleSet, d: Degree, horizon: usize) -> ClassTag {
    let kind = ClassKind::of(g);
    let critical = g.image(d).len() < g.len();
    let mut seen = vec![g.clone()];
    let mut status = ClassStatus::WanderingCandidate { horizon };
    for n in 1..=horizon {
        let next = seen[n - 1].image(d);
        if next.len() < g.len() {
            status = ClassStatus::Precritical { step: n - 1 };
            break;
        }
        if let Some(i) = seen.iter().position(|s| *s == next) {
            status = ClassStatus::Preperiodic { i, j: n };
            break;
        }
        seen.push(next);
    }
    ClassTag {
        kind,
        critical,
        status,
    }
}

/// Fate of the forward orbit of a finite set `T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum WanderingVerdict {
    /// `|σ^step(T)| < |T|`.
    Collision {
        step: usize,
    },
    /// `σ^m(T)` and `σ^n(T)` are distinct and not unlinked.
    Linked {
        m: usize,
        n: usize,
    },
    /// `σ^i(T) = σ^j(T)`.
    Preperiodic {
        i: usize,
        j: usize,
    },
    WanderingUpTo {
        horizon: usize,
    },
}

impl WanderingVerdict {
    /// Steps during which the images stayed pairwise unlinked and
    /// collision-free: the last step before the event was observed.
    pub fn survival(&self) -> usize {
        match *self {
            WanderingVerdict::Collision { step } => step - 1,
            WanderingVerdict::Linked { n, .. } => n - 1,
            WanderingVerdict::Preperiodic { j, .. } => j - 1,
            WanderingVerdict::WanderingUpTo { horizon } => horizon,
        }
    }

    pub fn is_definite(&self) -> bool {
        !matches!(self, WanderingVerdict::WanderingUpTo { .. })
    }
}

/// Iterates `T` up to `horizon` steps. At each step the new image is tested
/// for a collision, then against every earlier image for linking, then for
/// recurrence; the first event found is returned.
pub fn detect_wandering(t: &AngleSet, d: Degree, horizon: usize) -> WanderingVerdict {
    let mut images = vec![t.clone()];
    for n in 1..=horizon {
        let next = images[n - 1].image(d);
        if next.len() < t.len() {
            return WanderingVerdict::Collision { step: n };
        }
        if let Some(m) = images
            .iter()
            .position(|s| *s != next && !unlinked(s, &next))
        {
            return WanderingVerdict::Linked { m, n };
        }
        if let Some(i) = images.iter().position(|s| *s == next) {
            return WanderingVerdict::Preperiodic { i, j: n };
        }
        images.push(next);
    }
    WanderingVerdict::WanderingUpTo { horizon }
}

/// `max preperiod + lcm(periods)` over the members of `T`, saturating: by
/// then the image sets must have recurred.
pub fn recurrence_horizon(t: &AngleSet, d: Degree) -> u64 {
    let mut pre = 0u64;
    let mut lcm = 1u64;
    for a in t {
        let shape = orbit_shape(a, d);
        pre = pre.max(shape.preperiod);
        lcm = (lcm / gcd(lcm, shape.period)).saturating_mul(shape.period);
    }
    pre.saturating_add(lcm)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(items: &[&str]) -> AngleSet {
        AngleSet::parse(items).unwrap()
    }
    fn deg(d: u32) -> Degree {
        Degree::new(d).unwrap()
    }

    #[test]
    fn classify_examples() {
        let t = classify_class(&set(&["0", "1/3"]), deg(3), 10);
        assert_eq!(
            t,
            ClassTag {
                kind: ClassKind::Leaf,
                critical: true,
                status: ClassStatus::Precritical { step: 0 }
            }
        );
        let t = classify_class(&set(&["1/7", "2/7", "4/7"]), deg(2), 10);
        assert_eq!(
            t,
            ClassTag {
                kind: ClassKind::Gap,
                critical: false,
                status: ClassStatus::Preperiodic { i: 0, j: 1 }
            }
        );
        let t = classify_class(&set(&["1/12", "7/12"]), deg(2), 10);
        assert_eq!(t.status, ClassStatus::Precritical { step: 0 });
        assert!(t.critical);
    }

    #[test]
    fn classify_precritical_later() {
        // {1/24, 7/24} doubles to {1/12, 7/12}, critical one step later.
        let t = classify_class(&set(&["1/24", "7/24"]), deg(2), 10);
        assert_eq!(t.status, ClassStatus::Precritical { step: 1 });
        assert!(!t.critical);
    }

    #[test]
    fn wander_examples() {
        assert_eq!(
            detect_wandering(&set(&["0", "1/3", "2/3"]), deg(3), 10),
            WanderingVerdict::Collision { step: 1 }
        );
        assert_eq!(
            detect_wandering(&set(&["1/7", "2/7", "4/7"]), deg(2), 10),
            WanderingVerdict::Preperiodic { i: 0, j: 1 }
        );
        assert_eq!(
            detect_wandering(&set(&["1/12", "1/4", "5/12"]), deg(2), 10),
            WanderingVerdict::Linked { m: 0, n: 1 }
        );
    }

    #[test]
    fn survival_values() {
        assert_eq!(WanderingVerdict::Collision { step: 1 }.survival(), 0);
        assert_eq!(WanderingVerdict::Linked { m: 0, n: 4 }.survival(), 3);
        assert_eq!(
            WanderingVerdict::WanderingUpTo { horizon: 50 }.survival(),
            50
        );
    }

    #[test]
    fn horizon_small_cases() {
        assert_eq!(recurrence_horizon(&set(&["1/7", "2/7", "4/7"]), deg(2)), 3);
        // 1/6 has shape (1, 2), 1/5 has (0, 4).
        assert_eq!(recurrence_horizon(&set(&["1/6", "1/5"]), deg(2)), 5);
    }
}
