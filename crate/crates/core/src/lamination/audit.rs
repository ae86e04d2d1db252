use std::collections::HashMap;

use serde::Serialize;

use super::LaminationApprox;
use crate::circle::{unlinked, Angle, AngleSet};

/// Two classes whose hulls meet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkedWitness {
    pub first: AngleSet,
    pub second: AngleSet,
}

/// A class whose image is spread over several classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ForwardViolation {
    pub class: AngleSet,
    pub image: AngleSet,
    pub hit: Vec<AngleSet>,
}

/// A gap complementary arc `(s, t)` whose image endpoints are not
/// consecutive, in positive order, in the image of the gap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoveringViolation {
    pub class: AngleSet,
    pub arc: (Angle, Angle),
    pub image_arc: (Angle, Angle),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct InvarianceReport {
    pub linked: Vec<LinkedWitness>,
    pub forward: Vec<ForwardViolation>,
    pub covering: Vec<CoveringViolation>,
    /// Classes whose image is not resolved inside the structure.
    pub unchecked: Vec<AngleSet>,
}

impl InvarianceReport {
    pub fn violation_count(&self) -> usize {
        self.linked.len() + self.forward.len() + self.covering.len()
    }

    pub fn is_clean(&self) -> bool {
        self.violation_count() == 0
    }
}

/// Audits `L` against pairwise unlinkedness, forward invariance and the
/// boundary covering condition on gaps. Images that leave the stored
/// structure are listed as unchecked rather than failed.
pub fn verify_invariance(l: &LaminationApprox) -> InvarianceReport {
    let classes = l.classes();
    let d = l.portrait().degree();
    let mut report = InvarianceReport {
        linked: linked_pairs(classes),
        ..Default::default()
    };

    let mut owner: HashMap<&Angle, usize> = HashMap::new();
    for (i, c) in classes.iter().enumerate() {
        for x in c {
            owner.entry(x).or_insert(i);
        }
    }

    for class in classes {
        let image = class.image(d);
        if image.len() >= 2 {
            let mut hit: Vec<usize> = image.iter().filter_map(|y| owner.get(y).copied()).collect();
            hit.sort_unstable();
            hit.dedup();
            let missing = image.iter().any(|y| !owner.contains_key(y));
            if hit.len() >= 2 {
                report.forward.push(ForwardViolation {
                    class: class.clone(),
                    image: image.clone(),
                    hit: hit.iter().map(|&i| classes[i].clone()).collect(),
                });
            } else if missing {
                report.unchecked.push(class.clone());
            }
        }
        if class.len() >= 3 {
            report
                .covering
                .extend(covering_violations(class, &image, d));
        }
    }
    report
}

fn covering_violations(
    class: &AngleSet,
    image: &AngleSet,
    d: crate::circle::Degree,
) -> Vec<CoveringViolation> {
    let mut out = Vec::new();
    for arc in class.complementary_arcs() {
        let (s, t) = (arc.start.sigma(d), arc.end.sigma(d));
        // A collapsed boundary chord is the monotone part of the map.
        if s == t {
            continue;
        }
        if image.iter().any(|y| y.in_open_arc(&s, &t)) {
            out.push(CoveringViolation {
                class: class.clone(),
                arc: (arc.start.clone(), arc.end.clone()),
                image_arc: (s, t),
            });
        }
    }
    out
}

/// All pairs of classes that share a point or cross. A linear stack scan
/// over the sorted points decides whether any such pair exists; only then
/// are pairs enumerated.
fn linked_pairs(classes: &[AngleSet]) -> Vec<LinkedWitness> {
    if non_crossing(classes) {
        return Vec::new();
    }
    let mut out = Vec::new();
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            if !unlinked(&classes[i], &classes[j]) {
                out.push(LinkedWitness {
                    first: classes[i].clone(),
                    second: classes[j].clone(),
                });
            }
        }
    }
    out
}

/// Classes are pairwise disjoint and form a non-crossing partition of
/// their union. Cutting the circle at 0, every class must close before
/// any class opened earlier reappears.
fn non_crossing(classes: &[AngleSet]) -> bool {
    let mut tagged: Vec<(&Angle, usize)> = classes
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.iter().map(move |x| (x, i)))
        .collect();
    tagged.sort();
    if tagged.windows(2).any(|w| w[0].0 == w[1].0) {
        return false;
    }
    let mut remaining: Vec<usize> = classes.iter().map(|c| c.len()).collect();
    let mut opened = vec![false; classes.len()];
    let mut stack: Vec<usize> = Vec::new();
    for (_, c) in tagged {
        if opened[c] {
            if stack.last() != Some(&c) {
                return false;
            }
        } else {
            opened[c] = true;
            stack.push(c);
        }
        remaining[c] -= 1;
        if remaining[c] == 0 {
            stack.pop();
        }
    }
    true
}
