//! Finite-depth approximations of the lamination `~_Θ` generated by a
//! critical portrait, and the audits run against them.
//!
//! The generator works from below: it only ever identifies angles that
//! `~_Θ` identifies, over the finite set of iterated preimages of `A(Θ)`.
//! Classes produced at depth `k` embed into classes at depth `k + 1`.

mod audit;
mod bound;
mod generate;
mod probe;
mod wandering;

use serde::{Deserialize, Serialize};

use crate::circle::{Angle, AngleSet};
use crate::error::{Error, Result};
use crate::portrait::CriticalPortrait;

pub use audit::{
    verify_invariance, CoveringViolation, ForwardViolation, InvarianceReport, LinkedWitness,
};
pub use bound::{bl_bound_audit, BlAuditReport, BlClauses};
pub use generate::generate_lamination;
pub use probe::{condensity_probe, ArcEntry, ProbeReport};
pub use wandering::{
    classify_class, detect_wandering, recurrence_horizon, ClassKind, ClassStatus, ClassTag,
    WanderingVerdict,
};

/// Why two angles were put in the same class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MergeReason {
    /// Both belong to one initial set.
    InitialSet,
    /// `i⁺(a) = i⁻(b)`.
    Itinerary,
    /// Preimages of one class inside one unlinked class.
    Pullback,
    /// Images of two angles already in one class.
    Forward,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeWitness {
    pub a: Angle,
    pub b: Angle,
    pub reason: MergeReason,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// Smallest pullback level among the class's angles.
    pub level: usize,
    /// A spanning set of merges that formed the class.
    pub merges: Vec<MergeWitness>,
}

/// A depth-stamped finite family of classes approximating `~_Θ`.
///
/// Only non-degenerate classes are stored; every other angle is a
/// singleton class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LaminationDump")]
pub struct LaminationApprox {
    portrait: CriticalPortrait,
    depth: usize,
    classes: Vec<AngleSet>,
    provenance: Vec<Provenance>,
}

#[derive(Deserialize)]
struct LaminationDump {
    portrait: CriticalPortrait,
    depth: usize,
    classes: Vec<AngleSet>,
    #[serde(default)]
    provenance: Vec<Provenance>,
}

impl TryFrom<LaminationDump> for LaminationApprox {
    type Error = Error;
    fn try_from(dump: LaminationDump) -> Result<Self> {
        let provenance = if dump.provenance.is_empty() {
            vec![Provenance::default(); dump.classes.len()]
        } else {
            dump.provenance
        };
        if provenance.len() != dump.classes.len() {
            return Err(Error::InvalidInput(
                "provenance length differs from classes".into(),
            ));
        }
        Ok(LaminationApprox {
            portrait: dump.portrait,
            depth: dump.depth,
            classes: dump.classes,
            provenance,
        })
    }
}

impl LaminationApprox {
    /// Wraps hand-built classes, e.g. for auditing a structure that was not
    /// produced by the generator. Provenance is left empty at level 0.
    pub fn from_classes(portrait: CriticalPortrait, depth: usize, classes: Vec<AngleSet>) -> Self {
        let provenance = vec![Provenance::default(); classes.len()];
        LaminationApprox {
            portrait,
            depth,
            classes,
            provenance,
        }
    }

    pub fn portrait(&self) -> &CriticalPortrait {
        &self.portrait
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn classes(&self) -> &[AngleSet] {
        &self.classes
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    /// Index of the class containing `x`, by linear scan.
    pub fn class_containing(&self, x: &Angle) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(x))
    }

    /// Whether `set` lies inside a single stored class.
    pub fn contains_set(&self, set: &AngleSet) -> bool {
        match set.first() {
            None => true,
            Some(first) => self
                .class_containing(first)
                .is_some_and(|i| set.iter().all(|x| self.classes[i].contains(x))),
        }
    }
}
