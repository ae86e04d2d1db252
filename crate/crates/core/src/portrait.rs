//! Critical portraits: validation, Θ-unlinked classes, itineraries and
//! kneading.
//!
//! A portrait `Θ = {Θ_1, …, Θ_n}` of degree `d` is a family of pairwise
//! unlinked finite angle sets whose hull boundaries consist of critical
//! chords, with `Σ(|Θ_i| − 1) = d − 1`. The hulls cut the disk into `d`
//! regions; the open circle arcs on the boundary of each region form one
//! unlinked class `L_i`, of total length `1/d`.
//!
//! Symbols and class labels are 0-based internally and printed 1-based
//! (`T1`, `L1`, …). Classes are numbered by their smallest arc start.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circle::{orbit_shape, total_length, unlinked, Angle, AngleSet, CircleArc, Degree};
use crate::error::{Error as CrateError, Result};
use crate::word::EventualWord;

/// The first clause of the portrait definition that fails, with witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum Violation {
    #[serde(rename = "degenerate")]
    #[error("initial set {set} has fewer than two angles")]
    DegenerateSet { set: usize },
    #[serde(rename = "critical")]
    #[error("initial set {set} has non-critical boundary chord {{{}, {}}}", chord.0, chord.1)]
    NonCriticalChord {
        set: usize,
        chord: Box<(Angle, Angle)>,
    },
    #[serde(rename = "linked")]
    #[error("initial sets {first} and {second} are linked")]
    LinkedPair { first: usize, second: usize },
    #[serde(rename = "count")]
    #[error("sum of (|set| - 1) is {found}, expected {expected}")]
    CountMismatch { expected: u64, found: u64 },
}

impl Violation {
    pub fn clause(&self) -> &'static str {
        match self {
            Violation::DegenerateSet { .. } => "degenerate",
            Violation::NonCriticalChord { .. } => "critical",
            Violation::LinkedPair { .. } => "linked",
            Violation::CountMismatch { .. } => "count",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "on")]
    On,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Plus => "+",
            Side::Minus => "-",
            Side::On => "on",
        })
    }
}

impl std::str::FromStr for Side {
    type Err = CrateError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Side::Plus),
            "-" | "minus" => Ok(Side::Minus),
            "on" => Ok(Side::On),
            _ => Err(CrateError::InvalidInput(format!("unknown side {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ItinerarySymbol {
    InitialSet(usize),
    UnlinkedClass(usize),
}

impl fmt::Display for ItinerarySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ItinerarySymbol::InitialSet(i) => write!(f, "T{}", i + 1),
            ItinerarySymbol::UnlinkedClass(i) => write!(f, "L{}", i + 1),
        }
    }
}

impl Serialize for ItinerarySymbol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One Θ-unlinked class: a union of open arcs, sorted by start.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnlinkedClass {
    pub arcs: Vec<CircleArc>,
}

impl UnlinkedClass {
    pub fn contains(&self, x: &Angle) -> bool {
        self.arcs.iter().any(|arc| arc.contains(x))
    }

    pub fn total_length(&self) -> num_rational::BigRational {
        total_length(&self.arcs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnlinkedClassSet {
    pub classes: Vec<UnlinkedClass>,
}

impl UnlinkedClassSet {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// The JSON shape `{"degree": d, "sets": [["p/q", ...], ...]}`, before
/// validation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PortraitSpec {
    pub degree: u32,
    pub sets: Vec<AngleSet>,
}

/// A validated critical portrait with its unlinked classes precomputed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PortraitSpec", into = "PortraitSpec")]
pub struct CriticalPortrait {
    degree: Degree,
    sets: Vec<AngleSet>,
    /// `A(Θ)`, sorted.
    points: Vec<Angle>,
    /// Index of the initial set owning each point.
    owner: Vec<usize>,
    /// Class of the complementary arc `(points[k], points[k+1])`.
    arc_class: Vec<usize>,
    classes: UnlinkedClassSet,
}

impl TryFrom<PortraitSpec> for CriticalPortrait {
    type Error = CrateError;
    fn try_from(spec: PortraitSpec) -> Result<Self> {
        let d = Degree::new(spec.degree)?;
        Ok(validate_portrait(d, spec.sets)?)
    }
}

impl From<CriticalPortrait> for PortraitSpec {
    fn from(p: CriticalPortrait) -> Self {
        PortraitSpec {
            degree: p.degree.get(),
            sets: p.sets,
        }
    }
}

/// Checks the three portrait clauses in order and builds the unlinked
/// classes.
pub fn validate_portrait(
    degree: Degree,
    sets: Vec<AngleSet>,
) -> std::result::Result<CriticalPortrait, Violation> {
    for (i, set) in sets.iter().enumerate() {
        if set.len() < 2 {
            return Err(Violation::DegenerateSet { set: i });
        }
        if let Some(chord) = set
            .boundary_chords()
            .into_iter()
            .find(|(a, b)| a.sigma(degree) != b.sigma(degree))
        {
            return Err(Violation::NonCriticalChord {
                set: i,
                chord: Box::new(chord),
            });
        }
    }
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if !unlinked(&sets[i], &sets[j]) {
                return Err(Violation::LinkedPair {
                    first: i,
                    second: j,
                });
            }
        }
    }
    let found: u64 = sets.iter().map(|s| s.len() as u64 - 1).sum();
    let expected = degree.get() as u64 - 1;
    if found != expected {
        return Err(Violation::CountMismatch { expected, found });
    }

    let mut tagged: Vec<(Angle, usize)> = sets
        .iter()
        .enumerate()
        .flat_map(|(i, s)| s.iter().map(move |a| (a.clone(), i)))
        .collect();
    tagged.sort();
    let (points, owner): (Vec<_>, Vec<_>) = tagged.into_iter().unzip();
    let (arc_class, classes) = build_classes(&points, &owner, &sets);
    debug_assert_eq!(classes.len(), degree.get() as usize);

    Ok(CriticalPortrait {
        degree,
        sets,
        points,
        owner,
        arc_class,
        classes,
    })
}

/// Walks region boundaries: after the arc ending at `e ∈ Θ_j` the boundary
/// follows the hull of `Θ_j` back to the cyclic predecessor of `e`, where the
/// next arc of the same region starts.
fn build_classes(
    points: &[Angle],
    owner: &[usize],
    sets: &[AngleSet],
) -> (Vec<usize>, UnlinkedClassSet) {
    let m = points.len();
    let next = |k: usize| {
        let end = &points[(k + 1) % m];
        let set = &sets[owner[(k + 1) % m]];
        let pos = set.position(end).expect("owner contains point");
        let pred = &set.as_slice()[(pos + set.len() - 1) % set.len()];
        points.binary_search(pred).expect("pred in A(Θ)")
    };
    let mut arc_class = vec![usize::MAX; m];
    let mut classes = Vec::new();
    for k in 0..m {
        if arc_class[k] != usize::MAX {
            continue;
        }
        let label = classes.len();
        let mut arcs = Vec::new();
        let mut j = k;
        while arc_class[j] == usize::MAX {
            arc_class[j] = label;
            arcs.push(CircleArc::new(
                points[j].clone(),
                points[(j + 1) % m].clone(),
            ));
            j = next(j);
        }
        arcs.sort_by(|a, b| a.start.cmp(&b.start));
        classes.push(UnlinkedClass { arcs });
    }
    (arc_class, UnlinkedClassSet { classes })
}

impl CriticalPortrait {
    pub fn degree(&self) -> Degree {
        self.degree
    }

    /// The initial sets `Θ_1, …, Θ_n`.
    pub fn sets(&self) -> &[AngleSet] {
        &self.sets
    }

    /// `A(Θ)`, the union of the initial sets, sorted.
    pub fn points(&self) -> &[Angle] {
        &self.points
    }

    pub fn unlinked_classes(&self) -> &UnlinkedClassSet {
        &self.classes
    }

    /// The critical values `σ_d(Θ_i)`, one per initial set.
    pub fn critical_values(&self) -> Vec<Angle> {
        self.sets
            .iter()
            .map(|s| s.first().expect("validated").sigma(self.degree))
            .collect()
    }

    /// Index into `points` of the arc containing `x`, or `Err(k)` if
    /// `x = points[k]`.
    fn arc_of(&self, x: &Angle) -> std::result::Result<usize, usize> {
        match self.points.binary_search(x) {
            Ok(k) => Err(k),
            Err(0) => Ok(self.points.len() - 1),
            Err(i) => Ok(i - 1),
        }
    }

    /// The initial set containing `x`, if any.
    pub fn initial_set_of(&self, x: &Angle) -> Option<usize> {
        self.points.binary_search(x).ok().map(|k| self.owner[k])
    }

    /// The unlinked class containing `x`, or `None` for `x ∈ A(Θ)`.
    pub fn class_of(&self, x: &Angle) -> Option<usize> {
        self.arc_of(x).ok().map(|k| self.arc_class[k])
    }

    /// The unlinked class met by points approaching `x` from `side`. For
    /// `x ∉ A(Θ)` both sides give the class of `x`.
    pub fn side_class(&self, x: &Angle, side: Side) -> usize {
        let m = self.points.len();
        match (self.arc_of(x), side) {
            (Ok(k), _) => self.arc_class[k],
            (Err(k), Side::Minus) => self.arc_class[(k + m - 1) % m],
            (Err(k), _) => self.arc_class[k],
        }
    }

    pub fn locate(&self, x: &Angle) -> ItinerarySymbol {
        match self.arc_of(x) {
            Ok(k) => ItinerarySymbol::UnlinkedClass(self.arc_class[k]),
            Err(k) => ItinerarySymbol::InitialSet(self.owner[k]),
        }
    }

    pub fn spec(&self) -> PortraitSpec {
        self.clone().into()
    }
}

pub fn unlinked_classes(portrait: &CriticalPortrait) -> &UnlinkedClassSet {
    portrait.unlinked_classes()
}

/// The member of `Θ ∪ {L_1, …, L_d}` containing `x`.
pub fn locate(x: &Angle, portrait: &CriticalPortrait) -> ItinerarySymbol {
    portrait.locate(x)
}

/// Preperiod and period of an itinerary word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordShape {
    pub preperiod: usize,
    pub period: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Itinerary {
    pub symbols: Vec<ItinerarySymbol>,
    pub side: Side,
    /// Shape of the infinite word, present once the angle's orbit has
    /// closed up within the computed depth.
    pub shape: Option<WordShape>,
}

impl Itinerary {
    pub fn depth(&self) -> usize {
        self.symbols.len()
    }

    /// Strictly periodic from index 0, when known.
    pub fn is_periodic(&self) -> Option<bool> {
        self.shape.map(|s| s.preperiod == 0)
    }
}

/// JSON form of an itinerary.
#[derive(Clone, Debug, Serialize)]
pub struct ItineraryReport {
    pub angle: Angle,
    pub side: Side,
    pub word: Vec<ItinerarySymbol>,
    pub preperiod: Option<usize>,
    pub period: Option<usize>,
}

impl ItineraryReport {
    pub fn new(angle: &Angle, it: &Itinerary) -> Self {
        ItineraryReport {
            angle: angle.clone(),
            side: it.side,
            word: it.symbols.clone(),
            preperiod: it.shape.map(|s| s.preperiod),
            period: it.shape.map(|s| s.period),
        }
    }
}

fn itinerary_with(
    theta: &Angle,
    portrait: &CriticalPortrait,
    depth: usize,
    side: Side,
    symbol: impl Fn(&Angle) -> ItinerarySymbol,
) -> Result<Itinerary> {
    if depth < 1 {
        return Err(CrateError::OutOfRange {
            what: "depth",
            min: 1,
        });
    }
    let d = portrait.degree;
    let orbit = orbit_shape(theta, d);
    let closed = usize::try_from(orbit.orbit_len())
        .ok()
        .filter(|&n| n <= depth);
    let mut symbols = Vec::with_capacity(depth);
    let mut x = theta.clone();
    for _ in 0..depth {
        symbols.push(symbol(&x));
        x = x.sigma(d);
    }
    let shape = closed.map(|_| {
        let w =
            EventualWord::from_prefix(&symbols, orbit.preperiod as usize, orbit.period as usize);
        WordShape {
            preperiod: w.preperiod(),
            period: w.period(),
        }
    });
    Ok(Itinerary {
        symbols,
        side,
        shape,
    })
}

/// `i±(θ)` truncated to `depth` symbols. Computed from cyclic position:
/// `σ_d` preserves orientation locally, so the side is carried unchanged
/// along the orbit.
pub fn one_sided_itinerary(
    theta: &Angle,
    side: Side,
    portrait: &CriticalPortrait,
    depth: usize,
) -> Result<Itinerary> {
    if side == Side::On {
        return Err(CrateError::InvalidInput(
            "one-sided itinerary needs side + or -".into(),
        ));
    }
    itinerary_with(theta, portrait, depth, side, |x| {
        ItinerarySymbol::UnlinkedClass(portrait.side_class(x, side))
    })
}

/// `i(θ)` truncated to `depth` symbols, over `Θ ∪ {L_i}`.
pub fn full_itinerary(
    theta: &Angle,
    portrait: &CriticalPortrait,
    depth: usize,
) -> Result<Itinerary> {
    itinerary_with(theta, portrait, depth, Side::On, |x| portrait.locate(x))
}

/// The complete one-sided word of `θ` as class indices, in canonical
/// eventually-periodic form. Costs one step per point of the orbit.
pub fn one_sided_word(
    theta: &Angle,
    side: Side,
    portrait: &CriticalPortrait,
) -> EventualWord<usize> {
    let d = portrait.degree;
    let orbit = orbit_shape(theta, d);
    let n = (orbit.preperiod + orbit.period) as usize;
    let mut letters = Vec::with_capacity(n);
    let mut x = theta.clone();
    for _ in 0..n {
        letters.push(portrait.side_class(&x, side));
        x = x.sigma(d);
    }
    EventualWord::from_prefix(&letters, orbit.preperiod as usize, orbit.period as usize)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Kneading {
    Aperiodic,
    Periodic {
        angle: Angle,
        side: Side,
        period: usize,
    },
}

/// Aperiodic iff no `θ ∈ A(Θ)` has a one-sided itinerary that is periodic
/// from index 0. Reports the first periodic word found, scanning angles in
/// increasing order with `+` before `-`.
pub fn kneading_status(portrait: &CriticalPortrait) -> Kneading {
    for theta in &portrait.points {
        for side in [Side::Plus, Side::Minus] {
            let word = one_sided_word(theta, side, portrait);
            if word.is_periodic() {
                return Kneading::Periodic {
                    angle: theta.clone(),
                    side,
                    period: word.period(),
                };
            }
        }
    }
    Kneading::Aperiodic
}

/// Membership of `Θ` in the subbasic set `V_X`: every point of the finite
/// set `X` lies in one common unlinked class.
pub fn in_subbasis_neighborhood(portrait: &CriticalPortrait, x: &AngleSet) -> bool {
    let mut class = None;
    for a in x {
        match (portrait.class_of(a), class) {
            (None, _) => return false,
            (Some(c), None) => class = Some(c),
            (Some(c), Some(k)) if c != k => return false,
            _ => {}
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn a(s: &str) -> Angle {
        s.parse().unwrap()
    }
    fn set(items: &[&str]) -> AngleSet {
        AngleSet::parse(items).unwrap()
    }
    fn portrait(d: u32, sets: &[&[&str]]) -> std::result::Result<CriticalPortrait, Violation> {
        validate_portrait(
            Degree::new(d).unwrap(),
            sets.iter().map(|s| set(s)).collect(),
        )
    }
    fn two_chords() -> CriticalPortrait {
        portrait(3, &[&["0", "1/3"], &["1/2", "5/6"]]).unwrap()
    }
    fn arcs(p: &CriticalPortrait) -> Vec<Vec<(String, String)>> {
        p.unlinked_classes()
            .classes
            .iter()
            .map(|c| {
                c.arcs
                    .iter()
                    .map(|r| (r.start.to_string(), r.end.to_string()))
                    .collect()
            })
            .collect()
    }
    fn pair(x: &str, y: &str) -> (String, String) {
        (x.to_string(), y.to_string())
    }
    use ItinerarySymbol::{InitialSet as T, UnlinkedClass as L};

    #[test]
    fn validation_examples() {
        assert!(portrait(3, &[&["0", "1/3"], &["1/2", "5/6"]]).is_ok());
        assert!(portrait(3, &[&["0", "1/3", "2/3"]]).is_ok());
        assert_eq!(
            portrait(3, &[&["0", "1/3"]]).unwrap_err(),
            Violation::CountMismatch {
                expected: 2,
                found: 1
            }
        );
        assert_eq!(
            portrait(3, &[&["0", "1/3"], &["1/6", "1/2"]]).unwrap_err(),
            Violation::LinkedPair {
                first: 0,
                second: 1
            }
        );
        assert_eq!(
            portrait(3, &[&["0", "1/4"], &["1/2", "5/6"]])
                .unwrap_err()
                .clause(),
            "critical"
        );
        assert_eq!(portrait(2, &[&["1/4"]]).unwrap_err().clause(), "degenerate");
    }

    #[test]
    fn class_examples() {
        assert_eq!(
            arcs(&two_chords()),
            vec![
                vec![pair("0", "1/3")],
                vec![pair("1/3", "1/2"), pair("5/6", "0")],
                vec![pair("1/2", "5/6")],
            ]
        );
        let tri = portrait(3, &[&["0", "1/3", "2/3"]]).unwrap();
        assert_eq!(
            arcs(&tri),
            vec![
                vec![pair("0", "1/3")],
                vec![pair("1/3", "2/3")],
                vec![pair("2/3", "0")]
            ]
        );
        let quad = portrait(2, &[&["0", "1/2"]]).unwrap();
        assert_eq!(
            arcs(&quad),
            vec![vec![pair("0", "1/2")], vec![pair("1/2", "0")]]
        );
        let third = BigRational::new(1.into(), 3.into());
        for c in &two_chords().unlinked_classes().classes {
            assert_eq!(c.total_length(), third);
        }
    }

    #[test]
    fn locate_examples() {
        let p = two_chords();
        assert_eq!(locate(&a("1/6"), &p), L(0));
        assert_eq!(locate(&a("0"), &p), T(0));
        assert_eq!(locate(&a("11/12"), &p), L(1));
        assert_eq!(locate(&a("5/6"), &p), T(1));
    }

    #[test]
    fn one_sided_examples() {
        let p = two_chords();
        let it = one_sided_itinerary(&a("0"), Side::Plus, &p, 4).unwrap();
        assert_eq!(it.symbols, vec![L(0); 4]);
        assert_eq!(
            it.shape,
            Some(WordShape {
                preperiod: 0,
                period: 1
            })
        );
        let it = one_sided_itinerary(&a("1/2"), Side::Minus, &p, 4).unwrap();
        assert_eq!(it.symbols, vec![L(1); 4]);
        assert_eq!(
            it.shape,
            Some(WordShape {
                preperiod: 0,
                period: 1
            })
        );

        let q = portrait(2, &[&["1/12", "7/12"]]).unwrap();
        let it = one_sided_itinerary(&a("1/12"), Side::Plus, &q, 6).unwrap();
        assert_eq!(it.symbols, vec![L(0), L(0), L(0), L(1), L(0), L(1)]);
        assert_eq!(
            it.shape,
            Some(WordShape {
                preperiod: 2,
                period: 2
            })
        );
        assert_eq!(it.is_periodic(), Some(false));

        let short = one_sided_itinerary(&a("1/12"), Side::Plus, &q, 3).unwrap();
        assert_eq!(short.shape, None);
        assert!(one_sided_itinerary(&a("0"), Side::Plus, &q, 0).is_err());
        assert!(one_sided_itinerary(&a("0"), Side::On, &q, 3).is_err());
    }

    #[test]
    fn full_itinerary_examples() {
        let p = two_chords();
        assert_eq!(
            full_itinerary(&a("0"), &p, 3).unwrap().symbols,
            vec![T(0); 3]
        );
        assert_eq!(
            full_itinerary(&a("1/6"), &p, 3).unwrap().symbols,
            vec![L(0), T(1), T(1)]
        );
        assert_eq!(
            full_itinerary(&a("1/4"), &p, 3).unwrap().symbols,
            vec![L(0), L(2), L(0)]
        );
    }

    #[test]
    fn kneading_examples() {
        assert_eq!(
            kneading_status(&two_chords()),
            Kneading::Periodic {
                angle: a("0"),
                side: Side::Plus,
                period: 1
            }
        );
        let q = portrait(2, &[&["1/12", "7/12"]]).unwrap();
        assert_eq!(kneading_status(&q), Kneading::Aperiodic);
        let r = portrait(2, &[&["0", "1/2"]]).unwrap();
        assert_eq!(
            kneading_status(&r),
            Kneading::Periodic {
                angle: a("0"),
                side: Side::Plus,
                period: 1
            }
        );
    }

    #[test]
    fn subbasis_examples() {
        let p = two_chords();
        assert!(in_subbasis_neighborhood(&p, &set(&["1/10", "1/5"])));
        assert!(!in_subbasis_neighborhood(&p, &set(&["1/10", "2/5"])));
        assert!(in_subbasis_neighborhood(&p, &AngleSet::default()));
        assert!(!in_subbasis_neighborhood(&p, &set(&["0"])));
    }

    #[test]
    fn portrait_json_round_trip() {
        let text = r#"{"degree":3,"sets":[["0","1/3"],["1/2","5/6"]]}"#;
        let p: CriticalPortrait = serde_json::from_str(text).unwrap();
        assert_eq!(serde_json::to_string(&p).unwrap(), text);
        let bad = r#"{"degree":3,"sets":[["0","1/3"]]}"#;
        assert!(serde_json::from_str::<CriticalPortrait>(bad).is_err());
    }
}
