use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::angle::{Angle, Degree};
use crate::error::{Error, Result};

/// Area of the largest triangle inscribed in the unit circle, `3√3/4`.
pub const MAX_TRIANGLE_AREA: f64 = 1.299_038_105_676_658;

/// Relative tolerance for [`hull_area`] comparisons. Areas are the only
/// floating-point quantities in the crate.
pub const AREA_RELATIVE_TOLERANCE: f64 = 1e-12;

/// A finite set of angles stored in increasing order from 0.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AngleSet(Vec<Angle>);

impl AngleSet {
    pub fn new(angles: impl IntoIterator<Item = Angle>) -> Self {
        let mut v: Vec<Angle> = angles.into_iter().collect();
        v.sort();
        v.dedup();
        AngleSet(v)
    }

    /// Parses `["1/3", "2/3"]`-style string slices.
    pub fn parse<S: AsRef<str>>(items: &[S]) -> Result<Self> {
        items
            .iter()
            .map(|s| s.as_ref().parse::<Angle>())
            .collect::<Result<Vec<_>>>()
            .map(AngleSet::new)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Angle> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Angle] {
        &self.0
    }

    pub fn first(&self) -> Option<&Angle> {
        self.0.first()
    }

    pub fn contains(&self, a: &Angle) -> bool {
        self.0.binary_search(a).is_ok()
    }

    pub fn position(&self, a: &Angle) -> Option<usize> {
        self.0.binary_search(a).ok()
    }

    /// `σ_d` applied pointwise; the image may be smaller.
    pub fn image(&self, d: Degree) -> AngleSet {
        AngleSet::new(self.0.iter().map(|a| a.sigma(d)))
    }

    pub fn rotate(&self, offset: &BigRational) -> AngleSet {
        AngleSet::new(self.0.iter().map(|a| a.rotate(offset)))
    }

    /// Index `i` of the complementary arc `(m_i, m_{i+1})` containing a
    /// non-member `x`. Indices wrap: the last arc runs through 0.
    pub fn gap_index(&self, x: &Angle) -> Option<usize> {
        if self.0.is_empty() {
            return None;
        }
        match self.0.binary_search(x) {
            Ok(_) => None,
            Err(0) => Some(self.0.len() - 1),
            Err(i) => Some(i - 1),
        }
    }

    /// The complementary arcs of the set, as open arcs `(m_i, m_{i+1})`.
    pub fn complementary_arcs(&self) -> Vec<CircleArc> {
        let n = self.0.len();
        (0..n)
            .map(|i| CircleArc::new(self.0[i].clone(), self.0[(i + 1) % n].clone()))
            .collect()
    }

    /// Boundary chords of the convex hull, as consecutive pairs. Empty for
    /// fewer than two members; a single chord for two.
    pub fn boundary_chords(&self) -> Vec<(Angle, Angle)> {
        match self.0.len() {
            0 | 1 => Vec::new(),
            2 => vec![(self.0[0].clone(), self.0[1].clone())],
            n => (0..n)
                .map(|i| (self.0[i].clone(), self.0[(i + 1) % n].clone()))
                .collect(),
        }
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(ToString::to_string).collect()
    }
}

impl std::fmt::Debug for AngleSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl std::fmt::Display for AngleSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{}}}", self.to_strings().join(", "))
    }
}

impl<'a> IntoIterator for &'a AngleSet {
    type Item = &'a Angle;
    type IntoIter = std::slice::Iter<'a, Angle>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl FromIterator<Angle> for AngleSet {
    fn from_iter<I: IntoIterator<Item = Angle>>(iter: I) -> Self {
        AngleSet::new(iter)
    }
}

impl Serialize for AngleSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AngleSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<Angle>::deserialize(d)?;
        let n = v.len();
        let set = AngleSet::new(v);
        if set.len() != n {
            return Err(serde::de::Error::custom("duplicate angle in set"));
        }
        Ok(set)
    }
}

/// An open, positively oriented arc `(start, end)`. When the endpoints
/// coincide the arc is the circle minus that point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CircleArc {
    pub start: Angle,
    pub end: Angle,
}

impl CircleArc {
    pub fn new(start: Angle, end: Angle) -> Self {
        CircleArc { start, end }
    }

    pub fn contains(&self, x: &Angle) -> bool {
        x.in_open_arc(&self.start, &self.end)
    }

    pub fn length(&self) -> BigRational {
        if self.start == self.end {
            BigRational::one()
        } else {
            self.start.ccw_to(&self.end)
        }
    }
}

/// Unordered pair of distinct angles, stored smaller first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chord {
    a: Angle,
    b: Angle,
}

impl Chord {
    pub fn new(x: Angle, y: Angle) -> Result<Self> {
        match x.cmp(&y) {
            std::cmp::Ordering::Less => Ok(Chord { a: x, b: y }),
            std::cmp::Ordering::Greater => Ok(Chord { a: y, b: x }),
            std::cmp::Ordering::Equal => Err(Error::DegenerateChord),
        }
    }

    pub fn endpoints(&self) -> (&Angle, &Angle) {
        (&self.a, &self.b)
    }

    pub fn diameter(&self) -> BigRational {
        self.a.distance(&self.b)
    }

    /// Diameter of the (possibly degenerate) image chord.
    pub fn image_diameter(&self, d: Degree) -> BigRational {
        self.a.sigma(d).distance(&self.b.sigma(d))
    }

    pub fn is_critical(&self, d: Degree) -> bool {
        self.a.sigma(d) == self.b.sigma(d)
    }
}

/// Shortest-arc length between the endpoints of `c`, in `[0, 1/2]`.
pub fn chord_diameter(c: &Chord) -> BigRational {
    c.diameter()
}

/// Diameter of `σ_3(ℓ)` as a function of the diameter of `ℓ`:
/// `3·len` up to `1/6`, `3·|len − 1/3|` beyond.
pub fn chord_image_diameter(len: &BigRational, d: u32) -> Result<BigRational> {
    if d != 3 {
        return Err(Error::UnsupportedDegree {
            got: d,
            expected: 3,
        });
    }
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    if len.is_negative() || len > &half {
        return Err(Error::DiameterOutOfRange(crate::circle::format_rational(
            len,
        )));
    }
    let three = BigRational::from_integer(BigInt::from(3));
    let sixth = BigRational::new(BigInt::from(1), BigInt::from(6));
    let third = BigRational::new(BigInt::from(1), BigInt::from(3));
    Ok(if len <= &sixth {
        &three * len
    } else {
        three * (len - third).abs()
    })
}

/// True iff the convex hulls of `a` and `b` in the closed disk are disjoint:
/// the sets share no point and `b` sits inside one complementary arc of `a`.
pub fn unlinked(a: &AngleSet, b: &AngleSet) -> bool {
    if a.is_empty() || b.is_empty() {
        return true;
    }
    let mut arc = None;
    for x in b {
        match a.gap_index(x) {
            None => return false,
            Some(i) => match arc {
                None => arc = Some(i),
                Some(j) if j != i => return false,
                Some(_) => {}
            },
        }
    }
    true
}

/// Euclidean area of the convex hull of the points `e^{2πiθ}`, by the
/// shoelace formula. Zero for two or fewer points.
pub fn hull_area(s: &AngleSet) -> f64 {
    if s.len() < 3 {
        return 0.0;
    }
    let pts: Vec<(f64, f64)> = s
        .iter()
        .map(|a| {
            let t = std::f64::consts::TAU * a.to_f64();
            (t.cos(), t.sin())
        })
        .collect();
    let n = pts.len();
    let twice: f64 = (0..n)
        .map(|i| {
            let (x0, y0) = pts[i];
            let (x1, y1) = pts[(i + 1) % n];
            x0 * y1 - x1 * y0
        })
        .sum();
    0.5 * twice
}

/// Total length of a collection of open arcs.
pub fn total_length<'a>(arcs: impl IntoIterator<Item = &'a CircleArc>) -> BigRational {
    arcs.into_iter()
        .fold(BigRational::zero(), |acc, arc| acc + arc.length())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> Angle {
        s.parse().unwrap()
    }
    fn set(items: &[&str]) -> AngleSet {
        AngleSet::parse(items).unwrap()
    }
    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn diameter_examples() {
        assert_eq!(
            chord_diameter(&Chord::new(a("0"), a("1/2")).unwrap()),
            q(1, 2)
        );
        assert_eq!(
            chord_diameter(&Chord::new(a("1/8"), a("7/8")).unwrap()),
            q(1, 4)
        );
        assert_eq!(
            chord_diameter(&Chord::new(a("0"), a("1/3")).unwrap()),
            q(1, 3)
        );
        assert!(Chord::new(a("1/3"), a("1/3")).is_err());
    }

    #[test]
    fn image_diameter_examples() {
        assert_eq!(chord_image_diameter(&q(1, 6), 3).unwrap(), q(1, 2));
        assert_eq!(chord_image_diameter(&q(1, 3), 3).unwrap(), q(0, 1));
        assert_eq!(chord_image_diameter(&q(1, 4), 3).unwrap(), q(1, 4));
        assert!(chord_image_diameter(&q(3, 5), 3).is_err());
        assert!(chord_image_diameter(&q(-1, 5), 3).is_err());
        assert!(chord_image_diameter(&q(1, 5), 2).is_err());
    }

    #[test]
    fn unlinked_examples() {
        assert!(!unlinked(&set(&["0", "1/2"]), &set(&["1/4", "3/4"])));
        assert!(unlinked(&set(&["0", "1/3"]), &set(&["1/2", "5/6"])));
        assert!(!unlinked(&set(&["0", "1/3"]), &set(&["0", "2/3"])));
        let s = set(&["1/5", "2/5"]);
        assert!(!unlinked(&s, &s));
    }

    #[test]
    fn nested_polygons_are_unlinked() {
        let outer = set(&["0", "1/10", "1/2"]);
        let inner = set(&["1/5", "1/4", "1/3"]);
        assert!(unlinked(&outer, &inner));
        assert!(unlinked(&inner, &outer));
    }

    #[test]
    fn area_examples() {
        let tri = hull_area(&set(&["0", "1/3", "2/3"]));
        assert!((tri - 3f64.sqrt() * 0.75).abs() <= 1e-12 * tri);
        assert!((tri - MAX_TRIANGLE_AREA).abs() <= 1e-12);
        assert_eq!(hull_area(&set(&["0", "1/2"])), 0.0);
        assert!((hull_area(&set(&["0", "1/4", "1/2"])) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn arcs() {
        let s = set(&["0", "1/3"]);
        let arcs = s.complementary_arcs();
        assert_eq!(arcs.len(), 2);
        assert_eq!(arcs[1].length(), q(2, 3));
        assert_eq!(s.gap_index(&a("1/2")), Some(1));
        assert_eq!(s.gap_index(&a("1/6")), Some(0));
        assert_eq!(s.gap_index(&a("1/3")), None);
        let single = set(&["1/4"]);
        assert_eq!(single.complementary_arcs()[0].length(), q(1, 1));
    }
}
