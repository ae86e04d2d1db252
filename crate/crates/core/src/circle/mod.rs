//! Exact arithmetic on circle angles, chords and finite angle sets.
//!
//! Angles are reduced rationals in `[0, 1)` backed by arbitrary-precision
//! integers. The one floating-point quantity is [`hull_area`].

mod angle;
mod orbit;
mod set;

pub use angle::{format_rational, parse_rational, preimages, sigma, Angle, Degree};
pub use orbit::{orbit_reaches, orbit_shape, OrbitShape};
pub use set::{
    chord_diameter, chord_image_diameter, hull_area, total_length, unlinked, AngleSet, Chord,
    CircleArc, AREA_RELATIVE_TOLERANCE, MAX_TRIANGLE_AREA,
};
