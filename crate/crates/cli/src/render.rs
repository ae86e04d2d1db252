//! Deterministic SVG pictures of portraits and lamination approximations.
//!
//! Angles are placed counter-clockwise from the positive x axis on a circle
//! centred in the canvas. Coordinates are printed with nine decimals, so the
//! same input and options always give the same bytes.

use std::f64::consts::TAU;
use std::fmt::Write;

use lamina::lamination::{classify_class, ClassStatus, LaminationApprox};
use lamina::{Angle, AngleSet, CriticalPortrait, Degree, Error, Result};
use serde::{Deserialize, Serialize};

/// Horizon used when colouring by orbit status.
pub const STATUS_HORIZON: usize = 64;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ChordStyle {
    #[default]
    Straight,
    /// Circular arcs orthogonal to the boundary circle.
    Geodesic,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ColorBy {
    /// Pullback level of a class; index for initial sets.
    #[default]
    Level,
    /// Precritical, preperiodic or undecided within [`STATUS_HORIZON`].
    Status,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderOptions {
    pub size: u32,
    pub chord_style: ChordStyle,
    pub fill_gaps: bool,
    pub label_angles: bool,
    pub color_by: ColorBy,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            size: 512,
            chord_style: ChordStyle::Straight,
            fill_gaps: true,
            label_angles: false,
            color_by: ColorBy::Level,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum Subject<'a> {
    Portrait(&'a CriticalPortrait),
    Lamination(&'a LaminationApprox),
}

impl<'a> From<&'a CriticalPortrait> for Subject<'a> {
    fn from(p: &'a CriticalPortrait) -> Self {
        Subject::Portrait(p)
    }
}

impl<'a> From<&'a LaminationApprox> for Subject<'a> {
    fn from(l: &'a LaminationApprox) -> Self {
        Subject::Lamination(l)
    }
}

/// Fixed nine-decimal formatting; `-0` prints as `0`.
fn num(x: f64) -> String {
    let s = format!("{x:.9}");
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

struct Canvas {
    c: f64,
    r: f64,
    stroke: f64,
}

impl Canvas {
    fn point(&self, a: &Angle) -> (f64, f64) {
        let t = TAU * a.to_f64();
        (self.c + self.r * t.cos(), self.c - self.r * t.sin())
    }

    /// Path segment from the current point `p` to `q` along the geodesic
    /// between boundary angles `a` and `b`.
    fn geodesic_to(&self, out: &mut String, a: &Angle, b: &Angle) {
        let (p, q) = (self.point(a), self.point(b));
        let dist = a.distance(b);
        if dist == *Angle::frac(1, 2).value() {
            let _ = write!(out, " L {} {}", num(q.0), num(q.1));
            return;
        }
        let delta = TAU * Angle::from_ratio(dist).to_f64();
        let radius = self.r * (delta / 2.0).tan();
        // The arc's centre lies outside the disk, beyond the chord midpoint.
        let mid = ((p.0 + q.0) / 2.0 - self.c, (p.1 + q.1) / 2.0 - self.c);
        let norm = (mid.0 * mid.0 + mid.1 * mid.1).sqrt();
        let reach = self.r / (delta / 2.0).cos();
        let o = (self.c + mid.0 / norm * reach, self.c + mid.1 / norm * reach);
        let cross = (p.0 - o.0) * (q.1 - o.1) - (p.1 - o.1) * (q.0 - o.0);
        let sweep = u8::from(cross > 0.0);
        let _ = write!(
            out,
            " A {} {} 0 0 {} {} {}",
            num(radius),
            num(radius),
            sweep,
            num(q.0),
            num(q.1)
        );
    }
}

fn color(
    set: &AngleSet,
    index: usize,
    level: usize,
    d: Degree,
    by: ColorBy,
    portrait: bool,
) -> &'static str {
    match by {
        ColorBy::Level => PALETTE[if portrait { index } else { level } % PALETTE.len()],
        ColorBy::Status => match classify_class(set, d, STATUS_HORIZON).status {
            ClassStatus::Precritical { .. } => "#c0392b",
            ClassStatus::Preperiodic { .. } => "#2c6fbb",
            ClassStatus::WanderingCandidate { .. } => "#27ae60",
        },
    }
}

/// Renders the boundary circle and one chord or polygon per initial set
/// (portrait) or stored class (lamination), in stored order.
pub fn render_svg<'a>(subject: impl Into<Subject<'a>>, opts: &RenderOptions) -> Result<String> {
    if opts.size < 64 {
        return Err(Error::OutOfRange {
            what: "size",
            min: 64,
        });
    }
    let subject = subject.into();
    let size = opts.size as f64;
    let margin = if opts.label_angles {
        size * 0.12
    } else {
        size * 0.04
    };
    let canvas = Canvas {
        c: size / 2.0,
        r: size / 2.0 - margin,
        stroke: size / 512.0,
    };
    let (portrait, sets, levels): (&CriticalPortrait, &[AngleSet], Vec<usize>) = match subject {
        Subject::Portrait(p) => (p, p.sets(), vec![0; p.sets().len()]),
        Subject::Lamination(l) => (
            l.portrait(),
            l.classes(),
            l.provenance().iter().map(|p| p.level).collect(),
        ),
    };
    let is_portrait = matches!(subject, Subject::Portrait(_));
    let d = portrait.degree();

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{0}" viewBox="0 0 {0} {0}">"#,
        opts.size
    );
    let _ = writeln!(
        out,
        r##"<circle cx="{c}" cy="{c}" r="{r}" fill="none" stroke="#000000" stroke-width="{w}"/>"##,
        c = num(canvas.c),
        r = num(canvas.r),
        w = num(canvas.stroke),
    );
    for (i, set) in sets.iter().enumerate() {
        let col = color(
            set,
            i,
            levels.get(i).copied().unwrap_or(0),
            d,
            opts.color_by,
            is_portrait,
        );
        let pts: Vec<(f64, f64)> = set.iter().map(|a| canvas.point(a)).collect();
        let fill = if opts.fill_gaps && set.len() > 2 {
            col
        } else {
            "none"
        };
        let style = format!(
            r#"fill="{fill}" fill-opacity="0.35" stroke="{col}" stroke-width="{}""#,
            num(canvas.stroke)
        );
        match (set.len(), opts.chord_style) {
            (0 | 1, _) => {}
            (2, ChordStyle::Straight) => {
                let _ = writeln!(
                    out,
                    r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{col}" stroke-width="{}"/>"#,
                    num(pts[0].0),
                    num(pts[0].1),
                    num(pts[1].0),
                    num(pts[1].1),
                    num(canvas.stroke)
                );
            }
            (_, ChordStyle::Straight) => {
                let list: Vec<String> = pts
                    .iter()
                    .map(|p| format!("{},{}", num(p.0), num(p.1)))
                    .collect();
                let _ = writeln!(out, r#"<polygon points="{}" {style}/>"#, list.join(" "));
            }
            (n, ChordStyle::Geodesic) => {
                let angles = set.as_slice();
                let mut path = format!("M {} {}", num(pts[0].0), num(pts[0].1));
                let edges = if n == 2 { 1 } else { n };
                for k in 0..edges {
                    canvas.geodesic_to(&mut path, &angles[k], &angles[(k + 1) % n]);
                }
                if n > 2 {
                    path.push_str(" Z");
                }
                let style = if n == 2 {
                    format!(
                        r#"fill="none" stroke="{col}" stroke-width="{}""#,
                        num(canvas.stroke)
                    )
                } else {
                    style
                };
                let _ = writeln!(out, r#"<path d="{path}" {style}/>"#);
            }
        }
    }
    if opts.label_angles {
        let font = size / 48.0;
        for a in portrait.points() {
            let t = TAU * a.to_f64();
            let rr = canvas.r + margin * 0.5;
            let (x, y) = (canvas.c + rr * t.cos(), canvas.c - rr * t.sin());
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" font-family="monospace" font-size="{}" text-anchor="middle" dominant-baseline="middle">{a}</text>"#,
                num(x),
                num(y),
                num(font)
            );
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}
