#![allow(dead_code)]

use std::path::PathBuf;

use lamina::lamination::generate_lamination;
use lamina::portrait::validate_portrait;
use lamina::{AngleSet, CriticalPortrait, Degree};
use lamina_cli::render::{render_svg, ChordStyle, ColorBy, RenderOptions};

pub fn portrait(d: u32, sets: &[&[&str]]) -> CriticalPortrait {
    let sets = sets.iter().map(|s| AngleSet::parse(s).unwrap()).collect();
    validate_portrait(Degree::new(d).unwrap(), sets).unwrap()
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
}

/// Fixed inputs and options, rendered fresh.
pub fn golden_cases() -> Vec<(&'static str, String)> {
    let cubic = portrait(3, &[&["0", "1/3"], &["1/2", "5/6"]]);
    let gap = portrait(3, &[&["1/12", "5/12", "3/4"]]);
    let basilica = portrait(2, &[&["1/12", "7/12"]]);
    let geodesic = RenderOptions {
        chord_style: ChordStyle::Geodesic,
        color_by: ColorBy::Status,
        ..RenderOptions::default()
    };
    let labelled = RenderOptions {
        size: 256,
        label_angles: true,
        ..RenderOptions::default()
    };
    vec![
        (
            "cubic_portrait.svg",
            render_svg(&cubic, &RenderOptions::default()).unwrap(),
        ),
        (
            "cubic_gap_labelled.svg",
            render_svg(&gap, &labelled).unwrap(),
        ),
        (
            "quadratic_depth3_geodesic.svg",
            render_svg(&generate_lamination(&basilica, 3).unwrap(), &geodesic).unwrap(),
        ),
        (
            "quadratic_depth4.svg",
            render_svg(
                &generate_lamination(&basilica, 4).unwrap(),
                &RenderOptions::default(),
            )
            .unwrap(),
        ),
    ]
}

/// Compares each rendering with its stored golden byte for byte. With
/// `LAMINA_BLESS=1` the goldens are rewritten first.
pub fn check_goldens() -> Vec<(&'static str, bool)> {
    let bless = std::env::var("LAMINA_BLESS").is_ok_and(|v| v == "1");
    golden_cases()
        .into_iter()
        .map(|(name, svg)| {
            let path = golden_dir().join(name);
            if bless {
                std::fs::write(&path, &svg).unwrap();
            }
            let stored = std::fs::read(&path).unwrap_or_default();
            (name, stored == svg.as_bytes())
        })
        .collect()
}
