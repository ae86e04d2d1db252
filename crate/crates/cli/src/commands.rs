use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use lamina::circle::{parse_rational, CircleArc};
use lamina::experiments::{
    area_decay_experiment, sample_class_k, sample_dense_chord_portrait, SampleSpec, DEFAULT_PRIME,
};
use lamina::lamination::{
    bl_bound_audit, condensity_probe, detect_wandering, generate_lamination, recurrence_horizon,
    verify_invariance, LaminationApprox, WanderingVerdict,
};
use lamina::portrait::{
    full_itinerary, kneading_status, one_sided_itinerary, validate_portrait, ItineraryReport,
};
use lamina::{Angle, AngleSet, CriticalPortrait, Degree, Side};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::render::{render_svg, ChordStyle, ColorBy, RenderOptions};

/// Default cap on the horizon `wander` derives from the input.
const WANDER_HORIZON_CAP: u64 = 100_000;

#[derive(Parser, Debug)]
#[command(
    name = "lamina",
    version,
    about = "Exact tools for invariant laminations of the circle"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    degree: Option<u32>,
    #[arg(long, global = true)]
    depth: Option<usize>,
    #[arg(long, global = true)]
    horizon: Option<u64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Density tolerance as `p/q`.
    #[arg(long, global = true, value_name = "P/Q")]
    epsilon: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SampleKind {
    Dense,
    ClassK,
}

/// `INPUT` arguments are a file path, `-` for stdin, or inline JSON.
#[derive(Subcommand, Debug)]
enum Command {
    /// Check a portrait against the portrait clauses.
    Validate { input: String },
    /// List the unlinked classes of a portrait.
    Classes { input: String },
    /// Itinerary of one angle (default depth 16).
    Itinerary {
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        angle: String,
        /// `+`, `-` or `on`.
        #[arg(long, default_value = "+", allow_hyphen_values = true)]
        side: String,
    },
    /// Kneading status of a portrait.
    Kneading { input: String },
    /// Finite-depth lamination generated by a portrait (default depth 4).
    Generate { input: String },
    /// Invariance audit and wandering-gap bound report for a lamination
    /// dump, or for a portrait generated to `--depth`.
    Audit { input: String },
    /// Forward orbit verdict for a finite angle set.
    Wander {
        #[arg(required = true, allow_hyphen_values = true)]
        angles: Vec<String>,
    },
    /// Iterate an arc under the map and report when test arcs are entered.
    Probe {
        #[arg(long, num_args = 2, value_names = ["START", "END"], required = true)]
        arc: Vec<String>,
        #[arg(long = "test", num_args = 2, value_names = ["START", "END"], action = clap::ArgAction::Append)]
        tests: Vec<String>,
        /// Lamination dump used to mark quotient-degenerate test arcs.
        #[arg(long)]
        lamination: Option<String>,
    },
    /// Draw one seeded portrait.
    Sample {
        #[arg(long, value_enum, default_value = "dense")]
        kind: SampleKind,
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long)]
        retries: Option<u64>,
    },
    /// Area-decay experiment from a JSON or TOML config. Records go to
    /// `--out` as JSON lines and the summary to stdout; without `--out`
    /// both go to stdout, summary last.
    Experiment {
        config: Option<String>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        triangles: Option<usize>,
    },
    /// SVG picture of a portrait, a lamination dump, or a portrait's
    /// lamination at `--depth`.
    Render {
        input: String,
        #[arg(long, default_value_t = 512)]
        size: u32,
        #[arg(long, value_enum, default_value = "straight")]
        style: ChordStyle,
        #[arg(long)]
        no_fill: bool,
        #[arg(long)]
        labels: bool,
        #[arg(long, value_enum, default_value = "level")]
        color_by: ColorBy,
    },
}

/// A failure with its exit status and JSON error object.
#[derive(Debug)]
struct Failure {
    exit: i32,
    body: Value,
}

impl Failure {
    fn malformed(code: &str, message: impl ToString) -> Self {
        Failure {
            exit: 2,
            body: json!({ "code": code, "message": message.to_string() }),
        }
    }
}

impl From<lamina::Error> for Failure {
    fn from(e: lamina::Error) -> Self {
        let exit = if matches!(e, lamina::Error::MalformedAngle(_)) {
            2
        } else {
            1
        };
        let mut body = json!({ "code": e.code(), "message": e.to_string() });
        if let lamina::Error::Violation(v) = &e {
            if let (Value::Object(extra), Value::Object(map)) =
                (serde_json::to_value(v).unwrap_or(Value::Null), &mut body)
            {
                map.extend(extra);
            }
        }
        Failure { exit, body }
    }
}

impl From<lamina::Violation> for Failure {
    fn from(v: lamina::Violation) -> Self {
        lamina::Error::from(v).into()
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

struct Ctx<'a> {
    cli: &'a Cli,
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn read(&mut self, input: &str) -> Outcome<String> {
        let t = input.trim_start();
        if input == "-" {
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|e| Failure::malformed("io", e))?;
            Ok(s)
        } else if t.starts_with('{') || t.starts_with('[') {
            Ok(input.to_string())
        } else {
            fs::read_to_string(input).map_err(|e| Failure::malformed("io", format!("{input}: {e}")))
        }
    }

    /// Writes to `--out` or stdout.
    fn emit(&mut self, text: &str) -> Outcome<()> {
        match &self.cli.out {
            Some(path) => write_file(path, text),
            None => self
                .stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::malformed("io", e)),
        }
    }

    fn emit_json(&mut self, v: &impl Serialize) -> Outcome<()> {
        let text = to_json(v)?;
        self.emit(&format!("{text}\n"))
    }

    fn degree(&self) -> Outcome<Degree> {
        let d = self
            .cli
            .degree
            .ok_or_else(|| Failure::malformed("missing_argument", "--degree is required"))?;
        Ok(Degree::new(d)?)
    }

    fn horizon_or(&self, default: u64) -> Outcome<usize> {
        let h = self.cli.horizon.unwrap_or(default);
        usize::try_from(h).map_err(|_| Failure::malformed("malformed_input", "horizon too large"))
    }

    fn portrait_from(&self, v: &Value) -> Outcome<CriticalPortrait> {
        #[derive(Deserialize)]
        struct Raw {
            degree: Option<u32>,
            sets: Vec<Vec<String>>,
        }
        let raw: Raw = serde_json::from_value(v.clone())
            .map_err(|e| Failure::malformed("malformed_input", e))?;
        let degree = raw.degree.or(self.cli.degree).ok_or_else(|| {
            Failure::malformed("missing_argument", "portrait degree missing; pass --degree")
        })?;
        let sets = raw
            .sets
            .iter()
            .map(|s| AngleSet::parse(s))
            .collect::<lamina::Result<Vec<_>>>()?;
        Ok(validate_portrait(Degree::new(degree)?, sets)?)
    }

    fn portrait(&mut self, input: &str) -> Outcome<CriticalPortrait> {
        let v = parse_json(&self.read(input)?)?;
        self.portrait_from(&v)
    }

    /// A lamination dump as is, or a portrait generated to `--depth`.
    fn lamination(&mut self, input: &str, default_depth: usize) -> Outcome<LaminationApprox> {
        let v = parse_json(&self.read(input)?)?;
        match v.get("classes") {
            Some(_) => {
                let portrait = v.get("portrait").ok_or_else(|| {
                    Failure::malformed("malformed_input", "lamination dump without portrait")
                })?;
                self.portrait_from(portrait)?;
                serde_json::from_value(v).map_err(|e| Failure::malformed("malformed_input", e))
            }
            None => {
                let p = self.portrait_from(&v)?;
                Ok(generate_lamination(
                    &p,
                    self.cli.depth.unwrap_or(default_depth),
                )?)
            }
        }
    }
}

fn write_file(path: &Path, text: &str) -> Outcome<()> {
    fs::write(path, text).map_err(|e| Failure::malformed("io", format!("{}: {e}", path.display())))
}

fn to_json(v: &impl Serialize) -> Outcome<String> {
    serde_json::to_string(v).map_err(|e| Failure {
        exit: 1,
        body: json!({ "code": "internal", "message": e.to_string() }),
    })
}

fn parse_json(text: &str) -> Outcome<Value> {
    serde_json::from_str(text).map_err(|e| Failure::malformed("malformed_json", e))
}

fn parse_angle(s: &str) -> Outcome<Angle> {
    Ok(s.parse::<Angle>()?)
}

fn arcs(values: &[String]) -> Outcome<Vec<CircleArc>> {
    values
        .chunks(2)
        .map(|c| Ok(CircleArc::new(parse_angle(&c[0])?, parse_angle(&c[1])?)))
        .collect()
}

#[derive(Serialize)]
struct WanderReport {
    degree: u32,
    set: AngleSet,
    horizon: usize,
    #[serde(flatten)]
    verdict: WanderingVerdict,
    survival: usize,
}

#[derive(Deserialize)]
struct ExperimentConfig {
    #[serde(flatten)]
    spec: SampleSpec,
    #[serde(default = "default_n")]
    n: u64,
    #[serde(default = "default_triangles")]
    triangle_samples: usize,
}

fn default_n() -> u64 {
    5
}

fn default_triangles() -> usize {
    1000
}

fn thread_pool() -> Outcome<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("LAMINA_THREADS") {
        let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            Failure::malformed(
                "malformed_input",
                format!("LAMINA_THREADS={v:?} is not a positive integer"),
            )
        })?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| Failure::malformed("internal", e))
}

fn run(ctx: &mut Ctx<'_>) -> Outcome<()> {
    let cli = ctx.cli;
    match &cli.command {
        Command::Validate { input } => {
            let p = ctx.portrait(input)?;
            ctx.emit_json(&json!({ "valid": true, "portrait": p }))
        }
        Command::Classes { input } => {
            let p = ctx.portrait(input)?;
            let classes: Vec<Value> = p
                .unlinked_classes()
                .classes
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    json!({
                        "label": format!("L{}", i + 1),
                        "arcs": c.arcs,
                        "length": lamina::circle::format_rational(&c.total_length()),
                    })
                })
                .collect();
            ctx.emit_json(&json!({ "degree": p.degree().get(), "classes": classes }))
        }
        Command::Itinerary { input, angle, side } => {
            let p = ctx.portrait(input)?;
            let theta = parse_angle(angle)?;
            let side: Side = side
                .parse()
                .map_err(|e: lamina::Error| Failure::malformed("malformed_input", e))?;
            let depth = cli.depth.unwrap_or(16);
            let it = match side {
                Side::On => full_itinerary(&theta, &p, depth)?,
                s => one_sided_itinerary(&theta, s, &p, depth)?,
            };
            ctx.emit_json(&ItineraryReport::new(&theta, &it))
        }
        Command::Kneading { input } => {
            let p = ctx.portrait(input)?;
            ctx.emit_json(&kneading_status(&p))
        }
        Command::Generate { input } => {
            let p = ctx.portrait(input)?;
            let l = generate_lamination(&p, cli.depth.unwrap_or(4))?;
            match cli.format {
                Some(Format::Svg) => {
                    let svg = render_svg(&l, &RenderOptions::default())?;
                    ctx.emit(&svg)
                }
                _ => ctx.emit_json(&l),
            }
        }
        Command::Audit { input } => {
            let l = ctx.lamination(input, 4)?;
            let horizon = ctx.horizon_or(50)?;
            let report = json!({
                "depth": l.depth(),
                "classes": l.classes().len(),
                "invariance": verify_invariance(&l),
                "bound": bl_bound_audit(&l, horizon),
            });
            ctx.emit_json(&report)
        }
        Command::Wander { angles } => {
            let d = ctx.degree()?;
            let set = AngleSet::parse(angles)?;
            let horizon = match cli.horizon {
                Some(_) => ctx.horizon_or(0)?,
                None => recurrence_horizon(&set, d).min(WANDER_HORIZON_CAP) as usize,
            };
            let verdict = detect_wandering(&set, d, horizon);
            ctx.emit_json(&WanderReport {
                degree: d.get(),
                set,
                horizon,
                verdict,
                survival: verdict.survival(),
            })
        }
        Command::Probe {
            arc,
            tests,
            lamination,
        } => {
            let d = ctx.degree()?;
            let seed = arcs(arc)?.remove(0);
            let tests = arcs(tests)?;
            let lam = match lamination {
                Some(input) => Some(ctx.lamination(input, 4)?),
                None => None,
            };
            let horizon = ctx.horizon_or(32)?;
            let report = condensity_probe(d, &seed, &tests, horizon, lam.as_ref())?;
            ctx.emit_json(&report)
        }
        Command::Sample {
            kind,
            prime,
            retries,
        } => {
            let spec = sample_spec(cli, *prime, *retries)?;
            match kind {
                SampleKind::Dense => {
                    let s = sample_dense_chord_portrait(&spec)?;
                    ctx.emit_json(&s)
                }
                SampleKind::ClassK => {
                    let s = sample_class_k(&spec)?;
                    ctx.emit_json(&s)
                }
            }
        }
        Command::Experiment {
            config,
            n,
            triangles,
        } => {
            let mut cfg = match config {
                Some(input) => load_config(input, &ctx.read(input)?)?,
                None => ExperimentConfig {
                    spec: sample_spec(cli, None, None)?,
                    n: default_n(),
                    triangle_samples: default_triangles(),
                },
            };
            if config.is_some() {
                override_spec(cli, &mut cfg.spec)?;
            }
            cfg.n = n.unwrap_or(cfg.n);
            cfg.triangle_samples = triangles.unwrap_or(cfg.triangle_samples);
            let pool = thread_pool()?;
            let outcome =
                pool.install(|| area_decay_experiment(&cfg.spec, cfg.n, cfg.triangle_samples))?;
            let mut lines = String::new();
            for r in &outcome.records {
                lines.push_str(&to_json(r)?);
                lines.push('\n');
            }
            let summary = to_json(&json!({ "summary": outcome.summary }))?;
            match &cli.out {
                Some(path) => {
                    write_file(path, &lines)?;
                    ctx.stdout
                        .write_all(format!("{summary}\n").as_bytes())
                        .map_err(|e| Failure::malformed("io", e))
                }
                None => ctx.emit(&format!("{lines}{summary}\n")),
            }
        }
        Command::Render {
            input,
            size,
            style,
            no_fill,
            labels,
            color_by,
        } => {
            let opts = RenderOptions {
                size: *size,
                chord_style: *style,
                fill_gaps: !no_fill,
                label_angles: *labels,
                color_by: *color_by,
            };
            let v = parse_json(&ctx.read(input)?)?;
            let is_dump = v.get("classes").is_some();
            let text = if is_dump || cli.depth.is_some() {
                let l = ctx.lamination(input, 0)?;
                match cli.format {
                    Some(Format::Json) => format!("{}\n", to_json(&l)?),
                    _ => render_svg(&l, &opts)?,
                }
            } else {
                let p = ctx.portrait_from(&v)?;
                match cli.format {
                    Some(Format::Json) => format!("{}\n", to_json(&p)?),
                    _ => render_svg(&p, &opts)?,
                }
            };
            ctx.emit(&text)
        }
    }
}

fn parse_epsilon(s: &str) -> Outcome<BigRational> {
    parse_rational(s).map_err(|e| Failure::malformed("malformed_input", e))
}

fn sample_spec(cli: &Cli, prime: Option<u64>, retries: Option<u64>) -> Outcome<SampleSpec> {
    let degree = cli
        .degree
        .ok_or_else(|| Failure::malformed("missing_argument", "--degree is required"))?;
    let epsilon = parse_epsilon(cli.epsilon.as_deref().unwrap_or("1/100"))?;
    let mut spec = SampleSpec::new(
        degree,
        cli.seed.unwrap_or(0),
        cli.horizon.unwrap_or(10_000),
        epsilon,
    );
    spec.denominator_prime = prime.unwrap_or(DEFAULT_PRIME);
    if let Some(r) = retries {
        spec.retries = r;
    }
    Ok(spec)
}

/// Command-line flags take precedence over the config file.
fn override_spec(cli: &Cli, spec: &mut SampleSpec) -> Outcome<()> {
    if let Some(d) = cli.degree {
        spec.degree = d;
    }
    if let Some(s) = cli.seed {
        spec.seed = s;
    }
    if let Some(h) = cli.horizon {
        spec.horizon = h;
    }
    if let Some(e) = &cli.epsilon {
        spec.epsilon = parse_epsilon(e)?;
    }
    Ok(())
}

fn load_config(name: &str, text: &str) -> Outcome<ExperimentConfig> {
    let json_first = !name.ends_with(".toml");
    let from_json = || serde_json::from_str::<ExperimentConfig>(text).map_err(|e| e.to_string());
    let from_toml = || toml::from_str::<ExperimentConfig>(text).map_err(|e| e.to_string());
    let result = if json_first {
        from_json().or_else(|_| from_toml())
    } else {
        from_toml()
    };
    result.map_err(|e| Failure::malformed("malformed_config", e))
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit status: 0 on success, 1 on a domain violation, 2 on
/// malformed input. Errors are written to `stderr` as one JSON object with
/// a stable `code` field.
pub fn run_cli<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let body = json!({ "code": "usage", "message": e.to_string() });
            let _ = writeln!(stderr, "{body}");
            return 2;
        }
    };
    let mut ctx = Ctx {
        cli: &cli,
        stdin,
        stdout,
    };
    match run(&mut ctx) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(stderr, "{}", f.body);
            f.exit
        }
    }
}
