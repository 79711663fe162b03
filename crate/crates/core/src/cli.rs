//! The `engel` command line: argument parsing, report emission and SVG
//! rendering of fronts.
//!
//! Exit codes: 0 success, 1 internal error, 2 parse or usage error,
//! 3 certificate failure (a loop that is not closed or not embedded, or a
//! trace that does not verify).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::curves::{self, CuspOrientation, FrontDiagram, HorizontalLoop, LegendrianGenerator, Tolerances};
use crate::error::Error;
use crate::frontlang::{self, Document};
use crate::homotopy::{self, DEFAULT_FRAMES};
use crate::invariants::{self, InvariantReport};
use crate::lifting::{self, EmbeddingReport};
use crate::models::{self, ModelConfig, DEFAULT_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CERTIFICATE: i32 = 3;

/// Environment variable that overrides the default model seed.
pub const SEED_ENV: &str = "ENGEL_SEED";

#[derive(Debug, Parser)]
#[command(name = "engel", version, about = "Fronts and horizontal loops in the standard Engel structure")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Samples per loop (a power of two, at least 16).
    #[arg(long, global = true, default_value_t = 4096, value_parser = parse_samples)]
    samples: usize,
    /// Closure tolerance for both defects.
    #[arg(long, global = true)]
    tol_closure: Option<f64>,
    /// Smallest accepted |Δw| at a Legendrian double point.
    #[arg(long, global = true)]
    tol_embed: Option<f64>,
    /// Frames per homotopy move unless the script says otherwise.
    #[arg(long, global = true, default_value_t = DEFAULT_FRAMES)]
    frames: usize,
    /// Directory for CSV, SVG and JSON artifacts.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Balance and lift a generator; write its CSV and print its invariants.
    Lift { doc: PathBuf, name: String },
    /// Print both rotation numbers of a generator.
    Rot { doc: PathBuf, name: String },
    /// Certify closure and embedding of the lift of a generator.
    Check {
        doc: PathBuf,
        name: String,
        /// Balance the generator before checking it.
        #[arg(long)]
        balance: bool,
    },
    /// Synthesize a closed embedded loop with rotation number n.
    Model {
        #[arg(short = 'n', allow_hyphen_values = true)]
        n: i64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run and verify move scripts.
    Homotopy {
        #[command(subcommand)]
        action: HomotopyAction,
    },
}

#[derive(Debug, Subcommand)]
enum HomotopyAction {
    /// Execute a script from a generator and verify the trace.
    Run {
        doc: PathBuf,
        generator: String,
        script: String,
        /// Also render every frame as SVG.
        #[arg(long)]
        svg: bool,
    },
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BadDescription(_) | Error::NotImmersed(_) | Error::InvalidMove(_) | Error::UnsupportedOverlap(_) => {
                EXIT_USAGE
            }
            Error::ZNotClosed { .. } | Error::NotClosed { .. } | Error::SynthesisFailed { .. } | Error::ImmersionLost { .. } => {
                EXIT_CERTIFICATE
            }
            _ => EXIT_INTERNAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: EXIT_INTERNAL,
            message: e.to_string(),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure {
            code: EXIT_INTERNAL,
            message: e.to_string(),
        }
    }
}

/// Run the command line with explicit arguments and return the exit code.
/// JSON reports go to standard output, diagnostics to standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("engel: {}", f.message);
            f.code
        }
    }
}

fn parse_samples(v: &str) -> Result<usize, String> {
    let n: usize = v.parse().map_err(|e| format!("{e}"))?;
    if n >= 16 && n.is_power_of_two() {
        Ok(n)
    } else {
        Err(format!("must be a power of two >= 16, got {n}"))
    }
}

fn tolerances(g: &Global) -> Tolerances {
    let mut tol = Tolerances::default();
    if let Some(c) = g.tol_closure {
        tol.closure = c;
    }
    if let Some(e) = g.tol_embed {
        tol.embed = e;
    }
    tol
}

fn load(path: &Path) -> Result<Document, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    frontlang::parse(&text).map_err(|e| Failure::usage(format!("{}:{e}", path.display())))
}

fn load_generator(path: &Path, name: &str, samples: usize) -> Result<LegendrianGenerator, Failure> {
    let doc = load(path)?;
    let decl = doc
        .generator(name)
        .ok_or_else(|| Failure::usage(format!("{}: no generator named `{name}`", path.display())))?;
    Ok(curves::sample_generator(&decl.description(), samples)?)
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn write(dir: &Path, file: &str, contents: &str) -> Result<(), Failure> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(file), contents)?;
    Ok(())
}

#[derive(Serialize)]
struct LoopReport {
    #[serde(flatten)]
    invariants: InvariantReport,
    defect_z: f64,
    defect_w: f64,
    closed: bool,
    #[serde(flatten)]
    embedding: EmbeddingReport,
}

fn loop_report(l: &HorizontalLoop, tol: &Tolerances) -> Result<LoopReport, Failure> {
    let closed = l.is_closed(tol);
    let embedding = if closed {
        lifting::embedding_check_with(l, tol)?
    } else {
        EmbeddingReport {
            double_points: Vec::new(),
            margin: f64::INFINITY,
            embedded: false,
        }
    };
    Ok(LoopReport {
        invariants: invariants::invariant_report(l.generator(), tol)?,
        defect_z: l.legendrian().closure_defect_z(),
        defect_w: l.closure_defect_w(),
        closed,
        embedding,
    })
}

fn dispatch(cli: &Cli) -> Result<i32, Failure> {
    let g = &cli.global;
    let tol = tolerances(g);
    match &cli.command {
        Command::Lift { doc, name } => {
            let gen = lifting::balance_closure(&load_generator(doc, name, g.samples)?)?;
            let l = lifting::lift_with(&gen, 0.0, 0.0, &tol)?;
            write(&g.out, &format!("{name}.csv"), &curves::horizontal_csv(&l))?;
            print_json(&invariants::invariant_report(&gen, &tol)?)?;
            Ok(EXIT_OK)
        }
        Command::Rot { doc, name } => {
            let gen = load_generator(doc, name, g.samples)?;
            print_json(&invariants::invariant_report(&gen, &tol)?)?;
            Ok(EXIT_OK)
        }
        Command::Check { doc, name, balance } => {
            let mut gen = load_generator(doc, name, g.samples)?;
            if *balance {
                gen = lifting::balance_closure(&gen)?;
            }
            let l = HorizontalLoop::integrate(curves::LegendrianLoop::integrate(gen, 0.0), 0.0);
            let report = loop_report(&l, &tol)?;
            print_json(&report)?;
            Ok(if report.closed && report.embedding.embedded { EXIT_OK } else { EXIT_CERTIFICATE })
        }
        Command::Model { n, seed } => {
            let seed = match seed {
                Some(s) => *s,
                None => match std::env::var(SEED_ENV) {
                    Ok(v) => v
                        .trim()
                        .parse()
                        .map_err(|_| Failure::usage(format!("{SEED_ENV} must be a non-negative integer, got `{v}`")))?,
                    Err(_) => DEFAULT_SEED,
                },
            };
            let cfg = ModelConfig {
                samples: g.samples,
                tol,
                ..ModelConfig::default()
            };
            let l = models::model_front_with(*n, seed, &cfg)?;
            let stem = format!("model_{n}");
            write(&g.out, &format!("{stem}.csv"), &curves::horizontal_csv(&l))?;
            write(&g.out, &format!("{stem}.svg"), &svg(&curves::front_of_with(l.legendrian(), &tol)?))?;
            #[derive(Serialize)]
            struct ModelReport {
                n: i64,
                seed: u64,
                #[serde(flatten)]
                report: LoopReport,
            }
            let report = loop_report(&l, &tol)?;
            let ok = report.closed && report.embedding.embedded;
            print_json(&ModelReport { n: *n, seed, report })?;
            Ok(if ok { EXIT_OK } else { EXIT_CERTIFICATE })
        }
        Command::Homotopy {
            action: HomotopyAction::Run {
                doc,
                generator,
                script,
                svg: with_svg,
            },
        } => {
            let document = load(doc)?;
            let decl = document
                .generator(generator)
                .ok_or_else(|| Failure::usage(format!("{}: no generator named `{generator}`", doc.display())))?;
            let moves = document
                .script(script)
                .ok_or_else(|| Failure::usage(format!("{}: no script named `{script}`", doc.display())))?
                .to_moves(g.frames)?;
            let g0 = curves::sample_generator(&decl.description(), g.samples)?;
            let trace = homotopy::run_script_with(&g0, &moves, &tol)?;
            let report = homotopy::verify_isotopy_with(&trace, &tol);
            let width = trace.len().to_string().len().max(4);
            for (j, f) in trace.frames.iter().enumerate() {
                write(&g.out, &format!("frame_{j:0width$}.csv"), &curves::horizontal_csv(f))?;
                if *with_svg {
                    if let Ok(front) = curves::front_of_with(f.legendrian(), &tol) {
                        write(&g.out, &format!("frame_{j:0width$}.svg"), &svg(&front))?;
                    }
                }
            }
            write(&g.out, "events.json", &serde_json::to_string_pretty(&trace.events)?)?;
            write(&g.out, "verification.json", &serde_json::to_string_pretty(&report)?)?;
            #[derive(Serialize)]
            struct Summary<'a> {
                verified: bool,
                frames: usize,
                rot: Option<i64>,
                rot_constant: bool,
                margin: f64,
                events: &'a [homotopy::Event],
                failure: Option<homotopy::Failure>,
            }
            print_json(&Summary {
                verified: report.verified,
                frames: report.frames,
                rot: report.rot,
                rot_constant: report.rot_constant,
                margin: report.margin,
                events: &report.events,
                failure: report.failure,
            })?;
            Ok(if report.verified { EXIT_OK } else { EXIT_CERTIFICATE })
        }
    }
}

/// SVG picture of a front in the `(x, z)` plane.
///
/// Cusps are drawn as triangles (`cusp-up`, `cusp-down`), transverse double
/// points as circles and self-tangencies as squares. Output depends only on
/// the input.
pub fn svg(f: &FrontDiagram) -> String {
    let (mut x0, mut x1, mut z0, mut z1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in &f.points {
        x0 = x0.min(p[1]);
        x1 = x1.max(p[1]);
        z0 = z0.min(p[2]);
        z1 = z1.max(p[2]);
    }
    if f.points.is_empty() {
        (x0, x1, z0, z1) = (0.0, 1.0, 0.0, 1.0);
    }
    let span = (x1 - x0).max(z1 - z0).max(1e-12);
    let (w, h) = ((x1 - x0).max(1e-3 * span), (z1 - z0).max(1e-3 * span));
    let (mx, mz) = (0.05 * w, 0.05 * h);
    // SVG's y axis points down, so the picture uses -z
    let (vx, vy, vw, vh) = (x0 - mx, -z1 - mz, w + 2.0 * mx, h + 2.0 * mz);
    let r = 0.008 * span;
    let stroke = 0.002 * span;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{vx:.6} {vy:.6} {vw:.6} {vh:.6}" width="800" height="{:.0}">"#,
        800.0 * vh / vw
    );
    let _ = writeln!(
        out,
        r#"<style>.front{{fill:none;stroke:#222;stroke-width:{stroke:.6}}}.cusp-up{{fill:#c0392b}}.cusp-down{{fill:#2471a3}}.double-point{{fill:none;stroke:#7d3c98;stroke-width:{stroke:.6}}}.self-tangency{{fill:#f39c12}}</style>"#
    );
    out.push_str(r#"<polygon class="front" points=""#);
    for (i, p) in f.points.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{:.6},{:.6}", p[1], -p[2]);
    }
    out.push_str("\"/>\n");
    for c in &f.cusps {
        let (x, y) = (c.position[0], -c.position[1]);
        let (class, dy) = match c.orientation {
            CuspOrientation::Up => ("cusp-up", -r),
            CuspOrientation::Down => ("cusp-down", r),
        };
        let _ = writeln!(
            out,
            r#"<path class="{class}" d="M {:.6} {:.6} L {:.6} {:.6} L {:.6} {:.6} Z"/>"#,
            x,
            y + dy,
            x - r,
            y - dy,
            x + r,
            y - dy
        );
    }
    let at = |s: f64| -> (f64, f64) {
        let n = f.points.len();
        let u = s.rem_euclid(1.0) * n as f64;
        let k = (u.floor() as usize) % n;
        let t = u - u.floor();
        let (a, b) = (f.points[k], f.points[(k + 1) % n]);
        (a[1] + t * (b[1] - a[1]), -(a[2] + t * (b[2] - a[2])))
    };
    if !f.points.is_empty() {
        for &(s0, _) in &f.double_points {
            let (x, y) = at(s0);
            let _ = writeln!(out, r#"<circle class="double-point" cx="{x:.6}" cy="{y:.6}" r="{r:.6}"/>"#);
        }
        for &(s0, _) in &f.self_tangencies {
            let (x, y) = at(s0);
            let _ = writeln!(
                out,
                r#"<rect class="self-tangency" x="{:.6}" y="{:.6}" width="{:.6}" height="{:.6}"/>"#,
                x - r,
                y - r,
                2.0 * r,
                2.0 * r
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Write [`svg`] of a front to `path`.
pub fn render_svg(f: &FrontDiagram, path: &Path) -> io::Result<()> {
    fs::write(path, svg(f))
}
