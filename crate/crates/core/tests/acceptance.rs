//! The seven acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the test harness so the lines always reach the output.

use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use engel::curves::{self, Basis, Description, LegendrianGenerator, Term, TrigSeries};
use engel::frontlang::{self, Document, GeneratorDecl, MoveDecl, ScriptDecl};
use engel::homotopy::{self, FailureKind, MoveKind};
use engel::{invariants, lifting, models, spectral, HorizontalLoop, Tolerances};

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data");

/// Left-point Riemann sum of sin(2πs) · d/ds cos(2πs) over 10^6 points,
/// evaluated once outside the crate.
const RIEMANN_ORACLE: f64 = -3.1415926535896426;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn load(file: &str) -> Document {
    frontlang::parse(&std::fs::read_to_string(format!("{DATA}/{file}")).unwrap()).unwrap()
}

fn sample(doc: &Document, name: &str, n: usize) -> LegendrianGenerator {
    curves::sample_generator(&doc.generator(name).unwrap().description(), n).unwrap()
}

fn model_certificate(n: i64, l: &HorizontalLoop, tol: &Tolerances) -> Result<f64, String> {
    let inv = invariants::invariant_report(l.generator(), tol).map_err(|e| e.to_string())?;
    check(inv.rot_winding == n && inv.rot_cusp == n, format!("n={n}: rot {inv:?}"))?;
    let (dz, dw) = (l.legendrian().closure_defect_z(), l.closure_defect_w());
    check(dz.abs() <= 1e-9 && dw.abs() <= 1e-9, format!("n={n}: defects {dz:e} {dw:e}"))?;
    let e = lifting::embedding_check(l).map_err(|e| e.to_string())?;
    check(e.embedded && e.margin > 1e-7, format!("n={n}: margin {:e}", e.margin))?;
    Ok(e.margin)
}

fn criterion_1(models_out: &mut Vec<(i64, HorizontalLoop)>) -> Outcome {
    let tol = Tolerances::default();
    let start = Instant::now();
    let mut min_margin = f64::INFINITY;
    for n in -5..=5 {
        for seed in [1, 2, 3] {
            let l = models::model_front(n, seed).map_err(|e| format!("n={n} seed={seed}: {e}"))?;
            min_margin = min_margin.min(model_certificate(n, &l, &tol)?);
            models_out.push((n, l));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(secs <= 60.0, format!("took {secs:.1} s"))?;
    Ok(format!("33 loops at N = 4096 certified in {secs:.1} s, smallest margin {min_margin:e}"))
}

fn random_generator(rng: &mut ChaCha8Rng, n: usize) -> Option<LegendrianGenerator> {
    let k0 = rng.gen_range(1..=4u32);
    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let mut x = TrigSeries::cos(k0);
    let mut y = TrigSeries::default().with(sign, Basis::Sin(k0));
    for k in 1..=8u32 {
        let a = 0.15 / (k * k) as f64;
        x = x.with(a * rng.gen_range(-1.0..1.0), Basis::Cos(k)).with(a * rng.gen_range(-1.0..1.0), Basis::Sin(k));
        y = y.with(a * rng.gen_range(-1.0..1.0), Basis::Cos(k)).with(a * rng.gen_range(-1.0..1.0), Basis::Sin(k));
    }
    let g = curves::sample_generator(&Description::Series { x, y }, n).ok()?;
    lifting::balance_closure(&g).ok()
}

fn criterion_2() -> Outcome {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut corpus = Vec::new();
    let mut drawn = 0;
    while corpus.len() < 100 {
        drawn += 1;
        if let Some(g) = random_generator(&mut rng, 1024) {
            corpus.push(g);
        }
    }
    let mut exceptions = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (i, g) in corpus.iter().enumerate() {
        match invariants::invariant_report(g, &tol) {
            Ok(r) if r.rot_cusp == r.rot_winding => {
                seen.insert(r.rot_winding);
            }
            Ok(r) => exceptions.push(format!("#{i}: {r:?}")),
            Err(e) => exceptions.push(format!("#{i}: {e}")),
        }
    }
    check(exceptions.is_empty(), format!("{} exceptions: {}", exceptions.len(), exceptions.join("; ")))?;
    Ok(format!("100 balanced generators ({drawn} drawn), rot values {seen:?}, zero exceptions"))
}

/// The model loop with rotation number `n` at `samples`, using `seed`.
fn model_at(n: i64, seed: u64, samples: usize) -> HorizontalLoop {
    let cfg = models::ModelConfig {
        samples,
        ..Default::default()
    };
    models::model_front_with(n, seed, &cfg).unwrap()
}

/// `coarse` samples the same curve as `fine` on its subgrid.
fn same_curve(coarse: &HorizontalLoop, fine: &HorizontalLoop) -> bool {
    let (c, f) = (coarse.generator(), fine.generator());
    let step = f.len() / c.len();
    (0..c.len()).all(|k| (c.y()[k] - f.y()[step * k]).abs() < 1e-6 && c.x()[k] == f.x()[step * k])
}

/// Smallest seed whose model loop is the same curve at 512 and 4096 samples.
/// Retries inside the model search can differ between resolutions.
fn stable_seed(n: i64) -> u64 {
    (1..=20)
        .find(|&seed| same_curve(&model_at(n, seed, 512), &model_at(n, seed, 4096)))
        .expect("no resolution-stable seed")
}

/// Builds one test loop at a given sample count.
type LoopAt<'a> = Box<dyn Fn(usize) -> HorizontalLoop + 'a>;

fn criterion_3() -> Outcome {
    let fixtures = load("fixtures.front");
    let circle = |n: usize| lifting::lift(&lifting::balance_closure(&sample(&fixtures, "circ", n)).unwrap(), 0.0, 0.0).unwrap();
    let mut worst_ratio = f64::INFINITY;
    let cases: [(&str, LoopAt); 6] = [
        ("circle", Box::new(circle)),
        ("model -2", Box::new(|n| model_at(-2, stable_seed(-2), n))),
        ("model 0", Box::new(|n| model_at(0, stable_seed(0), n))),
        ("model 1", Box::new(|n| model_at(1, stable_seed(1), n))),
        ("model 3", Box::new(|n| model_at(3, stable_seed(3), n))),
        ("model 5", Box::new(|n| model_at(5, stable_seed(5), n))),
    ];
    let mut at_cusps = Vec::new();
    for (name, build) in &cases {
        let loops: Vec<HorizontalLoop> = [512, 1024, 2048].iter().map(|&n| build(n)).collect();
        let same = same_curve(&loops[0], &loops[1]) && same_curve(&loops[0], &loops[2]);
        check(same, format!("{name}: different curves at different resolutions"))?;
        let res: Vec<f64> = loops
            .iter()
            .map(|l| {
                let (rz, rw) = curves::horizontality_residual(l);
                rz.max(rw)
            })
            .collect();
        for w in res.windows(2) {
            let ratio = w[0] / w[1];
            worst_ratio = worst_ratio.min(ratio);
            check(ratio >= 3.5, format!("{name}: residuals {res:?}"))?;
        }
        at_cusps.push(build(4096));
    }
    let tol = Tolerances::default();
    let mut worst_cusp: f64 = 0.0;
    for l in &at_cusps {
        let w = spectral::Periodic::new(l.w());
        for c in curves::cusp_sites(l.generator(), &tol).unwrap() {
            worst_cusp = worst_cusp.max(l.legendrian().z_fn().deriv(c.s).abs()).max(w.deriv(c.s).abs());
        }
    }
    check(worst_cusp <= 1e-8, format!("|z'|, |w'| at a cusp reach {worst_cusp:e}"))?;
    Ok(format!(
        "residual ratio per doubling (512 -> 1024 -> 2048) at least {worst_ratio:.1}; largest |z'|,|w'| at cusps (N = 4096) {worst_cusp:e}"
    ))
}

fn criterion_4() -> Outcome {
    check((RIEMANN_ORACLE + std::f64::consts::PI).abs() < 1e-10, "oracle drifted")?;
    let circle = Description::Series {
        x: TrigSeries::cos(1),
        y: TrigSeries::sin(1),
    };
    let mut worst: f64 = 0.0;
    for n in [64, 256, 4096] {
        let d = lifting::z_closure_defect(&curves::sample_generator(&circle, n).unwrap());
        worst = worst.max((d - RIEMANN_ORACLE).abs());
    }
    check(worst < 1e-10, format!("quadrature differs from the oracle by {worst:e}"))?;
    Ok(format!("closed-loop quadrature within {worst:e} of the Riemann oracle"))
}

fn criterion_5(models: &[(i64, HorizontalLoop)]) -> Outcome {
    let fixtures = load("fixtures.front");
    let l = lifting::lift(&sample(&fixtures, "sym", 4096), 0.0, 0.0).map_err(|e| e.to_string())?;
    let r = lifting::embedding_check(&l).map_err(|e| e.to_string())?;
    check(!r.embedded && r.margin <= 1e-9, format!("symmetric fixture: {r:?}"))?;
    let out = Command::new(env!("CARGO_BIN_EXE_engel"))
        .args(["check", &format!("{DATA}/fixtures.front"), "sym"])
        .output()
        .map_err(|e| e.to_string())?;
    check(out.status.code() == Some(3), format!("`engel check` exited with {:?}", out.status.code()))?;
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    check(json["embedded"] == false, "`engel check` reported embedded")?;
    check(!models.is_empty(), "no model loops to accept")?;
    for (n, l) in models {
        let e = lifting::embedding_check(l).map_err(|e| e.to_string())?;
        check(e.embedded, format!("model n={n} rejected"))?;
    }
    Ok(format!(
        "symmetric fixture rejected (margin {:e}, exit 3); {} model loops accepted",
        r.margin,
        models.len()
    ))
}

fn criterion_6() -> Outcome {
    let demo = load("demo.front");
    let moves = demo.script("demo").unwrap().to_moves(homotopy::DEFAULT_FRAMES).map_err(|e| e.to_string())?;
    let trace = homotopy::run_script(&sample(&demo, "start", 4096), &moves).map_err(|e| e.to_string())?;
    let report = homotopy::verify_isotopy(&trace);
    check(report.verified, format!("demo failed: {:?}", report.failure))?;
    check(report.rot_constant && report.rot == Some(1), format!("demo rot {:?}", report.rot))?;
    for f in &report.per_frame {
        check(f.defect_z.abs() <= 1e-9 && f.defect_w.abs() <= 1e-9, format!("frame {} not closed", f.frame))?;
        let margin = f.embedding.as_ref().map_or(0.0, |e| e.margin);
        check(margin > 1e-7, format!("frame {} margin {margin:e}", f.frame))?;
    }
    let pass = report
        .events
        .iter()
        .find(|e| e.kind == MoveKind::TangencyPass)
        .ok_or("demo has no tangency event")?;
    check(report.tangency_frames.contains(&pass.frame), "no Legendrian double point at the tangency event")?;
    let first = trace.frames.first().unwrap().generator();
    let last = trace.frames.last().unwrap().generator();
    check(first != last, "demo ends where it starts")?;

    let fixtures = load("fixtures.front");
    let moves = fixtures.script("zero_area").unwrap().to_moves(homotopy::DEFAULT_FRAMES).map_err(|e| e.to_string())?;
    let bad = homotopy::verify_isotopy(&homotopy::run_script(&sample(&fixtures, "sym_start", 4096), &moves).map_err(|e| e.to_string())?);
    let event = *bad.tangency_frames.first().ok_or("zero-area trace has no double point")?;
    let failure = bad.failure.ok_or("zero-area trace verified")?;
    check(
        failure.kind == FailureKind::NotEmbedded && failure.frame == event,
        format!("zero-area trace failed with {failure:?}, event frame {event}"),
    )?;
    Ok(format!(
        "demo: {} frames verified, rot 1, margin {:.3}, tangency at frame {}; zero-area trace NOT_EMBEDDED at frame {event}",
        report.frames, report.margin, pass.frame
    ))
}

fn random_doc(rng: &mut ChaCha8Rng) -> Document {
    let mut doc = Document::default();
    let mut id = 0;
    let mut name = |prefix: &str| {
        id += 1;
        format!("{prefix}{id}")
    };
    let number = |rng: &mut ChaCha8Rng| -> f64 {
        match rng.gen_range(0..4) {
            0 => rng.gen_range(-10.0..10.0),
            1 => rng.gen_range(-1e-6..1e-6),
            2 => rng.gen_range(-1e12..1e12),
            _ => rng.gen_range(-20i32..20) as f64,
        }
    };
    let series = |rng: &mut ChaCha8Rng| {
        let terms = (0..rng.gen_range(1..6))
            .map(|_| {
                let basis = match rng.gen_range(0..3) {
                    0 => Basis::Const,
                    1 => Basis::Cos(rng.gen_range(1..=64)),
                    _ => Basis::Sin(rng.gen_range(1..=64)),
                };
                let coeff = if rng.gen_bool(0.2) { 1.0 } else { number(rng) };
                Term { coeff, basis }
            })
            .collect();
        TrigSeries::new(terms)
    };
    for _ in 0..rng.gen_range(0..4) {
        doc.generators.push(GeneratorDecl {
            name: name("g"),
            x: series(rng),
            y: series(rng),
        });
    }
    for _ in 0..rng.gen_range(0..3) {
        let moves = (0..rng.gen_range(0..5))
            .map(|_| {
                let kind = MoveKind::ALL[rng.gen_range(0..MoveKind::ALL.len())];
                let mut params = Vec::new();
                for k in ["at", "width", "frames", "ax", "target"] {
                    if rng.gen_bool(0.5) {
                        params.push((k.to_string(), number(rng)));
                    }
                }
                MoveDecl { kind, params }
            })
            .collect();
        doc.scripts.push(ScriptDecl { name: name("s"), moves });
    }
    doc
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for i in 0..1000 {
        let doc = random_doc(&mut rng);
        let text = frontlang::emit(&doc);
        match frontlang::parse(&text) {
            Ok(back) if back == doc => {}
            other => return Err(format!("document {i} did not round-trip: {other:?}\n{text}")),
        }
    }
    let seeds: Vec<String> = (0..20).map(|_| frontlang::emit(&random_doc(&mut rng))).collect();
    let alphabet: Vec<char> = "generatorscriptxycosin{}();:+-=.0123456789eE_# \n\tü@".chars().collect();
    let mut errors = 0;
    for i in 0..10_000 {
        let input: String = if i % 2 == 0 {
            (0..rng.gen_range(0..200)).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect()
        } else {
            let mut chars: Vec<char> = seeds[i % seeds.len()].chars().collect();
            for _ in 0..rng.gen_range(1..6) {
                if chars.is_empty() {
                    break;
                }
                let at = rng.gen_range(0..chars.len());
                match rng.gen_range(0..3) {
                    0 => {
                        chars.remove(at);
                    }
                    1 => chars.insert(at, alphabet[rng.gen_range(0..alphabet.len())]),
                    _ => chars.truncate(at),
                }
            }
            chars.into_iter().collect()
        };
        match std::panic::catch_unwind(|| frontlang::parse(&input)) {
            Ok(Ok(_)) => {}
            Ok(Err(_)) => errors += 1,
            Err(_) => return Err(format!("parser panicked on {input:?}")),
        }
    }
    Ok(format!("1000 random documents round-trip; 10000 fuzzed inputs terminate ({errors} rejected with diagnostics)"))
}

fn main() -> ExitCode {
    let mut models = Vec::new();
    let results = [
        ("1 model realization", criterion_1(&mut models)),
        ("2 rotation-number consistency", criterion_2()),
        ("3 lift correctness", criterion_3()),
        ("4 quadrature oracle", criterion_4()),
        ("5 embedding criterion", criterion_5(&models)),
        ("6 homotopy verification", criterion_6()),
        ("7 parser laws", criterion_7()),
    ];
    let mut failed = false;
    for (name, r) in &results {
        match r {
            Ok(msg) => println!("PASS criterion {name}: {msg}"),
            Err(msg) => {
                failed = true;
                println!("FAIL criterion {name}: {msg}");
            }
        }
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
