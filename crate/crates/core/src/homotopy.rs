//! Scripted homotopies of fronts and their certification.
//!
//! Every move is a one-parameter family `g + a(t) (δx, δy)` of generators
//! with a fixed perturbation direction, sampled at `t_j = j/K`. Each frame
//! is balanced with a pair of bumps that stays fixed for the whole move,
//! so the balanced frames depend smoothly on `t` as well. Swallowtails and
//! tangency passes put their event at the middle frame `j = K/2`.

use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::TAU;

use crate::bumps;
use crate::curves::{HorizontalLoop, LegendrianGenerator, LegendrianLoop, Tolerances};
use crate::error::{Error, Result};
use crate::invariants;
use crate::lifting::{self, BumpPair, EmbeddingReport};

/// Frames per move unless the script says otherwise.
pub const DEFAULT_FRAMES: usize = 64;

/// Default support half-widths of the local moves.
pub const SWALLOWTAIL_WIDTH: f64 = 0.05;
pub const TANGENCY_WIDTH: f64 = 0.1;

/// Balancing bumps keep this far from the far strand of a tangency pass.
const CROSSING_CLEARANCE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveKind {
    Deform,
    SwallowtailBirth,
    SwallowtailDeath,
    TangencyPass,
    Balance,
}

impl MoveKind {
    pub const ALL: [MoveKind; 5] = [
        MoveKind::Deform,
        MoveKind::SwallowtailBirth,
        MoveKind::SwallowtailDeath,
        MoveKind::TangencyPass,
        MoveKind::Balance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MoveKind::Deform => "deform",
            MoveKind::SwallowtailBirth => "swallowtail_birth",
            MoveKind::SwallowtailDeath => "swallowtail_death",
            MoveKind::TangencyPass => "tangency_pass",
            MoveKind::Balance => "balance",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Whether the move passes through a codimension-one event.
    pub fn has_event(self) -> bool {
        matches!(
            self,
            MoveKind::SwallowtailBirth | MoveKind::SwallowtailDeath | MoveKind::TangencyPass
        )
    }
}

/// Direction of a [`Move::Deform`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Deformation {
    /// `x += t (ax cos 2πks + bx sin 2πks)`, likewise for `y`.
    Harmonic { k: u32, ax: f64, bx: f64, ay: f64, by: f64 },
    /// `(x, y) += t (dx, dy) φ(s)` with a mollifier bump `φ`.
    Bump { at: f64, width: f64, dx: f64, dy: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Move {
    Deform { shape: Deformation, frames: usize },
    /// Create a pair of cusps on `|s - at| < width`.
    SwallowtailBirth { at: f64, width: f64, frames: usize },
    /// Remove the pair of cusps on `|s - at| < width`.
    SwallowtailDeath { at: f64, width: f64, frames: usize },
    /// Shift `z` on the core `|s - at| <= width/2` until the strand passes
    /// through a self-tangency with the strand near `target`.
    TangencyPass {
        at: f64,
        width: f64,
        target: Option<f64>,
        frames: usize,
    },
    /// Rebalance with freshly chosen bumps.
    Balance,
}

fn take(params: &mut Vec<(String, f64)>, key: &str) -> Option<f64> {
    let i = params.iter().position(|(k, _)| k == key)?;
    Some(params.remove(i).1)
}

fn frames_param(params: &mut Vec<(String, f64)>, default: usize, even: bool) -> Result<usize> {
    let Some(v) = take(params, "frames") else {
        return Ok(default);
    };
    if v.fract() != 0.0 || !(1.0..=1e6).contains(&v) {
        return Err(Error::InvalidMove(format!("frames must be a positive integer, got {v}")));
    }
    let k = v as usize;
    if even && k % 2 == 1 {
        return Err(Error::InvalidMove(format!("frames must be even for moves with an event, got {k}")));
    }
    Ok(k)
}

fn param_at(params: &mut Vec<(String, f64)>) -> Result<f64> {
    let at = take(params, "at").ok_or_else(|| Error::InvalidMove("missing parameter `at`".into()))?;
    Ok(at.rem_euclid(1.0))
}

fn param_width(params: &mut Vec<(String, f64)>, default: f64) -> Result<f64> {
    let w = take(params, "width").unwrap_or(default);
    if !(w > 0.0 && w <= 0.25) {
        return Err(Error::InvalidMove(format!("width must lie in (0, 0.25], got {w}")));
    }
    Ok(w)
}

impl Move {
    /// Build a move from its script name and `key=value` parameters.
    pub fn from_params(kind: &str, params: &[(String, f64)], default_frames: usize) -> Result<Move> {
        let kind = MoveKind::from_name(kind).ok_or_else(|| Error::InvalidMove(format!("unknown move kind `{kind}`")))?;
        let mut p = params.to_vec();
        if let Some((k, _)) = p.iter().find(|(k, v)| !v.is_finite() && !k.is_empty()) {
            return Err(Error::InvalidMove(format!("parameter `{k}` is not finite")));
        }
        let mv = match kind {
            MoveKind::Deform => {
                let frames = frames_param(&mut p, default_frames, false)?;
                let shape = if let Some(k) = take(&mut p, "harmonic") {
                    if k.fract() != 0.0 || !(1.0..=64.0).contains(&k) {
                        return Err(Error::InvalidMove(format!("harmonic must be an integer in 1..=64, got {k}")));
                    }
                    Deformation::Harmonic {
                        k: k as u32,
                        ax: take(&mut p, "ax").unwrap_or(0.0),
                        bx: take(&mut p, "bx").unwrap_or(0.0),
                        ay: take(&mut p, "ay").unwrap_or(0.0),
                        by: take(&mut p, "by").unwrap_or(0.0),
                    }
                } else {
                    Deformation::Bump {
                        at: param_at(&mut p)?,
                        width: param_width(&mut p, SWALLOWTAIL_WIDTH)?,
                        dx: take(&mut p, "dx").unwrap_or(0.0),
                        dy: take(&mut p, "dy").unwrap_or(0.0),
                    }
                };
                Move::Deform { shape, frames }
            }
            MoveKind::SwallowtailBirth | MoveKind::SwallowtailDeath => {
                let frames = frames_param(&mut p, default_frames, true)?;
                let at = param_at(&mut p)?;
                let width = param_width(&mut p, SWALLOWTAIL_WIDTH)?;
                if kind == MoveKind::SwallowtailBirth {
                    Move::SwallowtailBirth { at, width, frames }
                } else {
                    Move::SwallowtailDeath { at, width, frames }
                }
            }
            MoveKind::TangencyPass => Move::TangencyPass {
                frames: frames_param(&mut p, default_frames, true)?,
                at: param_at(&mut p)?,
                width: param_width(&mut p, TANGENCY_WIDTH)?,
                target: take(&mut p, "target").map(|t| t.rem_euclid(1.0)),
            },
            MoveKind::Balance => Move::Balance,
        };
        if let Some((k, _)) = p.first() {
            return Err(Error::InvalidMove(format!("unknown parameter `{k}` for {}", kind.name())));
        }
        Ok(mv)
    }

    pub fn kind(&self) -> MoveKind {
        match self {
            Move::Deform { .. } => MoveKind::Deform,
            Move::SwallowtailBirth { .. } => MoveKind::SwallowtailBirth,
            Move::SwallowtailDeath { .. } => MoveKind::SwallowtailDeath,
            Move::TangencyPass { .. } => MoveKind::TangencyPass,
            Move::Balance => MoveKind::Balance,
        }
    }

    pub fn frames(&self) -> usize {
        match *self {
            Move::Deform { frames, .. }
            | Move::SwallowtailBirth { frames, .. }
            | Move::SwallowtailDeath { frames, .. }
            | Move::TangencyPass { frames, .. } => frames,
            Move::Balance => 1,
        }
    }

    /// Local frame index `j` (1-based) of the event, if the move has one.
    pub fn event_frame(&self) -> Option<usize> {
        self.kind().has_event().then(|| self.frames() / 2)
    }

    fn support(&self) -> Option<(f64, f64)> {
        match *self {
            Move::Deform {
                shape: Deformation::Bump { at, width, .. },
                ..
            }
            | Move::SwallowtailBirth { at, width, .. }
            | Move::SwallowtailDeath { at, width, .. }
            | Move::TangencyPass { at, width, .. } => Some((at, width)),
            _ => None,
        }
    }
}

/// The affine family `g + amplitude(t) * (dx, dy)` realizing a move.
struct Family {
    base: LegendrianGenerator,
    dx: Vec<f64>,
    dy: Vec<f64>,
    /// amplitude at `t = 1`; the schedule is linear in `t`
    amplitude: f64,
    pair: Option<BumpPair>,
    avoid: Vec<(f64, f64)>,
}

impl Family {
    fn raw(&self, a: f64) -> LegendrianGenerator {
        let g = &self.base;
        let x = g.x().iter().zip(&self.dx).map(|(x, d)| x + a * d).collect();
        let y = g.y().iter().zip(&self.dy).map(|(y, d)| y + a * d).collect();
        LegendrianGenerator::from_samples_unchecked(x, y)
    }
}

fn support_samples(g: &LegendrianGenerator, at: f64, width: f64) -> Vec<usize> {
    g.params()
        .iter()
        .enumerate()
        .filter(|(_, s)| bumps::circular_distance(**s, at) < width)
        .map(|(k, _)| k)
        .collect()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, b| a.max(b.abs()))
}

/// Sign of `x'` on the support, or an error if `x'` vanishes there.
fn root_free_sign(g: &LegendrianGenerator, idx: &[usize], floor: f64, what: &str) -> Result<f64> {
    let dx = g.x_prime();
    let first = dx[idx[0]].signum();
    if idx.iter().any(|&k| dx[k].signum() != first || dx[k].abs() < floor) {
        return Err(Error::UnsupportedOverlap(format!("{what}: x' vanishes on the support (an existing cusp)")));
    }
    Ok(first)
}

fn check_y_floor(g: &LegendrianGenerator, idx: &[usize], tol: &Tolerances) -> Result<()> {
    let dy = g.y_prime();
    let floor = tol.y_prime_floor.max(1e-3 * max_abs(dy));
    let first = dy[idx[0]].signum();
    if idx.iter().any(|&k| dy[k].signum() != first || dy[k].abs() < floor) {
        return Err(Error::UnsupportedOverlap("y' is too small on the support to carry new cusps".into()));
    }
    Ok(())
}

fn deform_direction(g: &LegendrianGenerator, shape: &Deformation) -> (Vec<f64>, Vec<f64>) {
    let s = g.params();
    match *shape {
        Deformation::Harmonic { k, ax, bx, ay, by } => {
            let w = TAU * k as f64;
            (
                s.iter().map(|s| ax * (w * s).cos() + bx * (w * s).sin()).collect(),
                s.iter().map(|s| ay * (w * s).cos() + by * (w * s).sin()).collect(),
            )
        }
        Deformation::Bump { at, width, dx, dy } => (
            s.iter().map(|s| dx * bumps::bump(*s, at, width)).collect(),
            s.iter().map(|s| dy * bumps::bump(*s, at, width)).collect(),
        ),
    }
}

fn birth_family(g: &LegendrianGenerator, at: f64, width: f64, tol: &Tolerances) -> Result<(Vec<f64>, f64)> {
    let idx = support_samples(g, at, width);
    let sigma = root_free_sign(g, &idx, 0.0, "swallowtail birth")?;
    check_y_floor(g, &idx, tol)?;
    let s = g.params();
    let dx = g.x_prime();
    // x' - A σ ψ first touches zero at A = min |x'| / ψ over ψ > 0
    let a_star = idx
        .iter()
        .filter_map(|&k| {
            let psi = bumps::odd_bump_prime(s[k], at, width);
            (psi > 0.0).then(|| dx[k].abs() / psi)
        })
        .fold(f64::INFINITY, f64::min);
    let dir = s.iter().map(|s| -sigma * bumps::odd_bump(*s, at, width)).collect();
    Ok((dir, 2.0 * a_star))
}

fn death_family(g: &LegendrianGenerator, at: f64, width: f64, tol: &Tolerances) -> Result<(Vec<f64>, f64)> {
    let idx = support_samples(g, at, width);
    let dx = g.x_prime();
    let changes = idx.windows(2).filter(|w| (dx[w[0]] >= 0.0) != (dx[w[1]] >= 0.0)).count();
    if changes != 2 {
        return Err(Error::UnsupportedOverlap(format!(
            "swallowtail death needs exactly two cusps on the support, found {changes}"
        )));
    }
    check_y_floor(g, &idx, tol)?;
    let sigma = dx[idx[0]].signum();
    let s = g.params();
    let mut a_star: f64 = 0.0;
    for &k in &idx {
        if sigma * dx[k] < 0.0 {
            let psi = bumps::odd_bump_prime(s[k], at, width);
            if psi <= 0.0 {
                return Err(Error::UnsupportedOverlap(
                    "cusp pair is too close to the edge of the support".into(),
                ));
            }
            a_star = a_star.max(-sigma * dx[k] / psi);
        }
    }
    let amplitude = 2.0 * a_star;
    if idx
        .iter()
        .any(|&k| sigma * dx[k] + amplitude * bumps::odd_bump_prime(s[k], at, width) <= 0.0)
    {
        return Err(Error::UnsupportedOverlap(
            "removing the cusp pair creates new cusps; widen the support".into(),
        ));
    }
    let dir = s.iter().map(|s| sigma * bumps::odd_bump(*s, at, width)).collect();
    Ok((dir, amplitude))
}

/// Direction in `y` that shifts `z` by `plateau(s)` on the support.
fn pass_direction(g: &LegendrianGenerator, at: f64, width: f64) -> Result<Vec<f64>> {
    let idx = support_samples(g, at, width);
    root_free_sign(g, &idx, 0.05 * max_abs(g.x_prime()), "tangency pass")?;
    let s = g.params();
    let dx = g.x_prime();
    Ok((0..g.len())
        .map(|k| {
            let b = bumps::plateau_prime(s[k], at, width);
            if b == 0.0 {
                0.0
            } else {
                b / dx[k]
            }
        })
        .collect())
}

fn balanced_at(raw: &LegendrianGenerator, pair: Option<BumpPair>) -> Result<LegendrianGenerator> {
    match pair {
        Some(p) => lifting::balance_closure_at(raw, p).map(|b| b.generator),
        None => lifting::balance_closure(raw),
    }
}

/// `z(s_a) - z(s_b)` after balancing the frame with amplitude `a`.
fn gap(fam: &Family, a: f64, sa: f64, sb: f64) -> Result<f64> {
    let g = balanced_at(&fam.raw(a), fam.pair)?;
    let l = LegendrianLoop::integrate(g, 0.0);
    Ok(l.z_fn().eval(sa) - l.z_fn().eval(sb))
}

fn pass_family(
    g: &LegendrianGenerator,
    at: f64,
    width: f64,
    target: Option<f64>,
    avoid: &mut Vec<(f64, f64)>,
) -> Result<Family> {
    let dy = pass_direction(g, at, width)?;
    let mut candidates = Vec::new();
    for (s0, s1) in lifting::xy_crossings(g) {
        let u0 = bumps::circular_distance(s0, at) / width;
        let u1 = bumps::circular_distance(s1, at) / width;
        if u0 <= 0.5 && u1 >= 1.0 {
            candidates.push((s0, s1));
        } else if u1 <= 0.5 && u0 >= 1.0 {
            candidates.push((s1, s0));
        }
    }
    if let Some(t) = target {
        candidates.retain(|&(_, sb)| bumps::circular_distance(sb, t) < width);
    }
    if candidates.is_empty() {
        return Err(Error::UnsupportedOverlap(
            "tangency pass needs a crossing with one strand in the core and the other outside the support".into(),
        ));
    }
    let mut best: Option<(f64, Family)> = None;
    for (sa, sb) in candidates {
        let mut av = avoid.clone();
        av.push((sb, CROSSING_CLEARANCE));
        let pair = lifting::choose_bumps(g, &av)?;
        let mut fam = Family {
            base: g.clone(),
            dx: vec![0.0; g.len()],
            dy: dy.clone(),
            amplitude: 0.0,
            pair: Some(pair),
            avoid: av,
        };
        // the gap is affine in the amplitude once the bumps are fixed
        let g0 = gap(&fam, 0.0, sa, sb)?;
        let g1 = gap(&fam, 1.0, sa, sb)?;
        if g1 == g0 {
            continue;
        }
        let delta = -g0 / (g1 - g0);
        fam.amplitude = 2.0 * delta;
        if best.as_ref().is_none_or(|(d, _)| delta.abs() < d.abs()) {
            best = Some((delta, fam));
        }
    }
    let (_, fam) = best.ok_or_else(|| Error::UnsupportedOverlap("tangency pass has no usable crossing".into()))?;
    *avoid = fam.avoid.clone();
    Ok(fam)
}

fn family(g: &LegendrianGenerator, m: &Move, tol: &Tolerances) -> Result<Family> {
    let mut avoid: Vec<(f64, f64)> = m.support().into_iter().collect();
    let zeros = || vec![0.0; g.len()];
    let (dx, dy, amplitude) = match m {
        Move::Deform { shape, .. } => {
            let (dx, dy) = deform_direction(g, shape);
            (dx, dy, 1.0)
        }
        Move::SwallowtailBirth { at, width, .. } => {
            let (dx, a) = birth_family(g, *at, *width, tol)?;
            (dx, zeros(), a)
        }
        Move::SwallowtailDeath { at, width, .. } => {
            let (dx, a) = death_family(g, *at, *width, tol)?;
            (dx, zeros(), a)
        }
        Move::TangencyPass { at, width, target, .. } => return pass_family(g, *at, *width, *target, &mut avoid),
        Move::Balance => (zeros(), zeros(), 0.0),
    };
    let pair = match m {
        Move::Balance => None,
        _ => Some(lifting::choose_bumps(g, &avoid)?),
    };
    Ok(Family {
        base: g.clone(),
        dx,
        dy,
        amplitude,
        pair,
        avoid,
    })
}

/// Frames `t_j = j/K`, `j = 1..=K`, of the move applied to `g`, each one
/// balanced. Errors carry the local frame index.
pub fn apply_move(g: &LegendrianGenerator, m: &Move) -> Result<Vec<LegendrianGenerator>> {
    apply_move_with(g, m, &Tolerances::default())
}

pub fn apply_move_with(g: &LegendrianGenerator, m: &Move, tol: &Tolerances) -> Result<Vec<LegendrianGenerator>> {
    let mut fam = family(g, m, tol)?;
    let k = m.frames();
    let mut out = Vec::with_capacity(k);
    for j in 1..=k {
        let t = j as f64 / k as f64;
        let raw = fam.raw(t * fam.amplitude);
        let at_frame = |e: Error| match e {
            Error::ImmersionLost { .. } | Error::NotImmersed(_) => Error::ImmersionLost { frame: Some(j) },
            other => other,
        };
        if let Some(p) = fam.pair {
            if !lifting::bumps_admissible(&raw, &p, &fam.avoid) {
                fam.pair = Some(lifting::choose_bumps(&raw, &fam.avoid)?);
            }
        }
        let raw = LegendrianGenerator::from_samples(raw.x().to_vec(), raw.y().to_vec()).map_err(at_frame)?;
        out.push(balanced_at(&raw, fam.pair).map_err(at_frame)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Event {
    pub frame: usize,
    pub t: f64,
    pub kind: MoveKind,
}

/// Time-indexed frames of a homotopy with its declared events.
#[derive(Debug, Clone)]
pub struct HomotopyTrace {
    pub frames: Vec<HorizontalLoop>,
    pub times: Vec<f64>,
    pub events: Vec<Event>,
}

fn frame_times(n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![0.0; n];
    }
    (0..n).map(|j| j as f64 / (n - 1) as f64).collect()
}

impl HomotopyTrace {
    /// A trace of the given frames at evenly spaced times, without events.
    pub fn from_frames(frames: Vec<HorizontalLoop>) -> Self {
        HomotopyTrace {
            times: frame_times(frames.len()),
            frames,
            events: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }
}

/// Run a script from `g0`. Frame 0 is the balanced lift of `g0`.
pub fn run_script(g0: &LegendrianGenerator, script: &[Move]) -> Result<HomotopyTrace> {
    run_script_with(g0, script, &Tolerances::default())
}

pub fn run_script_with(g0: &LegendrianGenerator, script: &[Move], tol: &Tolerances) -> Result<HomotopyTrace> {
    let first = lifting::balance_closure(g0)?;
    let mut gens = vec![first];
    let mut events = Vec::new();
    for m in script {
        let offset = gens.len() - 1;
        let current = gens.last().expect("trace starts with a frame").clone();
        let frames = apply_move_with(&current, m, tol).map_err(|e| match e {
            Error::ImmersionLost { frame: Some(j) } => Error::ImmersionLost { frame: Some(offset + j) },
            other => other,
        })?;
        if let Some(j) = m.event_frame() {
            events.push((offset + j, m.kind()));
        }
        gens.extend(frames);
    }
    let frames = gens
        .into_par_iter()
        .map(|g| lifting::lift_with(&g, 0.0, 0.0, tol))
        .collect::<Result<Vec<_>>>()?;
    let times = frame_times(frames.len());
    let events = events
        .into_iter()
        .map(|(frame, kind)| Event {
            frame,
            t: times[frame],
            kind,
        })
        .collect();
    Ok(HomotopyTrace { frames, times, events })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FailureKind {
    NotClosed,
    NotEmbedded,
    RotChanged,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub kind: FailureKind,
    pub frame: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameReport {
    pub frame: usize,
    pub t: f64,
    pub defect_z: f64,
    pub defect_w: f64,
    pub closed: bool,
    pub rot_winding: Option<i64>,
    pub embedding: Option<EmbeddingReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameDoublePoint {
    pub frame: usize,
    pub s0: f64,
    pub s1: f64,
    pub dw: f64,
}

/// Certificate for a whole trace. `margin` is the smallest `|Δw|` over all
/// frames (`null` if no frame has a Legendrian double point).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub double_points: Vec<FrameDoublePoint>,
    pub margin: f64,
    pub embedded: bool,
    pub rot_constant: bool,
    pub rot: Option<i64>,
    pub frames: usize,
    pub events: Vec<Event>,
    /// Frames at which a Legendrian double point was observed.
    pub tangency_frames: Vec<usize>,
    pub verified: bool,
    pub failure: Option<Failure>,
    pub per_frame: Vec<FrameReport>,
}

fn frame_report(j: usize, t: f64, l: &HorizontalLoop, tol: &Tolerances) -> FrameReport {
    let closed = l.is_closed(tol);
    FrameReport {
        frame: j,
        t,
        defect_z: l.legendrian().closure_defect_z(),
        defect_w: l.closure_defect_w(),
        closed,
        rot_winding: invariants::rot_winding(l.generator()).ok(),
        embedding: if closed {
            lifting::embedding_check_with(l, tol).ok()
        } else {
            None
        },
    }
}

/// Check closure, embedding and constant rotation number on every frame.
pub fn verify_isotopy(trace: &HomotopyTrace) -> VerificationReport {
    verify_isotopy_with(trace, &Tolerances::default())
}

pub fn verify_isotopy_with(trace: &HomotopyTrace, tol: &Tolerances) -> VerificationReport {
    let per_frame: Vec<FrameReport> = trace
        .frames
        .par_iter()
        .enumerate()
        .map(|(j, l)| frame_report(j, trace.times.get(j).copied().unwrap_or(0.0), l, tol))
        .collect();
    let rot = per_frame.first().and_then(|f| f.rot_winding);
    let mut failure = None;
    for f in &per_frame {
        let kind = if !f.closed {
            Some(FailureKind::NotClosed)
        } else if !f.embedding.as_ref().is_some_and(|e| e.embedded) {
            Some(FailureKind::NotEmbedded)
        } else if f.rot_winding.is_none() || f.rot_winding != rot {
            Some(FailureKind::RotChanged)
        } else {
            None
        };
        if let Some(kind) = kind {
            failure = Some(Failure { kind, frame: f.frame });
            break;
        }
    }
    let double_points: Vec<FrameDoublePoint> = per_frame
        .iter()
        .filter_map(|f| f.embedding.as_ref().map(|e| (f.frame, e)))
        .flat_map(|(frame, e)| {
            e.double_points.iter().map(move |d| FrameDoublePoint {
                frame,
                s0: d.s0,
                s1: d.s1,
                dw: d.dw,
            })
        })
        .collect();
    let tangency_frames = per_frame
        .iter()
        .filter(|f| f.embedding.as_ref().is_some_and(|e| !e.double_points.is_empty()))
        .map(|f| f.frame)
        .collect();
    let margin = double_points.iter().map(|d| d.dw.abs()).fold(f64::INFINITY, f64::min);
    VerificationReport {
        embedded: per_frame.iter().all(|f| f.embedding.as_ref().is_some_and(|e| e.embedded)),
        rot_constant: rot.is_some() && per_frame.iter().all(|f| f.rot_winding == rot),
        rot,
        frames: per_frame.len(),
        events: trace.events.clone(),
        verified: failure.is_none() && !per_frame.is_empty(),
        failure,
        tangency_frames,
        double_points,
        margin,
        per_frame,
    }
}
