//! Integration of `z` and `w`, closure balancing, area integrals and the
//! embedding criterion for horizontal lifts.
//!
//! A front lifts to a closed horizontal curve when both `∮ y dx` and
//! `∮ z dx` vanish. The lift is embedded when, at every double point
//! `(s0, s1)` of the Legendrian curve, the area integral
//! `int_{s0}^{s1} z dx` separating the two branches in `w` is nonzero.

use serde::Serialize;

use crate::bumps;
use crate::curves::{self, HorizontalLoop, LegendrianGenerator, LegendrianLoop, Tolerances};
use crate::error::{Error, Result};
use crate::invariants;
use crate::scan;
use crate::spectral::{self, Periodic};

/// Half-widths tried for the balancing bumps, widest first. The widest
/// that fits two admissible supports is used.
pub const BUMP_HALF_WIDTHS: [f64; 3] = [0.08, 0.04, 0.02];

/// Candidate bump centers live on this fixed grid, independent of `N`.
const CENTER_GRID: usize = 128;

/// Balancing gives up when the 2x2 closure system is worse conditioned.
pub const MAX_CONDITION: f64 = 1e8;

/// Defects already below this are left alone.
pub const BALANCED: f64 = 1e-12;

impl AsRef<LegendrianLoop> for LegendrianLoop {
    fn as_ref(&self) -> &LegendrianLoop {
        self
    }
}

impl AsRef<LegendrianLoop> for HorizontalLoop {
    fn as_ref(&self) -> &LegendrianLoop {
        self.legendrian()
    }
}

fn y_dx(g: &LegendrianGenerator) -> Vec<f64> {
    g.y().iter().zip(g.x_prime()).map(|(y, dx)| y * dx).collect()
}

/// `∮ y dx = int_0^1 y x' ds` by the trapezoid rule.
pub fn z_closure_defect(g: &LegendrianGenerator) -> f64 {
    spectral::trapezoid(&y_dx(g))
}

/// `∮ z dx` of the Legendrian lift of `g` starting at `z0 = 0`.
pub fn w_closure_defect(g: &LegendrianGenerator) -> f64 {
    let l = LegendrianLoop::integrate(g.clone(), 0.0);
    spectral::trapezoid(&curves::z_dx(&l))
}

/// Horizontal lift with `z(0) = z0`, `w(0) = w0`. Fails unless `z` closes
/// up; a nonzero `∮ z dx` is recorded on the result.
pub fn lift(g: &LegendrianGenerator, z0: f64, w0: f64) -> Result<HorizontalLoop> {
    lift_with(g, z0, w0, &Tolerances::default())
}

pub fn lift_with(g: &LegendrianGenerator, z0: f64, w0: f64, tol: &Tolerances) -> Result<HorizontalLoop> {
    let l = LegendrianLoop::integrate(g.clone(), z0);
    if !l.is_closed(tol) {
        return Err(Error::ZNotClosed {
            defect: l.closure_defect_z(),
        });
    }
    Ok(HorizontalLoop::integrate(l, w0))
}

/// `int_{s0}^{s1} z x' ds` on the trigonometric interpolant of `z x'`.
pub fn area_integral(l: &impl AsRef<LegendrianLoop>, s0: f64, s1: f64) -> f64 {
    let p = Periodic::new(&curves::z_dx(l.as_ref()));
    p.integral_to(s1) - p.integral_to(s0)
}

/// Self-crossings of the projection `(x, y)` of the generator.
pub fn xy_crossings(g: &LegendrianGenerator) -> Vec<(f64, f64)> {
    let (xf, yf) = (g.x_fn(), g.y_fn());
    scan::crossings(g.x(), g.y(), |s| [xf.eval(s), yf.eval(s)], |s| [xf.deriv(s), yf.deriv(s)])
}

/// Double points of the Legendrian curve, i.e. self-tangencies of its front:
/// crossings of the `(x, y)` projection at which `z` agrees as well.
pub fn self_tangencies(l: &LegendrianLoop) -> Vec<(f64, f64)> {
    self_tangencies_with(l, &Tolerances::default())
}

pub fn self_tangencies_with(l: &LegendrianLoop, tol: &Tolerances) -> Vec<(f64, f64)> {
    let z = l.z_fn();
    xy_crossings(l.generator())
        .into_iter()
        .filter(|&(a, b)| (z.eval(a) - z.eval(b)).abs() <= tol.tangency)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DoublePoint {
    pub s0: f64,
    pub s1: f64,
    pub dw: f64,
}

/// Outcome of [`embedding_check`]. An infinite `margin` (serialized as
/// `null`) means the Legendrian curve has no double points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingReport {
    pub double_points: Vec<DoublePoint>,
    pub margin: f64,
    pub embedded: bool,
}

pub fn embedding_check(l: &HorizontalLoop) -> Result<EmbeddingReport> {
    embedding_check_with(l, &Tolerances::default())
}

pub fn embedding_check_with(l: &HorizontalLoop, tol: &Tolerances) -> Result<EmbeddingReport> {
    if !l.is_closed(tol) {
        return Err(Error::NotClosed {
            defect_z: l.legendrian().closure_defect_z(),
            defect_w: l.closure_defect_w(),
        });
    }
    let area = Periodic::new(&curves::z_dx(l.legendrian()));
    let double_points: Vec<DoublePoint> = self_tangencies_with(l.legendrian(), tol)
        .into_iter()
        .map(|(s0, s1)| DoublePoint {
            s0,
            s1,
            dw: area.integral_to(s1) - area.integral_to(s0),
        })
        .collect();
    let margin = double_points.iter().map(|d| d.dw.abs()).fold(f64::INFINITY, f64::min);
    Ok(EmbeddingReport {
        embedded: margin > tol.embed,
        double_points,
        margin,
    })
}

/// Placement of the two balancing bumps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpPair {
    pub centers: [f64; 2],
    pub half_width: f64,
}

/// A balanced generator together with the correction that produced it:
/// `y ← y + a φ(s - c0) + b φ(s - c1)`.
#[derive(Debug, Clone)]
pub struct Balanced {
    pub generator: LegendrianGenerator,
    pub coefficients: [f64; 2],
    pub bumps: Option<BumpPair>,
    pub condition: f64,
}

fn bump_samples(n: usize, c: f64, h: f64) -> Vec<f64> {
    spectral::grid(n).into_iter().map(|s| bumps::bump(s, c, h)).collect()
}

/// Effect of a unit bump on `(∮ y dx, ∮ z dx)`.
fn column(g: &LegendrianGenerator, c: f64, h: f64) -> [f64; 2] {
    let phi_dx: Vec<f64> = bump_samples(g.len(), c, h)
        .iter()
        .zip(g.x_prime())
        .map(|(p, dx)| p * dx)
        .collect();
    let z = spectral::cumulative(&phi_dx);
    let z_dx: Vec<f64> = z.iter().zip(g.x_prime()).map(|(z, dx)| z * dx).collect();
    [spectral::trapezoid(&phi_dx), spectral::trapezoid(&z_dx)]
}

fn singular_values(m: [[f64; 2]; 2]) -> (f64, f64) {
    let [[a, b], [c, d]] = m;
    let s1 = a * a + b * b + c * c + d * d;
    let det = a * d - b * c;
    let disc = (s1 * s1 - 4.0 * det * det).max(0.0).sqrt();
    let big = (0.5 * (s1 + disc)).sqrt();
    let small = if big > 0.0 { det.abs() / big } else { 0.0 };
    (big, small)
}

fn condition(m: [[f64; 2]; 2]) -> f64 {
    let (big, small) = singular_values(m);
    if small == 0.0 {
        f64::INFINITY
    } else {
        big / small
    }
}

/// Bump supports are admissible where `|x'|` stays above half its maximum,
/// so the correction in `y` cannot stop the velocity or change its winding.
/// The 80th percentile of `|x'|`. Unlike the maximum it ignores the short
/// spikes of `x'` left behind by swallowtails.
fn speed_scale(dx: &[f64]) -> f64 {
    let mut v: Vec<f64> = dx.iter().map(|d| d.abs()).collect();
    let k = (v.len() * 4 / 5).min(v.len().saturating_sub(1));
    *v.select_nth_unstable_by(k, f64::total_cmp).1
}

fn admissible(g: &LegendrianGenerator, c: f64, h: f64, avoid: &[(f64, f64)]) -> bool {
    if avoid
        .iter()
        .any(|&(center, half)| bumps::circular_distance(c, center) < half + h)
    {
        return false;
    }
    let dx = g.x_prime();
    let threshold = 0.5 * speed_scale(dx);
    g.params()
        .iter()
        .zip(dx)
        .filter(|(s, _)| bumps::circular_distance(**s, c) <= h)
        .all(|(_, d)| d.abs() >= threshold)
}

/// Whether both supports of `pair` are still admissible for `g`.
pub fn bumps_admissible(g: &LegendrianGenerator, pair: &BumpPair, avoid: &[(f64, f64)]) -> bool {
    pair.centers.iter().all(|&c| admissible(g, c, pair.half_width, avoid))
}

/// Choose admissible bump supports with the best conditioned closure
/// system, skipping the intervals `(center, half_width)` in `avoid`.
pub fn choose_bumps(g: &LegendrianGenerator, avoid: &[(f64, f64)]) -> Result<BumpPair> {
    for &h in &BUMP_HALF_WIDTHS {
        let candidates: Vec<(f64, [f64; 2])> = (0..CENTER_GRID)
            .map(|i| i as f64 / CENTER_GRID as f64)
            .filter(|&c| admissible(g, c, h, avoid))
            .map(|c| (c, column(g, c, h)))
            .collect();
        let mut best: Option<(f64, [f64; 2])> = None;
        for (i, (ci, a)) in candidates.iter().enumerate() {
            for (cj, b) in &candidates[i + 1..] {
                if bumps::circular_distance(*ci, *cj) < 2.0 * h {
                    continue;
                }
                let k = condition([[a[0], b[0]], [a[1], b[1]]]);
                if best.is_none_or(|(bk, _)| k < bk * (1.0 - 1e-6)) {
                    best = Some((k, [*ci, *cj]));
                }
            }
        }
        if let Some((k, centers)) = best {
            if k <= MAX_CONDITION {
                return Ok(BumpPair { centers, half_width: h });
            }
        }
    }
    Err(Error::SingularSystem {
        condition: f64::INFINITY,
    })
}

/// Make both `∮ y dx` and `∮ z dx` vanish by adding two bumps to `y`.
pub fn balance_closure(g: &LegendrianGenerator) -> Result<LegendrianGenerator> {
    balance_closure_report(g).map(|b| b.generator)
}

pub fn balance_closure_report(g: &LegendrianGenerator) -> Result<Balanced> {
    if is_balanced(g) {
        return Ok(unchanged(g, None));
    }
    let pair = choose_bumps(g, &[])?;
    balance_closure_at(g, pair)
}

fn is_balanced(g: &LegendrianGenerator) -> bool {
    z_closure_defect(g).abs() <= BALANCED && w_closure_defect(g).abs() <= BALANCED
}

fn unchanged(g: &LegendrianGenerator, bumps: Option<BumpPair>) -> Balanced {
    Balanced {
        generator: g.clone(),
        coefficients: [0.0, 0.0],
        bumps,
        condition: f64::NAN,
    }
}

/// Balance with caller-chosen bumps.
pub fn balance_closure_at(g: &LegendrianGenerator, pair: BumpPair) -> Result<Balanced> {
    if is_balanced(g) {
        return Ok(unchanged(g, Some(pair)));
    }
    let h = pair.half_width;
    let a = column(g, pair.centers[0], h);
    let b = column(g, pair.centers[1], h);
    let m = [[a[0], b[0]], [a[1], b[1]]];
    let (big, _) = singular_values(m);
    let kappa = condition(m);
    let max_dx = g.x_prime().iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if kappa > MAX_CONDITION || big <= 1e-8 * max_dx * h {
        return Err(Error::SingularSystem { condition: kappa });
    }
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let solve = |r: [f64; 2]| {
        [
            (r[0] * m[1][1] - m[0][1] * r[1]) / det,
            (m[0][0] * r[1] - m[1][0] * r[0]) / det,
        ]
    };
    let phi0 = bump_samples(g.len(), pair.centers[0], h);
    let phi1 = bump_samples(g.len(), pair.centers[1], h);
    let apply = |coef: [f64; 2]| -> Vec<f64> {
        g.y()
            .iter()
            .enumerate()
            .map(|(k, y)| y + coef[0] * phi0[k] + coef[1] * phi1[k])
            .collect()
    };
    let mut coef = solve([-z_closure_defect(g), -w_closure_defect(g)]);
    // iterative refinement on the re-evaluated defects
    for _ in 0..2 {
        let trial = LegendrianGenerator::from_samples_unchecked(g.x().to_vec(), apply(coef));
        let r = [z_closure_defect(&trial), w_closure_defect(&trial)];
        if r[0].abs() <= BALANCED && r[1].abs() <= BALANCED {
            break;
        }
        let d = solve([-r[0], -r[1]]);
        coef = [coef[0] + d[0], coef[1] + d[1]];
    }
    let generator = match g.with_y(apply(coef)) {
        Ok(out) => out,
        Err(Error::NotImmersed(_)) => return Err(Error::ImmersionLost { frame: None }),
        Err(e) => return Err(e),
    };
    if let (Ok(before), Ok(after)) = (invariants::rot_winding(g), invariants::rot_winding(&generator)) {
        if before != after {
            return Err(Error::ImmersionLost { frame: None });
        }
    }
    Ok(Balanced {
        generator,
        coefficients: coef,
        bumps: Some(pair),
        condition: kappa,
    })
}
