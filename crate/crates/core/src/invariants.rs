//! Rotation numbers: the winding of the velocity `(x', y')` and the cusp
//! count `(c_minus - c_plus) / 2` of the front.

use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::curves::{self, CuspOrientation, FrontDiagram, LegendrianGenerator, Tolerances};
use crate::error::{Error, Result};
use crate::spectral;

/// Pre-rounding winding values further than this from an integer are
/// reported as ambiguous.
const ROUNDING_GUARD: f64 = 1e-6;

fn wrapped(d: f64) -> f64 {
    let mut d = d.rem_euclid(TAU);
    if d > PI {
        d -= TAU;
    }
    d
}

/// Total turning of the sampled velocity and its largest single step.
fn turning(dx: &[f64], dy: &[f64]) -> (f64, f64) {
    let n = dx.len();
    let angles: Vec<f64> = dx.iter().zip(dy).map(|(x, y)| y.atan2(*x)).collect();
    let mut total = 0.0;
    let mut max_step: f64 = 0.0;
    for k in 0..n {
        let d = wrapped(angles[(k + 1) % n] - angles[k]);
        total += d;
        max_step = max_step.max(d.abs());
    }
    (total, max_step)
}

/// Winding number of `s ↦ (x'(s), y'(s))` around the origin.
///
/// Sample grids on which the angle jumps by `π/2` or more are refined
/// spectrally (twice, to 4N) before giving up.
pub fn rot_winding(g: &LegendrianGenerator) -> Result<i64> {
    let (mut total, mut max_step) = turning(g.x_prime(), g.y_prime());
    let mut m = g.len();
    for _ in 0..2 {
        if max_step < FRAC_PI_2 {
            break;
        }
        m *= 2;
        let dx = spectral::derivative(&spectral::resample(g.x(), m));
        let dy = spectral::derivative(&spectral::resample(g.y(), m));
        (total, max_step) = turning(&dx, &dy);
    }
    if max_step >= FRAC_PI_2 {
        return Err(Error::AmbiguousWinding { max_step });
    }
    let turns = total / TAU;
    if (turns - turns.round()).abs() > ROUNDING_GUARD {
        return Err(Error::AmbiguousWinding { max_step });
    }
    Ok(turns.round() as i64)
}

/// `(c_plus, c_minus)`: the number of cusps oriented up and down.
pub fn classify_cusps(f: &FrontDiagram) -> (i64, i64) {
    (
        f.count(CuspOrientation::Up) as i64,
        f.count(CuspOrientation::Down) as i64,
    )
}

fn half_imbalance(c_plus: i64, c_minus: i64) -> Result<i64> {
    let d = c_minus - c_plus;
    if d % 2 != 0 {
        return Err(Error::OddCuspImbalance { c_plus, c_minus });
    }
    Ok(d / 2)
}

/// `(c_minus - c_plus) / 2`.
pub fn rot_cusp(f: &FrontDiagram) -> Result<i64> {
    let (p, m) = classify_cusps(f);
    half_imbalance(p, m)
}

/// Cusp counts read off the generator alone. Unlike [`curves::front_of`]
/// this does not need `z` to close up.
pub fn cusp_counts(g: &LegendrianGenerator, tol: &Tolerances) -> Result<(i64, i64)> {
    let sites = curves::cusp_sites(g, tol)?;
    let up = sites.iter().filter(|c| c.orientation() == CuspOrientation::Up).count() as i64;
    Ok((up, sites.len() as i64 - up))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub rot_winding: i64,
    pub rot_cusp: i64,
    pub c_plus: i64,
    pub c_minus: i64,
}

/// Both rotation numbers of a generator.
pub fn invariant_report(g: &LegendrianGenerator, tol: &Tolerances) -> Result<InvariantReport> {
    let (c_plus, c_minus) = cusp_counts(g, tol)?;
    Ok(InvariantReport {
        rot_winding: rot_winding(g)?,
        rot_cusp: half_imbalance(c_plus, c_minus)?,
        c_plus,
        c_minus,
    })
}
