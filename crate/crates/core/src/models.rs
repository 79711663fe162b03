//! Closed embedded horizontal loops of every rotation number.
//!
//! Base curves are written as complex trigonometric polynomials
//! `c(t) = Σ a_k e^{ikt}`, `t = 2πs`, with `x + iy = c`. Their signed area
//! `∮ y dx = -π Σ k |a_k|^2` vanishes by choice of coefficients, so only a
//! small balancing correction is needed after the seeded perturbation.
//!
//! * `|n| ≥ 2`: `e^{int} + √n e^{-it}` (mirrored for negative `n`).
//! * `n = ±1`: `e^{-it} - β e^{it} + γ e^{3it}` with six cusps.
//! * `n = 0`: four modes with two cusps of each orientation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

use crate::curves::{HorizontalLoop, LegendrianGenerator, Tolerances};
use crate::error::{Error, Result};
use crate::invariants;
use crate::lifting;

/// Largest `|n|` accepted by [`model_front`].
pub const MAX_ROT: i64 = 64;

/// Seed used by [`figure1`], [`figure2`] and the CLI default.
pub const DEFAULT_SEED: u64 = 7;

/// Knobs of the synthesis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelConfig {
    pub samples: usize,
    pub tol: Tolerances,
    pub retries: usize,
    /// Amplitude of the seeded perturbation, per Fourier coefficient.
    pub jitter: f64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            samples: 4096,
            tol: Tolerances::default(),
            retries: 16,
            jitter: 0.03,
        }
    }
}

/// Complex Fourier modes `(k, re, im)` of the base curve, scaled so that
/// the largest mode has modulus one.
fn base_modes(n: i64) -> Vec<(i64, f64, f64)> {
    let m = n.abs();
    let mut modes = match m {
        0 => {
            let neg = [(-2, 0.467, -0.3), (-1, -0.971, -0.237)];
            let pos = [(1, 0.327, -0.937), (2, 0.487, -0.281)];
            let weight = |v: &[(i64, f64, f64)]| v.iter().map(|(k, a, b)| (*k as f64) * (a * a + b * b)).sum::<f64>();
            let lambda = (weight(&pos) / -weight(&neg)).sqrt();
            neg.iter()
                .map(|&(k, a, b)| (k, lambda * a, lambda * b))
                .chain(pos)
                .collect()
        }
        1 => {
            let gamma: f64 = 0.33;
            let beta = (1.0 - 3.0 * gamma * gamma).sqrt();
            vec![(-1, 1.0, 0.0), (1, -beta, 0.0), (3, gamma, 0.0)]
        }
        _ => vec![(m, 1.0, 0.0), (-1, (m as f64).sqrt(), 0.0)],
    };
    let top = modes.iter().map(|(_, a, b)| a.hypot(*b)).fold(0.0, f64::max);
    for mode in &mut modes {
        mode.1 /= top;
        mode.2 /= top;
    }
    if n < 0 {
        // y ↦ -y conjugates c, which maps the mode k to -k
        for mode in &mut modes {
            *mode = (-mode.0, mode.1, -mode.2);
        }
    }
    modes
}

fn eval_modes(modes: &[(i64, f64, f64)], s: f64) -> (f64, f64) {
    modes.iter().fold((0.0, 0.0), |(x, y), &(k, a, b)| {
        let (sin, cos) = (TAU * k as f64 * s).sin_cos();
        (x + a * cos - b * sin, y + a * sin + b * cos)
    })
}

/// The unperturbed base curve of rotation number `n`.
pub fn base_generator(n: i64, samples: usize) -> Result<LegendrianGenerator> {
    let modes = base_modes(n);
    LegendrianGenerator::from_fn(samples, |s| eval_modes(&modes, s))
}

/// Random real coefficients for harmonics 1..=4 of `x` and `y`.
fn draw_perturbation(rng: &mut ChaCha8Rng, jitter: f64) -> [[f64; 4]; 4] {
    let mut c = [[0.0; 4]; 4];
    for row in &mut c {
        for v in row.iter_mut() {
            *v = jitter * rng.gen_range(-1.0..1.0);
        }
    }
    c
}

fn perturbed(n: i64, samples: usize, p: &[[f64; 4]; 4]) -> Result<LegendrianGenerator> {
    let modes = base_modes(n);
    LegendrianGenerator::from_fn(samples, |s| {
        let (mut x, mut y) = eval_modes(&modes, s);
        for (k, ((xc, xs), (yc, ys))) in p[0].iter().zip(&p[1]).zip(p[2].iter().zip(&p[3])).enumerate() {
            let (sin, cos) = (TAU * (k + 1) as f64 * s).sin_cos();
            x += xc * cos + xs * sin;
            y += yc * cos + ys * sin;
        }
        (x, y)
    })
}

/// One synthesis attempt: perturb, balance, lift and certify.
fn attempt(n: i64, samples: usize, p: &[[f64; 4]; 4], tol: &Tolerances) -> Result<HorizontalLoop> {
    let g = perturbed(n, samples, p)?;
    let winding = invariants::rot_winding(&g)?;
    if winding != n {
        return Err(Error::BadDescription(format!("perturbation changed the winding to {winding}")));
    }
    let g = lifting::balance_closure(&g)?;
    let l = lifting::lift_with(&g, 0.0, 0.0, tol)?;
    if !l.is_closed(tol) {
        return Err(Error::NotClosed {
            defect_z: l.legendrian().closure_defect_z(),
            defect_w: l.closure_defect_w(),
        });
    }
    let report = lifting::embedding_check_with(&l, tol)?;
    if !report.embedded {
        return Err(Error::BadDescription(format!("lift not embedded, margin {:e}", report.margin)));
    }
    let inv = invariants::invariant_report(&g, tol)?;
    if inv.rot_winding != n || inv.rot_cusp != n {
        return Err(Error::BadDescription(format!(
            "rotation numbers {} (winding) and {} (cusps), wanted {n}",
            inv.rot_winding, inv.rot_cusp
        )));
    }
    Ok(l)
}

/// A closed embedded horizontal loop with rotation number `n`.
pub fn model_front(n: i64, seed: u64) -> Result<HorizontalLoop> {
    model_front_with(n, seed, &ModelConfig::default())
}

pub fn model_front_with(n: i64, seed: u64, cfg: &ModelConfig) -> Result<HorizontalLoop> {
    if n.abs() > MAX_ROT {
        return Err(Error::BadDescription(format!("|n| must be at most {MAX_ROT}, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(n as u64);
    let mut last = String::from("no attempts made");
    for _ in 0..cfg.retries {
        let p = draw_perturbation(&mut rng, cfg.jitter);
        match attempt(n, cfg.samples, &p, &cfg.tol) {
            Ok(l) => return Ok(l),
            Err(e) => last = e.to_string(),
        }
    }
    Err(Error::SynthesisFailed {
        n,
        attempts: cfg.retries,
        last,
    })
}

/// The same loop traversed backwards, lifted from the same base point.
pub fn orientation_reverse(l: &HorizontalLoop) -> HorizontalLoop {
    let g = l.generator().reversed();
    let z0 = l.legendrian().z0();
    let legendrian = crate::curves::LegendrianLoop::integrate(g, z0);
    HorizontalLoop::integrate(legendrian, l.w0())
}

/// A loop with `rot = 3`; its reverse has `rot = -3`.
pub fn figure1() -> Result<HorizontalLoop> {
    model_front(3, DEFAULT_SEED)
}

/// A loop with `rot = 0` and two cusps of each orientation.
pub fn figure2() -> Result<HorizontalLoop> {
    model_front(0, DEFAULT_SEED)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ModelConfig {
        ModelConfig {
            samples: 1024,
            ..ModelConfig::default()
        }
    }

    #[test]
    fn base_curves_have_zero_area_and_the_right_winding() {
        for n in -6..=6 {
            let g = base_generator(n, 1024).unwrap();
            assert!(lifting::z_closure_defect(&g).abs() < 1e-12, "{n}");
            assert_eq!(invariants::rot_winding(&g).unwrap(), n);
        }
    }

    #[test]
    fn zero_base_has_two_cusps_of_each_kind() {
        let g = base_generator(0, 1024).unwrap();
        assert_eq!(invariants::cusp_counts(&g, &Tolerances::default()).unwrap(), (2, 2));
    }

    #[test]
    fn models_certify_at_low_resolution() {
        for n in [-2, 0, 1, 3] {
            let l = model_front_with(n, 1, &small()).unwrap();
            let inv = invariants::invariant_report(l.generator(), &Tolerances::default()).unwrap();
            assert_eq!((inv.rot_winding, inv.rot_cusp), (n, n));
        }
    }

    #[test]
    fn synthesis_is_deterministic() {
        let a = model_front_with(2, 9, &small()).unwrap();
        let b = model_front_with(2, 9, &small()).unwrap();
        assert_eq!(a.generator(), b.generator());
        assert_eq!(a.w(), b.w());
    }

    #[test]
    fn reversal_negates_rot_and_is_an_involution() {
        let l = model_front_with(3, 2, &small()).unwrap();
        let r = orientation_reverse(&l);
        assert_eq!(invariants::rot_winding(r.generator()).unwrap(), -3);
        let rr = orientation_reverse(&r);
        assert_eq!(rr.generator(), l.generator());
        for (a, b) in rr.w().iter().zip(l.w()) {
            assert!((a - b).abs() <= 1e-15);
        }
    }

    #[test]
    fn rot_bound_is_enforced() {
        assert!(matches!(model_front(65, 0), Err(Error::BadDescription(_))));
    }

    #[test]
    fn impossible_jitter_reports_synthesis_failure() {
        let cfg = ModelConfig {
            jitter: 5.0,
            retries: 3,
            samples: 256,
            ..ModelConfig::default()
        };
        match model_front_with(2, 0, &cfg) {
            Err(Error::SynthesisFailed { n: 2, attempts: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
    }
}
