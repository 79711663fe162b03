//! Generators, Legendrian and horizontal loops, and fronts.
//!
//! The free data of every curve is the planar loop `(x(s), y(s))`; the
//! coordinates `z` and `w` are always integrated from it, so the slope
//! relation `y = dz/dx` holds by construction and cusps are simply the
//! roots of `x'`.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::lifting;
use crate::scan;
use crate::spectral::{self, Periodic};

/// Numerical tolerances shared by the certificates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Closure defects `|int y dx|`, `|int z dx|` below this count as closed.
    pub closure: f64,
    /// Cusp parameters are refined until `|x'| <= root`.
    pub root: f64,
    /// A root of `x'` with `|y'|` below this is a degenerate cusp.
    pub y_prime_floor: f64,
    /// Minimum `|dw|` at Legendrian double points for an embedded lift.
    pub embed: f64,
    /// Maximum `|z(s0) - z(s1)|` at an xy-crossing to call it a double point.
    pub tangency: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            closure: 1e-9,
            root: 1e-10,
            y_prime_floor: 1e-6,
            embed: 1e-7,
            tangency: 1e-6,
        }
    }
}

/// Relative speed floor below which a sampled curve is not immersed.
const IMMERSION_FLOOR: f64 = 1e-9;

/// The standard Engel structure `D = ker(dz - y dx) ∩ ker(dw - z dx)` on R^4,
/// framed by `e1 = ∂x + y∂z + z∂w`, `e2 = ∂y`, and the standard contact
/// structure `ξ = ker(dz - y dx)` on R^3, framed by `ē1 = ∂x + y∂z`, `ē2 = ∂y`.
#[derive(Debug, Clone, Copy, Default)]
pub struct StandardStructures;

impl StandardStructures {
    /// `(e1, e2)` at the point `(x, y, z, w)`.
    pub fn engel_frame(p: [f64; 4]) -> [[f64; 4]; 2] {
        [[1.0, 0.0, p[1], p[2]], [0.0, 1.0, 0.0, 0.0]]
    }

    /// `(ē1, ē2)` at the point `(x, y, z)`.
    pub fn contact_frame(p: [f64; 3]) -> [[f64; 3]; 2] {
        [[1.0, 0.0, p[1]], [0.0, 1.0, 0.0]]
    }

    /// Coordinates of a velocity `v` at `p` in the frame `(e1, e2)`, or `None`
    /// when `v` is not horizontal to within `tol`.
    pub fn frame_coordinates(p: [f64; 4], v: [f64; 4], tol: f64) -> Option<(f64, f64)> {
        let rz = v[2] - p[1] * v[0];
        let rw = v[3] - p[2] * v[0];
        (rz.abs() <= tol && rw.abs() <= tol).then_some((v[0], v[1]))
    }
}

/// Which part of a trigonometric term a coefficient multiplies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    Const,
    Cos(u32),
    Sin(u32),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub basis: Basis,
}

/// A finite trigonometric series `sum coeff * basis(2 pi k s)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrigSeries {
    pub terms: Vec<Term>,
}

impl TrigSeries {
    pub fn new(terms: Vec<Term>) -> Self {
        TrigSeries { terms }
    }

    pub fn cos(k: u32) -> Self {
        TrigSeries::new(vec![Term {
            coeff: 1.0,
            basis: Basis::Cos(k),
        }])
    }

    pub fn sin(k: u32) -> Self {
        TrigSeries::new(vec![Term {
            coeff: 1.0,
            basis: Basis::Sin(k),
        }])
    }

    pub fn constant(c: f64) -> Self {
        TrigSeries::new(vec![Term {
            coeff: c,
            basis: Basis::Const,
        }])
    }

    /// Append `coeff * basis`.
    pub fn with(mut self, coeff: f64, basis: Basis) -> Self {
        self.terms.push(Term { coeff, basis });
        self
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| match t.basis {
                Basis::Const => t.coeff,
                Basis::Cos(k) => t.coeff * (TAU * k as f64 * s).cos(),
                Basis::Sin(k) => t.coeff * (TAU * k as f64 * s).sin(),
            })
            .sum()
    }

    pub fn max_harmonic(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| match t.basis {
                Basis::Const => 0,
                Basis::Cos(k) | Basis::Sin(k) => k,
            })
            .max()
            .unwrap_or(0)
    }
}

/// Analytic input from which a generator is sampled.
#[derive(Debug, Clone, PartialEq)]
pub enum Description {
    /// Fourier series for `x(s)` and `y(s)`.
    Series { x: TrigSeries, y: TrigSeries },
    /// Points `(x, y)` at equally spaced parameters around the circle,
    /// interpolated trigonometrically.
    Points(Vec<[f64; 2]>),
}

/// Periodic planar loop `(x(s), y(s))`, `s ∈ [0, 1)`, sampled on the grid
/// `s_k = k/N` and interpolated trigonometrically.
#[derive(Debug, Clone)]
pub struct LegendrianGenerator {
    x: Vec<f64>,
    y: Vec<f64>,
    dx: Vec<f64>,
    dy: Vec<f64>,
    x_fn: Periodic,
    y_fn: Periodic,
}

impl PartialEq for LegendrianGenerator {
    fn eq(&self, other: &Self) -> bool {
        self.x == other.x && self.y == other.y
    }
}

fn check_grid(n: usize) -> Result<()> {
    if n < 16 || !n.is_power_of_two() {
        return Err(Error::BadDescription(format!(
            "sample count must be a power of two >= 16, got {n}"
        )));
    }
    Ok(())
}

impl LegendrianGenerator {
    /// Build from samples on the uniform grid; checks that the curve is an
    /// immersion.
    pub fn from_samples(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::BadDescription(format!(
                "x has {} samples but y has {}",
                x.len(),
                y.len()
            )));
        }
        check_grid(x.len())?;
        if x.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(Error::BadDescription("non-finite sample".into()));
        }
        let g = Self::from_samples_unchecked(x, y);
        let (s, speed) = g.min_speed();
        if speed <= IMMERSION_FLOOR * g.max_speed() || speed == 0.0 {
            return Err(Error::NotImmersed(s));
        }
        Ok(g)
    }

    /// Build from samples without the immersion check. Measurements such as
    /// residuals accept any sampled data; everything that needs a front goes
    /// through [`LegendrianGenerator::from_samples`].
    pub fn from_samples_unchecked(x: Vec<f64>, y: Vec<f64>) -> Self {
        assert_eq!(x.len(), y.len(), "x and y sample counts differ");
        let dx = spectral::derivative(&x);
        let dy = spectral::derivative(&y);
        let x_fn = Periodic::new(&x);
        let y_fn = Periodic::new(&y);
        LegendrianGenerator {
            x,
            y,
            dx,
            dy,
            x_fn,
            y_fn,
        }
    }

    /// Sample `f(s) = (x, y)` on the `n`-point grid.
    pub fn from_fn(n: usize, f: impl Fn(f64) -> (f64, f64)) -> Result<Self> {
        check_grid(n)?;
        let (x, y) = spectral::grid(n).into_iter().map(f).unzip();
        Self::from_samples(x, y)
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn params(&self) -> Vec<f64> {
        spectral::grid(self.len())
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Spectral derivative samples `x'(s_k)`.
    pub fn x_prime(&self) -> &[f64] {
        &self.dx
    }

    /// Spectral derivative samples `y'(s_k)`.
    pub fn y_prime(&self) -> &[f64] {
        &self.dy
    }

    pub fn x_fn(&self) -> &Periodic {
        &self.x_fn
    }

    pub fn y_fn(&self) -> &Periodic {
        &self.y_fn
    }

    pub fn max_speed(&self) -> f64 {
        self.dx
            .iter()
            .zip(&self.dy)
            .map(|(a, b)| a.hypot(*b))
            .fold(0.0, f64::max)
    }

    /// Minimum of `|(x', y')|` over the circle and where it is attained:
    /// grid minimum refined by golden-section search on the interpolant.
    pub fn min_speed(&self) -> (f64, f64) {
        let n = self.len();
        let h = 1.0 / n as f64;
        let (k, _) = self
            .dx
            .iter()
            .zip(&self.dy)
            .map(|(a, b)| a * a + b * b)
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (k, v)| if v < acc.1 { (k, v) } else { acc });
        let speed2 = |s: f64| {
            let a = self.x_fn.deriv(s);
            let b = self.y_fn.deriv(s);
            a * a + b * b
        };
        let (s, v) = golden_min(speed2, k as f64 * h - h, k as f64 * h + h);
        (s.rem_euclid(1.0), v.max(0.0).sqrt())
    }

    /// Same curve with `y` replaced; re-checks immersion.
    pub fn with_y(&self, y: Vec<f64>) -> Result<Self> {
        Self::from_samples(self.x.clone(), y)
    }

    /// Traverse the loop backwards, `s ↦ 1 - s`.
    pub fn reversed(&self) -> Self {
        let n = self.len();
        let rev = |v: &[f64]| (0..n).map(|k| v[(n - k) % n]).collect::<Vec<_>>();
        Self::from_samples_unchecked(rev(&self.x), rev(&self.y))
    }
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if (b - a).abs() < 1e-14 {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let s = 0.5 * (a + b);
    (s, f(s))
}

/// Sample an analytic description on `n` grid points.
pub fn sample_generator(desc: &Description, n: usize) -> Result<LegendrianGenerator> {
    check_grid(n)?;
    match desc {
        Description::Series { x, y } => {
            let top = x.max_harmonic().max(y.max_harmonic());
            if 2 * top as usize >= n {
                return Err(Error::BadDescription(format!(
                    "harmonic {top} is not resolved by {n} samples"
                )));
            }
            if x.terms.iter().chain(&y.terms).any(|t| !t.coeff.is_finite()) {
                return Err(Error::BadDescription("non-finite coefficient".into()));
            }
            LegendrianGenerator::from_fn(n, |s| (x.eval(s), y.eval(s)))
        }
        Description::Points(points) => {
            let mut pts = points.clone();
            if pts.len() >= 2 && pts.first() == pts.last() {
                pts.pop();
            }
            if pts.len() < 4 {
                return Err(Error::BadDescription(format!(
                    "a point list needs at least 4 distinct points, got {}",
                    pts.len()
                )));
            }
            if pts.iter().flatten().any(|v| !v.is_finite()) {
                return Err(Error::BadDescription("non-finite point".into()));
            }
            let step = |a: &[f64; 2], b: &[f64; 2]| (a[0] - b[0]).hypot(a[1] - b[1]);
            let mut steps: Vec<f64> = pts.windows(2).map(|w| step(&w[0], &w[1])).collect();
            let seam = step(&pts[pts.len() - 1], &pts[0]);
            steps.sort_by(f64::total_cmp);
            let median = steps[steps.len() / 2];
            if seam > 4.0 * median + 1e-12 {
                return Err(Error::BadDescription(format!(
                    "point list does not close up: seam step {seam:.3e} vs median step {median:.3e}"
                )));
            }
            let xs: Vec<f64> = pts.iter().map(|p| p[0]).collect();
            let ys: Vec<f64> = pts.iter().map(|p| p[1]).collect();
            LegendrianGenerator::from_samples(spectral::resample(&xs, n), spectral::resample(&ys, n))
        }
    }
}

/// The Legendrian curve `(x, y, z)` in `(R^3, ξ)`.
#[derive(Debug, Clone)]
pub struct LegendrianLoop {
    generator: LegendrianGenerator,
    z: Vec<f64>,
    z0: f64,
    closure_defect_z: f64,
    z_fn: Periodic,
}

impl LegendrianLoop {
    /// Integrate `z = z0 + int_0^s y x'` without insisting on closure; the
    /// defect `∮ y dx` is recorded.
    pub fn integrate(generator: LegendrianGenerator, z0: f64) -> Self {
        let integrand: Vec<f64> = generator.y.iter().zip(&generator.dx).map(|(y, dx)| y * dx).collect();
        let closure_defect_z = spectral::trapezoid(&integrand);
        let z: Vec<f64> = spectral::cumulative(&integrand).into_iter().map(|v| z0 + v).collect();
        let z_fn = Periodic::new(&z);
        LegendrianLoop {
            generator,
            z,
            z0,
            closure_defect_z,
            z_fn,
        }
    }

    pub fn generator(&self) -> &LegendrianGenerator {
        &self.generator
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn z0(&self) -> f64 {
        self.z0
    }

    pub fn closure_defect_z(&self) -> f64 {
        self.closure_defect_z
    }

    pub fn is_closed(&self, tol: &Tolerances) -> bool {
        self.closure_defect_z.abs() <= tol.closure
    }

    /// Interpolant of the `z` samples; meaningful for closed loops.
    pub fn z_fn(&self) -> &Periodic {
        &self.z_fn
    }

    pub fn len(&self) -> usize {
        self.generator.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generator.is_empty()
    }
}

/// A horizontal curve `(x, y, z, w)` in `(R^4, D)`.
#[derive(Debug, Clone)]
pub struct HorizontalLoop {
    legendrian: LegendrianLoop,
    w: Vec<f64>,
    w0: f64,
    closure_defect_w: f64,
}

impl HorizontalLoop {
    /// Integrate `w = w0 + int_0^s z x'` over a Legendrian loop.
    pub fn integrate(legendrian: LegendrianLoop, w0: f64) -> Self {
        let integrand = z_dx(&legendrian);
        let closure_defect_w = spectral::trapezoid(&integrand);
        let w = spectral::cumulative(&integrand).into_iter().map(|v| w0 + v).collect();
        HorizontalLoop {
            legendrian,
            w,
            w0,
            closure_defect_w,
        }
    }

    /// Assemble a loop from arbitrary `w` samples. The recorded defect is
    /// still `∮ z dx`; use this to measure how far given data is from
    /// being horizontal.
    pub fn from_parts(legendrian: LegendrianLoop, w: Vec<f64>) -> Self {
        assert_eq!(w.len(), legendrian.len(), "w has the wrong sample count");
        let closure_defect_w = spectral::trapezoid(&z_dx(&legendrian));
        HorizontalLoop {
            w0: w[0],
            legendrian,
            w,
            closure_defect_w,
        }
    }

    pub fn legendrian(&self) -> &LegendrianLoop {
        &self.legendrian
    }

    pub fn generator(&self) -> &LegendrianGenerator {
        &self.legendrian.generator
    }

    pub fn w(&self) -> &[f64] {
        &self.w
    }

    pub fn w0(&self) -> f64 {
        self.w0
    }

    pub fn closure_defect_w(&self) -> f64 {
        self.closure_defect_w
    }

    pub fn is_closed(&self, tol: &Tolerances) -> bool {
        self.legendrian.is_closed(tol) && self.closure_defect_w.abs() <= tol.closure
    }

    pub fn len(&self) -> usize {
        self.legendrian.len()
    }

    pub fn is_empty(&self) -> bool {
        self.legendrian.is_empty()
    }

    /// Sample `k` as a point of R^4.
    pub fn point(&self, k: usize) -> [f64; 4] {
        let g = self.generator();
        [g.x[k], g.y[k], self.legendrian.z[k], self.w[k]]
    }

    /// Velocity at sample `k` from spectral derivatives of all four samples.
    pub fn velocity(&self) -> Vec<[f64; 4]> {
        let g = self.generator();
        let dz = periodic_derivative(&self.legendrian.z, self.legendrian.closure_defect_z);
        let dw = periodic_derivative(&self.w, self.closure_defect_w);
        (0..self.len()).map(|k| [g.dx[k], g.dy[k], dz[k], dw[k]]).collect()
    }
}

pub(crate) fn z_dx(l: &LegendrianLoop) -> Vec<f64> {
    l.z.iter().zip(&l.generator.dx).map(|(z, dx)| z * dx).collect()
}

/// Derivative of samples of a function whose increment over one period is
/// `drift`: the linear part is removed before differentiating spectrally.
fn periodic_derivative(v: &[f64], drift: f64) -> Vec<f64> {
    let n = v.len();
    let detrended: Vec<f64> = v
        .iter()
        .enumerate()
        .map(|(k, val)| val - drift * k as f64 / n as f64)
        .collect();
    spectral::derivative(&detrended).into_iter().map(|d| d + drift).collect()
}

/// Maximum violations of `z' = y x'` and `w' = z x'` over the samples.
pub fn horizontality_residual(l: &HorizontalLoop) -> (f64, f64) {
    let g = l.generator();
    let z = l.legendrian.z();
    let dz = periodic_derivative(z, l.legendrian.closure_defect_z);
    let dw = periodic_derivative(&l.w, l.closure_defect_w);
    let mut rz: f64 = 0.0;
    let mut rw: f64 = 0.0;
    for k in 0..l.len() {
        rz = rz.max((dz[k] - g.y[k] * g.dx[k]).abs());
        rw = rw.max((dw[k] - z[k] * g.dx[k]).abs());
    }
    (rz, rw)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CuspOrientation {
    Up,
    Down,
}

/// A semi-cubical cusp of the front.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cusp {
    pub s: f64,
    /// Front position `(x, z)`.
    pub position: [f64; 2],
    pub orientation: CuspOrientation,
    /// `y'(s)` at the cusp.
    pub y_prime: f64,
}

/// Root of `x'` with the data that fixes its orientation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CuspSite {
    pub s: f64,
    /// `x'` changes sign from negative to positive (a left cusp).
    pub opens_right: bool,
    pub y_prime: f64,
}

impl CuspSite {
    /// The front passes through the cusp moving up in `z` exactly when the
    /// curvature sign of `x` and the sign of `y'` agree.
    pub fn orientation(&self) -> CuspOrientation {
        if self.opens_right == (self.y_prime > 0.0) {
            CuspOrientation::Up
        } else {
            CuspOrientation::Down
        }
    }
}

fn sign_bit(v: f64) -> bool {
    v >= 0.0
}

/// All roots of `x'`, refined by bisection on the interpolant.
pub fn cusp_sites(g: &LegendrianGenerator, tol: &Tolerances) -> Result<Vec<CuspSite>> {
    let n = g.len();
    let h = 1.0 / n as f64;
    let d = &g.dx;
    let mut out = Vec::new();
    for k in 0..n {
        let k1 = (k + 1) % n;
        if sign_bit(d[k]) == sign_bit(d[k1]) {
            continue;
        }
        let opens_right = d[k1] > d[k];
        let mut a = k as f64 * h;
        let mut b = a + h;
        let fa_sign = !opens_right; // sign_bit at a: positive iff decreasing
        let mut s = 0.5 * (a + b);
        for _ in 0..200 {
            s = 0.5 * (a + b);
            let f = g.x_fn.deriv(s);
            if f.abs() <= tol.root || b - a < 1e-15 {
                break;
            }
            if sign_bit(f) == fa_sign {
                a = s;
            } else {
                b = s;
            }
        }
        let s = s.rem_euclid(1.0);
        let y_prime = g.y_fn.deriv(s);
        if y_prime.abs() < tol.y_prime_floor {
            return Err(Error::DegenerateCusp { s, y_prime });
        }
        out.push(CuspSite { s, opens_right, y_prime });
    }
    Ok(out)
}

/// The front `(x, z)` of a Legendrian loop.
#[derive(Debug, Clone)]
pub struct FrontDiagram {
    /// `(s, x, z)` per sample.
    pub points: Vec<[f64; 3]>,
    pub cusps: Vec<Cusp>,
    /// Transverse crossings of the front, as parameter pairs `s0 < s1`.
    pub double_points: Vec<(f64, f64)>,
    /// Self-tangencies of the front (double points of the Legendrian curve).
    pub self_tangencies: Vec<(f64, f64)>,
}

impl FrontDiagram {
    pub fn count(&self, orientation: CuspOrientation) -> usize {
        self.cusps.iter().filter(|c| c.orientation == orientation).count()
    }
}

/// Front projection with cusps, transverse double points and self-tangencies.
pub fn front_of(l: &LegendrianLoop) -> Result<FrontDiagram> {
    front_of_with(l, &Tolerances::default())
}

pub fn front_of_with(l: &LegendrianLoop, tol: &Tolerances) -> Result<FrontDiagram> {
    if !l.is_closed(tol) {
        return Err(Error::ZNotClosed {
            defect: l.closure_defect_z,
        });
    }
    let g = &l.generator;
    let cusps = cusp_sites(g, tol)?
        .into_iter()
        .map(|c| Cusp {
            s: c.s,
            position: [g.x_fn.eval(c.s), l.z_fn.eval(c.s)],
            orientation: c.orientation(),
            y_prime: c.y_prime,
        })
        .collect();
    let self_tangencies = lifting::self_tangencies_with(l, tol);
    let x_fn = &g.x_fn;
    let z_fn = &l.z_fn;
    let crossings = scan::crossings(&g.x, &l.z, |s| [x_fn.eval(s), z_fn.eval(s)], |s| {
        [x_fn.deriv(s), z_fn.deriv(s)]
    });
    let double_points = crossings
        .into_iter()
        .filter(|&(s0, s1)| (g.y_fn.eval(s0) - g.y_fn.eval(s1)).abs() > tol.tangency)
        .collect();
    let points = g
        .params()
        .into_iter()
        .zip(g.x.iter().zip(&l.z))
        .map(|(s, (x, z))| [s, *x, *z])
        .collect();
    Ok(FrontDiagram {
        points,
        cusps,
        double_points,
        self_tangencies,
    })
}

/// CSV dump with header `s,x,y,z,w`; `w` is left blank for Legendrian loops.
pub fn legendrian_csv(l: &LegendrianLoop) -> String {
    csv_rows(l, None)
}

pub fn horizontal_csv(l: &HorizontalLoop) -> String {
    csv_rows(&l.legendrian, Some(&l.w))
}

fn csv_rows(l: &LegendrianLoop, w: Option<&[f64]>) -> String {
    let g = &l.generator;
    let mut out = String::from("s,x,y,z,w\n");
    for (k, s) in g.params().into_iter().enumerate() {
        let _ = write!(out, "{:?},{:?},{:?},{:?},", s, g.x[k], g.y[k], l.z[k]);
        if let Some(w) = w {
            let _ = write!(out, "{:?}", w[k]);
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifting::{balance_closure, lift};

    fn circle(n: usize) -> LegendrianGenerator {
        sample_generator(
            &Description::Series {
                x: TrigSeries::cos(1),
                y: TrigSeries::sin(1),
            },
            n,
        )
        .unwrap()
    }

    #[test]
    fn circle_has_constant_speed() {
        let g = circle(256);
        for (a, b) in g.x_prime().iter().zip(g.y_prime()) {
            assert!((a.hypot(*b) - TAU).abs() < 1e-10);
        }
    }

    #[test]
    fn constant_description_is_not_immersed() {
        let d = Description::Series {
            x: TrigSeries::constant(0.0),
            y: TrigSeries::constant(0.0),
        };
        assert!(matches!(sample_generator(&d, 64), Err(Error::NotImmersed(_))));
    }

    #[test]
    fn folded_parabola_is_not_immersed() {
        // (sin 2πs, cos 4πs) traces y = 1 - 2x^2 back and forth and stops at
        // the turning points s = 1/4, 3/4.
        let d = Description::Series {
            x: TrigSeries::sin(1),
            y: TrigSeries::cos(2),
        };
        match sample_generator(&d, 512) {
            Err(Error::NotImmersed(s)) => {
                assert!((s - 0.25).abs() < 1e-6 || (s - 0.75).abs() < 1e-6, "{s}")
            }
            other => panic!("expected NotImmersed, got {other:?}"),
        }
    }

    #[test]
    fn min_speed_matches_dense_grid_oracle() {
        let x = TrigSeries::sin(1);
        let y = TrigSeries::cos(2).with(0.3, Basis::Cos(1));
        let g = sample_generator(&Description::Series { x, y }, 512).unwrap();
        // dense oracle on 10^6 points using the closed-form derivative
        let m = 1_000_000;
        let oracle = (0..m)
            .map(|i| {
                let s = i as f64 / m as f64;
                let xp = TAU * (TAU * s).cos();
                let yp = -2.0 * TAU * (2.0 * TAU * s).sin() - 0.3 * TAU * (TAU * s).sin();
                xp.hypot(yp)
            })
            .fold(f64::INFINITY, f64::min);
        let (_, speed) = g.min_speed();
        assert!((speed - oracle).abs() < 1e-6, "{speed} vs {oracle}");
    }

    #[test]
    fn rejects_bad_grids_and_unresolved_harmonics() {
        let d = Description::Series {
            x: TrigSeries::cos(1),
            y: TrigSeries::sin(1),
        };
        assert!(matches!(sample_generator(&d, 100), Err(Error::BadDescription(_))));
        assert!(matches!(sample_generator(&d, 8), Err(Error::BadDescription(_))));
        let d = Description::Series {
            x: TrigSeries::cos(40),
            y: TrigSeries::sin(1),
        };
        assert!(matches!(sample_generator(&d, 64), Err(Error::BadDescription(_))));
    }

    #[test]
    fn point_lists_resample_and_reject_open_polylines() {
        let pts: Vec<[f64; 2]> = (0..32)
            .map(|k| {
                let s = k as f64 / 32.0;
                [(TAU * s).cos(), (TAU * s).sin()]
            })
            .collect();
        let g = sample_generator(&Description::Points(pts.clone()), 128).unwrap();
        assert!((g.x()[32] - 0.0).abs() < 1e-12 && (g.y()[32] - 1.0).abs() < 1e-12);
        let open: Vec<[f64; 2]> = (0..32).map(|k| [k as f64 / 32.0, (k as f64 / 8.0).sin()]).collect();
        assert!(matches!(
            sample_generator(&Description::Points(open), 128),
            Err(Error::BadDescription(_))
        ));
    }

    #[test]
    fn balanced_circle_front_has_two_cusps_both_down() {
        let g = balance_closure(&circle(512)).unwrap();
        let l = lift(&g, 0.0, 0.0).unwrap();
        let f = front_of(l.legendrian()).unwrap();
        assert_eq!(f.cusps.len(), 2);
        let params: Vec<f64> = f.cusps.iter().map(|c| c.s).collect();
        assert!(params.iter().any(|s| s.min(1.0 - s) < 1e-9), "{params:?}");
        assert!(params.iter().any(|s| (s - 0.5).abs() < 1e-9), "{params:?}");
        for c in &f.cusps {
            assert!(c.position[0].abs() > 0.99);
        }
        assert_eq!(f.count(CuspOrientation::Down), 2);
    }

    #[test]
    fn shifted_circle_cusps_share_the_orientation() {
        // x = cos 2πs, y = 2 + sin 2πs: y' has opposite signs at the two
        // roots of x', and so does x'', so both cusps point the same way.
        let g = sample_generator(
            &Description::Series {
                x: TrigSeries::cos(1),
                y: TrigSeries::sin(1).with(2.0, Basis::Const),
            },
            256,
        )
        .unwrap();
        let sites = cusp_sites(&g, &Tolerances::default()).unwrap();
        assert_eq!(sites.len(), 2);
        assert!(sites[0].y_prime * sites[1].y_prime < 0.0);
        assert_eq!(sites[0].orientation(), sites[1].orientation());
    }

    #[test]
    fn front_requires_closed_loop() {
        let l = LegendrianLoop::integrate(circle(64), 0.0);
        assert!(matches!(front_of(&l), Err(Error::ZNotClosed { .. })));
    }

    #[test]
    fn residual_of_circle_lift_at_1024() {
        let g = balance_closure(&circle(1024)).unwrap();
        let l = lift(&g, 0.0, 0.0).unwrap();
        let (rz, rw) = horizontality_residual(&l);
        assert!(rz <= 1e-4 && rw <= 1e-4, "{rz} {rw}");
    }

    #[test]
    fn residual_detects_perturbed_w() {
        let g = balance_closure(&circle(1024)).unwrap();
        let l = lift(&g, 0.0, 0.0).unwrap();
        let w: Vec<f64> = l
            .w()
            .iter()
            .zip(g.params())
            .map(|(w, s)| w + 0.1 * (TAU * s).sin())
            .collect();
        let bad = HorizontalLoop::from_parts(l.legendrian().clone(), w);
        let (_, rw) = horizontality_residual(&bad);
        assert!(rw >= 0.05, "{rw}");
    }

    #[test]
    fn flat_loop_has_zero_residual() {
        let n = 64;
        let x: Vec<f64> = spectral::grid(n).iter().map(|s| (TAU * s).cos()).collect();
        let g = LegendrianGenerator::from_samples_unchecked(x, vec![0.0; n]);
        let l = LegendrianLoop::integrate(g, 0.0);
        let h = HorizontalLoop::from_parts(l, vec![0.0; n]);
        assert_eq!(horizontality_residual(&h), (0.0, 0.0));
    }

    #[test]
    fn frame_identity_holds_per_sample() {
        let g = balance_closure(&circle(2048)).unwrap();
        let l = lift(&g, 0.3, -0.2).unwrap();
        let (rz, rw) = horizontality_residual(&l);
        let tol = rz.max(rw) * 1.0001;
        for (k, v) in l.velocity().into_iter().enumerate() {
            let p = l.point(k);
            let (a, b) = StandardStructures::frame_coordinates(p, v, tol).expect("horizontal");
            let e = StandardStructures::engel_frame(p);
            for i in 0..4 {
                assert!((a * e[0][i] + b * e[1][i] - v[i]).abs() <= tol);
            }
        }
    }

    #[test]
    fn frame_coordinates_of_horizontal_vectors() {
        let p = [0.3, -1.2, 0.7, 2.0];
        let (xp, yp) = (0.4, 2.5);
        let v = [xp, yp, p[1] * xp, p[2] * xp];
        assert_eq!(StandardStructures::frame_coordinates(p, v, 0.0), Some((xp, yp)));
        let v = [xp, yp, p[1] * xp + 1e-3, p[2] * xp];
        assert_eq!(StandardStructures::frame_coordinates(p, v, 1e-6), None);
        let c = StandardStructures::contact_frame([p[0], p[1], p[2]]);
        assert_eq!(c[0], [1.0, 0.0, p[1]]);
    }

    #[test]
    fn csv_has_header_and_blank_w_for_legendrian() {
        let g = balance_closure(&circle(16)).unwrap();
        let l = lift(&g, 0.0, 0.0).unwrap();
        let text = legendrian_csv(l.legendrian());
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("s,x,y,z,w"));
        let row = lines.next().unwrap();
        assert!(row.ends_with(','));
        let full = horizontal_csv(&l);
        let row: Vec<f64> = full.lines().nth(3).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(row[1], g.x()[2]);
        assert_eq!(row[4], l.w()[2]);
    }
}
