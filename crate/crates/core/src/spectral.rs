//! Trigonometric interpolation, differentiation and quadrature on the
//! uniform periodic grid `s_k = k / N`, `k = 0..N`.
//!
//! Derivatives are taken in frequency space with the Nyquist mode
//! dropped. Full-period integrals use the trapezoid rule. Running
//! integrals use the trapezoid rule plus two Euler-Maclaurin
//! endpoint corrections, which make them sixth-order accurate while
//! agreeing with the plain trapezoid rule over a full period.

use std::cell::RefCell;
use std::f64::consts::TAU;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn transform(buf: &mut [Complex64], inverse: bool) {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        let fft = if inverse {
            p.plan_fft_inverse(buf.len())
        } else {
            p.plan_fft_forward(buf.len())
        };
        fft.process(buf);
    });
}

/// Normalized discrete Fourier coefficients `c_k = (1/N) sum_j v_j e^{-2 pi i jk/N}`.
pub fn coefficients(values: &[f64]) -> Vec<Complex64> {
    let n = values.len();
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    transform(&mut buf, false);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

fn synthesize(mut coeffs: Vec<Complex64>) -> Vec<f64> {
    transform(&mut coeffs, true);
    coeffs.into_iter().map(|c| c.re).collect()
}

/// Signed frequency of FFT slot `k` for length `n`; the Nyquist slot maps to 0
/// because derivatives drop it.
fn frequency(k: usize, n: usize) -> f64 {
    if 2 * k < n {
        k as f64
    } else if 2 * k == n {
        0.0
    } else {
        k as f64 - n as f64
    }
}

/// Spectral derivative `d/ds` of periodic samples.
pub fn derivative(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut c = coefficients(values);
    for (k, ck) in c.iter_mut().enumerate() {
        *ck *= Complex64::new(0.0, TAU * frequency(k, n));
    }
    synthesize(c)
}

/// Trapezoid rule over one period: `(1/N) sum_k v_k`.
pub fn trapezoid(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Running integral `I_k ~ int_0^{s_k} f` for `k = 0..N`, with `I_0 = 0`.
///
/// Trapezoid partial sums with the first two Euler-Maclaurin endpoint
/// corrections, `-(h^2/12) Δf' + (h^4/720) Δf'''`.
pub fn cumulative(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let h = 1.0 / n as f64;
    let f1 = derivative(values);
    let f3 = derivative(&derivative(&f1));
    let c1 = h * h / 12.0;
    let c3 = h.powi(4) / 720.0;
    let mut out = Vec::with_capacity(n);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..n {
        acc += 0.5 * h * (values[k - 1] + values[k]);
        out.push(acc - c1 * (f1[k] - f1[0]) + c3 * (f3[k] - f3[0]));
    }
    out
}

/// Trigonometric interpolant of uniformly spaced periodic samples.
///
/// Evaluation at arbitrary parameters sums the retained half-spectrum
/// directly; coefficients below `1e-17` of the spectrum's mass are skipped,
/// which makes band-limited inputs cheap to evaluate.
#[derive(Debug, Clone)]
pub struct Periodic {
    n: usize,
    mean: f64,
    nyquist: f64,
    // (frequency, re, im) for 0 < k < N/2
    modes: Vec<(f64, f64, f64)>,
}

impl Periodic {
    pub fn new(values: &[f64]) -> Self {
        let n = values.len();
        let c = coefficients(values);
        let mass: f64 = c.iter().map(|z| z.norm()).sum();
        let cutoff = 1e-17 * mass.max(f64::MIN_POSITIVE);
        let modes = (1..n.div_ceil(2))
            .filter(|&k| 2 * k < n && c[k].norm() > cutoff)
            .map(|k| (k as f64, c[k].re, c[k].im))
            .collect();
        let nyquist = if n.is_multiple_of(2) { c[n / 2].re } else { 0.0 };
        Periodic {
            n,
            mean: c[0].re,
            nyquist,
            modes,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Mean value, i.e. the trapezoid integral over one period.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn eval(&self, s: f64) -> f64 {
        let mut acc = 0.0;
        for &(k, re, im) in &self.modes {
            let (sin, cos) = (TAU * k * s).sin_cos();
            acc += re * cos - im * sin;
        }
        let nyq = if self.nyquist != 0.0 {
            self.nyquist * (std::f64::consts::PI * self.n as f64 * s).cos()
        } else {
            0.0
        };
        self.mean + 2.0 * acc + nyq
    }

    pub fn deriv(&self, s: f64) -> f64 {
        let mut acc = 0.0;
        for &(k, re, im) in &self.modes {
            let w = TAU * k;
            let (sin, cos) = (w * s).sin_cos();
            acc += w * (-re * sin - im * cos);
        }
        2.0 * acc
    }

    pub fn deriv2(&self, s: f64) -> f64 {
        let mut acc = 0.0;
        for &(k, re, im) in &self.modes {
            let w = TAU * k;
            let (sin, cos) = (w * s).sin_cos();
            acc += w * w * (-re * cos + im * sin);
        }
        2.0 * acc
    }

    /// Exact antiderivative of the interpolant, `int_0^s p(sigma) d sigma`.
    /// Over a full period this is the trapezoid value [`Periodic::mean`].
    pub fn integral_to(&self, s: f64) -> f64 {
        let mut acc = 0.0;
        for &(k, re, im) in &self.modes {
            let w = TAU * k;
            let (sin, cos) = (w * s).sin_cos();
            // int_0^s Re(c e^{iw t}) dt = Re(c (e^{iws} - 1)/(iw))
            acc += (re * sin + im * (cos - 1.0)) / w;
        }
        let nyq = if self.nyquist != 0.0 {
            let w = std::f64::consts::PI * self.n as f64;
            self.nyquist * (w * s).sin() / w
        } else {
            0.0
        };
        self.mean * s + 2.0 * acc + nyq
    }
}

/// Resample periodic samples onto a grid of `m` points by zero padding or
/// truncating the spectrum.
pub fn resample(values: &[f64], m: usize) -> Vec<f64> {
    let n = values.len();
    if n == m {
        return values.to_vec();
    }
    let c = coefficients(values);
    let mut out = vec![Complex64::new(0.0, 0.0); m];
    let half = n.min(m) / 2;
    for k in 0..half {
        out[k] = c[k];
        if k > 0 {
            out[m - k] = c[n - k];
        }
    }
    if n.min(m).is_multiple_of(2) && half > 0 {
        // split the shared Nyquist mode symmetrically
        let nyq = if n <= m { c[n / 2] } else { c[half] + c[n - half] };
        let nyq = Complex64::new(nyq.re, 0.0) * 0.5;
        if n < m {
            out[half] += nyq;
            out[m - half] += nyq;
        } else {
            out[half] = nyq * 2.0;
        }
    }
    synthesize(out)
}

/// Uniform grid `k / n`.
pub fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| k as f64 / n as f64).collect()
}
