//! Smooth compactly supported profiles on the circle.
//!
//! All profiles take a parameter `s`, a center `c` and a half-width `h`
//! and are evaluated on the circular distance `s - c` folded into
//! `(-1/2, 1/2]`, so supports may straddle the seam at `s = 0`.

/// Signed circular offset `s - c` folded into `(-1/2, 1/2]`.
pub fn circular_offset(s: f64, c: f64) -> f64 {
    let mut d = (s - c).rem_euclid(1.0);
    if d > 0.5 {
        d -= 1.0;
    }
    d
}

/// Circular distance between two parameters.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    circular_offset(a, b).abs()
}

/// Standard mollifier normalized to peak 1: `exp(1 - 1/(1 - u^2))`.
pub fn mollifier(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - u * u)).exp()
    }
}

/// Derivative of [`mollifier`] with respect to `u`.
pub fn mollifier_prime(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        let q = 1.0 - u * u;
        mollifier(u) * (-2.0 * u / (q * q))
    }
}

/// Mollifier bump of half-width `h` centered at `c`.
pub fn bump(s: f64, c: f64, h: f64) -> f64 {
    mollifier(circular_offset(s, c) / h)
}

/// Odd profile `h * u * mollifier(u)`. Its `s`-derivative is
/// `mollifier(u) + u * mollifier'(u)`, which equals 1 at the center and
/// turns negative near the edges; it integrates to zero over the support.
pub fn odd_bump(s: f64, c: f64, h: f64) -> f64 {
    let u = circular_offset(s, c) / h;
    h * u * mollifier(u)
}

/// `s`-derivative of [`odd_bump`].
pub fn odd_bump_prime(s: f64, c: f64, h: f64) -> f64 {
    let u = circular_offset(s, c) / h;
    mollifier(u) + u * mollifier_prime(u)
}

fn psi(v: f64) -> f64 {
    if v <= 0.0 {
        0.0
    } else {
        (-1.0 / v).exp()
    }
}

fn psi_prime(v: f64) -> f64 {
    if v <= 0.0 {
        0.0
    } else {
        psi(v) / (v * v)
    }
}

/// Smooth step from 0 at `v <= 0` to 1 at `v >= 1`.
pub fn smooth_step(v: f64) -> f64 {
    let a = psi(v);
    let b = psi(1.0 - v);
    if a + b == 0.0 {
        return if v > 0.5 { 1.0 } else { 0.0 };
    }
    a / (a + b)
}

/// Derivative of [`smooth_step`].
pub fn smooth_step_prime(v: f64) -> f64 {
    let a = psi(v);
    let b = psi(1.0 - v);
    let sum = a + b;
    if sum == 0.0 {
        return 0.0;
    }
    (psi_prime(v) * b + a * psi_prime(1.0 - v)) / (sum * sum)
}

/// Plateau profile: 1 for `|u| <= 1/2`, 0 for `|u| >= 1`, where
/// `u = (s - c) / h`.
pub fn plateau(s: f64, c: f64, h: f64) -> f64 {
    let u = circular_offset(s, c) / h;
    smooth_step(2.0 * (1.0 - u.abs()))
}

/// `s`-derivative of [`plateau`].
pub fn plateau_prime(s: f64, c: f64, h: f64) -> f64 {
    let u = circular_offset(s, c) / h;
    let v = 2.0 * (1.0 - u.abs());
    -2.0 * u.signum() * smooth_step_prime(v) / h
}
