//! Self-crossings of a sampled periodic planar curve: an O(M^2) pass over
//! the segments of a decimated polyline, then Newton refinement of each
//! hit on the smooth interpolant.

/// Parameter pairs closer than this many grid steps are treated as trivial
/// near-diagonal hits.
const DIAGONAL_STEPS: f64 = 4.0;

/// Decimation factor of the coarse pass.
const DECIMATION: usize = 8;

fn segment_hit(p0: [f64; 2], p1: [f64; 2], q0: [f64; 2], q1: [f64; 2]) -> Option<(f64, f64)> {
    let r = [p1[0] - p0[0], p1[1] - p0[1]];
    let d = [q1[0] - q0[0], q1[1] - q0[1]];
    let denom = r[0] * d[1] - r[1] * d[0];
    if denom == 0.0 {
        return None;
    }
    let e = [q0[0] - p0[0], q0[1] - p0[1]];
    let t = (e[0] * d[1] - e[1] * d[0]) / denom;
    let u = (e[0] * r[1] - e[1] * r[0]) / denom;
    ((0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u)).then_some((t, u))
}

fn wrap(s: f64) -> f64 {
    s.rem_euclid(1.0)
}

fn circular_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Newton iteration for `c(s0) = c(s1)`. Returns the refined pair and the
/// final residual norm.
pub fn refine(
    mut s0: f64,
    mut s1: f64,
    eval: &impl Fn(f64) -> [f64; 2],
    deriv: &impl Fn(f64) -> [f64; 2],
) -> (f64, f64, f64) {
    let residual = |a: f64, b: f64| {
        let (p, q) = (eval(a), eval(b));
        [p[0] - q[0], p[1] - q[1]]
    };
    let mut f = residual(s0, s1);
    for _ in 0..40 {
        let (da, db) = (deriv(s0), deriv(s1));
        // J = [[da.x, -db.x], [da.y, -db.y]]
        let det = -da[0] * db[1] + db[0] * da[1];
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let step0 = (-db[1] * f[0] + db[0] * f[1]) / det;
        let step1 = (-da[1] * f[0] + da[0] * f[1]) / det;
        s0 -= step0;
        s1 -= step1;
        f = residual(s0, s1);
        if step0.abs().max(step1.abs()) < 1e-15 {
            break;
        }
    }
    (wrap(s0), wrap(s1), f[0].hypot(f[1]))
}

/// All self-crossings of the closed curve with samples `(u_k, v_k)`, as
/// ordered pairs `s0 < s1` in `[0, 1)`.
pub fn crossings(
    u: &[f64],
    v: &[f64],
    eval: impl Fn(f64) -> [f64; 2],
    deriv: impl Fn(f64) -> [f64; 2],
) -> Vec<(f64, f64)> {
    let n = u.len();
    let stride = (n / 16).clamp(1, DECIMATION);
    let m = n / stride;
    let pts: Vec<[f64; 2]> = (0..m).map(|i| [u[i * stride], v[i * stride]]).collect();
    let scale = pts
        .iter()
        .flatten()
        .fold(0.0f64, |a, b| a.max(b.abs()))
        .max(1.0);
    let boxes: Vec<[f64; 4]> = (0..m)
        .map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % m]);
            [a[0].min(b[0]), a[0].max(b[0]), a[1].min(b[1]), a[1].max(b[1])]
        })
        .collect();
    let step = stride as f64 / n as f64;
    let mut found: Vec<(f64, f64)> = Vec::new();
    for i in 0..m {
        for j in (i + 2)..m {
            if i == 0 && j == m - 1 {
                continue;
            }
            let (bi, bj) = (boxes[i], boxes[j]);
            if bi[1] < bj[0] || bj[1] < bi[0] || bi[3] < bj[2] || bj[3] < bi[2] {
                continue;
            }
            let Some((t, w)) = segment_hit(pts[i], pts[(i + 1) % m], pts[j], pts[(j + 1) % m]) else {
                continue;
            };
            let (a, b, res) = refine((i as f64 + t) * step, (j as f64 + w) * step, &eval, &deriv);
            if res > 1e-9 * scale || circular_gap(a, b) < DIAGONAL_STEPS / n as f64 {
                continue;
            }
            let pair = if a < b { (a, b) } else { (b, a) };
            if found
                .iter()
                .any(|p| circular_gap(p.0, pair.0) < 1e-7 && circular_gap(p.1, pair.1) < 1e-7)
            {
                continue;
            }
            found.push(pair);
        }
    }
    found.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
    found
}
