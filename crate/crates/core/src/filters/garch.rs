//! GARCH(1,1) Gaussian quasi-maximum likelihood.
//!
//! Variance recursion: σ̃²₁ = ω, σ̃²_t = ω + α y²_{t-1} + β σ̃²_{t-1}.
//! The optimizer works on an unconstrained reparameterization
//!
//! ```text
//! ω = exp(a),  P = logistic(c),  u = logistic(d),  α = P u,  β = P (1 - u)
//! ```
//!
//! so that ω > 0, α > 0, β > 0 and α + β < 1 hold at every iterate.

/// Parameter vector `(ω, α, β)`.
pub type Theta = [f64; 3];

const MAX_ITER: usize = 500;
const GTOL: f64 = 1e-9;
const FTOL: f64 = 1e-15;
const FLAT_STEPS: usize = 4;
const BOUND: f64 = 40.0;

/// Boundary tolerance on `α + β`.
pub const BOUNDARY_TOL: f64 = 1e-6;

/// Conditional variances and their gradients along the sample.
pub fn variance_path(y: &[f64], theta: &Theta) -> (Vec<f64>, Vec<[f64; 3]>) {
    let [omega, alpha, beta] = *theta;
    let n = y.len();
    let mut s2 = Vec::with_capacity(n);
    let mut ds2 = Vec::with_capacity(n);
    let mut cur = omega;
    let mut dcur = [1.0, 0.0, 0.0];
    s2.push(cur);
    ds2.push(dcur);
    for t in 1..n {
        let y2 = y[t - 1] * y[t - 1];
        let next_d = [
            1.0 + beta * dcur[0],
            y2 + beta * dcur[1],
            cur + beta * dcur[2],
        ];
        cur = omega + alpha * y2 + beta * cur;
        dcur = next_d;
        s2.push(cur);
        ds2.push(dcur);
    }
    (s2, ds2)
}

/// Mean negative quasi-log-likelihood (optionally weighted) and its gradient in θ.
///
/// `f = (1/2n) Σ w_t (ln σ̃²_t + y²_t / σ̃²_t)`.
pub fn objective(y: &[f64], weights: Option<&[f64]>, theta: &Theta) -> (f64, [f64; 3]) {
    let [omega, alpha, beta] = *theta;
    let n = y.len();
    let mut f = 0.0;
    let mut g = [0.0; 3];
    let mut s2 = omega;
    let mut d = [1.0, 0.0, 0.0];
    for t in 0..n {
        if t > 0 {
            let y2 = y[t - 1] * y[t - 1];
            d = [1.0 + beta * d[0], y2 + beta * d[1], s2 + beta * d[2]];
            s2 = omega + alpha * y2 + beta * s2;
        }
        if !(s2 > 0.0 && s2.is_finite()) {
            return (f64::INFINITY, [0.0; 3]);
        }
        let w = weights.map_or(1.0, |w| w[t]);
        let e2 = y[t] * y[t] / s2;
        f += w * (s2.ln() + e2);
        let c = w * (1.0 - e2) / s2;
        for i in 0..3 {
            g[i] += c * d[i];
        }
    }
    let scale = 0.5 / n as f64;
    (f * scale, g.map(|v| v * scale))
}

#[inline]
fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

#[inline]
fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

pub(crate) fn to_theta(x: &[f64; 3]) -> Theta {
    let p = logistic(x[1]);
    let u = logistic(x[2]);
    [x[0].exp(), p * u, p * (1.0 - u)]
}

pub(crate) fn from_theta(theta: &Theta) -> [f64; 3] {
    let p = theta[1] + theta[2];
    [theta[0].ln(), logit(p), logit(theta[1] / p)]
}

/// Objective and gradient in the unconstrained coordinates.
fn reparam_eval(y: &[f64], w: Option<&[f64]>, x: &[f64; 3]) -> (f64, [f64; 3]) {
    let theta = to_theta(x);
    let (f, g) = objective(y, w, &theta);
    if !f.is_finite() {
        return (f, [0.0; 3]);
    }
    let p = logistic(x[1]);
    let u = logistic(x[2]);
    let dp = p * (1.0 - p);
    let du = p * u * (1.0 - u);
    let gx = [
        g[0] * theta[0],
        g[1] * dp * u + g[2] * dp * (1.0 - u),
        (g[1] - g[2]) * du,
    ];
    (f, gx)
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Optimum {
    pub theta: Theta,
    pub value: f64,
    pub iterations: usize,
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn inf_norm(a: &[f64; 3]) -> f64 {
    a.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

fn clamp(x: [f64; 3]) -> [f64; 3] {
    x.map(|v| v.clamp(-BOUND, BOUND))
}

/// BFGS with Armijo backtracking from a single start. `None` on failure.
fn bfgs(y: &[f64], w: Option<&[f64]>, start: &Theta) -> Option<Optimum> {
    let mut x = clamp(from_theta(start));
    let (mut f, mut g) = reparam_eval(y, w, &x);
    if !f.is_finite() {
        return None;
    }
    let mut h = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let identity = h;
    let mut flat = 0;
    for iter in 0..MAX_ITER {
        if inf_norm(&g) < GTOL || flat >= FLAT_STEPS {
            return Some(Optimum {
                theta: to_theta(&x),
                value: f,
                iterations: iter,
            });
        }
        let mut p = [0.0; 3];
        for i in 0..3 {
            p[i] = -(h[i][0] * g[0] + h[i][1] * g[1] + h[i][2] * g[2]);
        }
        let mut slope = dot(&g, &p);
        if slope >= 0.0 {
            h = identity;
            p = g.map(|v| -v);
            slope = dot(&g, &p);
        }
        let mut step = 1.0;
        let mut accepted = None;
        while step > 1e-14 {
            let xn = clamp([x[0] + step * p[0], x[1] + step * p[1], x[2] + step * p[2]]);
            let (fn_, gn) = reparam_eval(y, w, &xn);
            if fn_.is_finite() && fn_ <= f + 1e-4 * step * slope {
                accepted = Some((xn, fn_, gn));
                break;
            }
            step *= 0.5;
        }
        let Some((xn, fn_, gn)) = accepted else {
            // No decrease representable: stationary up to rounding.
            return (inf_norm(&g) < 1e-5).then(|| Optimum {
                theta: to_theta(&x),
                value: f,
                iterations: iter,
            });
        };
        let sv = [xn[0] - x[0], xn[1] - x[1], xn[2] - x[2]];
        let yv = [gn[0] - g[0], gn[1] - g[1], gn[2] - g[2]];
        let sy = dot(&sv, &yv);
        if sy > 1e-14 * dot(&sv, &sv).sqrt() * dot(&yv, &yv).sqrt() && sy > 0.0 {
            let rho = 1.0 / sy;
            let mut hy = [0.0; 3];
            for i in 0..3 {
                hy[i] = h[i][0] * yv[0] + h[i][1] * yv[1] + h[i][2] * yv[2];
            }
            let yhy = dot(&yv, &hy);
            for i in 0..3 {
                for j in 0..3 {
                    h[i][j] += (1.0 + yhy * rho) * rho * sv[i] * sv[j]
                        - rho * (hy[i] * sv[j] + sv[i] * hy[j]);
                }
            }
        }
        if (f - fn_).abs() <= FTOL * f.abs().max(1.0) {
            flat += 1;
        } else {
            flat = 0;
        }
        x = xn;
        f = fn_;
        g = gn;
    }
    None
}

/// Multi-start QML estimate. Returns `None` when no start converges.
pub(crate) fn estimate(y: &[f64], w: Option<&[f64]>) -> Option<Optimum> {
    let var = y.iter().map(|v| v * v).sum::<f64>() / y.len() as f64;
    let var = if var > 0.0 { var } else { 1.0 };
    let starts: [Theta; 3] = [
        [var * 0.5, 0.1, 0.8],
        [var * 0.3, 0.2, 0.5],
        [var * 0.8, 0.05, 0.9],
    ];
    starts
        .iter()
        .filter_map(|s| bfgs(y, w, s))
        .fold(None, |best: Option<Optimum>, o| match best {
            Some(b) if b.value <= o.value => Some(b),
            _ => Some(o),
        })
}
