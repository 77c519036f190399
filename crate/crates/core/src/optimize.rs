//! Small derivative-free maximizer for smooth objectives under inequality
//! constraints `g_i(x) >= 0`: seeded multi-start, log barrier with a
//! decreasing weight, Nelder-Mead on each barrier problem.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub starts: usize,
    /// Starts that ended at a feasible point.
    pub converged: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub starts: usize,
    pub seed: u64,
    /// Barrier weights run from `mu_start` down to below `mu_end`, divided by
    /// ten each round.
    pub mu_start: f64,
    pub mu_end: f64,
    pub simplex_scale: f64,
    pub max_iter: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Self { starts: 64, seed: 0x5eed, mu_start: 1e-2, mu_end: 1e-11, simplex_scale: 0.05, max_iter: 20_000 }
    }
}

fn nelder_mead(f: &dyn Fn(&[f64]) -> f64, x0: &[f64], scale: f64, max_iter: usize) -> Vec<f64> {
    let n = x0.len();
    let mut pts: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..n {
        let mut s = scale;
        let mut p = x0.to_vec();
        p[i] += s;
        // keep the initial simplex inside the barrier domain
        while !f(&p).is_finite() && s > 1e-12 {
            s = -s * 0.5;
            p = x0.to_vec();
            p[i] += s;
        }
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| f(p)).collect();
    let along = |c: &[f64], w: &[f64], t: f64| -> Vec<f64> { c.iter().zip(w).map(|(a, b)| a + t * (b - a)).collect() };
    for _ in 0..max_iter {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
        pts = order.iter().map(|&i| pts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();
        let spread = (0..n).map(|j| libm::fabs(pts[n][j] - pts[0][j])).fold(0.0, f64::max);
        if libm::fabs(vals[n] - vals[0]) < 1e-15 && spread < 1e-11 {
            break;
        }
        let mut c = vec![0.0; n];
        for p in &pts[..n] {
            for (cj, pj) in c.iter_mut().zip(p) {
                *cj += pj / n as f64;
            }
        }
        let worst = pts[n].clone();
        let xr = along(&c, &worst, -1.0);
        let fr = f(&xr);
        if fr < vals[0] {
            let xe = along(&c, &worst, -2.0);
            let fe = f(&xe);
            if fe < fr {
                pts[n] = xe;
                vals[n] = fe;
            } else {
                pts[n] = xr;
                vals[n] = fr;
            }
        } else if fr < vals[n - 1] {
            pts[n] = xr;
            vals[n] = fr;
        } else {
            let xc = along(&c, &worst, 0.5);
            let fc = f(&xc);
            if fc < vals[n] {
                pts[n] = xc;
                vals[n] = fc;
            } else {
                let best = pts[0].clone();
                for i in 1..=n {
                    pts[i] = along(&best, &pts[i], 0.5);
                    vals[i] = f(&pts[i]);
                }
            }
        }
    }
    let i = (0..=n).min_by(|&i, &j| vals[i].total_cmp(&vals[j])).unwrap_or(0);
    pts[i].clone()
}

/// Maximize `objective` over the box `[lo, hi]^dim` intersected with
/// `{x : g(x) >= 0 componentwise}`. Starting points are drawn uniformly from
/// the strict interior (rejection sampling, at most 10^5 draws per start).
/// Returns `None` when no strictly feasible start is found.
pub fn maximize(
    dim: usize,
    lo: f64,
    hi: f64,
    objective: &dyn Fn(&[f64]) -> f64,
    constraints: &dyn Fn(&[f64]) -> Vec<f64>,
    settings: &Settings,
) -> Option<Optimum> {
    let margins = |x: &[f64]| -> Vec<f64> {
        let mut m = constraints(x);
        m.extend(x.iter().map(|v| v - lo));
        m.extend(x.iter().map(|v| hi - v));
        m
    };
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let mut best: Option<Optimum> = None;
    let mut converged = 0;
    for _ in 0..settings.starts {
        let mut x = None;
        for _ in 0..100_000 {
            let cand: Vec<f64> = (0..dim).map(|_| rng.random_range(lo..hi)).collect();
            if margins(&cand).iter().all(|&m| m > 0.0) {
                x = Some(cand);
                break;
            }
        }
        let Some(mut x) = x else { continue };
        let mut mu = settings.mu_start;
        while mu > settings.mu_end {
            let barrier = |v: &[f64]| -> f64 {
                let m = margins(v);
                if m.iter().any(|&c| c <= 0.0 || c.is_nan()) {
                    return f64::INFINITY;
                }
                -objective(v) - mu * m.iter().map(|&c| libm::log(c)).sum::<f64>()
            };
            // restart until the simplex stops improving; collapsed simplices
            // stall near corners of the domain
            let mut fx = barrier(&x);
            for _ in 0..8 {
                let y = nelder_mead(&barrier, &x, settings.simplex_scale, settings.max_iter);
                let fy = barrier(&y);
                let gain = fx - fy;
                if fy < fx {
                    x = y;
                    fx = fy;
                }
                if gain.is_nan() || gain <= 1e-14 {
                    break;
                }
            }
            mu /= 10.0;
        }
        if margins(&x).iter().all(|&m| m >= 0.0) {
            converged += 1;
            let value = objective(&x);
            if best.as_ref().is_none_or(|b| value > b.value) {
                best = Some(Optimum { x, value, starts: settings.starts, converged: 0 });
            }
        }
    }
    best.map(|mut b| {
        b.converged = converged;
        b
    })
}

/// Coordinate pattern search maximizing `score` from `x0` inside the box,
/// halving the step from `step` down to `min_step`.
pub fn pattern_search(score: &dyn Fn(&[f64]) -> f64, x0: &[f64], lo: f64, hi: f64, step: f64, min_step: f64) -> (Vec<f64>, f64) {
    let mut x = x0.to_vec();
    let mut fx = score(&x);
    let mut h = step;
    while h >= min_step {
        let mut moved = false;
        for i in 0..x.len() {
            for dir in [1.0, -1.0] {
                let mut y = x.clone();
                y[i] = (y[i] + dir * h).clamp(lo, hi);
                let fy = score(&y);
                if fy > fx {
                    x = y;
                    fx = fy;
                    moved = true;
                }
            }
        }
        if !moved {
            h *= 0.5;
        }
    }
    (x, fx)
}
