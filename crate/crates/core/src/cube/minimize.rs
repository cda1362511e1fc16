use serde::{Deserialize, Serialize};

use super::grid::GridFunction;
use super::quotient::{neumann_laplacian, power_exponent, quotient};
use super::spectral::{discrete_mode_energy, CosineTransform};
use crate::Result;

/// Halvings tried by the line search before the descent gives up.
const MAX_HALVINGS: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimizeResult {
    /// Final iterate, rescaled to `∫u² = 1`.
    pub u: GridFunction,
    /// Quotient before the first step and after every accepted step;
    /// nonincreasing.
    pub trace: Vec<f64>,
    pub iterations: usize,
    /// Stopped on `rel_tol` or an exhausted line search rather than `max_iters`.
    pub converged: bool,
}

impl MinimizeResult {
    pub fn final_quotient(&self) -> f64 {
        *self.trace.last().expect("trace is never empty")
    }
}

/// L²-gradient of `log Q`: `2Au/K + (4/d)u/M − p(φ − φ̄)/D` with
/// `φ = |u − ū|^{p−2}(u − ū)`.
fn log_gradient(u: &GridFunction, k: f64, m: f64, mean: f64, denom: f64) -> Vec<f64> {
    let p = power_exponent(u.d());
    let lap = neumann_laplacian(u);
    let phi: Vec<f64> = u
        .values()
        .iter()
        .map(|v| {
            let w = v - mean;
            w.abs().powf(p - 2.0) * w
        })
        .collect();
    let phi_mean = phi.iter().sum::<f64>() / phi.len() as f64;
    let dscale = 4.0 / u.d() as f64;
    u.values()
        .iter()
        .zip(&lap)
        .zip(&phi)
        .map(|((v, l), f)| 2.0 * l / k + dscale * v / m - p * (f - phi_mean) / denom)
        .collect()
}

/// Preconditioned gradient descent on the cube quotient.
///
/// The gradient is smoothed by `(A + μ)^{-1}`, with `A` the grid Neumann
/// Laplacian and `μ = K/M`, which is diagonal in the cosine basis. Each step
/// backtracks by halving from `t = 1`, where `t = 1` moves `u` by `‖u‖`,
/// and takes the better of the first decreasing `t` and `t/2`. The descent
/// stops without stepping once the relative decrease falls below `rel_tol`.
pub fn minimize(u0: &GridFunction, max_iters: usize, rel_tol: f64) -> Result<MinimizeResult> {
    let grid = u0.grid();
    let transform = CosineTransform::new(grid);
    let eigen: Vec<f64> = (0..grid.len())
        .map(|i| discrete_mode_energy(grid, &grid.multi_index(i)[..grid.d]))
        .collect();
    let cell = grid.cell_volume();
    let norm = |v: &[f64]| (v.iter().map(|x| x * x).sum::<f64>() * cell).sqrt();

    let mut u = u0.clone();
    let mut q = quotient(&u)?;
    let mut trace = vec![q.quotient];
    let mut iterations = 0;
    let mut converged = false;

    while iterations < max_iters {
        let g = log_gradient(&u, q.grad_energy, q.l2_mass, q.mean, q.denom);
        let mu = q.grad_energy / q.l2_mass;
        let mut coeffs = transform.coefficients(&g);
        for (c, lam) in coeffs.iter_mut().zip(&eigen) {
            *c /= lam + mu;
        }
        let s = transform.synthesize(&coeffs);
        let s_norm = norm(&s);
        if !(s_norm > 0.0 && s_norm.is_finite()) {
            converged = true;
            break;
        }
        let scale = norm(u.values()) / s_norm;
        let step = |t: f64| -> Option<(GridFunction, f64)> {
            let values = u.values().iter().zip(&s).map(|(v, d)| v - t * scale * d).collect();
            let cand = GridFunction::new(grid, values).ok()?;
            let cq = quotient(&cand).ok()?.quotient;
            cq.is_finite().then_some((cand, cq))
        };

        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            if let Some((cand, cq)) = step(t) {
                if cq < q.quotient {
                    accepted = match step(t / 2.0) {
                        Some((half, hq)) if hq < cq => Some((half, hq)),
                        _ => Some((cand, cq)),
                    };
                    break;
                }
            }
            t /= 2.0;
        }
        let Some((next, next_q)) = accepted else {
            converged = true;
            break;
        };
        if (q.quotient - next_q) / q.quotient < rel_tol {
            converged = true;
            break;
        }
        let inv = 1.0 / norm(next.values());
        u = next.map(|v| v * inv);
        q = quotient(&u)?;
        trace.push(q.quotient);
        iterations += 1;
    }
    let inv = 1.0 / norm(u.values());
    Ok(MinimizeResult { u: u.map(|v| v * inv), trace, iterations, converged })
}
