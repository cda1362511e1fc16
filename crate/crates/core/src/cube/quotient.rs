use serde::{Deserialize, Serialize};

use super::grid::GridFunction;
use crate::{Error, Result};

/// Exponent `2 + 4/d` of the denominator.
pub fn power_exponent(d: usize) -> f64 {
    2.0 + 4.0 / d as f64
}

/// Discrete `∫|∇u|²`: squared forward differences across interior faces,
/// no flux through the boundary of the cube.
pub fn dirichlet_energy(u: &GridFunction) -> f64 {
    let grid = u.grid();
    let v = u.values();
    let n = grid.n;
    let mut acc = 0.0;
    for axis in 0..grid.d {
        let stride = grid.stride(axis);
        for i in 0..v.len() {
            if (i / stride) % n + 1 < n {
                let diff = v[i + stride] - v[i];
                acc += diff * diff;
            }
        }
    }
    acc * grid.h().powi(grid.d as i32 - 2)
}

/// `(Lu)_i = Σ_{j ~ i} (u_i − u_j) / h²`, the Neumann Laplacian whose quadratic
/// form is [`dirichlet_energy`].
pub(crate) fn neumann_laplacian(u: &GridFunction) -> Vec<f64> {
    let grid = u.grid();
    let v = u.values();
    let n = grid.n;
    let inv_h2 = 1.0 / (grid.h() * grid.h());
    let mut out = vec![0.0; v.len()];
    for axis in 0..grid.d {
        let stride = grid.stride(axis);
        for i in 0..v.len() {
            if (i / stride) % n + 1 < n {
                let diff = (v[i] - v[i + stride]) * inv_h2;
                out[i] += diff;
                out[i + stride] -= diff;
            }
        }
    }
    out
}

/// Parts of the cube quotient `K·M^{2/d} / ∫|u − ū|^{2+4/d}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuotientBreakdown {
    pub grad_energy: f64,
    pub l2_mass: f64,
    pub mean: f64,
    pub denom: f64,
    pub quotient: f64,
}

/// The discrete variational quotient of `u`.
pub fn quotient(u: &GridFunction) -> Result<QuotientBreakdown> {
    let (lo, hi) = u
        .values()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::Degenerate("non-finite grid values".into()));
    }
    if hi - lo <= 1e-14 * lo.abs().max(hi.abs()) {
        return Err(Error::Degenerate("constant function has zero denominator".into()));
    }
    let p = power_exponent(u.d());
    let mean = u.integral();
    let cell = u.grid().cell_volume();
    let denom = u.values().iter().map(|v| (v - mean).abs().powf(p)).sum::<f64>() * cell;
    if !(denom.is_normal() && denom > 0.0) {
        return Err(Error::Degenerate(format!("denominator underflow ({denom:e})")));
    }
    let grad_energy = dirichlet_energy(u);
    let l2_mass = u.l2_mass();
    let quotient = grad_energy * l2_mass.powf(2.0 / u.d() as f64) / denom;
    Ok(QuotientBreakdown { grad_energy, l2_mass, mean, denom, quotient })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::CubeGrid;
    use std::f64::consts::PI;

    #[test]
    fn cosine_quotients() {
        let g = CubeGrid::new(1, 1024).unwrap();
        let u = GridFunction::from_fn(g, |x| (PI * x[0]).cos()).unwrap();
        let q = quotient(&u).unwrap();
        assert!((q.mean).abs() < 1e-12);
        assert!(((q.quotient - 2.0 * PI * PI / 5.0) / (2.0 * PI * PI / 5.0)).abs() < 1e-4);
        assert!((dirichlet_energy(&u) - PI * PI / 2.0).abs() < 1e-5);
    }

    #[test]
    fn ramp_energy_and_constant() {
        let g = CubeGrid::new(1, 100).unwrap();
        let ramp = GridFunction::from_fn(g, |x| x[0]).unwrap();
        assert!((dirichlet_energy(&ramp) - 1.0).abs() < 2.0 / 100.0);
        let c = GridFunction::from_fn(g, |_| 3.0).unwrap();
        assert_eq!(dirichlet_energy(&c), 0.0);
        assert!(matches!(quotient(&c), Err(Error::Degenerate(_))));
    }

    #[test]
    fn laplacian_matches_energy_form() {
        let g = CubeGrid::new(2, 7).unwrap();
        let u = GridFunction::from_fn(g, |x| (3.0 * x[0]).sin() * x[1] * x[1]).unwrap();
        let lu = neumann_laplacian(&u);
        let form: f64 = u.values().iter().zip(&lu).map(|(a, b)| a * b).sum::<f64>() * g.cell_volume();
        assert!((form - dirichlet_energy(&u)).abs() < 1e-12);
    }
}
