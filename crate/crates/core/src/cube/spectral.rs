//! Neumann cosine expansions on the cube.
//!
//! Coefficients are taken against the continuum-normalised modes
//! `φ_k(x) = Π_a C_{k_a} cos(π k_a x_a)` with `C_0 = 1`, `C_k = √2`, using cell
//! sums. At cell centres these modes are exactly orthonormal for the cell-sum
//! inner product, so `Σ_k c_k² = Σ_cells u² h^d`.

use std::f64::consts::{PI, SQRT_2};
use std::sync::Arc;

use rustdct::{Dct2, Dct3, DctPlanner};
use serde::{Deserialize, Serialize};

use super::grid::{for_each_line, CubeGrid, GridFunction};
use crate::lattice::weighted_count;
use crate::{Error, Result};

/// Planned forward and inverse cosine transforms for one grid shape.
pub(crate) struct CosineTransform {
    grid: CubeGrid,
    forward: Arc<dyn Dct2<f64>>,
    inverse: Arc<dyn Dct3<f64>>,
}

impl CosineTransform {
    pub(crate) fn new(grid: CubeGrid) -> Self {
        let mut planner = DctPlanner::new();
        Self { grid, forward: planner.plan_dct2(grid.n), inverse: planner.plan_dct3(grid.n) }
    }

    /// Continuum-normalised coefficients, same layout as the grid.
    pub(crate) fn coefficients(&self, values: &[f64]) -> Vec<f64> {
        let h = self.grid.h();
        let mut data = values.to_vec();
        for axis in 0..self.grid.d {
            for_each_line(self.grid, &mut data, axis, |line| {
                self.forward.process_dct2(line);
                line[0] *= h;
                line[1..].iter_mut().for_each(|c| *c *= h * SQRT_2);
            });
        }
        data
    }

    /// Cell values of `Σ_k c_k φ_k`.
    pub(crate) fn synthesize(&self, coeffs: &[f64]) -> Vec<f64> {
        let mut data = coeffs.to_vec();
        for axis in 0..self.grid.d {
            for_each_line(self.grid, &mut data, axis, |line| {
                line[0] *= 2.0;
                line[1..].iter_mut().for_each(|c| *c *= SQRT_2);
                self.inverse.process_dct3(line);
            });
        }
        data
    }

    /// Multiplies mode `k` by `f(k)` in place of a full round trip.
    pub(crate) fn filter(&self, values: &[f64], f: impl Fn(&[usize]) -> f64) -> Vec<f64> {
        let mut coeffs = self.coefficients(values);
        for (i, c) in coeffs.iter_mut().enumerate() {
            let k = self.grid.multi_index(i);
            *c *= f(&k[..self.grid.d]);
        }
        self.synthesize(&coeffs)
    }
}

fn require_power_of_two(grid: CubeGrid) -> Result<()> {
    if grid.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::Size(format!("cosine expansion needs n a power of two, got {}", grid.n)))
    }
}

/// `π²|k|²`, the Neumann eigenvalue of mode `k` on the unit cube.
pub fn mode_energy(k: &[usize]) -> f64 {
    PI * PI * k.iter().map(|&a| (a * a) as f64).sum::<f64>()
}

/// Eigenvalue of mode `k` for the grid Laplacian of
/// [`dirichlet_energy`](super::dirichlet_energy): `Σ_a (2 sin(π k_a / 2n) / h)²`.
pub fn discrete_mode_energy(grid: CubeGrid, k: &[usize]) -> f64 {
    let n = grid.n as f64;
    k.iter()
        .map(|&a| {
            let s = 2.0 * n * (PI * a as f64 / (2.0 * n)).sin();
            s * s
        })
        .sum()
}

pub fn cosine_coefficients(u: &GridFunction) -> Result<Vec<f64>> {
    require_power_of_two(u.grid())?;
    Ok(CosineTransform::new(u.grid()).coefficients(u.values()))
}

pub fn from_cosine_coefficients(grid: CubeGrid, coeffs: &[f64]) -> Result<GridFunction> {
    require_power_of_two(grid)?;
    if coeffs.len() != grid.len() {
        return Err(Error::Size(format!("expected {} coefficients, got {}", grid.len(), coeffs.len())));
    }
    GridFunction::new(grid, CosineTransform::new(grid).synthesize(coeffs))
}

/// Low-energy part `P_{<E}u`: modes with `π²|k|² < energy_cut`, the constant
/// mode only if `keep_mean`.
pub fn neumann_project(u: &GridFunction, energy_cut: f64, keep_mean: bool) -> Result<GridFunction> {
    require_power_of_two(u.grid())?;
    if !(energy_cut >= 0.0) {
        return Err(Error::Precondition(format!("energy_cut must be >= 0, got {energy_cut}")));
    }
    let t = CosineTransform::new(u.grid());
    let values = t.filter(u.values(), |k| {
        let e = mode_energy(k);
        let mean_mode = k.iter().all(|&a| a == 0);
        if e < energy_cut && (keep_mean || !mean_mode) {
            1.0
        } else {
            0.0
        }
    });
    GridFunction::new(u.grid(), values)
}

/// Neumann heat flow `e^{tΔ}u` evaluated mode by mode.
pub fn heat_smooth(u: &GridFunction, time: f64) -> Result<GridFunction> {
    if !(time >= 0.0) {
        return Err(Error::Precondition(format!("time must be >= 0, got {time}")));
    }
    let t = CosineTransform::new(u.grid());
    GridFunction::new(u.grid(), t.filter(u.values(), |k| (-time * mode_energy(k)).exp()))
}

/// Pointwise projector bound for one function and energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectorBound {
    pub energy_cut: f64,
    /// `max_x |P_{<E}v(x)|²`.
    pub max_square: f64,
    /// `∫v²`.
    pub l2_mass: f64,
    /// Weighted lattice count `S(⌊E/π²⌋)`.
    pub lattice_count: u64,
    pub holds: bool,
}

/// Compares `max |P_{<E}v|²` with `∫v² · S(⌊E/π²⌋)`, the constant mode removed.
pub fn projector_bound(v: &GridFunction, energy_cut: f64) -> Result<ProjectorBound> {
    let projected = neumann_project(v, energy_cut, false)?;
    let max_square = projected.values().iter().fold(0.0_f64, |m, x| m.max(x * x));
    let m = (energy_cut / (PI * PI)).floor();
    let lattice_count = if m < 1.0 { 0 } else { weighted_count(v.d() as u32, m as u64)? };
    let l2_mass = v.l2_mass();
    Ok(ProjectorBound {
        energy_cut,
        max_square,
        l2_mass,
        lattice_count,
        holds: max_square <= l2_mass * lattice_count as f64 + 1e-8,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_mode_round_trip() {
        let g = CubeGrid::new(2, 16).unwrap();
        let mode = GridFunction::from_fn(g, |x| 2.0 * (PI * x[0]).cos() * (PI * x[1]).cos()).unwrap();
        let c = cosine_coefficients(&mode).unwrap();
        let idx = 1 + g.n;
        assert!((c[idx] - 1.0).abs() < 1e-12);
        assert!(c.iter().enumerate().all(|(i, v)| i == idx || v.abs() < 1e-12));
        let back = from_cosine_coefficients(g, &c).unwrap();
        for (a, b) in back.values().iter().zip(mode.values()) {
            assert!((a - b).abs() < 1e-12);
        }
        let e = 2.0 * PI * PI;
        let kept = neumann_project(&mode, e + 1e-9, true).unwrap();
        assert!(kept.values().iter().zip(mode.values()).all(|(a, b)| (a - b).abs() < 1e-12));
        let cut = neumann_project(&mode, e - 1e-9, true).unwrap();
        assert!(cut.values().iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn projection_limits() {
        let g = CubeGrid::new(1, 32).unwrap();
        let u = GridFunction::from_fn(g, |x| 1.0 + x[0] * x[0]).unwrap();
        let zero = neumann_project(&u, 0.0, true).unwrap();
        assert!(zero.values().iter().all(|&v| v == 0.0));
        let full = neumann_project(&u, f64::INFINITY, true).unwrap();
        assert!(full.values().iter().zip(u.values()).all(|(a, b)| (a - b).abs() < 1e-12));
        let no_mean = neumann_project(&u, f64::INFINITY, false).unwrap();
        assert!(no_mean.integral().abs() < 1e-12);
        assert!(neumann_project(&u, -1.0, true).is_err());
        let odd = GridFunction::zeros(CubeGrid::new(1, 12).unwrap());
        assert!(matches!(neumann_project(&odd, 1.0, true), Err(Error::Size(_))));
    }

    #[test]
    fn discrete_eigenvalues_diagonalise_laplacian() {
        let g = CubeGrid::new(2, 8).unwrap();
        let k = [3, 2];
        let mode = GridFunction::from_fn(g, |x| (3.0 * PI * x[0]).cos() * (2.0 * PI * x[1]).cos()).unwrap();
        let lu = super::super::quotient::neumann_laplacian(&mode);
        let lam = discrete_mode_energy(g, &k);
        for (a, b) in lu.iter().zip(mode.values()) {
            assert!((a - lam * b).abs() < 1e-9 * lam);
        }
    }
}
