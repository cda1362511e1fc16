//! Seeded drivers for the cube experiments.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::grid::{CubeGrid, GridFunction};
use super::minimize::minimize;
use super::quotient::{dirichlet_energy, quotient};
use super::rearrange::{rearrange_corner, RearrangeConfig};
use super::spectral::CosineTransform;
use crate::ground_state::{scaled_test_function, solve_ground_state, RadialProfile};
use crate::{Error, Result};

/// Highest per-axis frequency in [`random_zero_mean`].
pub const RANDOM_MODE_CUTOFF: usize = 3;

/// Random combination of the cosine modes with every `k_a ≤ 3`, constant
/// mode excluded, coefficients uniform in `[−1, 1]`.
pub fn random_zero_mean(grid: CubeGrid, seed: u64) -> GridFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs = vec![0.0; grid.len()];
    for (i, c) in coeffs.iter_mut().enumerate() {
        let k = grid.multi_index(i);
        let k = &k[..grid.d];
        if k.iter().all(|&a| a <= RANDOM_MODE_CUTOFF) && k.iter().any(|&a| a > 0) {
            *c = rng.random_range(-1.0..=1.0);
        }
    }
    GridFunction::new(grid, CosineTransform::new(grid).synthesize(&coeffs)).expect("length matches grid")
}

/// `exp(−|x|²/σ²)`, centred at the corner.
pub fn corner_gaussian(grid: CubeGrid, sigma: f64) -> GridFunction {
    GridFunction::from_fn(grid, |x| (-x.iter().map(|c| c * c).sum::<f64>() / (sigma * sigma)).exp())
        .expect("length matches grid")
}

/// Sum of one to three bumps `a(1 − |x − c|²/r²)₊²` with support at most `max_support`.
pub fn random_bumps(grid: CubeGrid, rng: &mut impl Rng, max_support: f64) -> GridFunction {
    let ball = |r: f64| match grid.d {
        1 => 2.0 * r,
        2 => PI * r * r,
        _ => 4.0 * PI * r * r * r / 3.0,
    };
    loop {
        let count = rng.random_range(1..=3);
        let bumps: Vec<([f64; 3], f64, f64)> = (0..count)
            .map(|_| {
                let mut c = [0.0; 3];
                c.iter_mut().take(grid.d).for_each(|x| *x = rng.random_range(0.0..1.0));
                (c, rng.random_range(0.03..0.3), rng.random_range(0.5..2.0))
            })
            .collect();
        if bumps.iter().map(|b| ball(b.1)).sum::<f64>() > 0.9 * max_support {
            continue;
        }
        let u = GridFunction::from_fn(grid, |x| {
            bumps
                .iter()
                .map(|(c, r, a)| {
                    let s = x.iter().zip(c).map(|(xi, ci)| (xi - ci).powi(2)).sum::<f64>() / (r * r);
                    if s < 1.0 {
                        a * (1.0 - s).powi(2)
                    } else {
                        0.0
                    }
                })
                .sum()
        })
        .expect("length matches grid");
        if u.support_measure() <= max_support && u.support_measure() > 0.0 {
            return u;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationSettings {
    /// Corner Gaussian width of the initial datum.
    pub sigma: f64,
    pub max_iters: usize,
    pub rel_tol: f64,
}

impl Default for ConcentrationSettings {
    fn default() -> Self {
        Self { sigma: 0.125, max_iters: 4000, rel_tol: 1e-9 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationRow {
    pub n: usize,
    pub final_quotient: f64,
    /// `sup|u|` at `∫u² = 1`.
    pub sup_norm: f64,
    /// Fraction of cells where `|u − ū| ≥ 0.01·sup|u − ū|`.
    pub support_fraction: f64,
    pub iterations: usize,
}

pub fn concentration_experiment(d: usize, resolutions: &[usize]) -> Result<Vec<ConcentrationRow>> {
    concentration_experiment_with(d, resolutions, &ConcentrationSettings::default())
}

pub fn concentration_experiment_with(
    d: usize,
    resolutions: &[usize],
    settings: &ConcentrationSettings,
) -> Result<Vec<ConcentrationRow>> {
    if !(1..=2).contains(&d) {
        return Err(Error::Domain(format!("concentration runs support d in {{1, 2}}, got {d}")));
    }
    if resolutions.is_empty() || resolutions.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Precondition("resolutions must be non-empty and strictly increasing".into()));
    }
    resolutions
        .iter()
        .map(|&n| {
            let grid = CubeGrid::new(d, n)?;
            let res = minimize(&corner_gaussian(grid, settings.sigma), settings.max_iters, settings.rel_tol)?;
            let mean = res.u.integral();
            let dev: Vec<f64> = res.u.values().iter().map(|v| (v - mean).abs()).collect();
            let peak = dev.iter().fold(0.0_f64, |m, v| m.max(*v));
            let support = dev.iter().filter(|&&v| v >= 0.01 * peak).count();
            Ok(ConcentrationRow {
                n,
                final_quotient: res.final_quotient(),
                sup_norm: res.u.sup_norm(),
                support_fraction: support as f64 / grid.len() as f64,
                iterations: res.iterations,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RearrangeSummary {
    pub d: usize,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Largest `E(u*)/E(u)` observed.
    pub max_energy_ratio: f64,
    /// `1 + 5h`.
    pub allowed_ratio: f64,
    pub equimeasurable: bool,
    pub energy_failures: usize,
    pub passed: bool,
}

/// Rearranges `trials` random bump functions with support at most `V_d`.
pub fn rearrange_check(d: usize, n: usize, trials: usize, seed: u64) -> Result<RearrangeSummary> {
    let grid = CubeGrid::new(d, n)?;
    let cfg = RearrangeConfig::for_dim(d, false)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let allowed_ratio = 1.0 + 5.0 * grid.h();
    let mut max_energy_ratio = 0.0_f64;
    let mut energy_failures = 0;
    let mut equimeasurable = true;
    for _ in 0..trials {
        let u = random_bumps(grid, &mut rng, cfg.v_threshold);
        let r = rearrange_corner(&u, &cfg)?;
        let mut a = u.values().to_vec();
        let mut b = r.values().to_vec();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        equimeasurable &= a == b;
        let ratio = dirichlet_energy(&r) / dirichlet_energy(&u);
        max_energy_ratio = max_energy_ratio.max(ratio);
        if ratio > allowed_ratio {
            energy_failures += 1;
        }
    }
    Ok(RearrangeSummary {
        d,
        n,
        trials,
        seed,
        max_energy_ratio,
        allowed_ratio,
        equimeasurable,
        energy_failures,
        passed: equimeasurable && energy_failures == 0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub lambda: f64,
    pub n: usize,
    pub quotient: f64,
    /// `∫_Q u_λ² / (2^{−d} ∫_{ℝ^d} g²)`, at most 1 up to quadrature error.
    pub mass_fraction: f64,
}

/// Smallest power-of-two resolution with `h ≤ 1/(16λ)` for every `λ`.
pub fn scaling_resolution(lambdas: &[f64]) -> usize {
    let top = lambdas.iter().fold(1.0_f64, |m, l| m.max(*l));
    ((16.0 * top).ceil() as usize).next_power_of_two()
}

/// Cube quotients of `λ^{d/2} g(λ|x|)` for the ground state `g`.
pub fn upper_bound_scaling(d: usize, lambdas: &[f64], n: Option<usize>) -> Result<Vec<ScalingRow>> {
    let profile = solve_ground_state(d as u32, 1e-12)?;
    upper_bound_scaling_with(&profile, lambdas, n)
}

pub fn upper_bound_scaling_with(profile: &RadialProfile, lambdas: &[f64], n: Option<usize>) -> Result<Vec<ScalingRow>> {
    let n = n.unwrap_or_else(|| scaling_resolution(lambdas));
    let grid = CubeGrid::new(profile.d as usize, n)?;
    let full = profile.l2_mass / 2f64.powi(profile.d as i32);
    lambdas
        .iter()
        .map(|&lambda| {
            let u = scaled_test_function(profile, lambda, grid)?;
            Ok(ScalingRow { lambda, n, quotient: quotient(&u)?.quotient, mass_fraction: u.l2_mass() / full })
        })
        .collect()
}
