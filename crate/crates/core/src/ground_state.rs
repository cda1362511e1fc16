//! Radial ground state of `−Δu + u = u^{1+4/d}` by shooting, and the
//! numerical value of the sharp GNS constant `G(d)` it yields.
//!
//! Minimizers of `‖∇u‖² ‖u‖^{4/d} / ‖u‖_{2+4/d}^{2+4/d}` can be rescaled to
//! solve the equation above, and the quotient is invariant under
//! `u → a·u(b·x)`, so the canonical normalisation loses nothing. The radial
//! ODE `u″ + ((d−1)/r)u′ − u + u^q = 0` is integrated with classical RK4 on a
//! uniform grid and `u(0)` is bisected: a shot that crosses zero started too
//! high, a shot whose slope turns positive started too low.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cube::{CubeGrid, GridFunction};
use crate::special::{binomial, sphere_area};
use crate::{Error, Result};

/// Largest residual accepted by [`gns_numeric`].
pub const RESIDUAL_GATE: f64 = 1e-4;
/// Finest bisection tolerance accepted by [`solve_ground_state`].
pub const MIN_TOL: f64 = 1e-12;
pub const MAX_DIM: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootingConfig {
    /// RK4 step.
    pub step: f64,
    /// Radius at which a shot without a decision is classified as undershoot.
    pub r_max: f64,
    /// Initial bisection bracket for `u(0)`.
    pub bracket: (f64, f64),
    /// The upper end is doubled up to this value if it does not overshoot.
    pub max_upper: f64,
    pub max_iterations: usize,
    /// The profile is cut where the two bracketing shots differ by this
    /// fraction of `u`.
    pub trust_ratio: f64,
    /// The profile is also cut once `u` drops below this value.
    pub floor: f64,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        Self {
            step: 1e-3,
            r_max: 25.0,
            bracket: (1.0, 10.0),
            max_upper: 1e3,
            max_iterations: 200,
            trust_ratio: 1e-3,
            floor: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShotOutcome {
    /// `u` crossed zero.
    Overshoot,
    /// `u′` turned positive while `u > 0`, or no decision before `r_max`.
    Undershoot,
}

struct Trajectory {
    u: Vec<f64>,
    du: Vec<f64>,
    outcome: ShotOutcome,
}

fn exponent(d: u32) -> f64 {
    1.0 + 4.0 / f64::from(d)
}

/// Integrate from `r = 0` with the series start `u ≈ u0 + (u0 − u0^q) r²/(2d)`.
fn shoot(d: u32, u0: f64, cfg: &ShootingConfig, store: bool) -> Trajectory {
    let q = exponent(d);
    let dm1 = f64::from(d) - 1.0;
    let h = cfg.step;
    let rhs = |r: f64, u: f64, v: f64| (v, -dm1 / r * v + u - u.abs().powf(q - 1.0) * u);

    let c = (u0 - u0.powf(q)) / (2.0 * f64::from(d));
    let mut r = h;
    let mut u = u0 + c * h * h;
    let mut v = 2.0 * c * h;
    let mut us = vec![u0, u];
    let mut vs = vec![0.0, v];
    let steps = (cfg.r_max / h).ceil() as usize;
    let mut outcome = ShotOutcome::Undershoot;
    let classify = |u: f64, v: f64| {
        if u < 0.0 {
            Some(ShotOutcome::Overshoot)
        } else if v > 0.0 {
            Some(ShotOutcome::Undershoot)
        } else {
            None
        }
    };
    if let Some(o) = classify(u, v) {
        return Trajectory { u: us, du: vs, outcome: o };
    }
    for _ in 1..steps {
        let (k1u, k1v) = rhs(r, u, v);
        let (k2u, k2v) = rhs(r + h / 2.0, u + h / 2.0 * k1u, v + h / 2.0 * k1v);
        let (k3u, k3v) = rhs(r + h / 2.0, u + h / 2.0 * k2u, v + h / 2.0 * k2v);
        let (k4u, k4v) = rhs(r + h, u + h * k3u, v + h * k3v);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        r += h;
        if store {
            us.push(u);
            vs.push(v);
        }
        if let Some(o) = classify(u, v) {
            outcome = o;
            break;
        }
    }
    Trajectory { u: us, du: vs, outcome }
}

/// Classify a single shot; exposed for diagnostics and tests.
pub fn classify_shot(d: u32, u0: f64, cfg: &ShootingConfig) -> ShotOutcome {
    shoot(d, u0, cfg, false).outcome
}

/// Sampled radial ground state and its integrals over ℝ^d.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub d: u32,
    /// Shooting parameter `u(0)`.
    pub u0: f64,
    /// Grid spacing; sample `i` sits at `r = i·step`.
    pub step: f64,
    /// Last sampled radius; beyond it `u` is continued by its exponential tail.
    pub r_extent: f64,
    /// Decay rate of the tail, `u ~ C e^{−decay·r}`.
    pub decay: f64,
    pub values: Vec<f64>,
    pub derivatives: Vec<f64>,
    /// `K = ∫|∇u|²`.
    pub gradient_energy: f64,
    /// `M = ∫u²`.
    pub l2_mass: f64,
    /// `P = ∫u^{2+4/d}`.
    pub power_integral: f64,
}

/// `∫_0^∞ e^{−a s} (R + s)^{d−1} ds`.
fn exp_tail_moment(d: u32, big_r: f64, a: f64) -> f64 {
    let n = d - 1;
    (0..=n)
        .map(|j| {
            let fact: f64 = (1..=j).map(f64::from).product();
            binomial(n, j) * big_r.powi((n - j) as i32) * fact / a.powi(j as i32 + 1)
        })
        .sum()
}

fn simpson(f: impl Fn(usize) -> f64, len: usize, h: f64) -> f64 {
    debug_assert!(len % 2 == 1 && len >= 3);
    let last = len - 1;
    let mut acc = f(0) + f(last);
    for i in 1..last {
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i);
    }
    acc * h / 3.0
}

/// `(K, M, P)` for samples on `r_i = i·h`, with exponential tails of rate
/// `decay` appended beyond the last sample.
fn radial_integrals(d: u32, h: f64, u: &[f64], du: &[f64], decay: f64) -> (f64, f64, f64) {
    let q1 = exponent(d) + 1.0;
    let area = sphere_area(d);
    let len = u.len();
    let weight = |i: usize| (i as f64 * h).powi(d as i32 - 1);
    let big_r = (len - 1) as f64 * h;
    let (ul, vl) = (u[len - 1], du[len - 1]);
    let k = simpson(|i| du[i] * du[i] * weight(i), len, h)
        + vl * vl * exp_tail_moment(d, big_r, 2.0 * decay);
    let m = simpson(|i| u[i] * u[i] * weight(i), len, h)
        + ul * ul * exp_tail_moment(d, big_r, 2.0 * decay);
    let p = simpson(|i| u[i].powf(q1) * weight(i), len, h)
        + ul.powf(q1) * exp_tail_moment(d, big_r, q1 * decay);
    (area * k, area * m, area * p)
}

impl RadialProfile {
    fn from_samples(d: u32, u0: f64, step: f64, decay: f64, mut values: Vec<f64>, mut derivatives: Vec<f64>) -> Result<Self> {
        if values.len() % 2 == 0 {
            values.pop();
            derivatives.pop();
        }
        if values.len() < 3 {
            return Err(Error::Invariant("profile has fewer than three samples".into()));
        }
        let (k, m, p) = radial_integrals(d, step, &values, &derivatives, decay);
        Ok(Self {
            d,
            u0,
            step,
            r_extent: (values.len() - 1) as f64 * step,
            decay,
            values,
            derivatives,
            gradient_energy: k,
            l2_mass: m,
            power_integral: p,
        })
    }

    /// Exponent `q = 1 + 4/d` of the nonlinearity.
    pub fn exponent(&self) -> f64 {
        exponent(self.d)
    }

    /// `(K + M − P)/P`, zero for solutions of the canonical equation.
    pub fn nehari_residual(&self) -> f64 {
        (self.gradient_energy + self.l2_mass - self.power_integral) / self.power_integral
    }

    /// `(((d−2)/2)K + (d/2)M − (d/(q+1))P)/P`, zero for solutions of the
    /// canonical equation.
    pub fn pohozaev_residual(&self) -> f64 {
        let df = f64::from(self.d);
        ((df - 2.0) / 2.0 * self.gradient_energy + df / 2.0 * self.l2_mass
            - df / (self.exponent() + 1.0) * self.power_integral)
            / self.power_integral
    }

    /// `K M^{2/d} / P` without any residual check.
    pub fn quotient(&self) -> f64 {
        self.gradient_energy * self.l2_mass.powf(2.0 / f64::from(self.d)) / self.power_integral
    }

    fn tail_value(&self, r: f64) -> f64 {
        let last = *self.values.last().expect("non-empty");
        let shape = (self.r_extent / r).powf((f64::from(self.d) - 1.0) / 2.0);
        last * (-(self.decay) * (r - self.r_extent)).exp() * shape
    }

    /// `u(r)` by cubic Hermite interpolation, exponential tail beyond the grid.
    pub fn value_at(&self, r: f64) -> f64 {
        let r = r.abs();
        if r >= self.r_extent {
            return self.tail_value(r);
        }
        let (i, t) = self.cell(r);
        let h = self.step;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (h * self.derivatives[i], h * self.derivatives[i + 1]);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * m1
    }

    /// `u′(r)`, consistent with [`RadialProfile::value_at`].
    pub fn derivative_at(&self, r: f64) -> f64 {
        let r = r.abs();
        if r >= self.r_extent {
            let dm1 = f64::from(self.d) - 1.0;
            return -self.tail_value(r) * (self.decay + dm1 / (2.0 * r));
        }
        let (i, t) = self.cell(r);
        let h = self.step;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (h * self.derivatives[i], h * self.derivatives[i + 1]);
        let t2 = t * t;
        ((6.0 * t2 - 6.0 * t) * y0
            + (3.0 * t2 - 4.0 * t + 1.0) * m0
            + (-6.0 * t2 + 6.0 * t) * y1
            + (3.0 * t2 - 2.0 * t) * m1)
            / h
    }

    fn cell(&self, r: f64) -> (usize, f64) {
        let x = r / self.step;
        let i = (x.floor() as usize).min(self.values.len() - 2);
        (i, x - i as f64)
    }

    /// Profile of `a·u(b·r)` resampled on the same grid spacing.
    pub fn rescaled(&self, a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::Precondition("rescaling factors must be positive".into()));
        }
        let len = (self.r_extent / b / self.step).floor() as usize + 1;
        let (values, derivatives) = (0..len)
            .map(|i| {
                let r = i as f64 * self.step;
                (a * self.value_at(b * r), a * b * self.derivative_at(b * r))
            })
            .unzip();
        Self::from_samples(self.d, a * self.u0, self.step, self.decay * b, values, derivatives)
    }

    /// `r,u` CSV with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,u\n");
        for (i, u) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{},{}", i as f64 * self.step, u);
        }
        out
    }
}

pub fn solve_ground_state(d: u32, tol: f64) -> Result<RadialProfile> {
    solve_ground_state_with(d, tol, &ShootingConfig::default())
}

pub fn solve_ground_state_with(d: u32, tol: f64, cfg: &ShootingConfig) -> Result<RadialProfile> {
    if d == 0 || d > MAX_DIM {
        return Err(Error::Domain(format!("ground state supported for 1 <= d <= {MAX_DIM}, got {d}")));
    }
    if !(tol >= MIN_TOL) {
        return Err(Error::Precondition(format!("tol must be >= {MIN_TOL}, got {tol}")));
    }
    let (mut lo, mut hi) = cfg.bracket;
    if classify_shot(d, lo, cfg) != ShotOutcome::Undershoot {
        return Err(Error::NoBracket(format!("u(0) = {lo} does not undershoot")));
    }
    while classify_shot(d, hi, cfg) != ShotOutcome::Overshoot {
        lo = hi;
        hi *= 2.0;
        if hi > cfg.max_upper {
            return Err(Error::NoBracket(format!(
                "no overshoot for u(0) up to {}",
                cfg.max_upper
            )));
        }
    }
    let mut iterations = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match classify_shot(d, mid, cfg) {
            ShotOutcome::Overshoot => hi = mid,
            ShotOutcome::Undershoot => lo = mid,
        }
        iterations += 1;
        if iterations > cfg.max_iterations {
            return Err(Error::NonConvergence { iterations });
        }
    }

    let low = shoot(d, lo, cfg, true);
    let high = shoot(d, hi, cfg, true);
    let common = low.u.len().min(high.u.len());
    let mut len = common;
    for i in 0..common {
        let mid = 0.5 * (low.u[i] + high.u[i]);
        if mid < cfg.floor || (high.u[i] - low.u[i]).abs() > cfg.trust_ratio * mid {
            len = i;
            break;
        }
    }
    let values = (0..len).map(|i| 0.5 * (low.u[i] + high.u[i])).collect();
    let derivatives = (0..len).map(|i| 0.5 * (low.du[i] + high.du[i])).collect();
    RadialProfile::from_samples(d, 0.5 * (lo + hi), cfg.step, 1.0, values, derivatives)
}

/// `G(d) ≈ K M^{2/d}/P` at the computed ground state; refuses profiles whose
/// Nehari or Pohozaev residual exceeds [`RESIDUAL_GATE`].
pub fn gns_numeric(profile: &RadialProfile) -> Result<f64> {
    let (n, p) = (profile.nehari_residual(), profile.pohozaev_residual());
    if n.abs() > RESIDUAL_GATE || p.abs() > RESIDUAL_GATE {
        return Err(Error::Invariant(format!(
            "ground-state residuals too large (Nehari {n:e}, Pohozaev {p:e})"
        )));
    }
    Ok(profile.quotient())
}

/// `G(d)/4`, the concentration upper bound for the cube constant.
pub fn cube_upper_bound(d: u32) -> Result<f64> {
    Ok(gns_numeric(&solve_ground_state(d, MIN_TOL)?)? / 4.0)
}

/// Samples `λ^{d/2} g(λ|x|)` at the cell centres of `grid`, with the radial
/// profile centred at the corner `x = 0`.
pub fn scaled_test_function(profile: &RadialProfile, lambda: f64, grid: CubeGrid) -> Result<GridFunction> {
    if grid.d as u32 != profile.d {
        return Err(Error::Precondition(format!(
            "grid dimension {} differs from profile dimension {}",
            grid.d, profile.d
        )));
    }
    if !(lambda >= 1.0) {
        return Err(Error::Precondition(format!("lambda must be >= 1, got {lambda}")));
    }
    if grid.h() > 1.0 / (8.0 * lambda) {
        return Err(Error::Resolution(format!(
            "h = {} exceeds 1/(8λ) = {}",
            grid.h(),
            1.0 / (8.0 * lambda)
        )));
    }
    let amplitude = lambda.powf(f64::from(profile.d) / 2.0);
    GridFunction::from_fn(grid, |x| {
        let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        amplitude * profile.value_at(lambda * r)
    })
}
