//! Closed-form lower bounds for the sharp GNS constant `G(d)` on ℝ^d.
//!
//! The GNS inequality is the `ρ = 4/d` member of the family
//! `‖u‖_{ρ+2} ≤ k(ρ,d) ‖∇u‖₂^α ‖u‖₂^{1−α}`. Two explicit bounds are provided:
//! Nasibov's estimate of `k(ρ,d)` (built on the Babenko–Beckner
//! Hausdorff–Young constant) and the bound obtained from splitting the
//! Fourier transform into low and high energies.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::special::{ball_geometry, beta_fn, sphere_area};
use crate::{Error, Result};

/// Interpolation exponent `α = (d/2)·ρ/(ρ+2)`.
pub fn alpha_of(rho: f64, d: u32) -> Result<f64> {
    if d == 0 {
        return Err(Error::Domain("dimension must be >= 1".into()));
    }
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::Range(format!("rho must be positive and finite, got {rho}")));
    }
    if d >= 3 {
        let rho0 = 4.0 / f64::from(d - 2);
        if rho >= rho0 {
            return Err(Error::Range(format!(
                "rho = {rho} outside (0, {rho0}) for d = {d}"
            )));
        }
    }
    Ok(f64::from(d) / 2.0 * rho / (rho + 2.0))
}

/// `χ = √(α^α (1−α)^{1−α})`.
pub fn chi(alpha: f64) -> f64 {
    (alpha.powf(alpha) * (1.0 - alpha).powf(1.0 - alpha)).sqrt()
}

/// Babenko–Beckner constant `((p/2π)^{1/p} / (p′/2π)^{1/p′})^{d/2}`.
pub fn babenko_beckner(p: f64, d: u32) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::Domain(format!("babenko_beckner requires 1 < p < inf, got {p}")));
    }
    let q = p / (p - 1.0);
    let ratio = (p / (2.0 * PI)).powf(1.0 / p) / (q / (2.0 * PI)).powf(1.0 / q);
    Ok(ratio.powf(f64::from(d) / 2.0))
}

/// Nasibov's upper bound `k_N(ρ,d)` on the optimal constant `k(ρ,d)`.
pub fn nasibov_kn(rho: f64, d: u32) -> Result<f64> {
    let alpha = alpha_of(rho, d)?;
    let df = f64::from(d);
    let beta = beta_fn(df / 2.0, df * (1.0 - alpha) / (2.0 * alpha))?;
    let geometric = (sphere_area(d) * beta / 2.0).powf(alpha / df);
    let kbb = babenko_beckner((rho + 2.0) / (rho + 1.0), d)?;
    Ok(geometric * kbb / chi(alpha))
}

/// `G_N(d) = k_N(4/d, d)^{−2/α}` with `α = d/(d+2)`.
pub fn g_nasibov(d: u32) -> Result<f64> {
    let rho = gns_rho(d)?;
    let alpha = alpha_of(rho, d)?;
    Ok(nasibov_kn(rho, d)?.powf(-2.0 / alpha))
}

/// `G′(d) = (2π)² d^{2+2/d} |S^{d−1}|^{−2/d} / ((d+2)(d+4))`.
pub fn g_rumin(d: u32) -> Result<f64> {
    if d == 0 {
        return Err(Error::Domain("dimension must be >= 1".into()));
    }
    let df = f64::from(d);
    Ok((2.0 * PI).powi(2) * df.powf(2.0 + 2.0 / df) * sphere_area(d).powf(-2.0 / df)
        / ((df + 2.0) * (df + 4.0)))
}

/// Sharp Sobolev constant `S_d = d(d−2)|S^d|^{2/d}/4`, where `|S^d|` is the
/// surface of the unit sphere in ℝ^{d+1}.
pub fn sobolev_constant(d: u32) -> Result<f64> {
    if d < 3 {
        return Err(Error::Domain(format!("sobolev_constant requires d >= 3, got {d}")));
    }
    let df = f64::from(d);
    let s_d = ball_geometry(d + 1)?.sphere_area;
    Ok(df * (df - 2.0) * s_d.powf(2.0 / df) / 4.0)
}

/// The GNS exponent `ρ = 4/d`.
pub fn gns_rho(d: u32) -> Result<f64> {
    if d == 0 {
        return Err(Error::Domain("dimension must be >= 1".into()));
    }
    Ok(4.0 / f64::from(d))
}

/// All closed-form ℝ^d quantities for one dimension at `ρ = 4/d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RdBounds {
    pub d: u32,
    pub rho: f64,
    pub alpha: f64,
    pub chi: f64,
    pub k_bb: f64,
    pub k_n: f64,
    pub g_nasibov: f64,
    pub g_rumin: f64,
    /// Only defined for `d >= 3`.
    pub s_sobolev: Option<f64>,
}

pub fn rd_bounds(d: u32) -> Result<RdBounds> {
    let rho = gns_rho(d)?;
    let alpha = alpha_of(rho, d)?;
    Ok(RdBounds {
        d,
        rho,
        alpha,
        chi: chi(alpha),
        k_bb: babenko_beckner((rho + 2.0) / (rho + 1.0), d)?,
        k_n: nasibov_kn(rho, d)?,
        g_nasibov: g_nasibov(d)?,
        g_rumin: g_rumin(d)?,
        s_sobolev: if d >= 3 { Some(sobolev_constant(d)?) } else { None },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_at_gns_exponent() {
        assert!((alpha_of(4.0, 1).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((alpha_of(2.0, 2).unwrap() - 0.5).abs() < 1e-15);
        assert!((alpha_of(4.0 / 3.0, 3).unwrap() - 0.6).abs() < 1e-15);
        for d in 1..=10 {
            let df = f64::from(d);
            let a = alpha_of(4.0 / df, d).unwrap();
            assert!((a - df / (df + 2.0)).abs() < 1e-15, "d = {d}");
        }
    }

    #[test]
    fn alpha_range_errors() {
        assert!(matches!(alpha_of(4.0, 3), Err(Error::Range(_))));
        assert!(matches!(alpha_of(-1.0, 2), Err(Error::Range(_))));
        assert!(alpha_of(1e6, 2).is_ok());
        assert!(alpha_of(1e6, 1).is_ok());
    }

    #[test]
    fn babenko_beckner_values() {
        assert!((babenko_beckner(2.0, 1).unwrap() - 1.0).abs() < 1e-15);
        assert!((babenko_beckner(2.0, 7).unwrap() - 1.0).abs() < 1e-15);
        // ((3/(4π))^{2/3}/(3/(2π))^{1/3})^{1/2}, 20-digit reference.
        let d1 = babenko_beckner(1.5, 1).unwrap();
        assert!((d1 - 0.701_692_604_294_322_223_26).abs() < 1e-14);
        let d2 = babenko_beckner(1.5, 2).unwrap();
        assert!((d2 - d1 * d1).abs() < 1e-14);
        assert!(babenko_beckner(1.0, 1).is_err());
    }

    #[test]
    fn nasibov_inverts_table_values() {
        // k_N = G_N^{−α/2}
        let k1 = nasibov_kn(4.0, 1).unwrap();
        assert!((k1 - 2.2705_f64.powf(-1.0 / 6.0)).abs() < 1e-4);
        let k2 = nasibov_kn(2.0, 2).unwrap();
        assert!((k2.powi(-4) - 5.3014).abs() < 1e-4);
        let k3 = nasibov_kn(4.0 / 3.0, 3).unwrap();
        assert!((k3 - 8.6427_f64.powf(-0.3)).abs() < 1e-5);
    }

    #[test]
    fn sobolev_closed_forms() {
        let s3 = sobolev_constant(3).unwrap();
        assert!((s3 - 0.75 * (2.0 * PI * PI).powf(2.0 / 3.0)).abs() < 1e-12);
        assert!((s3 - 5.4779).abs() < 1e-4);
        let s4 = sobolev_constant(4).unwrap();
        assert!((s4 - 2.0 * (8.0 * PI * PI / 3.0).sqrt()).abs() < 1e-12);
        assert!(sobolev_constant(5).unwrap() < 17.483);
        assert!(matches!(sobolev_constant(2), Err(Error::Domain(_))));
    }

    #[test]
    fn rumin_below_nasibov() {
        for d in 1..=5 {
            let b = rd_bounds(d).unwrap();
            assert!(b.g_rumin < b.g_nasibov, "d = {d}");
            assert_eq!(b.s_sobolev.is_some(), d >= 3);
        }
    }

    #[test]
    fn rumin_two_dimensions_closed_form() {
        assert!((g_rumin(2).unwrap() - 2.0 * PI / 3.0).abs() < 1e-14);
    }
}
