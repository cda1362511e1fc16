//! GNS constants for bounded convex domains (`d ≥ 3`) and for unit cubes.
//!
//! For a convex domain the mean deviation is controlled pointwise by the
//! Riesz potential `|x|^{−(d−1)} * |∇u|` with prefactor
//! `C_D = diam^d / (d|Ω|)`, and a Hardy–Littlewood–Sobolev bound turns that
//! into `C_1 = (C_D · C_HLS)^{−2}`. For cubes the cosine eigenbasis gives the
//! sharper `G_2 = π²d² / ((d+4)(d+2) N_d^{2/d})`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::lattice::{analytic_nd_bound, refined_nd};
use crate::special::{omega, sphere_area};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DomainKind {
    UnitCube,
    Ball { radius: f64 },
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvexDomainSpec {
    pub d: u32,
    pub diameter: f64,
    pub volume: f64,
    pub kind: DomainKind,
}

impl ConvexDomainSpec {
    pub fn unit_cube(d: u32) -> Result<Self> {
        Self::custom(d, f64::from(d).sqrt(), 1.0).map(|s| Self {
            kind: DomainKind::UnitCube,
            ..s
        })
    }

    pub fn ball(d: u32, radius: f64) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain("dimension must be >= 1".into()));
        }
        let volume = omega(d) * radius.powi(d as i32);
        Self::custom(d, 2.0 * radius, volume).map(|s| Self {
            kind: DomainKind::Ball { radius },
            ..s
        })
    }

    /// Arbitrary convex body described by its diameter and volume; rejects
    /// data violating the isodiametric inequality `|Ω| ≤ ω_d (diam/2)^d`.
    pub fn custom(d: u32, diameter: f64, volume: f64) -> Result<Self> {
        let spec = Self {
            d,
            diameter,
            volume,
            kind: DomainKind::Custom,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::Invariant("dimension must be >= 1".into()));
        }
        if !(self.diameter > 0.0 && self.volume > 0.0)
            || !self.diameter.is_finite()
            || !self.volume.is_finite()
        {
            return Err(Error::Invariant(format!(
                "diameter and volume must be positive, got ({}, {})",
                self.diameter, self.volume
            )));
        }
        let max_volume = omega(self.d) * (self.diameter / 2.0).powi(self.d as i32);
        if self.volume > max_volume * (1.0 + 1e-12) {
            return Err(Error::Invariant(format!(
                "volume {} exceeds the isodiametric limit {max_volume}",
                self.volume
            )));
        }
        Ok(())
    }
}

/// `C_D = diam(Ω)^d / (d|Ω|)`.
pub fn davies_constant(spec: &ConvexDomainSpec) -> Result<f64> {
    spec.validate()?;
    Ok(spec.diameter.powi(spec.d as i32) / (f64::from(spec.d) * spec.volume))
}

/// Weak-`L^{d/(d−1)}` norm `sup_A |A|^{−1/d} ∫_A |x|^{−(d−1)} = d ω_d^{(d−1)/d}`
/// of the kernel `h_s(x) = |x|^{−d/s}` at `s = d/(d−1)`. The supremum is
/// attained on balls centred at the origin.
pub fn weak_norm_kernel(d: u32) -> Result<f64> {
    if d == 0 {
        return Err(Error::Domain("dimension must be >= 1".into()));
    }
    let df = f64::from(d);
    Ok(df * omega(d).powf((df - 1.0) / df))
}

/// Which exponent triple the explicit Hardy–Littlewood–Sobolev bound is
/// evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum HlsVariant {
    /// `(n, λ, p, r) = (d, d−1, 2, 2d/(d−2))`: `r` is the Lebesgue exponent
    /// of the potential `|x|^{−(d−1)} * |∇u|`. This reproduces the tabulated
    /// `C_1` values.
    #[default]
    PotentialExponent,
    /// `r` fixed by the HLS balance `1/p + λ/n + 1/r = 2`, i.e.
    /// `r = 2d/(d+2)` (the dual of the potential exponent).
    Balanced,
}

/// Explicit (non-sharp) HLS bound
/// `n/((n−λ)pr) · (|S^{n−1}|/n)^{λ/n} · [((λ/n)/(1−1/p))^{λ/n} + ((λ/n)/(1−1/r))^{λ/n}]`
/// at `n = d`, `λ = d−1`, `p = 2`.
pub fn hls_constant_with(d: u32, variant: HlsVariant) -> Result<f64> {
    if d < 3 {
        return Err(Error::Domain(format!("hls_constant requires d >= 3, got {d}")));
    }
    let n = f64::from(d);
    let lambda = n - 1.0;
    let p = 2.0;
    let r = match variant {
        HlsVariant::PotentialExponent => 2.0 * n / (n - 2.0),
        HlsVariant::Balanced => 1.0 / (2.0 - 1.0 / p - lambda / n),
    };
    let t = lambda / n;
    let prefactor = n / ((n - lambda) * p * r);
    let geometric = (sphere_area(d) / n).powf(t);
    let brackets = (t / (1.0 - 1.0 / p)).powf(t) + (t / (1.0 - 1.0 / r)).powf(t);
    Ok(prefactor * geometric * brackets)
}

pub fn hls_constant(d: u32) -> Result<f64> {
    hls_constant_with(d, HlsVariant::default())
}

/// How `N_d` is obtained for the cube bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum NdMode {
    /// The closed-form sum over `ℓ`.
    Analytic,
    /// Exact enumeration below `r_cut` plus the analytic tail above it.
    Refined { r_cut: f64 },
}

impl NdMode {
    /// Refined at `√17` for `d = 2` and `√19` for `d = 3`, analytic otherwise.
    pub fn default_for(d: u32) -> Self {
        match d {
            2 => NdMode::Refined {
                r_cut: 17f64.sqrt(),
            },
            3 => NdMode::Refined {
                r_cut: 19f64.sqrt(),
            },
            _ => NdMode::Analytic,
        }
    }

    pub fn resolve(&self, d: u32) -> Result<f64> {
        match *self {
            NdMode::Analytic => analytic_nd_bound(d),
            NdMode::Refined { r_cut } => refined_nd(d, r_cut),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NdUsed {
    pub value: f64,
    pub provenance: NdMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainBoundReport {
    pub spec: ConvexDomainSpec,
    pub c_d: f64,
    /// Present for `d >= 3`.
    pub c_hls: Option<f64>,
    /// `(C_D · C_HLS)^{−2}`, present for `d >= 3`.
    pub c_1: Option<f64>,
    /// Cube-only bound from the cosine eigenbasis.
    pub g_2: Option<f64>,
    pub n_d_used: Option<NdUsed>,
}

/// Lower bound `C_1(Ω, d)` for a convex domain, `d ≥ 3`.
pub fn convex_gns_constant(spec: &ConvexDomainSpec) -> Result<DomainBoundReport> {
    if spec.d < 3 {
        return Err(Error::Domain(format!(
            "convex-domain bound requires d >= 3, got {}",
            spec.d
        )));
    }
    let c_d = davies_constant(spec)?;
    let c_hls = hls_constant(spec.d)?;
    Ok(DomainBoundReport {
        spec: *spec,
        c_d,
        c_hls: Some(c_hls),
        c_1: Some((c_d * c_hls).powi(-2)),
        g_2: None,
        n_d_used: None,
    })
}

/// `π²d² / ((d+4)(d+2) N^{2/d})`.
pub fn cube_bound_from_nd(d: u32, n_d: f64) -> f64 {
    let df = f64::from(d);
    PI * PI * df * df / ((df + 4.0) * (df + 2.0) * n_d.powf(2.0 / df))
}

/// Both lower bounds for the unit cube; `C_1` is filled in for `d ≥ 3`.
pub fn cube_gns_constant(d: u32, nd_mode: NdMode) -> Result<DomainBoundReport> {
    let spec = ConvexDomainSpec::unit_cube(d)?;
    let n_d = nd_mode.resolve(d)?;
    let mut report = if d >= 3 {
        convex_gns_constant(&spec)?
    } else {
        DomainBoundReport {
            spec,
            c_d: davies_constant(&spec)?,
            c_hls: None,
            c_1: None,
            g_2: None,
            n_d_used: None,
        }
    };
    report.g_2 = Some(cube_bound_from_nd(d, n_d));
    report.n_d_used = Some(NdUsed {
        value: n_d,
        provenance: nd_mode,
    });
    Ok(report)
}
