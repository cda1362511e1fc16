//! Weighted counting of Neumann Laplacian eigenvalues on `[0,1]^d`.
//!
//! Eigenfunctions are `C_k Π cos(π k_i x_i)` with `k ∈ ℕ₀^d`, energy `π²|k|²`
//! and `C_k² = 2^ℓ`, `ℓ` the number of nonzero components. The counting
//! function is `S(m) = Σ_{0 < |k|² ≤ m} 2^ℓ` and `N_d` is any constant with
//! `S(r²) ≤ N_d r^d` for every radius `r`.
//!
//! `S` is a right-continuous step function of `r²` that jumps at integers, so
//! on `[√m, √(m+1))` the ratio `S(r²)/r^d` is largest at `r = √m`. Checking
//! `S(m)/m^{d/2}` for every integer `m` below a cutoff and bounding the rest
//! analytically therefore covers all radii.

use serde::{Deserialize, Serialize};

use crate::special::{binomial, omega};
use crate::{Error, Result};

/// Largest dimension accepted by the enumeration routines.
pub const MAX_ENUM_DIM: u32 = 6;
/// Largest threshold `m = |k|²` accepted by the enumeration routines.
pub const MAX_ENUM_THRESHOLD: u64 = 10_000;
/// Largest dimension accepted by [`certify_nd`].
pub const MAX_CERTIFY_DIM: u32 = 4;

/// A single cosine mode of the Neumann Laplacian on the unit cube.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeMode {
    pub k: Vec<u32>,
    /// Number of nonzero components.
    pub ell: u32,
    /// `C_k² = 2^ℓ`.
    pub weight: u64,
    /// `|k|²`, so the eigenvalue is `π²|k|²`.
    pub energy_over_pi2: u64,
}

impl LatticeMode {
    pub fn new(k: Vec<u32>) -> Self {
        let ell = k.iter().filter(|&&c| c != 0).count() as u32;
        let energy_over_pi2 = k.iter().map(|&c| u64::from(c) * u64::from(c)).sum();
        Self {
            k,
            ell,
            weight: 1 << ell,
            energy_over_pi2,
        }
    }
}

fn guard(d: u32, m: u64) -> Result<()> {
    if d == 0 {
        return Err(Error::Domain("dimension must be >= 1".into()));
    }
    if d > MAX_ENUM_DIM || m > MAX_ENUM_THRESHOLD {
        return Err(Error::Resource(format!(
            "enumeration limited to d <= {MAX_ENUM_DIM}, m <= {MAX_ENUM_THRESHOLD}; got d = {d}, m = {m}"
        )));
    }
    Ok(())
}

/// All modes with `0 < |k|² ≤ m`, in lexicographic order of `k`.
pub fn modes(d: u32, m: u64) -> Result<Vec<LatticeMode>> {
    guard(d, m)?;
    let mut out = Vec::new();
    let mut k = vec![0u32; d as usize];
    collect_modes(&mut k, 0, m, &mut out);
    Ok(out)
}

fn collect_modes(k: &mut Vec<u32>, axis: usize, budget: u64, out: &mut Vec<LatticeMode>) {
    if axis == k.len() {
        if k.iter().any(|&c| c != 0) {
            out.push(LatticeMode::new(k.clone()));
        }
        return;
    }
    let mut c = 0u32;
    while u64::from(c) * u64::from(c) <= budget {
        k[axis] = c;
        collect_modes(k, axis + 1, budget - u64::from(c) * u64::from(c), out);
        c += 1;
    }
    k[axis] = 0;
}

/// `hist[s] = Σ_{|k|² = s} 2^ℓ` for `0 ≤ s ≤ m`, built one coordinate at a
/// time: each coordinate contributes weight 1 at `k_i = 0` and 2 at `k_i ≥ 1`.
fn weighted_histogram(d: u32, m: u64) -> Vec<u64> {
    let m = m as usize;
    let mut hist = vec![0u64; m + 1];
    hist[0] = 1;
    for _ in 0..d {
        let mut next = vec![0u64; m + 1];
        for (s, &w) in hist.iter().enumerate() {
            if w == 0 {
                continue;
            }
            next[s] += w;
            let mut c = 1usize;
            while s + c * c <= m {
                next[s + c * c] += 2 * w;
                c += 1;
            }
        }
        hist = next;
    }
    hist
}

/// `S(j)` for every `0 ≤ j ≤ m` (with `S(0) = 0`, the constant mode excluded).
pub fn cumulative_counts(d: u32, m: u64) -> Result<Vec<u64>> {
    guard(d, m)?;
    let hist = weighted_histogram(d, m);
    let mut acc = 0u64;
    Ok(hist
        .iter()
        .enumerate()
        .map(|(s, &w)| {
            if s > 0 {
                acc += w;
            }
            acc
        })
        .collect())
}

/// `S(m) = Σ_{0 < |k|² ≤ m} 2^ℓ`, exact.
pub fn weighted_count(d: u32, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::Precondition("weighted_count requires m >= 1".into()));
    }
    Ok(*cumulative_counts(d, m)?.last().expect("m + 1 entries"))
}

/// `Σ_{ℓ=1}^{d} C(d,ℓ) ω_ℓ / ℓ^{(d−ℓ)/2}`, a valid `N_d` for every radius.
pub fn analytic_nd_bound(d: u32) -> Result<f64> {
    if d == 0 {
        return Err(Error::Domain("dimension must be >= 1".into()));
    }
    Ok((1..=d)
        .map(|l| binomial(d, l) * omega(l) / f64::from(l).powf(f64::from(d - l) / 2.0))
        .sum())
}

/// `Σ_{ℓ=1}^{d} C(d,ℓ) ω_ℓ r_cut^{ℓ−d}`, which bounds `S(r²)/r^d` for all
/// `r ≥ r_cut` (the count of `k ∈ ℕ^ℓ` in a ball of radius `r` is at most
/// `ω_ℓ r^ℓ / 2^ℓ`).
pub fn tail_bound(d: u32, r_cut: f64) -> Result<f64> {
    if d == 0 {
        return Err(Error::Domain("dimension must be >= 1".into()));
    }
    let r2 = snapped_square(r_cut);
    if !(r2 >= f64::from(d)) {
        return Err(Error::Precondition(format!(
            "tail_bound requires r_cut >= sqrt(d) = {}, got {r_cut}",
            f64::from(d).sqrt()
        )));
    }
    Ok((1..=d)
        .map(|l| binomial(d, l) * omega(l) * r_cut.powi(l as i32 - d as i32))
        .sum())
}

/// `r²`, snapped to the nearest integer when within rounding of one, so that a
/// cutoff given as `√17` yields exactly 17.
pub fn snapped_square(r: f64) -> f64 {
    let r2 = r * r;
    let nearest = r2.round();
    if (r2 - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest
    } else {
        r2
    }
}

/// Exactly enumerated thresholds for a cutoff: every `m < r_cut²`.
pub fn enumeration_limit(r_cut: f64) -> u64 {
    let r2 = snapped_square(r_cut);
    (r2.ceil() as u64).saturating_sub(1)
}

/// `max_{1 ≤ m ≤ m_max} S(m)/m^{d/2}` and the first maximizing `m`
/// (`(0, 0)` when `m_max = 0`).
pub fn enumerated_sup(d: u32, m_max: u64) -> Result<(f64, u64)> {
    let counts = cumulative_counts(d, m_max)?;
    let mut worst = (0.0, 0);
    for (m, &s) in counts.iter().enumerate().skip(1) {
        let ratio = s as f64 / (m as f64).powf(f64::from(d) / 2.0);
        if ratio > worst.0 {
            worst = (ratio, m as u64);
        }
    }
    Ok(worst)
}

/// Record certifying `S(r²) ≤ n_candidate · r^d` for every `r > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountCertificate {
    pub d: u32,
    pub n_candidate: f64,
    pub r_cut: f64,
    /// All integer thresholds `1 ≤ m ≤ m_max` were checked exactly.
    pub m_max: u64,
    /// Analytic bound valid for `r ≥ r_cut`.
    pub tail_bound: f64,
    pub verified: bool,
    /// Largest enumerated `S(m)/m^{d/2}`.
    pub worst_ratio: f64,
    pub worst_m: u64,
}

pub fn certify_nd(d: u32, n_candidate: f64, r_cut: f64) -> Result<CountCertificate> {
    if d > MAX_CERTIFY_DIM {
        return Err(Error::Resource(format!(
            "certify_nd limited to d <= {MAX_CERTIFY_DIM}, got {d}"
        )));
    }
    let tail = tail_bound(d, r_cut)?;
    let m_max = enumeration_limit(r_cut);
    let (worst_ratio, worst_m) = enumerated_sup(d, m_max)?;
    Ok(CountCertificate {
        d,
        n_candidate,
        r_cut,
        m_max,
        tail_bound: tail,
        verified: worst_ratio <= n_candidate && tail <= n_candidate,
        worst_ratio,
        worst_m,
    })
}

/// Smallest `N` that [`certify_nd`] accepts at this cutoff.
pub fn refined_nd(d: u32, r_cut: f64) -> Result<f64> {
    let cert = certify_nd(d, f64::INFINITY, r_cut)?;
    Ok(cert.worst_ratio.max(cert.tail_bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn small_counts() {
        assert_eq!(weighted_count(2, 2).unwrap(), 8);
        assert_eq!(weighted_count(1, 1).unwrap(), 2);
        assert_eq!(weighted_count(3, 1).unwrap(), 6);
        assert!(weighted_count(2, 0).is_err());
    }

    #[test]
    fn guard_rejects_large_requests() {
        assert!(matches!(weighted_count(7, 10), Err(Error::Resource(_))));
        assert!(matches!(weighted_count(2, 10_001), Err(Error::Resource(_))));
        assert!(matches!(certify_nd(5, 100.0, 3.0), Err(Error::Resource(_))));
    }

    #[test]
    fn mode_metadata() {
        let m = LatticeMode::new(vec![0, 3, 1]);
        assert_eq!(m.ell, 2);
        assert_eq!(m.weight, 4);
        assert_eq!(m.energy_over_pi2, 10);
        let all = modes(2, 2).unwrap();
        assert_eq!(all.len(), 3);
        assert_eq!(all.iter().map(|m| m.weight).sum::<u64>(), 8);
    }

    #[test]
    fn analytic_bound_values() {
        assert!((analytic_nd_bound(1).unwrap() - 2.0).abs() < 1e-15);
        assert!((analytic_nd_bound(2).unwrap() - (4.0 + PI)).abs() < 1e-14);
        let d4 = 8.0 + 3.0 * PI + 16.0 * PI / (3.0 * 3f64.sqrt()) + PI * PI / 2.0;
        assert!((analytic_nd_bound(4).unwrap() - d4).abs() < 1e-12);
        assert!((d4 - 32.03).abs() < 5e-3);
    }

    #[test]
    fn tail_bound_values() {
        let t2 = tail_bound(2, 17f64.sqrt()).unwrap();
        assert!((t2 - (PI + 4.0 / 17f64.sqrt())).abs() < 1e-14);
        assert!((t2 - 4.1116).abs() < 1e-3);
        let t3 = tail_bound(3, 19f64.sqrt()).unwrap();
        let expected = 4.0 * PI / 3.0 + 3.0 * PI / 19f64.sqrt() + 6.0 / 19.0;
        assert!((t3 - expected).abs() < 1e-13);
        assert!((t3 - 6.667).abs() < 1e-3);
        assert!((tail_bound(2, 1e9).unwrap() - PI).abs() < 1e-8);
        assert!(matches!(tail_bound(3, 1.5), Err(Error::Precondition(_))));
        assert!(tail_bound(3, 3f64.sqrt()).is_ok());
    }

    #[test]
    fn cutoff_snapping() {
        assert_eq!(enumeration_limit(17f64.sqrt()), 16);
        assert_eq!(enumeration_limit(19f64.sqrt()), 18);
        assert_eq!(enumeration_limit(4.5), 20);
        assert_eq!(enumeration_limit(1.0), 0);
    }

    #[test]
    fn certificates() {
        let c = certify_nd(2, 4.1116, 17f64.sqrt()).unwrap();
        assert!(!c.verified, "tail π + 4/√17 = 4.11174 exceeds 4.1116");
        let c = certify_nd(2, 4.1118, 17f64.sqrt()).unwrap();
        assert!(c.verified);
        assert_eq!(c.worst_ratio, 4.0);
        assert_eq!(c.worst_m, 1);
        let c = certify_nd(2, 3.0, 17f64.sqrt()).unwrap();
        assert!(!c.verified);
        assert_eq!(c.worst_ratio, 4.0);
        let c = certify_nd(1, 2.0, 5.0).unwrap();
        assert!(c.verified);
    }

    #[test]
    fn refined_values() {
        let n2 = refined_nd(2, 17f64.sqrt()).unwrap();
        assert!((n2 - (PI + 4.0 / 17f64.sqrt())).abs() < 1e-14);
        assert!((refined_nd(1, 2.0).unwrap() - 2.0).abs() < 1e-15);
        let n3 = refined_nd(3, 19f64.sqrt()).unwrap();
        assert!((n3 - 6.6668).abs() < 1e-4);
        assert!(certify_nd(3, n3, 19f64.sqrt()).unwrap().verified);
    }
}
