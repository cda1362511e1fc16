//! Equimeasurable rearrangement onto spheres centred at the corner `x = 0`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::grid::{CubeGrid, GridFunction};
use crate::special::omega;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RearrangeConfig {
    pub d: usize,
    /// Largest support measure for which the rearrangement lowers the energy.
    pub v_threshold: f64,
    /// `ω_d / 2^d`, the volume of the corner ball of radius 1.
    pub kappa_d: f64,
    /// Set when `v_threshold` rests on an unproved perimeter conjecture.
    pub conjectural: bool,
}

impl RearrangeConfig {
    /// Thresholds `V_1 = 1`, `V_2 = 1/π`, and `V_3 = π/81` when
    /// `allow_conjectural` is set.
    pub fn for_dim(d: usize, allow_conjectural: bool) -> Result<Self> {
        let (v_threshold, conjectural) = match d {
            1 => (1.0, false),
            2 => (1.0 / PI, false),
            3 if allow_conjectural => (PI / 81.0, true),
            3 => {
                return Err(Error::Precondition(
                    "the d = 3 threshold is conjectural; pass allow_conjectural".into(),
                ))
            }
            _ => return Err(Error::Domain(format!("rearrangement supports d in 1..=3, got {d}"))),
        };
        Self::new(d, v_threshold, conjectural)
    }

    pub fn new(d: usize, v_threshold: f64, conjectural: bool) -> Result<Self> {
        if !(1..=3).contains(&d) {
            return Err(Error::Domain(format!("rearrangement supports d in 1..=3, got {d}")));
        }
        let kappa_d = omega(d as u32) / 2f64.powi(d as i32);
        if !(v_threshold > 0.0 && v_threshold <= kappa_d) {
            return Err(Error::Invariant(format!(
                "threshold {v_threshold} must lie in (0, kappa_d = {kappa_d}]"
            )));
        }
        Ok(Self { d, v_threshold, kappa_d, conjectural })
    }
}

/// Cell indices ordered by distance of the centre to the corner, ties by index.
pub fn corner_order(grid: CubeGrid) -> Vec<usize> {
    // (2i + 1)² is (2n)² times the squared centre coordinate, exact in integers.
    let key = |idx: usize| -> u64 {
        let m = grid.multi_index(idx);
        m[..grid.d].iter().map(|&i| ((2 * i + 1) as u64).pow(2)).sum()
    };
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by_key(|&i| (key(i), i));
    order
}

/// Corner rearrangement of a nonnegative `u` with small support.
pub fn rearrange_corner(u: &GridFunction, cfg: &RearrangeConfig) -> Result<GridFunction> {
    if cfg.d != u.d() {
        return Err(Error::Precondition(format!(
            "config for d = {} applied to a d = {} function",
            cfg.d,
            u.d()
        )));
    }
    if let Some(v) = u.values().iter().find(|v| !(**v >= 0.0)) {
        return Err(Error::Precondition(format!("rearrangement needs u >= 0, found {v}")));
    }
    let measure = u.support_measure();
    if measure > cfg.v_threshold {
        return Err(Error::SupportTooLarge { measure, threshold: cfg.v_threshold });
    }
    let mut sorted = u.values().to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut out = vec![0.0; sorted.len()];
    for (slot, v) in corner_order(u.grid()).into_iter().zip(sorted) {
        out[slot] = v;
    }
    GridFunction::new(u.grid(), out)
}

/// Relative perimeter of `{u > 0}` inside the cube: interior faces separating
/// a positive cell from a nonpositive one, each of measure `h^{d−1}`.
pub fn discrete_perimeter(u: &GridFunction) -> f64 {
    let grid = u.grid();
    let v = u.values();
    let mut faces = 0usize;
    for axis in 0..grid.d {
        let stride = grid.stride(axis);
        for i in 0..v.len() {
            if (i / stride) % grid.n + 1 < grid.n && ((v[i] > 0.0) != (v[i + stride] > 0.0)) {
                faces += 1;
            }
        }
    }
    faces as f64 * grid.h().powi(grid.d as i32 - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerimeterCheck {
    pub volume: f64,
    /// `√(πV)`, relative perimeter of the quarter disc of area `V`.
    pub corner_ball_perimeter: f64,
    /// Relative perimeter of a strip along one side.
    pub strip_perimeter: f64,
    pub ball_wins: bool,
}

/// Quarter disc against side strip for sets of area `V` in the unit square.
pub fn perimeter_threshold_check(volume: f64) -> Result<PerimeterCheck> {
    if !(volume > 0.0 && volume <= 0.5) {
        return Err(Error::Precondition(format!("volume must lie in (0, 1/2], got {volume}")));
    }
    let corner_ball_perimeter = (PI * volume).sqrt();
    Ok(PerimeterCheck {
        volume,
        corner_ball_perimeter,
        strip_perimeter: 1.0,
        ball_wins: corner_ball_perimeter <= 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds() {
        let c2 = RearrangeConfig::for_dim(2, false).unwrap();
        assert!((c2.kappa_d - PI / 4.0).abs() < 1e-15);
        assert!(RearrangeConfig::for_dim(3, false).is_err());
        let c3 = RearrangeConfig::for_dim(3, true).unwrap();
        assert!(c3.conjectural && c3.v_threshold < c3.kappa_d);
        assert!(RearrangeConfig::new(2, 0.9, false).is_err());
    }

    #[test]
    fn perimeter_check_values() {
        let eq = perimeter_threshold_check(1.0 / PI).unwrap();
        assert!((eq.corner_ball_perimeter - 1.0).abs() < 1e-15 && eq.ball_wins);
        let small = perimeter_threshold_check(0.1).unwrap();
        assert!((small.corner_ball_perimeter - 0.5605).abs() < 1e-4 && small.ball_wins);
        let big = perimeter_threshold_check(0.5).unwrap();
        assert!((big.corner_ball_perimeter - 1.2533).abs() < 1e-4 && !big.ball_wins);
        assert!(perimeter_threshold_check(0.6).is_err());
    }

    #[test]
    fn rearranged_function_is_fixed() {
        let g = CubeGrid::new(2, 32).unwrap();
        let cfg = RearrangeConfig::for_dim(2, false).unwrap();
        let u = GridFunction::from_fn(g, |x| (0.25 - x[0] * x[0] - x[1] * x[1]).max(0.0)).unwrap();
        let once = rearrange_corner(&u, &cfg).unwrap();
        assert_eq!(rearrange_corner(&once, &cfg).unwrap(), once);
        let neg = u.map(|v| v - 0.01);
        assert!(matches!(rearrange_corner(&neg, &cfg), Err(Error::Precondition(_))));
        let wide = GridFunction::from_fn(g, |x| if x[0] < 0.5 { 1.0 } else { 0.0 }).unwrap();
        assert!(matches!(rearrange_corner(&wide, &cfg), Err(Error::SupportTooLarge { .. })));
    }

    #[test]
    fn strip_becomes_quarter_disc() {
        let g = CubeGrid::new(2, 160).unwrap();
        let cfg = RearrangeConfig::for_dim(2, false).unwrap();
        let strip = GridFunction::from_fn(g, |x| if (0.4..0.6).contains(&x[0]) { 1.0 } else { 0.0 }).unwrap();
        assert!((strip.support_measure() - 0.2).abs() < 1e-12);
        let r = rearrange_corner(&strip, &cfg).unwrap();
        assert!(discrete_perimeter(&r) < discrete_perimeter(&strip));
        let radius = (0.8 / PI).sqrt();
        let inside = GridFunction::from_fn(g, |x| {
            if x[0] * x[0] + x[1] * x[1] < radius * radius { 1.0 } else { 0.0 }
        })
        .unwrap();
        let mismatch = r.values().iter().zip(inside.values()).filter(|(a, b)| a != b).count();
        assert!(mismatch <= 2 * 160);
    }
}
