//! The two summary tables: bounds for `G(d)` on ℝ^d, and upper and lower
//! bounds for the cube constant, with reference values and rendering.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::convex::{cube_gns_constant, davies_constant, hls_constant_with, ConvexDomainSpec, HlsVariant, NdMode};
use crate::euclidean::{g_nasibov, g_rumin};
use crate::ground_state::{gns_numeric, solve_ground_state, MIN_TOL};
use crate::{Error, Result};

/// Published rows `(d, G_N, G′, G)`.
pub const TABLE1_REFERENCE: [(u32, f64, f64, f64); 5] = [
    (1, 2.2705, 0.6580, 2.4674),
    (2, 5.3014, 2.0944, 5.850),
    (3, 8.6427, 3.9067, 9.578),
    (4, 12.1605, 5.9238, 13.489),
    (5, 15.7941, 8.0619, 17.483),
];

/// Published rows `(d, G/4, G_1, G_2)`; `None` is a blank cell.
pub const TABLE2_REFERENCE: [(u32, f64, Option<f64>, f64); 5] = [
    (1, 0.62, None, 0.16),
    (2, 1.46, None, 0.40),
    (3, 2.39, Some(0.1838), 0.71),
    (4, 3.37, Some(0.0041), 0.63),
    (5, 4.37, Some(0.0002), 0.69),
];

pub const MAX_TABLE_DIM: u32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Pretty,
}

/// How a table cell was obtained and what it is compared with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub formula: String,
    pub reference: String,
    pub reference_value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub label: String,
    /// `None` renders as a blank (`--`).
    pub value: Option<f64>,
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub annotation: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub d: u32,
    pub columns: Vec<Cell>,
}

impl TableRow {
    pub fn get(&self, label: &str) -> Option<&Cell> {
        self.columns.iter().find(|c| c.label == label)
    }

    pub fn value(&self, label: &str) -> Option<f64> {
        self.get(label).and_then(|c| c.value)
    }
}

fn cell(label: &str, value: Option<f64>, formula: &str, table: &str, reference_value: Option<f64>) -> Cell {
    Cell {
        label: label.into(),
        value,
        provenance: Provenance {
            formula: formula.into(),
            reference: format!("{table}:{label}"),
            reference_value,
        },
        annotation: None,
    }
}

fn check_dim(d_max: u32) -> Result<()> {
    if !(1..=MAX_TABLE_DIM).contains(&d_max) {
        return Err(Error::Domain(format!("d_max must lie in 1..={MAX_TABLE_DIM}, got {d_max}")));
    }
    Ok(())
}

/// `G(d)`: `π²/4` for `d = 1`, the shooting solver otherwise.
pub fn sharp_constant(d: u32) -> Result<(f64, &'static str)> {
    if d == 1 {
        Ok((PI * PI / 4.0, "closed_form"))
    } else {
        Ok((gns_numeric(&solve_ground_state(d, MIN_TOL)?)?, "shooting"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1 {
    pub rows: Vec<TableRow>,
}

pub fn table1(d_max: u32) -> Result<Table1> {
    check_dim(d_max)?;
    let rows = TABLE1_REFERENCE[..d_max as usize]
        .iter()
        .map(|&(d, gn, gp, g)| {
            let (numeric, formula) = sharp_constant(d)?;
            Ok(TableRow {
                d,
                columns: vec![
                    cell("G_N", Some(g_nasibov(d)?), "nasibov", "table1", Some(gn)),
                    cell("G_prime", Some(g_rumin(d)?), "rumin", "table1", Some(gp)),
                    cell("G_numeric", Some(numeric), formula, "table1", Some(g)),
                ],
            })
        })
        .collect::<Result<_>>()?;
    Ok(Table1 { rows })
}

/// Override for the `N_d` used in the `G_2` column.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub enum NdPolicy {
    /// Refined at `√17`, `√19` for `d = 2, 3`; analytic otherwise.
    #[default]
    Default,
    Analytic,
    /// Refined at `r_cut` for every dimension; without `r_cut`, as
    /// [`NdPolicy::Default`].
    Refined { r_cut: Option<f64> },
}

impl NdPolicy {
    pub fn mode_for(&self, d: u32) -> NdMode {
        match *self {
            NdPolicy::Analytic => NdMode::Analytic,
            NdPolicy::Refined { r_cut: Some(r_cut) } => NdMode::Refined { r_cut },
            NdPolicy::Default | NdPolicy::Refined { r_cut: None } => NdMode::default_for(d),
        }
    }
}

/// Rounds to `sig` significant figures.
pub fn round_sig(x: f64, sig: i32) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let scale = 10f64.powi(sig - 1 - x.abs().log10().floor() as i32);
    (x * scale).round() / scale
}

/// Rounds down to `decimals` places; lower bounds are tabulated this way.
pub fn floor_to(x: f64, decimals: i32) -> f64 {
    let scale = 10f64.powi(decimals);
    // Guard against representation error just below an exact decimal.
    ((x * scale) + 1e-9).floor() / scale
}

pub fn round_to(x: f64, decimals: i32) -> f64 {
    let scale = 10f64.powi(decimals);
    (x * scale).round() / scale
}

/// Comparison of the computed `C_1` with the tabulated one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HlsCheck {
    pub d: u32,
    pub variant: HlsVariant,
    pub c_hls_formula: f64,
    /// `C_HLS` implied by the tabulated `C_1 = (C_D C_HLS)^{−2}`.
    pub c_hls_back_solved: f64,
    pub c_1_formula: f64,
    pub c_1_reference: f64,
    pub matches_two_sig_figs: bool,
    /// Agreement after rounding to the 4 decimals the table prints.
    pub matches_printed_decimals: bool,
    pub annotation: Option<String>,
}

pub const HLS_MISMATCH: &str = "HLS-variant mismatch";

pub fn hls_check(d: u32, variant: HlsVariant) -> Result<HlsCheck> {
    let c_1_reference = TABLE2_REFERENCE
        .iter()
        .find(|r| r.0 == d)
        .and_then(|r| r.2)
        .ok_or_else(|| Error::Domain(format!("no tabulated C_1 for d = {d}")))?;
    let c_d = davies_constant(&ConvexDomainSpec::unit_cube(d)?)?;
    let c_hls_formula = hls_constant_with(d, variant)?;
    let c_1_formula = (c_d * c_hls_formula).powi(-2);
    let c_hls_back_solved = 1.0 / (c_d * c_1_reference.sqrt());
    let matches_two_sig_figs = round_sig(c_1_formula, 2) == round_sig(c_1_reference, 2);
    let matches_printed_decimals = round_to(c_1_formula, 4) == c_1_reference;
    let annotation = (!matches_two_sig_figs).then(|| {
        format!(
            "{HLS_MISMATCH}: formula C_1 = {:.3e} (C_HLS = {c_hls_formula:.6}), \
             tabulated {c_1_reference} back-solves to C_HLS = {c_hls_back_solved:.6}; \
             the tabulated value has {} significant figure(s) and {} at 4 decimals",
            c_1_formula,
            significant_figures(c_1_reference),
            if matches_printed_decimals { "agrees" } else { "disagrees" },
        )
    });
    Ok(HlsCheck {
        d,
        variant,
        c_hls_formula,
        c_hls_back_solved,
        c_1_formula,
        c_1_reference,
        matches_two_sig_figs,
        matches_printed_decimals,
        annotation,
    })
}

/// Significant figures of a short decimal literal such as `0.0002`.
fn significant_figures(x: f64) -> usize {
    let s = format!("{x}");
    s.trim_start_matches(['-', '0', '.']).chars().filter(char::is_ascii_digit).count()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table2 {
    pub rows: Vec<TableRow>,
    pub hls_checks: Vec<HlsCheck>,
    /// [`HLS_MISMATCH`] when some `C_1` misses the 2-significant-figure check.
    pub status: Option<String>,
}

/// Tolerance within which a `G_2` deviation from the table is reported
/// rather than treated as an error.
pub const G2_DEVIATION_TOLERANCE: f64 = 0.15;

pub fn table2(d_max: u32, policy: NdPolicy) -> Result<Table2> {
    check_dim(d_max)?;
    let mut rows = Vec::new();
    let mut hls_checks = Vec::new();
    for &(d, quarter, g1, g2) in &TABLE2_REFERENCE[..d_max as usize] {
        let (g, formula) = sharp_constant(d)?;
        let mode = policy.mode_for(d);
        let report = cube_gns_constant(d, mode)?;
        let g_2 = report.g_2.expect("cube report carries G_2");
        let n_d = report.n_d_used.expect("cube report carries N_d").value;
        let mut g2_cell = cell("G_2", Some(g_2), match mode {
            NdMode::Analytic => "rumin_cube:analytic_nd",
            NdMode::Refined { .. } => "rumin_cube:refined_nd",
        }, "table2", Some(g2));
        let shown = floor_to(g_2, 2);
        if (shown - g2).abs() > 1e-9 {
            let dev = g_2 - g2;
            g2_cell.annotation = Some(format!(
                "deviation from tabulated {g2:.2}: {dev:+.4} (N_d = {n_d:.6}); {}",
                if dev.abs() <= G2_DEVIATION_TOLERANCE { "within the accepted ±0.15" } else { "outside ±0.15" }
            ));
        }
        let mut g1_cell = cell("G_1", report.c_1, "davies_hls", "table2", g1);
        if d >= 3 {
            let check = hls_check(d, HlsVariant::default())?;
            g1_cell.annotation = check.annotation.clone();
            hls_checks.push(check);
        }
        rows.push(TableRow {
            d,
            columns: vec![
                cell("G_upper", Some(g / 4.0), &format!("{formula}/4"), "table2", Some(quarter)),
                g1_cell,
                g2_cell,
            ],
        });
    }
    let status = hls_checks.iter().any(|c| !c.matches_two_sig_figs).then(|| HLS_MISMATCH.to_string());
    Ok(Table2 { rows, hls_checks, status })
}

fn csv_value(v: Option<f64>) -> String {
    v.map_or_else(|| "--".to_string(), |x| format!("{x}"))
}

fn render_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("d");
    if let Some(first) = rows.first() {
        for c in &first.columns {
            out.push(',');
            out.push_str(&c.label);
        }
    }
    out.push('\n');
    for row in rows {
        out.push_str(&row.d.to_string());
        for c in &row.columns {
            out.push(',');
            out.push_str(&csv_value(c.value));
        }
        out.push('\n');
    }
    out
}

fn annotations(rows: &[TableRow]) -> String {
    let mut out = String::new();
    for row in rows {
        for c in &row.columns {
            if let Some(a) = &c.annotation {
                let _ = writeln!(out, "  d={} {}: {a}", row.d, c.label);
            }
        }
    }
    out
}

impl Table1 {
    pub fn render(&self, format: Format) -> Result<String> {
        Ok(match format {
            Format::Csv => render_csv(&self.rows),
            Format::Json => serde_json::to_string_pretty(self)? + "\n",
            Format::Pretty => {
                let mut out = format!("{:<3} {:>9} {:>9} {:>9}\n", "d", "G_N(d)", "G'(d)", "G(d)");
                for row in &self.rows {
                    let g = row.value("G_numeric").unwrap_or(f64::NAN);
                    let g = if row.d == 1 { format!("{g:.4}") } else { format!("{g:.3}") };
                    let _ = writeln!(
                        out,
                        "{:<3} {:>9.4} {:>9.4} {:>9}",
                        row.d,
                        row.value("G_N").unwrap_or(f64::NAN),
                        row.value("G_prime").unwrap_or(f64::NAN),
                        g
                    );
                }
                out
            }
        })
    }
}

impl Table2 {
    pub fn render(&self, format: Format) -> Result<String> {
        Ok(match format {
            Format::Csv => render_csv(&self.rows),
            Format::Json => serde_json::to_string_pretty(self)? + "\n",
            Format::Pretty => {
                let mut out = format!("{:<3} {:>7} {:>9} {:>7}\n", "d", "G(d)/4", "G_1", "G_2");
                for row in &self.rows {
                    let g1 = row.value("G_1").map_or_else(|| "--".to_string(), |v| format!("{v:.4}"));
                    let _ = writeln!(
                        out,
                        "{:<3} {:>7.2} {:>9} {:>7.2}",
                        row.d,
                        row.value("G_upper").unwrap_or(f64::NAN),
                        g1,
                        floor_to(row.value("G_2").unwrap_or(f64::NAN), 2)
                    );
                }
                let notes = annotations(&self.rows);
                if !notes.is_empty() {
                    out.push_str("notes:\n");
                    out.push_str(&notes);
                }
                if let Some(s) = &self.status {
                    let _ = writeln!(out, "status: {s}");
                }
                out
            }
        })
    }
}
