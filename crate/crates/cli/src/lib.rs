//! Command-line surface for `gns-core`: the two summary tables, counting
//! certificates and the ground-state and cube experiments.
//!
//! [`execute`] parses arguments, runs the command and returns the exit code
//! with everything that would be printed, so the binary is a thin wrapper.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use gns_core::convex::{cube_gns_constant, NdMode};
use gns_core::cube::{
    concentration_experiment, corner_gaussian, minimize, random_zero_mean, rearrange_check, upper_bound_scaling,
    CubeGrid, ScalingRow,
};
use gns_core::ground_state::{gns_numeric, solve_ground_state};
use gns_core::lattice::certify_nd;
use gns_core::report::{self, sharp_constant, Format, NdPolicy, TABLE1_REFERENCE};
use gns_core::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "gns", version, about = "GNS constants on R^d and on the unit cube")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Pretty, global = true)]
    pub format: OutputFormat,
    /// Also write the report (or the command's artifact) to this path.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
    Pretty,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Json => Format::Json,
            OutputFormat::Pretty => Format::Pretty,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NdModeArg {
    Analytic,
    Refined,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bounds for the sharp constant G(d) on R^d.
    Table1 {
        #[arg(long, default_value_t = 5)]
        d_max: u32,
    },
    /// Upper bound G(d)/4 and the two lower bounds for the unit cube.
    Table2 {
        #[arg(long, default_value_t = 5)]
        d_max: u32,
        /// How N_d is obtained; defaults to refined for d = 2, 3.
        #[arg(long, value_enum)]
        nd_mode: Option<NdModeArg>,
        /// Enumeration cutoff for refined N_d, e.g. `sqrt(17)`.
        #[arg(long, value_parser = parse_radius)]
        r_cut: Option<f64>,
    },
    /// Certify S(r^2) <= N r^d for every radius.
    VerifyCounting {
        #[arg(long)]
        d: u32,
        /// Candidate counting constant N.
        #[arg(long)]
        candidate: f64,
        /// Enumeration cutoff, e.g. `sqrt(17)` or `4.2`.
        #[arg(long, value_parser = parse_radius)]
        r_cut: f64,
    },
    /// Ground-state and cube experiments.
    #[command(subcommand)]
    Experiment(Experiment),
}

#[derive(Debug, Subcommand)]
pub enum Experiment {
    /// Radial ground state and G(d); `--out` receives the profile CSV.
    GroundState {
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Descent on the cube quotient; `--out` receives the final grid function.
    CubeMinimize(MinimizeArgs),
    /// Descent from a corner bump over increasing resolutions.
    Concentration {
        #[arg(long)]
        d: usize,
        /// Comma-separated, strictly increasing; defaults depend on d.
        #[arg(long, value_delimiter = ',')]
        resolutions: Vec<usize>,
    },
    /// Energy and equimeasurability checks for the corner rearrangement.
    RearrangeCheck {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 256)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Cube quotients of the rescaled ground state.
    UpperBoundScaling {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, value_delimiter = ',', default_value = "4,8,16,32")]
        lambdas: Vec<f64>,
        /// Grid resolution; by default the smallest power of two with h <= 1/(16 lambda).
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(Debug, Args)]
pub struct MinimizeArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 128)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Relative decrease below which the descent stops.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 4000)]
    pub max_iters: usize,
    #[arg(long, value_enum, default_value_t = InitArg::Random)]
    pub init: InitArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitArg {
    /// Seeded random low-mode combination with zero mean.
    Random,
    /// Gaussian of width 1/8 at the corner.
    Corner,
}

/// Accepts `4.2`, `sqrt(17)` and `√17`.
pub fn parse_radius(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let inner = t
        .strip_prefix("sqrt(")
        .and_then(|r| r.strip_suffix(')'))
        .or_else(|| t.strip_prefix('√'));
    let value = match inner {
        Some(r) => r.trim().parse::<f64>().map(f64::sqrt),
        None => t.parse::<f64>(),
    }
    .map_err(|e| format!("invalid radius {s:?}: {e}"))?;
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(format!("radius must be positive and finite, got {s:?}"))
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Core(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Core(Error::Json(e))
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Core(Error::Io(e))
    }
}

/// Invalid arguments map to the usage code, everything else is numeric.
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_)
        | Error::Range(_)
        | Error::Precondition(_)
        | Error::Resource(_)
        | Error::Size(_)
        | Error::Resolution(_) => EXIT_USAGE,
        _ => EXIT_NUMERIC,
    }
}

struct Rendered {
    code: i32,
    stdout: String,
}

fn ok(stdout: String) -> Result<Rendered, Failure> {
    Ok(Rendered { code: EXIT_OK, stdout })
}

pub fn execute<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    run(&cli)
}

pub fn run(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok(r) => Outcome { code: r.code, stdout: r.stdout, stderr: String::new() },
        Err(Failure::Usage(msg)) => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {msg}\n") },
        Err(Failure::Core(e)) => Outcome { code: exit_code(&e), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn write_out(path: Option<&Path>, content: &str) -> Result<(), Failure> {
    if let Some(p) = path {
        fs::write(p, content)?;
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<Rendered, Failure> {
    let format: Format = cli.format.into();
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Table1 { d_max } => {
            let text = report::table1(*d_max)?.render(format)?;
            write_out(out, &text)?;
            ok(text)
        }
        Command::Table2 { d_max, nd_mode, r_cut } => {
            let policy = match (nd_mode, r_cut) {
                (Some(NdModeArg::Analytic), Some(_)) => {
                    return Err(Failure::Usage("--r-cut requires --nd-mode refined".into()))
                }
                (Some(NdModeArg::Analytic), None) => NdPolicy::Analytic,
                (Some(NdModeArg::Refined), r) | (None, r @ Some(_)) => NdPolicy::Refined { r_cut: *r },
                (None, None) => NdPolicy::Default,
            };
            let text = report::table2(*d_max, policy)?.render(format)?;
            write_out(out, &text)?;
            ok(text)
        }
        Command::VerifyCounting { d, candidate, r_cut } => verify_counting(*d, *candidate, *r_cut, format, out),
        Command::Experiment(e) => experiment(e, format, out),
    }
}

fn provenance(formula: &str, reference: &str, reference_value: Option<f64>) -> Value {
    json!({ "formula": formula, "reference": reference, "reference_value": reference_value })
}

fn verify_counting(d: u32, candidate: f64, r_cut: f64, format: Format, out: Option<&Path>) -> Result<Rendered, Failure> {
    let cert = certify_nd(d, candidate, r_cut)?;
    let doc = json!({
        "certificate": cert,
        "provenance": provenance("exact_enumeration+analytic_tail", "counting_remark:N_d", None),
    });
    let cert_json = serde_json::to_string_pretty(&doc)? + "\n";
    let text = match format {
        Format::Json => cert_json.clone(),
        Format::Csv => format!(
            "d,n_candidate,r_cut,m_max,tail_bound,worst_ratio,worst_m,verified\n{},{},{},{},{},{},{},{}\n",
            cert.d, cert.n_candidate, cert.r_cut, cert.m_max, cert.tail_bound, cert.worst_ratio, cert.worst_m, cert.verified
        ),
        Format::Pretty => {
            let mut s = format!(
                "d = {}, N = {}, r_cut = {}\n  enumerated m <= {}: worst S(m)/m^(d/2) = {} at m = {}\n  tail bound for r >= r_cut: {}\n",
                cert.d, cert.n_candidate, cert.r_cut, cert.m_max, cert.worst_ratio, cert.worst_m, cert.tail_bound
            );
            s.push_str(if cert.verified { "VERIFIED\n" } else { "NOT VERIFIED\n" });
            s
        }
    };
    if cert.verified {
        write_out(out, &cert_json)?;
    }
    Ok(Rendered { code: if cert.verified { EXIT_OK } else { EXIT_VERIFICATION }, stdout: text })
}

fn rows_csv<T: Serialize>(rows: &[T]) -> Result<String, Failure> {
    let mut out = String::new();
    for (i, row) in rows.iter().enumerate() {
        let Value::Object(map) = serde_json::to_value(row)? else {
            unreachable!("records serialize as objects");
        };
        if i == 0 {
            out.push_str(&map.keys().cloned().collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        let cells: Vec<String> = map.values().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

fn rows_pretty<T: Serialize>(title: &str, rows: &[T]) -> Result<String, Failure> {
    let mut out = format!("{title}\n");
    for row in rows {
        let Value::Object(map) = serde_json::to_value(row)? else {
            unreachable!("records serialize as objects");
        };
        let cells: Vec<String> = map.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "  {}", cells.join("  "));
    }
    Ok(out)
}

/// Renders a record list; JSON wraps it with a provenance tag.
fn render_rows<T: Serialize>(name: &str, rows: &[T], prov: Value, extra: Value, format: Format) -> Result<String, Failure> {
    Ok(match format {
        Format::Csv => rows_csv(rows)?,
        Format::Json => {
            let mut doc = json!({ "experiment": name, "provenance": prov, "rows": rows });
            if let (Value::Object(d), Value::Object(e)) = (&mut doc, extra) {
                d.extend(e);
            }
            serde_json::to_string_pretty(&doc)? + "\n"
        }
        Format::Pretty => rows_pretty(name, rows)?,
    })
}

fn cube_brackets(d: usize) -> Result<(f64, f64), Failure> {
    let d = d as u32;
    let lower = cube_gns_constant(d, NdMode::default_for(d))?.g_2.expect("cube report carries G_2");
    let upper = sharp_constant(d)?.0 / 4.0;
    Ok((lower, upper))
}

#[derive(Serialize)]
struct GroundStateRecord {
    d: u32,
    u0: f64,
    g_numeric: f64,
    nehari_residual: f64,
    pohozaev_residual: f64,
    gradient_energy: f64,
    l2_mass: f64,
    power_integral: f64,
    r_extent: f64,
}

#[derive(Serialize)]
struct TraceRow {
    iteration: usize,
    quotient: f64,
}

#[derive(Serialize)]
struct LambdaRow {
    lambda: f64,
    n: usize,
    quotient: f64,
    mass_fraction: f64,
    decreasing: bool,
}

fn experiment(e: &Experiment, format: Format, out: Option<&Path>) -> Result<Rendered, Failure> {
    match e {
        Experiment::GroundState { d, tol } => {
            let profile = solve_ground_state(*d, *tol)?;
            let g = gns_numeric(&profile)?;
            let record = GroundStateRecord {
                d: *d,
                u0: profile.u0,
                g_numeric: g,
                nehari_residual: profile.nehari_residual(),
                pohozaev_residual: profile.pohozaev_residual(),
                gradient_energy: profile.gradient_energy,
                l2_mass: profile.l2_mass,
                power_integral: profile.power_integral,
                r_extent: profile.r_extent,
            };
            let reference = TABLE1_REFERENCE.iter().find(|r| r.0 == *d).map(|r| r.3);
            let text = render_rows(
                "ground-state",
                &[record],
                provenance("shooting", "table1:G_numeric", reference),
                json!({}),
                format,
            )?;
            write_out(out, &profile.to_csv())?;
            ok(text)
        }
        Experiment::CubeMinimize(args) => {
            let grid = CubeGrid::new(args.d, args.n)?;
            let u0 = match args.init {
                InitArg::Random => random_zero_mean(grid, args.seed),
                InitArg::Corner => corner_gaussian(grid, 0.125),
            };
            let res = minimize(&u0, args.max_iters, args.tol)?;
            let trace: Vec<TraceRow> =
                res.trace.iter().enumerate().map(|(iteration, &quotient)| TraceRow { iteration, quotient }).collect();
            let (lower, upper) = cube_brackets(args.d)?;
            let final_q = res.final_quotient();
            let extra = json!({
                "final_quotient": final_q,
                "iterations": res.iterations,
                "converged": res.converged,
                "bracket": {
                    "lower": { "value": lower, "provenance": provenance("rumin_cube", "table2:G_2", None) },
                    "upper": { "value": upper, "provenance": provenance("ground_state/4", "table2:G_upper", None) },
                },
            });
            let mut text = render_rows(
                "cube-minimize",
                &trace,
                provenance("preconditioned_descent", "cube_quotient", None),
                extra,
                format,
            )?;
            if format == Format::Pretty {
                let _ = writeln!(
                    text,
                    "final quotient {final_q} after {} iterations; lower bound G_2 = {lower:.4}, upper bound G(d)/4 = {upper:.4}",
                    res.iterations
                );
            }
            if let Some(p) = out {
                res.u.save(p)?;
            }
            ok(text)
        }
        Experiment::Concentration { d, resolutions } => {
            let resolutions = if resolutions.is_empty() {
                match d {
                    1 => vec![128, 256, 512, 1024],
                    _ => vec![64, 128, 256],
                }
            } else {
                resolutions.clone()
            };
            let rows = concentration_experiment(*d, &resolutions)?;
            let (lower, upper) = cube_brackets(*d)?;
            let extra = json!({ "bracket": { "lower": lower, "upper": upper } });
            let text = render_rows(
                "concentration",
                &rows,
                provenance("preconditioned_descent:corner_gaussian", "table2:G_upper", Some(upper)),
                extra,
                format,
            )?;
            write_out(out, &text)?;
            ok(text)
        }
        Experiment::RearrangeCheck { d, n, trials, seed } => {
            let summary = rearrange_check(*d, *n, *trials, *seed)?;
            let passed = summary.passed;
            let mut text = render_rows(
                "rearrange-check",
                std::slice::from_ref(&summary),
                provenance("corner_rearrangement", "rearrangement_lemma", None),
                json!({}),
                format,
            )?;
            if format == Format::Pretty {
                text.push_str(if passed { "PASS\n" } else { "FAIL\n" });
            }
            write_out(out, &text)?;
            Ok(Rendered { code: if passed { EXIT_OK } else { EXIT_VERIFICATION }, stdout: text })
        }
        Experiment::UpperBoundScaling { d, lambdas, n } => {
            if lambdas.is_empty() {
                return Err(Failure::Usage("--lambdas must not be empty".into()));
            }
            let rows: Vec<ScalingRow> = upper_bound_scaling(*d, lambdas, *n)?;
            let rows: Vec<LambdaRow> = rows
                .iter()
                .enumerate()
                .map(|(i, r)| LambdaRow {
                    lambda: r.lambda,
                    n: r.n,
                    quotient: r.quotient,
                    mass_fraction: r.mass_fraction,
                    decreasing: i == 0 || r.quotient < rows[i - 1].quotient,
                })
                .collect();
            let upper = sharp_constant(*d as u32)?.0 / 4.0;
            let text = render_rows(
                "upper-bound-scaling",
                &rows,
                provenance("scaled_ground_state", "table2:G_upper", Some(upper)),
                json!({ "limit": upper }),
                format,
            )?;
            write_out(out, &text)?;
            ok(text)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_forms() {
        assert_eq!(parse_radius("sqrt(17)").unwrap(), 17f64.sqrt());
        assert_eq!(parse_radius("√19").unwrap(), 19f64.sqrt());
        assert_eq!(parse_radius("5").unwrap(), 5.0);
        assert!(parse_radius("sqrt(x)").is_err());
        assert!(parse_radius("-1").is_err());
    }

    #[test]
    fn error_codes() {
        assert_eq!(exit_code(&Error::Domain(String::new())), EXIT_USAGE);
        assert_eq!(exit_code(&Error::NonConvergence { iterations: 3 }), EXIT_NUMERIC);
        assert_eq!(execute(["gns", "table1", "--d-max", "x"]).code, EXIT_USAGE);
        assert_eq!(execute(["gns", "table1", "--d-max", "9"]).code, EXIT_USAGE);
    }
}
