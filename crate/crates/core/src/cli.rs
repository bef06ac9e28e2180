//! `wedge` command-line front end.
//!
//! Exit status: 0 success, 2 detached or otherwise non-physical regime,
//! 3 invalid configuration, 4 numerical failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::euler::FlowParams;
use crate::hypersonic_limit::{limit_state, limiting_circle, low_energy_limit, LimitState};
use crate::measure::{
    eps_measure_family, limit_measure_solution, Curve, Quadrature, ALL_COMPONENTS,
};
use crate::numeric::geometric_ladder;
use crate::plot::{line_plot, Series};
use crate::shock_polar::{max_abs, rh_residual, sample_polar, solve_downstream};
use crate::weak_form::{
    residual_battery, stratified_battery, stratum_of, vague_convergence, wedge_bumps,
    ConvergenceReport,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Ladder used by `converge` when none is given.
pub const DEFAULT_CONVERGE_LADDER: [f64; 7] = [1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5];
/// Residual tolerance used by `verify-weak` when `--tol` is absent.
pub const DEFAULT_WEAK_TOL: f64 = 1e-8;
pub const DEFAULT_BATTERY_SIZE: usize = 50;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_POLAR_POINTS: usize = 201;

#[derive(Debug, Parser)]
#[command(
    name = "wedge",
    version,
    about = "Wedge shock solutions and their hypersonic limit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one attached oblique shock.
    Solve(SolveArgs),
    /// Solve along a geometric ladder in eps or e0prime.
    Sweep(SweepArgs),
    /// Closed-form eps = 0 limit and limit-measure weights at x = 1.
    Limit(LimitArgs),
    /// Weak-form residuals of a measure family over a stratified bump battery.
    VerifyWeak(VerifyArgs),
    /// Pairing gaps between the eps family and the limit measure solution.
    Converge(ConvergeArgs),
    /// Sample the shock polar.
    Polar(PolarArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParam {
    Eps,
    E0prime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BumpSet {
    Wedge,
    Battery,
}

#[derive(Debug, Args)]
pub struct AngleArgs {
    /// Wedge half-angle in degrees.
    #[arg(
        long,
        conflicts_with = "theta_rad",
        required_unless_present = "theta_rad"
    )]
    pub theta: Option<f64>,
    /// Wedge half-angle in radians.
    #[arg(long)]
    pub theta_rad: Option<f64>,
}

impl AngleArgs {
    fn radians(&self) -> f64 {
        match (self.theta, self.theta_rad) {
            (_, Some(r)) => r,
            (Some(d), None) => d.to_radians(),
            (None, None) => unreachable!("clap requires one angle flag"),
        }
    }
}

#[derive(Debug, Args)]
pub struct GasArgs {
    /// gamma - 1.
    #[arg(long, conflicts_with = "gamma")]
    pub eps: Option<f64>,
    /// Adiabatic exponent.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Upstream Mach number.
    #[arg(long)]
    pub m0: Option<f64>,
    /// Upstream internal energy; defaults to 1 unless fixed by `--m0` together with eps or gamma.
    #[arg(long)]
    pub e0prime: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ladder {
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

impl Ladder {
    pub fn values(&self) -> Vec<f64> {
        geometric_ladder(self.start, self.end, self.points)
    }
}

fn parse_ladder(s: &str) -> std::result::Result<Ladder, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b, n] = parts.as_slice() else {
        return Err("expected start,end,points".into());
    };
    let start: f64 = a.parse().map_err(|e| format!("start: {e}"))?;
    let end: f64 = b.parse().map_err(|e| format!("end: {e}"))?;
    let points: usize = n.parse().map_err(|e| format!("points: {e}"))?;
    if !(start > 0.0 && end > 0.0 && start.is_finite() && end.is_finite()) {
        return Err("ladder endpoints must be positive".into());
    }
    if points == 0 {
        return Err("ladder needs at least one point".into());
    }
    if points > 1 && !(end < start) {
        return Err("geometric ladder must be strictly decreasing".into());
    }
    if points == 1 && end != start {
        return Err("a one-point ladder needs start == end".into());
    }
    Ok(Ladder { start, end, points })
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write the table here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write an SVG plot.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub angle: AngleArgs,
    #[command(flatten)]
    pub gas: GasArgs,
    /// Fail (exit 4) if the Rankine-Hugoniot residual exceeds this.
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub angle: AngleArgs,
    #[command(flatten)]
    pub gas: GasArgs,
    /// Geometric ladder `start,end,points`.
    #[arg(long, value_parser = parse_ladder)]
    pub ladder: Ladder,
    /// Parameter swept along the ladder.
    #[arg(long, value_enum, default_value = "eps")]
    pub sweep: SweepParam,
    /// Fail (exit 4) if any Rankine-Hugoniot residual exceeds this.
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    #[command(flatten)]
    pub angle: AngleArgs,
    #[arg(long, default_value_t = 1.0)]
    pub e0prime: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub angle: AngleArgs,
    /// Without eps, gamma or m0 the limit measure solution is verified.
    #[command(flatten)]
    pub gas: GasArgs,
    /// Number of test functions.
    #[arg(long, default_value_t = DEFAULT_BATTERY_SIZE)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Pass threshold on the largest residual.
    #[arg(long, default_value_t = DEFAULT_WEAK_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub angle: AngleArgs,
    #[arg(long, default_value_t = 1.0)]
    pub e0prime: f64,
    /// Geometric ladder `start,end,points`.
    #[arg(long, value_parser = parse_ladder, conflicts_with = "eps_list")]
    pub ladder: Option<Ladder>,
    /// Explicit strictly decreasing eps values.
    #[arg(long, value_delimiter = ',')]
    pub eps_list: Option<Vec<f64>>,
    /// Test functions: ten fixed bumps on the wedge, or a stratified battery.
    #[arg(long, value_enum, default_value = "wedge")]
    pub bumps: BumpSet,
    #[arg(long, default_value_t = DEFAULT_BATTERY_SIZE)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PolarArgs {
    #[command(flatten)]
    pub angle: AngleArgs,
    #[command(flatten)]
    pub gas: GasArgs,
    #[arg(long, default_value_t = DEFAULT_POLAR_POINTS)]
    pub points: usize,
    /// Overlay the limiting low-energy circle.
    #[arg(long)]
    pub circle: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

const DEFAULT_E0PRIME: f64 = 1.0;

/// Resolve `(eps, e0prime)` from the gas flags, or `None` if no gas parameter is given.
fn resolve_gas(g: &GasArgs) -> Result<Option<(f64, f64)>> {
    let eps = match (g.eps, g.gamma) {
        (Some(e), _) => Some(e),
        (None, Some(gamma)) => Some(gamma - 1.0),
        (None, None) => None,
    };
    match (eps, g.m0) {
        (None, None) => Ok(None),
        (Some(e), None) => Ok(Some((e, g.e0prime.unwrap_or(DEFAULT_E0PRIME)))),
        (Some(e), Some(m0)) => {
            if g.e0prime.is_some() {
                return Err(Error::InvalidParams(
                    "--m0 with --eps/--gamma fixes e0prime; drop --e0prime".into(),
                ));
            }
            if !(m0 > 0.0 && e > 0.0) {
                return Err(Error::InvalidParams(format!(
                    "need m0 > 0 and eps > 0 (got m0 = {m0}, eps = {e})"
                )));
            }
            Ok(Some((e, 1.0 / (m0 * m0 * e))))
        }
        (None, Some(m0)) => {
            let e0p = g.e0prime.unwrap_or(DEFAULT_E0PRIME);
            if !(m0 > 0.0 && e0p > 0.0) {
                return Err(Error::InvalidParams(format!(
                    "need m0 > 0 and e0prime > 0 (got m0 = {m0}, e0prime = {e0p})"
                )));
            }
            Ok(Some((1.0 / (m0 * m0 * e0p), e0p)))
        }
    }
}

fn require_gas(g: &GasArgs) -> Result<(f64, f64)> {
    resolve_gas(g)?
        .ok_or_else(|| Error::InvalidParams("one of --eps, --gamma, --m0 is required".into()))
}

/// One solved configuration in the output schema.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolveRow {
    pub eps: f64,
    pub gamma: f64,
    #[serde(rename = "M0")]
    pub m0: f64,
    pub theta_deg: f64,
    pub alpha_deg: f64,
    pub sigma: f64,
    pub u1: f64,
    pub v1: f64,
    pub rho1: f64,
    pub p1: f64,
    pub eps_rho1: f64,
    pub rho1_times_sigma_minus_a: f64,
    pub rh_residual_max: f64,
}

pub const SOLVE_HEADER: [&str; 13] = [
    "eps",
    "gamma",
    "M0",
    "theta_deg",
    "alpha_deg",
    "sigma",
    "u1",
    "v1",
    "rho1",
    "p1",
    "eps_rho1",
    "rho1_times_sigma_minus_a",
    "rh_residual_max",
];

impl SolveRow {
    fn values(&self) -> Vec<f64> {
        vec![
            self.eps,
            self.gamma,
            self.m0,
            self.theta_deg,
            self.alpha_deg,
            self.sigma,
            self.u1,
            self.v1,
            self.rho1,
            self.p1,
            self.eps_rho1,
            self.rho1_times_sigma_minus_a,
            self.rh_residual_max,
        ]
    }
}

pub fn solve_row(params: &FlowParams) -> Result<SolveRow> {
    let sol = solve_downstream(params)?;
    let d = sol.downstream;
    Ok(SolveRow {
        eps: params.eps,
        gamma: params.gamma(),
        m0: params.mach0(),
        theta_deg: degrees(params.theta),
        alpha_deg: sol.alpha.to_degrees(),
        sigma: sol.sigma,
        u1: d.u,
        v1: d.v,
        rho1: d.rho,
        p1: sol.p1(),
        eps_rho1: params.eps * d.rho,
        rho1_times_sigma_minus_a: d.rho * (sol.sigma - params.slope()),
        rh_residual_max: max_abs(&rh_residual(&sol)),
    })
}

/// 17 significant digits.
pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

fn num_row(values: &[f64]) -> Vec<String> {
    values.iter().map(|v| fmt_num(*v)).collect()
}

fn json_doc(config: Value, key: &str, body: Value) -> String {
    let mut doc = serde_json::Map::new();
    doc.insert("config".into(), config);
    doc.insert(key.into(), body);
    doc.insert("version".into(), Value::String(VERSION.into()));
    let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
    s.push('\n');
    s
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Error::InvalidParams(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Error::InvalidParams(format!("cannot write to stdout: {e}")))
        }
    }
}

/// Degrees, snapped to the nearest nano-degree when the conversion only adds ulp noise.
fn degrees(theta: f64) -> f64 {
    let d = theta.to_degrees();
    let snapped = (d * 1e9).round() / 1e9;
    if (d - snapped).abs() <= 4.0 * f64::EPSILON * d.abs() {
        snapped
    } else {
        d
    }
}

fn flow_config(subcommand: &str, params: &FlowParams) -> Value {
    json!({
        "subcommand": subcommand,
        "theta_rad": params.theta,
        "theta_deg": degrees(params.theta),
        "eps": params.eps,
        "e0prime": params.e0prime,
    })
}

struct Outcome {
    text: String,
    svg: Option<String>,
    /// Exit status after the output has been written.
    status: i32,
}

fn emit(o: &OutputArgs, outcome: Outcome) -> Result<i32> {
    write_output(o.out.as_deref(), &outcome.text)?;
    if let (Some(p), Some(svg)) = (o.svg.as_deref(), outcome.svg) {
        write_output(Some(p), &svg)?;
    }
    Ok(outcome.status)
}

fn rows_output(
    o: &OutputArgs,
    config: Value,
    rows: &[SolveRow],
    tol: Option<f64>,
    svg: Option<String>,
) -> Outcome {
    let text = match o.format {
        Format::Csv => csv_table(&SOLVE_HEADER, rows.iter().map(|r| num_row(&r.values()))),
        Format::Json => json_doc(config, "rows", to_value(&rows)),
    };
    let bad = tol.is_some_and(|t| rows.iter().any(|r| !(r.rh_residual_max <= t)));
    Outcome {
        text,
        svg,
        status: if bad { 4 } else { 0 },
    }
}

fn cmd_solve(a: &SolveArgs) -> Result<i32> {
    let (eps, e0p) = require_gas(&a.gas)?;
    let params = FlowParams::new(a.angle.radians(), eps, e0p)?;
    let row = solve_row(&params)?;
    let mut config = flow_config("solve", &params);
    config["tol"] = to_value(&a.tol);
    emit(
        &a.output,
        rows_output(&a.output, config, &[row], a.tol, None),
    )
}

fn cmd_sweep(a: &SweepArgs) -> Result<i32> {
    let theta = a.angle.radians();
    let values = a.ladder.values();
    let fixed = resolve_gas(&a.gas)?;
    let params: Vec<FlowParams> = match a.sweep {
        SweepParam::Eps => {
            if a.gas.eps.is_some() || a.gas.gamma.is_some() || a.gas.m0.is_some() {
                return Err(Error::InvalidParams(
                    "an eps sweep takes eps from the ladder; drop --eps/--gamma/--m0".into(),
                ));
            }
            let e0p = a.gas.e0prime.unwrap_or(DEFAULT_E0PRIME);
            values
                .iter()
                .map(|e| FlowParams::new(theta, *e, e0p))
                .collect::<Result<_>>()?
        }
        SweepParam::E0prime => {
            if a.gas.e0prime.is_some() || a.gas.m0.is_some() {
                return Err(Error::InvalidParams(
                    "an e0prime sweep takes e0prime from the ladder; drop --e0prime/--m0".into(),
                ));
            }
            let (eps, _) = fixed.ok_or_else(|| {
                Error::InvalidParams("an e0prime sweep needs --eps or --gamma".into())
            })?;
            values
                .iter()
                .map(|e0p| FlowParams::new(theta, eps, *e0p))
                .collect::<Result<_>>()?
        }
    };
    let results: Vec<Result<SolveRow>> = params.par_iter().map(solve_row).collect();
    let rows = results.into_iter().collect::<Result<Vec<_>>>()?;
    let config = json!({
        "subcommand": "sweep",
        "theta_rad": theta,
        "theta_deg": degrees(theta),
        "sweep": a.sweep,
        "ladder": a.ladder,
        "eps": if a.sweep == SweepParam::E0prime { to_value(&params[0].eps) } else { Value::Null },
        "e0prime": if a.sweep == SweepParam::Eps { to_value(&params[0].e0prime) } else { Value::Null },
        "tol": a.tol,
    });
    let svg = a.output.svg.as_ref().map(|_| {
        let (xlabel, ylabel, pts): (&str, &str, Vec<(f64, f64)>) = match a.sweep {
            SweepParam::Eps => (
                "log10 eps",
                "eps rho1",
                rows.iter().map(|r| (r.eps.log10(), r.eps_rho1)).collect(),
            ),
            SweepParam::E0prime => (
                "log10 e0prime",
                "rho1",
                params
                    .iter()
                    .zip(&rows)
                    .map(|(p, r)| (p.e0prime.log10(), r.rho1))
                    .collect(),
            ),
        };
        line_plot("sweep", xlabel, ylabel, &[Series::new(ylabel, pts)])
    });
    emit(&a.output, rows_output(&a.output, config, &rows, a.tol, svg))
}

/// Limit state plus the limit-measure weights at `x = 1`.
#[derive(Debug, Clone, Serialize)]
pub struct LimitRecord {
    pub theta_deg: f64,
    pub e0prime: f64,
    #[serde(flatten)]
    pub state: LimitState,
    pub weights_at_x1: Vec<(String, f64)>,
    pub w1_p: f64,
    pub w2_p: f64,
}

pub fn limit_record(params: &FlowParams) -> Result<LimitRecord> {
    let lim = limit_measure_solution(params)?;
    let wedge = Curve::wedge(params.slope());
    let mut weights_at_x1: Vec<(String, f64)> = ALL_COMPONENTS
        .iter()
        .filter(|c| c.name() != "p")
        .map(|c| {
            (
                format!("w_{}", c.name()),
                lim.family.component(*c).dirac_weight_at(&wedge, 1.0),
            )
        })
        .collect();
    weights_at_x1.push(("w_varrho".into(), lim.varrho.dirac_weight_at(&wedge, 1.0)));
    Ok(LimitRecord {
        theta_deg: degrees(params.theta),
        e0prime: params.e0prime,
        state: limit_state(params),
        weights_at_x1,
        w1_p: lim.family.wall_force[0],
        w2_p: lim.family.wall_force[1],
    })
}

fn cmd_limit(a: &LimitArgs) -> Result<i32> {
    let params = FlowParams::new(a.angle.radians(), 0.0, a.e0prime)?;
    let rec = limit_record(&params)?;
    let s = rec.state;
    let mut header = vec![
        "theta_deg",
        "e0prime",
        "u_lim",
        "v_lim",
        "p_lim",
        "eps_rho_lim",
        "sigma_slope",
        "mass_weight_rate",
        "u_slope",
    ]
    .into_iter()
    .map(String::from)
    .collect::<Vec<_>>();
    let mut values = vec![
        rec.theta_deg,
        rec.e0prime,
        s.u_lim,
        s.v_lim,
        s.p_lim,
        s.eps_rho_lim,
        s.sigma_slope,
        s.mass_weight_rate,
        s.u_slope,
    ];
    for (k, v) in &rec.weights_at_x1 {
        header.push(k.clone());
        values.push(*v);
    }
    header.extend(["w1_p".into(), "w2_p".into()]);
    values.extend([rec.w1_p, rec.w2_p]);
    let text = match a.output.format {
        Format::Csv => {
            let h: Vec<&str> = header.iter().map(String::as_str).collect();
            csv_table(&h, [num_row(&values)])
        }
        Format::Json => {
            let mut body = serde_json::Map::new();
            for (k, v) in header.iter().zip(&values) {
                body.insert(k.clone(), to_value(v));
            }
            json_doc(flow_config("limit", &params), "report", Value::Object(body))
        }
    };
    emit(
        &a.output,
        Outcome {
            text,
            svg: None,
            status: 0,
        },
    )
}

fn cmd_verify(a: &VerifyArgs) -> Result<i32> {
    let theta = a.angle.radians();
    let (family, params, label) = match resolve_gas(&a.gas)? {
        None => {
            let params = FlowParams::new(theta, 0.0, a.gas.e0prime.unwrap_or(DEFAULT_E0PRIME))?;
            (limit_measure_solution(&params)?.family, params, "limit")
        }
        Some((eps, e0p)) => {
            let params = FlowParams::new(theta, eps, e0p)?;
            (
                eps_measure_family(&solve_downstream(&params)?)?,
                params,
                "eps",
            )
        }
    };
    let phis = stratified_battery(&params, a.n, a.seed);
    let rep = residual_battery(&family, &phis, &Quadrature::default());
    let pass = rep.max_abs < a.tol;
    let text = match a.output.format {
        Format::Csv => csv_table(
            &[
                "index", "stratum", "cx", "cy", "rx", "ry", "r0", "r1", "r2", "r3",
            ],
            phis.iter()
                .zip(&rep.residuals)
                .enumerate()
                .map(|(i, (phi, r))| {
                    let mut row = vec![
                        i.to_string(),
                        to_value(&stratum_of(i)).as_str().unwrap_or("").to_string(),
                    ];
                    row.extend(num_row(&[phi.cx, phi.cy, phi.rx, phi.ry]));
                    row.extend(num_row(&r.r));
                    row
                }),
        ),
        Format::Json => {
            let mut config = flow_config("verify-weak", &params);
            config["family"] = json!(label);
            config["n"] = json!(a.n);
            config["seed"] = json!(a.seed);
            config["tol"] = json!(a.tol);
            let residuals: Vec<Value> = phis
                .iter()
                .zip(&rep.residuals)
                .enumerate()
                .map(|(i, (phi, r))| json!({"index": i, "stratum": stratum_of(i), "phi": phi, "r": r.r}))
                .collect();
            json_doc(
                config,
                "report",
                json!({
                    "max_per_equation": rep.max_per_equation,
                    "max_abs": rep.max_abs,
                    "pass": pass,
                    "residuals": residuals,
                }),
            )
        }
    };
    emit(
        &a.output,
        Outcome {
            text,
            svg: None,
            status: if pass { 0 } else { 4 },
        },
    )
}

fn converge_svg(rep: &ConvergenceReport) -> String {
    let series: Vec<Series> = rep
        .components
        .iter()
        .map(|g| {
            let pts = rep
                .eps_ladder
                .iter()
                .zip(&g.pairing_gap[0])
                .map(|(e, gap)| (e.log10(), gap.log10()))
                .collect();
            Series::new(g.component.name(), pts)
        })
        .collect();
    line_plot(
        "pairing gaps, first test function",
        "log10 eps",
        "log10 gap",
        &series,
    )
}

fn cmd_converge(a: &ConvergeArgs) -> Result<i32> {
    let theta = a.angle.radians();
    let params = FlowParams::new(theta, 0.0, a.e0prime)?;
    let ladder = match (&a.ladder, &a.eps_list) {
        (Some(l), _) => l.values(),
        (None, Some(v)) => v.clone(),
        (None, None) => DEFAULT_CONVERGE_LADDER.to_vec(),
    };
    let phis = match a.bumps {
        BumpSet::Wedge => wedge_bumps(&params),
        BumpSet::Battery => stratified_battery(&params, a.n, a.seed),
    };
    let rep = vague_convergence(&params, &phis, &ladder, &Quadrature::default())?;
    let text = match a.output.format {
        Format::Csv => {
            let mut rows = Vec::new();
            for g in &rep.components {
                for (j, (gaps, pairs)) in g.pairing_gap.iter().zip(&g.pairing).enumerate() {
                    for (e, (gap, pr)) in rep.eps_ladder.iter().zip(gaps.iter().zip(pairs)) {
                        let mut row = vec![g.component.name().to_string(), j.to_string()];
                        row.extend(num_row(&[*e, *pr, g.limit_pairing[j], *gap]));
                        rows.push(row);
                    }
                }
            }
            csv_table(
                &[
                    "component",
                    "phi",
                    "eps",
                    "pairing",
                    "limit_pairing",
                    "pairing_gap",
                ],
                rows,
            )
        }
        Format::Json => {
            let config = json!({
                "subcommand": "converge",
                "theta_rad": theta,
                "theta_deg": degrees(theta),
                "e0prime": a.e0prime,
                "eps_ladder": ladder,
                "bumps": a.bumps,
                "n": if a.bumps == BumpSet::Battery { json!(a.n) } else { Value::Null },
                "seed": if a.bumps == BumpSet::Battery { json!(a.seed) } else { Value::Null },
            });
            let mut body = to_value(&rep);
            body["min_order"] = to_value(&rep.min_order());
            json_doc(config, "report", body)
        }
    };
    let svg = a.output.svg.as_ref().map(|_| converge_svg(&rep));
    emit(
        &a.output,
        Outcome {
            text,
            svg,
            status: 0,
        },
    )
}

fn circle_points(center: f64, radius: f64, n: usize) -> Vec<(f64, f64)> {
    (0..=n)
        .map(|i| {
            let t = std::f64::consts::PI * i as f64 / n as f64;
            (center + radius * t.cos(), radius * t.sin())
        })
        .collect()
}

fn cmd_polar(a: &PolarArgs) -> Result<i32> {
    let (eps, e0p) = require_gas(&a.gas)?;
    let theta = a.angle.radians();
    let params = FlowParams::new(theta, eps, e0p)?;
    let pts = sample_polar(&params, a.points)?;
    let circle = if a.circle {
        let (c, r) = limiting_circle(eps);
        let meets = low_energy_limit(eps, theta).ok().map(|l| l.intersections);
        Some((c, r, meets))
    } else {
        None
    };
    let text = match a.output.format {
        Format::Csv => csv_table(&["u", "v"], pts.iter().map(|p| num_row(&[p.u, p.v]))),
        Format::Json => {
            let mut config = flow_config("polar", &params);
            config["points"] = json!(a.points);
            config["circle"] = json!(a.circle);
            let circle = circle.map(|(c, r, meets)| {
                json!({"center": [c, 0.0], "radius": r, "wedge_intersections": meets})
            });
            json_doc(config, "report", json!({"points": pts, "circle": circle}))
        }
    };
    let svg = a.output.svg.as_ref().map(|_| {
        let mut series = vec![Series::new(
            "polar",
            pts.iter().map(|p| (p.u, p.v)).collect(),
        )];
        if let Some((c, r, _)) = circle {
            series.push(Series::new("limit circle", circle_points(c, r, 180)).dashed());
        }
        let a = params.slope();
        series.push(Series::new("v = u tan theta", vec![(0.0, 0.0), (1.0, a)]).dashed());
        line_plot("shock polar", "u", "v", &series)
    });
    emit(
        &a.output,
        Outcome {
            text,
            svg,
            status: 0,
        },
    )
}

/// Machine-readable error record written to standard error.
pub fn error_record(kind: &str, message: &str, code: i32) -> String {
    let mut s = String::new();
    let _ = write!(
        s,
        "{}",
        json!({"error": {"kind": kind, "message": message, "exit_code": code}})
    );
    s
}

pub fn execute(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Limit(a) => cmd_limit(a),
        Command::VerifyWeak(a) => cmd_verify(a),
        Command::Converge(a) => cmd_converge(a),
        Command::Polar(a) => cmd_polar(a),
    }
}

/// Parse arguments, run, and return the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    0
                }
                _ => {
                    let _ = e.print();
                    eprintln!(
                        "{}",
                        error_record("invalid_config", &e.kind().to_string(), 3)
                    );
                    3
                }
            };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            let code = e.exit_code();
            eprintln!("{}", error_record(e.kind(), &e.to_string(), code));
            code
        }
    }
}
