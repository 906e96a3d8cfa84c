//! Subcommands. Each returns the text for stdout and stderr plus an exit code, so tests can run
//! them in-process.

use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};
use sl2rep::grid::{fmt17, GridFunction, GridSpec};
use sl2rep::hyperfun::{psi, psi_jet_with, Precision};
use sl2rep::ktypes::{to_noncompact, KTypeIndex, PictureFunction};
use sl2rep::structure::{composition_series, detect_extremal, Extremal, Window};
use sl2rep::tdreduce::{solve_chi, td_residual, transform_closure, MultiplierForm, PotentialSpec, TdVerdict};

use crate::report::{to_json, CheckRecord, ReportDocument, Status};
use crate::suites::{ledger, run_suite, Suite, SuiteOptions, Tolerances};

#[derive(Debug, Parser)]
#[command(name = "sl2rep", version, about = "Closed-form K-types, ladder structure and time-dependent reductions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a K-type in the compact or non-compact picture.
    Eval(EvalArgs),
    /// Run a verification suite and print a report.
    Verify(VerifyArgs),
    /// Composition series of the truncated module for one q.
    Structure(StructureArgs),
    /// Transform a K-type solution to a time-dependent potential.
    Transform(TransformArgs),
    /// CSV catalog of K-types in a window.
    Table(TableArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PictureArg {
    Compact,
    Noncompact,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct EvalArgs {
    #[arg(long)]
    pub q: u8,
    #[arg(long)]
    pub l: u32,
    #[arg(long)]
    pub m: i64,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub y: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub x: Option<f64>,
    #[arg(long, value_enum, default_value = "compact")]
    pub picture: PictureArg,
    /// Also print d/dtheta, d/dy and d2/dy2 (compact picture).
    #[arg(long)]
    pub jet: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Override a named tolerance, e.g. --tol kummer=1e-8.
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    pub tol: Vec<String>,
    /// Restrict the tdreduce suite to one preset (zero, harmonic, linear, linear-t).
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Debug, Args)]
pub struct StructureArgs {
    #[arg(long)]
    pub q: u8,
    #[arg(long, default_value_t = 6)]
    pub lmax: u32,
    /// Defaults to max(29, 2 lmax + 5).
    #[arg(long)]
    pub mbound: Option<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MultiplierArg {
    Verbatim,
    Derived,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct TransformArgs {
    /// Preset name or `g2=..; g1=..; g0=..; lambda=..; T=..`.
    #[arg(long)]
    pub potential: String,
    #[arg(long)]
    pub q: u8,
    #[arg(long)]
    pub l: u32,
    #[arg(long)]
    pub m: i64,
    /// t0:t1:nt,x0:x1:nx
    #[arg(long, default_value = "-0.5:0.5:11,0.5:2.5:21", allow_hyphen_values = true)]
    pub grid: String,
    #[arg(long, value_enum, default_value = "verbatim")]
    pub multiplier: MultiplierArg,
    /// Write the CSV here and the report to stdout; otherwise CSV goes to stdout and the report to stderr.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-5)]
    pub threshold: f64,
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct TableArgs {
    #[arg(long)]
    pub q: u8,
    #[arg(long, default_value_t = 6)]
    pub lmax: u32,
    /// Defaults to 2 lmax + 5.
    #[arg(long)]
    pub mbound: Option<i64>,
    #[arg(long, default_value_t = 0.0)]
    pub theta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub y: f64,
}

/// What a command produced.
#[derive(Debug, Default, PartialEq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String) -> Output {
        Output { stdout, ..Output::default() }
    }
}

/// Runs a parsed command. Errors are input errors (exit code 2).
pub fn run(cli: Cli) -> anyhow::Result<Output> {
    match cli.command {
        Command::Eval(a) => eval(a),
        Command::Verify(a) => verify(a),
        Command::Structure(a) => structure(a),
        Command::Transform(a) => transform(a),
        Command::Table(a) => table(a),
    }
}

pub fn fmt_complex(z: Complex64) -> String {
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{}{}{}i", fmt17(z.re), sign, fmt17(z.im.abs()))
}

fn cjson(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn timestamp(suppress: bool) -> Option<u64> {
    (!suppress).then(|| SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0))
}

fn eval(a: EvalArgs) -> anyhow::Result<Output> {
    let k = KTypeIndex::new(a.q, a.l, a.m)?;
    let mut fields: Vec<(&str, Value, String)> = vec![
        ("index", json!({ "q": k.q, "l": k.l, "m": k.m }), k.to_string()),
        ("lambda", json!(k.lambda().to_string()), k.lambda().to_string()),
    ];
    match a.picture {
        PictureArg::Compact => {
            let (Some(theta), Some(y)) = (a.theta, a.y) else {
                anyhow::bail!("the compact picture needs --theta and --y");
            };
            let jet = psi_jet_with(&k, theta, y, Precision::global())?;
            fields.push(("picture", json!("compact"), "compact".into()));
            fields.push(("theta", json!(theta), fmt17(theta)));
            fields.push(("y", json!(y), fmt17(y)));
            fields.push(("value", cjson(jet.value), fmt_complex(jet.value)));
            if a.jet {
                fields.push(("d_theta", cjson(jet.d_theta), fmt_complex(jet.d_theta)));
                fields.push(("d_y", cjson(jet.d_y), fmt_complex(jet.d_y)));
                fields.push(("d_yy", cjson(jet.d_yy), fmt_complex(jet.d_yy)));
            }
        }
        PictureArg::Noncompact => {
            let (Some(t), Some(x)) = (a.t, a.x) else {
                anyhow::bail!("the noncompact picture needs --t and --x");
            };
            if a.jet {
                anyhow::bail!("--jet is available in the compact picture only");
            }
            let v = to_noncompact(&PictureFunction::ktype(k))?.eval(t, x)?;
            fields.push(("picture", json!("noncompact"), "noncompact".into()));
            fields.push(("t", json!(t), fmt17(t)));
            fields.push(("x", json!(x), fmt17(x)));
            fields.push(("value", cjson(v), fmt_complex(v)));
        }
    }
    if a.json {
        let obj: serde_json::Map<String, Value> = fields.into_iter().map(|(k, v, _)| (k.to_string(), v)).collect();
        Ok(Output::ok(to_json(&obj)? + "\n"))
    } else {
        Ok(Output::ok(fields.into_iter().map(|(k, _, s)| format!("{k}: {s}\n")).collect()))
    }
}

fn verify(a: VerifyArgs) -> anyhow::Result<Output> {
    let mut tol = Tolerances::default();
    for raw in &a.tol {
        tol.apply(raw)?;
    }
    if let Some(p) = &a.preset {
        if a.suite != Suite::Tdreduce && a.suite != Suite::All {
            anyhow::bail!("--preset applies to the tdreduce suite only");
        }
        PotentialSpec::preset(p)?;
    }
    let opts = SuiteOptions { tol, preset: a.preset.clone() };
    let results = run_suite(a.suite, &opts);
    let doc = ReportDocument {
        command: "verify".into(),
        inputs: json!({ "suite": a.suite.name(), "tol": opts.tol.overrides(), "preset": a.preset }),
        results,
        ledger: ledger(),
        version: env!("CARGO_PKG_VERSION").into(),
        timestamp: timestamp(a.no_timestamp),
    };
    Ok(Output { stdout: to_json(&doc)? + "\n", stderr: String::new(), code: doc.exit_code() })
}

fn structure(a: StructureArgs) -> anyhow::Result<Output> {
    let mbound = a.mbound.unwrap_or_else(|| (2 * a.lmax as i64 + 5).max(29));
    let window = Window::new(a.q, a.lmax, mbound)?;
    let report = composition_series(a.q, window)?;
    let code = i32::from(!report.verified);
    Ok(Output { stdout: to_json(&report)? + "\n", stderr: String::new(), code })
}

/// Input samples, transformed samples and the report, for `transform`.
pub struct TransformResult {
    pub input: GridFunction,
    pub output: GridFunction,
    pub report: ReportDocument,
}

pub fn transform_grid(a: &TransformArgs) -> anyhow::Result<TransformResult> {
    let k = KTypeIndex::new(a.q, a.l, a.m)?;
    let mut spec: PotentialSpec = a.potential.parse()?;
    let lambda = k.lambda();
    if spec.lambda != lambda {
        if spec.lambda_f64() != 0.0 {
            anyhow::bail!("potential has lambda = {} but the K-type {k} has lambda = l(l-1)/2 = {lambda}", spec.lambda);
        }
        spec = spec.with_lambda(lambda)?;
    }
    let grid: GridSpec = a.grid.parse()?;
    let form = match a.multiplier {
        MultiplierArg::Verbatim => MultiplierForm::Verbatim,
        MultiplierArg::Derived => MultiplierForm::Derived,
    };
    let cs = solve_chi(&spec, 1e-2)?;
    let (lo, hi) = cs.valid_interval();
    if grid.t0 < lo || grid.t1 > hi {
        anyhow::bail!("grid t-range [{}, {}] leaves the valid interval [{lo}, {hi}]", grid.t0, grid.t1);
    }
    let f = to_noncompact(&PictureFunction::ktype(k))?;
    let g = transform_closure(&cs, &f, form)?;
    let input = GridFunction::sample(grid, |t, x| f.eval(t, x))?;
    let output = GridFunction::sample(grid, |t, x| g.eval(t, x))?;

    // probes: interior nodes with room for the stencil and away from x = 0 when lambda != 0
    let h = 1e-3;
    let lam_nonzero = spec.lambda_f64() != 0.0;
    let all: Vec<(f64, f64)> = grid
        .ts()
        .into_iter()
        .filter(|t| *t - 2.0 * h > lo && *t + 2.0 * h < hi)
        .flat_map(|t| grid.xs().into_iter().map(move |x| (t, x)))
        .filter(|(_, x)| !lam_nonzero || x.abs() >= 0.1 + 2.0 * h)
        .collect();
    let stride = all.len().div_ceil(25).max(1);
    let probes: Vec<(f64, f64)> = all.into_iter().step_by(stride).collect();

    let mut results = Vec::new();
    if probes.is_empty() {
        results.push(
            CheckRecord::new("td_residual", Status::Caveat, None, Some(a.threshold))
                .with_detail("no grid node admits a residual stencil"),
        );
    } else {
        let r = td_residual(&g, &spec, &probes, h, a.threshold)?;
        let status = match (r.verdict, form) {
            (TdVerdict::Pass, _) => Status::Pass,
            (TdVerdict::MultiplierDiscrepancy, MultiplierForm::Verbatim) => Status::Discrepancy,
            (TdVerdict::MultiplierDiscrepancy, MultiplierForm::Derived) => Status::Fail,
        };
        let verdict = match r.verdict {
            TdVerdict::Pass => "PASS",
            TdVerdict::MultiplierDiscrepancy => "MULTIPLIER-DISCREPANCY",
        };
        results.push(
            CheckRecord::new("td_residual", status, Some(r.max_residual), Some(r.threshold))
                .with_inputs(json!({ "index": { "q": k.q, "l": k.l, "m": k.m }, "report": r }))
                .with_detail(verdict),
        );
    }
    let identity = spec.g2.is_zero() && spec.g1.is_zero() && spec.g0.is_zero();
    if identity {
        let dev = input.samples.iter().zip(&output.samples).fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
        results.push(
            CheckRecord::threshold("identity_transform", dev, 1e-14)
                .with_inputs(json!({ "grid": a.grid }))
                .with_detail("zero potential maps every solution to itself"),
        );
    }
    let report = ReportDocument {
        command: "transform".into(),
        inputs: json!({
            "potential": spec.to_string(),
            "index": { "q": k.q, "l": k.l, "m": k.m },
            "grid": a.grid,
            "multiplier": format!("{form:?}"),
            "valid_interval": [lo, hi],
        }),
        results,
        ledger: ledger(),
        version: env!("CARGO_PKG_VERSION").into(),
        timestamp: timestamp(a.no_timestamp),
    };
    Ok(TransformResult { input, output, report })
}

fn transform(a: TransformArgs) -> anyhow::Result<Output> {
    let r = transform_grid(&a)?;
    let csv = r.output.to_csv();
    let json = to_json(&r.report)? + "\n";
    let code = r.report.exit_code();
    Ok(match &a.csv {
        Some(path) => {
            std::fs::write(path, csv).map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?;
            Output { stdout: json, stderr: String::new(), code }
        }
        None => Output { stdout: csv, stderr: json, code },
    })
}

pub const TABLE_HEADER: &str = "q,l,m,lambda,theta,y,re_psi,im_psi,lowest,highest";

fn table(a: TableArgs) -> anyhow::Result<Output> {
    let q = a.q % 4;
    let mbound = a.mbound.unwrap_or(2 * a.lmax as i64 + 5);
    let mut out = String::from(TABLE_HEADER);
    out.push('\n');
    if mbound >= 0 {
        for k in sl2rep::ktypes::admissible_indices(q, a.lmax, mbound) {
            let v = psi(&k, a.theta, a.y)?;
            let ext = detect_extremal(q, k.l);
            out.push_str(&format!(
                "{q},{},{},{},{},{},{},{},{},{}\n",
                k.l,
                k.m,
                k.lambda(),
                fmt17(a.theta),
                fmt17(a.y),
                fmt17(v.re),
                fmt17(v.im),
                ext == Extremal::Lowest(k.m),
                ext == Extremal::Highest(k.m)
            ));
        }
    }
    Ok(Output::ok(out))
}
