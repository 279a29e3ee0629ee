//! Command-line front end: compute bounds, expand series, run verification
//! suites and emit JSON/CSV reports.
//!
//! Exit codes: 0 on success (all checks pass), 1 on a verification
//! violation, 2 on usage or I/O errors.

// `!(x >= 2.0)` and friends are intentional: the negated form rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use radrot::bounds::{coeff_bound, distortion_bounds, growth_bounds, pk_disk, re_bounds};
use radrot::classes::{extremal_fn, extremal_pk, from_measure, ClassFunction, ClassKind};
use radrot::measures::DiscreteMeasure;
use radrot::verify::{
    verify_coefficients, verify_disk, verify_growth_distortion, verify_radius_starlike,
    verify_rotation, CoeffOptions, DiskOptions, GrowthOptions, RadiusOptions, RotationKind,
    RotationOptions, VerificationReport, VerificationRun,
};

/// Environment variable naming the default output directory for `--out`.
const OUT_DIR_ENV: &str = "RADROT_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "radrot",
    version,
    about = "Bounded radius/boundary rotation classes: bounds, series, verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Pk,
    Rk,
    Vk,
}

impl From<KindArg> for ClassKind {
    fn from(k: KindArg) -> ClassKind {
        match k {
            KindArg::Pk => ClassKind::Pk,
            KindArg::Rk => ClassKind::Rk,
            KindArg::Vk => ClassKind::Vk,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RotationKindArg {
    Radius,
    Boundary,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Output file; relative paths resolve against $RADROT_OUT_DIR when set
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include a timestamp field (unix seconds) in JSON output
    #[arg(long)]
    timestamp: bool,
}

#[derive(Args, Clone)]
struct VerifyCommon {
    /// Rotation parameter, k >= 2
    #[arg(long)]
    k: f64,
    /// Ensemble size
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Base seed; sample i uses seed + i
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tolerance override (the pass criterion is max_violation <= tol)
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    /// Truncation order override
    #[arg(long)]
    order: Option<usize>,
    /// Atoms per sign in sampled measures
    #[arg(long)]
    max_atoms: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Subcommand)]
enum Command {
    /// Growth, distortion, real-part and disk bounds at (k, r)
    Bounds {
        #[arg(long)]
        k: f64,
        #[arg(long)]
        r: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Coefficient bounds for p_n and a_n at (k, n)
    Coeff {
        #[arg(long)]
        k: f64,
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Coefficients of the extremal function f* and the extremal p
    Extremal {
        #[arg(long)]
        k: f64,
        #[arg(long, default_value_t = 20)]
        order: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Expand a measure file (JSON {"atoms": [[t, w], ...]}) into a class member
    Series {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long, value_enum, default_value_t = KindArg::Pk)]
        kind: KindArg,
        #[arg(long, default_value_t = 30)]
        order: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run one verification check; exit 0 on pass, 1 on violation
    Verify {
        #[command(subcommand)]
        check: Check,
    },
    /// Run the full verification suite over a list of k values
    Report {
        /// Run every check (disk, growth, coeff, radius, rotation)
        #[arg(long, default_value_t = true)]
        all: bool,
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,6")]
        k_list: Vec<f64>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Subcommand)]
enum Check {
    /// P_k disk inequality on sampled transforms
    Disk {
        #[command(flatten)]
        common: VerifyCommon,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Growth and distortion envelopes on sampled R_k members
    Growth {
        #[command(flatten)]
        common: VerifyCommon,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Coefficient bounds |p_n| <= k and the factorial products
    Coeff {
        #[command(flatten)]
        common: VerifyCommon,
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Positivity of Re(z f'/f) inside the radius of starlikeness
    Radius {
        #[command(flatten)]
        common: VerifyCommon,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Rotation integral against k*pi (and the 2*pi mean-value check at k=2)
    Rotation {
        #[command(flatten)]
        common: VerifyCommon,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, value_enum)]
        kind: Option<RotationKindArg>,
    },
}

fn usage_error(flag: &str, reason: &str) -> ! {
    eprintln!("error: invalid value for '{flag}': {reason}");
    std::process::exit(2);
}

fn io_error(context: &str, err: impl std::fmt::Display) -> ! {
    eprintln!("error: {context}: {err}");
    std::process::exit(2);
}

fn require_k(k: f64) {
    if !(k >= 2.0) {
        usage_error("--k", &format!("need k >= 2, got {k}"));
    }
}

fn require_r(r: f64) {
    if !(0.0..1.0).contains(&r) {
        usage_error("--r", &format!("need 0 <= r < 1, got {r}"));
    }
}

fn require_order(order: usize) {
    if order < 2 {
        usage_error("--order", &format!("need order >= 2, got {order}"));
    }
}

fn require_samples(samples: usize) {
    if samples < 1 {
        usage_error("--samples", "need at least one sample");
    }
}

fn require_grid(grid: usize) {
    if grid < 1 {
        usage_error("--grid", "need at least one grid angle");
    }
}

fn require_max_atoms(a: usize) {
    if a < 1 {
        usage_error("--max-atoms", "need at least one atom per sign");
    }
}

fn require_nodes(m: usize) {
    if m < 256 || !m.is_power_of_two() {
        usage_error("--m", &format!("need a power of two >= 256, got {m}"));
    }
}

fn timestamp_value() -> String {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs().to_string())
        .unwrap_or_else(|_| "0".into())
}

/// Adds the optional timestamp field to a JSON object.
fn stamp(mut value: Value, output: &OutputArgs) -> Value {
    if output.timestamp {
        if let Value::Object(map) = &mut value {
            map.insert("timestamp".into(), Value::String(timestamp_value()));
        }
    }
    value
}

fn emit(output: &OutputArgs, content: String) {
    match &output.out {
        None => print!("{content}"),
        Some(path) => {
            let resolved = match std::env::var_os(OUT_DIR_ENV) {
                Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
                _ => path.clone(),
            };
            if let Err(e) = fs::write(&resolved, content) {
                io_error(&format!("writing {}", resolved.display()), e);
            }
        }
    }
}

fn json_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable value");
    s.push('\n');
    s
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Bounds { k, r, output } => cmd_bounds(k, r, &output),
        Command::Coeff { k, n, output } => cmd_coeff(k, n, &output),
        Command::Extremal { k, order, output } => cmd_extremal(k, order, &output),
        Command::Series {
            measure,
            kind,
            order,
            output,
        } => cmd_series(&measure, kind, order, &output),
        Command::Verify { check } => cmd_verify(check),
        Command::Report {
            all,
            k_list,
            samples,
            seed,
            output,
        } => cmd_report(all, &k_list, samples, seed, &output),
    };
    std::process::exit(code);
}

fn cmd_bounds(k: f64, r: f64, output: &OutputArgs) -> i32 {
    require_k(k);
    require_r(r);
    let growth = growth_bounds(k, r).expect("validated");
    let distortion = distortion_bounds(k, r).expect("validated");
    let re = re_bounds(k, r).expect("validated");
    let disk = pk_disk(k, r).expect("validated");
    let content = match output.format {
        Format::Json => json_pretty(&stamp(
            json!({
                "k": k,
                "r": r,
                "growth": growth,
                "distortion": distortion,
                "re_zf_over_f": re,
                "pk_disk": disk,
            }),
            output,
        )),
        Format::Csv => {
            let mut s = String::from("name,lower,upper\n");
            for b in [&growth, &distortion, &re] {
                s.push_str(&format!("{},{},{}\n", b.meta.name, b.lower, b.upper));
            }
            s.push_str(&format!(
                "pk_disk,{},{}\n",
                disk.center - disk.radius,
                disk.center + disk.radius
            ));
            s
        }
        Format::Text => format!(
            "k = {k}, r = {r}\n\
             |f(z)|:    {:.6} <= |f| <= {:.6}\n\
             |f'(z)|:   {:.6} <= |f'| <= {:.6}{}\n\
             Re zf'/f:  {:.6} <= Re <= {:.6}\n\
             P_k disk:  |p(z) - {:.6}| <= {:.6}\n",
            growth.lower,
            growth.upper,
            distortion.lower,
            distortion.upper,
            if distortion.meta.clamped {
                "  (lower clamped at 0)"
            } else {
                ""
            },
            re.lower,
            re.upper,
            disk.center,
            disk.radius,
        ),
    };
    emit(output, content);
    0
}

fn cmd_coeff(k: f64, n: u32, output: &OutputArgs) -> i32 {
    require_k(k);
    if n < 2 {
        usage_error("--n", &format!("need n >= 2, got {n}"));
    }
    let pk = coeff_bound(k, n, ClassKind::Pk).expect("validated");
    let rk = coeff_bound(k, n, ClassKind::Rk).expect("validated");
    let vk = coeff_bound(k, n, ClassKind::Vk).expect("validated");
    let content = match output.format {
        Format::Json => json_pretty(&stamp(
            json!({"k": k, "n": n, "Pk": pk, "Rk": rk, "Vk": vk}),
            output,
        )),
        Format::Csv => format!("kind,bound\nPk,{pk}\nRk,{rk}\nVk,{vk}\n"),
        Format::Text => format!(
            "k = {k}, n = {n}\n|p_n| <= {pk}\n|a_n| <= {rk}  (R_k)\n|a_n| <= {vk}  (V_k)\n"
        ),
    };
    emit(output, content);
    0
}

fn series_text(label: &str, prefix: &str, f: &ClassFunction) -> String {
    let mut s = format!("{label} (k = {}, order = {}):\n", f.k(), f.series().order());
    for (n, c) in f.series().coeffs().iter().enumerate() {
        if n == 0 && c.norm() == 0.0 {
            continue;
        }
        if c.im == 0.0 {
            s.push_str(&format!("  {prefix}_{n} = {}\n", c.re));
        } else {
            let sign = if c.im < 0.0 { '-' } else { '+' };
            s.push_str(&format!("  {prefix}_{n} = {} {sign} {}i\n", c.re, c.im.abs()));
        }
    }
    s
}

fn cmd_extremal(k: f64, order: usize, output: &OutputArgs) -> i32 {
    require_k(k);
    require_order(order);
    let fstar = extremal_fn(k, order).expect("validated");
    let pstar = extremal_pk(k, order).expect("validated");
    let content = match output.format {
        Format::Json => json_pretty(&stamp(
            json!({"k": k, "order": order, "f_star": fstar, "p_star": pstar}),
            output,
        )),
        Format::Csv => {
            let mut s = String::from("n,f_star_re,f_star_im,p_star_re,p_star_im\n");
            for n in 0..=order {
                let a = fstar.series().coeff(n);
                let p = pstar.series().coeff(n);
                s.push_str(&format!("{n},{},{},{},{}\n", a.re, a.im, p.re, p.im));
            }
            s
        }
        Format::Text => {
            let mut s = series_text("f*", "a", &fstar);
            s.push_str(&series_text("z f*'/f*", "p", &pstar));
            s
        }
    };
    emit(output, content);
    0
}

fn cmd_series(path: &PathBuf, kind: KindArg, order: usize, output: &OutputArgs) -> i32 {
    require_order(order);
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => io_error(&format!("reading {}", path.display()), e),
    };
    let measure: DiscreteMeasure = match serde_json::from_str(&text) {
        Ok(m) => m,
        Err(e) => io_error(&format!("parsing {}", path.display()), e),
    };
    let f = from_measure(&measure, kind.into(), order).expect("valid measure and order");
    let content = match output.format {
        Format::Json => json_pretty(&stamp(serde_json::to_value(&f).expect("serializable"), output)),
        Format::Csv => {
            let mut s = String::from("n,re,im\n");
            for (n, c) in f.series().coeffs().iter().enumerate() {
                s.push_str(&format!("{n},{},{}\n", c.re, c.im));
            }
            s
        }
        Format::Text => {
            let prefix = match kind {
                KindArg::Pk => "p",
                _ => "a",
            };
            series_text(&format!("{:?} member", f.kind()), prefix, &f)
        }
    };
    emit(output, content);
    0
}

fn report_text(r: &VerificationReport) -> String {
    let mut s = format!(
        "check = {}  k = {}  samples = {}  seed = {}\n\
         max_violation = {:e}  sharpness_gap = {:e}  pass = {}\n",
        r.check, r.k, r.n_samples, r.seed, r.max_violation, r.sharpness_gap, r.pass
    );
    if let Some(radius) = r.params.get("radius").and_then(|v| v.as_f64()) {
        s.push_str(&format!("R_S* = {radius}\n"));
    }
    s
}

fn coeff_detail_text(r: &VerificationReport) -> String {
    let mut s = String::new();
    if let Some(rows) = &r.sharpness_detail {
        s.push_str("family  n   bound          f*             empirical      flag\n");
        for row in rows {
            s.push_str(&format!(
                "{:6} {:3}  {:<13.8} {:<13.8} {:<13.8} {}\n",
                row.family,
                row.n,
                row.bound,
                row.extremal,
                row.empirical_max,
                if row.open_question { "open-question" } else { "" }
            ));
        }
    }
    s
}

fn emit_run(run: &VerificationRun, output: &OutputArgs) -> i32 {
    let mut report = run.report.clone();
    if output.timestamp {
        report.timestamp = Some(timestamp_value());
    }
    let content = match output.format {
        Format::Json => {
            json_pretty(&serde_json::to_value(&report).expect("serializable report"))
        }
        Format::Csv => {
            let mut buf = Vec::new();
            run.write_csv(&mut buf).expect("in-memory csv write");
            String::from_utf8(buf).expect("csv is utf-8")
        }
        Format::Text => {
            let mut s = report_text(&report);
            s.push_str(&coeff_detail_text(&report));
            s
        }
    };
    emit(output, content);
    if report.pass {
        0
    } else {
        1
    }
}

fn validate_common(common: &VerifyCommon) {
    require_k(common.k);
    require_samples(common.samples);
    if let Some(o) = common.order {
        require_order(o);
    }
    if let Some(a) = common.max_atoms {
        require_max_atoms(a);
    }
}

fn cmd_verify(check: Check) -> i32 {
    match check {
        Check::Disk { common, grid } => {
            validate_common(&common);
            let mut opts = DiskOptions::default();
            if let Some(t) = common.tol {
                opts.tol = t;
            }
            if let Some(o) = common.order {
                opts.order = o;
            }
            if let Some(a) = common.max_atoms {
                opts.max_atoms = a;
            }
            if let Some(g) = grid {
                require_grid(g);
                opts.grid = g;
            }
            match verify_disk(common.k, common.samples, common.seed, &opts) {
                Ok(run) => emit_run(&run, &common.output),
                Err(e) => io_error("verify disk", e),
            }
        }
        Check::Growth { common, grid } => {
            validate_common(&common);
            let mut opts = GrowthOptions::default();
            if let Some(t) = common.tol {
                opts.tol = t;
            }
            if let Some(o) = common.order {
                opts.order = o;
            }
            if let Some(a) = common.max_atoms {
                opts.max_atoms = a;
            }
            if let Some(g) = grid {
                require_grid(g);
                opts.grid = g;
            }
            match verify_growth_distortion(common.k, common.samples, common.seed, &opts) {
                Ok(run) => emit_run(&run, &common.output),
                Err(e) => io_error("verify growth", e),
            }
        }
        Check::Coeff { common, n_max } => {
            validate_common(&common);
            let mut opts = CoeffOptions::default();
            if let Some(t) = common.tol {
                opts.tol = t;
            }
            if let Some(n) = n_max {
                if n < 2 {
                    usage_error("--n-max", &format!("need n_max >= 2, got {n}"));
                }
                opts.n_max = n;
            }
            if let Some(a) = common.max_atoms {
                opts.max_atoms = a;
            }
            match verify_coefficients(common.k, common.samples, common.seed, &opts) {
                Ok(run) => emit_run(&run, &common.output),
                Err(e) => io_error("verify coeff", e),
            }
        }
        Check::Radius { common, grid } => {
            validate_common(&common);
            let mut opts = RadiusOptions::default();
            if let Some(t) = common.tol {
                opts.tol = t;
            }
            if let Some(o) = common.order {
                opts.order = o;
            }
            if let Some(a) = common.max_atoms {
                opts.max_atoms = a;
            }
            if let Some(g) = grid {
                require_grid(g);
                opts.grid = g;
            }
            match verify_radius_starlike(common.k, common.samples, common.seed, &opts) {
                Ok(run) => emit_run(&run, &common.output),
                Err(e) => io_error("verify radius", e),
            }
        }
        Check::Rotation { common, r, m, kind } => {
            validate_common(&common);
            let mut opts = RotationOptions::default();
            if let Some(t) = common.tol {
                opts.tol = t;
            }
            if let Some(o) = common.order {
                opts.order = o;
            }
            if let Some(a) = common.max_atoms {
                opts.max_atoms = a;
            }
            if let Some(rv) = r {
                require_r(rv);
                opts.r = rv;
            }
            if let Some(mv) = m {
                require_nodes(mv);
                opts.m = mv;
            }
            if let Some(kv) = kind {
                opts.kind = match kv {
                    RotationKindArg::Radius => RotationKind::Radius,
                    RotationKindArg::Boundary => RotationKind::Boundary,
                };
            }
            match verify_rotation(common.k, common.samples, common.seed, &opts) {
                Ok(run) => emit_run(&run, &common.output),
                Err(e) => io_error("verify rotation", e),
            }
        }
    }
}

fn cmd_report(all: bool, k_list: &[f64], samples: usize, seed: u64, output: &OutputArgs) -> i32 {
    if !all {
        usage_error("--all", "the report command currently runs the full suite");
    }
    if k_list.is_empty() {
        usage_error("--k-list", "need at least one k value");
    }
    for &k in k_list {
        require_k(k);
    }
    let mut reports: Vec<VerificationReport> = Vec::new();
    for &k in k_list {
        let runs = [
            verify_disk(k, samples, seed, &DiskOptions::default()),
            verify_growth_distortion(k, samples, seed, &GrowthOptions::default()),
            verify_coefficients(k, samples, seed, &CoeffOptions::default()),
            verify_radius_starlike(k, samples, seed, &RadiusOptions::default()),
            verify_rotation(k, samples, seed, &RotationOptions::default()),
        ];
        for run in runs {
            match run {
                Ok(r) => reports.push(r.report),
                Err(e) => io_error(&format!("report suite at k = {k}"), e),
            }
        }
    }
    let all_pass = reports.iter().all(|r| r.pass);
    let content = match output.format {
        Format::Json => json_pretty(&stamp(
            json!({
                "k_list": k_list,
                "samples": samples,
                "seed": seed,
                "reports": reports,
                "all_pass": all_pass,
            }),
            output,
        )),
        Format::Csv => {
            let mut s = String::from("check,k,n_samples,seed,max_violation,sharpness_gap,pass\n");
            for r in &reports {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    r.check, r.k, r.n_samples, r.seed, r.max_violation, r.sharpness_gap, r.pass
                ));
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in &reports {
                s.push_str(&report_text(r));
            }
            s.push_str(&format!("all_pass = {all_pass}\n"));
            s
        }
    };
    emit(output, content);
    if all_pass {
        0
    } else {
        1
    }
}
