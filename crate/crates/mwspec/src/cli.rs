//! Command-line grammar and dispatch. `run` returns the process exit code.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mwspec_core::example;
use mwspec_core::graph::{max_extra_edges, random_instance, Seed, WeightProfile};
use mwspec_core::linalg::Tolerance;
use mwspec_core::verifier::{Kernel, VerifyOptions};

use crate::bench::{bench_one, to_csv};
use crate::campaign::{run_campaign, CampaignConfig};
use crate::format::{
    instance_hash, parse_instance_with, serialize_instance, AnyInstance, FormatError,
};
use crate::golden::{run_golden, GoldenMode};
use crate::io::write_atomic;
use crate::report::{
    apply_perturbation, build_context, verify_to_report, DistancePerturbation, VerificationReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "mwspec",
    version,
    about = "Matrix-weighted tree distance perturbation toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random instance (or the embedded example) and write it.
    Gen(GenArgs),
    /// Verify one instance file, or run a seeded campaign with --count.
    Verify(VerifyArgs),
    /// Reproduce the embedded example's matrices and inertia.
    Golden(GoldenArgs),
    /// Time closed-form D^-1 against dense inversion of D.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    /// Smallest eigenvalue of generated weights.
    #[arg(long, default_value_t = 0.1)]
    pub lambda_lo: f64,
    /// Largest eigenvalue of generated weights.
    #[arg(long, default_value_t = 10.0)]
    pub lambda_hi: f64,
}

#[derive(Debug, Args)]
pub struct ToleranceArgs {
    #[arg(long, default_value_t = 1e-8)]
    pub rel_residual: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub eig_zero: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub nonzero_floor: f64,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, required_unless_present = "example")]
    pub n: Option<usize>,
    #[arg(long, required_unless_present = "example")]
    pub s: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub extra_edges: usize,
    /// Write the embedded four-vertex example (rational payload) instead.
    #[arg(long, conflicts_with_all = ["n", "s", "extra_edges"])]
    pub example: bool,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub profile: ProfileArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    Float,
    Exact,
    Both,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Instance file to verify.
    #[arg(long, required_unless_present = "count", conflicts_with = "count")]
    pub input: Option<PathBuf>,
    /// Report destination; the summary line always goes to standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// β values (repeatable). Default: 0, 0.5, 1, 10.
    #[arg(long = "beta")]
    pub beta: Vec<f64>,
    /// Defaults to exact for rational files and float otherwise.
    #[arg(long, value_enum)]
    pub kernel: Option<KernelArg>,
    /// Worker threads for campaigns (0 = all cores).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Seed for campaign generation and for random G_x test vectors.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Run a campaign of this many random instances instead of --input.
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub n_min: usize,
    #[arg(long, default_value_t = 12)]
    pub n_max: usize,
    #[arg(long, default_value_t = 1)]
    pub s_min: usize,
    #[arg(long, default_value_t = 4)]
    pub s_max: usize,
    /// Skip the per-instance log-uniform random β in campaigns.
    #[arg(long)]
    pub no_random_beta: bool,
    /// Also invert D densely and compare with the closed form.
    #[arg(long)]
    pub dense_check: bool,
    /// Multiply entry (ROW, COL) of D by FACTOR before checking (1-based).
    #[arg(long, value_name = "ROW,COL,FACTOR", requires = "input")]
    pub perturb_d: Option<String>,
    #[command(flatten)]
    pub profile: ProfileArgs,
    #[command(flatten)]
    pub tolerance: ToleranceArgs,
}

#[derive(Debug, Args)]
pub struct GoldenArgs {
    #[arg(long, value_enum, default_value_t = KernelArg::Both)]
    pub kernel: KernelArg,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated vertex counts.
    #[arg(long, value_delimiter = ',', default_value = "2,10,50,100,200,300")]
    pub n: Vec<usize>,
    /// Comma-separated block orders.
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    pub s: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Io(m) => m,
        }
    }
}

type Outcome = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(stdout, "{text}")
            } else {
                write!(stderr, "{text}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(&a, stdout),
        Command::Verify(a) => cmd_verify(&a, stdout),
        Command::Golden(a) => cmd_golden(&a, stdout),
        Command::Bench(a) => cmd_bench(&a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message());
            f.code()
        }
    }
}

fn profile(a: &ProfileArgs) -> Result<WeightProfile, Failure> {
    WeightProfile::new(a.lambda_lo, a.lambda_hi).map_err(|e| Failure::Usage(e.to_string()))
}

fn tolerance(a: &ToleranceArgs) -> Result<Tolerance, Failure> {
    Tolerance::new(a.rel_residual, a.eig_zero, a.nonzero_floor)
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    write_atomic(path, text.as_bytes()).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn out_line(stdout: &mut dyn Write, text: &str) {
    let _ = writeln!(stdout, "{text}");
}

fn cmd_gen(a: &GenArgs, stdout: &mut dyn Write) -> Outcome {
    let inst = if a.example {
        AnyInstance::Rational(example::instance())
    } else {
        let (n, s) = (a.n.unwrap_or(0), a.s.unwrap_or(0));
        if n < 2 {
            return Err(Failure::Usage("n must be ≥ 2".into()));
        }
        if s < 1 {
            return Err(Failure::Usage("s must be ≥ 1".into()));
        }
        if a.extra_edges > max_extra_edges(n) {
            return Err(Failure::Usage(format!(
                "extra-edges must be ≤ {} for n = {n}",
                max_extra_edges(n)
            )));
        }
        let inst = random_instance(n, s, a.extra_edges, Seed(a.seed), &profile(&a.profile)?)
            .map_err(|e| Failure::Usage(e.to_string()))?;
        AnyInstance::Float(inst)
    };
    let text = serialize_instance(&inst);
    // Self-check: what we write must parse back to the same instance.
    match parse_instance_with(&text, &Tolerance::default()) {
        Ok(back) if back == inst => {}
        Ok(_) => {
            return Err(Failure::Usage(
                "generated instance does not round-trip".into(),
            ))
        }
        Err(e) => {
            return Err(Failure::Usage(format!(
                "generated instance does not re-parse: {e}"
            )))
        }
    }
    write_file(&a.out, &text)?;
    out_line(stdout, &instance_hash(&inst));
    Ok(EXIT_OK)
}

fn read_instance(path: &Path, tol: &Tolerance) -> Result<AnyInstance, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    parse_instance_with(&text, tol)
        .map_err(|e: FormatError| Failure::Usage(format!("{}: {e}", path.display())))
}

fn parse_perturbation(text: &str) -> Result<DistancePerturbation, Failure> {
    let bad = || {
        Failure::Usage(format!(
            "--perturb-d expects ROW,COL,FACTOR with 1-based indices, got {text:?}"
        ))
    };
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let row: usize = parts[0].parse().map_err(|_| bad())?;
    let col: usize = parts[1].parse().map_err(|_| bad())?;
    let factor: f64 = parts[2].parse().map_err(|_| bad())?;
    if row == 0 || col == 0 || !factor.is_finite() {
        return Err(bad());
    }
    Ok(DistancePerturbation {
        row: row - 1,
        col: col - 1,
        factor,
    })
}

fn summary_line(reports: &[&VerificationReport]) -> (String, bool) {
    let mut failed_ids: Vec<&str> = reports.iter().flat_map(|r| r.failed_ids()).collect();
    failed_ids.sort_unstable();
    failed_ids.dedup();
    let (mut passed, mut failed, mut skipped, mut warnings) = (0, 0, 0, 0);
    for r in reports {
        passed += r.summary.passed;
        failed += r.summary.failed;
        skipped += r.summary.skipped;
        warnings += r.summary.warnings;
    }
    let tail =
        format!("(passed {passed}, failed {failed}, skipped {skipped}, warnings {warnings})");
    if failed == 0 {
        (format!("passed: all {tail}"), true)
    } else {
        (format!("failed: {} {tail}", failed_ids.join(" ")), false)
    }
}

fn cmd_verify(a: &VerifyArgs, stdout: &mut dyn Write) -> Outcome {
    let tol = tolerance(&a.tolerance)?;
    let betas = if a.beta.is_empty() {
        vec![0.0, 0.5, 1.0, 10.0]
    } else {
        a.beta.clone()
    };
    if betas.iter().any(|b| !b.is_finite() || *b < 0.0) {
        return Err(Failure::Usage("beta values must be finite and ≥ 0".into()));
    }
    let opts = VerifyOptions {
        dense_cross_check: a.dense_check,
        gx_seed: a.seed,
        ..VerifyOptions::default()
    };

    if let Some(count) = a.count {
        if a.kernel.is_some_and(|k| k != KernelArg::Float) {
            return Err(Failure::Usage(
                "campaigns run in the float kernel only".into(),
            ));
        }
        let config = CampaignConfig {
            count,
            n_range: a.n_min..=a.n_max,
            s_range: a.s_min..=a.s_max,
            beta_grid: betas,
            random_beta: if a.no_random_beta {
                None
            } else {
                CampaignConfig::default().random_beta
            },
            seed: a.seed,
            weight_profile: profile(&a.profile)?,
            tol,
            options: opts,
            jobs: a.jobs,
        };
        let report = run_campaign(&config).map_err(|e| Failure::Usage(e.to_string()))?;
        if let Some(out) = &a.out {
            write_file(
                out,
                &(serde_json::to_string_pretty(&report).expect("serializes") + "\n"),
            )?;
        }
        let refs: Vec<&VerificationReport> = report.reports.iter().collect();
        let (line, ok) = summary_line(&refs);
        out_line(
            stdout,
            &format!("{} instances: {line}", report.reports.len()),
        );
        return Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED });
    }

    let input = a
        .input
        .as_ref()
        .expect("clap requires --input without --count");
    if let Some(out) = &a.out {
        if same_path(input, out) {
            return Err(Failure::Usage(
                "--input and --out must be different files".into(),
            ));
        }
    }
    let inst = read_instance(input, &tol)?;
    let perturbation = a.perturb_d.as_deref().map(parse_perturbation).transpose()?;
    let kernels: Vec<Kernel> = match a.kernel {
        Some(KernelArg::Float) => vec![Kernel::Float],
        Some(KernelArg::Exact) => vec![Kernel::Exact],
        Some(KernelArg::Both) => vec![Kernel::Float, Kernel::Exact],
        None => match inst {
            AnyInstance::Rational(_) => vec![Kernel::Exact],
            AnyInstance::Float(_) => vec![Kernel::Float],
        },
    };
    let mut reports = Vec::new();
    for kernel in kernels {
        let mut ctx =
            build_context(&inst, kernel, &tol).map_err(|e| Failure::Usage(e.to_string()))?;
        if let Some(p) = &perturbation {
            apply_perturbation(&mut ctx, p).map_err(|e| Failure::Usage(e.to_string()))?;
        }
        reports.push(verify_to_report(&inst, &ctx, &betas, None, &opts, &tol));
    }
    if let Some(out) = &a.out {
        let json = if reports.len() == 1 {
            serde_json::to_string_pretty(&reports[0])
        } else {
            serde_json::to_string_pretty(&reports)
        }
        .expect("serializes");
        write_file(out, &(json + "\n"))?;
    }
    let refs: Vec<&VerificationReport> = reports.iter().collect();
    let (line, ok) = summary_line(&refs);
    out_line(stdout, &line);
    Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn same_path(a: &Path, b: &Path) -> bool {
    match (std::fs::canonicalize(a), std::fs::canonicalize(b)) {
        (Ok(x), Ok(y)) => x == y,
        _ => a == b,
    }
}

fn cmd_golden(a: &GoldenArgs, stdout: &mut dyn Write) -> Outcome {
    let modes = match a.kernel {
        KernelArg::Exact => vec![GoldenMode::Exact],
        KernelArg::Float => vec![GoldenMode::Float],
        KernelArg::Both => vec![GoldenMode::Exact, GoldenMode::Float],
    };
    let start = Instant::now();
    let mut ok = true;
    for mode in modes {
        for line in run_golden(mode) {
            ok &= line.pass;
            out_line(stdout, &line.to_string());
        }
    }
    out_line(
        stdout,
        &format!(
            "golden {} in {:.3} s",
            if ok { "passed" } else { "FAILED" },
            start.elapsed().as_secs_f64()
        ),
    );
    Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_bench(a: &BenchArgs, stdout: &mut dyn Write) -> Outcome {
    if a.n.iter().any(|&n| n < 2) {
        return Err(Failure::Usage("n must be ≥ 2".into()));
    }
    if a.s.iter().any(|&s| s < 1) {
        return Err(Failure::Usage("s must be ≥ 1".into()));
    }
    let mut rows = Vec::new();
    for &n in &a.n {
        for &s in &a.s {
            rows.push(bench_one(n, s, a.seed).map_err(|e| Failure::Usage(e.to_string()))?);
        }
    }
    let csv = to_csv(&rows);
    match &a.out {
        Some(path) => write_file(path, &csv)?,
        None => {
            let _ = write!(stdout, "{csv}");
        }
    }
    Ok(if rows.iter().all(|r| r.valid()) {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}
