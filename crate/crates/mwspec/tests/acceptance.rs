//! Acceptance suite: one `[PASS]`/`[FAIL]` line per criterion, non-zero exit
//! if any criterion fails. Run with `cargo test -p mwspec --test acceptance`.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode, Stdio};
use std::time::{Duration, Instant};

use mwspec::bench::{bench_one, AGREEMENT_TOL};
use mwspec::campaign::{run_campaign, CampaignConfig, CampaignReport};
use mwspec::golden::{run_golden, GoldenMode};
use mwspec::report::CheckJson;
use mwspec_core::example;
use mwspec_core::graph::WeightProfile;
use mwspec_core::linalg::{inertia_of, Inertia, Tolerance};
use mwspec_core::operators::{build_laplacian, distance_inverse_closed_form};
use mwspec_core::perturbation::perturbed_pencil;
use mwspec_core::scalar::{rational_to_f64, Rational, Scalar};
use mwspec_core::verifier::ids;

const GOLDEN_BUDGET: Duration = Duration::from_secs(1);
const CAMPAIGN_BUDGET: Duration = Duration::from_secs(300);
const CAMPAIGN_COUNT: usize = 500;
const CAMPAIGN_SEED: u64 = 20240601;
const RESIDUAL_TOL: f64 = 1e-8;
const SCHUR_TOL: f64 = 1e-8;
const DENSE_TOL: f64 = 1e-8;
const KERNEL_TOL: f64 = 1e-12;
const EIG_ZERO: f64 = 1e-9;
const MAX_BENCH_NS: usize = 600;

// A row the bench calls valid must also meet the criterion.
const _: () = assert!(AGREEMENT_TOL <= DENSE_TOL);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn golden() -> Outcome {
    let start = Instant::now();
    let lines: Vec<_> = [GoldenMode::Exact, GoldenMode::Float]
        .into_iter()
        .flat_map(run_golden)
        .collect();
    let elapsed = start.elapsed();
    let failed: Vec<String> = lines
        .iter()
        .filter(|l| !l.pass)
        .map(|l| l.to_string())
        .collect();
    let pass = failed.is_empty() && elapsed < GOLDEN_BUDGET;
    let detail = if failed.is_empty() {
        format!(
            "{} matrix comparisons ok in {:.3} s",
            lines.len(),
            elapsed.as_secs_f64()
        )
    } else {
        failed.join("; ")
    };
    outcome(pass, detail)
}

fn golden_inertia() -> Outcome {
    let tol = Tolerance {
        eig_zero: EIG_ZERO,
        ..Tolerance::default()
    };
    let f = example::expected_perturbed_inverse().to_f64();
    match inertia_of(&f, &tol) {
        Ok(i) => outcome(
            i == Inertia::new(6, 0, 2),
            format!("In = ({}, {}, {})", i.n_minus, i.n_zero, i.n_plus),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn campaign() -> (CampaignReport, Duration) {
    let config = CampaignConfig {
        count: CAMPAIGN_COUNT,
        n_range: 2..=12,
        s_range: 1..=4,
        beta_grid: vec![0.0, 0.5, 1.0, 10.0],
        random_beta: Some((1e-3, 1e3)),
        seed: CAMPAIGN_SEED,
        weight_profile: WeightProfile {
            lambda_lo: 0.1,
            lambda_hi: 10.0,
        },
        jobs: 1,
        ..CampaignConfig::default()
    };
    let start = Instant::now();
    let report = run_campaign(&config).expect("campaign config is valid");
    (report, start.elapsed())
}

fn checks<'a>(
    report: &'a CampaignReport,
    pred: impl Fn(&CheckJson) -> bool + 'a,
) -> impl Iterator<Item = (usize, &'a CheckJson)> + 'a {
    report
        .reports
        .iter()
        .enumerate()
        .flat_map(|(i, r)| r.checks.iter().map(move |c| (i, c)))
        .filter(move |(_, c)| pred(c))
}

fn real(c: &CheckJson, key: &str) -> Option<f64> {
    c.evidence.get(key).and_then(|v| v.as_f64())
}

/// Per id: instances covered and the number of non-passing results.
fn tally<'a>(
    it: impl Iterator<Item = (usize, &'a CheckJson)>,
) -> BTreeMap<&'static str, (usize, usize)> {
    let mut seen: BTreeMap<&'static str, (std::collections::BTreeSet<usize>, usize)> =
        BTreeMap::new();
    for (i, c) in it {
        let e = seen.entry(c.id).or_default();
        e.0.insert(i);
        if c.status != "pass" {
            e.1 += 1;
        }
    }
    seen.into_iter()
        .map(|(k, (inst, bad))| (k, (inst.len(), bad)))
        .collect()
}

fn all_clean(
    t: &BTreeMap<&'static str, (usize, usize)>,
    wanted: &[&str],
    count: usize,
) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for id in wanted {
        let (covered, bad) = t.get(id).copied().unwrap_or((0, 0));
        ok &= covered == count && bad == 0;
        parts.push(format!(
            "{id} {}/{count} clean{}",
            covered,
            if bad > 0 {
                format!(" ({bad} not passing)")
            } else {
                String::new()
            }
        ));
    }
    (ok, parts.join(", "))
}

fn preliminaries(report: &CampaignReport, elapsed: Duration) -> Outcome {
    let wanted = [ids::P1, ids::P2, ids::P3_INERTIA, ids::P4_RANK];
    let t = tally(checks(report, |c| wanted.contains(&c.id)));
    let (ok, detail) = all_clean(&t, &wanted, CAMPAIGN_COUNT);
    let worst = checks(report, |c| c.id == ids::P1 || c.id == ids::P2)
        .filter_map(|(_, c)| real(c, "residual"))
        .fold(0.0f64, f64::max);
    outcome(
        ok && worst <= RESIDUAL_TOL && elapsed < CAMPAIGN_BUDGET,
        format!(
            "{detail}; worst P1/P2 residual {worst:.2e}; {:.1} s single-threaded",
            elapsed.as_secs_f64()
        ),
    )
}

fn theorem(report: &CampaignReport) -> Outcome {
    let wanted = [
        ids::THM_I,
        ids::THM_II,
        ids::THM_III,
        ids::THM_IV,
        ids::THM_V,
        ids::THM_VI,
        ids::THM_VI_GX,
        ids::THM_VI_TRACE,
    ];
    // Beta = 0 parts of the sixth claim are skipped by design.
    let t = tally(checks(report, |c| {
        wanted.contains(&c.id)
            && !(c.beta == Some(0.0) && (c.id == ids::THM_VI || c.id == ids::THM_VI_GX))
    }));
    let (ok, detail) = all_clean(&t, &wanted, CAMPAIGN_COUNT);
    let s = report.summary;
    outcome(
        ok && s.failed == 0 && s.warnings == 0,
        format!(
            "{detail}; campaign totals: {} passed, {} failed, {} warnings",
            s.passed, s.failed, s.warnings
        ),
    )
}

fn haynsworth(report: &CampaignReport) -> Outcome {
    let t = tally(checks(report, |c| c.id == ids::THM_IV_HAYNSWORTH));
    let (ok, detail) = all_clean(&t, &[ids::THM_IV_HAYNSWORTH], CAMPAIGN_COUNT);
    let residuals: Vec<f64> = checks(report, |c| c.id == ids::THM_IV_HAYNSWORTH)
        .map(|(_, c)| real(c, "schur_residual").unwrap_or(f64::INFINITY))
        .collect();
    let worst = residuals.iter().copied().fold(0.0f64, f64::max);
    outcome(
        ok && worst <= SCHUR_TOL,
        format!("{detail}; worst G/F residual {worst:.2e}"),
    )
}

fn fiedler_markham(report: &CampaignReport) -> Outcome {
    let wanted = [ids::FM_NULLITY, ids::FM_NULLITY_DINV];
    let t = tally(checks(report, |c| wanted.contains(&c.id)));
    let (ok, detail) = all_clean(&t, &wanted, CAMPAIGN_COUNT);
    outcome(ok, detail)
}

fn oracle_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    let mut rows = 0;
    let mut failures = Vec::new();
    for s in [1usize, 2] {
        for n in [2usize, 10, 50, 100, 200, 300] {
            if n * s > MAX_BENCH_NS {
                continue;
            }
            match bench_one(n, s, 0) {
                Ok(r) => {
                    rows += 1;
                    worst = worst.max(r.max_rel_err);
                    if !(r.valid() && r.max_rel_err <= DENSE_TOL) {
                        failures.push(format!("n={n} s={s} err {:.2e}", r.max_rel_err));
                    }
                }
                Err(e) => failures.push(format!("n={n} s={s}: {e}")),
            }
        }
    }
    let exact = {
        let d_inv = distance_inverse_closed_form(&example::tree()).expect("example tree");
        let l = build_laplacian(&example::graph()).expect("example graph");
        perturbed_pencil(&d_inv, &l, Rational::from_i64(1))
            .expect("nonsingular")
            .f
    };
    let inst = example::instance().map_scalars(rational_to_f64);
    let d_inv = distance_inverse_closed_form(inst.tree()).expect("example tree");
    let l = build_laplacian(inst.graph()).expect("example graph");
    let float = perturbed_pencil(&d_inv, &l, 1.0).expect("nonsingular").f;
    let kernel_err = float
        .matrix()
        .rel_diff(&exact.to_f64().into_matrix())
        .unwrap_or(f64::INFINITY);
    if kernel_err > KERNEL_TOL {
        failures.push(format!("exact vs float F {kernel_err:.2e}"));
    }
    let detail = format!("{rows} bench sizes, worst closed-form vs dense {worst:.2e}; exact vs float F {kernel_err:.2e}");
    if failures.is_empty() {
        outcome(true, detail)
    } else {
        outcome(false, format!("{detail}; {}", failures.join(", ")))
    }
}

fn negative_controls() -> Outcome {
    let dir = tempfile::tempdir().expect("temp dir");
    let input = dir.path().join("example.json");
    let bin = env!("CARGO_BIN_EXE_mwspec");
    let gen = Command::new(bin)
        .arg("gen")
        .arg("--example")
        .arg("--out")
        .arg(&input)
        .stdout(Stdio::null())
        .status();
    if !gen.map(|s| s.success()).unwrap_or(false) {
        return outcome(false, "could not write the example");
    }
    let mut tried = 0;
    let mut missed = Vec::new();
    for (r, row) in example::DISTANCE.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            // Scaling a zero entry leaves D unchanged, so there is nothing to detect.
            if *v == 0 {
                continue;
            }
            tried += 1;
            let spec = format!("{},{},1.1", r + 1, c + 1);
            let code = Command::new(bin)
                .args(["verify", "--beta", "1", "--perturb-d", &spec, "--input"])
                .arg(&input)
                .stdout(Stdio::null())
                .status()
                .ok()
                .and_then(|s| s.code());
            if code != Some(1) {
                missed.push(format!("({},{}) exit {code:?}", r + 1, c + 1));
            }
        }
    }
    let clean = Command::new(bin)
        .args(["verify", "--beta", "1", "--input"])
        .arg(&input)
        .stdout(Stdio::null())
        .status();
    let clean_ok = clean.ok().and_then(|s| s.code()) == Some(0);
    let detail = format!(
        "{}/{tried} perturbed entries exit 1; unperturbed exit 0: {clean_ok}",
        tried - missed.len()
    );
    if missed.is_empty() && clean_ok {
        outcome(true, detail)
    } else {
        outcome(false, format!("{detail}; missed {}", missed.join(" ")))
    }
}

fn main() -> ExitCode {
    let (report, elapsed) = campaign();
    let results = [
        (
            "golden exactness (exact bit-exact, float 1e-9, < 1 s)",
            golden(),
        ),
        ("golden inertia (6, 0, 2)", golden_inertia()),
        (
            "preliminary identities on 500 instances",
            preliminaries(&report, elapsed),
        ),
        ("theorem campaign, zero failures", theorem(&report)),
        ("Haynsworth additivity and G/F", haynsworth(&report)),
        ("Fiedler-Markham nullity", fiedler_markham(&report)),
        ("closed form vs dense, exact vs float", oracle_equivalence()),
        ("negative controls exit 1", negative_controls()),
    ];
    let mut all = true;
    for (i, (name, o)) in results.iter().enumerate() {
        all &= o.pass;
        println!(
            "[{}] {} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
