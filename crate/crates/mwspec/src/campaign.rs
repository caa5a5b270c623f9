//! Seeded randomized verification campaigns.

use std::ops::RangeInclusive;
use std::time::Instant;

use mwspec_core::graph::{max_extra_edges, random_instance, Seed, WeightProfile};
use mwspec_core::linalg::Tolerance;
use mwspec_core::verifier::{ids, CheckResult, CheckStatus, VerifyOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::format::{instance_hash, AnyInstance};
use crate::report::{assemble, build_context, SummaryJson, VerificationReport};
use mwspec_core::verifier::{verify_all, Kernel};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("count must be ≥ 1")]
    EmptyCount,
    #[error("n range must lie within 2.. and be non-empty")]
    BadNRange,
    #[error("s range must lie within 1.. and be non-empty")]
    BadSRange,
    #[error("beta values must be finite and ≥ 0")]
    BadBeta,
    #[error("random beta range must satisfy 0 < lo ≤ hi")]
    BadRandomBeta,
    #[error("{0}")]
    Profile(String),
    #[error("{0}")]
    Tolerance(String),
    #[error("could not start the worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignConfig {
    pub count: usize,
    pub n_range: RangeInclusive<usize>,
    pub s_range: RangeInclusive<usize>,
    /// Fixed β values applied to every instance.
    pub beta_grid: Vec<f64>,
    /// Each instance also gets one β drawn log-uniformly from this range.
    pub random_beta: Option<(f64, f64)>,
    pub seed: u64,
    #[serde(serialize_with = "profile_json")]
    pub weight_profile: WeightProfile,
    #[serde(serialize_with = "tolerance_json")]
    pub tol: Tolerance,
    #[serde(skip)]
    pub options: VerifyOptions,
    /// Worker threads; 0 uses the rayon default. Not part of the report.
    #[serde(skip)]
    pub jobs: usize,
}

fn profile_json<S: serde::Serializer>(p: &WeightProfile, ser: S) -> Result<S::Ok, S::Error> {
    [p.lambda_lo, p.lambda_hi].serialize(ser)
}

fn tolerance_json<S: serde::Serializer>(t: &Tolerance, ser: S) -> Result<S::Ok, S::Error> {
    crate::report::ToleranceJson::from(t).serialize(ser)
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            count: 500,
            n_range: 2..=12,
            s_range: 1..=4,
            beta_grid: vec![0.0, 0.5, 1.0, 10.0],
            random_beta: Some((1e-3, 1e3)),
            seed: 0,
            weight_profile: WeightProfile::default(),
            tol: Tolerance::default(),
            options: VerifyOptions::default(),
            jobs: 0,
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.count == 0 {
            return Err(ConfigError::EmptyCount);
        }
        if *self.n_range.start() < 2 || self.n_range.is_empty() {
            return Err(ConfigError::BadNRange);
        }
        if *self.s_range.start() < 1 || self.s_range.is_empty() {
            return Err(ConfigError::BadSRange);
        }
        if self.beta_grid.iter().any(|b| !b.is_finite() || *b < 0.0) {
            return Err(ConfigError::BadBeta);
        }
        if let Some((lo, hi)) = self.random_beta {
            if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
                return Err(ConfigError::BadRandomBeta);
            }
        }
        self.weight_profile
            .validate()
            .map_err(|e| ConfigError::Profile(e.to_string()))?;
        self.tol
            .validate()
            .map_err(|e| ConfigError::Tolerance(e.to_string()))
    }
}

/// Parameters drawn for one campaign instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstancePlan {
    pub index: usize,
    pub n: usize,
    pub s: usize,
    pub extra_edges: usize,
    pub seed: u64,
    pub random_beta: Option<f64>,
}

/// Draws instance `index`'s parameters from its own ChaCha stream, so the
/// plan does not depend on scheduling.
pub fn plan_instance(config: &CampaignConfig, index: usize) -> InstancePlan {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64);
    let n = rng.random_range(config.n_range.clone());
    let s = rng.random_range(config.s_range.clone());
    let extra_edges = rng.random_range(0..=max_extra_edges(n));
    let random_beta = config.random_beta.map(|(lo, hi)| {
        let (a, b) = (lo.ln(), hi.ln());
        if a == b {
            lo
        } else {
            rng.random_range(a..=b).exp()
        }
    });
    InstancePlan {
        index,
        n,
        s,
        extra_edges,
        seed: rng.random(),
        random_beta,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub reports: Vec<VerificationReport>,
    pub summary: SummaryJson,
}

impl CampaignReport {
    pub fn canonical_json(&self) -> String {
        let mut copy = self.clone();
        for r in &mut copy.reports {
            r.wall_time_s = 0.0;
        }
        serde_json::to_string(&copy).expect("campaign serializes")
    }
}

fn run_one(config: &CampaignConfig, plan: &InstancePlan) -> VerificationReport {
    let start = Instant::now();
    let mut betas = config.beta_grid.clone();
    betas.extend(plan.random_beta);
    let mut opts = config.options.clone();
    opts.gx_seed = plan.seed;
    let inst = random_instance(
        plan.n,
        plan.s,
        plan.extra_edges,
        Seed(plan.seed),
        &config.weight_profile,
    )
    .map(AnyInstance::Float);
    let built = inst.as_ref().map_err(|e| e.to_string()).and_then(|i| {
        build_context(i, Kernel::Float, &config.tol)
            .map(|c| (i, c))
            .map_err(|e| e.to_string())
    });
    match built {
        Ok((inst, ctx)) => {
            let checks = verify_all(&ctx, &betas, &opts, &config.tol);
            assemble(
                instance_hash(inst),
                &ctx,
                &betas,
                Some(plan.seed),
                checks,
                start.elapsed().as_secs_f64(),
            )
        }
        Err(message) => {
            let mut check = CheckResult::from_error(ids::CONTEXT, message, &config.tol);
            if config.weight_profile.condition_bound() > opts.ill_condition_threshold {
                check.status = CheckStatus::Warning;
            }
            let summary = mwspec_core::verifier::Summary::of(std::slice::from_ref(&check));
            VerificationReport {
                instance_hash: String::new(),
                n: plan.n,
                s: plan.s,
                seed: Some(plan.seed),
                betas,
                kernel: Kernel::Float.as_str(),
                weight_condition: f64::NAN,
                wall_time_s: start.elapsed().as_secs_f64(),
                checks: vec![(&check).into()],
                summary: summary.into(),
            }
        }
    }
}

/// Generates and verifies `config.count` instances. Output order is the
/// instance index regardless of `jobs`.
pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignReport, ConfigError> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| ConfigError::Pool(e.to_string()))?;
    let reports: Vec<VerificationReport> = pool.install(|| {
        (0..config.count)
            .into_par_iter()
            .map(|k| run_one(config, &plan_instance(config, k)))
            .collect()
    });
    let mut summary = SummaryJson::default();
    for r in &reports {
        summary.add(&r.summary);
    }
    Ok(CampaignReport {
        config: config.clone(),
        reports,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(count: usize) -> CampaignConfig {
        CampaignConfig {
            count,
            n_range: 2..=6,
            s_range: 1..=3,
            seed: 42,
            ..CampaignConfig::default()
        }
    }

    #[test]
    fn plans_are_independent_of_each_other() {
        let c = small(3);
        assert_eq!(plan_instance(&c, 2), plan_instance(&c, 2));
        assert_ne!(plan_instance(&c, 1).seed, plan_instance(&c, 2).seed);
    }

    #[test]
    fn same_seed_gives_identical_reports_across_job_counts() {
        let one = run_campaign(&CampaignConfig {
            jobs: 1,
            ..small(6)
        })
        .unwrap();
        let many = run_campaign(&CampaignConfig {
            jobs: 4,
            ..small(6)
        })
        .unwrap();
        assert_eq!(one.canonical_json(), many.canonical_json());
        assert_eq!(one.summary.failed, 0);
    }

    #[test]
    fn bad_configs_are_rejected() {
        assert_eq!(
            run_campaign(&small(0)).unwrap_err(),
            ConfigError::EmptyCount
        );
        let c = CampaignConfig {
            n_range: 1..=4,
            ..small(1)
        };
        assert_eq!(c.validate(), Err(ConfigError::BadNRange));
        let c = CampaignConfig {
            beta_grid: vec![-1.0],
            ..small(1)
        };
        assert_eq!(c.validate(), Err(ConfigError::BadBeta));
    }
}
