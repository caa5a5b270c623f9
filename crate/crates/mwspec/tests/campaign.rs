//! Campaign-level properties: completeness, determinism, conditioning flags.

use mwspec::campaign::{run_campaign, CampaignConfig};
use mwspec_core::graph::WeightProfile;
use mwspec_core::verifier::ids;

fn small(count: usize, seed: u64) -> CampaignConfig {
    CampaignConfig {
        count,
        n_range: 2..=7,
        s_range: 1..=3,
        seed,
        jobs: 2,
        ..CampaignConfig::default()
    }
}

#[test]
fn every_report_schedules_every_float_check() {
    let report = run_campaign(&small(25, 3)).unwrap();
    assert_eq!(report.reports.len(), 25);
    for r in &report.reports {
        for id in ids::FLOAT_RUN {
            if id == ids::P2_DENSE {
                continue;
            }
            assert!(
                r.checks.iter().any(|c| c.id == id),
                "{id} missing for n={} s={}",
                r.n,
                r.s
            );
        }
        assert_eq!(r.betas.len(), 5);
    }
    assert_eq!(report.summary.failed, 0);
    assert_eq!(report.summary.warnings, 0);
}

#[test]
fn single_instance_campaign_is_byte_identical_on_repeat() {
    let a = run_campaign(&small(1, 77)).unwrap();
    let b = run_campaign(&small(1, 77)).unwrap();
    assert_eq!(a.canonical_json(), b.canonical_json());
    let c = run_campaign(&small(1, 78)).unwrap();
    assert_ne!(a.canonical_json(), c.canonical_json());
}

#[test]
fn extreme_weight_spread_yields_warnings_not_failures() {
    let config = CampaignConfig {
        weight_profile: WeightProfile {
            lambda_lo: 1e-8,
            lambda_hi: 1e8,
        },
        ..small(40, 11)
    };
    let report = run_campaign(&config).unwrap();
    assert_eq!(report.summary.failed, 0);
    assert!(report.summary.warnings > 0);
    assert!(report.reports.iter().all(|r| r.weight_condition > 1e6));
}

#[test]
fn invalid_ranges_are_config_errors() {
    let mut config = small(1, 0);
    config.n_range = 1..=4;
    assert!(run_campaign(&config).is_err());
    let mut config = small(1, 0);
    config.s_range = 3..=2;
    assert!(run_campaign(&config).is_err());
    let mut config = small(1, 0);
    config.beta_grid = vec![-1.0];
    assert!(run_campaign(&config).is_err());
}
