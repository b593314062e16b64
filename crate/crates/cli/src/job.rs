//! Verification jobs, their cache keys and the reports they produce.

use cftlab_core::minimal_model::ModelParams;
use cftlab_core::report::{CheckReport, Status};
use cftlab_core::sl2::LevelParams;
use cftlab_core::suites::{
    all_passed, sl2_suite, virasoro_suite, Orders, Sl2Suite, VirasoroSuite, SUITE_VERSION,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cache::Cache;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Job {
    Virasoro {
        p: i64,
        pp: i64,
        suite: VirasoroSuite,
        orders: Orders,
    },
    Sl2 {
        k: i64,
        suite: Sl2Suite,
        orders: Orders,
    },
}

/// The `job` object of a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobHeader {
    #[serde(flatten)]
    pub job: Job,
    pub suite_version: String,
    pub key: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub job: JobHeader,
    pub checks: Vec<CheckReport>,
    pub status: Status,
}

impl Job {
    /// Validates the parameters without running anything.
    pub fn validate(&self) -> cftlab_core::Result<()> {
        match self {
            Job::Virasoro { p, pp, .. } => ModelParams::new(*p, *pp).map(|_| ()),
            Job::Sl2 { k, .. } => {
                if *k < 1 {
                    return Err(cftlab_core::Error::InvalidParams(format!(
                        "sl2 suites need level k >= 1, got {k}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Hex sha256 of the canonical job JSON and the suite version.
    pub fn key(&self) -> String {
        let body = serde_json::to_vec(&(self, SUITE_VERSION)).expect("job serializes");
        hex::encode(Sha256::digest(body))
    }

    /// File-name friendly label.
    pub fn name(&self) -> String {
        match self {
            Job::Virasoro { p, pp, suite, .. } => format!("virasoro-{p}-{pp}-{suite}"),
            Job::Sl2 { k, suite, .. } => format!("sl2-{k}-{suite}"),
        }
    }

    pub fn run(&self) -> cftlab_core::Result<Report> {
        let checks = match self {
            Job::Virasoro {
                p,
                pp,
                suite,
                orders,
            } => virasoro_suite(&ModelParams::new(*p, *pp)?, *suite, orders, false),
            Job::Sl2 { k, suite, orders } => {
                sl2_suite(&LevelParams::new(*k)?, *suite, orders, false)?
            }
        };
        let status = if all_passed(&checks) {
            Status::Pass
        } else {
            Status::Fail
        };
        Ok(Report {
            job: JobHeader {
                job: self.clone(),
                suite_version: SUITE_VERSION.to_string(),
                key: self.key(),
            },
            checks,
            status,
        })
    }
}

/// Serialized report bytes; identical jobs give identical bytes.
pub fn report_bytes(report: &Report) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(report).expect("report serializes");
    out.push(b'\n');
    out
}

pub struct Outcome {
    pub body: Vec<u8>,
    pub status: Status,
    pub checks: usize,
    pub failing: usize,
    pub cached: bool,
}

/// Runs `job`, answering from the cache when a verified entry exists.
pub fn run_cached(job: &Job, cache: Option<&Cache>) -> anyhow::Result<Outcome> {
    let key = job.key();
    if let Some(body) = cache.and_then(|c| c.load(&key)) {
        if let Ok(report) = serde_json::from_slice::<Report>(&body) {
            if report.job.job == *job {
                return Ok(outcome(&report, body, true));
            }
        }
    }
    let report = job.run()?;
    let body = report_bytes(&report);
    if let Some(c) = cache {
        c.store(&key, &body)?;
    }
    Ok(outcome(&report, body, false))
}

fn outcome(report: &Report, body: Vec<u8>, cached: bool) -> Outcome {
    Outcome {
        status: report.status,
        checks: report.checks.len(),
        failing: report.checks.iter().filter(|c| !c.passed()).count(),
        body,
        cached,
    }
}
