//! Parameter sweeps: a TOML config expands to jobs, which run on a bounded
//! worker pool; each job writes one report and the index records them all.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::Context;
use cftlab_core::report::Status;
use cftlab_core::suites::{Orders, Sl2Suite, VirasoroSuite, SUITE_VERSION};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cache::{write_atomic, Cache};
use crate::job::{run_cached, Job};

/// Orders in a config; missing fields take the defaults.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrdersConfig {
    pub q: Option<u32>,
    pub z: Option<usize>,
    pub enumeration: Option<u32>,
}

impl OrdersConfig {
    fn resolve(&self, default: Orders) -> Orders {
        let q = self.q.unwrap_or(default.q);
        Orders {
            q,
            z: self.z.unwrap_or(default.z),
            enumeration: self.enumeration.unwrap_or(default.enumeration.min(q)),
        }
    }
}

fn all_virasoro() -> Vec<VirasoroSuite> {
    vec![VirasoroSuite::All]
}

fn all_sl2() -> Vec<Sl2Suite> {
    vec![Sl2Suite::All]
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// `(p, p')` pairs.
    #[serde(default)]
    pub virasoro: Vec<(i64, i64)>,
    /// Levels `k`.
    #[serde(default)]
    pub sl2: Vec<i64>,
    #[serde(default = "all_virasoro")]
    pub virasoro_suites: Vec<VirasoroSuite>,
    #[serde(default = "all_sl2")]
    pub sl2_suites: Vec<Sl2Suite>,
    #[serde(default)]
    pub virasoro_orders: OrdersConfig,
    #[serde(default)]
    pub sl2_orders: OrdersConfig,
}

impl SweepConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// One job per (model or level, concrete suite), in config order.
    pub fn jobs(&self) -> Vec<Job> {
        let vo = self.virasoro_orders.resolve(Orders::virasoro_default());
        let so = self.sl2_orders.resolve(Orders::sl2_default());
        let mut vsuites: Vec<VirasoroSuite> = self
            .virasoro_suites
            .iter()
            .flat_map(|s| s.parts())
            .collect();
        vsuites.sort();
        vsuites.dedup();
        let mut ssuites: Vec<Sl2Suite> = self.sl2_suites.iter().flat_map(|s| s.parts()).collect();
        ssuites.sort();
        ssuites.dedup();
        let mut jobs = Vec::new();
        for &(p, pp) in &self.virasoro {
            for &suite in &vsuites {
                jobs.push(Job::Virasoro {
                    p,
                    pp,
                    suite,
                    orders: vo,
                });
            }
        }
        for &k in &self.sl2 {
            for &suite in &ssuites {
                jobs.push(Job::Sl2 {
                    k,
                    suite,
                    orders: so,
                });
            }
        }
        jobs
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub name: String,
    pub file: String,
    pub key: String,
    pub status: Status,
    pub checks: usize,
    pub failing: usize,
    pub cached: bool,
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Index {
    pub suite_version: String,
    pub passed: usize,
    pub failed: usize,
    pub jobs: Vec<IndexEntry>,
}

fn now_ms() -> u128 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0)
}

/// Runs every job of `config` with at most `workers` threads, writing
/// `<name>.json` reports and `index.json` into `out`.
pub fn run_sweep(
    config: &SweepConfig,
    workers: usize,
    out: &Path,
    cache: Option<&Cache>,
) -> anyhow::Result<Index> {
    let jobs = config.jobs();
    for job in &jobs {
        job.validate()
            .with_context(|| format!("job {}", job.name()))?;
    }
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()?;
    let entries: Vec<IndexEntry> = pool.install(|| {
        jobs.par_iter()
            .map(|job| -> anyhow::Result<IndexEntry> {
                let started = now_ms();
                let res = run_cached(job, cache)?;
                let file = format!("{}.json", job.name());
                write_atomic(&out.join(&file), &res.body)?;
                Ok(IndexEntry {
                    name: job.name(),
                    file,
                    key: job.key(),
                    status: res.status,
                    checks: res.checks,
                    failing: res.failing,
                    cached: res.cached,
                    started_unix_ms: started,
                    finished_unix_ms: now_ms(),
                })
            })
            .collect::<anyhow::Result<Vec<_>>>()
    })?;
    let passed = entries.iter().filter(|e| e.status == Status::Pass).count();
    let index = Index {
        suite_version: SUITE_VERSION.to_string(),
        passed,
        failed: entries.len() - passed,
        jobs: entries,
    };
    let mut bytes = serde_json::to_vec_pretty(&index)?;
    bytes.push(b'\n');
    write_atomic(&out.join("index.json"), &bytes)?;
    Ok(index)
}

/// Plain-text pass/fail table.
pub fn summary_table(index: &Index) -> String {
    let width = index
        .jobs
        .iter()
        .map(|e| e.name.len())
        .max()
        .unwrap_or(4)
        .max(4);
    let mut s = format!("{:<width$}  status  checks  failing  cached\n", "job");
    for e in &index.jobs {
        let status = match e.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
        };
        s += &format!(
            "{:<width$}  {status:<6}  {:>6}  {:>7}  {}\n",
            e.name,
            e.checks,
            e.failing,
            if e.cached { "yes" } else { "no" }
        );
    }
    s += &format!("{} passed, {} failed\n", index.passed, index.failed);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_expands_all_into_parts() {
        let cfg: SweepConfig =
            toml::from_str("virasoro = [[3, 4], [4, 5]]\nsl2 = [1]\n[virasoro_orders]\nq = 6\n")
                .unwrap();
        let jobs = cfg.jobs();
        assert_eq!(
            jobs.len(),
            2 * VirasoroSuite::PARTS.len() + Sl2Suite::PARTS.len()
        );
        match &jobs[0] {
            Job::Virasoro { orders, .. } => {
                assert_eq!(orders.q, 6);
                assert_eq!(orders.enumeration, 6);
                assert_eq!(orders.z, 50);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<SweepConfig>("models = [[3, 4]]").is_err());
        assert!(toml::from_str::<SweepConfig>("virasoro_suites = [\"nope\"]").is_err());
    }
}
