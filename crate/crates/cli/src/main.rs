//! `cftlab`: characters, verification suites and sweeps from the command
//! line. Exit codes: 0 all checks pass, 1 a verification failed, 2 usage or
//! parameter error.

use std::io::{ErrorKind, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use cftlab_core::characters::{chi_bosonic, chi_confsum, chi_enumerate, chi_fermionic};
use cftlab_core::hypergeom::SectorParams;
use cftlab_core::minimal_model::ModelParams;
use cftlab_core::qseries::{BiSeries, FracSeries};
use cftlab_core::rational::{int, to_string};
use cftlab_core::report::Status;
use cftlab_core::sl2::{
    count_sl2_by_degree, enumerate_sl2_admissible, sl2_char_paths, sl2_char_weylkac, LevelParams,
};
use cftlab_core::straightening::build_matrix;
use cftlab_core::suites::{Orders, Sl2Suite, VirasoroSuite};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

mod cache;
mod job;
mod sweep;

use cache::{write_atomic, Cache};
use job::{run_cached, Job};

#[derive(Parser)]
#[command(
    name = "cftlab",
    version,
    about = "Exact character and identity checks for Virasoro minimal models and level-k sl2"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Virasoro minimal models M(p, p') with 1 < p'/p < 2.
    Virasoro {
        #[command(subcommand)]
        command: VirasoroCommand,
    },
    /// Integrable level-k sl2 modules.
    Sl2 {
        #[command(subcommand)]
        command: Sl2Command,
    },
    /// Run a grid of verification jobs from a TOML config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Worker threads.
        #[arg(long, default_value_t = 4)]
        jobs: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        no_cache: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VirasoroMethod {
    Bosonic,
    Fermionic,
    Confsum,
    Enumerate,
}

#[derive(Clone, Copy, ValueEnum)]
enum Sl2Method {
    Weylkac,
    Paths,
    Enumerate,
}

#[derive(Subcommand)]
enum VirasoroCommand {
    /// Print a character as series JSON (or CSV).
    Char {
        #[arg(short)]
        p: i64,
        #[arg(long)]
        pp: i64,
        #[arg(short)]
        r: i64,
        #[arg(short)]
        s: i64,
        /// Coefficients through q^(Delta + order).
        #[arg(long, default_value_t = 30)]
        order: u32,
        #[arg(long, value_enum, default_value_t = VirasoroMethod::Bosonic)]
        method: VirasoroMethod,
        /// Fermionic base label (default b(s)).
        #[arg(long)]
        b: Option<i64>,
        #[arg(long)]
        csv: bool,
    },
    /// Run a verification suite and print its report.
    Verify {
        #[arg(short)]
        p: i64,
        #[arg(long)]
        pp: i64,
        /// q-order above the ground state.
        #[arg(long, default_value_t = 30)]
        order: u32,
        #[arg(long, default_value_t = 50)]
        z_order: usize,
        /// q-order for monomial enumeration (default min(order, 12)).
        #[arg(long)]
        enum_order: Option<u32>,
        #[arg(long, default_value = "all", value_parser = parse_virasoro_suite)]
        suite: VirasoroSuite,
        /// Write the straightening matrices of every middle sector as JSON.
        #[arg(long)]
        dump_matrix: Option<PathBuf>,
        #[arg(long)]
        no_cache: bool,
    },
}

#[derive(Subcommand)]
enum Sl2Command {
    /// Print a normalized character as bivariate series JSON (or CSV).
    Char {
        #[arg(short)]
        k: i64,
        #[arg(long)]
        mu: i64,
        #[arg(long, default_value_t = 20)]
        q_order: i64,
        #[arg(long, value_enum, default_value_t = Sl2Method::Weylkac)]
        method: Sl2Method,
        #[arg(long)]
        csv: bool,
    },
    /// Run a verification suite and print its report.
    Verify {
        #[arg(short)]
        k: i64,
        #[arg(long, default_value_t = 20)]
        order: u32,
        #[arg(long, default_value_t = 50)]
        z_order: usize,
        /// q-order for monomial enumeration (default min(order, 10)).
        #[arg(long)]
        enum_order: Option<u32>,
        #[arg(long, default_value = "all", value_parser = parse_sl2_suite)]
        suite: Sl2Suite,
        #[arg(long)]
        no_cache: bool,
    },
}

fn parse_virasoro_suite(s: &str) -> Result<VirasoroSuite, String> {
    s.parse().map_err(|e: cftlab_core::Error| e.to_string())
}

fn parse_sl2_suite(s: &str) -> Result<Sl2Suite, String> {
    s.parse().map_err(|e: cftlab_core::Error| e.to_string())
}

fn render_series(s: &FracSeries, csv: bool) -> String {
    if csv {
        let mut out = "exp,coeff\n".to_string();
        for (e, c) in s.iter() {
            out += &format!("{},{}\n", to_string(&e), to_string(c));
        }
        out
    } else {
        render_json(&s.to_json())
    }
}

fn render_bi(s: &BiSeries, csv: bool) -> String {
    if csv {
        let mut out = "z,exp,coeff\n".to_string();
        for (z, slice) in s.slices() {
            for (e, c) in slice.iter() {
                out += &format!("{z},{},{}\n", to_string(&e), to_string(c));
            }
        }
        out
    } else {
        render_json(&s.to_json())
    }
}

fn render_json(v: &impl Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializes") + "\n"
}

fn open_cache(no_cache: bool) -> anyhow::Result<Option<Cache>> {
    if no_cache {
        Ok(None)
    } else {
        Cache::from_env().map(Some)
    }
}

/// Runs a verification job, prints its report and maps the status.
fn verify(job: Job, no_cache: bool) -> anyhow::Result<(Status, String)> {
    job.validate()?;
    let cache = open_cache(no_cache)?;
    let res = run_cached(&job, cache.as_ref())?;
    eprintln!(
        "{}: {} checks, {} failing{}",
        job.name(),
        res.checks,
        res.failing,
        if res.cached { " (cached)" } else { "" }
    );
    Ok((
        res.status,
        String::from_utf8(res.body).expect("utf8 report"),
    ))
}

#[derive(Serialize)]
struct MatrixDump {
    r: i64,
    s: i64,
    matrix: cftlab_core::straightening::MatrixJson,
}

fn dump_matrices(model: &ModelParams, path: &std::path::Path) -> anyhow::Result<()> {
    let mut out = Vec::new();
    for (r, s) in model.labels() {
        let sec = SectorParams::new(model, r, s)?;
        if !sec.is_middle() {
            continue;
        }
        for n in 1..=4 {
            for d in 0..=1 {
                out.push(MatrixDump {
                    r,
                    s,
                    matrix: build_matrix(&sec, n, d)?.to_json(),
                });
            }
        }
    }
    let mut bytes = serde_json::to_vec_pretty(&out)?;
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}

/// Final status and the text for stdout.
fn run(cli: Cli) -> anyhow::Result<(Status, String)> {
    match cli.command {
        Command::Virasoro {
            command:
                VirasoroCommand::Char {
                    p,
                    pp,
                    r,
                    s,
                    order,
                    method,
                    b,
                    csv,
                },
        } => {
            let model = ModelParams::new(p, pp)?;
            if b.is_some() && !matches!(method, VirasoroMethod::Fermionic) {
                anyhow::bail!("--b only applies to --method fermionic");
            }
            let series = match method {
                VirasoroMethod::Bosonic => chi_bosonic(&model, r, s, order)?,
                VirasoroMethod::Fermionic => {
                    let b = match b {
                        Some(b) => b,
                        None => model.b_of_s(s)?,
                    };
                    chi_fermionic(&model, r, s, b, order)?
                }
                VirasoroMethod::Confsum => chi_confsum(&model, r, s, order)?,
                VirasoroMethod::Enumerate => chi_enumerate(&model, r, s, order)?,
            };
            Ok((Status::Pass, render_series(&series, csv)))
        }
        Command::Virasoro {
            command:
                VirasoroCommand::Verify {
                    p,
                    pp,
                    order,
                    z_order,
                    enum_order,
                    suite,
                    dump_matrix,
                    no_cache,
                },
        } => {
            let model = ModelParams::new(p, pp)?;
            if let Some(path) = dump_matrix {
                dump_matrices(&model, &path)?;
            }
            let orders = Orders {
                q: order,
                z: z_order,
                enumeration: enum_order.unwrap_or(order.min(12)),
            };
            verify(
                Job::Virasoro {
                    p,
                    pp,
                    suite,
                    orders,
                },
                no_cache,
            )
        }
        Command::Sl2 {
            command:
                Sl2Command::Char {
                    k,
                    mu,
                    q_order,
                    method,
                    csv,
                },
        } => {
            let level = LevelParams::new(k)?;
            let series = match method {
                Sl2Method::Weylkac => sl2_char_weylkac(&level, mu, q_order)?,
                Sl2Method::Paths => sl2_char_paths(&level, mu, q_order)?,
                Sl2Method::Enumerate => {
                    level.check_label(mu)?;
                    let top = level.delta(mu) + int(q_order);
                    let monos = enumerate_sl2_admissible(&level, mu, &top)?;
                    count_sl2_by_degree(&level, mu, &monos, q_order)?
                }
            };
            Ok((Status::Pass, render_bi(&series, csv)))
        }
        Command::Sl2 {
            command:
                Sl2Command::Verify {
                    k,
                    order,
                    z_order,
                    enum_order,
                    suite,
                    no_cache,
                },
        } => {
            let orders = Orders {
                q: order,
                z: z_order,
                enumeration: enum_order.unwrap_or(order.min(10)),
            };
            verify(Job::Sl2 { k, suite, orders }, no_cache)
        }
        Command::Sweep {
            config,
            jobs,
            out,
            no_cache,
        } => {
            let cfg = sweep::SweepConfig::load(&config)?;
            let cache = open_cache(no_cache)?;
            let index = sweep::run_sweep(&cfg, jobs, &out, cache.as_ref())
                .with_context(|| format!("sweep {}", config.display()))?;
            let status = if index.failed == 0 {
                Status::Pass
            } else {
                Status::Fail
            };
            Ok((status, sweep::summary_table(&index)))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((status, text)) => {
            let mut out = std::io::stdout().lock();
            if let Err(e) = out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
                if e.kind() != ErrorKind::BrokenPipe {
                    eprintln!("error: writing output: {e}");
                    return ExitCode::from(2);
                }
            }
            match status {
                Status::Pass => ExitCode::SUCCESS,
                Status::Fail => ExitCode::from(1),
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
