//! Named verification suites over one model or level, optionally with a
//! small mutation of `t` (or `kappa`) fed into one ingredient of every
//! identity so that each suite can be shown to fail.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::characters::{
    chi_bosonic, chi_confsum, chi_enumerate, chi_fermionic, durfee_check, gauge_check_split,
    positivity_check, x_closed, x_direct, y_direct, y_sum,
};
use crate::error::{Error, Result};
use crate::hypergeom::{bilinear_check_split, virasoro_ode_check_split, OdeTarget, SectorParams};
use crate::minimal_model::{weight_invariants_check, ModelParams};
use crate::qseries::{gauss_binom_int, FracSeries};
use crate::rational::{int, rat, Rational};
use crate::report::CheckReport;
use crate::sl2::{
    ab_product_check_split, count_sl2_by_degree, enumerate_sl2_admissible, epsilon_sum,
    exchange_det_check, kz_check_split, pinned_orientation, restricted_kostka, sl2_char_paths,
    sl2_char_weylkac, sl2_weights, vacuum_exchange_check_split, LevelParams,
};
use crate::straightening::{
    build_matrix, case1_residual_check, case1_rewrite, cleared_degree_check,
    det_factorization_check_split, elimination_plan, sector_rhos,
};
use crate::Sign;

/// Bumped whenever a suite changes what it computes; part of every cache key.
pub const SUITE_VERSION: &str = "cftlab-suites/1";

/// Size of the negative-control mutation of `t` or `kappa`.
pub fn perturbation() -> Rational {
    rat(1, 1000)
}

const CONFIG_L: usize = 8;
const POSITIVITY_L: i64 = 20;
const DURFEE_L: i64 = 8;
const DURFEE_Q: u32 = 20;
const GAUGE_PATHS: usize = 100;
const MATRIX_N: usize = 4;
const KOSTKA_L: usize = 10;
const AB_RANDOM: usize = 10;
const SEED: u64 = 0x5eed_cf71;

/// Truncation orders of one job.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orders {
    /// q-order above the ground state for character identities.
    pub q: u32,
    /// z-order for hypergeometric and correlator identities.
    pub z: usize,
    /// q-order for monomial enumeration.
    pub enumeration: u32,
}

impl Orders {
    pub fn virasoro_default() -> Self {
        Self {
            q: 30,
            z: 50,
            enumeration: 12,
        }
    }

    pub fn sl2_default() -> Self {
        Self {
            q: 20,
            z: 50,
            enumeration: 10,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VirasoroSuite {
    All,
    Bilinear,
    Ode,
    Matrix,
    Configsum,
    Characters,
    Enumeration,
}

impl VirasoroSuite {
    pub const PARTS: [VirasoroSuite; 6] = [
        VirasoroSuite::Bilinear,
        VirasoroSuite::Ode,
        VirasoroSuite::Matrix,
        VirasoroSuite::Configsum,
        VirasoroSuite::Characters,
        VirasoroSuite::Enumeration,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VirasoroSuite::All => "all",
            VirasoroSuite::Bilinear => "bilinear",
            VirasoroSuite::Ode => "ode",
            VirasoroSuite::Matrix => "matrix",
            VirasoroSuite::Configsum => "configsum",
            VirasoroSuite::Characters => "characters",
            VirasoroSuite::Enumeration => "enumeration",
        }
    }

    /// The concrete suites this selection runs.
    pub fn parts(self) -> Vec<VirasoroSuite> {
        match self {
            VirasoroSuite::All => Self::PARTS.to_vec(),
            s => vec![s],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sl2Suite {
    All,
    Kz,
    Ab,
    Exchange,
    Kostka,
    Characters,
}

impl Sl2Suite {
    pub const PARTS: [Sl2Suite; 5] = [
        Sl2Suite::Kz,
        Sl2Suite::Ab,
        Sl2Suite::Exchange,
        Sl2Suite::Kostka,
        Sl2Suite::Characters,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Sl2Suite::All => "all",
            Sl2Suite::Kz => "kz",
            Sl2Suite::Ab => "ab",
            Sl2Suite::Exchange => "exchange",
            Sl2Suite::Kostka => "kostka",
            Sl2Suite::Characters => "characters",
        }
    }

    pub fn parts(self) -> Vec<Sl2Suite> {
        match self {
            Sl2Suite::All => Self::PARTS.to_vec(),
            s => vec![s],
        }
    }
}

macro_rules! name_impls {
    ($t:ty, $all:expr) => {
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }

        impl FromStr for $t {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                std::iter::once($all)
                    .chain(<$t>::PARTS)
                    .find(|x| x.name() == s)
                    .ok_or_else(|| Error::InvalidParams(format!("unknown suite {s:?}")))
            }
        }
    };
}

name_impls!(VirasoroSuite, VirasoroSuite::All);
name_impls!(Sl2Suite, Sl2Suite::All);

fn tag(mut reps: Vec<CheckReport>, suite: &str, perturbed: bool) -> Vec<CheckReport> {
    for r in &mut reps {
        r.params.insert("suite".into(), suite.into());
        if perturbed {
            r.params.insert("perturbed".into(), true.into());
        }
    }
    reps
}

fn error_report(check: &str, err: &Error) -> CheckReport {
    let mut rep = CheckReport::new(check, 0);
    rep.fail_error(err);
    rep
}

/// `rho` samples off the Kac table: never integers, and their denominators
/// are divisible by 13, so they avoid every special point `i + 1 - t`,
/// `i - 2 + t` of the grid models.
pub fn off_table_rhos(count: usize) -> Vec<Rational> {
    (0..count as i64).map(|j| rat(13 * j + 11, 143)).collect()
}

/// Runs one Virasoro suite selection on `model`. With `perturb`, one
/// ingredient of every identity is evaluated at `t + 1/1000`.
pub fn virasoro_suite(
    model: &ModelParams,
    suite: VirasoroSuite,
    orders: &Orders,
    perturb: bool,
) -> Vec<CheckReport> {
    let shifted = model.with_t(&model.t + perturbation());
    let mutated = if perturb { &shifted } else { model };
    suite
        .parts()
        .into_iter()
        .flat_map(|part| {
            let reps = match part {
                VirasoroSuite::Bilinear => bilinear_suite(model, mutated, orders),
                VirasoroSuite::Ode => ode_suite(model, mutated, orders),
                VirasoroSuite::Matrix => matrix_suite(model, mutated),
                VirasoroSuite::Configsum => configsum_suite(model, mutated),
                VirasoroSuite::Characters => characters_suite(model, mutated, orders),
                VirasoroSuite::Enumeration => enumeration_suite(model, mutated, orders),
                VirasoroSuite::All => unreachable!("expanded by parts"),
            };
            tag(reps, part.name(), perturb)
        })
        .collect()
}

fn sectors(model: &ModelParams) -> Vec<SectorParams> {
    model
        .labels()
        .into_iter()
        .map(|(r, s)| SectorParams::new(model, r, s).expect("label from the Kac table"))
        .collect()
}

fn bilinear_suite(model: &ModelParams, mutated: &ModelParams, orders: &Orders) -> Vec<CheckReport> {
    sectors(model)
        .par_iter()
        .map(|sec| bilinear_check_split(sec, &sec.with_t(mutated.t.clone()), orders.z))
        .collect()
}

fn ode_suite(model: &ModelParams, mutated: &ModelParams, orders: &Orders) -> Vec<CheckReport> {
    let jobs: Vec<(SectorParams, OdeTarget)> = sectors(model)
        .into_iter()
        .flat_map(|sec| {
            OdeTarget::ALL
                .into_iter()
                .filter(|t| t.exists(&sec))
                .map(|t| (sec.clone(), t))
                .collect::<Vec<_>>()
        })
        .collect();
    jobs.par_iter()
        .map(|(sec, target)| virasoro_ode_check_split(sec, mutated, *target, orders.z))
        .collect()
}

fn matrix_suite(model: &ModelParams, mutated: &ModelParams) -> Vec<CheckReport> {
    let t = &model.t;
    let all = sectors(model);
    let middle: Vec<&SectorParams> = all.iter().filter(|s| s.is_middle()).collect();
    let mut rhos = off_table_rhos(6);
    rhos.extend(sector_rhos(&all));
    let shapes: Vec<(usize, usize)> = (1..=MATRIX_N).flat_map(|n| [(n, 0), (n, 1)]).collect();
    let mut out: Vec<CheckReport> = middle
        .par_iter()
        .map(|sec| {
            let mut rep = CheckReport::new("det_nonzero", MATRIX_N as u64)
                .param("p", model.p)
                .param("pp", model.pp)
                .param("r", sec.r)
                .param("s", sec.s);
            for &(n, d) in &shapes {
                if let Some(m) = rep.absorb(build_matrix(sec, n, d)) {
                    rep.require(
                        !m.det().is_zero(),
                        &format!("det M_{{{n},{d}}}"),
                        "0",
                        "nonzero",
                    );
                }
            }
            rep
        })
        .collect();
    out.extend(
        shapes
            .par_iter()
            .flat_map_iter(|&(n, d)| {
                let cleared = off_table_rhos(2 * n * (n + d) + 2);
                [
                    det_factorization_check_split(t, &mutated.t, n, d, &rhos),
                    cleared_degree_check(t, n, d, &cleared),
                ]
            })
            .collect::<Vec<_>>(),
    );
    for sec in &middle {
        for d in 0..=1 {
            let mut rep = CheckReport::new("elimination_plan", d as u64)
                .param("p", model.p)
                .param("pp", model.pp)
                .param("r", sec.r)
                .param("s", sec.s);
            if let Some(plan) = rep.absorb(elimination_plan(sec, d)) {
                let count = 2 * plan.big_n - d as i64;
                rep.require(
                    plan.surviving_indices.len() as i64 == count,
                    "surviving index count",
                    plan.surviving_indices.len(),
                    count,
                );
                rep.require(
                    plan.surviving_indices.iter().all(|x| *x < plan.w_plus),
                    "surviving indices below w_+",
                    "some >= w_+",
                    "all < w_+",
                );
            }
            out.push(rep);
        }
    }
    // a straight-step pair with n - m = t/4 < t/2
    let m = rat(-1, 2);
    let n = &m + t / int(4);
    let depth = 6;
    let mut rep = match case1_rewrite(&mutated.t, &m, &n, depth) {
        Ok(rw) => case1_residual_check(t, &m, &n, depth, &rw),
        Err(e) => error_report("case1_rewrite", &e),
    };
    rep.params.insert("p".into(), model.p.into());
    rep.params.insert("pp".into(), model.pp.into());
    out.push(rep);
    out
}

fn configsum_suite(model: &ModelParams, mutated: &ModelParams) -> Vec<CheckReport> {
    let p = model.p;
    let base = |name: &str| {
        CheckReport::new(name, CONFIG_L as u64)
            .param("p", model.p)
            .param("pp", model.pp)
    };
    let mut x = base("x_closed");
    let mut y = base("y_sum");
    let mut bdry = base("y_boundary");
    for l in 0..=CONFIG_L {
        for pm in Sign::BOTH {
            for a in 0..=p {
                for b in 0..=p {
                    let tagx = format!("a={a} b={b} c={} L={l} ", b + pm.value());
                    x.compare_frac(
                        &tagx,
                        &x_closed(mutated, a, b, pm, l),
                        &x_direct(model, a, b, b + pm.value(), l),
                    );
                }
            }
            for a in 1..p {
                for b in [0, p] {
                    let v = y_sum(mutated, a, b, pm, l);
                    bdry.compare_frac(
                        &format!("a={a} b={b} {} L={l} ", pm.symbol()),
                        &v,
                        &FracSeries::zero(v.lattice()),
                    );
                }
                for b in 1..p {
                    let c = b + pm.value();
                    if !(1..p).contains(&c) {
                        continue;
                    }
                    y.compare_frac(
                        &format!("a={a} b={b} c={c} L={l} "),
                        &y_sum(mutated, a, b, pm, l),
                        &y_direct(model, a, b, c, l),
                    );
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ ((model.p as u64) << 8) ^ model.pp as u64);
    let mut gauge = base("gauge").param("paths", GAUGE_PATHS as u64);
    gauge.order = 12.into();
    for _ in 0..GAUGE_PATHS {
        let len = rng.gen_range(1..=12usize);
        let mut path = vec![rng.gen_range(1..p)];
        for _ in 0..=len {
            let last = *path.last().expect("nonempty");
            path.push(last + if rng.gen::<bool>() { 1 } else { -1 });
        }
        gauge.merge(&gauge_check_split(model, mutated, &path));
    }
    let mut out = vec![x, y, bdry, gauge];
    out.extend((-DURFEE_L..=DURFEE_L).map(|l| durfee_check(l, DURFEE_Q)));
    out
}

fn characters_suite(
    model: &ModelParams,
    mutated: &ModelParams,
    orders: &Orders,
) -> Vec<CheckReport> {
    let n = orders.q;
    model
        .labels()
        .par_iter()
        .flat_map_iter(|&(r, s)| {
            let label = |name: &str| {
                CheckReport::new(name, n)
                    .param("p", model.p)
                    .param("pp", model.pp)
                    .param("r", r)
                    .param("s", s)
            };
            let mut ferm = label("chi_fermionic");
            let mut conf = label("chi_confsum");
            let mut bind = label("b_independence");
            let mut run = || -> Result<()> {
                let bos = chi_bosonic(model, r, s, n)?;
                let b = model.b_of_s(s)?;
                ferm.compare_frac("", &chi_fermionic(mutated, r, s, b, n)?, &bos);
                conf.compare_frac("", &chi_confsum(mutated, r, s, n)?, &bos);
                let mut bs = vec![b - 1, b + 1, 0];
                bs.retain(|x| *x != b);
                bs.sort();
                bs.dedup();
                bind.params.insert("b".into(), bs.clone().into());
                for other in bs {
                    let f = chi_fermionic(mutated, r, s, other, n)?;
                    bind.compare_frac(&format!("b={other} "), &f, &bos);
                }
                Ok(())
            };
            if let Err(e) = run() {
                ferm.fail_error(&e);
            }
            let pos = positivity_check(model, r, s, POSITIVITY_L);
            vec![ferm, conf, bind, pos]
        })
        .collect()
}

fn enumeration_suite(
    model: &ModelParams,
    mutated: &ModelParams,
    orders: &Orders,
) -> Vec<CheckReport> {
    let n = orders.enumeration;
    let mut out = vec![weight_invariants_check(model)];
    out.extend(
        model
            .labels()
            .par_iter()
            .map(|&(r, s)| {
                let mut rep = CheckReport::new("enumeration", n)
                    .param("p", model.p)
                    .param("pp", model.pp)
                    .param("r", r)
                    .param("s", s);
                let run = || -> Result<(FracSeries, FracSeries)> {
                    Ok((
                        chi_enumerate(mutated, r, s, n)?,
                        chi_bosonic(model, r, s, n)?,
                    ))
                };
                if let Some((counts, chi)) = rep.absorb(run()) {
                    rep.compare_frac("", &counts, &chi);
                }
                rep
            })
            .collect::<Vec<_>>(),
    );
    out
}

/// Runs one sl2 suite selection at `level` (`k >= 1`). With `perturb`, one
/// ingredient of every identity is evaluated at `kappa + 1/1000`.
pub fn sl2_suite(
    level: &LevelParams,
    suite: Sl2Suite,
    orders: &Orders,
    perturb: bool,
) -> Result<Vec<CheckReport>> {
    if level.k < 1 {
        return Err(Error::InvalidParams(format!(
            "sl2 suites need level k >= 1, got {}",
            level.k
        )));
    }
    let shifted = level.with_kappa(&level.kappa + perturbation());
    let mutated = if perturb { &shifted } else { level };
    Ok(suite
        .parts()
        .into_iter()
        .flat_map(|part| {
            let reps = match part {
                Sl2Suite::Kz => kz_suite(level, mutated, orders),
                Sl2Suite::Ab => ab_suite(level, mutated, orders),
                Sl2Suite::Exchange => exchange_suite(level, mutated, orders),
                Sl2Suite::Kostka => kostka_suite(level, mutated),
                Sl2Suite::Characters => sl2_characters_suite(level, mutated, orders),
                Sl2Suite::All => unreachable!("expanded by parts"),
            };
            tag(reps, part.name(), perturb)
        })
        .collect())
}

fn kz_suite(level: &LevelParams, mutated: &LevelParams, orders: &Orders) -> Vec<CheckReport> {
    let mut pin = CheckReport::new("kz_orientation", 8u64);
    if let Some(o) = pin.absorb(pinned_orientation()) {
        pin = pin.param("orientation", o.label());
    }
    let mut out = vec![pin];
    out.extend(
        (0..=level.k)
            .into_par_iter()
            .map(|lambda| kz_check_split(mutated, level, lambda, orders.z))
            .collect::<Vec<_>>(),
    );
    out
}

/// Ten seeded `(alpha, beta)` pairs with `beta` not an integer.
pub fn random_ab_pairs() -> Vec<(Rational, Rational)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut out = Vec::new();
    while out.len() < AB_RANDOM {
        let alpha = rat(rng.gen_range(-12..=12), rng.gen_range(1..=9));
        let beta = rat(rng.gen_range(-12..=12), rng.gen_range(2..=9));
        if !beta.is_integer() {
            out.push((alpha, beta));
        }
    }
    out
}

fn ab_suite(level: &LevelParams, mutated: &LevelParams, orders: &Orders) -> Vec<CheckReport> {
    let eps = if mutated == level {
        Rational::zero()
    } else {
        perturbation()
    };
    let kappa = &level.kappa;
    let mut pairs: Vec<(Rational, Rational)> = (0..=level.k)
        .map(|lambda| (kappa.clone(), kappa * int(lambda + 1)))
        .collect();
    pairs.extend(random_ab_pairs());
    pairs
        .par_iter()
        .map(|(a, b)| ab_product_check_split(a, &(a + &eps), b, orders.z))
        .collect()
}

fn exchange_suite(level: &LevelParams, mutated: &LevelParams, orders: &Orders) -> Vec<CheckReport> {
    (0..=level.k)
        .into_par_iter()
        .flat_map_iter(|lambda| {
            [
                exchange_det_check(mutated, lambda),
                vacuum_exchange_check_split(level, mutated, lambda, orders.z),
            ]
        })
        .collect()
}

/// `sum over restricted paths mu -> 0 of length len of q^{sum of peak
/// positions}`, by direct enumeration.
pub fn kostka_by_peaks(level: &LevelParams, mu: i64, len: usize) -> FracSeries {
    let k = level.k;
    let mut out = FracSeries::zero(level.lattice());
    let mut path = vec![mu];
    fn walk(k: i64, len: usize, path: &mut Vec<i64>, out: &mut FracSeries, lattice: u64) {
        if path.len() == len + 1 {
            if path[len] == 0 {
                let peaks: i64 = (1..len)
                    .filter(|&i| path[i - 1] == path[i] - 1 && path[i + 1] == path[i] - 1)
                    .map(|i| i as i64)
                    .sum();
                let term = FracSeries::monomial(lattice, &int(peaks), int(1)).expect("integer");
                *out = out.add(&term).expect("same lattice");
            }
            return;
        }
        let here = *path.last().expect("nonempty");
        for next in [here - 1, here + 1] {
            if (0..=k).contains(&next) {
                path.push(next);
                walk(k, len, path, out, lattice);
                path.pop();
            }
        }
    }
    walk(k, len, &mut path, &mut out, level.lattice());
    out
}

fn kostka_suite(level: &LevelParams, mutated: &LevelParams) -> Vec<CheckReport> {
    let mut hshift = CheckReport::new("h_shift_identity", KOSTKA_L as u64);
    for len in 0..=KOSTKA_L {
        let lhs = epsilon_sum(len);
        for l in 0..=len as i64 {
            let z = len as i64 - 2 * l;
            let lhs_z = lhs.get(&z).cloned().unwrap_or_else(|| FracSeries::zero(1));
            hshift.compare_frac(
                &format!("L={len} l={l} "),
                &lhs_z,
                &gauss_binom_int(len as i64, l),
            );
        }
    }
    // path weights from `level`, dimensions from `mutated`
    let mut reduced = CheckReport::new("reduced_weight", 0u64).param("k", level.k);
    for b in 0..=level.k {
        for a in [b - 1, b + 1] {
            for c in [b - 1, b + 1] {
                if !(0..=level.k).contains(&a) || !(0..=level.k).contains(&c) {
                    continue;
                }
                let Some(w) = reduced.absorb(sl2_weights(level, (a, b, c))) else {
                    continue;
                };
                let w = w - mutated.delta(a) + int(2) * mutated.delta(b) - mutated.delta(c);
                let peak = int(i64::from(a == b - 1 && c == b - 1));
                reduced.compare_rat(&format!("({a},{b},{c})"), &w, &peak);
            }
        }
    }
    let mut out = vec![hshift, reduced];
    out.extend(
        (0..=level.k)
            .into_par_iter()
            .map(|mu| {
                let mut rep = CheckReport::new("restricted_kostka", KOSTKA_L as u64)
                    .param("k", level.k)
                    .param("mu", mu);
                for len in 0..=KOSTKA_L {
                    if let Some(kostka) = rep.absorb(restricted_kostka(mutated, mu, len)) {
                        rep.compare_frac(
                            &format!("L={len} "),
                            &kostka,
                            &kostka_by_peaks(level, mu, len),
                        );
                    }
                }
                rep
            })
            .collect::<Vec<_>>(),
    );
    out
}

fn sl2_characters_suite(
    level: &LevelParams,
    mutated: &LevelParams,
    orders: &Orders,
) -> Vec<CheckReport> {
    let q = orders.q as i64;
    let qe = orders.enumeration as i64;
    (0..=level.k)
        .into_par_iter()
        .flat_map_iter(|mu| {
            let label = |name: &str, order: i64| {
                CheckReport::new(name, order)
                    .param("k", level.k)
                    .param("mu", mu)
            };
            let mut gates = label("weylkac_gates", q);
            let mut paths = label("sl2_char_paths", q);
            let mut enumer = label("sl2_enumeration", qe);
            if let Some(wk) = gates.absorb(sl2_char_weylkac(level, mu, q)) {
                if let Some(p) = paths.absorb(sl2_char_paths(mutated, mu, q)) {
                    paths.compare_bi("", &p, &wk);
                }
            }
            let mut run = || -> Result<()> {
                let wk = sl2_char_weylkac(level, mu, qe)?;
                let top = mutated.delta(mu) + int(qe);
                let monos = enumerate_sl2_admissible(mutated, mu, &top)?;
                let counts = count_sl2_by_degree(level, mu, &monos, qe)?;
                enumer.compare_bi("", &counts, &wk);
                Ok(())
            };
            if let Err(e) = run() {
                enumer.fail_error(&e);
            }
            [gates, paths, enumer]
        })
        .collect()
}

/// Passes when every report passes.
pub fn all_passed(reports: &[CheckReport]) -> bool {
    reports.iter().all(CheckReport::passed)
}
