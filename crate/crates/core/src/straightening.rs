//! The relation matrices `M_{n,δ}(ρ)` used to straighten non-admissible
//! monomials, their determinant factorization, the elimination index
//! bookkeeping, and the rewrite of a non-admissible straight-step pair.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergeom::{fg_series_at, SectorParams};
use crate::linalg;
use crate::qseries::{binom_series, PowerSeries};
use crate::rational::{self, int, Rational};
use crate::report::CheckReport;
use crate::Sign;

/// `M_{n,δ}` of size `2n + δ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StraighteningMatrix {
    pub n: usize,
    pub delta: usize,
    pub entries: Vec<Vec<Rational>>,
}

impl StraighteningMatrix {
    pub fn size(&self) -> usize {
        2 * self.n + self.delta
    }

    pub fn det(&self) -> Rational {
        linalg::det(&self.entries)
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            n: self.n,
            delta: self.delta,
            entries: linalg::to_strings(&self.entries),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub delta: usize,
    pub entries: Vec<Vec<String>>,
}

fn check_shape(n: usize, delta: usize) -> Result<()> {
    if delta > 1 || (n == 0 && delta == 0) {
        return Err(Error::Precondition(format!(
            "need n >= 1 or (n, delta) = (0, 1); got ({n}, {delta})"
        )));
    }
    Ok(())
}

/// `M_{n,δ}` at an arbitrary `(t, rho)`:
/// rows `j <= n + δ` hold `f^+_{j+k-n-1-δ} + f^+_{-j+k-n}`, the remaining rows
/// `g^+_{j+k-2n-1-δ} + g^+_{-j+k+1}` (1-based `j, k`; negative indices give 0).
pub fn build_matrix_at(
    t: &Rational,
    rho: &Rational,
    n: usize,
    delta: usize,
) -> Result<StraighteningMatrix> {
    check_shape(n, delta)?;
    let size = 2 * n + delta;
    let (f, g) = fg_series_at(t, rho, Sign::Plus, size)?;
    let at = |s: &PowerSeries, i: i64| s.coeff(i).expect("index within computed order");
    let (ni, di) = (n as i64, delta as i64);
    let mut entries = vec![vec![Rational::zero(); size]; size];
    for j in 1..=size as i64 {
        for k in 1..=size as i64 {
            entries[(j - 1) as usize][(k - 1) as usize] = if j <= ni + di {
                at(&f, j + k - ni - 1 - di) + at(&f, -j + k - ni)
            } else {
                at(&g, j + k - 2 * ni - 1 - di) + at(&g, -j + k + 1)
            };
        }
    }
    Ok(StraighteningMatrix { n, delta, entries })
}

pub fn build_matrix(sector: &SectorParams, n: usize, delta: usize) -> Result<StraighteningMatrix> {
    sector.require_middle()?;
    build_matrix_at(sector.t(), &sector.rho(), n, delta)
}

/// The closed form of `det M_{n,δ}` up to a constant:
/// `prod_i {(ρ+t-i-1)(ρ-t-i+2)}^{n-[(i-δ)/2]} / prod_i (ρ-i)^{2n-i+δ}`,
/// `i = 1..2n-1+δ`. `None` when a factor vanishes.
pub fn det_closed_form(t: &Rational, rho: &Rational, n: usize, delta: usize) -> Option<Rational> {
    let mut num = Rational::from_integer(1.into());
    let mut den = num.clone();
    let top = 2 * n as i64 - 1 + delta as i64;
    for i in 1..=top {
        let e = n as i64 - (i - delta as i64).div_euclid(2);
        let a = (rho + t - int(i + 1)) * (rho - t - int(i - 2));
        num *= rational::pow(&a, e as u32);
        den *= rational::pow(&(rho - int(i)), (2 * n as i64 - i + delta as i64) as u32);
    }
    if num.is_zero() || den.is_zero() {
        None
    } else {
        Some(num / den)
    }
}

/// `det M / closed form` at one `rho`.
pub fn det_ratio(t: &Rational, rho: &Rational, n: usize, delta: usize) -> Result<Option<Rational>> {
    let d = build_matrix_at(t, rho, n, delta)?.det();
    Ok(det_closed_form(t, rho, n, delta).map(|c| d / c))
}

/// Checks that `det M_{n,δ}(ρ)` is nonzero and that its ratio to the closed
/// form is one constant across the sampled `rho` (with `t` fixed). The
/// closed form is evaluated at `t_closed`, normally equal to `t`.
pub fn det_factorization_check_split(
    t: &Rational,
    t_closed: &Rational,
    n: usize,
    delta: usize,
    rhos: &[Rational],
) -> CheckReport {
    let mut rep = CheckReport::new("det_factorization", (2 * n + delta) as u64)
        .param_rat("t", t)
        .param("n", n as u64)
        .param("delta", delta as u64)
        .param(
            "samples",
            rhos.iter().map(rational::to_string).collect::<Vec<_>>(),
        );
    let mut ratio: Option<Rational> = None;
    let mut used = 0;
    for rho in rhos {
        let Some(m) = rep.absorb(build_matrix_at(t, rho, n, delta)) else {
            return rep;
        };
        let d = m.det();
        let label = format!("rho={}", rational::to_string(rho));
        rep.require(
            !d.is_zero(),
            &format!("det nonzero at {label}"),
            "0",
            "nonzero",
        );
        let Some(c) = det_closed_form(t_closed, rho, n, delta) else {
            continue;
        };
        used += 1;
        let r = d / c;
        match &ratio {
            None => ratio = Some(r),
            Some(r0) => rep.compare_rat(&format!("ratio at {label}"), &r, r0),
        }
    }
    rep.require(used >= 3, "at least three usable samples", used, ">= 3");
    rep
}

pub fn det_factorization_check(
    t: &Rational,
    n: usize,
    delta: usize,
    rhos: &[Rational],
) -> CheckReport {
    det_factorization_check_split(t, t, n, delta, rhos)
}

/// Distinct `rho` values of the middle sectors of a model.
pub fn sector_rhos(sectors: &[SectorParams]) -> Vec<Rational> {
    let mut v: Vec<Rational> = sectors
        .iter()
        .filter(|s| s.is_middle())
        .map(|s| s.rho())
        .collect();
    v.sort();
    v.dedup();
    v
}

/// Verifies that `det M * prod (ρ-i)^{2n-i+δ}` is a polynomial in `rho` of
/// degree at most `2n(n+δ)`, by interpolating through `2n(n+δ)+2` points.
pub fn cleared_degree_check(
    t: &Rational,
    n: usize,
    delta: usize,
    rhos: &[Rational],
) -> CheckReport {
    let bound = 2 * n * (n + delta);
    let mut rep = CheckReport::new("cleared_det_degree", bound as u64)
        .param_rat("t", t)
        .param("n", n as u64)
        .param("delta", delta as u64);
    if rhos.len() < bound + 2 {
        rep.fail(
            "samples",
            rhos.len().to_string(),
            format!(">= {}", bound + 2),
        );
        return rep;
    }
    let top = 2 * n as i64 - 1 + delta as i64;
    let mut pts = Vec::new();
    for rho in &rhos[..bound + 2] {
        let Some(m) = rep.absorb(build_matrix_at(t, rho, n, delta)) else {
            return rep;
        };
        let mut v = m.det();
        for i in 1..=top {
            v *= rational::pow(&(rho - int(i)), (2 * n as i64 - i + delta as i64) as u32);
        }
        pts.push((rho.clone(), v));
    }
    let poly = linalg::interpolate(&pts);
    let deg = linalg::degree(&poly).unwrap_or(0);
    rep.require(deg <= bound, "degree", deg, format!("<= {bound}"));
    rep
}

/// Index bookkeeping for the straightening step at one parity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationPlan {
    /// The sector after reducing to `rho > 0`.
    pub sector: SectorParams,
    pub delta: usize,
    pub big_n: i64,
    pub n_plus_n: Rational,
    pub n_minus_n: Rational,
    pub w_plus: Rational,
    pub w_minus: Rational,
    pub surviving_indices: Vec<Rational>,
    /// `n` of the matrix `M_{n,δ}` that solves for the targeted indices.
    pub matrix_n: usize,
}

/// The bookkeeping depends only on `(t, rho)`, so any Kac label is accepted;
/// the matrix it points to exists only for middle labels.
pub fn elimination_plan(sector: &SectorParams, delta: usize) -> Result<EliminationPlan> {
    if delta > 1 {
        return Err(Error::Precondition(format!(
            "delta must be 0 or 1, got {delta}"
        )));
    }
    let rho0 = sector.rho();
    if rho0.is_zero() {
        return Err(Error::Precondition("rho = 0".into()));
    }
    let sector = if rho0.is_negative() {
        let m = &sector.model;
        SectorParams {
            model: m.clone(),
            r: m.p - sector.r,
            s: m.pp - sector.s,
        }
    } else {
        sector.clone()
    };
    let t = sector.t().clone();
    let rho = sector.rho();
    let fl = rational::floor(&rho);
    let di = delta as i64;
    let even = fl.rem_euclid(2) == 0;
    let big_n = if even { fl / 2 + di } else { (fl + 1) / 2 };
    let fl_r = int(fl);
    let w_plus = int(2) - &t / int(2) + &fl_r - &rho;
    let w_minus = int(1) - &t / int(2) - &fl_r + &rho;
    let n_of = |sign: Sign, a: i64| int(-2 * a) - int(2) * sector.lambda(sign) + int(di);
    let n_plus_n = n_of(Sign::Plus, big_n);
    let n_minus_n = n_of(Sign::Minus, big_n);
    if !(n_minus_n < w_minus && &n_minus_n + int(2) >= w_minus) {
        return Err(Error::Precondition(format!(
            "n_-(N) = {} does not satisfy n_-(N) < w_- <= n_-(N) + 2 with w_- = {}",
            rational::to_string(&n_minus_n),
            rational::to_string(&w_minus)
        )));
    }
    let count = 2 * big_n - di;
    let shift = if even { di } else { 1 - di };
    let surviving_indices: Vec<Rational> = (1..=count)
        .map(|a| &w_plus - int(2 * a) + int(shift))
        .collect();
    let matrix_n = if even { fl / 2 } else { (fl + 1 - 2 * di) / 2 };
    if 2 * matrix_n + di != count || surviving_indices.iter().any(|x| *x >= w_plus) {
        return Err(Error::Precondition(
            "targeted indices do not match the matrix size".into(),
        ));
    }
    Ok(EliminationPlan {
        sector,
        delta,
        big_n,
        n_plus_n,
        n_minus_n,
        w_plus,
        w_minus,
        surviving_indices,
        matrix_n: matrix_n as usize,
    })
}

/// One term `coeff * P(m', n')` of a rewritten pair.
pub type PairTerm = (Rational, Rational, Rational);

/// Rewrites the non-admissible straight-step pair `P(m, n)` (with
/// `n - m < t/2`) as
/// `sum_{j>=0} c_j P(n-t/2-j, m+t/2+j) - sum_{j>=1} c_j P(m-j, n+j)`,
/// `c_j` the coefficients of `(1-z)^{-t/2}`, keeping `j < depth`.
pub fn case1_rewrite(
    t: &Rational,
    m: &Rational,
    n: &Rational,
    depth: usize,
) -> Result<Vec<PairTerm>> {
    let half = t / int(2);
    if n - m >= half {
        return Err(Error::Precondition(
            "pair is admissible; nothing to rewrite".into(),
        ));
    }
    let c = binom_series(&-&half, depth.saturating_sub(1));
    let mut out = Vec::new();
    for j in 0..depth {
        let jr = int(j as i64);
        out.push((n - &half - &jr, m + &half + &jr, c.coeffs()[j].clone()));
    }
    for j in 1..depth {
        let jr = int(j as i64);
        out.push((m - &jr, n + &jr, -c.coeffs()[j].clone()));
    }
    let gap = n - m;
    if out.iter().any(|(a, b, _)| b - a <= gap) {
        return Err(Error::Precondition(
            "rewrite produced a pair that is not closer to admissible".into(),
        ));
    }
    Ok(out)
}

type Sym = (Rational, Rational);
type Combo = BTreeMap<Sym, Rational>;
/// A two-variable series keyed by `(exp of z1, exp of z2)` with formal
/// coefficients in the symbols `P(a, b)`.
type Bivariate = BTreeMap<(Rational, Rational), Combo>;

fn add_combo(into: &mut Combo, from: &Combo, scale: &Rational) {
    for (k, v) in from {
        let e = into.entry(k.clone()).or_insert_with(Rational::zero);
        *e += v * scale;
        if e.is_zero() {
            into.remove(k);
        }
    }
}

fn mul_scalar_series(factor: &[((Rational, Rational), Rational)], g: &Bivariate) -> Bivariate {
    let mut out = Bivariate::new();
    for ((e1, e2), c) in factor {
        for ((g1, g2), combo) in g {
            let key = (e1 + g1, e2 + g2);
            add_combo(out.entry(key).or_default(), combo, c);
        }
    }
    out
}

/// Checks a rewrite of `P(m, n)` against an independent expansion of the
/// exchange relation
/// `(1 - z2/z1)^{-t/2} G(z1, z2) = (z1/z2)^{t/2} (1 - z1/z2)^{-t/2} G(z2, z1)`,
/// `G(z1, z2) = sum P(a, b) z1^{-a} z2^{-b}`: the `z1^{-m} z2^{-n}` row of
/// the difference must vanish once `P(m, n)` is replaced by the rewrite.
pub fn case1_residual_check(
    t: &Rational,
    m: &Rational,
    n: &Rational,
    depth: usize,
    rewrite: &[PairTerm],
) -> CheckReport {
    let mut rep = CheckReport::new("case1_rewrite", depth as u64)
        .param_rat("t", t)
        .param_rat("m", m)
        .param_rat("n", n);
    let half = t / int(2);
    let c = binom_series(&-&half, depth.saturating_sub(1));
    let k = depth as i64;
    // symbols on a rectangle large enough for both rows
    let mut firsts = Vec::new();
    let mut seconds = Vec::new();
    for i in 0..k {
        firsts.push(m - int(i));
        firsts.push(n - &half - int(i));
        seconds.push(n + int(i));
        seconds.push(m + &half + int(i));
    }
    let mut g = Bivariate::new();
    let mut g_swapped = Bivariate::new();
    for a in &firsts {
        for b in &seconds {
            let sym: Combo = [((a.clone(), b.clone()), Rational::from_integer(1.into()))].into();
            g.insert((-a, -b), sym.clone());
            g_swapped.insert((-b, -a), sym);
        }
    }
    // (1 - z2/z1)^{-t/2} = sum c_j z1^{-j} z2^{j}
    let left_factor: Vec<_> = (0..k)
        .map(|j| ((int(-j), int(j)), c.coeffs()[j as usize].clone()))
        .collect();
    // (z1/z2)^{t/2} (1 - z1/z2)^{-t/2} = sum c_j z1^{t/2+j} z2^{-t/2-j}
    let right_factor: Vec<_> = (0..k)
        .map(|j| {
            (
                (&half + int(j), -&half - int(j)),
                c.coeffs()[j as usize].clone(),
            )
        })
        .collect();
    let left = mul_scalar_series(&left_factor, &g);
    let right = mul_scalar_series(&right_factor, &g_swapped);
    let key = (-m, -n);
    let mut row = left.get(&key).cloned().unwrap_or_default();
    let rhs = right.get(&key).cloned().unwrap_or_default();
    add_combo(&mut row, &rhs, &int(-1));
    // substitute P(m, n) by the rewrite
    let target = (m.clone(), n.clone());
    if let Some(coef) = row.remove(&target) {
        let sub: Combo = rewrite.iter().fold(Combo::new(), |mut acc, (a, b, x)| {
            add_combo(
                &mut acc,
                &[((a.clone(), b.clone()), x.clone())].into(),
                &int(1),
            );
            acc
        });
        add_combo(&mut row, &sub, &coef);
    }
    if let Some(((a, b), v)) = row.iter().next() {
        rep.fail(
            format!("P({}, {})", rational::to_string(a), rational::to_string(b)),
            rational::to_string(v),
            "0",
        );
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minimal_model::ModelParams;
    use crate::rational::rat;

    fn sector(p: i64, pp: i64, r: i64, s: i64) -> SectorParams {
        SectorParams::new(&ModelParams::new(p, pp).unwrap(), r, s).unwrap()
    }

    #[test]
    fn matrix_shapes() {
        let sec = sector(4, 5, 2, 1);
        let m = build_matrix(&sec, 1, 0).unwrap();
        assert_eq!(m.size(), 2);
        assert!(!m.det().is_zero());
        let one = build_matrix(&sec, 0, 1).unwrap();
        assert_eq!(one.entries, vec![vec![int(2)]]);
        assert!(build_matrix(&sector(4, 5, 1, 1), 1, 0).is_err());
        assert!(build_matrix(&sec, 0, 0).is_err());
    }

    #[test]
    fn first_row_uses_f_and_zero_for_negative_indices() {
        let t = rat(7, 5);
        let rho = rat(1, 3);
        let (f, g) = fg_series_at(&t, &rho, Sign::Plus, 4).unwrap();
        let m = build_matrix_at(&t, &rho, 1, 0).unwrap();
        // j = 1, k = 1: f_0 + f_{-1}; j = 1, k = 2: f_1 + f_0
        assert_eq!(m.entries[0][0], f.coeffs()[0].clone());
        assert_eq!(m.entries[0][1], &f.coeffs()[1] + &f.coeffs()[0]);
        // j = 2, k = 1: g_0 + g_0
        assert_eq!(m.entries[1][0], int(2) * &g.coeffs()[0]);
    }

    #[test]
    fn det_ratio_constant_off_table() {
        let t = rat(7, 5);
        let rhos = [
            rat(1, 3),
            rat(5, 7),
            rat(13, 11),
            rat(-2, 9),
            rat(17, 4),
            rat(3, 13),
        ];
        for n in 1..=2 {
            for d in 0..=1 {
                let rep = det_factorization_check(&t, n, d, &rhos);
                assert!(rep.passed(), "{rep:?}");
            }
        }
        let rep = det_factorization_check_split(&t, &(&t + rat(1, 1000)), 1, 0, &rhos);
        assert!(!rep.passed());
    }

    #[test]
    fn cleared_degree_small() {
        let t = rat(9, 7);
        let rhos: Vec<Rational> = (1..=20).map(|i| rat(2 * i + 1, 7 * i + 3)).collect();
        for (n, d) in [(1, 0), (1, 1), (2, 0)] {
            let rep = cleared_degree_check(&t, n, d, &rhos);
            assert!(rep.passed(), "{rep:?}");
        }
    }

    #[test]
    fn plan_examples() {
        let plan = elimination_plan(&sector(4, 5, 3, 2), 0).unwrap();
        assert_eq!(plan.big_n, 1);
        assert_eq!(plan.surviving_indices.len(), 2);
        let model = ModelParams::new(5, 8).unwrap();
        for (r, s) in model.labels() {
            let sec = SectorParams::new(&model, r, s).unwrap();
            if !sec.is_middle() {
                continue;
            }
            for d in 0..=1 {
                let plan = elimination_plan(&sec, d).unwrap();
                assert!(plan.sector.rho().is_positive());
                assert_eq!(
                    plan.surviving_indices.len() as i64,
                    2 * plan.big_n - d as i64
                );
                assert!(plan.surviving_indices.iter().all(|x| *x < plan.w_plus));
            }
        }
    }

    #[test]
    fn rewrite_terms_and_residual() {
        let t = rat(4, 3);
        let (m, n) = (rat(-1, 2), rat(-1, 6));
        let out = case1_rewrite(&t, &m, &n, 6).unwrap();
        assert_eq!(out[0], (&n - rat(2, 3), &m + rat(2, 3), int(1)));
        assert_eq!(out[1].2, rat(2, 3));
        assert!(case1_residual_check(&t, &m, &n, 6, &out).passed());
        let wrong = case1_rewrite(&(&t + rat(1, 1000)), &m, &n, 6).unwrap();
        assert!(!case1_residual_check(&t, &m, &n, 6, &wrong).passed());
        assert!(case1_rewrite(&t, &int(0), &int(1), 3).is_err());
    }
}
