//! Kac-table data for the minimal models `M(p, p')` with `p < p' < 2p`:
//! conformal dimensions, the label `b(s)`, local weights, the admissibility
//! rules for monomials and their exhaustive enumeration.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, int, rat, Rational};
use crate::report::CheckReport;
use crate::Sign;

/// `(p, p')` together with the value of `t` every formula is evaluated at.
///
/// `t` is `p'/p` unless the params were deliberately perturbed (see
/// [`ModelParams::with_t`]); the integer data `p, p'` never changes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelParams {
    pub p: i64,
    pub pp: i64,
    pub t: Rational,
}

impl ModelParams {
    pub fn new(p: i64, pp: i64) -> Result<Self> {
        if p < 2 || pp < 2 || p.gcd(&pp) != 1 {
            return Err(Error::InvalidParams(format!(
                "p = {p}, p' = {pp} must be coprime integers >= 2"
            )));
        }
        if !(p < pp && pp < 2 * p) {
            return Err(Error::InvalidParams(format!(
                "need 1 < p'/p < 2, got p'/p = {pp}/{p}"
            )));
        }
        Ok(Self {
            p,
            pp,
            t: rat(pp, p),
        })
    }

    /// Same labels, but every formula uses `t` instead of `p'/p`.
    pub fn with_t(&self, t: Rational) -> Self {
        Self { t, ..self.clone() }
    }

    /// Exponent lattice `4 N D` for `t = N/D` (so `4 p p'` unless
    /// perturbed), on which all dimensions and weights live.
    pub fn lattice(&self) -> u64 {
        let n = self
            .t
            .numer()
            .magnitude()
            .to_u64()
            .expect("numerator fits u64");
        let d = self
            .t
            .denom()
            .magnitude()
            .to_u64()
            .expect("denominator fits u64");
        4 * n * d
    }

    pub fn check_labels(&self, r: i64, s: i64) -> Result<()> {
        if !(1..self.p).contains(&r) || !(1..self.pp).contains(&s) {
            return Err(Error::InvalidParams(format!(
                "labels (r, s) = ({r}, {s}) outside 1..{} x 1..{}",
                self.p - 1,
                self.pp - 1
            )));
        }
        Ok(())
    }

    /// All Kac labels `(r, s)`.
    pub fn labels(&self) -> Vec<(i64, i64)> {
        (1..self.p)
            .flat_map(|r| (1..self.pp).map(move |s| (r, s)))
            .collect()
    }

    /// `((rt - s)^2 - (t - 1)^2) / 4t` for any integers `r, s`.
    pub fn delta_ext(&self, r: i64, s: i64) -> Rational {
        let t = &self.t;
        let a = t * int(r) - int(s);
        let b = t - int(1);
        (&a * &a - &b * &b) / (int(4) * t)
    }

    /// Conformal dimension `Delta_{r,s}` for labels in the Kac table.
    pub fn delta(&self, r: i64, s: i64) -> Result<Rational> {
        self.check_labels(r, s)?;
        Ok(self.delta_ext(r, s))
    }

    /// `Delta_{2,1} = (3t - 2)/4`.
    pub fn delta21(&self) -> Rational {
        (int(3) * &self.t - int(2)) / int(4)
    }

    /// The `r` minimizing `Delta_{r,s}`; ties go to the smaller `r`.
    pub fn b_of_s(&self, s: i64) -> Result<i64> {
        self.check_labels(1, s)?;
        let mut best = 1;
        let mut best_d = self.delta_ext(1, s);
        for r in 2..self.p {
            let d = self.delta_ext(r, s);
            if d < best_d {
                best = r;
                best_d = d;
            }
        }
        let tb = rational::floor(&(&self.t * int(best)));
        if tb != s && tb != s - 1 {
            return Err(Error::Precondition(format!(
                "b({s}) = {best} but [t b] = {tb} is neither s nor s-1"
            )));
        }
        Ok(best)
    }

    /// Local weight `w(r, r', r'')` for any integers with unit steps.
    pub fn local_weight(&self, r: i64, r1: i64, r2: i64) -> Result<Rational> {
        if (r1 - r).abs() != 1 || (r2 - r1).abs() != 1 {
            return Err(Error::Precondition(format!(
                "({r}, {r1}, {r2}) is not a unit-step triple"
            )));
        }
        let t = &self.t;
        let tr = t * int(r);
        let floor = int(rational::floor(&tr));
        Ok(if r2 != r {
            t / int(2)
        } else if r1 == r + 1 {
            int(2) - t / int(2) + floor - tr
        } else {
            int(1) - t / int(2) - floor + tr
        })
    }

    fn w(&self, r: i64, r1: i64, r2: i64) -> Rational {
        self.local_weight(r, r1, r2).expect("unit-step triple")
    }

    /// Smallest local weight over in-range triples.
    pub fn min_weight(&self) -> Rational {
        let mut m = &self.t / int(2);
        for r in 1..self.p {
            for d in [-1, 1] {
                let r1 = r + d;
                if (1..self.p).contains(&r1) {
                    let w = self.w(r, r1, r);
                    if w < m {
                        m = w;
                    }
                }
            }
        }
        m
    }
}

fn in_unit_lattice(x: &Rational) -> bool {
    x.is_integer()
}

fn nonneg_integer(x: &Rational) -> bool {
    x.is_integer() && !x.is_negative()
}

/// Verifies positivity, the mod-Z relation to dimensions, the `r -> p - r`
/// symmetry and `1 < w_- + w_+ < 2` for every in-range triple.
pub fn weight_invariants_check(params: &ModelParams) -> CheckReport {
    let mut rep = CheckReport::new("weight_invariants", 0)
        .param("p", params.p)
        .param("pp", params.pp);
    let p = params.p;
    let inr = |r: i64| (1..p).contains(&r);
    for r in 1..p {
        for d1 in [-1, 1] {
            for d2 in [-1, 1] {
                let (r1, r2) = (r + d1, r + d1 + d2);
                if !inr(r1) || !inr(r2) {
                    continue;
                }
                let w = params.w(r, r1, r2);
                let label = format!("w({r},{r1},{r2})");
                rep.require(
                    !w.is_negative(),
                    &format!("{label} >= 0"),
                    rational::to_string(&w),
                    ">= 0",
                );
                for s in 1..params.pp {
                    let comb = params.delta_ext(r2, s) + params.delta_ext(r, s)
                        - int(2) * params.delta_ext(r1, s);
                    rep.require(
                        in_unit_lattice(&(&w - &comb)),
                        &format!("{label} mod Z, s={s}"),
                        rational::to_string(&w),
                        rational::to_string(&comb),
                    );
                }
                let mirror = params.w(p - r, p - r1, p - r2);
                rep.compare_rat(&format!("{label} symmetry"), &w, &mirror);
            }
        }
        if inr(r - 1) && inr(r + 1) {
            let sum = params.w(r, r - 1, r) + params.w(r, r + 1, r);
            rep.require(
                sum > int(1) && sum < int(2),
                &format!("1 < w_- + w_+ < 2 at r={r}"),
                rational::to_string(&sum),
                "(1, 2)",
            );
        }
    }
    rep
}

/// A type-`s` monomial `phi^{sigma_1}_{m_1} ... phi^{sigma_L}_{m_L} |b(s)>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub s: i64,
    /// `(sigma_i, m_i)` for `i = 1..L`.
    pub entries: Vec<(Sign, Rational)>,
}

impl Monomial {
    pub fn void(s: i64) -> Self {
        Self {
            s,
            entries: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `[r_0, ..., r_L]` with `r_L = b(s)` and `r_{i-1} = r_i + sigma_i`.
    pub fn path(&self, params: &ModelParams) -> Result<Vec<i64>> {
        let b = params.b_of_s(self.s)?;
        let mut path = vec![b; self.entries.len() + 1];
        for i in (1..=self.entries.len()).rev() {
            path[i - 1] = path[i] + self.entries[i - 1].0.value();
        }
        Ok(path)
    }

    /// `Delta_{b(s),s} - sum m_i`.
    pub fn degree(&self, params: &ModelParams) -> Result<Rational> {
        let b = params.b_of_s(self.s)?;
        let sum = self
            .entries
            .iter()
            .fold(Rational::zero(), |acc, (_, m)| acc + m);
        Ok(params.delta_ext(b, self.s) - sum)
    }

    pub fn to_json(&self, params: &ModelParams) -> Result<MonomialJson> {
        Ok(MonomialJson {
            s: self.s,
            entries: self
                .entries
                .iter()
                .map(|(sg, m)| EntryJson {
                    sigma: sg.value(),
                    m: rational::to_string(m),
                })
                .collect(),
            path: self.path(params)?,
            degree: rational::to_string(&self.degree(params)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub sigma: i64,
    pub m: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialJson {
    pub s: i64,
    pub entries: Vec<EntryJson>,
    pub path: Vec<i64>,
    pub degree: String,
}

/// The first admissibility rule a monomial breaks (positions are 1-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Path value `r_i` leaves `1..p-1`.
    R1 { i: usize },
    /// `-m_i` is not congruent to the dimension gap mod Z.
    R0 { i: usize },
    /// The last index does not clear the lowest-weight bound.
    R2,
    /// The gap between `m_i` and `m_{i+1}` is below the local weight.
    R3 { i: usize },
}

pub fn admissible_check(
    params: &ModelParams,
    m: &Monomial,
) -> Result<std::result::Result<(), Violation>> {
    let path = m.path(params)?;
    let s = m.s;
    let l = m.len();
    if let Some(i) = path.iter().position(|r| !(1..params.p).contains(r)) {
        return Ok(Err(Violation::R1 { i }));
    }
    for i in 1..=l {
        let gap = params.delta_ext(path[i - 1], s) - params.delta_ext(path[i], s);
        if !in_unit_lattice(&(-&m.entries[i - 1].1 - gap)) {
            return Ok(Err(Violation::R0 { i }));
        }
    }
    if l == 0 {
        return Ok(Ok(()));
    }
    let b = path[l];
    let gap = params.delta_ext(path[l - 1], s) - params.delta_ext(b, s);
    if !nonneg_integer(&(-&m.entries[l - 1].1 - gap)) {
        return Ok(Err(Violation::R2));
    }
    for i in 1..l {
        let w = params.w(path[i - 1], path[i], path[i + 1]);
        let d = -&m.entries[i - 1].1 + &m.entries[i].1 - w;
        if !nonneg_integer(&d) {
            return Ok(Err(Violation::R3 { i }));
        }
    }
    Ok(Ok(()))
}

/// Largest `L` for which a length-`L` admissible monomial can have degree
/// excess at most `budget` over `Delta_{b(s),s}`: the entries satisfy
/// `x_i >= x_{i+1} + w_min`, so their sum is at least `w_min L (L-1) / 2`.
pub fn max_length(params: &ModelParams, budget: &Rational) -> usize {
    let w = params.min_weight();
    let mut l = 0usize;
    while w.clone() * int(((l + 1) * l / 2) as i64) <= *budget {
        l += 1;
    }
    l
}

/// All admissible monomials with `r(m)_0 = r` and degree at most
/// `max_degree`, ordered by length, then by sign path, then by index vector
/// from the largest entries down.
pub fn enumerate_admissible(
    params: &ModelParams,
    r: i64,
    s: i64,
    max_degree: &Rational,
) -> Result<Vec<Monomial>> {
    params.check_labels(r, s)?;
    let b = params.b_of_s(s)?;
    let base = params.delta_ext(b, s);
    let budget = max_degree - &base;
    let mut out = Vec::new();
    if budget.is_negative() {
        return Ok(out);
    }
    let lmax = max_length(params, &budget);
    for l in 0..=lmax {
        for path in sign_paths(params.p, r, b, l) {
            enumerate_indices(params, s, &path, &budget, &mut out);
        }
    }
    Ok(out)
}

/// Unit-step paths `r_0 = from, ..., r_L = to` inside `1..p-1`, in
/// lexicographic order of `(r_1, ..., r_{L-1})` with down-steps first.
fn sign_paths(p: i64, from: i64, to: i64, l: usize) -> Vec<Vec<i64>> {
    fn go(p: i64, to: i64, l: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let i = cur.len() - 1;
        let last = *cur.last().expect("nonempty");
        if i == l {
            if last == to {
                out.push(cur.clone());
            }
            return;
        }
        for d in [-1, 1] {
            let next = last + d;
            let left = (l - i - 1) as i64;
            if (1..p).contains(&next) && (next - to).abs() <= left {
                cur.push(next);
                go(p, to, l, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    let gap = (from - to).unsigned_abs() as usize;
    if gap <= l && gap % 2 == l % 2 {
        go(p, to, l, &mut vec![from], &mut out);
    }
    out
}

fn enumerate_indices(
    params: &ModelParams,
    s: i64,
    path: &[i64],
    budget: &Rational,
    out: &mut Vec<Monomial>,
) {
    let l = path.len() - 1;
    if l == 0 {
        out.push(Monomial::void(s));
        return;
    }
    // x_i = -m_i; lower bounds: x_L >= gap, x_i >= x_{i+1} + w_i.
    let gap_l = params.delta_ext(path[l - 1], s) - params.delta_ext(path[l], s);
    let weights: Vec<Rational> = (1..l)
        .map(|i| params.w(path[i - 1], path[i], path[i + 1]))
        .collect();
    let mut xs = vec![Rational::zero(); l + 1];
    let mut found: Vec<Vec<Rational>> = Vec::new();

    // Position i (1-based) chosen after positions i+1..L; `sum` holds their total.
    fn go(
        i: usize,
        lower: Rational,
        sum: Rational,
        budget: &Rational,
        weights: &[Rational],
        xs: &mut Vec<Rational>,
        found: &mut Vec<Vec<Rational>>,
    ) {
        // every x_j with j <= i is at least x_i, so sum + i * x_i <= budget
        let room = budget - &sum;
        let top = (&room / int(i as i64) - &lower).floor();
        if top.is_negative() {
            return;
        }
        let top = rational::as_i64(&top).expect("small range");
        for k in (0..=top).rev() {
            let x = &lower + int(k);
            xs[i] = x.clone();
            if i == 1 {
                found.push(xs[1..].to_vec());
            } else {
                let next_lower = &x + &weights[i - 2];
                go(i - 1, next_lower, &sum + &x, budget, weights, xs, found);
            }
        }
    }
    go(
        l,
        gap_l,
        Rational::zero(),
        budget,
        &weights,
        &mut xs,
        &mut found,
    );
    for x in found {
        let entries = (1..=l)
            .map(|i| (Sign::from_step(path[i - 1] - path[i]), -&x[i - 1]))
            .collect();
        out.push(Monomial { s, entries });
    }
}

/// Number of admissible monomials at each degree up to the cutoff.
pub fn count_by_degree(
    params: &ModelParams,
    r: i64,
    s: i64,
    max_degree: &Rational,
) -> Result<BTreeMap<Rational, u64>> {
    let mut counts = BTreeMap::new();
    for m in enumerate_admissible(params, r, s, max_degree)? {
        *counts.entry(m.degree(params)?).or_insert(0) += 1;
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ising() -> ModelParams {
        ModelParams::new(3, 4).unwrap()
    }

    #[test]
    fn rejects_out_of_range_models() {
        assert!(ModelParams::new(2, 5).is_err());
        assert!(ModelParams::new(4, 6).is_err());
        assert!(ModelParams::new(5, 4).is_err());
    }

    #[test]
    fn ising_dimensions() {
        let m = ising();
        assert_eq!(m.delta(1, 1).unwrap(), int(0));
        assert_eq!(m.delta21(), rat(1, 2));
        assert_eq!(m.delta(2, 1).unwrap(), rat(1, 2));
        assert_eq!(m.delta(1, 2).unwrap(), rat(1, 16));
        assert_eq!(m.delta(2, 2).unwrap(), rat(1, 16));
        assert!(m.delta(3, 1).is_err());
    }

    #[test]
    fn kac_symmetry() {
        for (p, pp) in [(3, 4), (5, 7), (5, 8)] {
            let m = ModelParams::new(p, pp).unwrap();
            for (r, s) in m.labels() {
                assert_eq!(m.delta(r, s).unwrap(), m.delta(p - r, pp - s).unwrap());
            }
        }
    }

    #[test]
    fn b_of_s_values() {
        let m = ising();
        assert_eq!(m.b_of_s(1).unwrap(), 1);
        assert_eq!(m.b_of_s(2).unwrap(), 1);
        assert_eq!(ModelParams::new(4, 5).unwrap().b_of_s(4).unwrap(), 3);
    }

    #[test]
    fn b_of_s_minimizes() {
        for (p, pp) in [(3, 5), (4, 7), (5, 9), (7, 9)] {
            let m = ModelParams::new(p, pp).unwrap();
            for s in 1..pp {
                let b = m.b_of_s(s).unwrap();
                for r in 1..p {
                    assert!(m.delta_ext(b, s) <= m.delta_ext(r, s));
                }
            }
        }
    }

    #[test]
    fn weights() {
        let m = ising();
        assert_eq!(m.local_weight(1, 2, 1).unwrap(), int(1));
        assert_eq!(m.local_weight(2, 1, 2).unwrap(), int(1));
        assert_eq!(m.local_weight(4, 5, 6).unwrap(), rat(2, 3));
        assert!(m.local_weight(1, 3, 1).is_err());
        let m = ModelParams::new(5, 7).unwrap();
        assert_eq!(
            m.local_weight(1, 2, 3).unwrap(),
            m.local_weight(4, 3, 2).unwrap()
        );
        assert_eq!(m.local_weight(1, 2, 3).unwrap(), rat(7, 10));
    }

    #[test]
    fn weight_invariants_hold_on_grid() {
        for (p, pp) in [
            (3, 4),
            (3, 5),
            (4, 5),
            (4, 7),
            (5, 7),
            (5, 8),
            (5, 9),
            (7, 9),
        ] {
            let rep = weight_invariants_check(&ModelParams::new(p, pp).unwrap());
            assert!(rep.passed(), "{rep:?}");
        }
    }

    #[test]
    fn admissibility_examples() {
        let m = ising();
        assert_eq!(admissible_check(&m, &Monomial::void(1)).unwrap(), Ok(()));
        let good = Monomial {
            s: 1,
            entries: vec![(Sign::Plus, rat(-1, 2))],
        };
        assert_eq!(admissible_check(&m, &good).unwrap(), Ok(()));
        assert_eq!(good.degree(&m).unwrap(), rat(1, 2));
        assert_eq!(good.path(&m).unwrap(), vec![2, 1]);
        let bad = Monomial {
            s: 1,
            entries: vec![(Sign::Plus, rat(1, 2))],
        };
        assert_eq!(admissible_check(&m, &bad).unwrap(), Err(Violation::R2));
        let off = Monomial {
            s: 1,
            entries: vec![(Sign::Plus, int(-1))],
        };
        assert_eq!(
            admissible_check(&m, &off).unwrap(),
            Err(Violation::R0 { i: 1 })
        );
        let out = Monomial {
            s: 1,
            entries: vec![(Sign::Minus, rat(-1, 2))],
        };
        assert_eq!(
            admissible_check(&m, &out).unwrap(),
            Err(Violation::R1 { i: 0 })
        );
    }

    #[test]
    fn small_enumerations() {
        let m = ising();
        let v = enumerate_admissible(&m, 1, 1, &int(0)).unwrap();
        assert_eq!(v, vec![Monomial::void(1)]);
        let v = enumerate_admissible(&m, 2, 1, &rat(1, 2)).unwrap();
        assert_eq!(
            v,
            vec![Monomial {
                s: 1,
                entries: vec![(Sign::Plus, rat(-1, 2))]
            }]
        );
        assert!(enumerate_admissible(&m, 2, 1, &rat(1, 4))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn enumerated_monomials_are_admissible_and_distinct() {
        let m = ModelParams::new(4, 5).unwrap();
        for (r, s) in m.labels() {
            let cut = m.delta(r, s).unwrap() + int(5);
            let v = enumerate_admissible(&m, r, s, &cut).unwrap();
            let set: std::collections::HashSet<_> = v.iter().cloned().collect();
            assert_eq!(set.len(), v.len());
            for mono in &v {
                assert_eq!(admissible_check(&m, mono).unwrap(), Ok(()));
                assert!(mono.degree(&m).unwrap() <= cut);
            }
        }
    }
}
