//! Admissible monomials, level-restricted Kostka polynomials and the two
//! character formulas (path sum and Weyl–Kac quotient).

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{h_pair, reduced_weight, sl2_weights, LevelParams};
use crate::error::{Error, Result};
use crate::qseries::{
    gauss_binom_int, inv_q_pochhammer, inv_q_pochhammer_inf, BiSeries, FracSeries,
};
use crate::rational::{self, int, Rational};
use crate::Sign;

/// `phi^{sigma_1}_{eps_1, n_1} ... phi^{sigma_L}_{eps_L, n_L} |0>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Monomial {
    pub entries: Vec<(Sign, Sign, Rational)>,
}

impl Sl2Monomial {
    /// `lambda_0, ..., lambda_L` with `lambda_L = 0`.
    pub fn path(&self) -> Vec<i64> {
        let mut lams = vec![0i64; self.entries.len() + 1];
        for (i, (sigma, _, _)) in self.entries.iter().enumerate().rev() {
            lams[i] = lams[i + 1] + sigma.value();
        }
        lams
    }

    /// `-sum n_i`.
    pub fn degree(&self) -> Rational {
        -self
            .entries
            .iter()
            .fold(Rational::zero(), |acc, (_, _, n)| acc + n)
    }

    /// `sum eps_i`.
    pub fn z_weight(&self) -> i64 {
        self.entries.iter().map(|(_, e, _)| e.value()).sum()
    }

    pub fn to_json(&self) -> Sl2MonomialJson {
        Sl2MonomialJson {
            entries: self
                .entries
                .iter()
                .map(|(s, e, n)| {
                    (
                        s.symbol().to_string(),
                        e.symbol().to_string(),
                        rational::to_string(n),
                    )
                })
                .collect(),
            path: self.path(),
            degree: rational::to_string(&self.degree()),
            z_weight: self.z_weight(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sl2MonomialJson {
    pub entries: Vec<(String, String, String)>,
    pub path: Vec<i64>,
    pub degree: String,
    pub z_weight: i64,
}

/// Largest `L` whose paths can still have normalized degree `<= budget`.
///
/// Every ascending run of a path ending at 0 stops at a peak, there are at
/// least `ceil(U/k)` of them for `U = (L - mu)/2` up-steps, and peaks at
/// distinct positions cost at least `P(P+1)/2`.
pub fn length_bound(level: &LevelParams, mu: i64, budget: i64) -> usize {
    if level.k == 0 || budget < 0 {
        return mu.max(0) as usize;
    }
    let mut l = mu;
    loop {
        let up = (l + 2 - mu) / 2;
        let peaks = (up + level.k - 1) / level.k;
        if peaks * (peaks + 1) / 2 > budget {
            return l as usize;
        }
        l += 2;
    }
}

/// Partitions of at most `budget` into parts in `1..=max_part`, as
/// multiplicity vectors.
fn bounded_partitions(max_part: usize, budget: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; max_part];
    fn go(part: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if part == 0 {
            out.push(cur.clone());
            return;
        }
        let p = part as i64;
        let mut m = 0;
        while m * p <= left {
            cur[part - 1] = m;
            go(part - 1, left - m * p, cur, out);
            m += 1;
        }
        cur[part - 1] = 0;
    }
    go(max_part, budget, &mut cur, &mut out);
    out
}

/// Paths `mu = lambda_0, ..., lambda_L = 0` in `[0, k]` with their
/// normalized cost `sum i w~_i`, pruned at `budget`.
fn paths(level: &LevelParams, mu: i64, len: usize, budget: i64) -> Result<Vec<(Vec<i64>, i64)>> {
    let k = level.k;
    let mut out = Vec::new();
    let mut cur = vec![mu];
    fn go(
        k: i64,
        len: usize,
        budget: i64,
        cost: i64,
        cur: &mut Vec<i64>,
        out: &mut Vec<(Vec<i64>, i64)>,
    ) {
        let i = cur.len() - 1;
        let here = cur[i];
        if i == len {
            if here == 0 {
                out.push((cur.clone(), cost));
            }
            return;
        }
        for next in [here - 1, here + 1] {
            if !(0..=k).contains(&next) || next > (len - i - 1) as i64 {
                continue;
            }
            // the weight at position i is fixed once lambda_{i+1} is chosen
            let peak = i >= 1 && cur[i - 1] == here - 1 && next == here - 1;
            let c = cost + if peak { i as i64 } else { 0 };
            if c > budget {
                continue;
            }
            cur.push(next);
            go(k, len, budget, c, cur, out);
            cur.pop();
        }
    }
    level.check_label(mu)?;
    go(k, len, budget, 0, &mut cur, &mut out);
    Ok(out)
}

/// Sign sequences of length `len` with cost `sum i h(eps_i, eps_{i+1})` at
/// most `budget`.
fn eps_sequences(len: usize, budget: i64, h: fn(Sign, Sign) -> i64) -> Vec<(Vec<Sign>, i64)> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn go(
        len: usize,
        budget: i64,
        cost: i64,
        h: fn(Sign, Sign) -> i64,
        cur: &mut Vec<Sign>,
        out: &mut Vec<(Vec<Sign>, i64)>,
    ) {
        if cur.len() == len {
            out.push((cur.clone(), cost));
            return;
        }
        for e in Sign::BOTH {
            let c = match cur.last() {
                Some(&prev) => cost + cur.len() as i64 * h(prev, e),
                None => cost,
            };
            if c > budget {
                continue;
            }
            cur.push(e);
            go(len, budget, c, h, cur, out);
            cur.pop();
        }
    }
    go(len, budget, 0, h, &mut cur, &mut out);
    out
}

fn enumerate_with(
    level: &LevelParams,
    mu: i64,
    max_qdegree: &Rational,
    h: fn(Sign, Sign) -> i64,
) -> Result<Vec<Sl2Monomial>> {
    level.check_label(mu)?;
    let delta_mu = level.delta(mu);
    let budget = rational::floor(&(max_qdegree - &delta_mu));
    let mut out = Vec::new();
    if mu == 0 && budget >= 0 {
        out.push(Sl2Monomial {
            entries: Vec::new(),
        });
    }
    if budget < 0 {
        return Ok(out);
    }
    let d1 = level.delta1();
    let lmax = length_bound(level, mu, budget);
    for len in 1..=lmax {
        for (lams, path_cost) in paths(level, mu, len, budget)? {
            // minimal gaps n_{i+1} - n_i on this path
            let w: Vec<Rational> = (1..len)
                .map(|i| sl2_weights(level, (lams[i - 1], lams[i], lams[i + 1])))
                .collect::<Result<_>>()?;
            let sigmas: Vec<Sign> = (1..=len)
                .map(|i| Sign::from_step(lams[i - 1] - lams[i]))
                .collect();
            for (eps, eps_cost) in eps_sequences(len, budget - path_cost, h) {
                for slack in bounded_partitions(len, budget - path_cost - eps_cost) {
                    // m_i = -n_i: m_L = Delta_1 + a_L, m_i = m_{i+1} + w_i + h_i + a_i,
                    // where a_i is the number of parts equal to i.
                    let mut m = vec![Rational::zero(); len + 1];
                    m[len] = &d1 + int(slack[len - 1]);
                    for i in (1..len).rev() {
                        m[i] =
                            &m[i + 1] + &w[i - 1] + int(h(eps[i - 1], eps[i])) + int(slack[i - 1]);
                    }
                    let mono = Sl2Monomial {
                        entries: (1..=len)
                            .map(|i| (sigmas[i - 1], eps[i - 1], -m[i].clone()))
                            .collect(),
                    };
                    if mono.degree() <= *max_qdegree {
                        out.push(mono);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// All admissible monomials spanning `V(mu)` with `-sum n_i <= max_qdegree`.
pub fn enumerate_sl2_admissible(
    level: &LevelParams,
    mu: i64,
    max_qdegree: &Rational,
) -> Result<Vec<Sl2Monomial>> {
    enumerate_with(level, mu, max_qdegree, h_pair)
}

fn char_window(level: &LevelParams, q_max: i64) -> i64 {
    2 * level.k + 2 + 2 * q_max
}

/// Bi-graded counts `sum q^{deg - Delta_mu} z^{sum eps}` through `q^{q_max}`.
pub fn count_sl2_by_degree(
    level: &LevelParams,
    mu: i64,
    monomials: &[Sl2Monomial],
    q_max: i64,
) -> Result<BiSeries> {
    let w = char_window(level, q_max);
    let mut out = BiSeries::zero(level.lattice(), -w, w, Some(int(q_max + 1)));
    let delta_mu = level.delta(mu);
    for m in monomials {
        out.add_term(m.z_weight(), &(m.degree() - &delta_mu), rational::one())?;
    }
    Ok(out)
}

/// `K^{(k)}_{mu,(1^L)}(q) = sum over paths of q^{sum i w~_i}`, exact.
pub fn restricted_kostka(level: &LevelParams, mu: i64, len: usize) -> Result<FracSeries> {
    level.check_label(mu)?;
    let lattice = level.lattice();
    if len == 0 {
        return Ok(if mu == 0 {
            FracSeries::one(lattice)
        } else {
            FracSeries::zero(lattice)
        });
    }
    let k = level.k;
    // state (lambda_{i-1}, lambda_i) after i steps
    let mut states: BTreeMap<(i64, i64), FracSeries> = BTreeMap::new();
    for next in [mu - 1, mu + 1] {
        if (0..=k).contains(&next) {
            states.insert((mu, next), FracSeries::one(lattice));
        }
    }
    for i in 1..len {
        let mut fresh: BTreeMap<(i64, i64), FracSeries> = BTreeMap::new();
        for (&(prev, here), poly) in &states {
            for next in [here - 1, here + 1] {
                if !(0..=k).contains(&next) {
                    continue;
                }
                let w = reduced_weight(level, (prev, here, next))?;
                let term = poly.shift(&(w * int(i as i64)))?;
                let slot = fresh
                    .entry((here, next))
                    .or_insert_with(|| FracSeries::zero(lattice));
                *slot = slot.add(&term)?;
            }
        }
        states = fresh;
    }
    states
        .into_iter()
        .filter(|((_, end), _)| *end == 0)
        .try_fold(FracSeries::zero(lattice), |acc, (_, p)| acc.add(&p))
}

/// `sum_L K_{mu,(1^L)}(q)/(q)_L sum_l [L; l]_q z^{L-2l}` through `q^{q_max}`.
pub fn sl2_char_paths(level: &LevelParams, mu: i64, q_max: i64) -> Result<BiSeries> {
    level.check_label(mu)?;
    let order = int(q_max + 1);
    let w = char_window(level, q_max);
    let mut out = BiSeries::zero(level.lattice(), -w, w, Some(order.clone()));
    for len in 0..=length_bound(level, mu, q_max) {
        let kostka = restricted_kostka(level, mu, len)?;
        if kostka.is_zero() {
            continue;
        }
        let base = kostka
            .mul(&inv_q_pochhammer(len as i64, &order)?)?
            .truncate(&order)?;
        if base.is_zero() {
            continue;
        }
        let l_i = len as i64;
        for l in 0..=l_i {
            let slice = base.mul(&gauss_binom_int(l_i, l))?;
            out.add_slice(l_i - 2 * l, &slice)?;
        }
    }
    Ok(out)
}

/// `sum_n (q^{(k+2)n^2+(mu+1)n} z^{2(k+2)n+mu} - q^{(k+2)n^2-(mu+1)n} z^{2(k+2)n-mu-2})`
/// through `q^{q_max}`.
fn weylkac_numerator(k: i64, mu: i64, lattice: u64, q_max: i64, w: i64) -> Result<BiSeries> {
    let mut out = BiSeries::zero(lattice, -w, w, Some(int(q_max + 1)));
    let m = k + 2;
    let mut n = 0i64;
    loop {
        let mut any = false;
        for n in if n == 0 { vec![0] } else { vec![n, -n] } {
            let e1 = m * n * n + (mu + 1) * n;
            let e2 = m * n * n - (mu + 1) * n;
            if e1 <= q_max {
                out.add_term(2 * m * n + mu, &int(e1), int(1))?;
                any = true;
            }
            if e2 <= q_max {
                out.add_term(2 * m * n - mu - 2, &int(e2), int(-1))?;
                any = true;
            }
        }
        if !any && n > 0 {
            return Ok(out);
        }
        n += 1;
    }
}

/// `1/prod_{n>=1} (1 - q^n x)` for `x = z^{dz}`, as a bi-series.
fn inv_geometric(lattice: u64, dz: i64, q_max: i64, w: i64, n: i64) -> Result<BiSeries> {
    let mut g = BiSeries::zero(lattice, -w, w, Some(int(q_max + 1)));
    let mut j = 0;
    while j * n <= q_max {
        g.add_term(dz * j, &int(j * n), int(1))?;
        j += 1;
    }
    Ok(g)
}

/// Exact division of every q-slice by `1 - z^{-2}`.
fn divide_one_minus_zinv2(s: &BiSeries) -> Result<BiSeries> {
    let (lo, hi) = s.window();
    let mut by_exp: BTreeMap<Rational, BTreeMap<i64, Rational>> = BTreeMap::new();
    for (z, slice) in s.slices() {
        for (e, c) in slice.iter() {
            by_exp.entry(e).or_default().insert(z, c.clone());
        }
    }
    let mut out = BiSeries::zero(s.lattice(), lo, hi, s.q_trunc().cloned());
    for (e, poly) in by_exp {
        // Q_j = P_j + Q_{j+2}, downward from the top
        let mut running = [Rational::zero(), Rational::zero()];
        for j in (lo..=hi).rev() {
            let par = j.rem_euclid(2) as usize;
            if let Some(c) = poly.get(&j) {
                running[par] += c;
            }
            if !running[par].is_zero() {
                out.add_term(j, &e, running[par].clone())?;
            }
        }
        if running.iter().any(|r| !r.is_zero()) {
            return Err(Error::SelfGate(format!(
                "numerator slice q^{} is not divisible by 1 - z^-2",
                rational::to_string(&e)
            )));
        }
    }
    Ok(out)
}

fn weylkac_raw(k: i64, mu: i64, lattice: u64, q_max: i64) -> Result<BiSeries> {
    let w = 2 * k + 2 + 2 * q_max;
    let order = int(q_max + 1);
    let mut s = weylkac_numerator(k, mu, lattice, q_max, w)?;
    s = s.mul_q(&inv_q_pochhammer_inf(&order)?)?;
    for n in 1..=q_max {
        s = s.mul(&inv_geometric(lattice, 2, q_max, w, n)?)?;
        s = s.mul(&inv_geometric(lattice, -2, q_max, w, n)?)?;
    }
    divide_one_minus_zinv2(&s)
}

/// `(sum_{m in Z + mu/2} q^{m^2 - mu^2/4} z^{2m}) / (q)_inf` through
/// `q^{q_max}`, the level-1 character in lattice form.
pub fn sl2_lattice_form(mu: i64, lattice: u64, q_max: i64, window: i64) -> Result<BiSeries> {
    if !(0..=1).contains(&mu) {
        return Err(Error::InvalidParams(format!(
            "level-1 weight {mu} outside 0..=1"
        )));
    }
    let order = int(q_max + 1);
    let mut s = BiSeries::zero(lattice, -window, window, Some(order.clone()));
    // m = j + mu/2, so m^2 - mu^2/4 = j^2 + j mu and z^{2m} = z^{2j + mu}
    let mut j = 0i64;
    loop {
        let mut any = false;
        for j in if j == 0 { vec![0] } else { vec![j, -j] } {
            let e = j * j + j * mu;
            if e <= q_max {
                s.add_term(2 * j + mu, &int(e), int(1))?;
                any = true;
            }
        }
        if !any && j > 0 {
            break;
        }
        j += 1;
    }
    s.mul_q(&inv_q_pochhammer_inf(&order)?)
}

fn gate_fail(what: String) -> Error {
    Error::SelfGate(what)
}

/// Gates (i) and (iii): finite character at `q^0`, non-negative integers.
fn gate_slices(s: &BiSeries, mu: i64) -> Result<()> {
    let zero = Rational::zero();
    let (lo, hi) = s.window();
    for z in lo..=hi {
        let want = i64::from(z.abs() <= mu && (mu - z) % 2 == 0);
        let got = s.coeff(z, &zero).unwrap_or_else(Rational::zero);
        if got != int(want) {
            return Err(gate_fail(format!(
                "q^0 z^{z} coefficient {} differs from the finite character ({want})",
                rational::to_string(&got)
            )));
        }
    }
    for (z, slice) in s.slices() {
        if !slice.has_nonneg_integer_coeffs() {
            return Err(gate_fail(format!(
                "z^{z} slice has a coefficient outside Z_>=0"
            )));
        }
    }
    Ok(())
}

/// Gate (ii): the level-1 quotients equal their lattice forms.
fn gate_level_one(lattice: u64, q_max: i64) -> Result<()> {
    let w = 4 + 2 * q_max;
    for mu in 0..=1 {
        let wk = weylkac_raw(1, mu, lattice, q_max)?;
        let lat = sl2_lattice_form(mu, lattice, q_max, w)?;
        if let Some((z, e, a, b)) = wk.first_difference(&lat)? {
            return Err(gate_fail(format!(
                "level 1, mu = {mu}: z^{z} q^{} is {} but the lattice form gives {}",
                rational::to_string(&e),
                rational::to_string(&a),
                rational::to_string(&b)
            )));
        }
    }
    Ok(())
}

/// `sum_{d,s} dim V(mu)_{Delta_mu + d, s} q^d z^s` through `q^{q_max}` from
/// the Weyl–Kac quotient. All three self-gates run before the result is
/// returned.
pub fn sl2_char_weylkac(level: &LevelParams, mu: i64, q_max: i64) -> Result<BiSeries> {
    level.check_label(mu)?;
    if q_max < 0 {
        return Err(Error::InvalidParams(format!(
            "q-order {q_max} must be non-negative"
        )));
    }
    gate_level_one(level.lattice(), q_max)?;
    let s = weylkac_raw(level.k, mu, level.lattice(), q_max)?;
    gate_slices(&s, mu)?;
    Ok(s)
}

/// `sum_eps q^{sum i h(eps_i, eps_{i+1})} z^{sum eps}` by brute force.
pub fn epsilon_sum(len: usize) -> BTreeMap<i64, FracSeries> {
    let mut out: BTreeMap<i64, FracSeries> = BTreeMap::new();
    for bits in 0u32..(1 << len) {
        let eps: Vec<Sign> = (0..len)
            .map(|i| {
                if bits >> i & 1 == 1 {
                    Sign::Plus
                } else {
                    Sign::Minus
                }
            })
            .collect();
        let cost: i64 = (1..len)
            .map(|i| i as i64 * h_pair(eps[i - 1], eps[i]))
            .sum();
        let z: i64 = eps.iter().map(|e| e.value()).sum();
        let term = FracSeries::monomial(1, &int(cost), int(1)).expect("integer exponent");
        let slot = out.entry(z).or_insert_with(|| FracSeries::zero(1));
        *slot = slot.add(&term).expect("same lattice");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn h_shift_identity() {
        for len in 0..=10usize {
            let lhs = epsilon_sum(len);
            for l in 0..=len as i64 {
                let z = len as i64 - 2 * l;
                let rhs = gauss_binom_int(len as i64, l);
                assert_eq!(
                    lhs[&z].first_difference(&rhs).unwrap(),
                    None,
                    "L={len} l={l}"
                );
            }
        }
    }

    #[test]
    fn kostka_examples() {
        let level = LevelParams::new(3).unwrap();
        assert_eq!(
            restricted_kostka(&level, 0, 0).unwrap(),
            FracSeries::one(level.lattice())
        );
        assert!(restricted_kostka(&level, 1, 0).unwrap().is_zero());
        let k2 = restricted_kostka(&level, 0, 2).unwrap();
        assert_eq!(
            k2,
            FracSeries::monomial(level.lattice(), &int(1), int(1)).unwrap()
        );
        assert!(restricted_kostka(&level, 0, 3).unwrap().is_zero());
        // K at q = 1 counts restricted paths
        let k = restricted_kostka(&level, 1, 5).unwrap();
        assert!(k.has_nonneg_integer_coeffs());
        assert_eq!(k.eval_at_one(), int(5));
    }

    #[test]
    fn weylkac_examples() {
        let k1 = LevelParams::new(1).unwrap();
        let s = sl2_char_weylkac(&k1, 0, 6).unwrap();
        let one = rational::one();
        for z in [-2, 0, 2] {
            assert_eq!(s.coeff(z, &one), Some(one.clone()), "z^{z}");
        }
        let k2 = LevelParams::new(2).unwrap();
        let s = sl2_char_weylkac(&k2, 2, 4).unwrap();
        let zero = Rational::zero();
        for z in [-2, 0, 2] {
            assert_eq!(s.coeff(z, &zero), Some(one.clone()));
        }
        assert_eq!(s.coeff(4, &zero), Some(zero.clone()));
    }

    #[test]
    fn lattice_form_gate_detects_wrong_numerator() {
        // dropping the sign flip of the second numerator term breaks divisibility
        let lattice = 12;
        let w = 10;
        let mut bad = weylkac_numerator(1, 0, lattice, 3, w).unwrap();
        bad.add_term(-2, &int(0), int(2)).unwrap();
        assert!(divide_one_minus_zinv2(&bad).is_err());
    }

    #[test]
    fn paths_equal_weylkac_small() {
        for k in 1..=3 {
            let level = LevelParams::new(k).unwrap();
            for mu in 0..=k {
                let a = sl2_char_paths(&level, mu, 8).unwrap();
                let b = sl2_char_weylkac(&level, mu, 8).unwrap();
                assert_eq!(a.first_difference(&b).unwrap(), None, "k={k} mu={mu}");
            }
        }
    }

    #[test]
    fn enumeration_matches_character_small() {
        for k in 1..=3 {
            let level = LevelParams::new(k).unwrap();
            for mu in 0..=k {
                let q = 6;
                let monos =
                    enumerate_sl2_admissible(&level, mu, &(level.delta(mu) + int(q))).unwrap();
                let counts = count_sl2_by_degree(&level, mu, &monos, q).unwrap();
                let chi = sl2_char_weylkac(&level, mu, q).unwrap();
                assert_eq!(
                    counts.first_difference(&chi).unwrap(),
                    None,
                    "k={k} mu={mu}"
                );
            }
        }
    }

    #[test]
    fn minimal_monomials() {
        let level = LevelParams::new(1).unwrap();
        let monos = enumerate_sl2_admissible(&level, 0, &int(0)).unwrap();
        assert_eq!(monos, vec![Sl2Monomial { entries: vec![] }]);
        let d = level.delta(1);
        let monos = enumerate_sl2_admissible(&level, 1, &d).unwrap();
        assert_eq!(monos.len(), 2);
        assert!(monos
            .iter()
            .all(|m| m.entries.len() == 1 && m.entries[0].2 == -d.clone()));
        assert_eq!(monos[0].path(), vec![1, 0]);
        assert_eq!(d, rat(1, 4));
    }

    #[test]
    fn relabeling_eps_preserves_counts() {
        fn h_flipped(a: Sign, b: Sign) -> i64 {
            h_pair(a.flip(), b.flip())
        }
        let level = LevelParams::new(2).unwrap();
        for mu in 0..=2 {
            let top = level.delta(mu) + int(5);
            let a = enumerate_with(&level, mu, &top, h_pair).unwrap();
            let b = enumerate_with(&level, mu, &top, h_flipped).unwrap();
            let ca = count_sl2_by_degree(&level, mu, &a, 5).unwrap();
            let cb = count_sl2_by_degree(&level, mu, &b, 5).unwrap();
            let mut mirrored = BiSeries::zero(level.lattice(), -16, 16, Some(int(6)));
            for (z, s) in cb.slices() {
                mirrored.add_slice(-z, s).unwrap();
            }
            assert_eq!(ca.first_difference(&mirrored).unwrap(), None);
            assert_eq!(ca.first_difference(&cb).unwrap(), None);
        }
    }

    #[test]
    fn length_bound_is_generous() {
        let level = LevelParams::new(1).unwrap();
        // the path 0,1,0,1,0,... of length 2P has P peaks
        assert!(length_bound(&level, 0, 6) >= 6);
        assert_eq!(length_bound(&LevelParams::new(0).unwrap(), 0, 10), 0);
    }
}
