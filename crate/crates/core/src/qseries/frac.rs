//! Sparse truncated q-series with exponents on a lattice `(1/D)Z`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Largest exponent denominator a series may carry. Merging two series whose
/// lattices would need a finer common lattice than this is an error.
pub const LATTICE_BOUND: u64 = 1 << 40;

/// A q-series `sum c_e q^e` with every `e` in `(1/D)Z`.
///
/// Exponents are stored as the integers `D * e`. `trunc` is the first
/// exponent (in the same units) whose coefficient is unknown; `None` means the
/// series is an exact finite sum.
#[derive(Clone, PartialEq, Eq)]
pub struct FracSeries {
    lattice: u64,
    terms: BTreeMap<i64, Rational>,
    trunc: Option<i64>,
}

impl fmt::Debug for FracSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (e, c) in self.iter() {
            parts.push(format!(
                "{}*q^{}",
                rational::to_string(c),
                rational::to_string(&e)
            ));
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        match self.trunc_order() {
            Some(t) => write!(
                f,
                "{} + O(q^{})",
                parts.join(" + "),
                rational::to_string(&t)
            ),
            None => write!(f, "{}", parts.join(" + ")),
        }
    }
}

fn check_lattice(d: u64) -> Result<()> {
    if d == 0 || d > LATTICE_BOUND {
        return Err(Error::LatticeOverflow {
            requested: d,
            bound: LATTICE_BOUND,
        });
    }
    Ok(())
}

fn min_trunc(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl FracSeries {
    /// The exact zero series.
    pub fn zero(lattice: u64) -> Self {
        check_lattice(lattice).expect("lattice out of range");
        Self {
            lattice,
            terms: BTreeMap::new(),
            trunc: None,
        }
    }

    pub fn one(lattice: u64) -> Self {
        let mut s = Self::zero(lattice);
        s.terms.insert(0, Rational::one());
        s
    }

    /// `coeff * q^exp`, exact.
    pub fn monomial(lattice: u64, exp: &Rational, coeff: Rational) -> Result<Self> {
        let mut s = Self::zero(lattice);
        let key = s.key(exp)?;
        if !coeff.is_zero() {
            s.terms.insert(key, coeff);
        }
        Ok(s)
    }

    /// Builds a series from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed. `trunc` of `None` marks the result exact.
    pub fn from_terms<I>(lattice: u64, terms: I, trunc: Option<&Rational>) -> Result<Self>
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        check_lattice(lattice)?;
        let mut s = Self {
            lattice,
            terms: BTreeMap::new(),
            trunc: None,
        };
        for (e, c) in terms {
            let k = s.key(&e)?;
            s.add_at(k, c);
        }
        if let Some(t) = trunc {
            s = s.truncate(t)?;
        }
        Ok(s)
    }

    /// Builds an exact series with integer exponents from a coefficient list
    /// (`coeffs[n]` is the coefficient of `q^n`).
    pub fn from_int_coeffs(lattice: u64, coeffs: &[Rational]) -> Self {
        let mut s = Self::zero(lattice);
        for (n, c) in coeffs.iter().enumerate() {
            s.add_at(n as i64 * lattice as i64, c.clone());
        }
        s
    }

    pub fn lattice(&self) -> u64 {
        self.lattice
    }

    /// Exponent `e` as a lattice index, failing if `D * e` is not an integer.
    pub fn key(&self, e: &Rational) -> Result<i64> {
        let scaled = e * rational::int(self.lattice as i64);
        if !scaled.is_integer() {
            return Err(Error::OffLattice {
                exp: Box::new(e.clone()),
                lattice: self.lattice,
            });
        }
        scaled.to_integer().to_i64().ok_or(Error::OffLattice {
            exp: Box::new(e.clone()),
            lattice: self.lattice,
        })
    }

    fn exp_of(&self, key: i64) -> Rational {
        Rational::new(BigInt::from(key), BigInt::from(self.lattice))
    }

    fn add_at(&mut self, key: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        if self.trunc.is_some_and(|t| key >= t) {
            return;
        }
        let slot = self.terms.entry(key).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// First exponent with an unknown coefficient, `None` for exact series.
    pub fn trunc_order(&self) -> Option<Rational> {
        self.trunc.map(|t| self.exp_of(t))
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn min_exp(&self) -> Option<Rational> {
        self.terms.keys().next().map(|&k| self.exp_of(k))
    }

    /// Largest exponent with a nonzero coefficient.
    pub fn max_exp(&self) -> Option<Rational> {
        self.terms.keys().next_back().map(|&k| self.exp_of(k))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Nonzero terms in increasing exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (Rational, &Rational)> + '_ {
        self.terms.iter().map(|(&k, c)| (self.exp_of(k), c))
    }

    /// Coefficient of `q^e`, or `None` when `e` lies at or beyond the
    /// truncation order. Exponents off the lattice have coefficient zero.
    pub fn coeff(&self, e: &Rational) -> Option<Rational> {
        if let Some(t) = self.trunc_order() {
            if *e >= t {
                return None;
            }
        }
        match self.key(e) {
            Ok(k) => Some(self.terms.get(&k).cloned().unwrap_or_else(Rational::zero)),
            Err(_) => Some(Rational::zero()),
        }
    }

    /// The same series on the finer lattice `(1/d)Z`; `d` must be a multiple
    /// of the current lattice.
    pub fn relattice(&self, d: u64) -> Result<Self> {
        check_lattice(d)?;
        if !d.is_multiple_of(self.lattice) {
            return Err(Error::Precondition(format!(
                "lattice {d} is not a multiple of {}",
                self.lattice
            )));
        }
        let f = (d / self.lattice) as i64;
        Ok(Self {
            lattice: d,
            terms: self
                .terms
                .iter()
                .map(|(&k, c)| (k * f, c.clone()))
                .collect(),
            trunc: self.trunc.map(|t| t * f),
        })
    }

    fn common(&self, other: &Self) -> Result<(Self, Self)> {
        if self.lattice == other.lattice {
            return Ok((self.clone(), other.clone()));
        }
        let d = rational::lcm(self.lattice, other.lattice);
        Ok((self.relattice(d)?, other.relattice(d)?))
    }

    /// Drops everything at exponents `>= order` and marks it unknown.
    pub fn truncate(&self, order: &Rational) -> Result<Self> {
        let scaled = order * rational::int(self.lattice as i64);
        // Unknown from the first lattice point at or above `order`.
        let t = scaled
            .ceil()
            .to_integer()
            .to_i64()
            .ok_or_else(|| Error::OffLattice {
                exp: Box::new(order.clone()),
                lattice: self.lattice,
            })?;
        let t = self.trunc.map_or(t, |old| old.min(t));
        Ok(Self {
            lattice: self.lattice,
            terms: self
                .terms
                .range(..t)
                .map(|(&k, c)| (k, c.clone()))
                .collect(),
            trunc: Some(t),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (mut a, b) = self.common(other)?;
        a.trunc = min_trunc(a.trunc, b.trunc);
        if let Some(t) = a.trunc {
            a.terms.retain(|&k, _| k < t);
        }
        for (k, c) in b.terms {
            a.add_at(k, c);
        }
        Ok(a)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            lattice: self.lattice,
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
            trunc: self.trunc,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self {
                lattice: self.lattice,
                terms: BTreeMap::new(),
                trunc: self.trunc,
            };
        }
        Self {
            lattice: self.lattice,
            terms: self.terms.iter().map(|(&k, x)| (k, x * c)).collect(),
            trunc: self.trunc,
        }
    }

    /// Multiplication by `q^e` (the truncation order moves with it).
    pub fn shift(&self, e: &Rational) -> Result<Self> {
        let k = self.key(e)?;
        Ok(Self {
            lattice: self.lattice,
            terms: self
                .terms
                .iter()
                .map(|(&j, c)| (j + k, c.clone()))
                .collect(),
            trunc: self.trunc.map(|t| t + k),
        })
    }

    /// Lower bound on the exponents this series can contain: its valuation,
    /// or its truncation order when no term is known. `None` for exact zero.
    fn valuation_key(&self) -> Option<i64> {
        self.terms.keys().next().copied().or(self.trunc)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.common(other)?;
        let (va, vb) = match (a.valuation_key(), b.valuation_key()) {
            (Some(x), Some(y)) => (x, y),
            _ => return Ok(Self::zero(a.lattice)),
        };
        let trunc = min_trunc(a.trunc.map(|t| t + vb), b.trunc.map(|t| t + va));
        let mut out = Self {
            lattice: a.lattice,
            terms: BTreeMap::new(),
            trunc,
        };
        for (&ka, ca) in &a.terms {
            for (&kb, cb) in &b.terms {
                let k = ka + kb;
                if trunc.is_some_and(|t| k >= t) {
                    break;
                }
                out.add_at(k, ca * cb);
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse through exponent `order` (or the series' own
    /// truncation order if smaller). Requires all exponents to be
    /// non-negative and a nonzero constant term.
    pub fn inverse(&self, order: &Rational) -> Result<Self> {
        let a0 = self.terms.get(&0).ok_or(Error::NotInvertible)?;
        if self.terms.keys().next() != Some(&0) {
            return Err(Error::NotInvertible);
        }
        let bound = self
            .truncate(order)?
            .trunc
            .expect("truncated series has an order");
        let inv0 = a0.recip();
        let rest: Vec<(i64, &Rational)> = self.terms.iter().skip(1).map(|(&k, c)| (k, c)).collect();
        let mut b: Vec<Rational> = vec![Rational::zero(); bound.max(0) as usize];
        if !b.is_empty() {
            b[0] = inv0.clone();
        }
        for n in 1..bound.max(0) {
            let mut acc = Rational::zero();
            for &(k, c) in &rest {
                if k > n {
                    break;
                }
                let prev = &b[(n - k) as usize];
                if !prev.is_zero() {
                    acc += c * prev;
                }
            }
            if !acc.is_zero() {
                b[n as usize] = -acc * &inv0;
            }
        }
        let mut out = Self {
            lattice: self.lattice,
            terms: BTreeMap::new(),
            trunc: Some(bound),
        };
        for (n, c) in b.into_iter().enumerate() {
            out.add_at(n as i64, c);
        }
        Ok(out)
    }

    /// Sum of all known coefficients (the value at `q = 1` of an exact
    /// polynomial).
    pub fn eval_at_one(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, c| acc + c)
    }

    /// True when every known coefficient is a non-negative integer.
    pub fn has_nonneg_integer_coeffs(&self) -> bool {
        self.terms
            .values()
            .all(|c| c.is_integer() && !c.is_negative())
    }

    /// First exponent (below both truncation orders) where the two series
    /// differ, with the two coefficients.
    pub fn first_difference(&self, other: &Self) -> Result<Option<(Rational, Rational, Rational)>> {
        let (a, b) = self.common(other)?;
        let t = min_trunc(a.trunc, b.trunc);
        let keys: std::collections::BTreeSet<i64> =
            a.terms.keys().chain(b.terms.keys()).copied().collect();
        for k in keys {
            if t.is_some_and(|t| k >= t) {
                break;
            }
            let x = a.terms.get(&k).cloned().unwrap_or_else(Rational::zero);
            let y = b.terms.get(&k).cloned().unwrap_or_else(Rational::zero);
            if x != y {
                return Ok(Some((a.exp_of(k), x, y)));
            }
        }
        Ok(None)
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            lattice: self.lattice,
            terms: self
                .iter()
                .map(|(e, c)| TermJson {
                    exp: rational::to_string(&e),
                    coeff: rational::to_string(c),
                })
                .collect(),
            trunc: self.trunc_order().map(|t| rational::to_string(&t)),
        }
    }

    pub fn from_json(j: &SeriesJson) -> Result<Self> {
        let terms = j
            .terms
            .iter()
            .map(|t| Ok((rational::parse(&t.exp)?, rational::parse(&t.coeff)?)))
            .collect::<Result<Vec<_>>>()?;
        let trunc = j.trunc.as_deref().map(rational::parse).transpose()?;
        let s = Self::from_terms(j.lattice, terms, trunc.as_ref())?;
        if let (Some(t), Some(order)) = (trunc, s.trunc_order()) {
            if t != order {
                return Err(Error::OffLattice {
                    exp: Box::new(t),
                    lattice: j.lattice,
                });
            }
        }
        Ok(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: String,
    pub coeff: String,
}

/// Wire form of a [`FracSeries`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub lattice: u64,
    pub terms: Vec<TermJson>,
    pub trunc: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn fractional_exponents_add() {
        let a = FracSeries::monomial(16, &rat(1, 16), int(1)).unwrap();
        let b = a.mul(&a).unwrap();
        assert_eq!(b, FracSeries::monomial(16, &rat(1, 8), int(1)).unwrap());
    }

    #[test]
    fn invert_one_minus_q() {
        let s = FracSeries::from_int_coeffs(1, &[int(1), int(-1)]);
        let inv = s.inverse(&int(5)).unwrap();
        let expect =
            FracSeries::from_terms(1, (0..5).map(|n| (int(n), int(1))), Some(&int(5))).unwrap();
        assert_eq!(inv, expect);
        assert_eq!(inv.trunc_order(), Some(int(5)));
    }

    #[test]
    fn inverse_needs_constant_term() {
        let s = FracSeries::monomial(1, &int(1), int(1)).unwrap();
        assert_eq!(s.inverse(&int(3)), Err(Error::NotInvertible));
    }

    #[test]
    fn product_truncation_uses_valuations() {
        // (q^2 + O(q^5)) * (1 + q + O(q^3)) is known below q^5.
        let a = FracSeries::from_terms(1, [(int(2), int(1))], Some(&int(5))).unwrap();
        let b =
            FracSeries::from_terms(1, [(int(0), int(1)), (int(1), int(1))], Some(&int(3))).unwrap();
        let c = a.mul(&b).unwrap();
        assert_eq!(c.trunc_order(), Some(int(5)));
        assert_eq!(c.coeff(&int(3)), Some(int(1)));
        assert_eq!(c.coeff(&int(5)), None);
    }

    #[test]
    fn lattices_merge_by_lcm() {
        let a = FracSeries::monomial(4, &rat(1, 4), int(1)).unwrap();
        let b = FracSeries::monomial(6, &rat(1, 6), int(1)).unwrap();
        let c = a.mul(&b).unwrap();
        assert_eq!(c.lattice(), 12);
        assert_eq!(c.min_exp(), Some(rat(5, 12)));
    }

    #[test]
    fn lattice_overflow_is_rejected() {
        let a = FracSeries::one(LATTICE_BOUND);
        let b = FracSeries::one(3);
        assert!(matches!(a.add(&b), Err(Error::LatticeOverflow { .. })));
    }

    #[test]
    fn off_lattice_exponent_is_rejected() {
        assert!(matches!(
            FracSeries::monomial(4, &rat(1, 3), int(1)),
            Err(Error::OffLattice { .. })
        ));
    }

    #[test]
    fn json_roundtrip() {
        let s = FracSeries::from_terms(
            8,
            [(rat(1, 8), rat(-3, 2)), (rat(9, 8), int(2))],
            Some(&rat(5, 2)),
        )
        .unwrap();
        let text = serde_json::to_string(&s.to_json()).unwrap();
        assert!(text.contains("\"exp\":\"1/8\""));
        let back: SeriesJson = serde_json::from_str(&text).unwrap();
        assert_eq!(FracSeries::from_json(&back).unwrap(), s);
    }
}
