//! Series in `q` (truncated, fractional exponents) and `z` (finite Laurent
//! window).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::frac::FracSeries;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// `sum_{z_min <= j <= z_max} z^j c_j(q)`.
///
/// Every slice shares the lattice and q-truncation order of the series. A
/// product whose support leaves the window is an error rather than a silent
/// cut.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSeries {
    lattice: u64,
    z_min: i64,
    z_max: i64,
    q_trunc: Option<Rational>,
    slices: BTreeMap<i64, FracSeries>,
}

impl BiSeries {
    pub fn zero(lattice: u64, z_min: i64, z_max: i64, q_trunc: Option<Rational>) -> Self {
        Self {
            lattice,
            z_min,
            z_max,
            q_trunc,
            slices: BTreeMap::new(),
        }
    }

    pub fn window(&self) -> (i64, i64) {
        (self.z_min, self.z_max)
    }

    pub fn lattice(&self) -> u64 {
        self.lattice
    }

    pub fn q_trunc(&self) -> Option<&Rational> {
        self.q_trunc.as_ref()
    }

    fn blank(&self) -> FracSeries {
        let z = FracSeries::zero(self.lattice);
        match &self.q_trunc {
            Some(t) => z.truncate(t).expect("trunc on lattice"),
            None => z,
        }
    }

    fn check_window(&self, z: i64, s: &FracSeries) -> Result<()> {
        if (z < self.z_min || z > self.z_max) && !s.is_zero() {
            return Err(Error::WindowClipped {
                min: self.z_min,
                max: self.z_max,
                exp: z,
            });
        }
        Ok(())
    }

    /// Adds `s(q) z^j` into the series.
    pub fn add_slice(&mut self, z: i64, s: &FracSeries) -> Result<()> {
        let s = match &self.q_trunc {
            Some(t) => s.truncate(t)?,
            None => s.clone(),
        };
        self.check_window(z, &s)?;
        let cur = self.slices.remove(&z).unwrap_or_else(|| self.blank());
        let sum = cur.add(&s)?;
        if sum.lattice() != self.lattice {
            return Err(Error::LatticeOverflow {
                requested: sum.lattice(),
                bound: self.lattice,
            });
        }
        if !sum.is_zero() {
            self.slices.insert(z, sum);
        }
        Ok(())
    }

    pub fn add_term(&mut self, z: i64, exp: &Rational, coeff: Rational) -> Result<()> {
        let m = FracSeries::monomial(self.lattice, exp, coeff)?;
        self.add_slice(z, &m)
    }

    /// The coefficient series of `z^j` (zero outside the window).
    pub fn slice(&self, z: i64) -> FracSeries {
        self.slices.get(&z).cloned().unwrap_or_else(|| self.blank())
    }

    pub fn slices(&self) -> impl Iterator<Item = (i64, &FracSeries)> {
        self.slices.iter().map(|(&z, s)| (z, s))
    }

    /// Coefficient of `q^e z^j`, `None` beyond the q-truncation.
    pub fn coeff(&self, z: i64, e: &Rational) -> Option<Rational> {
        self.slice(z).coeff(e)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        if let Some(t) = &other.q_trunc {
            if out.q_trunc.as_ref().is_none_or(|u| t < u) {
                out.q_trunc = Some(t.clone());
                for s in out.slices.values_mut() {
                    *s = s.truncate(t)?;
                }
            }
        }
        for (&z, s) in &other.slices {
            out.add_slice(z, s)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = self.clone();
        for s in out.slices.values_mut() {
            *s = s.scale(c);
        }
        out.slices.retain(|_, s| !s.is_zero());
        out
    }

    /// Product; the result keeps this series' window and the smaller q-order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let trunc = match (&self.q_trunc, &other.q_trunc) {
            (Some(a), Some(b)) => Some(if a < b { a.clone() } else { b.clone() }),
            (a, b) => a.clone().or_else(|| b.clone()),
        };
        let mut out = Self::zero(self.lattice, self.z_min, self.z_max, trunc);
        for (&za, sa) in &self.slices {
            for (&zb, sb) in &other.slices {
                out.add_slice(za + zb, &sa.mul(sb)?)?;
            }
        }
        Ok(out)
    }

    /// Multiplication by a series in `q` alone.
    pub fn mul_q(&self, f: &FracSeries) -> Result<Self> {
        let mut out = self.clone();
        if let Some(t) = f.trunc_order() {
            if out.q_trunc.as_ref().is_none_or(|u| t < *u) {
                out.q_trunc = Some(t);
            }
        }
        let mut slices = BTreeMap::new();
        for (&z, s) in &self.slices {
            let mut p = s.mul(f)?;
            if let Some(t) = &out.q_trunc {
                p = p.truncate(t)?;
            }
            if !p.is_zero() {
                slices.insert(z, p);
            }
        }
        out.slices = slices;
        Ok(out)
    }

    /// First `(z, exp)` where the two series differ.
    pub fn first_difference(
        &self,
        other: &Self,
    ) -> Result<Option<(i64, Rational, Rational, Rational)>> {
        let zs: std::collections::BTreeSet<i64> = self
            .slices
            .keys()
            .chain(other.slices.keys())
            .copied()
            .collect();
        for z in zs {
            if let Some((e, a, b)) = self.slice(z).first_difference(&other.slice(z))? {
                return Ok(Some((z, e, a, b)));
            }
        }
        Ok(None)
    }

    pub fn to_json(&self) -> BiSeriesJson {
        let mut terms = Vec::new();
        for (&z, s) in &self.slices {
            for (e, c) in s.iter() {
                terms.push(BiTermJson {
                    z,
                    exp: rational::to_string(&e),
                    coeff: rational::to_string(c),
                });
            }
        }
        BiSeriesJson {
            lattice: self.lattice,
            z_window: [self.z_min, self.z_max],
            terms,
            trunc: self.q_trunc.as_ref().map(rational::to_string),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiTermJson {
    pub z: i64,
    pub exp: String,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiSeriesJson {
    pub lattice: u64,
    pub z_window: [i64; 2],
    pub terms: Vec<BiTermJson>,
    pub trunc: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn product_leaving_window_is_reported() {
        let mut a = BiSeries::zero(1, -1, 1, Some(int(3)));
        a.add_term(1, &int(0), int(1)).unwrap();
        assert!(matches!(a.mul(&a), Err(Error::WindowClipped { .. })));
    }

    #[test]
    fn product_inside_window() {
        let mut a = BiSeries::zero(1, -2, 2, Some(int(3)));
        a.add_term(1, &int(0), int(1)).unwrap();
        a.add_term(-1, &int(1), int(1)).unwrap();
        let sq = a.mul(&a).unwrap();
        assert_eq!(sq.coeff(2, &int(0)), Some(int(1)));
        assert_eq!(sq.coeff(0, &int(1)), Some(int(2)));
        assert_eq!(sq.coeff(-2, &int(2)), Some(int(1)));
    }
}
