//! Dense truncated power series in `z` with rational coefficients.
//!
//! A [`PowerSeries`] of length `n` knows the coefficients of `z^0 .. z^{n-1}`;
//! everything from `z^n` on is unknown. Binary operations keep the shorter
//! known window.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PowerSeries {
    coeffs: Vec<Rational>,
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(rational::to_string).collect();
        write!(f, "[{}] + O(z^{})", parts.join(", "), self.coeffs.len())
    }
}

impl PowerSeries {
    /// Series known through `z^{len-1}` from the given coefficients.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        Self { coeffs }
    }

    /// A polynomial, padded with zeros (or cut) so that it is known through `z^order`.
    pub fn from_poly(poly: &[Rational], order: usize) -> Self {
        let mut coeffs: Vec<Rational> = poly.iter().take(order + 1).cloned().collect();
        coeffs.resize(order + 1, Rational::zero());
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// Number of known coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest exponent with a known coefficient (`len - 1`).
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `z^n`; zero for negative `n`, `None` beyond the known window.
    pub fn coeff(&self, n: i64) -> Option<Rational> {
        if n < 0 {
            Some(Rational::zero())
        } else {
            self.coeffs.get(n as usize).cloned()
        }
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self {
            coeffs: self.coeffs.iter().take(order + 1).cloned().collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.len().min(other.len());
        Self {
            coeffs: (0..n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.len().min(other.len());
        Self {
            coeffs: (0..n).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.len().min(other.len());
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self { coeffs: out }
    }

    /// Product with an exact polynomial; the known window is unchanged.
    pub fn mul_poly(&self, poly: &[Rational]) -> Self {
        let n = self.len();
        let mut out = vec![Rational::zero(); n];
        for (i, a) in poly.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in self.coeffs.iter().take(n - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    /// Multiplication by `z^k`; the known window grows by `k`.
    pub fn shift(&self, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// `z d/dz`.
    pub fn theta(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| c * rational::int(n as i64))
                .collect(),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let a0 = self.coeffs.first().ok_or(Error::NotInvertible)?;
        if a0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let inv0 = a0.recip();
        let n = self.len();
        let mut out: Vec<Rational> = Vec::with_capacity(n);
        out.push(inv0.clone());
        for k in 1..n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &out[k - j];
                }
            }
            out.push(-acc * &inv0);
        }
        Ok(Self { coeffs: out })
    }

    /// Value at `z = 1` of the known coefficients (meaningful for polynomials).
    pub fn sum(&self) -> Rational {
        self.coeffs.iter().fold(Rational::zero(), |acc, c| acc + c)
    }

    /// Index of the last nonzero coefficient, if any.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// First exponent where the two series differ within the common window.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, Rational, Rational)> {
        let n = self.len().min(other.len());
        (0..n)
            .find(|&i| self.coeffs[i] != other.coeffs[i])
            .map(|i| (i, self.coeffs[i].clone(), other.coeffs[i].clone()))
    }
}

/// Taylor coefficients of `(1 - z)^gamma` through `z^order`.
///
/// `c_0 = 1`, `c_n = c_{n-1} (n - 1 - gamma) / n`, so `c_1 = -gamma`.
pub fn binom_series(gamma: &Rational, order: usize) -> PowerSeries {
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(Rational::one());
    for n in 1..=order {
        let n_r = rational::int(n as i64);
        let next = &coeffs[n - 1] * (&n_r - rational::one() - gamma) / &n_r;
        coeffs.push(next);
    }
    PowerSeries::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn geometric_inverse() {
        let one_minus_z = PowerSeries::from_poly(&ints(&[1, -1]), 6);
        let geo = PowerSeries::new(ints(&[1; 7]));
        assert_eq!(one_minus_z.mul(&geo), PowerSeries::one(6));
        assert_eq!(one_minus_z.inverse().unwrap(), geo);
    }

    #[test]
    fn binom_series_small_cases() {
        assert_eq!(binom_series(&int(1), 3).coeffs(), &ints(&[1, -1, 0, 0])[..]);
        assert_eq!(binom_series(&int(-1), 3).coeffs(), &ints(&[1, 1, 1, 1])[..]);
        // gamma = -t/2 at t = 4/3
        let c = binom_series(&rat(-2, 3), 2);
        assert_eq!(c.coeffs()[1], rat(2, 3));
        assert_eq!(c.coeffs()[2], rat(5, 9));
    }

    #[test]
    fn zero_constant_term_is_not_invertible() {
        let s = PowerSeries::from_poly(&ints(&[0, 1]), 3);
        assert_eq!(s.inverse(), Err(Error::NotInvertible));
    }

    #[test]
    fn theta_and_shift() {
        let s = PowerSeries::new(ints(&[1, 2, 3]));
        assert_eq!(s.theta().coeffs(), &ints(&[0, 2, 6])[..]);
        assert_eq!(s.shift(2).coeffs(), &ints(&[0, 0, 1, 2, 3])[..]);
    }
}
