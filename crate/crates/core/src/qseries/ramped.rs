//! Series of the form `z^alpha (1 - z)^beta S(z)`.

use num_traits::{Signed, Zero};

use super::power::{binom_series, PowerSeries};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// `z^ramp_z * (1 - z)^ramp_1mz * body(z)` with a truncated power-series body.
///
/// Ramps only ever change by integers once a value is built, so two series
/// can be added exactly when their ramps differ by integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RampedSeries {
    pub ramp_z: Rational,
    pub ramp_1mz: Rational,
    pub body: PowerSeries,
}

impl RampedSeries {
    pub fn new(ramp_z: Rational, ramp_1mz: Rational, body: PowerSeries) -> Self {
        Self {
            ramp_z,
            ramp_1mz,
            body,
        }
    }

    /// A bare power series (both ramps zero).
    pub fn plain(body: PowerSeries) -> Self {
        Self::new(Rational::zero(), Rational::zero(), body)
    }

    pub fn order(&self) -> usize {
        self.body.order()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            ramp_z: &self.ramp_z + &other.ramp_z,
            ramp_1mz: &self.ramp_1mz + &other.ramp_1mz,
            body: self.body.mul(&other.body),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            body: self.body.scale(c),
            ..self.clone()
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            body: self.body.neg(),
            ..self.clone()
        }
    }

    /// Multiplication by a polynomial in `z`, kept inside the body.
    pub fn mul_poly(&self, poly: &[Rational]) -> Self {
        Self {
            body: self.body.mul_poly(poly),
            ..self.clone()
        }
    }

    /// Multiplication by `z^a (1 - z)^b` for arbitrary rationals.
    pub fn mul_ramps(&self, a: &Rational, b: &Rational) -> Self {
        Self {
            ramp_z: &self.ramp_z + a,
            ramp_1mz: &self.ramp_1mz + b,
            body: self.body.clone(),
        }
    }

    /// `z d/dz`, using
    /// `z d/dz [z^a (1-z)^b S] = z^a (1-z)^(b-1) [(1-z)(a S + z S') - b z S]`.
    /// When `b = 0` the `(1-z)` factor is not split off.
    pub fn theta(&self) -> Self {
        let a = &self.ramp_z;
        let b = &self.ramp_1mz;
        let inner = self.body.scale(a).add(&self.body.theta());
        if b.is_zero() {
            return Self {
                body: inner,
                ..self.clone()
            };
        }
        let one = rational::one();
        let body = inner
            .mul_poly(&[one.clone(), -one])
            .sub(&self.body.shift(1).truncate(self.body.order()).scale(b));
        Self {
            ramp_z: a.clone(),
            ramp_1mz: b - rational::one(),
            body,
        }
    }

    /// Rewrites the series with `(1-z)`-ramp `beta`; the difference must be
    /// an integer and is folded into the body.
    pub fn with_ramp_1mz(&self, beta: &Rational) -> Result<Self> {
        let diff = &self.ramp_1mz - beta;
        if !diff.is_integer() {
            return Err(Error::RampMismatch(
                Box::new(self.ramp_1mz.clone()),
                Box::new(beta.clone()),
            ));
        }
        if diff.is_zero() {
            return Ok(self.clone());
        }
        let factor = binom_series(&diff, self.body.order());
        let body = if diff.is_positive() {
            self.body.mul_poly(factor.coeffs())
        } else {
            self.body.mul(&factor)
        };
        Ok(Self {
            ramp_z: self.ramp_z.clone(),
            ramp_1mz: beta.clone(),
            body,
        })
    }

    /// Rewrites the series with `z`-ramp `alpha`; `ramp_z - alpha` must be a
    /// non-negative integer.
    pub fn with_ramp_z(&self, alpha: &Rational) -> Result<Self> {
        let diff = &self.ramp_z - alpha;
        match rational::as_i64(&diff) {
            Some(k) if k >= 0 => Ok(Self {
                ramp_z: alpha.clone(),
                ramp_1mz: self.ramp_1mz.clone(),
                body: self.body.shift(k as usize),
            }),
            _ => Err(Error::RampMismatch(
                Box::new(self.ramp_z.clone()),
                Box::new(alpha.clone()),
            )),
        }
    }

    /// The body once the series is written with the given ramps.
    pub fn body_with_ramps(&self, alpha: &Rational, beta: &Rational) -> Result<PowerSeries> {
        Ok(self.with_ramp_z(alpha)?.with_ramp_1mz(beta)?.body)
    }

    /// Brings both series to common ramps (the smaller of each pair).
    pub fn align(&self, other: &Self) -> Result<(Self, Self)> {
        let alpha = if self.ramp_z <= other.ramp_z {
            &self.ramp_z
        } else {
            &other.ramp_z
        };
        let beta = if self.ramp_1mz <= other.ramp_1mz {
            &self.ramp_1mz
        } else {
            &other.ramp_1mz
        };
        let a = self.with_ramp_z(alpha)?.with_ramp_1mz(beta)?;
        let b = other.with_ramp_z(alpha)?.with_ramp_1mz(beta)?;
        Ok((a, b))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.align(other)?;
        Ok(Self {
            body: a.body.add(&b.body),
            ..a
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// True when the known part of the body vanishes.
    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn theta_of_pure_ramp() {
        // z d/dz [z^a (1-z)^b] = z^a (1-z)^(b-1) (a - (a+b) z)
        let s = RampedSeries::new(rat(1, 3), rat(2, 5), PowerSeries::one(6));
        let d = s.theta();
        assert_eq!(d.ramp_1mz, rat(-3, 5));
        let expect = PowerSeries::from_poly(&[rat(1, 3), -(rat(1, 3) + rat(2, 5))], 6);
        assert_eq!(d.body, expect);
    }

    #[test]
    fn folding_integer_ramp_differences() {
        let s = RampedSeries::new(int(0), int(1), PowerSeries::one(5));
        let t = s.with_ramp_1mz(&int(0)).unwrap();
        assert_eq!(t.body, PowerSeries::from_poly(&[int(1), int(-1)], 5));
        let back = t.with_ramp_1mz(&int(1)).unwrap();
        assert_eq!(back.body, PowerSeries::one(5));
        assert!(s.with_ramp_1mz(&rat(1, 2)).is_err());
    }

    #[test]
    fn add_aligns_z_ramps() {
        let a = RampedSeries::new(rat(1, 2), int(0), PowerSeries::one(4));
        let b = RampedSeries::new(rat(3, 2), int(0), PowerSeries::one(4));
        let c = a.add(&b).unwrap();
        assert_eq!(c.ramp_z, rat(1, 2));
        assert_eq!(c.body.coeffs()[..2], [int(1), int(1)]);
    }
}
