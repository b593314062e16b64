//! Level-k `sl2` data: two-point correlators of the spin-1/2 intertwiners,
//! their KZ equation and exchange relations, admissible monomials and the
//! character identity checked against a Weyl–Kac oracle.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, int, rat, Rational};
use crate::Sign;

mod correlators;
mod paths;

pub use correlators::{
    ab_product, ab_product_check, ab_product_check_split, correlator, exchange_constants,
    exchange_det_check, kz_check, kz_check_split, kz_residual, pinned_orientation,
    vacuum_exchange_check, vacuum_exchange_check_split, Correlator, ExchangeConstants, Orientation,
    Sl2Sector,
};
pub use paths::{
    count_sl2_by_degree, enumerate_sl2_admissible, epsilon_sum, length_bound, restricted_kostka,
    sl2_char_paths, sl2_char_weylkac, sl2_lattice_form, Sl2Monomial, Sl2MonomialJson,
};

/// Level `k` and the value of `kappa` formulas are evaluated at.
///
/// `kappa` is `1/(k+2)` unless deliberately perturbed with
/// [`LevelParams::with_kappa`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelParams {
    pub k: i64,
    pub kappa: Rational,
}

impl LevelParams {
    pub fn new(k: i64) -> Result<Self> {
        if k < 0 {
            return Err(Error::InvalidParams(format!(
                "level k = {k} must be non-negative"
            )));
        }
        Ok(Self {
            k,
            kappa: rat(1, k + 2),
        })
    }

    pub fn with_kappa(&self, kappa: Rational) -> Self {
        Self {
            kappa,
            ..self.clone()
        }
    }

    /// Exponent lattice `4 N D` for `kappa = N/D` (so `4(k+2)` unless
    /// perturbed) of all conformal dimensions.
    pub fn lattice(&self) -> u64 {
        let n = self
            .kappa
            .numer()
            .magnitude()
            .to_u64()
            .expect("numerator fits u64");
        let d = self
            .kappa
            .denom()
            .magnitude()
            .to_u64()
            .expect("denominator fits u64");
        4 * n * d
    }

    pub fn check_label(&self, lambda: i64) -> Result<()> {
        if !(0..=self.k).contains(&lambda) {
            return Err(Error::InvalidParams(format!(
                "weight label {lambda} outside 0..={}",
                self.k
            )));
        }
        Ok(())
    }

    /// `Delta_lambda = lambda (lambda + 2) kappa / 4`.
    pub fn delta(&self, lambda: i64) -> Rational {
        int(lambda * (lambda + 2)) * &self.kappa / int(4)
    }

    /// Dimension of the spin-1/2 field, `3 kappa / 4`.
    pub fn delta1(&self) -> Rational {
        self.delta(1)
    }
}

/// The local weight `w(l0, l1, l2)` of a path through `l1`.
pub fn sl2_weights(level: &LevelParams, triple: (i64, i64, i64)) -> Result<Rational> {
    let (a, b, c) = triple;
    for x in [a, b, c] {
        level.check_label(x)?;
    }
    if (a - b).abs() != 1 || (c - b).abs() != 1 {
        return Err(Error::InvalidParams(format!(
            "({a}, {b}, {c}) is not a path of unit steps"
        )));
    }
    let kappa = &level.kappa;
    let lam = int(a);
    Ok(if a != c {
        kappa / int(2)
    } else if b == a - 1 {
        (lam + rat(1, 2)) * kappa
    } else {
        int(1) - (lam + rat(3, 2)) * kappa
    })
}

/// `h(+, -) = 1`, zero otherwise.
pub fn h_pair(e1: Sign, e2: Sign) -> i64 {
    i64::from(e1 == Sign::Plus && e2 == Sign::Minus)
}

/// `w(l0,l1,l2) - Delta_{l0} + 2 Delta_{l1} - Delta_{l2}`, which is 1 at a
/// peak and 0 elsewhere.
pub fn reduced_weight(level: &LevelParams, triple: (i64, i64, i64)) -> Result<Rational> {
    let (a, b, c) = triple;
    Ok(sl2_weights(level, triple)? - level.delta(a) + int(2) * level.delta(b) - level.delta(c))
}

/// Serializable summary of a level, used in reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelJson {
    pub k: i64,
    pub kappa: String,
}

impl From<&LevelParams> for LevelJson {
    fn from(l: &LevelParams) -> Self {
        Self {
            k: l.k,
            kappa: rational::to_string(&l.kappa),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_at_small_levels() {
        let k2 = LevelParams::new(2).unwrap();
        assert_eq!(sl2_weights(&k2, (1, 0, 1)).unwrap(), rat(3, 8));
        assert_eq!(sl2_weights(&k2, (2, 1, 0)).unwrap(), rat(1, 8));
        let k1 = LevelParams::new(1).unwrap();
        assert_eq!(sl2_weights(&k1, (0, 1, 0)).unwrap(), rat(1, 2));
        assert!(sl2_weights(&k1, (0, 2, 0)).is_err());
        assert!(sl2_weights(&k1, (1, 1, 0)).is_err());
    }

    #[test]
    fn h_is_one_only_for_plus_minus() {
        assert_eq!(h_pair(Sign::Plus, Sign::Minus), 1);
        assert_eq!(h_pair(Sign::Minus, Sign::Plus), 0);
        assert_eq!(h_pair(Sign::Plus, Sign::Plus), 0);
        assert_eq!(h_pair(Sign::Minus, Sign::Minus), 0);
    }

    #[test]
    fn reduced_weight_marks_peaks() {
        for k in 1..=6 {
            let level = LevelParams::new(k).unwrap();
            for b in 0..=k {
                for a in [b - 1, b + 1] {
                    for c in [b - 1, b + 1] {
                        if !(0..=k).contains(&a) || !(0..=k).contains(&c) {
                            continue;
                        }
                        let w = reduced_weight(&level, (a, b, c)).unwrap();
                        let peak = a == b - 1 && c == b - 1;
                        assert_eq!(w, int(i64::from(peak)), "k={k} ({a},{b},{c})");
                    }
                }
            }
        }
    }

    #[test]
    fn dimensions() {
        let level = LevelParams::new(1).unwrap();
        assert_eq!(level.delta1(), rat(1, 4));
        assert_eq!(level.lattice(), 12);
        assert!(LevelParams::new(-1).is_err());
    }
}
