//! q-Pochhammer symbols and Gaussian binomials (integer exponents, lattice 1).

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::frac::FracSeries;
use crate::error::Result;
use crate::rational::{self, Rational};

/// Length of a q-Pochhammer product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PochLen {
    Finite(u64),
    Infinite,
}

/// Number of integer exponents strictly below `order` that are `>= 0`.
fn dense_len(order: &Rational) -> usize {
    let c = order.ceil().to_integer();
    num_traits::ToPrimitive::to_i64(&c).unwrap_or(0).max(0) as usize
}

fn from_dense(coeffs: Vec<BigInt>, order: Option<&Rational>) -> Result<FracSeries> {
    let rats: Vec<Rational> = coeffs.into_iter().map(Rational::from_integer).collect();
    let s = FracSeries::from_int_coeffs(1, &rats);
    match order {
        Some(t) => s.truncate(t),
        None => Ok(s),
    }
}

/// `(q)_n = prod_{j=1}^n (1 - q^j)` as an exact polynomial.
pub fn q_pochhammer_poly(n: u64) -> FracSeries {
    let deg = (n * (n + 1) / 2) as usize;
    let mut a = vec![BigInt::zero(); deg + 1];
    a[0] = BigInt::one();
    let mut top = 0usize;
    for j in 1..=n as usize {
        for i in (j..=top + j).rev() {
            let t = a[i - j].clone();
            a[i] -= t;
        }
        top += j;
    }
    from_dense(a, None).expect("exact polynomial")
}

/// `(q)_n` truncated at `order`; `n` may be infinite.
pub fn q_pochhammer(n: PochLen, order: &Rational) -> Result<FracSeries> {
    let len = dense_len(order);
    let top = match n {
        PochLen::Finite(n) => (n as usize).min(len),
        PochLen::Infinite => len,
    };
    let mut a = vec![BigInt::zero(); len];
    if len > 0 {
        a[0] = BigInt::one();
    }
    for j in 1..=top {
        for i in (j..len).rev() {
            let t = a[i - j].clone();
            a[i] -= t;
        }
    }
    from_dense(a, Some(order))
}

/// `1/(q)_m` truncated at `order`, with `1/(q)_m = 0` for `m < 0`.
pub fn inv_q_pochhammer(m: i64, order: &Rational) -> Result<FracSeries> {
    let len = dense_len(order);
    if m < 0 {
        return FracSeries::zero(1).truncate(order);
    }
    let mut a = vec![BigInt::zero(); len];
    if len > 0 {
        a[0] = BigInt::one();
    }
    for j in 1..=(m as usize).min(len) {
        for i in j..len {
            let t = a[i - j].clone();
            a[i] += t;
        }
    }
    from_dense(a, Some(order))
}

/// `1/(q)_inf` truncated at `order`.
pub fn inv_q_pochhammer_inf(order: &Rational) -> Result<FracSeries> {
    inv_q_pochhammer(dense_len(order) as i64, order)
}

type Row = Vec<Vec<BigInt>>;

fn pascal_rows() -> &'static Mutex<Vec<Row>> {
    static ROWS: OnceLock<Mutex<Vec<Row>>> = OnceLock::new();
    ROWS.get_or_init(|| Mutex::new(vec![vec![vec![BigInt::one()]]]))
}

/// Coefficients of `[l; m]_q` for integer `0 <= m <= l`.
fn gauss_coeffs(l: usize, m: usize) -> Vec<BigInt> {
    let mut rows = pascal_rows().lock().expect("gauss cache poisoned");
    while rows.len() <= l {
        let prev = rows.last().expect("row 0 present");
        let n = prev.len();
        // [n; j] = [n-1; j-1] + q^j [n-1; j]
        let mut row = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let deg = j * (n - j);
            let mut c = vec![BigInt::zero(); deg + 1];
            if j >= 1 {
                for (i, x) in prev[j - 1].iter().enumerate() {
                    c[i] += x;
                }
            }
            if j < n {
                for (i, x) in prev[j].iter().enumerate() {
                    c[i + j] += x;
                }
            }
            row.push(c);
        }
        rows.push(row);
    }
    rows[l][m].clone()
}

/// The Gaussian binomial `[l; m]_q`, zero unless `m` is an integer in `[0, l]`.
pub fn gauss_binom(l: i64, m: &Rational) -> FracSeries {
    match rational::as_i64(m) {
        Some(m) if l >= 0 && (0..=l).contains(&m) => {
            from_dense(gauss_coeffs(l as usize, m as usize), None).expect("exact polynomial")
        }
        _ => FracSeries::zero(1),
    }
}

/// `[l; m]_q` for integer `m`.
pub fn gauss_binom_int(l: i64, m: i64) -> FracSeries {
    gauss_binom(l, &rational::int(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn small_pochhammers() {
        assert_eq!(
            q_pochhammer_poly(2),
            FracSeries::from_int_coeffs(1, &ints(&[1, -1, -1, 1]))
        );
        assert_eq!(q_pochhammer_poly(0), FracSeries::one(1));
        let t = q_pochhammer(PochLen::Finite(2), &int(10)).unwrap();
        assert_eq!(t.first_difference(&q_pochhammer_poly(2)).unwrap(), None);
    }

    #[test]
    fn partition_numbers_by_brute_force() {
        // count partitions of n by enumerating non-increasing part lists
        fn count(n: i64, max: i64) -> i64 {
            if n == 0 {
                return 1;
            }
            (1..=max.min(n)).map(|k| count(n - k, k)).sum()
        }
        let inv = inv_q_pochhammer_inf(&int(12)).unwrap();
        for n in 0..12 {
            assert_eq!(inv.coeff(&int(n)), Some(int(count(n, n))));
        }
        assert_eq!(inv.coeff(&int(4)), Some(int(5)));
    }

    #[test]
    fn negative_length_inverse_is_zero() {
        let z = inv_q_pochhammer(-1, &int(5)).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.trunc_order(), Some(int(5)));
    }

    #[test]
    fn four_choose_two() {
        assert_eq!(
            gauss_binom_int(4, 2),
            FracSeries::from_int_coeffs(1, &ints(&[1, 1, 2, 1, 1]))
        );
        // oracle: (q)_4 / (q)_2^2 by series division
        let num = q_pochhammer_poly(4);
        let den = q_pochhammer_poly(2).mul(&q_pochhammer_poly(2)).unwrap();
        let quot = num.mul(&den.inverse(&int(9)).unwrap()).unwrap();
        assert_eq!(quot.first_difference(&gauss_binom_int(4, 2)).unwrap(), None);
    }

    #[test]
    fn degenerate_lower_index() {
        assert_eq!(gauss_binom_int(5, 0), FracSeries::one(1));
        assert!(gauss_binom(3, &rat(1, 2)).is_zero());
        assert!(gauss_binom_int(3, 4).is_zero());
        assert!(gauss_binom_int(3, -1).is_zero());
    }

    #[test]
    fn binomial_splits_into_two_shorter_ones() {
        // [L; m] = q^m [L-1; m] + [L-1; m-1] = [L-1; m] + q^(L-m) [L-1; m-1]
        for l in 1..9i64 {
            for m in 0..=l {
                let lhs = gauss_binom_int(l, m);
                let a = gauss_binom_int(l - 1, m).shift(&int(m)).unwrap();
                let a = a.add(&gauss_binom_int(l - 1, m - 1)).unwrap();
                let b = gauss_binom_int(l - 1, m - 1).shift(&int(l - m)).unwrap();
                let b = b.add(&gauss_binom_int(l - 1, m)).unwrap();
                assert_eq!(lhs, a);
                assert_eq!(lhs, b);
            }
        }
    }
}
