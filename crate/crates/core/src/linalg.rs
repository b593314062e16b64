//! Exact dense linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::rational::{self, Rational};

/// Determinant by Gaussian elimination with nonzero pivots.
pub fn det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut d = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            a.swap(piv, col);
            d = -d;
        }
        let p = a[col][col].clone();
        d *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            let (top, rest) = a.split_at_mut(r);
            for (x, y) in rest[0][col..n].iter_mut().zip(&top[col][col..n]) {
                *x -= &f * y;
            }
        }
    }
    d
}

/// Coefficients (constant term first) of the unique polynomial of degree
/// `< points.len()` through the given points; the `x` values must differ.
pub fn interpolate(points: &[(Rational, Rational)]) -> Vec<Rational> {
    let n = points.len();
    // Newton divided differences
    let xs: Vec<Rational> = points.iter().map(|(x, _)| x.clone()).collect();
    let mut dd: Vec<Rational> = points.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    // expand sum dd[i] prod_{j<i} (x - x_j) by Horner from the top
    let mut poly = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        // poly = poly * (x - x_i) + dd[i]
        let mut next = vec![Rational::zero(); n];
        for (k, c) in poly.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k + 1 < n {
                next[k + 1] += c;
            }
            next[k] -= c * &xs[i];
        }
        next[0] += &dd[i];
        poly = next;
    }
    poly
}

/// Degree of a coefficient list, `None` for the zero polynomial.
pub fn degree(poly: &[Rational]) -> Option<usize> {
    poly.iter().rposition(|c| !c.is_zero())
}

pub fn eval(poly: &[Rational], x: &Rational) -> Rational {
    poly.iter()
        .rev()
        .fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Matrix entries as strings (for dumps).
pub fn to_strings(m: &[Vec<Rational>]) -> Vec<Vec<String>> {
    m.iter()
        .map(|row| row.iter().map(rational::to_string).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn small_determinants() {
        let m = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        assert_eq!(det(&m), int(5));
        let m = vec![vec![int(0), int(1)], vec![int(1), int(0)]];
        assert_eq!(det(&m), int(-1));
        let m = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert_eq!(det(&m), int(0));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = vec![rat(1, 2), int(-3), int(0), rat(7, 5)];
        let pts: Vec<_> = (0..6).map(|i| (rat(i, 3), eval(&p, &rat(i, 3)))).collect();
        let q = interpolate(&pts);
        assert_eq!(degree(&q), Some(3));
        assert_eq!(&q[..4], &p[..]);
    }
}
