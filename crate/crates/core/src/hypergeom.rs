//! Gauss hypergeometric series and the identities built from them: the
//! bilinear relations between `y^±` and their duals, the second-order ODE for
//! matrix elements, the coefficient series `f^±`, `g^±` and the vacuum
//! polynomials `P_{r,s}`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::minimal_model::ModelParams;
use crate::qseries::{binom_series, PowerSeries, RampedSeries};
use crate::rational::{self, int, Rational};
use crate::report::CheckReport;
use crate::Sign;

fn non_positive_integer(x: &Rational) -> bool {
    x.is_integer() && !x.is_positive()
}

/// Parameters `(a, b, c)` of `F(a, b, c; z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypParams {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl HypParams {
    /// Rejects `c` in `Z_{<=0}` unless an upper parameter terminates the
    /// series strictly before the pole.
    pub fn new(a: Rational, b: Rational, c: Rational) -> Result<Self> {
        if non_positive_integer(&c) {
            let ends_first = |u: &Rational| non_positive_integer(u) && *u > c;
            if !ends_first(&a) && !ends_first(&b) {
                let term = rational::as_i64(&(int(1) - &c)).unwrap_or(0) as usize;
                return Err(Error::Pole {
                    c: Box::new(c),
                    term,
                });
            }
        }
        Ok(Self { a, b, c })
    }
}

/// Coefficients `(a)_n (b)_n / ((c)_n n!)` through `z^order`.
pub fn hyp_f(h: &HypParams, order: usize) -> Result<PowerSeries> {
    let mut coeffs = vec![Rational::zero(); order + 1];
    coeffs[0] = Rational::one();
    for n in 1..=order {
        let k = int(n as i64 - 1);
        let num = &coeffs[n - 1] * (&h.a + &k) * (&h.b + &k);
        if num.is_zero() {
            break;
        }
        let den = (&h.c + &k) * int(n as i64);
        if den.is_zero() {
            return Err(Error::Pole {
                c: Box::new(h.c.clone()),
                term: n,
            });
        }
        coeffs[n] = num / den;
    }
    Ok(PowerSeries::new(coeffs))
}

fn hyp(a: Rational, b: Rational, c: Rational, order: usize) -> Result<PowerSeries> {
    hyp_f(&HypParams::new(a, b, c)?, order)
}

/// `F(a, -n, 1 - a - n; z)` as a coefficient list of length `n + 1`.
fn reciprocal_poly(a: &Rational, n: u32) -> Result<Vec<Rational>> {
    let n_r = int(n as i64);
    let f = hyp(a.clone(), -&n_r, int(1) - a - &n_r, n as usize)?;
    Ok(f.into_coeffs())
}

/// True iff `F(a, -n, 1-a-n; z)` has degree exactly `n` with palindromic
/// coefficients.
pub fn reciprocal_check(a: &Rational, n: u32) -> Result<bool> {
    let c = reciprocal_poly(a, n)?;
    let n = n as usize;
    Ok(!c[n].is_zero() && (0..=n).all(|j| c[j] == c[n - j]))
}

/// `K_{a,n} = prod_{j<n} (a + j) / (2a + j)`.
pub fn k_const(a: &Rational, n: u32) -> Result<Rational> {
    let mut k = Rational::one();
    for j in 0..n as i64 {
        let den = int(2) * a + int(j);
        if den.is_zero() {
            return Err(Error::Precondition(format!(
                "2a + {j} vanishes at a = {}",
                rational::to_string(a)
            )));
        }
        k *= (a + int(j)) / den;
    }
    Ok(k)
}

/// A Kac label `(r, s)` of a model, with the derived exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorParams {
    pub model: ModelParams,
    pub r: i64,
    pub s: i64,
}

impl SectorParams {
    pub fn new(model: &ModelParams, r: i64, s: i64) -> Result<Self> {
        model.check_labels(r, s)?;
        Ok(Self {
            model: model.clone(),
            r,
            s,
        })
    }

    /// Same labels with `t` replaced (for negative controls).
    pub fn with_t(&self, t: Rational) -> Self {
        Self {
            model: self.model.with_t(t),
            ..self.clone()
        }
    }

    pub fn t(&self) -> &Rational {
        &self.model.t
    }

    /// `rho = r t - s`.
    pub fn rho(&self) -> Rational {
        self.t() * int(self.r) - int(self.s)
    }

    /// `lambda_± = t/4 ± rho/2`.
    pub fn lambda(&self, sign: Sign) -> Rational {
        self.t() / int(4) + self.rho() * int(sign.value()) / int(2)
    }

    /// `mu = 1 - 3t/2`.
    pub fn mu(&self) -> Rational {
        int(1) - int(3) * self.t() / int(2)
    }

    /// `nu = t/2`.
    pub fn nu(&self) -> Rational {
        self.t() / int(2)
    }

    /// `2 <= r <= p - 2`: both neighbours `r ± 1` are in the Kac table.
    pub fn is_middle(&self) -> bool {
        self.r >= 2 && self.r <= self.model.p - 2
    }

    pub(crate) fn require_middle(&self) -> Result<()> {
        if !self.is_middle() {
            return Err(Error::Precondition(format!(
                "r = {} is not a middle label (need 2 <= r <= {})",
                self.r,
                self.model.p - 2
            )));
        }
        Ok(())
    }

    fn report(&self, check: &str, order: usize) -> CheckReport {
        CheckReport::new(check, order as u64)
            .param("p", self.model.p)
            .param("pp", self.model.pp)
            .param("r", self.r)
            .param("s", self.s)
            .param_rat("t", self.t())
    }
}

/// `y^σ = z^{lambda_σ} (1-z)^mu F(1-t, 1-t+σρ, 1+σρ; z)`.
pub fn y_series(sector: &SectorParams, sign: Sign, order: usize) -> Result<RampedSeries> {
    let t = sector.t();
    let sr = sector.rho() * int(sign.value());
    let body = hyp(int(1) - t, int(1) - t + &sr, int(1) + &sr, order)?;
    Ok(RampedSeries::new(sector.lambda(sign), sector.mu(), body))
}

/// The dual series `y̌^σ = z^{-lambda_σ} (1-z)^{-mu} F(...)` and its
/// normalization `c_σ = (2 lambda_{-σ} + mu) / (2 (lambda_{-σ} - lambda_σ))`.
pub fn ycheck_series(
    sector: &SectorParams,
    sign: Sign,
    order: usize,
) -> Result<(RampedSeries, Rational)> {
    let lp = sector.lambda(Sign::Plus);
    let lm = sector.lambda(Sign::Minus);
    if lp == lm {
        return Err(Error::Precondition("rho = 0: exponents collide".into()));
    }
    let mu = sector.mu();
    let ls = sector.lambda(sign);
    let lo = sector.lambda(sign.flip());
    let body = hyp(
        -&lp - &lm - &mu,
        int(-2) * &ls - &mu,
        int(1) - int(sign.value()) * (&lp - &lm),
        order,
    )?;
    let c = (int(2) * &lo + &mu) / (int(2) * (&lo - &ls));
    Ok((RampedSeries::new(-ls, -mu, body), c))
}

/// Both bilinear relations, with `y^σ` built from `sector` and the duals
/// (with their normalizations) from `dual`. Normally the two agree.
///
/// The relations are identities in `(t, rho)`, so any label whose series are
/// defined is accepted, not only middle ones.
pub fn bilinear_check_split(
    sector: &SectorParams,
    dual: &SectorParams,
    order: usize,
) -> CheckReport {
    let mut rep = sector.report("bilinear", order);
    let run = |rep: &mut CheckReport| -> Result<()> {
        let mut first = PowerSeries::zero(order);
        let mut second: Option<RampedSeries> = None;
        let mut csum = Rational::zero();
        for sign in Sign::BOTH {
            let y = y_series(sector, sign, order)?;
            let (yc, c) = ycheck_series(dual, sign, order)?;
            csum += &c;
            first = first.add(&y.body.mul(&yc.body).scale(&c));
            let term = y.mul(&yc.theta()).scale(&c);
            second = Some(match second {
                None => term,
                Some(acc) => acc.add(&term)?,
            });
        }
        rep.compare_rat("c_+ + c_-", &csum, &Rational::one());
        rep.compare_power("bilin1 ", &first, &PowerSeries::one(order));
        let second = second.expect("two signs");
        let body = second.body_with_ramps(&Rational::zero(), &int(-1))?;
        let half_mu = sector.mu() / int(2);
        let rhs = PowerSeries::from_poly(&[half_mu.clone(), half_mu], order);
        rep.compare_power("bilin2 ", &body, &rhs);
        Ok(())
    };
    let r = run(&mut rep);
    rep.absorb(r);
    rep
}

pub fn bilinear_check(sector: &SectorParams, order: usize) -> CheckReport {
    bilinear_check_split(sector, sector, order)
}

/// Which matrix element `<r'| phi phi |r>` the ODE is checked on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OdeTarget {
    /// `r' = r ± 2`.
    Shift(Sign),
    /// `r' = r`, through the intermediate label `r ± 1`.
    Same(Sign),
}

impl OdeTarget {
    pub const ALL: [OdeTarget; 4] = [
        OdeTarget::Shift(Sign::Plus),
        OdeTarget::Shift(Sign::Minus),
        OdeTarget::Same(Sign::Plus),
        OdeTarget::Same(Sign::Minus),
    ];

    pub fn target_r(self, r: i64) -> i64 {
        match self {
            OdeTarget::Shift(s) => r + 2 * s.value(),
            OdeTarget::Same(_) => r,
        }
    }

    fn label(self) -> String {
        match self {
            OdeTarget::Shift(s) => format!("r{}2", s.symbol()),
            OdeTarget::Same(s) => format!("r via r{}1", s.symbol()),
        }
    }

    /// Whether all labels involved lie in the Kac table.
    pub fn exists(self, sector: &SectorParams) -> bool {
        let p = sector.model.p;
        let inr = |x: i64| (1..p).contains(&x);
        match self {
            OdeTarget::Shift(s) => inr(sector.r + 2 * s.value()),
            OdeTarget::Same(s) => inr(sector.r + s.value()),
        }
    }
}

/// The matrix element `H(1, z)` for the given target.
pub fn ode_solution(
    sector: &SectorParams,
    target: OdeTarget,
    order: usize,
) -> Result<RampedSeries> {
    if !target.exists(sector) {
        return Err(Error::Precondition(format!(
            "no primary field for target {} at r = {}",
            target.label(),
            sector.r
        )));
    }
    let t = sector.t();
    match target {
        OdeTarget::Shift(s) => {
            let a = (int(1) - t) / int(2) + sector.rho() * int(s.value()) / int(2);
            Ok(RampedSeries::new(a, t / int(2), PowerSeries::one(order)))
        }
        OdeTarget::Same(s) => {
            let y = y_series(sector, s, order)?;
            Ok(y.mul_ramps(&-sector.model.delta21(), &Rational::zero()))
        }
    }
}

/// Left side of the ODE multiplied by `t z^2 (z-1)^2`, with `theta = z d/dz`:
/// `(z-1)^2 th(th-1)H + t(z-1)(2z-1) thH - t D_rs (z-1)^2 H - t D_21 z^2 H
///  + t(2 D_21 + D_rs - D_r's) z(z-1) H`.
pub fn ode_residual(
    h: &RampedSeries,
    model: &ModelParams,
    r: i64,
    r_target: i64,
    s: i64,
) -> Result<RampedSeries> {
    let t = &model.t;
    let d21 = model.delta21();
    let drs = model.delta_ext(r, s);
    let dts = model.delta_ext(r_target, s);
    let th = h.theta();
    let thth = th.theta().sub(&th)?;
    let sq = [int(1), int(-2), int(1)];
    let terms = [
        thth.mul_poly(&sq),
        th.mul_poly(&[int(1), int(-3), int(2)]).scale(t),
        h.mul_poly(&sq).scale(&(-(t * &drs))),
        h.mul_poly(&[int(0), int(0), int(1)]).scale(&(-(t * &d21))),
        h.mul_poly(&[int(0), int(-1), int(1)])
            .scale(&(t * (int(2) * &d21 + &drs - &dts))),
    ];
    let mut acc = terms[0].clone();
    for x in &terms[1..] {
        acc = acc.add(x)?;
    }
    Ok(acc)
}

/// Solution from `sector`, ODE coefficients from `coeffs`.
pub fn virasoro_ode_check_split(
    sector: &SectorParams,
    coeffs: &ModelParams,
    target: OdeTarget,
    order: usize,
) -> CheckReport {
    let mut rep = sector
        .report("virasoro_ode", order)
        .param("target", target.label());
    let run = || -> Result<RampedSeries> {
        let h = ode_solution(sector, target, order)?;
        ode_residual(&h, coeffs, sector.r, target.target_r(sector.r), sector.s)
    };
    if let Some(res) = rep.absorb(run()) {
        let body = res.body.truncate(order);
        rep.compare_power("", &body, &PowerSeries::zero(order));
    }
    rep
}

pub fn virasoro_ode_check(sector: &SectorParams, target: OdeTarget, order: usize) -> CheckReport {
    virasoro_ode_check_split(sector, &sector.model, target, order)
}

/// `f^± = (1-z)^{1-t/2} F(2-t, 2-t∓ρ, 1∓ρ; z)` and
/// `g^± = (z d/dz - lambda_±)((1-z) f^±)`.
pub fn fg_series(
    sector: &SectorParams,
    sign: Sign,
    order: usize,
) -> Result<(PowerSeries, PowerSeries)> {
    fg_series_at(sector.t(), &sector.rho(), sign, order)
}

/// [`fg_series`] at an arbitrary `(t, rho)`, not necessarily from a Kac label.
pub fn fg_series_at(
    t: &Rational,
    rho: &Rational,
    sign: Sign,
    order: usize,
) -> Result<(PowerSeries, PowerSeries)> {
    let sr = rho * int(sign.value());
    let f = binom_series(&(int(1) - t / int(2)), order).mul(&hyp(
        int(2) - t,
        int(2) - t - &sr,
        int(1) - &sr,
        order,
    )?);
    let lambda = t / int(4) + &sr / int(2);
    let one_minus_z_f = f.mul_poly(&[int(1), int(-1)]);
    let g = one_minus_z_f.theta().sub(&one_minus_z_f.scale(&lambda));
    Ok((f, g))
}

/// The second printed form `(1-z)^{-2+3t/2} F(-1+t, -1+t∓ρ, 1∓ρ; z)` of `f^±`.
pub fn f_series_alt(sector: &SectorParams, sign: Sign, order: usize) -> Result<PowerSeries> {
    let t = sector.t();
    let sr = sector.rho() * int(sign.value());
    Ok(
        binom_series(&(int(-2) + int(3) * t / int(2)), order).mul(&hyp(
            int(-1) + t,
            int(-1) + t - &sr,
            int(1) - &sr,
            order,
        )?),
    )
}

/// `P_{r,s}(1, z)`: `F(1-t, 1-s, 1-s+t; z) / F(..; 1)` for `r = 1`, the same
/// with `s -> p' - s` for `r = p - 1`, and `1` otherwise.
pub fn p_poly(sector: &SectorParams) -> Result<Vec<Rational>> {
    let p = sector.model.p;
    let s = if sector.r == 1 {
        sector.s
    } else if sector.r == p - 1 {
        sector.model.pp - sector.s
    } else {
        return Ok(vec![Rational::one()]);
    };
    let a = int(1) - sector.t();
    let n = (s - 1) as u32;
    let raw = reciprocal_poly(&a, n)?;
    let at_one = raw.iter().fold(Rational::zero(), |acc, c| acc + c);
    if at_one.is_zero() {
        return Err(Error::Precondition("F(..;1) vanishes".into()));
    }
    let poly: Vec<Rational> = raw.iter().map(|c| c / &at_one).collect();
    // P(z, z) = z^{deg} P(1, 1) must be z^{deg} exactly.
    let total = poly.iter().fold(Rational::zero(), |acc, c| acc + c);
    if !total.is_one() || !reciprocal_check(&a, n)? {
        return Err(Error::Precondition(format!(
            "vacuum polynomial for (r, s) = ({}, {}) is not a normalized reciprocal polynomial",
            sector.r, sector.s
        )));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn sector(p: i64, pp: i64, r: i64, s: i64) -> SectorParams {
        SectorParams::new(&ModelParams::new(p, pp).unwrap(), r, s).unwrap()
    }

    #[test]
    fn gauss_series_examples() {
        let f = hyp_f(&HypParams::new(int(1), int(1), int(2)).unwrap(), 3).unwrap();
        assert_eq!(f.coeffs(), &[int(1), rat(1, 2), rat(1, 3), rat(1, 4)]);
        let f = hyp_f(&HypParams::new(rat(3, 7), int(0), rat(1, 2)).unwrap(), 4).unwrap();
        assert_eq!(f, PowerSeries::one(4));
        let f = hyp_f(&HypParams::new(int(1), int(1), int(1)).unwrap(), 4).unwrap();
        assert_eq!(f, PowerSeries::new(vec![int(1); 5]));
    }

    #[test]
    fn pole_detection() {
        assert!(matches!(
            HypParams::new(int(1), int(1), int(-2)),
            Err(Error::Pole { .. })
        ));
        assert!(HypParams::new(int(1), int(-1), int(-2)).is_ok());
        assert!(HypParams::new(int(1), int(-2), int(-2)).is_err());
    }

    #[test]
    fn reciprocal_and_k() {
        assert!(reciprocal_check(&rat(2, 7), 0).unwrap());
        let t = rat(4, 3);
        assert!(reciprocal_check(&(int(1) - &t), 2).unwrap());
        // n = 1: F = 1 + z * (a)(-1)/(1-a-1) = 1 + z
        assert_eq!(
            reciprocal_poly(&rat(5, 9), 1).unwrap(),
            vec![int(1), int(1)]
        );
        assert_eq!(k_const(&rat(3, 5), 0).unwrap(), int(1));
        assert_eq!(k_const(&rat(3, 5), 1).unwrap(), rat(1, 2));
        assert_eq!(k_const(&(int(1) - &t), 2).unwrap(), int(1));
        assert!(k_const(&int(0), 1).is_err());
    }

    #[test]
    fn y_ramps_at_ising_sector() {
        let sec = sector(3, 4, 2, 1);
        assert_eq!(sec.rho(), rat(5, 3));
        let yp = y_series(&sec, Sign::Plus, 5).unwrap();
        assert_eq!(yp.ramp_z, rat(7, 6));
        assert_eq!(yp.body.coeffs()[0], int(1));
        let ym = y_series(&sec, Sign::Minus, 5).unwrap();
        assert_eq!(ym.ramp_z, rat(-1, 2));
        let (yc, c) = ycheck_series(&sec, Sign::Plus, 5).unwrap();
        assert_eq!(c, rat(3, 5));
        assert_eq!(yc.body.coeffs()[0], int(1));
    }

    #[test]
    fn sector_constraints() {
        let sec = sector(5, 7, 3, 2);
        let lp = sec.lambda(Sign::Plus);
        let lm = sec.lambda(Sign::Minus);
        assert_eq!(&lp + &lm + sec.mu(), int(1) - sec.t());
        assert_eq!(int(2) * (lp + lm) + sec.mu() + sec.nu(), int(1));
    }

    #[test]
    fn bilinear_relations_hold() {
        let rep = bilinear_check(&sector(3, 5, 2, 1), 60);
        assert!(rep.passed(), "{rep:?}");
        let rep = bilinear_check(&sector(5, 7, 3, 4), 30);
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn bilinear_fails_when_dual_uses_shifted_t() {
        let sec = sector(4, 5, 2, 1);
        let off = sec.with_t(sec.t() + rat(1, 1000));
        assert!(!bilinear_check_split(&sec, &off, 20).passed());
    }

    #[test]
    fn ode_holds_for_all_targets() {
        let model = ModelParams::new(5, 7).unwrap();
        for (r, s) in model.labels() {
            let sec = SectorParams::new(&model, r, s).unwrap();
            for target in OdeTarget::ALL {
                if target.exists(&sec) {
                    let rep = virasoro_ode_check(&sec, target, 25);
                    assert!(rep.passed(), "{rep:?}");
                }
            }
        }
    }

    #[test]
    fn ode_fails_with_perturbed_coefficients() {
        let sec = sector(3, 4, 2, 1);
        let off = sec.model.with_t(sec.t() + rat(1, 1000));
        for target in [OdeTarget::Same(Sign::Minus), OdeTarget::Shift(Sign::Minus)] {
            assert!(!virasoro_ode_check_split(&sec, &off, target, 10).passed());
        }
    }

    #[test]
    fn f_two_forms_and_leading_coefficients() {
        let sec = sector(4, 5, 2, 1);
        for sign in Sign::BOTH {
            let (f, g) = fg_series(&sec, sign, 12).unwrap();
            assert_eq!(f, f_series_alt(&sec, sign, 12).unwrap());
            assert_eq!(f.coeffs()[0], int(1));
            assert_eq!(g.coeffs()[0], -sec.lambda(sign));
        }
    }

    #[test]
    fn vacuum_polynomials() {
        assert_eq!(p_poly(&sector(3, 5, 1, 1)).unwrap(), vec![int(1)]);
        assert_eq!(p_poly(&sector(5, 7, 2, 3)).unwrap(), vec![int(1)]);
        let p = p_poly(&sector(3, 5, 1, 3)).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p[0], p[2]);
        let m = p_poly(&sector(3, 5, 2, 1)).unwrap();
        assert_eq!(m.len(), 4);
    }
}
