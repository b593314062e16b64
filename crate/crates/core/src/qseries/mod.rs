//! Truncated series types: sparse q-series with fractional exponents, dense
//! z-power series with ramp prefactors, and bivariate (q, z) series.

mod bi;
mod frac;
mod power;
mod qfunc;
mod ramped;

pub use bi::{BiSeries, BiSeriesJson, BiTermJson};
pub use frac::{FracSeries, SeriesJson, TermJson, LATTICE_BOUND};
pub use power::{binom_series, PowerSeries};
pub use qfunc::{
    gauss_binom, gauss_binom_int, inv_q_pochhammer, inv_q_pochhammer_inf, q_pochhammer,
    q_pochhammer_poly, PochLen,
};
pub use ramped::RampedSeries;
