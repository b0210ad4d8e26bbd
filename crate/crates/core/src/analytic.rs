//! Closed-form entanglement of the reduced scenario states.
//!
//! Keeping `p` out-modes and `q` in-modes gives
//! `E = 2 max(0, alpha^p beta^q cos(theta) sin(theta))`. Everything here is
//! evaluated in log space first, so tiny values come out as subnormals or
//! zero instead of poisoning sums with underflowed intermediates.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::hawking::{positive_finite, BogoliubovPair};

/// `ln E` for the `(p, q)` split; `-inf` when the entanglement vanishes.
pub fn ln_e_general(theta: f64, pair: &BogoliubovPair, p: u32, q: u32) -> f64 {
    let (c, s) = (theta.cos(), theta.sin());
    if !(c > 0.0 && s > 0.0) {
        return f64::NEG_INFINITY;
    }
    match pair.log_power(p, q) {
        Ok(lp) => LN_2 + c.ln() + s.ln() + lp,
        Err(_) => f64::NEG_INFINITY,
    }
}

pub fn e_general(theta: f64, pair: &BogoliubovPair, p: u32, q: u32) -> f64 {
    ln_e_general(theta, pair, p, q).exp()
}

/// All `n` horizon modes observed from outside.
pub fn e_accessible(theta: f64, pair: &BogoliubovPair, n: u32) -> f64 {
    e_general(theta, pair, n, 0)
}

/// All `n` horizon modes replaced by their interior partners.
pub fn e_inaccessible(theta: f64, pair: &BogoliubovPair, n: u32) -> f64 {
    e_general(theta, pair, 0, n)
}

/// `dE/dtheta` of the accessible entanglement, `2 alpha^n cos(2 theta)`.
pub fn e_accessible_dtheta(theta: f64, pair: &BogoliubovPair, n: u32) -> f64 {
    2.0 * pair.power(n, 0) * (2.0 * theta).cos()
}

/// Value at `D = M`: `sin(2 theta) 2^{-n/2}`, whatever the split.
pub fn extreme_limit(theta: f64, n: u32) -> f64 {
    (2.0 * theta).sin() * 0.5f64.powf(f64::from(n) / 2.0)
}

/// Dilaton maximising `alpha^p beta^q` in the interior of `(0, M)`, where
/// `exp(-8 pi (M - D) omega) = q / p`.
///
/// `None` means the maximum sits on the boundary: at `D = M` when `p <= q`,
/// at `D = 0` when `q = 0` or the interior solution would be negative.
pub fn peak_dilaton(mass: f64, omega: f64, p: u32, q: u32) -> Result<Option<f64>> {
    if p == 0 {
        return Err(Error::InvalidParams("peak search needs p >= 1".into()));
    }
    if !positive_finite(mass) || !positive_finite(omega) {
        return Err(Error::InvalidParams(format!(
            "mass {mass} and omega {omega} must be positive"
        )));
    }
    if q == 0 || p <= q {
        return Ok(None);
    }
    let d = mass - (f64::from(p) / f64::from(q)).ln() / (8.0 * PI * omega);
    Ok((d > 0.0).then_some(d))
}

/// `ln C(n, k)`.
fn ln_binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    let mut acc = 0.0;
    for i in 0..k {
        acc += (f64::from(n - i)).ln() - (f64::from(i + 1)).ln();
    }
    acc
}

fn log_sum_exp(terms: impl IntoIterator<Item = f64>) -> f64 {
    let terms: Vec<f64> = terms.into_iter().collect();
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

/// `sum_p C(n, p) E^2(p, n - p)` against `sin^2(2 theta)`.
pub fn sum_rule_quadratic(theta: f64, pair: &BogoliubovPair, n: u32) -> (f64, f64) {
    let lhs =
        log_sum_exp((0..=n).map(|p| ln_binomial(n, p) + 2.0 * ln_e_general(theta, pair, p, n - p)))
            .exp();
    let sin2 = (2.0 * theta).sin();
    (lhs, sin2 * sin2)
}

/// `sum_k C(n/2, k) E(n - 2k, 2k)` against `sin(2 theta)`, for even `n`.
pub fn sum_rule_linear(theta: f64, pair: &BogoliubovPair, n: u32) -> Result<(f64, f64)> {
    if n % 2 == 1 {
        return Err(Error::OddN(n as usize));
    }
    let half = n / 2;
    let lhs = log_sum_exp(
        (0..=half).map(|k| ln_binomial(half, k) + ln_e_general(theta, pair, n - 2 * k, 2 * k)),
    )
    .exp();
    Ok((lhs, (2.0 * theta).sin()))
}

/// `alpha^{2p} beta^{2q} sin^2(2 theta)`, what remains of `E^2` once the
/// (vanishing) pairwise terms are subtracted.
pub fn monogamy_residual(theta: f64, pair: &BogoliubovPair, p: u32, q: u32) -> f64 {
    let sin2 = (2.0 * theta).sin();
    match pair.log_power(2 * p, 2 * q) {
        Ok(lp) => lp.exp() * sin2 * sin2,
        Err(_) => 0.0,
    }
}
