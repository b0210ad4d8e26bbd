//! Black-hole parameters and the fermionic Bogoliubov coefficients of the
//! Hawking channel.
//!
//! Every near-horizon Kruskal mode is split into an (out, in) pair with
//! amplitudes `alpha = (exp(-x) + 1)^{-1/2}` and `beta = (exp(x) + 1)^{-1/2}`,
//! where `x = 8 pi (M - D) omega`. Only the product `(M - D) omega` matters.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

const NORM_TOL: f64 = 1e-14;

/// Mass, dilaton and mode frequency of a GHS dilaton black hole, in units with
/// `hbar = G = c = k_B = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlackHoleParams {
    mass: f64,
    dilaton: f64,
    omega: f64,
}

/// False for NaN, infinities and anything not above zero.
pub(crate) fn positive_finite(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

impl BlackHoleParams {
    pub fn new(mass: f64, dilaton: f64, omega: f64) -> Result<Self> {
        if !positive_finite(mass) {
            return Err(Error::InvalidParams(format!(
                "mass must be positive, got {mass}"
            )));
        }
        if !positive_finite(omega) {
            return Err(Error::InvalidParams(format!(
                "omega must be positive, got {omega}"
            )));
        }
        if dilaton.is_nan() || dilaton < 0.0 {
            return Err(Error::InvalidParams(format!(
                "dilaton must be non-negative, got {dilaton}"
            )));
        }
        if dilaton > mass {
            return Err(Error::InvalidParams(format!(
                "dilaton {dilaton} exceeds mass {mass}"
            )));
        }
        Ok(Self {
            mass,
            dilaton,
            omega,
        })
    }

    /// Builds the parameters from the electric charge via `D = Q^2 / 2M`.
    pub fn from_charge(mass: f64, charge: f64, omega: f64) -> Result<Self> {
        if !positive_finite(mass) {
            return Err(Error::InvalidParams(format!(
                "mass must be positive, got {mass}"
            )));
        }
        Self::new(mass, charge * charge / (2.0 * mass), omega)
    }

    /// The extreme hole, `D = M`.
    pub fn extreme(mass: f64, omega: f64) -> Result<Self> {
        Self::new(mass, mass, omega)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn dilaton(&self) -> f64 {
        self.dilaton
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Same hole and frequency with a different dilaton.
    pub fn with_dilaton(&self, dilaton: f64) -> Result<Self> {
        Self::new(self.mass, dilaton, self.omega)
    }

    /// `8 pi (M - D) omega`, the exponent in the Bogoliubov coefficients.
    pub fn exponent(&self) -> f64 {
        8.0 * PI * (self.mass - self.dilaton) * self.omega
    }

    pub fn bogoliubov(&self) -> BogoliubovPair {
        bogoliubov(self)
    }
}

/// Real Bogoliubov amplitudes with `alpha^2 + beta^2 = 1`.
///
/// The logarithms are kept alongside the amplitudes so that high powers can be
/// evaluated without underflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BogoliubovPair {
    alpha: f64,
    beta: f64,
    ln_alpha: f64,
    ln_beta: f64,
}

impl BogoliubovPair {
    /// Validates a pair supplied directly rather than derived from a hole.
    pub fn from_alpha_beta(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidParams(format!(
                "alpha {alpha} outside (0, 1]"
            )));
        }
        if !(0.0..1.0).contains(&beta) {
            return Err(Error::InvalidParams(format!("beta {beta} outside [0, 1)")));
        }
        if (alpha * alpha + beta * beta - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidParams(format!(
                "alpha^2 + beta^2 = {} is not 1",
                alpha * alpha + beta * beta
            )));
        }
        if alpha < beta {
            return Err(Error::InvalidParams(format!("alpha {alpha} < beta {beta}")));
        }
        Ok(Self {
            alpha,
            beta,
            ln_alpha: alpha.ln(),
            ln_beta: beta.ln(),
        })
    }

    /// `alpha = beta = 1/sqrt(2)`, the `D = M` channel.
    pub fn extreme() -> Self {
        let a = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            alpha: a,
            beta: a,
            ln_alpha: -0.5 * std::f64::consts::LN_2,
            ln_beta: -0.5 * std::f64::consts::LN_2,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn ln_alpha(&self) -> f64 {
        self.ln_alpha
    }

    pub fn ln_beta(&self) -> f64 {
        self.ln_beta
    }

    /// `ln(alpha^p beta^q)`.
    pub fn log_power(&self, p: u32, q: u32) -> Result<f64> {
        log_power(self, p, q)
    }

    /// `alpha^p beta^q`, exactly zero when `beta = 0` and `q > 0`.
    pub fn power(&self, p: u32, q: u32) -> f64 {
        match log_power(self, p, q) {
            Ok(l) => l.exp(),
            Err(_) => 0.0,
        }
    }
}

pub fn bogoliubov(params: &BlackHoleParams) -> BogoliubovPair {
    let x = params.exponent();
    let e_neg = (-x).exp();
    // ln(1 + e^x) = x + ln(1 + e^-x) for x >= 0
    let softplus_neg = e_neg.ln_1p();
    BogoliubovPair {
        alpha: 1.0 / (e_neg + 1.0).sqrt(),
        beta: 1.0 / (x.exp() + 1.0).sqrt(),
        ln_alpha: -0.5 * softplus_neg,
        ln_beta: -0.5 * (x + softplus_neg),
    }
}

pub fn log_power(pair: &BogoliubovPair, p: u32, q: u32) -> Result<f64> {
    let mut acc = 0.0;
    if p > 0 {
        acc += f64::from(p) * pair.ln_alpha;
    }
    if q > 0 {
        if pair.beta == 0.0 || pair.ln_beta == f64::NEG_INFINITY {
            return Err(Error::DegenerateCoefficient);
        }
        acc += f64::from(q) * pair.ln_beta;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, LN_2};

    fn hole(m: f64, d: f64, w: f64) -> BlackHoleParams {
        BlackHoleParams::new(m, d, w).unwrap()
    }

    #[test]
    fn extreme_hole_has_equal_coefficients() {
        let pair = bogoliubov(&hole(1.0, 1.0, 1.0));
        assert!((pair.alpha() - FRAC_1_SQRT_2).abs() <= 1e-15);
        assert!((pair.beta() - FRAC_1_SQRT_2).abs() <= 1e-15);
    }

    #[test]
    fn zero_dilaton_values() {
        // mpmath, 50 digits
        let pair = bogoliubov(&hole(1.0, 0.0, 1.0));
        let a2 = 0.999_999_999_987_838_4;
        let b2 = 1.216_155_670_926_140_5e-11;
        assert!((pair.alpha().powi(2) - a2).abs() < 1e-15);
        assert!((pair.beta().powi(2) - b2).abs() / b2 < 1e-12);
    }

    #[test]
    fn half_ratio_dilaton() {
        let d = 1.0 - LN_2 / (8.0 * PI);
        let pair = bogoliubov(&hole(1.0, d, 1.0));
        assert!((pair.alpha().powi(2) - 2.0 / 3.0).abs() < 1e-14);
        assert!((pair.beta().powi(2) - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(matches!(
            BlackHoleParams::new(0.0, 0.0, 1.0),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            BlackHoleParams::new(1.0, 0.0, 0.0),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            BlackHoleParams::new(1.0, -0.1, 1.0),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            BlackHoleParams::new(1.0, 1.1, 1.0),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            BlackHoleParams::new(f64::NAN, 0.0, 1.0),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn charge_constructor() {
        let p = BlackHoleParams::from_charge(2.0, 2.0, 1.0).unwrap();
        assert_eq!(p.dilaton(), 1.0);
        // Q^2 / 2M > M
        assert!(BlackHoleParams::from_charge(1.0, 1.5, 1.0).is_err());
    }

    #[test]
    fn normalization_and_monotonicity_on_grid() {
        let mut prev: Option<BogoliubovPair> = None;
        for i in 0..100 {
            let d = i as f64 / 99.0;
            let pair = bogoliubov(&hole(1.0, d, 1.0));
            assert!((pair.alpha().powi(2) + pair.beta().powi(2) - 1.0).abs() <= 1e-14);
            assert!(pair.alpha() >= pair.beta());
            if let Some(prev) = prev {
                assert!(pair.alpha() < prev.alpha());
                assert!(pair.beta() > prev.beta());
            }
            prev = Some(pair);
        }
    }

    #[test]
    fn depends_only_on_reduced_exponent() {
        let a = bogoliubov(&hole(2.0, 1.0, 1.0));
        let b = bogoliubov(&hole(1.0, 0.0, 1.0));
        assert!((a.alpha() - b.alpha()).abs() <= 1e-15);
        assert!((a.beta() - b.beta()).abs() <= 1e-15);
    }

    #[test]
    fn log_power_examples() {
        let ext = BogoliubovPair::extreme();
        assert!((log_power(&ext, 3, 2).unwrap() - 5.0 * FRAC_1_SQRT_2.ln()).abs() < 1e-14);
        assert_eq!(log_power(&ext, 0, 0).unwrap(), 0.0);

        let pair = bogoliubov(&hole(1.0, 0.0, 1.0));
        // mpmath: 64 ln(beta) at x = 8 pi
        let l = log_power(&pair, 0, 64).unwrap();
        assert!((l - (-804.247_719_319_376_2)).abs() < 1e-10);
        assert_eq!(pair.beta().powi(64), 0.0);
    }

    #[test]
    fn log_power_matches_direct_power() {
        let pair = bogoliubov(&hole(1.0, 0.4, 1.0));
        for p in 0..20 {
            for q in 0..20 {
                let direct = pair.alpha().powi(p) * pair.beta().powi(q);
                let via_log = log_power(&pair, p as u32, q as u32).unwrap().exp();
                assert!((direct - via_log).abs() <= 1e-12 * direct);
            }
        }
    }

    #[test]
    fn degenerate_beta() {
        let pair = BogoliubovPair::from_alpha_beta(1.0, 0.0).unwrap();
        assert_eq!(log_power(&pair, 2, 1), Err(Error::DegenerateCoefficient));
        assert_eq!(log_power(&pair, 2, 0).unwrap(), 0.0);
        assert_eq!(pair.power(0, 3), 0.0);
    }

    #[test]
    fn from_alpha_beta_validation() {
        assert!(BogoliubovPair::from_alpha_beta(0.6, 0.8).is_err());
        assert!(BogoliubovPair::from_alpha_beta(0.8, 0.5).is_err());
        assert!(BogoliubovPair::from_alpha_beta(0.8, 0.6).is_ok());
    }
}
