//! X states: density matrices supported on the diagonal and the anti-diagonal.
//!
//! A pair is indexed by its lower-half label `x` (most significant bit clear)
//! and records `a = rho(x, x)`, `b = rho(!x, !x)` and `c = rho(x, !x)`.
//! Only pairs with a nonzero entry are stored.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hawking::BogoliubovPair;
use crate::modes_state::{ScenarioSpec, SparseDensity};

/// Off-diagonal magnitudes at or below this are treated as noise.
pub const DEFAULT_TOL: f64 = 1e-12;

const TRACE_TOL: f64 = 1e-12;
const DIAG_FLOOR: f64 = -1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XPair {
    pub label: u64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct XState {
    m: usize,
    pairs: Vec<XPair>,
}

impl XState {
    /// Validates normalisation and positivity of the pair blocks.
    pub fn new(m: usize, pairs: Vec<XPair>) -> Result<Self> {
        if m == 0 || m > 63 {
            return Err(Error::InvalidDensity(format!(
                "unsupported qubit count {m}"
            )));
        }
        let half = 1u64 << (m - 1);
        let mut by_label = BTreeMap::new();
        for p in pairs {
            if p.label >= half {
                return Err(Error::InvalidDensity(format!(
                    "pair label {:#b} is not in the lower half",
                    p.label
                )));
            }
            if by_label.insert(p.label, p).is_some() {
                return Err(Error::InvalidDensity(format!(
                    "pair {:#b} given twice",
                    p.label
                )));
            }
        }
        let state = Self {
            m,
            pairs: by_label.into_values().collect(),
        };
        state.validate()?;
        Ok(state)
    }

    fn validate(&self) -> Result<()> {
        let total: f64 = self.pairs.iter().map(|p| p.a + p.b).sum();
        if (total - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidDensity(format!("trace {total} is not 1")));
        }
        for p in &self.pairs {
            if p.a < DIAG_FLOOR || p.b < DIAG_FLOOR {
                return Err(Error::InvalidDensity(format!(
                    "negative population at pair {:#b}",
                    p.label
                )));
            }
            let bound = (p.a.max(0.0) * p.b.max(0.0)).sqrt();
            if p.c.abs() > bound + DEFAULT_TOL {
                return Err(Error::InvalidDensity(format!(
                    "|c| = {} exceeds sqrt(ab) = {bound} at pair {:#b}",
                    p.c.abs(),
                    p.label
                )));
            }
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Nonzero pairs, sorted by label.
    pub fn pairs(&self) -> &[XPair] {
        &self.pairs
    }

    /// The pair at `label`, all zeros if not stored.
    pub fn pair(&self, label: u64) -> XPair {
        self.pairs
            .binary_search_by_key(&label, |p| p.label)
            .map(|i| self.pairs[i])
            .unwrap_or(XPair {
                label,
                a: 0.0,
                b: 0.0,
                c: 0.0,
            })
    }
}

/// Reads the X-state parameters out of `rho`, rejecting any coherence above
/// `tol` that does not connect a label with its bit complement.
pub fn extract_xstate(rho: &SparseDensity, tol: f64) -> Result<XState> {
    let m = rho.n_modes();
    if m == 0 || m > 63 {
        return Err(Error::InvalidDensity(format!("unsupported mode count {m}")));
    }
    let trace = rho.trace();
    if (trace - 1.0).abs() > TRACE_TOL {
        return Err(Error::InvalidDensity(format!("trace {trace} is not 1")));
    }
    let asym = rho.asymmetry();
    if asym > TRACE_TOL {
        return Err(Error::InvalidDensity(format!("asymmetry {asym}")));
    }

    let mask = (1u64 << m) - 1;
    let half = 1u64 << (m - 1);
    let mut pairs: BTreeMap<u64, XPair> = BTreeMap::new();
    fn slot(pairs: &mut BTreeMap<u64, XPair>, lower: u64) -> &mut XPair {
        pairs.entry(lower).or_insert(XPair {
            label: lower,
            a: 0.0,
            b: 0.0,
            c: 0.0,
        })
    }
    for ((r, c), v) in rho.entries() {
        if r == c {
            let p = slot(&mut pairs, if r < half { r } else { r ^ mask });
            if r < half {
                p.a = v;
            } else {
                p.b = v;
            }
        } else if v.abs() > tol {
            if r ^ c != mask {
                return Err(Error::NotXState { row: r, col: c });
            }
            if r < half {
                slot(&mut pairs, r).c = v;
            }
        }
    }
    pairs.retain(|_, p| p.a != 0.0 || p.b != 0.0 || p.c != 0.0);
    let state = XState {
        m,
        pairs: pairs.into_values().collect(),
    };
    state.validate()?;
    Ok(state)
}

/// Writes down the reduced scenario state directly from its block structure:
/// the `bar 0` sector is diagonal with `cos^2 theta alpha^{2(n-w)} beta^{2w}`
/// for a kept horizon pattern of weight `w`, the `bar 1` sector holds
/// `sin^2 theta` at `(Out = 1..1, In = 0..0)`, and a single coherence
/// `alpha^p beta^q cos theta sin theta` joins that entry with its complement.
pub fn build_block_matrix(spec: &ScenarioSpec, pair: &BogoliubovPair) -> Result<SparseDensity> {
    let n = spec.n_horizon();
    if n > 24 {
        return Err(Error::ScaleCap { size: n, cap: 24 });
    }
    let (p, q) = (spec.p() as u32, spec.q() as u32);
    let n32 = n as u32;
    let (cos, sin) = (spec.theta().cos(), spec.theta().sin());
    let flat_ones = ((1u64 << spec.n_flat()) - 1) << n;

    // weight -> cos^2 alpha^{2(n-w)} beta^{2w}
    let weights: Vec<f64> = (0..=n32)
        .map(|w| cos * cos * pair.power(2 * (n32 - w), 2 * w))
        .collect();

    let mut entries = Vec::with_capacity((1usize << n) + 3);
    for pattern in 0..(1u64 << n) {
        let v = weights[pattern.count_ones() as usize];
        if v != 0.0 {
            entries.push(((pattern, pattern), v));
        }
    }
    let excited = flat_ones | (((1u64 << p) - 1) << q);
    let ground = (1u64 << q) - 1;
    if sin != 0.0 {
        entries.push(((excited, excited), sin * sin));
    }
    let coherence = pair.power(p, q) * cos * sin;
    if coherence != 0.0 {
        entries.push(((ground, excited), coherence));
        entries.push(((excited, ground), coherence));
    }
    SparseDensity::from_entries(spec.kept_modes(), entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes_state::{scenario_density, Mode};
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6};

    #[test]
    fn diagonal_density_has_no_coherence() {
        let rho = SparseDensity::from_entries(
            vec![Mode::Flat(1), Mode::Flat(2)],
            [((0, 0), 0.1), ((1, 1), 0.2), ((2, 2), 0.3), ((3, 3), 0.4)],
        )
        .unwrap();
        let x = extract_xstate(&rho, DEFAULT_TOL).unwrap();
        assert_eq!(x.pairs().len(), 2);
        assert!(x.pairs().iter().all(|p| p.c == 0.0));
        assert_eq!(x.pair(0).a, 0.1);
        assert_eq!(x.pair(0).b, 0.4);
        assert_eq!(x.pair(1).a, 0.2);
        assert_eq!(x.pair(1).b, 0.3);
    }

    #[test]
    fn scenario_extraction() {
        let spec = ScenarioSpec::new(2, 1, 1, 0, FRAC_PI_4).unwrap();
        let rho = scenario_density(&spec, &BogoliubovPair::extreme()).unwrap();
        let x = extract_xstate(&rho, DEFAULT_TOL).unwrap();
        let nonzero: Vec<_> = x.pairs().iter().filter(|p| p.c != 0.0).collect();
        assert_eq!(nonzero.len(), 1);
        assert_eq!(nonzero[0].label, 0b00);
        assert!((nonzero[0].c - 0.353_553_390_593_273_8).abs() < 1e-15);
        assert!((nonzero[0].a - 0.25).abs() < 1e-15);
        assert!((nonzero[0].b - 0.5).abs() < 1e-15);
    }

    #[test]
    fn non_complement_coherence_rejected() {
        let rho = SparseDensity::from_entries(
            vec![Mode::Flat(1), Mode::Flat(2)],
            [((0, 0), 0.5), ((1, 1), 0.5), ((0, 1), 0.1), ((1, 0), 0.1)],
        )
        .unwrap();
        assert_eq!(
            extract_xstate(&rho, DEFAULT_TOL),
            Err(Error::NotXState { row: 0, col: 1 })
        );
    }

    #[test]
    fn invalid_densities_rejected() {
        let modes = vec![Mode::Flat(1), Mode::Flat(2)];
        let unnormalised =
            SparseDensity::from_entries(modes.clone(), [((0, 0), 0.5), ((3, 3), 0.4)]).unwrap();
        assert!(matches!(
            extract_xstate(&unnormalised, 1e-12),
            Err(Error::InvalidDensity(_))
        ));
        let asymmetric = SparseDensity::from_entries(
            modes.clone(),
            [((0, 0), 0.5), ((3, 3), 0.5), ((0, 3), 0.2)],
        )
        .unwrap();
        assert!(matches!(
            extract_xstate(&asymmetric, 1e-12),
            Err(Error::InvalidDensity(_))
        ));
        let not_positive = SparseDensity::from_entries(
            modes,
            [((0, 0), 0.5), ((3, 3), 0.5), ((0, 3), 0.6), ((3, 0), 0.6)],
        )
        .unwrap();
        assert!(matches!(
            extract_xstate(&not_positive, 1e-12),
            Err(Error::InvalidDensity(_))
        ));
    }

    #[test]
    fn xstate_constructor_validates() {
        let ok = XState::new(
            2,
            vec![XPair {
                label: 0,
                a: 0.5,
                b: 0.5,
                c: 0.5,
            }],
        );
        assert!(ok.is_ok());
        assert!(XState::new(
            2,
            vec![XPair {
                label: 2,
                a: 0.5,
                b: 0.5,
                c: 0.0
            }]
        )
        .is_err());
        assert!(XState::new(
            2,
            vec![XPair {
                label: 0,
                a: 0.5,
                b: 0.4,
                c: 0.0
            }]
        )
        .is_err());
    }

    #[test]
    fn block_matrix_two_party_example() {
        let spec = ScenarioSpec::new(2, 1, 1, 0, FRAC_PI_4).unwrap();
        let rho = build_block_matrix(&spec, &BogoliubovPair::extreme()).unwrap();
        assert!((rho.get(0b00, 0b00) - 0.25).abs() < 1e-15);
        assert!((rho.get(0b01, 0b01) - 0.25).abs() < 1e-15);
        assert!((rho.get(0b11, 0b11) - 0.5).abs() < 1e-15);
        assert!((rho.get(0b00, 0b11) - 0.353_553_390_593_273_8).abs() < 1e-15);
        assert!((rho.get(0b11, 0b00) - 0.353_553_390_593_273_8).abs() < 1e-15);
        assert_eq!(rho.nnz(), 5);
    }

    #[test]
    fn block_matrix_binomial_multiplicities() {
        let pair = crate::hawking::BlackHoleParams::new(1.0, 0.9, 1.0)
            .unwrap()
            .bogoliubov();
        let theta = FRAC_PI_6;
        let n = 4usize;
        let spec = ScenarioSpec::new(6, n, n, 0, theta).unwrap();
        let rho = build_block_matrix(&spec, &pair).unwrap();
        for (w, &multiplicity) in [1, 4, 6, 4, 1].iter().enumerate() {
            let expected = theta.cos().powi(2)
                * pair.alpha().powi(2 * (n - w) as i32)
                * pair.beta().powi(2 * w as i32);
            let count = rho
                .entries()
                .filter(|&((r, c), v)| r == c && r >> n == 0 && (v - expected).abs() < 1e-15)
                .filter(|&((r, _), _)| r.count_ones() as usize == w)
                .count();
            assert_eq!(count, multiplicity, "weight {w}");
        }
        let bar0: f64 = rho
            .entries()
            .filter(|&((r, c), _)| r == c && r >> n == 0)
            .map(|(_, v)| v)
            .sum();
        assert!((bar0 - theta.cos().powi(2)).abs() < 1e-13);
    }

    #[test]
    fn theta_zero_block_matrix_is_diagonal() {
        let spec = ScenarioSpec::new(3, 2, 1, 1, 0.0).unwrap();
        let rho = build_block_matrix(&spec, &BogoliubovPair::extreme()).unwrap();
        assert!(rho.entries().all(|((r, c), _)| r == c));
        assert_eq!(rho.nnz(), 4);
        assert!((rho.trace() - 1.0).abs() < 1e-15);
    }
}
