//! Genuine multipartite entanglement.
//!
//! For X states the measure has the closed form `2 max(0, |c_i| - nu_i)`
//! with `nu_i = sum_{j != i} sqrt(a_j b_j)`, maximised over pairs `i`. For
//! pure states it is the minimum over bipartitions of
//! `sqrt(2 (1 - Tr rho_A^2))`.

use crate::error::{Error, Result};
use crate::hawking::BogoliubovPair;
use crate::modes_state::{
    partial_trace, scenario_density, Mode, ScenarioSpec, SparseDensity, SparseState,
};
use crate::xstate::{extract_xstate, XState, DEFAULT_TOL};

/// Largest party count for bipartition enumeration.
pub const MAX_PURE_PARTIES: usize = 16;

pub fn gme_xstate(x: &XState) -> f64 {
    let roots: Vec<f64> = x
        .pairs()
        .iter()
        .map(|p| (p.a.max(0.0) * p.b.max(0.0)).sqrt())
        .collect();
    let total: f64 = roots.iter().sum();
    let best = x
        .pairs()
        .iter()
        .zip(&roots)
        .map(|(p, r)| p.c.abs() - (total - r))
        .fold(0.0, f64::max);
    2.0 * best
}

/// Outcome of the bipartition search for a pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct PureGme {
    pub value: f64,
    /// Number of bipartitions whose purity was evaluated.
    pub cuts_evaluated: usize,
    /// Party indices on one side of a minimising cut.
    pub minimizing_cut: Vec<usize>,
}

pub fn gme_pure(state: &SparseState, parties: &[Vec<Mode>]) -> Result<f64> {
    gme_pure_detailed(state, parties).map(|g| g.value)
}

pub fn gme_pure_detailed(state: &SparseState, parties: &[Vec<Mode>]) -> Result<PureGme> {
    let n = parties.len();
    if n < 2 {
        return Err(Error::InvalidPartition(format!(
            "need at least 2 parties, got {n}"
        )));
    }
    if n > MAX_PURE_PARTIES {
        return Err(Error::ScaleCap {
            size: n,
            cap: MAX_PURE_PARTIES,
        });
    }
    let layout = state.layout().modes();
    let mut seen = Vec::with_capacity(layout.len());
    for cell in parties {
        if cell.is_empty() {
            return Err(Error::InvalidPartition("empty party".into()));
        }
        for &m in cell {
            if !layout.contains(&m) {
                return Err(Error::InvalidPartition(format!(
                    "mode {m} not in the state"
                )));
            }
            if seen.contains(&m) {
                return Err(Error::InvalidPartition(format!("mode {m} assigned twice")));
            }
            seen.push(m);
        }
    }
    if seen.len() != layout.len() {
        let missing = layout.iter().find(|m| !seen.contains(m)).unwrap();
        return Err(Error::InvalidPartition(format!(
            "mode {missing} not assigned"
        )));
    }

    // Party 0 always sits on side B; each mask picks side A from the rest.
    let mut best = PureGme {
        value: f64::INFINITY,
        cuts_evaluated: 0,
        minimizing_cut: Vec::new(),
    };
    for mask in 1u32..(1u32 << (n - 1)) {
        let side_a: Vec<usize> = (1..n).filter(|&i| mask >> (i - 1) & 1 == 1).collect();
        let modes_a: Vec<Mode> = side_a
            .iter()
            .flat_map(|&i| parties[i].iter().copied())
            .collect();
        let modes_b: Vec<Mode> = (0..n)
            .filter(|i| !side_a.contains(i))
            .flat_map(|i| parties[i].iter().copied())
            .collect();
        let smaller = if modes_a.len() <= modes_b.len() {
            &modes_a
        } else {
            &modes_b
        };
        let purity = partial_trace(state, smaller)?.purity();
        let value = (2.0 * (1.0 - purity).max(0.0)).sqrt();
        best.cuts_evaluated += 1;
        if value < best.value {
            best.value = value;
            best.minimizing_cut = side_a;
        }
    }
    Ok(best)
}

/// Entanglement of a two-mode X state, the two-qubit case of [`gme_xstate`].
pub fn pair_entanglement(rho: &SparseDensity) -> Result<f64> {
    if rho.n_modes() != 2 {
        return Err(Error::InvalidDensity(format!(
            "expected 2 modes, got {}",
            rho.n_modes()
        )));
    }
    Ok(gme_xstate(&extract_xstate(rho, DEFAULT_TOL)?))
}

/// GME of the reduced scenario state computed through the explicit trace.
pub fn scenario_gme(spec: &ScenarioSpec, pair: &BogoliubovPair) -> Result<f64> {
    let rho = scenario_density(spec, pair)?;
    Ok(gme_xstate(&extract_xstate(&rho, DEFAULT_TOL)?))
}

/// Entanglement of every two-mode reduction of `rho`, keyed by mode indices
/// `(i, j)` with `i < j`.
pub fn pairwise_entanglements(rho: &SparseDensity) -> Result<Vec<((usize, usize), f64)>> {
    let modes = rho.modes();
    let mut out = Vec::new();
    for i in 0..modes.len() {
        for j in i + 1..modes.len() {
            let reduced = rho.partial_trace(&[modes[i], modes[j]])?;
            out.push(((i, j), pair_entanglement(&reduced)?));
        }
    }
    Ok(out)
}
