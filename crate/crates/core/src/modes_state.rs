//! Mode-resolved pure states and their partial traces.
//!
//! This is the brute-force route: the GHZ state is written out amplitude by
//! amplitude, every near-horizon Kruskal mode is expanded into an (out, in)
//! dilaton pair, and unobserved modes are traced out explicitly. Modes are
//! treated as qubits; no Jordan-Wigner phases are attached.
//!
//! Basis labels are bit patterns over a [`ModeLayout`] with the first mode in
//! the most significant position.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hawking::BogoliubovPair;

/// Amplitudes below this magnitude are not stored.
pub const DROP_TOL: f64 = 1e-15;

/// Largest number of modes (`N + n`) the explicit oracle route accepts.
pub const ORACLE_MODE_CAP: usize = 24;

const NORM_TOL: f64 = 1e-12;

/// A single fermionic mode, indexed from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Mode {
    /// Held by an observer in the asymptotically flat region.
    Flat(usize),
    /// A near-horizon mode before the dilaton-mode expansion.
    Kruskal(usize),
    /// Outside the event horizon (accessible).
    Out(usize),
    /// Inside the event horizon (inaccessible).
    In(usize),
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Flat(i) => write!(f, "F{i}"),
            Mode::Kruskal(i) => write!(f, "K{i}"),
            Mode::Out(i) => write!(f, "O{i}"),
            Mode::In(i) => write!(f, "I{i}"),
        }
    }
}

/// `N` parties, `n` of them near the horizon, with `p` out-modes and `q`
/// in-modes kept after the trace. `theta` sets the initial GHZ weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScenarioSpec {
    n_parties: usize,
    n_horizon: usize,
    n_out_kept: usize,
    n_in_kept: usize,
    theta: f64,
}

impl ScenarioSpec {
    pub fn new(
        n_parties: usize,
        n_horizon: usize,
        n_out_kept: usize,
        n_in_kept: usize,
        theta: f64,
    ) -> Result<Self> {
        if n_parties < 2 {
            return Err(Error::InvalidSpec(format!(
                "need at least 2 parties, got {n_parties}"
            )));
        }
        if n_horizon < 1 || n_horizon >= n_parties {
            return Err(Error::InvalidSpec(format!(
                "horizon count {n_horizon} must lie in [1, {})",
                n_parties
            )));
        }
        if n_out_kept + n_in_kept != n_horizon {
            return Err(Error::InvalidSpec(format!(
                "p + q = {} + {} differs from n = {n_horizon}",
                n_out_kept, n_in_kept
            )));
        }
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
            return Err(Error::InvalidSpec(format!(
                "theta {theta} outside [0, pi/2]"
            )));
        }
        if n_parties + n_horizon > 63 {
            return Err(Error::ScaleCap {
                size: n_parties + n_horizon,
                cap: 63,
            });
        }
        Ok(Self {
            n_parties,
            n_horizon,
            n_out_kept,
            n_in_kept,
            theta,
        })
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn n_horizon(&self) -> usize {
        self.n_horizon
    }

    pub fn n_flat(&self) -> usize {
        self.n_parties - self.n_horizon
    }

    pub fn p(&self) -> usize {
        self.n_out_kept
    }

    pub fn q(&self) -> usize {
        self.n_in_kept
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Modes kept in the canonical reduced state: every flat mode, `Out(1..=p)`
    /// and `In(p+1..=n)`.
    pub fn kept_modes(&self) -> Vec<Mode> {
        let mut keep: Vec<Mode> = (1..=self.n_flat()).map(Mode::Flat).collect();
        keep.extend((1..=self.n_out_kept).map(Mode::Out));
        keep.extend((self.n_out_kept + 1..=self.n_horizon).map(Mode::In));
        keep
    }

    /// Modes of the initial state: flat modes then Kruskal modes.
    pub fn logical_layout(&self) -> ModeLayout {
        let mut modes: Vec<Mode> = (1..=self.n_flat()).map(Mode::Flat).collect();
        modes.extend((1..=self.n_horizon).map(Mode::Kruskal));
        ModeLayout { modes }
    }

    /// The `N + n` modes after expansion: flat, then out, then in.
    pub fn expanded_layout(&self) -> ModeLayout {
        let mut modes: Vec<Mode> = (1..=self.n_flat()).map(Mode::Flat).collect();
        modes.extend((1..=self.n_horizon).map(Mode::Out));
        modes.extend((1..=self.n_horizon).map(Mode::In));
        ModeLayout { modes }
    }

    fn check_oracle_cap(&self) -> Result<()> {
        let size = self.n_parties + self.n_horizon;
        if size > ORACLE_MODE_CAP {
            return Err(Error::ScaleCap {
                size,
                cap: ORACLE_MODE_CAP,
            });
        }
        Ok(())
    }
}

/// Ordered list of distinct modes; position 0 is the most significant bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeLayout {
    modes: Vec<Mode>,
}

impl ModeLayout {
    pub fn new(modes: Vec<Mode>) -> Result<Self> {
        if modes.len() > 63 {
            return Err(Error::ScaleCap {
                size: modes.len(),
                cap: 63,
            });
        }
        for (i, m) in modes.iter().enumerate() {
            if modes[..i].contains(m) {
                return Err(Error::InvalidSpec(format!("mode {m} listed twice")));
            }
        }
        Ok(Self { modes })
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn position(&self, mode: Mode) -> Option<usize> {
        self.modes.iter().position(|&m| m == mode)
    }

    /// Single-bit mask of `mode` within a label.
    pub fn bit(&self, mode: Mode) -> Option<u64> {
        self.position(mode)
            .map(|pos| 1u64 << (self.modes.len() - 1 - pos))
    }
}

/// Renders `label` as a bit string of the given width, most significant first.
pub fn label_string(label: u64, width: usize) -> String {
    (0..width)
        .rev()
        .map(|k| if label >> k & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Real-amplitude pure state stored sparsely by basis label.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseState {
    layout: ModeLayout,
    amplitudes: BTreeMap<u64, f64>,
}

impl SparseState {
    /// Builds a state, dropping negligible amplitudes and checking the norm.
    pub fn new(
        layout: ModeLayout,
        amplitudes: impl IntoIterator<Item = (u64, f64)>,
    ) -> Result<Self> {
        let limit = if layout.len() == 64 {
            u64::MAX
        } else {
            (1u64 << layout.len()) - 1
        };
        let mut map = BTreeMap::new();
        for (label, amp) in amplitudes {
            if label > limit {
                return Err(Error::InvalidSpec(format!(
                    "label {label:#b} wider than {} modes",
                    layout.len()
                )));
            }
            *map.entry(label).or_insert(0.0) += amp;
        }
        let state = Self::from_map(layout, map);
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidSpec(format!("state norm^2 {norm} is not 1")));
        }
        Ok(state)
    }

    fn from_map(layout: ModeLayout, mut amplitudes: BTreeMap<u64, f64>) -> Self {
        amplitudes.retain(|_, a| a.abs() >= DROP_TOL);
        Self { layout, amplitudes }
    }

    pub fn layout(&self) -> &ModeLayout {
        &self.layout
    }

    pub fn amplitude(&self, label: u64) -> f64 {
        self.amplitudes.get(&label).copied().unwrap_or(0.0)
    }

    pub fn amplitudes(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.amplitudes.iter().map(|(&k, &v)| (k, v))
    }

    /// Number of stored (nonzero) amplitudes.
    pub fn nnz(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a * a).sum()
    }
}

/// `cos(theta) |0...0> + sin(theta) |1...1>` over the scenario's logical layout.
pub fn build_initial_state(spec: &ScenarioSpec) -> SparseState {
    let layout = spec.logical_layout();
    let ones = (1u64 << layout.len()) - 1;
    let mut amps = BTreeMap::new();
    amps.insert(0, spec.theta.cos());
    amps.insert(ones, spec.theta.sin());
    SparseState::from_map(layout, amps)
}

/// Rewrites every Kruskal mode of `state` in dilaton modes:
/// `|0>_K -> alpha |0>_out |0>_in + beta |1>_out |1>_in` and
/// `|1>_K -> |1>_out |0>_in`. Flat modes are carried over unchanged.
pub fn expand_kruskal(
    state: &SparseState,
    pair: &BogoliubovPair,
    spec: &ScenarioSpec,
) -> Result<SparseState> {
    let source = state.layout();
    let target = spec.expanded_layout();
    for mode in source.modes() {
        let known = match *mode {
            Mode::Flat(i) => i >= 1 && i <= spec.n_flat(),
            Mode::Kruskal(i) => i >= 1 && i <= spec.n_horizon(),
            _ => false,
        };
        if !known {
            return Err(Error::UnknownMode(*mode));
        }
    }
    if source.len() != spec.n_parties() {
        return Err(Error::InvalidSpec(format!(
            "state has {} modes, scenario has {} parties",
            source.len(),
            spec.n_parties()
        )));
    }

    // (source bit, action) per input mode
    enum Action {
        Copy(u64),
        Split { out: u64, inside: u64 },
    }
    let width = source.len();
    let actions: Vec<(u64, Action)> = source
        .modes()
        .iter()
        .enumerate()
        .map(|(pos, &mode)| {
            let src = 1u64 << (width - 1 - pos);
            let action = match mode {
                Mode::Flat(_) => Action::Copy(target.bit(mode).expect("flat mode in target")),
                Mode::Kruskal(i) => Action::Split {
                    out: target.bit(Mode::Out(i)).expect("out mode in target"),
                    inside: target.bit(Mode::In(i)).expect("in mode in target"),
                },
                _ => unreachable!(),
            };
            (src, action)
        })
        .collect();

    let (alpha, beta) = (pair.alpha(), pair.beta());
    let mut out = BTreeMap::new();
    let mut branches: Vec<(u64, f64)> = Vec::new();
    let mut next: Vec<(u64, f64)> = Vec::new();
    for (label, amp) in state.amplitudes() {
        branches.clear();
        branches.push((0, amp));
        for (src, action) in &actions {
            let set = label & src != 0;
            match *action {
                Action::Copy(bit) => {
                    if set {
                        branches.iter_mut().for_each(|b| b.0 |= bit);
                    }
                }
                Action::Split { out: o, inside } => {
                    if set {
                        branches.iter_mut().for_each(|b| b.0 |= o);
                    } else {
                        next.clear();
                        for &(l, a) in &branches {
                            next.push((l, a * alpha));
                            if beta != 0.0 {
                                next.push((l | o | inside, a * beta));
                            }
                        }
                        std::mem::swap(&mut branches, &mut next);
                    }
                }
            }
        }
        for &(l, a) in &branches {
            *out.entry(l).or_insert(0.0) += a;
        }
    }
    Ok(SparseState::from_map(target, out))
}

/// Bit-gather plan mapping labels of a layout onto a subset of its modes.
struct Projection {
    kept: Vec<(u64, u64)>,
    traced_mask: u64,
}

impl Projection {
    fn new(source: &[Mode], keep: &[Mode]) -> Result<(Self, Vec<Mode>)> {
        if keep.is_empty() {
            return Err(Error::InvalidSpec("nothing to keep".into()));
        }
        for &m in keep {
            if !source.contains(&m) {
                return Err(Error::UnknownMode(m));
            }
        }
        let kept_modes: Vec<Mode> = source
            .iter()
            .copied()
            .filter(|m| keep.contains(m))
            .collect();
        let width = source.len();
        let k = kept_modes.len();
        let mut kept = Vec::with_capacity(k);
        let mut kept_mask = 0u64;
        for (j, mode) in kept_modes.iter().enumerate() {
            let pos = source.iter().position(|m| m == mode).unwrap();
            let src = 1u64 << (width - 1 - pos);
            kept.push((src, 1u64 << (k - 1 - j)));
            kept_mask |= src;
        }
        let full = if width == 64 {
            u64::MAX
        } else {
            (1u64 << width) - 1
        };
        Ok((
            Self {
                kept,
                traced_mask: full & !kept_mask,
            },
            kept_modes,
        ))
    }

    fn kept_label(&self, label: u64) -> u64 {
        self.kept.iter().fold(
            0,
            |acc, &(src, dst)| if label & src != 0 { acc | dst } else { acc },
        )
    }
}

/// Real symmetric density matrix stored sparsely by `(row, col)` label.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseDensity {
    modes: Vec<Mode>,
    entries: BTreeMap<(u64, u64), f64>,
}

impl SparseDensity {
    /// Wraps raw entries; validation happens in consumers such as
    /// [`crate::xstate::extract_xstate`].
    pub fn from_entries(
        modes: Vec<Mode>,
        entries: impl IntoIterator<Item = ((u64, u64), f64)>,
    ) -> Result<Self> {
        let layout = ModeLayout::new(modes)?;
        let limit = (1u64 << layout.len()) - 1;
        let mut map = BTreeMap::new();
        for ((r, c), v) in entries {
            if r > limit || c > limit {
                return Err(Error::InvalidDensity(format!(
                    "entry ({r:#b}, {c:#b}) wider than {} modes",
                    layout.len()
                )));
            }
            if v != 0.0 {
                *map.entry((r, c)).or_insert(0.0) += v;
            }
        }
        Ok(Self {
            modes: layout.modes,
            entries: map,
        })
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn get(&self, row: u64, col: u64) -> f64 {
        self.entries.get(&(row, col)).copied().unwrap_or(0.0)
    }

    /// Stored entries in row-major label order.
    pub fn entries(&self) -> impl Iterator<Item = ((u64, u64), f64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn trace(&self) -> f64 {
        self.entries
            .iter()
            .filter(|((r, c), _)| r == c)
            .map(|(_, v)| v)
            .sum()
    }

    /// `Tr rho^2`, which for a real symmetric matrix is the sum of squares.
    pub fn purity(&self) -> f64 {
        self.entries.values().map(|v| v * v).sum()
    }

    /// Largest `|rho(r, c) - rho(c, r)|`.
    pub fn asymmetry(&self) -> f64 {
        self.entries
            .iter()
            .map(|(&(r, c), &v)| (v - self.get(c, r)).abs())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise difference to `other`, or infinity if the mode lists
    /// differ.
    pub fn max_abs_diff(&self, other: &SparseDensity) -> f64 {
        if self.modes != other.modes {
            return f64::INFINITY;
        }
        let mine = self
            .entries
            .iter()
            .map(|(k, &v)| (v - other.get(k.0, k.1)).abs());
        let theirs = other
            .entries
            .iter()
            .filter(|(k, _)| !self.entries.contains_key(k))
            .map(|(_, &v)| v.abs());
        mine.chain(theirs).fold(0.0, f64::max)
    }

    /// Row-major dense copy. Only sensible for a handful of modes.
    pub fn to_dense(&self) -> Result<Vec<f64>> {
        if self.modes.len() > 12 {
            return Err(Error::ScaleCap {
                size: self.modes.len(),
                cap: 12,
            });
        }
        let dim = 1usize << self.modes.len();
        let mut dense = vec![0.0; dim * dim];
        for (&(r, c), &v) in &self.entries {
            dense[r as usize * dim + c as usize] = v;
        }
        Ok(dense)
    }

    /// Traces out every mode not in `keep`.
    pub fn partial_trace(&self, keep: &[Mode]) -> Result<SparseDensity> {
        let (proj, kept_modes) = Projection::new(&self.modes, keep)?;
        let mut entries = BTreeMap::new();
        for (&(r, c), &v) in &self.entries {
            if r & proj.traced_mask != c & proj.traced_mask {
                continue;
            }
            *entries
                .entry((proj.kept_label(r), proj.kept_label(c)))
                .or_insert(0.0) += v;
        }
        entries.retain(|_, v| *v != 0.0);
        Ok(SparseDensity {
            modes: kept_modes,
            entries,
        })
    }
}

/// `rho(r, c) = sum_t psi(r, t) psi(c, t)` over configurations `t` of the
/// modes not in `keep`. The kept modes retain their layout order.
pub fn partial_trace(state: &SparseState, keep: &[Mode]) -> Result<SparseDensity> {
    let (proj, kept_modes) = Projection::new(state.layout().modes(), keep)?;
    let mut groups: BTreeMap<u64, Vec<(u64, f64)>> = BTreeMap::new();
    for (label, amp) in state.amplitudes() {
        groups
            .entry(label & proj.traced_mask)
            .or_default()
            .push((proj.kept_label(label), amp));
    }
    let mut entries = BTreeMap::new();
    for group in groups.values() {
        for &(r, ar) in group {
            for &(c, ac) in group {
                *entries.entry((r, c)).or_insert(0.0) += ar * ac;
            }
        }
    }
    entries.retain(|_, v: &mut f64| *v != 0.0);
    Ok(SparseDensity {
        modes: kept_modes,
        entries,
    })
}

/// The reduced state over all flat modes, `Out(1..=p)` and `In(p+1..=n)`,
/// built by explicit expansion and trace.
pub fn scenario_density(spec: &ScenarioSpec, pair: &BogoliubovPair) -> Result<SparseDensity> {
    spec.check_oracle_cap()?;
    let initial = build_initial_state(spec);
    let expanded = expand_kruskal(&initial, pair, spec)?;
    partial_trace(&expanded, &spec.kept_modes())
}
