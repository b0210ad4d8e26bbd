//! Genuine N-partite entanglement of Dirac-field GHZ states near a GHS
//! dilaton black hole.
//!
//! Two routes compute the same numbers. The brute-force route
//! ([`modes_state`]) expands every near-horizon mode, traces out the
//! unobserved partners and reads the entanglement off the resulting X state
//! ([`xstate`], [`gme`]). The closed-form route ([`analytic`]) evaluates
//! `2 alpha^p beta^q cos(theta) sin(theta)` directly. [`verify`] runs both
//! over fixed grids.

pub mod analytic;
pub mod cli;
pub mod error;
pub mod gme;
pub mod hawking;
pub mod modes_state;
pub mod sweep;
pub mod verify;
pub mod xstate;

pub use error::{Error, Result};
pub use hawking::{bogoliubov, BlackHoleParams, BogoliubovPair};
pub use modes_state::{Mode, ModeLayout, ScenarioSpec, SparseDensity, SparseState};
pub use xstate::XState;
