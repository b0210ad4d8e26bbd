//! Dilaton grids and shape classification of swept curves.

use std::fmt;

use crate::analytic::peak_dilaton;
use crate::error::Result;

/// `steps` evenly spaced points from `d_min` to `d_max`, endpoints exact.
/// A single step yields just `d_min`.
pub fn dilaton_grid(d_min: f64, d_max: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![d_min],
        _ => {
            let last = steps - 1;
            let h = (d_max - d_min) / last as f64;
            (0..steps)
                .map(|i| {
                    if i == last {
                        d_max
                    } else {
                        d_min + h * i as f64
                    }
                })
                .collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepShape {
    Increasing,
    Decreasing,
    /// Strictly up to `index`, strictly down after it.
    SinglePeaked {
        index: usize,
    },
    Irregular,
}

impl fmt::Display for SweepShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepShape::Increasing => f.write_str("increasing"),
            SweepShape::Decreasing => f.write_str("decreasing"),
            SweepShape::SinglePeaked { index } => write!(f, "single-peaked at index {index}"),
            SweepShape::Irregular => f.write_str("irregular"),
        }
    }
}

pub fn classify(values: &[f64]) -> SweepShape {
    if values.len() < 2 {
        return SweepShape::Irregular;
    }
    let diffs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    if diffs.iter().all(|&d| d > 0.0) {
        return SweepShape::Increasing;
    }
    if diffs.iter().all(|&d| d < 0.0) {
        return SweepShape::Decreasing;
    }
    let rise = diffs.iter().take_while(|&&d| d > 0.0).count();
    if rise > 0 && diffs[rise..].iter().all(|&d| d < 0.0) {
        return SweepShape::SinglePeaked { index: rise };
    }
    SweepShape::Irregular
}

/// What `alpha^p beta^q` should do on `D in [0, M]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExpectedShape {
    Increasing,
    Decreasing,
    PeakAt(f64),
}

pub fn expected_shape(mass: f64, omega: f64, p: u32, q: u32) -> Result<ExpectedShape> {
    Ok(match peak_dilaton(mass, omega, p, q)? {
        Some(d) => ExpectedShape::PeakAt(d),
        None if q == 0 || p > q => ExpectedShape::Decreasing,
        None => ExpectedShape::Increasing,
    })
}
