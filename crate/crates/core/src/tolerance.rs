//! Numerical thresholds shared by every module.

use serde::{Deserialize, Serialize};

pub const DEFAULT_TOL_SYM: f64 = 1e-10;
pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_CAP: usize = 4096;

/// Tolerances used for rank, containment, positivity and probability
/// decisions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Max entrywise |A - A^dagger| accepted as Hermitian.
    pub sym: f64,
    /// Relative rank cutoff for supports and orthonormalization.
    pub rank: f64,
    /// Eigenvalues down to `-neg` count as nonnegative.
    pub neg: f64,
    /// Projector residual accepted by containment tests.
    pub contain: f64,
    /// Probability above which an outcome is said to fire.
    pub prob: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::uniform(DEFAULT_TOL)
    }
}

impl Tolerances {
    /// All thresholds set to `tol`, except the Hermitian check which keeps
    /// its tighter default.
    pub fn uniform(tol: f64) -> Self {
        Self {
            sym: DEFAULT_TOL_SYM,
            rank: tol,
            neg: tol,
            contain: tol,
            prob: tol,
        }
    }
}

/// Tolerances plus the cap on the composite dimension d^n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config {
    pub tol: Tolerances,
    pub cap: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            tol: Tolerances::default(),
            cap: DEFAULT_CAP,
        }
    }
}

impl Config {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol: Tolerances::uniform(tol),
            ..Self::default()
        }
    }

    /// Errors with `CapExceeded` unless `dim^n` fits under the cap.
    pub fn check_cap(&self, dim: usize, n: usize) -> crate::Result<usize> {
        let size = (dim as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if size > self.cap as u128 {
            return Err(crate::Error::CapExceeded {
                size,
                cap: self.cap,
            });
        }
        Ok(size as usize)
    }
}
