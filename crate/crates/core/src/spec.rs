//! Dispatch over the three quench families.

use thiserror::Error;

use crate::fermi::{impurity_survival, trap_survival, FermiError, ImpurityQuench, TrapQuench};
use crate::lmg::{quench_survival, LmgError, LmgSpec};
use crate::series::SurvivalSeries;

/// One quench experiment: model family, parameters, and time grid.
#[derive(Debug, Clone, PartialEq)]
pub enum QuenchSpec {
    /// Trap-frequency quench of the free Fermi gas.
    Trap(TrapQuench),
    /// Delta-impurity quench of the free Fermi gas.
    Impurity(ImpurityQuench),
    /// Interaction quench of the spin impurity in an LMG bath.
    Lmg(LmgSpec),
}

/// Error from whichever model family a [`QuenchSpec`] dispatches into.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    /// Fermionic model error.
    #[error(transparent)]
    Fermi(#[from] FermiError),
    /// LMG model error.
    #[error(transparent)]
    Lmg(#[from] LmgError),
}

impl QuenchSpec {
    /// Short family label for reports and file names.
    pub fn label(&self) -> &'static str {
        match self {
            QuenchSpec::Trap(_) => "fermi-trap",
            QuenchSpec::Impurity(_) => "fermi-impurity",
            QuenchSpec::Lmg(_) => "lmg",
        }
    }

    /// The spec's time grid.
    pub fn time_grid(&self) -> &[f64] {
        match self {
            QuenchSpec::Trap(s) => s.time_grid(),
            QuenchSpec::Impurity(s) => s.time_grid(),
            QuenchSpec::Lmg(s) => s.time_grid(),
        }
    }

    /// Run the survival series for this quench.
    pub fn survival(&self) -> Result<SurvivalSeries, ModelError> {
        Ok(match self {
            QuenchSpec::Trap(s) => trap_survival(s)?,
            QuenchSpec::Impurity(s) => impurity_survival(s)?,
            QuenchSpec::Lmg(s) => quench_survival(s)?,
        })
    }
}
