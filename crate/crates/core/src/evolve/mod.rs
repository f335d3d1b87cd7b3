//! Time evolution of Cauchy data.
//!
//! Two engines: the exact spectral propagator on the strip (diagonal in the
//! mode basis) and an explicit leapfrog scheme whose end nodes carry the
//! boundary degree of freedom and integrate the boundary wave equation.

mod causality;
mod fdtd;
mod reflection;
mod spectral;

use serde::Serialize;

pub use causality::{
    causality_probe, dependence_interval, local_energy_estimate, CausalityReport,
    LocalEnergyReport,
};
pub use fdtd::{fdtd_step, step_for, EndCondition, FdtdState, MAX_CFL};
pub use reflection::{explicit_solution, run_reflection, ReflectionConfig, ReflectionPulse, ReflectionReport};
pub use spectral::{spectral_evolve, SpectralState};

/// Bulk and boundary energy; `total = bulk + boundary`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyReport {
    pub bulk: f64,
    pub boundary: f64,
    pub total: f64,
}

impl EnergyReport {
    pub fn new(bulk: f64, boundary: f64) -> Self {
        Self { bulk, boundary, total: bulk + boundary }
    }
}

/// States that can report their energy.
pub trait Energy {
    fn energy(&self) -> EnergyReport;
}

/// Energy of either engine's state.
pub fn energy(state: &dyn Energy) -> EnergyReport {
    state.energy()
}
