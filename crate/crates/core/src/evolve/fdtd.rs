use super::{Energy, EnergyReport};
use crate::error::{Error, Result};
use crate::space::{CauchyData, Geometry, Grid1D, PhysicalParams};

/// Largest admissible `dt / h` (unit wave speed).
pub const MAX_CFL: f64 = 1.0;

/// Treatment of a grid end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndCondition {
    /// Dynamical boundary node: `∂_t²φ| = −μ²φ| + c⁻¹ ∂_⊥φ`.
    Wentzell,
    /// Homogeneous Dirichlet wall, used to truncate the half-space.
    Wall,
}

/// Leapfrog state on a uniform grid. The end samples are the boundary
/// degrees of freedom themselves (`φ|_{∂Σ} = φ|` imposed strongly).
#[derive(Debug, Clone)]
pub struct FdtdState {
    grid: Grid1D,
    c: f64,
    mu: f64,
    ends: [EndCondition; 2],
    phi: Vec<f64>,
    phi_prev: Vec<f64>,
    t: f64,
    dt: f64,
    steps: usize,
    scratch: Vec<f64>,
}

/// Largest step `≤ cfl·h` that divides `duration` into whole steps.
pub fn step_for(h: f64, cfl: f64, duration: f64) -> f64 {
    let n = (duration / (cfl * h)).ceil().max(1.0);
    duration / n
}

impl FdtdState {
    /// Starts from position/velocity samples at time `t0`. The level at
    /// `t0 − dt` comes from a second-order Taylor start using the discrete
    /// operator.
    pub fn new(
        params: &PhysicalParams,
        grid: Grid1D,
        ends: [EndCondition; 2],
        dt: f64,
        position: &[f64],
        velocity: &[f64],
        t0: f64,
    ) -> Result<Self> {
        let n = grid.len();
        if position.len() != n || velocity.len() != n {
            return Err(Error::GridMismatch(format!(
                "initial data has {} / {} samples, grid has {n}",
                position.len(),
                velocity.len()
            )));
        }
        if n < 4 {
            return Err(Error::InvalidParameter("FDTD needs at least 4 nodes".into()));
        }
        let limit = MAX_CFL * grid.spacing();
        if !(dt > 0.0) || dt > limit * (1.0 + 1e-12) {
            return Err(Error::Cfl { dt, limit });
        }
        let mut state = Self {
            grid,
            c: params.c(),
            mu: params.mu(),
            ends,
            phi: position.to_vec(),
            phi_prev: vec![0.0; n],
            t: t0,
            dt,
            steps: 0,
            scratch: vec![0.0; n],
        };
        state.apply_walls();
        let mut acc = vec![0.0; n];
        state.acceleration(&state.phi, &mut acc);
        for i in 0..n {
            state.phi_prev[i] = state.phi[i] - dt * velocity[i] + 0.5 * dt * dt * acc[i];
        }
        for (k, end) in state.ends.iter().enumerate() {
            if *end == EndCondition::Wall {
                let idx = if k == 0 { 0 } else { n - 1 };
                state.phi_prev[idx] = 0.0;
            }
        }
        Ok(state)
    }

    /// From Cauchy data; the boundary values (not the bulk trace) seed the end
    /// nodes. Strips get two dynamical ends; the half-space grid gets a
    /// dynamical end at `z_min` and a wall at `z_max`.
    pub fn from_cauchy(params: &PhysicalParams, data: &CauchyData, cfl: f64) -> Result<Self> {
        let grid = *data.position().grid();
        let ends = match params.geometry() {
            Geometry::Strip { .. } => [EndCondition::Wentzell, EndCondition::Wentzell],
            Geometry::HalfSpace => [EndCondition::Wentzell, EndCondition::Wall],
        };
        let mut pos: Vec<f64> = data.position().bulk().iter().map(|v| v.re).collect();
        let mut vel: Vec<f64> = data.velocity().bulk().iter().map(|v| v.re).collect();
        let last = grid.intervals();
        pos[0] = data.position().boundary()[0].re;
        vel[0] = data.velocity().boundary()[0].re;
        if data.position().boundary().len() == 2 {
            pos[last] = data.position().boundary()[1].re;
            vel[last] = data.velocity().boundary()[1].re;
        }
        Self::new(params, grid, ends, cfl * grid.spacing(), &pos, &vel, 0.0)
    }

    fn apply_walls(&mut self) {
        let n = self.phi.len();
        if self.ends[0] == EndCondition::Wall {
            self.phi[0] = 0.0;
        }
        if self.ends[1] == EndCondition::Wall {
            self.phi[n - 1] = 0.0;
        }
    }

    /// Discrete right-hand side `∂_t²φ`.
    fn acceleration(&self, phi: &[f64], out: &mut [f64]) {
        let n = phi.len();
        let h = self.grid.spacing();
        let inv_h2 = 1.0 / (h * h);
        let mu2 = self.mu * self.mu;
        for i in 1..n - 1 {
            out[i] = (phi[i + 1] - 2.0 * phi[i] + phi[i - 1]) * inv_h2 - mu2 * phi[i];
        }
        // Inward second-order one-sided normal derivative at each end.
        let dn_left = (-3.0 * phi[0] + 4.0 * phi[1] - phi[2]) / (2.0 * h);
        let dn_right = (-3.0 * phi[n - 1] + 4.0 * phi[n - 2] - phi[n - 3]) / (2.0 * h);
        out[0] = match self.ends[0] {
            EndCondition::Wentzell => -mu2 * phi[0] + dn_left / self.c,
            EndCondition::Wall => 0.0,
        };
        out[n - 1] = match self.ends[1] {
            EndCondition::Wentzell => -mu2 * phi[n - 1] + dn_right / self.c,
            EndCondition::Wall => 0.0,
        };
    }

    /// One leapfrog step.
    pub fn step(&mut self) {
        let mut acc = std::mem::take(&mut self.scratch);
        self.acceleration(&self.phi, &mut acc);
        let dt2 = self.dt * self.dt;
        for i in 0..self.phi.len() {
            let next = 2.0 * self.phi[i] - self.phi_prev[i] + dt2 * acc[i];
            self.phi_prev[i] = self.phi[i];
            self.phi[i] = next;
        }
        self.apply_walls();
        self.scratch = acc;
        self.steps += 1;
        self.t += self.dt;
    }

    /// Steps until `time() ≥ t_end − dt/2`.
    pub fn run_until(&mut self, t_end: f64) {
        while self.t < t_end - 0.5 * self.dt {
            self.step();
        }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    /// End node values `(z_min, z_max)`.
    pub fn boundary_values(&self) -> (f64, f64) {
        (self.phi[0], self.phi[self.phi.len() - 1])
    }

    /// Centered velocity estimate at the current level, using one extra
    /// step on a copy.
    pub fn velocity(&self) -> Vec<f64> {
        let mut ahead = self.clone();
        ahead.step();
        ahead
            .phi
            .iter()
            .zip(&self.phi_prev)
            .map(|(p, q)| (p - q) / (2.0 * self.dt))
            .collect()
    }

    /// Energy in the nodes and cells inside `[lo, hi]`, evaluated at
    /// `t − dt/2` from the two stored levels.
    pub fn energy_in(&self, lo: f64, hi: f64) -> EnergyReport {
        let v: Vec<f64> = self
            .phi
            .iter()
            .zip(&self.phi_prev)
            .map(|(p, q)| (p - q) / self.dt)
            .collect();
        let kinetic = self.localized(&v, lo, hi, true);
        let pot_now = self.localized(&self.phi, lo, hi, false);
        let pot_prev = self.localized(&self.phi_prev, lo, hi, false);
        EnergyReport::new(
            kinetic.0 + 0.5 * (pot_now.0 + pot_prev.0),
            kinetic.1 + 0.5 * (pot_now.1 + pot_prev.1),
        )
    }

    /// `(bulk, boundary)` parts of either `½∫v²` (kinetic) or
    /// `½∫(φ_z² + μ²φ²)` (potential) restricted to `[lo, hi]`.
    fn localized(&self, f: &[f64], lo: f64, hi: f64, kinetic: bool) -> (f64, f64) {
        let n = f.len();
        let h = self.grid.spacing();
        let mu2 = self.mu * self.mu;
        let tol = 1e-9 * h;
        let inside = |i: usize| {
            let z = self.grid.node(i);
            z >= lo - tol && z <= hi + tol
        };
        let mut bulk = 0.0;
        for i in 0..n {
            if !inside(i) {
                continue;
            }
            let w = if i == 0 || i == n - 1 { 0.5 * h } else { h };
            let point = if kinetic { f[i] * f[i] } else { mu2 * f[i] * f[i] };
            bulk += 0.5 * w * point;
            if !kinetic && i + 1 < n && inside(i + 1) {
                let g = (f[i + 1] - f[i]) / h;
                bulk += 0.5 * h * g * g;
            }
        }
        let mut bdy = 0.0;
        for (k, end) in self.ends.iter().enumerate() {
            let i = if k == 0 { 0 } else { n - 1 };
            if *end == EndCondition::Wentzell && inside(i) {
                let point = if kinetic { f[i] * f[i] } else { mu2 * f[i] * f[i] };
                bdy += 0.5 * self.c * point;
            }
        }
        (bulk, bdy)
    }
}

impl Energy for FdtdState {
    fn energy(&self) -> EnergyReport {
        self.energy_in(self.grid.z_min(), self.grid.z_max())
    }
}

/// One leapfrog step, by value.
pub fn fdtd_step(mut state: FdtdState) -> FdtdState {
    state.step();
    state
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strip(mu: f64) -> (PhysicalParams, Grid1D) {
        let p = PhysicalParams::strip(1.0, 1.0, mu).unwrap();
        (p, Grid1D::for_strip(&p, 256).unwrap())
    }

    #[test]
    fn zero_data_stays_zero() {
        let (p, g) = strip(1.0);
        let zeros = vec![0.0; g.len()];
        let mut s = FdtdState::new(&p, g, [EndCondition::Wentzell; 2], 0.5 * g.spacing(), &zeros, &zeros, 0.0)
            .unwrap();
        for _ in 0..500 {
            s.step();
        }
        assert!(s.phi().iter().all(|&v| v == 0.0));
        assert_eq!(s.energy().total, 0.0);
    }

    #[test]
    fn cfl_violation_rejected() {
        let (p, g) = strip(0.0);
        let zeros = vec![0.0; g.len()];
        let r = FdtdState::new(&p, g, [EndCondition::Wentzell; 2], 1.5 * g.spacing(), &zeros, &zeros, 0.0);
        assert!(matches!(r, Err(Error::Cfl { .. })));
    }

    #[test]
    fn constant_massless_data_is_stationary() {
        let (p, g) = strip(0.0);
        let ones = vec![1.0; g.len()];
        let zeros = vec![0.0; g.len()];
        let mut s = FdtdState::new(&p, g, [EndCondition::Wentzell; 2], 0.5 * g.spacing(), &ones, &zeros, 0.0)
            .unwrap();
        for _ in 0..100 {
            s.step();
        }
        assert!(s.phi().iter().all(|&v| (v - 1.0).abs() < 1e-13));
    }

    #[test]
    fn step_for_divides_duration() {
        let dt = step_for(1.0 / 512.0, 0.5, 2.0);
        assert!(dt <= 0.5 / 512.0);
        let n = 2.0 / dt;
        assert!((n - n.round()).abs() < 1e-9);
    }
}
