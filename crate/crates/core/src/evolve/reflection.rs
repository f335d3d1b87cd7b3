//! Pulse hitting the boundary of the massless half-space.
//!
//! With a unit-mass Gaussian `G` of width `ε` and
//! `E(s) = (e^{−·/c} θ) ∗ G (s) = e^{−s/c + ε²/2c²} Φ((s − ε²/c)/ε)`,
//! the field `φ(t,z) = G(t+z) − G(t−z) + 2c⁻¹E(t−z)` solves the wave
//! equation for `z > 0` together with `∂_t²φ| = c⁻¹∂_zφ` at `z = 0`, since
//! `E' = −E/c + G`. Its boundary trace `2c⁻¹E(t)` mollifies `2c⁻¹e^{−t/c}θ(t)`.

use serde::Serialize;

use super::fdtd::{step_for, EndCondition, FdtdState};
use crate::error::{Error, Result};
use crate::space::{Grid1D, PhysicalParams};
use crate::special::{normal_cdf, normal_pdf};

/// Closed-form solution for one regularized incoming pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionPulse {
    pub c: f64,
    pub eps: f64,
}

impl ReflectionPulse {
    fn g(&self, s: f64) -> f64 {
        normal_pdf(s / self.eps) / self.eps
    }

    fn g_prime(&self, s: f64) -> f64 {
        -s / (self.eps * self.eps) * self.g(s)
    }

    fn e(&self, s: f64) -> f64 {
        let (c, eps) = (self.c, self.eps);
        let cdf = normal_cdf((s - eps * eps / c) / eps);
        if cdf == 0.0 {
            return 0.0;
        }
        (-s / c + eps * eps / (2.0 * c * c)).exp() * cdf
    }

    pub fn phi(&self, t: f64, z: f64) -> f64 {
        self.g(t + z) - self.g(t - z) + 2.0 / self.c * self.e(t - z)
    }

    pub fn phi_t(&self, t: f64, z: f64) -> f64 {
        let e_prime = -self.e(t - z) / self.c + self.g(t - z);
        self.g_prime(t + z) - self.g_prime(t - z) + 2.0 / self.c * e_prime
    }

    /// `φ(t, 0) = 2c⁻¹E(t)`.
    pub fn boundary(&self, t: f64) -> f64 {
        2.0 / self.c * self.e(t)
    }
}

/// `φ(t, z)` for the pulse with parameters `eps`, `c`.
pub fn explicit_solution(t: f64, z: f64, eps: f64, c: f64) -> f64 {
    ReflectionPulse { c, eps }.phi(t, z)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReflectionConfig {
    pub c: f64,
    pub eps: f64,
    pub h: f64,
    pub cfl: f64,
    pub t_start: f64,
    pub t_end: f64,
    /// Length of the truncated half-space; the far end is a wall.
    pub length: f64,
}

impl Default for ReflectionConfig {
    fn default() -> Self {
        Self { c: 1.0, eps: 0.02, h: 1.0 / 2048.0, cfl: 0.5, t_start: -0.5, t_end: 3.0, length: 4.0 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReflectionReport {
    pub config: ReflectionConfig,
    pub times: Vec<f64>,
    pub numeric: Vec<f64>,
    pub exact: Vec<f64>,
    pub sup_error: f64,
    /// Numerical boundary trace at `t = 1`, linearly interpolated.
    pub value_at_1: f64,
    pub exact_at_1: f64,
}

/// Runs FDTD on `[0, length]` from the closed form at `t_start` and records
/// the boundary trace.
pub fn run_reflection(config: &ReflectionConfig) -> Result<ReflectionReport> {
    if !(config.eps > 0.0) || !(config.h > 0.0) || !(config.t_end > config.t_start) {
        return Err(Error::InvalidParameter("reflection needs eps, h > 0 and t_end > t_start".into()));
    }
    // The wall must stay outside the reflected pulse's cone.
    if config.length < config.t_end + 10.0 * config.eps {
        return Err(Error::InvalidParameter(format!(
            "length {} too short for t_end {}",
            config.length, config.t_end
        )));
    }
    let params = PhysicalParams::half_space(config.c, 0.0)?;
    let n = (config.length / config.h).round() as usize + 1;
    let grid = Grid1D::new(0.0, config.length, n)?;
    let pulse = ReflectionPulse { c: config.c, eps: config.eps };
    let nodes = grid.nodes();
    let pos: Vec<f64> = nodes.iter().map(|&z| pulse.phi(config.t_start, z)).collect();
    let vel: Vec<f64> = nodes.iter().map(|&z| pulse.phi_t(config.t_start, z)).collect();
    let dt = step_for(grid.spacing(), config.cfl, config.t_end - config.t_start);
    let mut state = FdtdState::new(
        &params,
        grid,
        [EndCondition::Wentzell, EndCondition::Wall],
        dt,
        &pos,
        &vel,
        config.t_start,
    )?;
    let mut times = vec![state.time()];
    let mut numeric = vec![state.boundary_values().0];
    while state.time() < config.t_end - 0.5 * dt {
        state.step();
        times.push(state.time());
        numeric.push(state.boundary_values().0);
    }
    let exact: Vec<f64> = times.iter().map(|&t| pulse.boundary(t)).collect();
    let sup_error = numeric.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let value_at_1 = interpolate(&times, &numeric, 1.0);
    Ok(ReflectionReport {
        config: *config,
        times,
        numeric,
        exact,
        sup_error,
        value_at_1,
        exact_at_1: pulse.boundary(1.0),
    })
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    match xs.iter().position(|&v| v >= x) {
        Some(0) => ys[0],
        Some(i) => {
            let w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
            ys[i - 1] * (1.0 - w) + ys[i] * w
        }
        None => f64::NAN,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_satisfies_boundary_equation() {
        let p = ReflectionPulse { c: 0.7, eps: 0.1 };
        let (h, k) = (1e-4, 1e-4);
        for t in [-0.2, 0.05, 0.3, 1.0] {
            let phi_tt = (p.boundary(t + k) - 2.0 * p.boundary(t) + p.boundary(t - k)) / (k * k);
            let phi_z = (p.phi(t, h) - p.phi(t, -h)) / (2.0 * h);
            assert!((phi_tt - phi_z / p.c).abs() < 1e-4 * (1.0 + phi_tt.abs()), "t={t}");
        }
    }

    #[test]
    fn closed_form_trace_and_spot_value() {
        let p = ReflectionPulse { c: 1.0, eps: 0.02 };
        assert_eq!(p.boundary(1.0), p.phi(1.0, 0.0));
        assert!((p.boundary(1.0) - 0.735_906_048_835_512).abs() < 1e-13);
        assert_eq!(p.boundary(-50.0), 0.0);
        let fd = (p.phi(0.4, 0.3 + 1e-6) - p.phi(0.4, 0.3 - 1e-6)) / 2e-6;
        let fd_t = (p.phi(0.4 + 1e-6, 0.3) - p.phi(0.4 - 1e-6, 0.3)) / 2e-6;
        assert!(fd.is_finite());
        assert!((fd_t - p.phi_t(0.4, 0.3)).abs() < 1e-5);
    }

    #[test]
    fn coarse_run_tracks_trace() {
        let cfg = ReflectionConfig { eps: 0.05, h: 1.0 / 512.0, t_end: 1.5, length: 2.0, ..Default::default() };
        let r = run_reflection(&cfg).unwrap();
        assert!(r.sup_error < 0.1, "{}", r.sup_error);
        assert!((r.value_at_1 - r.exact_at_1).abs() < 5e-2);
    }
}
