use serde::Serialize;

use super::fdtd::FdtdState;
use super::Energy;
use crate::error::{Error, Result};
use crate::space::{CauchyData, PhysicalParams};

/// Finite-speed diagnostics for one FDTD run from compactly supported data.
#[derive(Debug, Clone, Serialize)]
pub struct CausalityReport {
    /// Initial support `[a, b]`.
    pub support: (f64, f64),
    /// Time of first boundary contact of the physical cone.
    pub contact_time: f64,
    /// `max |φ|` outside the discrete cone plus one stencil, up to contact.
    pub max_outside_discrete: f64,
    /// `max |φ|` outside the physical cone `[a − t, b + t]` plus one stencil,
    /// up to contact. Informational: leapfrog leaks dispersive precursors here.
    pub max_outside_physical: f64,
    /// Largest fraction of the total energy found outside the causal future
    /// of the support, over the whole run.
    pub max_energy_fraction_outside: f64,
    pub t_end: f64,
    pub pass: bool,
}

/// `D⁺([a, b]) ∩ Σ_t` for the one-dimensional cross-section: each end
/// moves inward at unit speed unless it sits on a boundary component, in
/// which case it stays put. `None` once the interval has closed.
pub fn dependence_interval(params: &PhysicalParams, interval: (f64, f64), t: f64) -> Result<Option<(f64, f64)>> {
    let (lo_edge, hi_edge) = domain(params)?;
    let (a, b) = interval;
    if a > b {
        return Err(Error::InvalidParameter(format!("empty interval [{a}, {b}]")));
    }
    for z in [a, b] {
        if z < lo_edge - 1e-12 || z > hi_edge + 1e-12 {
            return Err(Error::OutsideDomain { z, lo: lo_edge, hi: hi_edge });
        }
    }
    let touches = |z: f64, e: f64| (z - e).abs() <= 1e-12;
    let lo = if touches(a, lo_edge) { a } else { a + t };
    let hi = if touches(b, hi_edge) { b } else { b - t };
    Ok((lo <= hi).then_some((lo, hi)))
}

fn domain(params: &PhysicalParams) -> Result<(f64, f64)> {
    match params.half_width() {
        Ok(s) => Ok((-s, s)),
        Err(_) => Ok((0.0, f64::INFINITY)),
    }
}

/// Result of the local energy estimate on a domain of dependence.
#[derive(Debug, Clone, Serialize)]
pub struct LocalEnergyReport {
    pub initial: f64,
    pub final_energy: f64,
    pub interval_final: Option<(f64, f64)>,
    pub pass: bool,
}

/// Checks `E_{D⁺ ∩ Σ_t}(t) ≤ E_{[a,b]}(0)` along an FDTD run, with a relative
/// slack `tol` for the discrete energy's `O(dt²)` wobble.
pub fn local_energy_estimate(
    params: &PhysicalParams,
    data: &CauchyData,
    interval: (f64, f64),
    t: f64,
    cfl: f64,
    tol: f64,
) -> Result<LocalEnergyReport> {
    let mut state = FdtdState::from_cauchy(params, data, cfl)?;
    let initial = state.energy_in(interval.0, interval.1).total;
    let scale = state.energy().total.max(f64::MIN_POSITIVE);
    let mut pass = true;
    let mut last = None;
    let mut final_energy = initial;
    while state.time() < t - 0.5 * state.dt() {
        state.step();
        // energy_in is centred at t − dt/2
        let tc = state.time() - 0.5 * state.dt();
        match dependence_interval(params, interval, tc)? {
            Some((lo, hi)) => {
                final_energy = state.energy_in(lo, hi).total;
                last = Some((lo, hi));
                if final_energy > initial + tol * scale {
                    pass = false;
                }
            }
            None => break,
        }
    }
    Ok(LocalEnergyReport { initial, final_energy, interval_final: last, pass })
}

/// Runs FDTD from `data` (supported in `support`) up to `t_end` and checks
/// that nothing appears outside the discrete cone before boundary contact
/// (threshold `tol`), and that the energy outside the causal future of the
/// support stays below `energy_tol` of the total.
pub fn causality_probe(
    params: &PhysicalParams,
    data: &CauchyData,
    support: (f64, f64),
    t_end: f64,
    cfl: f64,
    tol: f64,
    energy_tol: f64,
) -> Result<CausalityReport> {
    let (lo_edge, hi_edge) = domain(params)?;
    let mut state = FdtdState::from_cauchy(params, data, cfl)?;
    let grid = *state.grid();
    let (z0, z1) = (grid.z_min(), grid.z_max());
    let h = grid.spacing();
    let contact_time = (support.0 - lo_edge).min(hi_edge - support.1).max(0.0);
    // Interior stencil reaches one node per step; the halo is one stencil width.
    let halo = 2.0 * h;
    let mut max_disc = 0.0f64;
    let mut max_phys = 0.0f64;
    let mut max_frac = 0.0f64;
    let total = state.energy().total;
    while state.time() < t_end - 0.5 * state.dt() {
        state.step();
        let t = state.time();
        if t <= contact_time {
            let r_disc = state.steps() as f64 * h + halo;
            for (i, &v) in state.phi().iter().enumerate() {
                let z = grid.node(i);
                if z < support.0 - r_disc || z > support.1 + r_disc {
                    max_disc = max_disc.max(v.abs());
                }
                if z < support.0 - t - halo || z > support.1 + t + halo {
                    max_phys = max_phys.max(v.abs());
                }
            }
        }
        let tc = t - 0.5 * state.dt();
        let lo = (support.0 - tc - halo).max(z0);
        let hi = (support.1 + tc + halo).min(z1);
        if total > 0.0 {
            let inside = state.energy_in(lo, hi).total;
            let all = state.energy().total;
            max_frac = max_frac.max((all - inside).max(0.0) / total);
        }
    }
    Ok(CausalityReport {
        support,
        contact_time,
        max_outside_discrete: max_disc,
        max_outside_physical: max_phys,
        max_energy_fraction_outside: max_frac,
        t_end: state.time(),
        pass: max_disc < tol && max_frac <= energy_tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{BulkBoundaryFunction, Grid1D};

    fn bump(z: f64, center: f64, width: f64) -> f64 {
        let u = (z - center) / width;
        if u.abs() >= 1.0 {
            0.0
        } else {
            (1.0 - u * u).powi(4)
        }
    }

    fn data(p: &PhysicalParams, n: usize, center: f64, width: f64) -> CauchyData {
        let g = Grid1D::for_strip(p, n).unwrap();
        let pos = BulkBoundaryFunction::from_fn(g, 2, |z| bump(z, center, width)).unwrap();
        CauchyData::new(pos, BulkBoundaryFunction::zeros(g, 2).unwrap()).unwrap()
    }

    #[test]
    fn dependence_interval_shrinks_or_pins() {
        let p = PhysicalParams::strip(1.0, 1.0, 0.0).unwrap();
        assert_eq!(dependence_interval(&p, (-0.5, 0.5), 0.2).unwrap(), Some((-0.3, 0.3)));
        let pinned = dependence_interval(&p, (-1.0, 0.0), 0.5).unwrap().unwrap();
        assert_eq!(pinned.0, -1.0);
        assert!((pinned.1 + 0.5).abs() < 1e-15);
        assert_eq!(dependence_interval(&p, (-0.1, 0.1), 0.2).unwrap(), None);
    }

    #[test]
    fn nothing_outside_discrete_cone() {
        let p = PhysicalParams::strip(1.0, 1.0, 1.0).unwrap();
        let d = data(&p, 1025, 0.0, 0.25);
        let r = causality_probe(&p, &d, (-0.25, 0.25), 2.0, 0.5, 1e-8, 1e-3).unwrap();
        assert!((r.contact_time - 0.75).abs() < 1e-12);
        assert!(r.max_outside_discrete < 1e-8, "{r:?}");
        assert!(r.max_energy_fraction_outside <= 1e-3, "{r:?}");
    }

    #[test]
    fn local_energy_does_not_grow() {
        let p = PhysicalParams::strip(1.0, 1.0, 1.0).unwrap();
        let d = data(&p, 1025, -0.6, 0.3);
        let r = local_energy_estimate(&p, &d, (-1.0, 0.0), 0.9, 0.5, 1e-4).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.final_energy <= r.initial * (1.0 + 1e-4));
    }
}
