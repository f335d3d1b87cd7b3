use std::sync::Arc;

use num_complex::Complex64;

use super::{Energy, EnergyReport};
use crate::error::{Error, Result};
use crate::modes::{project, synthesize, ModeTable};
use crate::space::{spectral_sobolev_norm, CauchyData, Grid1D, Side};

/// Position and velocity mode coefficients at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralState {
    table: Arc<ModeTable>,
    k: f64,
    a: Vec<f64>,
    b: Vec<f64>,
    t: f64,
}

impl SpectralState {
    pub fn new(table: Arc<ModeTable>, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        Self::with_momentum(table, 0.0, a, b)
    }

    /// State at transverse momentum `k`; `ω² = k² + q² + μ²`.
    pub fn with_momentum(table: Arc<ModeTable>, k: f64, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != table.len() || b.len() != table.len() {
            return Err(Error::InvalidParameter(format!(
                "coefficient lengths {} / {} do not match {} modes",
                a.len(),
                b.len(),
                table.len()
            )));
        }
        Ok(Self { table, k, a, b, t: 0.0 })
    }

    /// Projects (the real parts of) Cauchy data onto the table.
    pub fn from_cauchy(table: Arc<ModeTable>, data: &CauchyData) -> Result<Self> {
        let a = project(data.position(), &table)?.iter().map(|v| v.re).collect();
        let b = project(data.velocity(), &table)?.iter().map(|v| v.re).collect();
        Self::new(table, a, b)
    }

    pub fn table(&self) -> &ModeTable {
        &self.table
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn position(&self) -> &[f64] {
        &self.a
    }

    pub fn velocity(&self) -> &[f64] {
        &self.b
    }

    pub fn omega(&self, m: usize) -> f64 {
        self.table.entry(m).omega(self.k, self.table.mu())
    }

    /// Advances by `dt`.
    pub fn evolve(&self, dt: f64) -> Self {
        let mut next = self.clone();
        for m in 0..self.a.len() {
            let w = self.omega(m);
            let (a, b) = (self.a[m], self.b[m]);
            if w == 0.0 {
                next.a[m] = a + b * dt;
                next.b[m] = b;
            } else {
                let (s, c) = (w * dt).sin_cos();
                next.a[m] = a * c + b * s / w;
                next.b[m] = -a * w * s + b * c;
            }
        }
        next.t = self.t + dt;
        next
    }

    /// `σ(self, other) = Σ_m (a_m b'_m − b_m a'_m)`.
    pub fn symplectic(&self, other: &Self) -> f64 {
        self.a
            .iter()
            .zip(&self.b)
            .zip(other.a.iter().zip(&other.b))
            .map(|((a, b), (a2, b2))| a * b2 - b * a2)
            .sum()
    }

    /// `‖Φ(t)‖²_{𝒟_{r+1}} + ‖∂_tΦ(t)‖²_{𝒟_r}`.
    pub fn global_norm_sq(&self, r: f64) -> Result<f64> {
        let to_c = |v: &[f64]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>();
        let p = spectral_sobolev_norm(&to_c(&self.a), &self.table, r + 1.0)?;
        let v = spectral_sobolev_norm(&to_c(&self.b), &self.table, r)?;
        Ok(p * p + v * v)
    }

    /// Field value at the boundary component `side`.
    pub fn boundary_value(&self, side: Side) -> (f64, f64) {
        self.table
            .entries()
            .iter()
            .zip(self.a.iter().zip(&self.b))
            .fold((0.0, 0.0), |(p, v), (e, (a, b))| {
                let d = e.boundary_value(side);
                (p + a * d, v + b * d)
            })
    }

    /// Samples position and velocity on `grid`.
    pub fn to_cauchy(&self, grid: &Grid1D) -> Result<CauchyData> {
        let to_c = |v: &[f64]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>();
        CauchyData::new(
            synthesize(&to_c(&self.a), &self.table, grid)?,
            synthesize(&to_c(&self.b), &self.table, grid)?,
        )
    }
}

/// Exact propagator: returns the state advanced by `t`.
pub fn spectral_evolve(state: &SpectralState, t: f64) -> SpectralState {
    state.evolve(t)
}

impl Energy for SpectralState {
    /// Total `½Σ(b² + ω²a²)`; the boundary part comes from the boundary values
    /// directly, the bulk part is the remainder.
    fn energy(&self) -> EnergyReport {
        let total: f64 = (0..self.a.len())
            .map(|m| {
                let w = self.omega(m);
                0.5 * (self.b[m] * self.b[m] + w * w * self.a[m] * self.a[m])
            })
            .sum();
        let mass2 = self.k * self.k + self.table.mu() * self.table.mu();
        let boundary: f64 = [Side::Minus, Side::Plus]
            .iter()
            .map(|&s| {
                let (p, v) = self.boundary_value(s);
                0.5 * self.table.c() * (v * v + mass2 * p * p)
            })
            .sum();
        EnergyReport { bulk: total - boundary, boundary, total }
    }
}
