//! Boundary two-point functions of the quantized field.
//!
//! Restricted to a boundary component, the field is a generalized free field:
//! a superposition of free fields of masses `μ_m = √(q_m² + μ²)` with weights
//! `d_m²` (strip) or `2/(π(c²q² + 1)) dq` (half-space). Everything here works
//! from those weights and the standard massive kernels.
//!
//! Fourier convention for smeared coefficients:
//! `f̂^±_m = (2π)^{-1/2} ∫ dt ⟨Φ_m, F(t)⟩ e^{±iω_m t}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modes::ModeTable;
use crate::space::{
    weighted_inner_product, BulkBoundaryFunction, Geometry, Grid1D, PhysicalParams, Quadrature,
    Side,
};
use crate::special::{bessel_j0, bessel_k, integrate, integrate_complex, integrate_to_infinity, trigamma};

/// Which boundary, and how the spectral sum is cut off.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPointSpec {
    params: PhysicalParams,
    side: Side,
    cutoff: Cutoff,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cutoff {
    /// Modes `0..=M` of a strip table.
    Modes(usize),
    /// `q ∈ [0, q_max]` for the half-space.
    Momentum(f64),
}

impl TwoPointSpec {
    pub fn strip(params: PhysicalParams, side: Side, m_cutoff: usize) -> Result<Self> {
        params.half_width()?;
        if m_cutoff < 1 {
            return Err(Error::InvalidParameter("mode cutoff must be at least 1".into()));
        }
        Self::check_infrared(&params)?;
        Ok(Self { params, side, cutoff: Cutoff::Modes(m_cutoff) })
    }

    pub fn half_space(params: PhysicalParams, q_max: f64) -> Result<Self> {
        if params.geometry() != Geometry::HalfSpace {
            return Err(Error::GeometryMismatch("expected half-space geometry".into()));
        }
        if !(q_max > 0.0) {
            return Err(Error::InvalidParameter(format!("q_max must be positive, got {q_max}")));
        }
        Self::check_infrared(&params)?;
        Ok(Self { params, side: Side::Plus, cutoff: Cutoff::Momentum(q_max) })
    }

    fn check_infrared(params: &PhysicalParams) -> Result<()> {
        if params.dim() <= 2 && params.mu() <= 0.0 {
            return Err(Error::Divergent(format!(
                "massless boundary field in d = {} is infrared divergent; take μ > 0",
                params.dim()
            )));
        }
        Ok(())
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn cutoff(&self) -> Cutoff {
        self.cutoff
    }

    pub fn dim(&self) -> u32 {
        self.params.dim()
    }

    fn modes(&self, table: &ModeTable) -> Result<usize> {
        let Cutoff::Modes(m) = self.cutoff else {
            return Err(Error::GeometryMismatch("two-point setup has a momentum cutoff".into()));
        };
        if m > table.m_max() {
            return Err(Error::InvalidParameter(format!(
                "cutoff {m} exceeds table size {}",
                table.m_max()
            )));
        }
        if table.c() != self.params.c() || table.mu() != self.params.mu() {
            return Err(Error::InvalidParameter("table was built for different parameters".into()));
        }
        Ok(m)
    }
}

/// A truncated spectral sum with a bound on what was dropped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoPointValue {
    pub value: Complex64,
    pub tail_bound: f64,
    /// Quadrature error estimate (half-space only).
    pub quadrature_error: f64,
}

/// `(2π)^{-d/2} μ^{d/2−1} r^{1−d/2} K_{d/2−1}(μr)`: the massive Wightman
/// function at spacelike invariant distance `r`. Decreasing in `μ`.
fn bessel_kernel(mu: f64, r: f64, d: u32) -> f64 {
    let nu = 0.5 * d as f64 - 1.0;
    if mu == 0.0 {
        // massless limit, d > 2: Γ(ν)/(4π^{d/2}) r^{−2ν}
        let gamma = puruspe::gamma(nu);
        return gamma / (4.0 * PI.powf(0.5 * d as f64)) * r.powf(-2.0 * nu);
    }
    (2.0 * PI).powf(-0.5 * d as f64) * mu.powf(nu) * r.powf(-nu) * bessel_k(nu, mu * r)
}

fn d1_kernel(mu: f64, x0: f64) -> Complex64 {
    Complex64::from_polar(1.0 / (2.0 * mu), -mu * x0)
}

/// `1/c − Σ_{m≤M} d_m²`: the exact weight left beyond the cutoff, from
/// completeness of the modes applied to `(0, δ_{∂₊})`.
pub fn strip_weight_remainder(table: &ModeTable, m: usize) -> f64 {
    let partial: f64 = table.entries()[..=m].iter().map(|e| e.d_bdy * e.d_bdy).sum();
    (1.0 / table.c() - partial).max(0.0)
}

/// Lower bound on `μ_m` for `m > M`: brackets give `q_m > (m − 1)π/(2S)`.
fn mu_lower_beyond(table: &ModeTable, m: usize) -> f64 {
    let q = m as f64 * PI / (2.0 * table.half_width());
    (q * q + table.mu() * table.mu()).sqrt()
}

/// `Δ₊|_±(x⁰, x) = Σ_{m≤M} d_m² Δ₊^{μ_m}(x⁰, x)`, `x` the norm of the
/// spatial separation. `d = 1` uses `e^{−iμx⁰}/(2μ)` at any `x⁰`; `d ≥ 2`
/// is available at spacelike separation only.
pub fn boundary_2pt_strip(x0: f64, x: f64, spec: &TwoPointSpec, table: &ModeTable) -> Result<TwoPointValue> {
    let m = spec.modes(table)?;
    let d = spec.dim();
    if d >= 2 {
        let x2 = x * x - x0 * x0;
        return spacelike_2pt_bessel(x2, spec, table);
    }
    let mut value = Complex64::new(0.0, 0.0);
    for e in &table.entries()[..=m] {
        let mu_m = e.omega(0.0, table.mu());
        if mu_m == 0.0 {
            return Err(Error::Divergent("zero mode with μ = 0 has a divergent d = 1 kernel".into()));
        }
        value += d1_kernel(mu_m, x0) * (e.d_bdy * e.d_bdy);
    }
    let tail_bound = strip_weight_remainder(table, m) / (2.0 * mu_lower_beyond(table, m));
    Ok(TwoPointValue { value, tail_bound, quadrature_error: 0.0 })
}

/// Spacelike mode sum `Σ_m d_m² (2π)^{-d/2} μ_m^{d/2−1} |x²|^{1/2−d/4} K_{d/2−1}(μ_m √x²)`.
pub fn spacelike_2pt_bessel(x2: f64, spec: &TwoPointSpec, table: &ModeTable) -> Result<TwoPointValue> {
    let m = spec.modes(table)?;
    let d = spec.dim();
    if d < 2 {
        return Err(Error::Unsupported("the Bessel form needs d ≥ 2".into()));
    }
    if !(x2 > 0.0) {
        return Err(Error::InvalidParameter(format!("x² = {x2} is not spacelike")));
    }
    let r = x2.sqrt();
    let mut value = 0.0;
    for e in &table.entries()[..=m] {
        let mu_m = e.omega(0.0, table.mu());
        value += e.d_bdy * e.d_bdy * bessel_kernel(mu_m, r, d);
    }
    let tail_bound = strip_weight_remainder(table, m) * bessel_kernel(mu_lower_beyond(table, m), r, d);
    Ok(TwoPointValue { value: Complex64::new(value, 0.0), tail_bound, quadrature_error: 0.0 })
}

/// Half-space spectral weight `2/(π(c²q² + 1))`.
pub fn halfspace_weight(q: f64, c: f64) -> f64 {
    2.0 / (PI * (c * c * q * q + 1.0))
}

/// `∫₀^∞ 2/(π(c²q² + 1)) dq`, which equals `1/c`.
pub fn halfspace_weight_total(c: f64) -> f64 {
    integrate_to_infinity(|q| halfspace_weight(q, c), 0.0, 1e-14, 1e-14).value
}

/// `∫₀^{q_max} dq 2/(π(c²q² + 1)) Δ₊^{√(μ² + q²)}(x⁰, x)`.
pub fn boundary_2pt_halfspace(x0: f64, x: f64, spec: &TwoPointSpec) -> Result<TwoPointValue> {
    let Cutoff::Momentum(q_max) = spec.cutoff else {
        return Err(Error::GeometryMismatch("two-point setup has a mode cutoff".into()));
    };
    let (c, mu, d) = (spec.params.c(), spec.params.mu(), spec.dim());
    let mass = |q: f64| (q * q + mu * mu).sqrt();
    if d == 1 {
        let r = integrate_complex(|q| d1_kernel(mass(q), x0) * halfspace_weight(q, c), 0.0, q_max, 1e-12, 1e-12);
        let tail_bound = 1.0 / (PI * c * c * mu * q_max);
        return Ok(TwoPointValue { value: r.value, tail_bound, quadrature_error: r.error });
    }
    let x2 = x * x - x0 * x0;
    if !(x2 > 0.0) {
        return Err(Error::Unsupported("d ≥ 2 half-space kernel is implemented at spacelike points".into()));
    }
    let r = x2.sqrt();
    let res = integrate(|q| halfspace_weight(q, c) * bessel_kernel(mass(q), r, d), 0.0, q_max, 1e-13, 1e-12);
    let tail_bound = 2.0 / (PI * c * c * q_max) * bessel_kernel(mass(q_max), r, d);
    Ok(TwoPointValue { value: Complex64::new(res.value, 0.0), tail_bound, quadrature_error: res.error })
}

/// `[φ(x), φ(0)]` for a free field of mass `mass`: `−i sin(μx⁰)/μ` in
/// `d = 1`, `−(i/2) sgn(x⁰) θ(x⁰² − x²) J₀(μ√(x⁰² − x²))` in `d = 2`.
pub fn pauli_jordan(mass: f64, x0: f64, x: f64, d: u32) -> Result<Complex64> {
    match d {
        1 => {
            let v = if mass == 0.0 { x0 } else { (mass * x0).sin() / mass };
            Ok(Complex64::new(0.0, -v))
        }
        2 => {
            let tau2 = x0 * x0 - x * x;
            if tau2 <= 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            Ok(Complex64::new(0.0, -0.5 * x0.signum() * bessel_j0(mass * tau2.sqrt())))
        }
        _ => Err(Error::Unsupported(format!("commutator closed form for d = {d}"))),
    }
}

/// Boundary commutator `Σ_{m≤M} d_m² [φ, φ]^{μ_m}(x⁰, x)`.
pub fn commutator_boundary(x0: f64, x: f64, spec: &TwoPointSpec, table: &ModeTable) -> Result<Complex64> {
    let m = spec.modes(table)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for e in &table.entries()[..=m] {
        acc += pauli_jordan(e.omega(0.0, table.mu()), x0, x, spec.dim())? * (e.d_bdy * e.d_bdy);
    }
    Ok(acc)
}

#[derive(Debug, Clone, Serialize)]
pub struct CommutatorCheck {
    pub points: usize,
    /// Largest `|[φ, φ]|` over the points and over all partial sums.
    pub max_abs: f64,
    pub pass: bool,
}

/// Checks that every partial sum of the commutator vanishes at the given
/// spacelike points `(x⁰, |x|)`.
pub fn causality_check(points: &[(f64, f64)], spec: &TwoPointSpec, table: &ModeTable, tol: f64) -> Result<CommutatorCheck> {
    let m = spec.modes(table)?;
    let mut max_abs = 0.0f64;
    for &(x0, x) in points {
        if x * x - x0 * x0 <= 0.0 {
            return Err(Error::InvalidParameter(format!("({x0}, {x}) is not spacelike")));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for e in &table.entries()[..=m] {
            acc += pauli_jordan(e.omega(0.0, table.mu()), x0, x, spec.dim())? * (e.d_bdy * e.d_bdy);
            max_abs = max_abs.max(acc.norm());
        }
    }
    Ok(CommutatorCheck { points: points.len(), max_abs, pass: max_abs < tol })
}

/// Convergence of `Σ d_m²` against the asymptotic law.
#[derive(Debug, Clone, Serialize)]
pub struct TailReport {
    pub m: usize,
    pub partial_sum: f64,
    /// `1/c − Σ_{m≤M} d_m²`.
    pub observed_tail: f64,
    /// `4S/(c²π²) Σ_{m>M} (m − 1)^{-2} = 4S/(c²π²) ψ'(M)`.
    pub analytic_tail: f64,
    pub ratio: f64,
    /// `Σ_{M<m≤2M} d_m²` and the bound `(1 + δ)²·4S/(c²π²)(ψ'(M) − ψ'(2M))`
    /// with `δ = 0.1`, when the table reaches `2M`.
    pub cauchy_step: Option<(f64, f64)>,
    pub pass: bool,
}

pub fn tail_convergence(table: &ModeTable, m: usize) -> Result<TailReport> {
    if m < 2 || m > table.m_max() {
        return Err(Error::InvalidParameter(format!(
            "tail check needs 2 ≤ M ≤ {}, got {m}",
            table.m_max()
        )));
    }
    let (s, c) = (table.half_width(), table.c());
    let scale = 4.0 * s / (c * c * PI * PI);
    let partial_sum: f64 = table.entries()[..=m].iter().map(|e| e.d_bdy * e.d_bdy).sum();
    let observed_tail = strip_weight_remainder(table, m);
    let analytic_tail = scale * trigamma(m as f64);
    let ratio = observed_tail / analytic_tail;
    let cauchy_step = (2 * m <= table.m_max()).then(|| {
        let step: f64 = table.entries()[m + 1..=2 * m].iter().map(|e| e.d_bdy * e.d_bdy).sum();
        let bound = 1.1f64.powi(2) * scale * (trigamma(m as f64) - trigamma(2.0 * m as f64));
        (step, bound)
    });
    let pass = (0.8..=1.2).contains(&ratio) && cauchy_step.map_or(true, |(v, b)| v <= b);
    Ok(TailReport { m, partial_sum, observed_tail, analytic_tail, ratio, cauchy_step, pass })
}

/// Block sums of `w_m²` over `[M, 2M)`, `[2M, 4M)`, … For square-summable
/// weights decaying like `1/m` each block is about half the previous one;
/// constant weights double instead.
#[derive(Debug, Clone, Serialize)]
pub struct SquareSumDiagnostic {
    pub blocks: Vec<f64>,
    pub divergent: bool,
}

pub fn square_sum_diagnostic(weights: &[f64], m: usize) -> Result<SquareSumDiagnostic> {
    if m == 0 || weights.len() < 4 * m {
        return Err(Error::InvalidParameter(format!(
            "need at least {} weights for blocks starting at {m}",
            4 * m
        )));
    }
    let mut blocks = Vec::new();
    let mut lo = m;
    while 2 * lo <= weights.len() {
        blocks.push(weights[lo..2 * lo].iter().map(|w| w * w).sum());
        lo *= 2;
    }
    let divergent = blocks.windows(2).any(|b| b[1] >= 0.9 * b[0]);
    Ok(SquareSumDiagnostic { blocks, divergent })
}

/// A space-time test function sampled at `times`, each frame a bulk ⊕
/// boundary function on a common grid.
#[derive(Debug, Clone)]
pub struct SpaceTimeSamples {
    times: Vec<f64>,
    frames: Vec<BulkBoundaryFunction>,
}

impl SpaceTimeSamples {
    pub fn new(times: Vec<f64>, frames: Vec<BulkBoundaryFunction>) -> Result<Self> {
        if times.len() != frames.len() || times.len() < 2 {
            return Err(Error::InvalidParameter("need matching times and frames, at least two".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("times must increase".into()));
        }
        let grid = *frames[0].grid();
        if frames.iter().any(|f| *f.grid() != grid) {
            return Err(Error::GridMismatch("frames live on different grids".into()));
        }
        Ok(Self { times, frames })
    }

    /// Samples `bulk(t, z)` and `boundary(t, k)` (`k = 0` at `z_min`, `1` at `z_max`).
    pub fn from_fn(
        times: Vec<f64>,
        grid: Grid1D,
        components: usize,
        bulk: impl Fn(f64, f64) -> f64,
        boundary: impl Fn(f64, usize) -> f64,
    ) -> Result<Self> {
        let nodes = grid.nodes();
        let frames = times
            .iter()
            .map(|&t| {
                let b: Vec<f64> = nodes.iter().map(|&z| bulk(t, z)).collect();
                let s: Vec<f64> = (0..components).map(|k| boundary(t, k)).collect();
                BulkBoundaryFunction::from_real(grid, &b, &s)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(times, frames)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn frames(&self) -> &[BulkBoundaryFunction] {
        &self.frames
    }

    pub fn grid(&self) -> &Grid1D {
        self.frames[0].grid()
    }
}

/// `(f̂⁺_m, f̂⁻_m)` for every mode of a table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmearedCoefficients {
    pub omegas: Vec<f64>,
    pub plus: Vec<Complex64>,
    pub minus: Vec<Complex64>,
}

impl SmearedCoefficients {
    /// `max_m |f̂⁻_m − conj f̂⁺_m|`; zero for real test functions.
    pub fn reality_residual(&self) -> f64 {
        self.plus.iter().zip(&self.minus).map(|(p, m)| (m - p.conj()).norm()).fold(0.0, f64::max)
    }
}

/// Relative size of the end frames above which the time grid is said not
/// to cover the support.
const SUPPORT_TOL: f64 = 1e-10;

/// Smeared mode coefficients of a space-time test function, time integral
/// by the trapezoid rule.
pub fn smeared_coeffs(f: &SpaceTimeSamples, table: &ModeTable) -> Result<SmearedCoefficients> {
    smeared_coeffs_with(f, table, SUPPORT_TOL)
}

/// As [`smeared_coeffs`], with the end frames allowed to reach
/// `support_tol` of the peak (for slowly decaying, non-compact data).
pub fn smeared_coeffs_with(f: &SpaceTimeSamples, table: &ModeTable, support_tol: f64) -> Result<SmearedCoefficients> {
    let params = table.params();
    let grid = *f.grid();
    let modes: Vec<BulkBoundaryFunction> = (0..table.len())
        .map(|m| crate::modes::mode_function(table, m, &grid))
        .collect::<Result<_>>()?;
    // a[m][j] = ⟨Φ_m, F(t_j)⟩
    let a: Vec<Vec<Complex64>> = modes
        .iter()
        .map(|mode| f.frames.iter().map(|fr| weighted_inner_product(mode, fr, &params)).collect())
        .collect::<Result<_>>()?;
    let peak = a.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
    let last = f.times.len() - 1;
    let edge = a.iter().map(|row| row[0].norm().max(row[last].norm())).fold(0.0, f64::max);
    if edge > support_tol * peak.max(f64::MIN_POSITIVE) {
        return Err(Error::SupportNotCovered(format!(
            "end frames reach {:.3e} of the peak coefficient; widen the time grid",
            edge / peak
        )));
    }
    let norm = (2.0 * PI).powf(-0.5);
    let omegas = table.omegas();
    let mut plus = Vec::with_capacity(table.len());
    let mut minus = Vec::with_capacity(table.len());
    for (row, &w) in a.iter().zip(&omegas) {
        let (p, m) = trapezoid_fourier(&f.times, row, w);
        plus.push(p * norm);
        minus.push(m * norm);
    }
    Ok(SmearedCoefficients { omegas, plus, minus })
}

/// `(∫ y e^{iωt}, ∫ y e^{−iωt})` by the trapezoid rule on `times`.
fn trapezoid_fourier(times: &[f64], y: &[Complex64], w: f64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut m = Complex64::new(0.0, 0.0);
    for j in 0..times.len() {
        let left = if j > 0 { times[j] - times[j - 1] } else { 0.0 };
        let right = if j + 1 < times.len() { times[j + 1] - times[j] } else { 0.0 };
        let weight = 0.5 * (left + right);
        let e = Complex64::from_polar(1.0, w * times[j]);
        p += y[j] * e * weight;
        m += y[j] * e.conj() * weight;
    }
    (p, m)
}

/// Bulk ⊕ boundary function realizing `δ(z − z_node)` under the default
/// quadrature: `1/w` at the node nearest `z`, zero elsewhere and on the boundary.
pub fn discrete_delta(grid: &Grid1D, z: f64, components: usize) -> Result<BulkBoundaryFunction> {
    let i = grid.nearest(z);
    let w = grid.weights(Quadrature::default());
    let mut bulk = vec![0.0; grid.len()];
    bulk[i] = 1.0 / w[i];
    BulkBoundaryFunction::from_real(*grid, &bulk, &vec![0.0; components])
}

/// Two-point pairing `ω(φ(f) φ(g)) = Σ_m π/ω_m f̂⁻_m ĝ⁺_m`, for either bulk
/// smearings or boundary smearings expressed through the same mode data.
pub fn smeared_two_point(f: &SmearedCoefficients, g: &SmearedCoefficients) -> Result<Complex64> {
    if f.omegas.len() != g.omegas.len() {
        return Err(Error::InvalidParameter("coefficient sets have different lengths".into()));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for ((w, a), b) in f.omegas.iter().zip(&f.minus).zip(&g.plus) {
        if a.norm() == 0.0 && b.norm() == 0.0 {
            continue;
        }
        if *w == 0.0 {
            return Err(Error::Divergent("pairing through a massless zero mode".into()));
        }
        acc += a * b * (PI / w);
    }
    Ok(acc)
}

/// Residuals of the source relation at the coefficient level.
#[derive(Debug, Clone, Serialize)]
pub struct SourceRelationReport {
    pub modes: usize,
    /// `max_m |LHS_m − RHS_m|` with the Wentzell boundary couplings.
    pub max_residual: f64,
    /// Same with `d_m` replaced by the constant `d₀` (Neumann-like weights).
    pub negative_control: f64,
    pub pass: bool,
}

/// Mode-coefficient form of
/// `φ|_±((−□ + μ²) g) = ±c⁻¹ φ_bulk(g δ'(z ∓ S))` in `d = 1`.
///
/// Left side: the boundary coefficient `(Φ_m|_±)(2π)^{-1/2} ∫ (g'' + μ²g) e^{iω_m t}`.
/// Right side: `±c⁻¹ (−Φ_m'(±S)) (2π)^{-1/2} ∫ g e^{iω_m t}`, using
/// `∫ Φ δ'(z − z₀) = −Φ'(z₀)`. Both time integrals by the trapezoid rule.
pub fn source_relation_check(
    g: impl Fn(f64) -> f64,
    g_second: impl Fn(f64) -> f64,
    times: &[f64],
    side: Side,
    table: &ModeTable,
    m_max: usize,
) -> Result<SourceRelationReport> {
    if m_max > table.m_max() {
        return Err(Error::InvalidParameter(format!("M = {m_max} exceeds the table")));
    }
    let (s, c, mu) = (table.half_width(), table.c(), table.mu());
    let g_vals: Vec<Complex64> = times.iter().map(|&t| Complex64::new(g(t), 0.0)).collect();
    let h_vals: Vec<Complex64> = times
        .iter()
        .map(|&t| Complex64::new(g_second(t) + mu * mu * g(t), 0.0))
        .collect();
    let z0 = match side {
        Side::Plus => s,
        Side::Minus => -s,
    };
    let sign = match side {
        Side::Plus => 1.0,
        Side::Minus => -1.0,
    };
    let norm = (2.0 * PI).powf(-0.5);
    let d0 = table.entry(0).d_bdy;
    let mut max_residual = 0.0f64;
    let mut negative_control = 0.0f64;
    for e in &table.entries()[..=m_max] {
        let w = e.omega(0.0, mu);
        let h_hat = trapezoid_fourier(times, &h_vals, w).0 * norm;
        let g_hat = trapezoid_fourier(times, &g_vals, w).0 * norm;
        let rhs = g_hat * (-sign / c * e.profile_derivative(z0, s));
        let lhs = h_hat * e.boundary_value(side);
        max_residual = max_residual.max((lhs - rhs).norm());
        let control = h_hat * (side.mode_sign(e.m) * d0);
        negative_control = negative_control.max((control - rhs).norm());
    }
    Ok(SourceRelationReport {
        modes: m_max + 1,
        max_residual,
        negative_control,
        pass: max_residual < 1e-8 && negative_control > 1e-8,
    })
}
