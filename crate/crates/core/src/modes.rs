//! Transverse mode spectrum of the strip and the half-space.
//!
//! On the strip the eigenfunctions are `cos(q z)` (even) and `sin(q z)`
//! (odd) with the wavenumbers fixed by the boundary equation
//!
//! ```text
//! even:  c⁻¹ tan(qS) = −q        odd:  q tan(qS) = c⁻¹
//! ```
//!
//! Each root sits in a known half-period bracket, so the solver bisects
//! inside the bracket and finishes with a few safeguarded Newton steps. The
//! equations are evaluated in the pole-free phase form
//! `(sin qS + c q cos qS)/√(1 + c²q²)` (even) and
//! `(c q sin qS − cos qS)/√(1 + c²q²)` (odd), which vanish at the same roots
//! and stay well conditioned for large `q`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{
    weighted_inner_product, BulkBoundaryFunction, Geometry, Grid1D, PhysicalParams, Side,
};

/// Default bound on the phase residual of returned roots.
pub const RESIDUAL_TOL: f64 = 1e-12;

const MAX_NEWTON: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(m: usize) -> Self {
        if m % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// One normalized strip mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeEntry {
    pub m: usize,
    pub q: f64,
    pub parity: Parity,
    /// Normalization `c_m`, positive by convention.
    pub c_norm: f64,
    /// Boundary value `d_m` at `∂₊`; at `∂₋` the mode takes `(−1)^m d_m`.
    pub d_bdy: f64,
}

impl ModeEntry {
    pub fn omega_sq(&self, k: f64, mu: f64) -> f64 {
        k * k + self.q * self.q + mu * mu
    }

    /// `ω_{k,m} = √(k² + q_m² + μ²)`.
    pub fn omega(&self, k: f64, mu: f64) -> f64 {
        self.omega_sq(k, mu).sqrt()
    }

    /// `c_m S^{-1/2} cos(q z)` or `c_m S^{-1/2} sin(q z)`; no domain check.
    pub fn profile(&self, z: f64, half_width: f64) -> f64 {
        let a = self.c_norm / half_width.sqrt();
        match self.parity {
            Parity::Even => a * (self.q * z).cos(),
            Parity::Odd => a * (self.q * z).sin(),
        }
    }

    /// `∂_z` of [`ModeEntry::profile`].
    pub fn profile_derivative(&self, z: f64, half_width: f64) -> f64 {
        let a = self.c_norm / half_width.sqrt() * self.q;
        match self.parity {
            Parity::Even => -a * (self.q * z).sin(),
            Parity::Odd => a * (self.q * z).cos(),
        }
    }

    /// Boundary value `(±)^m d_m`.
    pub fn boundary_value(&self, side: Side) -> f64 {
        side.mode_sign(self.m) * self.d_bdy
    }
}

/// Phase-form residual of the eigenvalue equation for the given parity.
pub fn phase_residual(parity: Parity, q: f64, half_width: f64, c: f64) -> f64 {
    let (s, co) = (q * half_width).sin_cos();
    let scale = (1.0 + c * c * q * q).sqrt();
    match parity {
        Parity::Even => (s + c * q * co) / scale,
        Parity::Odd => (c * q * s - co) / scale,
    }
}

/// Numerator of [`phase_residual`] and its `q`-derivative.
fn residual_and_slope(parity: Parity, q: f64, half_width: f64, c: f64) -> (f64, f64) {
    let (s, co) = (q * half_width).sin_cos();
    match parity {
        Parity::Even => (s + c * q * co, half_width * co + c * co - c * q * half_width * s),
        Parity::Odd => (c * q * s - co, c * s + c * q * half_width * co + half_width * s),
    }
}

/// Open bracket containing `q_m` for `m ≥ 1`.
pub fn bracket(m: usize, half_width: f64) -> (f64, f64) {
    assert!(m >= 1, "q_0 = 0 has no bracket");
    let p = ((m + 1) / 2) as f64;
    let step = PI / half_width;
    if m % 2 == 1 {
        ((p - 1.0) * step, (p - 0.5) * step)
    } else {
        ((p - 0.5) * step, p * step)
    }
}

/// Transverse wavenumber `q_m` of the strip.
pub fn solve_q(m: usize, params: &PhysicalParams) -> Result<f64> {
    let s = params.half_width()?;
    if m == 0 {
        return Ok(0.0);
    }
    let c = params.c();
    let parity = Parity::of(m);
    let (lo0, hi0) = bracket(m, s);
    let f = |q: f64| residual_and_slope(parity, q, s, c).0;
    let (mut lo, mut hi) = (lo0, hi0);
    let (mut f_lo, f_hi) = (f(lo), f(hi));
    if f_lo == 0.0 || f_hi == 0.0 || f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket { m, lo, hi });
    }
    let width = 1e-10 * PI / s;
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let mut q = 0.5 * (lo + hi);
    for _ in 0..MAX_NEWTON {
        let (r, dr) = residual_and_slope(parity, q, s, c);
        if r == 0.0 || dr == 0.0 {
            break;
        }
        let next = q - r / dr;
        // Newton must not leave the bisection bracket.
        if !(next > lo && next < hi) {
            break;
        }
        if next == q {
            break;
        }
        q = next;
    }
    Ok(q)
}

/// Normalization `c_m` making the mode a unit vector of the weighted space.
pub fn normalization(parity: Parity, q: f64, half_width: f64, c: f64) -> f64 {
    let s = half_width;
    if q == 0.0 {
        // Constant mode: ‖c₀ S^{-1/2}‖² = c₀²(2S + 2c)/S.
        return (s / (2.0 * s + 2.0 * c)).sqrt();
    }
    let sin2 = (2.0 * q * s).sin() / (2.0 * q);
    let bracket = match parity {
        Parity::Even => s + sin2 + 2.0 * c * (q * s).cos().powi(2),
        Parity::Odd => s - sin2 + 2.0 * c * (q * s).sin().powi(2),
    };
    (s / bracket).sqrt()
}

/// Normalized mode table for `m = 0..=m_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeTable {
    half_width: f64,
    c: f64,
    mu: f64,
    residual_tol: f64,
    entries: Vec<ModeEntry>,
}

impl ModeTable {
    /// Reassembles a table from stored entries (e.g. a cache), checking the
    /// structural invariants.
    pub fn from_entries(
        params: &PhysicalParams,
        residual_tol: f64,
        entries: Vec<ModeEntry>,
    ) -> Result<Self> {
        let s = params.half_width()?;
        for (i, e) in entries.iter().enumerate() {
            if e.m != i || e.parity != Parity::of(i) {
                return Err(Error::InvalidParameter(format!("entry {i} has index {} / {:?}", e.m, e.parity)));
            }
            if i > 0 && e.q <= entries[i - 1].q {
                return Err(Error::InvalidParameter(format!("q not increasing at m = {i}")));
            }
            if e.d_bdy == 0.0 || !(e.c_norm > 0.0) {
                return Err(Error::InvalidParameter(format!("degenerate entry at m = {i}")));
            }
        }
        Ok(Self { half_width: s, c: params.c(), mu: params.mu(), residual_tol, entries })
    }

    pub fn params(&self) -> PhysicalParams {
        PhysicalParams::new(self.c, self.mu, Geometry::Strip { half_width: self.half_width }, 1)
            .expect("table parameters were validated at construction")
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn residual_tol(&self) -> f64 {
        self.residual_tol
    }

    pub fn entries(&self) -> &[ModeEntry] {
        &self.entries
    }

    pub fn entry(&self, m: usize) -> &ModeEntry {
        &self.entries[m]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn m_max(&self) -> usize {
        self.entries.len() - 1
    }

    /// `ω_m` at zero transverse momentum.
    pub fn omegas(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.omega(0.0, self.mu)).collect()
    }

    /// Copy restricted to `m ≤ m_max`.
    pub fn truncated(&self, m_max: usize) -> Self {
        let mut t = self.clone();
        t.entries.truncate(m_max + 1);
        t
    }

    /// Copy with a different mass; the transverse spectrum does not depend on it.
    pub fn with_mu(&self, mu: f64) -> Self {
        let mut t = self.clone();
        t.mu = mu;
        t
    }
}

/// Solves and normalizes modes `0..=m_max`.
pub fn build_table(m_max: usize, params: &PhysicalParams) -> Result<ModeTable> {
    let s = params.half_width()?;
    let c = params.c();
    let entries = (0..=m_max)
        .map(|m| {
            let q = solve_q(m, params)?;
            let parity = Parity::of(m);
            let c_norm = normalization(parity, q, s, c);
            let edge = match parity {
                Parity::Even => (q * s).cos(),
                Parity::Odd => (q * s).sin(),
            };
            Ok(ModeEntry { m, q, parity, c_norm, d_bdy: c_norm / s.sqrt() * edge })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ModeTable { half_width: s, c, mu: params.mu(), residual_tol: RESIDUAL_TOL, entries })
}

/// Large-`m` law `|d_m| ≈ 2√S / (c π (m − 1))`.
pub fn d_asymptotic(m: usize, half_width: f64, c: f64) -> f64 {
    2.0 * half_width.sqrt() / (c * PI * (m as f64 - 1.0))
}

/// Per-mode verification outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeCheck {
    pub m: usize,
    pub q: f64,
    pub residual: f64,
    pub in_bracket: bool,
    pub residual_ok: bool,
    /// `None` when the mode is below the asymptotic range.
    pub q_bound: Option<bool>,
    pub c_scaled: Option<f64>,
    pub c_bound: Option<bool>,
    pub d_ratio: Option<f64>,
    pub d_law: Option<bool>,
}

impl ModeCheck {
    pub fn skipped(&self) -> bool {
        self.q_bound.is_none()
    }

    pub fn passed(&self) -> bool {
        self.in_bracket
            && self.residual_ok
            && self.q_bound.unwrap_or(true)
            && self.c_bound.unwrap_or(true)
            && self.d_law.unwrap_or(true)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableReport {
    pub delta: f64,
    pub m_start: usize,
    /// Fitted bound on `|c_m − 1| m²` (10× its largest value on the first two
    /// asymptotic modes).
    pub c_constant: f64,
    pub checks: Vec<ModeCheck>,
}

impl TableReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(ModeCheck::passed)
    }

    pub fn brackets_passed(&self) -> bool {
        self.checks.iter().all(|c| c.in_bracket && c.residual_ok)
    }

    pub fn asymptotics_passed(&self) -> bool {
        self.checks
            .iter()
            .filter(|c| !c.skipped())
            .all(|c| c.q_bound == Some(true) && c.c_bound == Some(true) && c.d_law == Some(true))
    }
}

/// Checks brackets and residuals for every mode, and the large-`m` bounds on
/// `q_m`, `c_m`, `d_m` for `m ≥ m_start`.
pub fn verify_table(table: &ModeTable, delta: f64, m_start: usize) -> TableReport {
    let s = table.half_width;
    let c = table.c;
    let m_start = m_start.max(2);
    let c_scaled = |e: &ModeEntry| (e.c_norm - 1.0).abs() * (e.m as f64).powi(2);
    let c_constant = 10.0
        * table
            .entries
            .iter()
            .skip(m_start)
            .take(2)
            .map(c_scaled)
            .fold(0.0, f64::max);
    let checks = table
        .entries
        .iter()
        .map(|e| {
            let residual = phase_residual(e.parity, e.q, s, c);
            let in_bracket = if e.m == 0 {
                e.q == 0.0
            } else {
                let (lo, hi) = bracket(e.m, s);
                e.q > lo && e.q < hi
            };
            let mut check = ModeCheck {
                m: e.m,
                q: e.q,
                residual,
                in_bracket,
                residual_ok: residual.abs() < table.residual_tol,
                q_bound: None,
                c_scaled: None,
                c_bound: None,
                d_ratio: None,
                d_law: None,
            };
            if e.m >= m_start {
                let m1 = e.m as f64 - 1.0;
                let base = PI * m1 / (2.0 * s);
                let shift = 2.0 / (c * PI * m1);
                check.q_bound = Some(e.q >= base + (1.0 - delta) * shift && e.q <= base + shift);
                let cs = c_scaled(e);
                check.c_scaled = Some(cs);
                check.c_bound = Some(cs <= c_constant);
                let ratio = e.d_bdy.abs() / d_asymptotic(e.m, s, c);
                check.d_ratio = Some(ratio);
                check.d_law = Some((ratio - 1.0).abs() <= delta);
            }
            check
        })
        .collect();
    TableReport { delta, m_start, c_constant, checks }
}

/// Normalized strip mode at `z`.
pub fn eval_mode(entry: &ModeEntry, z: f64, params: &PhysicalParams) -> Result<f64> {
    let s = params.half_width()?;
    if !(-s..=s).contains(&z) {
        return Err(Error::OutsideDomain { z, lo: -s, hi: s });
    }
    Ok(entry.profile(z, s))
}

/// Half-space mode `(π/2 (c²q² + 1))^{-1/2} (cos qz − c q sin qz)`; the
/// transverse `(2π)^{-(d-1)/2} e^{ikx}` factor is left to callers.
pub fn eval_halfspace_mode(q: f64, z: f64, params: &PhysicalParams) -> Result<f64> {
    if params.geometry() != Geometry::HalfSpace {
        return Err(Error::GeometryMismatch("expected half-space geometry".into()));
    }
    if z < 0.0 {
        return Err(Error::OutsideDomain { z, lo: 0.0, hi: f64::INFINITY });
    }
    let c = params.c();
    Ok(halfspace_prefactor(q, c) * ((q * z).cos() - c * q * (q * z).sin()))
}

/// `(π/2 (c²q² + 1))^{-1/2}`, also the boundary value of the half-space mode.
pub fn halfspace_prefactor(q: f64, c: f64) -> f64 {
    (0.5 * PI * (c * c * q * q + 1.0)).powf(-0.5)
}

/// Mode `m` sampled on `grid` as a bulk ⊕ boundary function.
pub fn mode_function(table: &ModeTable, m: usize, grid: &Grid1D) -> Result<BulkBoundaryFunction> {
    check_strip_grid(grid, table)?;
    let e = table.entries.get(m).ok_or_else(|| {
        Error::InvalidParameter(format!("mode {m} not in a table with {} modes", table.len()))
    })?;
    let bulk: Vec<f64> = grid.nodes().iter().map(|&z| e.profile(z, table.half_width)).collect();
    let boundary = [bulk[0], bulk[grid.intervals()]];
    BulkBoundaryFunction::from_real(*grid, &bulk, &boundary)
}

/// Coefficients `a_m = ⟨Φ_m, F⟩` for every mode of the table.
pub fn project(f: &BulkBoundaryFunction, table: &ModeTable) -> Result<Vec<Complex64>> {
    let params = table.params();
    check_strip_grid(f.grid(), table)?;
    (0..table.len())
        .map(|m| {
            let mode = mode_function(table, m, f.grid())?;
            weighted_inner_product(&mode, f, &params)
        })
        .collect()
}

/// `Σ a_m Φ_m` on `grid`; boundary values are the bulk endpoint samples, so
/// the result is compatible at tolerance zero.
pub fn synthesize(
    coeffs: &[Complex64],
    table: &ModeTable,
    grid: &Grid1D,
) -> Result<BulkBoundaryFunction> {
    check_strip_grid(grid, table)?;
    if coeffs.len() > table.len() {
        return Err(Error::InvalidParameter(format!(
            "{} coefficients for a table with {} modes",
            coeffs.len(),
            table.len()
        )));
    }
    let s = table.half_width;
    let bulk: Vec<Complex64> = grid
        .nodes()
        .iter()
        .map(|&z| {
            coeffs
                .iter()
                .zip(&table.entries)
                .map(|(a, e)| a * e.profile(z, s))
                .sum()
        })
        .collect();
    let boundary = vec![bulk[0], bulk[grid.intervals()]];
    BulkBoundaryFunction::new(*grid, bulk, boundary)
}

/// `Σ a_m ∂_z Φ_m` sampled on `grid`.
pub fn synthesize_derivative(coeffs: &[Complex64], table: &ModeTable, grid: &Grid1D) -> Vec<Complex64> {
    let s = table.half_width;
    grid.nodes()
        .iter()
        .map(|&z| {
            coeffs
                .iter()
                .zip(&table.entries)
                .map(|(a, e)| a * e.profile_derivative(z, s))
                .sum()
        })
        .collect()
}

fn check_strip_grid(grid: &Grid1D, table: &ModeTable) -> Result<()> {
    let s = table.half_width;
    if grid.z_min() != -s || grid.z_max() != s {
        return Err(Error::GridMismatch(format!(
            "grid [{}, {}] does not span the strip [-{s}, {s}]",
            grid.z_min(),
            grid.z_max()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(s: f64, c: f64) -> PhysicalParams {
        PhysicalParams::strip(s, c, 0.0).unwrap()
    }

    /// Plain bisection on the tan-form equations, independent of the solver.
    fn oracle_q(m: usize, s: f64, c: f64) -> f64 {
        let (mut lo, mut hi) = bracket(m, s);
        let eps = 1e-13 * hi;
        lo += eps;
        hi -= eps;
        let g = |q: f64| {
            if m % 2 == 1 {
                q * (q * s).tan() - 1.0 / c
            } else {
                (q * s).tan() / c + q
            }
        };
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid).signum() == g(lo).signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn zero_mode_is_exact() {
        for (s, c) in [(1.0, 1.0), (0.5, 2.0)] {
            assert_eq!(solve_q(0, &params(s, c)).unwrap(), 0.0);
        }
    }

    #[test]
    fn first_roots_match_bisection_oracle() {
        let p = params(1.0, 1.0);
        let q1 = solve_q(1, &p).unwrap();
        let q2 = solve_q(2, &p).unwrap();
        assert!((q1 - oracle_q(1, 1.0, 1.0)).abs() < 1e-12);
        assert!((q2 - oracle_q(2, 1.0, 1.0)).abs() < 1e-12);
        assert!((q1 - 0.860_333_589_019_379_8).abs() < 1e-12);
        assert!((q2 - 2.028_757_838_110_434_2).abs() < 1e-12);
    }

    #[test]
    fn brackets_contain_single_root() {
        for s in [0.5, 1.0, 2.0] {
            for c in [0.5, 1.0, 2.0] {
                for m in 1..=60 {
                    let (lo, hi) = bracket(m, s);
                    let par = Parity::of(m);
                    let fl = phase_residual(par, lo, s, c);
                    let fh = phase_residual(par, hi, s, c);
                    assert!(fl * fh < 0.0, "no sign change m={m} s={s} c={c}");
                    // Monotone inside: residual changes sign exactly once on a fine scan.
                    let n = 400;
                    let changes = (0..n)
                        .map(|i| lo + (hi - lo) * i as f64 / n as f64)
                        .map(|q| phase_residual(par, q, s, c))
                        .collect::<Vec<_>>()
                        .windows(2)
                        .filter(|w| w[0].signum() != w[1].signum())
                        .count();
                    assert_eq!(changes, 1);
                }
            }
        }
    }

    #[test]
    fn normalization_first_mode() {
        let t = build_table(9, &params(1.0, 1.0)).unwrap();
        assert!((t.entry(1).c_norm - 0.796_906_303_147_794_6).abs() < 1e-12);
        assert!((t.entry(1).d_bdy - 0.604_102_925_008_077_8).abs() < 1e-12);
        assert!((t.entry(0).d_bdy - 0.5).abs() < 1e-15);
        let law = 2.0 / (PI * 8.0);
        assert!((t.entry(9).d_bdy.abs() / law - 1.0).abs() < 0.15);
    }

    #[test]
    fn boundary_value_matches_profile_at_edges() {
        let t = build_table(6, &params(1.3, 0.7)).unwrap();
        for e in t.entries() {
            assert_eq!(e.boundary_value(Side::Plus), e.profile(1.3, 1.3));
            assert!((e.boundary_value(Side::Minus) - e.profile(-1.3, 1.3)).abs() < 1e-15);
            assert!(e.d_bdy != 0.0);
        }
    }

    #[test]
    fn verify_marks_low_modes_skipped() {
        let t = build_table(200, &params(1.0, 1.0)).unwrap();
        let r = verify_table(&t, 0.1, 50);
        assert!(r.checks[0].skipped() && r.checks[1].skipped());
        assert!(r.all_passed());
        let first = r.checks[50].c_scaled.unwrap();
        assert!(r.checks[50..].iter().all(|c| c.c_scaled.unwrap() <= 10.0 * first.max(r.checks[51].c_scaled.unwrap())));
    }

    #[test]
    fn eval_mode_domain() {
        let p = params(1.0, 1.0);
        let t = build_table(2, &p).unwrap();
        assert!(eval_mode(t.entry(1), 1.5, &p).is_err());
        let v = eval_mode(t.entry(0), 0.3, &p).unwrap();
        assert!((v - t.entry(0).c_norm).abs() < 1e-15);
        assert_eq!(eval_mode(t.entry(2), 1.0, &p).unwrap(), t.entry(2).d_bdy);

        let h = PhysicalParams::half_space(1.0, 0.0).unwrap();
        let q = 2.5_f64;
        let at0 = eval_halfspace_mode(q, 0.0, &h).unwrap();
        assert!((at0 - (0.5 * PI * (q * q + 1.0)).powf(-0.5)).abs() < 1e-15);
        assert!(eval_halfspace_mode(q, -0.1, &h).is_err());
        assert!(eval_halfspace_mode(q, 0.1, &p).is_err());
    }

    #[test]
    fn from_entries_checks_invariants() {
        let p = params(1.0, 1.0);
        let t = build_table(4, &p).unwrap();
        assert!(ModeTable::from_entries(&p, RESIDUAL_TOL, t.entries().to_vec()).is_ok());
        let mut bad = t.entries().to_vec();
        bad.swap(1, 2);
        assert!(ModeTable::from_entries(&p, RESIDUAL_TOL, bad).is_err());
    }
}
