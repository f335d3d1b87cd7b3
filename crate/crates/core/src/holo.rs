//! Bulk-to-boundary map: given a bulk test function `f`, build a boundary
//! test function `f′` on `∂₊` with `φ_bulk(f) = φ|₊(f′)`.
//!
//! At the level of mode data this means `f̂^±_m = d_m f̂′(±ω_m)`. The
//! prescribed values `f̂^±_m / d_m` are spread over smooth bumps
//! `χ(a_m(ω² − ω_m²))` with disjoint supports, and `f′` is the inverse
//! transform `f′(t) = (2π)^{-1/2} ∫ f̂′(ω) e^{−iωt} dω`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modes::{eval_halfspace_mode, halfspace_prefactor, ModeTable};
use crate::qft::{smeared_coeffs, smeared_coeffs_with, smeared_two_point, SmearedCoefficients, SpaceTimeSamples};
use crate::space::{BulkBoundaryFunction, Geometry, Grid1D, PhysicalParams, Quadrature};

/// Human-readable form of [`chi`], stored with every image.
pub const CHI_LABEL: &str = "chi(u) = exp(1 - 1/(1 - 4u^2)) for |u| < 1/2, else 0";

/// Smooth bump on `[−1/2, 1/2]` with `χ(0) = 1`.
pub fn chi(u: f64) -> f64 {
    let v = 4.0 * u * u;
    if v >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - v)).exp()
    }
}

/// `a = 0.9 · min(1/μ², min_{1≤m≤M} 1/(q_m² − q_{m−1}²))`, the scale
/// prescribed for a single uniform bump width.
pub fn choose_a(table: &ModeTable, m: usize) -> Result<f64> {
    if m < 1 || m > table.m_max() {
        return Err(Error::InvalidParameter(format!("need 1 ≤ M ≤ {}, got {m}", table.m_max())));
    }
    let mut bound = f64::INFINITY;
    let mu = table.mu();
    if mu > 0.0 {
        bound = 1.0 / (mu * mu);
    }
    for k in 1..=m {
        let gap = table.entry(k).q.powi(2) - table.entry(k - 1).q.powi(2);
        if !(gap > 0.0) {
            return Err(Error::InvalidParameter(format!("q sequence not increasing at m = {k}")));
        }
        bound = bound.min(1.0 / gap);
    }
    Ok(0.9 * bound)
}

/// How the bump widths are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum BumpScale {
    /// One `a` for every mode; rejected if two supports meet.
    Uniform(f64),
    /// Half-width `1/(2a_m) = 0.45·min(gap_m, gap_{m+1})` in `ω²`, and for
    /// the lowest mode at most `0.9 ω_0²` so that `ω = 0` stays uncovered.
    PerMode,
}

/// Per-mode scales `a_m` for the given sorted mode list.
pub fn per_mode_scales(table: &ModeTable, modes: &[usize]) -> Vec<f64> {
    let w2: Vec<f64> = modes.iter().map(|&m| table.entry(m).omega_sq(0.0, table.mu())).collect();
    (0..modes.len())
        .map(|k| {
            let below = if k > 0 { w2[k] - w2[k - 1] } else { w2[k] };
            let above = if k + 1 < w2.len() {
                w2[k + 1] - w2[k]
            } else {
                // the next mode of the table, or the previous gap at the end
                let m = modes[k];
                if m < table.m_max() {
                    table.entry(m + 1).omega_sq(0.0, table.mu()) - w2[k]
                } else {
                    below
                }
            };
            let half = if k == 0 { (0.45 * above).min(0.9 * below) } else { 0.45 * below.min(above) };
            1.0 / (2.0 * half)
        })
        .collect()
}

/// Schwartz extension of mode data:
/// `f̂′(ω) = Σ_m Σ_± θ(±ω) χ(a_m(ω² − ω_m²)) f̂^±_m / d_m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FreqExtension {
    pub modes: Vec<usize>,
    pub omegas: Vec<f64>,
    pub scales: Vec<f64>,
    /// `f̂^+_m / d_m`.
    pub plus: Vec<Complex64>,
    /// `f̂^-_m / d_m`.
    pub minus: Vec<Complex64>,
}

impl FreqExtension {
    /// `(ω_lo, ω_hi)` of bump `k` in the positive sector.
    pub fn support(&self, k: usize) -> (f64, f64) {
        let w2 = self.omegas[k] * self.omegas[k];
        let half = 0.5 / self.scales[k];
        ((w2 - half).max(0.0).sqrt(), (w2 + half).sqrt())
    }

    fn bump(&self, k: usize, w: f64) -> f64 {
        chi(self.scales[k] * (w * w - self.omegas[k] * self.omegas[k]))
    }

    pub fn evaluate(&self, w: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let aw = w.abs();
        for k in 0..self.modes.len() {
            let (lo, hi) = self.support(k);
            if aw <= lo || aw >= hi {
                continue;
            }
            let coeff = if w > 0.0 { self.plus[k] } else if w < 0.0 { self.minus[k] } else { continue };
            acc += coeff * self.bump(k, w);
        }
        acc
    }

    /// Trapezoid nodes and bump values for `∫ χ_k(ω) e^{−iωt} dω`, fine
    /// enough to resolve the phase up to `|t| = t_max`.
    fn bump_nodes(&self, k: usize, t_max: f64) -> (Vec<f64>, Vec<f64>, f64) {
        let (lo, hi) = self.support(k);
        let width = hi - lo;
        let step = (width / 128.0).min(PI / (4.0 * t_max.max(1.0)));
        let n = (width / step).ceil() as usize;
        let h = width / n as f64;
        // the end points contribute χ = 0
        let nodes: Vec<f64> = (1..n).map(|j| lo + h * j as f64).collect();
        let vals = nodes.iter().map(|&w| self.bump(k, w)).collect();
        (nodes, vals, h)
    }

    /// `(2π)^{-1/2} ∫_{ω>0} f̂′(ω) e^{−iωt} dω` at each time.
    pub fn positive_part(&self, times: &[f64]) -> Vec<Complex64> {
        let t_max = times.iter().fold(0.0f64, |a, t| a.max(t.abs()));
        let mut out = vec![Complex64::new(0.0, 0.0); times.len()];
        let norm = (2.0 * PI).powf(-0.5);
        for k in 0..self.modes.len() {
            let (nodes, vals, h) = self.bump_nodes(k, t_max);
            for (o, &t) in out.iter_mut().zip(times) {
                let b: Complex64 = nodes
                    .iter()
                    .zip(&vals)
                    .map(|(&w, &v)| Complex64::from_polar(v, -w * t))
                    .sum();
                *o += self.plus[k] * b * (h * norm);
            }
        }
        out
    }

    /// `f′(t)` at each time (complex; real for real bulk data).
    pub fn inverse_transform(&self, times: &[f64]) -> Vec<Complex64> {
        let t_max = times.iter().fold(0.0f64, |a, t| a.max(t.abs()));
        let mut out = vec![Complex64::new(0.0, 0.0); times.len()];
        let norm = (2.0 * PI).powf(-0.5);
        for k in 0..self.modes.len() {
            let (nodes, vals, h) = self.bump_nodes(k, t_max);
            for (o, &t) in out.iter_mut().zip(times) {
                let b: Complex64 = nodes
                    .iter()
                    .zip(&vals)
                    .map(|(&w, &v)| Complex64::from_polar(v, -w * t))
                    .sum();
                // negative sector: ∫_{ω<0} χ(ω) e^{−iωt} = conj of the positive one
                *o += (self.plus[k] * b + self.minus[k] * b.conj()) * (h * norm);
            }
        }
        out
    }
}

/// Builds the extension for the listed modes, dividing by `d_m`.
pub fn extend_to_schwartz(
    coeffs: &SmearedCoefficients,
    table: &ModeTable,
    modes: &[usize],
    scale: BumpScale,
) -> Result<FreqExtension> {
    if modes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("modes must be strictly increasing".into()));
    }
    if modes.last().is_some_and(|&m| m >= coeffs.plus.len() || m > table.m_max()) {
        return Err(Error::InvalidParameter("mode index beyond the coefficient set".into()));
    }
    let scales = match scale {
        BumpScale::Uniform(a) => {
            if !(a > 0.0) {
                return Err(Error::InvalidParameter(format!("bump scale a = {a} must be positive")));
            }
            vec![a; modes.len()]
        }
        BumpScale::PerMode => per_mode_scales(table, modes),
    };
    let mut ext = FreqExtension {
        modes: modes.to_vec(),
        omegas: modes.iter().map(|&m| table.entry(m).omega(0.0, table.mu())).collect(),
        scales,
        plus: Vec::with_capacity(modes.len()),
        minus: Vec::with_capacity(modes.len()),
    };
    check_disjoint(&ext)?;
    for &m in modes {
        let d = table.entry(m).d_bdy;
        if d == 0.0 {
            return Err(Error::InvalidParameter(format!("d_{m} = 0 cannot be inverted")));
        }
        ext.plus.push(coeffs.plus[m] / d);
        ext.minus.push(coeffs.minus[m] / d);
    }
    Ok(ext)
}

/// Supports in `ω²` are `[ω_m² − 1/(2a_m), ω_m² + 1/(2a_m)]`; neighbours
/// must not meet, and the lowest must stay above `ω² = 0`, where the two
/// sign sectors touch.
fn check_disjoint(ext: &FreqExtension) -> Result<()> {
    let interval = |k: usize| {
        let w2 = ext.omegas[k] * ext.omegas[k];
        let half = 0.5 / ext.scales[k];
        (w2 - half, w2 + half)
    };
    if let Some(&m0) = ext.modes.first() {
        if interval(0).0 <= 0.0 {
            return Err(Error::BumpOverlap {
                first: format!("mode {m0} (ω > 0)"),
                second: format!("mode {m0} (ω < 0)"),
            });
        }
    }
    for k in 1..ext.modes.len() {
        if interval(k).0 < interval(k - 1).1 {
            return Err(Error::BumpOverlap {
                first: format!("mode {}", ext.modes[k - 1]),
                second: format!("mode {}", ext.modes[k]),
            });
        }
    }
    Ok(())
}

/// What to do with a mode of frequency zero (the massless zero mode).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ZeroModePolicy {
    /// Leave it out of the dual; its bump cannot separate `ω ≷ 0`.
    Exclude,
    /// Refuse to build a dual.
    Reject,
}

#[derive(Debug, Clone, Serialize)]
pub struct HoloConfig {
    /// Fraction of `Σ |f̂^±_m|²` the automatic cutoff must retain.
    pub energy_fraction: f64,
    /// Fixed cutoff instead of the automatic one.
    pub m_cutoff: Option<usize>,
    pub scale: BumpScale,
    pub zero_mode: ZeroModePolicy,
    /// Output times for `f′`.
    pub times: Vec<f64>,
    /// Number of `f̂′` samples on `[−ω_max, ω_max]`.
    pub omega_samples: usize,
}

impl Default for HoloConfig {
    fn default() -> Self {
        Self {
            energy_fraction: 0.999,
            m_cutoff: None,
            scale: BumpScale::PerMode,
            zero_mode: ZeroModePolicy::Exclude,
            times: uniform(-8.0, 8.0, 1601),
            omega_samples: 4001,
        }
    }
}

/// `n` equispaced points on `[a, b]`.
pub fn uniform(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|j| a + (b - a) * j as f64 / (n - 1) as f64).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct HoloMeta {
    pub half_width: f64,
    pub c: f64,
    pub mu: f64,
    pub m_cutoff: usize,
    pub modes: Vec<usize>,
    pub scales: Vec<f64>,
    pub chi: &'static str,
    pub retained_fraction: f64,
    pub warning: Option<String>,
}

/// A holographic image: `f̂′` and `f′` samples plus the extension itself.
#[derive(Debug, Clone, Serialize)]
pub struct HoloImage {
    pub omega: Vec<f64>,
    pub fhat: Vec<Complex64>,
    pub times: Vec<f64>,
    pub f_prime: Vec<f64>,
    /// `max |Im f′|`; zero up to rounding for real bulk data.
    pub max_imag: f64,
    /// `2|positive-frequency part of f′|`, the burst envelope.
    pub envelope: Vec<f64>,
    pub meta: HoloMeta,
    pub extension: FreqExtension,
}

/// Builds `f′` for the bulk test function `f` (boundary part ignored by the
/// caller's choice of zero boundary samples).
pub fn holographic_dual(f: &SpaceTimeSamples, table: &ModeTable, config: &HoloConfig) -> Result<(HoloImage, SmearedCoefficients)> {
    let coeffs = smeared_coeffs(f, table)?;
    let image = dual_from_coeffs(&coeffs, table, config)?;
    Ok((image, coeffs))
}

/// As [`holographic_dual`], from precomputed coefficients.
pub fn dual_from_coeffs(coeffs: &SmearedCoefficients, table: &ModeTable, config: &HoloConfig) -> Result<HoloImage> {
    let candidates: Vec<usize> = (0..table.len())
        .filter(|&m| table.entry(m).omega(0.0, table.mu()) > 0.0)
        .collect();
    if candidates.len() < table.len() && config.zero_mode == ZeroModePolicy::Reject {
        return Err(Error::Divergent("massless zero mode present and policy is Reject".into()));
    }
    let energy = |m: usize| coeffs.plus[m].norm_sqr() + coeffs.minus[m].norm_sqr();
    let total: f64 = candidates.iter().map(|&m| energy(m)).sum();
    let (m_cutoff, mut warning) = match config.m_cutoff {
        Some(m) => (m.min(table.m_max()), None),
        None => {
            let mut acc = 0.0;
            let mut cut = *candidates.last().unwrap_or(&0);
            for &m in &candidates {
                acc += energy(m);
                if acc >= config.energy_fraction * total {
                    cut = m;
                    break;
                }
            }
            (cut, None)
        }
    };
    let modes: Vec<usize> = candidates.iter().copied().filter(|&m| m <= m_cutoff).collect();
    let kept: f64 = modes.iter().map(|&m| energy(m)).sum();
    let retained_fraction = if total > 0.0 { kept / total } else { 1.0 };
    if retained_fraction < config.energy_fraction {
        warning = Some(format!(
            "cutoff M = {m_cutoff} retains only {:.4}% of the coefficient energy",
            100.0 * retained_fraction
        ));
    }
    if modes.len() < table.len() && modes.first() != Some(&0) && table.entry(0).omega(0.0, table.mu()) == 0.0 {
        let zero = energy(0);
        if zero > 0.0 {
            let note = format!("zero mode excluded (carries |f̂^±_0|² = {zero:.3e})");
            warning = Some(match warning {
                Some(w) => format!("{w}; {note}"),
                None => note,
            });
        }
    }
    let extension = extend_to_schwartz(coeffs, table, &modes, config.scale)?;
    let w_max = (0..modes.len()).map(|k| extension.support(k).1).fold(0.0, f64::max) * 1.05;
    let omega = uniform(-w_max, w_max, config.omega_samples.max(3));
    let fhat = omega.iter().map(|&w| extension.evaluate(w)).collect();
    let full = extension.inverse_transform(&config.times);
    let positive = extension.positive_part(&config.times);
    Ok(HoloImage {
        omega,
        fhat,
        times: config.times.clone(),
        f_prime: full.iter().map(|v| v.re).collect(),
        max_imag: full.iter().map(|v| v.im.abs()).fold(0.0, f64::max),
        envelope: positive.iter().map(|v| 2.0 * v.norm()).collect(),
        meta: HoloMeta {
            half_width: table.half_width(),
            c: table.c(),
            mu: table.mu(),
            m_cutoff,
            modes,
            scales: extension.scales.clone(),
            chi: CHI_LABEL,
            retained_fraction,
            warning,
        },
        extension,
    })
}

/// Boundary test function `(0, c⁻¹ f′ δ_{∂₊})` as space-time samples on a
/// small grid; by the trace relation its coefficients are those of `φ|₊(f′)`.
pub fn boundary_samples(times: &[f64], f_prime: &[f64], table: &ModeTable, intervals: usize) -> Result<SpaceTimeSamples> {
    let grid = Grid1D::for_strip(&table.params(), intervals)?;
    let zeros = vec![0.0; grid.len()];
    let frames = f_prime
        .iter()
        .map(|&v| BulkBoundaryFunction::from_real(grid, &zeros, &[0.0, v / table.c()]))
        .collect::<Result<Vec<_>>>()?;
    SpaceTimeSamples::new(times.to_vec(), frames)
}

/// `f′` is Schwartz but not compactly supported; its tails at the ends of
/// a long window are allowed this fraction of the peak.
const DUAL_SUPPORT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct DualCheck {
    /// `max |d_m f̂′(±ω_m) − f̂^±_m| / max |f̂^±|` from the extension itself.
    pub interpolation_residual: f64,
    /// Same, with `f̂′(±ω_m)` recomputed from the sampled `f′(t)` through
    /// the boundary smearing.
    pub roundtrip_residual: f64,
    pub modes: Vec<usize>,
}

/// Residuals of `f̂^±_m = d_m f̂′(±ω_m)` over the image's modes.
pub fn verify_dual(image: &HoloImage, coeffs: &SmearedCoefficients, table: &ModeTable) -> Result<DualCheck> {
    let scale = image
        .meta
        .modes
        .iter()
        .map(|&m| coeffs.plus[m].norm().max(coeffs.minus[m].norm()))
        .fold(f64::MIN_POSITIVE, f64::max);
    let mut interp = 0.0f64;
    for &m in &image.meta.modes {
        let e = table.entry(m);
        let w = e.omega(0.0, table.mu());
        let p = image.extension.evaluate(w) * e.d_bdy - coeffs.plus[m];
        let q = image.extension.evaluate(-w) * e.d_bdy - coeffs.minus[m];
        interp = interp.max(p.norm().max(q.norm()));
    }
    let back = smeared_coeffs_with(&boundary_samples(&image.times, &image.f_prime, table, 9)?, table, DUAL_SUPPORT_TOL)?;
    let mut round = 0.0f64;
    for &m in &image.meta.modes {
        round = round.max((back.plus[m] - coeffs.plus[m]).norm().max((back.minus[m] - coeffs.minus[m]).norm()));
    }
    Ok(DualCheck {
        interpolation_residual: interp / scale,
        roundtrip_residual: round / scale,
        modes: image.meta.modes.clone(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PairingCheck {
    /// `ω(φ_bulk(f) φ_bulk(g))` over the image modes.
    pub bulk: Complex64,
    /// `ω(φ|₊(f′) φ|₊(g′))` from the sampled duals.
    pub boundary: Complex64,
    pub relative_error: f64,
}

/// Compares the two-point pairing of two bulk test functions with that of
/// their duals. Both sums run over the modes kept in `f_img` (which must
/// match `g_img`).
pub fn pairing_check(
    f_img: &HoloImage,
    f_coeffs: &SmearedCoefficients,
    g_img: &HoloImage,
    g_coeffs: &SmearedCoefficients,
    table: &ModeTable,
) -> Result<PairingCheck> {
    if f_img.meta.modes != g_img.meta.modes {
        return Err(Error::InvalidParameter("images use different mode sets".into()));
    }
    let restrict = |c: &SmearedCoefficients| {
        let mut r = c.clone();
        for m in 0..r.plus.len() {
            if !f_img.meta.modes.contains(&m) {
                r.plus[m] = Complex64::new(0.0, 0.0);
                r.minus[m] = Complex64::new(0.0, 0.0);
            }
        }
        r
    };
    let bulk = smeared_two_point(&restrict(f_coeffs), &restrict(g_coeffs))?;
    let fb = smeared_coeffs_with(&boundary_samples(&f_img.times, &f_img.f_prime, table, 9)?, table, DUAL_SUPPORT_TOL)?;
    let gb = smeared_coeffs_with(&boundary_samples(&g_img.times, &g_img.f_prime, table, 9)?, table, DUAL_SUPPORT_TOL)?;
    let boundary = smeared_two_point(&restrict(&fb), &restrict(&gb))?;
    Ok(PairingCheck { bulk, boundary, relative_error: (bulk - boundary).norm() / bulk.norm() })
}

/// The localized test function of the figure: a product of
/// `e^{−1/(s+1/2)} e^{−1/(1/2−s)}` bumps in `t` and `z`.
pub fn fig2_test_function(t: f64, z: f64) -> f64 {
    let b = |s: f64| {
        if s <= -0.5 || s >= 0.5 {
            0.0
        } else {
            (-1.0 / (s + 0.5) - 1.0 / (0.5 - s)).exp()
        }
    };
    b(t) * b(z)
}

#[derive(Debug, Clone, Serialize)]
pub struct Fig2Config {
    /// Regulator mass; `0` reproduces the massless setting with the zero
    /// mode excluded.
    pub mu_reg: f64,
    pub table_modes: usize,
    pub grid_intervals: usize,
    pub time_nodes: usize,
    pub holo: HoloConfig,
    /// Bursts are envelope maxima above this fraction of the largest.
    pub burst_threshold: f64,
}

impl Default for Fig2Config {
    fn default() -> Self {
        Self {
            mu_reg: 0.0,
            table_modes: 40,
            grid_intervals: 1024,
            time_nodes: 401,
            holo: HoloConfig { times: uniform(-7.0, 7.0, 2801), ..HoloConfig::default() },
            burst_threshold: 0.1,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Burst {
    pub time: f64,
    pub envelope: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Fig2Report {
    pub image: HoloImage,
    pub bursts: Vec<Burst>,
    /// `f(t, 0)` on the image times (the dashed reference curve).
    pub reference: Vec<f64>,
    pub reference_peak: (f64, f64),
}

/// Local maxima of `envelope` above `threshold · max`.
pub fn detect_bursts(times: &[f64], envelope: &[f64], threshold: f64) -> Vec<Burst> {
    let peak = envelope.iter().copied().fold(0.0, f64::max);
    (1..envelope.len().saturating_sub(1))
        .filter(|&i| envelope[i] >= envelope[i - 1] && envelope[i] > envelope[i + 1] && envelope[i] >= threshold * peak)
        .map(|i| Burst { time: times[i], envelope: envelope[i] })
        .collect()
}

/// Dual of the figure's test function on the strip `S = c = 1`.
pub fn fig2_reproduce(config: &Fig2Config) -> Result<Fig2Report> {
    let params = PhysicalParams::strip(1.0, 1.0, config.mu_reg)?;
    let table = crate::modes::build_table(config.table_modes, &params)?;
    let grid = Grid1D::for_strip(&params, config.grid_intervals)?;
    let times = uniform(-0.5, 0.5, config.time_nodes);
    let f = SpaceTimeSamples::from_fn(times, grid, 2, fig2_test_function, |_, _| 0.0)?;
    let (image, _) = holographic_dual(&f, &table, &config.holo)?;
    let bursts = detect_bursts(&image.times, &image.envelope, config.burst_threshold);
    let reference: Vec<f64> = image.times.iter().map(|&t| fig2_test_function(t, 0.0)).collect();
    let i = reference
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let reference_peak = (image.times[i], reference[i]);
    Ok(Fig2Report { image, bursts, reference, reference_peak })
}

/// Half-space dual sampled on `ω`: `f̂′(ω) = √(π(c²q² + 1)/2) f̂^±(q)` with
/// `q = √(ω² − μ²)` for `|ω| > μ` and zero in the gap.
#[derive(Debug, Clone, Serialize)]
pub struct HalfspaceImage {
    pub q: Vec<f64>,
    pub plus: Vec<Complex64>,
    pub minus: Vec<Complex64>,
    pub mu: f64,
    pub c: f64,
    /// The continuation is only continuous at `|ω| = μ` (square-root edge),
    /// so `f′` is square-integrable but not Schwartz.
    pub note: &'static str,
}

impl HalfspaceImage {
    pub fn evaluate(&self, w: f64) -> Complex64 {
        let aw = w.abs();
        if aw <= self.mu {
            return Complex64::new(0.0, 0.0);
        }
        let q = (aw * aw - self.mu * self.mu).sqrt();
        let Some(k) = self.q.windows(2).position(|p| p[0] <= q && q <= p[1]) else {
            return Complex64::new(0.0, 0.0);
        };
        let s = (q - self.q[k]) / (self.q[k + 1] - self.q[k]);
        let data = if w > 0.0 { &self.plus } else { &self.minus };
        let v = data[k] * (1.0 - s) + data[k + 1] * s;
        v / halfspace_prefactor(q, self.c)
    }

    /// `f′(t)` by the trapezoid rule over `|ω| ∈ (μ, ω(q_max)]`.
    pub fn inverse_transform(&self, times: &[f64], samples: usize) -> Vec<f64> {
        let q_max = *self.q.last().unwrap_or(&0.0);
        let w_max = (q_max * q_max + self.mu * self.mu).sqrt();
        let ws = uniform(self.mu, w_max, samples.max(3));
        let h = ws[1] - ws[0];
        let norm = (2.0 * PI).powf(-0.5);
        times
            .iter()
            .map(|&t| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, &w) in ws.iter().enumerate() {
                    let wt = if j == 0 || j + 1 == ws.len() { 0.5 * h } else { h };
                    let e = Complex64::from_polar(1.0, -w * t);
                    acc += (self.evaluate(w) * e + self.evaluate(-w) * e.conj()) * wt;
                }
                (acc * norm).re
            })
            .collect()
    }
}

/// Smeared half-space coefficients `f̂^±(q)` of a bulk test function sampled
/// on `[0, L]`, and the dual built from them.
pub fn halfspace_dual(f: &SpaceTimeSamples, params: &PhysicalParams, q_grid: &[f64]) -> Result<HalfspaceImage> {
    if params.geometry() != Geometry::HalfSpace {
        return Err(Error::GeometryMismatch("expected half-space geometry".into()));
    }
    if params.mu() <= 0.0 {
        return Err(Error::InvalidParameter("half-space dual needs μ > 0".into()));
    }
    if q_grid.len() < 2 || q_grid.windows(2).any(|w| w[1] <= w[0]) || q_grid[0] < 0.0 {
        return Err(Error::InvalidParameter("q grid must be increasing, non-negative, ≥ 2 points".into()));
    }
    let grid = *f.grid();
    if grid.z_min() != 0.0 {
        return Err(Error::GridMismatch("half-space grid must start at z = 0".into()));
    }
    let w = grid.weights(Quadrature::default());
    let nodes = grid.nodes();
    let norm = (2.0 * PI).powf(-0.5);
    let (c, mu) = (params.c(), params.mu());
    let mut plus = Vec::with_capacity(q_grid.len());
    let mut minus = Vec::with_capacity(q_grid.len());
    for &q in q_grid {
        let profile: Vec<f64> = nodes.iter().map(|&z| eval_halfspace_mode(q, z, params)).collect::<Result<_>>()?;
        let b0 = halfspace_prefactor(q, c);
        let omega = (q * q + mu * mu).sqrt();
        let times = f.times();
        let mut p = Complex64::new(0.0, 0.0);
        let mut m = Complex64::new(0.0, 0.0);
        for (j, frame) in f.frames().iter().enumerate() {
            let left = if j > 0 { times[j] - times[j - 1] } else { 0.0 };
            let right = if j + 1 < times.len() { times[j + 1] - times[j] } else { 0.0 };
            let dt = 0.5 * (left + right);
            let bulk: Complex64 = frame.bulk().iter().zip(&profile).zip(&w).map(|((v, phi), w)| v * phi * w).sum();
            let a = bulk + frame.boundary()[0] * (c * b0);
            let e = Complex64::from_polar(1.0, omega * times[j]);
            p += a * e * dt;
            m += a * e.conj() * dt;
        }
        plus.push(p * norm);
        minus.push(m * norm);
    }
    Ok(HalfspaceImage {
        q: q_grid.to_vec(),
        plus,
        minus,
        mu,
        c,
        note: "continuous but not smooth at |omega| = mu; f' is L2-quality only",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::build_table;

    fn table(mu: f64, m: usize) -> ModeTable {
        build_table(m, &PhysicalParams::strip(1.0, 1.0, mu).unwrap()).unwrap()
    }

    fn gaussian_samples(t: &ModeTable, center: f64, n_t: usize) -> SpaceTimeSamples {
        let grid = Grid1D::for_strip(&t.params(), 257).unwrap();
        let times = uniform(-6.0, 6.0, n_t);
        SpaceTimeSamples::from_fn(
            times,
            grid,
            2,
            move |tt, z| (-tt * tt / 0.5 - (z - center) * (z - center) / 0.08).exp(),
            |_, _| 0.0,
        )
        .unwrap()
    }

    #[test]
    fn choose_a_example_values() {
        let t = table(1.0, 4);
        assert!((choose_a(&t, 2).unwrap() - 0.266_612_595).abs() < 1e-8);
        assert!(choose_a(&t, 4).unwrap() <= choose_a(&t, 2).unwrap());
        let massless = table(0.0, 2);
        let gap2 = massless.entry(2).q.powi(2) - massless.entry(1).q.powi(2);
        assert!((choose_a(&massless, 2).unwrap() - 0.9 / gap2).abs() < 1e-14);
        assert!(choose_a(&t, 0).is_err());
    }

    #[test]
    fn chi_shape() {
        assert_eq!(chi(0.0), 1.0);
        assert_eq!(chi(0.5), 0.0);
        assert_eq!(chi(-0.7), 0.0);
        assert!(chi(0.49) > 0.0 && chi(0.49) < 1e-10);
    }

    fn unit_coeffs(n: usize) -> SmearedCoefficients {
        SmearedCoefficients {
            omegas: vec![0.0; n],
            plus: (0..n).map(|m| Complex64::new(1.0 + m as f64, 0.5)).collect(),
            minus: (0..n).map(|m| Complex64::new(1.0 + m as f64, -0.5)).collect(),
        }
    }

    #[test]
    fn uniform_scale_from_choose_a_overlaps() {
        let t = table(1.0, 4);
        let a = choose_a(&t, 2).unwrap();
        let r = extend_to_schwartz(&unit_coeffs(5), &t, &[0, 1, 2], BumpScale::Uniform(a));
        assert!(matches!(r, Err(Error::BumpOverlap { .. })));
        // narrow enough bumps are accepted
        assert!(extend_to_schwartz(&unit_coeffs(5), &t, &[0, 1, 2], BumpScale::Uniform(2.0)).is_ok());
    }

    #[test]
    fn interpolation_and_gaps() {
        let t = table(1.0, 6);
        let c = unit_coeffs(7);
        let modes: Vec<usize> = (0..=5).collect();
        let ext = extend_to_schwartz(&c, &t, &modes, BumpScale::PerMode).unwrap();
        for (k, &m) in modes.iter().enumerate() {
            let e = t.entry(m);
            let w = e.omega(0.0, 1.0);
            assert!((ext.evaluate(w) * e.d_bdy - c.plus[m]).norm() < 1e-12);
            assert!((ext.evaluate(-w) * e.d_bdy - c.minus[m]).norm() < 1e-12);
            if k + 1 < modes.len() {
                let gap = 0.5 * (ext.support(k).1 + ext.support(k + 1).0);
                assert_eq!(ext.evaluate(gap), Complex64::new(0.0, 0.0));
            }
        }
        assert_eq!(ext.evaluate(0.0), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn extension_is_smooth_across_bump_edge() {
        let t = table(1.0, 4);
        let ext = extend_to_schwartz(&unit_coeffs(5), &t, &[0, 1, 2, 3], BumpScale::PerMode).unwrap();
        let (_, hi) = ext.support(1);
        // first differences shrink with the step: no jump at the edge
        let jump = |h: f64| (ext.evaluate(hi - h) - ext.evaluate(hi + h)).norm();
        assert!(jump(1e-3) < 1e-12);
        let d1 = |w: f64, h: f64| (ext.evaluate(w + h) - ext.evaluate(w - h)).norm() / (2.0 * h);
        let samples: Vec<f64> = (0..200).map(|j| d1(hi - 0.05 + 0.0005 * j as f64, 1e-5)).collect();
        let max = samples.iter().copied().fold(0.0, f64::max);
        assert!(max.is_finite());
        assert!(samples.windows(2).all(|w| (w[1] - w[0]).abs() < 0.05 * max.max(1e-300) + 1e-9));
    }

    #[test]
    fn dual_reproduces_coefficients() {
        let t = table(1.0, 30);
        let f = gaussian_samples(&t, 0.2, 601);
        let cfg = HoloConfig { times: uniform(-2000.0, 2000.0, 16001), ..HoloConfig::default() };
        let (img, co) = holographic_dual(&f, &t, &cfg).unwrap();
        assert!(img.meta.retained_fraction >= 0.999);
        assert!(img.max_imag < 1e-10);
        let chk = verify_dual(&img, &co, &t).map_err(|e| format!("{e} {:?}", img.meta)).unwrap();
        assert!(chk.interpolation_residual < 1e-12, "{chk:?}");
        assert!(chk.roundtrip_residual < 1e-6, "{chk:?}");
        // no DC component
        let dt = img.times[1] - img.times[0];
        let dc: f64 = img.f_prime.iter().sum::<f64>() * dt;
        assert!(dc.abs() < 1e-6, "{dc}");
    }

    #[test]
    fn perturbed_couplings_are_detected() {
        let t = table(1.0, 20);
        let f = gaussian_samples(&t, 0.0, 601);
        let (img, co) = holographic_dual(&f, &t, &HoloConfig { times: uniform(-5.0, 5.0, 11), ..HoloConfig::default() }).unwrap();
        let mut worst = 0.0f64;
        let scale = img.meta.modes.iter().map(|&m| co.plus[m].norm()).fold(0.0, f64::max);
        for &m in &img.meta.modes {
            let e = t.entry(m);
            let w = e.omega(0.0, 1.0);
            worst = worst.max((img.extension.evaluate(w) * (1.01 * e.d_bdy) - co.plus[m]).norm() / scale);
        }
        assert!(worst > 5e-3 && worst < 2e-2, "{worst}");
    }

    #[test]
    fn linearity_and_reality() {
        let t = table(1.0, 20);
        let f = gaussian_samples(&t, 0.3, 401);
        let g = gaussian_samples(&t, -0.4, 401);
        let cfg = HoloConfig { m_cutoff: Some(12), times: uniform(-10.0, 10.0, 201), ..HoloConfig::default() };
        let (fi, fc) = holographic_dual(&f, &t, &cfg).unwrap();
        let (gi, gc) = holographic_dual(&g, &t, &cfg).unwrap();
        let mix = SmearedCoefficients {
            omegas: fc.omegas.clone(),
            plus: fc.plus.iter().zip(&gc.plus).map(|(a, b)| a * 2.0 - b * 0.5).collect(),
            minus: fc.minus.iter().zip(&gc.minus).map(|(a, b)| a * 2.0 - b * 0.5).collect(),
        };
        let mi = dual_from_coeffs(&mix, &t, &cfg).unwrap();
        for j in 0..mi.f_prime.len() {
            let lin = 2.0 * fi.f_prime[j] - 0.5 * gi.f_prime[j];
            assert!((mi.f_prime[j] - lin).abs() < 1e-10);
        }
        assert!(fi.max_imag < 1e-10);
    }

    #[test]
    fn fig2_reference_peak() {
        assert!((fig2_test_function(0.0, 0.0) - (-8.0f64).exp()).abs() < 1e-18);
        assert_eq!(fig2_test_function(0.5, 0.0), 0.0);
    }

    #[test]
    fn halfspace_gap_and_edge() {
        let p = PhysicalParams::half_space(1.0, 1.0).unwrap();
        let grid = Grid1D::new(0.0, 4.0, 401).unwrap();
        let f = SpaceTimeSamples::from_fn(
            uniform(-6.0, 6.0, 241),
            grid,
            1,
            |tt, z| (-tt * tt - (z - 1.0) * (z - 1.0) / 0.1).exp(),
            |_, _| 0.0,
        )
        .unwrap();
        let q = uniform(0.0, 10.0, 201);
        let img = halfspace_dual(&f, &p, &q).unwrap();
        assert_eq!(img.evaluate(0.5), Complex64::new(0.0, 0.0));
        let edge = img.evaluate(1.0 + 1e-12);
        assert!((edge - img.plus[0] * (PI / 2.0).sqrt()).norm() < 1e-6 * img.plus[0].norm().max(1e-300));
        for (k, &qq) in q.iter().enumerate().skip(1) {
            let w = (qq * qq + 1.0).sqrt();
            let back = img.evaluate(w) * halfspace_prefactor(qq, 1.0);
            assert!((back - img.plus[k]).norm() < 1e-6 * img.plus[k].norm().max(1e-12));
        }
    }
}
