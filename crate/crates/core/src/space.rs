//! Geometry, physical parameters and the weighted bulk ⊕ boundary function space.
//!
//! A state on a spatial slice is a pair `(φ, φ|)`: bulk samples on a uniform
//! grid in the transverse coordinate `z` plus one value per boundary
//! component. The scalar product weights the boundary values by the coupling
//! `c`, so the boundary carries its own share of the norm and energy.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modes::ModeTable;

/// Default relative tolerance for [`BulkBoundaryFunction::is_compatible`].
pub const COMPATIBILITY_TOL: f64 = 1e-9;

/// Spatial slice geometry in the transverse direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Geometry {
    /// `z ∈ [-S, S]` with boundary components `∂₋` at `-S` and `∂₊` at `+S`.
    Strip { half_width: f64 },
    /// `z ∈ [0, ∞)` with a single boundary component at `z = 0`.
    HalfSpace,
}

/// Boundary component of the strip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    /// `z = -S`.
    Minus,
    /// `z = +S`.
    Plus,
}

impl Side {
    /// `(±1)^m`, the sign picked up by mode `m` at this side.
    pub fn mode_sign(self, m: usize) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus if m % 2 == 0 => 1.0,
            Side::Minus => -1.0,
        }
    }

    /// Sign of the inward normal in terms of `∂_z`.
    pub fn inward_sign(self) -> f64 {
        match self {
            Side::Minus => 1.0,
            Side::Plus => -1.0,
        }
    }
}

/// Masses, boundary coupling and geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    c: f64,
    mu: f64,
    geometry: Geometry,
    dim: u32,
}

impl PhysicalParams {
    pub fn new(c: f64, mu: f64, geometry: Geometry, dim: u32) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::InvalidParameter(format!("c must be finite, got {c}")));
        }
        if c <= 0.0 {
            return Err(Error::NegativeCoupling(c));
        }
        if !(mu.is_finite() && mu >= 0.0) {
            return Err(Error::InvalidParameter(format!("mu must be finite and >= 0, got {mu}")));
        }
        if let Geometry::Strip { half_width } = geometry {
            if !(half_width.is_finite() && half_width > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "strip half-width S must be > 0, got {half_width}"
                )));
            }
        }
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension d must be >= 1".into()));
        }
        Ok(Self { c, mu, geometry, dim })
    }

    /// Strip `[-s, s]`, boundary theory dimension 1.
    pub fn strip(s: f64, c: f64, mu: f64) -> Result<Self> {
        Self::new(c, mu, Geometry::Strip { half_width: s }, 1)
    }

    pub fn half_space(c: f64, mu: f64) -> Result<Self> {
        Self::new(c, mu, Geometry::HalfSpace, 1)
    }

    pub fn with_dim(self, dim: u32) -> Result<Self> {
        Self::new(self.c, self.mu, self.geometry, dim)
    }

    pub fn with_mu(self, mu: f64) -> Result<Self> {
        Self::new(self.c, mu, self.geometry, self.dim)
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// Strip half-width, or an error for the half-space.
    pub fn half_width(&self) -> Result<f64> {
        match self.geometry {
            Geometry::Strip { half_width } => Ok(half_width),
            Geometry::HalfSpace => Err(Error::GeometryMismatch("expected strip geometry".into())),
        }
    }

    /// Number of boundary components.
    pub fn boundary_components(&self) -> usize {
        match self.geometry {
            Geometry::Strip { .. } => 2,
            Geometry::HalfSpace => 1,
        }
    }
}

/// Quadrature rule used for bulk integrals on a [`Grid1D`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Quadrature {
    /// Composite trapezoid, second order.
    Trapezoid,
    /// Trapezoid with Gregory end corrections (weights 3/8, 7/6, 23/24 at each
    /// end), fourth order on smooth non-periodic integrands.
    #[default]
    EndCorrected,
}

/// Uniform grid with both endpoints as nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    z_min: f64,
    z_max: f64,
    n: usize,
}

impl Grid1D {
    /// `n` intervals, `n + 1` nodes.
    pub fn new(z_min: f64, z_max: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("grid needs n >= 2 intervals, got {n}")));
        }
        if !(z_min.is_finite() && z_max.is_finite() && z_max > z_min) {
            return Err(Error::InvalidParameter(format!(
                "grid bounds must satisfy z_min < z_max, got [{z_min}, {z_max}]"
            )));
        }
        Ok(Self { z_min, z_max, n })
    }

    /// Grid spanning the strip of `params` with `n` intervals.
    pub fn for_strip(params: &PhysicalParams, n: usize) -> Result<Self> {
        let s = params.half_width()?;
        Self::new(-s, s, n)
    }

    pub fn z_min(&self) -> f64 {
        self.z_min
    }

    pub fn z_max(&self) -> f64 {
        self.z_max
    }

    /// Number of intervals.
    pub fn intervals(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.z_max - self.z_min) / self.n as f64
    }

    /// Node `i`; both endpoints are reproduced exactly.
    pub fn node(&self, i: usize) -> f64 {
        if i == 0 {
            self.z_min
        } else if i == self.n {
            self.z_max
        } else {
            let t = i as f64 / self.n as f64;
            self.z_min * (1.0 - t) + self.z_max * t
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.n).map(|i| self.node(i)).collect()
    }

    pub fn weights(&self, rule: Quadrature) -> Vec<f64> {
        let h = self.spacing();
        let mut w = vec![h; self.n + 1];
        match rule {
            Quadrature::EndCorrected if self.n + 1 >= 7 => {
                let ends = [3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0];
                for (k, e) in ends.iter().enumerate() {
                    w[k] = e * h;
                    w[self.n - k] = e * h;
                }
            }
            _ => {
                w[0] = 0.5 * h;
                w[self.n] = 0.5 * h;
            }
        }
        w
    }

    /// Nearest node index to `z` (clamped).
    pub fn nearest(&self, z: f64) -> usize {
        let x = ((z - self.z_min) / self.spacing()).round();
        x.clamp(0.0, self.n as f64) as usize
    }

    fn same_as(&self, other: &Grid1D) -> bool {
        self.n == other.n && self.z_min == other.z_min && self.z_max == other.z_max
    }
}

/// Element `(φ, φ|)` of `L²(Σ) ⊕ L²(∂Σ)`, sampled.
///
/// `boundary[0]` belongs to the `z_min` end (`∂₋` for the strip, the only
/// boundary for the half-space); `boundary[1]` to `∂₊`.
#[derive(Debug, Clone, PartialEq)]
pub struct BulkBoundaryFunction {
    grid: Grid1D,
    bulk: Vec<Complex64>,
    boundary: Vec<Complex64>,
}

impl BulkBoundaryFunction {
    pub fn new(grid: Grid1D, bulk: Vec<Complex64>, boundary: Vec<Complex64>) -> Result<Self> {
        if bulk.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} bulk samples for a grid with {} nodes",
                bulk.len(),
                grid.len()
            )));
        }
        if boundary.is_empty() || boundary.len() > 2 {
            return Err(Error::InvalidParameter(format!(
                "expected one or two boundary values, got {}",
                boundary.len()
            )));
        }
        Ok(Self { grid, bulk, boundary })
    }

    pub fn from_real(grid: Grid1D, bulk: &[f64], boundary: &[f64]) -> Result<Self> {
        Self::new(
            grid,
            bulk.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            boundary.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    /// Samples `f` on the grid and takes the boundary values as the trace,
    /// so the result lies in the operator domain.
    pub fn from_fn(grid: Grid1D, components: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let bulk: Vec<f64> = grid.nodes().into_iter().map(f).collect();
        let boundary = match components {
            1 => vec![bulk[0]],
            2 => vec![bulk[0], bulk[grid.intervals()]],
            k => {
                return Err(Error::InvalidParameter(format!(
                    "expected one or two boundary components, got {k}"
                )))
            }
        };
        Self::from_real(grid, &bulk, &boundary)
    }

    pub fn zeros(grid: Grid1D, components: usize) -> Result<Self> {
        Self::from_fn(grid, components, |_| 0.0)
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn bulk(&self) -> &[Complex64] {
        &self.bulk
    }

    pub fn boundary(&self) -> &[Complex64] {
        &self.boundary
    }

    pub fn boundary_mut(&mut self) -> &mut [Complex64] {
        &mut self.boundary
    }

    pub fn bulk_mut(&mut self) -> &mut [Complex64] {
        &mut self.bulk
    }

    /// Bulk samples at the boundary node(s), in the order of `boundary()`.
    pub fn trace(&self) -> Vec<Complex64> {
        match self.boundary.len() {
            1 => vec![self.bulk[0]],
            _ => vec![self.bulk[0], self.bulk[self.grid.intervals()]],
        }
    }

    /// Whether the boundary values agree with the bulk trace, relative to
    /// the sup norm of the data.
    pub fn is_compatible(&self, tol: f64) -> bool {
        let scale = self
            .bulk
            .iter()
            .chain(self.boundary.iter())
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        self.trace()
            .iter()
            .zip(&self.boundary)
            .all(|(t, b)| (t - b).norm() <= tol * scale)
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Self {
            grid: self.grid,
            bulk: self.bulk.iter().map(|v| v * a).collect(),
            boundary: self.boundary.iter().map(|v| v * a).collect(),
        }
    }

    /// `self + a·other`.
    pub fn axpy(&self, a: Complex64, other: &Self) -> Result<Self> {
        check_same(self, other)?;
        Ok(Self {
            grid: self.grid,
            bulk: self.bulk.iter().zip(&other.bulk).map(|(x, y)| x + a * y).collect(),
            boundary: self
                .boundary
                .iter()
                .zip(&other.boundary)
                .map(|(x, y)| x + a * y)
                .collect(),
        })
    }
}

fn check_same(f: &BulkBoundaryFunction, g: &BulkBoundaryFunction) -> Result<()> {
    if !f.grid.same_as(&g.grid) {
        return Err(Error::GridMismatch(format!("{:?} vs {:?}", f.grid, g.grid)));
    }
    if f.boundary.len() != g.boundary.len() {
        return Err(Error::GridMismatch(format!(
            "{} vs {} boundary components",
            f.boundary.len(),
            g.boundary.len()
        )));
    }
    Ok(())
}

/// Cauchy data `(Φ₀, Φ₁)`: position and velocity.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyData {
    position: BulkBoundaryFunction,
    velocity: BulkBoundaryFunction,
}

impl CauchyData {
    pub fn new(position: BulkBoundaryFunction, velocity: BulkBoundaryFunction) -> Result<Self> {
        check_same(&position, &velocity)?;
        Ok(Self { position, velocity })
    }

    pub fn position(&self) -> &BulkBoundaryFunction {
        &self.position
    }

    pub fn velocity(&self) -> &BulkBoundaryFunction {
        &self.velocity
    }
}

/// `⟨F, G⟩ = ∫ F̄ G + c Σ F̄| G|`, bulk by the default quadrature rule.
pub fn weighted_inner_product(
    f: &BulkBoundaryFunction,
    g: &BulkBoundaryFunction,
    params: &PhysicalParams,
) -> Result<Complex64> {
    weighted_inner_product_with(f, g, params, Quadrature::default())
}

pub fn weighted_inner_product_with(
    f: &BulkBoundaryFunction,
    g: &BulkBoundaryFunction,
    params: &PhysicalParams,
    rule: Quadrature,
) -> Result<Complex64> {
    check_same(f, g)?;
    if f.boundary.len() != params.boundary_components() {
        return Err(Error::GeometryMismatch(format!(
            "function has {} boundary values, geometry has {}",
            f.boundary.len(),
            params.boundary_components()
        )));
    }
    let w = f.grid.weights(rule);
    let bulk: Complex64 = f
        .bulk
        .iter()
        .zip(&g.bulk)
        .zip(&w)
        .map(|((a, b), w)| a.conj() * b * w)
        .sum();
    let bdy: Complex64 = f.boundary.iter().zip(&g.boundary).map(|(a, b)| a.conj() * b).sum();
    Ok(bulk + bdy * params.c())
}

pub fn weighted_norm(f: &BulkBoundaryFunction, params: &PhysicalParams) -> Result<f64> {
    Ok(weighted_inner_product(f, f, params)?.re.max(0.0).sqrt())
}

/// `σ(A, B) = ∫ (φ_A ψ̇_B − φ̇_A ψ_B) + c Σ (φ_A| ψ̇_B| − φ̇_A| ψ_B|)` on the real parts.
pub fn symplectic_form(a: &CauchyData, b: &CauchyData, params: &PhysicalParams) -> Result<f64> {
    check_same(&a.position, &b.position)?;
    let grid = a.position.grid;
    let w = grid.weights(Quadrature::default());
    let bulk: f64 = (0..grid.len())
        .map(|i| {
            w[i] * (a.position.bulk[i].re * b.velocity.bulk[i].re
                - a.velocity.bulk[i].re * b.position.bulk[i].re)
        })
        .sum();
    let bdy: f64 = (0..a.position.boundary.len())
        .map(|k| {
            a.position.boundary[k].re * b.velocity.boundary[k].re
                - a.velocity.boundary[k].re * b.position.boundary[k].re
        })
        .sum();
    Ok(bulk + params.c() * bdy)
}

/// `𝒟_r` norm `(Σ_m (ω_m²)^r |a_m|²)^{1/2}` from mode coefficients (`k = 0`).
pub fn spectral_sobolev_norm(coeffs: &[Complex64], table: &ModeTable, r: f64) -> Result<f64> {
    if coeffs.len() > table.len() {
        return Err(Error::InvalidParameter(format!(
            "{} coefficients for a table with {} modes",
            coeffs.len(),
            table.len()
        )));
    }
    let mut acc = 0.0;
    for (entry, a) in table.entries().iter().zip(coeffs) {
        let w2 = entry.omega_sq(0.0, table.mu());
        let mag2 = a.norm_sqr();
        if w2 == 0.0 {
            if r < 0.0 && mag2 > 0.0 {
                return Err(Error::UndefinedNorm(format!(
                    "mode {} has ω = 0, so the 𝒟_{r} norm diverges",
                    entry.m
                )));
            }
            if r == 0.0 {
                acc += mag2;
            }
            continue;
        }
        acc += w2.powf(r) * mag2;
    }
    Ok(acc.sqrt())
}

/// `∫ |φ'|² + μ²|φ|² + c μ² Σ |φ|²`: the `𝒟₁` norm² written as a Dirichlet
/// energy for data in the operator domain (`d = 1`, no tangential gradient).
/// `derivative` holds samples of `∂_z φ` on the same grid.
pub fn dirichlet_energy_form(
    f: &BulkBoundaryFunction,
    derivative: &[Complex64],
    params: &PhysicalParams,
) -> Result<f64> {
    if derivative.len() != f.grid.len() {
        return Err(Error::GridMismatch("derivative samples do not match the grid".into()));
    }
    let w = f.grid.weights(Quadrature::default());
    let mu2 = params.mu() * params.mu();
    let bulk: f64 = (0..f.grid.len())
        .map(|i| w[i] * (derivative[i].norm_sqr() + mu2 * f.bulk[i].norm_sqr()))
        .sum();
    let bdy: f64 = f.boundary.iter().map(|v| mu2 * v.norm_sqr()).sum();
    Ok(bulk + params.c() * bdy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strip1() -> PhysicalParams {
        PhysicalParams::strip(1.0, 1.0, 0.0).unwrap()
    }

    #[test]
    fn rejects_non_positive_coupling() {
        assert!(matches!(PhysicalParams::strip(1.0, -1.0, 0.0), Err(Error::NegativeCoupling(_))));
        assert!(matches!(PhysicalParams::strip(1.0, 0.0, 0.0), Err(Error::NegativeCoupling(_))));
        assert!(PhysicalParams::strip(0.0, 1.0, 0.0).is_err());
        assert!(PhysicalParams::new(1.0, 0.0, Geometry::HalfSpace, 0).is_err());
        assert!(PhysicalParams::strip(1.0, 1.0, -0.5).is_err());
    }

    #[test]
    fn grid_endpoints_exact() {
        let g = Grid1D::new(-0.7, 0.7, 999).unwrap();
        assert_eq!(g.node(0), -0.7);
        assert_eq!(g.node(999), 0.7);
        assert!(g.nodes().windows(2).all(|w| w[1] > w[0]));
        assert!(Grid1D::new(0.0, 1.0, 1).is_err());
        assert!(Grid1D::new(1.0, 0.0, 4).is_err());
    }

    #[test]
    fn weights_integrate_polynomials() {
        let g = Grid1D::new(-1.0, 1.0, 40).unwrap();
        for rule in [Quadrature::Trapezoid, Quadrature::EndCorrected] {
            let w = g.weights(rule);
            let total: f64 = w.iter().sum();
            assert!((total - 2.0).abs() < 1e-14);
        }
        // The end-corrected rule is exact on cubics.
        let w = g.weights(Quadrature::EndCorrected);
        let cubic: f64 = g.nodes().iter().zip(&w).map(|(z, w)| w * (z + 1.0).powi(3)).sum();
        assert!((cubic - 4.0).abs() < 1e-13, "{cubic}");
    }

    #[test]
    fn constant_inner_product() {
        let p = strip1();
        let g = Grid1D::for_strip(&p, 64).unwrap();
        let one = BulkBoundaryFunction::from_fn(g, 2, |_| 1.0).unwrap();
        let ip = weighted_inner_product(&one, &one, &p).unwrap();
        assert!((ip.re - 4.0).abs() < 1e-13 && ip.im == 0.0);
    }

    #[test]
    fn odd_against_constant_vanishes() {
        let p = strip1();
        let g = Grid1D::for_strip(&p, 128).unwrap();
        let f = BulkBoundaryFunction::from_real(
            g,
            &g.nodes().iter().map(|z| (std::f64::consts::PI * z).sin()).collect::<Vec<_>>(),
            &[0.0, 0.0],
        )
        .unwrap();
        let one = BulkBoundaryFunction::from_fn(g, 2, |_| 1.0).unwrap();
        assert!(weighted_inner_product(&f, &one, &p).unwrap().norm() < 1e-14);
    }

    #[test]
    fn grid_mismatch_is_an_error() {
        let p = strip1();
        let a = BulkBoundaryFunction::zeros(Grid1D::for_strip(&p, 10).unwrap(), 2).unwrap();
        let b = BulkBoundaryFunction::zeros(Grid1D::for_strip(&p, 12).unwrap(), 2).unwrap();
        assert!(matches!(weighted_inner_product(&a, &b, &p), Err(Error::GridMismatch(_))));
        let ca = CauchyData::new(a.clone(), a.clone()).unwrap();
        let cb = CauchyData::new(b.clone(), b).unwrap();
        assert!(symplectic_form(&ca, &cb, &p).is_err());
    }

    #[test]
    fn symplectic_constants() {
        let p = strip1();
        let g = Grid1D::for_strip(&p, 32).unwrap();
        let one = BulkBoundaryFunction::from_fn(g, 2, |_| 1.0).unwrap();
        let zero = BulkBoundaryFunction::zeros(g, 2).unwrap();
        let a = CauchyData::new(one.clone(), zero.clone()).unwrap();
        let b = CauchyData::new(zero, one).unwrap();
        assert!((symplectic_form(&a, &b, &p).unwrap() - 4.0).abs() < 1e-13);
        assert_eq!(symplectic_form(&a, &a, &p).unwrap(), 0.0);
    }

    #[test]
    fn compatibility() {
        let p = strip1();
        let g = Grid1D::for_strip(&p, 16).unwrap();
        let mut f = BulkBoundaryFunction::from_fn(g, 2, |z| z * z + 1.0).unwrap();
        assert!(f.is_compatible(0.0));
        f.boundary_mut()[1] += Complex64::new(1.0, 0.0);
        assert!(!f.is_compatible(COMPATIBILITY_TOL));
    }
}
