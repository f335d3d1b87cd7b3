//! Special functions and quadrature used by the two-point functions.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * puruspe::erfc(-x / std::f64::consts::SQRT_2)
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Modified Bessel function of the second kind, real order, `x > 0`.
pub fn bessel_k(nu: f64, x: f64) -> f64 {
    // K_{−ν} = K_ν
    puruspe::Inu_Knu(nu.abs(), x).1
}

pub fn bessel_j0(x: f64) -> f64 {
    puruspe::Jn(0, x.abs())
}

/// Trigamma `ψ'(x) = Σ_{j≥0} (x + j)^{-2}` for `x > 0`.
pub fn trigamma(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 20.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let x2 = 1.0 / (x * x);
    acc + 1.0 / x
        + x2 / 2.0
        + x2 / x * (1.0 / 6.0 - x2 * (1.0 / 30.0 - x2 * (1.0 / 42.0 - x2 / 30.0)))
}

/// Result of an adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    /// Sum of local Gauss/Kronrod differences.
    pub error: f64,
    pub converged: bool,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        kronrod += s * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    let k = kronrod * half;
    let g = gauss * half;
    (k, (k - g).norm())
}

/// Adaptive Gauss–Kronrod (7/15) on a finite interval, complex integrand.
pub fn integrate_complex(
    f: impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Integral<Complex64> {
    const MAX_INTERVALS: usize = 4000;
    let f: &dyn Fn(f64) -> Complex64 = &f;
    let (v0, e0) = gk15(f, a, b);
    let mut pieces = vec![(a, b, v0, e0)];
    loop {
        let value: Complex64 = pieces.iter().map(|p| p.2).sum();
        let error: f64 = pieces.iter().map(|p| p.3).sum();
        if error <= abs_tol.max(rel_tol * value.norm()) {
            return Integral { value, error, converged: true };
        }
        if pieces.len() >= MAX_INTERVALS {
            return Integral { value, error, converged: false };
        }
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, p)| if p.3 > best.1 { (i, p.3) } else { best });
        let (lo, hi, _, _) = pieces.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        let (vl, el) = gk15(f, lo, mid);
        let (vr, er) = gk15(f, mid, hi);
        pieces.push((lo, mid, vl, el));
        pieces.push((mid, hi, vr, er));
    }
}

pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Integral<f64> {
    let r = integrate_complex(|x| Complex64::new(f(x), 0.0), a, b, abs_tol, rel_tol);
    Integral { value: r.value.re, error: r.error, converged: r.converged }
}

/// `∫_a^∞ f` through `x = a + u/(1 − u)`.
pub fn integrate_to_infinity(
    f: impl Fn(f64) -> f64,
    a: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Integral<f64> {
    integrate(
        |u| {
            let w = 1.0 - u;
            if w <= 0.0 {
                return 0.0;
            }
            f(a + u / w) / (w * w)
        },
        0.0,
        1.0,
        abs_tol,
        rel_tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Series `K₀(x) = −(ln(x/2) + γ) I₀(x) + Σ (x²/4)^k/(k!)² H_k`.
    fn k0_series(x: f64) -> f64 {
        let gamma = 0.577_215_664_901_532_9;
        let y = x * x / 4.0;
        let (mut term, mut i0, mut tail, mut harmonic) = (1.0, 1.0, 0.0, 0.0);
        for k in 1..60 {
            term *= y / (k as f64 * k as f64);
            harmonic += 1.0 / k as f64;
            i0 += term;
            tail += term * harmonic;
        }
        -((x / 2.0).ln() + gamma) * i0 + tail
    }

    /// `K_ν(x) = ∫₀^∞ e^{−x cosh t} cosh(νt) dt`; the integrand is analytic
    /// in `|Im t| < π/2`, so the trapezoid rule converges geometrically.
    fn k_integral(nu: f64, x: f64) -> f64 {
        let h = 0.02;
        let term = |t: f64| (-x * (t.cosh() - 1.0)).exp() * (nu * t).cosh();
        let mut sum = 0.5 * term(0.0);
        for k in 1.. {
            let v = term(k as f64 * h);
            sum += v;
            if v < 1e-18 * sum {
                break;
            }
        }
        sum * h * (-x).exp()
    }

    /// `J₀(x) = (2π)⁻¹ ∫₀^{2π} cos(x sin θ) dθ`, periodic trapezoid rule.
    fn j0_integral(x: f64) -> f64 {
        let n = (x.abs() * 1.5) as usize + 64;
        (0..n).map(|k| (x * (2.0 * PI * k as f64 / n as f64).sin()).cos()).sum::<f64>() / n as f64
    }

    #[test]
    fn k0_against_series() {
        for x in [0.05, 0.3, 1.0, 2.0, 4.0] {
            let a = bessel_k(0.0, x);
            let b = k0_series(x);
            assert!((a - b).abs() < 1e-13 * b.abs().max(1.0), "x={x}: {a} vs {b}");
        }
        assert!((bessel_k(0.0, 1.0) - 0.421_024_438_240_708_3).abs() < 1e-14);
    }

    #[test]
    fn k_against_integral_representation() {
        for nu in [0.0, 0.5, 1.0, 1.5, 2.0] {
            for x in [1e-3, 0.3, 1.0, 4.0, 30.0, 300.0] {
                let (a, b) = (bessel_k(nu, x), k_integral(nu, x));
                assert!((a / b - 1.0).abs() < 1e-12, "nu={nu} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn half_integer_k_closed_form() {
        for x in [0.1, 1.0, 7.5, 30.0] {
            let exact = (PI / (2.0 * x)).sqrt() * (-x).exp();
            assert!((bessel_k(0.5, x) / exact - 1.0).abs() < 1e-13);
            assert_eq!(bessel_k(-0.5, x), bessel_k(0.5, x));
        }
    }

    #[test]
    fn k_recurrence() {
        // K_{ν+1} = K_{ν−1} + (2ν/x) K_ν
        for x in [0.2, 1.5, 12.0] {
            let lhs = bessel_k(2.0, x);
            let rhs = bessel_k(0.0, x) + 2.0 / x * bessel_k(1.0, x);
            assert!((lhs / rhs - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn j0_values() {
        assert!((bessel_j0(0.0) - 1.0).abs() < 1e-15);
        assert!((bessel_j0(1.0) - 0.765_197_686_557_966_6).abs() < 1e-14);
        assert!(bessel_j0(2.404_825_557_695_773).abs() < 1e-14);
        for x in [0.5, 3.0, 17.0, 100.0, -4.0] {
            assert!((bessel_j0(x) - j0_integral(x)).abs() < 1e-13, "x={x}");
        }
    }

    #[test]
    fn quadrature_basics() {
        let r = integrate(|x| x.sin(), 0.0, PI, 1e-13, 1e-13);
        assert!((r.value - 2.0).abs() < 1e-13 && r.converged);
        let r = integrate_to_infinity(|q| 2.0 / (PI * (q * q + 1.0)), 0.0, 1e-13, 1e-13);
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trigamma_values() {
        // ψ'(1) = π²/6
        assert!((trigamma(1.0) - PI * PI / 6.0).abs() < 1e-13);
        let direct: f64 = (0..2_000_000).map(|j| 1.0 / (100.0 + j as f64).powi(2)).sum::<f64>()
            + 1.0 / 2_000_100.0;
        assert!((trigamma(100.0) - direct).abs() < 1e-11);
    }
}
