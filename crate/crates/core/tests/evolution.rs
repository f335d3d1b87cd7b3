use std::sync::Arc;

use wentzell::evolve::{
    causality_probe, run_reflection, Energy, FdtdState, ReflectionConfig, SpectralState,
};
use wentzell::modes::{build_table, ModeTable};
use wentzell::space::{Grid1D, PhysicalParams};

fn band_limited(mu: f64) -> (PhysicalParams, Arc<ModeTable>, SpectralState) {
    let p = PhysicalParams::strip(1.0, 1.0, mu).unwrap();
    let table = Arc::new(build_table(10, &p).unwrap());
    let a: Vec<f64> = (0..=10).map(|m| (-0.3 * m as f64).exp()).collect();
    let b: Vec<f64> = (0..=10).map(|m| 0.2 * (m as f64).cos() * (-0.4 * m as f64).exp()).collect();
    let s = SpectralState::new(table.clone(), a, b).unwrap();
    (p, table, s)
}

fn l2_error(p: &PhysicalParams, s: &SpectralState, n: usize, t: f64) -> f64 {
    let grid = Grid1D::for_strip(p, n).unwrap();
    let data = s.to_cauchy(&grid).unwrap();
    let mut f = FdtdState::from_cauchy(p, &data, 0.5).unwrap();
    f.run_until(t);
    assert!((f.time() - t).abs() < 1e-9);
    let exact = s.evolve(f.time()).to_cauchy(&grid).unwrap();
    let h = grid.spacing();
    f.phi()
        .iter()
        .zip(exact.position().bulk())
        .enumerate()
        .map(|(i, (a, b))| {
            let w = if i == 0 || i == n { 0.5 * h } else { h };
            w * (a - b.re).powi(2)
        })
        .sum::<f64>()
        .sqrt()
}

#[test]
fn fdtd_converges_to_spectral() {
    let (p, _, s) = band_limited(1.0);
    // h = 1/512 on [−1, 1]
    let e1 = l2_error(&p, &s, 1024, 2.0);
    let e2 = l2_error(&p, &s, 2048, 2.0);
    let ratio = e1 / e2;
    assert!(e1 < 1e-3, "e1={e1}");
    assert!((3.2..=4.8).contains(&ratio), "ratio={ratio} e1={e1} e2={e2}");
}

#[test]
fn fdtd_energy_drift_small() {
    let (p, _, s) = band_limited(1.0);
    let grid = Grid1D::for_strip(&p, 1024).unwrap();
    let mut f = FdtdState::from_cauchy(&p, &s.to_cauchy(&grid).unwrap(), 0.5).unwrap();
    let e0 = f.energy().total;
    let mut drift = 0.0f64;
    while f.time() < 10.0 {
        f.step();
        drift = drift.max((f.energy().total - e0).abs() / e0);
    }
    assert!(drift < 1e-3, "drift={drift}");
    let spectral_e0 = s.energy().total;
    assert!((e0 - spectral_e0).abs() / spectral_e0 < 1e-3);
}

#[test]
fn reflection_at_acceptance_resolution() {
    let r = run_reflection(&ReflectionConfig::default()).unwrap();
    println!("sup error {} value at 1 {}", r.sup_error, r.value_at_1);
    assert!(r.sup_error < 0.1);
    assert!((r.value_at_1 - 0.7358).abs() < 5e-2);
}

#[test]
fn causality_after_boundary_interaction() {
    let p = PhysicalParams::strip(1.0, 1.0, 1.0).unwrap();
    let grid = Grid1D::for_strip(&p, 2048).unwrap();
    let bump = |z: f64| {
        let u = (z - 0.3) / 0.2;
        if u.abs() < 1.0 { (1.0 - u * u).powi(4) } else { 0.0 }
    };
    let pos = wentzell::space::BulkBoundaryFunction::from_fn(grid, 2, bump).unwrap();
    let vel = wentzell::space::BulkBoundaryFunction::zeros(grid, 2).unwrap();
    let data = wentzell::space::CauchyData::new(pos, vel).unwrap();
    let r = causality_probe(&p, &data, (0.1, 0.5), 3.0, 0.5, 1e-8, 1e-3).unwrap();
    println!("{r:?}");
    assert!(r.pass);
}
