use wentzell::holo::{
    fig2_reproduce, holographic_dual, pairing_check, uniform, verify_dual, Fig2Config, HoloConfig,
};
use wentzell::modes::build_table;
use wentzell::qft::SpaceTimeSamples;
use wentzell::space::{Grid1D, PhysicalParams};

fn gaussian(center: f64, width: f64) -> impl Fn(f64, f64) -> f64 {
    move |t, z| (-t * t / 0.5 - (z - center).powi(2) / width).exp()
}

#[test]
fn dual_and_pairing_for_gaussians() {
    let p = PhysicalParams::strip(1.0, 1.0, 1.0).unwrap();
    let table = build_table(40, &p).unwrap();
    let grid = Grid1D::for_strip(&p, 512).unwrap();
    let times = uniform(-6.0, 6.0, 801);
    let f = SpaceTimeSamples::from_fn(times.clone(), grid, 2, gaussian(0.2, 0.08), |_, _| 0.0).unwrap();
    let g = SpaceTimeSamples::from_fn(times, grid, 2, gaussian(-0.3, 0.05), |_, _| 0.0).unwrap();
    let long = uniform(-2000.0, 2000.0, 16001);
    // Shared cutoff: the larger of the two automatic ones.
    let (fi, _) = holographic_dual(&f, &table, &HoloConfig { times: vec![0.0, 1.0], ..HoloConfig::default() }).unwrap();
    let (gi, _) = holographic_dual(&g, &table, &HoloConfig { times: vec![0.0, 1.0], ..HoloConfig::default() }).unwrap();
    let m = fi.meta.m_cutoff.max(gi.meta.m_cutoff);
    let cfg = HoloConfig { m_cutoff: Some(m), times: long, ..HoloConfig::default() };
    let (fi, fc) = holographic_dual(&f, &table, &cfg).unwrap();
    let (gi, gc) = holographic_dual(&g, &table, &cfg).unwrap();
    let chk = verify_dual(&fi, &fc, &table).unwrap();
    println!("M = {m}, {chk:?}");
    assert!(chk.roundtrip_residual < 1e-6);
    let pair = pairing_check(&fi, &fc, &gi, &gc, &table).unwrap();
    println!("{pair:?}");
    assert!(pair.relative_error < 1e-5);
}

#[test]
fn fig2_bursts_follow_reflections() {
    let r = fig2_reproduce(&Fig2Config::default()).unwrap();
    let times: Vec<f64> = r.bursts.iter().map(|b| b.time).collect();
    assert_eq!(times.len(), 6, "bursts at {times:?}");
    for (b, want) in r.bursts.iter().zip([-5.0, -3.0, -1.0, 1.0, 3.0, 5.0]) {
        assert!((b.time - want).abs() <= 0.2, "burst at {} for {want}", b.time);
    }
    let env: Vec<f64> = r.bursts.iter().map(|b| b.envelope).collect();
    assert!(env[0] < env[1] && env[1] < env[2]);
    assert!(env[3] > env[4] && env[4] > env[5]);
    // symmetric in t for a t-even test function
    for k in 0..3 {
        assert!((env[k] - env[5 - k]).abs() < 1e-3 * env[k]);
    }
    assert!(r.image.max_imag < 1e-10 * env[2]);
    assert!((r.reference_peak.1 - (-8.0f64).exp()).abs() < 1e-12);
}

#[test]
fn fig2_bursts_stable_under_small_regulator() {
    let base = fig2_reproduce(&Fig2Config::default()).unwrap();
    let reg = fig2_reproduce(&Fig2Config { mu_reg: 0.05, ..Fig2Config::default() }).unwrap();
    assert_eq!(base.bursts.len(), reg.bursts.len());
    for (a, b) in base.bursts.iter().zip(&reg.bursts) {
        assert!((a.time - b.time).abs() < 0.1, "{} vs {}", a.time, b.time);
    }
}
