use std::path::Path;
use std::sync::Arc;

use serde::Serialize;
use wentzell::evolve::{causality_probe, run_reflection, Energy, FdtdState, ReflectionConfig, SpectralState};
use wentzell::holo::{fig2_reproduce, holographic_dual, Burst, Fig2Config, HoloConfig, HoloImage, HoloMeta};
use wentzell::modes::verify_table;
use wentzell::qft::{
    boundary_2pt_halfspace, boundary_2pt_strip, halfspace_weight_total, spacelike_2pt_bessel, tail_convergence,
    SpaceTimeSamples, TwoPointSpec, TwoPointValue,
};
use wentzell::space::{BulkBoundaryFunction, CauchyData, Grid1D, PhysicalParams, Side};
use wentzell::verify;

use crate::io::{atomic_write, cached_table, emit, to_json, Csv};
use crate::{CliError, GeometryArg, Physical, Scenario};

fn physical_header(p: &Physical) -> Vec<(&'static str, String)> {
    vec![("S", p.s.to_string()), ("c", p.c.to_string()), ("mu", p.mu.to_string())]
}

pub fn modes(phys: Physical, max: usize, cache_dir: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let params = PhysicalParams::strip(phys.s, phys.c, phys.mu)?;
    let cached = cached_table(cache_dir, &params, max)?;
    let table = &cached.table;
    let report = verify_table(table, 0.1, 50);

    if let Some(path) = out {
        let mut header = physical_header(&phys);
        header.push(("max", max.to_string()));
        header.push(("residual_tol", table.residual_tol().to_string()));
        let mut csv = Csv::new(&header, &["m", "q", "omega", "c_norm", "d_bdy", "residual"]);
        for (e, chk) in table.entries().iter().zip(&report.checks) {
            csv.row(&[e.m as f64, e.q, e.omega(0.0, table.mu()), e.c_norm, e.d_bdy, chk.residual]);
        }
        atomic_write(path, csv.into_string().as_bytes())?;
    }

    let worst = report.checks.iter().map(|k| k.residual.abs()).fold(0.0, f64::max);
    let ratios: Vec<f64> = report.checks.iter().filter_map(|k| k.d_ratio).collect();
    println!("S = {}, c = {}, mu = {}, modes 0..={max}", phys.s, phys.c, phys.mu);
    println!(
        "cache {}: {} (sha256 {})",
        if cached.hit { "hit" } else { "written" },
        cached.path.display(),
        cached.sha256
    );
    println!(
        "brackets and residuals: {} (max residual {worst:.2e})",
        pass_word(report.brackets_passed())
    );
    if ratios.is_empty() {
        println!("asymptotic bounds: no modes in range m ≥ 50");
    } else {
        let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().copied().fold(0.0, f64::max);
        println!(
            "asymptotic bounds (m ≥ 50, delta = 0.1): {} (d ratio in [{lo:.4}, {hi:.4}], c bound {:.3})",
            pass_word(report.asymptotics_passed()),
            report.c_constant
        );
    }
    if report.all_passed() {
        Ok(())
    } else {
        Err(CliError::Acceptance("mode table verification failed".into()))
    }
}

fn pass_word(p: bool) -> &'static str {
    if p {
        "pass"
    } else {
        "FAIL"
    }
}

/// Band-limited data on modes 0..=10 (the FDTD/spectral comparison data).
fn standing_state(params: &PhysicalParams) -> Result<SpectralState, CliError> {
    let table = Arc::new(wentzell::modes::build_table(10, params)?);
    let a: Vec<f64> = (0..=10).map(|m| (-0.3 * m as f64).exp()).collect();
    let b: Vec<f64> = (0..=10).map(|m| 0.2 * (m as f64).cos() * (-0.4 * m as f64).exp()).collect();
    Ok(SpectralState::new(table, a, b)?)
}

#[allow(clippy::too_many_arguments)]
pub fn evolve(
    phys: Physical,
    scenario: Scenario,
    grid_n: Option<usize>,
    cfl: f64,
    t_end: f64,
    rows: usize,
    snapshots: usize,
    out: Option<&Path>,
) -> Result<(), CliError> {
    match scenario {
        Scenario::Reflection => return reflection(phys, grid_n, cfl, out),
        Scenario::Causality => return causality(phys, grid_n, cfl, out),
        _ => {}
    }
    if rows == 0 || !(t_end > 0.0) {
        return Err(CliError::Validation("need rows ≥ 1 and t_end > 0".into()));
    }
    let params = PhysicalParams::strip(phys.s, phys.c, phys.mu)?;
    let grid = Grid1D::for_strip(&params, grid_n.unwrap_or(1024))?;
    let spectral = match scenario {
        Scenario::Standing => Some(standing_state(&params)?),
        _ => None,
    };
    let data = match scenario {
        Scenario::Standing => spectral.as_ref().expect("set above").to_cauchy(&grid)?,
        Scenario::Pulse => CauchyData::new(
            BulkBoundaryFunction::from_fn(grid, 2, |z| (-(z / (0.1 * phys.s)).powi(2)).exp())?,
            BulkBoundaryFunction::zeros(grid, 2)?,
        )?,
        _ => CauchyData::new(BulkBoundaryFunction::zeros(grid, 2)?, BulkBoundaryFunction::zeros(grid, 2)?)?,
    };
    let mut state = FdtdState::from_cauchy(&params, &data, cfl)?;
    let probes: Vec<usize> = (0..snapshots)
        .map(|k| {
            let z = if snapshots == 1 { 0.0 } else { -phys.s + 2.0 * phys.s * k as f64 / (snapshots - 1) as f64 };
            grid.nearest(z)
        })
        .collect();

    let mut header = physical_header(&phys);
    header.extend([
        ("scenario", format!("{scenario:?}").to_lowercase()),
        ("grid_intervals", grid.intervals().to_string()),
        ("cfl", cfl.to_string()),
        ("dt", state.dt().to_string()),
        ("t_end", t_end.to_string()),
    ]);
    let mut columns: Vec<String> = ["t", "E_bulk", "E_bdy", "E_total"].map(String::from).to_vec();
    if spectral.is_some() {
        columns.push("l2_vs_spectral".into());
    }
    columns.extend(probes.iter().map(|&i| format!("phi(z={:.6})", grid.node(i))));
    let column_refs: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut csv = Csv::new(&header, &column_refs);

    let e0 = state.energy().total;
    let mut drift = 0.0f64;
    for k in 0..=rows {
        if k > 0 {
            state.run_until(t_end * k as f64 / rows as f64);
        }
        let e = state.energy();
        if e0 > 0.0 {
            drift = drift.max((e.total - e0).abs() / e0);
        }
        let mut row = vec![state.time(), e.bulk, e.boundary, e.total];
        if let Some(s) = &spectral {
            row.push(l2_difference(state.phi(), &s.evolve(state.time()).to_cauchy(&grid)?, &grid));
        }
        row.extend(probes.iter().map(|&i| state.phi()[i]));
        csv.row(&row);
    }
    emit(out, &csv.into_string())?;
    eprintln!("relative energy drift {drift:.3e} over t ∈ [0, {}]", state.time());
    if drift < 1e-3 {
        Ok(())
    } else {
        Err(CliError::Acceptance(format!("energy drift {drift:.3e} exceeds 1e-3")))
    }
}

fn l2_difference(phi: &[f64], exact: &CauchyData, grid: &Grid1D) -> f64 {
    let h = grid.spacing();
    let n = grid.intervals();
    phi.iter()
        .zip(exact.position().bulk())
        .enumerate()
        .map(|(i, (a, b))| {
            let w = if i == 0 || i == n { 0.5 * h } else { h };
            w * (a - b.re).powi(2)
        })
        .sum::<f64>()
        .sqrt()
}

fn reflection(phys: Physical, grid_n: Option<usize>, cfl: f64, out: Option<&Path>) -> Result<(), CliError> {
    let base = ReflectionConfig::default();
    let cfg = ReflectionConfig {
        c: phys.c,
        h: grid_n.map_or(base.h, |n| base.length / n as f64),
        cfl,
        ..base
    };
    let r = run_reflection(&cfg)?;
    let bound = 0.1 / cfg.c;
    let header = vec![
        ("scenario", "reflection".to_string()),
        ("c", cfg.c.to_string()),
        ("eps", cfg.eps.to_string()),
        ("h", cfg.h.to_string()),
        ("cfl", cfg.cfl.to_string()),
        ("length", cfg.length.to_string()),
        ("sup_error", format!("{:e}", r.sup_error)),
        ("value_at_1", r.value_at_1.to_string()),
        ("exact_at_1", r.exact_at_1.to_string()),
    ];
    let mut csv = Csv::new(&header, &["t", "numeric", "exact", "residual"]);
    for ((t, a), b) in r.times.iter().zip(&r.numeric).zip(&r.exact) {
        csv.row(&[*t, *a, *b, a - b]);
    }
    emit(out, &csv.into_string())?;
    eprintln!(
        "boundary trace sup error {:.3e} (bound {bound:.3e}); value at t = 1: {:.5} (closed form {:.5})",
        r.sup_error, r.value_at_1, r.exact_at_1
    );
    if r.sup_error < bound {
        Ok(())
    } else {
        Err(CliError::Acceptance(format!("sup error {:.3e} ≥ {bound:.3e}", r.sup_error)))
    }
}

fn causality(phys: Physical, grid_n: Option<usize>, cfl: f64, out: Option<&Path>) -> Result<(), CliError> {
    let params = PhysicalParams::strip(phys.s, phys.c, phys.mu)?;
    let grid = Grid1D::for_strip(&params, grid_n.unwrap_or(2048))?;
    let (a, b) = (0.1 * phys.s, 0.5 * phys.s);
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let bump = move |z: f64| {
        let u = (z - mid) / half;
        if u.abs() < 1.0 {
            (1.0 - u * u).powi(4)
        } else {
            0.0
        }
    };
    let data = CauchyData::new(BulkBoundaryFunction::from_fn(grid, 2, bump)?, BulkBoundaryFunction::zeros(grid, 2)?)?;
    let r = causality_probe(&params, &data, (a, b), 3.0 * phys.s, cfl, 1e-8, 1e-3)?;
    #[derive(Serialize)]
    struct Out<'a> {
        #[serde(rename = "S")]
        s: f64,
        c: f64,
        mu: f64,
        grid_intervals: usize,
        cfl: f64,
        report: &'a wentzell::evolve::CausalityReport,
    }
    let doc = Out { s: phys.s, c: phys.c, mu: phys.mu, grid_intervals: grid.intervals(), cfl, report: &r };
    emit(out, &to_json(&doc))?;
    if r.pass {
        Ok(())
    } else {
        Err(CliError::Acceptance("causality probe failed".into()))
    }
}

#[allow(clippy::too_many_arguments)]
pub fn twopoint(
    phys: Physical,
    geometry: GeometryArg,
    max: usize,
    q_max: f64,
    dim: u32,
    range: f64,
    samples: usize,
    cache_dir: &Path,
    out: Option<&Path>,
) -> Result<(), CliError> {
    if samples < 2 || !(range > 0.0) {
        return Err(CliError::Validation("need samples ≥ 2 and range > 0".into()));
    }
    let mut header = vec![("geometry", format!("{geometry:?}").to_lowercase())];
    header.extend(physical_header(&phys));
    header.push(("dim", dim.to_string()));
    let points: Vec<f64> = if dim == 1 {
        (0..samples).map(|k| -range + 2.0 * range * k as f64 / (samples - 1) as f64).collect()
    } else {
        (1..=samples).map(|k| range * k as f64 / samples as f64).collect()
    };
    let mut values: Vec<(f64, TwoPointValue)> = Vec::with_capacity(points.len());

    match geometry {
        GeometryArg::Strip => {
            let params = PhysicalParams::strip(phys.s, phys.c, phys.mu)?.with_dim(dim)?;
            let table = cached_table(cache_dir, &PhysicalParams::strip(phys.s, phys.c, phys.mu)?, max)?.table;
            let spec = TwoPointSpec::strip(params, Side::Plus, max)?;
            header.push(("modes", max.to_string()));
            if max >= 4 {
                let tail = tail_convergence(&table, max / 2)?;
                header.extend([
                    ("tail_M", tail.m.to_string()),
                    ("tail_observed", format!("{:e}", tail.observed_tail)),
                    ("tail_analytic", format!("{:e}", tail.analytic_tail)),
                    ("tail_ratio", tail.ratio.to_string()),
                ]);
                eprintln!(
                    "tail of sum d_m^2 beyond M = {}: observed {:.4e}, asymptotic {:.4e}, ratio {:.4} ({})",
                    tail.m,
                    tail.observed_tail,
                    tail.analytic_tail,
                    tail.ratio,
                    pass_word(tail.pass)
                );
            }
            for &p in &points {
                let v = if dim == 1 {
                    boundary_2pt_strip(p, 0.0, &spec, &table)?
                } else {
                    spacelike_2pt_bessel(p * p, &spec, &table)?
                };
                values.push((p, v));
            }
        }
        GeometryArg::Halfspace => {
            let params = PhysicalParams::half_space(phys.c, phys.mu)?.with_dim(dim)?;
            let spec = TwoPointSpec::half_space(params, q_max)?;
            let normalization = phys.c * halfspace_weight_total(phys.c);
            header.push(("q_max", q_max.to_string()));
            header.push(("weight_normalization", format!("{normalization:.16e}")));
            eprintln!("weight normalization c·∫w(q)dq = {normalization:.12} (target 1)");
            for &p in &points {
                let v = if dim == 1 {
                    boundary_2pt_halfspace(p, 0.0, &spec)?
                } else {
                    boundary_2pt_halfspace(0.0, p, &spec)?
                };
                values.push((p, v));
            }
        }
    }

    let first = if dim == 1 { "x0" } else { "distance" };
    let mut csv = Csv::new(&header, &[first, "re", "im", "tail_bound", "quadrature_error"]);
    for (p, v) in &values {
        csv.row(&[*p, v.value.re, v.value.im, v.tail_bound, v.quadrature_error]);
    }
    emit(out, &csv.into_string())
}

#[derive(Serialize)]
struct HoloMetaFile<'a> {
    test_function: String,
    #[serde(rename = "S")]
    s: f64,
    c: f64,
    mu: f64,
    meta: &'a HoloMeta,
    max_imag: f64,
    bursts: Vec<Burst>,
    reference_peak: Option<(f64, f64)>,
}

#[allow(clippy::too_many_arguments)]
pub fn holo(
    phys: Physical,
    fig2: bool,
    center: f64,
    width: f64,
    max: usize,
    cutoff: Option<usize>,
    cache_dir: &Path,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let (image, meta) = if fig2 {
        let r = fig2_reproduce(&Fig2Config::default())?;
        let meta = HoloMetaFile {
            test_function: "product of exp(-1/(s+1/2)) exp(-1/(1/2-s)) bumps in t and z".into(),
            s: 1.0,
            c: 1.0,
            mu: 0.0,
            meta: &r.image.meta,
            max_imag: r.image.max_imag,
            bursts: r.bursts.clone(),
            reference_peak: Some(r.reference_peak),
        };
        let text = to_json(&meta);
        (r.image, text)
    } else {
        if !(width > 0.0) {
            return Err(CliError::Validation(format!("width must be positive, got {width}")));
        }
        let params = PhysicalParams::strip(phys.s, phys.c, phys.mu)?;
        let table = cached_table(cache_dir, &params, max)?.table;
        let grid = Grid1D::for_strip(&params, 512)?;
        let times = wentzell::holo::uniform(-6.0, 6.0, 801);
        let f = SpaceTimeSamples::from_fn(
            times,
            grid,
            2,
            move |t, z| (-t * t / 0.5 - (z - center).powi(2) / width).exp(),
            |_, _| 0.0,
        )?;
        let cfg = HoloConfig { m_cutoff: cutoff, ..HoloConfig::default() };
        let (image, _) = holographic_dual(&f, &table, &cfg)?;
        let bursts = wentzell::holo::detect_bursts(&image.times, &image.envelope, 0.1);
        let meta = HoloMetaFile {
            test_function: format!("exp(-t^2/0.5 - (z - {center})^2/{width})"),
            s: phys.s,
            c: phys.c,
            mu: phys.mu,
            meta: &image.meta,
            max_imag: image.max_imag,
            bursts,
            reference_peak: None,
        };
        let text = to_json(&meta);
        (image, text)
    };

    let dir = out.unwrap_or(Path::new("holo-out"));
    write_image(dir, &image)?;
    atomic_write(&dir.join("meta.json"), meta.as_bytes())?;
    let parsed: serde_json::Value = serde_json::from_str(&meta).expect("just serialized");
    println!("modes {:?}, cutoff M = {}", image.meta.modes, image.meta.m_cutoff);
    if let Some(w) = &image.meta.warning {
        println!("warning: {w}");
    }
    if let Some(bursts) = parsed["bursts"].as_array() {
        for b in bursts {
            println!("burst at t = {:+.3}, envelope {:.4e}", b["time"].as_f64().unwrap_or(f64::NAN), b["envelope"].as_f64().unwrap_or(f64::NAN));
        }
    }
    println!("wrote {}", dir.display());
    Ok(())
}

fn write_image(dir: &Path, image: &HoloImage) -> Result<(), CliError> {
    let header = vec![
        ("half_width", image.meta.half_width.to_string()),
        ("c", image.meta.c.to_string()),
        ("mu", image.meta.mu.to_string()),
        ("m_cutoff", image.meta.m_cutoff.to_string()),
        ("chi", image.meta.chi.to_string()),
    ];
    let mut fhat = Csv::new(&header, &["omega", "re", "im"]);
    for (w, v) in image.omega.iter().zip(&image.fhat) {
        fhat.row(&[*w, v.re, v.im]);
    }
    atomic_write(&dir.join("fhat.csv"), fhat.into_string().as_bytes())?;
    let mut fprime = Csv::new(&header, &["t", "f_prime", "envelope"]);
    for ((t, v), e) in image.times.iter().zip(&image.f_prime).zip(&image.envelope) {
        fprime.row(&[*t, *v, *e]);
    }
    atomic_write(&dir.join("fprime.csv"), fprime.into_string().as_bytes())
}

pub fn verify(criteria: &[u8], out: Option<&Path>) -> Result<(), CliError> {
    let ids: Vec<u8> = if criteria.is_empty() { verify::CRITERIA.iter().map(|c| c.0).collect() } else { criteria.to_vec() };
    let results: Vec<verify::CriterionResult> = ids
        .iter()
        .map(|&id| {
            let r = verify::run(id);
            println!("{r}");
            r
        })
        .collect();
    let passed = results.iter().filter(|r| r.pass).count();
    println!("{passed} of {} criteria passed", results.len());
    if let Some(path) = out {
        #[derive(Serialize)]
        struct Doc<'a> {
            passed: usize,
            total: usize,
            criteria: &'a [verify::CriterionResult],
        }
        atomic_write(path, to_json(&Doc { passed, total: results.len(), criteria: &results }).as_bytes())?;
    }
    if passed == results.len() {
        Ok(())
    } else {
        Err(CliError::Acceptance(format!("{} criteria failed", results.len() - passed)))
    }
}
