use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use relnls::akns::{general_flow, hierarchy_flow, zero_curvature_residual, FieldPair, LaxPair};
use relnls::algebra::{DispersionKind, DispersionSeries, MultiPoly, Var};
use relnls::burgers::{
    backlund_closure, characteristics_solve, gaussian_pipeline, shock, BacklundSeed, CharacteristicProfile,
    ClosureConfig, PipelineConfig, Shape, Speed,
};
use relnls::epoly::ode::Tolerances;
use relnls::epoly::{epoly_generate, integrate_vortices, zero_trajectories, VortexConfig, VortexParams};
use relnls::spectral::{
    observables, splitstep_evolve_with, Grid1D, InitialCondition, SplitStepConfig, WaveParams, WaveState,
};
use relnls::verify::{self, CriterionReport, SuiteSize};

use crate::artifact::Sink;
use crate::config::*;
use crate::CliError;

type Outcome = Result<(), CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn dispersion(kind: DispersionArg, eps_order: u32, degree_cap: Option<u32>) -> Result<DispersionSeries, CliError> {
    if eps_order > 4 {
        return Err(usage(format!("--eps-order must be at most 4, got {eps_order}")));
    }
    let kind = match kind {
        DispersionArg::Nr => DispersionKind::Nonrelativistic,
        DispersionArg::Sr => DispersionKind::Semirelativistic,
    };
    Ok(DispersionSeries::make(kind, eps_order, degree_cap))
}

fn eps_of(c: Option<f64>) -> f64 {
    c.map_or(0.0, |c| 1.0 / (c * c))
}

pub fn run(cmd: &Command, seed: u64, sink: &mut Sink) -> Outcome {
    match cmd {
        Command::Epoly(EpolyCmd::Gen(a)) => epoly_gen(a, sink),
        Command::Epoly(EpolyCmd::Vortex(a)) => epoly_vortex(a, sink),
        Command::Akns(AknsCmd::Flow(a)) => akns_flow(a, sink),
        Command::Akns(AknsCmd::Lax(a)) => akns_lax(a, sink),
        Command::Akns(AknsCmd::VerifyZc(a)) => akns_verify_zc(a, sink),
        Command::Burgers(BurgersCmd::Residual(a)) => burgers_residual(a, sink),
        Command::Burgers(BurgersCmd::Backlund(a)) => burgers_backlund(a, sink),
        Command::Burgers(BurgersCmd::Shock(a)) => burgers_shock(a, sink),
        Command::Evolve(a) => evolve(a, seed, sink),
        Command::Verify(a) => verify_cmd(a, sink),
    }
}

fn epoly_gen(a: &EpolyGenArgs, sink: &mut Sink) -> Outcome {
    if a.n > 16 {
        return Err(usage(format!("--n must be at most 16, got {}", a.n)));
    }
    let d = dispersion(a.dispersion, a.eps_order, a.degree_cap)?;
    let h = epoly_generate(&d, a.n);
    println!("{}", h.poly);
    sink.text(&format!("epoly_h{}.txt", a.n), &h.poly.to_string())?;
    Ok(())
}

fn epoly_vortex(a: &VortexArgs, sink: &mut Sink) -> Outcome {
    if !(1..=12).contains(&a.n) {
        return Err(usage(format!("--n must be in 1..=12, got {}", a.n)));
    }
    if !(a.t0 > 0.0 && a.t1 > a.t0) || a.samples < 2 {
        return Err(usage("need 0 < t0 < t1 and at least 2 samples"));
    }
    if !(a.hbar > 0.0 && a.m > 0.0) {
        return Err(usage("hbar and m must be positive"));
    }
    let d = dispersion(a.dispersion, a.eps_order, None)?;
    let params = VortexParams { hbar: a.hbar, m: a.m, eps: eps_of(a.c.0) };
    let times: Vec<f64> = (0..a.samples).map(|k| a.t0 + (a.t1 - a.t0) * k as f64 / (a.samples - 1) as f64).collect();
    let tracked = zero_trajectories(&d, a.n, &times, &params)?;
    let cfg = VortexConfig { positions: tracked[0].clone(), dispersion: d, params };
    let tol = Tolerances { rtol: 1e-11, atol: 1e-13, ..Default::default() };
    let integrated = integrate_vortices(&cfg, times[0], &times[1..], tol)?;
    let mut deviation = 0.0_f64;
    for (zs, ws) in tracked[1..].iter().zip(&integrated) {
        for (z, w) in zs.iter().zip(ws) {
            deviation = deviation.max((z - w).norm());
        }
    }
    let n = a.n as usize;
    let mut columns = vec!["t".to_string()];
    for k in 0..n {
        columns.push(format!("re_x{k}"));
        columns.push(format!("im_x{k}"));
    }
    let rows: Vec<Vec<f64>> = times
        .iter()
        .zip(&tracked)
        .map(|(t, zs)| std::iter::once(*t).chain(zs.iter().flat_map(|z| [z.re, z.im])).collect())
        .collect();
    let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
    let csv = format!("vortex_h{}.csv", a.n);
    sink.csv(&csv, &cols, &rows)?;
    let ys: Vec<(usize, String)> = (0..n).map(|k| (3 + 2 * k, format!("x{k}"))).collect();
    let ys_ref: Vec<(usize, &str)> = ys.iter().map(|(c, s)| (*c, s.as_str())).collect();
    sink.gnuplot(&format!("vortex_h{}.gp", a.n), &csv, 2, &ys_ref, "Re x_k")?;
    sink.json(&format!("vortex_h{}.json", a.n), &json!({ "max_ode_deviation": deviation }))?;
    println!("tracked {n} zeros at {} times; max deviation from the vortex ODE {deviation:e}", times.len());
    Ok(())
}

fn akns_flow(a: &FlowArgs, sink: &mut Sink) -> Outcome {
    if !(1..=8).contains(&a.n) {
        return Err(usage(format!("--n must be in 1..=8, got {}", a.n)));
    }
    let mut f = hierarchy_flow(a.n)?;
    if a.kappa0 {
        f = f.subs(Var::Kappa2, &MultiPoly::zero());
    }
    println!("upper: {}\nlower: {}", f.upper, f.lower);
    sink.json(&format!("flow_{}.json", a.n), &json!({ "upper": f.upper.to_string(), "lower": f.lower.to_string() }))?;
    Ok(())
}

fn lax_for(a: &LaxArgs) -> Result<(String, LaxPair, FieldPair), CliError> {
    match (a.n, a.dispersion) {
        (Some(n), None) => {
            if !(1..=6).contains(&n) {
                return Err(usage(format!("--n must be in 1..=6, got {n}")));
            }
            Ok((format!("n{n}"), LaxPair::for_flow(n)?, hierarchy_flow(n)?))
        }
        (None, Some(kind)) => {
            if a.eps_order > 2 {
                return Err(usage(format!("--eps-order must be at most 2, got {}", a.eps_order)));
            }
            let d = dispersion(kind, a.eps_order, None)?;
            let label = match kind {
                DispersionArg::Nr => "nr".to_string(),
                DispersionArg::Sr => format!("sr_eps{}", a.eps_order),
            };
            Ok((label, LaxPair::for_dispersion(&d)?, general_flow(&d)?))
        }
        _ => Err(usage("give exactly one of --n and --dispersion")),
    }
}

fn matrix_text(m: &relnls::akns::Matrix2) -> [[String; 2]; 2] {
    [[m[0][0].to_string(), m[0][1].to_string()], [m[1][0].to_string(), m[1][1].to_string()]]
}

fn akns_lax(a: &LaxArgs, sink: &mut Sink) -> Outcome {
    let (label, lax, _) = lax_for(a)?;
    let (j1, j0) = (matrix_text(&lax.j1), matrix_text(&lax.j0));
    for (name, m) in [("J1", &j1), ("J0", &j0)] {
        for (r, row) in m.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                println!("{name}[{r}][{c}] = {e}");
            }
        }
    }
    sink.json(&format!("lax_{label}.json"), &json!({ "j1": j1, "j0": j0 }))?;
    Ok(())
}

fn akns_verify_zc(a: &LaxArgs, sink: &mut Sink) -> Outcome {
    let (label, lax, flow) = lax_for(a)?;
    let report = zero_curvature_residual(&lax, &flow);
    let matrix = matrix_text(&report.matrix);
    let entries = report.entries();
    println!("[[{}, {}], [{}, {}]]", matrix[0][0], matrix[0][1], matrix[1][0], matrix[1][1]);
    let body = json!({ "zero": report.is_zero(), "matrix": matrix, "nonzero_entries": entries });
    sink.json(&format!("zero_curvature_{label}.json"), &body)?;
    if report.is_zero() {
        Ok(())
    } else {
        Err(CliError::Failed(json!({ "check": format!("zero curvature ({label})"), "nonzero_entries": entries })))
    }
}

fn velocity_rows(x: &[f64], v: &[Complex64], res: &[Complex64]) -> Vec<Vec<f64>> {
    x.iter().zip(v).zip(res).map(|((x, v), r)| vec![*x, v.re, v.im, r.norm()]).collect()
}

const VELOCITY_COLUMNS: [&str; 4] = ["x", "re_v", "im_v", "abs_residual"];

fn burgers_residual(a: &ResidualArgs, sink: &mut Sink) -> Outcome {
    if !(a.sigma > 0.0 && a.half_window > 0.0 && a.length > 2.0 * a.half_window) {
        return Err(usage("need sigma > 0 and 0 < 2 half-window < L"));
    }
    if a.n < 16 || a.eps_order > 2 {
        return Err(usage("need n >= 16 and eps-order <= 2"));
    }
    let ResidualIc::Gaussian = a.ic;
    let cfg = PipelineConfig {
        sigma: a.sigma,
        k0: a.k0,
        hbar: 1.0,
        m: 1.0,
        c: a.c.0,
        eps_order: a.eps_order,
        t: a.t,
        dt: a.dt,
        length: a.length,
        n: a.n,
        window: (-a.half_window, a.half_window),
    };
    let r = gaussian_pipeline(&cfg)?;
    sink.csv("residual.csv", &VELOCITY_COLUMNS, &velocity_rows(&r.x, &r.v, &r.residual))?;
    sink.gnuplot("residual.gp", "residual.csv", 1, &[(2, "Re V"), (3, "Im V"), (4, "|residual|")], "x")?;
    sink.json("residual.json", &json!({ "max_residual": r.max_residual, "samples": r.x.len() }))?;
    println!("max residual {:e} over {} samples", r.max_residual, r.x.len());
    Ok(())
}

fn burgers_backlund(a: &BacklundArgs, sink: &mut Sink) -> Outcome {
    if !(a.half_window > 0.0 && a.exclusion >= 0.0 && a.dt > 0.0 && a.sigma > 0.0) {
        return Err(usage("need positive half-window, sigma and dt, and non-negative exclusion"));
    }
    let seed = match a.seed {
        SeedArg::Zero => BacklundSeed::Zero,
        SeedArg::Plane => BacklundSeed::Plane { p: a.p },
        SeedArg::Gaussian => BacklundSeed::Gaussian { sigma: a.sigma },
    };
    let cfg = ClosureConfig {
        t: a.t,
        dt: a.dt,
        window: (-a.half_window, a.half_window),
        exclusion: a.exclusion,
        ..ClosureConfig::default()
    };
    let r = backlund_closure(seed, &cfg)?;
    sink.csv("backlund.csv", &VELOCITY_COLUMNS, &velocity_rows(&r.x, &r.v2, &r.residual))?;
    sink.gnuplot("backlund.gp", "backlund.csv", 1, &[(2, "Re V2"), (3, "Im V2"), (4, "|residual|")], "x")?;
    let summary = json!({ "max_residual": r.max_residual, "samples": r.samples, "singular_loci": r.loci });
    sink.json("backlund.json", &summary)?;
    println!("max residual {:e} over {} samples, singular loci {:?}", r.max_residual, r.samples, r.loci);
    if r.max_residual < 1e-8 {
        Ok(())
    } else {
        Err(CliError::Failed(json!({ "check": "Backlund closure", "max_residual": r.max_residual })))
    }
}

fn burgers_shock(a: &ShockArgs, sink: &mut Sink) -> Outcome {
    if !(a.x_max > a.x_min) || a.samples < 2 || a.fractions.iter().any(|f| !(*f >= 0.0)) {
        return Err(usage("need x-min < x-max, at least 2 samples and non-negative fractions"));
    }
    let shape = match a.profile {
        ProfileArg::Tanh => Shape::Tanh,
        ProfileArg::NegTanh => Shape::NegTanh,
        ProfileArg::OneMinusTanh => Shape::OneMinusTanh,
        ProfileArg::Gaussian => Shape::Gaussian,
    };
    let speed = a.c.0.map_or(Speed::Nonrelativistic, |c| Speed::Relativistic { c });
    let prof = CharacteristicProfile::from_shape(shape, speed, (a.x_min, a.x_max))?;
    let s = shock(&prof);
    let times: Vec<f64> = a.fractions.iter().map(|f| s.as_ref().map_or(*f, |s| f * s.time)).collect();
    if let Some(s) = &s {
        if let Some(t) = times.iter().find(|t| **t >= s.time) {
            return Err(usage(format!("output time {t} is not before the shock time {}", s.time)));
        }
    }
    let xs: Vec<f64> =
        (0..a.samples).map(|k| a.x_min + (a.x_max - a.x_min) * k as f64 / (a.samples - 1) as f64).collect();
    let mut rows = Vec::with_capacity(xs.len());
    let mut worst = 0.0_f64;
    for &x in &xs {
        let mut row = vec![x];
        for &t in &times {
            let v = characteristics_solve(&prof, x, t)?;
            worst = worst.max((v - prof.initial(x - prof.speed.value(v) * t)).abs());
            row.push(v);
        }
        rows.push(row);
    }
    let names: Vec<String> = std::iter::once("x".to_string()).chain(times.iter().map(|t| format!("v_t{t}"))).collect();
    let cols: Vec<&str> = names.iter().map(String::as_str).collect();
    sink.csv("shock.csv", &cols, &rows)?;
    let ys: Vec<(usize, String)> = times.iter().enumerate().map(|(k, t)| (k + 2, format!("t = {t}"))).collect();
    let ys_ref: Vec<(usize, &str)> = ys.iter().map(|(c, s)| (*c, s.as_str())).collect();
    sink.gnuplot("shock.gp", "shock.csv", 1, &ys_ref, "x")?;
    let summary = json!({
        "shock_time": s.as_ref().map(|s| s.time),
        "shock_origin": s.as_ref().map(|s| s.origin),
        "times": times,
        "max_implicit_residual": worst,
    });
    sink.json("shock.json", &summary)?;
    match &s {
        Some(s) => println!("shock time {} (characteristic from x0 = {})", s.time, s.origin),
        None => println!("no shock: the characteristic speed is nondecreasing"),
    }
    Ok(())
}

#[derive(Serialize)]
struct SnapshotHeader {
    length: f64,
    n: usize,
    dx: f64,
    x_first: f64,
    params: WaveParams,
    layout: &'static str,
    files: Vec<(String, usize, f64)>,
}

fn evolve(a: &EvolveArgs, seed: u64, sink: &mut Sink) -> Outcome {
    if a.n < 64 {
        return Err(usage(format!("--n must be at least 64, got {}", a.n)));
    }
    if !(a.length > 0.0 && a.dt > 0.0 && a.m > 0.0 && a.every > 0) || a.eps_order > 1 {
        return Err(usage("need positive L, dt, m and every, and eps-order 0 or 1"));
    }
    if !(a.noise >= 0.0) {
        return Err(usage("noise amplitude must be non-negative"));
    }
    let params = WaveParams { hbar: 1.0, m: a.m, c: a.c.0, kappa2: a.kappa2 };
    let grid = Grid1D::new(a.length, a.n)?;
    let ic = match a.ic {
        EvolveIc::Soliton => InitialCondition::Soliton { eta: a.eta, x0: a.x0 },
        EvolveIc::Gaussian => InitialCondition::Gaussian { sigma: a.sigma, x0: a.x0, k0: a.k0 },
        EvolveIc::Plane => InitialCondition::Plane { mode: a.mode },
    };
    let mut values = ic.sample(&grid, &params)?;
    if a.noise > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for z in &mut values {
            *z += Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * a.noise;
        }
    }
    let s0 = WaveState::new(grid, values, 0.0, params)?;
    let cfg = SplitStepConfig::new(a.dt, a.steps, a.eps_order);

    let norm0 = s0.norm();
    let row = |step: usize, s: &WaveState| {
        let o = observables(s);
        vec![step as f64, s.time, o.norm, (o.norm - norm0) / norm0, o.momentum, o.centroid, o.energy_candidate, s.max_amplitude()]
    };
    let mut rows = vec![row(0, &s0)];
    let mut snaps: Vec<(usize, Vec<Complex64>, f64)> = Vec::new();
    if a.snapshot_every > 0 {
        snaps.push((0, s0.values.clone(), 0.0));
    }
    let last = splitstep_evolve_with(&s0, &cfg, |step, s| {
        if step % a.every == 0 || step == a.steps {
            rows.push(row(step, s));
        }
        if a.snapshot_every > 0 && (step % a.snapshot_every == 0 || step == a.steps) {
            snaps.push((step, s.values.clone(), s.time));
        }
    })?;
    let columns = ["step", "t", "norm", "norm_drift", "momentum", "centroid", "energy_candidate", "max_amplitude"];
    sink.csv("observables.csv", &columns, &rows)?;
    sink.gnuplot("observables.gp", "observables.csv", 2, &[(4, "relative norm drift"), (7, "energy candidate")], "t")?;
    if !snaps.is_empty() {
        let mut files = Vec::new();
        for (step, values, t) in &snaps {
            let name = format!("snapshots/psi_{step:08}.bin");
            sink.snapshot(&name, values)?;
            files.push((name, *step, *t));
        }
        let header = SnapshotHeader {
            length: grid.length,
            n: grid.n,
            dx: grid.dx(),
            x_first: grid.x(0),
            params,
            layout: "little-endian f64 pairs (re, im), one per grid point",
            files,
        };
        sink.json("snapshots/header.json", &header)?;
    }
    let drift = (last.norm() - norm0).abs() / norm0;
    println!("{} steps to t = {}; relative norm drift {drift:e}", a.steps, last.time);
    Ok(())
}

fn criterion(target: VerifyTarget) -> CriterionReport {
    let s = SuiteSize::FULL;
    match target {
        VerifyTarget::Epoly => verify::epoly_suite(s.epoly_max),
        VerifyTarget::Hierarchy => verify::hierarchy_suite(s.flow_max),
        VerifyTarget::ZeroCurvature => verify::zero_curvature_suite(s.zero_curvature_max, s.general_lax),
        VerifyTarget::Nonlinearity => verify::nonlinearity_suite(),
        VerifyTarget::FirstCorrection => verify::first_correction_suite(),
        VerifyTarget::Backlund => verify::backlund_suite(),
        VerifyTarget::Shock => verify::shock_suite(),
        VerifyTarget::Solver => verify::solver_suite(),
        VerifyTarget::Vortex => verify::vortex_suite(),
        VerifyTarget::All => unreachable!("expanded by the caller"),
    }
}

fn verify_cmd(a: &VerifyArgs, sink: &mut Sink) -> Outcome {
    let reports = match (a.target, a.quick) {
        (VerifyTarget::All, q) => verify::run_all(q),
        (t, false) => vec![criterion(t)],
        (t, true) => {
            let s = SuiteSize::QUICK;
            vec![match t {
                VerifyTarget::Epoly => verify::epoly_suite(s.epoly_max),
                VerifyTarget::Hierarchy => verify::hierarchy_suite(s.flow_max),
                VerifyTarget::ZeroCurvature => verify::zero_curvature_suite(s.zero_curvature_max, s.general_lax),
                other => criterion(other),
            }]
        }
    };
    for r in &reports {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!("{status} criterion {} ({}) in {:.2}s", r.id, r.name, r.seconds);
        for f in &r.failures {
            println!("    {f}");
        }
        if let Some(d) = &r.diff {
            println!("    structured diff: {} mismatching terms", d.mismatches.len());
        }
    }
    sink.json("verify_report.json", &reports)?;
    let failed: Vec<&CriterionReport> = reports.iter().filter(|r| !r.passed).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(json!({ "failed_criteria": failed })))
    }
}
