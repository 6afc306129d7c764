use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::json;
use skinwave_core::elastic::WaveKind;
use skinwave_core::materials::{
    self, catalog_to_string, fit_modulus, parse_catalog, silicones, StrainWindow, StressStrainCurve,
};
use skinwave_core::optimizer::{
    default_grid, optimize, refine_thickness, ControlPairing, DesignObjective, Direction, OptimizeOptions,
    SearchSpace, ThicknessBounds,
};
use skinwave_core::signals::{
    build_profile, fit_decay, parse_trace, PipelineConfig, ProfileReference, DEFAULT_COMB_WIDTH, DEFAULT_ORDER,
};
use skinwave_core::solver::{
    normalize_profile, parse_stack, surface_profile, AmplitudeProfile, LoadSpec, ProfileMetadata, SkinStack,
    SolverOptions,
};
use skinwave_core::unit::{
    check_constraints, compare_designs, edge_amplitude_profile, parse_design, transmitted_amplitude_factor,
    Coupling, Family, HapticUnitDesign, LayerSpec, ModelOptions, OuterMedium, DEFAULT_INNER_RADIUS,
};
use skinwave_core::{Execution, Material};

use crate::output::{num, CliError, CliResult, RunContext};
use crate::*;

pub(crate) fn dispatch(cli: Cli) -> CliResult<()> {
    let execution = match cli.threads {
        Some(0) => return Err(CliError::Usage("--threads must be at least 1".into())),
        Some(1) => Execution::Sequential,
        _ => Execution::Parallel,
    };
    #[cfg(feature = "parallel")]
    if let Some(n) = cli.threads.filter(|&n| n > 1) {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Validation(format!("cannot start {n} worker threads: {e}")))?;
        return pool.install(|| execute(cli.command, execution));
    }
    execute(cli.command, execution)
}

fn execute(command: Command, execution: Execution) -> CliResult<()> {
    match command {
        Command::Simulate(a) => simulate(a, execution),
        Command::DesignEval(a) => design_eval(a),
        Command::Check(a) => check(a),
        Command::Optimize(a) => optimize_cmd(a, execution),
        Command::FitModulus(a) => fit_modulus_cmd(a),
        Command::ProcessLdv(a) => process_ldv(a, execution),
        Command::Overlay(a) => overlay(a),
    }
}

// ---------------------------------------------------------------------------
// shared inputs

fn load_catalog(ctx: &mut RunContext, common: &CommonArgs) -> CliResult<Vec<Material>> {
    let path = common.catalog.clone().or_else(|| {
        std::env::var_os(CATALOG_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
    });
    match path {
        Some(p) => {
            let text = ctx.read_input(&p)?;
            ctx.config("catalog", p.display().to_string());
            Ok(parse_catalog(&text, &p)?)
        }
        None => {
            ctx.config("catalog", "built-in");
            Ok(silicones::catalog())
        }
    }
}

fn load_stack(ctx: &mut RunContext, path: Option<&Path>) -> CliResult<SkinStack> {
    let stack = match path {
        Some(p) => {
            let text = ctx.read_input(p)?;
            ctx.config("stack", p.display().to_string());
            parse_stack(&text, p)?
        }
        None => {
            ctx.config("stack", "built-in forearm");
            SkinStack::default_forearm()
        }
    };
    ctx.config("stack_sha256", stack.content_hash());
    Ok(stack)
}

fn check_frequency(ctx: &mut RunContext, frequency: f64) -> CliResult<f64> {
    if !(1.0..=1000.0).contains(&frequency) {
        return Err(CliError::Validation(format!(
            "frequency {frequency} Hz is outside the supported range [1, 1000] Hz"
        )));
    }
    if !(100.0..=150.0).contains(&frequency) {
        ctx.warn(format!(
            "frequency {frequency} Hz is outside the 100-150 Hz band of the motors this model targets"
        ));
    }
    ctx.config("frequency_hz", frequency);
    Ok(2.0 * std::f64::consts::PI * frequency)
}

fn model_options(ctx: &mut RunContext, m: &ModelArgs) -> ModelOptions {
    let options = ModelOptions {
        outer_medium: match m.outer_medium {
            OuterMediumArg::Skin => OuterMedium::Skin,
            OuterMediumArg::Air => OuterMedium::Air,
        },
        coupling: if m.paper_faithful {
            Coupling::PaperFaithful
        } else {
            Coupling::Complete
        },
    };
    ctx.config("outer_medium", options.outer_medium);
    ctx.config("coupling", options.coupling);
    options
}

fn family(f: FamilyArg) -> Family {
    match f {
        FamilyArg::Embedded => Family::Embedded,
        FamilyArg::Encapsulating => Family::Encapsulating,
    }
}

fn material(catalog: &[Material], name: &str) -> CliResult<Material> {
    Ok(materials::find(catalog, name)?.clone())
}

fn positive_mm(label: &str, v: f64) -> CliResult<f64> {
    if !(v.is_finite() && v >= 0.0) {
        return Err(CliError::Validation(format!("{label} must be a non-negative length, got {v} mm")));
    }
    Ok(v * 1e-3)
}

fn load_design(ctx: &mut RunContext, args: &DesignArgs, catalog: &[Material]) -> CliResult<HapticUnitDesign> {
    let design = if let Some(p) = &args.design {
        let text = ctx.read_input(p)?;
        parse_design(&text, p, catalog)?
    } else {
        let (Some(l1), Some(l2)) = (&args.layer1, &args.layer2) else {
            return Err(CliError::Usage("give --design or both --layer1 and --layer2".into()));
        };
        let spec = |name: &str, mm: f64, label: &str| -> CliResult<LayerSpec> {
            Ok(LayerSpec {
                material: material(catalog, name)?,
                thickness: positive_mm(label, mm)?,
            })
        };
        HapticUnitDesign::two_layer(
            family(args.family),
            spec(l1, args.d1_mm, "--d1-mm")?,
            spec(l2, args.d2_mm, "--d2-mm")?,
            DEFAULT_INNER_RADIUS,
        )?
    };
    ctx.config("design", design.id());
    Ok(design)
}

fn metadata(ctx_command: &str, entries: &[(&str, String)]) -> ProfileMetadata {
    let mut m = ProfileMetadata::default().with("command", ctx_command);
    for (k, v) in entries {
        m.push(*k, v);
    }
    m
}

// ---------------------------------------------------------------------------
// simulate

fn simulate(a: SimulateArgs, execution: Execution) -> CliResult<()> {
    let mut ctx = RunContext::new("simulate", &a.common.out)?;
    let stack = load_stack(&mut ctx, a.stack.as_deref())?;
    check_frequency(&mut ctx, a.frequency)?;
    let load = LoadSpec::new(-a.pressure, a.tangential, a.disk_radius, a.frequency)?;
    ctx.config("pressure_pa", a.pressure);
    ctx.config("tangential_pa", a.tangential);
    ctx.config("disk_radius_m", a.disk_radius);
    if a.points == 0 || !(a.span.is_finite() && a.span >= 0.0) || (a.points > 1 && a.span == 0.0) {
        return Err(CliError::Validation("need --points >= 1 and a positive --span for more than one point".into()));
    }
    let solver = SolverOptions::default().with_execution(execution);

    let design = match &a.design {
        Some(_) => {
            let catalog = load_catalog(&mut ctx, &a.common)?;
            let args = DesignArgs {
                design: a.design.clone(),
                family: FamilyArg::Encapsulating,
                layer1: None,
                layer2: None,
                d1_mm: 0.0,
                d2_mm: 0.0,
            };
            Some(load_design(&mut ctx, &args, &catalog)?)
        }
        None => None,
    };
    let start = match (&design, a.r_start) {
        (Some(d), Some(r)) if (r - d.outer_radius()).abs() > 1e-12 => {
            return Err(CliError::Validation(format!(
                "with --design the profile starts at the unit edge {} m",
                d.outer_radius()
            )))
        }
        (Some(d), _) => d.outer_radius(),
        (None, r) => r.unwrap_or(0.0),
    };
    if !(start.is_finite() && start >= 0.0) {
        return Err(CliError::Validation(format!("--r-start must be non-negative, got {start}")));
    }
    let radii: Vec<f64> = (0..a.points)
        .map(|i| {
            if a.points == 1 {
                start
            } else {
                start + a.span * i as f64 / (a.points - 1) as f64
            }
        })
        .collect();
    ctx.config("radii_m", [start, start + a.span]);
    ctx.config("points", a.points);

    let mut entries = vec![
        ("stack_sha256", stack.content_hash()),
        ("frequency_hz", a.frequency.to_string()),
        ("pressure_pa", a.pressure.to_string()),
        ("tangential_pa", a.tangential.to_string()),
        ("disk_radius_m", a.disk_radius.to_string()),
    ];
    let profile = match &design {
        Some(d) => {
            let model = model_options(&mut ctx, &a.model);
            entries.push(("design", d.id()));
            entries.push(("coupling", format!("{:?}", model.coupling)));
            entries.push(("outer_medium", format!("{:?}", model.outer_medium)));
            edge_amplitude_profile(d, &stack, &load, &radii, model, &solver)?
        }
        None => {
            let raw = surface_profile(&stack, &load, &radii, &solver)?;
            if a.normalize {
                normalize_profile(&raw, start)?
            } else {
                raw
            }
        }
    };
    let path = ctx.write("profile.csv", &profile.to_csv_string(&metadata("simulate", &entries)))?;
    eprintln!("wrote {} ({} radii)", path.display(), profile.len());
    ctx.finish()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// design-eval

fn design_eval(a: DesignEvalArgs) -> CliResult<()> {
    let mut ctx = RunContext::new("design-eval", &a.common.out)?;
    let catalog = load_catalog(&mut ctx, &a.common)?;
    let design = load_design(&mut ctx, &a.design, &catalog)?;
    let stack = load_stack(&mut ctx, a.stack.as_deref())?;
    let omega = check_frequency(&mut ctx, a.frequency)?;
    let model = model_options(&mut ctx, &a.model);
    let control = match &a.control {
        Some(name) => HapticUnitDesign::single_layer(
            material(&catalog, name)?,
            design.total_thickness(),
            design.inner_radius(),
        )?,
        None => design.matched_control(),
    };
    ctx.config("control", control.id());
    let r = a.r_edge.unwrap_or(design.outer_radius());
    ctx.config("evaluation_radius_m", r);
    let skin = stack.top();
    let comparison = compare_designs(&design, &control, skin, omega, r, model)?;
    let r = r.max(design.outer_radius());
    let factor = |d: &HapticUnitDesign, kind| transmitted_amplitude_factor(d, skin, omega, r, kind, model);
    let l1 = design.layer1();
    let l2 = design.layer2().unwrap_or(l1);
    let report = check_constraints(
        &l1.material,
        &l2.material,
        &control.layer1().material,
        l1.thickness,
        design.layer2().map_or(0.0, |l| l.thickness),
    );
    let result = json!({
        "design": design.id(),
        "family": design.family(),
        "control": control.id(),
        "evaluation_radius_m": r,
        "factors": {
            "candidate": {
                "primary": factor(&design, WaveKind::Primary)?,
                "secondary": factor(&design, WaveKind::Secondary)?,
            },
            "control": {
                "primary": factor(&control, WaveKind::Primary)?,
                "secondary": factor(&control, WaveKind::Secondary)?,
            },
        },
        "ratio": comparison,
        "constraints": report,
    });
    ctx.write_json("design_eval.json", &result)?;
    println!("design   {}", design.id());
    println!("control  {}", control.id());
    println!("ratio p  {}", num(comparison.primary));
    println!("ratio s  {}", num(comparison.secondary));
    println!("verdict  {}", verdict_label(report.verdict));
    ctx.finish()?;
    Ok(())
}

fn verdict_label(v: skinwave_core::unit::Verdict) -> &'static str {
    match v {
        skinwave_core::unit::Verdict::Attenuating => "attenuating",
        skinwave_core::unit::Verdict::Amplifying => "amplifying",
        skinwave_core::unit::Verdict::Indeterminate => "indeterminate",
    }
}

// ---------------------------------------------------------------------------
// check

fn check(a: CheckArgs) -> CliResult<()> {
    let mut ctx = RunContext::new("check", &a.common.out)?;
    let catalog = load_catalog(&mut ctx, &a.common)?;
    let (l1, l2, c) = (
        material(&catalog, &a.layer1)?,
        material(&catalog, &a.layer2)?,
        material(&catalog, &a.control)?,
    );
    let (d1, d2) = (positive_mm("--d1-mm", a.d1_mm)?, positive_mm("--d2-mm", a.d2_mm)?);
    for (k, v) in [("layer1", &a.layer1), ("layer2", &a.layer2), ("control", &a.control)] {
        ctx.config(k, v);
    }
    ctx.config("d1_m", d1);
    ctx.config("d2_m", d2);
    let report = check_constraints(&l1, &l2, &c, d1, d2);
    ctx.write_json("check.json", &report)?;
    for e in &report.entries {
        println!(
            "({}) lhs {} rhs {} margin {} {}",
            e.label,
            num(e.lhs),
            num(e.rhs),
            num(e.margin),
            if e.satisfied { "satisfied" } else { "violated" }
        );
    }
    println!("verdict: {}", verdict_label(report.verdict));
    ctx.finish()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// optimize

fn optimize_cmd(a: OptimizeArgs, execution: Execution) -> CliResult<()> {
    let mut ctx = RunContext::new("optimize", &a.common.out)?;
    let catalog = load_catalog(&mut ctx, &a.common)?;
    let stack = load_stack(&mut ctx, a.stack.as_deref())?;
    let omega = check_frequency(&mut ctx, a.frequency)?;
    let model = model_options(&mut ctx, &a.model);
    let grid = if a.grid_mm.is_empty() {
        default_grid()
    } else {
        a.grid_mm
            .iter()
            .map(|&t| positive_mm("--grid-mm", t).map(|t| (t, t)))
            .collect::<CliResult<Vec<_>>>()?
    };
    let families: Vec<Family> = a.families.iter().map(|&f| family(f)).collect();
    let max_total = positive_mm("--max-total-mm", a.max_total_mm)?;
    ctx.config("families", &families);
    ctx.config("grid_m", &grid);
    ctx.config("max_total_m", max_total);
    let space = SearchSpace::new(catalog, families, grid, max_total, DEFAULT_INNER_RADIUS)?;
    let direction = match a.direction {
        DirectionArg::Minimize => Direction::MinimizeEdgeRatio,
        DirectionArg::Maximize => Direction::MaximizeEdgeRatio,
    };
    let (wp, ws) = if a.uz_only { (0.0, 1.0) } else { (0.5, 0.5) };
    let objective = DesignObjective::new(direction, wp, ws, a.r_eval)?;
    let pairing = match a.pairing {
        PairingArg::Layer2 => ControlPairing::Layer2,
        PairingArg::Layer1 => ControlPairing::Layer1,
    };
    ctx.config("direction", direction);
    ctx.config("weights", [wp, ws]);
    ctx.config("pairing", pairing);
    ctx.config("evaluation_radius_m", a.r_eval);
    let options = OptimizeOptions { model, pairing, execution };
    let skin = stack.top();
    let ranked = optimize(&space, &objective, skin, omega, &options)?;

    let mut csv = String::new();
    let _ = writeln!(csv, "# command=optimize");
    let _ = writeln!(csv, "# frequency_hz={}", a.frequency);
    let _ = writeln!(csv, "# direction={direction:?}");
    let _ = writeln!(csv, "# weights={wp},{ws}");
    let _ = writeln!(csv, "# pairing={pairing:?}");
    let _ = writeln!(csv, "# stack_sha256={}", stack.content_hash());
    csv.push_str("rank,id,family,layer1,layer2,d1_mm,d2_mm,edge_ratio_p,edge_ratio_s,objective,verdict,error\n");
    let mut rows = Vec::new();
    for (i, e) in ranked.entries.iter().enumerate() {
        let d = &e.design;
        let l2 = d.layer2();
        let (p, s) = e.comparison.map_or((f64::NAN, f64::NAN), |c| (c.primary, c.secondary));
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            i + 1,
            d.id(),
            d.family().label(),
            d.layer1().material.name(),
            l2.map_or("", |l| l.material.name()),
            num(d.layer1().thickness * 1e3),
            num(l2.map_or(0.0, |l| l.thickness) * 1e3),
            num(p),
            num(s),
            num(e.objective.unwrap_or(f64::NAN)),
            verdict_label(e.report.verdict),
            e.error.as_deref().unwrap_or("").replace(',', ";"),
        );
        rows.push(json!({
            "rank": i + 1,
            "id": d.id(),
            "family": d.family(),
            "layer1": d.layer1().material.name(),
            "layer2": l2.map(|l| l.material.name()),
            "d1_m": d.layer1().thickness,
            "d2_m": l2.map_or(0.0, |l| l.thickness),
            "ratio": e.comparison,
            "objective": e.objective,
            "constraints": e.report,
            "error": e.error,
        }));
    }
    ctx.write("ranked.csv", &csv)?;
    ctx.write_json(
        "ranked.json",
        &json!({
            "evaluations": ranked.stats.evaluations,
            "failures": ranked.stats.failures,
            "entries": rows,
        }),
    )?;
    eprintln!(
        "evaluated {} designs in {:.3} s ({} failed)",
        ranked.stats.evaluations,
        ranked.stats.elapsed.as_secs_f64(),
        ranked.stats.failures
    );
    for (i, e) in ranked.entries.iter().take(5).enumerate() {
        println!("{:>2}  {}  {}", i + 1, e.design.id(), e.objective.map_or("failed".into(), num));
    }

    if let (Some(range), Some(best)) = (&a.refine, ranked.best()) {
        let (lo, hi) = (positive_mm("--refine", range[0])?, positive_mm("--refine", range[1])?);
        ctx.config("refine_m", [lo, hi]);
        let bounds = ThicknessBounds {
            d1: (lo, hi),
            d2: (lo, hi),
            max_total,
            hold_total: None,
        };
        let r = refine_thickness(&best.design, &objective, skin, omega, bounds, &options)?;
        ctx.write_json(
            "refined.json",
            &json!({
                "start": best.design.id(),
                "design": r.design.id(),
                "d1_m": r.design.layer1().thickness,
                "d2_m": r.design.layer2().map_or(0.0, |l| l.thickness),
                "starting_objective": r.starting_objective,
                "objective": r.objective,
                "sweeps": r.sweeps,
                "evaluations": r.evaluations,
            }),
        )?;
        println!("refined  {}  {}", r.design.id(), num(r.objective));
    }
    ctx.finish()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// fit-modulus

fn fit_modulus_cmd(a: FitModulusArgs) -> CliResult<()> {
    let mut ctx = RunContext::new("fit-modulus", &a.common.out)?;
    let window = StrainWindow::new(a.strain_min, a.strain_max);
    ctx.config("strain_window", [a.strain_min, a.strain_max]);
    let mut fits = Vec::new();
    let mut fitted = Vec::new();
    for path in &a.curves {
        ctx.read_input(path)?;
        let curve = StressStrainCurve::from_csv(path)?;
        let fit = fit_modulus(&curve, window)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        println!("{name}  E = {} Pa  ({} samples)", num(fit.modulus), fit.sample_count);
        fits.push(json!({
            "name": name,
            "source": path.display().to_string(),
            "modulus_pa": fit.modulus,
            "intercept_pa": fit.intercept,
            "residual_rms_pa": fit.residual_rms,
            "samples": fit.sample_count,
        }));
        fitted.push(Material::silicone(name, fit.modulus)?);
    }
    ctx.write_json("modulus.json", &fits)?;
    ctx.write("fitted_catalog.toml", &catalog_to_string(&fitted))?;
    ctx.finish()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// process-ldv

fn process_ldv(a: ProcessLdvArgs, execution: Execution) -> CliResult<()> {
    let mut ctx = RunContext::new("process-ldv", &a.common.out)?;
    let mut paths = a.traces.clone();
    if let Some(dir) = &a.trace_dir {
        let entries = std::fs::read_dir(dir)
            .map_err(|e| CliError::Usage(format!("cannot list {}: {e}", dir.display())))?;
        let mut found: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "csv"))
            .collect();
        found.sort();
        paths.extend(found);
    }
    if paths.is_empty() {
        return Err(CliError::Usage("give --trace files or a --trace-dir".into()));
    }
    let mut traces = Vec::new();
    for p in &paths {
        let text = ctx.read_input(p)?;
        traces.push(parse_trace(&text, p)?);
    }
    let config = PipelineConfig {
        bandpass: (a.band[0], a.band[1]),
        order: DEFAULT_ORDER,
        comb_fundamental: (!a.no_comb).then_some(a.comb),
        comb_width: DEFAULT_COMB_WIDTH,
        peak_band: (a.peak_band[0], a.peak_band[1]),
        execution,
    };
    let reference = match (a.reference, a.motor_amp) {
        (ReferenceArg::Edge, _) => ProfileReference::Edge,
        (ReferenceArg::Motor, Some(m)) => ProfileReference::Motor(m),
        (ReferenceArg::Motor, None) => {
            return Err(CliError::Usage("--reference motor needs --motor-amp".into()))
        }
    };
    ctx.config("bandpass_hz", config.bandpass);
    ctx.config("comb_hz", config.comb_fundamental);
    ctx.config("peak_band_hz", config.peak_band);
    ctx.config("reference", format!("{reference:?}"));
    let profile = build_profile(&traces, &config, reference)?;
    let entries = [
        ("bandpass_hz", format!("{}-{}", config.bandpass.0, config.bandpass.1)),
        ("comb_hz", config.comb_fundamental.map_or("none".into(), |f| f.to_string())),
        ("peak_band_hz", format!("{}-{}", config.peak_band.0, config.peak_band.1)),
        ("traces", traces.len().to_string()),
    ];
    ctx.write("measured_profile.csv", &profile.to_csv_string(&metadata("process-ldv", &entries)))?;
    match fit_decay(&profile) {
        Ok(fit) => {
            if fit.excluded > 0 {
                ctx.warn(format!("{} non-positive amplitude(s) left out of the decay fit", fit.excluded));
            }
            println!("decay rate {} 1/m  (R^2 {})", num(fit.rate), num(fit.r_squared));
            ctx.write_json(
                "decay.json",
                &json!({
                    "rate_per_m": fit.rate,
                    "amplitude": fit.amplitude,
                    "r_squared": fit.r_squared,
                    "points_used": fit.points_used,
                    "excluded": fit.excluded,
                }),
            )?;
        }
        Err(e) => ctx.warn(format!("no decay fit: {e}")),
    }
    ctx.finish()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// overlay

fn read_profile(ctx: &mut RunContext, path: &Path) -> CliResult<AmplitudeProfile> {
    let text = ctx.read_input(path)?;
    Ok(AmplitudeProfile::parse_csv(&text, path)?.0)
}

fn overlay(a: OverlayArgs) -> CliResult<()> {
    let mut ctx = RunContext::new("overlay", &a.common.out)?;
    let sim = read_profile(&mut ctx, &a.simulated)?;
    let meas = read_profile(&mut ctx, &a.measured)?;
    if sim.normalized != meas.normalized {
        ctx.warn("one profile is normalized and the other is not".into());
    }
    let edge = match (a.edge, sim.reference_radius) {
        (Some(e), _) | (None, Some(e)) => e,
        (None, None) => {
            ctx.warn("simulated profile has no reference radius; distance 0 is taken as r = 0".into());
            0.0
        }
    };
    ctx.config("edge_m", edge);
    let mut csv = String::from("# command=overlay\n");
    let _ = writeln!(csv, "# edge_m={edge}");
    csv.push_str("distance_m,simulated_u_z,measured_u_z\n");
    let mut log_sq = Vec::new();
    for (d, m) in meas.radii.iter().zip(&meas.u_z) {
        let s = sim.u_z_at(edge + d).unwrap_or(f64::NAN);
        if s > 0.0 && *m > 0.0 {
            log_sq.push((s / m).ln().powi(2));
        }
        let _ = writeln!(csv, "{},{},{}", num(*d), num(s), num(*m));
    }
    ctx.write("overlay.csv", &csv)?;
    if !log_sq.is_empty() {
        let rms = (log_sq.iter().sum::<f64>() / log_sq.len() as f64).sqrt();
        println!("{} common points, rms log ratio {}", log_sq.len(), num(rms));
    } else {
        ctx.warn("no overlapping positive points".into());
    }
    ctx.finish()?;
    Ok(())
}
