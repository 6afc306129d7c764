//! Acceptance suite. Runs without the libtest harness and prints one
//! PASS/FAIL line per criterion; exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use skinwave_core::elastic::{interface_coefficients, WaveKind};
use skinwave_core::materials::{fit_modulus, silicones, StrainWindow, StressStrainCurve};
use skinwave_core::optimizer::{optimize, DesignObjective, Direction, OptimizeOptions, SearchSpace};
use skinwave_core::signals::{fit_decay, tone_amplitude, MeasurementTrace, PipelineConfig};
use skinwave_core::solver::{surface_profile, AmplitudeProfile, LoadSpec, SkinStack, SolverOptions};
use skinwave_core::unit::{
    check_constraints, compare_designs, Coupling, Family, HapticUnitDesign, LayerSpec, ModelOptions,
    OuterMedium, Verdict, DEFAULT_INNER_RADIUS,
};
use skinwave_core::Material;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------------------
// 1

fn reflection_transmission_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let mut draw = || {
            Material::new(
                "m",
                rng.gen_range(5e3..=500e3),
                rng.gen_range(0.0..=0.49),
                rng.gen_range(900.0..=1200.0),
                5.0,
            )
            .unwrap()
        };
        let (a, b) = (draw(), draw());
        for kind in [WaveKind::Primary, WaveKind::Secondary] {
            let ab = interface_coefficients(&a, &b, kind).map_err(|e| e.to_string())?;
            let ba = interface_coefficients(&b, &a, kind).map_err(|e| e.to_string())?;
            worst = worst
                .max((ab.transmission - (1.0 + ab.reflection)).abs())
                .max((ab.transmission * ba.transmission - (1.0 - ab.reflection.powi(2))).abs());
        }
    }
    ensure(worst <= 1e-12, || format!("largest identity error {worst:.3e}"))?;
    Ok(format!("max error {worst:.1e} over 1000 pairs"))
}

// ---------------------------------------------------------------------------
// 2

/// K(m), E(m) by the arithmetic-geometric mean.
fn elliptic_ke(m: f64) -> (f64, f64) {
    if m == 1.0 {
        return (f64::INFINITY, 1.0);
    }
    let (mut a, mut b) = (1.0f64, (1.0 - m).sqrt());
    let mut sum = 0.5 * m;
    let mut pow = 0.5;
    for _ in 0..40 {
        let c = 0.5 * (a - b);
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
        pow *= 2.0;
        sum += pow * c * c;
        if c.abs() < 1e-17 {
            break;
        }
    }
    let k = PI / (2.0 * a);
    (k, k * (1.0 - sum))
}

/// Surface deflection of a half-space under uniform pressure on a disk.
fn boussinesq_uz(e: f64, nu: f64, p: f64, a: f64, r: f64) -> f64 {
    let c = 4.0 * (1.0 - nu * nu) * p * a / (PI * e);
    if r == a {
        c
    } else if r < a {
        c * elliptic_ke((r / a).powi(2)).1
    } else {
        let (k, e2) = elliptic_ke((a / r).powi(2));
        c * (r / a) * (e2 - (1.0 - (a / r).powi(2)) * k)
    }
}

fn static_oracle() -> Outcome {
    let (e, nu, p, a) = (60e3, 0.45, 1000.0, 3.5e-3);
    let m = Material::new("gel", e, nu, 1050.0, 0.0).unwrap();
    let stack = SkinStack::homogeneous(&m, &[0.002]).map_err(|e| e.to_string())?;
    let load = LoadSpec::normal(-p, a, 0.0).map_err(|e| e.to_string())?;
    let radii: Vec<f64> = (0..=30).map(|i| i as f64 * 0.1 * a).collect();
    let prof = surface_profile(&stack, &load, &radii, &SolverOptions::default()).map_err(|e| e.to_string())?;
    let centre = 2.0 * (1.0 - nu * nu) * p * a / e;
    let centre_err = (prof.u_z[0] - centre).abs() / centre;
    ensure(centre_err < 0.01, || format!("centre deflection off by {:.2}%", 100.0 * centre_err))?;
    let mut worst: f64 = 0.0;
    for (i, &r) in radii.iter().enumerate() {
        let oracle = boussinesq_uz(e, nu, p, a, r);
        worst = worst.max((prof.u_z[i] - oracle).abs() / oracle);
    }
    ensure(worst < 0.03, || format!("profile off by {:.2}%", 100.0 * worst))?;
    Ok(format!("centre {:.3}%, profile max {:.3}%", 100.0 * centre_err, 100.0 * worst))
}

// ---------------------------------------------------------------------------
// 3

fn interface_invisibility() -> Outcome {
    let m = Material::new("gel", 80e3, 0.45, 1040.0, 3.0).unwrap();
    let load = LoadSpec::normal(-500.0, 3.5e-3, 125.0).unwrap();
    let radii: Vec<f64> = (0..20).map(|i| i as f64 * 1e-3).collect();
    let o = SolverOptions::default();
    let run = |depths: &[f64]| -> Result<AmplitudeProfile, String> {
        let s = SkinStack::homogeneous(&m, depths).map_err(|e| e.to_string())?;
        surface_profile(&s, &load, &radii, &o).map_err(|e| e.to_string())
    };
    let one = run(&[0.01])?;
    let three = run(&[0.0007, 0.003, 0.011])?;
    let scale = one.u_z.iter().cloned().fold(0.0, f64::max);
    let worst = (0..radii.len())
        .map(|i| (one.u_z[i] - three.u_z[i]).abs().max((one.u_r[i] - three.u_r[i]).abs()) / scale)
        .fold(0.0, f64::max);
    ensure(worst < 1e-8, || format!("relative change {worst:.3e}"))?;
    Ok(format!("relative change {worst:.1e}"))
}

// ---------------------------------------------------------------------------
// 4

fn quasi_exponential_decay() -> Outcome {
    let stack = SkinStack::default_forearm();
    let design = HapticUnitDesign::paper_geometry(
        Family::Encapsulating,
        silicones::ecoflex_00_10(),
        silicones::dragon_skin_30(),
    )
    .unwrap();
    let edge = design.outer_radius();
    let radii: Vec<f64> = (0..=20).map(|i| edge + i as f64 * 0.5e-3).collect();
    let load = LoadSpec::normal(-1000.0, 3.5e-3, 125.0).unwrap();
    let raw = surface_profile(&stack, &load, &radii, &SolverOptions::default()).map_err(|e| e.to_string())?;
    let normalized = skinwave_core::solver::normalize_profile(&raw, edge).map_err(|e| e.to_string())?;
    let fit = fit_decay(&normalized).map_err(|e| e.to_string())?;
    ensure(fit.r_squared >= 0.95, || format!("R^2 = {:.4}", fit.r_squared))?;
    Ok(format!("R^2 = {:.4}, rate {:.1} 1/m", fit.r_squared, fit.rate))
}

// ---------------------------------------------------------------------------
// 5

fn paper_catalog() -> (Material, Material, Material) {
    let m = |name: &str, e: f64| Material::silicone(name, e).unwrap();
    (m("E-10", 15e3), m("DS-10", 250e3), m("DS-30", 355e3))
}

fn pair(l1: &Material, l2: &Material) -> HapticUnitDesign {
    HapticUnitDesign::paper_geometry(Family::Encapsulating, l1.clone(), l2.clone()).unwrap()
}

fn constraint_ordering() -> Outcome {
    let (e10, ds10, ds30) = paper_catalog();
    let skin = SkinStack::default_forearm().top().clone();
    let omega = 2.0 * PI * 125.0;
    let d = 1.25e-3;
    for (l1, l2, want) in [
        (&e10, &ds10, Verdict::Attenuating),
        (&e10, &ds30, Verdict::Attenuating),
        (&ds30, &e10, Verdict::Amplifying),
        (&ds10, &e10, Verdict::Amplifying),
    ] {
        let v = check_constraints(l1, l2, l2, d, d).verdict;
        ensure(v == want, || format!("{}/{}: {v:?}, expected {want:?}", l1.name(), l2.name()))?;
    }
    let mut checked = 0;
    for outer_medium in [OuterMedium::Skin, OuterMedium::Air] {
        for coupling in [Coupling::Complete, Coupling::PaperFaithful] {
            let o = ModelOptions { outer_medium, coupling };
            for (l1, l2, below) in [
                (&e10, &ds10, true),
                (&e10, &ds30, true),
                (&ds30, &e10, false),
                (&ds10, &e10, false),
            ] {
                let design = pair(l1, l2);
                let c = compare_designs(&design, &design.matched_control(), &skin, omega, 0.0, o)
                    .map_err(|e| e.to_string())?;
                for r in [c.primary, c.secondary] {
                    ensure((r < 1.0) == below, || format!("{} {o:?}: ratio {r}", design.id()))?;
                }
                checked += 1;
            }
            let mut last = [f64::INFINITY; 2];
            for e1 in [250e3, 200e3, 150e3, 100e3, 50e3, 15e3] {
                let l1 = Material::silicone("L1", e1).unwrap();
                let design = pair(&l1, &ds30);
                let c = compare_designs(&design, &design.matched_control(), &skin, omega, 0.0, o)
                    .map_err(|e| e.to_string())?;
                for (k, r) in [c.primary, c.secondary].into_iter().enumerate() {
                    ensure(r < last[k], || format!("{o:?}: ratio not decreasing at E1 = {e1}"))?;
                    last[k] = r;
                }
            }
        }
    }
    Ok(format!("verdicts, {checked} ratio signs and disparity monotonicity in 4 model variants"))
}

// ---------------------------------------------------------------------------
// 6

fn optimizer_brute_force() -> Outcome {
    let skin = SkinStack::default_forearm().top().clone();
    let omega = 2.0 * PI * 125.0;
    let grid: Vec<(f64, f64)> = [1.0e-3, 1.25e-3, 1.5e-3].iter().map(|&t| (t, t)).collect();
    let families = [Family::Encapsulating, Family::Embedded];
    let catalog = silicones::catalog();
    let space = SearchSpace::new(catalog.clone(), families.to_vec(), grid.clone(), 3e-3, DEFAULT_INNER_RADIUS)
        .map_err(|e| e.to_string())?;
    let objective = DesignObjective::balanced(Direction::MinimizeEdgeRatio);
    let ranked =
        optimize(&space, &objective, &skin, omega, &OptimizeOptions::default()).map_err(|e| e.to_string())?;

    let mut brute = Vec::new();
    for &family in &families {
        for a in &catalog {
            for b in &catalog {
                if a.name() == b.name() {
                    continue;
                }
                for &(d1, d2) in &grid {
                    let layer = |m: &Material, t| LayerSpec { material: m.clone(), thickness: t };
                    let d = HapticUnitDesign::two_layer(family, layer(a, d1), layer(b, d2), DEFAULT_INNER_RADIUS)
                        .map_err(|e| e.to_string())?;
                    let control = HapticUnitDesign::single_layer(b.clone(), d1 + d2, DEFAULT_INNER_RADIUS)
                        .map_err(|e| e.to_string())?;
                    let c = compare_designs(&d, &control, &skin, omega, 0.0, ModelOptions::default())
                        .map_err(|e| e.to_string())?;
                    brute.push(((c.primary * c.secondary).sqrt(), d));
                }
            }
        }
    }
    brute.sort_by(|(va, a), (vb, b)| {
        va.total_cmp(vb)
            .then(a.total_thickness().total_cmp(&b.total_thickness()))
            .then_with(|| a.layer1().material.name().cmp(b.layer1().material.name()))
            .then_with(|| a.layer2().unwrap().material.name().cmp(b.layer2().unwrap().material.name()))
            .then(a.family().cmp(&b.family()))
            .then(a.layer1().thickness.total_cmp(&b.layer1().thickness))
    });
    let got: Vec<String> = ranked.entries.iter().map(|e| e.design.id()).collect();
    let want: Vec<String> = brute.iter().map(|(_, d)| d.id()).collect();
    ensure(got == want, || "ranking differs from brute force".into())?;
    let top = ranked.best().ok_or("no successful evaluation")?;
    ensure(top.design.layer1().material.name() == "E-10", || format!("top design {}", top.design.id()))?;
    ensure(top.report.verdict == Verdict::Attenuating, || "top design is not attenuating".into())?;
    Ok(format!("{} designs identical, top {}", got.len(), top.design.id()))
}

// ---------------------------------------------------------------------------
// 7

fn signal_pipeline() -> Outcome {
    let fs = 2000.0;
    let x: Vec<f64> = (0..4000)
        .map(|i| {
            let t = i as f64 / fs;
            300e-6 * (2.0 * PI * 125.0 * t).sin() + 500e-6 * (2.0 * PI * 50.0 * t).sin() + 50e-6 * t
        })
        .collect();
    let trace = MeasurementTrace::new(x, fs, 0.0, "synthetic").map_err(|e| e.to_string())?;
    let (filtered, amplitude) = PipelineConfig::default().process(&trace).map_err(|e| e.to_string())?;
    let err = (amplitude - 300e-6).abs() / 300e-6;
    ensure(err < 0.02, || format!("125 Hz amplitude {amplitude:.4e} m"))?;
    let residual = tone_amplitude(&filtered, 50.0) / 500e-6;
    ensure(residual < 0.03, || format!("50 Hz residual {:.2}%", 100.0 * residual))?;
    Ok(format!("amplitude error {:.3}%, 50 Hz residual {:.3}%", 100.0 * err, 100.0 * residual))
}

// ---------------------------------------------------------------------------
// 8

fn decay_fit() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let alpha = 50.0 * 10f64.powf(i as f64 / 9.0);
        let radii: Vec<f64> = (0..8).map(|j| j as f64 * 3.0 / (7.0 * alpha)).collect();
        let u: Vec<f64> = radii
            .iter()
            .map(|r| (-alpha * r).exp() * (1.0 + 0.01 * rng.gen_range(-1.0..1.0)))
            .collect();
        let p = AmplitudeProfile::new(radii, vec![f64::NAN; 8], u).map_err(|e| e.to_string())?;
        let fit = fit_decay(&p).map_err(|e| e.to_string())?;
        worst = worst.max((fit.rate - alpha).abs() / alpha);
    }
    ensure(worst < 0.02, || format!("worst rate error {:.2}%", 100.0 * worst))?;
    Ok(format!("worst rate error {:.3}% over alpha in [50, 500]", 100.0 * worst))
}

// ---------------------------------------------------------------------------
// 9

fn modulus_fit() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for slope in [15e3, 250e3, 355e3] {
        let samples: Vec<(f64, f64)> = (1..=100)
            .map(|i| {
                let e = 0.3 * i as f64 / 100.0;
                (e, slope * e + 0.01 * slope * 0.3 * rng.gen_range(-1.0..1.0))
            })
            .collect();
        let curve = StressStrainCurve::new(samples, "synthetic").map_err(|e| e.to_string())?;
        let fit = fit_modulus(&curve, StrainWindow::default()).map_err(|e| e.to_string())?;
        worst = worst.max((fit.modulus - slope).abs() / slope);
    }
    ensure(worst < 0.01, || format!("worst modulus error {:.3}%", 100.0 * worst))?;
    Ok(format!("worst modulus error {:.3}%", 100.0 * worst))
}

// ---------------------------------------------------------------------------
// 10

fn cli(args: &[&str], out: &Path) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_skinwave"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("HAPTIC_CATALOG")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(status.status.success(), || {
        format!("{args:?} failed: {}", String::from_utf8_lossy(&status.stderr))
    })
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut files = 0;
    for cmd in [&["optimize"][..], &["simulate", "--points", "11"][..]] {
        let (a, b) = (dir.path().join(format!("{}-a", cmd[0])), dir.path().join(format!("{}-b", cmd[0])));
        cli(cmd, &a)?;
        cli(cmd, &b)?;
        let mut names: Vec<_> = std::fs::read_dir(&a)
            .map_err(|e| e.to_string())?
            .map(|e| e.unwrap().file_name())
            .collect();
        names.sort();
        for name in names {
            let x = std::fs::read(a.join(&name)).map_err(|e| e.to_string())?;
            let y = std::fs::read(b.join(&name)).map_err(|e| format!("{name:?}: {e}"))?;
            ensure(x == y, || format!("{} differs between runs", name.to_string_lossy()))?;
            files += 1;
        }
    }
    Ok(format!("{files} output files byte-identical"))
}

fn main() {
    type Criterion = (u32, &'static str, fn() -> Outcome, Option<Duration>);
    let criteria: [Criterion; 10] = [
        (1, "reflection/transmission identities", reflection_transmission_identities, Some(Duration::from_secs(1))),
        (2, "static Boussinesq oracle", static_oracle, Some(Duration::from_secs(10))),
        (3, "interface invisibility", interface_invisibility, Some(Duration::from_secs(10))),
        (4, "quasi-exponential decay", quasi_exponential_decay, None),
        (5, "constraint and ordering reproduction", constraint_ordering, None),
        (6, "optimizer equals brute force", optimizer_brute_force, Some(Duration::from_secs(30))),
        (7, "signal pipeline", signal_pipeline, Some(Duration::from_secs(1))),
        (8, "decay fit", decay_fit, Some(Duration::from_secs(1))),
        (9, "modulus fit", modulus_fit, Some(Duration::from_secs(1))),
        (10, "determinism", determinism, None),
    ];
    let mut failures = 0;
    for (n, name, check, limit) in criteria {
        let start = Instant::now();
        let mut outcome = check();
        let elapsed = start.elapsed();
        if let (Ok(_), Some(limit)) = (&outcome, limit) {
            if elapsed > limit {
                outcome = Err(format!("took {:.3} s, limit {} s", elapsed.as_secs_f64(), limit.as_secs()));
            }
        }
        match outcome {
            Ok(detail) => println!("criterion {n:>2} PASS  {name}: {detail} [{:.3} s]", elapsed.as_secs_f64()),
            Err(detail) => {
                failures += 1;
                println!("criterion {n:>2} FAIL  {name}: {detail} [{:.3} s]", elapsed.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", 10 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
