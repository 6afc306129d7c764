use proptest::prelude::*;

use skinwave_core::elastic::{attenuation_factor, interface_coefficients, WaveKind};
use skinwave_core::materials::silicones;
use skinwave_core::solver::{surface_profile, LoadSpec, SkinStack, SolverOptions};
use skinwave_core::unit::{
    check_constraints, compare_designs, edge_amplitude_profile, transmission_path, Coupling, Family,
    HapticUnitDesign, LayerSpec, ModelOptions, OuterMedium, PathStep, Verdict, DEFAULT_INNER_RADIUS,
};
use skinwave_core::Material;

const OMEGA: f64 = 2.0 * std::f64::consts::PI * 125.0;

fn silicone(e: f64) -> Material {
    Material::silicone(format!("S{e:.0}"), e).unwrap()
}

fn design(family: Family, l1: &Material, l2: &Material, d1: f64, d2: f64) -> HapticUnitDesign {
    HapticUnitDesign::two_layer(
        family,
        LayerSpec { material: l1.clone(), thickness: d1 },
        LayerSpec { material: l2.clone(), thickness: d2 },
        DEFAULT_INNER_RADIUS,
    )
    .unwrap()
}

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![Just(Family::Encapsulating), Just(Family::Embedded)]
}

fn outer() -> impl Strategy<Value = OuterMedium> {
    prop_oneof![Just(OuterMedium::Skin), Just(OuterMedium::Air)]
}

fn ratios(d: &HapticUnitDesign, skin: &Material, options: ModelOptions) -> [f64; 2] {
    let c = compare_designs(d, &d.matched_control(), skin, OMEGA, 0.0, options).unwrap();
    [c.primary, c.secondary]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Attenuating verdicts imply ratios below one. The faithful model
    /// drops the skin coupling, so any skin works; the complete model needs
    /// skin stiffer than Layer 1.
    #[test]
    fn attenuating_verdict_implies_attenuation(
        e1 in 5e3f64..500e3, e2 in 5e3f64..500e3, es in 5e3f64..2e6,
        d1 in 0.2e-3f64..3e-3, d2 in 0.2e-3f64..3e-3,
        family in family(), outer in outer(),
    ) {
        let (l1, l2) = (silicone(e1), silicone(e2));
        let report = check_constraints(&l1, &l2, &l2, d1, d2);
        prop_assume!(report.verdict == Verdict::Attenuating);
        let d = design(family, &l1, &l2, d1, d2);
        let skin = silicone(es);
        let faithful = ModelOptions { outer_medium: outer, coupling: Coupling::PaperFaithful };
        for r in ratios(&d, &skin, faithful) {
            prop_assert!(r < 1.0, "faithful ratio {r}");
        }
        if es > e1 {
            let complete = ModelOptions { outer_medium: outer, coupling: Coupling::Complete };
            for r in ratios(&d, &skin, complete) {
                prop_assert!(r < 1.0, "complete ratio {r}");
            }
        }
    }

    #[test]
    fn amplifying_verdict_implies_amplification(
        e1 in 5e3f64..500e3, e2 in 5e3f64..500e3, es in 5e3f64..2e6,
        d1 in 0.2e-3f64..3e-3, d2 in 0.2e-3f64..3e-3,
        family in family(), outer in outer(),
    ) {
        let (l1, l2) = (silicone(e1), silicone(e2));
        prop_assume!(check_constraints(&l1, &l2, &l2, d1, d2).verdict == Verdict::Amplifying);
        let d = design(family, &l1, &l2, d1, d2);
        let faithful = ModelOptions { outer_medium: outer, coupling: Coupling::PaperFaithful };
        for r in ratios(&d, &silicone(es), faithful) {
            prop_assert!(r > 1.0, "faithful ratio {r}");
        }
    }

    /// Lower Layer 1 modulus gives a lower ratio while z1² < zs·z2.
    #[test]
    fn monotone_disparity(
        e2 in 20e3f64..500e3, f_hi in 0.05f64..1.0, shrink in 0.1f64..0.99,
        family in family(), outer in outer(),
    ) {
        let skin = silicones::dragon_skin_30().with_elastic_modulus(600e3).unwrap();
        let l2 = silicone(e2);
        let (hi, lo) = (silicone(e2 * f_hi), silicone(e2 * f_hi * shrink));
        let t = 1.25e-3;
        let options = ModelOptions { outer_medium: outer, coupling: Coupling::Complete };
        let a = ratios(&design(family, &hi, &l2, t, t), &skin, options);
        let b = ratios(&design(family, &lo, &l2, t, t), &skin, options);
        for kind in 0..2 {
            prop_assert!(b[kind] < a[kind], "{kind}: {} !< {}", b[kind], a[kind]);
        }
    }

    #[test]
    fn telescoping(
        ea in 5e3f64..500e3, eb in 5e3f64..500e3, ec in 5e3f64..500e3, ex in 5e3f64..500e3,
        d1 in 0.2e-3f64..2e-3, d2 in 0.2e-3f64..2e-3, family in family(),
    ) {
        let total = d1 + d2;
        let skin = silicone(600e3);
        let a = design(family, &silicone(ea), &silicone(ex), d1, d2);
        let b = design(family, &silicone(eb), &silicone(ex), total * 0.5, total * 0.5);
        let c = HapticUnitDesign::single_layer(silicone(ec), total, DEFAULT_INNER_RADIUS).unwrap();
        let o = ModelOptions::default();
        let ab = compare_designs(&a, &b, &skin, OMEGA, 0.0, o).unwrap();
        let bc = compare_designs(&b, &c, &skin, OMEGA, 0.0, o).unwrap();
        let ac = compare_designs(&a, &c, &skin, OMEGA, 0.0, o).unwrap();
        for kind in [WaveKind::Primary, WaveKind::Secondary] {
            let lhs = ab.get(kind) * bc.get(kind);
            prop_assert!((lhs - ac.get(kind)).abs() <= 1e-12 * ac.get(kind));
        }
    }

    /// The path's crossing coefficients are exactly the elastic-core ones,
    /// and the factor is positive with additive logs.
    #[test]
    fn path_bookkeeping(
        e1 in 5e3f64..500e3, e2 in 5e3f64..500e3, d1 in 0.2e-3f64..3e-3, d2 in 0.2e-3f64..3e-3,
        extra in 0.0f64..0.02, family in family(), kind in prop_oneof![Just(WaveKind::Primary), Just(WaveKind::Secondary)],
    ) {
        let skin = silicone(600e3).renamed("skin");
        let (m1, m2) = (silicone(e1).renamed("one"), silicone(e2).renamed("two"));
        let lookup = |name: &str| [&skin, &m1, &m2].into_iter().find(|m| m.name() == name).unwrap().clone();
        let d = design(family, &m1, &m2, d1, d2);
        let r = d.outer_radius() + extra;
        let path = transmission_path(&d, &skin, r, kind, ModelOptions::default()).unwrap();
        let mut log_sum = 0.0;
        let mut crossings = 1.0;
        for step in &path.steps {
            match step {
                PathStep::Propagate { material, length } => {
                    log_sum += attenuation_factor(material, OMEGA, *length, kind).ln();
                }
                PathStep::Cross { from, to, coefficients } => {
                    let oracle = interface_coefficients(&lookup(from), &lookup(to), kind).unwrap();
                    prop_assert_eq!(*coefficients, oracle);
                    crossings *= oracle.transmission;
                    log_sum += oracle.transmission.ln();
                }
            }
        }
        prop_assert_eq!(path.transmission_product(), crossings);
        let f = path.factor(OMEGA);
        prop_assert!(f > 0.0);
        prop_assert!((f.ln() - log_sum).abs() <= 1e-12 * log_sum.abs().max(1.0));
        prop_assert!((path.length() - r).abs() <= 1e-15);
    }
}

#[test]
fn encapsulated_edge_profile_lies_below_control() {
    let stack = SkinStack::default_forearm();
    let load = LoadSpec::normal(-1000.0, 3.5e-3, 125.0).unwrap();
    let candidate = HapticUnitDesign::paper_geometry(
        Family::Encapsulating,
        silicones::ecoflex_00_10(),
        silicones::dragon_skin_30(),
    )
    .unwrap();
    let control = candidate.matched_control();
    let edge = candidate.outer_radius();
    let radii: Vec<f64> = (0..50).map(|i| edge + i as f64 * 0.2e-3).collect();
    let solver = SolverOptions::default();
    let options = ModelOptions::default();
    let a = edge_amplitude_profile(&candidate, &stack, &load, &radii, options, &solver).unwrap();
    let b = edge_amplitude_profile(&control, &stack, &load, &radii, options, &solver).unwrap();
    assert_eq!(a.u_z[0], 1.0);
    assert_eq!(b.u_z[0], 1.0);
    let (a, b) = (a.denormalized(), b.denormalized());
    for i in 1..radii.len() {
        assert!(a.u_z[i] < b.u_z[i], "r={}: {} !< {}", radii[i], a.u_z[i], b.u_z[i]);
    }
}

#[test]
fn zero_thickness_single_layer_is_bare_skin() {
    let stack = SkinStack::default_forearm();
    let load = LoadSpec::normal(-1000.0, 3.5e-3, 125.0).unwrap();
    let d = HapticUnitDesign::single_layer(silicones::dragon_skin_30(), 0.0, DEFAULT_INNER_RADIUS).unwrap();
    let radii: Vec<f64> = (0..12).map(|i| DEFAULT_INNER_RADIUS + i as f64 * 1e-3).collect();
    let solver = SolverOptions::default();
    let p = edge_amplitude_profile(&d, &stack, &load, &radii, ModelOptions::default(), &solver).unwrap();
    let bare = surface_profile(&stack, &load, &radii, &solver).unwrap();
    for i in 0..radii.len() {
        let expected = bare.u_z[i] / bare.u_z[0];
        assert!((p.u_z[i] - expected).abs() <= 1e-12 * expected.abs().max(1e-300));
    }
}

#[test]
fn paper_orderings_in_both_media() {
    let (e10, ds10, ds30) = (
        silicones::ecoflex_00_10(),
        silicones::dragon_skin_10(),
        silicones::dragon_skin_30(),
    );
    let skin = SkinStack::default_forearm().top().clone();
    for outer_medium in [OuterMedium::Skin, OuterMedium::Air] {
        for coupling in [Coupling::Complete, Coupling::PaperFaithful] {
            let o = ModelOptions { outer_medium, coupling };
            for (l1, l2, below) in [
                (&e10, &ds10, true),
                (&e10, &ds30, true),
                (&ds30, &e10, false),
                (&ds10, &e10, false),
            ] {
                let d = HapticUnitDesign::paper_geometry(Family::Encapsulating, l1.clone(), l2.clone()).unwrap();
                for r in ratios(&d, &skin, o) {
                    assert_eq!(r < 1.0, below, "{} {o:?}: {r}", d.id());
                }
            }
        }
    }
}
