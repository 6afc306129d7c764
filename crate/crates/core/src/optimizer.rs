//! Exhaustive search over material pairs and layer thicknesses, plus a
//! continuous thickness refinement for a fixed material pair.

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::materials::Material;
use crate::parallel::{map_slice, Execution};
use crate::unit::{
    check_constraints, compare_designs, ConstraintReport, DesignComparison, Family, HapticUnitDesign,
    LayerSpec, ModelOptions, DEFAULT_INNER_RADIUS, DEFAULT_LAYER_THICKNESS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    MinimizeEdgeRatio,
    MaximizeEdgeRatio,
}

/// Weighted geometric mean of the compressional and shear edge ratios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignObjective {
    direction: Direction,
    weight_p: f64,
    weight_s: f64,
    evaluation_radius: f64,
}

impl DesignObjective {
    pub fn new(direction: Direction, weight_p: f64, weight_s: f64, evaluation_radius: f64) -> Result<Self> {
        let ok = weight_p >= 0.0 && weight_s >= 0.0 && (weight_p + weight_s - 1.0).abs() <= 1e-12;
        if !ok {
            return Err(Error::Domain(format!(
                "objective weights must be non-negative and sum to 1, got ({weight_p}, {weight_s})"
            )));
        }
        if !(evaluation_radius.is_finite() && evaluation_radius >= 0.0) {
            return Err(Error::Domain(format!("bad evaluation radius {evaluation_radius}")));
        }
        Ok(Self {
            direction,
            weight_p,
            weight_s,
            evaluation_radius,
        })
    }

    /// Equal weights, evaluated at the unit edge.
    pub fn balanced(direction: Direction) -> Self {
        Self::new(direction, 0.5, 0.5, 0.0).expect("valid weights")
    }

    /// Vertical displacement only.
    pub fn uz_only(direction: Direction) -> Self {
        Self::new(direction, 0.0, 1.0, 0.0).expect("valid weights")
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn weights(&self) -> (f64, f64) {
        (self.weight_p, self.weight_s)
    }

    /// Radius at which ratios are taken; never inside a unit.
    pub fn evaluation_radius(&self) -> f64 {
        self.evaluation_radius
    }

    pub fn value(&self, c: &DesignComparison) -> f64 {
        (self.weight_p * c.primary.ln() + self.weight_s * c.secondary.ln()).exp()
    }

    /// Orders two objective values, better first.
    pub fn compare(&self, a: f64, b: f64) -> Ordering {
        match self.direction {
            Direction::MinimizeEdgeRatio => a.total_cmp(&b),
            Direction::MaximizeEdgeRatio => b.total_cmp(&a),
        }
    }
}

/// Which material the single-layer control uses.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ControlPairing {
    #[default]
    Layer2,
    Layer1,
}

impl ControlPairing {
    pub fn control(self, design: &HapticUnitDesign) -> HapticUnitDesign {
        match (self, design.layer2()) {
            (ControlPairing::Layer1, Some(_)) => HapticUnitDesign::single_layer(
                design.layer1().material.clone(),
                design.total_thickness(),
                design.inner_radius(),
            )
            .expect("geometry already validated"),
            _ => design.matched_control(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpace {
    catalog: Vec<Material>,
    families: Vec<Family>,
    grid: Vec<(f64, f64)>,
    max_total_thickness: f64,
    inner_radius: f64,
}

impl SearchSpace {
    /// `grid` holds `(d1, d2)` pairs in metres; duplicates are dropped.
    pub fn new(
        catalog: Vec<Material>,
        families: Vec<Family>,
        grid: Vec<(f64, f64)>,
        max_total_thickness: f64,
        inner_radius: f64,
    ) -> Result<Self> {
        if families.is_empty() || families.contains(&Family::SingleLayer) {
            return Err(Error::EmptySpace(
                "families must be a non-empty subset of {embedded, encapsulating}".into(),
            ));
        }
        if grid.is_empty() {
            return Err(Error::EmptySpace("thickness grid is empty".into()));
        }
        for &(d1, d2) in &grid {
            if !(d1 > 0.0 && d2 > 0.0 && d1.is_finite() && d2.is_finite()) {
                return Err(Error::InvalidDesign(format!("grid point ({d1}, {d2}) m is not positive")));
            }
            if d1 + d2 > max_total_thickness {
                return Err(Error::InvalidDesign(format!(
                    "grid point ({d1}, {d2}) m exceeds the total-thickness bound {max_total_thickness} m"
                )));
            }
        }
        if !(inner_radius > 0.0 && inner_radius.is_finite()) {
            return Err(Error::InvalidDesign(format!("inner radius {inner_radius} m")));
        }
        let mut families = families;
        families.sort();
        families.dedup();
        let mut unique: Vec<(f64, f64)> = Vec::with_capacity(grid.len());
        for p in grid {
            if !unique.contains(&p) {
                unique.push(p);
            }
        }
        Ok(Self {
            catalog,
            families,
            grid: unique,
            max_total_thickness,
            inner_radius,
        })
    }

    /// Both families, equal layers of 1.0, 1.25 and 1.5 mm.
    pub fn with_default_grid(catalog: Vec<Material>) -> Result<Self> {
        Self::new(
            catalog,
            vec![Family::Embedded, Family::Encapsulating],
            default_grid(),
            3.0e-3,
            DEFAULT_INNER_RADIUS,
        )
    }

    pub fn catalog(&self) -> &[Material] {
        &self.catalog
    }

    pub fn families(&self) -> &[Family] {
        &self.families
    }

    pub fn grid(&self) -> &[(f64, f64)] {
        &self.grid
    }

    pub fn max_total_thickness(&self) -> f64 {
        self.max_total_thickness
    }

    pub fn inner_radius(&self) -> f64 {
        self.inner_radius
    }

    /// `|F| · M (M − 1) · G`.
    pub fn design_count(&self) -> usize {
        let m = self.catalog.len();
        self.families.len() * m * m.saturating_sub(1) * self.grid.len()
    }
}

/// Equal-thickness grid around the default 1.25 mm layers.
pub fn default_grid() -> Vec<(f64, f64)> {
    [0.8, 1.0, 1.2]
        .iter()
        .map(|f| (f * DEFAULT_LAYER_THICKNESS, f * DEFAULT_LAYER_THICKNESS))
        .collect()
}

/// Every family × ordered pair of distinct materials × grid point.
pub fn enumerate_designs(space: &SearchSpace) -> Result<Vec<HapticUnitDesign>> {
    if space.catalog.is_empty() {
        return Err(Error::EmptySpace("material catalog is empty".into()));
    }
    let mut out = Vec::with_capacity(space.design_count());
    for &family in &space.families {
        for (i, a) in space.catalog.iter().enumerate() {
            for (j, b) in space.catalog.iter().enumerate() {
                if i == j {
                    continue;
                }
                for &(d1, d2) in &space.grid {
                    out.push(HapticUnitDesign::two_layer(
                        family,
                        LayerSpec {
                            material: a.clone(),
                            thickness: d1,
                        },
                        LayerSpec {
                            material: b.clone(),
                            thickness: d2,
                        },
                        space.inner_radius,
                    )?);
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct OptimizeOptions {
    pub model: ModelOptions,
    pub pairing: ControlPairing,
    pub execution: Execution,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedEntry {
    pub design: HapticUnitDesign,
    pub comparison: Option<DesignComparison>,
    pub objective: Option<f64>,
    pub report: ConstraintReport,
    /// Evaluation failure, if any; such entries rank last.
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchStats {
    pub evaluations: usize,
    pub failures: usize,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedDesigns {
    pub entries: Vec<RankedEntry>,
    pub stats: SearchStats,
}

impl RankedDesigns {
    pub fn best(&self) -> Option<&RankedEntry> {
        self.entries.first().filter(|e| e.objective.is_some())
    }
}

/// Evaluates one design against its control.
pub fn evaluate_design(
    design: &HapticUnitDesign,
    objective: &DesignObjective,
    skin_top: &Material,
    omega: f64,
    options: &OptimizeOptions,
) -> RankedEntry {
    let control = options.pairing.control(design);
    let layer2 = design.layer2().unwrap_or(design.layer1());
    let report = check_constraints(
        &design.layer1().material,
        &layer2.material,
        &control.layer1().material,
        design.layer1().thickness,
        design.layer2().map_or(0.0, |l| l.thickness),
    );
    let r = objective.evaluation_radius().max(design.outer_radius());
    match compare_designs(design, &control, skin_top, omega, r, options.model) {
        Ok(c) => RankedEntry {
            design: design.clone(),
            objective: Some(objective.value(&c)),
            comparison: Some(c),
            report,
            error: None,
        },
        Err(e) => RankedEntry {
            design: design.clone(),
            comparison: None,
            objective: None,
            report,
            error: Some(e.to_string()),
        },
    }
}

fn tie_break(a: &HapticUnitDesign, b: &HapticUnitDesign) -> Ordering {
    let names = |d: &HapticUnitDesign| {
        (
            d.layer1().material.name().to_string(),
            d.layer2().map(|l| l.material.name().to_string()).unwrap_or_default(),
        )
    };
    a.total_thickness()
        .total_cmp(&b.total_thickness())
        .then_with(|| names(a).cmp(&names(b)))
        .then_with(|| a.family().cmp(&b.family()))
        .then_with(|| a.layer1().thickness.total_cmp(&b.layer1().thickness))
}

/// Sorts entries best first: objective in the requested direction, failed
/// evaluations last, then smaller total thickness, material names, family
/// and Layer 1 thickness.
pub fn rank_entries(entries: &mut [RankedEntry], objective: &DesignObjective) {
    entries.sort_by(|a, b| {
        let by_value = match (a.objective, b.objective) {
            (Some(x), Some(y)) => objective.compare(x, y),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        };
        by_value.then_with(|| tie_break(&a.design, &b.design))
    });
}

/// Exhaustive evaluation of [`enumerate_designs`] against the paired
/// single-layer controls.
pub fn optimize(
    space: &SearchSpace,
    objective: &DesignObjective,
    skin_top: &Material,
    omega: f64,
    options: &OptimizeOptions,
) -> Result<RankedDesigns> {
    let start = Instant::now();
    let designs = enumerate_designs(space)?;
    let mut entries = map_slice(&designs, options.execution, |d| {
        evaluate_design(d, objective, skin_top, omega, options)
    });
    let evaluations = entries.len();
    rank_entries(&mut entries, objective);
    let mut seen = std::collections::HashSet::new();
    entries.retain(|e| seen.insert(e.design.id()));
    let failures = entries.iter().filter(|e| e.error.is_some()).count();
    Ok(RankedDesigns {
        entries,
        stats: SearchStats {
            evaluations,
            failures,
            elapsed: start.elapsed(),
        },
    })
}

/// Box bounds for the two thicknesses, m. With `hold_total` set, `d2` is
/// tied to `total − d1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThicknessBounds {
    pub d1: (f64, f64),
    pub d2: (f64, f64),
    pub max_total: f64,
    pub hold_total: Option<f64>,
}

impl ThicknessBounds {
    fn validate(&self) -> Result<()> {
        for (label, (lo, hi)) in [("d1", self.d1), ("d2", self.d2)] {
            if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
                return Err(Error::InvalidDesign(format!("{label} bounds [{lo}, {hi}] m")));
            }
        }
        if self.d1.0 + self.d2.0 > self.max_total {
            return Err(Error::InvalidDesign("lower bounds exceed the total-thickness bound".into()));
        }
        if let Some(t) = self.hold_total {
            if t > self.max_total || t < self.d1.0 + self.d2.0 || t > self.d1.1 + self.d2.1 {
                return Err(Error::InvalidDesign(format!("held total {t} m is infeasible")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Refinement {
    pub design: HapticUnitDesign,
    pub objective: f64,
    pub starting_objective: f64,
    pub sweeps: usize,
    pub evaluations: usize,
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Minimizes `f` on `[lo, hi]`; the end points are always candidates, so a
/// monotone objective lands exactly on a bound.
fn golden_section(lo: f64, hi: f64, f: &mut dyn FnMut(f64) -> f64) -> (f64, f64) {
    if hi <= lo {
        return (lo, f(lo));
    }
    let tol = 1e-10 * hi.max(1e-3);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = f(d);
        }
    }
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    for x in [lo, hi] {
        let fx = f(x);
        if fx < best.1 {
            best = (x, fx);
        }
    }
    best
}

/// Coordinate descent over `d1` and `d2` with golden-section line searches,
/// materials and family fixed. Each trial design is compared with its own
/// paired control, so the control thickness follows the candidate.
pub fn refine_thickness(
    design: &HapticUnitDesign,
    objective: &DesignObjective,
    skin_top: &Material,
    omega: f64,
    bounds: ThicknessBounds,
    options: &OptimizeOptions,
) -> Result<Refinement> {
    bounds.validate()?;
    let Some(l2) = design.layer2() else {
        return Err(Error::InvalidDesign("refinement needs a two-layer design".into()));
    };
    let sign = match objective.direction() {
        Direction::MinimizeEdgeRatio => 1.0,
        Direction::MaximizeEdgeRatio => -1.0,
    };
    let mut evaluations = 0usize;
    let mut score = |d1: f64, d2: f64| -> Result<f64> {
        evaluations += 1;
        let trial = design.with_thicknesses(d1, d2)?;
        let entry = evaluate_design(&trial, objective, skin_top, omega, options);
        match entry.objective {
            Some(v) => Ok(sign * v),
            None => Err(Error::InvalidDesign(entry.error.unwrap_or_default())),
        }
    };

    let clamp = |v: f64, (lo, hi): (f64, f64)| v.clamp(lo, hi);
    let mut d1 = clamp(design.layer1().thickness, bounds.d1);
    let mut d2 = clamp(l2.thickness, bounds.d2);
    if let Some(t) = bounds.hold_total {
        d1 = d1.clamp((t - bounds.d2.1).max(bounds.d1.0), (t - bounds.d2.0).min(bounds.d1.1));
        d2 = t - d1;
    } else if d1 + d2 > bounds.max_total {
        d2 = (bounds.max_total - d1).max(bounds.d2.0);
        d1 = bounds.max_total - d2;
    }
    let starting = score(design.layer1().thickness, l2.thickness)?;
    let mut current = score(d1, d2)?;
    let mut sweeps = 0;
    let mut failure = None;
    for _ in 0..200 {
        sweeps += 1;
        let before = current;
        let mut improvements = [0.0f64; 2];

        // d1, with d2 either held or tied to the total
        let (lo, hi) = match bounds.hold_total {
            Some(t) => ((t - bounds.d2.1).max(bounds.d1.0), (t - bounds.d2.0).min(bounds.d1.1)),
            None => (bounds.d1.0, bounds.d1.1.min(bounds.max_total - d2)),
        };
        if hi > lo {
            let tied = bounds.hold_total;
            let mut line = |x: f64| {
                let y = tied.map_or(d2, |t| t - x);
                score(x, y).unwrap_or_else(|e| {
                    failure.get_or_insert(e);
                    f64::INFINITY
                })
            };
            let (x, fx) = golden_section(lo, hi, &mut line);
            if fx < current {
                improvements[0] = (current - fx) / current.abs().max(f64::MIN_POSITIVE);
                d1 = x;
                if let Some(t) = bounds.hold_total {
                    d2 = t - x;
                }
                current = fx;
            }
        }

        if bounds.hold_total.is_none() {
            let (lo, hi) = (bounds.d2.0, bounds.d2.1.min(bounds.max_total - d1));
            if hi > lo {
                let mut line = |y: f64| {
                    score(d1, y).unwrap_or_else(|e| {
                        failure.get_or_insert(e);
                        f64::INFINITY
                    })
                };
                let (y, fy) = golden_section(lo, hi, &mut line);
                if fy < current {
                    improvements[1] = (current - fy) / current.abs().max(f64::MIN_POSITIVE);
                    d2 = y;
                    current = fy;
                }
            }
        }
        if let Some(e) = failure.take() {
            return Err(e);
        }
        if improvements.iter().all(|&v| v < 1e-6) || current >= before {
            break;
        }
    }
    Ok(Refinement {
        design: design.with_thicknesses(d1, d2)?,
        objective: sign * current,
        starting_objective: sign * starting,
        sweeps,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::silicones;
    use crate::solver::SkinStack;

    const OMEGA: f64 = 2.0 * std::f64::consts::PI * 125.0;

    fn one_point() -> Vec<(f64, f64)> {
        vec![(DEFAULT_LAYER_THICKNESS, DEFAULT_LAYER_THICKNESS)]
    }

    #[test]
    fn counts() {
        let three = SearchSpace::new(
            silicones::catalog(),
            vec![Family::Encapsulating],
            one_point(),
            3e-3,
            DEFAULT_INNER_RADIUS,
        )
        .unwrap();
        assert_eq!(enumerate_designs(&three).unwrap().len(), 6);
        let two = SearchSpace::new(
            silicones::catalog()[..2].to_vec(),
            vec![Family::Embedded, Family::Encapsulating],
            default_grid(),
            3e-3,
            DEFAULT_INNER_RADIUS,
        )
        .unwrap();
        assert_eq!(enumerate_designs(&two).unwrap().len(), 12);
        assert_eq!(two.design_count(), 12);
    }

    #[test]
    fn empty_catalog() {
        let s = SearchSpace::with_default_grid(vec![]).unwrap();
        assert!(matches!(enumerate_designs(&s), Err(Error::EmptySpace(_))));
    }

    #[test]
    fn weights_must_sum_to_one() {
        assert!(DesignObjective::new(Direction::MinimizeEdgeRatio, 0.6, 0.6, 0.0).is_err());
        assert!(DesignObjective::new(Direction::MinimizeEdgeRatio, -0.5, 1.5, 0.0).is_err());
    }

    #[test]
    fn single_candidate_ranks_first() {
        let cat = silicones::catalog()[..2].to_vec();
        let s = SearchSpace::new(cat, vec![Family::Embedded], one_point(), 3e-3, DEFAULT_INNER_RADIUS).unwrap();
        let skin = SkinStack::default_forearm().top().clone();
        let obj = DesignObjective::balanced(Direction::MinimizeEdgeRatio);
        let r = optimize(&s, &obj, &skin, OMEGA, &OptimizeOptions::default()).unwrap();
        assert_eq!(r.stats.evaluations, 2);
        assert_eq!(r.best().unwrap().design.layer1().material.name(), "E-10");
    }

    #[test]
    fn golden_section_finds_bounds_and_interior() {
        let (x, _) = golden_section(0.0, 1.0, &mut |x| x);
        assert_eq!(x, 0.0);
        let (x, _) = golden_section(0.0, 1.0, &mut |x| -x);
        assert_eq!(x, 1.0);
        let (x, _) = golden_section(0.0, 1.0, &mut |x| (x - 0.3).powi(2));
        assert!((x - 0.3).abs() < 1e-8);
    }
}
