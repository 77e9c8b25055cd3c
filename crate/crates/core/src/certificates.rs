//! Hypothesis and conclusion checks for the coefficient, three-circles and
//! area-Schwarz statements.
//!
//! Every check returns a [`CheckReport`] carrying the numeric slack of each
//! inequality, so equality cases show up as zero slack rather than a bare
//! pass.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::geometry::{area_growth_excess, area_series, ProfileKind, RadiusProfile};
use crate::map::PolyharmonicMap;
use crate::optimize::golden_max;
use crate::report::{CheckReport, Location, Margin, TOL_REPORT};
use crate::{Error, Result, C64};

/// Tolerance on argument comparisons.
pub const ANGLE_TOL: f64 = 1e-12;
/// Coefficients below `ZERO_REL · max|coefficient|` count as zero.
pub const ZERO_REL: f64 = 1e-14;
/// Radius standing in for the open-disk supremum `S_F(1)`.
pub const BOUNDARY_RADIUS: f64 = 1.0 - 1e-6;
/// Spread of `φ_Area` below which it is classified constant.
pub const CONSTANT_SPREAD: f64 = 1e-10;
/// Allowed negative excursion of `dA/dr − 2A/r`.
pub const GROWTH_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArgConditionKind {
    /// `|arg(a_{n1,j}/a_{n2,j})| ≤ π/2` and likewise for `b`.
    DiamCond,
    /// Both argument differences exactly 0.
    LengthCond,
    /// `a`-pairs within `π/2`, `b`-pairs at least `π/2` apart, and
    /// `|a_{n,j}| ≥ |b_{n,j}|` everywhere.
    AreaCond,
}

impl ArgConditionKind {
    pub fn id(self) -> &'static str {
        match self {
            ArgConditionKind::DiamCond => "diam-cond",
            ArgConditionKind::LengthCond => "length-cond",
            ArgConditionKind::AreaCond => "area-cond",
        }
    }
}

/// `|arg(c1/c2)|`, or `None` when either coefficient counts as zero.
fn arg_gap(c1: C64, c2: C64, zero: f64) -> Option<f64> {
    if c1.norm() <= zero || c2.norm() <= zero {
        return None;
    }
    Some((c1 * c2.conj()).arg().abs())
}

pub fn arg_condition(map: &PolyharmonicMap, kind: ArgConditionKind) -> CheckReport {
    let t = map.table();
    let zero = ZERO_REL * t.max_modulus();
    let mut margins = Vec::new();
    for j in 1..=t.j_max() {
        for n1 in 1..=t.p() {
            for n2 in n1 + 1..=t.p() {
                let at = Some(Location::IndexPair { n1, n2, j });
                if let Some(g) = arg_gap(t.a(n1, j), t.a(n2, j), zero) {
                    margins.push(match kind {
                        ArgConditionKind::LengthCond => Margin::le("arg-a", g, 0.0, at),
                        _ => Margin::le("arg-a", g, FRAC_PI_2, at),
                    });
                }
                if let Some(g) = arg_gap(t.b(n1, j), t.b(n2, j), zero) {
                    margins.push(match kind {
                        ArgConditionKind::DiamCond => Margin::le("arg-b", g, FRAC_PI_2, at),
                        ArgConditionKind::LengthCond => Margin::le("arg-b", g, 0.0, at),
                        ArgConditionKind::AreaCond => Margin::ge("arg-b", g, FRAC_PI_2, at),
                    });
                }
            }
        }
    }
    if kind == ArgConditionKind::AreaCond {
        for (n, j, a, b) in t.entries() {
            margins.push(Margin::ge("modulus", a.norm(), b.norm(), Some(Location::Index { n, j })));
        }
    }
    CheckReport::from_margins(kind.id(), margins, ANGLE_TOL)
}

fn gate(report: CheckReport, hypothesis: &CheckReport) -> CheckReport {
    if hypothesis.passed() {
        return report;
    }
    let mut r = CheckReport::hypotheses_not_met(report.check.clone(), report.margins, report.tol);
    r.values = report.values;
    r.with_note(format!("hypothesis {} not satisfied", hypothesis.check))
}

/// Coefficient bounds from the image diameter, per `j`:
/// `Σ_n|a_{n,j}|, Σ_n|b_{n,j}| ≤ (√p/2)·Diam` and
/// `Σ_n(|a_{n,j}|+|b_{n,j}|) ≤ (√(2p)/2)·Diam`.
///
/// For `p = 1` this is the classical bound `|a_j| ≤ Diam/2`, attained by
/// `c·z^j`. Gated on [`ArgConditionKind::DiamCond`].
pub fn diameter_coefficient_bounds(map: &PolyharmonicMap, diam: f64) -> Result<CheckReport> {
    if !(diam > 0.0 && diam.is_finite()) {
        return Err(Error::InvalidDiameter(diam));
    }
    let t = map.table();
    let p = t.p() as f64;
    let single = p.sqrt() / 2.0 * diam;
    let both = (2.0 * p).sqrt() / 2.0 * diam;
    let mut margins = Vec::new();
    for j in 1..=t.j_max() {
        let at = Some(Location::Index { n: 0, j });
        let sa: f64 = (1..=t.p()).map(|n| t.a(n, j).norm()).sum();
        let sb: f64 = (1..=t.p()).map(|n| t.b(n, j).norm()).sum();
        margins.push(Margin::le("sum-a", sa, single, at));
        margins.push(Margin::le("sum-b", sb, single, at));
        margins.push(Margin::le("sum-ab", sa + sb, both, at));
    }
    let report = CheckReport::from_margins("diameter-coefficient-bounds", margins, TOL_REPORT).with_value("diam", diam);
    Ok(gate(report, &arg_condition(map, ArgConditionKind::DiamCond)))
}

/// `|a_{n,j}| + |b_{n,j}| ≤ K·l₁/(2π(n+j−1))` for every `(n, j)`.
/// Gated on [`ArgConditionKind::LengthCond`].
pub fn length_coefficient_bounds(map: &PolyharmonicMap, k: f64, l1: f64) -> Result<CheckReport> {
    if !(k >= 1.0 && k.is_finite()) {
        return Err(Error::InvalidParams(format!("K = {k} must be at least 1")));
    }
    if !(l1 > 0.0 && l1.is_finite()) {
        return Err(Error::InvalidParams(format!("l1 = {l1} must be positive")));
    }
    let margins = map
        .table()
        .entries()
        .map(|(n, j, a, b)| {
            let bound = k * l1 / (2.0 * PI * (n + j - 1) as f64);
            Margin::le("coef", a.norm() + b.norm(), bound, Some(Location::Index { n, j }))
        })
        .collect();
    let report = CheckReport::from_margins("length-coefficient-bounds", margins, TOL_REPORT)
        .with_value("K", k)
        .with_value("l1", l1);
    Ok(gate(report, &arg_condition(map, ArgConditionKind::LengthCond)))
}

/// `S_F(r) ≤ m^{log r / log r₁}` on `r_grid ⊂ [r₁, 1)`, given
/// `S_F(r₁) ≤ m`, `S_F(1) ≤ 1` and the area condition.
pub fn three_circles_area(map: &PolyharmonicMap, r1: f64, m: f64, r_grid: &[f64]) -> Result<CheckReport> {
    if !(r1 > 0.0 && r1 < 1.0) {
        return Err(Error::InvalidParams(format!("r1 = {r1} not in (0, 1)")));
    }
    if !(m > 0.0 && m < 1.0) {
        return Err(Error::InvalidParams(format!("m = {m} not in (0, 1)")));
    }
    if let Some(r) = r_grid.iter().find(|&&r| !(r >= r1 && r < 1.0)) {
        return Err(Error::InvalidParams(format!("grid radius {r} not in [r1, 1)")));
    }
    let s_r1 = area_series(map, r1);
    let s_top = area_series(map, BOUNDARY_RADIUS);
    let exponent_base = m.ln() / r1.ln();
    let margins = r_grid
        .iter()
        .map(|&r| Margin::le("three-circles", area_series(map, r), (exponent_base * r.ln()).exp(), Some(Location::Radius { r })))
        .collect();
    let report = CheckReport::from_margins("three-circles-area", margins, TOL_REPORT)
        .with_value("S(r1)", s_r1)
        .with_value("S(1-)", s_top)
        .with_value("r1", r1)
        .with_value("m", m);

    let cond = arg_condition(map, ArgConditionKind::AreaCond);
    let report = gate(report, &cond);
    if report.verdict == crate::Verdict::HypothesesNotMet {
        return Ok(report);
    }
    if s_r1 > m + TOL_REPORT {
        let mut r = CheckReport::hypotheses_not_met(report.check.clone(), report.margins, report.tol);
        r.values = report.values;
        return Ok(r.with_note(format!("S(r1) = {s_r1} exceeds m = {m}")));
    }
    if s_top > 1.0 + TOL_REPORT {
        let mut r = CheckReport::hypotheses_not_met(report.check.clone(), report.margins, report.tol);
        r.values = report.values;
        return Ok(r.with_note(format!("S(1-) = {s_top} exceeds 1")));
    }
    Ok(report)
}

/// Maximum of `|f|` on `|z| = r`: `angles`-point grid, then golden refinement.
pub fn max_modulus_on_circle(map: &PolyharmonicMap, r: f64, angles: usize) -> (f64, f64) {
    let dt = 2.0 * PI / angles as f64;
    let (mut theta, mut best) = (0.0, f64::NEG_INFINITY);
    for k in 0..angles {
        let t = dt * k as f64;
        let v = map.eval(C64::from_polar(r, t)).norm();
        if v > best {
            (theta, best) = (t, v);
        }
    }
    let (t, v) = golden_max(|t| map.eval(C64::from_polar(r, t)).norm(), theta - dt, theta + dt, 1e-12);
    if v > best {
        (t, v)
    } else {
        (theta, best)
    }
}

/// Classical three circles for analytic tables:
/// `M^{log(r2/r1)} ≤ M1^{log(r2/r)} · M2^{log(r/r1)}` for `r` in the grid.
pub fn hadamard_three_circles(map: &PolyharmonicMap, r1: f64, r2: f64, r_grid: &[f64]) -> Result<CheckReport> {
    if !map.table().is_analytic() {
        return Err(Error::NotAnalytic);
    }
    if !(r1 > 0.0 && r1 < r2 && r2 <= 1.0) {
        return Err(Error::InvalidParams(format!("need 0 < r1 < r2 <= 1, got {r1}, {r2}")));
    }
    if let Some(r) = r_grid.iter().find(|&&r| !(r >= r1 && r <= r2)) {
        return Err(Error::InvalidParams(format!("grid radius {r} not in [r1, r2]")));
    }
    const ANGLES: usize = 1024;
    let (_, m1) = max_modulus_on_circle(map, r1, ANGLES);
    let (_, m2) = max_modulus_on_circle(map, r2, ANGLES);
    let margins = r_grid
        .iter()
        .map(|&r| {
            let (_, m) = max_modulus_on_circle(map, r, ANGLES);
            let lhs = m.powf((r2 / r1).ln());
            let rhs = m1.powf((r2 / r).ln()) * m2.powf((r / r1).ln());
            Margin::le("hadamard", lhs, rhs, Some(Location::Radius { r }))
        })
        .collect();
    Ok(CheckReport::from_margins("hadamard-three-circles", margins, TOL_REPORT)
        .with_value("M1", m1)
        .with_value("M2", m2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AreaShape {
    Constant,
    StrictlyIncreasing,
    NonDecreasing,
    NotMonotone,
}

impl AreaShape {
    pub fn id(self) -> &'static str {
        match self {
            AreaShape::Constant => "constant",
            AreaShape::StrictlyIncreasing => "strictly-increasing",
            AreaShape::NonDecreasing => "non-decreasing",
            AreaShape::NotMonotone => "not-monotone",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AreaSchwarzOutcome {
    pub report: CheckReport,
    pub shape: AreaShape,
    pub phi: RadiusProfile,
}

/// Monotonicity of `φ_Area(r) = S_F(r)/r²` along `r_grid` (radii in (0, 1)).
///
/// Also checks `dA/dr − 2A/r ≥ −1e−12` at each grid radius and, when
/// `S_F(1⁻) ≤ 1`, the bound `S_F(r) ≤ r²`. Gated on the area condition.
pub fn area_schwarz(map: &PolyharmonicMap, r_grid: &[f64]) -> Result<AreaSchwarzOutcome> {
    if let Some(r) = r_grid.iter().find(|&&r| !(r > 0.0 && r < 1.0)) {
        return Err(Error::InvalidParams(format!("grid radius {r} not in (0, 1)")));
    }
    let phi = RadiusProfile::sample(ProfileKind::PhiArea, r_grid, |r| area_series(map, r) / (r * r))?;

    let mut margins = Vec::new();
    for (w, v) in phi.grid.windows(2).zip(phi.values.windows(2)) {
        margins.push(Margin::ge("phi-monotone", v[1], v[0], Some(Location::Radius { r: w[1] })));
    }
    for &r in r_grid {
        margins.push(
            Margin::ge("growth-excess", area_growth_excess(map, r), 0.0, Some(Location::Radius { r })).with_tol(GROWTH_TOL),
        );
    }
    let s_top = area_series(map, BOUNDARY_RADIUS);
    let corollary = s_top <= 1.0 + TOL_REPORT;
    if corollary {
        for &r in r_grid {
            margins.push(Margin::le("corollary", area_series(map, r), r * r, Some(Location::Radius { r })));
        }
    }

    let (lo, hi) = phi
        .values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let steps: Vec<f64> = phi.values.windows(2).map(|v| v[1] - v[0]).collect();
    let shape = if hi - lo < CONSTANT_SPREAD {
        AreaShape::Constant
    } else if steps.iter().all(|&d| d > 0.0) {
        AreaShape::StrictlyIncreasing
    } else if steps.iter().all(|&d| d >= -TOL_REPORT) {
        AreaShape::NonDecreasing
    } else {
        AreaShape::NotMonotone
    };

    let mut report = CheckReport::from_margins("area-schwarz", margins, TOL_REPORT)
        .with_value("phi_min", if lo.is_finite() { lo } else { 0.0 })
        .with_value("phi_max", if hi.is_finite() { hi } else { 0.0 })
        .with_value("S(1-)", s_top);
    report.classification = Some(shape.id().to_string());
    if !corollary {
        report = report.with_note("S(1-) > 1: corollary bound not applicable");
    }
    let report = gate(report, &arg_condition(map, ArgConditionKind::AreaCond));
    Ok(AreaSchwarzOutcome { report, shape, phi })
}
