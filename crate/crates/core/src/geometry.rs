//! Length, area and diameter functionals of a mapping.
//!
//! Area is available through two independent routes: the closed-form
//! coefficient series ([`area_series`], canonical) and a tensor quadrature
//! of the Jacobian ([`area_quadrature`], the cross-check). All areas count
//! multiplicity and are normalized by `π`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::map::{jacobian, wirtinger, PolyharmonicMap};
use crate::optimize::{argmax, golden_max};
use crate::quadrature::{adaptive_periodic_trapezoid, pairwise_sum, GaussLegendre, TrapezoidControl};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    Length,
    Area,
    PhiArea,
    Psi,
}

/// Real function of `r` sampled on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusProfile {
    pub kind: ProfileKind,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl RadiusProfile {
    pub fn new(kind: ProfileKind, grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::InvalidParams("grid and values differ in length".into()));
        }
        if grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidParams("grid must be strictly increasing".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams("profile values must be finite".into()));
        }
        Ok(Self { kind, grid, values })
    }

    /// Samples `f` on `grid`.
    pub fn sample(kind: ProfileKind, grid: &[f64], f: impl FnMut(f64) -> f64) -> Result<Self> {
        let values = grid.iter().copied().map(f).collect();
        Self::new(kind, grid.to_vec(), values)
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }
}

/// `n` equispaced radii on `[lo, hi]`, both ends included.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("radius {r} not in (0, 1]")))
    }
}

/// `|F_z − e^{−2iθ} F_z̄|` at `r e^{iθ}`: speed of the image curve per unit arc.
fn tangent_speed(map: &PolyharmonicMap, r: f64, theta: f64) -> f64 {
    let (fz, fzb) = wirtinger(map, C64::from_polar(r, theta));
    (fz - C64::from_polar(1.0, -2.0 * theta) * fzb).norm()
}

/// `l_F(r) = r ∫₀^{2π} |F_z − e^{−2iθ} F_z̄| dθ`, length of the image of
/// `|z| = r` counting multiplicity.
pub fn curve_length(map: &PolyharmonicMap, r: f64) -> Result<f64> {
    curve_length_with(map, r, &TrapezoidControl::default())
}

pub fn curve_length_with(map: &PolyharmonicMap, r: f64, control: &TrapezoidControl) -> Result<f64> {
    check_radius(r)?;
    Ok(r * adaptive_periodic_trapezoid(control, |t| tangent_speed(map, r, t))?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupLengthSearch {
    /// Radii `1 − 2^{−k}` for `k = 1..=levels`.
    pub levels: u32,
    pub tol: f64,
    pub quadrature: TrapezoidControl,
}

impl Default for SupLengthSearch {
    fn default() -> Self {
        Self {
            levels: 20,
            tol: 1e-10,
            quadrature: TrapezoidControl::default(),
        }
    }
}

/// Lower-bound estimate of `l_F(1) = sup_{0<r<1} l_F(r)`.
pub fn sup_length(map: &PolyharmonicMap) -> Result<f64> {
    sup_length_with(map, &SupLengthSearch::default())
}

/// Maximum of `l_F` over the geometric grid `1 − 2^{−k}`, refined by golden
/// section between the neighbours of the best grid radius (0 and 1 act as
/// the outer neighbours and are never evaluated).
pub fn sup_length_with(map: &PolyharmonicMap, search: &SupLengthSearch) -> Result<f64> {
    let levels = search.levels.max(1);
    let radii: Vec<f64> = (1..=levels).map(|k| 1.0 - 0.5f64.powi(k as i32)).collect();
    let lengths = radii
        .iter()
        .map(|&r| curve_length_with(map, r, &search.quadrature))
        .collect::<Result<Vec<f64>>>()?;
    let (k, best) = argmax(&lengths).expect("at least one level");
    let lo = if k == 0 { 0.0 } else { radii[k - 1] };
    let hi = radii.get(k + 1).copied().unwrap_or(1.0);
    let mut failure = None;
    let (_, refined) = golden_max(
        |r| match curve_length_with(map, r, &search.quadrature) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NEG_INFINITY
            }
        },
        lo,
        hi,
        search.tol,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(best.max(refined))
}

/// Exact `S_F(r)` from the coefficients:
///
/// ```text
/// Σ_n Σ_j j(|a_{n,j}|² − |b_{n,j}|²) r^{2(2n+j−2)}
///   + 2 Σ_{n1<n2} Σ_j j Re(a_{n1,j} conj(a_{n2,j}) − b_{n1,j} conj(b_{n2,j})) r^{2(n1+n2+j−2)}
/// ```
///
/// May be negative for orientation-reversing maps.
pub fn area_series(map: &PolyharmonicMap, r: f64) -> f64 {
    area_coefficient_series(map, r, |_, _, _| 1.0, 0)
}

/// `dA/dr − 2A/r` with `A = π S_F`, from the closed-form series. Nonnegative
/// for maps satisfying the area hypotheses (every term is).
pub fn area_growth_excess(map: &PolyharmonicMap, r: f64) -> f64 {
    2.0 * PI * area_coefficient_series(map, r, |n1, n2, j| (n1 + n2 + j) as f64 - 3.0, 1)
}

/// Shared term structure of the area series. Each `(n1, n2, j)` term is
/// weighted by `j · weight(n1, n2, j)` and multiplied by
/// `r^{2(n1+n2+j−2) − lower}`.
fn area_coefficient_series(
    map: &PolyharmonicMap,
    r: f64,
    weight: impl Fn(usize, usize, usize) -> f64,
    lower: i32,
) -> f64 {
    let t = map.table();
    let mut terms = Vec::with_capacity(t.p() * t.p() * t.j_max());
    for n1 in 1..=t.p() {
        for n2 in n1..=t.p() {
            for j in 1..=t.j_max() {
                let (a1, b1) = (t.a(n1, j), t.b(n1, j));
                let (a2, b2) = (t.a(n2, j), t.b(n2, j));
                let coupling = if n1 == n2 {
                    a1.norm_sqr() - b1.norm_sqr()
                } else {
                    2.0 * (a1 * a2.conj() - b1 * b2.conj()).re
                };
                if coupling == 0.0 {
                    continue;
                }
                let exponent = 2 * (n1 + n2 + j - 2) as i32 - lower;
                terms.push(j as f64 * weight(n1, n2, j) * coupling * r.powi(exponent));
            }
        }
    }
    pairwise_sum(&terms)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaQuadrature {
    pub theta_samples: usize,
    pub radial_nodes: usize,
}

impl Default for AreaQuadrature {
    fn default() -> Self {
        Self {
            theta_samples: 2048,
            radial_nodes: 64,
        }
    }
}

/// `S_F(r) = (1/π) ∫∫_{D_r} J_F dA` by periodic trapezoid in `θ` times
/// Gauss–Legendre in `ρ ∈ [0, r]`.
pub fn area_quadrature(map: &PolyharmonicMap, r: f64) -> Result<f64> {
    area_quadrature_with(map, r, &AreaQuadrature::default())
}

pub fn area_quadrature_with(map: &PolyharmonicMap, r: f64, q: &AreaQuadrature) -> Result<f64> {
    check_radius(r)?;
    let rule = GaussLegendre::new(q.radial_nodes.max(1));
    let n = q.theta_samples.max(1);
    let h = 2.0 * PI / n as f64;
    let rotations: Vec<C64> = (0..n).map(|k| C64::from_polar(1.0, h * k as f64)).collect();
    let radial = rule.integrate(0.0, r, |rho| {
        let ring: Vec<f64> = rotations.iter().map(|u| jacobian(map, u * rho)).collect();
        h * pairwise_sum(&ring) * rho
    });
    Ok(radial / PI)
}

/// `φ_Area(r) = S_F(r)/r²`.
pub fn phi_area(map: &PolyharmonicMap, r: f64) -> f64 {
    area_series(map, r) / (r * r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiameterSearch {
    pub radii: usize,
    pub angles: usize,
    pub tol: f64,
    pub sweeps: usize,
}

impl Default for DiameterSearch {
    fn default() -> Self {
        Self {
            radii: 16,
            angles: 1024,
            tol: 1e-10,
            sweeps: 3,
        }
    }
}

/// Lower-bound estimate of `Diam F(D_r)`.
pub fn diameter_estimate(map: &PolyharmonicMap, r: f64) -> Result<f64> {
    diameter_estimate_with(map, r, &DiameterSearch::default())
}

/// Polar-grid sampling (the `ρ = r` ring included), farthest pair among the
/// convex-hull vertices of the sampled image, then coordinate-wise golden
/// refinement of that pair in `(ρ₁, θ₁, ρ₂, θ₂)`.
pub fn diameter_estimate_with(map: &PolyharmonicMap, r: f64, search: &DiameterSearch) -> Result<f64> {
    check_radius(r)?;
    let dr = r / search.radii.max(1) as f64;
    let dt = 2.0 * PI / search.angles.max(1) as f64;
    let mut polar = vec![(0.0, 0.0)];
    for k in 1..=search.radii.max(1) {
        let rho = if k == search.radii.max(1) { r } else { dr * k as f64 };
        polar.extend((0..search.angles.max(1)).map(|m| (rho, dt * m as f64)));
    }
    let images: Vec<C64> = polar.iter().map(|&(rho, t)| map.eval(C64::from_polar(rho, t))).collect();
    let hull = convex_hull(&images);
    if hull.len() < 2 {
        return Ok(0.0);
    }

    let mut best = (0usize, 0usize, -1.0f64);
    for (x, &i) in hull.iter().enumerate() {
        for &k in &hull[x + 1..] {
            let d = (images[i] - images[k]).norm();
            if d > best.2 {
                best = (i, k, d);
            }
        }
    }

    let (i, k, mut diam) = best;
    let mut vars = [polar[i].0, polar[i].1, polar[k].0, polar[k].1];
    let distance = |v: &[f64; 4]| {
        (map.eval(C64::from_polar(v[0], v[1])) - map.eval(C64::from_polar(v[2], v[3]))).norm()
    };
    for _ in 0..search.sweeps {
        let before = diam;
        for c in 0..4 {
            let (lo, hi) = if c % 2 == 0 {
                ((vars[c] - dr).max(0.0), (vars[c] + dr).min(r))
            } else {
                (vars[c] - dt, vars[c] + dt)
            };
            let mut trial = vars;
            let (x, v) = golden_max(
                |x| {
                    trial[c] = x;
                    distance(&trial)
                },
                lo,
                hi,
                search.tol,
            );
            if v > diam {
                diam = v;
                vars[c] = x;
            }
        }
        if diam - before <= search.tol * (1.0 + diam) {
            break;
        }
    }
    Ok(diam)
}

/// Indices of the convex-hull vertices (monotone chain, collinear points dropped).
fn convex_hull(points: &[C64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&i, &k| {
        points[i]
            .re
            .total_cmp(&points[k].re)
            .then(points[i].im.total_cmp(&points[k].im))
    });
    idx.dedup_by(|i, k| points[*i] == points[*k]);
    if idx.len() < 3 {
        return idx;
    }
    let cross = |o: usize, a: usize, b: usize| {
        let (o, a, b) = (points[o], points[a], points[b]);
        (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
    };
    let mut hull: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for (pass, order) in [idx.clone(), idx.iter().rev().copied().collect()].into_iter().enumerate() {
        // The upper chain may not pop points of the lower one.
        let floor = if pass == 0 { 2 } else { hull.len() + 1 };
        for &i in order.iter().skip(pass) {
            while hull.len() >= floor && cross(hull[hull.len() - 2], hull[hull.len() - 1], i) <= 0.0 {
                hull.pop();
            }
            hull.push(i);
        }
    }
    hull.pop();
    hull
}
