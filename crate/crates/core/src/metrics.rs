//! Distance-ratio metric on origin-centred disks and sampled Lipschitz
//! checks for it.
//!
//! All suprema here are taken over a finite, seeded pair sample, so they are
//! lower bounds for the true Lipschitz constants.

use std::f64::consts::{FRAC_PI_4, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::certificates::max_modulus_on_circle;
use crate::geometry::{ProfileKind, RadiusProfile};
use crate::map::PolyharmonicMap;
use crate::report::{CheckReport, Location, Margin, TOL_REPORT};
use crate::{Error, Result, C64};

/// Coefficient-sum slack allowed in the contraction hypothesis.
pub const CONTRACTION_HYP_TOL: f64 = 1e-12;
/// Boundary samples for the `f(D) ⊂ D` check.
pub const BOUNDARY_ANGLES: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskDomain {
    pub radius: f64,
}

impl DiskDomain {
    pub const UNIT: DiskDomain = DiskDomain { radius: 1.0 };

    pub fn new(radius: f64) -> Result<Self> {
        if radius > 0.0 && radius.is_finite() {
            Ok(Self { radius })
        } else {
            Err(Error::InvalidParams(format!("disk radius {radius} must be positive")))
        }
    }

    /// `M − |z|`, or [`Error::OutsideDomain`] unless positive.
    pub fn boundary_distance(&self, z: C64) -> Result<f64> {
        let d = self.radius - z.norm();
        if d > 0.0 {
            Ok(d)
        } else {
            Err(Error::OutsideDomain { re: z.re, im: z.im, radius: self.radius })
        }
    }
}

/// `log(1 + |z − w| / min(d_z, d_w))` from precomputed boundary distances.
pub fn j_from_distances(diff: f64, dz: f64, dw: f64) -> f64 {
    (diff / dz.min(dw)).ln_1p()
}

pub fn j_metric(z: C64, w: C64, domain: DiskDomain) -> Result<f64> {
    let dz = domain.boundary_distance(z)?;
    let dw = domain.boundary_distance(w)?;
    Ok(j_from_distances((z - w).norm(), dz, dw))
}

/// Seeded pair sample in the unit disk.
///
/// Random pairs are stratified in radius; the first half perturbs `z` by a
/// step of relative size `10^{−U(0,6)}` of its boundary distance, the
/// second half draws `w` independently. Ray pairs sit on a common ray at
/// `t = 1 − 10^{−d}`, `s = 1 − 2·10^{−d}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairSampler {
    pub random_pairs: usize,
    pub ray_pairs: usize,
    pub seed: u64,
}

impl Default for PairSampler {
    fn default() -> Self {
        Self { random_pairs: 512, ray_pairs: 64, seed: 0 }
    }
}

/// Highest ray depth `d` used by [`PairSampler`].
const RAY_DEPTH: u32 = 6;

impl PairSampler {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn pairs(&self) -> Vec<(C64, C64)> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let n = self.random_pairs;
        let mut out = Vec::with_capacity(n + self.ray_pairs);
        for i in 0..n {
            let stratum = (i % n.div_ceil(2).max(1)) as f64;
            let strata = n.div_ceil(2).max(1) as f64;
            let r = ((stratum + rng.gen::<f64>()) / strata).sqrt().min(1.0 - 1e-12);
            let z = C64::from_polar(r, rng.gen_range(0.0..2.0 * PI));
            let w = if i < n / 2 {
                let step = (1.0 - r) * 10f64.powf(-rng.gen_range(0.0..6.0));
                z + C64::from_polar(step, rng.gen_range(0.0..2.0 * PI))
            } else {
                let s = rng.gen::<f64>().sqrt().min(1.0 - 1e-12);
                C64::from_polar(s, rng.gen_range(0.0..2.0 * PI))
            };
            if w.norm() < 1.0 && w != z {
                out.push((z, w));
            }
        }
        for k in 0..self.ray_pairs {
            let d = 1 + (k as u32 % RAY_DEPTH);
            let h = 10f64.powi(-(d as i32));
            let angle = 2.0 * PI * k as f64 / self.ray_pairs as f64;
            out.push((C64::from_polar(1.0 - h, angle), C64::from_polar(1.0 - 2.0 * h, angle)));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LipschitzReport {
    pub sup_ratio: f64,
    pub bound: f64,
    /// Pair attaining `sup_ratio`.
    pub witness: Option<(C64, C64)>,
    pub samples: usize,
    pub report: CheckReport,
}

/// Largest `ratio(z, w)` over the sample. Pairs whose ratio is `None` are
/// skipped.
fn sup_ratio(pairs: &[(C64, C64)], mut ratio: impl FnMut(C64, C64) -> Result<Option<f64>>) -> Result<(f64, Option<(C64, C64)>, usize)> {
    let mut best = (f64::NEG_INFINITY, None);
    let mut used = 0;
    for &(z, w) in pairs {
        if let Some(q) = ratio(z, w)? {
            used += 1;
            if q > best.0 {
                best = (q, Some((z, w)));
            }
        }
    }
    Ok((best.0.max(0.0), best.1, used))
}

fn ratio_margin(id: &str, sup: f64, bound: f64, witness: Option<(C64, C64)>) -> Margin {
    Margin::le(id, sup, bound, witness.map(|(z, w)| Location::point_pair(z, w)))
}

/// `j_{D_M}(F(z), F(w)) ≤ j_D(z, w)` on the sample, given
/// `Σ(|a_{n,j}| + |b_{n,j}|) ≤ M`.
pub fn contraction_check(map: &PolyharmonicMap, m: f64, sampler: &PairSampler) -> Result<LipschitzReport> {
    let target = DiskDomain::new(m)?;
    let coef_sum = map.table().coefficient_sum();
    let hypothesis = coef_sum <= m + CONTRACTION_HYP_TOL;
    let pairs = sampler.pairs();
    let (sup, witness, samples) = sup_ratio(&pairs, |z, w| {
        let base = j_metric(z, w, DiskDomain::UNIT)?;
        if base <= 0.0 {
            return Ok(None);
        }
        let image = target
            .boundary_distance(map.eval(z))
            .and_then(|dz| Ok(j_from_distances(map.difference(z, w).norm(), dz, target.boundary_distance(map.eval(w))?)));
        match image {
            Ok(v) => Ok(Some(v / base)),
            Err(e) if hypothesis => Err(e),
            Err(_) => Ok(Some(f64::INFINITY)),
        }
    })?;
    let margins = vec![
        Margin::le("coefficient-sum", coef_sum, m, None).with_tol(CONTRACTION_HYP_TOL),
        ratio_margin("j-ratio", sup, 1.0, witness),
    ];
    let report = if hypothesis {
        CheckReport::from_margins("contraction", margins, TOL_REPORT)
    } else {
        CheckReport::hypotheses_not_met("contraction", margins, TOL_REPORT)
    };
    let report = report.with_value("M", m).with_value("sup_ratio", sup);
    Ok(LipschitzReport { sup_ratio: sup, bound: 1.0, witness, samples, report })
}

/// The harmonic Lipschitz bound `(p'√(2p')/2)·π` for `p'` the polynomial
/// degree of a harmonic polynomial with `f(D) ⊂ D`.
///
/// Also records Parseval `Σ(|a_j|² + |b_j|²) ≤ 1`, the coefficient bound
/// `Σ(|a_j| + |b_j|) ≤ √(2p')` and, at the worst sample, the harmonic
/// Schwarz bound `|f(z)| ≤ (4/π)·arctan|z|`.
pub fn harmonic_lipschitz_check(map: &PolyharmonicMap, sampler: &PairSampler) -> Result<LipschitzReport> {
    let t = map.table();
    if t.p() != 1 {
        return Err(Error::NotHarmonicPolynomial);
    }
    let (_, boundary) = max_modulus_on_circle(map, 1.0, BOUNDARY_ANGLES);
    if boundary > 1.0 + TOL_REPORT {
        return Err(Error::NotIntoDisk(boundary));
    }
    let degree = t.degree().max(1) as f64;
    let bound = degree * (2.0 * degree).sqrt() / 2.0 * PI;
    let parseval: f64 = t.entries().map(|(_, _, a, b)| a.norm_sqr() + b.norm_sqr()).sum();
    let coef_sum = t.coefficient_sum();

    let pairs = sampler.pairs();
    let mut schwarz_worst: Option<(f64, f64, C64)> = None;
    let (sup, witness, samples) = sup_ratio(&pairs, |z, w| {
        let base = j_metric(z, w, DiskDomain::UNIT)?;
        if base <= 0.0 {
            return Ok(None);
        }
        let (fz, fw) = (map.eval(z), map.eval(w));
        for (x, fx) in [(z, fz), (w, fw)] {
            let lhs = fx.norm();
            let rhs = x.norm().atan() / FRAC_PI_4;
            if schwarz_worst.map_or(true, |(l, r, _)| rhs - lhs < r - l) {
                schwarz_worst = Some((lhs, rhs, x));
            }
        }
        let u = DiskDomain::UNIT;
        let image = j_from_distances(map.difference(z, w).norm(), u.boundary_distance(fz)?, u.boundary_distance(fw)?);
        Ok(Some(image / base))
    })?;

    let mut margins = vec![
        Margin::le("into-disk", boundary, 1.0, None),
        Margin::le("parseval", parseval, 1.0, None),
        Margin::le("coefficient-sum", coef_sum, (2.0 * degree).sqrt(), None),
        ratio_margin("j-ratio", sup, bound, witness),
    ];
    if let Some((lhs, rhs, x)) = schwarz_worst {
        margins.push(Margin::le("harmonic-schwarz", lhs, rhs, Some(Location::point(x))));
    }
    let report = CheckReport::from_margins("harmonic-lipschitz", margins, TOL_REPORT)
        .with_value("degree", degree)
        .with_value("sup_ratio", sup)
        .with_value("boundary_sup", boundary);
    Ok(LipschitzReport { sup_ratio: sup, bound, witness, samples, report })
}

/// `ψ(r) = (1 − r)/(1 − (4/π)·arctan r)`, evaluated through
/// `1 − (4/π)·arctan r = (4/π)·arctan((1 − r)/(1 + r))` to avoid
/// cancellation near `r = 1`.
pub fn psi(r: f64) -> f64 {
    if r >= 1.0 {
        return PI / 2.0;
    }
    (1.0 - r) * FRAC_PI_4 / ((1.0 - r) / (1.0 + r)).atan()
}

pub fn psi_profile(r_grid: &[f64]) -> Result<RadiusProfile> {
    if let Some(r) = r_grid.iter().find(|&&r| !(0.0..1.0).contains(&r)) {
        return Err(Error::InvalidParams(format!("radius {r} not in [0, 1)")));
    }
    RadiusProfile::sample(ProfileKind::Psi, r_grid, psi)
}

/// Disk automorphism `e^{iθ}(z − a)/(1 − āz)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius {
    pub a: C64,
    pub theta: f64,
}

impl Mobius {
    pub fn new(a: C64, theta: f64) -> Result<Self> {
        if a.norm() < 1.0 && theta.is_finite() {
            Ok(Self { a, theta })
        } else {
            Err(Error::InvalidParams(format!("Möbius parameter |a| = {} must be below 1", a.norm())))
        }
    }

    pub fn apply(&self, z: C64) -> C64 {
        C64::from_polar(1.0, self.theta) * (z - self.a) / (1.0 - self.a.conj() * z)
    }

    /// `T(z) − T(w) = e^{iθ}(1 − |a|²)(z − w)/((1 − āz)(1 − āw))`.
    pub fn difference(&self, z: C64, w: C64) -> C64 {
        let ac = self.a.conj();
        C64::from_polar(1.0 - self.a.norm_sqr(), self.theta) * (z - w) / ((1.0 - ac * z) * (1.0 - ac * w))
    }

    /// `1 − |T(z)|`, from `1 − |T|² = (1 − |a|²)(1 − |z|²)/|1 − āz|²`.
    pub fn boundary_distance(&self, z: C64) -> f64 {
        let one_minus_sq = |x: f64| (1.0 - x) * (1.0 + x);
        let q = one_minus_sq(self.a.norm()) * one_minus_sq(z.norm()) / (1.0 - self.a.conj() * z).norm_sqr();
        q / (1.0 + self.apply(z).norm())
    }
}

/// Sampled `sup j_D(T(z), T(w))/j_D(z, w)` against the bound 2.
pub fn mobius_j_distortion(a: C64, theta: f64, sampler: &PairSampler) -> Result<LipschitzReport> {
    let t = Mobius::new(a, theta)?;
    let pairs = sampler.pairs();
    let (sup, witness, samples) = sup_ratio(&pairs, |z, w| {
        let base = j_metric(z, w, DiskDomain::UNIT)?;
        if base <= 0.0 {
            return Ok(None);
        }
        let image = j_from_distances(t.difference(z, w).norm(), t.boundary_distance(z), t.boundary_distance(w));
        Ok(Some(image / base))
    })?;
    let report = CheckReport::from_margins("mobius-distortion", vec![ratio_margin("j-ratio", sup, 2.0, witness)], TOL_REPORT)
        .with_value("sup_ratio", sup);
    Ok(LipschitzReport { sup_ratio: sup, bound: 2.0, witness, samples, report })
}
