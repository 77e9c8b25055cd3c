//! Univalence and covering radii from the decreasing majorants of the two
//! Landau-type theorems.
//!
//! Inputs are plain numbers (α = λ_F(0), Diam F(D), K, l_F(1)); composing
//! them from a map is left to the caller.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Bisection bracket.
pub const BRACKET: (f64, f64) = (1e-12, 1.0 - 1e-9);
/// Points used to confirm that the majorant is strictly decreasing.
pub const MONOTONE_GRID: usize = 1024;
/// Absolute tolerance on the returned radius.
pub const ROOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandauResult {
    /// Radius of univalence.
    pub r_univ: f64,
    /// Radius of the disk covered by the image of `D_{r_univ}`.
    pub rho_cover: f64,
    /// α, the value of the majorant at `0⁺`.
    pub phi_at_zero: f64,
    pub iterations: usize,
    pub bracket: (f64, f64),
}

/// A root of `phi` found by [`least_positive_root_detailed`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub r: f64,
    pub residual: f64,
    pub iterations: usize,
    pub bracket: (f64, f64),
}

pub fn least_positive_root<F: Fn(f64) -> f64>(phi: F, tol: f64) -> Result<f64> {
    least_positive_root_detailed(phi, tol).map(|r| r.r)
}

/// Bisection on [`BRACKET`] after checking `phi` is strictly decreasing on a
/// uniform grid, so the root found is the least one.
///
/// Stops once the bracket is narrower than `tol` and
/// `|phi| ≤ tol·(1 + |phi(0⁺)|)`, or when the bracket cannot shrink further
/// in floating point. Returns the endpoint with the smaller residual.
pub fn least_positive_root_detailed<F: Fn(f64) -> f64>(phi: F, tol: f64) -> Result<Root> {
    let (lo0, hi0) = BRACKET;
    let phi0 = phi(lo0);
    let phi_hi = phi(hi0);
    if !(phi0 > 0.0 && phi_hi < 0.0) {
        return Err(Error::NoSignChange { lo: phi0, hi: phi_hi });
    }
    let mut prev = phi0;
    for i in 1..=MONOTONE_GRID {
        let r = lo0 + (hi0 - lo0) * i as f64 / MONOTONE_GRID as f64;
        let v = phi(r);
        if !(v < prev) {
            return Err(Error::NotDecreasing { at: r });
        }
        prev = v;
    }

    let target = tol * (1.0 + phi0.abs());
    let (mut lo, mut hi) = (lo0, hi0);
    let (mut f_lo, mut f_hi) = (phi0, phi_hi);
    let mut iterations = 0;
    loop {
        let best = if f_lo.abs() <= f_hi.abs() { (lo, f_lo) } else { (hi, f_hi) };
        if hi - lo <= tol && best.1.abs() <= target {
            return Ok(Root { r: best.0, residual: best.1, iterations, bracket: (lo, hi) });
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(Root { r: best.0, residual: best.1, iterations, bracket: (lo, hi) });
        }
        iterations += 1;
        let f_mid = phi(mid);
        if f_mid == 0.0 {
            return Ok(Root { r: mid, residual: 0.0, iterations, bracket: (mid, mid) });
        }
        if f_mid > 0.0 {
            (lo, f_lo) = (mid, f_mid);
        } else {
            (hi, f_hi) = (mid, f_mid);
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("alpha = {alpha} must be positive")))
    }
}

fn check_p(p: usize) -> Result<()> {
    if p == 0 {
        Err(Error::InvalidParams("p must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// `Σ_{n=2}^p w(n)·r^{2(n−1)}`.
fn depth_sum(p: usize, r: f64, w: impl Fn(usize) -> f64) -> f64 {
    let r2 = r * r;
    let mut pow = 1.0;
    let mut s = 0.0;
    for n in 2..=p {
        pow *= r2;
        s += w(n) * pow;
    }
    s
}

fn finish(root: Root, alpha: f64, rho: f64) -> Result<LandauResult> {
    if !(rho > 0.0) {
        return Err(Error::NonPositiveCover(rho));
    }
    Ok(LandauResult {
        r_univ: root.r,
        rho_cover: rho,
        phi_at_zero: alpha,
        iterations: root.iterations,
        bracket: root.bracket,
    })
}

/// Majorant of the diameter theorem.
pub fn diameter_majorant(p: usize, alpha: f64, diam: f64) -> impl Fn(f64) -> f64 {
    let c = (2.0 * p as f64).sqrt() / 2.0 * diam;
    move |r| {
        let q = 1.0 - r;
        let bracket = (2.0 * r - r * r) / (q * q)
            + depth_sum(p, r, |_| 1.0) / (q * q)
            + 2.0 * depth_sum(p, r, |n| (n - 1) as f64) / q;
        alpha - c * bracket
    }
}

pub fn landau_from_diameter(p: usize, alpha: f64, diam: f64) -> Result<LandauResult> {
    check_p(p)?;
    check_alpha(alpha)?;
    if !(diam > 0.0 && diam.is_finite()) {
        return Err(Error::InvalidDiameter(diam));
    }
    let root = least_positive_root_detailed(diameter_majorant(p, alpha, diam), ROOT_TOL)?;
    let r = root.r;
    let c = (2.0 * p as f64).sqrt() / 2.0 * diam;
    let rho = r * (alpha - c * r / (1.0 - r) - c * depth_sum(p, r, |_| 2.0) / (1.0 - r));
    finish(root, alpha, rho)
}

/// Majorant of the length theorem.
pub fn length_majorant(p: usize, alpha: f64, k: f64, l1: f64) -> impl Fn(f64) -> f64 {
    let c = k * l1 / (2.0 * std::f64::consts::PI);
    move |r| alpha - c / (1.0 - r) * (r + 3.0 * depth_sum(p, r, |_| 1.0))
}

pub fn landau_from_length(p: usize, alpha: f64, k: f64, l1: f64) -> Result<LandauResult> {
    check_p(p)?;
    check_alpha(alpha)?;
    if !(k >= 1.0 && k.is_finite()) {
        return Err(Error::InvalidParams(format!("K = {k} must be at least 1")));
    }
    if !(l1 > 0.0 && l1.is_finite()) {
        return Err(Error::InvalidParams(format!("l1 = {l1} must be positive")));
    }
    let root = least_positive_root_detailed(length_majorant(p, alpha, k, l1), ROOT_TOL)?;
    let r = root.r;
    let c = k * l1 / (2.0 * std::f64::consts::PI);
    let log_term = -(-r).ln_1p();
    let rho = alpha * r - c * (log_term - r + 2.0 * log_term * depth_sum(p, r, |_| 1.0));
    finish(root, alpha, rho)
}

/// The four-gon example (p = 2, α = 1) in its simplified closed form.
pub fn example1_majorant(diam: f64) -> impl Fn(f64) -> f64 {
    move |r| 1.0 - 2.0 * diam * (r + r * r - r * r * r) / ((1.0 - r) * (1.0 - r))
}

pub fn example1_cover(r: f64, diam: f64) -> f64 {
    r * (1.0 - diam * (r + 2.0 * r * r) / (1.0 - r))
}

pub fn landau_example1(diam: f64) -> Result<LandauResult> {
    if !(diam > 0.0 && diam.is_finite()) {
        return Err(Error::InvalidDiameter(diam));
    }
    let root = least_positive_root_detailed(example1_majorant(diam), ROOT_TOL)?;
    let rho = example1_cover(root.r, diam);
    finish(root, 1.0, rho)
}
