//! Truncated Almansi-form polyharmonic mappings and their pointwise
//! differential quantities.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::mapfile::MappingSpec;
use crate::optimize::golden_max;
use crate::quadrature::pairwise_sum_c;
use crate::{Error, Result, C64};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Dense `p × J` table of coefficient pairs `(a_{n,j}, b_{n,j})`.
///
/// Represents
/// `F(z) = Σ_n |z|^{2(n-1)} Σ_j (a_{n,j} z^j + conj(b_{n,j}) conj(z)^j)`,
/// i.e. `h_n` carries the `a` coefficients and `g_n` the `b` coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTable {
    p: usize,
    j_max: usize,
    a: Vec<C64>,
    b: Vec<C64>,
}

impl CoefficientTable {
    /// All-zero table. Panics if `p` or `j_max` is zero.
    pub fn zeros(p: usize, j_max: usize) -> Self {
        assert!(p >= 1 && j_max >= 1, "table dimensions must be positive");
        Self {
            p,
            j_max,
            a: vec![ZERO; p * j_max],
            b: vec![ZERO; p * j_max],
        }
    }

    /// Almansi depth `p`.
    pub fn p(&self) -> usize {
        self.p
    }

    /// Power-series truncation `J`.
    pub fn j_max(&self) -> usize {
        self.j_max
    }

    fn index(&self, n: usize, j: usize) -> usize {
        assert!(
            (1..=self.p).contains(&n) && (1..=self.j_max).contains(&j),
            "coefficient index ({n}, {j}) outside 1..={} x 1..={}",
            self.p,
            self.j_max
        );
        (n - 1) * self.j_max + (j - 1)
    }

    pub fn a(&self, n: usize, j: usize) -> C64 {
        self.a[self.index(n, j)]
    }

    pub fn b(&self, n: usize, j: usize) -> C64 {
        self.b[self.index(n, j)]
    }

    pub fn set_a(&mut self, n: usize, j: usize, value: C64) {
        let i = self.index(n, j);
        self.a[i] = value;
    }

    pub fn set_b(&mut self, n: usize, j: usize, value: C64) {
        let i = self.index(n, j);
        self.b[i] = value;
    }

    /// `(n, j, a_{n,j}, b_{n,j})` in lexicographic `(n, j)` order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, C64, C64)> + '_ {
        (0..self.a.len()).map(move |i| (i / self.j_max + 1, i % self.j_max + 1, self.a[i], self.b[i]))
    }

    /// Largest coefficient modulus.
    pub fn max_modulus(&self) -> f64 {
        self.a
            .iter()
            .chain(&self.b)
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// `Σ_{n,j} (|a_{n,j}| + |b_{n,j}|)`.
    pub fn coefficient_sum(&self) -> f64 {
        self.entries().map(|(_, _, a, b)| a.norm() + b.norm()).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.a.iter().chain(&self.b).all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Largest `j` with a non-zero coefficient at any depth (0 for the zero map).
    pub fn degree(&self) -> usize {
        self.entries()
            .filter(|(_, _, a, b)| *a != ZERO || *b != ZERO)
            .map(|(_, j, _, _)| j)
            .max()
            .unwrap_or(0)
    }

    /// True when every `b` vanishes and `p = 1`.
    pub fn is_analytic(&self) -> bool {
        self.p == 1 && self.b.iter().all(|b| *b == ZERO)
    }

    /// Table of `c·F`: `a' = c·a` and `b' = conj(c)·b`.
    pub fn scaled(&self, c: C64) -> Self {
        Self {
            a: self.a.iter().map(|a| c * a).collect(),
            b: self.b.iter().map(|b| c.conj() * b).collect(),
            ..self.clone()
        }
    }

    /// Table with the roles of `a` and `b` exchanged; represents `conj(F)`.
    pub fn swapped(&self) -> Self {
        Self {
            a: self.b.clone(),
            b: self.a.clone(),
            ..self.clone()
        }
    }
}

/// Validated, immutable mapping with a human-readable label and free-form
/// metadata notes (e.g. truncation error estimates).
#[derive(Debug, Clone, PartialEq)]
pub struct PolyharmonicMap {
    table: CoefficientTable,
    label: String,
    notes: Vec<(String, String)>,
}

impl PolyharmonicMap {
    pub fn new(table: CoefficientTable, label: impl Into<String>) -> Result<Self> {
        if !table.is_finite() {
            return Err(Error::MalformedSpec("non-finite coefficient".into()));
        }
        Ok(Self {
            table,
            label: label.into(),
            notes: Vec::new(),
        })
    }

    pub fn with_note(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.notes.push((key.into(), value.into()));
        self
    }

    pub fn table(&self) -> &CoefficientTable {
        &self.table
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn notes(&self) -> &[(String, String)] {
        &self.notes
    }

    pub fn p(&self) -> usize {
        self.table.p
    }

    pub fn j_max(&self) -> usize {
        self.table.j_max
    }

    pub fn eval(&self, z: C64) -> C64 {
        evaluate(self, z)
    }

    /// See [`difference`].
    pub fn difference(&self, z: C64, w: C64) -> C64 {
        difference(self, z, w)
    }

    pub fn wirtinger(&self, z: C64) -> (C64, C64) {
        wirtinger(self, z)
    }

    /// Threshold below which `λ_F` counts as zero.
    pub fn lambda_tol(&self) -> f64 {
        1e-12 * (1.0 + self.table.max_modulus())
    }
}

/// Builds a validated map from a file-level spec (explicit table or built-in).
pub fn build_map(spec: &MappingSpec) -> Result<PolyharmonicMap> {
    spec.build()
}

/// `z^k` for `k = 0..=max` by repeated multiplication.
fn powers(z: C64, max: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(max + 1);
    let mut acc = C64::new(1.0, 0.0);
    out.push(acc);
    for _ in 0..max {
        acc *= z;
        out.push(acc);
    }
    out
}

fn real_powers(x: f64, max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(max + 1);
    let mut acc = 1.0;
    out.push(acc);
    for _ in 0..max {
        acc *= x;
        out.push(acc);
    }
    out
}

/// Value of the truncated series at `z`, summed pairwise over the `(n, j)`
/// terms in lexicographic order.
pub fn evaluate(map: &PolyharmonicMap, z: C64) -> C64 {
    let t = &map.table;
    let zp = powers(z, t.j_max);
    let zbp = powers(z.conj(), t.j_max);
    let r2p = real_powers(z.norm_sqr(), t.p - 1);
    let terms: Vec<C64> = t
        .entries()
        .map(|(n, j, a, b)| (a * zp[j] + b.conj() * zbp[j]) * r2p[n - 1])
        .collect();
    pairwise_sum_c(&terms)
}

/// `F(z) − F(w)` without cancellation for nearby points.
///
/// Uses `z^j − w^j = z(z^{j−1} − w^{j−1}) + w^{j−1}(z − w)`, the same
/// recursion for `|z|^{2m} − |w|^{2m}` seeded by
/// `|z|² − |w|² = Re((z − w)·conj(z + w))`, and
/// `s^m z^j − t^m w^j = s^m(z^j − w^j) + w^j(s^m − t^m)`.
pub fn difference(map: &PolyharmonicMap, z: C64, w: C64) -> C64 {
    let t = &map.table;
    let delta = z - w;
    let wp = powers(w, t.j_max);
    let mut dz = vec![C64::new(0.0, 0.0); t.j_max + 1];
    let mut zj = C64::new(1.0, 0.0);
    for j in 1..=t.j_max {
        dz[j] = z * dz[j - 1] + wp[j - 1] * delta;
        zj *= z;
    }
    let (s, r) = (z.norm_sqr(), w.norm_sqr());
    let sp = real_powers(s, t.p - 1);
    let rp = real_powers(r, t.p - 1);
    let mut ds = vec![0.0; t.p];
    let gap = (delta * (z + w).conj()).re;
    for m in 1..t.p {
        ds[m] = s * ds[m - 1] + rp[m - 1] * gap;
    }
    let terms: Vec<C64> = t
        .entries()
        .map(|(n, j, a, b)| {
            let d = dz[j] * sp[n - 1] + wp[j] * ds[n - 1];
            a * d + b.conj() * d.conj()
        })
        .collect();
    pairwise_sum_c(&terms)
}

/// Wirtinger derivatives `(F_z, F_z̄)` from the term-wise closed forms
///
/// ```text
/// ∂_z    : (n+j-1) a z^{n+j-2} z̄^{n-1} + (n-1) b̄ z^{n-2} z̄^{n+j-1}
/// ∂_z̄    : (n-1) a z^{n+j-1} z̄^{n-2} + (n+j-1) b̄ z^{n-1} z̄^{n+j-2}
/// ```
///
/// Terms with the factor `n-1 = 0` are skipped, so no negative power is
/// ever formed; at `z = 0` every monomial with a positive exponent is 0.
pub fn wirtinger(map: &PolyharmonicMap, z: C64) -> (C64, C64) {
    let t = &map.table;
    let top = t.p + t.j_max;
    let zp = powers(z, top);
    let zbp = powers(z.conj(), top);
    let mut dz = Vec::with_capacity(t.a.len());
    let mut dzb = Vec::with_capacity(t.a.len());
    for (n, j, a, b) in t.entries() {
        let bc = b.conj();
        let lead = (n + j - 1) as f64;
        let mut tz = a * zp[n + j - 2] * zbp[n - 1] * lead;
        let mut tzb = bc * zp[n - 1] * zbp[n + j - 2] * lead;
        if n >= 2 {
            let m = (n - 1) as f64;
            tz += bc * zp[n - 2] * zbp[n + j - 1] * m;
            tzb += a * zp[n + j - 1] * zbp[n - 2] * m;
        }
        dz.push(tz);
        dzb.push(tzb);
    }
    (pairwise_sum_c(&dz), pairwise_sum_c(&dzb))
}

/// `J_F = |F_z|² − |F_z̄|²`.
pub fn jacobian(map: &PolyharmonicMap, z: C64) -> f64 {
    let (fz, fzb) = wirtinger(map, z);
    fz.norm_sqr() - fzb.norm_sqr()
}

/// `(λ_F, Λ_F) = (||F_z| − |F_z̄||, |F_z| + |F_z̄|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DilatationPair {
    pub lambda_small: f64,
    pub lambda_big: f64,
}

impl DilatationPair {
    pub fn ratio(&self) -> f64 {
        self.lambda_big / self.lambda_small
    }
}

pub fn dilatation(map: &PolyharmonicMap, z: C64) -> DilatationPair {
    let (fz, fzb) = wirtinger(map, z);
    let (u, v) = (fz.norm(), fzb.norm());
    DilatationPair {
        lambda_small: (u - v).abs(),
        lambda_big: u + v,
    }
}

/// Grid and refinement settings for suprema over a disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupSearch {
    pub radii: usize,
    pub angles: usize,
    pub tol: f64,
}

impl Default for SupSearch {
    fn default() -> Self {
        Self {
            radii: 256,
            angles: 512,
            tol: 1e-10,
        }
    }
}

/// Sampled supremum and where it was found.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupEstimate {
    pub value: f64,
    pub at: C64,
}

/// Lower-bound estimate of `sup Λ_F/λ_F` on `|z| ≤ r_max`.
pub fn quasiregularity_constant(map: &PolyharmonicMap, r_max: f64) -> Result<f64> {
    quasiregularity_search(map, r_max, &SupSearch::default()).map(|s| s.value)
}

/// Polar-grid search of `Λ_F/λ_F` on `|z| ≤ r_max` followed by alternating
/// golden-section refinement in `r` and `θ` around the best sample.
///
/// Fails with [`Error::DegenerateMap`] if `λ_F` drops below
/// [`PolyharmonicMap::lambda_tol`] at any sample.
pub fn quasiregularity_search(
    map: &PolyharmonicMap,
    r_max: f64,
    search: &SupSearch,
) -> Result<SupEstimate> {
    if !(r_max > 0.0 && r_max <= 1.0) {
        return Err(Error::InvalidParams(format!("r_max = {r_max} not in (0, 1]")));
    }
    let tol = map.lambda_tol();
    let ratio_at = |z: C64| -> Result<f64> {
        let d = dilatation(map, z);
        if d.lambda_small < tol {
            return Err(Error::DegenerateMap {
                lambda: d.lambda_small,
                tol,
                re: z.re,
                im: z.im,
            });
        }
        Ok(d.ratio())
    };

    let dr = r_max / search.radii as f64;
    let dt = 2.0 * PI / search.angles as f64;
    let mut best = SupEstimate {
        value: ratio_at(C64::new(0.0, 0.0))?,
        at: C64::new(0.0, 0.0),
    };
    let mut best_rt = (0.0, 0.0);
    for k in 1..=search.radii {
        let r = if k == search.radii { r_max } else { dr * k as f64 };
        for m in 0..search.angles {
            let theta = dt * m as f64;
            let z = C64::from_polar(r, theta);
            let v = ratio_at(z)?;
            if v > best.value {
                best = SupEstimate { value: v, at: z };
                best_rt = (r, theta);
            }
        }
    }

    // Refinement only ever raises the estimate; samples it visits are not
    // re-checked for degeneracy beyond the ratio itself.
    let (mut r, mut theta) = best_rt;
    for _ in 0..2 {
        let lo = (r - dr).max(0.0);
        let hi = (r + dr).min(r_max);
        let (r_new, v) = golden_max(
            |s| dilatation(map, C64::from_polar(s, theta)).ratio(),
            lo,
            hi,
            search.tol,
        );
        if v > best.value && v.is_finite() {
            r = r_new;
            best = SupEstimate { value: v, at: C64::from_polar(r, theta) };
        }
        let (t_new, v) = golden_max(
            |t| dilatation(map, C64::from_polar(r, t)).ratio(),
            theta - dt,
            theta + dt,
            search.tol,
        );
        if v > best.value && v.is_finite() {
            theta = t_new;
            best = SupEstimate { value: v, at: C64::from_polar(r, theta) };
        }
    }
    Ok(best)
}
