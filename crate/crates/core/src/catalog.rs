//! Concrete mappings and parametric families.
//!
//! | name       | parameters                                         |
//! |------------|----------------------------------------------------|
//! | `identity` |                                                    |
//! | `linear`   | `alpha`, `beta` (complex): `αz + β·conj(z)`        |
//! | `monomial` | `p`, `j`, `c`, `conjugate`: `c|z|^{2(p-1)} z^j`    |
//! | `f2`       | `z(1 + |z|² + |z|⁴)`                               |
//! | `f0`       | `J`: harmonic map onto the square, truncated       |
//! | `f1`       | `J`: `(√2π/4)(f0 + i|z|² f0)`                      |
//! | `form37`   | see [`Form37Params`]                               |
//!
//! Complex parameters are given as a number or an `[re, im]` pair.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::map::{CoefficientTable, PolyharmonicMap};
use crate::{Error, Result, C64};

/// Truncation used for `f0`/`f1` when `J` is not given: ten terms of each
/// sub-series.
pub const DEFAULT_FOURGON_J: usize = 41;

pub const BUILTIN_NAMES: [&str; 7] = ["identity", "linear", "monomial", "f2", "f0", "f1", "form37"];

pub fn builtin(name: &str, params: &Value) -> Result<PolyharmonicMap> {
    let lower = name.to_ascii_lowercase();
    let p = Params { name: &lower, value: params };
    match lower.as_str() {
        "identity" => Ok(identity()),
        "linear" => Ok(linear(p.complex("alpha", C64::new(1.0, 0.0))?, p.complex("beta", C64::new(0.0, 0.0))?)),
        "monomial" => monomial(
            p.count("p", 1)?,
            p.count("j", 1)?,
            p.complex("c", C64::new(1.0, 0.0))?,
            p.flag("conjugate", false)?,
        ),
        "f2" => Ok(f2()),
        "f0" => Ok(f0(p.count("J", DEFAULT_FOURGON_J)?)),
        "f1" => Ok(f1(p.count("J", DEFAULT_FOURGON_J)?)),
        "form37" => {
            let params: Form37Params = serde_json::from_value(params.clone()).map_err(|e| Error::MalformedParams {
                name: lower.clone(),
                reason: e.to_string(),
            })?;
            form37(&params)
        }
        _ => Err(Error::UnknownName(name.to_string())),
    }
}

struct Params<'a> {
    name: &'a str,
    value: &'a Value,
}

impl Params<'_> {
    fn bad(&self, reason: String) -> Error {
        Error::MalformedParams {
            name: self.name.to_string(),
            reason,
        }
    }

    fn get(&self, key: &str) -> Option<&Value> {
        self.value.get(key)
    }

    fn complex(&self, key: &str, default: C64) -> Result<C64> {
        let Some(v) = self.get(key) else { return Ok(default) };
        let z = match v {
            Value::Number(x) => x.as_f64().map(|re| C64::new(re, 0.0)),
            Value::Array(xs) if xs.len() == 2 => match (xs[0].as_f64(), xs[1].as_f64()) {
                (Some(re), Some(im)) => Some(C64::new(re, im)),
                _ => None,
            },
            _ => None,
        };
        match z {
            Some(z) if z.re.is_finite() && z.im.is_finite() => Ok(z),
            _ => Err(self.bad(format!("`{key}` must be a number or an [re, im] pair"))),
        }
    }

    fn count(&self, key: &str, default: usize) -> Result<usize> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => match v.as_u64() {
                Some(k) if k >= 1 => Ok(k as usize),
                _ => Err(self.bad(format!("`{key}` must be a positive integer"))),
            },
        }
    }

    fn flag(&self, key: &str, default: bool) -> Result<bool> {
        match self.get(key) {
            None => Ok(default),
            Some(Value::Bool(b)) => Ok(*b),
            Some(_) => Err(self.bad(format!("`{key}` must be a boolean"))),
        }
    }
}

fn one_term(p: usize, j: usize, n: usize, a: C64, b: C64) -> CoefficientTable {
    let mut t = CoefficientTable::zeros(p, j);
    t.set_a(n, j, a);
    t.set_b(n, j, b);
    t
}

pub fn identity() -> PolyharmonicMap {
    PolyharmonicMap::new(one_term(1, 1, 1, C64::new(1.0, 0.0), C64::new(0.0, 0.0)), "identity").unwrap()
}

/// `αz + β·conj(z)`.
pub fn linear(alpha: C64, beta: C64) -> PolyharmonicMap {
    PolyharmonicMap::new(one_term(1, 1, 1, alpha, beta.conj()), "linear").unwrap()
}

/// `c·|z|^{2(p-1)} z^j`, or `c·|z|^{2(p-1)} conj(z)^j` when `conjugate`.
pub fn monomial(p: usize, j: usize, c: C64, conjugate: bool) -> Result<PolyharmonicMap> {
    if !(c.re.is_finite() && c.im.is_finite()) {
        return Err(Error::MalformedParams {
            name: "monomial".into(),
            reason: "non-finite coefficient".into(),
        });
    }
    let zero = C64::new(0.0, 0.0);
    let table = if conjugate {
        one_term(p, j, p, zero, c.conj())
    } else {
        one_term(p, j, p, c, zero)
    };
    PolyharmonicMap::new(table, "monomial")
}

/// `z(1 + |z|² + |z|⁴)`.
pub fn f2() -> PolyharmonicMap {
    let mut t = CoefficientTable::zeros(3, 1);
    for n in 1..=3 {
        t.set_a(n, 1, C64::new(1.0, 0.0));
    }
    PolyharmonicMap::new(t, "f2").unwrap()
}

/// `p = 1` table of the harmonic map of the disk onto the square with
/// vertices at the 4th roots of unity, truncated to exponents `≤ J`.
///
/// `h_0` carries `4/(π(4k+1))·sin(π(4k+1)/4)` at exponent `4k+1` and `g_0`
/// carries `4/(π(4k−1))·sin(π(4k−1)/4)` at exponent `4k−1`. The sine factors
/// are exactly `±√2/2` and are set by the parity of `k`.
pub fn fourgon_coefficients(j_max: usize) -> CoefficientTable {
    let mut t = CoefficientTable::zeros(1, j_max.max(1));
    for k in 0.. {
        let e = 4 * k + 1;
        if e > j_max {
            break;
        }
        let s = if k % 2 == 0 { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 };
        t.set_a(1, e, C64::new(4.0 / (PI * e as f64) * s, 0.0));
    }
    for k in 1.. {
        let e = 4 * k - 1;
        if e > j_max {
            break;
        }
        let s = if k % 2 == 1 { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 };
        t.set_b(1, e, C64::new(4.0 / (PI * e as f64) * s, 0.0));
    }
    t
}

/// Upper bound on the omitted tail of the square map at radius `r < 1`:
/// `Σ_{e > J} (2√2/π)/e · r^e` over the exponents of both sub-series.
///
/// The coefficients decay only like `1/e`, so the bound diverges as `r → 1`.
pub fn fourgon_tail_bound(j_max: usize, r: f64) -> f64 {
    assert!((0.0..1.0).contains(&r), "tail bound needs r < 1");
    let c = 2.0 * SQRT_2 / PI;
    let mut total = 0.0;
    let mut e = j_max + 1;
    loop {
        if e % 2 == 1 {
            let term = c / e as f64 * r.powi(e as i32);
            total += term;
            if term < 1e-18 * total.max(1e-300) {
                break;
            }
        }
        e += 1;
    }
    total
}

fn with_tail_note(map: PolyharmonicMap, j_max: usize, scale: f64) -> PolyharmonicMap {
    let r = 0.999;
    let bound = scale * fourgon_tail_bound(j_max, r);
    map.with_note("truncation_J", j_max.to_string())
        .with_note("truncation_tail_bound_r0.999", format!("{bound:.6e}"))
}

pub fn f0(j_max: usize) -> PolyharmonicMap {
    let map = PolyharmonicMap::new(fourgon_coefficients(j_max), "f0").unwrap();
    with_tail_note(map, j_max, 1.0)
}

/// `(√2π/4)(f0 + i|z|² f0)`: `a_{2,j} = i·a_{1,j}` and, since the
/// antiholomorphic coefficient enters conjugated, `b_{2,j} = −i·b_{1,j}`.
/// Treated as a `p = 2` map.
pub fn f1(j_max: usize) -> PolyharmonicMap {
    let base = fourgon_coefficients(j_max);
    let scale = SQRT_2 * PI / 4.0;
    let i = C64::new(0.0, 1.0);
    let mut t = CoefficientTable::zeros(2, base.j_max());
    for (_, j, a, b) in base.entries() {
        let (a, b) = (a * scale, b * scale);
        t.set_a(1, j, a);
        t.set_b(1, j, b);
        t.set_a(2, j, i * a);
        t.set_b(2, j, -i * b);
    }
    let map = PolyharmonicMap::new(t, "f1").unwrap();
    // |1 + i r²| ≤ √2 on the disk.
    with_tail_note(map, j_max, scale * SQRT_2)
}

/// Parameters of the constant-area-ratio family
///
/// ```text
/// η e^{iθ₁} z + ξ e^{iφ₁} z̄ + Σ_{k≥2} ζ_{1,k}(e^{iθ_k} z^k + e^{iφ_k} z̄^k)
///   + |z|² Σ_{k≥1} ζ_{2,k}(e^{i(θ_k ± π/2)} z^k + e^{i(φ_k ± π/2)} z̄^k)
/// ```
///
/// `zeta1[i]` is `ζ_{1,i+2}`; `zeta2`, `theta`, `phi` and `signs` are
/// indexed from `k = 1`. Missing entries are zero (signs default to `+`).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Form37Params {
    pub eta: f64,
    pub xi: f64,
    pub zeta1: Vec<f64>,
    pub zeta2: Vec<f64>,
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    pub signs: Vec<i8>,
    /// Highest power `k`; inferred from the vector lengths when absent.
    pub k_max: Option<usize>,
}

impl Form37Params {
    fn validate(&self) -> Result<usize> {
        let bad = |reason: &str| Error::MalformedParams {
            name: "form37".into(),
            reason: reason.into(),
        };
        let all = [self.eta, self.xi]
            .into_iter()
            .chain(self.zeta1.iter().copied())
            .chain(self.zeta2.iter().copied());
        let mut moduli_ok = true;
        for x in all {
            moduli_ok &= x.is_finite() && x >= 0.0;
        }
        if !moduli_ok {
            return Err(bad("moduli must be finite and nonnegative"));
        }
        if self.eta < self.xi {
            return Err(bad("eta must be at least xi"));
        }
        if self.theta.iter().chain(&self.phi).any(|x| !x.is_finite()) {
            return Err(bad("angles must be finite"));
        }
        if self.signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(bad("signs must be +1 or -1"));
        }
        let inferred = [self.zeta1.len() + 1, self.zeta2.len(), self.theta.len(), self.phi.len(), 1]
            .into_iter()
            .max()
            .unwrap();
        Ok(self.k_max.unwrap_or(inferred).max(1))
    }
}

pub fn form37(params: &Form37Params) -> Result<PolyharmonicMap> {
    let k_max = params.validate()?;
    let at = |v: &[f64], k: usize| v.get(k - 1).copied().unwrap_or(0.0);
    let mut t = CoefficientTable::zeros(2, k_max);
    for k in 1..=k_max {
        let theta = at(&params.theta, k);
        let phi = at(&params.phi, k);
        let sign = params.signs.get(k - 1).copied().unwrap_or(1) as f64;
        let (za, zb) = if k == 1 {
            (params.eta, params.xi)
        } else {
            let z1 = params.zeta1.get(k - 2).copied().unwrap_or(0.0);
            (z1, z1)
        };
        // The z̄^k coefficient is conj(b), hence the conjugations.
        t.set_a(1, k, C64::from_polar(za, theta));
        t.set_b(1, k, C64::from_polar(zb, phi).conj());
        let z2 = at(&params.zeta2, k);
        let turn = sign * PI / 2.0;
        t.set_a(2, k, C64::from_polar(z2, theta + turn));
        t.set_b(2, k, C64::from_polar(z2, phi + turn).conj());
    }
    PolyharmonicMap::new(t, "form37")
}
