//! Shared generators and helpers for the integration suites.
#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_4, PI};
use std::path::Path;
use std::process::{Command, Output};

use polyharm::{CoefficientTable, PolyharmonicMap, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit_box(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Table with `p ≤ p_max`, `J ≤ j_max`, entries uniform in the unit box.
pub fn random_map(rng: &mut ChaCha8Rng, p_max: usize, j_max: usize) -> PolyharmonicMap {
    let p = rng.gen_range(1..=p_max);
    let j = rng.gen_range(1..=j_max);
    let mut t = CoefficientTable::zeros(p, j);
    for n in 1..=p {
        for k in 1..=j {
            t.set_a(n, k, unit_box(rng));
            t.set_b(n, k, unit_box(rng));
        }
    }
    PolyharmonicMap::new(t, "random").unwrap()
}

/// Random map satisfying the area condition, built constructively: for each
/// `j` the `a_{n,j}` share a sector of width π/2, the `b_{n,j}` sit at
/// phases spaced 2π/3 apart, and `|b_{n,j}| ≤ |a_{n,j}|`.
pub fn area_cond_map(rng: &mut ChaCha8Rng) -> PolyharmonicMap {
    let p = rng.gen_range(1..=3);
    let j_max = rng.gen_range(1..=5);
    let mut t = CoefficientTable::zeros(p, j_max);
    for j in 1..=j_max {
        let base_a = rng.gen_range(0.0..2.0 * PI);
        let base_b = rng.gen_range(0.0..2.0 * PI);
        for n in 1..=p {
            let ma = rng.gen_range(0.0..1.0);
            let a = C64::from_polar(ma, base_a + rng.gen_range(-FRAC_PI_4..FRAC_PI_4));
            let mb = ma * rng.gen_range(0.0..1.0);
            let b = C64::from_polar(mb, base_b + 2.0 * PI / 3.0 * (n - 1) as f64);
            t.set_a(n, j, a);
            t.set_b(n, j, b);
        }
    }
    PolyharmonicMap::new(t, "area-cond").unwrap()
}

/// Harmonic polynomial (`p = 1`) of degree at most `j_max`.
pub fn random_harmonic(rng: &mut ChaCha8Rng, j_max: usize) -> PolyharmonicMap {
    let j = rng.gen_range(1..=j_max);
    let mut t = CoefficientTable::zeros(1, j);
    for k in 1..=j {
        t.set_a(1, k, unit_box(rng));
        t.set_b(1, k, unit_box(rng));
    }
    PolyharmonicMap::new(t, "harmonic").unwrap()
}

pub fn scaled(map: &PolyharmonicMap, c: f64) -> PolyharmonicMap {
    PolyharmonicMap::new(map.table().scaled(C64::new(c, 0.0)), map.label()).unwrap()
}

/// Point with `|z| ≤ r_max`, uniform in area.
pub fn point_in_disk(rng: &mut ChaCha8Rng, r_max: f64) -> C64 {
    C64::from_polar(r_max * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..2.0 * PI))
}

pub fn polyharm(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyharm"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

pub fn write_spec(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}
