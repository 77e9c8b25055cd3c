//! Acceptance suite. Runs without the libtest harness and prints one line
//! per criterion; exits non-zero if any criterion fails.

mod common;

use std::f64::consts::{FRAC_PI_2, LN_2, PI, SQRT_2};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use polyharm::catalog::{self, Form37Params};
use polyharm::certificates::{
    area_schwarz, arg_condition, diameter_coefficient_bounds, length_coefficient_bounds, max_modulus_on_circle,
    three_circles_area, AreaShape, ArgConditionKind,
};
use polyharm::geometry::{area_quadrature, area_series, diameter_estimate, sup_length, uniform_grid};
use polyharm::landau::{landau_from_diameter, landau_from_length};
use polyharm::metrics::{contraction_check, harmonic_lipschitz_check, mobius_j_distortion, psi_profile, PairSampler};
use polyharm::render::{render, RenderOptions};
use polyharm::{dilatation, quasiregularity_constant, MappingSpec, Verdict, C64};
use rand::Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Grid of `n` radii evenly spaced strictly inside (0, 1).
fn interior_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|k| k as f64 / (n + 1) as f64).collect()
}

fn within(elapsed: Duration, limit: f64) -> Outcome {
    let secs = elapsed.as_secs_f64();
    if secs < limit {
        Ok(format!("{secs:.2} s < {limit} s"))
    } else {
        Err(format!("took {secs:.2} s, limit {limit} s"))
    }
}

fn derivative_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = common::rng(1);
    let h = 1e-5;
    let i = c(0.0, 1.0);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let map = common::random_map(&mut rng, 3, 6);
        for _ in 0..20 {
            let z = common::point_in_disk(&mut rng, 0.9);
            let fx = (map.eval(z + h) - map.eval(z - h)) / (2.0 * h);
            let fy = (map.eval(z + i * h) - map.eval(z - i * h)) / (2.0 * h);
            let (fz, fzb) = map.wirtinger(z);
            worst = worst
                .max((fz - (fx - i * fy) / 2.0).norm() / (1.0 + fz.norm()))
                .max((fzb - (fx + i * fy) / 2.0).norm() / (1.0 + fzb.norm()));
        }
    }
    ensure!(worst <= 1e-6, "max relative error {worst:e}");
    let time = within(start.elapsed(), 10.0)?;
    Ok(format!("max rel. error {worst:.2e}; {time}"))
}

fn area_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = common::rng(2);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let map = common::random_map(&mut rng, 3, 5);
        for r in [0.3, 0.6, 0.9] {
            worst = worst.max((area_series(&map, r) - area_quadrature(&map, r).map_err(|e| e.to_string())?).abs());
        }
    }
    ensure!(worst <= 1e-8, "max abs. difference {worst:e}");
    let time = within(start.elapsed(), 60.0)?;
    Ok(format!("max abs. difference {worst:.2e}; {time}"))
}

fn example2_pipeline() -> Outcome {
    let f2 = catalog::f2();
    let k = quasiregularity_constant(&f2, 1.0).map_err(|e| e.to_string())?;
    ensure!((k - 3.0).abs() <= 1e-6, "K = {k}");
    let l1 = sup_length(&f2).map_err(|e| e.to_string())?;
    ensure!((l1 - 6.0 * PI).abs() <= 1e-8, "l1 = {l1}");
    let report = length_coefficient_bounds(&f2, k, l1).map_err(|e| e.to_string())?;
    ensure!(report.passed(), "length bounds verdict {}", report.verdict);
    for (n, m) in (1..=3).zip(&report.margins) {
        let expected = 9.0 / n as f64 - 1.0;
        ensure!((m.slack - expected).abs() <= 1e-8, "margin n={n}: {} vs {expected}", m.slack);
    }
    let quartic = |r: f64| 27.0 * r.powi(4) + 27.0 * r * r + 10.0 * r - 1.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if quartic(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let res = landau_from_length(3, 1.0, 3.0, 6.0 * PI).map_err(|e| e.to_string())?;
    ensure!((res.r_univ - lo).abs() <= 1e-10, "r2 = {} vs quartic root {lo}", res.r_univ);
    ensure!(res.rho_cover > 0.0, "rho2 = {}", res.rho_cover);
    Ok(format!("K = {k:.9}, l1 - 6π = {:.1e}, r2 = {:.10}, rho2 = {:.6}", l1 - 6.0 * PI, res.r_univ, res.rho_cover))
}

fn landau_closed_forms() -> Outcome {
    let s = SQRT_2;
    let r0 = ((2.0 + 2.0 * s) - (12.0 + 8.0 * s - 4.0 - 4.0 * s).sqrt()) / (2.0 * (1.0 + s));
    let res = landau_from_diameter(1, 1.0, 2.0).map_err(|e| e.to_string())?;
    ensure!((res.r_univ - r0).abs() <= 1e-10, "r0 = {} vs {r0}", res.r_univ);
    let res2 = landau_from_length(1, 1.0, 1.0, 2.0 * PI).map_err(|e| e.to_string())?;
    ensure!((res2.r_univ - 0.5).abs() <= 1e-12, "r2 = {}", res2.r_univ);
    ensure!((res2.rho_cover - (1.0 - LN_2)).abs() <= 1e-12, "rho2 = {}", res2.rho_cover);
    Ok(format!("r0 = {:.10}, rho0 = {:.7}, r2 = {}, rho2 = {:.10}", res.r_univ, res.rho_cover, res2.r_univ, res2.rho_cover))
}

fn sharpness() -> Outcome {
    let mut worst = 0.0f64;
    for (n, cc) in [(1, c(1.0, 0.0)), (2, c(0.7, -0.4)), (3, c(-0.2, 1.5)), (5, c(2.0, 0.0))] {
        for conj in [false, true] {
            let map = catalog::monomial(1, n, cc, conj).map_err(|e| e.to_string())?;
            let diam = diameter_estimate(&map, 1.0).map_err(|e| e.to_string())?;
            let report = diameter_coefficient_bounds(&map, diam).map_err(|e| e.to_string())?;
            ensure!(report.passed(), "c z^{n}: verdict {}", report.verdict);
            let slack = report.min_slack().unwrap();
            ensure!(slack.abs() <= 1e-9, "diameter bound on c z^{n} (conj {conj}): slack {slack:e}");
            worst = worst.max(slack.abs());
        }
    }
    let grid = uniform_grid(0.3, 1.0 - 1e-3, 50);
    for (name, map) in [("sqrt2 z + conj z", catalog::linear(c(SQRT_2, 0.0), c(1.0, 0.0))), ("identity", catalog::identity())] {
        let report = three_circles_area(&map, 0.3, 0.09, &grid).map_err(|e| e.to_string())?;
        ensure!(report.passed(), "{name}: three circles verdict {}", report.verdict);
        let slack = report.max_abs_slack().unwrap();
        ensure!(slack <= 1e-9, "{name}: three circles slack {slack:e}");
        worst = worst.max(slack);
    }
    let id = catalog::identity();
    let k = quasiregularity_constant(&id, 1.0).map_err(|e| e.to_string())?;
    let l1 = sup_length(&id).map_err(|e| e.to_string())?;
    let report = length_coefficient_bounds(&id, k, l1).map_err(|e| e.to_string())?;
    let slack = report.max_abs_slack().unwrap();
    ensure!(report.passed() && slack <= 1e-9, "identity length bound: {} slack {slack:e}", report.verdict);
    worst = worst.max(slack);
    Ok(format!("max |slack| {worst:.2e}"))
}

fn three_circles() -> Outcome {
    let r1 = 0.3;
    let grid = uniform_grid(r1, 1.0 - 1e-3, 50);
    let mut worst = 0.0f64;
    for k in 1..=5 {
        let map = catalog::monomial(1, k, c(1.0 / (k as f64).sqrt(), 0.0), false).map_err(|e| e.to_string())?;
        let m = r1.powi(2 * k as i32);
        let report = three_circles_area(&map, r1, m, &grid).map_err(|e| e.to_string())?;
        ensure!(report.passed(), "k = {k}: verdict {}", report.verdict);
        let slack = report.max_abs_slack().unwrap();
        ensure!(slack <= 1e-12, "k = {k}: slack {slack:e}");
        worst = worst.max(slack);
    }
    Ok(format!("k = 1..5, max |slack| {worst:.2e}"))
}

fn area_schwarz_criterion() -> Outcome {
    let mut rng = common::rng(7);
    let grid = interior_grid(100);
    for i in 0..200 {
        let map = common::area_cond_map(&mut rng);
        ensure!(arg_condition(&map, ArgConditionKind::AreaCond).passed(), "map {i}: generator broke area-cond");
        let out = area_schwarz(&map, &grid).map_err(|e| e.to_string())?;
        ensure!(out.report.verdict == Verdict::Pass, "map {i}: {} {:?}", out.report.verdict, out.report.witnesses);
    }
    let form = catalog::form37(&Form37Params { eta: 1.0, zeta2: vec![1.0], ..Default::default() }).map_err(|e| e.to_string())?;
    ensure!(form.eval(c(0.3, 0.4)) == c(0.3, 0.4) + c(0.0, 0.25) * c(0.6, 0.0), "form37 instance is not z + i|z|²(z + conj z)");
    let out = area_schwarz(&form, &grid).map_err(|e| e.to_string())?;
    ensure!(out.shape == AreaShape::Constant, "form37 classified {:?}", out.shape);
    let dev = out.phi.values.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
    ensure!(dev <= 1e-10, "form37 phi deviates from 1 by {dev:e}");
    let sq = catalog::monomial(1, 2, c(1.0, 0.0), false).map_err(|e| e.to_string())?;
    let out = area_schwarz(&sq, &grid).map_err(|e| e.to_string())?;
    ensure!(out.shape == AreaShape::StrictlyIncreasing, "z² classified {:?}", out.shape);
    let dev = out.phi.grid.iter().zip(&out.phi.values).map(|(r, v)| (v - 2.0 * r * r).abs()).fold(0.0, f64::max);
    ensure!(dev <= 1e-12, "z²: phi deviates from 2r² by {dev:e}");
    Ok("200 maps pass; form37 constant; z² strictly increasing".into())
}

fn corollary() -> Outcome {
    let mut rng = common::rng(8);
    let grid = interior_grid(100);
    let mut worst = f64::NEG_INFINITY;
    let mut tested = 0;
    while tested < 50 {
        let map = common::area_cond_map(&mut rng);
        let total = area_series(&map, 1.0);
        if total <= 1e-6 {
            continue;
        }
        let map = common::scaled(&map, 1.0 / total.sqrt());
        for &r in &grid {
            let excess = area_series(&map, r) - r * r;
            ensure!(excess <= 1e-9, "S({r}) exceeds r² by {excess:e}");
            worst = worst.max(excess);
        }
        tested += 1;
    }
    Ok(format!("50 maps, max S(r) - r² = {worst:.2e}"))
}

fn metrics_criterion() -> Outcome {
    let mut rng = common::rng(9);
    let sampler = PairSampler::default();
    let mut worst_contraction = 0.0f64;
    for _ in 0..100 {
        let map = common::random_map(&mut rng, 3, 4);
        let m = rng.gen_range(0.5..2.0);
        let map = common::scaled(&map, m / map.table().coefficient_sum());
        let r = contraction_check(&map, m, &sampler).map_err(|e| e.to_string())?;
        ensure!(r.sup_ratio <= 1.0 + 1e-9, "contraction ratio {}", r.sup_ratio);
        worst_contraction = worst_contraction.max(r.sup_ratio);
    }
    let cube = catalog::monomial(2, 1, c(1.0, 0.0), false).map_err(|e| e.to_string())?;
    let sharp = contraction_check(&cube, 1.0, &sampler).map_err(|e| e.to_string())?;
    ensure!(sharp.sup_ratio >= 0.999, "|z|²z reaches only {}", sharp.sup_ratio);

    for _ in 0..100 {
        let f = common::random_harmonic(&mut rng, 4);
        let (_, sup) = max_modulus_on_circle(&f, 1.0, 4096);
        let f = common::scaled(&f, 0.999 / sup);
        let r = harmonic_lipschitz_check(&f, &sampler).map_err(|e| e.to_string())?;
        ensure!(r.sup_ratio <= r.bound, "harmonic ratio {} above {}", r.sup_ratio, r.bound);
        ensure!(r.report.passed(), "harmonic check {} {:?}", r.report.verdict, r.report.witnesses);
    }

    let psi = psi_profile(&uniform_grid(0.0, 1.0 - 1.0 / 1024.0, 1024)).map_err(|e| e.to_string())?;
    ensure!(psi.values.windows(2).all(|w| w[0] < w[1]), "psi not strictly increasing");
    ensure!(psi.values.iter().all(|&v| (1.0..FRAC_PI_2).contains(&v)), "psi outside [1, π/2)");

    for _ in 0..20 {
        let a = common::point_in_disk(&mut rng, 0.95);
        let theta = rng.gen_range(0.0..2.0 * PI);
        let r = mobius_j_distortion(a, theta, &sampler).map_err(|e| e.to_string())?;
        ensure!(r.report.passed(), "Möbius a = {a}: ratio {}", r.sup_ratio);
    }
    Ok(format!("contraction max {worst_contraction:.6}, |z|²z reaches {:.6}", sharp.sup_ratio))
}

fn fourgon() -> Outcome {
    let f1 = catalog::f1(catalog::DEFAULT_FOURGON_J);
    let lambda0 = dilatation(&f1, c(0.0, 0.0)).lambda_small;
    ensure!((lambda0 - 1.0).abs() <= 1e-12, "lambda(0) = {lambda0}");
    let cond = arg_condition(&f1, ArgConditionKind::DiamCond);
    ensure!(cond.passed(), "diam-cond {}", cond.verdict);
    let slack = cond.min_slack().unwrap();
    ensure!(slack.abs() <= 1e-12, "diam-cond min slack {slack:e}");
    let fig = render(&f1, &RenderOptions::default()).map_err(|e| e.to_string())?;
    let again = render(&f1, &RenderOptions::default()).map_err(|e| e.to_string())?;
    ensure!(fig.svg == again.svg, "render output differs between runs");
    let (x0, y0, x1, y1) = fig.boundary_bbox();
    let eps = 1e-6;
    ensure!(
        fig.points().all(|p| p.re >= x0 - eps && p.re <= x1 + eps && p.im >= y0 - eps && p.im <= y1 + eps),
        "image points outside the boundary bounding box"
    );
    Ok(format!("lambda(0) - 1 = {:.1e}, diam-cond slack {slack:e}, {} bytes of SVG", lambda0 - 1.0, fig.svg.len()))
}

fn cli_contract() -> Outcome {
    let mut rng = common::rng(11);
    for _ in 0..100 {
        let map = common::random_map(&mut rng, 3, 6);
        let back = MappingSpec::parse(&MappingSpec::from_map(&map).to_json()).and_then(|s| s.build()).map_err(|e| e.to_string())?;
        ensure!(back.table() == map.table(), "spec round trip changed the table");
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let id = common::write_spec(dir.path(), "identity.map", r#"{"p": 1, "J": 1, "terms": [{"n": 1, "j": 1, "a": [1, 0]}]}"#);
    let f2 = common::write_spec(dir.path(), "f2.map", &MappingSpec::from_map(&catalog::f2()).to_json());
    let opposed = common::write_spec(
        dir.path(),
        "opposed.map",
        r#"{"p": 2, "J": 1, "terms": [{"n": 1, "j": 1, "a": [1, 0]}, {"n": 2, "j": 1, "a": [-1, 0]}]}"#,
    );
    let run = |args: &[&str]| common::polyharm(args, dir.path());
    let first = run(&["verify", "--map", &f2, "--seed", "3", "--out", "a.json"]);
    let second = run(&["verify", "--map", &f2, "--seed", "3", "--out", "b.json"]);
    ensure!(first.status.code() == Some(0) && second.status.code() == Some(0), "f2 verify did not pass");
    let a = std::fs::read(dir.path().join("a.json")).map_err(|e| e.to_string())?;
    let b = std::fs::read(dir.path().join("b.json")).map_err(|e| e.to_string())?;
    ensure!(a == b, "verify output differs between runs");
    let fail = run(&["verify", "--map", &id, "--l1", "1.0"]).status.code();
    ensure!(fail == Some(1), "understated l1: exit {fail:?}");
    let hnm = run(&["verify", "--map", &opposed]).status.code();
    ensure!(hnm == Some(2), "hypotheses not met: exit {hnm:?}");
    Ok("round trip exact; verify byte-identical; exit codes 0/1/2".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("derivative oracle", derivative_oracle),
        ("area oracle", area_oracle),
        ("example 2 pipeline", example2_pipeline),
        ("closed-form Landau radii", landau_closed_forms),
        ("sharpness at zero slack", sharpness),
        ("three circles log-linearity", three_circles),
        ("area Schwarz", area_schwarz_criterion),
        ("corollary S(r) <= r^2", corollary),
        ("distance-ratio metric bounds", metrics_criterion),
        ("four-gon example", fourgon),
        ("CLI contract", cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.2} s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.2} s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
