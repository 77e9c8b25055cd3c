//! SVG figures of the image of a polar grid.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::map::PolyharmonicMap;
use crate::{Error, Result, C64};

/// Radius standing in for the closed unit disk.
pub const OUTER_RADIUS: f64 = 1.0 - 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RenderOptions {
    pub rings: usize,
    pub rays: usize,
    pub samples_per_curve: usize,
    /// Width and height of the SVG canvas in user units.
    pub size: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self { rings: 8, rays: 16, samples_per_curve: 512, size: 512.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    /// Images of the circles `|z| = k/rings · OUTER_RADIUS`, `k = 1..rings`.
    pub rings: Vec<Vec<C64>>,
    /// Images of the segments at angles `2πm/rays`.
    pub rays: Vec<Vec<C64>>,
    /// Image of `|z| = OUTER_RADIUS`.
    pub boundary: Vec<C64>,
    pub svg: String,
}

impl Figure {
    /// `(min_x, min_y, max_x, max_y)` of the boundary curve.
    pub fn boundary_bbox(&self) -> (f64, f64, f64, f64) {
        bbox(self.boundary.iter())
    }

    pub fn points(&self) -> impl Iterator<Item = &C64> {
        self.rings.iter().chain(&self.rays).flatten()
    }
}

fn bbox<'a>(points: impl Iterator<Item = &'a C64>) -> (f64, f64, f64, f64) {
    points.fold((f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY), |b, p| {
        (b.0.min(p.re), b.1.min(p.im), b.2.max(p.re), b.3.max(p.im))
    })
}

fn polyline(svg: &mut String, class: &str, pts: &[C64], to_canvas: impl Fn(C64) -> (f64, f64)) {
    let _ = write!(svg, "<polyline class=\"{class}\" points=\"");
    for (i, &p) in pts.iter().enumerate() {
        let (x, y) = to_canvas(p);
        let sep = if i == 0 { "" } else { " " };
        let _ = write!(svg, "{sep}{x:.6},{y:.6}");
    }
    svg.push_str("\"/>\n");
}

pub fn render(map: &PolyharmonicMap, options: &RenderOptions) -> Result<Figure> {
    if options.rings == 0 || options.rays == 0 || options.samples_per_curve < 2 {
        return Err(Error::InvalidParams("rings and rays must be at least 1, samples at least 2".into()));
    }
    let n = options.samples_per_curve;
    let circle = |r: f64| -> Vec<C64> {
        (0..=n).map(|k| map.eval(C64::from_polar(r, 2.0 * PI * (k % n) as f64 / n as f64))).collect()
    };
    let rings: Vec<Vec<C64>> = (1..=options.rings)
        .map(|k| circle(k as f64 / options.rings as f64 * OUTER_RADIUS))
        .collect();
    let rays: Vec<Vec<C64>> = (0..options.rays)
        .map(|m| {
            let angle = 2.0 * PI * m as f64 / options.rays as f64;
            (0..=n).map(|k| map.eval(C64::from_polar(OUTER_RADIUS * k as f64 / n as f64, angle))).collect()
        })
        .collect();
    let boundary = circle(OUTER_RADIUS);

    let all = bbox(rings.iter().chain(&rays).chain(std::iter::once(&boundary)).flatten());
    let span = (all.2 - all.0).max(all.3 - all.1).max(1e-12);
    let pad = 0.05 * options.size;
    let scale = (options.size - 2.0 * pad) / span;
    let cx = 0.5 * (all.0 + all.2);
    let cy = 0.5 * (all.1 + all.3);
    let half = 0.5 * options.size;
    let to_canvas = |p: C64| (half + (p.re - cx) * scale, half - (p.im - cy) * scale);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{s:.6}\" height=\"{s:.6}\" viewBox=\"0 0 {s:.6} {s:.6}\">",
        s = options.size
    );
    let _ = writeln!(svg, "<title>{}</title>", escape(map.label()));
    svg.push_str("<style>polyline{fill:none;stroke:#000;stroke-width:0.5}.boundary{stroke-width:1.5}</style>\n");
    for ring in &rings {
        polyline(&mut svg, "ring", ring, to_canvas);
    }
    for ray in &rays {
        polyline(&mut svg, "ray", ray, to_canvas);
    }
    polyline(&mut svg, "boundary", &boundary, to_canvas);
    svg.push_str("</svg>\n");
    Ok(Figure { rings, rays, boundary, svg })
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
