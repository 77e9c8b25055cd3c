//! Numerical toolkit for planar polyharmonic mappings in truncated Almansi form
//!
//! ```text
//! F(z) = Σ_{n=1..p} |z|^{2(n-1)} Σ_{j=1..J} (a_{n,j} z^j + conj(b_{n,j}) conj(z)^j)
//! ```
//!
//! A mapping is a dense `p × J` table of coefficient pairs. On top of exact
//! pointwise evaluation and Wirtinger derivatives the crate provides:
//!
//! * [`geometry`]: image-curve length, area (closed-form series and an
//!   independent tensor quadrature), diameter lower bounds, area ratio.
//! * [`certificates`]: coefficient-bound, three-circles and area-Schwarz
//!   checks that report numeric margins instead of booleans.
//! * [`landau`]: univalence and covering radii from decreasing majorants.
//! * [`metrics`]: the distance-ratio metric and sampled Lipschitz checks.
//! * [`catalog`]: the concrete mappings and parametric families.
//! * [`cli`]: the `polyharm` command-line front end, report and figure output.

pub mod catalog;
pub mod certificates;
pub mod cli;
mod error;
pub mod geometry;
pub mod landau;
pub mod map;
pub mod mapfile;
pub mod metrics;
pub mod optimize;
pub mod quadrature;
pub mod render;
pub mod report;

pub use error::{Error, Result};
pub use map::{
    build_map, dilatation, evaluate, jacobian, quasiregularity_constant, wirtinger,
    CoefficientTable, DilatationPair, PolyharmonicMap,
};
pub use mapfile::MappingSpec;
pub use report::{CheckReport, Margin, Verdict};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
