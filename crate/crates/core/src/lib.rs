//! Random hyperfractal cities.
//!
//! * [`measure`]: closed-form dimensions of self-similar and hyperfractal measures.
//! * [`manhattan`]: the recursive Manhattan grid, its measure and an exact sampler.
//! * [`estimator`]: dimension estimation from street length and traffic data.
//! * [`geometry`]: Gaussian sprawl of district centers and bounded Voronoi cells.
//! * [`city`]: multi-district cities built over a Voronoi tessellation.
//! * [`io`]: CSV, GeoJSON, SVG and JSON config formats.
//! * [`figures`]: fixed-seed preset renders.
//!
//! The numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix it to `f64`, which is what the file formats and CLI use.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod city;
pub mod error;
pub mod estimator;
pub mod figures;
pub mod geometry;
pub mod io;
pub mod manhattan;
pub mod measure;
pub mod rng;
mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Point = geometry::Point2<f64>;
pub type Segment = geometry::Segment2<f64>;
pub type Covariance = geometry::CovarianceSpec<f64>;
pub type Polygon = geometry::ConvexPolygon<f64>;
pub type Voronoi = geometry::VoronoiDiagram<f64>;
pub type Network = manhattan::ManhattanNetwork<f64>;
pub type GridSegment = manhattan::GridSegment<f64>;
pub type SamplePoint = manhattan::SamplePoint<f64>;
pub type Dimension = measure::DimensionValue<f64>;
pub type Street = estimator::StreetRecord<f64>;
pub type RankCurve = estimator::RankCurve<f64>;
pub type PowerLawFit = estimator::PowerLawFit<f64>;
pub type CityConfig = city::CityConfig<f64>;
pub type City = city::FractalCity<f64>;
pub type CityPoint = city::CityPoint<f64>;
