//! Planar geometry: district centers, sprawl covariance, convex cells and the
//! bounded Voronoi tessellation of the unit square.

mod covariance;
mod point;
mod polygon;
mod voronoi;

pub use covariance::{eigen_decompose, sample_centers, CovarianceSpec, Eigen, GaussianSprawl};
pub use point::{Point2, Segment2};
pub use polygon::{clip_segment, ClippedSegment, ConvexPolygon};
pub use voronoi::{voronoi_partition, InteriorEdge, VoronoiCell, VoronoiDiagram, MIN_CENTER_SEPARATION};
