use super::polygon::clip_labeled;
use super::{ConvexPolygon, Point2, Segment2};
use crate::error::{Error, Result};
use crate::Scalar;

/// Centers closer than this are treated as coincident.
pub const MIN_CENTER_SEPARATION: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct VoronoiCell<T> {
    pub center: Point2<T>,
    pub polygon: ConvexPolygon<T>,
}

/// Edge shared by two cells; it lies on the bisector of their centers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InteriorEdge<T> {
    pub cells: (usize, usize),
    pub segment: Segment2<T>,
}

/// Voronoi tessellation of the unit square.
#[derive(Clone, Debug, PartialEq)]
pub struct VoronoiDiagram<T> {
    pub cells: Vec<VoronoiCell<T>>,
    pub interior_edges: Vec<InteriorEdge<T>>,
}

impl<T: Scalar> VoronoiDiagram<T> {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn total_area(&self) -> T {
        self.cells.iter().map(|c| c.polygon.area()).sum()
    }

    pub fn interior_edge_length(&self) -> T {
        self.interior_edges.iter().map(|e| e.segment.length()).sum()
    }

    /// Index of the center nearest to `p` (lowest index on ties).
    pub fn nearest_center(&self, p: Point2<T>) -> usize {
        let mut best = 0;
        let mut best_d = T::infinity();
        for (i, c) in self.cells.iter().enumerate() {
            let d = c.center.distance_sq(p);
            if d < best_d {
                best = i;
                best_d = d;
            }
        }
        best
    }

    /// First cell whose polygon contains `p` within `tol`.
    pub fn locate(&self, p: Point2<T>, tol: T) -> Option<usize> {
        self.cells.iter().position(|c| c.polygon.contains(p, tol))
    }
}

/// Bounded Voronoi diagram by clipping the unit square against every bisector.
///
/// O(n²); each cell keeps track of which neighbour produced each of its edges so
/// shared edges come out directly.
pub fn voronoi_partition<T: Scalar>(centers: &[Point2<T>]) -> Result<VoronoiDiagram<T>> {
    if centers.is_empty() {
        return Err(crate::error::invalid("centers", "at least one center is required"));
    }
    for (i, c) in centers.iter().enumerate() {
        if !c.is_finite() || !c.in_unit_square(T::zero()) {
            return Err(Error::CenterOutside(i));
        }
    }
    let sep = T::lit(MIN_CENTER_SEPARATION);
    for i in 0..centers.len() {
        for j in i + 1..centers.len() {
            if centers[i].distance(centers[j]) < sep {
                return Err(Error::CoincidentCenters(i, j));
            }
        }
    }

    let eps = T::lit(T::GEOM_EPS);
    let half = T::lit(0.5);
    let square: Vec<(Point2<T>, Option<usize>)> =
        ConvexPolygon::<T>::unit_square().vertices().iter().map(|&v| (v, None)).collect();

    let mut cells = Vec::with_capacity(centers.len());
    let mut interior_edges = Vec::new();
    for (i, &ci) in centers.iter().enumerate() {
        let mut others: Vec<usize> = (0..centers.len()).filter(|&j| j != i).collect();
        others.sort_by(|&a, &b| {
            ci.distance_sq(centers[a]).as_f64().total_cmp(&ci.distance_sq(centers[b]).as_f64()).then(a.cmp(&b))
        });

        let mut poly = square.clone();
        for j in others {
            let cj = centers[j];
            let d = cj - ci;
            let normal = d * (T::one() / d.norm());
            let offset = normal.dot((ci + cj) * half);
            poly = clip_labeled(&poly, normal, offset, Some(j), eps);
        }

        let n = poly.len();
        for k in 0..n {
            if let (a, Some(j)) = poly[k] {
                let b = poly[(k + 1) % n].0;
                if j > i && a.distance(b) > eps {
                    interior_edges.push(InteriorEdge { cells: (i, j), segment: Segment2::new(a, b) });
                }
            }
        }
        let polygon = ConvexPolygon::from_vertices(poly.into_iter().map(|(v, _)| v).collect())?;
        cells.push(VoronoiCell { center: ci, polygon });
    }
    Ok(VoronoiDiagram { cells, interior_edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pt(x: f64, y: f64) -> Point2<f64> {
        Point2::new(x, y)
    }

    #[test]
    fn single_center_is_square() {
        let d = voronoi_partition(&[pt(0.3, 0.7)]).unwrap();
        assert_eq!(d.cells[0].polygon, ConvexPolygon::unit_square());
        assert!(d.interior_edges.is_empty());
    }

    #[test]
    fn two_centers_split_at_half() {
        let d = voronoi_partition(&[pt(0.25, 0.5), pt(0.75, 0.5)]).unwrap();
        for c in &d.cells {
            assert_abs_diff_eq!(c.polygon.area(), 0.5, epsilon = 1e-15);
        }
        let (lo, hi) = d.cells[0].polygon.bounding_box();
        assert_eq!((lo, hi), (pt(0.0, 0.0), pt(0.5, 1.0)));
        assert_eq!(d.interior_edges.len(), 1);
        let e = d.interior_edges[0];
        assert_eq!(e.cells, (0, 1));
        assert_abs_diff_eq!(e.segment.length(), 1.0, epsilon = 1e-15);
        assert_eq!(e.segment.a.x, 0.5);
    }

    #[test]
    fn four_quadrants() {
        let centers = [pt(0.25, 0.25), pt(0.75, 0.25), pt(0.25, 0.75), pt(0.75, 0.75)];
        let d = voronoi_partition(&centers).unwrap();
        for (c, center) in d.cells.iter().zip(&centers) {
            assert_eq!(c.polygon.area(), 0.25);
            let (lo, hi) = c.polygon.bounding_box();
            assert_eq!(lo, pt(center.x - 0.25, center.y - 0.25));
            assert_eq!(hi, pt(center.x + 0.25, center.y + 0.25));
        }
        assert_eq!(d.interior_edges.len(), 4);
        assert_abs_diff_eq!(d.interior_edge_length(), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn rejects_bad_centers() {
        assert!(matches!(voronoi_partition(&[pt(0.2, 0.2), pt(0.2, 0.2)]), Err(Error::CoincidentCenters(0, 1))));
        assert!(matches!(voronoi_partition(&[pt(0.2, 0.2), pt(1.2, 0.2)]), Err(Error::CenterOutside(1))));
        assert!(voronoi_partition::<f64>(&[]).is_err());
    }

    #[test]
    fn edges_are_on_bisectors() {
        let centers = [pt(0.1, 0.2), pt(0.8, 0.3), pt(0.4, 0.9), pt(0.5, 0.5), pt(0.9, 0.95)];
        let d = voronoi_partition(&centers).unwrap();
        assert_abs_diff_eq!(d.total_area(), 1.0, epsilon = 1e-12);
        for e in &d.interior_edges {
            let m = e.segment.midpoint();
            let (i, j) = e.cells;
            assert_abs_diff_eq!(m.distance(centers[i]), m.distance(centers[j]), epsilon = 1e-12);
        }
        for c in &d.cells {
            assert!(c.polygon.inset_distance(c.center) > 0.0);
        }
    }

    #[test]
    fn single_precision() {
        let d = voronoi_partition(&[Point2::new(0.25f32, 0.5), Point2::new(0.75, 0.5)]).unwrap();
        assert!((d.total_area() - 1.0).abs() < 1e-6);
    }
}
