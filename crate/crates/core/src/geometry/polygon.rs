use super::{Point2, Segment2};
use crate::error::{invalid, Result};
use crate::Scalar;

/// Convex polygon with counter-clockwise vertices and no repeated or collinear
/// consecutive vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexPolygon<T> {
    vertices: Vec<Point2<T>>,
}

impl<T: Scalar> ConvexPolygon<T> {
    pub fn unit_square() -> Self {
        Self::rectangle(Point2::new(T::zero(), T::zero()), Point2::new(T::one(), T::one()))
    }

    /// Axis-aligned rectangle from its lower-left and upper-right corners.
    pub fn rectangle(lo: Point2<T>, hi: Point2<T>) -> Self {
        Self { vertices: vec![lo, Point2::new(hi.x, lo.y), hi, Point2::new(lo.x, hi.y)] }
    }

    /// Validates orientation and convexity after dropping duplicate and collinear vertices.
    pub fn from_vertices(vertices: Vec<Point2<T>>) -> Result<Self> {
        let eps = T::lit(T::GEOM_EPS);
        let labeled: Vec<_> = vertices.into_iter().map(|v| (v, ())).collect();
        let vertices: Vec<_> = cleanup(labeled, eps).into_iter().map(|(v, _)| v).collect();
        if vertices.len() < 3 {
            return Err(invalid("polygon", "fewer than 3 distinct vertices"));
        }
        let poly = Self { vertices };
        if poly.signed_area() <= T::zero() {
            return Err(invalid("polygon", "vertices are not counter-clockwise"));
        }
        let n = poly.vertices.len();
        for i in 0..n {
            let (a, b, c) = (poly.vertices[i], poly.vertices[(i + 1) % n], poly.vertices[(i + 2) % n]);
            if (b - a).cross(c - b) < -eps {
                return Err(invalid("polygon", "not convex"));
            }
        }
        Ok(poly)
    }

    pub fn vertices(&self) -> &[Point2<T>] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment2<T>> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| Segment2::new(self.vertices[i], self.vertices[(i + 1) % n]))
    }

    fn signed_area(&self) -> T {
        let half = T::lit(0.5);
        self.edges().map(|e| e.a.cross(e.b)).sum::<T>() * half
    }

    pub fn area(&self) -> T {
        self.signed_area().abs()
    }

    pub fn perimeter(&self) -> T {
        self.edges().map(|e| e.length()).sum()
    }

    /// Lower-left and upper-right corners of the bounding box.
    pub fn bounding_box(&self) -> (Point2<T>, Point2<T>) {
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for v in &self.vertices[1..] {
            lo = Point2::new(lo.x.min(v.x), lo.y.min(v.y));
            hi = Point2::new(hi.x.max(v.x), hi.y.max(v.y));
        }
        (lo, hi)
    }

    /// Point-in-polygon with the boundary thickened by `tol`.
    pub fn contains(&self, p: Point2<T>, tol: T) -> bool {
        self.edges().all(|e| {
            let d = e.b - e.a;
            d.cross(p - e.a) >= -tol * d.norm()
        })
    }

    /// Smallest distance from `p` to an edge line, negative outside.
    pub fn inset_distance(&self, p: Point2<T>) -> T {
        self.edges()
            .map(|e| {
                let d = e.b - e.a;
                d.cross(p - e.a) / d.norm()
            })
            .fold(T::infinity(), T::min)
    }

    /// Keeps the part with `normal · x ≤ offset`; `None` when nothing remains.
    pub fn clip_half_plane(&self, normal: Point2<T>, offset: T) -> Option<Self> {
        let labeled: Vec<_> = self.vertices.iter().map(|&v| (v, ())).collect();
        let clipped = clip_labeled(&labeled, normal, offset, (), T::lit(T::GEOM_EPS));
        let vertices: Vec<_> = clipped.into_iter().map(|(v, _)| v).collect();
        (vertices.len() >= 3).then_some(Self { vertices })
    }
}

/// Sutherland-Hodgman step on a polygon whose entry `i` carries the label of
/// edge `v_i → v_{i+1}`. The edge created along the clip line gets `new_label`.
pub(crate) fn clip_labeled<T: Scalar, L: Copy + PartialEq>(
    poly: &[(Point2<T>, L)],
    normal: Point2<T>,
    offset: T,
    new_label: L,
    eps: T,
) -> Vec<(Point2<T>, L)> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    let side = |p: Point2<T>| normal.dot(p) - offset;
    for i in 0..n {
        let (a, label) = poly[i];
        let (b, _) = poly[(i + 1) % n];
        let (sa, sb) = (side(a), side(b));
        let (a_in, b_in) = (sa <= eps, sb <= eps);
        if a_in {
            out.push((a, label));
            if !b_in {
                let t = sa / (sa - sb);
                out.push((a.lerp(b, t), new_label));
            }
        } else if b_in {
            let t = sa / (sa - sb);
            out.push((a.lerp(b, t), label));
        }
    }
    cleanup(out, eps)
}

/// Drops zero-length edges and merges collinear runs carrying the same label.
pub(crate) fn cleanup<T: Scalar, L: Copy + PartialEq>(mut poly: Vec<(Point2<T>, L)>, eps: T) -> Vec<(Point2<T>, L)> {
    loop {
        let n = poly.len();
        if n < 3 {
            return poly;
        }
        let mut removed = false;
        for i in 0..n {
            let (a, la) = poly[i];
            let (b, _) = poly[(i + 1) % n];
            if a.distance(b) <= eps {
                poly.remove(i);
                removed = true;
                break;
            }
            let (prev, lp) = poly[(i + n - 1) % n];
            let d0 = a - prev;
            let d1 = b - a;
            let straight = d0.cross(d1).abs() <= eps * d0.norm() * d1.norm().max(T::one()) && d0.dot(d1) > T::zero();
            if straight && lp == la {
                poly.remove(i);
                removed = true;
                break;
            }
        }
        if !removed {
            return poly;
        }
    }
}

/// Part of a segment inside a convex polygon, with its parameter range on the
/// original segment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClippedSegment<T> {
    pub segment: Segment2<T>,
    pub t0: T,
    pub t1: T,
}

impl<T: Scalar> ClippedSegment<T> {
    /// Retained fraction of the original length.
    pub fn fraction(&self) -> T {
        self.t1 - self.t0
    }
}

/// Cyrus-Beck clipping of a segment against a convex polygon.
///
/// Segments running along an edge within `GEOM_EPS` count as inside.
pub fn clip_segment<T: Scalar>(seg: &Segment2<T>, poly: &ConvexPolygon<T>) -> Option<ClippedSegment<T>> {
    let eps = T::lit(T::GEOM_EPS);
    let dir = seg.b - seg.a;
    if dir.norm() == T::zero() {
        return poly.contains(seg.a, eps).then_some(ClippedSegment { segment: *seg, t0: T::zero(), t1: T::one() });
    }
    let (mut t0, mut t1) = (T::zero(), T::one());
    for e in poly.edges() {
        let d = e.b - e.a;
        let len = d.norm();
        // outward unit normal of a counter-clockwise edge
        let outward = Point2::new(d.y / len, -d.x / len);
        let start = outward.dot(seg.a - e.a);
        let rate = outward.dot(dir);
        if rate == T::zero() {
            if start > eps {
                return None;
            }
            continue;
        }
        let t = -start / rate;
        if rate > T::zero() {
            t1 = t1.min(t);
        } else {
            t0 = t0.max(t);
        }
        if t0 >= t1 {
            return None;
        }
    }
    let segment = if t0 == T::zero() && t1 == T::one() { *seg } else { Segment2::new(seg.at(t0), seg.at(t1)) };
    Some(ClippedSegment { segment, t0, t1 })
}
