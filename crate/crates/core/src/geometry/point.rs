use std::ops::{Add, Mul, Sub};

use crate::Scalar;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Self) -> T {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Self) -> T {
        (self - other).norm()
    }

    pub fn distance_sq(self, other: Self) -> T {
        let d = self - other;
        d.dot(d)
    }

    pub fn lerp(self, other: Self, t: T) -> Self {
        self + (other - self) * t
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn in_unit_square(self, tol: T) -> bool {
        let (lo, hi) = (-tol, T::one() + tol);
        self.x >= lo && self.x <= hi && self.y >= lo && self.y <= hi
    }
}

impl<T: Scalar> Add for Point2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl<T: Scalar> Sub for Point2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl<T: Scalar> Mul<T> for Point2<T> {
    type Output = Self;
    fn mul(self, k: T) -> Self {
        Self::new(self.x * k, self.y * k)
    }
}

/// Closed line segment between two points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment2<T> {
    pub a: Point2<T>,
    pub b: Point2<T>,
}

impl<T: Scalar> Segment2<T> {
    pub fn new(a: Point2<T>, b: Point2<T>) -> Self {
        Self { a, b }
    }

    pub fn length(&self) -> T {
        self.a.distance(self.b)
    }

    pub fn midpoint(&self) -> Point2<T> {
        self.a.lerp(self.b, T::lit(0.5))
    }

    pub fn at(&self, t: T) -> Point2<T> {
        self.a.lerp(self.b, t)
    }

    /// Euclidean distance from `p` to the closest point of the segment.
    pub fn distance_to(&self, p: Point2<T>) -> T {
        let d = self.b - self.a;
        let len2 = d.dot(d);
        if len2 == T::zero() {
            return p.distance(self.a);
        }
        let t = ((p - self.a).dot(d) / len2).max(T::zero()).min(T::one());
        p.distance(self.at(t))
    }
}
