//! The recursive Manhattan grid and its hyperfractal measure.
//!
//! Level-`l` lines sit at the odd multiples of `2^-(l+1)` in both directions and
//! are cut at the multiples of `2^-l`, giving `2·4^l` segments of depth `l` and
//! length `2^-l`. A depth-`k` segment carries mass `(p/2)(q/4)^k` with
//! `q = 1 - p`, so depth `k` as a whole carries `p·q^k`.
//!
//! Segments are never materialised: the network stores one mass per depth and
//! derives any segment from its `(depth, index)` pair with integer arithmetic.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::geometry::{Point2, Segment2};
use crate::{rng, Scalar};

/// Deepest level a network may be built to (about 45 million segments).
pub const MAX_DEPTH: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    /// Constant `x`, spanning `y`.
    Vertical,
    /// Constant `y`, spanning `x`.
    Horizontal,
}

impl Axis {
    pub fn swapped(self) -> Self {
        match self {
            Axis::Vertical => Axis::Horizontal,
            Axis::Horizontal => Axis::Vertical,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Axis::Vertical => "vertical",
            Axis::Horizontal => "horizontal",
        }
    }
}

/// How the mass lost by truncating the grid at depth `K` is handled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum TruncationMode {
    /// Divide every mass by `1 - q^(K+1)`; the network is a probability measure.
    #[default]
    Renormalized,
    /// Keep the untruncated per-segment masses; the sampler folds the residual
    /// `q^(K+1)` into depth `K`.
    Raw,
}

impl std::str::FromStr for TruncationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "renormalized" => Ok(Self::Renormalized),
            "raw" => Ok(Self::Raw),
            other => Err(invalid("mode", format!("`{other}` is neither `renormalized` nor `raw`"))),
        }
    }
}

/// Exact dyadic rational `num / 2^exp`, kept in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: u32,
    exp: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, exp: 0 };
    pub const ONE: Dyadic = Dyadic { num: 1, exp: 0 };

    pub fn new(mut num: u32, mut exp: u32) -> Self {
        if num == 0 {
            return Self::ZERO;
        }
        while exp > 0 && num.is_multiple_of(2) {
            num /= 2;
            exp -= 1;
        }
        Self { num, exp }
    }

    pub fn numerator(self) -> u32 {
        self.num
    }

    pub fn exponent(self) -> u32 {
        self.exp
    }

    /// `1 - self`, for values in `[0, 1]`.
    pub fn complement(self) -> Self {
        Self::new((1u32 << self.exp) - self.num, self.exp)
    }

    pub fn to_scalar<T: Scalar>(self) -> T {
        T::from_u32(self.num).unwrap() / T::lit(2.0).powi(self.exp as i32)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp.max(other.exp);
        let a = u64::from(self.num) << (e - self.exp);
        let b = u64::from(other.num) << (e - other.exp);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.num, self.exp)
    }
}

/// Grid symmetries that leave the segment multiset unchanged.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    /// `(x, y) -> (y, x)`.
    Transpose,
    /// `(x, y) -> (1 - x, y)`.
    ReflectX,
    /// `(x, y) -> (x, 1 - y)`.
    ReflectY,
}

/// One street segment of the grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSegment<T> {
    pub axis: Axis,
    pub depth: u32,
    /// Constant coordinate of the carrying line, an odd multiple of `2^-(level+1)`.
    pub line_offset: Dyadic,
    pub span_start: Dyadic,
    pub span_end: Dyadic,
    pub mass: T,
}

impl<T: Scalar> GridSegment<T> {
    /// Level of the carrying line.
    pub fn level(&self) -> u32 {
        self.line_offset.exponent() - 1
    }

    pub fn length(&self) -> T {
        T::lit(2.0).powi(-(self.depth as i32))
    }

    pub fn linear_density(&self) -> T {
        self.mass / self.length()
    }

    pub fn point_at(&self, t: T) -> Point2<T> {
        let a: T = self.span_start.to_scalar();
        let b: T = self.span_end.to_scalar();
        let along = a + (b - a) * t;
        let offset = self.line_offset.to_scalar();
        match self.axis {
            Axis::Vertical => Point2::new(offset, along),
            Axis::Horizontal => Point2::new(along, offset),
        }
    }

    pub fn segment(&self) -> Segment2<T> {
        Segment2::new(self.point_at(T::zero()), self.point_at(T::one()))
    }

    pub fn transformed(&self, sym: Symmetry) -> Self {
        let mut out = *self;
        match (sym, self.axis) {
            (Symmetry::Transpose, _) => out.axis = self.axis.swapped(),
            (Symmetry::ReflectX, Axis::Vertical) | (Symmetry::ReflectY, Axis::Horizontal) => {
                out.line_offset = self.line_offset.complement();
            }
            (Symmetry::ReflectX, Axis::Horizontal) | (Symmetry::ReflectY, Axis::Vertical) => {
                out.span_start = self.span_end.complement();
                out.span_end = self.span_start.complement();
            }
        }
        out
    }
}

/// A sampled point together with the segment depth that produced it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplePoint<T> {
    pub x: T,
    pub y: T,
    pub depth: u32,
    pub axis: Axis,
}

impl<T: Scalar> SamplePoint<T> {
    pub fn location(&self) -> Point2<T> {
        Point2::new(self.x, self.y)
    }

    /// Whether the fixed coordinate is an odd multiple of `2^-(depth+1)`.
    pub fn on_carrying_line(&self, tol: T) -> bool {
        let c = match self.axis {
            Axis::Vertical => self.x,
            Axis::Horizontal => self.y,
        };
        let scaled = c * T::lit(2.0).powi(self.depth as i32 + 1);
        let b = scaled.round();
        (scaled - b).abs() <= tol * T::lit(2.0).powi(self.depth as i32 + 1) && b.to_u64().is_some_and(|b| b % 2 == 1)
    }
}

/// Per-depth summary of a network.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DepthRow<T> {
    pub depth: u32,
    pub count: u64,
    pub length: T,
    pub mass: T,
    pub linear_density: T,
}

/// The Manhattan grid truncated at depth `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct ManhattanNetwork<T> {
    p: T,
    max_depth: u32,
    mode: TruncationMode,
    masses: Vec<T>,
}

/// Number of depth-`k` segments, `2·4^k`.
pub fn segment_count(depth: u32) -> u64 {
    2 << (2 * depth)
}

impl<T: Scalar> ManhattanNetwork<T> {
    pub fn build(p: T, max_depth: u32, mode: TruncationMode) -> Result<Self> {
        if !(p > T::zero() && p < T::one()) {
            return Err(invalid("p", format!("{p} is not in (0, 1)")));
        }
        if max_depth > MAX_DEPTH {
            return Err(Error::DepthBudget { depth: max_depth, max: MAX_DEPTH });
        }
        let q = T::one() - p;
        let half = T::lit(0.5);
        let scale = match mode {
            TruncationMode::Raw => T::one(),
            TruncationMode::Renormalized => T::one() / (T::one() - q.powi(max_depth as i32 + 1)),
        };
        let masses = (0..=max_depth).map(|k| p * half * (q / T::lit(4.0)).powi(k as i32) * scale).collect();
        Ok(Self { p, max_depth, mode, masses })
    }

    pub fn p(&self) -> T {
        self.p
    }

    pub fn q(&self) -> T {
        T::one() - self.p
    }

    pub fn max_depth(&self) -> u32 {
        self.max_depth
    }

    pub fn mode(&self) -> TruncationMode {
        self.mode
    }

    /// Stored mass of one depth-`k` segment.
    pub fn segment_mass(&self, depth: u32) -> T {
        self.masses[depth as usize]
    }

    pub fn segment_count(&self) -> u64 {
        (0..=self.max_depth).map(segment_count).sum()
    }

    /// Sum of the stored segment masses.
    pub fn total_mass(&self) -> T {
        (0..=self.max_depth).map(|k| T::from_u64(segment_count(k)).unwrap() * self.masses[k as usize]).sum()
    }

    /// `1 - q^(K+1)`, the mass of the untruncated measure on depths `0..=K`.
    pub fn raw_total_mass(&self) -> T {
        T::one() - self.q().powi(self.max_depth as i32 + 1)
    }

    /// Segment `index` (in `0..2·4^depth`) of the given depth.
    ///
    /// Indices enumerate vertical lines then horizontal lines, by increasing
    /// offset, then pieces by increasing span.
    pub fn segment(&self, depth: u32, index: u64) -> GridSegment<T> {
        debug_assert!(depth <= self.max_depth && index < segment_count(depth));
        let per_axis = 1u64 << (2 * depth);
        let axis = if index < per_axis { Axis::Vertical } else { Axis::Horizontal };
        let r = index % per_axis;
        let line = (r >> depth) as u32;
        let piece = (r & ((1 << depth) - 1)) as u32;
        GridSegment {
            axis,
            depth,
            line_offset: Dyadic::new(2 * line + 1, depth + 1),
            span_start: Dyadic::new(piece, depth),
            span_end: Dyadic::new(piece + 1, depth),
            mass: self.masses[depth as usize],
        }
    }

    pub fn segments_at(&self, depth: u32) -> impl Iterator<Item = GridSegment<T>> + '_ {
        (0..segment_count(depth)).map(move |i| self.segment(depth, i))
    }

    /// All segments ordered by depth, axis, offset and span.
    pub fn segments(&self) -> impl Iterator<Item = GridSegment<T>> + '_ {
        (0..=self.max_depth).flat_map(move |k| self.segments_at(k))
    }

    pub fn segment_table(&self) -> Vec<DepthRow<T>> {
        (0..=self.max_depth)
            .map(|k| {
                let length = T::lit(2.0).powi(-(k as i32));
                let mass = self.masses[k as usize];
                DepthRow { depth: k, count: segment_count(k), length, mass, linear_density: mass / length }
            })
            .collect()
    }

    /// Draws a depth by inverting the cumulative distribution of `p·q^k`.
    pub fn sample_depth<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        sample_depth(self.p, self.max_depth, self.mode, rng)
    }

    /// `n` i.i.d. points from the network measure.
    ///
    /// Each point draws a depth, then a uniform segment of that depth, then a
    /// uniform position along it. The output depends only on `(self, n, seed)`.
    pub fn sample_points(&self, n: usize, seed: u64) -> Vec<SamplePoint<T>> {
        rng::par_draw(seed, n, |rng| {
            let depth = self.sample_depth(rng);
            let index = rng.random_range(0..segment_count(depth));
            let seg = self.segment(depth, index);
            let p = seg.point_at(rng::unit(rng));
            SamplePoint { x: p.x, y: p.y, depth, axis: seg.axis }
        })
    }

    /// Whether `pt` lies on a grid line of depth at most `K`, within `tol`.
    pub fn contains(&self, pt: Point2<T>, tol: T) -> bool {
        if !pt.in_unit_square(tol) {
            return false;
        }
        let cells = T::lit(2.0).powi(self.max_depth as i32 + 1);
        let on_line = |c: T| {
            let m = (c * cells).round();
            m >= T::one() && m <= cells - T::one() && (c - m / cells).abs() <= tol
        };
        on_line(pt.x) || on_line(pt.y)
    }
}

/// Depth drawn from `p·q^k` on `0..=K`.
///
/// Renormalized mode rescales to the truncated geometric
/// `p·q^k / (1 - q^(K+1))`; raw mode gives depth `K` the residual `q^(K+1)` as well.
pub fn sample_depth<T: Scalar, R: Rng + ?Sized>(p: T, max_depth: u32, mode: TruncationMode, rng: &mut R) -> u32 {
    let q = T::one() - p;
    let u: T = rng::unit(rng);
    let target = match mode {
        TruncationMode::Raw => u,
        TruncationMode::Renormalized => u * (T::one() - q.powi(max_depth as i32 + 1)),
    };
    let mut cumulative = T::zero();
    let mut level_mass = p;
    for k in 0..max_depth {
        cumulative = cumulative + level_mass;
        if target < cumulative {
            return k;
        }
        level_mass = level_mass * q;
    }
    max_depth
}
