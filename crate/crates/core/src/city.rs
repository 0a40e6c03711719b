//! Fractal cities: one Manhattan network per Voronoi cell plus the roads
//! separating the cells.
//!
//! District `i` gets total weight `q_i = λ_i (1 - p0) / Σλ`; the interior
//! Voronoi edges share `p0` uniformly by length, so the city is a probability
//! measure.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::geometry::{
    clip_segment, sample_centers, voronoi_partition, CovarianceSpec, Point2, Segment2, VoronoiDiagram,
};
use crate::manhattan::{Axis, Dyadic, ManhattanNetwork, TruncationMode, MAX_DEPTH};
use crate::{rng, Scalar};

/// Consecutive out-of-square draws tolerated when sampling centers.
pub const DEFAULT_MAX_REJECTS: usize = 10_000;

/// Where district centers come from.
#[derive(Clone, Debug, PartialEq)]
pub enum CenterSource<T> {
    Explicit(Vec<Point2<T>>),
    /// Gaussian sprawl truncated to the unit square. Without a seed, one is
    /// derived from the master seed.
    Gaussian {
        mean: Point2<T>,
        covariance: CovarianceSpec<T>,
        seed: Option<u64>,
        max_rejects: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CityConfig<T> {
    pub n: usize,
    pub p0: T,
    pub centers: CenterSource<T>,
    pub lambdas: Vec<T>,
    pub ps: Vec<T>,
    pub max_depth: u32,
    pub seed: u64,
}

impl<T: Scalar> CityConfig<T> {
    /// Config with explicit centers and equal district weights.
    pub fn with_centers(centers: Vec<Point2<T>>, p0: T, p: T, max_depth: u32) -> Self {
        let n = centers.len();
        Self {
            n,
            p0,
            centers: CenterSource::Explicit(centers),
            lambdas: vec![T::one(); n],
            ps: vec![p; n],
            max_depth,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(invalid("n", "at least one district is required"));
        }
        if !(self.p0 >= T::zero() && self.p0 < T::one()) {
            return Err(invalid("p0", format!("{} is not in [0, 1)", self.p0)));
        }
        if self.lambdas.len() != self.n || self.ps.len() != self.n {
            return Err(invalid(
                "lambdas/ps",
                format!("expected {} entries, got {} and {}", self.n, self.lambdas.len(), self.ps.len()),
            ));
        }
        if let Some(l) = self.lambdas.iter().find(|&&l| !(l > T::zero() && l.is_finite())) {
            return Err(invalid("lambdas", format!("{l} is not positive")));
        }
        if let Some(p) = self.ps.iter().find(|&&p| !(p > T::zero() && p < T::one())) {
            return Err(invalid("ps", format!("{p} is not in (0, 1)")));
        }
        if self.max_depth > MAX_DEPTH {
            return Err(Error::DepthBudget { depth: self.max_depth, max: MAX_DEPTH });
        }
        if let CenterSource::Explicit(c) = &self.centers {
            if c.len() != self.n {
                return Err(invalid("centers", format!("expected {} centers, got {}", self.n, c.len())));
            }
        }
        Ok(())
    }

    /// `q_i = λ_i (1 - p0) / Σλ`.
    pub fn district_weights(&self) -> Vec<T> {
        let total: T = self.lambdas.iter().copied().sum();
        self.lambdas.iter().map(|&l| l * (T::one() - self.p0) / total).collect()
    }

    pub fn resolve_centers(&self) -> Result<Vec<Point2<T>>> {
        match &self.centers {
            CenterSource::Explicit(c) => Ok(c.clone()),
            CenterSource::Gaussian { mean, covariance, seed, max_rejects } => {
                let seed = seed.unwrap_or_else(|| rng::derive_seed(self.seed, rng::tag::CENTERS));
                sample_centers(self.n, *mean, covariance, seed, *max_rejects)
            }
        }
    }
}

/// Part of the city measure a point or road belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    District(usize),
    Boundary,
}

/// A grid segment of a district after mapping into the cell and clipping.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistrictSegment<T> {
    pub segment: Segment2<T>,
    pub depth: u32,
    pub axis: Axis,
    /// Offset and span start of the source segment in the unit-square grid.
    pub line_offset: Dyadic,
    pub span_start: Dyadic,
    pub mass: T,
}

impl<T: Scalar> DistrictSegment<T> {
    pub fn linear_density(&self) -> T {
        self.mass / self.segment.length()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct District<T> {
    pub cell: usize,
    pub p: T,
    /// Total mass `q_i`.
    pub weight: T,
    pub segments: Vec<DistrictSegment<T>>,
}

impl<T: Scalar> District<T> {
    pub fn mass(&self) -> T {
        self.segments.iter().map(|s| s.mass).sum()
    }
}

/// Interior Voronoi edge carrying its share of `p0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryRoad<T> {
    pub cells: (usize, usize),
    pub segment: Segment2<T>,
    pub mass: T,
}

/// A point drawn from the city measure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CityPoint<T> {
    pub location: Point2<T>,
    pub origin: Component,
    /// Depth of the district segment; `None` for boundary points.
    pub depth: Option<u32>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FractalCity<T> {
    pub p0: T,
    pub max_depth: u32,
    pub diagram: VoronoiDiagram<T>,
    pub districts: Vec<District<T>>,
    pub boundary: Vec<BoundaryRoad<T>>,
    /// Running mass over district segments in order, then boundary roads.
    cumulative: Vec<T>,
    /// Index into `cumulative` where each district starts, then where the boundary starts.
    offsets: Vec<usize>,
}

fn build_district<T: Scalar>(
    cell: usize,
    diagram: &VoronoiDiagram<T>,
    p: T,
    weight: T,
    max_depth: u32,
) -> Result<District<T>> {
    let polygon = &diagram.cells[cell].polygon;
    let (lo, hi) = polygon.bounding_box();
    let span = hi - lo;
    let place = |q: Point2<T>| Point2::new(lo.x + q.x * span.x, lo.y + q.y * span.y);

    let network = ManhattanNetwork::build(p, max_depth, TruncationMode::Renormalized)?;
    let mut segments = Vec::new();
    for g in network.segments() {
        let unit = g.segment();
        let mapped = Segment2::new(place(unit.a), place(unit.b));
        if let Some(c) = clip_segment(&mapped, polygon) {
            let fraction = c.fraction();
            if fraction > T::zero() {
                segments.push(DistrictSegment {
                    segment: c.segment,
                    depth: g.depth,
                    axis: g.axis,
                    line_offset: g.line_offset,
                    span_start: g.span_start,
                    mass: g.mass * fraction,
                });
            }
        }
    }
    let kept: T = segments.iter().map(|s| s.mass).sum();
    let length: T = segments.iter().map(|s| s.segment.length()).sum();
    if !(kept > T::zero() && length > T::zero()) {
        return Err(Error::EmptyDistrict(cell));
    }
    let scale = weight / kept;
    for s in &mut segments {
        s.mass = s.mass * scale;
    }
    Ok(District { cell, p, weight, segments })
}

/// Resolves centers, tessellates, fills every cell with a clipped Manhattan
/// network of total mass `q_i` and spreads `p0` over the interior edges.
pub fn build_city<T: Scalar>(config: &CityConfig<T>) -> Result<FractalCity<T>> {
    config.validate()?;
    let centers = config.resolve_centers()?;
    let diagram = voronoi_partition(&centers)?;
    let weights = config.district_weights();

    let districts = (0..config.n)
        .into_par_iter()
        .map(|i| build_district(i, &diagram, config.ps[i], weights[i], config.max_depth))
        .collect::<Result<Vec<_>>>()?;

    let edge_length = diagram.interior_edge_length();
    if config.p0 > T::zero() && !(edge_length > T::zero()) {
        return Err(Error::NoBoundaryEdges(config.p0.as_f64()));
    }
    let boundary: Vec<_> = diagram
        .interior_edges
        .iter()
        .map(|e| BoundaryRoad {
            cells: e.cells,
            segment: e.segment,
            mass: if config.p0 > T::zero() { config.p0 * e.segment.length() / edge_length } else { T::zero() },
        })
        .collect();

    let mut cumulative = Vec::new();
    let mut offsets = Vec::with_capacity(districts.len() + 1);
    let mut running = T::zero();
    let masses = districts
        .iter()
        .map(|d| d.segments.iter().map(|s| s.mass).collect::<Vec<_>>())
        .chain(std::iter::once(boundary.iter().map(|b| b.mass).collect()));
    for group in masses {
        offsets.push(cumulative.len());
        for m in group {
            running = running + m;
            cumulative.push(running);
        }
    }

    Ok(FractalCity { p0: config.p0, max_depth: config.max_depth, diagram, districts, boundary, cumulative, offsets })
}

impl<T: Scalar> FractalCity<T> {
    pub fn boundary_mass(&self) -> T {
        self.boundary.iter().map(|b| b.mass).sum()
    }

    pub fn total_mass(&self) -> T {
        self.districts.iter().map(|d| d.mass()).sum::<T>() + self.boundary_mass()
    }

    /// One row per district, then a boundary row when the city has interior edges.
    pub fn mass_report(&self) -> Vec<(Component, T)> {
        let mut rows: Vec<_> = self.districts.iter().map(|d| (Component::District(d.cell), d.mass())).collect();
        if !self.boundary.is_empty() {
            rows.push((Component::Boundary, self.boundary_mass()));
        }
        rows
    }

    fn draw(&self, rng: &mut impl Rng) -> CityPoint<T> {
        let total = *self.cumulative.last().expect("a city has at least one segment");
        let target = rng::unit::<T, _>(rng) * total;
        let idx = self.cumulative.partition_point(|&c| c <= target).min(self.cumulative.len() - 1);
        let group = self.offsets.partition_point(|&o| o <= idx) - 1;
        let t = rng::unit(rng);
        if group < self.districts.len() {
            let s = &self.districts[group].segments[idx - self.offsets[group]];
            CityPoint { location: s.segment.at(t), origin: Component::District(group), depth: Some(s.depth) }
        } else {
            let b = &self.boundary[idx - self.offsets[group]];
            CityPoint { location: b.segment.at(t), origin: Component::Boundary, depth: None }
        }
    }

    /// `n` i.i.d. points: a segment drawn by mass, then a uniform position along it.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<CityPoint<T>> {
        rng::par_draw(seed, n, |r| self.draw(r))
    }
}

/// Free-function form of [`FractalCity::sample`].
pub fn sample_city<T: Scalar>(city: &FractalCity<T>, n: usize, seed: u64) -> Vec<CityPoint<T>> {
    city.sample(n, seed)
}

/// Free-function form of [`FractalCity::mass_report`].
pub fn city_mass_report<T: Scalar>(city: &FractalCity<T>) -> Vec<(Component, T)> {
    city.mass_report()
}
