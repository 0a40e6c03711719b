//! Points CSV: `x,y,origin,depth`.

use std::io::Write;
use std::path::Path;

use crate::city::{CityPoint, Component};
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::manhattan::SamplePoint;
use crate::Scalar;

pub const POINTS_HEADER: &str = "x,y,origin,depth";

/// Anything that can be written as a points CSV row.
pub trait PointRow {
    fn location(&self) -> Point2<f64>;
    /// `network`, `district-<i>` or `boundary`.
    fn origin(&self) -> String;
    fn depth(&self) -> Option<u32>;
}

impl<T: Scalar> PointRow for SamplePoint<T> {
    fn location(&self) -> Point2<f64> {
        Point2::new(self.x.as_f64(), self.y.as_f64())
    }

    fn origin(&self) -> String {
        "network".into()
    }

    fn depth(&self) -> Option<u32> {
        Some(self.depth)
    }
}

impl<T: Scalar> PointRow for CityPoint<T> {
    fn location(&self) -> Point2<f64> {
        Point2::new(self.location.x.as_f64(), self.location.y.as_f64())
    }

    fn origin(&self) -> String {
        component_label(self.origin)
    }

    fn depth(&self) -> Option<u32> {
        self.depth
    }
}

pub fn component_label(c: Component) -> String {
    match c {
        Component::District(i) => format!("district-{i}"),
        Component::Boundary => "boundary".into(),
    }
}

/// A points CSV row as read back.
#[derive(Clone, Debug, PartialEq)]
pub struct PointRecord {
    pub location: Point2<f64>,
    pub origin: String,
    pub depth: Option<u32>,
}

pub fn write_points<P: PointRow, W: Write>(points: &[P], mut out: W) -> Result<()> {
    writeln!(out, "{POINTS_HEADER}")?;
    for p in points {
        let loc = p.location();
        let depth = p.depth().map(|d| d.to_string()).unwrap_or_default();
        writeln!(out, "{:.12},{:.12},{},{}", loc.x, loc.y, p.origin(), depth)?;
    }
    Ok(())
}

pub fn export_points_csv<P: PointRow>(points: &[P], path: impl AsRef<Path>) -> Result<()> {
    let mut buf = Vec::new();
    write_points(points, &mut buf)?;
    std::fs::write(path, buf)?;
    Ok(())
}

pub fn import_points_csv(path: impl AsRef<Path>) -> Result<Vec<PointRecord>> {
    let path = path.as_ref();
    let err = |line: usize, reason: String| Error::Csv { path: path.to_path_buf(), line, reason };
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    if lines.next().map(|(_, h)| h.trim()) != Some(POINTS_HEADER) {
        return Err(err(1, format!("missing header `{POINTS_HEADER}`")));
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        let n = i + 1;
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 4 {
            return Err(err(n, format!("expected 4 fields, found {}", f.len())));
        }
        let coord = |s: &str| s.parse::<f64>().map_err(|_| err(n, format!("bad coordinate `{s}`")));
        let depth = match f[3] {
            "" => None,
            d => Some(d.parse().map_err(|_| err(n, format!("bad depth `{d}`")))?),
        };
        out.push(PointRecord { location: Point2::new(coord(f[0])?, coord(f[1])?), origin: f[2].to_string(), depth });
    }
    Ok(out)
}
