//! GeoJSON FeatureCollection of two-point LineStrings.
//!
//! Written by hand so the bytes are fully determined: coordinates with 12
//! decimals, masses and densities in shortest round-trip form, one feature per
//! line.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::Value;

use crate::city::{Component, FractalCity};
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::manhattan::ManhattanNetwork;
use crate::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct LineFeature {
    pub start: Point2<f64>,
    pub end: Point2<f64>,
    /// `None` for boundary roads.
    pub depth: Option<u32>,
    pub mass: f64,
    pub linear_density: f64,
    pub component: Component,
}

/// Features of a bare network, tagged as district 0.
pub fn network_features<T: Scalar>(network: &ManhattanNetwork<T>) -> Vec<LineFeature> {
    let mut segs: Vec<_> = network.segments().collect();
    segs.sort_by_key(|s| (s.depth, s.axis, s.line_offset, s.span_start));
    segs.iter()
        .map(|g| {
            let s = g.segment();
            LineFeature {
                start: Point2::new(s.a.x.as_f64(), s.a.y.as_f64()),
                end: Point2::new(s.b.x.as_f64(), s.b.y.as_f64()),
                depth: Some(g.depth),
                mass: g.mass.as_f64(),
                linear_density: g.linear_density().as_f64(),
                component: Component::District(0),
            }
        })
        .collect()
}

/// Districts in cell order, then boundary roads.
pub fn city_features<T: Scalar>(city: &FractalCity<T>) -> Vec<LineFeature> {
    let f = |p: Point2<T>| Point2::new(p.x.as_f64(), p.y.as_f64());
    let mut out = Vec::new();
    for d in &city.districts {
        let mut segs: Vec<_> = d.segments.iter().collect();
        segs.sort_by_key(|s| (s.depth, s.axis, s.line_offset, s.span_start));
        out.extend(segs.into_iter().map(|s| LineFeature {
            start: f(s.segment.a),
            end: f(s.segment.b),
            depth: Some(s.depth),
            mass: s.mass.as_f64(),
            linear_density: s.linear_density().as_f64(),
            component: Component::District(d.cell),
        }));
    }
    out.extend(city.boundary.iter().map(|b| LineFeature {
        start: f(b.segment.a),
        end: f(b.segment.b),
        depth: None,
        mass: b.mass.as_f64(),
        linear_density: (b.mass / b.segment.length()).as_f64(),
        component: Component::Boundary,
    }));
    out
}

pub fn geojson_string(features: &[LineFeature]) -> String {
    let mut s = String::from("{\"type\":\"FeatureCollection\",\"features\":[\n");
    for (i, f) in features.iter().enumerate() {
        let depth = f.depth.map_or("null".to_string(), |d| d.to_string());
        let component = match f.component {
            Component::District(i) => i.to_string(),
            Component::Boundary => "\"boundary\"".into(),
        };
        let _ = write!(
            s,
            "{{\"type\":\"Feature\",\"geometry\":{{\"type\":\"LineString\",\"coordinates\":[[{:.12},{:.12}],[{:.12},{:.12}]]}},\
             \"properties\":{{\"depth\":{},\"mass\":{},\"linear_density\":{},\"component\":{}}}}}",
            f.start.x, f.start.y, f.end.x, f.end.y, depth, f.mass, f.linear_density, component
        );
        s.push_str(if i + 1 < features.len() { ",\n" } else { "\n" });
    }
    s.push_str("]}\n");
    s
}

pub fn write_geojson(features: &[LineFeature], path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, geojson_string(features))?;
    Ok(())
}

pub fn export_network_geojson<T: Scalar>(network: &ManhattanNetwork<T>, path: impl AsRef<Path>) -> Result<()> {
    write_geojson(&network_features(network), path)
}

pub fn export_city_geojson<T: Scalar>(city: &FractalCity<T>, path: impl AsRef<Path>) -> Result<()> {
    write_geojson(&city_features(city), path)
}

fn bad(msg: impl Into<String>) -> Error {
    Error::GeoJson(msg.into())
}

fn point(v: &Value) -> Result<Point2<f64>> {
    match v.as_array().map(|a| a.as_slice()) {
        Some([x, y]) => match (x.as_f64(), y.as_f64()) {
            (Some(x), Some(y)) => Ok(Point2::new(x, y)),
            _ => Err(bad("non-numeric coordinate")),
        },
        _ => Err(bad("coordinate is not an [x, y] pair")),
    }
}

/// Reads back a file produced by [`geojson_string`].
pub fn parse_geojson(text: &str) -> Result<Vec<LineFeature>> {
    let doc: Value = serde_json::from_str(text)?;
    if doc["type"] != "FeatureCollection" {
        return Err(bad("not a FeatureCollection"));
    }
    let features = doc["features"].as_array().ok_or_else(|| bad("missing features"))?;
    features
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let geom = &f["geometry"];
            if geom["type"] != "LineString" {
                return Err(bad(format!("feature {i} is not a LineString")));
            }
            let coords = match geom["coordinates"].as_array().map(|a| a.as_slice()) {
                Some([a, b]) => (point(a)?, point(b)?),
                _ => return Err(bad(format!("feature {i} does not have two coordinates"))),
            };
            let props = &f["properties"];
            let num = |k: &str| props[k].as_f64().ok_or_else(|| bad(format!("feature {i}: missing `{k}`")));
            let depth = match &props["depth"] {
                Value::Null => None,
                d => Some(
                    d.as_u64()
                        .and_then(|d| u32::try_from(d).ok())
                        .ok_or_else(|| bad(format!("feature {i}: bad depth")))?,
                ),
            };
            let component = match &props["component"] {
                Value::String(s) if s == "boundary" => Component::Boundary,
                c => {
                    Component::District(c.as_u64().ok_or_else(|| bad(format!("feature {i}: bad component")))? as usize)
                }
            };
            Ok(LineFeature {
                start: coords.0,
                end: coords.1,
                depth,
                mass: num("mass")?,
                linear_density: num("linear_density")?,
                component,
            })
        })
        .collect()
}

pub fn import_geojson(path: impl AsRef<Path>) -> Result<Vec<LineFeature>> {
    parse_geojson(&std::fs::read_to_string(path)?)
}
