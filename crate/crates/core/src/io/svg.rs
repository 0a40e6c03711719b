//! SVG rendering of networks, cities and point clouds.
//!
//! The unit square fills a `width_px` canvas with `y` pointing up. Stroke
//! width halves with every depth level down to [`MIN_STROKE_PX`].

use std::fmt::Write as _;
use std::path::Path;

use super::geojson::{city_features, network_features, LineFeature};
use crate::city::{Component, FractalCity};
use crate::error::Result;
use crate::geometry::Point2;
use crate::manhattan::ManhattanNetwork;
use crate::Scalar;

pub const MIN_STROKE_PX: f64 = 0.25;
pub const DEFAULT_WIDTH_PX: u32 = 512;

/// Depth-0 stroke width for a canvas.
pub fn base_stroke(width_px: u32) -> f64 {
    f64::from(width_px) / 128.0
}

pub fn stroke_width(base: f64, depth: u32) -> f64 {
    (base * 0.5f64.powi(depth as i32)).max(MIN_STROKE_PX)
}

/// What to draw: roads, sampled points and district centers.
#[derive(Clone, Copy, Debug, Default)]
pub struct Scene<'a> {
    pub lines: &'a [LineFeature],
    pub points: &'a [Point2<f64>],
    pub centers: &'a [Point2<f64>],
}

pub fn svg_string(scene: &Scene<'_>, width_px: u32) -> String {
    let w = f64::from(width_px);
    let px = |p: Point2<f64>| (p.x * w, (1.0 - p.y) * w);
    let base = base_stroke(width_px);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width_px}" height="{width_px}" viewBox="0 0 {width_px} {width_px}">"#
    );
    let _ = writeln!(
        s,
        r##"<rect x="0" y="0" width="{width_px}" height="{width_px}" fill="#ffffff" stroke="#999999" stroke-width="1"/>"##
    );

    let mut depths: Vec<u32> = scene.lines.iter().filter_map(|l| l.depth).collect();
    depths.sort_unstable();
    depths.dedup();
    // Deep, thin lines first so the main axes stay on top.
    for &d in depths.iter().rev() {
        let _ =
            writeln!(s, r##"<g stroke="#1f2933" stroke-width="{:.3}" stroke-linecap="butt">"##, stroke_width(base, d));
        for l in scene.lines.iter().filter(|l| l.depth == Some(d)) {
            let (x1, y1) = px(l.start);
            let (x2, y2) = px(l.end);
            let _ = writeln!(s, r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#);
        }
        let _ = writeln!(s, "</g>");
    }
    let boundary: Vec<_> = scene.lines.iter().filter(|l| l.component == Component::Boundary).collect();
    if !boundary.is_empty() {
        let _ = writeln!(s, r##"<g stroke="#b3261e" stroke-width="{base:.3}" stroke-linecap="round">"##);
        for l in boundary {
            let (x1, y1) = px(l.start);
            let (x2, y2) = px(l.end);
            let _ = writeln!(s, r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#);
        }
        let _ = writeln!(s, "</g>");
    }
    if !scene.points.is_empty() {
        let _ = writeln!(s, r##"<g fill="#d9480f">"##);
        for &p in scene.points {
            let (cx, cy) = px(p);
            let _ = writeln!(s, r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="{:.3}"/>"#, base * 0.4);
        }
        let _ = writeln!(s, "</g>");
    }
    if !scene.centers.is_empty() {
        let _ = writeln!(s, r##"<g fill="#1864ab" stroke="#ffffff" stroke-width="{:.3}">"##, base * 0.25);
        for &p in scene.centers {
            let (cx, cy) = px(p);
            let _ = writeln!(s, r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="{:.3}"/>"#, base);
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}

fn to_f64<T: Scalar>(p: Point2<T>) -> Point2<f64> {
    Point2::new(p.x.as_f64(), p.y.as_f64())
}

pub fn network_svg<T: Scalar>(network: &ManhattanNetwork<T>, points: &[Point2<T>], width_px: u32) -> String {
    let lines = network_features(network);
    let points: Vec<_> = points.iter().map(|&p| to_f64(p)).collect();
    svg_string(&Scene { lines: &lines, points: &points, centers: &[] }, width_px)
}

/// Cities also mark their district centers.
pub fn city_svg<T: Scalar>(city: &FractalCity<T>, points: &[Point2<T>], width_px: u32) -> String {
    let lines = city_features(city);
    let points: Vec<_> = points.iter().map(|&p| to_f64(p)).collect();
    let centers: Vec<_> = city.diagram.cells.iter().map(|c| to_f64(c.center)).collect();
    svg_string(&Scene { lines: &lines, points: &points, centers: &centers }, width_px)
}

pub fn render_network_svg<T: Scalar>(
    network: &ManhattanNetwork<T>,
    points: &[Point2<T>],
    path: impl AsRef<Path>,
    width_px: u32,
) -> Result<()> {
    std::fs::write(path, network_svg(network, points, width_px))?;
    Ok(())
}

pub fn render_city_svg<T: Scalar>(
    city: &FractalCity<T>,
    points: &[Point2<T>],
    path: impl AsRef<Path>,
    width_px: u32,
) -> Result<()> {
    std::fs::write(path, city_svg(city, points, width_px))?;
    Ok(())
}
