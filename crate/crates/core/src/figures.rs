//! Preset renders: the grid recursion, samples for a sweep of `p`, a Voronoi
//! city and cities under isotropic and anisotropic sprawl.
//!
//! Every preset has a fixed seed, so the files are byte-stable.

use std::path::{Path, PathBuf};

use crate::city::{build_city, CenterSource, CityConfig, FractalCity, DEFAULT_MAX_REJECTS};
use crate::error::Result;
use crate::geometry::{CovarianceSpec, Point2};
use crate::io::{city_svg, network_svg, DEFAULT_WIDTH_PX};
use crate::manhattan::{ManhattanNetwork, TruncationMode};
use crate::rng;

pub const FIGURE_SEED: u64 = 20_250_101;

pub const RECURSION_P: f64 = 0.5;
pub const RECURSION_DEPTHS: [u32; 4] = [0, 1, 2, 3];

pub const SWEEP_PS: [f64; 4] = [0.1, 0.3, 0.5, 0.8];
pub const SWEEP_POINTS: usize = 1000;
pub const SWEEP_DEPTH: u32 = 6;

pub const CITY_DISTRICTS: usize = 20;
pub const CITY_P0: f64 = 0.1;
pub const CITY_P: f64 = 0.5;
pub const CITY_DEPTH: u32 = 4;

/// Diagonal covariances `(var_x, var_y)` for the sprawl presets.
pub const ISOTROPIC_SPRAWL: [(f64, f64); 2] = [(0.1, 0.1), (0.5, 0.5)];
pub const ANISOTROPIC_SPRAWL: (f64, f64) = (0.02, 0.7);

#[derive(Clone, Debug, PartialEq)]
pub struct Figure {
    pub file_name: String,
    pub svg: String,
}

fn seed_for(index: u64) -> u64 {
    rng::derive_seed(rng::derive_seed(FIGURE_SEED, rng::tag::FIGURES), index)
}

pub fn recursion_panels() -> Result<Vec<Figure>> {
    RECURSION_DEPTHS
        .iter()
        .map(|&k| {
            let net = ManhattanNetwork::build(RECURSION_P, k, TruncationMode::Renormalized)?;
            Ok(Figure {
                file_name: format!("recursion_k{k}.svg"),
                svg: network_svg::<f64>(&net, &[], DEFAULT_WIDTH_PX),
            })
        })
        .collect()
}

pub fn sample_sweep() -> Result<Vec<Figure>> {
    SWEEP_PS
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let net = ManhattanNetwork::build(p, SWEEP_DEPTH, TruncationMode::Renormalized)?;
            let pts: Vec<_> =
                net.sample_points(SWEEP_POINTS, seed_for(10 + i as u64)).iter().map(|s| s.location()).collect();
            let name = format!("samples_p{:02}.svg", (p * 10.0).round() as u32);
            Ok(Figure { file_name: name, svg: network_svg(&net, &pts, DEFAULT_WIDTH_PX) })
        })
        .collect()
}

/// City config with Gaussian centers around the middle of the square.
pub fn sprawl_config(var_x: f64, var_y: f64, seed: u64) -> Result<CityConfig<f64>> {
    Ok(CityConfig {
        n: CITY_DISTRICTS,
        p0: CITY_P0,
        centers: CenterSource::Gaussian {
            mean: Point2::new(0.5, 0.5),
            covariance: CovarianceSpec::diagonal(var_x, var_y)?,
            seed: None,
            max_rejects: DEFAULT_MAX_REJECTS,
        },
        lambdas: vec![1.0; CITY_DISTRICTS],
        ps: vec![CITY_P; CITY_DISTRICTS],
        max_depth: CITY_DEPTH,
        seed,
    })
}

fn city_figure(city: &FractalCity<f64>, file_name: String, points: usize, seed: u64) -> Figure {
    let pts: Vec<_> = city.sample(points, seed).iter().map(|p| p.location).collect();
    Figure { file_name, svg: city_svg(city, &pts, DEFAULT_WIDTH_PX) }
}

pub fn voronoi_city() -> Result<Figure> {
    let city = build_city(&sprawl_config(0.05, 0.05, seed_for(20))?)?;
    Ok(city_figure(&city, "voronoi_city.svg".into(), SWEEP_POINTS, seed_for(21)))
}

pub fn isotropic_cities() -> Result<Vec<Figure>> {
    ISOTROPIC_SPRAWL
        .iter()
        .enumerate()
        .map(|(i, &(vx, vy))| {
            let city = build_city(&sprawl_config(vx, vy, seed_for(30 + i as u64))?)?;
            let name = format!("sprawl_isotropic_var{:03}.svg", (vx * 100.0).round() as u32);
            Ok(city_figure(&city, name, 0, 0))
        })
        .collect()
}

pub fn anisotropic_city() -> Result<Figure> {
    let (vx, vy) = ANISOTROPIC_SPRAWL;
    let city = build_city(&sprawl_config(vx, vy, seed_for(40))?)?;
    Ok(city_figure(&city, "sprawl_anisotropic.svg".into(), 0, 0))
}

pub fn all_figures() -> Result<Vec<Figure>> {
    let mut out = recursion_panels()?;
    out.extend(sample_sweep()?);
    out.push(voronoi_city()?);
    out.extend(isotropic_cities()?);
    out.push(anisotropic_city()?);
    Ok(out)
}

/// Writes every preset into `outdir` (created if missing) and returns the paths.
pub fn generate_all(outdir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let outdir = outdir.as_ref();
    std::fs::create_dir_all(outdir)?;
    all_figures()?
        .into_iter()
        .map(|f| {
            let path = outdir.join(&f.file_name);
            std::fs::write(&path, f.svg)?;
            Ok(path)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(svg: &str, tag: &str) -> usize {
        roxmltree::Document::parse(svg).unwrap().descendants().filter(|n| n.has_tag_name(tag)).count()
    }

    #[test]
    fn recursion_panels_grow_by_depth() {
        let panels = recursion_panels().unwrap();
        let lines: Vec<_> = panels.iter().map(|f| count(&f.svg, "line")).collect();
        assert_eq!(lines, [2, 10, 42, 170]);
    }

    #[test]
    fn sweep_has_the_requested_points() {
        let figs = sample_sweep().unwrap();
        assert_eq!(figs.len(), 4);
        for f in &figs {
            assert_eq!(count(&f.svg, "circle"), SWEEP_POINTS);
        }
        assert_eq!(figs[0].file_name, "samples_p01.svg");
    }

    #[test]
    fn anisotropic_centers_are_elongated() {
        let (vx, vy) = ANISOTROPIC_SPRAWL;
        let centers = sprawl_config(vx, vy, seed_for(40)).unwrap().resolve_centers().unwrap();
        let var = |f: fn(&Point2<f64>) -> f64| {
            let m = centers.iter().map(f).sum::<f64>() / centers.len() as f64;
            centers.iter().map(|c| (f(c) - m).powi(2)).sum::<f64>() / centers.len() as f64
        };
        assert!(var(|c| c.y) > 2.0 * var(|c| c.x));
    }
}
