//! JSON city config.
//!
//! ```json
//! {
//!   "p0": 0.1,
//!   "gaussian": { "mean": [0.5, 0.5], "covariance": [[0.1, 0], [0, 0.1]], "seed": 3 },
//!   "n": 8,
//!   "lambdas": 1.0,
//!   "ps": [0.3, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.8],
//!   "max_depth": 5,
//!   "seed": 42
//! }
//! ```
//!
//! `centers` (a list of `[x, y]`) and `gaussian` are mutually exclusive. A
//! single number for `lambdas` or `ps` applies to every district.

use std::path::Path;

use serde::Deserialize;

use crate::city::{CenterSource, CityConfig, DEFAULT_MAX_REJECTS};
use crate::error::{Error, Result};
use crate::geometry::{CovarianceSpec, Point2};
use crate::Scalar;

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum PerDistrict {
    All(f64),
    Each(Vec<f64>),
}

impl PerDistrict {
    fn expand(&self, n: usize) -> Vec<f64> {
        match self {
            Self::All(v) => vec![*v; n],
            Self::Each(v) => v.clone(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GaussianFile {
    mean: [f64; 2],
    covariance: [[f64; 2]; 2],
    seed: Option<u64>,
    max_rejects: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CityConfigFile {
    n: Option<usize>,
    p0: f64,
    centers: Option<Vec<[f64; 2]>>,
    gaussian: Option<GaussianFile>,
    lambdas: Option<PerDistrict>,
    ps: PerDistrict,
    max_depth: u32,
    #[serde(default)]
    seed: u64,
}

fn lit<T: Scalar>(v: &[f64]) -> Vec<T> {
    v.iter().map(|&x| T::lit(x)).collect()
}

pub fn parse_city_config<T: Scalar>(text: &str) -> Result<CityConfig<T>> {
    let file: CityConfigFile = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let (n, centers) = match (file.centers, file.gaussian) {
        (Some(c), None) => {
            if let Some(n) = file.n.filter(|&n| n != c.len()) {
                return Err(Error::Config(format!("n = {n} but {} centers are listed", c.len())));
            }
            (c.len(), CenterSource::Explicit(c.iter().map(|&[x, y]| Point2::new(T::lit(x), T::lit(y))).collect()))
        }
        (None, Some(g)) => {
            let n = file.n.ok_or_else(|| Error::Config("`n` is required with `gaussian`".into()))?;
            let [[a, b], [c, d]] = g.covariance;
            let covariance = CovarianceSpec::from_matrix([[T::lit(a), T::lit(b)], [T::lit(c), T::lit(d)]])?;
            let source = CenterSource::Gaussian {
                mean: Point2::new(T::lit(g.mean[0]), T::lit(g.mean[1])),
                covariance,
                seed: g.seed,
                max_rejects: g.max_rejects.unwrap_or(DEFAULT_MAX_REJECTS),
            };
            (n, source)
        }
        _ => return Err(Error::Config("exactly one of `centers` or `gaussian` is required".into())),
    };
    let config = CityConfig {
        n,
        p0: T::lit(file.p0),
        centers,
        lambdas: lit(&file.lambdas.unwrap_or(PerDistrict::All(1.0)).expand(n)),
        ps: lit(&file.ps.expand(n)),
        max_depth: file.max_depth,
        seed: file.seed,
    };
    config.validate()?;
    Ok(config)
}

pub fn load_city_config<T: Scalar>(path: impl AsRef<Path>) -> Result<CityConfig<T>> {
    parse_city_config(&std::fs::read_to_string(path)?)
}
