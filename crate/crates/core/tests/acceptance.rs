//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Lines go straight to the stdout handle so they show up without `--nocapture`.

use std::collections::HashMap;
use std::io::Write;
use std::time::{Duration, Instant};

use hyperfractal::city::{build_city, CenterSource, CityConfig, Component, DEFAULT_MAX_REJECTS};
use hyperfractal::estimator::{estimate_dimension, geometric_radii, local_dimension_estimate, network_to_streets};
use hyperfractal::geometry::{eigen_decompose, voronoi_partition, CovarianceSpec, GaussianSprawl, Point2};
use hyperfractal::io;
use hyperfractal::manhattan::{Axis, Dyadic, ManhattanNetwork, Symmetry, TruncationMode};
use hyperfractal::measure::{manhattan_dimension, uniform_ss_dimension, UniformSelfSimilarSpec};
use hyperfractal::{figures, rng};
use rand::Rng;

fn report(id: u32, title: &str, started: Instant, budget: Duration, failures: &[String]) {
    let elapsed = started.elapsed();
    let mut failures = failures.to_vec();
    if elapsed > budget {
        failures.push(format!("took {elapsed:?}, budget {budget:?}"));
    }
    let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
    let detail = if failures.is_empty() { String::new() } else { format!(" ({})", failures.join("; ")) };
    let _ = writeln!(std::io::stdout().lock(), "acceptance {id:>2} {verdict}: {title} [{elapsed:.2?}]{detail}");
    assert!(failures.is_empty(), "criterion {id} failed: {failures:?}");
}

fn check(failures: &mut Vec<String>, ok: bool, msg: impl FnOnce() -> String) {
    if !ok {
        failures.push(msg());
    }
}

/// Closed-form oracle `ln(4/(1-p)) / ln 2`.
fn manhattan_oracle(p: f64) -> f64 {
    (4.0 / (1.0 - p)).ln() / 2f64.ln()
}

#[test]
fn criterion_01_closed_form_dimensions() {
    let t = Instant::now();
    let mut f = Vec::new();
    for i in 1..=9 {
        let p = f64::from(i) / 10.0;
        let m = manhattan_dimension(p).unwrap().value();
        let spec = UniformSelfSimilarSpec::with_scalings(0.5, (1.0 - p) / 4.0).unwrap();
        let s = uniform_ss_dimension(&spec).unwrap().value();
        check(&mut f, (m - s).abs() <= 1e-12, || format!("p={p}: manhattan {m} vs self-similar {s}"));
        check(&mut f, (m - manhattan_oracle(p)).abs() <= 1e-12, || format!("p={p}: {m} vs oracle"));
    }
    check(&mut f, manhattan_dimension(0.0).unwrap().value() == 2.0, || "dim(0) != 2".into());
    check(&mut f, manhattan_dimension(0.5).unwrap().value() == 3.0, || "dim(0.5) != 3".into());
    check(&mut f, manhattan_dimension(1.0).unwrap().is_infinite(), || "dim(1) is finite".into());
    report(1, "closed-form dimension suite", t, Duration::from_secs(1), &f);
}

type Key = (Axis, u32, Dyadic, Dyadic, Dyadic);

#[test]
fn criterion_02_grid_exactness() {
    let t = Instant::now();
    let mut f = Vec::new();
    let k_max = 8;
    for p in [0.3, 0.5, 0.8] {
        let raw = ManhattanNetwork::build(p, k_max, TruncationMode::Raw).unwrap();
        let mut per_depth = HashMap::new();
        let mut mass = 0.0;
        let mut keys: HashMap<Key, f64> = HashMap::new();
        for s in raw.segments() {
            *per_depth.entry(s.depth).or_insert(0u64) += 1;
            mass += s.mass;
            keys.insert((s.axis, s.depth, s.line_offset, s.span_start, s.span_end), s.mass);
        }
        for k in 0..=k_max {
            let expected = 2 * 4u64.pow(k);
            check(&mut f, per_depth.get(&k) == Some(&expected), || {
                format!("p={p} depth {k}: {:?} segments", per_depth.get(&k))
            });
        }
        let expected_mass = 1.0 - (1.0 - p).powi(k_max as i32 + 1);
        check(&mut f, (mass - expected_mass).abs() <= 1e-10, || format!("p={p}: raw mass {mass} vs {expected_mass}"));
        check(&mut f, keys.len() as u64 == raw.segment_count(), || format!("p={p}: duplicate segments"));
        for sym in [Symmetry::Transpose, Symmetry::ReflectX, Symmetry::ReflectY] {
            let closed = raw.segments().all(|s| {
                let m = s.transformed(sym);
                keys.get(&(m.axis, m.depth, m.line_offset, m.span_start, m.span_end)) == Some(&m.mass)
                    && m.mass == s.mass
            });
            check(&mut f, closed, || format!("p={p}: segment multiset not invariant under {sym:?}"));
        }
    }
    report(2, "grid exactness (K = 8)", t, Duration::from_secs(5), &f);
}

#[test]
fn criterion_03_sampler_fidelity() {
    let t = Instant::now();
    let mut f = Vec::new();
    let (p, k_max, n) = (0.5, 10u32, 100_000usize);
    let net = ManhattanNetwork::build(p, k_max, TruncationMode::Renormalized).unwrap();
    let pts = net.sample_points(n, 2024);
    let mut counts = vec![0usize; k_max as usize + 1];
    for s in &pts {
        counts[s.depth as usize] += 1;
        check(&mut f, net.contains(s.location(), 1e-12) && s.on_carrying_line(1e-12), || {
            format!("off-grid point {s:?}")
        });
    }
    let q: f64 = 1.0 - p;
    let norm = 1.0 - q.powi(k_max as i32 + 1);
    for (k, &c) in counts.iter().enumerate() {
        let prob = p * q.powi(k as i32) / norm;
        let sigma = (n as f64 * prob * (1.0 - prob)).sqrt();
        let dev = (c as f64 - n as f64 * prob).abs();
        check(&mut f, dev <= 4.0 * sigma, || {
            format!("depth {k}: {c} draws, expected {:.1} ± {:.1}", n as f64 * prob, 4.0 * sigma)
        });
    }
    f.truncate(20);
    report(3, "sampler fidelity (p = 0.5, K = 10, 1e5 points)", t, Duration::from_secs(10), &f);
}

#[test]
fn criterion_04_estimator_round_trip() {
    let t = Instant::now();
    let mut f = Vec::new();
    for p in [0.3, 0.5, 0.8] {
        let net = ManhattanNetwork::build(p, 10, TruncationMode::Raw).unwrap();
        let est = estimate_dimension(&network_to_streets(&net), 1.0 + 1e-9).unwrap();
        let d = est.dimension.value();
        let truth = manhattan_oracle(p);
        check(&mut f, (d - truth).abs() <= 0.08, || format!("p={p}: estimated {d:.4}, closed form {truth:.4}"));
        check(&mut f, est.fit.r_squared >= 0.99, || format!("p={p}: r² = {}", est.fit.r_squared));
    }
    report(4, "estimator round trip (K = 10, A = 1 + 1e-9)", t, Duration::from_secs(10), &f);
}

#[test]
fn criterion_05_local_dimension() {
    let t = Instant::now();
    let mut f = Vec::new();
    let n = 100_000;
    let radii = geometric_radii(0.02, 0.2, 10);
    let center = Point2::new(0.5, 0.5);
    let plane = rng::par_draw(5, n, |r| Point2::new(r.random::<f64>(), r.random::<f64>()));
    let line = rng::par_draw(6, n, |r| Point2::new(r.random::<f64>(), 0.5));
    let d2 = local_dimension_estimate(&plane, center, &radii).unwrap();
    let d1 = local_dimension_estimate(&line, center, &radii).unwrap();
    check(&mut f, (d2 - 2.0).abs() <= 0.15, || format!("uniform square slope {d2}"));
    check(&mut f, (d1 - 1.0).abs() <= 0.15, || format!("segment slope {d1}"));
    report(5, "local-dimension diagnostic", t, Duration::from_secs(10), &f);
}

#[test]
fn criterion_06_tessellation() {
    let t = Instant::now();
    let mut f = Vec::new();
    let mut r = rng::stream(606, 0);
    for set in 0..50 {
        let n = r.random_range(2..=40);
        let centers: Vec<Point2<f64>> = (0..n).map(|_| Point2::new(r.random(), r.random())).collect();
        let d = voronoi_partition(&centers).unwrap();
        let area = d.total_area();
        check(&mut f, (area - 1.0).abs() <= 1e-9, || format!("set {set}: area {area}"));
        for _ in 0..1000 {
            let probe = Point2::new(r.random(), r.random());
            let nearest = d.nearest_center(probe);
            check(&mut f, d.cells[nearest].polygon.contains(probe, 1e-9), || {
                format!("set {set}: probe {probe:?} not in cell {nearest}")
            });
        }
    }
    let quad = [(0.25, 0.25), (0.75, 0.25), (0.25, 0.75), (0.75, 0.75)].map(|(x, y)| Point2::new(x, y));
    let d = voronoi_partition(&quad).unwrap();
    for (cell, c) in d.cells.iter().zip(quad) {
        let (lo, hi) = cell.polygon.bounding_box();
        let exact = cell.polygon.area() == 0.25
            && lo == Point2::new(c.x - 0.25, c.y - 0.25)
            && hi == Point2::new(c.x + 0.25, c.y + 0.25);
        check(&mut f, exact, || format!("cell at {c:?} is not an exact quadrant"));
    }
    f.truncate(20);
    report(6, "tessellation suite", t, Duration::from_secs(10), &f);
}

#[test]
fn criterion_07_gaussian_sprawl() {
    let t = Instant::now();
    let mut f = Vec::new();
    let sprawl = GaussianSprawl::new(Point2::new(0.5, 0.5), &CovarianceSpec::diagonal(0.1, 0.1).unwrap()).unwrap();
    let pts = sprawl.sample_untruncated(10_000, 77);
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.x).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.y).sum::<f64>() / n;
    let cov = |a: &dyn Fn(&Point2<f64>) -> f64, b: &dyn Fn(&Point2<f64>) -> f64| {
        pts.iter().map(|p| a(p) * b(p)).sum::<f64>() / (n - 1.0)
    };
    let dx = |p: &Point2<f64>| p.x - mx;
    let dy = |p: &Point2<f64>| p.y - my;
    let (sxx, syy, sxy) = (cov(&dx, &dx), cov(&dy, &dy), cov(&dx, &dy));
    check(&mut f, (sxx / 0.1 - 1.0).abs() <= 0.1, || format!("var x {sxx}"));
    check(&mut f, (syy / 0.1 - 1.0).abs() <= 0.1, || format!("var y {syy}"));
    check(&mut f, sxy.abs() < 0.01, || format!("cov xy {sxy}"));

    let mut r = rng::stream(707, 0);
    for i in 0..100 {
        let b: [[f64; 2]; 2] = [
            [r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)],
            [r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)],
        ];
        let m = |i: usize, j: usize| b[i][0] * b[j][0] + b[i][1] * b[j][1];
        let spec = CovarianceSpec::new(m(0, 0), m(0, 1), m(1, 1)).unwrap();
        let back = eigen_decompose(&spec).unwrap().reconstruct();
        let target = spec.matrix();
        let err = (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| (back[i][j] - target[i][j]).abs())
            .fold(0.0, f64::max);
        check(&mut f, err <= 1e-10, || format!("matrix {i}: reconstruction error {err:e}"));
    }
    report(7, "gaussian sprawl and eigen-decomposition", t, Duration::from_secs(5), &f);
}

#[test]
fn criterion_08_city_composition() {
    let t = Instant::now();
    let mut f = Vec::new();
    let mut r = rng::stream(808, 0);
    for c in 0..4 {
        let n = r.random_range(2..=8);
        let config = CityConfig {
            n,
            p0: r.random_range(0.0..0.5),
            centers: CenterSource::Gaussian {
                mean: Point2::new(0.5, 0.5),
                covariance: CovarianceSpec::diagonal(r.random_range(0.02..0.3), r.random_range(0.02..0.3)).unwrap(),
                seed: None,
                max_rejects: DEFAULT_MAX_REJECTS,
            },
            lambdas: (0..n).map(|_| r.random_range(0.5..3.0)).collect(),
            ps: (0..n).map(|_| r.random_range(0.1..0.9)).collect(),
            max_depth: 4,
            seed: r.random(),
        };
        let weights = config.district_weights();
        let sum = weights.iter().sum::<f64>() + config.p0;
        check(&mut f, (sum - 1.0).abs() <= 1e-10, || format!("config {c}: Σq + p0 = {sum}"));
        let city = build_city(&config).unwrap();
        let total = city.total_mass();
        check(&mut f, (total - 1.0).abs() <= 1e-10, || format!("config {c}: city mass {total}"));

        let samples = 100_000;
        let pts = city.sample(samples, r.random());
        let mut tags = vec![0usize; n + 1];
        for p in &pts {
            match p.origin {
                Component::District(i) => {
                    tags[i] += 1;
                    check(&mut f, city.diagram.cells[i].polygon.contains(p.location, 1e-9), || {
                        format!("config {c}: point outside cell {i}")
                    });
                }
                Component::Boundary => tags[n] += 1,
            }
        }
        let expected = weights.iter().copied().chain([config.p0]);
        for (i, (count, e)) in tags.iter().zip(expected).enumerate() {
            let freq = *count as f64 / samples as f64;
            check(&mut f, (freq - e).abs() <= 0.01, || {
                format!("config {c} component {i}: frequency {freq:.4} vs {e:.4}")
            });
        }
    }
    f.truncate(20);
    report(8, "city composition", t, Duration::from_secs(30), &f);
}

#[test]
fn criterion_09_figure_reproduction() {
    let t = Instant::now();
    let mut f = Vec::new();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let first = figures::generate_all(a.path()).unwrap();
    let second = figures::generate_all(b.path()).unwrap();
    let names: Vec<String> = first.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect();
    let wanted = [
        "recursion_k0.svg",
        "recursion_k1.svg",
        "recursion_k2.svg",
        "recursion_k3.svg",
        "samples_p01.svg",
        "samples_p03.svg",
        "samples_p05.svg",
        "samples_p08.svg",
        "sprawl_isotropic_var010.svg",
        "sprawl_isotropic_var050.svg",
        "sprawl_anisotropic.svg",
    ];
    for w in wanted {
        check(&mut f, names.iter().any(|n| n == w), || format!("missing {w}"));
    }
    for (x, y) in first.iter().zip(&second) {
        let bytes = std::fs::read(x).unwrap();
        check(&mut f, bytes == std::fs::read(y).unwrap(), || format!("{} differs between runs", x.display()));
        let text = String::from_utf8(bytes).unwrap();
        match roxmltree::Document::parse(&text) {
            Ok(doc) => {
                check(&mut f, doc.root_element().has_tag_name("svg"), || format!("{}: root is not <svg>", x.display()));
                let name = x.file_name().unwrap().to_string_lossy();
                if name.starts_with("samples_") {
                    let circles = doc.descendants().filter(|n| n.has_tag_name("circle")).count();
                    check(&mut f, circles == 1000, || format!("{name}: {circles} points"));
                }
            }
            Err(e) => f.push(format!("{}: {e}", x.display())),
        }
    }
    report(9, "figure reproduction", t, Duration::from_secs(30), &f);
}

fn pipeline(dir: &std::path::Path) -> Vec<Vec<u8>> {
    let config: CityConfig<f64> = io::parse_city_config(
        r#"{"n":10,"p0":0.15,"gaussian":{"mean":[0.45,0.55],"covariance":[[0.08,0.02],[0.02,0.05]]},
            "lambdas":[1,1,2,2,3,3,1,1,2,2],"ps":0.4,"max_depth":4,"seed":31337}"#,
    )
    .unwrap();
    let city = build_city(&config).unwrap();
    let pts = city.sample(5_000, rng::derive_seed(config.seed, rng::tag::SAMPLING));
    let locs: Vec<_> = pts.iter().map(|p| p.location).collect();
    io::export_city_geojson(&city, dir.join("city.geojson")).unwrap();
    io::export_points_csv(&pts, dir.join("points.csv")).unwrap();
    io::render_city_svg(&city, &locs, dir.join("city.svg"), 512).unwrap();
    ["city.geojson", "points.csv", "city.svg"].iter().map(|n| std::fs::read(dir.join(n)).unwrap()).collect()
}

#[test]
fn criterion_10_determinism() {
    let t = Instant::now();
    let mut f = Vec::new();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let (x, y) = (pipeline(a.path()), pipeline(b.path()));
    for (name, (x, y)) in ["geojson", "csv", "svg"].iter().zip(x.iter().zip(&y)) {
        check(&mut f, x == y, || format!("{name} output differs between runs"));
        check(&mut f, !x.is_empty(), || format!("{name} output is empty"));
    }
    report(10, "end-to-end determinism", t, Duration::from_secs(60), &f);
}
