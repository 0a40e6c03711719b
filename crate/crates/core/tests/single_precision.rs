use hyperfractal::city::{build_city, CityConfig};
use hyperfractal::estimator::{estimate_dimension, network_to_streets};
use hyperfractal::geometry::Point2;
use hyperfractal::manhattan::{ManhattanNetwork, TruncationMode};
use hyperfractal::measure::manhattan_dimension;

#[test]
fn f32_pipeline() {
    assert_eq!(manhattan_dimension(0.5f32).unwrap().value(), 3.0);

    let net = ManhattanNetwork::<f32>::build(0.5, 6, TruncationMode::Raw).unwrap();
    let est = estimate_dimension(&network_to_streets(&net), 1.0001).unwrap();
    assert!((est.dimension.value() - 3.0).abs() < 0.1);
    for p in net.sample_points(1000, 3) {
        assert!(net.contains(p.location(), 1e-5));
    }

    let centers = vec![Point2::new(0.2f32, 0.3), Point2::new(0.8, 0.4), Point2::new(0.5, 0.9)];
    let city = build_city(&CityConfig::with_centers(centers, 0.2, 0.5, 3)).unwrap();
    assert!((city.total_mass() - 1.0).abs() < 1e-5);
    assert_eq!(city.sample(100, 1).len(), 100);
}
