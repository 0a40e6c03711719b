use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::Point2;
use crate::error::{invalid, Error, Result};
use crate::{rng, Scalar};

/// Slack allowed on `det Σ ≥ 0` and on the smallest eigenvalue.
pub const PSD_TOL: f64 = 1e-12;

/// Symmetric positive-semidefinite 2×2 matrix `[[sxx, sxy], [sxy, syy]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CovarianceSpec<T> {
    sxx: T,
    sxy: T,
    syy: T,
}

impl<T: Scalar> CovarianceSpec<T> {
    pub fn new(sxx: T, sxy: T, syy: T) -> Result<Self> {
        if !(sxx.is_finite() && sxy.is_finite() && syy.is_finite()) {
            return Err(invalid("covariance", "entries must be finite"));
        }
        if sxx < T::zero() || syy < T::zero() {
            return Err(invalid("covariance", "diagonal entries must be nonnegative"));
        }
        let det = sxx * syy - sxy * sxy;
        if det.as_f64() < -PSD_TOL {
            return Err(Error::NotPositiveSemidefinite(det.as_f64()));
        }
        Ok(Self { sxx, sxy, syy })
    }

    pub fn diagonal(sxx: T, syy: T) -> Result<Self> {
        Self::new(sxx, T::zero(), syy)
    }

    /// Builds from a full matrix, rejecting asymmetric input.
    pub fn from_matrix(m: [[T; 2]; 2]) -> Result<Self> {
        if (m[0][1] - m[1][0]).abs().as_f64() > PSD_TOL {
            return Err(invalid("covariance", "matrix is not symmetric"));
        }
        Self::new(m[0][0], m[0][1], m[1][1])
    }

    pub fn matrix(&self) -> [[T; 2]; 2] {
        [[self.sxx, self.sxy], [self.sxy, self.syy]]
    }
}

/// `Σ = Q Λ Qᵀ` with eigenvalues sorted descending.
///
/// `q[j]` is the j-th eigenvector (the j-th column of `Q`), oriented so that its
/// first nonzero component is positive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eigen<T> {
    pub values: [T; 2],
    pub vectors: [Point2<T>; 2],
}

impl<T: Scalar> Eigen<T> {
    /// `Q diag(Λ) Qᵀ`.
    pub fn reconstruct(&self) -> [[T; 2]; 2] {
        let mut m = [[T::zero(); 2]; 2];
        for (v, &l) in self.vectors.iter().zip(&self.values) {
            let c = [v.x, v.y];
            for i in 0..2 {
                for j in 0..2 {
                    m[i][j] = m[i][j] + l * c[i] * c[j];
                }
            }
        }
        m
    }

    /// `Q diag(√Λ)`, the map taking standard normal pairs to `N(0, Σ)`.
    pub fn sqrt_transform(&self) -> [Point2<T>; 2] {
        [self.vectors[0] * self.values[0].sqrt(), self.vectors[1] * self.values[1].sqrt()]
    }
}

fn orient<T: Scalar>(v: Point2<T>) -> Point2<T> {
    let tiny = T::epsilon();
    let first = if v.x.abs() > tiny { v.x } else { v.y };
    if first < T::zero() {
        v * -T::one()
    } else {
        v
    }
}

/// Closed-form eigen-decomposition of a symmetric 2×2 covariance.
pub fn eigen_decompose<T: Scalar>(cov: &CovarianceSpec<T>) -> Result<Eigen<T>> {
    let (a, b, c) = (cov.sxx, cov.sxy, cov.syy);
    let two = T::lit(2.0);
    let mean = (a + c) / two;
    let half_diff = (a - c) / two;
    let radius = half_diff.hypot(b);
    let scale = a.abs().max(c.abs()).max(b.abs());

    let mut lo = mean - radius;
    if lo.as_f64() < -PSD_TOL {
        return Err(Error::NotPositiveSemidefinite(lo.as_f64()));
    }
    if lo < T::zero() {
        lo = T::zero();
    }
    let hi = mean + radius;

    if radius <= T::lit(4.0) * T::epsilon() * scale {
        // repeated eigenvalue: canonical basis
        let one = T::one();
        return Ok(Eigen { values: [hi, lo], vectors: [Point2::new(one, T::zero()), Point2::new(T::zero(), one)] });
    }

    let v =
        if half_diff >= T::zero() { Point2::new(half_diff + radius, b) } else { Point2::new(b, radius - half_diff) };
    let v = v * (T::one() / v.norm());
    let w = Point2::new(-v.y, v.x);
    Ok(Eigen { values: [hi, lo], vectors: [orient(v), orient(w)] })
}

/// Gaussian `N(mean, Σ)` over the plane, used to scatter district centers.
#[derive(Clone, Copy, Debug)]
pub struct GaussianSprawl<T> {
    mean: Point2<T>,
    eigen: Eigen<T>,
    transform: [Point2<T>; 2],
}

impl<T: Scalar> GaussianSprawl<T> {
    pub fn new(mean: Point2<T>, cov: &CovarianceSpec<T>) -> Result<Self> {
        if !mean.is_finite() {
            return Err(invalid("mean", "coordinates must be finite"));
        }
        let eigen = eigen_decompose(cov)?;
        Ok(Self { mean, eigen, transform: eigen.sqrt_transform() })
    }

    pub fn eigen(&self) -> &Eigen<T> {
        &self.eigen
    }

    /// One draw `mean + Q diag(√Λ) z`.
    pub fn draw(&self, rng: &mut ChaCha8Rng) -> Point2<T> {
        let z0 = T::lit(rng.sample::<f64, _>(StandardNormal));
        let z1 = T::lit(rng.sample::<f64, _>(StandardNormal));
        self.mean + self.transform[0] * z0 + self.transform[1] * z1
    }

    /// Unbounded stream of draws for `seed` (substream 0).
    pub fn stream(&self, seed: u64) -> impl Iterator<Item = Point2<T>> + '_ {
        let mut rng = rng::stream(seed, 0);
        std::iter::repeat_with(move || self.draw(&mut rng))
    }

    /// First `n` draws of the stream, without truncation to the unit square.
    pub fn sample_untruncated(&self, n: usize, seed: u64) -> Vec<Point2<T>> {
        self.stream(seed).take(n).collect()
    }

    /// First `n` draws of the stream that fall inside `[0,1]²`.
    ///
    /// Fails after `max_rejects` consecutive rejections.
    pub fn sample_in_unit_square(&self, n: usize, seed: u64, max_rejects: usize) -> Result<Vec<Point2<T>>> {
        let mut out = Vec::with_capacity(n);
        let mut rejects = 0;
        for p in self.stream(seed) {
            if out.len() == n {
                break;
            }
            if p.in_unit_square(T::zero()) {
                out.push(p);
                rejects = 0;
            } else {
                rejects += 1;
                if rejects > max_rejects {
                    return Err(Error::AcceptanceTooLow { rejects });
                }
            }
        }
        Ok(out)
    }
}

/// District centers drawn from `N(mean, Σ)` truncated to the unit square by rejection.
pub fn sample_centers<T: Scalar>(
    n: usize,
    mean: Point2<T>,
    cov: &CovarianceSpec<T>,
    seed: u64,
    max_rejects: usize,
) -> Result<Vec<Point2<T>>> {
    if n == 0 {
        return Err(invalid("n", "at least one center is required"));
    }
    GaussianSprawl::new(mean, cov)?.sample_in_unit_square(n, seed, max_rejects)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn max_err(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> f64 {
        let mut e: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                e = e.max((a[i][j] - b[i][j]).abs());
            }
        }
        e
    }

    #[test]
    fn isotropic_gives_identity() {
        let e = eigen_decompose(&CovarianceSpec::diagonal(0.1, 0.1).unwrap()).unwrap();
        assert_eq!(e.values, [0.1, 0.1]);
        assert_eq!(e.vectors, [Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)]);
    }

    #[test]
    fn anisotropic_orders_descending() {
        let e = eigen_decompose(&CovarianceSpec::diagonal(0.02, 0.7).unwrap()).unwrap();
        assert_abs_diff_eq!(e.values[0], 0.7, epsilon = 1e-15);
        assert_abs_diff_eq!(e.values[1], 0.02, epsilon = 1e-15);
        assert_eq!(e.vectors[0], Point2::new(0.0, 1.0));
        assert_eq!(e.vectors[1], Point2::new(1.0, 0.0));
    }

    #[test]
    fn off_diagonal_hand_case() {
        let e = eigen_decompose(&CovarianceSpec::new(2.0, 1.0, 2.0).unwrap()).unwrap();
        assert_abs_diff_eq!(e.values[0], 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.values[1], 1.0, epsilon = 1e-14);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(e.vectors[0].x, r, epsilon = 1e-14);
        assert_abs_diff_eq!(e.vectors[0].y, r, epsilon = 1e-14);
        assert_abs_diff_eq!(e.vectors[1].x, r, epsilon = 1e-14);
        assert_abs_diff_eq!(e.vectors[1].y, -r, epsilon = 1e-14);
    }

    #[test]
    fn rejects_indefinite() {
        assert!(matches!(CovarianceSpec::new(1.0, 2.0, 1.0), Err(Error::NotPositiveSemidefinite(_))));
        assert!(CovarianceSpec::new(-1.0, 0.0, 1.0).is_err());
        assert!(CovarianceSpec::from_matrix([[1.0, 0.2], [0.3, 1.0]]).is_err());
    }

    #[test]
    fn rank_one_is_allowed() {
        let cov = CovarianceSpec::new(1.0, 1.0, 1.0).unwrap();
        let e = eigen_decompose(&cov).unwrap();
        assert_abs_diff_eq!(e.values[0], 2.0, epsilon = 1e-15);
        assert_eq!(e.values[1], 0.0);
        assert!(max_err(e.reconstruct(), cov.matrix()) < 1e-15);
    }

    #[test]
    fn degenerate_covariance_returns_mean() {
        let mean = Point2::new(0.3, 0.6);
        let pts = sample_centers(5, mean, &CovarianceSpec::diagonal(0.0, 0.0).unwrap(), 1, 10).unwrap();
        assert!(pts.iter().all(|&p| p == mean));
    }

    #[test]
    fn far_mean_exhausts_rejections() {
        let mean = Point2::new(50.0, 50.0);
        let err = sample_centers(3, mean, &CovarianceSpec::diagonal(0.01, 0.01).unwrap(), 1, 100);
        assert!(matches!(err, Err(Error::AcceptanceTooLow { rejects: 101 })));
    }

    #[test]
    fn sampling_is_reproducible() {
        let cov = CovarianceSpec::diagonal(0.1, 0.1).unwrap();
        let a = sample_centers(50, Point2::new(0.5, 0.5), &cov, 42, 1000).unwrap();
        let b = sample_centers(50, Point2::new(0.5, 0.5), &cov, 42, 1000).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|p| p.in_unit_square(0.0)));
    }

    #[test]
    fn anisotropic_spread() {
        let cov = CovarianceSpec::diagonal(0.02, 0.7).unwrap();
        let pts = sample_centers(2000, Point2::new(0.5, 0.5), &cov, 3, 10_000).unwrap();
        let var = |f: fn(&Point2<f64>) -> f64| {
            let m = pts.iter().map(f).sum::<f64>() / pts.len() as f64;
            pts.iter().map(|p| (f(p) - m).powi(2)).sum::<f64>() / pts.len() as f64
        };
        assert!(var(|p| p.y) > var(|p| p.x));
    }

    proptest! {
        #[test]
        fn reconstruction_and_orthogonality(
            l1 in 0.0f64..5.0, l2 in 0.0f64..5.0, theta in 0.0f64..std::f64::consts::PI,
        ) {
            let (s, c) = theta.sin_cos();
            let m = [
                [l1 * c * c + l2 * s * s, (l1 - l2) * c * s],
                [(l1 - l2) * c * s, l1 * s * s + l2 * c * c],
            ];
            let cov = CovarianceSpec::new(m[0][0], m[0][1], m[1][1]).unwrap();
            let e = eigen_decompose(&cov).unwrap();
            prop_assert!(max_err(e.reconstruct(), cov.matrix()) <= 1e-10);
            prop_assert!(e.values[0] >= e.values[1]);
            let [u, v] = e.vectors;
            prop_assert!((u.dot(u) - 1.0).abs() < 1e-12);
            prop_assert!((v.dot(v) - 1.0).abs() < 1e-12);
            prop_assert!(u.dot(v).abs() < 1e-12);
        }
    }
}
