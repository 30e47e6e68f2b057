use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::algebra::{Matrix2C, ONE};
use crate::error::{Error, Result};

/// A matrix loop on the circle C_r = {|λ| = r}, stored by its truncated
/// Fourier coefficients ĉ_j, j = −N..N, so that g(r·e^{iθ}) = Σ ĉ_j e^{ijθ}.
/// The coefficient of λ^j is ĉ_j / r^j.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentLoop {
    radius: f64,
    order: usize,
    coeffs: Vec<Matrix2C>,
}

fn transform(values: &[Matrix2C], inverse: bool) -> Vec<Matrix2C> {
    let m = values.len();
    let mut planner = FftPlanner::<f64>::new();
    let fft = if inverse {
        planner.plan_fft_inverse(m)
    } else {
        planner.plan_fft_forward(m)
    };
    let mut out = vec![Matrix2C::zero(); m];
    for e in 0..4 {
        let mut buf: Vec<Complex64> = values.iter().map(|v| v.m[e]).collect();
        fft.process(&mut buf);
        for (o, b) in out.iter_mut().zip(buf) {
            o.m[e] = b;
        }
    }
    out
}

impl LaurentLoop {
    fn check_shape(radius: f64, order: usize) -> Result<()> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
        }
        if order < 1 {
            return Err(Error::InvalidArgument("truncation order must be at least 1".into()));
        }
        Ok(())
    }

    /// Coefficients ĉ_{−N}, …, ĉ_N on C_r.
    pub fn from_coefficients(radius: f64, coeffs: Vec<Matrix2C>) -> Result<Self> {
        if coeffs.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "need 2N+1 coefficients, got {}",
                coeffs.len()
            )));
        }
        let order = coeffs.len() / 2;
        Self::check_shape(radius, order)?;
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("Laurent coefficients"));
        }
        Ok(Self { radius, order, coeffs })
    }

    /// Samples `f` at the 2N+1 nodes of C_r and transforms.
    pub fn from_fn(radius: f64, order: usize, f: impl Fn(Complex64) -> Matrix2C) -> Result<Self> {
        Self::check_shape(radius, order)?;
        let samples: Vec<Matrix2C> = nodes(radius, order).into_iter().map(f).collect();
        Self::from_samples(radius, &samples)
    }

    /// From values at the nodes r·e^{2πik/(2N+1)}, k = 0..2N.
    pub fn from_samples(radius: f64, samples: &[Matrix2C]) -> Result<Self> {
        if samples.iter().any(|s| !s.is_finite()) {
            return Err(Error::NonFinite("loop samples"));
        }
        let m = samples.len();
        if m < 3 || m.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!("need 2N+1 ≥ 3 samples, got {m}")));
        }
        let order = m / 2;
        Self::check_shape(radius, order)?;
        let spectrum = transform(samples, false);
        let coeffs = (0..m)
            .map(|i| {
                let j = i as i64 - order as i64;
                spectrum[j.rem_euclid(m as i64) as usize] / m as f64
            })
            .collect();
        Ok(Self { radius, order, coeffs })
    }

    pub fn constant(radius: f64, order: usize, value: Matrix2C) -> Result<Self> {
        Self::check_shape(radius, order)?;
        let mut coeffs = vec![Matrix2C::zero(); 2 * order + 1];
        coeffs[order] = value;
        Ok(Self { radius, order, coeffs })
    }

    pub fn identity(radius: f64, order: usize) -> Result<Self> {
        Self::constant(radius, order, Matrix2C::identity())
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Truncation order N.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coefficients(&self) -> &[Matrix2C] {
        &self.coeffs
    }

    /// ĉ_j, zero outside −N..N.
    pub fn coefficient(&self, j: i64) -> Matrix2C {
        let n = self.order as i64;
        if j < -n || j > n {
            Matrix2C::zero()
        } else {
            self.coeffs[(j + n) as usize]
        }
    }

    /// Coefficient of λ^j.
    pub fn lambda_coefficient(&self, j: i64) -> Matrix2C {
        self.coefficient(j) / self.radius.powi(j as i32)
    }

    pub fn nodes(&self) -> Vec<Complex64> {
        nodes(self.radius, self.order)
    }

    pub fn samples(&self) -> Vec<Matrix2C> {
        let m = self.coeffs.len();
        let n = self.order as i64;
        let mut spectrum = vec![Matrix2C::zero(); m];
        for (i, c) in self.coeffs.iter().enumerate() {
            spectrum[(i as i64 - n).rem_euclid(m as i64) as usize] = *c;
        }
        transform(&spectrum, true)
    }

    /// Σ ĉ_j (λ/r)^j at any λ ≠ 0.
    pub fn eval(&self, lambda: Complex64) -> Matrix2C {
        let z = lambda / self.radius;
        let n = self.order;
        let mut acc = self.coeffs[n];
        let mut zp = ONE;
        let zinv = z.inv();
        let mut zm = ONE;
        for j in 1..=n {
            zp *= z;
            zm *= zinv;
            if self.coeffs[n + j].norm() > 0.0 {
                acc += self.coeffs[n + j] * zp;
            }
            if self.coeffs[n - j].norm() > 0.0 {
                acc += self.coeffs[n - j] * zm;
            }
        }
        acc
    }

    /// (1/2πi)∮ g(λ)/λ dλ over C_r by the trapezoidal rule on the samples.
    pub fn cauchy_value_at_zero(&self) -> Matrix2C {
        let s = self.samples();
        s.iter().fold(Matrix2C::zero(), |a, b| a + *b) / s.len() as f64
    }

    /// (1/2πi)∮ g(λ)/λ² dλ over C_r.
    pub fn cauchy_derivative_at_zero(&self) -> Matrix2C {
        let s = self.samples();
        let nodes = self.nodes();
        s.iter()
            .zip(nodes)
            .fold(Matrix2C::zero(), |a, (g, l)| a + *g / l)
            / s.len() as f64
    }

    pub fn max_coefficient_norm(&self) -> f64 {
        self.coeffs.iter().map(Matrix2C::norm).fold(0.0, f64::max)
    }

    /// Largest norm among the outermost two coefficients on either side,
    /// relative to the largest coefficient.
    pub fn tail_ratio(&self) -> f64 {
        let n = self.order as i64;
        let max = self.max_coefficient_norm();
        if max == 0.0 {
            return 0.0;
        }
        [n, n - 1, -n, -(n - 1)]
            .iter()
            .map(|&j| self.coefficient(j).norm())
            .fold(0.0, f64::max)
            / max
    }

    /// Largest |det g − 1| over the nodes.
    pub fn unimodularity_defect(&self) -> f64 {
        self.samples()
            .iter()
            .map(|s| (s.det() - ONE).norm())
            .fold(0.0, f64::max)
    }

    /// Pointwise product, recomputed from the samples. Both loops must share
    /// radius and order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_grid(other)?;
        let a = self.samples();
        let b = other.samples();
        let prod: Vec<Matrix2C> = a.iter().zip(&b).map(|(x, y)| *x * *y).collect();
        Self::from_samples(self.radius, &prod)
    }

    /// Largest pointwise distance at the nodes.
    pub fn max_deviation(&self, other: &Self) -> Result<f64> {
        self.same_grid(other)?;
        Ok(self
            .samples()
            .iter()
            .zip(other.samples())
            .map(|(a, b)| (*a - b).norm())
            .fold(0.0, f64::max))
    }

    fn same_grid(&self, other: &Self) -> Result<()> {
        if self.order != other.order || (self.radius - other.radius).abs() > 0.0 {
            return Err(Error::InvalidArgument(
                "loops live on different circles or truncation orders".into(),
            ));
        }
        Ok(())
    }
}

/// r·e^{2πik/(2N+1)}, k = 0..2N.
pub fn nodes(radius: f64, order: usize) -> Vec<Complex64> {
    let m = 2 * order + 1;
    (0..m)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / m as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{c, sigma1, sigma2, sigma3};

    fn poly(l: Complex64) -> Matrix2C {
        sigma1() * (l * l) + sigma2() / l + sigma3() * 0.5 + Matrix2C::identity()
    }

    #[test]
    fn round_trip_between_samples_and_coefficients() {
        let g = LaurentLoop::from_fn(2.0, 8, poly).unwrap();
        for (s, l) in g.samples().iter().zip(g.nodes()) {
            assert!((*s - poly(l)).norm() < 1e-12);
        }
        for l in [c(2.0, 0.0), c(0.3, 1.9), c(1.0, 1.0)] {
            assert!((g.eval(l) - poly(l)).norm() < 1e-12);
        }
        assert!((g.lambda_coefficient(2) - sigma1()).norm() < 1e-13);
        assert!((g.lambda_coefficient(-1) - sigma2()).norm() < 1e-13);
        assert!(g.lambda_coefficient(5).norm() < 1e-13);
        assert!(g.tail_ratio() < 1e-13);
    }

    #[test]
    fn cauchy_integrals_read_off_coefficients() {
        let f = |l: Complex64| sigma1() + sigma2() * l + sigma3() * (l * l * 0.25);
        let g = LaurentLoop::from_fn(1.5, 16, f).unwrap();
        assert!((g.cauchy_value_at_zero() - sigma1()).norm() < 1e-10);
        assert!((g.cauchy_derivative_at_zero() - sigma2()).norm() < 1e-10);
    }

    #[test]
    fn shape_errors() {
        assert!(LaurentLoop::from_fn(0.0, 4, poly).is_err());
        assert!(LaurentLoop::from_fn(1.0, 0, poly).is_err());
        assert!(LaurentLoop::from_coefficients(1.0, vec![Matrix2C::zero(); 4]).is_err());
        assert!(LaurentLoop::from_fn(1.0, 4, |_| Matrix2C::scalar(c(f64::NAN, 0.0))).is_err());
        let a = LaurentLoop::identity(1.0, 4).unwrap();
        let b = LaurentLoop::identity(2.0, 4).unwrap();
        assert!(a.mul(&b).is_err());
    }
}
