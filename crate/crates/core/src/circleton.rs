//! Circletons: unit circles wrapped ω times and dressed by simple factors
//! sitting at resonance points of the circle's monodromy.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::algebra::{reflection, Matrix2C, ProjectiveLine};
use crate::dressing::{dressed_value, transported_line, DressedFrameFamily, SimpleFactorSpec};
use crate::error::{Error, Result};
use crate::frames::{circle_family, circle_frame, reconstruct_curve, CurveSamples, ExtendedFrame};

/// Tolerance used when merging near-equal neighbours into one plateau.
pub const PLATEAU_TOL: f64 = 1e-9;

/// An ω-wrapped unit circle together with the resonance indices to dress by.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CircletonSpec {
    omega: u32,
    ks: Vec<u32>,
}

impl CircletonSpec {
    pub fn new(omega: u32, ks: Vec<u32>) -> Result<Self> {
        if omega < 1 {
            return Err(Error::InvalidSpec("wrapping number ω must be at least 1".into()));
        }
        if omega == 1 && !ks.is_empty() {
            return Err(Error::InvalidSpec(
                "the once-wrapped circle cannot be dressed: an ω-wrapped circle admits exactly \
                 ω − 1 simple factors, so none for ω = 1"
                    .into(),
            ));
        }
        if let Some(&k) = ks.iter().find(|&&k| k < 1 || k >= omega) {
            return Err(Error::InvalidSpec(format!(
                "k = {k} is not a resonance index of the {omega}-wrapped circle: it admits exactly \
                 ω − 1 simple factors, indexed by 1 ≤ k ≤ {}",
                omega - 1
            )));
        }
        if ks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSpec(format!(
                "resonance indices must be strictly increasing (each resonance point is used once), got {ks:?}"
            )));
        }
        Ok(Self { omega, ks })
    }

    pub fn single(k: u32, omega: u32) -> Result<Self> {
        Self::new(omega, vec![k])
    }

    pub fn omega(&self) -> u32 {
        self.omega
    }

    pub fn ks(&self) -> &[u32] {
        &self.ks
    }

    pub fn period(&self) -> f64 {
        2.0 * PI * self.omega as f64
    }

    pub fn alphas(&self) -> Vec<Complex64> {
        self.ks.iter().map(|&k| resonance_alpha(k, self.omega)).collect()
    }
}

/// `(k₁,k₂;ω)`; the undressed circle prints as `(;ω)`.
impl fmt::Display for CircletonSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ks: Vec<String> = self.ks.iter().map(u32::to_string).collect();
        write!(f, "({};{})", ks.join(","), self.omega)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResonancePoint {
    pub k: u32,
    pub alpha: Complex64,
}

/// α = i·√(1 − k²/ω²).
fn resonance_alpha(k: u32, omega: u32) -> Complex64 {
    let r = k as f64 / omega as f64;
    Complex64::new(0.0, (1.0 - r * r).sqrt())
}

/// Resonance points in (0, i) of the ω-wrapped unit circle, k = 1..ω−1.
pub fn resonance_points(omega: u32) -> Result<Vec<ResonancePoint>> {
    if omega < 1 {
        return Err(Error::InvalidArgument("wrapping number ω must be at least 1".into()));
    }
    Ok((1..omega)
        .map(|k| ResonancePoint {
            k,
            alpha: resonance_alpha(k, omega),
        })
        .collect())
}

/// The dressed frame of a circleton evaluated lazily at any λ other than the
/// resonance points in use.
#[derive(Clone, Debug)]
pub struct CircletonFrame {
    alphas: Vec<Complex64>,
}

impl CircletonFrame {
    pub fn new(spec: &CircletonSpec) -> Self {
        Self { alphas: spec.alphas() }
    }
}

impl ExtendedFrame for CircletonFrame {
    fn frame(&self, lambda: Complex64, t: f64) -> Matrix2C {
        let a = reflection(&ProjectiveLine::e1());
        let mut points = vec![lambda];
        points.extend(&self.alphas);
        let mut values: Vec<Matrix2C> = points.iter().map(|&l| circle_frame(1.0, l, t)).collect();
        for (k, &alpha) in self.alphas.iter().enumerate() {
            let a_prime = match transported_line(&values[k + 1], &ProjectiveLine::e1()) {
                Ok(l) => reflection(&l),
                Err(_) => return Matrix2C::scalar(Complex64::new(f64::NAN, f64::NAN)),
            };
            for i in (0..points.len()).filter(|&i| i == 0 || i > k + 1) {
                values[i] = dressed_value(&values[i], points[i], alpha, &a, &a_prime);
            }
        }
        values[0]
    }
}

/// Samples the circleton on `samples` equispaced points of [0, 2πω).
pub fn make_circleton(spec: &CircletonSpec, samples: usize) -> Result<CurveSamples> {
    if samples < 256 {
        return Err(Error::InvalidArgument(format!(
            "need at least 256 samples, got {samples}"
        )));
    }
    let period = spec.period();
    let alphas = spec.alphas();
    let mut base = circle_family(1.0, period, samples, &alphas);
    base.period = Some(period);

    let mut dressed = DressedFrameFamily::undressed(base);
    for &alpha in &alphas {
        dressed = dressed.dress(SimpleFactorSpec::new(ProjectiveLine::e1(), alpha)?)?;
    }

    let mut curve = reconstruct_curve(&dressed.family, format!("circleton {spec}"))?;
    let closure = curve.points[samples].dist(&curve.points[0]);
    curve.times.truncate(samples);
    curve.points.truncate(samples);
    curve.kappa.truncate(samples);
    curve.tau.truncate(samples);

    let energy = bending_energy(&curve);
    curve.meta.closure_error = Some(closure);
    curve.meta.bending_energy = Some(energy.value);
    curve.meta.energy_trapezoid_cell = energy.trapezoid_cell;
    curve.meta.omega = Some(spec.omega);
    curve.meta.ks = spec.ks.clone();
    curve.meta.alphas = alphas;
    curve.meta.peak_count = Some(count_curvature_peaks(&curve));
    Ok(curve)
}

fn curvature_parts(k: u32, omega: u32, t: f64) -> (f64, f64) {
    let (k, w) = (k as f64, omega as f64);
    let (k2, w2) = (k * k, w * w);
    let r = (1.0 - k2 / w2).sqrt();
    let (s1, c1) = (k * t / w).sin_cos();
    let (s2, c2) = (2.0 * k * t / w).sin_cos();
    let num = (k2 - w2)
        * (2.0 * k * w * r * (2.0 * s1 - s2) + (w2 - 2.0 * k2) * c2 + 4.0 * (k2 - w2) * c1)
        + 5.0 * k2 * w2
        - 3.0 * w2 * w2;
    let den = w * (4.0 * k * r * s1 * ((k2 - w2) * c1 + w2) - k2 * w + 3.0 * w2 * w)
        + (2.0 * k2 * k2 - 3.0 * k2 * w2 + w2 * w2) * c2
        + 4.0 * w2 * (k2 - w2) * c1;
    (num, den)
}

/// Closed-form signed curvature of the (k, ω)-circleton.
///
/// # Panics
/// If k is not in 1..ω.
pub fn circleton_curvature(k: u32, omega: u32, t: f64) -> f64 {
    assert!(k >= 1 && k < omega, "need 1 ≤ k < ω, got k = {k}, ω = {omega}");
    let (num, den) = curvature_parts(k, omega, t);
    num / den
}

/// [`circleton_curvature`] with argument checks and a guard against a
/// vanishing denominator.
pub fn circleton_curvature_checked(k: u32, omega: u32, t: f64) -> Result<f64> {
    CircletonSpec::single(k, omega)?;
    if !t.is_finite() {
        return Err(Error::NonFinite("t"));
    }
    let (num, den) = curvature_parts(k, omega, t);
    let w = omega as f64;
    if den.abs() < 1e-12 * w.powi(4) {
        return Err(Error::VanishingDenominator(t));
    }
    Ok(num / den)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// Simpson's rule needed one trapezoid cell to cover an odd interval count.
    pub trapezoid_cell: bool,
}

/// ∫κ² dt by composite Simpson. Periodic curves integrate over [0, ϱ] using
/// κ(ϱ) = κ(0); others over the sampled range.
pub fn bending_energy(curve: &CurveSamples) -> Quadrature {
    let mut y: Vec<f64> = curve.kappa.iter().map(|k| k * k).collect();
    if curve.meta.period.is_some() {
        if let Some(&first) = y.first() {
            y.push(first);
        }
    }
    let h = curve.step();
    let intervals = y.len().saturating_sub(1);
    if intervals == 0 {
        return Quadrature { value: 0.0, trapezoid_cell: false };
    }
    let even = intervals - intervals % 2;
    let mut sum = 0.0;
    for j in (0..even).step_by(2) {
        sum += y[j] + 4.0 * y[j + 1] + y[j + 2];
    }
    let mut value = sum * h / 3.0;
    let trapezoid_cell = intervals % 2 == 1;
    if trapezoid_cell {
        value += 0.5 * h * (y[intervals - 1] + y[intervals]);
    }
    Quadrature { value, trapezoid_cell }
}

/// Strict local maxima of κ, comparing cyclically when the curve is periodic.
/// Runs of neighbours within [`PLATEAU_TOL`] count as one sample.
pub fn count_curvature_peaks(curve: &CurveSamples) -> usize {
    let mut runs: Vec<f64> = Vec::new();
    for &k in &curve.kappa {
        match runs.last() {
            Some(&last) if (k - last).abs() <= PLATEAU_TOL => {}
            _ => runs.push(k),
        }
    }
    let cyclic = curve.meta.period.is_some();
    if cyclic && runs.len() > 1 && (runs[0] - runs[runs.len() - 1]).abs() <= PLATEAU_TOL {
        runs.pop();
    }
    let n = runs.len();
    if n < 3 {
        return if cyclic && n == 2 { 1 } else { 0 };
    }
    (0..n)
        .filter(|&i| {
            let prev = if i == 0 {
                cyclic.then(|| runs[n - 1])
            } else {
                Some(runs[i - 1])
            };
            let next = if i + 1 == n { cyclic.then(|| runs[0]) } else { Some(runs[i + 1]) };
            match (prev, next) {
                (Some(p), Some(q)) => runs[i] > p && runs[i] > q,
                _ => false,
            }
        })
        .count()
}

/// All size-element subsets of {1, …, ω−1} in lexicographic order.
pub fn enumerate_multicircletons(omega: u32, size: u32) -> Result<Vec<CircletonSpec>> {
    if omega < 1 {
        return Err(Error::InvalidArgument("wrapping number ω must be at least 1".into()));
    }
    if size > omega - 1 {
        return Err(Error::InvalidArgument(format!(
            "size {size} exceeds the ω − 1 = {} resonance points",
            omega - 1
        )));
    }
    let n = omega - 1;
    let size = size as usize;
    let mut out = Vec::new();
    let mut current: Vec<u32> = (1..=size as u32).collect();
    loop {
        out.push(CircletonSpec { omega, ks: current.clone() });
        // advance to the next combination
        let mut i = size;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if current[i] < n - (size - 1 - i) as u32 {
                break;
            }
        }
        current[i] += 1;
        for j in i + 1..size {
            current[j] = current[j - 1] + 1;
        }
    }
}

/// C(n, k).
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
