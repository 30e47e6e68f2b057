//! Extended frames F_λ(t) solving Ḟ = F·V(q, λ), F(0) = 𝟙, and the curve data
//! read off from them: the Sym point γ = 2·∂_λF·F⁻¹ at λ = 0, monodromy,
//! closing conditions, complex curvature, curvature and torsion.

use num_complex::Complex64;

use crate::algebra::{
    expm_tracefree, expm_tracefree_derivative, sigma3, su2_project, Matrix2C, Su2Vector, I, ONE,
};
use crate::error::{Error, Result};

/// Tolerance on |det F − 1| and ‖F Fᴴ − 𝟙‖ for a valid frame family.
pub const FRAME_TOL: f64 = 1e-8;
/// |det F − 1| beyond which integration is reported as too coarse.
pub const DET_DRIFT_TOL: f64 = 1e-6;
/// Below this modulus of q, torsion is reported as undefined.
pub const TORSION_FLOOR: f64 = 1e-8;

/// V(q, λ) = ½ (iλ, q; −q̄, −iλ).
pub fn coefficient_matrix(q: Complex64, lambda: Complex64) -> Matrix2C {
    Matrix2C::new(I * lambda, q, -q.conj(), -I * lambda) * 0.5
}

/// ∂V/∂λ = σ₃/2, independent of q and λ.
pub fn coefficient_lambda_derivative() -> Matrix2C {
    sigma3() * 0.5
}

/// A complex curvature function q(t) = κ(t)·exp(i∫τ).
#[derive(Clone, Debug, PartialEq)]
pub enum ComplexCurvatureSignal {
    /// Constant curvature and torsion: q(t) = κ·e^{iτt}.
    Helix { kappa: f64, tau: f64 },
    Sampled(SampledSignal),
}

/// q sampled on the uniform grid tᵢ = i·step, i = 0..len.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledSignal {
    pub step: f64,
    pub values: Vec<Complex64>,
}

impl SampledSignal {
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(|i| i as f64 * self.step)
    }

    /// Four-point Lagrange interpolation; exact at grid points.
    pub fn eval(&self, t: f64) -> Complex64 {
        let n = self.values.len();
        if n == 1 {
            return self.values[0];
        }
        let x = t / self.step;
        let nearest = x.round();
        if (x - nearest).abs() < 1e-12 && nearest >= 0.0 && (nearest as usize) < n {
            return self.values[nearest as usize];
        }
        if n < 4 {
            let i = (x.floor().max(0.0) as usize).min(n - 2);
            let s = x - i as f64;
            return self.values[i] * (1.0 - s) + self.values[i + 1] * s;
        }
        let base = (x.floor() as isize - 1).clamp(0, n as isize - 4) as usize;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..4 {
            let mut w = 1.0;
            for m in 0..4 {
                if m != j {
                    w *= (x - (base + m) as f64) / (j as f64 - m as f64);
                }
            }
            acc += self.values[base + j] * w;
        }
        acc
    }
}

impl ComplexCurvatureSignal {
    pub fn constant(kappa: f64) -> Self {
        Self::Helix { kappa, tau: 0.0 }
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        match self {
            Self::Helix { kappa, tau } => Complex64::from_polar(*kappa, tau * t),
            Self::Sampled(s) => s.eval(t),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = match self {
            Self::Helix { kappa, tau } => kappa.is_finite() && tau.is_finite(),
            Self::Sampled(s) => s.step.is_finite() && s.values.iter().all(|z| z.is_finite()),
        };
        if finite {
            Ok(())
        } else {
            Err(Error::NonFinite("complex curvature samples"))
        }
    }

    pub fn sample(&self, step: f64, len: usize) -> SampledSignal {
        SampledSignal {
            step,
            values: (0..len).map(|i| self.eval(i as f64 * step)).collect(),
        }
    }
}

/// Frame samples F_λ(tᵢ) at one designated spectral value.
#[derive(Clone, Debug)]
pub struct LambdaSamples {
    pub lambda: Complex64,
    pub frames: Vec<Matrix2C>,
}

/// An extended frame sampled on tᵢ = i·step, i = 0..len: F₀, D = ∂_λF|₀ and
/// optionally F_λ at designated λ.
#[derive(Clone, Debug)]
pub struct FrameFamily {
    pub step: f64,
    pub f0: Vec<Matrix2C>,
    pub d: Vec<Matrix2C>,
    pub extra: Vec<LambdaSamples>,
    pub period: Option<f64>,
}

impl FrameFamily {
    pub fn len(&self) -> usize {
        self.f0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f0.is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.step
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.time(i)).collect()
    }

    /// Samples at a designated λ, matched within 1e-12.
    pub fn samples_at(&self, lambda: Complex64) -> Option<&[Matrix2C]> {
        self.extra
            .iter()
            .find(|s| (s.lambda - lambda).norm() < 1e-12)
            .map(|s| s.frames.as_slice())
    }

    /// Index of the grid point equal to t (relative tolerance 1e-9).
    pub fn grid_index(&self, t: f64) -> Result<usize> {
        let x = t / self.step;
        let i = x.round();
        if (x - i).abs() > 1e-9 * x.abs().max(1.0) || i < 0.0 || i as usize >= self.len() {
            return Err(Error::NotOnGrid(t));
        }
        Ok(i as usize)
    }

    /// Largest |det F − 1| over all samples and λ, largest unitarity defect of
    /// F₀, and ‖F₀(0) − 𝟙‖ + ‖D(0)‖.
    pub fn invariant_defects(&self) -> (f64, f64, f64) {
        let det = self
            .f0
            .iter()
            .chain(self.extra.iter().flat_map(|s| s.frames.iter()))
            .map(|f| (f.det() - ONE).norm())
            .fold(0.0, f64::max);
        let unit = self
            .f0
            .iter()
            .map(Matrix2C::unitarity_defect)
            .fold(0.0, f64::max);
        let start = match (self.f0.first(), self.d.first()) {
            (Some(f), Some(d)) => (*f - Matrix2C::identity()).norm() + d.norm(),
            _ => 0.0,
        };
        (det, unit, start)
    }

    pub fn check_invariants(&self) -> Result<()> {
        let (det, unit, start) = self.invariant_defects();
        if det > FRAME_TOL || unit > FRAME_TOL || start > FRAME_TOL {
            return Err(Error::InconsistentFrame(det.max(unit).max(start)));
        }
        Ok(())
    }
}

/// Evaluates an extended frame at arbitrary spectral value and time.
pub trait ExtendedFrame {
    fn frame(&self, lambda: Complex64, t: f64) -> Matrix2C;
}

impl<F: Fn(Complex64, f64) -> Matrix2C> ExtendedFrame for F {
    fn frame(&self, lambda: Complex64, t: f64) -> Matrix2C {
        self(lambda, t)
    }
}

/// Closed-form frame of the circle of radius 1/κ.
#[derive(Clone, Copy, Debug)]
pub struct CircleFrame {
    pub kappa: f64,
}

impl ExtendedFrame for CircleFrame {
    fn frame(&self, lambda: Complex64, t: f64) -> Matrix2C {
        circle_frame(self.kappa, lambda, t)
    }
}

/// exp(t·V(κ, λ)) = cos(ts/2)·𝟙 + (2/s)·sin(ts/2)·V(κ, λ), s = √(κ² + λ²).
pub fn circle_frame(kappa: f64, lambda: Complex64, t: f64) -> Matrix2C {
    expm_tracefree(&(coefficient_matrix(kappa.into(), lambda) * t))
}

/// ∂/∂λ of [`circle_frame`].
pub fn circle_frame_lambda_derivative(kappa: f64, lambda: Complex64, t: f64) -> Matrix2C {
    let m = coefficient_matrix(kappa.into(), lambda) * t;
    expm_tracefree_derivative(&m, &(coefficient_lambda_derivative() * t))
}

/// Closed-form circle family on tᵢ = i·tmax/steps, i = 0..=steps.
pub fn circle_family(kappa: f64, tmax: f64, steps: usize, extra_lambdas: &[Complex64]) -> FrameFamily {
    let step = tmax / steps as f64;
    let times: Vec<f64> = (0..=steps).map(|i| i as f64 * step).collect();
    FrameFamily {
        step,
        f0: times.iter().map(|&t| circle_frame(kappa, 0.0.into(), t)).collect(),
        d: times
            .iter()
            .map(|&t| circle_frame_lambda_derivative(kappa, 0.0.into(), t))
            .collect(),
        extra: extra_lambdas
            .iter()
            .map(|&lambda| LambdaSamples {
                lambda,
                frames: times.iter().map(|&t| circle_frame(kappa, lambda, t)).collect(),
            })
            .collect(),
        period: None,
    }
}

fn check_det(f: &Matrix2C, t: f64) -> Result<()> {
    let det = f.det();
    let drift = (det - ONE).norm();
    if !f.is_finite() {
        return Err(Error::NonFinite("integrated frame"));
    }
    if drift > DET_DRIFT_TOL {
        return Err(Error::DeterminantDrift { det, drift, t });
    }
    Ok(())
}

/// Classical fourth-order Runge–Kutta on Ḟ = F·V(q, λ) and, at λ = 0, on the
/// variational equation Ḋ = D·V + F·σ₃/2.
pub fn integrate_frame(
    q: &ComplexCurvatureSignal,
    tmax: f64,
    steps: usize,
    extra_lambdas: &[Complex64],
) -> Result<FrameFamily> {
    if steps < 16 {
        return Err(Error::InvalidArgument(format!(
            "integrate_frame needs at least 16 steps, got {steps}"
        )));
    }
    if !(tmax > 0.0) || !tmax.is_finite() {
        return Err(Error::InvalidArgument(format!("tmax must be positive, got {tmax}")));
    }
    q.validate()?;
    let h = tmax / steps as f64;
    let dv = coefficient_lambda_derivative();
    let zero = Complex64::new(0.0, 0.0);

    let mut f0 = Vec::with_capacity(steps + 1);
    let mut d = Vec::with_capacity(steps + 1);
    let (mut f, mut g) = (Matrix2C::identity(), Matrix2C::zero());
    f0.push(f);
    d.push(g);
    for i in 0..steps {
        let t = i as f64 * h;
        let v1 = coefficient_matrix(q.eval(t), zero);
        let v2 = coefficient_matrix(q.eval(t + 0.5 * h), zero);
        let v4 = coefficient_matrix(q.eval(t + h), zero);
        let kf1 = f * v1;
        let kd1 = g * v1 + f * dv;
        let (fa, ga) = (f + kf1 * (0.5 * h), g + kd1 * (0.5 * h));
        let kf2 = fa * v2;
        let kd2 = ga * v2 + fa * dv;
        let (fb, gb) = (f + kf2 * (0.5 * h), g + kd2 * (0.5 * h));
        let kf3 = fb * v2;
        let kd3 = gb * v2 + fb * dv;
        let (fc, gc) = (f + kf3 * h, g + kd3 * h);
        let kf4 = fc * v4;
        let kd4 = gc * v4 + fc * dv;
        f += (kf1 + kf2 * 2.0 + kf3 * 2.0 + kf4) * (h / 6.0);
        g += (kd1 + kd2 * 2.0 + kd3 * 2.0 + kd4) * (h / 6.0);
        check_det(&f, t + h)?;
        f0.push(f);
        d.push(g);
    }

    let mut extra = Vec::with_capacity(extra_lambdas.len());
    for &lambda in extra_lambdas {
        let mut f = Matrix2C::identity();
        let mut frames = Vec::with_capacity(steps + 1);
        frames.push(f);
        for i in 0..steps {
            let t = i as f64 * h;
            let v1 = coefficient_matrix(q.eval(t), lambda);
            let v2 = coefficient_matrix(q.eval(t + 0.5 * h), lambda);
            let v4 = coefficient_matrix(q.eval(t + h), lambda);
            let k1 = f * v1;
            let k2 = (f + k1 * (0.5 * h)) * v2;
            let k3 = (f + k2 * (0.5 * h)) * v2;
            let k4 = (f + k3 * h) * v4;
            f += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
            check_det(&f, t + h)?;
            frames.push(f);
        }
        extra.push(LambdaSamples { lambda, frames });
    }

    Ok(FrameFamily {
        step: h,
        f0,
        d,
        extra,
        period: None,
    })
}

/// γ = 2·D·F₀⁻¹ projected onto su₂; fails when the discarded part exceeds 1e-6.
pub fn sym_curve(f0: &Matrix2C, d: &Matrix2C) -> Result<Su2Vector> {
    let det = f0.det();
    if (det - ONE).norm() > FRAME_TOL {
        return Err(Error::InconsistentFrame((det - ONE).norm()));
    }
    let x = *d * f0.adjugate() * 2.0 / det;
    let (p, remainder) = su2_project(&x);
    if remainder > 1e-6 {
        return Err(Error::InconsistentFrame(remainder));
    }
    Ok(Su2Vector::from_matrix_unchecked(&p))
}

/// (M₀(ϱ), M₀′(ϱ)) = (F₀(ϱ), D(ϱ)).
pub fn monodromy(family: &FrameFamily, period: f64) -> Result<(Matrix2C, Matrix2C)> {
    let i = family.grid_index(period)?;
    Ok((family.f0[i], family.d[i]))
}

/// M₀ = ±𝟙 and M₀′ = 0 within `tol`.
pub fn closing_check(m0: &Matrix2C, m0_prime: &Matrix2C, tol: f64) -> bool {
    let id = Matrix2C::identity();
    let to_center = (*m0 - id).norm().min((*m0 + id).norm());
    to_center < tol && m0_prime.norm() < tol
}

/// Fourth-order finite-difference derivative of uniformly sampled values,
/// one-sided at the ends.
pub(crate) fn fd_derivative<T>(values: &[T], h: f64) -> Vec<T>
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T>,
{
    let n = values.len();
    assert!(n >= 5, "need at least 5 samples for fourth-order differences");
    let v = values;
    let s = 1.0 / (12.0 * h);
    (0..n)
        .map(|i| {
            if i >= 2 && i + 2 < n {
                (v[i - 2] - v[i + 2] + (v[i + 1] - v[i - 1]) * 8.0) * s
            } else if i == 0 {
                (v[1] * 48.0 - v[0] * 25.0 - v[2] * 36.0 + v[3] * 16.0 - v[4] * 3.0) * s
            } else if i == 1 {
                (v[2] * 18.0 - v[0] * 3.0 - v[1] * 10.0 - v[3] * 6.0 + v[4]) * s
            } else if i == n - 2 {
                (v[n - 1] * 3.0 + v[n - 2] * 10.0 - v[n - 3] * 18.0 + v[n - 4] * 6.0 - v[n - 5]) * s
            } else {
                (v[n - 1] * 25.0 - v[n - 2] * 48.0 + v[n - 3] * 36.0 - v[n - 4] * 16.0
                    + v[n - 5] * 3.0)
                    * s
            }
        })
        .collect()
}

/// q(t) = 2·(F₀⁻¹Ḟ₀)₁₂ with Ḟ₀ from fourth-order differences.
pub fn complex_curvature_from_frames(family: &FrameFamily) -> Result<SampledSignal> {
    if family.len() < 5 {
        return Err(Error::InvalidArgument(
            "need at least 5 frame samples to differentiate".into(),
        ));
    }
    let deriv = if is_closed(family) {
        // F(t + ϱ) = C·F(t) with C = F(ϱ)·F(0)⁻¹, and q ignores the constant C
        let n = family.len() - 1;
        let f = &family.f0;
        let c = f[n] * f[0].inverse().ok_or(Error::NotAFrame(f64::INFINITY))?;
        let c_inv = c.inverse().ok_or(Error::NotAFrame(f64::INFINITY))?;
        let mut ext = vec![c_inv * f[n - 2], c_inv * f[n - 1]];
        ext.extend_from_slice(f);
        ext.extend([c * f[1], c * f[2]]);
        fd_derivative(&ext, family.step)[2..n + 3].to_vec()
    } else {
        fd_derivative(&family.f0, family.step)
    };
    let mut values = Vec::with_capacity(family.len());
    for (f, df) in family.f0.iter().zip(&deriv) {
        let x = f.adjugate() * *df / f.det();
        // the difference error scales with the size of F⁻¹Ḟ
        let residual = x.at(0, 0).norm();
        if residual > 1e-5 * (1.0 + x.norm()) {
            return Err(Error::NotAFrame(residual));
        }
        values.push(x.at(0, 1) * 2.0);
    }
    Ok(SampledSignal {
        step: family.step,
        values,
    })
}

/// Curvature and torsion along a sampled signal; `None` marks samples where
/// torsion is undefined (|q| below [`TORSION_FLOOR`]).
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTorsion {
    pub kappa: Vec<f64>,
    pub tau: Vec<Option<f64>>,
}

/// Whether the family spans exactly one period, so that its last sample is
/// the first one advanced by ϱ.
fn is_closed(family: &FrameFamily) -> bool {
    match family.period {
        Some(p) if family.len() >= 6 => {
            ((family.len() - 1) as f64 * family.step - p).abs() <= 1e-9 * p.abs().max(1.0)
        }
        _ => false,
    }
}

fn torsion(q: &SampledSignal, periodic: bool) -> Vec<Option<f64>> {
    let n = q.values.len();
    if n < 5 || (periodic && n < 6) {
        return vec![None; n];
    }
    let dq = if periodic {
        let v = &q.values;
        let mut ext = vec![v[n - 3], v[n - 2]];
        ext.extend_from_slice(v);
        ext.extend([v[1], v[2]]);
        fd_derivative(&ext, q.step)[2..n + 2].to_vec()
    } else {
        fd_derivative(&q.values, q.step)
    };
    q.values
        .iter()
        .zip(dq)
        .map(|(&z, dz)| (z.norm() >= TORSION_FLOOR).then(|| (dz / z).im))
        .collect()
}

/// κ = |q|, τ = Im(q̇/q).
pub fn curvature_torsion(q: &SampledSignal) -> CurvatureTorsion {
    CurvatureTorsion {
        kappa: q.values.iter().map(|z| z.norm()).collect(),
        tau: torsion(q, false),
    }
}

/// Like [`curvature_torsion`] but with κ carrying a sign chosen so that the
/// phase of q/κ is continuous, starting positive. |κ| = |q| everywhere; κ
/// changes sign where q passes through zero.
pub fn signed_curvature_torsion(q: &SampledSignal) -> CurvatureTorsion {
    signed_impl(q, false)
}

fn signed_impl(q: &SampledSignal, periodic: bool) -> CurvatureTorsion {
    let mut phase: Option<Complex64> = None;
    let kappa = q
        .values
        .iter()
        .map(|&z| {
            let m = z.norm();
            if m < 1e-12 {
                return 0.0;
            }
            let u = z / m;
            match phase {
                Some(e) if (u * e.conj()).re < 0.0 => {
                    phase = Some(-u);
                    -m
                }
                _ => {
                    phase = Some(u);
                    m
                }
            }
        })
        .collect();
    CurvatureTorsion {
        kappa,
        tau: torsion(q, periodic),
    }
}

/// Descriptive data attached to exported curves.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CurveMetadata {
    pub source: String,
    pub period: Option<f64>,
    pub closure_error: Option<f64>,
    pub bending_energy: Option<f64>,
    /// Set when Simpson's rule had to close with one trapezoid cell.
    pub energy_trapezoid_cell: bool,
    pub omega: Option<u32>,
    pub ks: Vec<u32>,
    pub alphas: Vec<Complex64>,
    pub peak_count: Option<usize>,
}

/// Arc-length samples of a curve. When `meta.period` is set the samples cover
/// [0, ϱ) and the point at ϱ is omitted.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CurveSamples {
    pub times: Vec<f64>,
    pub points: Vec<Su2Vector>,
    pub kappa: Vec<f64>,
    pub tau: Vec<Option<f64>>,
    pub meta: CurveMetadata,
}

impl CurveSamples {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn step(&self) -> f64 {
        if self.times.len() > 1 {
            self.times[1] - self.times[0]
        } else {
            0.0
        }
    }
}

/// Sym points, signed curvature and torsion for every sample of a family.
pub fn reconstruct_curve(family: &FrameFamily, source: impl Into<String>) -> Result<CurveSamples> {
    let points = family
        .f0
        .iter()
        .zip(&family.d)
        .map(|(f, d)| sym_curve(f, d))
        .collect::<Result<Vec<_>>>()?;
    let q = complex_curvature_from_frames(family)?;
    // on a closed family the last sample repeats the first one period later
    let ct = signed_impl(&q, is_closed(family));
    Ok(CurveSamples {
        times: family.times(),
        points,
        kappa: ct.kappa,
        tau: ct.tau,
        meta: CurveMetadata {
            source: source.into(),
            period: family.period,
            ..Default::default()
        },
    })
}
