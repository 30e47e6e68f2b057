//! Simple factors h_{L,α} and the closed-form dressing h_{L,α} # F_λ =
//! h_{L,α}·F_λ·h⁻¹_{L′,α} with L′ = F_α⁻¹·L.
//!
//! The dressing path never touches a square root: the two scalar
//! normalizations combine into λ²/(λ² − α²), giving
//!
//! ```text
//! (h # F)(λ) = (λ𝟙 + αA)·F_λ·(λ𝟙 − αA′) / (λ² − α²),   A = π_L^⊥ − π_L.
//! ```

use std::sync::Arc;

use num_complex::Complex64;

use crate::algebra::{hermitian_projector, reflection, Matrix2C, ProjectiveLine, ONE};
use crate::error::{Error, Result};
use crate::frames::{ExtendedFrame, FrameFamily, LambdaSamples, FRAME_TOL};

/// Sine-of-angle tolerance for the eigenline condition M_α⁻¹L = L.
pub const EIGENLINE_TOL: f64 = 1e-8;

/// A line L ∈ CP¹ and a singularity α off the real axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimpleFactorSpec {
    pub line: ProjectiveLine,
    pub alpha: Complex64,
}

impl SimpleFactorSpec {
    pub fn new(line: ProjectiveLine, alpha: Complex64) -> Result<Self> {
        if !alpha.is_finite() || alpha.im == 0.0 {
            return Err(Error::InvalidArgument(format!(
                "simple factor singularity must lie off the real line, got {alpha}"
            )));
        }
        Ok(Self { line, alpha })
    }

    fn check_regular(&self, lambda: Complex64) -> Result<()> {
        let eps = 1e-14 * self.alpha.norm().max(1.0);
        if lambda.norm() < eps
            || (lambda - self.alpha).norm() < eps
            || (lambda + self.alpha).norm() < eps
        {
            return Err(Error::SingularPoint(lambda));
        }
        Ok(())
    }

    /// √((λ − α)/(λ + α)), principal branch: cut on the segment [−α, α], value
    /// 1 at ∞.
    fn root(&self, lambda: Complex64) -> Complex64 {
        ((lambda - self.alpha) / (lambda + self.alpha)).sqrt()
    }
}

/// h_{L,α}(λ) = ρ·π_L + ρ⁻¹·π_L^⊥ with ρ = √((λ − α)/(λ + α)).
///
/// This equals (1 − α²λ⁻²)^{-1/2}(𝟙 + αλ⁻¹(π_L^⊥ − π_L)) for the branch fixed
/// by h(∞) = 𝟙. The global sign of h is a branch choice and cancels in every
/// curve quantity.
pub fn simple_factor_eval(s: &SimpleFactorSpec, lambda: Complex64) -> Result<Matrix2C> {
    s.check_regular(lambda)?;
    let rho = s.root(lambda);
    let p = hermitian_projector(&s.line);
    Ok(p * rho + (Matrix2C::identity() - p) / rho)
}

pub fn simple_factor_inverse_eval(s: &SimpleFactorSpec, lambda: Complex64) -> Result<Matrix2C> {
    s.check_regular(lambda)?;
    let rho = s.root(lambda);
    let p = hermitian_projector(&s.line);
    Ok(p / rho + (Matrix2C::identity() - p) * rho)
}

/// L′ = F_α⁻¹·L.
pub fn transported_line(f_alpha: &Matrix2C, line: &ProjectiveLine) -> Result<ProjectiveLine> {
    let det = f_alpha.det();
    if (det - ONE).norm() > FRAME_TOL {
        return Err(Error::InconsistentFrame((det - ONE).norm()));
    }
    line.apply(&f_alpha.adjugate())
}

/// Dressed frame at a regular λ ≠ ±α, from the base value F_λ and the
/// reflections A (for L) and A′ (for L′).
pub fn dressed_value(
    f_lambda: &Matrix2C,
    lambda: Complex64,
    alpha: Complex64,
    a: &Matrix2C,
    a_prime: &Matrix2C,
) -> Matrix2C {
    let id = Matrix2C::identity();
    let left = id * lambda + *a * alpha;
    let right = id * lambda - *a_prime * alpha;
    left * *f_lambda * right / (lambda * lambda - alpha * alpha)
}

/// Dressed (F̂₀, ∂_λF̂|₀) from (F₀, ∂_λF|₀):
/// F̂₀ = A·F₀·A′ and ∂_λF̂|₀ = (F₀A′ − AF₀)/α + A·∂_λF|₀·A′.
pub fn dressed_at_zero(
    f0: &Matrix2C,
    d: &Matrix2C,
    alpha: Complex64,
    a: &Matrix2C,
    a_prime: &Matrix2C,
) -> (Matrix2C, Matrix2C) {
    let g0 = *a * *f0 * *a_prime;
    let dg = (*f0 * *a_prime - *a * *f0) / alpha + *a * *d * *a_prime;
    (g0, dg)
}

/// h_{L,α} # F on sampled data. Needs samples at λ = α; the result carries
/// every designated λ of the input except ±α.
pub fn dress_frame(family: &FrameFamily, s: &SimpleFactorSpec) -> Result<FrameFamily> {
    let alpha = s.alpha;
    let f_alpha = family
        .samples_at(alpha)
        .ok_or(Error::MissingLambda(alpha))?;
    let a = reflection(&s.line);
    let a_primes = f_alpha
        .iter()
        .map(|f| transported_line(f, &s.line).map(|l| reflection(&l)))
        .collect::<Result<Vec<_>>>()?;

    let (f0, d): (Vec<_>, Vec<_>) = family
        .f0
        .iter()
        .zip(&family.d)
        .zip(&a_primes)
        .map(|((f, d), ap)| dressed_at_zero(f, d, alpha, &a, ap))
        .unzip();

    let extra = family
        .extra
        .iter()
        .filter(|e| (e.lambda - alpha).norm() > 1e-12 && (e.lambda + alpha).norm() > 1e-12)
        .map(|e| LambdaSamples {
            lambda: e.lambda,
            frames: e
                .frames
                .iter()
                .zip(&a_primes)
                .map(|(f, ap)| dressed_value(f, e.lambda, alpha, &a, ap))
                .collect(),
        })
        .collect();

    let dressed = FrameFamily {
        step: family.step,
        f0,
        d,
        extra,
        period: family.period,
    };
    dressed.check_invariants()?;
    Ok(dressed)
}

/// A frame family together with the undressed base and the factors applied
/// to it, in order.
#[derive(Clone, Debug)]
pub struct DressedFrameFamily {
    pub family: FrameFamily,
    pub base: Arc<FrameFamily>,
    pub factors: Vec<SimpleFactorSpec>,
}

impl DressedFrameFamily {
    pub fn undressed(base: FrameFamily) -> Self {
        let base = Arc::new(base);
        Self {
            family: (*base).clone(),
            base,
            factors: Vec::new(),
        }
    }

    pub fn dress(&self, s: SimpleFactorSpec) -> Result<Self> {
        let family = dress_frame(&self.family, &s)?;
        let mut factors = self.factors.clone();
        factors.push(s);
        Ok(Self {
            family,
            base: Arc::clone(&self.base),
            factors,
        })
    }
}

/// Lazily evaluated dressing of any extended frame. Undefined at λ = ±α.
#[derive(Clone, Copy, Debug)]
pub struct Dressed<E> {
    pub base: E,
    pub factor: SimpleFactorSpec,
}

impl<E: ExtendedFrame> Dressed<E> {
    pub fn new(base: E, factor: SimpleFactorSpec) -> Self {
        Self { base, factor }
    }

    /// A′(t) = π_{L′}^⊥ − π_{L′} for L′ = F_α(t)⁻¹L.
    pub fn transported_reflection(&self, t: f64) -> Result<Matrix2C> {
        let fa = self.base.frame(self.factor.alpha, t);
        transported_line(&fa, &self.factor.line).map(|l| reflection(&l))
    }
}

impl<E: ExtendedFrame> ExtendedFrame for Dressed<E> {
    fn frame(&self, lambda: Complex64, t: f64) -> Matrix2C {
        let a = reflection(&self.factor.line);
        match self.transported_reflection(t) {
            Ok(ap) => dressed_value(&self.base.frame(lambda, t), lambda, self.factor.alpha, &a, &ap),
            Err(_) => Matrix2C::scalar(Complex64::new(f64::NAN, f64::NAN)),
        }
    }
}

/// h(λ)·M_λ·h(λ)⁻¹, provided M_α⁻¹L = L.
pub fn dressed_monodromy(
    m_lambda: &Matrix2C,
    m_alpha: &Matrix2C,
    s: &SimpleFactorSpec,
    lambda: Complex64,
) -> Result<Matrix2C> {
    let moved = transported_line(m_alpha, &s.line)?;
    let sine = moved.sine_distance(&s.line);
    if sine > EIGENLINE_TOL {
        return Err(Error::EigenlineViolated(sine));
    }
    Ok(simple_factor_eval(s, lambda)? * *m_lambda * simple_factor_inverse_eval(s, lambda)?)
}

/// Invariant lines of a unimodular 2×2 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Eigenlines {
    /// M = ±𝟙: every line is invariant.
    AllLines,
    /// Non-diagonalizable: a single eigenline.
    OneLine(ProjectiveLine),
    TwoLines(ProjectiveLine, ProjectiveLine),
}

fn kernel_line(n: &Matrix2C) -> ProjectiveLine {
    // Kernel of a rank-one matrix: orthogonal to its larger row, conjugated.
    let r0 = [n.at(0, 0), n.at(0, 1)];
    let r1 = [n.at(1, 0), n.at(1, 1)];
    let row = if r0[0].norm_sqr() + r0[1].norm_sqr() >= r1[0].norm_sqr() + r1[1].norm_sqr() {
        r0
    } else {
        r1
    };
    ProjectiveLine::new(row[1], -row[0]).unwrap_or_else(|_| ProjectiveLine::e1())
}

pub fn find_eigenlines(m: &Matrix2C) -> Eigenlines {
    let id = Matrix2C::identity();
    if (*m - id).norm() < 1e-8 || (*m + id).norm() < 1e-8 {
        return Eigenlines::AllLines;
    }
    let tr = m.trace();
    let disc = tr * tr - m.det() * 4.0;
    if disc.norm() < 1e-12 {
        return Eigenlines::OneLine(kernel_line(&(*m - id * (tr * 0.5))));
    }
    let root = disc.sqrt();
    let mu1 = (tr + root) * 0.5;
    let mu2 = (tr - root) * 0.5;
    Eigenlines::TwoLines(kernel_line(&(*m - id * mu1)), kernel_line(&(*m - id * mu2)))
}

/// (1/2πi)∮ f(λ) dλ over the circle |λ − center| = radius, by the trapezoidal
/// rule with `nodes` equispaced points.
pub fn residue_estimate(
    f: impl Fn(Complex64) -> Matrix2C,
    center: Complex64,
    radius: f64,
    nodes: usize,
) -> Result<Matrix2C> {
    if nodes < 16 {
        return Err(Error::InvalidArgument(format!(
            "residue_estimate needs at least 16 nodes, got {nodes}"
        )));
    }
    let mut acc = Matrix2C::zero();
    for k in 0..nodes {
        let offset = Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / nodes as f64);
        acc += f(center + offset) * offset;
    }
    Ok(acc / nodes as f64)
}
