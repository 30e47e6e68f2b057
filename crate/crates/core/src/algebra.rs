//! 2×2 complex matrices, the identification su₂ ≅ R³, hermitian projectors
//! onto lines of CP¹ and the closed-form exponential of trace-free matrices.
//!
//! Everything here is a small `Copy` value; there is no heap allocation and no
//! shared state.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute tolerance for su₂ membership, applied to ‖M + Mᴴ‖ and |tr M|.
pub const SU2_TOL: f64 = 1e-10;

pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[inline]
pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A 2×2 complex matrix, entries stored row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct Matrix2C {
    pub m: [Complex64; 4],
}

impl fmt::Debug for Matrix2C {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m[0], self.m[1], self.m[2], self.m[3]
        )
    }
}

impl Matrix2C {
    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self { m: [a, b, c, d] }
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub fn diag(a: Complex64, d: Complex64) -> Self {
        Self::new(a, ZERO, ZERO, d)
    }

    /// Scalar multiple of the identity.
    pub fn scalar(s: Complex64) -> Self {
        Self::diag(s, s)
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> Complex64 {
        self.m[2 * row + col]
    }

    pub fn det(&self) -> Complex64 {
        self.m[0] * self.m[3] - self.m[1] * self.m[2]
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0] + self.m[3]
    }

    /// adj(M), so that M · adj(M) = det(M) · 𝟙. Linear in M.
    pub fn adjugate(&self) -> Self {
        Self::new(self.m[3], -self.m[1], -self.m[2], self.m[0])
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() == 0.0 || !d.is_finite() {
            return None;
        }
        Some(self.adjugate() / d)
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.m[0], self.m[2], self.m[1], self.m[3])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::new(
            self.m[0].conj(),
            self.m[2].conj(),
            self.m[1].conj(),
            self.m[3].conj(),
        )
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().all(|z| z.is_finite())
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    /// ‖M Mᴴ − 𝟙‖.
    pub fn unitarity_defect(&self) -> f64 {
        (*self * self.adjoint() - Self::identity()).norm()
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        [
            self.m[0] * v[0] + self.m[1] * v[1],
            self.m[2] * v[0] + self.m[3] * v[1],
        ]
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self::new(f(self.m[0]), f(self.m[1]), f(self.m[2]), f(self.m[3]))
    }
}

impl Add for Matrix2C {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.m[0] + rhs.m[0],
            self.m[1] + rhs.m[1],
            self.m[2] + rhs.m[2],
            self.m[3] + rhs.m[3],
        )
    }
}

impl AddAssign for Matrix2C {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sub for Matrix2C {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(
            self.m[0] - rhs.m[0],
            self.m[1] - rhs.m[1],
            self.m[2] - rhs.m[2],
            self.m[3] - rhs.m[3],
        )
    }
}

impl Neg for Matrix2C {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|z| -z)
    }
}

impl Mul for Matrix2C {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        let a = &self.m;
        let b = &b.m;
        Self::new(
            a[0] * b[0] + a[1] * b[2],
            a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3],
        )
    }
}

impl Mul<Complex64> for Matrix2C {
    type Output = Self;
    fn mul(self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }
}

impl Mul<Matrix2C> for Complex64 {
    type Output = Matrix2C;
    fn mul(self, m: Matrix2C) -> Matrix2C {
        m * self
    }
}

impl Mul<f64> for Matrix2C {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.map(|z| z * s)
    }
}

impl Mul<Matrix2C> for f64 {
    type Output = Matrix2C;
    fn mul(self, m: Matrix2C) -> Matrix2C {
        m * self
    }
}

impl Div<Complex64> for Matrix2C {
    type Output = Self;
    fn div(self, s: Complex64) -> Self {
        self.map(|z| z / s)
    }
}

impl Div<f64> for Matrix2C {
    type Output = Self;
    fn div(self, s: f64) -> Self {
        self.map(|z| z / s)
    }
}

/// σ₁ = (0 1; −1 0)
pub fn sigma1() -> Matrix2C {
    Matrix2C::from_real(0.0, 1.0, -1.0, 0.0)
}

/// σ₂ = (0 i; i 0)
pub fn sigma2() -> Matrix2C {
    Matrix2C::new(ZERO, I, I, ZERO)
}

/// σ₃ = (i 0; 0 −i)
pub fn sigma3() -> Matrix2C {
    Matrix2C::diag(I, -I)
}

/// A point of R³ ≅ su₂, with coordinates in the basis (σ₃, σ₁, σ₂).
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Su2Vector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Su2Vector {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn dist(&self, other: &Self) -> f64 {
        (*self - *other).norm()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn dot(&self, o: &Self) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(&self, o: &Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Coordinates of a matrix assumed to be in su₂; no membership check.
    pub fn from_matrix_unchecked(m: &Matrix2C) -> Self {
        Self::new(m.m[0].im, m.m[1].re, m.m[1].im)
    }
}

impl Add for Su2Vector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Su2Vector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

/// y·σ₁ + z·σ₂ + x·σ₃.
pub fn su2_embed(v: Su2Vector) -> Matrix2C {
    Matrix2C::new(c(0.0, v.x), c(v.y, v.z), c(-v.y, v.z), c(0.0, -v.x))
}

/// Checks trace-free anti-hermitian within [`SU2_TOL`].
pub fn su2_check(m: &Matrix2C) -> Result<()> {
    let antihermitian = (*m + m.adjoint()).norm();
    let trace = m.trace().norm();
    if !m.is_finite() {
        return Err(Error::NonFinite("su2 element"));
    }
    if antihermitian > SU2_TOL || trace > SU2_TOL {
        return Err(Error::NotSu2 {
            antihermitian,
            trace,
        });
    }
    Ok(())
}

/// Orthogonal projection onto su₂ (trace-free anti-hermitian part), together
/// with the norm of the discarded remainder.
pub fn su2_project(m: &Matrix2C) -> (Matrix2C, f64) {
    let skew = (*m - m.adjoint()) * 0.5;
    let half_trace = skew.trace() * 0.5;
    let p = skew - Matrix2C::scalar(half_trace);
    (p, (*m - p).norm())
}

pub fn su2_to_vector(m: &Matrix2C) -> Result<Su2Vector> {
    su2_check(m)?;
    Ok(Su2Vector::from_matrix_unchecked(m))
}

/// |X| = √det X.
pub fn su2_norm(m: &Matrix2C) -> Result<f64> {
    su2_check(m)?;
    Ok(m.det().re.max(0.0).sqrt())
}

/// ⟨X, Y⟩ = −½ tr(XY).
pub fn su2_inner(a: &Matrix2C, b: &Matrix2C) -> Result<f64> {
    su2_check(a)?;
    su2_check(b)?;
    Ok(-0.5 * (*a * *b).trace().re)
}

/// X × Y = ½ [X, Y].
pub fn su2_cross(a: &Matrix2C, b: &Matrix2C) -> Result<Matrix2C> {
    su2_check(a)?;
    su2_check(b)?;
    Ok(a.commutator(b) * 0.5)
}

/// (cosh √w, sinh √w / √w) as entire functions of w.
pub(crate) fn even_parts(w: Complex64) -> (Complex64, Complex64) {
    if w.norm() < 1.0 {
        // Taylor series in w; 14 terms reach machine precision for |w| < 1.
        let mut cosh = ZERO;
        let mut sinhc = ZERO;
        let mut term_c = ONE; // w^n / (2n)!
        let mut term_s = ONE; // w^n / (2n+1)!
        for n in 0..14 {
            cosh += term_c;
            sinhc += term_s;
            let n = n as f64;
            term_c = term_c * w / ((2.0 * n + 1.0) * (2.0 * n + 2.0));
            term_s = term_s * w / ((2.0 * n + 2.0) * (2.0 * n + 3.0));
        }
        (cosh, sinhc)
    } else {
        let mu = w.sqrt();
        (mu.cosh(), mu.sinh() / mu)
    }
}

/// w-derivatives of [`even_parts`].
pub(crate) fn even_parts_derivative(w: Complex64) -> (Complex64, Complex64) {
    let (cosh, sinhc) = even_parts(w);
    if w.norm() < 1.0 {
        // d/dw sinhc = Σ_{n≥1} n w^{n−1} / (2n+1)!
        let mut sum = ZERO;
        let mut pow = ONE; // w^{n-1}
        let mut fact = 6.0; // (2n+1)!
        for n in 1..16 {
            sum += pow * (n as f64) / fact;
            pow *= w;
            let n = n as f64;
            fact *= (2.0 * n + 2.0) * (2.0 * n + 3.0);
        }
        (sinhc * 0.5, sum)
    } else {
        (sinhc * 0.5, (cosh - sinhc) / (w * 2.0))
    }
}

/// exp(M) for trace-free M: cosh(μ)·𝟙 + (sinh μ / μ)·M with μ² = −det M.
///
/// Both coefficients are even in μ, so no square-root branch enters.
pub fn expm_tracefree(m: &Matrix2C) -> Matrix2C {
    let (cosh, sinhc) = even_parts(-m.det());
    Matrix2C::scalar(cosh) + *m * sinhc
}

/// Directional derivative of `expm_tracefree` at `m` along the trace-free
/// direction `dm`.
pub fn expm_tracefree_derivative(m: &Matrix2C, dm: &Matrix2C) -> Matrix2C {
    let w = -m.det();
    // d(det M)[dM] = tr(adj(M) dM)
    let dw = -(m.adjugate() * *dm).trace();
    let (_, sinhc) = even_parts(w);
    let (dcosh, dsinhc) = even_parts_derivative(w);
    Matrix2C::scalar(dcosh * dw) + *m * (dsinhc * dw) + *dm * sinhc
}

/// A point [a : b] of CP¹, stored with unit norm and canonical phase (the
/// first entry of non-negligible modulus is real and positive).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectiveLine {
    rep: [Complex64; 2],
}

impl ProjectiveLine {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if !n.is_finite() {
            return Err(Error::NonFinite("projective line"));
        }
        if n == 0.0 {
            return Err(Error::InvalidArgument(
                "a projective line needs a nonzero representative".into(),
            ));
        }
        let (a, b) = (a / n, b / n);
        let pivot = if a.norm() > 1e-12 { a } else { b };
        let phase = pivot.conj() / pivot.norm();
        Ok(Self {
            rep: [a * phase, b * phase],
        })
    }

    pub fn from_vector(v: [Complex64; 2]) -> Result<Self> {
        Self::new(v[0], v[1])
    }

    /// [1 : 0]
    pub fn e1() -> Self {
        Self { rep: [ONE, ZERO] }
    }

    /// [0 : 1]
    pub fn e2() -> Self {
        Self { rep: [ZERO, ONE] }
    }

    pub fn representative(&self) -> [Complex64; 2] {
        self.rep
    }

    /// The hermitian-orthogonal line.
    pub fn perp(&self) -> Self {
        Self::new(-self.rep[1].conj(), self.rep[0].conj()).expect("unit representative")
    }

    /// Sine of the hermitian angle between two lines; 0 iff they coincide.
    pub fn sine_distance(&self, other: &Self) -> f64 {
        let [a, b] = self.rep;
        let [c, d] = other.rep;
        (a * d - b * c).norm()
    }

    pub fn apply(&self, m: &Matrix2C) -> Result<Self> {
        Self::from_vector(m.apply(self.rep))
    }
}

/// π_L = v vᴴ for the unit representative v of L.
pub fn hermitian_projector(line: &ProjectiveLine) -> Matrix2C {
    let [a, b] = line.representative();
    Matrix2C::new(
        a * a.conj(),
        a * b.conj(),
        b * a.conj(),
        b * b.conj(),
    )
}

/// π_L^⊥ − π_L: the hermitian reflection fixing L^⊥ and negating L.
pub fn reflection(line: &ProjectiveLine) -> Matrix2C {
    Matrix2C::identity() - hermitian_projector(line) * 2.0
}
