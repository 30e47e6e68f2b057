//! g = g₊·g₋ on C_r with g₋(∞) = 𝟙, by a block-Toeplitz solve for the
//! coefficients of g₋⁻¹.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, RngExt};

use super::laurent::LaurentLoop;
use crate::algebra::{expm_tracefree, Matrix2C};
use crate::error::{Error, Result};

/// Condition numbers above this mean the loop is outside the big cell or
/// under-resolved.
pub const MAX_CONDITION: f64 = 1e12;
/// Outermost coefficients must fall below this fraction of the largest one.
pub const TAIL_TOL: f64 = 1e-12;
/// Recomposition tolerance, relative to max(1, max‖g‖).
pub const RECOMPOSITION_TOL: f64 = 1e-8;
/// Reality tolerance for [`reality_check`].
pub const REALITY_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct Factorization {
    pub plus: LaurentLoop,
    pub minus: LaurentLoop,
    /// 1-norm condition estimate of the block-Toeplitz system.
    pub condition: f64,
    /// max‖g₊g₋ − g‖ over the nodes.
    pub residual: f64,
}

fn one_norm(m: &DMatrix<Complex64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Birkhoff factorization of a unimodular loop in the big cell.
pub fn birkhoff_factorize(g: &LaurentLoop) -> Result<Factorization> {
    let n = g.order();
    let tail = g.tail_ratio();
    if tail > TAIL_TOL {
        return Err(Error::Truncation {
            what: "relative coefficient tail",
            value: tail,
        });
    }
    let a = |j: i64| g.coefficient(j);

    // Unknowns b_{-1..-N} of u = g₋⁻¹ = 𝟙 + Σ b_{-j} e^{-ijθ}; the negative
    // coefficients of g·u vanish: Σ_j a_{j-m} b_{-j} = -a_{-m}, m = 1..N.
    let dim = 2 * n;
    let mut t = DMatrix::<Complex64>::zeros(dim, dim);
    let mut rhs = DMatrix::<Complex64>::zeros(dim, 2);
    for m in 1..=n {
        for j in 1..=n {
            let block = a(j as i64 - m as i64);
            for r in 0..2 {
                for c in 0..2 {
                    t[(2 * (m - 1) + r, 2 * (j - 1) + c)] = block.at(r, c);
                }
            }
        }
        let b = a(-(m as i64));
        for r in 0..2 {
            for c in 0..2 {
                rhs[(2 * (m - 1) + r, c)] = -b.at(r, c);
            }
        }
    }

    let lu = t.clone().lu();
    let inverse = lu.try_inverse().ok_or(Error::OutsideBigCell(f64::INFINITY))?;
    let condition = one_norm(&t) * one_norm(&inverse);
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(Error::OutsideBigCell(condition));
    }
    let x = &inverse * &rhs;

    let mut b = vec![Matrix2C::identity(); n + 1];
    for (j, bj) in b.iter_mut().enumerate().skip(1) {
        *bj = Matrix2C::new(
            x[(2 * (j - 1), 0)],
            x[(2 * (j - 1), 1)],
            x[(2 * (j - 1) + 1, 0)],
            x[(2 * (j - 1) + 1, 1)],
        );
    }

    // g₊ = g·u, nonnegative part.
    let mut plus = vec![Matrix2C::zero(); 2 * n + 1];
    for p in 0..=n {
        let mut acc = Matrix2C::zero();
        for (j, bj) in b.iter().enumerate().take(n - p + 1) {
            acc += a((p + j) as i64) * *bj;
        }
        plus[n + p] = acc;
    }
    // g₋ = u⁻¹ = adj(u), coefficient-wise since det u ≡ 1.
    let mut minus = vec![Matrix2C::zero(); 2 * n + 1];
    for (j, bj) in b.iter().enumerate() {
        minus[n - j] = bj.adjugate();
    }

    let plus = LaurentLoop::from_coefficients(g.radius(), plus)?;
    let minus = LaurentLoop::from_coefficients(g.radius(), minus)?;
    let residual = plus.mul(&minus)?.max_deviation(g)?;
    let scale = g.samples().iter().map(Matrix2C::norm).fold(1.0, f64::max);
    if residual > RECOMPOSITION_TOL * scale {
        return Err(Error::Truncation {
            what: "recomposition residual",
            value: residual,
        });
    }
    Ok(Factorization {
        plus,
        minus,
        condition,
        residual,
    })
}

/// Unitary at the real points ±r and with coefficients satisfying
/// ĉ_jᴴ = adj(ĉ_j), the coefficient form of g(λ̄)ᴴ·g(λ) = 𝟙.
pub fn reality_check(g: &LaurentLoop) -> bool {
    let r = g.radius();
    let scale = g.max_coefficient_norm().max(1.0);
    let unitary = [r, -r]
        .iter()
        .all(|&x| g.eval(Complex64::new(x, 0.0)).unitarity_defect() <= REALITY_TOL * scale);
    let n = g.order() as i64;
    let symmetric = (-n..=n).all(|j| {
        let c = g.coefficient(j);
        (c.adjoint() - c.adjugate()).norm() <= REALITY_TOL * scale
    });
    unitary && symmetric
}

/// A random big-cell loop g = P·M with P = exp(X) for a polynomial X in λ and
/// M = exp(Y) for a polynomial Y in λ⁻¹ without constant term. Coefficients
/// of X and Y on C_r decay like 2^{-|j|}. Returns (g, P, M).
pub fn random_big_cell_loop<R: Rng + ?Sized>(
    rng: &mut R,
    radius: f64,
    order: usize,
) -> Result<(LaurentLoop, LaurentLoop, LaurentLoop)> {
    const DEGREE: usize = 4;
    let mut draw = |scale: f64| {
        let mut e = || Complex64::new(rng.random_range(-scale..scale), rng.random_range(-scale..scale));
        let (a, b, c) = (e(), e(), e());
        Matrix2C::new(a, b, c, -a)
    };
    let xs: Vec<Matrix2C> = (0..=DEGREE).map(|j| draw(0.5 * 0.5f64.powi(j as i32))).collect();
    let ys: Vec<Matrix2C> = (1..=DEGREE).map(|j| draw(0.5 * 0.5f64.powi(j as i32))).collect();
    let p = move |l: Complex64| {
        let z = l / radius;
        let mut acc = Matrix2C::zero();
        let mut zp = Complex64::new(1.0, 0.0);
        for x in &xs {
            acc += *x * zp;
            zp *= z;
        }
        expm_tracefree(&acc)
    };
    let m = move |l: Complex64| {
        let zinv = radius / l;
        let mut acc = Matrix2C::zero();
        let mut zp = zinv;
        for y in &ys {
            acc += *y * zp;
            zp *= zinv;
        }
        expm_tracefree(&acc)
    };
    let plus = LaurentLoop::from_fn(radius, order, &p)?;
    let minus = LaurentLoop::from_fn(radius, order, &m)?;
    let g = LaurentLoop::from_fn(radius, order, |l| p(l) * m(l))?;
    Ok((g, plus, minus))
}
