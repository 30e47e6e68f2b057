use num_complex::Complex64;

use super::birkhoff::birkhoff_factorize;
use super::laurent::LaurentLoop;
use super::potential::FiniteTypePotential;
use crate::algebra::{expm_tracefree, reflection, su2_check, su2_project, su2_to_vector, Matrix2C, Su2Vector};
use crate::dressing::{dressed_value, simple_factor_eval, simple_factor_inverse_eval, transported_line, SimpleFactorSpec};
use crate::error::{Error, Result};
use crate::frames::ExtendedFrame;

/// Default truncation order for oracle computations.
pub const DEFAULT_ORDER: usize = 64;

/// t ↦ exp(t·ξ(λ)). An extended frame only for genus zero; for higher genus it
/// is the loop fed to the Symes map.
#[derive(Clone, Debug)]
pub struct PotentialFlow<'a> {
    pub xi: &'a FiniteTypePotential,
}

impl ExtendedFrame for PotentialFlow<'_> {
    fn frame(&self, lambda: Complex64, t: f64) -> Matrix2C {
        expm_tracefree(&(self.xi.eval(lambda) * t))
    }
}

/// Result of the Symes map at one time.
#[derive(Clone, Debug)]
pub struct SymesPoint {
    pub point: Su2Vector,
    pub plus: LaurentLoop,
}

/// Φ(ξ)(t) = (exp tξ)₊ on C_r and its Sym point 2·Φ′·Φ⁻¹ at λ = 0.
pub fn symes_map(xi: &FiniteTypePotential, t: f64, radius: f64, order: usize) -> Result<SymesPoint> {
    let flow = PotentialFlow { xi };
    let g = LaurentLoop::from_fn(radius, order, |l| flow.frame(l, t))?;
    let f = birkhoff_factorize(&g)?;
    let phi = f.plus.cauchy_value_at_zero();
    let dphi = f.plus.cauchy_derivative_at_zero();
    let inv = phi.inverse().ok_or(Error::NonFinite("Symes frame at λ = 0"))?;
    let (m, rem) = su2_project(&(dphi * inv * 2.0));
    if rem > 1e-6 {
        return Err(Error::InconsistentFrame(rem));
    }
    Ok(SymesPoint {
        point: su2_to_vector(&m)?,
        plus: f.plus,
    })
}

/// Π(x)ξ = φ₋ ξ φ₋⁻¹ where exp(ξ·Σ_{i<g} x_i λ^i) = φ₊φ₋.
pub fn isospectral_action(
    x: &[f64],
    xi: &FiniteTypePotential,
    radius: f64,
    order: usize,
) -> Result<FiniteTypePotential> {
    let g = xi.genus();
    if x.len() != g {
        return Err(Error::InvalidArgument(format!(
            "isospectral parameter must have length g = {g}, got {}",
            x.len()
        )));
    }
    if g == 0 {
        return Ok(xi.clone());
    }
    let scalar = |l: Complex64| {
        x.iter()
            .enumerate()
            .fold(Complex64::new(0.0, 0.0), |acc, (i, xi)| acc + l.powi(i as i32) * *xi)
    };
    let loop_ = LaurentLoop::from_fn(radius, order, |l| expm_tracefree(&(xi.eval(l) * scalar(l))))?;
    let f = birkhoff_factorize(&loop_)?;
    let conj = LaurentLoop::from_samples(
        radius,
        &f.minus
            .samples()
            .iter()
            .zip(loop_.nodes())
            .map(|(m, l)| *m * xi.eval(l) * m.adjugate())
            .collect::<Vec<_>>(),
    )?;

    let n = order as i64;
    let scale = conj.max_coefficient_norm().max(1.0);
    let stray = (-n..=n)
        .filter(|&j| j < -(g as i64) || j > 1)
        .map(|j| conj.coefficient(j).norm())
        .fold(0.0, f64::max);
    if stray > 1e-8 * scale {
        return Err(Error::InvalidPotential {
            invariant: "coefficients only in λ^-g..λ^1",
            residual: stray,
        });
    }
    let mut coeffs = Vec::with_capacity(g + 2);
    for j in -(g as i64)..=1 {
        let c = conj.lambda_coefficient(j);
        let (m, rem) = su2_project(&c);
        if rem > 1e-8 {
            return Err(Error::InvalidPotential {
                invariant: "ξ_j ∈ su₂",
                residual: rem,
            });
        }
        coeffs.push(m);
    }
    let top = (coeffs[g + 1] - xi.coefficient(1)).norm();
    if top > 1e-8 {
        return Err(Error::InvalidPotential {
            invariant: "ξ_1 = ½σ₃",
            residual: top,
        });
    }
    coeffs[g + 1] = xi.coefficient(1);
    // drop the numerically tiny σ₃ part of ξ₀
    let d = coeffs[g].at(0, 0).im;
    if d.abs() > 1e-8 {
        return Err(Error::InvalidPotential {
            invariant: "ξ_0 ⊥ σ₃",
            residual: d.abs(),
        });
    }
    coeffs[g] = coeffs[g] - crate::algebra::sigma3() * d;
    for c in &coeffs {
        su2_check(c)?;
    }
    FiniteTypePotential::new(coeffs)
}

fn sign_aligned_deviation(a: &[Matrix2C], b: &[Matrix2C]) -> f64 {
    let flip = match (a.first(), b.first()) {
        (Some(x), Some(y)) => (*x + *y).norm() < (*x - *y).norm(),
        _ => false,
    };
    a.iter()
        .zip(b)
        .map(|(x, y)| if flip { (*x + *y).norm() } else { (*x - *y).norm() })
        .fold(0.0, f64::max)
}

/// Largest deviation over the nodes of C_r between (h·F)₊ from the Birkhoff
/// factorization and the closed-form dressed frame h·F·h′⁻¹, after aligning
/// the overall sign at the first node.
pub fn dressing_oracle_compare(
    frame: &impl ExtendedFrame,
    s: &SimpleFactorSpec,
    t: f64,
    radius: f64,
    order: usize,
) -> Result<f64> {
    if s.alpha.norm() >= radius {
        return Err(Error::InvalidArgument(format!(
            "need |α| < r, got |α| = {} and r = {radius}",
            s.alpha.norm()
        )));
    }
    let product = LaurentLoop::from_fn(radius, order, |l| {
        simple_factor_eval(s, l).expect("nodes avoid 0 and ±α") * frame.frame(l, t)
    })?;
    let f = birkhoff_factorize(&product)?;
    let a = reflection(&s.line);
    let a_prime = reflection(&transported_line(&frame.frame(s.alpha, t), &s.line)?);
    let closed: Vec<Matrix2C> = product
        .nodes()
        .into_iter()
        .map(|l| dressed_value(&frame.frame(l, t), l, s.alpha, &a, &a_prime))
        .collect();
    Ok(sign_aligned_deviation(&f.plus.samples(), &closed))
}

/// Φ(hξh⁻¹)(t) against h # Φ(ξ)(t) for a simple factor h: the plus factor of
/// exp(t·hξh⁻¹) is compared with the closed-form dressing of exp(tξ) and with
/// the plus factor of h·exp(tξ). Returns the larger sign-aligned deviation.
pub fn symes_equivariance_deviation(
    xi: &FiniteTypePotential,
    s: &SimpleFactorSpec,
    t: f64,
    radius: f64,
    order: usize,
) -> Result<f64> {
    let flow = PotentialFlow { xi };
    let conjugated = LaurentLoop::from_fn(radius, order, |l| {
        let h = simple_factor_eval(s, l).expect("nodes avoid 0 and ±α");
        let hinv = simple_factor_inverse_eval(s, l).expect("nodes avoid 0 and ±α");
        expm_tracefree(&(h * xi.eval(l) * hinv * t))
    })?;
    let phi_conj = birkhoff_factorize(&conjugated)?.plus.samples();
    let closed_dev = dressing_oracle_compare(&flow, s, t, radius, order)?;
    let a = reflection(&s.line);
    let a_prime = reflection(&transported_line(&flow.frame(s.alpha, t), &s.line)?);
    let closed: Vec<Matrix2C> = conjugated
        .nodes()
        .into_iter()
        .map(|l| dressed_value(&flow.frame(l, t), l, s.alpha, &a, &a_prime))
        .collect();
    Ok(sign_aligned_deviation(&phi_conj, &closed).max(closed_dev))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{c, sigma2, su2_embed, ProjectiveLine};
    use crate::frames::CircleFrame;
    use crate::loopgroup::potential::spectral_det;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    /// γ(t) for the g = 0 potential with parameters (u, v), read off its
    /// closed matrix form.
    fn display_gamma(u: f64, v: f64, t: f64) -> Su2Vector {
        let w = (u * u + v * v).sqrt();
        let s2 = (2.0 * t * w).sin() / (2.0 * w);
        let sq = (t * w).sin().powi(2);
        let m = Matrix2C::new(
            c(0.0, s2),
            c(0.0, -sq) / c(u, -v),
            c(sq, 0.0) / c(-v, u),
            c(0.0, -s2),
        );
        su2_to_vector(&m).unwrap()
    }

    #[test]
    fn genus_zero_symes_reproduces_circle() {
        for (u, v) in [(1.0, 0.0), (0.3, 0.4)] {
            let xi = FiniteTypePotential::genus_zero(u, v).unwrap();
            for i in 0..32 {
                let t = 2.0 * PI * i as f64 / 32.0;
                let p = symes_map(&xi, t, 2.0, 64).unwrap().point;
                assert!(p.dist(&display_gamma(u, v, t)) < 1e-7, "({u},{v}) t={t}");
            }
        }
        let p = symes_map(&FiniteTypePotential::genus_zero(1.0, 0.0).unwrap(), PI / 2.0, 2.0, 64)
            .unwrap()
            .point;
        assert!(p.dist(&su2_to_vector(&(-sigma2())).unwrap()) < 1e-10);
    }

    #[test]
    fn degenerate_potential_gives_a_line() {
        let xi = FiniteTypePotential::genus_zero(0.0, 0.0).unwrap();
        for t in [0.5, 1.0, 2.0] {
            let p = symes_map(&xi, t, 2.0, 64).unwrap().point;
            assert!(p.dist(&Su2Vector::new(t, 0.0, 0.0)) < 1e-10);
        }
    }

    #[test]
    fn oracle_agrees_with_closed_form_dressing() {
        let s = SimpleFactorSpec::new(ProjectiveLine::e1(), c(0.0, 3f64.sqrt() / 2.0)).unwrap();
        let dev = dressing_oracle_compare(&CircleFrame { kappa: 1.0 }, &s, 1.0, 2.0, 64).unwrap();
        assert!(dev < 1e-6, "{dev}");
        let id = |_: Complex64, _: f64| Matrix2C::identity();
        assert!(dressing_oracle_compare(&id, &s, 1.0, 2.0, 64).unwrap() < 1e-8);
        assert!(dressing_oracle_compare(&id, &s, 1.0, 0.5, 64).is_err());
    }

    #[test]
    fn symes_equivariance() {
        let xi = FiniteTypePotential::genus_zero(0.5, 0.0).unwrap();
        let s = SimpleFactorSpec::new(ProjectiveLine::e1(), c(0.0, 0.6)).unwrap();
        for t in [0.5, 1.5, 3.0] {
            let dev = symes_equivariance_deviation(&xi, &s, t, 2.0, 64).unwrap();
            assert!(dev < 1e-6, "t={t}: {dev}");
        }
    }

    fn random_g1(rng: &mut ChaCha8Rng) -> FiniteTypePotential {
        let mut r = || rng.random_range(-0.5..0.5);
        FiniteTypePotential::new(vec![
            su2_embed(Su2Vector::new(r(), r(), r())),
            su2_embed(Su2Vector::new(0.0, r(), r())),
            crate::algebra::sigma3() * 0.5,
        ])
        .unwrap()
    }

    fn max_dist(a: &FiniteTypePotential, b: &FiniteTypePotential) -> f64 {
        a.coefficients()
            .iter()
            .zip(b.coefficients())
            .map(|(x, y)| (*x - *y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn isospectral_action_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let xi = random_g1(&mut rng);
            let spec = spectral_det(&xi).unwrap();
            let r = 2.0 * spec.branch_points.iter().map(|b| b.norm()).fold(1.0, f64::max);
            assert!(max_dist(&isospectral_action(&[0.0], &xi, r, 64).unwrap(), &xi) < 1e-12);
            let x = rng.random_range(-1.0..1.0);
            let y = rng.random_range(-1.0..1.0);
            let px = isospectral_action(&[x], &xi, r, 64).unwrap();
            assert!(spectral_det(&px).unwrap().distance(&spec) < 1e-8);
            let pxy = isospectral_action(&[y], &px, r, 64).unwrap();
            let direct = isospectral_action(&[x + y], &xi, r, 64).unwrap();
            assert!(max_dist(&pxy, &direct) < 1e-7);
        }
        let xi = random_g1(&mut rng);
        assert!(isospectral_action(&[1.0, 2.0], &xi, 2.0, 64).is_err());
    }
}
