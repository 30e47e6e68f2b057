use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{sigma1, sigma2, sigma3, su2_check, su2_inner, su2_project, Matrix2C};
use crate::error::{Error, Result};

/// Tolerance for the su₂ and orthogonality invariants of a potential.
pub const POTENTIAL_TOL: f64 = 1e-10;
/// Minimal separation of branch points.
pub const BRANCH_SEPARATION: f64 = 1e-8;

/// ξ(λ) = Σ_{j=−g}^{1} ξ_j λ^j with ξ₁ = σ₃/2, ξ_j ∈ su₂ and ξ₀ ⊥ σ₃.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteTypePotential {
    genus: usize,
    xi: Vec<Matrix2C>,
}

impl FiniteTypePotential {
    /// `xi` lists ξ_{−g}, …, ξ₁.
    pub fn new(xi: Vec<Matrix2C>) -> Result<Self> {
        if xi.len() < 2 {
            return Err(Error::InvalidPotential {
                invariant: "coefficients ξ_{-g}..ξ_1 with g ≥ 0",
                residual: xi.len() as f64,
            });
        }
        let genus = xi.len() - 2;
        let top = (xi[genus + 1] - sigma3() * 0.5).norm();
        if !(top <= 1e-12) {
            return Err(Error::InvalidPotential {
                invariant: "ξ_1 = ½σ₃",
                residual: top,
            });
        }
        for x in &xi {
            if su2_check(x).is_err() {
                let (_, rem) = su2_project(x);
                return Err(Error::InvalidPotential {
                    invariant: "ξ_j ∈ su₂",
                    residual: rem,
                });
            }
        }
        let dot = su2_inner(&xi[genus], &sigma3())?;
        if dot.abs() > POTENTIAL_TOL {
            return Err(Error::InvalidPotential {
                invariant: "ξ_0 ⊥ σ₃",
                residual: dot.abs(),
            });
        }
        Ok(Self { genus, xi })
    }

    /// ½σ₃λ + uσ₁ + vσ₂. Its Symes curve is a circle of radius
    /// 1/(2√(u² + v²)), or the line tσ₃ when u = v = 0.
    pub fn genus_zero(u: f64, v: f64) -> Result<Self> {
        Self::new(vec![sigma1() * u + sigma2() * v, sigma3() * 0.5])
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// ξ_j for j = −g..1, zero otherwise.
    pub fn coefficient(&self, j: i64) -> Matrix2C {
        let idx = j + self.genus as i64;
        if idx < 0 || idx as usize >= self.xi.len() {
            Matrix2C::zero()
        } else {
            self.xi[idx as usize]
        }
    }

    pub fn coefficients(&self) -> &[Matrix2C] {
        &self.xi
    }

    pub fn eval(&self, lambda: Complex64) -> Matrix2C {
        let g = self.genus as i32;
        self.xi
            .iter()
            .enumerate()
            .fold(Matrix2C::zero(), |acc, (i, x)| acc + *x * lambda.powi(i as i32 - g))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PotentialFile = serde_json::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("malformed potential file: {e}")))?;
        if file.xi.len() != file.g + 2 {
            return Err(Error::InvalidPotential {
                invariant: "g + 2 coefficients ξ_{-g}..ξ_1",
                residual: file.xi.len() as f64,
            });
        }
        let xi = file
            .xi
            .iter()
            .map(|m| {
                Matrix2C::new(
                    Complex64::new(m[0][0][0], m[0][0][1]),
                    Complex64::new(m[0][1][0], m[0][1][1]),
                    Complex64::new(m[1][0][0], m[1][0][1]),
                    Complex64::new(m[1][1][0], m[1][1][1]),
                )
            })
            .collect();
        Self::new(xi)
    }

    pub fn to_json(&self) -> String {
        let xi = self
            .xi
            .iter()
            .map(|m| {
                let e = |r: usize, c: usize| [m.at(r, c).re, m.at(r, c).im];
                [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
            })
            .collect();
        serde_json::to_string_pretty(&PotentialFile { g: self.genus, xi }).expect("serializable")
    }
}

/// On-disk form: `{"g": g, "xi": [ξ_{-g}, …, ξ_1]}`, each ξ_j a 2×2 array of
/// `[re, im]` pairs.
#[derive(Serialize, Deserialize)]
struct PotentialFile {
    g: usize,
    xi: Vec<[[[f64; 2]; 2]; 2]>,
}

/// det ξ = ¼λ² + Σ_{i=0}^{2g} a_i λ^{−i} and the branch points, the roots of
/// λ^{2g}·det ξ.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralData {
    pub genus: usize,
    /// a_0, …, a_{2g}.
    pub coefficients: Vec<f64>,
    /// 2g + 2 roots, sorted by real then imaginary part.
    pub branch_points: Vec<Complex64>,
}

impl SpectralData {
    /// det ξ(λ) from the stored coefficients.
    pub fn det(&self, lambda: Complex64) -> Complex64 {
        self.coefficients
            .iter()
            .enumerate()
            .fold(lambda * lambda * 0.25, |acc, (i, a)| acc + lambda.powi(-(i as i32)) * *a)
    }

    /// Largest coefficient-wise difference with another spectral datum.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.coefficients.len() != other.coefficients.len() {
            return f64::INFINITY;
        }
        self.coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn spectral_det(xi: &FiniteTypePotential) -> Result<SpectralData> {
    let g = xi.genus();
    // entry polynomials in λ shifted by λ^g: index i ↔ λ^{i−g}
    let entry = |r: usize, c: usize| -> Vec<Complex64> {
        xi.coefficients().iter().map(|m| m.at(r, c)).collect()
    };
    let (p00, p01, p10) = (entry(0, 0), entry(0, 1), entry(1, 0));
    // trace-free: det = −(p00² + p01·p10); index i ↔ λ^{i−2g}
    let sq = poly_mul(&p00, &p00);
    let cross = poly_mul(&p01, &p10);
    let det: Vec<Complex64> = sq.iter().zip(&cross).map(|(a, b)| -(a + b)).collect();
    let top = 2 * g + 2;
    let imag = det.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if imag > POTENTIAL_TOL {
        return Err(Error::NotReal(imag));
    }
    if (det[top].re - 0.25).abs() > 1e-12 || det[top - 1].re.abs() > 1e-12 {
        return Err(Error::InvalidPotential {
            invariant: "det ξ = ¼λ² + O(1)",
            residual: (det[top].re - 0.25).abs().max(det[top - 1].re.abs()),
        });
    }
    let coefficients: Vec<f64> = (0..=2 * g).map(|i| det[2 * g - i].re).collect();

    // λ^{2g}·det ξ = ¼λ^{2g+2} + 0·λ^{2g+1} + Σ a_i λ^{2g−i}; monic companion
    let deg = top;
    let mut companion = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        companion[(i, i - 1)] = 1.0;
    }
    for k in 0..deg {
        // coefficient of λ^k divided by the leading ¼
        companion[(k, deg - 1)] = -det[k].re * 4.0;
    }
    let mut branch_points: Vec<Complex64> = companion.complex_eigenvalues().iter().copied().collect();
    branch_points.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));

    let mut separation = f64::INFINITY;
    for (i, a) in branch_points.iter().enumerate() {
        for b in &branch_points[i + 1..] {
            separation = separation.min((a - b).norm());
        }
    }
    if separation < BRANCH_SEPARATION {
        return Err(Error::RepeatedBranchPoints(separation));
    }
    Ok(SpectralData {
        genus: g,
        coefficients,
        branch_points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{c, su2_embed, Su2Vector};
    use proptest::prelude::*;

    fn g1(x0: (f64, f64), xm1: (f64, f64, f64)) -> FiniteTypePotential {
        FiniteTypePotential::new(vec![
            su2_embed(Su2Vector::new(xm1.0, xm1.1, xm1.2)),
            su2_embed(Su2Vector::new(0.0, x0.0, x0.1)),
            sigma3() * 0.5,
        ])
        .unwrap()
    }

    #[test]
    fn literal_genus_zero_matrix() {
        let xi = FiniteTypePotential::new(vec![sigma1() * 0.5, sigma3() * 0.5]).unwrap();
        let s = spectral_det(&xi).unwrap();
        assert!((s.coefficients[0] - 0.25).abs() < 1e-15);
        assert_eq!(s.branch_points.len(), 2);
        assert!((s.branch_points[0] - c(0.0, -1.0)).norm() < 1e-12);
        assert!((s.branch_points[1] - c(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn degenerate_line_potential() {
        let xi = FiniteTypePotential::genus_zero(0.0, 0.0).unwrap();
        assert!(matches!(spectral_det(&xi), Err(Error::RepeatedBranchPoints(_))));
    }

    #[test]
    fn genus_zero_helper() {
        let s = spectral_det(&FiniteTypePotential::genus_zero(0.3, 0.4).unwrap()).unwrap();
        assert!((s.coefficients[0] - 0.25).abs() < 1e-15);
        let l = c(0.7, 0.2);
        let xi = FiniteTypePotential::genus_zero(0.3, 0.4).unwrap();
        assert!((s.det(l) - xi.eval(l).det()).norm() < 1e-14);
    }

    #[test]
    fn invariant_violations_are_named() {
        let bad_top = FiniteTypePotential::new(vec![Matrix2C::zero(), sigma3()]).unwrap_err();
        assert!(bad_top.to_string().contains("ξ_1 = ½σ₃"));
        let not_su2 = FiniteTypePotential::new(vec![Matrix2C::identity(), sigma3() * 0.5]).unwrap_err();
        assert!(not_su2.to_string().contains("su₂"));
        let diag = FiniteTypePotential::new(vec![sigma3() * 0.2, sigma3() * 0.5]).unwrap_err();
        assert!(diag.to_string().contains("⊥ σ₃"));
        assert!(FiniteTypePotential::new(vec![sigma3() * 0.5]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let xi = g1((0.3, -0.2), (0.1, 0.4, 0.5));
        let back = FiniteTypePotential::from_json(&xi.to_json()).unwrap();
        assert_eq!(back, xi);
        assert!(FiniteTypePotential::from_json("{\"g\": 1, \"xi\": []}").is_err());
        assert!(FiniteTypePotential::from_json("not json").is_err());
    }

    proptest! {
        #[test]
        fn branch_points_are_conjugation_closed(a in -1.0..1.0f64, b in -1.0..1.0f64,
                                                x in -1.0..1.0f64, y in -1.0..1.0f64, z in -1.0..1.0f64) {
            let xi = g1((a, b), (x, y, z));
            let l = c(0.8, -0.3);
            if let Ok(s) = spectral_det(&xi) {
                prop_assert!((s.det(l) - xi.eval(l).det()).norm() < 1e-12);
                for p in &s.branch_points {
                    prop_assert!(s.branch_points.iter().any(|q| (q - p.conj()).norm() < 1e-7));
                }
            }
        }
    }
}
