//! Symmetric traceless 3×3 order parameters, the Landau–de Gennes bulk
//! potential `f`, the field potential `g`, and projection onto the uniaxial
//! manifold `N = {n⊗n − I/3}`.

use crate::error::{Error, Result};
use crate::numerics::Vec3;
use nalgebra::{Matrix3, SymmetricEigen};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Default relative eigenvalue-gap tolerance for membership in the degenerate set.
pub const DEFAULT_B_TOL: f64 = 1e-9;

const SQRT_2_3: f64 = 0.816_496_580_927_726;

/// Traceless symmetric tensor stored as `[q11, q22, q12, q13, q23]`;
/// `q33 = −q11 − q22`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QTensor {
    pub q11: f64,
    pub q22: f64,
    pub q12: f64,
    pub q13: f64,
    pub q23: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralData {
    /// Eigenvalues in descending order.
    pub eigenvalues: [f64; 3],
    /// Columns are the eigenvectors matching `eigenvalues`.
    pub eigenvectors: Matrix3<f64>,
}

impl SpectralData {
    pub fn eigenvector(&self, i: usize) -> Vec3 {
        self.eigenvectors.column(i).into_owned()
    }

    /// γ(Q) = λ₁ − λ₂.
    pub fn gap(&self) -> f64 {
        self.eigenvalues[0] - self.eigenvalues[1]
    }
}

/// `Q = s(n⊗n − I/3 + t(m⊗m − I/3))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniaxialDecomposition {
    pub s: f64,
    pub t: f64,
    pub n: Vec3,
    pub m: Vec3,
}

impl UniaxialDecomposition {
    pub fn recompose(&self) -> QTensor {
        let third = Matrix3::identity() / 3.0;
        let a = self.n * self.n.transpose() - third;
        let b = self.m * self.m.transpose() - third;
        QTensor::from_matrix(&(self.s * (a + self.t * b)))
    }
}

impl QTensor {
    pub const ZERO: QTensor = QTensor {
        q11: 0.0,
        q22: 0.0,
        q12: 0.0,
        q13: 0.0,
        q23: 0.0,
    };

    pub fn new(q11: f64, q22: f64, q12: f64, q13: f64, q23: f64) -> Self {
        QTensor {
            q11,
            q22,
            q12,
            q13,
            q23,
        }
    }

    pub fn from_components(c: [f64; 5]) -> Self {
        QTensor::new(c[0], c[1], c[2], c[3], c[4])
    }

    pub fn components(&self) -> [f64; 5] {
        [self.q11, self.q22, self.q12, self.q13, self.q23]
    }

    /// Takes the symmetric traceless part of `m`.
    pub fn from_matrix(m: &Matrix3<f64>) -> Self {
        let sym = 0.5 * (m + m.transpose());
        let tr = sym.trace() / 3.0;
        QTensor::new(
            sym[(0, 0)] - tr,
            sym[(1, 1)] - tr,
            sym[(0, 1)],
            sym[(0, 2)],
            sym[(1, 2)],
        )
    }

    /// `n⊗n − I/3` for a unit vector `n`.
    pub fn uniaxial(n: &Vec3) -> Self {
        QTensor::from_matrix(&(n * n.transpose()))
    }

    /// `Q∞ = e₃⊗e₃ − I/3`.
    pub fn q_infinity() -> Self {
        QTensor::uniaxial(&Vec3::z())
    }

    /// Coordinates in a Frobenius-orthonormal basis of the traceless
    /// symmetric matrices, so that `|Q| = |coords|`.
    pub fn from_basis_coords(c: [f64; 5]) -> Self {
        let r2 = std::f64::consts::SQRT_2;
        let r6 = 6f64.sqrt();
        QTensor::new(
            c[0] / r2 + c[1] / r6,
            -c[0] / r2 + c[1] / r6,
            c[2] / r2,
            c[3] / r2,
            c[4] / r2,
        )
    }

    /// A tensor with isotropically distributed direction in the
    /// five-dimensional space and the given norm.
    pub fn random_with_norm<R: Rng + ?Sized>(rng: &mut R, norm: f64) -> Self {
        loop {
            let c: [f64; 5] = std::array::from_fn(|_| standard_normal(rng));
            let len = c.iter().map(|x| x * x).sum::<f64>().sqrt();
            if len > 1e-12 {
                return QTensor::from_basis_coords(c.map(|x| x * norm / len));
            }
        }
    }

    pub fn matrix(&self) -> Matrix3<f64> {
        let q33 = -self.q11 - self.q22;
        Matrix3::new(
            self.q11, self.q12, self.q13, //
            self.q12, self.q22, self.q23, //
            self.q13, self.q23, q33,
        )
    }

    pub fn q33(&self) -> f64 {
        -self.q11 - self.q22
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn norm_squared(&self) -> f64 {
        let q33 = self.q33();
        self.q11 * self.q11
            + self.q22 * self.q22
            + q33 * q33
            + 2.0 * (self.q12 * self.q12 + self.q13 * self.q13 + self.q23 * self.q23)
    }

    pub fn scale(&self, s: f64) -> Self {
        QTensor::from_components(self.components().map(|c| c * s))
    }

    pub fn add(&self, other: &QTensor) -> Self {
        let (a, b) = (self.components(), other.components());
        QTensor::from_components(std::array::from_fn(|i| a[i] + b[i]))
    }

    pub fn sub(&self, other: &QTensor) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn trace_cubed(&self) -> f64 {
        let m = self.matrix();
        (m * m * m).trace()
    }

    /// Bulk potential `f(Q) = −½|Q|² − tr(Q³) + ¾|Q|⁴ + 2/9`.
    pub fn bulk_potential(&self) -> f64 {
        let n2 = self.norm_squared();
        (-0.5 * n2 - self.trace_cubed() + 0.75 * n2 * n2 + 2.0 / 9.0).max(0.0)
    }

    /// Field potential `g(Q) = √(2/3) − Q₃₃/|Q|`, with `g(0) = 0`.
    pub fn field_potential(&self) -> f64 {
        let n = self.norm();
        if n < 1e-14 {
            return 0.0;
        }
        (SQRT_2_3 - self.q33() / n).max(0.0)
    }

    pub fn spectral(&self) -> SpectralData {
        let (values, vectors) = symmetric_eigen(&self.matrix());
        let mut order = [0usize, 1, 2];
        order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
        let mut vecs = Matrix3::zeros();
        let mut vals = [0.0; 3];
        for (k, &i) in order.iter().enumerate() {
            vals[k] = values[i];
            let v = canonical_sign(vectors.column(i).into_owned());
            vecs.set_column(k, &v);
        }
        // The eigenvalues of a traceless tensor sum to zero; remove the residue.
        let mean = (vals[0] + vals[1] + vals[2]) / 3.0;
        for v in &mut vals {
            *v -= mean;
        }
        SpectralData {
            eigenvalues: vals,
            eigenvectors: vecs,
        }
    }

    /// True when `|Q| < tol` or `λ₁ − λ₂ < tol·|Q|`.
    pub fn in_b(&self, tol: f64) -> bool {
        let n = self.norm();
        if n < tol {
            return true;
        }
        self.spectral().gap() < tol * n
    }

    pub fn decompose(&self) -> Result<UniaxialDecomposition> {
        self.decompose_with_tol(DEFAULT_B_TOL)
    }

    pub fn decompose_with_tol(&self, tol: f64) -> Result<UniaxialDecomposition> {
        if self.in_b(tol) {
            return Err(Error::DegenerateTensor);
        }
        let sp = self.spectral();
        let [l1, l2, l3] = sp.eigenvalues;
        let s = l1 - l3;
        let t = ((l2 - l3) / s).clamp(0.0, 1.0);
        Ok(UniaxialDecomposition {
            s,
            t,
            n: sp.eigenvector(0),
            m: sp.eigenvector(1),
        })
    }

    /// Director of the leading eigenvalue, `n(Q)`.
    pub fn director(&self) -> Result<Vec3> {
        Ok(self.decompose()?.n)
    }

    /// `P(Q) = n(Q)⊗n(Q) − I/3`.
    pub fn project_uniaxial(&self) -> Result<QTensor> {
        Ok(QTensor::uniaxial(&self.director()?))
    }

    /// Frobenius distance to `N`, `√(|Q|² − 2λ₁ + 2/3)`.
    pub fn dist_to_n(&self) -> f64 {
        let l1 = self.spectral().eigenvalues[0];
        (self.norm_squared() - 2.0 * l1 + 2.0 / 3.0).max(0.0).sqrt()
    }
}

/// Eigen-decomposition of a symmetric 3×3 matrix. The QL iteration from
/// nalgebra can leave off-diagonal residue around 1e−12 for nearly degenerate
/// pairs, so its result is polished by cyclic Jacobi sweeps.
fn symmetric_eigen(m: &Matrix3<f64>) -> ([f64; 3], Matrix3<f64>) {
    let eig = SymmetricEigen::new(*m);
    let mut v = eig.eigenvectors;
    let mut a = v.transpose() * m * v;
    let scale = m.norm().max(1e-300);
    for _ in 0..10 {
        let off = a[(0, 1)].abs() + a[(0, 2)].abs() + a[(1, 2)].abs();
        if off <= 1e-17 * scale {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            let apq = a[(p, q)];
            if apq.abs() <= 1e-300 {
                continue;
            }
            let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let t = if theta == 0.0 { 1.0 } else { t };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            let mut rot = Matrix3::identity();
            rot[(p, p)] = c;
            rot[(q, q)] = c;
            rot[(p, q)] = s;
            rot[(q, p)] = -s;
            a = rot.transpose() * a * rot;
            v *= rot;
        }
    }
    ([a[(0, 0)], a[(1, 1)], a[(2, 2)]], v)
}

fn canonical_sign(v: Vec3) -> Vec3 {
    for c in v.iter() {
        if c.abs() > 1e-14 {
            return if *c < 0.0 { -v } else { v };
        }
    }
    v
}

pub(crate) fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box–Muller; one variate per call keeps the stream layout simple.
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Sampled supremum of `|g(Q₁) − g(Q₂)| / |Q₁ − Q₂|` over pairs drawn from the
/// shell `√(2/3) − q0 ≤ |Q| ≤ √(2/3) + q0`. The pair stream depends only on
/// `seed`, so more samples can only raise the estimate.
pub fn lipschitz_g_estimate(q0: f64, samples: usize, seed: u64) -> Result<f64> {
    if !(q0 > 0.0 && q0 < SQRT_2_3) {
        return Err(Error::Domain(format!("q0 = {q0} outside (0, √(2/3))")));
    }
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0.0f64;
    for _ in 0..samples {
        let r1 = rng.gen_range(SQRT_2_3 - q0..=SQRT_2_3 + q0);
        let r2 = rng.gen_range(SQRT_2_3 - q0..=SQRT_2_3 + q0);
        let a = QTensor::random_with_norm(&mut rng, r1);
        // Half the pairs are close together to probe the local slope.
        let b = if rng.gen_bool(0.5) {
            let step = 10f64.powf(rng.gen_range(-6.0..-1.0));
            a.add(&QTensor::random_with_norm(&mut rng, step))
        } else {
            QTensor::random_with_norm(&mut rng, r2)
        };
        let d = a.sub(&b).norm();
        if d > 1e-14 {
            best = best.max((a.field_potential() - b.field_potential()).abs() / d);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn diag(a: f64, b: f64) -> QTensor {
        QTensor::new(a, b, 0.0, 0.0, 0.0)
    }

    #[test]
    fn bulk_potential_examples() {
        let qi = QTensor::q_infinity();
        assert!(qi.bulk_potential().abs() < 1e-15);
        assert_relative_eq!(QTensor::ZERO.bulk_potential(), 2.0 / 9.0, epsilon = 1e-15);
        assert_relative_eq!(qi.scale(2.0).bulk_potential(), 22.0 / 9.0, epsilon = 1e-14);
    }

    #[test]
    fn field_potential_examples() {
        assert_eq!(QTensor::ZERO.field_potential(), 0.0);
        assert!(QTensor::q_infinity().scale(0.7).field_potential().abs() < 1e-15);
        let q = QTensor::uniaxial(&Vec3::x());
        assert_relative_eq!(q.field_potential(), 1.5f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn spectral_of_q_infinity() {
        let sp = QTensor::q_infinity().spectral();
        assert_relative_eq!(sp.eigenvalues[0], 2.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(sp.eigenvalues[1], -1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(sp.eigenvalues[2], -1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(sp.eigenvector(0).z, 1.0, epsilon = 1e-15);
        assert_eq!(QTensor::ZERO.spectral().eigenvalues, [0.0; 3]);
    }

    #[test]
    fn decompose_examples() {
        let n = Vec3::new(1.0, 2.0, -2.0) / 3.0;
        let d = QTensor::uniaxial(&n).decompose().unwrap();
        assert_relative_eq!(d.s, 1.0, epsilon = 1e-13);
        assert!(d.t.abs() < 1e-13);
        assert_eq!(QTensor::ZERO.decompose(), Err(Error::DegenerateTensor));
    }

    #[test]
    fn projection_examples() {
        let qi = QTensor::q_infinity();
        let near = qi.add(&diag(0.01, -0.01));
        let p = near.project_uniaxial().unwrap();
        assert!(p.sub(&qi).norm() < 1e-14);
        // Oblate tensor: λ₁ = λ₂.
        let oblate = qi.scale(-1.0);
        assert!(oblate.in_b(1e-9));
        assert_eq!(oblate.project_uniaxial(), Err(Error::DegenerateTensor));
        assert!(!qi.in_b(1e-9));
        assert!(QTensor::ZERO.in_b(1e-9));
    }

    #[test]
    fn dist_examples() {
        assert!(QTensor::q_infinity().dist_to_n() < 1e-7);
        assert_relative_eq!(QTensor::ZERO.dist_to_n(), SQRT_2_3, epsilon = 1e-15);
    }

    #[test]
    fn dist_matches_sphere_sampling() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let q = QTensor::random_with_norm(&mut rng, 0.9);
            let n_pts = 10_000;
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            // Directors are sign-free, so the upper hemisphere suffices.
            let brute = (0..n_pts)
                .map(|i| {
                    let z = 1.0 - (i as f64 + 0.5) / n_pts as f64;
                    let r = (1.0 - z * z).sqrt();
                    let phi = golden * i as f64;
                    let n = Vec3::new(r * phi.cos(), r * phi.sin(), z);
                    q.sub(&QTensor::uniaxial(&n)).norm()
                })
                .fold(f64::INFINITY, f64::min);
            let exact = q.dist_to_n();
            assert!(exact <= brute + 1e-12);
            assert!(brute - exact < 1e-3, "brute {brute} exact {exact}");
        }
    }

    #[test]
    fn lipschitz_estimate_monotone_and_finite() {
        let a = lipschitz_g_estimate(0.3, 500, 9).unwrap();
        let b = lipschitz_g_estimate(0.3, 1000, 9).unwrap();
        assert!(a.is_finite() && a > 0.0);
        assert!(b >= a);
        assert!(lipschitz_g_estimate(0.9, 10, 0).is_err());
    }

    #[test]
    fn g_quotient_vanishes_on_q_infinity_ray() {
        let qi = QTensor::q_infinity();
        let (a, b) = (qi.scale(0.5), qi.scale(1.2));
        let quotient = (a.field_potential() - b.field_potential()).abs() / a.sub(&b).norm();
        assert!(quotient < 1e-14);
    }

    fn arb_q() -> impl Strategy<Value = QTensor> {
        prop::array::uniform5(-1.5f64..1.5).prop_map(QTensor::from_components)
    }

    proptest! {
        #[test]
        fn matrix_is_symmetric_traceless(q in arb_q()) {
            let m = q.matrix();
            prop_assert!(m.trace().abs() < 1e-14);
            prop_assert!((m - m.transpose()).norm() < 1e-14);
        }

        #[test]
        fn spectral_roundtrip(q in arb_q()) {
            let sp = q.spectral();
            let v = sp.eigenvectors;
            prop_assert!((v.transpose() * v - Matrix3::identity()).norm() < 1e-10);
            prop_assert!(sp.eigenvalues.iter().sum::<f64>().abs() < 1e-12);
            prop_assert!(sp.eigenvalues[0] >= sp.eigenvalues[1] && sp.eigenvalues[1] >= sp.eigenvalues[2]);
            let d = nalgebra::Matrix3::from_diagonal(&Vec3::from(sp.eigenvalues));
            prop_assert!((v * d * v.transpose() - q.matrix()).norm() < 1e-12);
        }

        #[test]
        fn decompose_roundtrip(q in arb_q()) {
            prop_assume!(!q.in_b(1e-6));
            let d = q.decompose().unwrap();
            prop_assert!(d.recompose().sub(&q).norm() < 1e-12);
            prop_assert!(d.n.dot(&d.m).abs() < 1e-12);
            prop_assert!(d.s >= 0.0 && (0.0..=1.0).contains(&d.t));
        }

        #[test]
        fn projection_is_idempotent(q in arb_q()) {
            prop_assume!(!q.in_b(1e-6));
            let p = q.project_uniaxial().unwrap();
            let pp = p.project_uniaxial().unwrap();
            prop_assert!(p.sub(&pp).norm() < 1e-12);
            let sp = p.spectral();
            prop_assert!((sp.gap() - 1.0).abs() < 1e-12);
            let n3 = q.director().unwrap().z;
            prop_assert!((p.field_potential() - 1.5f64.sqrt() * (1.0 - n3 * n3)).abs() < 1e-12);
        }

        #[test]
        fn potentials_nonnegative(q in arb_q()) {
            prop_assert!(q.bulk_potential() >= 0.0);
            prop_assert!(q.field_potential() >= 0.0);
        }
    }
}
