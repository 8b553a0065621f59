//! Randomized checks of the tensor invariants on large sample counts.

use crate::numerics::Vec3;
use crate::qtensor::{standard_normal, QTensor};
use nalgebra::Matrix3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

const SQRT_3_2: f64 = 1.224_744_871_391_589;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub name: String,
    pub samples: usize,
    /// Worst value of the checked quantity; its meaning depends on the check.
    pub worst: f64,
    pub passed: bool,
}

struct Tally {
    name: &'static str,
    samples: usize,
    worst: f64,
    passed: bool,
}

impl Tally {
    fn new(name: &'static str, start: f64) -> Self {
        Tally {
            name,
            samples: 0,
            worst: start,
            passed: true,
        }
    }

    /// Records `value` and fails the check unless `ok`.
    fn max(&mut self, value: f64, ok: bool) {
        self.samples += 1;
        self.worst = self.worst.max(value);
        self.passed &= ok;
    }

    fn min(&mut self, value: f64, ok: bool) {
        self.samples += 1;
        self.worst = self.worst.min(value);
        self.passed &= ok;
    }

    fn done(self) -> PropertyCheck {
        PropertyCheck {
            name: self.name.into(),
            samples: self.samples,
            worst: self.worst,
            passed: self.passed,
        }
    }
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v = Vec3::new(
            standard_normal(rng),
            standard_normal(rng),
            standard_normal(rng),
        );
        if v.norm() > 1e-6 {
            return v.normalize();
        }
    }
}

/// A mix of generic tensors, tensors near the uniaxial manifold and tensors
/// near `Q∞`.
fn random_tensor(rng: &mut ChaCha8Rng) -> QTensor {
    match rng.gen_range(0..3) {
        0 => QTensor::from_components(std::array::from_fn(|_| rng.gen_range(-1.5..1.5))),
        1 => {
            let norm = rng.gen_range(0.0..2.5);
            QTensor::random_with_norm(rng, norm)
        }
        _ => {
            let n = random_unit(rng);
            let scale = 10f64.powf(rng.gen_range(-6.0..0.0));
            QTensor::uniaxial(&n).add(&QTensor::random_with_norm(rng, scale))
        }
    }
}

/// Runs every check on `samples` random draws each.
pub fn qtensor_suite(samples: usize, seed: u64) -> Vec<PropertyCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut structure = Tally::new("symmetric and traceless", 0.0);
    let mut potentials = Tally::new("f ≥ 0 and g ≥ 0", 0.0);
    let mut spectral = Tally::new("spectral round trip", 0.0);
    let mut decomposition = Tally::new("uniaxial decomposition round trip", 0.0);
    let mut projection = Tally::new("projection idempotent with unit gap", 0.0);
    let mut identity = Tally::new("g(P(Q)) = √(3/2)(1 − n₃²)", 0.0);
    for _ in 0..samples {
        let q = random_tensor(&mut rng);
        let m = q.matrix();
        structure.max(
            m.trace().abs().max((m - m.transpose()).norm()),
            m.trace().abs() < 1e-14 && (m - m.transpose()).norm() < 1e-14,
        );
        let (f, g) = (q.bulk_potential(), q.field_potential());
        potentials.min(f.min(g), f >= 0.0 && g >= 0.0);
        let sp = q.spectral();
        let v = sp.eigenvectors;
        let d = Matrix3::from_diagonal(&Vec3::from(sp.eigenvalues));
        let orth = (v.transpose() * v - Matrix3::identity()).norm();
        let recon = (v * d * v.transpose() - m).norm();
        let sum = sp.eigenvalues.iter().sum::<f64>().abs();
        spectral.max(recon.max(sum), orth < 1e-10 && recon < 1e-12 && sum < 1e-12);
        if q.in_b(1e-6) {
            continue;
        }
        let dec = q.decompose().expect("outside B");
        let err = dec.recompose().sub(&q).norm().max(dec.n.dot(&dec.m).abs());
        decomposition.max(err, err < 1e-12);
        let p = q.project_uniaxial().expect("outside B");
        let pp = p.project_uniaxial().expect("on N");
        let idem = p.sub(&pp).norm().max((p.spectral().gap() - 1.0).abs());
        projection.max(idem, idem < 1e-12);
        let n3 = dec.n.z;
        let gap = (p.field_potential() - SQRT_3_2 * (1.0 - n3 * n3)).abs();
        identity.max(gap, gap < 1e-12);
    }

    // f vanishes exactly on N, quadratically in the distance.
    let mut zero_set = Tally::new("f < 1e−10 ⇔ dist(Q, N) < 1e−5 (quadratic band)", 0.0);
    for _ in 0..samples {
        let n = random_unit(&mut rng);
        let scale = 10f64.powf(rng.gen_range(-7.0..-3.0));
        let q = QTensor::uniaxial(&n).add(&QTensor::random_with_norm(&mut rng, scale));
        let (f, dist) = (q.bulk_potential(), q.dist_to_n());
        let forward = f >= 1e-10 || dist < 1e-5;
        let backward = dist >= 1e-5 || f < 1.5e-10 * (1.0 + 1e-3);
        zero_set.max(
            if dist > 0.0 { f / (dist * dist) } else { 0.0 },
            forward && backward,
        );
    }

    let mut ray = Tally::new("g(sQ∞) = 0", 0.0);
    for _ in 0..samples {
        let s = rng.gen_range(0.0..3.0);
        let g = QTensor::q_infinity().scale(s).field_potential();
        ray.max(g, g.abs() < 1e-14);
    }

    let mut coercive = Vec::new();
    for (name, h) in [
        ("coercivity, ξ/η = 0.1", 0.1),
        ("coercivity, ξ/η = 0.01", 0.01),
    ] {
        let mut t = Tally::new(name, f64::INFINITY);
        for _ in 0..samples {
            let scale = 10f64.powf(rng.gen_range(-4.0..0.5));
            let dq = QTensor::random_with_norm(&mut rng, scale);
            let q = QTensor::q_infinity().add(&dq);
            let d2 = dq.norm_squared();
            let ratio = (q.bulk_potential() + h * h * q.field_potential()) / d2;
            t.min(ratio, ratio > 0.0);
        }
        coercive.push(t);
    }

    let mut slope = Tally::new("ṅ₃²/(1 − n₃²) ≤ |ṅ|²", f64::NEG_INFINITY);
    let mut taken = 0;
    while taken < samples {
        let a = random_unit(&mut rng);
        let b = random_unit(&mut rng) * rng.gen_range(0.0..3.0);
        let c = random_unit(&mut rng) * rng.gen_range(0.0..3.0);
        let t = rng.gen_range(-1.0..1.0);
        let curve = |s: f64| a + b * s + c * (s * s);
        if curve(t).norm() < 1e-3 {
            continue;
        }
        let n = |s: f64| curve(s).normalize();
        let h = 1e-6;
        let dn = (n(t + h) - n(t - h)) / (2.0 * h);
        let n3 = n(t).z;
        if 1.0 - n3 * n3 < 1e-6 {
            continue;
        }
        taken += 1;
        let excess = dn.z * dn.z / (1.0 - n3 * n3) - dn.norm_squared();
        slope.max(excess, excess <= 1e-8 * (1.0 + dn.norm_squared()));
    }

    let mut out: Vec<PropertyCheck> = [
        structure,
        potentials,
        spectral,
        decomposition,
        projection,
        identity,
        zero_set,
        ray,
    ]
    .into_iter()
    .map(Tally::done)
    .collect();
    out.extend(coercive.into_iter().map(Tally::done));
    out.push(slope.done());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        for c in qtensor_suite(2000, 11) {
            assert!(c.passed, "{c:?}");
            assert!(c.samples > 0);
        }
    }
}
