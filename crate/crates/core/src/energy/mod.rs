//! Evaluation of the limiting anchoring energy
//! `E₀(M; n) = ⁴√24 ∫_M (1 − √(1 − (ν·n)²)) dH²`.

pub mod closed;
pub mod elliptic;

pub use closed::{
    cylinder_factor, e0_cube, e0_cube_gradient, e0_rounded_cube, e0_sphere, e0_spherocylinder,
    e0_torus,
};
pub use elliptic::complete_elliptic_e;

use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::numerics::{compensated_sum, Vec3, FOURTH_ROOT_24};
use crate::surfaces::{AnalyticShape, QuadratureSamples, RevolutionSurface, Surface};
use serde::{Deserialize, Serialize};
use std::str::FromStr;

/// Default resolution of the quadrature engines.
pub const DEFAULT_RESOLUTION: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EngineTag {
    Quadrature,
    Revolution,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyValue {
    pub value: f64,
    pub engine: EngineTag,
    /// Change against the half-resolution evaluation, when one was made.
    pub est_error: Option<f64>,
}

/// Engine requested by a caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineChoice {
    /// Closed form when one exists, else the revolution rule, else patch
    /// quadrature.
    #[default]
    Auto,
    Closed,
    Revolution,
    /// Quadrature over a tessellation of the surface.
    Mesh,
    /// Quadrature over the exact patch rule of the surface.
    Quadrature,
}

impl FromStr for EngineChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(EngineChoice::Auto),
            "closed" => Ok(EngineChoice::Closed),
            "revolution" => Ok(EngineChoice::Revolution),
            "mesh" => Ok(EngineChoice::Mesh),
            "quadrature" => Ok(EngineChoice::Quadrature),
            _ => Err(Error::Parse(format!("unknown engine '{s}'"))),
        }
    }
}

/// Pointwise energy density `⁴√24 (1 − √(1 − (ν·n)²))`.
#[inline]
pub fn density(nu: &Vec3, n: &Vec3) -> f64 {
    let c = nu.dot(n);
    FOURTH_ROOT_24 * (1.0 - (1.0 - c * c).max(0.0).sqrt())
}

pub fn e0_quadrature(samples: &QuadratureSamples, n: &Direction) -> EnergyValue {
    let v = n.vec();
    let value = compensated_sum(
        samples
            .normals
            .iter()
            .zip(&samples.weights)
            .map(|(nu, w)| w * density(nu, &v)),
    );
    EnergyValue {
        value,
        engine: EngineTag::Quadrature,
        est_error: None,
    }
}

/// Revolution rule with `n` rotated into the x–z plane, which makes the
/// result exactly invariant under rotations of `n` about e₃.
pub fn e0_revolution(surface: &RevolutionSurface, n: &Direction, resolution: usize) -> EnergyValue {
    let resolution = resolution.max(8);
    let fine = revolution_value(surface, n, resolution);
    let coarse = revolution_value(surface, n, resolution / 2);
    EnergyValue {
        value: fine,
        engine: EngineTag::Revolution,
        est_error: Some((fine - coarse).abs()),
    }
}

fn revolution_value(surface: &RevolutionSurface, n: &Direction, resolution: usize) -> f64 {
    let nh = n.x().hypot(n.y()).min(1.0);
    let nz = n.z();
    let n_theta = 2 * resolution;
    let dtheta = 2.0 * std::f64::consts::PI / n_theta as f64;
    let cos_theta: Vec<f64> = (0..n_theta).map(|j| (j as f64 * dtheta).cos()).collect();
    let rule = surface.profile_rule(resolution, Some((nh, nz)));
    compensated_sum(rule.iter().map(|&[_, _, nr, nzp, w]| {
        let ring = compensated_sum(cos_theta.iter().map(|c| {
            let x = nr * nh * c + nzp * nz;
            1.0 - (1.0 - x * x).max(0.0).sqrt()
        }));
        w * dtheta * ring
    })) * FOURTH_ROOT_24
}

/// Closed-form or reduced evaluation for analytic shapes. Cubes use the
/// side length `2R`.
pub fn e0_closed(shape: &AnalyticShape, n: &Direction, resolution: usize) -> Result<EnergyValue> {
    let exact = |value| EnergyValue {
        value,
        engine: EngineTag::ClosedForm,
        est_error: Some(0.0),
    };
    match *shape {
        AnalyticShape::Sphere { radius } => Ok(exact(e0_sphere(radius))),
        AnalyticShape::Spherocylinder { radius, length } => {
            Ok(exact(e0_spherocylinder(radius, length, n)?))
        }
        AnalyticShape::Torus { major, minor } => {
            let (value, err) = e0_torus(major, minor, n.z(), resolution)?;
            Ok(EnergyValue {
                value,
                engine: EngineTag::ClosedForm,
                est_error: Some(err),
            })
        }
        AnalyticShape::Cube { half_width } => Ok(exact(e0_cube(2.0 * half_width, n)?)),
        AnalyticShape::RoundedCube {
            half_width,
            epsilon,
        } => Ok(exact(e0_rounded_cube(half_width, epsilon, n)?)),
    }
}

/// Evaluates `E₀(M; n)` with the requested engine.
pub fn e0(
    surface: &Surface,
    n: &Direction,
    engine: EngineChoice,
    resolution: usize,
) -> Result<EnergyValue> {
    match (engine, surface) {
        (EngineChoice::Auto | EngineChoice::Closed, Surface::Analytic(a)) => {
            e0_closed(a, n, resolution)
        }
        (EngineChoice::Closed, _) => {
            Err(Error::Unsupported("no closed form for this surface".into()))
        }
        (EngineChoice::Auto | EngineChoice::Revolution, Surface::Revolution(r)) => {
            Ok(e0_revolution(r, n, resolution))
        }
        (EngineChoice::Revolution, Surface::Analytic(a)) => match a.revolution() {
            Some(r) => Ok(e0_revolution(&r, n, resolution)),
            None => Err(Error::Unsupported(format!(
                "{} is not a surface of revolution",
                a.name()
            ))),
        },
        (EngineChoice::Revolution, Surface::Mesh(_)) => Err(Error::Unsupported(
            "meshes have no revolution profile".into(),
        )),
        (EngineChoice::Mesh, s) => {
            let mesh = s.tessellate(resolution)?;
            Ok(e0_quadrature(&mesh.sample(), n))
        }
        (EngineChoice::Auto | EngineChoice::Quadrature, s) => {
            Ok(e0_quadrature(&s.sample(resolution)?, n))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfaces::TriMesh;
    use rand::SeedableRng;

    fn random_direction(rng: &mut impl rand::Rng) -> Direction {
        loop {
            let v = Vec3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            if v.norm() > 0.1 && v.norm() <= 1.0 {
                return Direction::new(v).unwrap();
            }
        }
    }

    #[test]
    fn sphere_quadrature_value() {
        let s = Surface::from(AnalyticShape::sphere(1.0).unwrap());
        let v = e0(&s, &Direction::e3(), EngineChoice::Quadrature, 64).unwrap();
        assert!((v.value - 5.968925).abs() < 1e-5);
    }

    #[test]
    fn flat_patch_parallel_to_field_costs_nothing() {
        let mut q = QuadratureSamples::default();
        for k in 0..10 {
            q.push(Vec3::new(k as f64, 0.0, 0.0), Vec3::x(), 0.1);
        }
        assert_eq!(e0_quadrature(&q, &Direction::e3()).value, 0.0);
    }

    #[test]
    fn torus_quadrature_at_pole() {
        let s = Surface::from(AnalyticShape::torus(2.0, 1.0).unwrap());
        let v = e0(&s, &Direction::e3(), EngineChoice::Quadrature, 256).unwrap();
        assert!((v.value - 63.504403).abs() < 1e-3);
    }

    #[test]
    fn revolution_examples() {
        let t = RevolutionSurface::torus(2.0, 1.0).unwrap();
        let v0 = e0_revolution(&t, &Direction::e1(), 256).value;
        assert!((v0 - 27.602923).abs() < 1e-3);
        let v5 = e0_revolution(&t, &Direction::from_n3(0.5).unwrap(), 256).value;
        assert!((v5 - 34.269213).abs() < 1e-3);
        let s = RevolutionSurface::sphere(1.0).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..5 {
            let v = e0_revolution(&s, &random_direction(&mut rng), 256).value;
            assert!((v - e0_sphere(1.0)).abs() < 1e-6);
        }
    }

    #[test]
    fn engines_agree_on_round_shapes() {
        let shapes = [
            AnalyticShape::sphere(1.0).unwrap(),
            AnalyticShape::spherocylinder(1.0, 2.0).unwrap(),
            AnalyticShape::torus(2.0, 1.0).unwrap(),
        ];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for shape in shapes {
            let rev = shape.revolution().unwrap();
            let mesh = shape.tessellate(256).unwrap().sample();
            for _ in 0..8 {
                let n = random_direction(&mut rng);
                let closed = e0_closed(&shape, &n, 256).unwrap().value;
                let r = e0_revolution(&rev, &n, 256).value;
                let m = e0_quadrature(&mesh, &n).value;
                assert!(
                    (closed - r).abs() < 1e-5,
                    "{} {n}: {closed} vs {r}",
                    shape.name()
                );
                assert!(
                    (closed - m).abs() < 1e-2,
                    "{} {n}: {closed} vs mesh {m}",
                    shape.name()
                );
            }
        }
    }

    #[test]
    fn bounds_and_antipodal_symmetry() {
        let shape = AnalyticShape::rounded_cube(1.0, 0.2).unwrap();
        let samples = shape.sample(32).unwrap();
        let area = samples.total_weight();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let n = random_direction(&mut rng);
            let a = e0_quadrature(&samples, &n).value;
            let b = e0_quadrature(&samples, &-n).value;
            assert_eq!(a, b);
            assert!(a >= 0.0 && a <= FOURTH_ROOT_24 * area);
        }
    }

    #[test]
    fn axial_invariance_is_exact() {
        let t = RevolutionSurface::spherocylinder(1.0, 2.0).unwrap();
        let n = Direction::from_components(0.4, 0.0, 0.6).unwrap();
        let base = e0_revolution(&t, &n, 64).value;
        for k in 0..20 {
            let phi = 0.31 * k as f64;
            let h = 0.4f64;
            let m = Direction::from_components(h * phi.cos(), h * phi.sin(), 0.6).unwrap();
            assert!((e0_revolution(&t, &m, 64).value - base).abs() < 1e-8);
        }
    }

    #[test]
    fn mesh_input_uses_its_own_triangles() {
        let v = vec![Vec3::zeros(), Vec3::x(), Vec3::y(), Vec3::z()];
        let t = vec![[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]];
        let s = Surface::from(TriMesh::new(v, t).unwrap());
        let e = e0(&s, &Direction::e3(), EngineChoice::Auto, 8).unwrap();
        // Faces with normals ±e₁, ±e₂ are parallel to e₃; only two faces cost.
        let expect = FOURTH_ROOT_24 * 0.5
            + FOURTH_ROOT_24 * (3f64.sqrt() / 2.0) * (1.0 - (2.0f64 / 3.0).sqrt());
        assert!((e.value - expect).abs() < 1e-12);
        assert!(e0(&s, &Direction::e3(), EngineChoice::Closed, 8).is_err());
    }
}
