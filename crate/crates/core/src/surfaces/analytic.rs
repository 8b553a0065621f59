use super::mesh::{tessellate_box, tessellate_revolution};
use super::{QuadratureSamples, RevolutionSurface, SymmetryClass, TriMesh};
use crate::error::{Error, Result};
use crate::numerics::{gauss_legendre_on, Vec3};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

/// Closed particle surfaces with known geometry. Cubes are centred at the
/// origin with half-width `R`, so `Cube(R)` has side `2R` and area `24R²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case", deny_unknown_fields)]
pub enum AnalyticShape {
    Sphere {
        #[serde(rename = "R")]
        radius: f64,
    },
    /// Cylinder of radius `R` and length `L` along e₃ with hemispherical caps.
    Spherocylinder {
        #[serde(rename = "R")]
        radius: f64,
        #[serde(rename = "L")]
        length: f64,
    },
    /// Torus about e₃ with `R > r > 0`.
    Torus {
        #[serde(rename = "R")]
        major: f64,
        #[serde(rename = "r")]
        minor: f64,
    },
    Cube {
        #[serde(rename = "R")]
        half_width: f64,
    },
    /// Cube of half-width `R` with edges and corners rounded to radius `ε`,
    /// the boundary of `[−(R−ε), R−ε]³ ⊕ B_ε`.
    RoundedCube {
        #[serde(rename = "R")]
        half_width: f64,
        epsilon: f64,
    },
}

impl AnalyticShape {
    pub fn sphere(r: f64) -> Result<Self> {
        AnalyticShape::Sphere { radius: r }.validated()
    }

    pub fn spherocylinder(r: f64, l: f64) -> Result<Self> {
        AnalyticShape::Spherocylinder {
            radius: r,
            length: l,
        }
        .validated()
    }

    pub fn torus(big_r: f64, r: f64) -> Result<Self> {
        AnalyticShape::Torus {
            major: big_r,
            minor: r,
        }
        .validated()
    }

    pub fn cube(r: f64) -> Result<Self> {
        AnalyticShape::Cube { half_width: r }.validated()
    }

    pub fn rounded_cube(r: f64, eps: f64) -> Result<Self> {
        AnalyticShape::RoundedCube {
            half_width: r,
            epsilon: eps,
        }
        .validated()
    }

    pub fn validated(self) -> Result<Self> {
        let pos = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidShape(format!(
                    "{name} = {v} must be positive"
                )))
            }
        };
        match self {
            AnalyticShape::Sphere { radius } => pos("R", radius)?,
            AnalyticShape::Spherocylinder { radius, length } => {
                pos("R", radius)?;
                pos("L", length)?;
            }
            AnalyticShape::Torus { major, minor } => {
                pos("R", major)?;
                pos("r", minor)?;
                if minor >= major {
                    return Err(Error::InvalidShape(format!(
                        "torus needs R > r, got R = {major}, r = {minor}"
                    )));
                }
            }
            AnalyticShape::Cube { half_width } => pos("R", half_width)?,
            AnalyticShape::RoundedCube {
                half_width,
                epsilon,
            } => {
                pos("R", half_width)?;
                pos("epsilon", epsilon)?;
                if epsilon >= 0.5 * half_width {
                    return Err(Error::InvalidShape(format!(
                        "rounded cube needs ε < R/2, got R = {half_width}, ε = {epsilon}"
                    )));
                }
            }
        }
        Ok(self)
    }

    pub fn name(&self) -> &'static str {
        match self {
            AnalyticShape::Sphere { .. } => "sphere",
            AnalyticShape::Spherocylinder { .. } => "spherocylinder",
            AnalyticShape::Torus { .. } => "torus",
            AnalyticShape::Cube { .. } => "cube",
            AnalyticShape::RoundedCube { .. } => "rounded-cube",
        }
    }

    /// Geometric side length of the cube shapes.
    pub fn side_length(&self) -> Option<f64> {
        match *self {
            AnalyticShape::Cube { half_width } | AnalyticShape::RoundedCube { half_width, .. } => {
                Some(2.0 * half_width)
            }
            _ => None,
        }
    }

    pub fn area(&self) -> f64 {
        match *self {
            AnalyticShape::Sphere { radius } => 4.0 * PI * radius * radius,
            AnalyticShape::Spherocylinder { radius, length } => {
                2.0 * PI * radius * length + 4.0 * PI * radius * radius
            }
            AnalyticShape::Torus { major, minor } => 4.0 * PI * PI * major * minor,
            AnalyticShape::Cube { half_width } => 24.0 * half_width * half_width,
            AnalyticShape::RoundedCube {
                half_width,
                epsilon,
            } => {
                let side = 2.0 * (half_width - epsilon);
                6.0 * side * side
                    + 12.0 * (FRAC_PI_2 * epsilon) * side
                    + 4.0 * PI * epsilon * epsilon
            }
        }
    }

    pub fn max_curvature(&self) -> Result<f64> {
        match *self {
            AnalyticShape::Sphere { radius } | AnalyticShape::Spherocylinder { radius, .. } => {
                Ok(1.0 / radius)
            }
            AnalyticShape::Torus { major, minor } => Ok((1.0 / minor).max(1.0 / (major - minor))),
            AnalyticShape::Cube { .. } => Err(Error::NotC11),
            AnalyticShape::RoundedCube { epsilon, .. } => Ok(1.0 / epsilon),
        }
    }

    pub fn symmetry(&self) -> SymmetryClass {
        match self {
            AnalyticShape::Sphere { .. } => SymmetryClass::Full,
            AnalyticShape::Spherocylinder { .. } | AnalyticShape::Torus { .. } => {
                SymmetryClass::Axial
            }
            AnalyticShape::Cube { .. } | AnalyticShape::RoundedCube { .. } => SymmetryClass::None,
        }
    }

    /// Profile chain for the shapes that are surfaces of revolution.
    pub fn revolution(&self) -> Option<RevolutionSurface> {
        match *self {
            AnalyticShape::Sphere { radius } => RevolutionSurface::sphere(radius).ok(),
            AnalyticShape::Spherocylinder { radius, length } => {
                RevolutionSurface::spherocylinder(radius, length).ok()
            }
            AnalyticShape::Torus { major, minor } => RevolutionSurface::torus(major, minor).ok(),
            _ => None,
        }
    }

    /// Quadrature per smooth patch: revolution rule for round shapes,
    /// Gauss–Legendre tensor rules on faces, cylinder strips and sphere
    /// octants for the cubes. `resolution` is the node count per patch
    /// direction.
    pub fn sample(&self, resolution: usize) -> Result<QuadratureSamples> {
        if let Some(rev) = self.revolution() {
            return Ok(rev.sample(resolution));
        }
        match *self {
            AnalyticShape::Cube { half_width } => Ok(box_faces(half_width, half_width, resolution)),
            AnalyticShape::RoundedCube {
                half_width,
                epsilon,
            } => Ok(rounded_cube_samples(
                half_width - epsilon,
                epsilon,
                resolution,
            )),
            _ => unreachable!("round shapes handled above"),
        }
    }

    /// [`AnalyticShape::sample`] adapted to the direction `n` where that
    /// helps (surfaces of revolution).
    pub fn sample_aligned(&self, resolution: usize, n: &Vec3) -> Result<QuadratureSamples> {
        match self.revolution() {
            Some(rev) => Ok(rev.sample_aligned(resolution, n)),
            None => self.sample(resolution),
        }
    }

    pub fn tessellate(&self, resolution: usize) -> Result<TriMesh> {
        if let Some(rev) = self.revolution() {
            return tessellate_revolution(&rev, resolution);
        }
        match *self {
            AnalyticShape::Cube { half_width } => tessellate_box(half_width, 0.0, resolution),
            AnalyticShape::RoundedCube {
                half_width,
                epsilon,
            } => tessellate_box(half_width - epsilon, epsilon, resolution),
            _ => unreachable!("round shapes handled above"),
        }
    }
}

/// Six faces of the cube of half-width `a` placed at distance `offset` from
/// the centre (for the flat part of a rounded cube `offset = a + ε`).
fn box_faces(a: f64, offset: f64, n: usize) -> QuadratureSamples {
    let rule = gauss_legendre_on(n, -a, a);
    let mut out = QuadratureSamples::with_capacity(6 * n * n);
    for axis in 0..3 {
        let (i, j) = ((axis + 1) % 3, (axis + 2) % 3);
        for sign in [1.0, -1.0] {
            let mut normal = Vec3::zeros();
            normal[axis] = sign;
            for &(u, wu) in &rule {
                for &(v, wv) in &rule {
                    let mut p = Vec3::zeros();
                    p[axis] = sign * offset;
                    p[i] = u;
                    p[j] = v;
                    out.push(p, normal, wu * wv);
                }
            }
        }
    }
    out
}

fn rounded_cube_samples(a: f64, eps: f64, n: usize) -> QuadratureSamples {
    let mut out = box_faces(a, a + eps, n);
    let along = gauss_legendre_on(n, -a, a);
    let angle = gauss_legendre_on(n, 0.0, FRAC_PI_2);
    // Quarter cylinders along each axis k, in the quadrant (s_i e_i, s_j e_j).
    for k in 0..3 {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        for si in [1.0, -1.0] {
            for sj in [1.0, -1.0] {
                for &(phi, wphi) in &angle {
                    let mut normal = Vec3::zeros();
                    normal[i] = si * phi.cos();
                    normal[j] = sj * phi.sin();
                    for &(t, wt) in &along {
                        let mut p = normal * eps;
                        p[i] += si * a;
                        p[j] += sj * a;
                        p[k] = t;
                        out.push(p, normal, eps * wphi * wt);
                    }
                }
            }
        }
    }
    // Sphere octants at the eight corners.
    for s1 in [1.0, -1.0] {
        for s2 in [1.0, -1.0] {
            for s3 in [1.0, -1.0] {
                let corner = Vec3::new(s1 * a, s2 * a, s3 * a);
                for &(th, wth) in &angle {
                    for &(ph, wph) in &angle {
                        let normal = Vec3::new(
                            s1 * th.sin() * ph.cos(),
                            s2 * th.sin() * ph.sin(),
                            s3 * th.cos(),
                        );
                        out.push(
                            corner + eps * normal,
                            normal,
                            eps * eps * th.sin() * wth * wph,
                        );
                    }
                }
            }
        }
    }
    out
}

/// Area of the symmetric difference between `Cube(R)` and `RoundedCube(R, ε)`
/// (in either order). The shared part is the flat square of side `2(R−ε)` on
/// each face.
pub fn symmetric_difference_area(a: &AnalyticShape, b: &AnalyticShape) -> Result<f64> {
    let pair = match (*a, *b) {
        (
            AnalyticShape::Cube { half_width: r },
            AnalyticShape::RoundedCube {
                half_width,
                epsilon,
            },
        )
        | (
            AnalyticShape::RoundedCube {
                half_width,
                epsilon,
            },
            AnalyticShape::Cube { half_width: r },
        ) => {
            if (r - half_width).abs() > 1e-12 * r.max(half_width) {
                None
            } else {
                Some((r, epsilon))
            }
        }
        _ => None,
    };
    let (r, eps) = pair.ok_or_else(|| {
        Error::UnsupportedPair(format!("{} and {} with matching R", a.name(), b.name()))
    })?;
    let side = 2.0 * (r - eps);
    let cube_only = 6.0 * (4.0 * r * r - side * side);
    let rounded_only = 12.0 * FRAC_PI_2 * eps * side + 4.0 * PI * eps * eps;
    Ok(cube_only + rounded_only)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    #[test]
    fn sample_weights_match_areas() {
        let shapes = [
            AnalyticShape::sphere(1.0).unwrap(),
            AnalyticShape::spherocylinder(1.0, 2.0).unwrap(),
            AnalyticShape::torus(2.0, 1.0).unwrap(),
            AnalyticShape::cube(1.0).unwrap(),
            AnalyticShape::rounded_cube(1.0, 0.1).unwrap(),
        ];
        for s in shapes {
            let w = s.sample(128).unwrap().total_weight();
            assert_relative_eq!(w, s.area(), max_relative = 1e-6);
        }
    }

    #[test]
    fn rounded_cube_area_formula() {
        let s = AnalyticShape::rounded_cube(1.0, 0.1).unwrap();
        let eps: f64 = 0.1;
        let expect = 6.0 * (2.0 - 2.0 * eps).powi(2)
            + 12.0 * (PI * eps / 2.0) * (2.0 - 2.0 * eps)
            + 4.0 * PI * eps * eps;
        assert_relative_eq!(s.area(), expect, epsilon = 1e-14);
    }

    #[test]
    fn rounded_cube_samples_lie_on_surface() {
        let s = rounded_cube_samples(0.8, 0.2, 8);
        for (p, n) in s.points.iter().zip(&s.normals) {
            let q = p.map(|c| c.clamp(-0.8, 0.8));
            assert!(((p - q).norm() - 0.2).abs() < 1e-14);
            assert!(((p - q) / 0.2 - n).norm() < 1e-12);
        }
    }

    #[test]
    fn curvature_bounds() {
        assert_eq!(
            AnalyticShape::sphere(2.0).unwrap().max_curvature().unwrap(),
            0.5
        );
        assert_eq!(
            AnalyticShape::torus(2.0, 1.0)
                .unwrap()
                .max_curvature()
                .unwrap(),
            1.0
        );
        assert_eq!(
            AnalyticShape::rounded_cube(1.0, 0.2)
                .unwrap()
                .max_curvature()
                .unwrap(),
            5.0
        );
        assert_eq!(
            AnalyticShape::cube(1.0).unwrap().max_curvature(),
            Err(Error::NotC11)
        );
    }

    #[test]
    fn invalid_shapes_rejected() {
        assert!(AnalyticShape::torus(1.0, 1.0).is_err());
        assert!(AnalyticShape::rounded_cube(1.0, 0.5).is_err());
        assert!(AnalyticShape::sphere(-1.0).is_err());
    }

    #[test]
    fn serde_uses_short_parameter_names() {
        let t: AnalyticShape =
            serde_json::from_str(r#"{"shape":"torus","R":2.0,"r":1.0}"#).unwrap();
        assert_eq!(t, AnalyticShape::torus(2.0, 1.0).unwrap());
        let s = serde_json::to_string(&AnalyticShape::rounded_cube(1.0, 0.1).unwrap()).unwrap();
        assert_eq!(s, r#"{"shape":"rounded-cube","R":1.0,"epsilon":0.1}"#);
    }

    /// Monte-Carlo estimate over uniform points of the cube surface. Points
    /// outside the flat squares belong to the cube only; pushing them onto the
    /// rounded cube by the offset projection and weighting by the Jacobian of
    /// that map gives the rounded-only area.
    fn monte_carlo_difference(r: f64, eps: f64, n: usize) -> f64 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let a = r - eps;
        let project = |x: Vec3| {
            let q = x.map(|c| c.clamp(-a, a));
            q + eps * (x - q).normalize()
        };
        let cube_area = 24.0 * r * r;
        let h = 1e-6;
        let mut total = 0.0;
        for _ in 0..n {
            let u: f64 = rng.gen_range(-r..r);
            let v: f64 = rng.gen_range(-r..r);
            if u.abs() <= a && v.abs() <= a {
                continue;
            }
            // By symmetry every face behaves like the top face.
            let face = |u: f64, v: f64| project(Vec3::new(u, v, r));
            let du = (face(u + h, v) - face(u - h, v)) / (2.0 * h);
            let dv = (face(u, v + h) - face(u, v - h)) / (2.0 * h);
            total += 1.0 + du.cross(&dv).norm();
        }
        cube_area * total / n as f64
    }

    #[test]
    fn symmetric_difference_matches_monte_carlo() {
        let c = AnalyticShape::cube(1.0).unwrap();
        let r = AnalyticShape::rounded_cube(1.0, 0.1).unwrap();
        let exact = symmetric_difference_area(&c, &r).unwrap();
        let mc = monte_carlo_difference(1.0, 0.1, 400_000);
        assert!((exact - mc).abs() < 0.01 * exact, "exact {exact} mc {mc}");
        assert_eq!(symmetric_difference_area(&r, &c).unwrap(), exact);
        let other = AnalyticShape::sphere(1.0).unwrap();
        assert!(matches!(
            symmetric_difference_area(&c, &other),
            Err(Error::UnsupportedPair(_))
        ));
    }

    #[test]
    fn symmetric_difference_monotone_in_eps() {
        let c = AnalyticShape::cube(1.0).unwrap();
        let mut prev = 0.0;
        for k in 1..50 {
            let eps = 0.01 * k as f64;
            let d = symmetric_difference_area(&c, &AnalyticShape::rounded_cube(1.0, eps).unwrap())
                .unwrap();
            assert!(d > prev);
            prev = d;
        }
        let tiny = symmetric_difference_area(&c, &AnalyticShape::rounded_cube(1.0, 1e-9).unwrap())
            .unwrap();
        assert!(tiny < 1e-6);
    }
}
