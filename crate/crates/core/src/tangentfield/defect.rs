//! Point-defect profiles on small geodesic disks.

use super::geodesic::{exp_map, log_map, surface_basis};
use super::DirectorField;
use crate::error::{Error, Result};
use crate::numerics::Vec3;
use crate::surfaces::OffsetSurface;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Below this the tangential part of the profile vector counts as zero.
const DEGENERATE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DefectRecord {
    pub position: Vec3,
    pub degree: i32,
    /// Geodesic radius of the patch carrying the profile.
    pub radius: f64,
}

/// The field `û = P_ν(m)/|P_ν(m)|` with `m = (τ₁a + s·τ₂b)/δ′`, where
/// `τ = exp_p⁻¹(ω)` in the tangent basis `(a, b)` at `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefectPatch {
    pub surface: OffsetSurface,
    pub centre: Vec3,
    pub a: Vec3,
    pub b: Vec3,
    pub radius: f64,
    pub sign: i32,
}

impl DefectPatch {
    pub fn record(&self) -> DefectRecord {
        DefectRecord {
            position: self.centre,
            degree: self.sign,
            radius: self.radius,
        }
    }

    /// Geodesic circle of radius `r` about the centre, counterclockwise
    /// seen from outside.
    pub fn circle(&self, r: f64, points: usize) -> Result<Vec<Vec3>> {
        (0..points)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / points as f64;
                exp_map(
                    &self.surface,
                    &self.centre,
                    &((self.a * t.cos() + self.b * t.sin()) * r),
                    self.radius,
                )
            })
            .collect()
    }
}

impl DirectorField for DefectPatch {
    fn eval(&self, x: &Vec3) -> Result<Vec3> {
        let tau = log_map(
            &self.surface,
            &self.centre,
            (self.a, self.b),
            x,
            self.radius,
        )?;
        let m = (self.a * tau[0] + self.b * (self.sign as f64 * tau[1])) / self.radius;
        let nu = self.surface.normal(x)?;
        let t = m - nu * nu.dot(&m);
        let len = t.norm();
        if len < DEGENERATE {
            return Err(Error::DegenerateProjection([x.x, x.y, x.z]));
        }
        Ok(t / len)
    }
}

/// Profile of degree `sign` on the geodesic disk of radius `radius` about the
/// surface point `p`.
pub fn defect_profile(
    surface: &OffsetSurface,
    p: &Vec3,
    radius: f64,
    sign: i32,
) -> Result<DefectPatch> {
    if sign != 1 && sign != -1 {
        return Err(Error::Domain(format!("defect sign must be ±1, got {sign}")));
    }
    if !(radius > 0.0 && radius < surface.rho) {
        return Err(Error::Domain(format!(
            "patch radius {radius} must lie in (0, {})",
            surface.rho
        )));
    }
    let centre = surface.project(p)?;
    let (a, b, _) = surface_basis(surface, &centre)?;
    Ok(DefectPatch {
        surface: *surface,
        centre,
        a,
        b,
        radius,
        sign,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfaces::AnalyticShape;
    use crate::tangentfield::degree::loop_degree;

    fn flat() -> OffsetSurface {
        OffsetSurface::from_shape(&AnalyticShape::rounded_cube(1.0, 0.1).unwrap()).unwrap()
    }

    #[test]
    fn radial_on_a_flat_face() {
        let s = flat();
        let p = defect_profile(&s, &Vec3::new(0.0, 0.0, 1.0), 0.05, 1).unwrap();
        let x = Vec3::new(0.01, 0.02, 1.0);
        let v = p.eval(&x).unwrap();
        let tau = Vec3::new(p.a.dot(&x), p.b.dot(&x), 0.0);
        let expect = p.a * tau.x + p.b * tau.y;
        assert!((v - expect.normalize()).norm() < 1e-12, "{v:?}");
    }

    #[test]
    fn negative_sign_reflects() {
        let s = flat();
        let p = defect_profile(&s, &Vec3::new(0.0, 0.0, 1.0), 0.05, -1).unwrap();
        let x = Vec3::new(0.01, 0.02, 1.0);
        let v = p.eval(&x).unwrap();
        let expect = p.a * p.a.dot(&x) - p.b * p.b.dot(&x);
        assert!((v - expect.normalize()).norm() < 1e-12);
        let lp = p.circle(0.04, 64).unwrap();
        assert_eq!(loop_degree(&s, &lp, &p).unwrap(), -1);
        assert!(matches!(
            p.eval(&p.centre),
            Err(Error::DegenerateProjection(_))
        ));
    }

    #[test]
    fn degree_on_curved_patches() {
        let cases = [
            (AnalyticShape::sphere(1.0).unwrap(), Vec3::z()),
            (
                AnalyticShape::torus(2.0, 1.0).unwrap(),
                Vec3::new(0.0, 1.0, 0.0),
            ),
            (
                AnalyticShape::torus(2.0, 1.0).unwrap(),
                Vec3::new(3.0, 0.0, 0.0),
            ),
        ];
        for (shape, at) in cases {
            let s = OffsetSurface::from_shape(&shape).unwrap();
            for sign in [1, -1] {
                let p = defect_profile(&s, &at, 0.05, sign).unwrap();
                for r in [0.02, 0.05] {
                    let lp = p.circle(r, 48).unwrap();
                    assert_eq!(loop_degree(&s, &lp, &p).unwrap(), sign);
                }
                let x = p.circle(0.03, 7).unwrap()[3];
                let v = p.eval(&x).unwrap();
                let nu = s.normal(&x).unwrap();
                assert!((v.norm() - 1.0).abs() < 1e-12 && v.dot(&nu).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let s = flat();
        assert!(defect_profile(&s, &Vec3::z(), 0.05, 2).is_err());
        assert!(defect_profile(&s, &Vec3::z(), 0.5, 1).is_err());
    }
}
