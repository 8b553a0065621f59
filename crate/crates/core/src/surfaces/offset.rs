//! Surfaces written as offsets `∂(K ⊕ B_ρ)` of a convex or one-dimensional
//! core `K`. Closest-point projection onto `K` gives normals and the nearest
//! surface point in closed form, which the tangent-field construction uses
//! for charts and geodesics.

use super::AnalyticShape;
use crate::error::{Error, Result};
use crate::numerics::Vec3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Core {
    Point(Vec3),
    /// Segment on the e₃ axis from `−h` to `h`.
    AxisSegment {
        half_length: f64,
    },
    /// Circle of the given radius in the x–y plane, centred at the origin.
    Circle {
        radius: f64,
    },
    /// Box `[−a, a]³`.
    Cube {
        half_width: f64,
    },
}

impl Core {
    pub fn closest_point(&self, x: &Vec3) -> Vec3 {
        match *self {
            Core::Point(c) => c,
            Core::AxisSegment { half_length } => {
                Vec3::new(0.0, 0.0, x.z.clamp(-half_length, half_length))
            }
            Core::Circle { radius } => {
                let h = x.x.hypot(x.y);
                if h < 1e-300 {
                    // Every circle point is equidistant; pick one deterministically.
                    Vec3::new(radius, 0.0, 0.0)
                } else {
                    Vec3::new(radius * x.x / h, radius * x.y / h, 0.0)
                }
            }
            Core::Cube { half_width } => x.map(|c| c.clamp(-half_width, half_width)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffsetSurface {
    pub core: Core,
    pub rho: f64,
}

impl OffsetSurface {
    /// Offset representation of the smooth analytic shapes. A raw cube is
    /// not C^{1,1} and has none.
    pub fn from_shape(shape: &AnalyticShape) -> Result<Self> {
        match *shape {
            AnalyticShape::Sphere { radius } => Ok(OffsetSurface {
                core: Core::Point(Vec3::zeros()),
                rho: radius,
            }),
            AnalyticShape::Spherocylinder { radius, length } => Ok(OffsetSurface {
                core: Core::AxisSegment {
                    half_length: 0.5 * length,
                },
                rho: radius,
            }),
            AnalyticShape::Torus { major, minor } => Ok(OffsetSurface {
                core: Core::Circle { radius: major },
                rho: minor,
            }),
            AnalyticShape::RoundedCube {
                half_width,
                epsilon,
            } => Ok(OffsetSurface {
                core: Core::Cube {
                    half_width: half_width - epsilon,
                },
                rho: epsilon,
            }),
            AnalyticShape::Cube { .. } => Err(Error::NotC11),
        }
    }

    /// Signed distance to the surface (negative inside).
    pub fn signed_distance(&self, x: &Vec3) -> f64 {
        (x - self.core.closest_point(x)).norm() - self.rho
    }

    /// Outward unit normal at the surface point nearest to `x`.
    pub fn normal(&self, x: &Vec3) -> Result<Vec3> {
        let d = x - self.core.closest_point(x);
        let len = d.norm();
        if len < 1e-14 * self.rho {
            return Err(Error::Domain(format!("point {x:?} lies on the core")));
        }
        Ok(d / len)
    }

    /// Nearest point on the surface.
    pub fn project(&self, x: &Vec3) -> Result<Vec3> {
        Ok(self.core.closest_point(x) + self.rho * self.normal(x)?)
    }

    /// Shape operator `dν` applied to a tangent vector `v` at surface point
    /// `p`, by central differences of the normal field along `v`.
    pub fn shape_operator(&self, p: &Vec3, v: &Vec3) -> Result<Vec3> {
        let h = 1e-6 * self.rho;
        let np = self.normal(&(p + h * v))?;
        let nm = self.normal(&(p - h * v))?;
        Ok((np - nm) / (2.0 * h))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_projection_and_normal() {
        let s = OffsetSurface::from_shape(&AnalyticShape::torus(2.0, 1.0).unwrap()).unwrap();
        let p = s.project(&Vec3::new(0.0, 5.0, 0.1)).unwrap();
        assert!(s.signed_distance(&p).abs() < 1e-14);
        let top = Vec3::new(2.0, 0.0, 1.0);
        assert!((s.normal(&top).unwrap() - Vec3::z()).norm() < 1e-15);
    }

    #[test]
    fn rounded_cube_normals() {
        let s = OffsetSurface::from_shape(&AnalyticShape::rounded_cube(1.0, 0.2).unwrap()).unwrap();
        let corner = Vec3::new(1.0, 1.0, 1.0);
        let n = s.normal(&corner).unwrap();
        assert!((n - Vec3::new(1.0, 1.0, 1.0).normalize()).norm() < 1e-15);
        let face = Vec3::new(0.1, -0.3, 1.0);
        assert!((s.normal(&face).unwrap() - Vec3::z()).norm() < 1e-15);
        assert!(s.signed_distance(&face).abs() < 1e-15);
        assert!(OffsetSurface::from_shape(&AnalyticShape::cube(1.0).unwrap()).is_err());
    }

    #[test]
    fn sphere_shape_operator_is_identity_over_radius() {
        let s = OffsetSurface::from_shape(&AnalyticShape::sphere(2.0).unwrap()).unwrap();
        let p = Vec3::new(0.0, 0.0, 2.0);
        let dn = s.shape_operator(&p, &Vec3::x()).unwrap();
        assert!((dn - Vec3::x() * 0.5).norm() < 1e-8);
    }
}
