//! Winding degree of a tangent field along a closed loop on the surface.

use super::DirectorField;
use crate::error::{Error, Result};
use crate::numerics::{minimal_rotation, tangent_basis, wrap_angle, Vec3};
use crate::surfaces::OffsetSurface;
use std::f64::consts::PI;

/// Loop doublings allowed before giving up.
pub const MAX_REFINEMENTS: usize = 4;

/// Distance to the nearest integer accepted for the raw winding.
const INTEGER_TOL: f64 = 1e-3;

/// Largest angle increment between neighbouring loop points that still
/// counts as branch consistent.
const MAX_INCREMENT: f64 = 0.5 * PI;

/// Angle sums along a loop, each measured in a frame parallel transported
/// along the loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Winding {
    /// Total turning of the field.
    pub field: f64,
    /// Total turning of the loop tangent.
    pub tangent: f64,
    /// `(field − tangent)/2π`, an integer up to rounding.
    pub raw: f64,
    pub refinements: usize,
}

impl Winding {
    /// Turns of the field relative to the loop tangent.
    pub fn relative(&self) -> i32 {
        self.raw.round() as i32
    }

    /// Degree about the side of the loop that the tangent turns around,
    /// which for a small loop is the side it encloses.
    pub fn degree(&self) -> i32 {
        let s = if self.tangent < 0.0 { -1 } else { 1 };
        1 + s * self.relative()
    }
}

fn angle_in(e: &Vec3, nu: &Vec3, v: &Vec3) -> f64 {
    v.dot(&nu.cross(e)).atan2(v.dot(e))
}

/// One pass over the loop; returns the angle sums and the largest increment.
fn sums(
    surface: &OffsetSurface,
    pts: &[Vec3],
    field: &dyn DirectorField,
) -> Result<(f64, f64, f64)> {
    let n = pts.len();
    let mut normals = Vec::with_capacity(n);
    let mut vs = Vec::with_capacity(n);
    let mut ts = Vec::with_capacity(n);
    for k in 0..n {
        let nu = surface.normal(&pts[k])?;
        let chord = pts[(k + 1) % n] - pts[(k + n - 1) % n];
        let t = chord - nu * nu.dot(&chord);
        if t.norm() == 0.0 {
            return Err(Error::Region("loop has repeated points".into()));
        }
        normals.push(nu);
        vs.push(field.eval(&pts[k])?);
        ts.push(t.normalize());
    }
    let mut e = tangent_basis(&normals[0]).0;
    let mut prev = (
        angle_in(&e, &normals[0], &vs[0]),
        angle_in(&e, &normals[0], &ts[0]),
    );
    let (mut wv, mut wt, mut worst) = (0.0, 0.0, 0.0f64);
    for k in 1..=n {
        let (i, j) = (k - 1, k % n);
        e = minimal_rotation(&normals[i], &normals[j], &e);
        e = (e - normals[j] * normals[j].dot(&e)).normalize();
        let cur = (
            angle_in(&e, &normals[j], &vs[j]),
            angle_in(&e, &normals[j], &ts[j]),
        );
        let dv = wrap_angle(cur.0 - prev.0);
        let dt = wrap_angle(cur.1 - prev.1);
        wv += dv;
        wt += dt;
        worst = worst.max(dv.abs()).max(dt.abs());
        prev = cur;
    }
    Ok((wv, wt, worst))
}

/// Inserts the projected midpoint of every edge.
fn refine(surface: &OffsetSurface, pts: &[Vec3]) -> Result<Vec<Vec3>> {
    let n = pts.len();
    let mut out = Vec::with_capacity(2 * n);
    for k in 0..n {
        out.push(pts[k]);
        out.push(surface.project(&((pts[k] + pts[(k + 1) % n]) * 0.5))?);
    }
    Ok(out)
}

/// Turning of `field` and of the tangent along the closed loop `pts` (last
/// point joined to the first), refining until the increments are small and
/// the relative winding is an integer.
pub fn winding(
    surface: &OffsetSurface,
    pts: &[Vec3],
    field: &dyn DirectorField,
) -> Result<Winding> {
    if pts.len() < 3 {
        return Err(Error::Domain("a loop needs at least three points".into()));
    }
    let mut owned;
    let mut cur = pts;
    let mut raw = f64::NAN;
    for refinements in 0..=MAX_REFINEMENTS {
        let (wv, wt, worst) = sums(surface, cur, field)?;
        raw = (wv - wt) / (2.0 * PI);
        if (raw - raw.round()).abs() <= INTEGER_TOL && worst <= MAX_INCREMENT {
            return Ok(Winding {
                field: wv,
                tangent: wt,
                raw,
                refinements,
            });
        }
        if refinements < MAX_REFINEMENTS {
            owned = refine(surface, cur)?;
            cur = &owned;
        }
    }
    Err(Error::NonConvergedDegree {
        refinements: MAX_REFINEMENTS,
        raw,
    })
}

/// Winding degree of `field` around a loop encircling a small disk.
pub fn loop_degree(
    surface: &OffsetSurface,
    pts: &[Vec3],
    field: &dyn DirectorField,
) -> Result<i32> {
    Ok(winding(surface, pts, field)?.degree())
}
