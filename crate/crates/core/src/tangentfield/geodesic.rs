//! Exponential map and its inverse on offset surfaces.

use crate::error::{Error, Result};
use crate::numerics::{tangent_basis, Vec3};
use crate::surfaces::OffsetSurface;

/// Integration steps per patch radius.
const STEPS_PER_RADIUS: f64 = 64.0;

fn tangent_part(nu: &Vec3, v: &Vec3) -> Vec3 {
    v - nu * nu.dot(v)
}

/// `(x″, v″)` of the geodesic equation `x″ = −II(x′, x′) ν`.
fn accel(s: &OffsetSurface, x: &Vec3, v: &Vec3) -> Result<Vec3> {
    let nu = s.normal(x)?;
    let dnu = s.shape_operator(x, v)?;
    Ok(-nu * v.dot(&dnu))
}

/// `exp_p(τ)` for a tangent vector `τ` at the surface point `p`, by RK4 with
/// step `scale/64`; `scale` is the patch radius the caller works at.
pub fn exp_map(s: &OffsetSurface, p: &Vec3, tau: &Vec3, scale: f64) -> Result<Vec3> {
    let len = tau.norm();
    if len == 0.0 {
        return Ok(*p);
    }
    let steps = (len / scale * STEPS_PER_RADIUS).ceil().max(1.0) as usize;
    let h = len / steps as f64;
    let mut x = *p;
    let mut v = tau / len;
    for _ in 0..steps {
        let k1x = v;
        let k1v = accel(s, &x, &v)?;
        let x2 = x + k1x * (0.5 * h);
        let v2 = v + k1v * (0.5 * h);
        let k2v = accel(s, &x2, &v2)?;
        let x3 = x + v2 * (0.5 * h);
        let v3 = v + k2v * (0.5 * h);
        let k3v = accel(s, &x3, &v3)?;
        let x4 = x + v3 * h;
        let v4 = v + k3v * h;
        let k4v = accel(s, &x4, &v4)?;
        x += (k1x + v2 * 2.0 + v3 * 2.0 + v4) * (h / 6.0);
        v += (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * (h / 6.0);
        // Stay on the surface with a unit tangent velocity.
        x = s.project(&x)?;
        let nu = s.normal(&x)?;
        v = tangent_part(&nu, &v).normalize();
    }
    Ok(x)
}

/// `exp_p⁻¹(ω)` in the basis `(a, b)` of the tangent plane at `p`, by Newton
/// iteration on geodesic shooting starting from the tangent projection.
pub fn log_map(
    s: &OffsetSurface,
    p: &Vec3,
    basis: (Vec3, Vec3),
    omega: &Vec3,
    scale: f64,
) -> Result<[f64; 2]> {
    let (a, b) = basis;
    let d = omega - p;
    let mut t = [d.dot(&a), d.dot(&b)];
    if t[0] == 0.0 && t[1] == 0.0 {
        return Ok(t);
    }
    let target = [d.dot(&a), d.dot(&b)];
    let chart = |t: [f64; 2]| -> Result<[f64; 2]> {
        let x = exp_map(s, p, &(a * t[0] + b * t[1]), scale)? - p;
        Ok([x.dot(&a), x.dot(&b)])
    };
    // Rounding in `ω − p` sets a floor relative to the coordinates.
    let tol = 1e-12 * scale + 1e-14 * p.norm();
    for _ in 0..30 {
        let f = chart(t)?;
        let r = [f[0] - target[0], f[1] - target[1]];
        if r[0].hypot(r[1]) < tol {
            return Ok(t);
        }
        let h = 1e-6 * scale;
        let fx = chart([t[0] + h, t[1]])?;
        let fy = chart([t[0], t[1] + h])?;
        let j = [
            [(fx[0] - f[0]) / h, (fy[0] - f[0]) / h],
            [(fx[1] - f[1]) / h, (fy[1] - f[1]) / h],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-14 {
            break;
        }
        t[0] -= (j[1][1] * r[0] - j[0][1] * r[1]) / det;
        t[1] -= (j[0][0] * r[1] - j[1][0] * r[0]) / det;
    }
    Err(Error::Domain(format!(
        "inverse exponential map did not converge at {omega:?}"
    )))
}

/// Orthonormal tangent basis at a surface point.
pub fn surface_basis(s: &OffsetSurface, p: &Vec3) -> Result<(Vec3, Vec3, Vec3)> {
    let nu = s.normal(p)?;
    let (a, b) = tangent_basis(&nu);
    Ok((a, b, nu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfaces::AnalyticShape;

    #[test]
    fn great_circles_on_the_sphere() {
        let s = OffsetSurface::from_shape(&AnalyticShape::sphere(2.0).unwrap()).unwrap();
        let p = Vec3::new(0.0, 0.0, 2.0);
        let q = exp_map(&s, &p, &(Vec3::x() * 1.0), 0.1).unwrap();
        let expect = Vec3::new(2.0 * 0.5f64.sin(), 0.0, 2.0 * 0.5f64.cos());
        assert!((q - expect).norm() < 1e-10, "{q:?}");
    }

    #[test]
    fn log_inverts_exp() {
        let s = OffsetSurface::from_shape(&AnalyticShape::torus(2.0, 1.0).unwrap()).unwrap();
        let p = Vec3::new(0.0, 3.0, 0.0);
        let (a, b, _) = surface_basis(&s, &p).unwrap();
        let tau = a * 0.03 - b * 0.02;
        let q = exp_map(&s, &p, &tau, 0.05).unwrap();
        let t = log_map(&s, &p, (a, b), &q, 0.05).unwrap();
        assert!(
            (t[0] - 0.03).abs() < 1e-10 && (t[1] + 0.02).abs() < 1e-10,
            "{t:?}"
        );
    }
}
