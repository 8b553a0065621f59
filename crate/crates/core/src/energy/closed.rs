//! Closed forms and reduced quadratures of `E₀` for specific shapes.

use super::elliptic::elliptic_e_textbook;
use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::numerics::{compensated_sum, gauss_legendre_on, integrate_adaptive, FOURTH_ROOT_24};
use std::f64::consts::{FRAC_PI_2, PI};

/// Crossover `|t| > 1 − SWITCH` from the elliptic form to direct quadrature.
pub const SWITCH: f64 = 1e-3;

/// `J(t) = ∫₀^{2π} (1 − √(1 − t² cos²θ)) dθ`, the energy per unit area of a
/// unit cylinder whose axis makes transverse component `t` with the field.
pub fn cylinder_factor(t: f64) -> f64 {
    let t = t.abs().min(1.0);
    if t <= 1.0 - SWITCH {
        // 2π − 4√(1−t²)·E(t²/(t²−1)) with the textbook sign of E.
        let m = t * t / (t * t - 1.0);
        let e = elliptic_e_textbook(m).expect("argument is negative");
        2.0 * PI - 4.0 * (1.0 - t * t).sqrt() * e
    } else {
        cylinder_factor_quadrature(t)
    }
}

/// Direct adaptive quadrature of `J(t)`, using its fourfold symmetry.
pub fn cylinder_factor_quadrature(t: f64) -> f64 {
    let f = |th: f64| {
        let x = t * th.cos();
        1.0 - (1.0 - x * x).max(0.0).sqrt()
    };
    4.0 * integrate_adaptive(f, 0.0, FRAC_PI_2, 1e-15).0
}

/// `E₀` of the sphere of radius `r`, independent of the direction.
pub fn e0_sphere(r: f64) -> f64 {
    2.0 * FOURTH_ROOT_24 * (2.0 - FRAC_PI_2) * PI * r * r
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidShape(format!(
            "{name} = {v} must be positive"
        )))
    }
}

/// Spherocylinder of radius `r` and cylinder length `l` along e₃: the sphere
/// term plus `⁴√24·r·l·J(n₁)` with `n₁ = √(1 − n₃²)` the transverse part.
pub fn e0_spherocylinder(r: f64, l: f64, n: &Direction) -> Result<f64> {
    positive("R", r)?;
    positive("L", l)?;
    let t = n.x().hypot(n.y()).min(1.0);
    Ok(e0_sphere(r) + FOURTH_ROOT_24 * r * l * cylinder_factor(t))
}

/// Torus `r⁴√24 ∫∫ (R + r sinφ)(1 − √(1 − (√(1−n₃²) cosθ sinφ + n₃ cosφ)²)) dθ dφ`.
///
/// For fixed φ the θ-integrand is smooth and periodic except on the four
/// φ-values where `√(1−n₃²)|sinφ| + |n₃||cosφ| = 1`, so φ is integrated by
/// graded Gauss–Legendre panels split there and θ by the trapezoid rule.
/// Returns `(value, estimated error)`, the error being the change from the
/// half-resolution result.
pub fn e0_torus(big_r: f64, r: f64, n3: f64, resolution: usize) -> Result<(f64, f64)> {
    positive("R", big_r)?;
    positive("r", r)?;
    if r >= big_r {
        return Err(Error::InvalidShape(format!(
            "torus needs R > r, got R = {big_r}, r = {r}"
        )));
    }
    if !(-1.0..=1.0).contains(&n3) {
        return Err(Error::Domain(format!("n3 = {n3} outside [-1, 1]")));
    }
    let resolution = resolution.max(8);
    let fine = torus_integral(big_r, r, n3.abs(), resolution);
    let coarse = torus_integral(big_r, r, n3.abs(), resolution / 2);
    Ok((fine, (fine - coarse).abs()))
}

fn torus_integral(big_r: f64, r: f64, c: f64, n: usize) -> f64 {
    let a = (1.0 - c * c).max(0.0).sqrt();
    let phi0 = a.atan2(c);
    let mut breaks = vec![0.0, phi0, PI - phi0, PI + phi0, 2.0 * PI - phi0, 2.0 * PI];
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|x, y| (*x - *y).abs() < 1e-15);
    let n_theta = 4 * n;
    let cos_theta: Vec<f64> = (0..n_theta)
        .map(|j| (2.0 * PI * j as f64 / n_theta as f64).cos())
        .collect();
    let dtheta = 2.0 * PI / n_theta as f64;
    // Graded map u ↦ u²(3 − 2u) on [0, 1] clusters nodes at the panel ends.
    let unit = gauss_legendre_on(n, 0.0, 1.0);
    let mut terms = Vec::with_capacity(n * breaks.len());
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        for &(u, wu) in &unit {
            let phi = lo + (hi - lo) * u * u * (3.0 - 2.0 * u);
            let jac = (hi - lo) * 6.0 * u * (1.0 - u);
            let (s, co) = phi.sin_cos();
            let (amp, shift) = (a * s, c * co);
            let inner = compensated_sum(cos_theta.iter().map(|ct| {
                let x = amp * ct + shift;
                1.0 - (1.0 - x * x).max(0.0).sqrt()
            })) * dtheta;
            terms.push(wu * jac * (big_r + r * s) * inner);
        }
    }
    r * FOURTH_ROOT_24 * compensated_sum(terms)
}

/// `2s²·⁴√24·(3 − Σᵢ √(1 − nᵢ²))` for a cube of side `s` aligned with the axes.
pub fn e0_cube(side: f64, n: &Direction) -> Result<f64> {
    positive("side", side)?;
    let v = n.vec();
    let s: f64 = (0..3).map(|i| (1.0 - v[i] * v[i]).max(0.0).sqrt()).sum();
    Ok(2.0 * side * side * FOURTH_ROOT_24 * (3.0 - s))
}

/// Exact gradient of `e0_cube` on the tangent plane at `n`.
pub fn e0_cube_gradient(side: f64, n: &Direction) -> Result<[f64; 3]> {
    positive("side", side)?;
    let v = n.vec();
    let mut g = [0.0; 3];
    for i in 0..3 {
        let s = (1.0 - v[i] * v[i]).max(0.0).sqrt();
        // d/dnᵢ of −√(1−nᵢ²) is nᵢ/√(1−nᵢ²); zero by convention at |nᵢ| = 1.
        g[i] = if s > 1e-12 {
            2.0 * side * side * FOURTH_ROOT_24 * v[i] / s
        } else {
            0.0
        };
    }
    let dot: f64 = (0..3).map(|i| g[i] * v[i]).sum();
    Ok(std::array::from_fn(|i| g[i] - dot * v[i]))
}

/// Rounded cube of half-width `R` and rounding radius `ε` (`a = R − ε`): flat
/// faces of side `2a`, a full cylinder of radius `ε` and length `2a` per axis,
/// and a sphere of radius `ε` from the corners.
pub fn e0_rounded_cube(half_width: f64, eps: f64, n: &Direction) -> Result<f64> {
    positive("R", half_width)?;
    positive("epsilon", eps)?;
    if eps >= 0.5 * half_width {
        return Err(Error::InvalidShape(format!(
            "rounded cube needs ε < R/2, got ε = {eps}"
        )));
    }
    let a = half_width - eps;
    let v = n.vec();
    let faces = e0_cube(2.0 * a, n)?;
    let edges: f64 = (0..3)
        .map(|k| {
            let t = (1.0 - v[k] * v[k]).max(0.0).sqrt();
            2.0 * a * eps * cylinder_factor(t)
        })
        .sum();
    Ok(faces + FOURTH_ROOT_24 * edges + e0_sphere(eps))
}
