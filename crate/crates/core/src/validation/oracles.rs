//! Independent solver for the boundary-layer profile.

use crate::error::{Error, Result};
use crate::profile1d::optimal_profile_angle;

const SQRT_3_2: f64 = 1.224_744_871_391_589;

/// Solves `Φ″ = √(3/2) sin Φ cos Φ` on `[0, length]` with `Φ(0) = φ0` and
/// `Φ(length) = 0` by second-order finite differences and Newton's method,
/// each step solved with the Thomas algorithm. Returns `(r̃, Φ)` at the nodes.
pub fn bvp_profile(phi0: f64, length: f64, intervals: usize) -> Result<Vec<(f64, f64)>> {
    if intervals < 4 || !(length > 0.0) {
        return Err(Error::Domain(
            "need a positive length and at least four intervals".into(),
        ));
    }
    let h = length / intervals as f64;
    let h2 = h * h;
    let m = intervals - 1;
    let mut phi: Vec<f64> = (0..=intervals)
        .map(|i| phi0 * (-(i as f64) * h).exp())
        .collect();
    phi[intervals] = 0.0;
    let mut diag = vec![0.0; m];
    let mut rhs = vec![0.0; m];
    let mut c_prime = vec![0.0; m];
    let off = 1.0 / h2;
    for _ in 0..50 {
        for i in 1..=m {
            let p = phi[i];
            rhs[i - 1] =
                -((phi[i - 1] - 2.0 * p + phi[i + 1]) / h2 - 0.5 * SQRT_3_2 * (2.0 * p).sin());
            diag[i - 1] = -2.0 / h2 - SQRT_3_2 * (2.0 * p).cos();
        }
        // Thomas algorithm with constant off-diagonals.
        c_prime[0] = off / diag[0];
        rhs[0] /= diag[0];
        for k in 1..m {
            let denom = diag[k] - off * c_prime[k - 1];
            c_prime[k] = off / denom;
            rhs[k] = (rhs[k] - off * rhs[k - 1]) / denom;
        }
        for k in (0..m - 1).rev() {
            rhs[k] -= c_prime[k] * rhs[k + 1];
        }
        let mut step: f64 = 0.0;
        for k in 0..m {
            phi[k + 1] += rhs[k];
            step = step.max(rhs[k].abs());
        }
        if step < 1e-14 {
            return Ok(phi
                .into_iter()
                .enumerate()
                .map(|(i, p)| (i as f64 * h, p))
                .collect());
        }
    }
    Err(Error::NoConvergence { iterations: 50 })
}

/// Largest difference between the closed-form profile and [`bvp_profile`]
/// on `[0, 30]` with step `10⁻³`.
pub fn profile_discrepancy(phi0: f64) -> Result<f64> {
    let nodes = bvp_profile(phi0, 30.0, 30_000)?;
    let mut worst: f64 = 0.0;
    for (r, p) in nodes {
        worst = worst.max((optimal_profile_angle(phi0, r)? - p).abs());
    }
    Ok(worst)
}
