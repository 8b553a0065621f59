//! One-dimensional reduction along rays normal to the particle surface: the
//! optimal boundary-layer profile, its energy, its decay, and the ray energy
//! of a sampled director.

use crate::error::{Error, Result};
use crate::numerics::{compensated_sum, Vec3, FOURTH_ROOT_24};
use crate::qtensor::QTensor;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

/// Decay rate `(3/2)^{1/4}` of the profile in the rescaled variable.
pub const PROFILE_RATE: f64 = 1.106_681_919_700_321_5;

/// Truncation of the rescaled half line used for profile quadrature.
pub const R_MAX: f64 = 40.0;

/// Default number of trapezoid nodes on `[0, R_MAX]`.
pub const DEFAULT_POINTS: usize = 10_000;

const SQRT_3_2: f64 = 1.224_744_871_391_589;

fn check_phi0(phi0: f64) -> Result<()> {
    if !(0.0..=FRAC_PI_2 + 1e-15).contains(&phi0) {
        return Err(Error::Domain(format!("φ0 = {phi0} outside [0, π/2]")));
    }
    Ok(())
}

/// `Φ(r̃) = 2 atan(tan(φ0/2) e^{−(3/2)^{1/4} r̃})`.
pub fn optimal_profile_angle(phi0: f64, r_tilde: f64) -> Result<f64> {
    check_phi0(phi0)?;
    if !(r_tilde >= 0.0) {
        return Err(Error::Domain(format!("r̃ = {r_tilde} must be nonnegative")));
    }
    Ok(profile_angle_unchecked(phi0, r_tilde))
}

fn profile_angle_unchecked(phi0: f64, r: f64) -> f64 {
    2.0 * ((0.5 * phi0).tan() * (-PROFILE_RATE * r).exp()).atan()
}

/// `Φ′(r̃) = −(3/2)^{1/4} sin Φ`.
pub fn optimal_profile_slope(phi0: f64, r_tilde: f64) -> Result<f64> {
    Ok(-PROFILE_RATE * optimal_profile_angle(phi0, r_tilde)?.sin())
}

/// Energy density `Φ′² + √(3/2) sin²Φ` of the profile.
pub fn profile_energy_density(phi0: f64, r_tilde: f64) -> Result<f64> {
    let phi = optimal_profile_angle(phi0, r_tilde)?;
    let dphi = -PROFILE_RATE * phi.sin();
    Ok(dphi * dphi + SQRT_3_2 * phi.sin().powi(2))
}

/// Samples of the optimal profile on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryLayerProfile {
    pub phi0: f64,
    pub r_tilde: Vec<f64>,
    pub phi: Vec<f64>,
}

impl BoundaryLayerProfile {
    pub fn sample(phi0: f64, r_max: f64, points: usize) -> Result<Self> {
        check_phi0(phi0)?;
        if !(r_max > 0.0) || points < 2 {
            return Err(Error::Domain(
                "profile grid needs r_max > 0 and two points".into(),
            ));
        }
        let h = r_max / (points - 1) as f64;
        let r_tilde: Vec<f64> = (0..points).map(|i| i as f64 * h).collect();
        let phi = r_tilde
            .iter()
            .map(|&r| profile_angle_unchecked(phi0, r))
            .collect();
        Ok(BoundaryLayerProfile { phi0, r_tilde, phi })
    }

    /// Directors `(sin Φ, 0, cos Φ)` at the samples.
    pub fn directors(&self) -> Vec<Vec3> {
        self.phi
            .iter()
            .map(|p| Vec3::new(p.sin(), 0.0, p.cos()))
            .collect()
    }
}

fn trapezoid_uniform(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    let inner = compensated_sum(values[1..n - 1].iter().copied());
    h * (inner + 0.5 * (values[0] + values[n - 1]))
}

/// Result of the profile energy quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileEnergy {
    /// Richardson-extrapolated value.
    pub value: f64,
    /// Difference between the extrapolated and the fine trapezoid value.
    pub error_estimate: f64,
}

/// `∫₀^{R_MAX} Φ′² + √(3/2) sin²Φ dr̃` for the optimal profile, by the
/// trapezoid rule with `points` nodes and one Richardson step against the
/// half-resolution rule.
pub fn profile_energy_with(phi0: f64, points: usize) -> Result<ProfileEnergy> {
    check_phi0(phi0)?;
    let points = if points.is_multiple_of(2) {
        points + 1
    } else {
        points
    };
    if points < 5 {
        return Err(Error::Domain(
            "profile quadrature needs at least five points".into(),
        ));
    }
    let h = R_MAX / (points - 1) as f64;
    let values: Vec<f64> = (0..points)
        .map(|i| {
            let phi = profile_angle_unchecked(phi0, i as f64 * h);
            let d = PROFILE_RATE * phi.sin();
            d * d + SQRT_3_2 * phi.sin().powi(2)
        })
        .collect();
    let fine = trapezoid_uniform(&values, h);
    let coarse_vals: Vec<f64> = values.iter().step_by(2).copied().collect();
    let coarse = trapezoid_uniform(&coarse_vals, 2.0 * h);
    let value = (4.0 * fine - coarse) / 3.0;
    Ok(ProfileEnergy {
        value,
        error_estimate: (value - fine).abs(),
    })
}

pub fn profile_energy(phi0: f64) -> Result<f64> {
    Ok(profile_energy_with(phi0, DEFAULT_POINTS)?.value)
}

/// Closed-form value `⁴√24 (1 − cos φ0)` of the profile energy.
pub fn profile_energy_exact(phi0: f64) -> f64 {
    FOURTH_ROOT_24 * (1.0 - phi0.cos())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayCheck {
    /// `sin²Φ(H)`, the squared transverse director component.
    pub measured: f64,
    /// `4 tan²(φ0/2) e^{−⁴√24 H}`.
    pub bound: f64,
}

impl DecayCheck {
    pub fn holds(&self) -> bool {
        self.measured <= self.bound
    }
}

pub fn decay_bound_check(phi0: f64, h: f64) -> Result<DecayCheck> {
    check_phi0(phi0)?;
    if !(h > 0.0) {
        return Err(Error::Domain(format!("H = {h} must be positive")));
    }
    let measured = profile_angle_unchecked(phi0, h).sin().powi(2);
    let bound = 4.0 * (0.5 * phi0).tan().powi(2) * (-FOURTH_ROOT_24 * h).exp();
    Ok(DecayCheck { measured, bound })
}

/// Geometry and scales of a single ray.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RayParams {
    pub xi: f64,
    pub eta: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub r0: f64,
}

impl RayParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.xi > 0.0 && self.eta > 0.0 && self.r0 > 0.0) {
            return Err(Error::Domain("ξ, η and r₀ must be positive".into()));
        }
        let k = self.kappa1.abs().max(self.kappa2.abs());
        if k > 0.0 && self.r0 > 1.0 / (2.0 * k) * (1.0 + 1e-12) {
            return Err(Error::Domain(format!(
                "r₀ = {} exceeds 1/(2κ) = {}",
                self.r0,
                1.0 / (2.0 * k)
            )));
        }
        Ok(())
    }
}

/// Derivative of samples on a possibly nonuniform grid: second-order central
/// differences inside, second-order one-sided differences at the ends.
fn grid_derivative(r: &[f64], q: &[QTensor]) -> Vec<QTensor> {
    let n = r.len();
    let combine = |terms: [(f64, usize); 3]| {
        terms
            .iter()
            .fold(QTensor::ZERO, |acc, &(w, i)| acc.add(&q[i].scale(w)))
    };
    if n == 2 {
        let d = q[1].sub(&q[0]).scale(1.0 / (r[1] - r[0]));
        return vec![d, d];
    }
    (0..n)
        .map(|i| {
            let (a, b, c) = if i == 0 {
                (0, 1, 2)
            } else if i == n - 1 {
                (n - 3, n - 2, n - 1)
            } else {
                (i - 1, i, i + 1)
            };
            // Derivative at r[i] of the quadratic through (a, b, c).
            let x = r[i];
            let wa = ((x - r[b]) + (x - r[c])) / ((r[a] - r[b]) * (r[a] - r[c]));
            let wb = ((x - r[a]) + (x - r[c])) / ((r[b] - r[a]) * (r[b] - r[c]));
            let wc = ((x - r[a]) + (x - r[b])) / ((r[c] - r[a]) * (r[c] - r[b]));
            combine([(wa, a), (wb, b), (wc, c)])
        })
        .collect()
}

/// Energy of a sampled director `n(r)` along one ray:
/// `∫₀^{r₀} (½|∂Q/∂r|² + f(Q)/ξ² + g(Q)/η²)(1 + rκ₁)(1 + rκ₂) dr`
/// with `Q = n⊗n − I/3`, by the trapezoid rule on the sample grid.
pub fn ray_energy(r: &[f64], n: &[Vec3], params: &RayParams) -> Result<f64> {
    params.validate()?;
    if r.len() != n.len() || r.len() < 2 {
        return Err(Error::Domain(
            "ray samples need matching grids of length ≥ 2".into(),
        ));
    }
    if r.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain("ray grid must be strictly increasing".into()));
    }
    for (index, v) in n.iter().enumerate() {
        let length = v.norm();
        if (length - 1.0).abs() > 1e-8 {
            return Err(Error::NonUnitDirector { index, length });
        }
    }
    let q: Vec<QTensor> = n.iter().map(QTensor::uniaxial).collect();
    let dq = grid_derivative(r, &q);
    let (xi2, eta2) = (params.xi * params.xi, params.eta * params.eta);
    let density: Vec<f64> = (0..r.len())
        .map(|i| {
            let metric = (1.0 + r[i] * params.kappa1) * (1.0 + r[i] * params.kappa2);
            let e = 0.5 * dq[i].norm_squared()
                + q[i].bulk_potential() / xi2
                + q[i].field_potential() / eta2;
            e * metric
        })
        .collect();
    Ok(compensated_sum((0..r.len() - 1).map(|i| {
        0.5 * (r[i + 1] - r[i]) * (density[i] + density[i + 1])
    })))
}
