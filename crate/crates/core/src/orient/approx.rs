//! Stability of the optimal orientations of a cube under rounding.

use super::{axial_distance, minimize, MinimizeOptions};
use crate::direction::Direction;
use crate::energy::{e0_cube, e0_rounded_cube};
use crate::error::{Error, Result};
use crate::numerics::{Vec3, FOURTH_ROOT_24};
use crate::qtensor::standard_normal;
use crate::surfaces::{symmetric_difference_area, AnalyticShape, Surface};
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

/// Minimizers of the exact cube energy, `(±1, ±1, ±1)/√3`.
pub fn exact_cube_minimizers() -> Vec<Vec3> {
    let s = 1.0 / 3f64.sqrt();
    let mut out = Vec::with_capacity(8);
    for i in 0..8 {
        let sign = |b: usize| if i >> b & 1 == 0 { s } else { -s };
        out.push(Vec3::new(sign(0), sign(1), sign(2)));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityRow {
    pub epsilon: f64,
    /// Largest distance from a minimizer of the rounded cube to the exact set.
    pub max_min_distance: f64,
    /// `⁴√24·H²(M^ε Δ M)`.
    pub energy_gap_bound: f64,
    /// Largest `|E₀(M^ε; n) − E₀(M; n)|` over the random directions.
    pub energy_gap_measured: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub half_width: f64,
    pub delta: f64,
    pub rows: Vec<StabilityRow>,
}

/// Slack allowed when checking that distances do not grow as `ε` shrinks.
const MONOTONE_SLACK: f64 = 1e-6;

/// Runs [`minimize`] on `RoundedCube(R, ε)` for each `ε` (descending) and
/// compares with the exact cube.
///
/// Fails with `StabilityViolation` if the distances increase as `ε`
/// decreases, if the last distance is not below `delta`, or if the measured
/// energy gap exceeds the symmetric-difference bound.
pub fn approx_stability(
    half_width: f64,
    epsilons: &[f64],
    delta: f64,
    directions: usize,
    seed: u64,
    opts: &MinimizeOptions,
) -> Result<StabilityReport> {
    if !(delta > 0.0) {
        return Err(Error::Domain(format!("δ must be positive, got {delta}")));
    }
    if epsilons.is_empty() || epsilons.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Domain(
            "ε list must be non-empty and strictly descending".into(),
        ));
    }
    let exact = AnalyticShape::cube(half_width)?;
    let targets = exact_cube_minimizers();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let dirs: Vec<Direction> = (0..directions)
        .map(|_| loop {
            let v = Vec3::new(
                standard_normal(&mut rng),
                standard_normal(&mut rng),
                standard_normal(&mut rng),
            );
            if let Ok(d) = Direction::new(v) {
                break d;
            }
        })
        .collect();

    let mut rows = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let rounded = AnalyticShape::rounded_cube(half_width, eps)?;
        let report = minimize(&Surface::from(rounded), opts)?;
        let mut max_min_distance: f64 = 0.0;
        let mut found = false;
        for p in report.minima() {
            for v in p.points() {
                let d = targets
                    .iter()
                    .map(|t| axial_distance(t, &v))
                    .fold(f64::INFINITY, f64::min);
                max_min_distance = max_min_distance.max(d);
                found = true;
            }
        }
        if !found {
            return Err(Error::StabilityViolation(format!(
                "no minimizer found at ε = {eps}"
            )));
        }
        let mut measured: f64 = 0.0;
        for n in &dirs {
            let gap = e0_rounded_cube(half_width, eps, n)? - e0_cube(2.0 * half_width, n)?;
            measured = measured.max(gap.abs());
        }
        rows.push(StabilityRow {
            epsilon: eps,
            max_min_distance,
            energy_gap_bound: FOURTH_ROOT_24 * symmetric_difference_area(&exact, &rounded)?,
            energy_gap_measured: measured,
        });
    }

    for w in rows.windows(2) {
        if w[1].max_min_distance > w[0].max_min_distance + MONOTONE_SLACK {
            return Err(Error::StabilityViolation(format!(
                "minimizer distance grows from {} at ε = {} to {} at ε = {}",
                w[0].max_min_distance, w[0].epsilon, w[1].max_min_distance, w[1].epsilon
            )));
        }
    }
    let last = rows.last().expect("non-empty");
    if last.max_min_distance >= delta {
        return Err(Error::StabilityViolation(format!(
            "minimizers at ε = {} lie {} from the exact set, not below δ = {delta}",
            last.epsilon, last.max_min_distance
        )));
    }
    for r in &rows {
        if r.energy_gap_measured > r.energy_gap_bound * (1.0 + 1e-12) {
            return Err(Error::StabilityViolation(format!(
                "energy gap {} exceeds the bound {} at ε = {}",
                r.energy_gap_measured, r.energy_gap_bound, r.epsilon
            )));
        }
    }
    Ok(StabilityReport {
        half_width,
        delta,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_minimizers_are_the_diagonals() {
        let m = exact_cube_minimizers();
        assert_eq!(m.len(), 8);
        for v in &m {
            assert!((v.norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let o = MinimizeOptions::default();
        assert!(approx_stability(1.0, &[0.1, 0.2], 0.05, 10, 0, &o).is_err());
        assert!(approx_stability(1.0, &[], 0.05, 10, 0, &o).is_err());
        assert!(approx_stability(1.0, &[0.1], 0.0, 10, 0, &o).is_err());
    }

    #[test]
    fn gap_bound_holds_at_one_tenth() {
        let o = MinimizeOptions {
            lattice_points: 512,
            resolution: 16,
            ..Default::default()
        };
        let r = approx_stability(1.0, &[0.1], 0.05, 500, 7, &o).unwrap();
        let row = r.rows[0];
        assert!(row.energy_gap_measured <= row.energy_gap_bound);
        assert!(row.energy_gap_measured > 0.0);
    }
}
