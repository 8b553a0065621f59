//! Complete elliptic integral of the second kind.

use crate::error::{Error, Result};
use std::f64::consts::FRAC_PI_2;

/// `∫₀^{π/2} √(1 + m sin²θ) dθ` for `m ≥ −1`.
///
/// Note the plus sign: this equals the textbook `E(k²)` at `k² = −m`.
pub fn complete_elliptic_e(m: f64) -> Result<f64> {
    if !(m >= -1.0) || m.is_infinite() {
        return Err(Error::Domain(format!("E(m) needs m ≥ −1 (got {m})")));
    }
    elliptic_e_textbook(-m)
}

/// Textbook `E(k²) = ∫₀^{π/2} √(1 − k² sin²θ) dθ` for `k² ≤ 1`.
pub fn elliptic_e_textbook(k2: f64) -> Result<f64> {
    if !(k2 <= 1.0) || k2.is_nan() {
        return Err(Error::Domain(format!("E(k²) needs k² ≤ 1 (got {k2})")));
    }
    if k2 == 1.0 {
        return Ok(1.0);
    }
    if k2 < 0.0 {
        // Imaginary-modulus transformation E(−x) = √(1+x) E(x/(1+x)).
        let x = -k2;
        return Ok((1.0 + x).sqrt() * agm_e(x / (1.0 + x)));
    }
    Ok(agm_e(k2))
}

/// Arithmetic–geometric mean evaluation for `0 ≤ k² < 1`.
fn agm_e(k2: f64) -> f64 {
    let mut a = 1.0f64;
    let mut b = (1.0 - k2).sqrt();
    let mut sum = 0.5 * k2;
    let mut pow = 0.5;
    for _ in 0..64 {
        let c = 0.5 * (a - b);
        if c.abs() <= 1e-15 * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
        pow *= 2.0;
        sum += pow * c * c;
    }
    FRAC_PI_2 / a * (1.0 - sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate_adaptive;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn quadrature_oracle(m: f64) -> f64 {
        integrate_adaptive(
            |t: f64| (1.0 + m * t.sin().powi(2)).sqrt(),
            0.0,
            FRAC_PI_2,
            1e-15,
        )
        .0
    }

    #[test]
    fn known_values() {
        assert_relative_eq!(
            complete_elliptic_e(0.0).unwrap(),
            FRAC_PI_2,
            epsilon = 1e-15
        );
        assert_relative_eq!(complete_elliptic_e(-1.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(
            complete_elliptic_e(-0.5).unwrap(),
            1.350_643_881_047_675_5,
            epsilon = 1e-14
        );
        assert!(complete_elliptic_e(-1.5).is_err());
        assert!(elliptic_e_textbook(1.2).is_err());
    }

    proptest! {
        #[test]
        fn matches_quadrature(m in -1.0f64..50.0) {
            let e = complete_elliptic_e(m).unwrap();
            prop_assert!((e - quadrature_oracle(m)).abs() < 1e-12 * e.max(1.0));
        }
    }
}
