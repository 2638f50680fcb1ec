//! Vacuum-fluctuation rates for a static atom, with or without a perfectly
//! reflecting plane boundary.
//!
//! Distances are the dimensionless `u = omega0 * z0 / c` and rates are in
//! units of the free-space emission rate `gamma0`. Near the boundary the
//! emission rate becomes `gamma0 * (1 - f)` where `f` is the
//! polarization-weighted sum of the response functions below.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Below this distance the response functions are evaluated by their
/// Maclaurin series; the closed forms cancel catastrophically as `u -> 0`.
pub const SERIES_SWITCH: f64 = 0.1;

/// `gamma_eff` values in `(-RATE_CLAMP, 0)` are round-off and become 0.
const RATE_CLAMP: f64 = 1e-12;

/// Relative dipole polarizabilities `(alpha_x, alpha_y, alpha_z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarizationWeights {
    ax: f64,
    ay: f64,
    az: f64,
}

impl PolarizationWeights {
    pub fn new(ax: f64, ay: f64, az: f64) -> Result<Self> {
        let bad = |reason| Error::Polarization { ax, ay, az, reason };
        if !(ax.is_finite() && ay.is_finite() && az.is_finite()) {
            return Err(bad("weights must be finite"));
        }
        if ax < 0.0 || ay < 0.0 || az < 0.0 {
            return Err(bad("weights must be nonnegative"));
        }
        if (ax + ay + az - 1.0).abs() > 1e-12 {
            return Err(bad("weights must sum to 1"));
        }
        Ok(Self { ax, ay, az })
    }

    /// Dipole along x, parallel to the boundary plane.
    pub fn parallel() -> Self {
        Self {
            ax: 1.0,
            ay: 0.0,
            az: 0.0,
        }
    }

    /// Dipole along z, normal to the boundary plane.
    pub fn perpendicular() -> Self {
        Self {
            ax: 0.0,
            ay: 0.0,
            az: 1.0,
        }
    }

    pub fn isotropic() -> Self {
        let third = 1.0 / 3.0;
        Self {
            ax: third,
            ay: third,
            az: third,
        }
    }

    pub fn ax(&self) -> f64 {
        self.ax
    }

    pub fn ay(&self) -> f64 {
        self.ay
    }

    pub fn az(&self) -> f64 {
        self.az
    }
}

impl Default for PolarizationWeights {
    fn default() -> Self {
        Self::isotropic()
    }
}

/// Field configuration seen by the atom.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Geometry {
    #[default]
    Unbounded,
    /// Reflecting plane at dimensionless distance `u`.
    Mirror { u: f64 },
}

impl Geometry {
    pub fn mirror(u: f64) -> Result<Self> {
        if !(u.is_finite() && u > 0.0) {
            return Err(domain("u", u, "mirror distance must be finite and positive"));
        }
        Ok(Geometry::Mirror { u })
    }
}

/// Kossakowski coefficients and effective emission rate, in units of `gamma0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateCoefficients {
    pub a_coeff: f64,
    pub b_coeff: f64,
    pub gamma_eff: f64,
}

impl RateCoefficients {
    fn from_gamma(gamma_eff: f64) -> Self {
        Self {
            a_coeff: 0.25 * gamma_eff,
            b_coeff: 0.25 * gamma_eff,
            gamma_eff,
        }
    }

    /// Damping `q' = 1 - (1 - q)^gamma_eff` reached when the free-space
    /// noise parameter is `q`. A frozen rate keeps `q' = 0`, even at `q = 1`.
    pub fn damping(&self, q: f64) -> f64 {
        if self.gamma_eff == 0.0 {
            return 0.0;
        }
        1.0 - (1.0 - q).powf(self.gamma_eff)
    }
}

fn check_distance(u: f64) -> Result<()> {
    if !(u.is_finite() && u > 0.0) {
        return Err(domain("u", u, "distance must be finite and positive"));
    }
    Ok(())
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Response function for dipoles parallel to the plane (`f_x = f_y`).
pub fn f_parallel(u: f64) -> Result<f64> {
    check_distance(u)?;
    Ok(if u < SERIES_SWITCH {
        f_parallel_series(u)
    } else {
        f_parallel_direct(u)
    })
}

/// Response function for dipoles normal to the plane (`f_z`).
pub fn f_perpendicular(u: f64) -> Result<f64> {
    check_distance(u)?;
    Ok(if u < SERIES_SWITCH {
        f_perpendicular_series(u)
    } else {
        f_perpendicular_direct(u)
    })
}

/// `3/(16u^3) [2u cos 2u + (4u^2 - 1) sin 2u]`
pub fn f_parallel_direct(u: f64) -> f64 {
    let x = 2.0 * u;
    let (s, c) = x.sin_cos();
    3.0 / (16.0 * u * u * u) * (x * c + (x * x - 1.0) * s)
}

/// `3/(8u^3) [2u cos 2u - sin 2u]`
pub fn f_perpendicular_direct(u: f64) -> f64 {
    let x = 2.0 * u;
    let (s, c) = x.sin_cos();
    3.0 / (8.0 * u * u * u) * (x * c - s)
}

// With x = 2u the bracket x cos x + (x^2 - 1) sin x has x^(2k+1) coefficient
// (-1)^k [1/(2k)! - 1/(2k-1)! - 1/(2k+1)!], so
//   f_parallel = 1 - 4u^2/5 + 6u^4/35 - ...
// and x cos x - sin x has (-1)^k 2k/(2k+1)!, so
//   f_perpendicular = -1 + 2u^2/5 - 2u^4/35 + ...
const SERIES_TERMS: u32 = 14;

/// Maclaurin series of [`f_parallel_direct`]; accurate for `u <= 1`.
pub fn f_parallel_series(u: f64) -> f64 {
    let x2 = 4.0 * u * u;
    let mut power = 1.0;
    let mut sum = 0.0;
    for k in 1..=SERIES_TERMS {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let coeff =
            sign * (1.0 / factorial(2 * k) - 1.0 / factorial(2 * k - 1) - 1.0 / factorial(2 * k + 1));
        sum += coeff * power;
        power *= x2;
    }
    1.5 * sum
}

/// Maclaurin series of [`f_perpendicular_direct`]; accurate for `u <= 1`.
pub fn f_perpendicular_series(u: f64) -> f64 {
    let x2 = 4.0 * u * u;
    let mut power = 1.0;
    let mut sum = 0.0;
    for k in 1..=SERIES_TERMS {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * f64::from(2 * k) / factorial(2 * k + 1) * power;
        power *= x2;
    }
    3.0 * sum
}

/// Polarization-weighted response `f = sum_i alpha_i f_i`; zero without a boundary.
pub fn suppression_factor(g: &Geometry, p: &PolarizationWeights) -> Result<f64> {
    match *g {
        Geometry::Unbounded => Ok(0.0),
        Geometry::Mirror { u } => {
            Ok((p.ax + p.ay) * f_parallel(u)? + p.az * f_perpendicular(u)?)
        }
    }
}

/// Kossakowski `A = B = gamma_eff / 4` with `gamma_eff = 1 - f`.
pub fn rate_coefficients(g: &Geometry, p: &PolarizationWeights) -> Result<RateCoefficients> {
    let f = suppression_factor(g, p)?;
    let mut gamma = 1.0 - f;
    if gamma < 0.0 {
        if gamma > -RATE_CLAMP {
            gamma = 0.0;
        } else {
            return Err(Error::NegativeRate(gamma));
        }
    }
    Ok(RateCoefficients::from_gamma(gamma))
}

#[cfg(test)]
mod tests {
    use super::*;

    // 50-digit evaluations of the closed forms (mpmath).
    const F_PAR_0_1: f64 = 0.992_017_125_935_542_4;
    const F_PERP_0_1: f64 = -0.996_005_710_054_833_5;

    #[test]
    fn high_precision_reference_values() {
        // u = 0.1 takes the direct path, which loses a few digits to cancellation
        assert!((f_parallel(0.1).unwrap() - F_PAR_0_1).abs() < 1e-13);
        assert!((f_perpendicular(0.1).unwrap() - F_PERP_0_1).abs() < 1e-13);
        assert!((f_parallel_series(0.1) - F_PAR_0_1).abs() < 1e-15);
        assert!((f_perpendicular_series(0.1) - F_PERP_0_1).abs() < 1e-15);
        assert!((f_parallel(0.05).unwrap() - 0.998_001_071_164_058_7).abs() < 1e-15);
        assert!((f_perpendicular(0.3).unwrap() + 0.964_459_784_017_060_8).abs() < 1e-14);
        assert!((f_parallel(3.0).unwrap() + 0.027_906_393_868_473_68).abs() < 1e-14);
    }

    #[test]
    fn leading_series_coefficients() {
        let u: f64 = 1e-3;
        let par = 1.0 - 0.8 * u * u + 6.0 / 35.0 * u.powi(4);
        let perp = -1.0 + 0.4 * u * u - 2.0 / 35.0 * u.powi(4);
        assert!((f_parallel(u).unwrap() - par).abs() < 3e-16);
        assert!((f_perpendicular(u).unwrap() - perp).abs() < 3e-16);
    }

    #[test]
    fn small_distance_limits() {
        assert!((f_parallel(1e-9).unwrap() - 1.0).abs() < 1e-15);
        assert!((f_perpendicular(1e-9).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn continuity_at_switch() {
        let below = SERIES_SWITCH * (1.0 - 1e-12);
        assert!((f_parallel(below).unwrap() - f_parallel(SERIES_SWITCH).unwrap()).abs() < 1e-11);
        assert!(
            (f_perpendicular(below).unwrap() - f_perpendicular(SERIES_SWITCH).unwrap()).abs()
                < 1e-11
        );
    }

    #[test]
    fn far_field_decay() {
        assert!(f_parallel(1000.0).unwrap().abs() < 8e-4);
        assert!(f_perpendicular(1000.0).unwrap().abs() < 2e-3);
    }

    #[test]
    fn non_positive_distance_is_a_domain_error() {
        for u in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(f_parallel(u), Err(Error::Domain { .. })));
            assert!(matches!(f_perpendicular(u), Err(Error::Domain { .. })));
            assert!(Geometry::mirror(u).is_err());
        }
    }

    #[test]
    fn suppression_examples() {
        let close = Geometry::mirror(1e-9).unwrap();
        let iso = PolarizationWeights::isotropic();
        assert_eq!(suppression_factor(&Geometry::Unbounded, &iso).unwrap(), 0.0);
        let transverse = PolarizationWeights::new(0.5, 0.5, 0.0).unwrap();
        assert!((suppression_factor(&close, &transverse).unwrap() - 1.0).abs() < 1e-15);
        assert!((suppression_factor(&close, &iso).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn rate_examples() {
        let free = rate_coefficients(&Geometry::Unbounded, &PolarizationWeights::parallel()).unwrap();
        assert_eq!(free.a_coeff, 0.25);
        assert_eq!(free.b_coeff, 0.25);
        assert_eq!(free.gamma_eff, 1.0);

        let close = Geometry::mirror(1e-9).unwrap();
        let frozen = rate_coefficients(&close, &PolarizationWeights::parallel()).unwrap();
        assert!(frozen.gamma_eff < 1e-17);
        let doubled = rate_coefficients(&close, &PolarizationWeights::perpendicular()).unwrap();
        assert!((doubled.gamma_eff - 2.0).abs() < 1e-15);
        assert_eq!(doubled.a_coeff, doubled.gamma_eff / 4.0);
    }

    #[test]
    fn weights_are_validated() {
        assert!(PolarizationWeights::new(0.5, 0.5, 0.1).is_err());
        assert!(PolarizationWeights::new(-0.1, 0.6, 0.5).is_err());
        assert!(PolarizationWeights::new(f64::NAN, 0.5, 0.5).is_err());
        let w = PolarizationWeights::new(0.2, 0.3, 0.5).unwrap();
        assert_eq!((w.ax(), w.ay(), w.az()), (0.2, 0.3, 0.5));
    }

    #[test]
    fn damping_map() {
        let r = RateCoefficients::from_gamma(2.0);
        assert!((r.damping(0.5) - 0.75).abs() < 1e-15);
        assert_eq!(r.damping(1.0), 1.0);
        let frozen = RateCoefficients::from_gamma(0.0);
        assert_eq!(frozen.damping(1.0), 0.0);
    }
}
