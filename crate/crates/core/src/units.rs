//! SI constants (CODATA 2018, exact where the SI defines them) and the
//! conversions between physical and nondimensional quantities.
//!
//! The nondimensional frequency argument is `x = ω̂ a / c`, so a rate such
//! as `ω_p` enters the core as `ω_p a / c`.

use crate::error::{domain, Result};
use std::f64::consts::PI;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Speed of light, m/s.
pub const C: f64 = 299_792_458.0;
/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

/// Matsubara frequency `ω̂_m = 2π k_B T m / ħ` in s⁻¹.
pub fn matsubara_omega(temperature: f64, m: u64) -> Result<f64> {
    if !(temperature > 0.0) || !temperature.is_finite() {
        return Err(domain(format!(
            "temperature must be positive, got {temperature}"
        )));
    }
    Ok(2.0 * PI * K_B * temperature * m as f64 / HBAR)
}

/// Reduced temperature `t = 2π a k_B T / (ħ c)` for inner radius `a` in meters.
pub fn reduced_temperature(temperature: f64, radius: f64) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(domain(format!("radius must be positive, got {radius}")));
    }
    Ok(matsubara_omega(temperature, 1)? * radius / C)
}

/// Temperature in kelvin that gives reduced temperature `t` at radius `a`.
pub fn temperature_from_reduced(t: f64, radius: f64) -> Result<f64> {
    if !(radius > 0.0) || !(t > 0.0) {
        return Err(domain("radius and reduced temperature must be positive"));
    }
    Ok(t * HBAR * C / (2.0 * PI * K_B * radius))
}

/// A rate in s⁻¹ expressed in units of `c/a`.
pub fn rate_in_radius_units(rate: f64, radius: f64) -> f64 {
    rate * radius / C
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn room_temperature_matsubara_spacing() {
        let w1 = matsubara_omega(300.0, 1).unwrap();
        assert_relative_eq!(w1, 2.48e14, max_relative = 0.01);
        assert_eq!(matsubara_omega(300.0, 0).unwrap(), 0.0);
        assert_relative_eq!(
            matsubara_omega(300.0, 7).unwrap(),
            7.0 * w1,
            max_relative = 1e-15
        );
    }

    #[test]
    fn reduced_temperature_round_trip() {
        let t = reduced_temperature(300.0, 1e-3).unwrap();
        assert_relative_eq!(t, 830.0, max_relative = 0.01);
        assert_relative_eq!(
            temperature_from_reduced(t, 1e-3).unwrap(),
            300.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn rejects_nonpositive_temperature() {
        assert!(matsubara_omega(0.0, 1).is_err());
        assert!(matsubara_omega(-3.0, 1).is_err());
        assert!(reduced_temperature(300.0, 0.0).is_err());
    }
}
