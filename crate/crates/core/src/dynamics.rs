//! Linearized optical-mechanical dynamics: the ponderomotive characteristic
//! frequency, its roots, the stability criterion and the signal response of
//! the probe mass.
//!
//! Frequency-domain quantities use the `exp(+i omega t)` convention,
//! `x(t) = ∫ x(omega) exp(i omega t) d omega / 2 pi`.

use num_complex::Complex64;

use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::params::AntennaParams;

/// Relative distance to the pole below which `signal_transfer` refuses to evaluate.
pub const POLE_TOLERANCE: f64 = 1e-9;

/// `nu = (2 omega_o^2 E^2 / (m M L^4))^(1/6)`.
pub fn characteristic_frequency(p: &AntennaParams) -> f64 {
    let l2 = p.arm_length * p.arm_length;
    let ratio = 2.0 * (p.omega_o * p.energy).powi(2) / (p.probe_mass * p.mirror_mass * l2 * l2);
    ratio.powf(1.0 / 6.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicRoots {
    pub nu: f64,
    /// `nu exp(i pi (2k+1)/6)`, `k = 0..5`.
    pub roots: [Complex64; 6],
    pub max_real_part: f64,
    pub unstable: bool,
}

impl CharacteristicRoots {
    /// Largest `|p^6 + nu^6| / nu^6` over the roots (absolute when `nu = 0`).
    pub fn max_residual(&self) -> f64 {
        let nu6 = self.nu.powi(6);
        let scale = if nu6 > 0.0 { nu6 } else { 1.0 };
        self.roots
            .iter()
            .map(|r| (r.powi(6) + nu6).norm() / scale)
            .fold(0.0, f64::max)
    }
}

/// Analytic roots of `p^6 + nu^6 = 0`.
pub fn characteristic_roots(nu: f64) -> Result<CharacteristicRoots> {
    if !(nu >= 0.0 && nu.is_finite()) {
        return Err(Error::Domain(format!(
            "nu must be finite and >= 0, got {nu}"
        )));
    }
    // snap the rounding residue of cos(pi/2) so the imaginary-axis pair is exact
    let snap = |x: f64| if x.abs() < 1e-12 * nu { 0.0 } else { x };
    let roots: [Complex64; 6] = std::array::from_fn(|k| {
        let z = Complex64::from_polar(nu, std::f64::consts::PI * (2 * k + 1) as f64 / 6.0);
        Complex64::new(snap(z.re), snap(z.im))
    });
    let max_real_part = roots.iter().map(|r| r.re).fold(f64::NEG_INFINITY, f64::max);
    Ok(CharacteristicRoots {
        nu,
        roots,
        max_real_part,
        unstable: max_real_part > 0.0,
    })
}

/// Roots of `p^6 + nu^6` by Durand–Kerner iteration on the monic polynomial,
/// sorted by argument in `[0, 2 pi)`. Cross-check for [`characteristic_roots`].
pub fn numerical_roots(nu: f64) -> Result<Vec<Complex64>> {
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(Error::Domain(format!(
            "nu must be finite and > 0, got {nu}"
        )));
    }
    // work in q = p / nu so the coefficients are O(1)
    let poly = |q: Complex64| q.powi(6) + 1.0;
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..6).map(|k| seed.powi(k)).collect();
    for _ in 0..500 {
        let mut shift = 0.0f64;
        for i in 0..6 {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..6 {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            let step = poly(z[i]) / denom;
            z[i] -= step;
            shift = shift.max(step.norm());
        }
        if shift < 1e-15 {
            break;
        }
    }
    let mut roots: Vec<Complex64> = z.into_iter().map(|q| q * nu).collect();
    roots.sort_by(|a, b| {
        a.arg()
            .rem_euclid(std::f64::consts::TAU)
            .total_cmp(&b.arg().rem_euclid(std::f64::consts::TAU))
    });
    Ok(roots)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    pub nu: f64,
    /// `nu < omega_gr`.
    pub stable: bool,
    /// `omega_gr / nu` (infinite when `nu = 0`).
    pub margin: f64,
}

pub fn stability_check(p: &AntennaParams) -> StabilityReport {
    let nu = characteristic_frequency(p);
    StabilityReport {
        nu,
        stable: nu < p.omega_gr,
        margin: p.omega_gr / nu,
    }
}

/// Quasistatic ponderomotive force on the probe, `E dphi / L`, dyn.
pub fn ponderomotive_force(p: &AntennaParams, delta_phi: f64) -> f64 {
    p.energy * delta_phi / p.arm_length
}

/// Phase difference `h omega_o / omega_gr` produced by a metric amplitude `h`.
pub fn phase_response(p: &AntennaParams, h: f64) -> f64 {
    h * p.omega_o / p.omega_gr
}

/// Probe displacement spectrum driven by the metric spectrum `h_spec`:
/// `(hbar omega_o^2 N / (m L)) (-i omega^3 / (nu^6 - omega^6)) h`.
pub fn signal_transfer(p: &AntennaParams, omega: f64, h_spec: Complex64) -> Result<Complex64> {
    let nu6 = characteristic_frequency(p).powi(6);
    let w3 = omega.powi(3);
    let gap = nu6 - w3 * w3;
    let relative_distance = gap.abs() / nu6;
    if relative_distance < POLE_TOLERANCE {
        return Err(Error::Pole {
            omega,
            relative_distance,
        });
    }
    let gain = HBAR * p.omega_o * p.omega_o * p.photon_number() / (p.probe_mass * p.arm_length);
    Ok(Complex64::new(0.0, -gain * w3 / gap) * h_spec)
}
