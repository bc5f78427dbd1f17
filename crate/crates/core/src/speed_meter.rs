//! Two-cavity microwave speed meter: a working cavity whose eigenfrequency
//! follows the probe position, coupled at beat frequency `Omega_e` to a pumped
//! buffer cavity and read out by a homodyne detector at phase `Phi`.
//!
//! The waveguide fluctuation `U_fluct` enters with two independent white
//! quadratures of two-sided spectral density `hbar delta_e rho` each (see
//! [`SpeedMeterParams::fluctuation_density`]). That level is the one for which
//! the exact transfer functions reduce to the printed low-frequency densities,
//! together with the pump balance `W_e = omega_e delta_e rho q0^2`.

use num_complex::Complex64;

use crate::constants::HBAR;
use crate::dynamics::characteristic_frequency;
use crate::error::{Error, Result};
use crate::noise::MeterSpectra;
use crate::params::AntennaParams;

/// Resonance guard: `|L(omega)| < RESONANCE_TOLERANCE * Omega_e^2` is rejected.
pub const RESONANCE_TOLERANCE: f64 = 1e-12;

/// Relative tolerance when both `q0` and `W_e` are supplied.
pub const PUMP_CONSISTENCY_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedMeterParams {
    /// Microwave frequency omega_e, rad/s.
    pub omega_e: f64,
    /// Pump power W_e, erg/s.
    pub pump_power: f64,
    /// Tunability length d, cm: `1/d = (1/omega_e) d omega_e / dx`.
    pub tunability_length: f64,
    /// Beat frequency Omega_e between working and buffer cavities, rad/s.
    pub beat_frequency: f64,
    /// Local-oscillator phase Phi, rad.
    pub lo_phase: f64,
    /// Loaded relaxation time tau_e* of the working cavity, s.
    pub tau_e_star: f64,
    /// Wave impedance rho (CGS).
    pub rho: f64,
    /// Mean oscillation amplitude in the working cavity. Derived from the pump
    /// balance when `None`.
    pub mean_amplitude: Option<f64>,
    /// Pump voltage amplitude U0; informational.
    pub pump_voltage: Option<f64>,
}

/// Geometry needed to tune the meter: d, Omega_e, omega_e.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransducerGeometry {
    pub tunability_length: f64,
    pub beat_frequency: f64,
    pub omega_e: f64,
}

impl SpeedMeterParams {
    pub fn geometry(&self) -> TransducerGeometry {
        TransducerGeometry {
            tunability_length: self.tunability_length,
            beat_frequency: self.beat_frequency,
            omega_e: self.omega_e,
        }
    }

    /// `delta_e = 1 / (2 tau_e*)`.
    pub fn decrement(&self) -> f64 {
        0.5 / self.tau_e_star
    }

    /// Working-cavity amplitude; `sqrt(W_e / (omega_e delta_e rho))` unless given.
    pub fn q0(&self) -> f64 {
        self.mean_amplitude.unwrap_or_else(|| {
            (self.pump_power / (self.omega_e * self.decrement() * self.rho)).sqrt()
        })
    }

    /// Two-sided density of each waveguide fluctuation quadrature, `hbar delta_e rho`.
    pub fn fluctuation_density(&self) -> f64 {
        HBAR * self.decrement() * self.rho
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("sm_omega_e_rad_s", self.omega_e),
            ("sm_W_e_erg_s", self.pump_power),
            ("sm_d_cm", self.tunability_length),
            ("sm_Omega_e_rad_s", self.beat_frequency),
            ("sm_tau_e_star_s", self.tau_e_star),
            ("sm_rho", self.rho),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::validation(
                    name,
                    format!("must be finite and > 0, got {value}"),
                ));
            }
        }
        if !self.lo_phase.is_finite() || self.lo_phase.sin().abs() < 1e-12 {
            return Err(Error::validation("sm_Phi_rad", "sin(Phi) must be nonzero"));
        }
        if let Some(q0) = self.mean_amplitude {
            if !(q0.is_finite() && q0 > 0.0) {
                return Err(Error::validation(
                    "sm_q0",
                    format!("must be finite and > 0, got {q0}"),
                ));
            }
            let implied = self.omega_e * self.decrement() * self.rho * q0 * q0;
            let rel = (implied / self.pump_power - 1.0).abs();
            if rel > PUMP_CONSISTENCY_TOLERANCE {
                return Err(Error::validation(
                    "sm_q0",
                    format!(
                        "inconsistent with W_e: omega_e delta_e rho q0^2 = {implied:.6e}, W_e = {:.6e}",
                        self.pump_power
                    ),
                ));
            }
        }
        Ok(())
    }

    /// Warnings when the low-frequency densities are outside their regime
    /// (`Omega_e >= 3 omega_gr` and `Omega_e / tau_e* >= 3 omega_gr^2`).
    pub fn regime_warnings(&self, omega_gr: f64) -> Vec<String> {
        let mut out = Vec::new();
        if self.beat_frequency < 3.0 * omega_gr {
            out.push(format!(
                "Omega_e = {:.3e} is not >> omega_gr = {omega_gr:.3e}",
                self.beat_frequency
            ));
        }
        if self.beat_frequency / self.tau_e_star < 3.0 * omega_gr * omega_gr {
            out.push(format!(
                "Omega_e / tau_e* = {:.3e} is not >> omega_gr^2 = {:.3e}",
                self.beat_frequency / self.tau_e_star,
                omega_gr * omega_gr
            ));
        }
        out
    }

    /// `L(omega) = Omega_e^2 - omega^2 + i omega delta_e`.
    pub fn lorentzian(&self, omega: f64) -> Complex64 {
        Complex64::new(
            self.beat_frequency * self.beat_frequency - omega * omega,
            omega * self.decrement(),
        )
    }

    fn checked_lorentzian(&self, omega: f64) -> Result<Complex64> {
        let l = self.lorentzian(omega);
        if l.norm() < RESONANCE_TOLERANCE * self.beat_frequency * self.beat_frequency {
            return Err(Error::Resonance {
                omega,
                magnitude: l.norm(),
            });
        }
        Ok(l)
    }
}

/// Linear responses of the working-cavity quadratures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferFunctions {
    /// `a1 / U_s = -i omega / (rho L)`.
    pub a1_per_us: Complex64,
    /// `b1 / x = i omega omega_e q0 / (d L)`.
    pub b1_per_x: Complex64,
    /// `b1 / U_c = i omega / (rho L)`.
    pub b1_per_uc: Complex64,
}

impl TransferFunctions {
    pub fn a1(&self, us: Complex64) -> Complex64 {
        self.a1_per_us * us
    }

    pub fn b1(&self, x: Complex64, uc: Complex64) -> Complex64 {
        self.b1_per_x * x + self.b1_per_uc * uc
    }
}

pub fn transfer_functions(sm: &SpeedMeterParams, omega: f64) -> Result<TransferFunctions> {
    let l = sm.checked_lorentzian(omega)?;
    let iw = Complex64::new(0.0, omega);
    Ok(TransferFunctions {
        a1_per_us: -iw / (l * sm.rho),
        b1_per_x: iw * (sm.omega_e * sm.q0() / sm.tunability_length) / l,
        b1_per_uc: iw / (l * sm.rho),
    })
}

/// Low-frequency meter densities:
/// `S_x = hbar d^2 Omega_e^4 / (4 omega^2 omega_e W_e sin^2 Phi)`,
/// `S_F = hbar omega_e W_e omega^2 / (d^2 Omega_e^4)`, `S_xF = -(hbar/2) cot Phi`.
pub fn noise_spectra(sm: &SpeedMeterParams, omega: f64) -> Result<MeterSpectra> {
    if omega == 0.0 {
        return Err(Error::Domain(
            "speed-meter densities diverge at omega = 0".into(),
        ));
    }
    let d2 = sm.tunability_length * sm.tunability_length;
    let big4 = sm.beat_frequency.powi(4);
    let w2 = omega * omega;
    let (sin, cos) = sm.lo_phase.sin_cos();
    Ok(MeterSpectra {
        s_x: HBAR * d2 * big4 / (4.0 * w2 * sm.omega_e * sm.pump_power * sin * sin),
        s_f: HBAR * sm.omega_e * sm.pump_power * w2 / (d2 * big4),
        s_xf: -0.5 * HBAR * cos / sin,
    })
}

/// Densities of the additive noise and back-action force computed from the
/// full transfer functions, valid at any `omega` off resonance.
pub fn exact_noise_spectra(sm: &SpeedMeterParams, omega: f64) -> Result<MeterSpectra> {
    if omega == 0.0 {
        return Err(Error::Domain("meter gain vanishes at omega = 0".into()));
    }
    let tf = transfer_functions(sm, omega)?;
    let gain = 2.0 * sm.decrement() * sm.rho;
    let (sin, cos) = sm.lo_phase.sin_cos();
    let one = Complex64::new(1.0, 0.0);
    // homodyne output: (U_c - gain b1) sin Phi + (U_s + gain a1) cos Phi
    let signal = -tf.b1_per_x * gain * sin;
    let x_from_uc = (one - tf.b1_per_uc * gain) * sin / signal;
    let x_from_us = (one + tf.a1_per_us * gain) * cos / signal;
    let f_from_us = tf.a1_per_us * (sm.q0() * sm.rho * sm.omega_e / sm.tunability_length);
    let su = sm.fluctuation_density();
    Ok(MeterSpectra {
        s_x: (x_from_uc.norm_sqr() + x_from_us.norm_sqr()) * su,
        s_f: f_from_us.norm_sqr() * su,
        s_xf: (x_from_us * f_from_us.conj()).re * su,
    })
}

/// Homodyne output spectrum for a displacement spectrum `x_spec`, fluctuations off:
/// `-(2 i omega omega_e delta_e rho q0 sin Phi / (L d)) x`.
pub fn output_signal_spectrum(
    sm: &SpeedMeterParams,
    x_spec: Complex64,
    omega: f64,
) -> Result<Complex64> {
    let l = sm.checked_lorentzian(omega)?;
    let k = 2.0 * omega * sm.omega_e * sm.decrement() * sm.rho * sm.q0() * sm.lo_phase.sin()
        / sm.tunability_length;
    Ok(Complex64::new(0.0, -k) / l * x_spec)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tuning {
    /// Optimal pump power, erg/s.
    pub pump_power: f64,
    /// Optimal local-oscillator phase in `(0, pi)`.
    pub lo_phase: f64,
    /// `cot Phi = -(omega_gr / nu)^6`.
    pub cot_phase: f64,
}

/// `W_e = (m d^2 Omega_e^4 / (2 omega_e)) (omega_gr/nu)^6`, `cot Phi = -(omega_gr/nu)^6`.
pub fn optimal_tuning(antenna: &AntennaParams, geometry: &TransducerGeometry) -> Result<Tuning> {
    let nu = characteristic_frequency(antenna);
    if nu >= antenna.omega_gr {
        return Err(Error::Tuning(format!(
            "optimum requires a stable antenna, nu = {nu:.6e} >= omega_gr = {:.6e}",
            antenna.omega_gr
        )));
    }
    let ratio6 = (antenna.omega_gr / nu).powi(6);
    let d2 = geometry.tunability_length * geometry.tunability_length;
    let pump_power = antenna.probe_mass * d2 * geometry.beat_frequency.powi(4)
        / (2.0 * geometry.omega_e)
        * ratio6;
    let cot_phase = -ratio6;
    Ok(Tuning {
        pump_power,
        lo_phase: 1.0f64.atan2(cot_phase),
        cot_phase,
    })
}
