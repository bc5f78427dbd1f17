//! Physical parameters of the antenna and its optical pump (CGS units).

use crate::constants::HBAR;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntennaParams {
    /// Arm length, cm.
    pub arm_length: f64,
    /// End-mirror mass M, g.
    pub mirror_mass: f64,
    /// Probe mass m of the central mirror, g.
    pub probe_mass: f64,
    /// Optical frequency, rad/s.
    pub omega_o: f64,
    /// Signal frequency, rad/s.
    pub omega_gr: f64,
    /// Signal duration, s.
    pub tau_gr: f64,
    /// Total circulating optical energy, erg.
    pub energy: f64,
    /// Optical relaxation time, s.
    pub tau_o_star: f64,
    /// Mechanical relaxation time of the probe mass, s.
    pub tau_m_star: f64,
    /// Temperature, K.
    pub temperature: f64,
    /// Beat frequency of the two coupled optical resonators, rad/s.
    pub omega_beat: f64,
}

impl AntennaParams {
    /// Parameters of the worked example: LIGO-scale arms with a 1 g probe and 1e6 erg.
    pub fn worked_example() -> Self {
        AntennaParams {
            arm_length: 4e5,
            mirror_mass: 1e4,
            probe_mass: 1.0,
            omega_o: 2e15,
            omega_gr: 1e3,
            tau_gr: 1e-2,
            energy: 1e6,
            tau_o_star: 1.0,
            tau_m_star: 3e8,
            temperature: 4.0,
            omega_beat: 1e4,
        }
    }

    /// Checks every field is finite and strictly positive. Returns advisory
    /// warnings (currently only `m > M`) on success.
    pub fn validate(&self) -> Result<Vec<String>> {
        let fields = [
            ("L_cm", self.arm_length),
            ("M_g", self.mirror_mass),
            ("m_g", self.probe_mass),
            ("omega_o_rad_s", self.omega_o),
            ("omega_gr_rad_s", self.omega_gr),
            ("tau_gr_s", self.tau_gr),
            ("energy_erg", self.energy),
            ("tau_o_star_s", self.tau_o_star),
            ("tau_m_star_s", self.tau_m_star),
            ("T_K", self.temperature),
            ("Omega_rad_s", self.omega_beat),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::validation(
                    name,
                    format!("must be finite and > 0, got {value}"),
                ));
            }
        }
        let mut warnings = Vec::new();
        if self.probe_mass > self.mirror_mass {
            warnings.push(format!(
                "probe mass m={} exceeds mirror mass M={}; estimates assume m << M",
                self.probe_mass, self.mirror_mass
            ));
        }
        Ok(warnings)
    }

    /// Total number of optical quanta `E / (hbar omega_o)`.
    pub fn photon_number(&self) -> f64 {
        self.energy / (HBAR * self.omega_o)
    }

    /// Classical amplitude of each arm mode, `sqrt(N/2)` (energy E/2 per arm).
    pub fn arm_amplitude(&self) -> f64 {
        (0.5 * self.photon_number()).sqrt()
    }

    pub fn with_energy(mut self, energy: f64) -> Self {
        self.energy = energy;
        self
    }
}
