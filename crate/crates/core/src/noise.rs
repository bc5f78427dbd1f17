//! Readout noise budget: quantum energy limits, meter and loss spectral
//! densities, the signal-to-noise integral and the resulting sensitivity limits.

use std::cell::Cell;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::constants::{BOLTZMANN, HBAR};
use crate::dynamics::{characteristic_frequency, stability_check};
use crate::error::{Error, Result};
use crate::params::AntennaParams;
use crate::quad::{self, Tolerance};
use crate::regime::{self, Regime};
use crate::speed_meter::{self, SpeedMeterParams, TransducerGeometry, Tuning};

/// `hbar^2 / 4`, the lower bound of `S_x S_F - S_xF^2` for any linear meter.
pub const HEISENBERG_BOUND: f64 = HBAR * HBAR / 4.0;

/// Relative slack allowed below [`HEISENBERG_BOUND`] before a model is rejected.
pub const HEISENBERG_SLACK: f64 = 1e-9;

/// The SNR band is `[omega_gr / BAND_RATIO, omega_gr * BAND_RATIO]`.
pub const BAND_RATIO: f64 = 50.0;

/// Relative tolerance of the SNR quadrature.
pub const SNR_RELATIVE_TOLERANCE: f64 = 1e-6;

/// Meter noise densities at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeterSpectra {
    /// Additive displacement noise, cm^2 s.
    pub s_x: f64,
    /// Back-action force noise, dyn^2 s.
    pub s_f: f64,
    /// Cross density, erg s.
    pub s_xf: f64,
}

impl MeterSpectra {
    pub fn uncertainty_product(&self) -> f64 {
        self.s_x * self.s_f - self.s_xf * self.s_xf
    }

    pub fn satisfies_heisenberg(&self) -> bool {
        self.s_x > 0.0
            && self.s_f > 0.0
            && self.uncertainty_product() >= HEISENBERG_BOUND * (1.0 - HEISENBERG_SLACK)
    }
}

/// Tabulated meter densities, linearly interpolated in `ln omega` and held
/// constant beyond the first and last node.
///
/// The admissible set `{S_x, S_F > 0, S_x S_F - S_xF^2 >= hbar^2/4}` is convex
/// (square root of a 2x2 determinant is concave on positive matrices), so
/// checking the nodes is enough for the whole interpolant.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomTable {
    nodes: Vec<(f64, MeterSpectra)>,
}

impl CustomTable {
    pub fn new(nodes: Vec<(f64, MeterSpectra)>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::validation("meter_table", "table has no rows"));
        }
        for (i, (w, s)) in nodes.iter().enumerate() {
            if !(w.is_finite() && *w > 0.0) {
                return Err(Error::validation(
                    "meter_table",
                    format!("row {}: omega must be > 0", i + 1),
                ));
            }
            if i > 0 && *w <= nodes[i - 1].0 {
                return Err(Error::validation(
                    "meter_table",
                    format!("row {}: omega must be strictly increasing", i + 1),
                ));
            }
            if !s.satisfies_heisenberg() {
                return Err(Error::Model(format!(
                    "custom meter violates S_x S_F - S_xF^2 >= hbar^2/4 at omega = {w:.6e} \
                     (product {:.6e})",
                    s.uncertainty_product()
                )));
            }
        }
        Ok(CustomTable { nodes })
    }

    /// Parses `omega,S_x,S_F,S_xF` rows; a first row that is not numeric is a header.
    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut nodes = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cells: Vec<&str> = line.split(',').map(str::trim).collect();
            let parsed: std::result::Result<Vec<f64>, _> =
                cells.iter().map(|c| c.parse::<f64>()).collect();
            match parsed {
                Ok(v) if v.len() == 4 => nodes.push((
                    v[0],
                    MeterSpectra {
                        s_x: v[1],
                        s_f: v[2],
                        s_xf: v[3],
                    },
                )),
                Err(_) if nodes.is_empty() && i == 0 => continue,
                _ => {
                    return Err(Error::Parse {
                        line: i + 1,
                        message: "expected four numbers: omega,S_x,S_F,S_xF".into(),
                    })
                }
            }
        }
        CustomTable::new(nodes)
    }

    pub fn nodes(&self) -> &[(f64, MeterSpectra)] {
        &self.nodes
    }

    pub fn spectra(&self, omega: f64) -> MeterSpectra {
        let w = omega.abs();
        let first = self.nodes[0];
        let last = self.nodes[self.nodes.len() - 1];
        if w <= first.0 {
            return first.1;
        }
        if w >= last.0 {
            return last.1;
        }
        let hi = self.nodes.partition_point(|(x, _)| *x < w);
        let (w0, s0) = self.nodes[hi - 1];
        let (w1, s1) = self.nodes[hi];
        let t = (w.ln() - w0.ln()) / (w1.ln() - w0.ln());
        let lerp = |a: f64, b: f64| a + t * (b - a);
        MeterSpectra {
            s_x: lerp(s0.s_x, s1.s_x),
            s_f: lerp(s0.s_f, s1.s_f),
            s_xf: lerp(s0.s_xf, s1.s_xf),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeterModel {
    /// Frequency-independent densities with no cross-correlation.
    PlainCoordinate {
        s_x: f64,
        s_f: f64,
    },
    /// Microwave speed meter in its low-frequency regime.
    SpeedMeter(SpeedMeterParams),
    Custom(CustomTable),
}

impl MeterModel {
    /// Plain meter at the optimum `S_F = hbar m omega_gr^2 / 2`, `S_x = hbar / (2 m omega_gr^2)`.
    pub fn plain_optimum(p: &AntennaParams) -> Self {
        let (s_x, s_f) = plain_optimum_densities(p);
        MeterModel::PlainCoordinate { s_x, s_f }
    }

    pub fn plain(s_x: f64, s_f: f64) -> Result<Self> {
        let s = MeterSpectra {
            s_x,
            s_f,
            s_xf: 0.0,
        };
        if !s.satisfies_heisenberg() {
            return Err(Error::Model(format!(
                "plain meter violates S_x S_F >= hbar^2/4 (S_x S_F = {:.6e})",
                s_x * s_f
            )));
        }
        Ok(MeterModel::PlainCoordinate { s_x, s_f })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            MeterModel::PlainCoordinate { .. } => "plain",
            MeterModel::SpeedMeter(_) => "speed",
            MeterModel::Custom(_) => "custom",
        }
    }

    pub fn spectra(&self, omega: f64) -> Result<MeterSpectra> {
        match self {
            MeterModel::PlainCoordinate { s_x, s_f } => Ok(MeterSpectra {
                s_x: *s_x,
                s_f: *s_f,
                s_xf: 0.0,
            }),
            MeterModel::SpeedMeter(sm) => speed_meter::noise_spectra(sm, omega),
            MeterModel::Custom(table) => Ok(table.spectra(omega)),
        }
    }

    /// Spectra at `omega`, rejected if they break the Heisenberg inequality.
    pub fn checked_spectra(&self, omega: f64) -> Result<MeterSpectra> {
        let s = self.spectra(omega)?;
        if !s.satisfies_heisenberg() {
            return Err(Error::Model(format!(
                "{} meter violates S_x S_F - S_xF^2 >= hbar^2/4 at omega = {omega:.6e} (product {:.6e})",
                self.kind(),
                s.uncertainty_product()
            )));
        }
        Ok(s)
    }
}

pub fn plain_optimum_densities(p: &AntennaParams) -> (f64, f64) {
    let mw2 = p.probe_mass * p.omega_gr * p.omega_gr;
    (HBAR / (2.0 * mw2), 0.5 * HBAR * mw2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TemplateShape {
    /// `h0 sin(omega_gr t)` on `[0, tau_gr]`.
    RectSine,
    /// `h0 sin(omega_gr t) exp(-t^2 / (2 sigma^2))` with `sigma = tau_gr / sqrt(pi)`,
    /// so its envelope carries the same energy as the rectangular window.
    GaussianSine,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalTemplate {
    pub shape: TemplateShape,
    pub h0: f64,
    pub omega_gr: f64,
    pub tau_gr: f64,
}

impl SignalTemplate {
    pub fn rect_sine(h0: f64, omega_gr: f64, tau_gr: f64) -> Self {
        SignalTemplate {
            shape: TemplateShape::RectSine,
            h0,
            omega_gr,
            tau_gr,
        }
    }

    /// Default template: `RectSine`, `h0 = 1e-21`, five signal periods.
    pub fn default_for(omega_gr: f64) -> Self {
        SignalTemplate::rect_sine(1e-21, omega_gr, default_duration(omega_gr))
    }

    pub fn with_amplitude(mut self, h0: f64) -> Self {
        self.h0 = h0;
        self
    }

    fn sigma(&self) -> f64 {
        self.tau_gr / PI.sqrt()
    }

    pub fn time_domain(&self, t: f64) -> f64 {
        let carrier = self.h0 * (self.omega_gr * t).sin();
        match self.shape {
            TemplateShape::RectSine => {
                if (0.0..=self.tau_gr).contains(&t) {
                    carrier
                } else {
                    0.0
                }
            }
            TemplateShape::GaussianSine => carrier * (-0.5 * (t / self.sigma()).powi(2)).exp(),
        }
    }

    /// Support of the time-domain template used for numerical transforms.
    pub fn time_support(&self) -> (f64, f64) {
        match self.shape {
            TemplateShape::RectSine => (0.0, self.tau_gr),
            TemplateShape::GaussianSine => (-12.0 * self.sigma(), 12.0 * self.sigma()),
        }
    }

    /// Closed-form `h(omega) = ∫ h(t) exp(-i omega t) dt`.
    pub fn spectrum(&self, omega: f64) -> Complex64 {
        let pre = Complex64::new(0.0, -0.5 * self.h0); // h0 / (2i)
        match self.shape {
            TemplateShape::RectSine => {
                pre * (window(self.omega_gr - omega, self.tau_gr)
                    - window(-self.omega_gr - omega, self.tau_gr))
            }
            TemplateShape::GaussianSine => {
                let s = self.sigma();
                let g = |d: f64| s * (2.0 * PI).sqrt() * (-0.5 * s * s * d * d).exp();
                pre * Complex64::new(g(omega - self.omega_gr) - g(omega + self.omega_gr), 0.0)
            }
        }
    }
}

/// Five signal periods.
pub fn default_duration(omega_gr: f64) -> f64 {
    2.0 * PI * 5.0 / omega_gr
}

/// `∫_0^tau exp(i a t) dt`, written without cancellation.
fn window(a: f64, tau: f64) -> Complex64 {
    let x = a * tau;
    if x.abs() < 1e-8 {
        return Complex64::new(tau, 0.5 * x * tau);
    }
    let half = (0.5 * x).sin();
    // (exp(ix) - 1) / (ia) = (-2 sin^2(x/2) + i sin x) / (ia)
    Complex64::new(-2.0 * half * half, x.sin()) / Complex64::new(0.0, a)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumLimits {
    /// `sqrt(hbar / (M omega_gr^2 tau_gr))`, cm.
    pub x_sql: f64,
    /// `hbar / (2 x_sql)`, g cm/s.
    pub delta_p: f64,
    /// `L sqrt(hbar M omega_gr^3)`, erg.
    pub delta_e: f64,
    /// Coherent-state requirement `M L^2 omega_gr^3 / omega_o`, erg.
    pub e_sql: f64,
    /// Coherent-state energy uncertainty `sqrt(hbar omega_o E)`, erg.
    pub delta_e_coherent: f64,
}

pub fn quantum_limits(p: &AntennaParams) -> QuantumLimits {
    let w = p.omega_gr;
    let x_sql = (HBAR / (p.mirror_mass * w * w * p.tau_gr)).sqrt();
    QuantumLimits {
        x_sql,
        delta_p: HBAR / (2.0 * x_sql),
        delta_e: p.arm_length * (HBAR * p.mirror_mass * w.powi(3)).sqrt(),
        e_sql: energy_sql(p),
        delta_e_coherent: (HBAR * p.omega_o * p.energy).sqrt(),
    }
}

/// `M L^2 omega_gr^3 / omega_o`.
pub fn energy_sql(p: &AntennaParams) -> f64 {
    p.mirror_mass * p.arm_length * p.arm_length * p.omega_gr.powi(3) / p.omega_o
}

/// `(1/L) sqrt(hbar / (mass omega_gr^2 tau_gr))`.
pub fn h_sql(p: &AntennaParams, mass: f64) -> f64 {
    (HBAR / (mass * p.omega_gr * p.omega_gr * p.tau_gr)).sqrt() / p.arm_length
}

/// Thermal force density on the probe, `2 kappa T m / tau_m*`.
pub fn mechanical_noise_density(p: &AntennaParams) -> f64 {
    2.0 * BOLTZMANN * p.temperature * p.probe_mass / p.tau_m_star
}

/// Force density from optical loss, `hbar omega_o E / (L^2 tau_o* omega^2)`.
pub fn optical_noise_density(p: &AntennaParams, omega: f64) -> Result<f64> {
    if omega == 0.0 {
        return Err(Error::Domain(
            "optical loss density diverges at omega = 0".into(),
        ));
    }
    Ok(HBAR * p.omega_o * p.energy / (p.arm_length * p.arm_length * p.tau_o_star * omega * omega))
}

/// Which loss channels enter the SNR denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NoiseChannels {
    pub mechanical: bool,
    pub optical: bool,
}

impl Default for NoiseChannels {
    fn default() -> Self {
        NoiseChannels {
            mechanical: true,
            optical: true,
        }
    }
}

/// Signal-to-noise ratio of the crossquadrature readout for the given meter and template.
pub fn snr(p: &AntennaParams, meter: &MeterModel, template: &SignalTemplate) -> Result<f64> {
    snr_with(p, meter, template, NoiseChannels::default())
}

/// SNR integral with a choice of loss channels.
///
/// The integrand is even in `omega`, so the positive band is integrated and doubled:
/// `snr = (1/pi) ∫ (omega_o^2 E^2 / L^2) omega^6 |h|^2 / D(omega) d omega`, with
/// `D = m^2 (nu^6 - w^6)^2 S_x + 2 m w^4 (nu^6 - w^6) S_xF + w^8 (S_F + S_m + S_o)`.
pub fn snr_with(
    p: &AntennaParams,
    meter: &MeterModel,
    template: &SignalTemplate,
    channels: NoiseChannels,
) -> Result<f64> {
    if template.h0 == 0.0 {
        return Ok(0.0);
    }
    let nu = characteristic_frequency(p);
    let nu6 = nu.powi(6);
    let gain = (p.omega_o * p.energy / p.arm_length).powi(2);
    let s_m = if channels.mechanical {
        mechanical_noise_density(p)
    } else {
        0.0
    };
    let m = p.probe_mass;
    let failure: Cell<Option<Error>> = Cell::new(None);

    let integrand = |w: f64| -> f64 {
        let spectra = match meter.checked_spectra(w) {
            Ok(s) => s,
            Err(e) => {
                failure.set(Some(e));
                return 0.0;
            }
        };
        let s_o = if channels.optical {
            HBAR * p.omega_o * p.energy / (p.arm_length * p.arm_length * p.tau_o_star * w * w)
        } else {
            0.0
        };
        let w4 = w.powi(4);
        let gap = nu6 - w4 * w * w;
        let denom = m * m * gap * gap * spectra.s_x
            + 2.0 * m * w4 * gap * spectra.s_xf
            + w4 * w4 * (spectra.s_f + s_m + s_o);
        if !(denom > 0.0) {
            failure.set(Some(Error::Model(format!(
                "SNR denominator is not positive at omega = {w:.6e} ({denom:.3e})"
            ))));
            return 0.0;
        }
        gain * w4 * w * w * template.spectrum(w).norm_sqr() / denom
    };

    let lo = p.omega_gr / BAND_RATIO;
    let hi = p.omega_gr * BAND_RATIO;
    let breaks = [nu, template.omega_gr, p.omega_gr];
    let tol = Tolerance {
        relative: SNR_RELATIVE_TOLERANCE,
        absolute: 0.0,
        max_intervals: 50_000,
    };
    let result = quad::integrate(integrand, lo, hi, &breaks, tol)?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(result.value / PI)
}

/// Template amplitude giving `snr = 1`. The SNR is quadratic in `h0`, so this
/// is `h0 / sqrt(snr(h0))`.
pub fn detection_threshold(
    p: &AntennaParams,
    meter: &MeterModel,
    template: &SignalTemplate,
) -> Result<f64> {
    detection_threshold_with(p, meter, template, NoiseChannels::default())
}

pub fn detection_threshold_with(
    p: &AntennaParams,
    meter: &MeterModel,
    template: &SignalTemplate,
    channels: NoiseChannels,
) -> Result<f64> {
    let unit = template.with_amplitude(1.0);
    let s = snr_with(p, meter, &unit, channels)?;
    Ok(1.0 / s.sqrt())
}

/// Thermal-noise limit of the probe mass in both algebraic forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MechanicalLimit {
    /// `(L omega_gr / (E omega_o)) sqrt(2 kappa T m / (tau_m* tau_gr))`.
    pub value: f64,
    /// Same limit written through nu: `(sqrt 2 / L)(omega_gr / nu^3) sqrt(2 kappa T / (tau_m* tau_gr M))`.
    pub via_nu: f64,
    /// The nu form exactly as printed, `2 (omega_gr / nu^3) sqrt(2 kappa T / (tau_m* tau_gr M))`.
    /// It carries units of length and equals `sqrt(2) L value`.
    pub via_nu_as_printed: f64,
}

pub fn h_mech_limit(p: &AntennaParams) -> MechanicalLimit {
    let thermal = 2.0 * BOLTZMANN * p.temperature;
    let value = p.arm_length * p.omega_gr / (p.energy * p.omega_o)
        * (thermal * p.probe_mass / (p.tau_m_star * p.tau_gr)).sqrt();
    let nu3 = characteristic_frequency(p).powi(3);
    let root = (thermal / (p.tau_m_star * p.tau_gr * p.mirror_mass)).sqrt();
    let via_nu_as_printed = 2.0 * p.omega_gr / nu3 * root;
    MechanicalLimit {
        value,
        via_nu: std::f64::consts::SQRT_2 / p.arm_length * p.omega_gr / nu3 * root,
        via_nu_as_printed,
    }
}

/// Optical-loss limit `sqrt(1 / (omega_o^2 tau_o* tau_gr N))`.
pub fn h_opt_limit(p: &AntennaParams) -> f64 {
    (1.0 / (p.omega_o * p.omega_o * p.tau_o_star * p.tau_gr * p.photon_number())).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlainMeterLimit {
    /// `sqrt 2 (omega_gr / nu)^3 h_SQL(M)`.
    pub h_meter: f64,
    /// `(L / (omega_o E)) sqrt(hbar m omega_gr^4 / tau_gr)`.
    pub h_meter_direct: f64,
    pub s_x: f64,
    pub s_f: f64,
}

pub fn h_meter_plain(p: &AntennaParams) -> PlainMeterLimit {
    let nu = characteristic_frequency(p);
    let (s_x, s_f) = plain_optimum_densities(p);
    PlainMeterLimit {
        h_meter: std::f64::consts::SQRT_2 * (p.omega_gr / nu).powi(3) * h_sql(p, p.mirror_mass),
        h_meter_direct: p.arm_length / (p.omega_o * p.energy)
            * (HBAR * p.probe_mass * p.omega_gr.powi(4) / p.tau_gr).sqrt(),
        s_x,
        s_f,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedMeterLimit {
    /// `sqrt 2 h_SQL(M)`.
    pub h_meter: f64,
    pub tuning: Option<Tuning>,
}

/// Speed-meter limit at optimal tuning; the tuning itself needs a stable antenna
/// and a transducer geometry.
pub fn h_meter_speed(
    p: &AntennaParams,
    geometry: Option<&TransducerGeometry>,
) -> Result<SpeedMeterLimit> {
    let tuning = geometry
        .map(|g| speed_meter::optimal_tuning(p, g))
        .transpose()?;
    Ok(SpeedMeterLimit {
        h_meter: std::f64::consts::SQRT_2 * h_sql(p, p.mirror_mass),
        tuning,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityResolution {
    pub delta_v_m: f64,
    /// `sqrt(hbar / (m tau_gr))`.
    pub delta_v_sql: f64,
    /// `(nu / omega_gr)^3`.
    pub ratio: f64,
}

pub fn velocity_resolution(p: &AntennaParams) -> VelocityResolution {
    let ratio = (characteristic_frequency(p) / p.omega_gr).powi(3);
    let delta_v_sql = (HBAR / (p.probe_mass * p.tau_gr)).sqrt();
    VelocityResolution {
        delta_v_m: ratio * delta_v_sql,
        delta_v_sql,
        ratio,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DissipationThresholds {
    /// Smallest tau_m* with `2 kappa T / tau_m* < hbar nu^6 / (4 omega_gr^4)`.
    pub tau_m_min: f64,
    /// Smallest tau_o* with `tau_o* > E_SQL / (E omega_gr)`.
    pub tau_o_min: f64,
}

pub fn dissipation_thresholds(p: &AntennaParams) -> DissipationThresholds {
    let nu6 = characteristic_frequency(p).powi(6);
    DissipationThresholds {
        tau_m_min: 8.0 * BOLTZMANN * p.temperature * p.omega_gr.powi(4) / (HBAR * nu6),
        tau_o_min: energy_sql(p) / (p.energy * p.omega_gr),
    }
}

/// Everything the readout budget reports for one parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseBudget {
    pub meter: &'static str,
    pub nu: f64,
    pub stable: bool,
    pub stability_margin: f64,
    pub h_mech: f64,
    pub h_opt: f64,
    pub h_meter: f64,
    /// `sqrt(h_meter^2 + h_mech^2 + h_opt^2)`.
    pub h_total: f64,
    pub delta_e: f64,
    pub e_sql: f64,
    pub h_sql_mirror: f64,
    pub h_sql_probe: f64,
    pub x_sql: f64,
    pub tau_m_min: f64,
    pub tau_o_min: f64,
    pub speed_tuning: Option<Tuning>,
    /// `None` when the beat frequency does not exceed the signal frequency.
    pub regime: Option<Regime>,
    pub snr: Option<f64>,
    /// Template amplitude with `snr = 1`.
    pub h_detect: Option<f64>,
}

/// Builds the budget. The meter limit is the closed-form optimum for plain and
/// speed meters; a custom meter is rated by its SNR threshold with losses off.
pub fn noise_budget(
    p: &AntennaParams,
    meter: &MeterModel,
    template: Option<&SignalTemplate>,
) -> Result<NoiseBudget> {
    p.validate()?;
    let stability = stability_check(p);
    let limits = quantum_limits(p);
    let h_mech = h_mech_limit(p).value;
    let h_opt = h_opt_limit(p);
    let mut speed_tuning = None;
    let h_meter = match meter {
        MeterModel::PlainCoordinate { .. } => h_meter_plain(p).h_meter,
        MeterModel::SpeedMeter(sm) => {
            let limit = h_meter_speed(p, Some(&sm.geometry())).ok();
            speed_tuning = limit.and_then(|l| l.tuning);
            std::f64::consts::SQRT_2 * h_sql(p, p.mirror_mass)
        }
        MeterModel::Custom(_) => {
            let t = template
                .copied()
                .unwrap_or_else(|| SignalTemplate::default_for(p.omega_gr));
            detection_threshold_with(
                p,
                meter,
                &t,
                NoiseChannels {
                    mechanical: false,
                    optical: false,
                },
            )?
        }
    };
    let h_total = (h_meter * h_meter + h_mech * h_mech + h_opt * h_opt).sqrt();
    let thresholds = dissipation_thresholds(p);
    let regime = regime::classify(p).ok().map(|r| r.regime);
    let (snr_value, h_detect) = match template {
        Some(t) => {
            let s = snr(p, meter, t)?;
            (Some(s), Some(detection_threshold(p, meter, t)?))
        }
        None => (None, None),
    };
    Ok(NoiseBudget {
        meter: meter.kind(),
        nu: stability.nu,
        stable: stability.stable,
        stability_margin: stability.margin,
        h_mech,
        h_opt,
        h_meter,
        h_total,
        delta_e: limits.delta_e,
        e_sql: limits.e_sql,
        h_sql_mirror: h_sql(p, p.mirror_mass),
        h_sql_probe: h_sql(p, p.probe_mass),
        x_sql: limits.x_sql,
        tau_m_min: thresholds.tau_m_min,
        tau_o_min: thresholds.tau_o_min,
        speed_tuning,
        regime,
        snr: snr_value,
        h_detect,
    })
}
