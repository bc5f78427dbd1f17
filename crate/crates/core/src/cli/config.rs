//! Flat `key = value` run configuration.
//!
//! One assignment per line, `#` starts a comment, every physical key carries
//! its CGS unit as a suffix. Unknown or repeated keys are rejected.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::noise::{default_duration, CustomTable, MeterModel, SignalTemplate, TemplateShape};
use crate::params::AntennaParams;
use crate::speed_meter::{optimal_tuning, SpeedMeterParams, TransducerGeometry};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Number,
    Integer,
    Text,
}

/// Every accepted key with its value kind.
const KEYS: &[(&str, Kind)] = &[
    ("L_cm", Kind::Number),
    ("M_g", Kind::Number),
    ("m_g", Kind::Number),
    ("omega_o_rad_s", Kind::Number),
    ("omega_gr_rad_s", Kind::Number),
    ("energy_erg", Kind::Number),
    ("tau_gr_s", Kind::Number),
    ("tau_o_star_s", Kind::Number),
    ("tau_m_star_s", Kind::Number),
    ("T_K", Kind::Number),
    ("Omega_rad_s", Kind::Number),
    ("meter", Kind::Text),
    ("meter_S_x_cm2_s", Kind::Number),
    ("meter_S_F_dyn2_s", Kind::Number),
    ("meter_table_path", Kind::Text),
    ("sm_omega_e_rad_s", Kind::Number),
    ("sm_W_e_erg_s", Kind::Number),
    ("sm_d_cm", Kind::Number),
    ("sm_Omega_e_rad_s", Kind::Number),
    ("sm_Phi_rad", Kind::Number),
    ("sm_tau_e_star_s", Kind::Number),
    ("sm_rho", Kind::Number),
    ("sm_q0", Kind::Number),
    ("sm_U0", Kind::Number),
    ("omega_rad_s", Kind::Number),
    ("template", Kind::Text),
    ("template_h0", Kind::Number),
    ("template_tau_s", Kind::Number),
    ("evolve_N", Kind::Integer),
    ("evolve_n", Kind::Integer),
    ("evolve_theta_rad", Kind::Number),
    ("evolve_dphi", Kind::Number),
];

/// Keys without a default.
pub const REQUIRED_ANTENNA_KEYS: [&str; 6] = [
    "L_cm",
    "M_g",
    "m_g",
    "omega_o_rad_s",
    "omega_gr_rad_s",
    "energy_erg",
];

const SPEED_METER_KEYS: [&str; 5] = [
    "sm_omega_e_rad_s",
    "sm_d_cm",
    "sm_Omega_e_rad_s",
    "sm_tau_e_star_s",
    "sm_rho",
];

pub const DEFAULT_TAU_O_STAR: f64 = 1.0;
pub const DEFAULT_TAU_M_STAR: f64 = 3e8;
pub const DEFAULT_TEMPERATURE: f64 = 4.0;
pub const DEFAULT_BEAT_FREQUENCY: f64 = 1e4;
pub const DEFAULT_TEMPLATE_H0: f64 = 1e-21;

fn kind_of(key: &str) -> Option<Kind> {
    KEYS.iter().find(|(k, _)| *k == key).map(|(_, kind)| *kind)
}

pub fn is_numeric_key(key: &str) -> bool {
    matches!(kind_of(key), Some(Kind::Number | Kind::Integer))
}

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Number(f64),
    Text(String),
}

/// Key/value pairs as read, before they are assembled into a [`RunConfig`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, (Value, usize)>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| Error::Parse {
                line,
                message: format!("expected `key = value`, got `{content}`"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            let kind = kind_of(key).ok_or_else(|| Error::Parse {
                line,
                message: format!("unknown key `{key}`"),
            })?;
            if value.is_empty() {
                return Err(Error::Parse {
                    line,
                    message: format!("missing value for `{key}`"),
                });
            }
            let parsed = match kind {
                Kind::Text => Value::Text(value.to_string()),
                Kind::Number | Kind::Integer => {
                    let x = value.parse::<f64>().map_err(|_| Error::Parse {
                        line,
                        message: format!("`{key}` expects a number, got `{value}`"),
                    })?;
                    Value::Number(x)
                }
            };
            if entries.insert(key.to_string(), (parsed, line)).is_some() {
                return Err(Error::Parse {
                    line,
                    message: format!("duplicate key `{key}`"),
                });
            }
        }
        Ok(RawConfig { entries })
    }

    /// Sets a numeric key, as a sweep does.
    pub fn set_number(&mut self, key: &str, value: f64) -> Result<()> {
        if !is_numeric_key(key) {
            return Err(Error::validation(
                "sweep",
                format!("`{key}` is not a numeric configuration key"),
            ));
        }
        self.entries
            .insert(key.to_string(), (Value::Number(value), 0));
        Ok(())
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn number(&self, key: &str) -> Option<f64> {
        match self.entries.get(key) {
            Some((Value::Number(x), _)) => Some(*x),
            _ => None,
        }
    }

    fn text(&self, key: &str) -> Option<&str> {
        match self.entries.get(key) {
            Some((Value::Text(s), _)) => Some(s),
            _ => None,
        }
    }

    fn integer(&self, key: &str) -> Result<Option<usize>> {
        match self.number(key) {
            None => Ok(None),
            Some(x) if x >= 0.0 && x.fract() == 0.0 && x <= u32::MAX as f64 => Ok(Some(x as usize)),
            Some(x) => Err(Error::validation(
                key,
                format!("must be a non-negative integer, got {x}"),
            )),
        }
    }

    fn positive(&self, key: &str) -> Result<Option<f64>> {
        match self.number(key) {
            None => Ok(None),
            Some(x) if x.is_finite() && x > 0.0 => Ok(Some(x)),
            Some(x) => Err(Error::validation(
                key,
                format!("must be finite and > 0, got {x}"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeterSelection {
    /// Plain meter; each density defaults to the optimum for the signal frequency.
    Plain {
        s_x: Option<f64>,
        s_f: Option<f64>,
    },
    Speed,
    Custom(CustomTable),
}

/// Speed-meter inputs; pump power and phase fall back to the optimal tuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedMeterSpec {
    pub geometry: TransducerGeometry,
    pub tau_e_star: f64,
    pub rho: f64,
    pub pump_power: Option<f64>,
    pub lo_phase: Option<f64>,
    pub mean_amplitude: Option<f64>,
    pub pump_voltage: Option<f64>,
}

impl SpeedMeterSpec {
    pub fn resolve(&self, antenna: &AntennaParams) -> Result<SpeedMeterParams> {
        let (pump_power, lo_phase) = match (self.pump_power, self.lo_phase) {
            (Some(w), Some(phi)) => (w, phi),
            (w, phi) => {
                let t = optimal_tuning(antenna, &self.geometry)?;
                (w.unwrap_or(t.pump_power), phi.unwrap_or(t.lo_phase))
            }
        };
        let sm = SpeedMeterParams {
            omega_e: self.geometry.omega_e,
            pump_power,
            tunability_length: self.geometry.tunability_length,
            beat_frequency: self.geometry.beat_frequency,
            lo_phase,
            tau_e_star: self.tau_e_star,
            rho: self.rho,
            mean_amplitude: self.mean_amplitude,
            pump_voltage: self.pump_voltage,
        };
        sm.validate()?;
        Ok(sm)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveSpec {
    pub total: usize,
    pub n: usize,
    pub theta: f64,
    pub delta_phi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Absent only for a configuration that holds nothing but `evolve_*` keys.
    pub antenna: Option<AntennaParams>,
    pub meter: MeterSelection,
    pub speed_meter: Option<SpeedMeterSpec>,
    /// Set when any `template*` key is present.
    pub template: Option<SignalTemplate>,
    pub evolve: Option<EvolveSpec>,
    /// Single evaluation frequency for frequency-resolved commands.
    pub omega: Option<f64>,
    pub warnings: Vec<String>,
}

impl RunConfig {
    pub fn antenna(&self) -> Result<&AntennaParams> {
        self.antenna
            .as_ref()
            .ok_or_else(|| missing_keys(&REQUIRED_ANTENNA_KEYS))
    }

    pub fn meter_model(&self) -> Result<MeterModel> {
        let p = self.antenna()?;
        match &self.meter {
            MeterSelection::Plain { s_x, s_f } => {
                let (ox, of) = crate::noise::plain_optimum_densities(p);
                match (s_x, s_f) {
                    (None, None) => Ok(MeterModel::plain_optimum(p)),
                    _ => MeterModel::plain(s_x.unwrap_or(ox), s_f.unwrap_or(of)),
                }
            }
            MeterSelection::Speed => Ok(MeterModel::SpeedMeter(self.speed_meter_params()?)),
            MeterSelection::Custom(t) => Ok(MeterModel::Custom(t.clone())),
        }
    }

    pub fn speed_meter_params(&self) -> Result<SpeedMeterParams> {
        let spec = self
            .speed_meter
            .as_ref()
            .ok_or_else(|| missing_keys(&SPEED_METER_KEYS))?;
        spec.resolve(self.antenna()?)
    }

    /// Configured template, or the default `RectSine` with `h0 = 1e-21` over `tau_gr`.
    pub fn template_or_default(&self) -> Result<SignalTemplate> {
        if let Some(t) = self.template {
            return Ok(t);
        }
        let p = self.antenna()?;
        Ok(SignalTemplate::rect_sine(
            DEFAULT_TEMPLATE_H0,
            p.omega_gr,
            p.tau_gr,
        ))
    }
}

fn missing_keys(keys: &[&str]) -> Error {
    Error::validation(
        keys[0],
        format!("missing required keys: {}", keys.join(", ")),
    )
}

/// Parses and validates a configuration file.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    build(&RawConfig::parse(text)?)
}

/// Assembles a validated [`RunConfig`] from raw key/value pairs.
pub fn build(raw: &RawConfig) -> Result<RunConfig> {
    let mut warnings = Vec::new();
    let evolve = build_evolve(raw)?;
    let has_antenna = REQUIRED_ANTENNA_KEYS.iter().any(|k| raw.contains(k));
    let antenna = if has_antenna || evolve.is_none() {
        let missing: Vec<&str> = REQUIRED_ANTENNA_KEYS
            .iter()
            .copied()
            .filter(|k| !raw.contains(k))
            .collect();
        if !missing.is_empty() {
            return Err(missing_keys(&missing));
        }
        let p = build_antenna(raw)?;
        warnings.extend(p.validate()?);
        Some(p)
    } else {
        None
    };

    let speed_meter = build_speed_meter(raw)?;
    let meter = match raw.text("meter").unwrap_or("plain") {
        "plain" => MeterSelection::Plain {
            s_x: raw.positive("meter_S_x_cm2_s")?,
            s_f: raw.positive("meter_S_F_dyn2_s")?,
        },
        "speed" => {
            if speed_meter.is_none() {
                return Err(missing_keys(&SPEED_METER_KEYS));
            }
            MeterSelection::Speed
        }
        "custom" => {
            let path = raw.text("meter_table_path").ok_or_else(|| {
                Error::validation("meter_table_path", "required when meter = custom")
            })?;
            let text =
                std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
            MeterSelection::Custom(CustomTable::parse_csv(&text)?)
        }
        other => {
            return Err(Error::validation(
                "meter",
                format!("must be one of plain, speed, custom; got `{other}`"),
            ))
        }
    };
    if let (Some(p), Some(sm)) = (&antenna, &speed_meter) {
        if let (Some(w), Some(phi)) = (sm.pump_power, sm.lo_phase) {
            let full = SpeedMeterSpec {
                pump_power: Some(w),
                lo_phase: Some(phi),
                ..*sm
            };
            warnings.extend(full.resolve(p)?.regime_warnings(p.omega_gr));
        }
    }

    let template = build_template(raw, antenna.as_ref())?;
    Ok(RunConfig {
        antenna,
        meter,
        speed_meter,
        template,
        evolve,
        omega: raw.positive("omega_rad_s")?,
        warnings,
    })
}

fn build_antenna(raw: &RawConfig) -> Result<AntennaParams> {
    let get = |k: &str| raw.number(k).expect("required key checked");
    let omega_gr = get("omega_gr_rad_s");
    Ok(AntennaParams {
        arm_length: get("L_cm"),
        mirror_mass: get("M_g"),
        probe_mass: get("m_g"),
        omega_o: get("omega_o_rad_s"),
        omega_gr,
        tau_gr: raw.number("tau_gr_s").unwrap_or(2.0 * PI * 5.0 / omega_gr),
        energy: get("energy_erg"),
        tau_o_star: raw.number("tau_o_star_s").unwrap_or(DEFAULT_TAU_O_STAR),
        tau_m_star: raw.number("tau_m_star_s").unwrap_or(DEFAULT_TAU_M_STAR),
        temperature: raw.number("T_K").unwrap_or(DEFAULT_TEMPERATURE),
        omega_beat: raw.number("Omega_rad_s").unwrap_or(DEFAULT_BEAT_FREQUENCY),
    })
}

fn build_speed_meter(raw: &RawConfig) -> Result<Option<SpeedMeterSpec>> {
    if !KEYS
        .iter()
        .any(|(k, _)| k.starts_with("sm_") && raw.contains(k))
    {
        return Ok(None);
    }
    let missing: Vec<&str> = SPEED_METER_KEYS
        .iter()
        .copied()
        .filter(|k| !raw.contains(k))
        .collect();
    if !missing.is_empty() {
        return Err(missing_keys(&missing));
    }
    let req = |k: &str| -> Result<f64> { Ok(raw.positive(k)?.expect("required key checked")) };
    let lo_phase = match raw.number("sm_Phi_rad") {
        Some(phi) if !phi.is_finite() || phi.sin().abs() < 1e-12 => {
            return Err(Error::validation("sm_Phi_rad", "sin(Phi) must be nonzero"))
        }
        other => other,
    };
    Ok(Some(SpeedMeterSpec {
        geometry: TransducerGeometry {
            tunability_length: req("sm_d_cm")?,
            beat_frequency: req("sm_Omega_e_rad_s")?,
            omega_e: req("sm_omega_e_rad_s")?,
        },
        tau_e_star: req("sm_tau_e_star_s")?,
        rho: req("sm_rho")?,
        pump_power: raw.positive("sm_W_e_erg_s")?,
        lo_phase,
        mean_amplitude: raw.positive("sm_q0")?,
        pump_voltage: raw.positive("sm_U0")?,
    }))
}

fn build_template(
    raw: &RawConfig,
    antenna: Option<&AntennaParams>,
) -> Result<Option<SignalTemplate>> {
    if !["template", "template_h0", "template_tau_s"]
        .iter()
        .any(|k| raw.contains(k))
    {
        return Ok(None);
    }
    let shape = match raw.text("template").unwrap_or("rect_sine") {
        "rect_sine" => TemplateShape::RectSine,
        "gaussian_sine" => TemplateShape::GaussianSine,
        other => {
            return Err(Error::validation(
                "template",
                format!("must be rect_sine or gaussian_sine, got `{other}`"),
            ))
        }
    };
    let p = antenna.ok_or_else(|| missing_keys(&REQUIRED_ANTENNA_KEYS))?;
    let h0 = match raw.number("template_h0") {
        Some(h) if h.is_finite() && h >= 0.0 => h,
        Some(h) => {
            return Err(Error::validation(
                "template_h0",
                format!("must be finite and >= 0, got {h}"),
            ))
        }
        None => DEFAULT_TEMPLATE_H0,
    };
    let tau = raw
        .positive("template_tau_s")?
        .unwrap_or(if raw.contains("tau_gr_s") {
            p.tau_gr
        } else {
            default_duration(p.omega_gr)
        });
    Ok(Some(SignalTemplate {
        shape,
        h0,
        omega_gr: p.omega_gr,
        tau_gr: tau,
    }))
}

fn build_evolve(raw: &RawConfig) -> Result<Option<EvolveSpec>> {
    let total = raw.integer("evolve_N")?;
    let n = raw.integer("evolve_n")?;
    match (total, n) {
        (None, None) => {
            if raw.contains("evolve_theta_rad") || raw.contains("evolve_dphi") {
                return Err(missing_keys(&["evolve_N", "evolve_n"]));
            }
            Ok(None)
        }
        (Some(total), Some(n)) => {
            if n > total {
                return Err(Error::validation(
                    "evolve_n",
                    format!("must be <= evolve_N = {total}, got {n}"),
                ));
            }
            let delta_phi = match raw.number("evolve_dphi") {
                Some(d) if !d.is_finite() => {
                    return Err(Error::validation("evolve_dphi", "must be finite"))
                }
                other => other,
            };
            Ok(Some(EvolveSpec {
                total,
                n,
                theta: raw.number("evolve_theta_rad").unwrap_or(0.0),
                delta_phi,
            }))
        }
        (None, Some(_)) => Err(missing_keys(&["evolve_N"])),
        (Some(_), None) => Err(missing_keys(&["evolve_n"])),
    }
}
