//! Command dispatch: each command turns a validated configuration into a [`Report`].

use crate::dynamics::characteristic_roots;
use crate::error::{Error, Result};
use crate::noise::{self, noise_budget, NoiseChannels};
use crate::regime;
use crate::speed_meter::{self, optimal_tuning};
use crate::symphotonic::{
    transition_probability_exact, transition_probability_formula, PhaseShift, SymphotonicLabel,
};

use super::config::{build, RawConfig, RunConfig};
use super::format::{Cell, Format, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Budget,
    Snr,
    Stability,
    Regime,
    Evolve,
    Speedmeter,
}

impl std::str::FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "budget" => Command::Budget,
            "snr" => Command::Snr,
            "stability" => Command::Stability,
            "regime" => Command::Regime,
            "evolve" => Command::Evolve,
            "speedmeter" => Command::Speedmeter,
            other => {
                return Err(Error::validation(
                    "command",
                    format!(
                    "must be budget, snr, stability, regime, evolve or speedmeter; got `{other}`"
                ),
                ))
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// `key:start:stop:points:log|lin`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub key: String,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl std::str::FromStr for Sweep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 5 {
            return Err(Error::validation(
                "sweep",
                "expected key:start:stop:points:log|lin",
            ));
        }
        let number = |v: &str, what: &str| {
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| {
                    Error::validation(
                        "sweep",
                        format!("{what} must be a finite number, got `{v}`"),
                    )
                })
        };
        let start = number(parts[1], "start")?;
        let stop = number(parts[2], "stop")?;
        let points: usize = parts[3].parse().ok().filter(|&n| n >= 1).ok_or_else(|| {
            Error::validation(
                "sweep",
                format!("points must be an integer >= 1, got `{}`", parts[3]),
            )
        })?;
        let spacing = match parts[4] {
            "lin" => Spacing::Linear,
            "log" => Spacing::Log,
            other => {
                return Err(Error::validation(
                    "sweep",
                    format!("spacing must be log or lin, got `{other}`"),
                ))
            }
        };
        if spacing == Spacing::Log && (start <= 0.0 || stop <= 0.0) {
            return Err(Error::validation(
                "sweep",
                "log spacing needs start and stop > 0",
            ));
        }
        if !super::config::is_numeric_key(parts[0]) {
            return Err(Error::validation(
                "sweep",
                format!("`{}` is not a numeric configuration key", parts[0]),
            ));
        }
        Ok(Sweep {
            key: parts[0].to_string(),
            start,
            stop,
            points,
            spacing,
        })
    }
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        grid(self.start, self.stop, self.points, self.spacing)
    }
}

/// `points` values from `start` to `stop`, endpoints exact.
pub fn grid(start: f64, stop: f64, points: usize, spacing: Spacing) -> Vec<f64> {
    if points == 1 {
        return vec![start];
    }
    (0..points)
        .map(|i| {
            if i == 0 {
                return start;
            }
            if i == points - 1 {
                return stop;
            }
            let t = i as f64 / (points - 1) as f64;
            match spacing {
                Spacing::Linear => start + t * (stop - start),
                Spacing::Log => (start.ln() + t * (stop.ln() - start.ln())).exp(),
            }
        })
        .collect()
}

/// Parses `config_text`, applies the sweep and renders the command output.
pub fn execute(
    config_text: &str,
    command: Command,
    sweep: Option<&Sweep>,
    format: Format,
) -> Result<String> {
    let raw = RawConfig::parse(config_text)?;
    let report = match sweep {
        None => run_command(&build(&raw)?, command)?,
        Some(s) => {
            let mut all: Option<Report> = None;
            for v in s.values() {
                let mut swept = raw.clone();
                swept.set_number(&s.key, v)?;
                let mut r = run_command(&build(&swept)?, command)?;
                if r.columns[0] != s.key {
                    r.prepend_column(&s.key, Cell::Number(v));
                }
                match all.as_mut() {
                    Some(acc) => acc.extend(r),
                    None => all = Some(r),
                }
            }
            all.expect("sweep has at least one point")
        }
    };
    Ok(report.render(format))
}

pub fn run_command(config: &RunConfig, command: Command) -> Result<Report> {
    match command {
        Command::Budget => budget(config),
        Command::Snr => snr(config),
        Command::Stability => stability(config),
        Command::Regime => regime_report(config),
        Command::Evolve => evolve(config),
        Command::Speedmeter => speedmeter(config),
    }
}

fn budget(config: &RunConfig) -> Result<Report> {
    let p = config.antenna()?;
    let meter = config.meter_model()?;
    let b = noise_budget(p, &meter, config.template.as_ref())?;
    Ok(Report::single(vec![
        ("energy_erg", p.energy.into()),
        ("nu_rad_s", b.nu.into()),
        ("stable", b.stable.into()),
        ("stability_margin", b.stability_margin.into()),
        ("meter", b.meter.into()),
        ("h_meter", b.h_meter.into()),
        ("h_mech", b.h_mech.into()),
        ("h_opt", b.h_opt.into()),
        ("h_total", b.h_total.into()),
        ("delta_E_erg", b.delta_e.into()),
        ("E_SQL_erg", b.e_sql.into()),
        ("h_SQL_M", b.h_sql_mirror.into()),
        ("h_SQL_m", b.h_sql_probe.into()),
        ("x_SQL_cm", b.x_sql.into()),
        ("tau_m_min_s", b.tau_m_min.into()),
        ("tau_o_min_s", b.tau_o_min.into()),
        (
            "regime",
            b.regime.map_or(Cell::Missing, |r| r.label().into()),
        ),
        ("snr", b.snr.into()),
        ("h0_unit_snr", b.h_detect.into()),
    ]))
}

fn snr(config: &RunConfig) -> Result<Report> {
    let p = config.antenna()?;
    let meter = config.meter_model()?;
    let t = config.template_or_default()?;
    let value = noise::snr(p, &meter, &t)?;
    let h0 = noise::detection_threshold(p, &meter, &t)?;
    let meter_only = noise::detection_threshold_with(
        p,
        &meter,
        &t,
        NoiseChannels {
            mechanical: false,
            optical: false,
        },
    )?;
    Ok(Report::single(vec![
        ("energy_erg", p.energy.into()),
        ("meter", meter.kind().into()),
        ("template_h0", t.h0.into()),
        ("template_tau_s", t.tau_gr.into()),
        ("snr", value.into()),
        ("h0_unit_snr", h0.into()),
        ("h0_unit_snr_meter_only", meter_only.into()),
        ("h_meter_plain", noise::h_meter_plain(p).h_meter.into()),
    ]))
}

fn stability(config: &RunConfig) -> Result<Report> {
    let p = config.antenna()?;
    let s = crate::dynamics::stability_check(p);
    let roots = characteristic_roots(s.nu)?;
    let mut pairs: Vec<(String, Cell)> = vec![
        ("energy_erg".into(), p.energy.into()),
        ("nu_rad_s".into(), s.nu.into()),
        ("stable".into(), s.stable.into()),
        ("stability_margin".into(), s.margin.into()),
        ("max_real_part_rad_s".into(), roots.max_real_part.into()),
    ];
    for (k, r) in roots.roots.iter().enumerate() {
        pairs.push((format!("root{}_re", k + 1), r.re.into()));
        pairs.push((format!("root{}_im", k + 1), r.im.into()));
    }
    let (columns, row) = pairs.into_iter().unzip();
    Ok(Report {
        columns,
        rows: vec![row],
    })
}

fn regime_report(config: &RunConfig) -> Result<Report> {
    let p = config.antenna()?;
    let r = regime::classify(p)?;
    Ok(Report::single(vec![
        ("energy_erg", p.energy.into()),
        ("theta_rad_s", r.theta.into()),
        ("regime", r.regime.label().into()),
        ("near_boundary", r.near_boundary.into()),
        ("h_plain", r.h_plain.into()),
        ("h_speed", r.h_speed.into()),
        ("h_correlated", r.h_correlated.into()),
        ("energy_required_erg", r.energy_required.into()),
        (
            "correlated_energy_bound_erg",
            r.correlated_energy_bound.into(),
        ),
        ("bar_instability", r.bar_instability.into()),
        ("h_SQL_m", r.h_sql_probe.into()),
        ("h_SQL_M", r.h_sql_mirror.into()),
    ]))
}

/// Default phase grid for `evolve`: 1e-3 to 1e-1, two points per decade.
const EVOLVE_GRID: (f64, f64, usize) = (1e-3, 1e-1, 5);

fn evolve(config: &RunConfig) -> Result<Report> {
    let spec = config.evolve.ok_or_else(|| {
        Error::validation("evolve_N", "missing required keys: evolve_N, evolve_n")
    })?;
    let label = SymphotonicLabel::new(spec.total, spec.n, spec.theta)?;
    let phases = match spec.delta_phi {
        Some(d) => vec![d],
        None => grid(EVOLVE_GRID.0, EVOLVE_GRID.1, EVOLVE_GRID.2, Spacing::Log),
    };
    let mut report = Report::new(&[
        "evolve_dphi",
        "N",
        "n",
        "theta_rad",
        "p_exact",
        "p_formula",
        "ratio",
        "perturbative",
    ]);
    for d in phases {
        let exact = transition_probability_exact(&label, PhaseShift::differential(d))?;
        let formula = transition_probability_formula(&label, d);
        let ratio = if formula.value > 0.0 {
            Cell::Number(exact / formula.value)
        } else {
            Cell::Missing
        };
        report.push(vec![
            d.into(),
            Cell::Integer(spec.total as i64),
            Cell::Integer(spec.n as i64),
            spec.theta.into(),
            exact.into(),
            formula.value.into(),
            ratio,
            formula.perturbative.into(),
        ]);
    }
    Ok(report)
}

/// Default frequency grid for `speedmeter`: a decade below the signal frequency.
const SPEEDMETER_POINTS: usize = 11;

fn speedmeter(config: &RunConfig) -> Result<Report> {
    let p = config.antenna()?;
    let spec = config
        .speed_meter
        .ok_or_else(|| Error::validation("sm_omega_e_rad_s", "speedmeter needs the sm_* keys"))?;
    let sm = spec.resolve(p)?;
    let tuning = optimal_tuning(p, &spec.geometry)?;
    let limit = noise::h_meter_speed(p, None)?;
    let h_sql_mirror = noise::h_sql(p, p.mirror_mass);
    let omegas = match config.omega {
        Some(w) => vec![w],
        None => grid(
            p.omega_gr / 10.0,
            p.omega_gr,
            SPEEDMETER_POINTS,
            Spacing::Log,
        ),
    };
    let mut report = Report::new(&[
        "omega_rad_s",
        "S_x_cm2_s",
        "S_F_dyn2_s",
        "S_xF_erg_s",
        "uncertainty_over_bound",
        "W_e_erg_s",
        "Phi_rad",
        "W_e_opt_erg_s",
        "cot_Phi_opt",
        "h_meter",
        "h_SQL_M",
        "S_U_fluct",
    ]);
    for w in omegas {
        let s = speed_meter::noise_spectra(&sm, w)?;
        report.push(vec![
            w.into(),
            s.s_x.into(),
            s.s_f.into(),
            s.s_xf.into(),
            (s.uncertainty_product() / noise::HEISENBERG_BOUND).into(),
            sm.pump_power.into(),
            sm.lo_phase.into(),
            tuning.pump_power.into(),
            tuning.cot_phase.into(),
            limit.h_meter.into(),
            h_sql_mirror.into(),
            sm.fluctuation_density().into(),
        ]);
    }
    Ok(report)
}

/// 2 for input errors, 3 for physics-domain errors.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse { .. } | Error::Validation { .. } | Error::Io(_) => 2,
        _ => 3,
    }
}

/// `error: kind=<kind> message="<text>"` on one line.
pub fn error_line(err: &Error) -> String {
    let message = serde_json::to_string(&err.to_string()).expect("strings serialize");
    format!("error: kind={} message={message}", err.kind())
}
