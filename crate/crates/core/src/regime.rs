//! Pump-strength regimes of the coupled-resonator readout and the sensitivity
//! each meter type reaches in them.

use crate::error::{Error, Result};
use crate::noise::{energy_sql, h_sql};
use crate::params::AntennaParams;

/// Half-width of the band around each regime boundary flagged as near-boundary.
pub const BOUNDARY_BAND: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Weak,
    Intermediate,
    Strong,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::Weak => "weak",
            Regime::Intermediate => "intermediate",
            Regime::Strong => "strong",
        }
    }
}

/// `Theta = (2 omega_o E Omega / L^2 (1/m + 1/2M))^(1/4)`.
pub fn theta(p: &AntennaParams) -> f64 {
    let inertia = 1.0 / p.probe_mass + 0.5 / p.mirror_mass;
    (2.0 * p.omega_o * p.energy * p.omega_beat / (p.arm_length * p.arm_length) * inertia).powf(0.25)
}

/// `(h_SQL(m), h_SQL(M))`.
pub fn sql_pair(p: &AntennaParams) -> (f64, f64) {
    (h_sql(p, p.probe_mass), h_sql(p, p.mirror_mass))
}

/// The printed sensitivity expressions as functions of `Theta^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeFormulas {
    pub omega_gr: f64,
    pub omega_beat: f64,
    pub h_sql_probe: f64,
    pub h_sql_mirror: f64,
    pub e_sql: f64,
    /// `M / m`.
    pub mass_ratio: f64,
}

impl RegimeFormulas {
    pub fn new(p: &AntennaParams) -> Self {
        let (h_sql_probe, h_sql_mirror) = sql_pair(p);
        RegimeFormulas {
            omega_gr: p.omega_gr,
            omega_beat: p.omega_beat,
            h_sql_probe,
            h_sql_mirror,
            e_sql: energy_sql(p),
            mass_ratio: p.mirror_mass / p.probe_mass,
        }
    }

    fn factor(&self, theta2: f64) -> f64 {
        self.omega_gr * self.omega_beat / theta2
    }

    /// `Theta^2 = omega_gr Omega`.
    pub fn weak_boundary(&self) -> f64 {
        self.omega_gr * self.omega_beat
    }

    /// `Theta^2 = omega_gr Omega sqrt(2M/m)`.
    pub fn strong_boundary(&self) -> f64 {
        self.weak_boundary() * (2.0 * self.mass_ratio).sqrt()
    }

    /// `Theta^2 = omega_gr Omega (2M/m)^(1/4)`, where the correlated meter switches branch.
    pub fn correlated_split(&self) -> f64 {
        self.weak_boundary() * (2.0 * self.mass_ratio).powf(0.25)
    }

    pub fn classify(&self, theta2: f64) -> Regime {
        if theta2 < self.weak_boundary() {
            Regime::Weak
        } else if theta2 >= self.strong_boundary() {
            Regime::Strong
        } else {
            Regime::Intermediate
        }
    }

    pub fn near_boundary(&self, theta2: f64) -> bool {
        [self.weak_boundary(), self.strong_boundary()]
            .iter()
            .any(|b| (theta2 / b - 1.0).abs() <= BOUNDARY_BAND)
    }

    /// `(omega_gr Omega / Theta^2)^2 h_SQL(m)`.
    pub fn weak_plain(&self, theta2: f64) -> f64 {
        self.factor(theta2).powi(2) * self.h_sql_probe
    }

    /// `(omega_gr Omega / Theta^2) h_SQL(m)`.
    pub fn weak_speed(&self, theta2: f64) -> f64 {
        self.factor(theta2) * self.h_sql_probe
    }

    /// `(omega_gr Omega / Theta^2) h_SQL(m)`.
    pub fn intermediate_plain(&self, theta2: f64) -> f64 {
        self.factor(theta2) * self.h_sql_probe
    }

    /// Lower correlated branch, `(omega_gr Omega / Theta^2)^2 h_SQL(m)`.
    pub fn correlated_low(&self, theta2: f64) -> f64 {
        self.factor(theta2).powi(2) * self.h_sql_probe
    }

    /// Upper correlated branch, `h_SQL(M)`.
    pub fn correlated_high(&self) -> f64 {
        self.h_sql_mirror
    }

    pub fn correlated(&self, theta2: f64) -> f64 {
        if theta2 < self.correlated_split() {
            self.correlated_low(theta2)
        } else {
            self.correlated_high()
        }
    }

    /// `(omega_gr Omega / Theta^2) h_SQL(m)`.
    pub fn strong_speed(&self, theta2: f64) -> f64 {
        self.factor(theta2) * self.h_sql_probe
    }

    /// `sqrt(E_SQL Omega / (E omega_gr)) h_SQL(M)`.
    pub fn strong_speed_from_energy(&self, energy: f64) -> f64 {
        (self.e_sql * self.omega_beat / (energy * self.omega_gr)).sqrt() * self.h_sql_mirror
    }

    /// `(Omega / omega_gr) E_SQL`.
    pub fn energy_required(&self) -> f64 {
        self.omega_beat / self.omega_gr * self.e_sql
    }

    /// `(8m/M)^(1/8) E_SQL`.
    pub fn correlated_energy_bound(&self) -> f64 {
        (8.0 / self.mass_ratio).powf(0.125) * self.e_sql
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeReport {
    pub theta: f64,
    pub regime: Regime,
    /// Theta^2 within 10% of a regime boundary.
    pub near_boundary: bool,
    pub h_plain: f64,
    pub h_speed: f64,
    /// Only defined in the intermediate regime.
    pub h_correlated: Option<f64>,
    /// Only defined in the intermediate regime.
    pub energy_required: Option<f64>,
    /// Only defined in the intermediate regime.
    pub correlated_energy_bound: Option<f64>,
    /// `Theta^2 >= Omega^2 / 4`.
    pub bar_instability: bool,
    pub h_sql_probe: f64,
    pub h_sql_mirror: f64,
}

pub fn classify(p: &AntennaParams) -> Result<RegimeReport> {
    if p.omega_gr >= p.omega_beat {
        return Err(Error::UnsupportedRegime(format!(
            "omega_gr = {:.6e} >= Omega = {:.6e}: only beat frequencies above the signal frequency are modelled",
            p.omega_gr, p.omega_beat
        )));
    }
    let f = RegimeFormulas::new(p);
    let th = theta(p);
    let t2 = th * th;
    let regime = f.classify(t2);
    let (h_plain, h_speed, h_correlated, energy_required, bound) = match regime {
        Regime::Weak => (f.weak_plain(t2), f.weak_speed(t2), None, None, None),
        Regime::Intermediate => {
            // the speed meter brings no gain over the plain meter here
            let h = f.intermediate_plain(t2);
            (
                h,
                h,
                Some(f.correlated(t2)),
                Some(f.energy_required()),
                Some(f.correlated_energy_bound()),
            )
        }
        Regime::Strong => (f.h_sql_mirror, f.strong_speed(t2), None, None, None),
    };
    Ok(RegimeReport {
        theta: th,
        regime,
        near_boundary: f.near_boundary(t2),
        h_plain,
        h_speed,
        h_correlated,
        energy_required,
        correlated_energy_bound: bound,
        bar_instability: t2 >= 0.25 * p.omega_beat * p.omega_beat,
        h_sql_probe: f.h_sql_probe,
        h_sql_mirror: f.h_sql_mirror,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ligo() -> AntennaParams {
        AntennaParams::worked_example()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a / b - 1.0).abs()
    }

    /// Energy giving the requested Theta^2 with everything else fixed.
    fn energy_for(p: &AntennaParams, theta2: f64) -> f64 {
        let inertia = 1.0 / p.probe_mass + 0.5 / p.mirror_mass;
        theta2 * theta2 * p.arm_length * p.arm_length / (2.0 * p.omega_o * p.omega_beat * inertia)
    }

    #[test]
    fn theta_worked_example() {
        let t = theta(&ligo());
        let direct = (2.0 * 2e15 * 1e6 * 1e4 / 1.6e11 * (1.0 + 5e-5f64)).powf(0.25);
        assert!(rel(t, direct) < 1e-14);
        assert!((t - 3.98e3).abs() < 0.01e3);
        let t16 = theta(&ligo().with_energy(1.6e7));
        assert!(rel(t16, 2.0 * t) < 1e-14);

        let p = ligo();
        let light = (2.0 * p.omega_o * p.energy * p.omega_beat
            / (p.arm_length.powi(2) * p.probe_mass))
            .powf(0.25);
        assert!(
            (t.powi(4) / light.powi(4) - 1.0).abs() <= p.probe_mass / (2.0 * p.mirror_mass) + 1e-12
        );
    }

    #[test]
    fn sql_pair_examples() {
        let p = ligo();
        let (small, big) = sql_pair(&p);
        assert!(rel(small / big, 100.0) < 1e-12);
        assert!((big - 8.12e-24).abs() < 0.01e-24, "{big}");
        let mut long = p;
        long.tau_gr *= 4.0;
        let (s4, b4) = sql_pair(&long);
        assert!(rel(s4, 0.5 * small) < 1e-14 && rel(b4, 0.5 * big) < 1e-14);
    }

    #[test]
    fn weak_boundary_continuity() {
        let f = RegimeFormulas::new(&ligo());
        let b = f.weak_boundary();
        assert!(rel(f.weak_speed(b), f.intermediate_plain(b)) < 1e-10);
        assert!(rel(f.weak_speed(b), f.h_sql_probe) < 1e-12);
    }

    #[test]
    fn strong_speed_at_required_energy() {
        let f = RegimeFormulas::new(&ligo());
        assert!(
            rel(
                f.strong_speed_from_energy(f.energy_required()),
                f.h_sql_mirror
            ) < 1e-12
        );
    }

    #[test]
    fn strong_speed_forms_differ_by_sqrt2() {
        // the Theta form and the energy form of h_speed are not the same expression
        let p = ligo().with_energy(1e10);
        let f = RegimeFormulas::new(&p);
        let t2 = theta(&p).powi(2);
        let ratio = f.strong_speed_from_energy(p.energy) / f.strong_speed(t2);
        let want = (2.0 * (1.0 + p.probe_mass / (2.0 * p.mirror_mass))).sqrt();
        assert!(rel(ratio, want) < 1e-12, "{ratio}");
    }

    #[test]
    fn intermediate_plain_at_strong_boundary() {
        // the printed expression lands on h_SQL(M) / sqrt 2, not h_SQL(M)
        let f = RegimeFormulas::new(&ligo());
        let b = f.strong_boundary() * (1.0 - 1e-12);
        let want = f.h_sql_mirror / std::f64::consts::SQRT_2;
        assert!(rel(f.intermediate_plain(b), want) < 1e-9);
    }

    #[test]
    fn weak_regime_ordering() {
        let f = RegimeFormulas::new(&ligo());
        for i in 0..60 {
            let t2 = f.weak_boundary() * 10f64.powf(-6.0 + 6.0 * i as f64 / 60.0);
            assert!(f.weak_plain(t2) >= f.weak_speed(t2));
            assert!(f.weak_speed(t2) >= f.h_sql_probe);
        }
    }

    #[test]
    fn classification_of_worked_example() {
        let p = ligo();
        let r = classify(&p).unwrap();
        // Theta^2 = 1.58e7 sits between 1e7 and 1e7 sqrt(2e4)
        assert_eq!(r.regime, Regime::Intermediate);
        assert!(r.h_correlated.is_some() && r.energy_required.is_some());
        assert!(!r.bar_instability);

        let mut strong = p;
        strong.energy = energy_for(&p, 2.0 * RegimeFormulas::new(&p).strong_boundary());
        let s = classify(&strong).unwrap();
        assert_eq!(s.regime, Regime::Strong);
        assert_eq!(s.h_plain, s.h_sql_mirror);
        assert!(s.bar_instability);

        let weak = classify(&p.with_energy(1e4)).unwrap();
        assert_eq!(weak.regime, Regime::Weak);
        assert!(weak.h_correlated.is_none());
    }

    #[test]
    fn near_boundary_flag() {
        let p = ligo();
        let f = RegimeFormulas::new(&p);
        let near = p.with_energy(energy_for(&p, 1.05 * f.weak_boundary()));
        assert!(classify(&near).unwrap().near_boundary);
        let far = p.with_energy(energy_for(&p, 3.0 * f.weak_boundary()));
        assert!(!classify(&far).unwrap().near_boundary);
    }

    #[test]
    fn unsupported_when_signal_above_beat() {
        let mut p = ligo();
        p.omega_beat = p.omega_gr;
        assert!(matches!(classify(&p), Err(Error::UnsupportedRegime(_))));
    }

    proptest! {
        #[test]
        fn partition_is_total_and_exclusive(log_t2 in -2.0f64..14.0) {
            let f = RegimeFormulas::new(&ligo());
            let t2 = 10f64.powf(log_t2);
            let weak = t2 < f.weak_boundary();
            let strong = t2 >= f.strong_boundary();
            let inter = !weak && !strong;
            prop_assert_eq!([weak, inter, strong].iter().filter(|b| **b).count(), 1);
            let want = if weak { Regime::Weak } else if strong { Regime::Strong } else { Regime::Intermediate };
            prop_assert_eq!(f.classify(t2), want);
        }

        #[test]
        fn reported_values_positive(log_e in 2.0f64..12.0) {
            let r = classify(&ligo().with_energy(10f64.powf(log_e))).unwrap();
            prop_assert!(r.h_plain > 0.0 && r.h_speed > 0.0);
            if let Some(h) = r.h_correlated {
                prop_assert!(h > 0.0);
            }
        }
    }
}
