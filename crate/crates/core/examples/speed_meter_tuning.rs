//! Optimal tuning of the microwave speed meter and its noise spectra below the
//! signal frequency.

use qnd_antenna::constants::HBAR;
use qnd_antenna::noise::{h_meter_speed, h_sql};
use qnd_antenna::params::AntennaParams;
use qnd_antenna::speed_meter::{
    exact_noise_spectra, noise_spectra, optimal_tuning, SpeedMeterParams, TransducerGeometry,
};

fn main() -> qnd_antenna::Result<()> {
    let p = AntennaParams::worked_example();
    let geometry = TransducerGeometry {
        tunability_length: 1.0,
        beat_frequency: 3e3,
        omega_e: 4.3e10,
    };
    let tuning = optimal_tuning(&p, &geometry)?;
    println!("W_e optimum      {:.4e} erg/s", tuning.pump_power);
    println!(
        "Phi optimum      {:.6} rad (cot = {:.3})",
        tuning.lo_phase, tuning.cot_phase
    );

    let limit = h_meter_speed(&p, Some(&geometry))?;
    println!("h_meter          {:.4e}", limit.h_meter);
    println!("h_SQL(M)         {:.4e}", h_sql(&p, p.mirror_mass));

    let sm = SpeedMeterParams {
        omega_e: geometry.omega_e,
        pump_power: tuning.pump_power,
        tunability_length: geometry.tunability_length,
        beat_frequency: geometry.beat_frequency,
        lo_phase: tuning.lo_phase,
        tau_e_star: 1e-3,
        rho: 30.0,
        mean_amplitude: None,
        pump_voltage: None,
    };
    sm.validate()?;
    println!("\n   omega         S_x         S_F        S_xF  uncert/bound  exact/approx S_x");
    for k in 0..=4 {
        let w = p.omega_gr * 10f64.powf(-1.0 + k as f64 / 4.0);
        let s = noise_spectra(&sm, w)?;
        let exact = exact_noise_spectra(&sm, w)?;
        println!(
            "{w:>8.2}  {:.4e}  {:.4e}  {:>10.3e}  {:>12.6}  {:>16.6}",
            s.s_x,
            s.s_f,
            s.s_xf,
            s.uncertainty_product() / (HBAR * HBAR / 4.0),
            exact.s_x / s.s_x
        );
    }
    Ok(())
}
