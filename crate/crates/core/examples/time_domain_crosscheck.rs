//! Integrates the equations of motion directly and compares the steady-state
//! amplitudes with the frequency-domain transfer functions.

use num_complex::Complex64;
use qnd_antenna::dynamics::{characteristic_frequency, signal_transfer};
use qnd_antenna::params::AntennaParams;
use qnd_antenna::speed_meter::{output_signal_spectrum, SpeedMeterParams};
use qnd_antenna::timedomain::{optomechanical_response, speed_meter_response};

fn main() -> qnd_antenna::Result<()> {
    let p = AntennaParams::worked_example();
    let nu = characteristic_frequency(&p);
    let h0 = 1e-21;
    println!("probe displacement for h0 = {h0:e}");
    println!("   omega     transfer fn   time domain   rel. gap");
    for w in [0.3 * nu, 0.8 * nu, 1.5 * nu, 4.0 * nu] {
        let freq = signal_transfer(&p, w, Complex64::new(h0, 0.0))?.norm();
        let time = optomechanical_response(&p, w, h0)?;
        println!(
            "{w:>8.2}  {freq:>12.5e}  {:>12.5e}  {:.2e}",
            time.amplitude,
            (time.amplitude / freq - 1.0).abs()
        );
    }

    let sm = SpeedMeterParams {
        omega_e: 4.3e10,
        pump_power: 3e4,
        tunability_length: 1.0,
        beat_frequency: 3e3,
        lo_phase: 2.0,
        tau_e_star: 1e-3,
        rho: 30.0,
        mean_amplitude: None,
        pump_voltage: None,
    };
    let x0 = 1e-18;
    println!("\nspeed meter output for x0 = {x0:e} cm");
    println!("   omega     transfer fn   time domain   rel. gap");
    for w in [150.0, 1e3, 3e3, 1e4] {
        let freq = output_signal_spectrum(&sm, Complex64::new(x0, 0.0), w)?.norm();
        let time = speed_meter_response(&sm, w, x0)?;
        println!(
            "{w:>8.1}  {freq:>12.5e}  {:>12.5e}  {:.2e}",
            time.amplitude,
            (time.amplitude / freq - 1.0).abs()
        );
    }
    Ok(())
}
