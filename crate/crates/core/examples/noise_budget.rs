//! Readout noise budget of the worked example with the optimal plain coordinate meter.

use qnd_antenna::noise::{noise_budget, MeterModel, SignalTemplate};
use qnd_antenna::params::AntennaParams;

fn main() -> qnd_antenna::Result<()> {
    let p = AntennaParams::worked_example();
    let template = SignalTemplate::rect_sine(1e-21, p.omega_gr, p.tau_gr);
    let b = noise_budget(&p, &MeterModel::plain_optimum(&p), Some(&template))?;

    println!(
        "nu               {:.4} rad/s (omega_gr/nu = {:.3}, stable = {})",
        b.nu, b.stability_margin, b.stable
    );
    println!("h_meter          {:.3e}", b.h_meter);
    println!("h_mech           {:.3e}", b.h_mech);
    println!("h_opt            {:.3e}", b.h_opt);
    println!("h_total          {:.3e}", b.h_total);
    println!("h_SQL(M)         {:.3e}", b.h_sql_mirror);
    println!("h_SQL(m)         {:.3e}", b.h_sql_probe);
    println!("delta_E          {:.3e} erg", b.delta_e);
    println!("E_SQL            {:.3e} erg", b.e_sql);
    println!("x_SQL            {:.3e} cm", b.x_sql);
    println!("tau_m* needed    {:.3e} s", b.tau_m_min);
    println!("tau_o* needed    {:.3e} s", b.tau_o_min);
    if let Some(regime) = b.regime {
        println!("regime           {}", regime.label());
    }
    if let (Some(snr), Some(h)) = (b.snr, b.h_detect) {
        println!("SNR at h0=1e-21  {snr:.3}");
        println!("h0 for SNR = 1   {h:.3e}");
    }
    Ok(())
}
