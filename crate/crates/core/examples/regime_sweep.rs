//! Weak, intermediate and strong coupling regimes of the dual-resonator readout
//! as the pump energy grows.

use qnd_antenna::params::AntennaParams;
use qnd_antenna::regime::{classify, RegimeFormulas};

fn main() -> qnd_antenna::Result<()> {
    let base = AntennaParams::worked_example();
    let f = RegimeFormulas::new(&base);
    println!(
        "Theta^2 boundaries: weak < {:.3e}, strong >= {:.3e}; correlated split at {:.3e}",
        f.weak_boundary(),
        f.strong_boundary(),
        f.correlated_split()
    );
    println!("\n  energy_erg      Theta  regime        near   h_plain    h_speed    h_correlated");
    for k in 0..=14 {
        let p = base.with_energy(1e4 * 10f64.powf(k as f64 / 2.0));
        let r = classify(&p)?;
        let correlated = r
            .h_correlated
            .map_or("-".to_string(), |h| format!("{h:.3e}"));
        println!(
            "{:>12.3e}  {:>9.1}  {:<12}  {:<5}  {:.3e}  {:.3e}  {correlated}",
            p.energy,
            r.theta,
            r.regime.label(),
            r.near_boundary,
            r.h_plain,
            r.h_speed
        );
    }
    let r = classify(&base)?;
    println!(
        "\nh_SQL(m) {:.3e}, h_SQL(M) {:.3e}",
        r.h_sql_probe, r.h_sql_mirror
    );
    if let Some(e) = r.energy_required {
        println!("energy to reach h_SQL(M) through the strong regime: {e:.3e} erg");
    }
    Ok(())
}
