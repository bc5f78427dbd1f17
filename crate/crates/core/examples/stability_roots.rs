//! Roots of the closed-loop characteristic polynomial `p^6 + nu^6` across pump energies.

use qnd_antenna::dynamics::{
    characteristic_frequency, characteristic_roots, numerical_roots, stability_check,
};
use qnd_antenna::params::AntennaParams;

fn main() -> qnd_antenna::Result<()> {
    println!("  energy_erg     nu_rad_s  omega_gr/nu  stable  max Re p   solver gap");
    for exponent in 4..=9 {
        let p = AntennaParams::worked_example().with_energy(10f64.powi(exponent));
        let nu = characteristic_frequency(&p);
        let analytic = characteristic_roots(nu)?;
        let numeric = numerical_roots(nu)?;
        let gap = analytic
            .roots
            .iter()
            .map(|r| {
                numeric
                    .iter()
                    .map(|q| (r - q).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        let report = stability_check(&p);
        println!(
            "{:>12.3e}  {nu:>11.4}  {:>11.4}  {:>6}  {:>8.3}  {gap:.2e}",
            p.energy, report.margin, report.stable, analytic.max_real_part
        );
    }

    let p = AntennaParams::worked_example();
    println!("\nroots for the worked example:");
    for r in characteristic_roots(characteristic_frequency(&p))?.roots {
        println!("  {:>10.4} {:+10.4}i", r.re, r.im);
    }
    Ok(())
}
