//! Detection threshold from the SNR integral as the pump energy grows, for both
//! signal templates, next to the closed-form meter limit.

use qnd_antenna::noise::{
    detection_threshold_with, h_meter_plain, MeterModel, NoiseChannels, SignalTemplate,
    TemplateShape,
};
use qnd_antenna::params::AntennaParams;

fn main() -> qnd_antenna::Result<()> {
    let meter_only = NoiseChannels {
        mechanical: false,
        optical: false,
    };
    println!("  energy_erg   closed form    rect_sine  gaussian_sine");
    let mut previous: Option<(f64, f64, f64)> = None;
    for k in 0..=5 {
        let p = AntennaParams::worked_example().with_energy(1e5 * 10f64.powf(k as f64 / 5.0));
        let meter = MeterModel::plain_optimum(&p);
        let rect = SignalTemplate::rect_sine(1.0, p.omega_gr, p.tau_gr);
        let gauss = SignalTemplate {
            shape: TemplateShape::GaussianSine,
            ..rect
        };
        let h_rect = detection_threshold_with(&p, &meter, &rect, meter_only)?;
        let h_gauss = detection_threshold_with(&p, &meter, &gauss, meter_only)?;
        println!(
            "{:>12.3e}  {:>11.4e}  {h_rect:>11.4e}  {h_gauss:>13.4e}",
            p.energy,
            h_meter_plain(&p).h_meter
        );
        if k == 5 {
            let (e0, r0, g0) = previous.unwrap();
            let slope = |a: f64, b: f64| (b / a).ln() / (p.energy / e0).ln();
            println!(
                "\nlog-log slope over the decade: rect_sine {:.3}, gaussian_sine {:.3}",
                slope(r0, h_rect),
                slope(g0, h_gauss)
            );
        }
        if k == 0 {
            previous = Some((p.energy, h_rect, h_gauss));
        }
    }
    Ok(())
}
