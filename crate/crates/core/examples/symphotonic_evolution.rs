//! Transition probability out of a symphotonic state under a differential phase
//! shift: exact sector evolution against the leading-order formula.
//!
//!     cargo run --example symphotonic_evolution -- 40 10

use qnd_antenna::symphotonic::{
    first_order_coefficient, transition_probability_exact, transition_probability_formula,
    PhaseShift, SymphotonicLabel,
};

fn main() -> qnd_antenna::Result<()> {
    let mut args = std::env::args().skip(1);
    let total: usize = args.next().map_or(40, |s| s.parse().expect("N"));
    let n: usize = args.next().map_or(10, |s| s.parse().expect("n"));
    let label = SymphotonicLabel::new(total, n, 0.0)?;

    println!(
        "|N={total}, n={n}>, weight N + 2n(N-n) = {}",
        label.transition_weight()
    );
    println!("\n   dphi        exact      formula   rel. gap  perturbative");
    for k in 0..7 {
        let dphi = 1e-4 * 10f64.powf(k as f64 / 2.0);
        let exact = transition_probability_exact(&label, PhaseShift::differential(dphi))?;
        let formula = transition_probability_formula(&label, dphi);
        let gap = (exact - formula.value).abs() / exact;
        println!(
            "{dphi:.2e}  {exact:.5e}  {:.5e}  {gap:.2e}  {}",
            formula.value, formula.perturbative
        );
    }
    if let Some(c) = first_order_coefficient(&label, 1e-3)? {
        println!("\nfirst-order amplitude coefficient at dphi = 1e-3: {c:.8}");
    }
    Ok(())
}
