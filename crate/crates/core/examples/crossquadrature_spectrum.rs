//! Spectrum of the crossquadrature observable in one photon-number sector.
//!
//!     cargo run --example crossquadrature_spectrum -- 6 0.4

use num_complex::Complex64;
use qnd_antenna::fock::{commutator_norm, crossquadrature_operator, total_number_operator};
use qnd_antenna::symphotonic::{symphotonic_state, SymphotonicLabel};

fn main() -> qnd_antenna::Result<()> {
    let mut args = std::env::args().skip(1);
    let total: usize = args.next().map_or(6, |s| s.parse().expect("N"));
    let theta: f64 = args.next().map_or(0.4, |s| s.parse().expect("theta"));

    let op = crossquadrature_operator(total, theta);
    println!("N = {total}, theta = {theta}");
    println!("hermiticity defect      {:.3e}", op.hermiticity_defect());
    println!(
        "[X_theta, N_total] norm  {:.3e}",
        commutator_norm(&op, &total_number_operator(total))?
    );

    let eigenvalues = op.hermitian_eigenvalues()?;
    println!("\n  n  eigenvalue (2n-N)  numerical     residual");
    for n in 0..=total {
        let label = SymphotonicLabel::new(total, n, theta)?;
        let state = symphotonic_state(&label)?;
        let image = op.apply(&state)?;
        let residual = (image - state.amplitudes() * Complex64::from(label.eigenvalue())).norm();
        let nearest = eigenvalues
            .iter()
            .copied()
            .min_by(|a, b| {
                (a - label.eigenvalue())
                    .abs()
                    .total_cmp(&(b - label.eigenvalue()).abs())
            })
            .unwrap();
        println!(
            "{n:>3}  {:>17.1}  {nearest:>10.6}  {residual:.2e}",
            label.eigenvalue()
        );
    }
    Ok(())
}
