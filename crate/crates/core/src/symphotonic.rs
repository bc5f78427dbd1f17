//! Symphotonic states: joint eigenstates of the crossquadrature operator and the
//! total photon number, and their response to a differential phase shift.
//!
//! The state `|N, n>` is built from the collective creation operators
//! `A† = a1† + a2† e^{-i theta}` and `B† = a1† - a2† e^{-i theta}` as
//! `(A†)^n (B†)^(N-n) |0> / sqrt(2^N n! (N-n)!)`, with eigenvalue `2n - N`.

use std::collections::BTreeMap;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{SectorBasis, SectorOperator, TwoModeState};

/// Largest total photon number for which states are built explicitly.
pub const MAX_EXACT_TOTAL: usize = 40;

/// Transition probabilities above this value are outside the small-shift expansion.
pub const PERTURBATIVE_LIMIT: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymphotonicLabel {
    total: usize,
    n: usize,
    theta: f64,
}

impl SymphotonicLabel {
    pub fn new(total: usize, n: usize, theta: f64) -> Result<Self> {
        if n > total {
            return Err(Error::Domain(format!("label n={n} exceeds N={total}")));
        }
        Ok(SymphotonicLabel { total, n, theta })
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Crossquadrature eigenvalue `2n - N`.
    pub fn eigenvalue(&self) -> f64 {
        2.0 * self.n as f64 - self.total as f64
    }

    /// `N + 2n(N - n)`, the weight of the leading-order transition probability.
    pub fn transition_weight(&self) -> f64 {
        let (big, n) = (self.total as f64, self.n as f64);
        big + 2.0 * n * (big - n)
    }

    fn with_n(&self, n: usize) -> SymphotonicLabel {
        SymphotonicLabel { n, ..*self }
    }
}

/// Phase shifts of the two modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseShift {
    pub phi1: f64,
    pub phi2: f64,
}

impl PhaseShift {
    pub fn new(phi1: f64, phi2: f64) -> Self {
        PhaseShift { phi1, phi2 }
    }

    /// Symmetric split `phi1 = -delta/2`, `phi2 = +delta/2`: no common phase.
    pub fn differential(delta_phi: f64) -> Self {
        PhaseShift {
            phi1: -0.5 * delta_phi,
            phi2: 0.5 * delta_phi,
        }
    }

    /// `phi2 - phi1`.
    pub fn delta_phi(&self) -> f64 {
        self.phi2 - self.phi1
    }
}

/// Applies `c1 a1† + c2 a2†` to a vector on sector `m`, giving sector `m + 1`.
fn raise(v: &DVector<Complex64>, c1: Complex64, c2: Complex64) -> DVector<Complex64> {
    let m = v.len() - 1;
    let mut w = DVector::from_element(m + 2, Complex64::new(0.0, 0.0));
    for (k, &amp) in v.iter().enumerate() {
        w[k + 1] += c1 * ((k + 1) as f64).sqrt() * amp;
        w[k] += c2 * ((m - k + 1) as f64).sqrt() * amp;
    }
    w
}

/// Builds `|N, n>` by applying the normalized collective ladder operators
/// `A†/sqrt 2` and `B†/sqrt 2` to the vacuum.
pub fn symphotonic_state(label: &SymphotonicLabel) -> Result<TwoModeState> {
    if label.total > MAX_EXACT_TOTAL {
        return Err(Error::Domain(format!(
            "exact construction limited to N <= {MAX_EXACT_TOTAL}, got N={}",
            label.total
        )));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let tilt = Complex64::from_polar(1.0, -label.theta);
    let a_dag = (Complex64::new(s, 0.0), tilt * s);
    let b_dag = (Complex64::new(s, 0.0), -tilt * s);

    let mut v = DVector::from_element(1, Complex64::new(1.0, 0.0));
    for j in 1..=(label.total - label.n) {
        v = raise(&v, b_dag.0, b_dag.1).unscale((j as f64).sqrt());
    }
    for j in 1..=label.n {
        v = raise(&v, a_dag.0, a_dag.1).unscale((j as f64).sqrt());
    }
    let norm_sq = v.norm_squared();
    debug_assert!((norm_sq - 1.0).abs() < 1e-10, "norm^2 = {norm_sq}");
    TwoModeState::from_amplitudes(SectorBasis::new(label.total), v)
}

/// `exp(-i(phi1 n1 + phi2 n2))` on the sector.
pub fn phase_evolution_operator(basis: SectorBasis, shift: PhaseShift) -> SectorOperator {
    let total = basis.total();
    SectorOperator::diagonal(
        basis,
        (0..=total).map(|k| {
            Complex64::from_polar(
                1.0,
                -(shift.phi1 * k as f64 + shift.phi2 * (total - k) as f64),
            )
        }),
    )
}

/// `1 - |<N,n| U |N,n>|^2` computed on the exact sector state.
///
/// Evaluated as the squared norm of the component of `U|N,n>` orthogonal to
/// `|N,n>`, which equals the printed expression for a normalized state and
/// keeps full relative precision when the probability is tiny.
pub fn transition_probability_exact(label: &SymphotonicLabel, shift: PhaseShift) -> Result<f64> {
    let state = symphotonic_state(label)?;
    let evolved = state.evolve(&phase_evolution_operator(state.basis(), shift))?;
    let overlap = state.inner(&evolved)?;
    let residual = evolved.amplitudes() - state.amplitudes() * overlap;
    Ok(residual.norm_squared().clamp(0.0, 1.0))
}

/// Leading-order transition probability `(dphi^2/4)(N + 2n(N - n))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormulaProbability {
    /// Clamped to `[0, 1]`.
    pub value: f64,
    pub unclamped: f64,
    /// False when the unclamped value exceeds [`PERTURBATIVE_LIMIT`].
    pub perturbative: bool,
}

pub fn transition_probability_formula(
    label: &SymphotonicLabel,
    delta_phi: f64,
) -> FormulaProbability {
    let unclamped = 0.25 * delta_phi * delta_phi * label.transition_weight();
    FormulaProbability {
        value: unclamped.clamp(0.0, 1.0),
        unclamped,
        perturbative: unclamped <= PERTURBATIVE_LIMIT,
    }
}

/// Amplitudes of `U|N,n>` on every `|N,n'>` (same theta), with the common
/// phase `exp(-i(phi1 + phi2) N / 2)` divided out.
pub fn evolved_state_expansion(
    label: &SymphotonicLabel,
    shift: PhaseShift,
) -> Result<BTreeMap<usize, Complex64>> {
    let state = symphotonic_state(label)?;
    let evolved = state.evolve(&phase_evolution_operator(state.basis(), shift))?;
    let common = Complex64::from_polar(1.0, -(shift.phi1 + shift.phi2) * label.total as f64 / 2.0);
    let mut out = BTreeMap::new();
    for n_prime in 0..=label.total {
        let basis_state = symphotonic_state(&label.with_n(n_prime))?;
        out.insert(n_prime, basis_state.inner(&evolved)? / common);
    }
    Ok(out)
}

/// Fitted constant `c` in `amp(n +- 1) ~ i c dphi sqrt(...)`.
///
/// The exact collective-mode rotation gives `amp(n-1) = i sin(dphi/2) sqrt(n(N-n+1)) + O(dphi^3)`,
/// so `c -> 1/2` as `dphi -> 0`. Returns `None` when neither neighbour exists (`N = 0`).
pub fn first_order_coefficient(label: &SymphotonicLabel, delta_phi: f64) -> Result<Option<f64>> {
    let amps = evolved_state_expansion(label, PhaseShift::differential(delta_phi))?;
    let (big, n) = (label.total as f64, label.n as f64);
    let mut fits = Vec::new();
    if label.n > 0 {
        let w = (n * (big - n + 1.0)).sqrt();
        fits.push(amps[&(label.n - 1)].im / (delta_phi * w));
    }
    if label.n < label.total {
        let w = ((n + 1.0) * (big - n)).sqrt();
        fits.push(amps[&(label.n + 1)].im / (delta_phi * w));
    }
    if fits.is_empty() {
        return Ok(None);
    }
    Ok(Some(fits.iter().sum::<f64>() / fits.len() as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::crossquadrature_operator;
    use std::f64::consts::{FRAC_PI_2, SQRT_2};

    fn label(total: usize, n: usize, theta: f64) -> SymphotonicLabel {
        SymphotonicLabel::new(total, n, theta).unwrap()
    }

    fn eigen_residual(l: &SymphotonicLabel) -> f64 {
        let s = symphotonic_state(l).unwrap();
        let x = crossquadrature_operator(l.total(), l.theta());
        let xv = x.apply(&s).unwrap();
        (xv - s.amplitudes() * Complex64::new(l.eigenvalue(), 0.0)).norm()
    }

    #[test]
    fn single_photon_state() {
        let s = symphotonic_state(&label(1, 1, FRAC_PI_2)).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        // index 1 = |1,0>, index 0 = |0,1>
        assert!((s.amplitude(1) - Complex64::new(r, 0.0)).norm() < 1e-15);
        assert!((s.amplitude(0) - Complex64::new(0.0, -r)).norm() < 1e-15);
    }

    #[test]
    fn two_photon_balanced_state() {
        let l = label(2, 1, 0.0);
        let s = symphotonic_state(&l).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitude(2) - Complex64::new(r, 0.0)).norm() < 1e-15);
        assert!(s.amplitude(1).norm() < 1e-15);
        assert!((s.amplitude(0) - Complex64::new(-r, 0.0)).norm() < 1e-15);
        assert!(eigen_residual(&l) < 1e-12);
    }

    #[test]
    fn top_state_eigenvalue() {
        let l = label(4, 4, 0.7);
        assert_eq!(l.eigenvalue(), 4.0);
        assert!(eigen_residual(&l) < 1e-10);
    }

    #[test]
    fn label_rejects_n_above_total() {
        assert!(SymphotonicLabel::new(3, 4, 0.0).is_err());
    }

    #[test]
    fn exact_construction_is_bounded() {
        assert!(symphotonic_state(&label(41, 3, 0.0)).is_err());
        assert!(symphotonic_state(&label(40, 20, 0.0)).is_ok());
    }

    #[test]
    fn evolution_operator_examples() {
        let op = phase_evolution_operator(SectorBasis::new(3), PhaseShift::new(0.4, 0.4));
        let g = Complex64::from_polar(1.0, -1.2);
        for k in 0..4 {
            assert!((op.entry(k, k) - g).norm() < 1e-15);
        }
        let flip = phase_evolution_operator(
            SectorBasis::new(1),
            PhaseShift::new(0.0, std::f64::consts::PI),
        );
        assert!((flip.entry(1, 1) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((flip.entry(0, 0) - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        let op2 = phase_evolution_operator(SectorBasis::new(2), PhaseShift::new(0.01, 0.03));
        for k in 0..3 {
            let want = Complex64::from_polar(1.0, -(0.01 * k as f64 + 0.03 * (2 - k) as f64));
            assert!((op2.entry(k, k) - want).norm() < 1e-15);
        }
        assert!(op2.unitarity_defect() < 1e-12);
    }

    #[test]
    fn phase_shift_difference() {
        let s = PhaseShift::new(0.125, 0.5);
        assert!((s.delta_phi() - 0.375).abs() <= 1e-15);
        assert!((PhaseShift::differential(0.01).delta_phi() - 0.01).abs() <= 1e-15);
    }

    #[test]
    fn exact_probability_examples() {
        let p = transition_probability_exact(&label(1, 1, 0.0), PhaseShift::differential(0.01))
            .unwrap();
        assert!((p - 0.005f64.sin().powi(2)).abs() < 1e-15);
        let p =
            transition_probability_exact(&label(2, 1, 0.0), PhaseShift::differential(0.1)).unwrap();
        assert!((p - 0.1f64.sin().powi(2)).abs() < 1e-14);
        assert!((p - 9.9667e-3).abs() < 1e-7);
        for l in [label(3, 1, 0.2), label(6, 6, 1.0), label(0, 0, 0.0)] {
            let p = transition_probability_exact(&l, PhaseShift::new(0.3, 0.3)).unwrap();
            assert!(p.abs() < 1e-14);
        }
    }

    #[test]
    fn formula_examples() {
        let f = transition_probability_formula(&label(1, 1, 0.0), 0.01);
        assert!((f.value - 2.5e-5).abs() < 1e-18 && f.perturbative);
        let f = transition_probability_formula(&label(2, 1, 0.0), 0.1);
        assert!((f.value - 1.0e-2).abs() < 1e-15);
        let f = transition_probability_formula(&label(100, 50, 0.0), 8f64.sqrt() / 100.0);
        assert!((f.unclamped - 1.02).abs() < 1e-12);
        assert_eq!(f.value, 1.0);
        assert!(!f.perturbative);
    }

    #[test]
    fn expansion_first_order_amplitudes() {
        let d = 1e-3;
        let amps = evolved_state_expansion(&label(2, 1, 0.0), PhaseShift::differential(d)).unwrap();
        // exact amplitude is i sin(d/2) cos(d/2) sqrt(2) on both neighbours
        let want = Complex64::new(0.0, (d / 2.0).sin() * (d / 2.0).cos() * SQRT_2);
        assert!((amps[&0] - want).norm() < 1e-12);
        assert!((amps[&2] - want).norm() < 1e-12);

        let amps =
            evolved_state_expansion(&label(5, 0, 0.4), PhaseShift::new(0.2, 0.2 + d)).unwrap();
        let want = Complex64::new(0.0, (d / 2.0) * 5f64.sqrt());
        assert!((amps[&1] - want).norm() / want.norm() < 5.0 * d);
        assert!(amps.keys().all(|&k| k <= 5));

        let amps = evolved_state_expansion(&label(4, 2, 0.9), PhaseShift::new(0.3, 0.3)).unwrap();
        for (&k, a) in &amps {
            let want = if k == 2 { 1.0 } else { 0.0 };
            assert!((a - Complex64::new(want, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn diagonal_amplitude_matches_second_order() {
        let d = 1e-3;
        let l = label(6, 2, 0.0);
        let amps = evolved_state_expansion(&l, PhaseShift::differential(d)).unwrap();
        let want = 1.0 - d * d / 8.0 * l.transition_weight();
        assert!((amps[&2].re - want).abs() < 1e-10);
    }

    #[test]
    fn fitted_first_order_coefficient_is_one_half() {
        for (total, n) in [(1, 0), (2, 1), (7, 3), (10, 10)] {
            let c = first_order_coefficient(&label(total, n, 0.0), 1e-4)
                .unwrap()
                .unwrap();
            assert!((c - 0.5).abs() < 1e-8, "N={total} n={n} c={c}");
        }
        assert_eq!(
            first_order_coefficient(&label(0, 0, 0.0), 1e-4).unwrap(),
            None
        );
    }

    #[test]
    fn eigenstates_and_orthonormality() {
        for total in 0..=12 {
            for theta in [0.0, FRAC_PI_2, 1.1] {
                let states: Vec<_> = (0..=total)
                    .map(|n| symphotonic_state(&label(total, n, theta)).unwrap())
                    .collect();
                for n in 0..=total {
                    assert!(eigen_residual(&label(total, n, theta)) <= 1e-10);
                    for m in 0..=total {
                        let ip = states[n].inner(&states[m]).unwrap();
                        let want = if n == m { 1.0 } else { 0.0 };
                        assert!((ip - Complex64::new(want, 0.0)).norm() <= 1e-10);
                    }
                }
            }
        }
    }

    /// `|p_exact/p_formula - 1| <= K dphi^2` with a single K per label and
    /// the fitted K bounded by 10.
    #[test]
    fn formula_relative_error_is_second_order() {
        for total in 1..=10usize {
            for n in 0..=total {
                let l = label(total, n, 0.0);
                let ks: Vec<f64> = [1e-2, 5e-3, 2.5e-3]
                    .iter()
                    .map(|&d| {
                        let exact =
                            transition_probability_exact(&l, PhaseShift::differential(d)).unwrap();
                        let approx = transition_probability_formula(&l, d).unclamped;
                        (exact / approx - 1.0) / (d * d)
                    })
                    .collect();
                for k in &ks {
                    assert!(k.abs() <= 10.0, "N={total} n={n} K={ks:?}");
                }
                // Richardson: K is constant up to O(dphi^2)
                assert!(
                    (ks[0] - ks[2]).abs() <= 1e-3 * (1.0 + ks[2].abs()),
                    "{ks:?}"
                );
            }
        }
    }
}
