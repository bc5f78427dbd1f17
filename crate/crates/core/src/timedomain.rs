//! Time-domain cross-checks for the frequency-domain transfer functions.
//!
//! Both oracles integrate the real equations of motion with a fixed-step
//! fourth-order Runge–Kutta scheme and never touch the closed-form transfer
//! functions. The optomechanical system is dynamically unstable, so instead of
//! waiting for transients to decay the periodic steady state is found by
//! shooting: with `Phi` the one-period propagator and `r` the state reached
//! from rest under forcing, the periodic initial state solves `(I - Phi) s = r`.

use nalgebra::{DMatrix, DVector};

use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::params::AntennaParams;
use crate::speed_meter::SpeedMeterParams;

/// `y' = A y + b sin(omega t + phase)`, observed through `c · y`.
#[derive(Debug, Clone)]
pub struct ForcedLinearSystem {
    pub matrix: DMatrix<f64>,
    pub forcing: DVector<f64>,
    pub omega: f64,
    pub phase: f64,
    pub observable: DVector<f64>,
}

/// Amplitude and phase of the steady-state observable at the drive frequency,
/// `c · y(t) ≈ amplitude sin(omega t + phase)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState {
    pub amplitude: f64,
    pub phase: f64,
    pub steps_per_period: usize,
}

impl ForcedLinearSystem {
    fn rhs(&self, t: f64, y: &DVector<f64>, drive: bool) -> DVector<f64> {
        let mut dy = &self.matrix * y;
        if drive {
            dy.axpy((self.omega * t + self.phase).sin(), &self.forcing, 1.0);
        }
        dy
    }

    fn rk4_step(&self, t: f64, y: &DVector<f64>, dt: f64, drive: bool) -> DVector<f64> {
        let k1 = self.rhs(t, y, drive);
        let k2 = self.rhs(t + 0.5 * dt, &(y + &k1 * (0.5 * dt)), drive);
        let k3 = self.rhs(t + 0.5 * dt, &(y + &k2 * (0.5 * dt)), drive);
        let k4 = self.rhs(t + dt, &(y + &k3 * dt), drive);
        y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0)
    }

    fn propagate(&self, y0: &DVector<f64>, steps: usize, drive: bool) -> DVector<f64> {
        let dt = std::f64::consts::TAU / self.omega / steps as f64;
        let mut y = y0.clone();
        for i in 0..steps {
            y = self.rk4_step(i as f64 * dt, &y, dt, drive);
        }
        y
    }

    /// Periodic steady state by shooting, then one period of sampling.
    pub fn steady_state(&self, steps_per_period: usize) -> Result<SteadyState> {
        let n = self.matrix.nrows();
        let mut propagator = DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            let mut e = DVector::zeros(n);
            e[j] = 1.0;
            propagator.set_column(j, &self.propagate(&e, steps_per_period, false));
        }
        let forced = self.propagate(&DVector::zeros(n), steps_per_period, true);
        let system = DMatrix::<f64>::identity(n, n) - propagator;
        // Least squares: conserved modes of the undriven system make I - Phi singular.
        let svd = system.svd(true, true);
        let cutoff = 1e-10 * svd.singular_values.max();
        let start = svd
            .solve(&forced, cutoff)
            .map_err(|e| Error::Integration(format!("periodic shooting failed: {e}")))?;
        let closure = (&start - self.propagate(&start, steps_per_period, true)).norm();
        if closure > 1e-6 * start.norm().max(forced.norm()) {
            return Err(Error::Integration(format!(
                "periodic orbit did not close (defect {closure:.3e})"
            )));
        }

        let dt = std::f64::consts::TAU / self.omega / steps_per_period as f64;
        let (mut s, mut c) = (0.0, 0.0);
        let mut y = start;
        for i in 0..steps_per_period {
            let t = i as f64 * dt;
            let obs = self.observable.dot(&y);
            s += obs * (self.omega * t).sin();
            c += obs * (self.omega * t).cos();
            y = self.rk4_step(t, &y, dt, true);
        }
        let scale = 2.0 / steps_per_period as f64;
        let (s, c) = (s * scale, c * scale);
        Ok(SteadyState {
            amplitude: s.hypot(c),
            phase: c.atan2(s),
            steps_per_period,
        })
    }
}

fn steps_for(omega: f64, fastest: f64) -> usize {
    // dt <= 2 pi / (100 max(fastest, omega))
    let needed = (100.0 * fastest.max(omega) / omega).ceil() as usize;
    needed.max(2000)
}

/// Lossless, noise-free probe response to `h(t) = h0 sin(omega t)`.
///
/// Integrates the ten real equations of the two optical modes (quadratures
/// `u_j + i v_j` of the fluctuation amplitudes), the probe mass and the two end
/// mirrors. Each arm carries half the circulating energy, so the classical
/// amplitude is `sqrt(N/2)`. Returns the steady-state amplitude of `x(t)`.
///
/// Below roughly `0.3 nu` the unstable modes grow by more than `e^18` per drive
/// period and single shooting loses accuracy.
pub fn optomechanical_response(p: &AntennaParams, omega: f64, h0: f64) -> Result<SteadyState> {
    let amp = p.arm_amplitude();
    let alpha = p.omega_o * amp / p.arm_length;
    let beta = 0.5 * p.omega_o * amp;
    let (m, big_m) = (p.probe_mass, p.mirror_mass);
    let nu = crate::dynamics::characteristic_frequency(p);

    // physical state: u1 v1 u2 v2 x xd x1 x1d x2 x2d
    let mut a = DMatrix::<f64>::zeros(10, 10);
    a[(0, 4)] = -alpha; //  u1' = -alpha x
    a[(1, 6)] = alpha; //   v1' = alpha x1 + beta h
    a[(2, 4)] = alpha; //   u2' = alpha x
    a[(3, 8)] = alpha; //   v2' = alpha x2 - beta h
    a[(4, 5)] = 1.0;
    a[(5, 1)] = 2.0 * HBAR * alpha / m; // m x'' = 2 hbar alpha (v1 - v2)
    a[(5, 3)] = -2.0 * HBAR * alpha / m;
    a[(6, 7)] = 1.0;
    a[(7, 0)] = 2.0 * HBAR * alpha / big_m; // M x1'' = 2 hbar alpha u1
    a[(8, 9)] = 1.0;
    a[(9, 2)] = 2.0 * HBAR * alpha / big_m;
    let mut b = DVector::<f64>::zeros(10);
    b[1] = beta * h0;
    b[3] = -beta * h0;

    // balance the variables so each coupling loop has equal forward and back gains
    let rate = nu.max(omega);
    let x_scale = (2.0 * HBAR / (m * rate)).sqrt();
    let x1_scale = (2.0 * HBAR / (big_m * rate)).sqrt();
    let scales = DVector::from_vec(vec![
        1.0,
        1.0,
        1.0,
        1.0,
        x_scale,
        x_scale * rate,
        x1_scale,
        x1_scale * rate,
        x1_scale,
        x1_scale * rate,
    ]);
    let inv = scales.map(|s| 1.0 / s);
    let scaled = DMatrix::from_diagonal(&inv) * a * DMatrix::from_diagonal(&scales);
    let mut observable = DVector::zeros(10);
    observable[4] = x_scale;

    let system = ForcedLinearSystem {
        matrix: scaled,
        forcing: b.component_mul(&inv),
        omega,
        phase: 0.0,
        observable,
    };
    system.steady_state(steps_for(omega, nu))
}

/// Homodyne output of the speed meter for `x(t) = x0 cos(omega t)` with all
/// waveguide fluctuations off, from the four slowly-varying-amplitude equations.
pub fn speed_meter_response(sm: &SpeedMeterParams, omega: f64, x0: f64) -> Result<SteadyState> {
    let delta = sm.decrement();
    let big = sm.beat_frequency;
    let coupling = sm.omega_e * sm.q0() / sm.tunability_length;

    // state: a1 b1 a2 b2
    let mut a = DMatrix::<f64>::zeros(4, 4);
    a[(0, 0)] = -delta; // a1' = -delta a1 - Omega b2
    a[(0, 3)] = -big;
    a[(1, 1)] = -delta; // b1' = -delta b1 + k x + Omega a2
    a[(1, 2)] = big;
    a[(2, 1)] = -big; //   a2' = -Omega b1
    a[(3, 0)] = big; //    b2' = Omega a1
    let mut b = DVector::<f64>::zeros(4);
    b[1] = coupling * x0;

    let gain = 2.0 * delta * sm.rho;
    let observable = DVector::from_vec(vec![
        gain * sm.lo_phase.cos(),
        -gain * sm.lo_phase.sin(),
        0.0,
        0.0,
    ]);
    let system = ForcedLinearSystem {
        matrix: a,
        forcing: b,
        omega,
        phase: std::f64::consts::FRAC_PI_2,
        observable,
    };
    system.steady_state(steps_for(omega, big.max(delta)))
}
