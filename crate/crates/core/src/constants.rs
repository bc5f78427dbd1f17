//! Physical constants in CGS units.

/// Reduced Planck constant, erg·s.
pub const HBAR: f64 = 1.054_571_817e-27;

/// Boltzmann constant, erg/K.
pub const BOLTZMANN: f64 = 1.380_649e-16;
