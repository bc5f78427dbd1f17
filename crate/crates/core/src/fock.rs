//! Two-mode bosonic operators restricted to a fixed total-photon-number sector.
//!
//! Every operator used here (the crossquadrature family, the number operators
//! and the differential phase evolution) conserves `n1 + n2`, so working inside
//! one sector is exact: there is no truncation of the Fock space.
//!
//! Basis convention: index `k` in `0..=N` is the occupation `|n1 = k, n2 = N - k>`,
//! ordered by ascending `k`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// The `N + 1` occupation states `|k, N - k>` sharing `N` quanta.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SectorBasis {
    total: usize,
}

impl SectorBasis {
    pub fn new(total: usize) -> Self {
        SectorBasis { total }
    }

    /// Validating constructor for callers holding a signed count.
    pub fn try_new(total: i64) -> Result<Self> {
        if total < 0 {
            return Err(Error::Domain(format!(
                "total photon number must be nonnegative, got {total}"
            )));
        }
        Ok(SectorBasis::new(total as usize))
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn dimension(&self) -> usize {
        self.total + 1
    }

    /// Occupations `(n1, n2)` of basis index `k`.
    pub fn occupation(&self, k: usize) -> (usize, usize) {
        assert!(k <= self.total, "basis index {k} out of range");
        (k, self.total - k)
    }

    fn check_same(&self, other: &SectorBasis) -> Result<()> {
        if self.total != other.total {
            return Err(Error::Dimension {
                left: self.total,
                right: other.total,
            });
        }
        Ok(())
    }
}

/// Dense complex matrix acting on one photon-number sector.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorOperator {
    basis: SectorBasis,
    matrix: DMatrix<Complex64>,
}

impl SectorOperator {
    pub fn from_matrix(basis: SectorBasis, matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = basis.dimension();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::Domain(format!(
                "operator matrix is {}x{}, sector N={} needs {dim}x{dim}",
                matrix.nrows(),
                matrix.ncols(),
                basis.total()
            )));
        }
        Ok(SectorOperator { basis, matrix })
    }

    pub fn diagonal(basis: SectorBasis, entries: impl IntoIterator<Item = Complex64>) -> Self {
        let diag = DVector::from_iterator(basis.dimension(), entries);
        SectorOperator {
            basis,
            matrix: DMatrix::from_diagonal(&diag),
        }
    }

    pub fn identity(basis: SectorBasis) -> Self {
        SectorOperator {
            basis,
            matrix: DMatrix::identity(basis.dimension(), basis.dimension()),
        }
    }

    pub fn basis(&self) -> SectorBasis {
        self.basis
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn adjoint(&self) -> SectorOperator {
        SectorOperator {
            basis: self.basis,
            matrix: self.matrix.adjoint(),
        }
    }

    /// Largest entry modulus of `A - A†`.
    pub fn hermiticity_defect(&self) -> f64 {
        max_abs(&(&self.matrix - self.matrix.adjoint()))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn compose(&self, rhs: &SectorOperator) -> Result<SectorOperator> {
        self.basis.check_same(&rhs.basis)?;
        Ok(SectorOperator {
            basis: self.basis,
            matrix: &self.matrix * &rhs.matrix,
        })
    }

    pub fn add(&self, rhs: &SectorOperator) -> Result<SectorOperator> {
        self.basis.check_same(&rhs.basis)?;
        Ok(SectorOperator {
            basis: self.basis,
            matrix: &self.matrix + &rhs.matrix,
        })
    }

    pub fn apply(&self, state: &TwoModeState) -> Result<DVector<Complex64>> {
        self.basis.check_same(&state.basis)?;
        Ok(&self.matrix * &state.amplitudes)
    }

    /// Eigenvalues of a Hermitian operator in ascending order.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        if !self.is_hermitian(1e-12) {
            return Err(Error::Domain(format!(
                "operator is not Hermitian (defect {:.3e})",
                self.hermiticity_defect()
            )));
        }
        let eig = SymmetricEigen::new(self.matrix.clone());
        let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        values.sort_by(f64::total_cmp);
        Ok(values)
    }

    /// Largest deviation of `U U†` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let dim = self.basis.dimension();
        let product = &self.matrix * self.matrix.adjoint();
        max_abs(&(product - DMatrix::<Complex64>::identity(dim, dim)))
    }
}

/// Normalized amplitude vector on one sector.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    basis: SectorBasis,
    amplitudes: DVector<Complex64>,
}

impl TwoModeState {
    /// Normalizes `amplitudes`; fails on length mismatch or a zero vector.
    pub fn from_amplitudes(basis: SectorBasis, amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.len() != basis.dimension() {
            return Err(Error::Domain(format!(
                "state has {} amplitudes, sector N={} needs {}",
                amplitudes.len(),
                basis.total(),
                basis.dimension()
            )));
        }
        let norm = amplitudes.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Domain(
                "state vector has zero or non-finite norm".into(),
            ));
        }
        Ok(TwoModeState {
            basis,
            amplitudes: amplitudes.unscale(norm),
        })
    }

    /// The occupation state `|k, N - k>`.
    pub fn occupation(basis: SectorBasis, k: usize) -> Result<Self> {
        if k > basis.total() {
            return Err(Error::Domain(format!(
                "occupation index {k} exceeds N={}",
                basis.total()
            )));
        }
        let mut amps = DVector::from_element(basis.dimension(), ZERO);
        amps[k] = Complex64::new(1.0, 0.0);
        Ok(TwoModeState {
            basis,
            amplitudes: amps,
        })
    }

    pub fn basis(&self) -> SectorBasis {
        self.basis
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, k: usize) -> Complex64 {
        self.amplitudes[k]
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &TwoModeState) -> Result<Complex64> {
        self.basis.check_same(&other.basis)?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Applies a unitary. The result is renormalized only against rounding.
    pub fn evolve(&self, unitary: &SectorOperator) -> Result<TwoModeState> {
        let amps = unitary.apply(self)?;
        TwoModeState::from_amplitudes(self.basis, amps)
    }
}

/// `X_theta = a1† a2 e^{i theta} + a2† a1 e^{-i theta}` on sector `total`.
///
/// `a1† a2 |k, N-k> = sqrt((k+1)(N-k)) |k+1, N-k-1>`, so the raising part sits
/// at row `k+1`, column `k`. `theta = pi/2` gives `i(a1† a2 - a2† a1)`.
pub fn crossquadrature_operator(total: usize, theta: f64) -> SectorOperator {
    let basis = SectorBasis::new(total);
    let dim = basis.dimension();
    let phase = Complex64::from_polar(1.0, theta);
    let mut m = DMatrix::from_element(dim, dim, ZERO);
    for k in 0..total {
        let amp = (((k + 1) * (total - k)) as f64).sqrt();
        m[(k + 1, k)] = phase * amp;
        m[(k, k + 1)] = phase.conj() * amp;
    }
    SectorOperator { basis, matrix: m }
}

/// Signed-count entry point used by the CLI.
pub fn crossquadrature_operator_checked(total: i64, theta: f64) -> Result<SectorOperator> {
    let basis = SectorBasis::try_new(total)?;
    Ok(crossquadrature_operator(basis.total(), theta))
}

/// `n1 - n2`, diagonal with entries `2k - N`.
pub fn number_difference_operator(total: usize) -> SectorOperator {
    let basis = SectorBasis::new(total);
    SectorOperator::diagonal(
        basis,
        (0..=total).map(|k| Complex64::new(2.0 * k as f64 - total as f64, 0.0)),
    )
}

pub fn number_difference_operator_checked(total: i64) -> Result<SectorOperator> {
    let basis = SectorBasis::try_new(total)?;
    Ok(number_difference_operator(basis.total()))
}

pub fn mode1_number_operator(total: usize) -> SectorOperator {
    let basis = SectorBasis::new(total);
    SectorOperator::diagonal(basis, (0..=total).map(|k| Complex64::new(k as f64, 0.0)))
}

pub fn mode2_number_operator(total: usize) -> SectorOperator {
    let basis = SectorBasis::new(total);
    SectorOperator::diagonal(
        basis,
        (0..=total).map(|k| Complex64::new((total - k) as f64, 0.0)),
    )
}

/// `n1 + n2`; on a sector this is `N` times the identity.
pub fn total_number_operator(total: usize) -> SectorOperator {
    mode1_number_operator(total)
        .add(&mode2_number_operator(total))
        .expect("same sector")
}

/// Max-absolute-entry of `AB - BA`.
pub fn commutator_norm(a: &SectorOperator, b: &SectorOperator) -> Result<f64> {
    let ab = a.compose(b)?;
    let ba = b.compose(a)?;
    Ok(max_abs(&(ab.matrix - ba.matrix)))
}

pub(crate) fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
