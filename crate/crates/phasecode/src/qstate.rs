//! Dense N-qubit pure states and density matrices.
//!
//! Amplitude vectors are indexed by basis label, |psi> = sum_b c_b |b>, with
//! the bit conventions of [`crate::bits`]. States may be unnormalized
//! (trajectory branches carry their squared norm as weight); density
//! matrices may be sub-normalized (post-selected blocks before
//! renormalization).

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::linalg;
use crate::tol;
use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::Rng;

/// Largest width for which pure states are constructed.
pub const MAX_STATE_WIDTH: u32 = 20;

/// Largest width for which density matrices are constructed. Dense storage
/// at width 12 is 2^24 complex entries; exactness beats sparsity in the
/// regime this crate targets.
pub const MAX_DENSITY_WIDTH: u32 = 12;

/// A pure state of `width` qubits: 2^width complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct QState {
    amps: Array1<Complex64>,
    width: u32,
}

impl QState {
    /// Builds a state from its amplitude vector. The vector length must be
    /// 2^width; no normalization is imposed.
    pub fn new(width: u32, amps: Vec<Complex64>) -> Result<Self> {
        check_width(width, MAX_STATE_WIDTH)?;
        let dim = 1usize << width;
        if amps.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: amps.len(),
            });
        }
        Ok(Self {
            amps: Array1::from_vec(amps),
            width,
        })
    }

    /// The computational basis state |b>.
    pub fn basis(width: u32, b: &BitString) -> Result<Self> {
        check_width(width, MAX_STATE_WIDTH)?;
        if b.width() != width {
            return Err(Error::WidthMismatch {
                left: width,
                right: b.width(),
            });
        }
        let mut amps = Array1::zeros(1usize << width);
        amps[b.index()] = Complex64::new(1.0, 0.0);
        Ok(Self { amps, width })
    }

    /// The single-qubit state c0|0> + c1|1>.
    pub fn qubit(c0: Complex64, c1: Complex64) -> Self {
        Self {
            amps: Array1::from_vec(vec![c0, c1]),
            width: 1,
        }
    }

    /// A Haar-like random normalized state: independent complex Gaussian
    /// amplitudes, normalized.
    pub fn random<R: Rng + ?Sized>(width: u32, rng: &mut R) -> Result<Self> {
        check_width(width, MAX_STATE_WIDTH)?;
        let dim = 1usize << width;
        let mut amps = Array1::zeros(dim);
        for a in amps.iter_mut() {
            *a = Complex64::new(gaussian(rng), gaussian(rng));
        }
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        amps.mapv_inplace(|z| z / norm);
        Ok(Self { amps, width })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &Array1<Complex64> {
        &self.amps
    }

    /// Amplitude on basis index `i`.
    pub fn amp(&self, i: usize) -> Complex64 {
        self.amps[i]
    }

    /// Squared norm sum_b |c_b|^2; the weight of an unnormalized branch.
    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Whether the squared norm is within `tolerance` of 1.
    pub fn is_normalized(&self, tolerance: f64) -> bool {
        (self.norm_sq() - 1.0).abs() <= tolerance
    }

    /// Inner product <self|other>.
    pub fn inner(&self, other: &QState) -> Result<Complex64> {
        if self.width != other.width {
            return Err(Error::WidthMismatch {
                left: self.width,
                right: other.width,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// The state scaled to unit norm.
    pub fn normalized(&self) -> Result<QState> {
        let n2 = self.norm_sq();
        if n2 <= tol::DEGENERATE_ACCEPTANCE {
            return Err(Error::DegenerateTrace { trace: n2 });
        }
        let inv = 1.0 / n2.sqrt();
        Ok(QState {
            amps: self.amps.mapv(|z| z * inv),
            width: self.width,
        })
    }

    /// The rank-1 projector |psi><psi| as a density matrix. The trace of
    /// the result equals the squared norm of the state.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        check_width(self.width, MAX_DENSITY_WIDTH)?;
        let dim = self.dim();
        let mut entries = Array2::zeros((dim, dim));
        for (a, &ca) in self.amps.iter().enumerate() {
            if ca.re == 0.0 && ca.im == 0.0 {
                continue;
            }
            for (b, &cb) in self.amps.iter().enumerate() {
                entries[[a, b]] = ca * cb.conj();
            }
        }
        Ok(DensityMatrix {
            entries,
            width: self.width,
        })
    }
}

/// A (possibly sub-normalized) mixed state of `width` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: Array2<Complex64>,
    width: u32,
}

impl DensityMatrix {
    /// Builds a matrix from its entries. The shape must be 2^width square;
    /// Hermiticity and positivity are checked by [`DensityMatrix::validate`],
    /// not here, so projectors and intermediate blocks can use the type.
    pub fn new(width: u32, entries: Array2<Complex64>) -> Result<Self> {
        check_width(width, MAX_DENSITY_WIDTH)?;
        let dim = 1usize << width;
        if entries.dim() != (dim, dim) {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Ok(Self { entries, width })
    }

    pub fn zeros(width: u32) -> Result<Self> {
        check_width(width, MAX_DENSITY_WIDTH)?;
        let dim = 1usize << width;
        Ok(Self {
            entries: Array2::zeros((dim, dim)),
            width,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }

    pub fn entry(&self, a: usize, b: usize) -> Complex64 {
        self.entries[[a, b]]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.entries[[i, i]]).sum()
    }

    /// Real part of the trace; the trace of a Hermitian matrix is real.
    pub fn trace_real(&self) -> f64 {
        self.trace().re
    }

    /// <alpha|rho|alpha> for a normalized pure state. For rho assembled
    /// from trajectory branches this equals sum_n |<alpha|phi_n>|^2.
    pub fn overlap_probability(&self, alpha: &QState) -> Result<f64> {
        if alpha.width() != self.width {
            return Err(Error::WidthMismatch {
                left: alpha.width(),
                right: self.width,
            });
        }
        let n2 = alpha.norm_sq();
        if (n2 - 1.0).abs() > tol::NORMALIZATION {
            return Err(Error::NotNormalized { norm_sq: n2 });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, &ca) in alpha.amps().iter().enumerate() {
            if ca.re == 0.0 && ca.im == 0.0 {
                continue;
            }
            for (b, &cb) in alpha.amps().iter().enumerate() {
                acc += ca.conj() * self.entries[[a, b]] * cb;
            }
        }
        Ok(acc.re)
    }

    /// P rho P with P = sum over the kept basis states |b><b|. The trace of
    /// the result is the probability of that projection outcome.
    pub fn project_keep(&self, keep: &[BitString]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::EmptyProjection);
        }
        let mut mask = vec![false; self.dim()];
        for b in keep {
            if b.width() != self.width {
                return Err(Error::WidthMismatch {
                    left: b.width(),
                    right: self.width,
                });
            }
            mask[b.index()] = true;
        }
        let mut entries = Array2::zeros(self.entries.dim());
        for a in 0..self.dim() {
            if !mask[a] {
                continue;
            }
            for b in 0..self.dim() {
                if mask[b] {
                    entries[[a, b]] = self.entries[[a, b]];
                }
            }
        }
        Ok(DensityMatrix {
            entries,
            width: self.width,
        })
    }

    /// <psi0|rho|psi0> for a single-qubit trace-normalized state.
    pub fn qubit_fidelity(&self, psi0: &QState) -> Result<f64> {
        if self.width != 1 {
            return Err(Error::WidthOutOfRange {
                width: self.width,
                min: 1,
                max: 1,
            });
        }
        let tr = self.trace_real();
        if (tr - 1.0).abs() > tol::NORMALIZATION {
            return Err(Error::NotNormalized { norm_sq: tr });
        }
        self.overlap_probability(psi0)
    }

    /// The matrix scaled to unit trace. The pre-scaling trace is the
    /// acceptance probability of whatever projection produced this block.
    pub fn renormalized(&self) -> Result<DensityMatrix> {
        let tr = self.trace_real();
        if tr <= tol::DEGENERATE_ACCEPTANCE {
            return Err(Error::DegenerateTrace { trace: tr });
        }
        let inv = 1.0 / tr;
        Ok(DensityMatrix {
            entries: self.entries.mapv(|z| z * inv),
            width: self.width,
        })
    }

    /// Largest absolute difference of entries against another matrix.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Whether the matrix is Hermitian within `tolerance`.
    pub fn is_hermitian(&self, tolerance: f64) -> bool {
        let n = self.dim();
        for a in 0..n {
            for b in a..n {
                if (self.entries[[a, b]] - self.entries[[b, a]].conj()).norm() > tolerance {
                    return false;
                }
            }
        }
        true
    }

    /// Eigenvalues in ascending order (Jacobi; intended for small widths).
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.entries)
    }

    /// Checks the physical-state invariants: Hermitian within 1e-12,
    /// eigenvalues >= -1e-10, and trace in (0, 1 + 1e-12].
    pub fn validate(&self) -> Result<()> {
        if !self.is_hermitian(tol::STRUCTURAL) {
            return Err(Error::StateInvariant("matrix is not Hermitian".into()));
        }
        let tr = self.trace_real();
        if tr <= 0.0 || tr > 1.0 + tol::STRUCTURAL {
            return Err(Error::StateInvariant(format!(
                "trace {tr} outside (0, 1]"
            )));
        }
        if let Some(min) = self.eigenvalues().first() {
            if *min < -tol::PSD_SLACK {
                return Err(Error::StateInvariant(format!(
                    "negative eigenvalue {min}"
                )));
            }
        }
        Ok(())
    }
}

fn check_width(width: u32, max: u32) -> Result<()> {
    if width == 0 || width > max {
        return Err(Error::WidthOutOfRange {
            width,
            min: 1,
            max,
        });
    }
    Ok(())
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box-Muller; avoids ln(0)
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn basis_state_density() {
        let zero = QState::basis(1, &BitString::zero(1).unwrap()).unwrap();
        let rho = zero.to_density().unwrap();
        assert_eq!(rho.entry(0, 0), c(1.0, 0.0));
        assert_eq!(rho.entry(0, 1), c(0.0, 0.0));
        assert_eq!(rho.entry(1, 0), c(0.0, 0.0));
        assert_eq!(rho.entry(1, 1), c(0.0, 0.0));
    }

    #[test]
    fn uniform_superposition_density() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = QState::qubit(c(s, 0.0), c(s, 0.0));
        let rho = psi.to_density().unwrap();
        for a in 0..2 {
            for b in 0..2 {
                assert!((rho.entry(a, b) - c(0.5, 0.0)).norm() < tol::STRUCTURAL);
            }
        }
    }

    #[test]
    fn random_density_has_unit_trace_and_rank_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let psi = QState::random(3, &mut rng).unwrap();
        let rho = psi.to_density().unwrap();
        assert!((rho.trace_real() - 1.0).abs() < tol::STRUCTURAL);
        // eigen-decomposition oracle: one eigenvalue 1, the rest 0
        let eig = rho.eigenvalues();
        let (last, rest) = eig.split_last().unwrap();
        assert!((last - 1.0).abs() < 1e-10);
        for e in rest {
            assert!(e.abs() < 1e-10);
        }
    }

    #[test]
    fn density_trace_preserves_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for width in 1..=8u32 {
            if width > MAX_DENSITY_WIDTH {
                break;
            }
            let psi = QState::random(width, &mut rng).unwrap();
            let rho = psi.to_density().unwrap();
            assert!((rho.trace_real() - psi.norm_sq()).abs() < tol::STRUCTURAL);
        }
    }

    #[test]
    fn overlap_probability_basis_cases() {
        let zero = QState::basis(1, &BitString::zero(1).unwrap()).unwrap();
        let one = QState::basis(1, &BitString::new(1, 1).unwrap()).unwrap();
        let rho = zero.to_density().unwrap();
        assert!((rho.overlap_probability(&zero).unwrap() - 1.0).abs() < tol::STRUCTURAL);
        assert!(rho.overlap_probability(&one).unwrap().abs() < tol::STRUCTURAL);
    }

    #[test]
    fn overlap_probability_rejects_unnormalized() {
        let alpha = QState::qubit(c(1.0, 0.0), c(1.0, 0.0));
        let rho = QState::qubit(c(1.0, 0.0), c(0.0, 0.0))
            .to_density()
            .unwrap();
        assert!(matches!(
            rho.overlap_probability(&alpha),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn project_keep_identity_and_rank_one() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = QState::qubit(c(s, 0.0), c(s, 0.0));
        let rho = psi.to_density().unwrap();
        let all = vec![
            BitString::zero(1).unwrap(),
            BitString::new(1, 1).unwrap(),
        ];
        assert!(rho.project_keep(&all).unwrap().max_abs_diff(&rho) < tol::STRUCTURAL);

        let kept = rho.project_keep(&[BitString::zero(1).unwrap()]).unwrap();
        assert!((kept.entry(0, 0) - c(0.5, 0.0)).norm() < tol::STRUCTURAL);
        assert_eq!(kept.entry(0, 1), c(0.0, 0.0));
        assert_eq!(kept.entry(1, 0), c(0.0, 0.0));
        assert_eq!(kept.entry(1, 1), c(0.0, 0.0));
    }

    #[test]
    fn project_keep_is_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let psi = QState::random(3, &mut rng).unwrap();
        let rho = psi.to_density().unwrap();
        let keep = vec![
            BitString::new(1, 3).unwrap(),
            BitString::new(4, 3).unwrap(),
            BitString::new(6, 3).unwrap(),
        ];
        let once = rho.project_keep(&keep).unwrap();
        let twice = once.project_keep(&keep).unwrap();
        assert!(once.max_abs_diff(&twice) < tol::STRUCTURAL);
    }

    #[test]
    fn project_keep_rejects_empty() {
        let rho = QState::qubit(c(1.0, 0.0), c(0.0, 0.0))
            .to_density()
            .unwrap();
        assert_eq!(rho.project_keep(&[]), Err(Error::EmptyProjection));
    }

    #[test]
    fn qubit_fidelity_pure_and_mixed() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi0 = QState::qubit(c(s, 0.0), c(0.0, s));
        let rho = psi0.to_density().unwrap();
        assert!((rho.qubit_fidelity(&psi0).unwrap() - 1.0).abs() < tol::STRUCTURAL);

        // maximally mixed state: fidelity 1/2 for any psi0
        let mixed = DensityMatrix::new(
            1,
            ndarray::array![[c(0.5, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.5, 0.0)]],
        )
        .unwrap();
        assert!((mixed.qubit_fidelity(&psi0).unwrap() - 0.5).abs() < tol::STRUCTURAL);
    }

    #[test]
    fn qubit_fidelity_rejects_wider_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rho = QState::random(2, &mut rng).unwrap().to_density().unwrap();
        let psi0 = QState::qubit(c(1.0, 0.0), c(0.0, 0.0));
        assert!(matches!(
            rho.qubit_fidelity(&psi0),
            Err(Error::WidthOutOfRange { .. })
        ));
    }

    #[test]
    fn validate_accepts_physical_and_rejects_broken() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rho = QState::random(2, &mut rng).unwrap().to_density().unwrap();
        rho.validate().unwrap();

        let mut bad = rho.entries().clone();
        bad[[0, 1]] = c(5.0, 0.0);
        let bad = DensityMatrix::new(2, bad).unwrap();
        assert!(bad.validate().is_err());
    }

    #[test]
    fn width_caps_enforced() {
        assert!(matches!(
            QState::new(MAX_STATE_WIDTH + 1, vec![]),
            Err(Error::WidthOutOfRange { .. })
        ));
        assert!(matches!(
            DensityMatrix::zeros(MAX_DENSITY_WIDTH + 1),
            Err(Error::WidthOutOfRange { .. })
        ));
    }
}
