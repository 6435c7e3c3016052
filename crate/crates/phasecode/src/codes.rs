//! Logical qubit representations and their encoder unitaries.
//!
//! A code is a pair of orthonormal logical states on N qubits together with
//! a unitary U mapping |e0> = |0...00> to |0_L> and |e1> = |0...01> to
//! |1_L>. The layout puts the data bit at bit 0 and the N-1 ancilla above
//! it, so ket labels read right to left.

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::linalg;
use crate::qstate::{DensityMatrix, QState, MAX_DENSITY_WIDTH};
use crate::tol;
use ndarray::{Array1, Array2};
use num_complex::Complex64;
use std::io::{self, Write};

/// Which construction a code came from; the transmission pipeline keys its
/// closed-form predictions on this.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeFamily {
    /// Plain one-qubit representation, no ancilla.
    Standard,
    /// One-hot superposition code on N qubits (N even), data block low.
    Symmetric,
    /// Two-qubit parity code with a single ancilla.
    TwoQubit,
}

/// A logical qubit representation: code words plus encoder unitary.
#[derive(Debug, Clone)]
pub struct Code {
    name: String,
    family: CodeFamily,
    width: u32,
    zero_logical: QState,
    one_logical: QState,
    encoder: Array2<Complex64>,
}

impl Code {
    /// The symmetric N-qubit code, N even, 2 <= N <= 12.
    ///
    /// |0_L> spreads the data over the N/2 one-hot labels of the low block,
    /// |1_L> over the one-hot labels of the high block, each with amplitude
    /// sqrt(2/N). At N = 2 this is the dual-rail pair |01>, |10>.
    pub fn symmetric(n: u32) -> Result<Code> {
        Self::symmetric_with_candidates(n, false)
    }

    /// Same code words, encoder completed over the reversed candidate
    /// order. Exists so tests can show the completion choice is invisible
    /// to the protocol.
    pub(crate) fn symmetric_with_candidates(n: u32, reverse: bool) -> Result<Code> {
        if !(2..=MAX_DENSITY_WIDTH).contains(&n) || !n.is_multiple_of(2) {
            return Err(Error::InvalidParameter {
                name: "n",
                value: f64::from(n),
                constraint: "must be even and within 2..=12",
            });
        }
        let half = n / 2;
        let dim = 1usize << n;
        let amp = Complex64::new((2.0 / f64::from(n)).sqrt(), 0.0);
        let mut zero = vec![Complex64::new(0.0, 0.0); dim];
        let mut one = vec![Complex64::new(0.0, 0.0); dim];
        for i in 0..half {
            zero[1usize << i] = amp;
            one[1usize << (half + i)] = amp;
        }
        let zero_logical = QState::new(n, zero)?;
        let one_logical = QState::new(n, one)?;
        let encoder = complete_encoder(n, &zero_logical, &one_logical, reverse);
        Ok(Code {
            name: format!("symmetric:{n}"),
            family: CodeFamily::Symmetric,
            width: n,
            zero_logical,
            one_logical,
            encoder,
        })
    }

    /// The two-qubit code with one ancilla: |0_L> = (|00>+|11>)/sqrt(2),
    /// |1_L> = (|01>+|10>)/sqrt(2).
    pub fn two_qubit() -> Code {
        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let z = Complex64::new(0.0, 0.0);
        let zero_logical = QState::new(2, vec![s, z, z, s]).expect("static");
        let one_logical = QState::new(2, vec![z, s, s, z]).expect("static");
        let encoder = complete_encoder(2, &zero_logical, &one_logical, false);
        Code {
            name: "two_qubit".into(),
            family: CodeFamily::TwoQubit,
            width: 2,
            zero_logical,
            one_logical,
            encoder,
        }
    }

    /// The plain representation: |0_L> = |0>, |1_L> = |1>, U = identity.
    pub fn standard() -> Code {
        let one = Complex64::new(1.0, 0.0);
        let z = Complex64::new(0.0, 0.0);
        Code {
            name: "standard".into(),
            family: CodeFamily::Standard,
            width: 1,
            zero_logical: QState::new(1, vec![one, z]).expect("static"),
            one_logical: QState::new(1, vec![z, one]).expect("static"),
            encoder: Array2::eye(2),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family(&self) -> CodeFamily {
        self.family
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn zero_logical(&self) -> &QState {
        &self.zero_logical
    }

    pub fn one_logical(&self) -> &QState {
        &self.one_logical
    }

    pub fn encoder(&self) -> &Array2<Complex64> {
        &self.encoder
    }

    /// c0 |0_L> + c1 |1_L> for a normalized amplitude pair. Equals the
    /// encoder applied to c0|e0> + c1|e1>.
    pub fn encode(&self, c0: Complex64, c1: Complex64) -> Result<QState> {
        let norm_sq = c0.norm_sqr() + c1.norm_sqr();
        if (norm_sq - 1.0).abs() > tol::NORMALIZATION {
            return Err(Error::NotNormalized { norm_sq });
        }
        let amps: Vec<Complex64> = self
            .zero_logical
            .amps()
            .iter()
            .zip(self.one_logical.amps().iter())
            .map(|(z, o)| c0 * z + c1 * o)
            .collect();
        QState::new(self.width, amps)
    }

    /// U (rho_1 embedded on the data bit with ground ancilla) U^dagger.
    /// For a pure rho_1 = |psi0><psi0| this is |psi2><psi2|.
    pub fn encode_density(&self, rho1: &DensityMatrix) -> Result<DensityMatrix> {
        if rho1.width() != 1 {
            return Err(Error::WidthOutOfRange {
                width: rho1.width(),
                min: 1,
                max: 1,
            });
        }
        // U embed(rho) U^dagger = sum_{i,j in {0,1}} rho[i,j] u_i u_j^dagger,
        // where u_0, u_1 are the logical code words (encoder columns 0, 1)
        let dim = 1usize << self.width;
        let cols = [self.zero_logical.amps(), self.one_logical.amps()];
        let mut entries = Array2::zeros((dim, dim));
        for i in 0..2usize {
            for j in 0..2usize {
                let w = rho1.entry(i, j);
                if w.re == 0.0 && w.im == 0.0 {
                    continue;
                }
                for (a, &ua) in cols[i].iter().enumerate() {
                    if ua.re == 0.0 && ua.im == 0.0 {
                        continue;
                    }
                    for (b, &ub) in cols[j].iter().enumerate() {
                        if ub.re == 0.0 && ub.im == 0.0 {
                            continue;
                        }
                        entries[[a, b]] += w * ua * ub.conj();
                    }
                }
            }
        }
        DensityMatrix::new(self.width, entries)
    }

    /// U^dagger rho U: back to the computational frame where the ancilla
    /// are measured.
    pub fn decode_density(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.width() != self.width {
            return Err(Error::WidthMismatch {
                left: self.width,
                right: rho.width(),
            });
        }
        let entries = linalg::conjugate_by_adjoint(&self.encoder, rho.entries());
        DensityMatrix::new(self.width, entries)
    }

    /// P = |0_L><0_L| + |1_L><1_L|, the projector onto the representation
    /// manifold. Idempotent, Hermitian, rank 2; its trace is 2, so it is a
    /// projector and not a state.
    pub fn manifold_projector(&self) -> DensityMatrix {
        let dim = 1usize << self.width;
        let mut entries = Array2::zeros((dim, dim));
        for logical in [&self.zero_logical, &self.one_logical] {
            for (a, &ca) in logical.amps().iter().enumerate() {
                if ca.re == 0.0 && ca.im == 0.0 {
                    continue;
                }
                for (b, &cb) in logical.amps().iter().enumerate() {
                    entries[[a, b]] += ca * cb.conj();
                }
            }
        }
        DensityMatrix::new(self.width, entries).expect("width already validated")
    }

    /// Writes the code words as (index, amplitude) pairs.
    ///
    /// Format: a `# code <name> width <N>` header, then for each logical
    /// state a `# state <label>` line followed by one line per nonzero
    /// amplitude: `<index> <re> <im>` with 17 significant digits.
    pub fn write_states<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "# code {} width {}", self.name, self.width)?;
        for (label, state) in [
            ("zero_logical", &self.zero_logical),
            ("one_logical", &self.one_logical),
        ] {
            writeln!(w, "# state {label}")?;
            for (i, z) in state.amps().iter().enumerate() {
                if z.re == 0.0 && z.im == 0.0 {
                    continue;
                }
                writeln!(w, "{} {:.16e} {:.16e}", i, z.re, z.im)?;
            }
        }
        Ok(())
    }

    /// |e0> and |e1> as bit strings of this code's width.
    pub fn accept_labels(&self) -> [BitString; 2] {
        [
            BitString::zero(self.width).expect("width validated"),
            BitString::new(1, self.width).expect("width validated"),
        ]
    }
}

/// Completes the two code-word columns to a full unitary: the remaining
/// columns come from Gram-Schmidt over the computational basis vectors in
/// index order (reversed when asked), skipping candidates that are linearly
/// dependent on what is already placed. Any such completion leaves the
/// protocol statistics unchanged because only the images of |e0> and |e1>
/// are ever constrained.
fn complete_encoder(
    width: u32,
    zero: &QState,
    one: &QState,
    reverse: bool,
) -> Array2<Complex64> {
    let dim = 1usize << width;
    let mut cols: Vec<Array1<Complex64>> = Vec::with_capacity(dim);
    cols.push(zero.amps().clone());
    cols.push(one.amps().clone());

    let order: Vec<usize> = if reverse {
        (0..dim).rev().collect()
    } else {
        (0..dim).collect()
    };
    for j in order {
        if cols.len() == dim {
            break;
        }
        let mut v: Array1<Complex64> = Array1::zeros(dim);
        v[j] = Complex64::new(1.0, 0.0);
        // the projection of e_j onto column c has coefficient conj(c[j])
        let mut touched = false;
        for c in &cols {
            let coeff = c[j].conj();
            if coeff.re != 0.0 || coeff.im != 0.0 {
                v.zip_mut_with(c, |vi, ci| *vi -= coeff * ci);
                touched = true;
            }
        }
        if touched {
            // second orthogonalization pass for 1e-12 unitarity
            for c in &cols {
                let coeff: Complex64 = c.iter().zip(v.iter()).map(|(ci, vi)| ci.conj() * vi).sum();
                if coeff.norm() > 0.0 {
                    v.zip_mut_with(c, |vi, ci| *vi -= coeff * ci);
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > tol::DEPENDENT_RESIDUAL {
            v.mapv_inplace(|z| z / norm);
            cols.push(v);
        }
    }
    assert_eq!(
        cols.len(),
        dim,
        "basis candidates must complete the encoder"
    );

    let mut u = Array2::zeros((dim, dim));
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            u[[i, j]] = *z;
        }
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{adjoint, matmul, matvec};
    use crate::trajectories::decompose;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_unitary(u: &Array2<Complex64>) {
        let product = matmul(&adjoint(u), u);
        let dim = u.nrows();
        for i in 0..dim {
            for j in 0..dim {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (product[[i, j]] - c(want, 0.0)).norm() < tol::STRUCTURAL,
                    "U^dagger U deviates at ({i},{j})"
                );
            }
        }
    }

    #[test]
    fn symmetric_n6_matches_expected_kets() {
        let code = Code::symmetric(6).unwrap();
        let a = 1.0 / 3f64.sqrt();
        for (i, amp) in code.zero_logical().amps().iter().enumerate() {
            let want = if [1, 2, 4].contains(&i) { a } else { 0.0 };
            assert!((amp - c(want, 0.0)).norm() < tol::STRUCTURAL);
        }
        for (i, amp) in code.one_logical().amps().iter().enumerate() {
            let want = if [8, 16, 32].contains(&i) { a } else { 0.0 };
            assert!((amp - c(want, 0.0)).norm() < tol::STRUCTURAL);
        }
    }

    #[test]
    fn symmetric_n2_is_dual_rail() {
        let code = Code::symmetric(2).unwrap();
        assert!((code.zero_logical().amp(1) - c(1.0, 0.0)).norm() < tol::STRUCTURAL);
        assert!((code.one_logical().amp(2) - c(1.0, 0.0)).norm() < tol::STRUCTURAL);
    }

    #[test]
    fn symmetric_n4_amplitudes() {
        let code = Code::symmetric(4).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let nonzero: Vec<usize> = code
            .zero_logical()
            .amps()
            .iter()
            .enumerate()
            .filter(|(_, z)| z.norm() > 0.0)
            .map(|(i, _)| i)
            .collect();
        assert_eq!(nonzero, vec![1, 2]);
        for i in nonzero {
            assert!((code.zero_logical().amp(i) - c(s, 0.0)).norm() < tol::STRUCTURAL);
        }
    }

    #[test]
    fn code_words_orthonormal_and_encoders_unitary() {
        for code in [
            Code::standard(),
            Code::two_qubit(),
            Code::symmetric(2).unwrap(),
            Code::symmetric(4).unwrap(),
            Code::symmetric(6).unwrap(),
            Code::symmetric(8).unwrap(),
        ] {
            let zz = code.zero_logical().inner(code.zero_logical()).unwrap();
            let oo = code.one_logical().inner(code.one_logical()).unwrap();
            let zo = code.zero_logical().inner(code.one_logical()).unwrap();
            assert!((zz - c(1.0, 0.0)).norm() < tol::STRUCTURAL);
            assert!((oo - c(1.0, 0.0)).norm() < tol::STRUCTURAL);
            assert!(zo.norm() < tol::STRUCTURAL);
            assert_unitary(code.encoder());
        }
    }

    #[test]
    fn encoder_columns_carry_code_words() {
        for code in [Code::two_qubit(), Code::symmetric(6).unwrap()] {
            let u = code.encoder();
            for (i, want) in code.zero_logical().amps().iter().enumerate() {
                assert!((u[[i, 0]] - want).norm() < tol::STRUCTURAL);
            }
            for (i, want) in code.one_logical().amps().iter().enumerate() {
                assert!((u[[i, 1]] - want).norm() < tol::STRUCTURAL);
            }
        }
    }

    #[test]
    fn encode_matches_unitary_action() {
        let code = Code::symmetric(4).unwrap();
        let c0 = c(0.6, 0.0);
        let c1 = c(0.0, 0.8);
        let direct = code.encode(c0, c1).unwrap();
        let mut e01 = Array1::zeros(16);
        e01[0] = c0;
        e01[1] = c1;
        let via_u = matvec(code.encoder(), &e01);
        for (a, b) in direct.amps().iter().zip(via_u.iter()) {
            assert!((a - b).norm() < tol::STRUCTURAL);
        }
    }

    #[test]
    fn encode_decode_round_trip() {
        let code = Code::symmetric(6).unwrap();
        let c0 = c(0.8, 0.0);
        let c1 = c(0.36, 0.48);
        let psi2 = code.encode(c0, c1).unwrap();
        let back = matvec(&adjoint(code.encoder()), &psi2.amps().clone());
        assert!((back[0] - c0).norm() < tol::STRUCTURAL);
        assert!((back[1] - c1).norm() < tol::STRUCTURAL);
        for z in back.iter().skip(2) {
            assert!(z.norm() < tol::STRUCTURAL);
        }
    }

    #[test]
    fn encode_rejects_unnormalized_pair() {
        let code = Code::standard();
        assert!(matches!(
            code.encode(c(1.0, 0.0), c(1.0, 0.0)),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn standard_code_is_identity() {
        let code = Code::standard();
        let psi = code.encode(c(0.6, 0.0), c(0.8, 0.0)).unwrap();
        assert!((psi.amp(0) - c(0.6, 0.0)).norm() < tol::STRUCTURAL);
        assert!((psi.amp(1) - c(0.8, 0.0)).norm() < tol::STRUCTURAL);
        assert_eq!(code.encoder(), &Array2::eye(2));
    }

    #[test]
    fn standard_code_jump_branch_is_undetectable() {
        // the jump branch stays inside the logical span: a jump cannot be
        // seen by any projection that preserves the code space
        let code = Code::standard();
        let psi = code.encode(c(0.6, 0.0), c(0.8, 0.0)).unwrap();
        let lambda = 0.4;
        let ens = decompose(&psi, lambda).unwrap();
        let jump = ens.branch(1).to_qstate(1).unwrap();
        let expect = c(0.8, 0.0) * (1.0 - (-2.0 * lambda).exp()).sqrt();
        assert!((jump.amp(1) - expect).norm() < tol::STRUCTURAL);
        // inside span{|0_L>, |1_L>} = the whole single-qubit space
        let p = code.manifold_projector();
        let overlap = p.overlap_probability(&jump.normalized().unwrap()).unwrap();
        assert!((overlap - 1.0).abs() < tol::STRUCTURAL);
    }

    #[test]
    fn two_qubit_code_words() {
        let code = Code::two_qubit();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((code.zero_logical().amp(0) - c(s, 0.0)).norm() < tol::STRUCTURAL);
        assert!((code.zero_logical().amp(3) - c(s, 0.0)).norm() < tol::STRUCTURAL);
        assert!((code.one_logical().amp(1) - c(s, 0.0)).norm() < tol::STRUCTURAL);
        assert!((code.one_logical().amp(2) - c(s, 0.0)).norm() < tol::STRUCTURAL);
        let encoded = code.encode(c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!((encoded.amp(0) - c(s, 0.0)).norm() < tol::STRUCTURAL);
        assert!((encoded.amp(3) - c(s, 0.0)).norm() < tol::STRUCTURAL);
    }

    #[test]
    fn two_qubit_equal_amplitudes_expand_to_quarter_weights() {
        let code = Code::two_qubit();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = code.encode(c(s, 0.0), c(s, 0.0)).unwrap();
        for i in 0..4 {
            assert!((psi.amp(i) - c(0.5, 0.0)).norm() < tol::STRUCTURAL);
        }
    }

    #[test]
    fn manifold_projector_properties() {
        let code = Code::symmetric(4).unwrap();
        let p = code.manifold_projector();
        // P |0_L> = |0_L>
        let image = matvec(p.entries(), &code.zero_logical().amps().clone());
        for (a, b) in image.iter().zip(code.zero_logical().amps().iter()) {
            assert!((a - b).norm() < tol::STRUCTURAL);
        }
        // idempotent, Hermitian, rank 2
        let squared = matmul(p.entries(), p.entries());
        for (a, b) in squared.iter().zip(p.entries().iter()) {
            assert!((a - b).norm() < tol::STRUCTURAL);
        }
        assert!(p.is_hermitian(tol::STRUCTURAL));
        let eig = p.eigenvalues();
        let ones = eig.iter().filter(|e| (**e - 1.0).abs() < 1e-10).count();
        let zeros = eig.iter().filter(|e| e.abs() < 1e-10).count();
        assert_eq!(ones, 2);
        assert_eq!(zeros, eig.len() - 2);
    }

    #[test]
    fn jump_branches_leave_the_manifold() {
        let code = Code::symmetric(4).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = code.encode(c(s, 0.0), c(0.0, s)).unwrap();
        let ens = decompose(&psi, 0.2).unwrap();
        let p = code.manifold_projector();
        for branch in ens.branches().iter().skip(1) {
            if branch.weight() == 0.0 {
                continue;
            }
            let state = branch.to_qstate(4).unwrap().normalized().unwrap();
            let inside = p.overlap_probability(&state).unwrap();
            assert!(
                inside < 1.0 - 1e-6,
                "jump branch {} stayed in the manifold",
                branch.index()
            );
        }
    }

    #[test]
    fn no_jump_branch_is_scaled_code_state() {
        for n in [2u32, 4, 6, 8] {
            for lambda in [0.05, 0.5, 2.0] {
                let code = Code::symmetric(n).unwrap();
                let c0 = c(0.6, 0.0);
                let c1 = c(0.48, 0.64);
                let psi = code.encode(c0, c1).unwrap();
                let ens = decompose(&psi, lambda).unwrap();
                let b0 = ens.branch(0).to_qstate(n).unwrap();
                let scale = (-lambda).exp();
                for i in 0..psi.dim() {
                    assert!(
                        (b0.amp(i) - psi.amp(i) * scale).norm() < tol::STRUCTURAL,
                        "N={n} lambda={lambda} index {i}"
                    );
                }
            }
        }
    }

    #[test]
    fn jump_branches_sit_on_one_hot_labels_and_match_one_logical_side() {
        let n = 6u32;
        let code = Code::symmetric(n).unwrap();
        let c0 = c(0.6, 0.0);
        let c1 = c(0.0, 0.8);
        let psi = code.encode(c0, c1).unwrap();
        let lambda = 0.3;
        let ens = decompose(&psi, lambda).unwrap();
        let expect_amp = (2.0 / f64::from(n)).sqrt() * (1.0 - (-2.0 * lambda).exp()).sqrt();
        let mut nonzero_jumps = 0;
        for branch in ens.branches().iter().skip(1) {
            if branch.weight() == 0.0 {
                continue;
            }
            nonzero_jumps += 1;
            // single term, on the branch's own one-hot label
            assert_eq!(branch.terms().len(), 1);
            let (label, amp) = branch.terms()[0];
            assert_eq!(label, branch.index());
            assert_eq!(label.count_ones(), 1);
            let side = if label < (1usize << (n / 2)) { c0 } else { c1 };
            assert!((amp - side * expect_amp).norm() < tol::STRUCTURAL);
            // orthogonal to the logical state of the other side
            let state = branch.to_qstate(n).unwrap();
            let other = if label < (1usize << (n / 2)) {
                code.one_logical()
            } else {
                code.zero_logical()
            };
            assert!(other.inner(&state).unwrap().norm() < tol::STRUCTURAL);
        }
        // every jump listed: one per one-hot label, N total
        assert_eq!(nonzero_jumps, n as usize);
    }

    #[test]
    fn code_states_have_uniform_support_amplitudes() {
        for n in [2u32, 4, 6, 8, 10] {
            let code = Code::symmetric(n).unwrap();
            let amp = (2.0 / f64::from(n)).sqrt();
            for state in [code.zero_logical(), code.one_logical()] {
                let nonzero: Vec<Complex64> = state
                    .amps()
                    .iter()
                    .copied()
                    .filter(|z| z.norm() > 0.0)
                    .collect();
                assert_eq!(nonzero.len(), (n / 2) as usize);
                for z in nonzero {
                    assert!((z - c(amp, 0.0)).norm() < tol::STRUCTURAL);
                }
            }
        }
    }

    #[test]
    fn reversed_completion_is_also_unitary() {
        let code = Code::symmetric_with_candidates(6, true).unwrap();
        assert_unitary(code.encoder());
        for (i, want) in code.zero_logical().amps().iter().enumerate() {
            assert!((code.encoder()[[i, 0]] - want).norm() < tol::STRUCTURAL);
        }
    }

    #[test]
    fn rejects_invalid_sizes() {
        assert!(Code::symmetric(3).is_err());
        assert!(Code::symmetric(0).is_err());
        assert!(Code::symmetric(14).is_err());
    }

    #[test]
    fn state_export_golden() {
        let code = Code::symmetric(4).unwrap();
        let mut buf = Vec::new();
        code.write_states(&mut buf).unwrap();
        let got = String::from_utf8(buf).unwrap();
        let want = "\
# code symmetric:4 width 4
# state zero_logical
1 7.0710678118654757e-1 0.0000000000000000e0
2 7.0710678118654757e-1 0.0000000000000000e0
# state one_logical
4 7.0710678118654757e-1 0.0000000000000000e0
8 7.0710678118654757e-1 0.0000000000000000e0
";
        assert_eq!(got, want);
    }
}
