//! Single-wavefunction decomposition of a phase-damped pure state.
//!
//! A damped N-qubit state splits into 2^N unnormalized branches indexed by
//! a jump pattern n. Branch 0 is the no-jump branch, a non-unitary rotation
//! of the source; branch n >= 1 collects the basis labels whose set bits
//! contain n's (the qubits that jumped must have been excited). The Gram
//! sum of the branches reconstructs the phase-damped density matrix
//! entrywise, and the squared branch norms are the mixture weights.

use crate::bits::{supersets, BitString};
use crate::error::{Error, Result};
use crate::qstate::{DensityMatrix, QState, MAX_DENSITY_WIDTH};
use crate::tol;
use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One unnormalized branch, stored sparsely as (basis index, amplitude)
/// pairs sorted by index. Branch n touches only the 2^(N-h(n)) labels that
/// pass the jump selector.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    index: usize,
    terms: Vec<(usize, Complex64)>,
}

impl Branch {
    /// The jump pattern n this branch belongs to.
    pub fn index(&self) -> usize {
        self.index
    }

    /// Sparse amplitudes, sorted by basis index. Exact zeros are omitted.
    pub fn terms(&self) -> &[(usize, Complex64)] {
        &self.terms
    }

    /// <phi_n|phi_n>, the weight of this branch in the mixture.
    pub fn weight(&self) -> f64 {
        self.terms.iter().map(|(_, z)| z.norm_sqr()).sum()
    }

    /// Overlap <alpha|phi_n>.
    pub fn overlap(&self, alpha: &QState) -> Complex64 {
        self.terms
            .iter()
            .map(|&(i, z)| alpha.amp(i).conj() * z)
            .sum()
    }

    /// Dense materialization of the branch.
    pub fn to_qstate(&self, width: u32) -> Result<QState> {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << width];
        for &(i, z) in &self.terms {
            amps[i] = z;
        }
        QState::new(width, amps)
    }
}

/// The full indexed family of branches for one source state and damping.
#[derive(Debug, Clone)]
pub struct TrajectoryEnsemble {
    width: u32,
    lambda: f64,
    source: QState,
    branches: Vec<Branch>,
}

/// Decomposes a normalized state under damping `lambda` into its 2^N
/// branches.
///
/// Branch 0 has amplitude c_b e^{-lambda h(b)} on |b>; branch n >= 1 has
/// amplitude c_b e^{-lambda h(n,b)} (1 - e^{-2 lambda})^{h(n)/2} on exactly
/// the labels b that pass the jump selector, and zero elsewhere.
pub fn decompose(psi: &QState, lambda: f64) -> Result<TrajectoryEnsemble> {
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::InvalidParameter {
            name: "lambda",
            value: lambda,
            constraint: "must be finite and >= 0",
        });
    }
    let norm_sq = psi.norm_sq();
    if (norm_sq - 1.0).abs() > tol::NORMALIZATION {
        return Err(Error::NotNormalized { norm_sq });
    }
    let width = psi.width();
    if width > MAX_DENSITY_WIDTH {
        // keeps the ensemble reconstructible as a density matrix
        return Err(Error::WidthOutOfRange {
            width,
            min: 1,
            max: MAX_DENSITY_WIDTH,
        });
    }
    let dim = 1usize << width;
    let jump = (1.0 - (-2.0 * lambda).exp()).sqrt();
    let mut branches = Vec::with_capacity(dim);

    // no-jump branch: every label, scaled by its own weight
    let mut zero_terms = Vec::new();
    for b in 0..dim {
        let c = psi.amp(b);
        if c.re == 0.0 && c.im == 0.0 {
            continue;
        }
        let h = b.count_ones();
        zero_terms.push((b, c * (-lambda * f64::from(h)).exp()));
    }
    branches.push(Branch {
        index: 0,
        terms: zero_terms,
    });

    for n in 1..dim {
        let hn = n.count_ones();
        let jump_factor = jump.powi(hn as i32);
        let mut terms = Vec::new();
        if jump_factor != 0.0 {
            let nb = BitString::new(n as u32, width)?;
            for b in supersets(&nb) {
                let c = psi.amp(b.index());
                if c.re == 0.0 && c.im == 0.0 {
                    continue;
                }
                // h(n, b) = h(b) - h(n) since n's bits are contained in b's
                let dist = b.weight() - hn;
                terms.push((b.index(), c * (-lambda * f64::from(dist)).exp() * jump_factor));
            }
        }
        branches.push(Branch { index: n, terms });
    }

    Ok(TrajectoryEnsemble {
        width,
        lambda,
        source: psi.clone(),
        branches,
    })
}

impl TrajectoryEnsemble {
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn source(&self) -> &QState {
        &self.source
    }

    pub fn branch(&self, n: usize) -> &Branch {
        &self.branches[n]
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    /// The weights p_n = <phi_n|phi_n>. Nonnegative, summing to 1 for a
    /// normalized source.
    pub fn weights(&self) -> Vec<f64> {
        self.branches.iter().map(Branch::weight).collect()
    }

    /// Gram sum over branches, sum_n |phi_n><phi_n|. Equals the
    /// phase-damped density matrix of the source entrywise.
    pub fn reconstruct(&self) -> Result<DensityMatrix> {
        let dim = 1usize << self.width;
        let mut entries = Array2::zeros((dim, dim));
        for branch in &self.branches {
            for &(i, zi) in &branch.terms {
                for &(j, zj) in &branch.terms {
                    entries[[i, j]] += zi * zj.conj();
                }
            }
        }
        DensityMatrix::new(self.width, entries)
    }

    /// A reproducible branch sampler over the ensemble weights.
    pub fn sampler(&self, seed: u64) -> BranchSampler<'_> {
        let weights = self.weights();
        let total: f64 = weights.iter().sum();
        assert!(
            total > 0.0,
            "all-zero branch weights: source cannot have been normalized"
        );
        let mut indices = Vec::new();
        let mut cdf = Vec::new();
        let mut acc = 0.0;
        for (n, w) in weights.iter().enumerate() {
            if *w > 0.0 {
                acc += w;
                indices.push(n);
                cdf.push(acc);
            }
        }
        BranchSampler {
            ensemble: self,
            indices,
            cdf,
            total: acc,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// One draw from a fresh sampler with the given seed: the branch index
    /// and the normalized branch state. Deterministic for a fixed seed.
    pub fn sample_branch(&self, seed: u64) -> (usize, QState) {
        self.sampler(seed).sample()
    }
}

/// Inverse-CDF sampler over branch weights. Holds the only mutable state
/// (the generator); a fixed seed reproduces the identical draw sequence.
pub struct BranchSampler<'a> {
    ensemble: &'a TrajectoryEnsemble,
    indices: Vec<usize>,
    cdf: Vec<f64>,
    total: f64,
    rng: ChaCha8Rng,
}

impl BranchSampler<'_> {
    /// Draws a branch n with probability p_n and returns |phi_n>/sqrt(p_n).
    pub fn sample(&mut self) -> (usize, QState) {
        let u: f64 = self.rng.gen::<f64>() * self.total;
        let pos = self.cdf.partition_point(|&c| c <= u);
        let pos = pos.min(self.indices.len() - 1);
        let n = self.indices[pos];
        let state = self
            .ensemble
            .branch(n)
            .to_qstate(self.ensemble.width)
            .expect("branch width matches ensemble")
            .normalized()
            .expect("sampled branch has positive weight");
        (n, state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::PhaseDamping;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn lambda_zero_collapses_to_branch_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let psi = QState::random(3, &mut rng).unwrap();
        let ens = decompose(&psi, 0.0).unwrap();
        let w = ens.weights();
        assert!((w[0] - 1.0).abs() < tol::STRUCTURAL);
        for wn in &w[1..] {
            assert_eq!(*wn, 0.0);
        }
        let b0 = ens.branch(0).to_qstate(3).unwrap();
        for i in 0..8 {
            assert!((b0.amp(i) - psi.amp(i)).norm() < tol::STRUCTURAL);
        }
    }

    #[test]
    fn single_qubit_branches_match_hand_expansion() {
        let c0 = c(0.6, 0.0);
        let c1 = c(0.0, 0.8);
        let psi = QState::qubit(c0, c1);
        let lambda = 0.9;
        let ens = decompose(&psi, lambda).unwrap();

        let e = (-lambda).exp();
        let jump = (1.0 - (-2.0 * lambda).exp()).sqrt();
        let b0 = ens.branch(0);
        assert_eq!(b0.terms().len(), 2);
        assert!((b0.terms()[0].1 - c0).norm() < tol::STRUCTURAL);
        assert!((b0.terms()[1].1 - c1 * e).norm() < tol::STRUCTURAL);

        let b1 = ens.branch(1);
        assert_eq!(b1.terms().len(), 1);
        assert_eq!(b1.terms()[0].0, 1);
        assert!((b1.terms()[0].1 - c1 * jump).norm() < tol::STRUCTURAL);

        // jump weight |c1|^2 (1 - e^{-2 lambda})
        let w = ens.weights();
        assert!((w[1] - 0.64 * (1.0 - (-2.0 * lambda).exp())).abs() < tol::STRUCTURAL);
    }

    #[test]
    fn reconstruction_matches_channel_small_widths() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for width in 1..=4u32 {
            for lambda in [0.05, 0.4, 2.0] {
                let psi = QState::random(width, &mut rng).unwrap();
                let ens = decompose(&psi, lambda).unwrap();
                let gram = ens.reconstruct().unwrap();
                let damped = PhaseDamping::new(lambda, width)
                    .unwrap()
                    .apply(&psi.to_density().unwrap())
                    .unwrap();
                assert!(gram.max_abs_diff(&damped) < 1e-10);
            }
        }
    }

    #[test]
    fn branch_support_respects_selector() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let psi = QState::random(4, &mut rng).unwrap();
        let ens = decompose(&psi, 0.7).unwrap();
        for n in 1..16usize {
            let nb = BitString::new(n as u32, 4).unwrap();
            for &(i, _) in ens.branch(n).terms() {
                let b = BitString::new(i as u32, 4).unwrap();
                assert!(crate::bits::jump_selector(&nb, &b).unwrap());
            }
        }
    }

    #[test]
    fn weights_sum_to_one_and_match_norms() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let psi = QState::random(4, &mut rng).unwrap();
        let ens = decompose(&psi, 0.6).unwrap();
        let w = ens.weights();
        let total: f64 = w.iter().sum();
        assert!((total - 1.0).abs() < 1e-10);
        for (n, wn) in w.iter().enumerate() {
            let dense = ens.branch(n).to_qstate(4).unwrap();
            assert!((wn - dense.norm_sq()).abs() < tol::STRUCTURAL);
        }
    }

    #[test]
    fn overlap_additivity_matches_density() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let psi = QState::random(3, &mut rng).unwrap();
        let alpha = QState::random(3, &mut rng).unwrap();
        let lambda = 0.45;
        let ens = decompose(&psi, lambda).unwrap();
        let via_branches: f64 = ens
            .branches()
            .iter()
            .map(|b| b.overlap(&alpha).norm_sqr())
            .sum();
        let rho = PhaseDamping::new(lambda, 3)
            .unwrap()
            .apply(&psi.to_density().unwrap())
            .unwrap();
        let via_density = rho.overlap_probability(&alpha).unwrap();
        assert!((via_branches - via_density).abs() < tol::STRUCTURAL);
    }

    #[test]
    fn sampler_lambda_zero_always_draws_branch_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let psi = QState::random(2, &mut rng).unwrap();
        let ens = decompose(&psi, 0.0).unwrap();
        let mut sampler = ens.sampler(99);
        for _ in 0..100 {
            assert_eq!(sampler.sample().0, 0);
        }
    }

    #[test]
    fn empirical_jump_frequency_single_qubit() {
        // |c1|^2 = 0.5 and lambda = ln 2, so e^{-2 lambda} = 1/4 and the
        // jump probability is 0.5 * (1 - 1/4) = 0.375
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = QState::qubit(c(s, 0.0), c(s, 0.0));
        let ens = decompose(&psi, std::f64::consts::LN_2).unwrap();
        let mut sampler = ens.sampler(2024);
        let draws = 100_000;
        let jumps = (0..draws).filter(|_| sampler.sample().0 == 1).count();
        let freq = jumps as f64 / draws as f64;
        assert!((freq - 0.375).abs() < 0.005, "freq = {freq}");
    }

    #[test]
    fn fixed_seed_reproduces_sequence() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let psi = QState::random(3, &mut rng).unwrap();
        let ens = decompose(&psi, 0.8).unwrap();
        let mut a = ens.sampler(7);
        let mut b = ens.sampler(7);
        for _ in 0..50 {
            let (na, sa) = a.sample();
            let (nb, sb) = b.sample();
            assert_eq!(na, nb);
            assert_eq!(sa, sb);
        }
        assert_eq!(ens.sample_branch(7).0, ens.sampler(7).sample().0);
    }

    #[test]
    fn monte_carlo_mixture_converges() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let psi = QState::random(2, &mut rng).unwrap();
        let lambda = 0.5;
        let ens = decompose(&psi, lambda).unwrap();
        let exact = PhaseDamping::new(lambda, 2)
            .unwrap()
            .apply(&psi.to_density().unwrap())
            .unwrap();
        let m = 20_000usize;
        let mut sampler = ens.sampler(5);
        let mut acc = Array2::<Complex64>::zeros((4, 4));
        for _ in 0..m {
            let (_, state) = sampler.sample();
            for a in 0..4 {
                for b in 0..4 {
                    acc[[a, b]] += state.amp(a) * state.amp(b).conj();
                }
            }
        }
        acc.mapv_inplace(|z| z / m as f64);
        let empirical = DensityMatrix::new(2, acc).unwrap();
        let dev = empirical.max_abs_diff(&exact);
        assert!(dev < 5.0 / (m as f64).sqrt(), "dev = {dev}");
    }

    #[test]
    fn unnormalized_input_rejected() {
        let psi = QState::qubit(c(1.0, 0.0), c(0.5, 0.0));
        assert!(matches!(
            decompose(&psi, 0.1),
            Err(Error::NotNormalized { .. })
        ));
    }
}
