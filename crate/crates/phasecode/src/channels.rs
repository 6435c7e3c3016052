//! Noise superoperators acting on density matrices.
//!
//! Both channels act identically and independently on every qubit, as if
//! each qubit saw its own bath.

use crate::error::{Error, Result};
use crate::qstate::{DensityMatrix, MAX_DENSITY_WIDTH};
use ndarray::Array2;

/// Pure dephasing with cumulative exponent `lambda`: the entry <a|rho|b>
/// is scaled by e^{-lambda h(a,b)} where h is the Hamming distance, so
/// populations are untouched and coherences between far-apart labels decay
/// fastest. `lambda` is a cumulative exponent, not a rate times time;
/// splitting a transmission into segments means splitting lambda.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseDamping {
    lambda: f64,
    width: u32,
}

impl PhaseDamping {
    pub fn new(lambda: f64, width: u32) -> Result<Self> {
        if width == 0 || width > MAX_DENSITY_WIDTH {
            return Err(Error::WidthOutOfRange {
                width,
                min: 1,
                max: MAX_DENSITY_WIDTH,
            });
        }
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: lambda,
                constraint: "must be finite and >= 0",
            });
        }
        Ok(Self { lambda, width })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// Applies the channel: `out[a][b] = in[a][b] * e^{-lambda h(a,b)}`.
    /// The diagonal (h = 0) is unchanged, so the trace is preserved exactly.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.width() != self.width {
            return Err(Error::WidthMismatch {
                left: self.width,
                right: rho.width(),
            });
        }
        let dim = rho.dim();
        // e^{-lambda d} for every possible Hamming distance d
        let factors: Vec<f64> = (0..=self.width)
            .map(|d| (-self.lambda * f64::from(d)).exp())
            .collect();
        let mut entries = Array2::zeros((dim, dim));
        for a in 0..dim {
            for b in 0..dim {
                let z = rho.entry(a, b);
                if z.re == 0.0 && z.im == 0.0 {
                    continue;
                }
                let d = (a ^ b).count_ones() as usize;
                entries[[a, b]] = z * factors[d];
            }
        }
        DensityMatrix::new(self.width, entries)
    }
}

/// Per-qubit excited-state decay: with probability `gamma` a qubit in |1>
/// relaxes to |0>. Implemented as the standard two-operator decay map on
/// each qubit (no-decay operator scaling |1> by sqrt(1-gamma); decay
/// operator taking |1> to sqrt(gamma)|0>), composed independently across
/// qubits. Trace preserving on every input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeDamping {
    gamma: f64,
    width: u32,
}

impl AmplitudeDamping {
    pub fn new(gamma: f64, width: u32) -> Result<Self> {
        if width == 0 || width > MAX_DENSITY_WIDTH {
            return Err(Error::WidthOutOfRange {
                width,
                min: 1,
                max: MAX_DENSITY_WIDTH,
            });
        }
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidParameter {
                name: "gamma",
                value: gamma,
                constraint: "must be in [0, 1]",
            });
        }
        Ok(Self { gamma, width })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// Applies the decay map qubit by qubit.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.width() != self.width {
            return Err(Error::WidthMismatch {
                left: self.width,
                right: rho.width(),
            });
        }
        let dim = rho.dim();
        let keep = (1.0 - self.gamma).sqrt();
        let mut current = rho.entries().clone();
        for qubit in 0..self.width {
            let bit = 1usize << qubit;
            let mut next = Array2::zeros((dim, dim));
            for a in 0..dim {
                let a_set = a & bit != 0;
                for b in 0..dim {
                    let b_set = b & bit != 0;
                    // no-decay operator scales excited components
                    let mut z = current[[a, b]];
                    if a_set {
                        z *= keep;
                    }
                    if b_set {
                        z *= keep;
                    }
                    // decay operator maps the (1,1) block down to (0,0)
                    if !a_set && !b_set {
                        z += current[[a | bit, b | bit]] * self.gamma;
                    }
                    next[[a, b]] = z;
                }
            }
            current = next;
        }
        DensityMatrix::new(self.width, current)
    }
}
