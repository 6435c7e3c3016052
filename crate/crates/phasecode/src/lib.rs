//! Exact simulation and analytics for qubit codes that detect dephasing
//! errors.
//!
//! A qubit sent through a dephasing channel loses the relative phase
//! between |0> and |1> while its populations survive. Spreading the qubit
//! over N physical qubits as a superposition of single-excitation labels
//! makes every environment-induced jump kick the state out of the
//! two-dimensional logical manifold, where a projective ancilla measurement
//! can catch it; when no jump occurs the logical state is merely scaled and
//! survives intact. This crate builds that entire story twice over - once
//! as exact density-matrix evolution, once as closed-form expressions - and
//! checks the two against each other at double precision.
//!
//! What's here:
//!
//! - [`bits`]: Hamming weight/distance and the jump-selector combinatorics
//!   on basis labels.
//! - [`qstate`]: dense pure states and density matrices, projections,
//!   fidelity.
//! - [`channels`]: the dephasing and excited-state-decay superoperators.
//! - [`trajectories`]: decomposition of a damped state into its 2^N
//!   unnormalized jump branches, with weights, sampling, and exact
//!   reconstruction.
//! - [`codes`]: the symmetric N-qubit code, the two-qubit one-ancilla code,
//!   the plain representation, and their encoder unitaries.
//! - [`protocol`]: encode -> transmit -> decode -> post-select pipeline
//!   with measured-vs-predicted reports.
//! - [`analytics`]: every closed-form expression, evaluated verbatim.
//! - [`cli`]: sweep grids, CSV emission, and the `verify` invariant suite
//!   that powers the `phasecode` binary.
//!
//! # Quick start
//!
//! ```
//! use num_complex::Complex64;
//! use phasecode::{analytics, protocol, Code};
//!
//! let code = Code::symmetric(4)?;
//! let s = std::f64::consts::FRAC_1_SQRT_2;
//! let run = protocol::ProtocolRun::new(
//!     &code,
//!     protocol::ChannelSpec::Phase { lambda: 0.1 },
//!     Complex64::new(s, 0.0),
//!     Complex64::new(s, 0.0),
//! )?;
//! let report = protocol::run_once(&run)?;
//! let predicted = analytics::p_accept_form(4, 0.1)?;
//! assert!((report.p_accept_measured - predicted).abs() < 1e-10);
//! # Ok::<(), phasecode::Error>(())
//! ```
//!
//! # Runnable examples
//!
//! Each major capability has one example under `examples/`:
//!
//! ```bash
//! cargo run --release --example transmit             # one protocol run, measured vs forms
//! cargo run --release --example decompose_branches   # trajectory branches of a damped state
//! cargo run --release --example code_scaling         # J vs N, baseline crossover
//! cargo run --release --example watchdog             # periodic correction, both schedules
//! cargo run --release --example amplitude_detection  # decay errors are caught exactly
//! cargo run --release --example two_qubit_code       # the one-ancilla code and its quirk
//! cargo run --release --example monte_carlo          # sampled trajectories vs exact values
//! cargo run --release --example sweep_to_csv         # programmatic sweep, CSV on stdout
//! ```

pub mod analytics;
pub mod bits;
pub mod channels;
pub mod cli;
pub mod codes;
pub mod error;
pub mod linalg;
pub mod protocol;
pub mod qstate;
pub mod tol;
pub mod trajectories;

pub use bits::BitString;
pub use channels::{AmplitudeDamping, PhaseDamping};
pub use codes::{Code, CodeFamily};
pub use error::{Error, Result};
pub use protocol::{ChannelSpec, JOutcome, ProtocolReport, ProtocolRun};
pub use qstate::{DensityMatrix, QState};
pub use trajectories::{decompose, Branch, TrajectoryEnsemble};
