//! The single-wavefunction picture: split a dephased state into its no-jump
//! branch and jump branches, watch the weights, and confirm the Gram sum
//! rebuilds the density matrix exactly.

use num_complex::Complex64;
use phasecode::{decompose, Code, PhaseDamping, QState, Result};

fn main() -> Result<()> {
    // a bare qubit first: the jump branch hides inside the logical span
    let psi = QState::qubit(Complex64::new(0.6, 0.0), Complex64::new(0.8, 0.0));
    let lambda = 0.5;
    let ens = decompose(&psi, lambda)?;
    println!("bare qubit 0.6|0> + 0.8|1>, lambda = {lambda}:");
    for branch in ens.branches() {
        if branch.weight() == 0.0 {
            continue;
        }
        println!("  branch {}  weight {:.6}", branch.index(), branch.weight());
        for &(i, z) in branch.terms() {
            println!("    |{i:01b}>  {z:.6}");
        }
    }

    // the four-qubit code state: every jump lands on a one-hot label
    // outside the logical manifold
    let code = Code::symmetric(4)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let psi2 = code.encode(Complex64::new(s, 0.0), Complex64::new(s, 0.0))?;
    let ens = decompose(&psi2, lambda)?;
    println!();
    println!("encoded over {} qubits, lambda = {lambda}:", code.width());
    for branch in ens.branches() {
        if branch.weight() == 0.0 {
            continue;
        }
        println!("  branch {:2}  weight {:.6}", branch.index(), branch.weight());
        for &(i, z) in branch.terms() {
            println!("    |{i:04b}>  {z:.6}");
        }
    }

    let gram = ens.reconstruct()?;
    let damped = PhaseDamping::new(lambda, 4)?.apply(&psi2.to_density()?)?;
    println!();
    println!(
        "max |gram sum - damped density matrix| = {:.3e}",
        gram.max_abs_diff(&damped)
    );
    Ok(())
}
