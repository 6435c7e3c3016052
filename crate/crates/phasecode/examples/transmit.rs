//! One end-to-end transmission: encode a qubit over four physical qubits,
//! dephase it, decode, post-select on the ancilla, and compare everything
//! measured against the closed forms.

use num_complex::Complex64;
use phasecode::protocol::{run_once, ChannelSpec, ProtocolRun};
use phasecode::{Code, Result};

fn main() -> Result<()> {
    let code = Code::symmetric(4)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (c0, c1) = (Complex64::new(s, 0.0), Complex64::new(0.0, s));
    let lambda = 0.1;

    let run = ProtocolRun::new(&code, ChannelSpec::Phase { lambda }, c0, c1)?;
    let report = run_once(&run)?;

    println!("code {}   channel phase(lambda = {lambda})", report.code_name);
    println!("input qubit: c0 = {c0}, c1 = {c1}");
    println!();
    println!(
        "P_accept   measured {:.15}   closed form {:.15}",
        report.p_accept_measured, report.p_accept_closed_form
    );
    println!(
        "J          measured {:.15}   closed form {:.15}",
        report.j_measured.value_or_nan(),
        report.j_closed_form
    );
    println!(
        "fidelity   measured {:.15}   closed form {:.15}",
        report.fidelity_measured, report.fidelity_closed_form
    );

    let rho5 = report.accepted_qubit.expect("accepting run");
    println!();
    println!("accepted qubit rho5:");
    for a in 0..2 {
        println!(
            "  [{:+.6}{:+.6}i  {:+.6}{:+.6}i]",
            rho5.entry(a, 0).re,
            rho5.entry(a, 0).im,
            rho5.entry(a, 1).re,
            rho5.entry(a, 1).im
        );
    }
    Ok(())
}
