//! The one-ancilla code (|00>+|11>, |01>+|10>)/sqrt(2): acceptance follows
//! (1 + e^{-2 lambda})/2 on the nose, and the interesting part is the
//! fidelity, whose deviation from 1 starts at order lambda^2.
//!
//! The displayed closed-form fidelity 1 - 2|c0|^2|c1|^2/cosh(lambda) does
//! not reproduce the simulation (it reads 1 - 2|c0|^2|c1|^2 at zero
//! damping); the simulated value follows
//! 1 - 2|c0|^2|c1|^2 (1 - 1/cosh(lambda)) instead. Both are printed.

use num_complex::Complex64;
use phasecode::protocol::{run_once, ChannelSpec, ProtocolRun};
use phasecode::{analytics, Code, Result};

fn main() -> Result<()> {
    let code = Code::two_qubit();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (c0, c1) = (Complex64::new(s, 0.0), Complex64::new(s, 0.0));
    let c_prod = c0.norm_sqr() * c1.norm_sqr();

    println!("code {}, equal-weight input", code.name());
    println!();
    println!("  lambda   P_accept (sim)   P form        F (sim)        F displayed   F via 1-2c(1-1/cosh)");
    for lambda in [0.0, 0.01, 0.1, 0.5, 1.0] {
        let run = ProtocolRun::new(&code, ChannelSpec::Phase { lambda }, c0, c1)?;
        let report = run_once(&run)?;
        let forms = analytics::two_qubit_forms(lambda, c0.norm_sqr(), c1.norm_sqr())?;
        let cosh = (lambda.exp() + (-lambda).exp()) / 2.0;
        let alt = 1.0 - 2.0 * c_prod * (1.0 - 1.0 / cosh);
        println!(
            "  {lambda:<6}   {:.12}   {:.9}   {:.12}   {:.9}   {:.12}",
            report.p_accept_measured,
            forms.p_accept,
            report.fidelity_measured,
            forms.fidelity,
            alt
        );
    }

    println!();
    println!("small-lambda check: 1 - F(sim) is quadratic in lambda");
    for lambda in [0.01, 0.02, 0.04] {
        let run = ProtocolRun::new(&code, ChannelSpec::Phase { lambda }, c0, c1)?;
        let report = run_once(&run)?;
        println!(
            "  lambda {lambda:5}: (1 - F)/lambda^2 = {:.6}",
            (1.0 - report.fidelity_measured) / (lambda * lambda)
        );
    }
    Ok(())
}
