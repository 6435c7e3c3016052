//! How the residual coherence J improves with code size, and where the
//! symmetric code starts beating the bare qubit: exactly at
//! N > 2 (1 + e^lambda).

use num_complex::Complex64;
use phasecode::protocol::{run_once, ChannelSpec, ProtocolRun};
use phasecode::{analytics, Code, Result};

fn main() -> Result<()> {
    let lambda = 0.1;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let baseline = analytics::baseline_j_form(lambda)?;

    println!("lambda = {lambda}, baseline J (bare qubit) = {baseline:.12}");
    println!(
        "crossover threshold 2(1 + e^lambda) = {:.4}",
        analytics::crossover_threshold(lambda)
    );
    println!();
    println!("   N   J simulated       J closed form     P_accept      beats bare?");
    for n in [2u32, 4, 6, 8, 10] {
        let code = Code::symmetric(n)?;
        let run = ProtocolRun::new(
            &code,
            ChannelSpec::Phase { lambda },
            Complex64::new(s, 0.0),
            Complex64::new(s, 0.0),
        )?;
        let report = run_once(&run)?;
        let j = report.j_measured.value_or_nan();
        println!(
            "  {n:2}   {j:.12}    {:.12}    {:.6}      {}",
            report.j_closed_form,
            report.p_accept_measured,
            if j > baseline { "yes" } else { "no" }
        );
    }

    println!();
    println!("closed-form scan of the crossover:");
    for lambda in [0.1, 0.5, 1.0] {
        let threshold = analytics::crossover_threshold(lambda);
        let first_winner = (2..=64u32)
            .step_by(2)
            .find(|&n| analytics::j_form(n, lambda).unwrap() > (-lambda).exp());
        println!(
            "  lambda {lambda:>4}: threshold {threshold:7.3}, first even N that wins: {:?}",
            first_winner
        );
    }
    Ok(())
}
