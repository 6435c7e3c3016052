//! Monte-Carlo realization of the mixture: draw jump branches with their
//! weights, accept each draw with its ancilla-zero probability, and watch
//! the empirical acceptance rate converge to the exact value.

use num_complex::Complex64;
use phasecode::{analytics, decompose, Code, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let code = Code::symmetric(4)?;
    let lambda = 0.2;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let psi2 = code.encode(Complex64::new(s, 0.0), Complex64::new(0.0, s))?;
    let ens = decompose(&psi2, lambda)?;
    let exact = analytics::p_accept_form(4, lambda)?;

    println!("N = 4, lambda = {lambda}, exact P_accept = {exact:.10}");
    println!();
    println!("  draws     empirical P   |delta|      standard errors");
    let mut sampler = ens.sampler(7);
    let mut accept_rng = ChaCha8Rng::seed_from_u64(8);
    let mut accepted = 0usize;
    let mut drawn = 0usize;
    for target in [1_000usize, 10_000, 100_000] {
        while drawn < target {
            let (_, state) = sampler.sample();
            let p = code.zero_logical().inner(&state)?.norm_sqr()
                + code.one_logical().inner(&state)?.norm_sqr();
            if accept_rng.gen::<f64>() < p {
                accepted += 1;
            }
            drawn += 1;
        }
        let p_hat = accepted as f64 / drawn as f64;
        let se = (p_hat * (1.0 - p_hat) / drawn as f64).sqrt();
        println!(
            "  {drawn:>7}   {p_hat:.6}      {:.2e}     {:.2}",
            (p_hat - exact).abs(),
            (p_hat - exact).abs() / se
        );
    }

    println!();
    println!("branch weights at this damping:");
    for (n, w) in ens.weights().iter().enumerate() {
        if *w > 0.0 {
            println!("  branch {n:2}: p = {w:.6}");
        }
    }
    Ok(())
}
