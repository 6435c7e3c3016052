//! Drive a sweep programmatically: same machinery as `phasecode sweep`,
//! CSV on stdout, summary on stderr.

use phasecode::cli::{
    run_sweep, AmplitudeSpec, ChannelKind, CodeSelector, SweepConfig,
};
use phasecode::Result;

fn main() -> Result<()> {
    let cfg = SweepConfig {
        code: CodeSelector::Symmetric(6),
        channel: ChannelKind::Phase,
        lambdas: vec![0.0, 0.05, 0.1, 0.5, 1.0],
        gammas: vec![],
        amplitudes: AmplitudeSpec::UniformGrid(3),
        rounds: 1,
        seed: 1,
        out: None,
        workers: None,
    };
    let output = run_sweep(&cfg)?;
    print!("{}", output.csv);
    eprint!("{}", output.summary);
    Ok(())
}
