//! Runs the full verification pipeline on a problem spec and prints the text
//! report. Pass a JSON spec path, or nothing for built-in example 2.

use nsamg::harness::{run_verification, Format, ProblemSpec};

fn main() -> nsamg::Result<()> {
    let spec = match std::env::args().nth(1) {
        Some(path) => ProblemSpec::from_path(path)?,
        None => {
            let mut s = ProblemSpec::builtin(2);
            s.trials = 50;
            s
        }
    };
    let report = run_verification(&spec)?;
    print!("{}", report.render(Format::Text)?);
    Ok(())
}
