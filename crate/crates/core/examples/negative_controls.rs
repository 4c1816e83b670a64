//! Negative controls inject a fault and must make their designated check
//! fail. With amplitude 0 the faults vanish and the checks pass again.

use hksym::verify::{run_negative_controls, TolOverrides};
use hksym::SpaceContext;

fn main() -> hksym::Result<()> {
    for spec in ["su:1,1", "su:1,2"] {
        let ctx = SpaceContext::build(spec.parse()?)?;
        for amp in [1e-2, 0.0] {
            for c in run_negative_controls(&ctx, 10, 0, &TolOverrides::default(), amp) {
                println!(
                    "{spec:<7} amplitude {amp:<5} {:<26} residual {:.2e} (threshold {:.0e}) {}",
                    c.check_id,
                    c.max_residual,
                    c.threshold,
                    if c.passed { "check passes" } else { "check fails" }
                );
            }
        }
    }
    Ok(())
}
