//! On su(2)/u(1) the structure has a closed form in the complex coordinate
//! z of w = z X_1. Compares the computed R and S with it under both sign
//! conventions for S.

use hksym::fields::params::HkParams;
use hksym::verify::hk::example_residual;
use hksym::SpaceContext;

fn main() -> hksym::Result<()> {
    let ctx = SpaceContext::build("su:1,1".parse()?)?;
    println!(
        "{:<16} {:>10} {:>14} {:>14}",
        "params", "|R - psi|", "|S - (+form)|", "|S - (-form)|"
    );
    for p in ["1,0,0,+1", "2,1,0,+1", "1,0.5,0.5,+1", "0,1,1,+1"] {
        let params: HkParams = p.parse()?;
        let (r, s_plus) = example_residual(&ctx, &params, 1.0)?;
        let (_, s_minus) = example_residual(&ctx, &params, -1.0)?;
        println!("{p:<16} {r:>10.2e} {s_plus:>14.2e} {s_minus:>14.2e}");
    }
    Ok(())
}
