//! Prints the positive restricted roots, their multiplicities, the partner
//! under I and the root type for a few spaces.

use hksym::restricted::rho_m;
use hksym::SpaceContext;

fn main() -> hksym::Result<()> {
    for spec in ["su:1,2", "su:2,2", "sp:2", "su:2,3"] {
        let ctx = SpaceContext::build(spec.parse()?)?;
        let rrs = &ctx.rrs;
        println!("{spec}: type {}{}", rrs.root_type, ctx.rank());
        for r in &rrs.roots {
            let partner = r
                .partner
                .map(|i| rrs.roots[i].root.to_string())
                .unwrap_or_else(|| "0".into());
            println!(
                "  {:<10} mult {}  I-partner {:<10} restriction {}",
                r.root.to_string(),
                r.multiplicity(),
                partner,
                rho_m(&r.root)
            );
        }
    }
    Ok(())
}
