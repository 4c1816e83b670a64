//! Builds each supported family of Hermitian symmetric pairs and prints its
//! dimensions, root counts and the cascade of strongly orthogonal roots.

use hksym::SpaceContext;

fn main() -> hksym::Result<()> {
    for spec in ["su:1,1", "su:1,2", "su:2,2", "sp:2", "so*:3", "soB:3"] {
        let ctx = SpaceContext::build(spec.parse()?)?;
        let p = &ctx.pair;
        let noncompact = ctx.roots.noncompact().count();
        println!(
            "{spec:<7} dim g = {:>2}  dim k = {:>2}  dim m = {:>2}  positive roots = {:>2} ({noncompact} noncompact)  rank = {}",
            p.dim(),
            p.dim_k(),
            p.dim_m(),
            ctx.roots.positive.len(),
            ctx.rank()
        );
        for (j, &i) in ctx.sos.roots.iter().enumerate() {
            let c: Vec<String> = ctx.roots.positive[i]
                .coords
                .iter()
                .map(|v| format!("{v:+.3}"))
                .collect();
            println!("        beta_{} torus coordinates [{}]", j + 1, c.join(", "));
        }
    }
    Ok(())
}
