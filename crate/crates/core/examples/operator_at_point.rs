//! Evaluates P = R + iS, B and the differential of Upsilon at a rotated
//! point of su(4)/s(u(2)+u(2)) and checks the algebraic relations between them.

use hksym::fields::ops::p_op;
use hksym::fields::params::{random_ad_k, HkParams};
use hksym::lie::max_abs_m;
use hksym::SpaceContext;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hksym::Result<()> {
    let ctx = SpaceContext::build("su:2,2".parse()?)?;
    let params = HkParams::new(0.5, 0.3, -0.2, 1);
    params.check(ctx.rrs.root_type)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let w = random_ad_k(&ctx.pair, &mut rng, 1.0) * ctx.sos.combine(&[1.2, -0.8]);
    let ops = p_op(&ctx.pair, &params, &w)?;
    let i = &ctx.pair.i_op;
    let u = ops.upsilon_star.clone().expect("c > 0");
    let d = ctx.pair.dim_m();
    let r_inv = ops.r.clone().try_inverse().expect("R is invertible");
    let expect = (DMatrix::<f64>::identity(d, d) * params.a1 + i * params.a2) * &u;
    println!("params {params}, point with Cartan coordinates (1.2, -0.8)");
    println!(
        "smallest eigenvalue of R       {:.6}",
        SymmetricEigen::new(ops.r.clone()).eigenvalues.min()
    );
    println!(
        "|RI - IR|                      {:.2e}",
        max_abs_m(&(&ops.r * i - i * &ops.r))
    );
    println!(
        "|SI + IS|                      {:.2e}",
        max_abs_m(&(&ops.s * i + i * &ops.s))
    );
    println!(
        "|RS - SR|                      {:.2e}",
        max_abs_m(&(&ops.r * &ops.s - &ops.s * &ops.r))
    );
    println!(
        "|S R^-1 - (a1 + a2 I) U|       {:.2e}",
        max_abs_m(&(&ops.s * r_inv - expect))
    );
    Ok(())
}
