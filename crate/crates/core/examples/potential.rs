//! The Kähler potential Q = <q(A(w)) w, w> for a2 = 0: checks the profile
//! equation b(x) (x^2 q(x^2))' = x and the identity 2 Im dbar Q = theta.

use hksym::fields::ops::b_scalar;
use hksym::fields::params::{random_m, sample_point, HkParams};
use hksym::fields::potential::{dbar_q_form, potential, PotentialProfile};
use hksym::fields::tangent::theta;
use hksym::lie::Vector;
use hksym::SpaceContext;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> hksym::Result<()> {
    let params = HkParams::new(1.0, 0.5, 0.0, 1);
    let prof = PotentialProfile::new(params)?;
    println!("params {params}, base point t0 = {}", prof.t0);
    for x in [0.9f64, 1.3, 2.0] {
        let h = 1e-4;
        let f = |y: f64| -> hksym::Result<f64> { Ok(y * y * prof.q(y * y)?) };
        let deriv = (f(x + h)? - f(x - h)?) / (2.0 * h);
        let b = b_scalar(&params, x).expect("inside the domain");
        println!("  x = {x:.2}: b (x^2 q)' - x = {:.2e}", b * deriv - x);
    }

    let ctx = SpaceContext::build("sp:2".parse()?)?;
    let flat = HkParams::new(1.0, 0.0, 0.0, 1);
    let prof = PotentialProfile::new(flat)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let pt = sample_point(&ctx.pair, &ctx.sos, &flat, &mut rng);
    let eta = Vector::from_fn(ctx.pair.dim(), |_, _| rng.random::<f64>() - 0.5);
    let u = ctx.pair.from_m(&random_m(&ctx.pair, &mut rng));
    let form = dbar_q_form(&ctx.pair, &prof, &pt.w, &eta, &u)?;
    println!("sp:2 with {flat}: Q(w) = {:.6}", potential(&ctx.pair, &prof, &pt.w)?);
    println!(
        "  2 Im dbar Q = {:.10}, theta = {:.10}",
        2.0 * form.im,
        theta(&ctx.pair, &pt.w, &eta)
    );
    Ok(())
}
