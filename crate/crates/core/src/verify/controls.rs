//! Negative controls: deliberately broken variants whose designated check
//! must fail. A control that passes means the verifier is blind to the fault.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::hk::b_eigen_residual;
use super::{rng_for, Acc, CheckResult, Role, TolOverrides, ALG, FD};
use crate::context::SpaceContext;
use crate::fields::integrability::{integrability_residual, p_field, FD_STEP};
use crate::fields::ops::p_op;
use crate::fields::params::{random_cartan, random_m, sample_point, HkParams};
use crate::lie::{max_abs_m, Vector};
use crate::pair::{HermitianPair, RootType};

/// Default fault amplitude.
pub const DEFAULT_AMPLITUDE: f64 = 1e-2;

/// Parameters used for the controls of a space of the given type.
pub fn control_params(ty: RootType) -> HkParams {
    match ty {
        RootType::C => HkParams::new(1.0, 0.3, -0.2, 1),
        RootType::BC => HkParams::new(1.0, 0.0, 0.0, 1),
    }
}

/// A fixed random symmetric matrix commuting with I, max-abs normalized.
fn commuting_noise(pair: &HermitianPair, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let d = pair.dim_m();
    let m = DMatrix::<f64>::from_fn(d, d, |_, _| StandardNormal.sample(rng));
    let m = &m + m.transpose();
    let n = &m - &pair.i_op * &m * &pair.i_op;
    let s = max_abs_m(&n);
    n / s
}

pub fn run_negative_controls(
    ctx: &SpaceContext,
    samples: usize,
    seed: u64,
    tol: &TolOverrides,
    amplitude: f64,
) -> Vec<CheckResult> {
    let ty = ctx.rrs.root_type;
    let params = control_params(ty);
    let space = ctx.spec().to_string();
    let ps = params.to_string();
    let n = samples.clamp(1, 20);
    let mut out = Vec::new();

    // B + amplitude * N must break integrability
    {
        let id = "control.b_noise";
        let mut rng = rng_for(seed, &[&space, &ps, id]);
        let noise = commuting_noise(&ctx.pair, &mut rng).map(|v| Complex64::new(amplitude * v, 0.0));
        let base = p_field(&ctx.pair, &params);
        let field = |w: &Vector| base(w).map(|m| m + &noise);
        let mut acc = Acc::new(id, &space, Some(ps.clone()));
        for _ in 0..n {
            let pt = sample_point(&ctx.pair, &ctx.sos, &params, &mut rng);
            let (xi, eta) = (random_m(&ctx.pair, &mut rng), random_m(&ctx.pair, &mut rng));
            acc.record(
                integrability_residual(&field, &ctx.pair, &pt.w, &xi, &eta, FD_STEP),
                format!("x = {:.4?}", pt.x),
            );
        }
        acc.note(format!("designated check hk.integrability, amplitude {amplitude}"));
        out.push(acc.finish(tol.resolve(FD), Role::Control));
    }

    // S + amplitude * N must break anticommutation with I
    {
        let id = "control.s_commuting_part";
        let mut rng = rng_for(seed, &[&space, &ps, id]);
        let noise = commuting_noise(&ctx.pair, &mut rng) * amplitude;
        let mut acc = Acc::new(id, &space, Some(ps.clone()));
        let i = &ctx.pair.i_op;
        for _ in 0..n {
            let pt = sample_point(&ctx.pair, &ctx.sos, &params, &mut rng);
            let r = p_op(&ctx.pair, &params, &pt.w).map(|o| {
                let s = &o.s + &noise;
                max_abs_m(&(&s * i + i * &s))
            });
            acc.record(r, format!("x = {:.4?}", pt.x));
        }
        acc.note(format!("designated check hk.s_anticommutes_i, amplitude {amplitude}"));
        out.push(acc.finish(tol.resolve(ALG), Role::Control));
    }

    // flipping eps in B must break the eigenvalue table; eps only enters
    // through the half roots, so this control exists for type BC with a0 > 0
    if ty == RootType::BC && params.a0 > 0.0 {
        let id = "control.eps_flip";
        let mut rng = rng_for(seed, &[&space, &ps, id]);
        let flipped = if amplitude > 0.0 {
            HkParams {
                eps: -params.eps,
                ..params
            }
        } else {
            params
        };
        let mut acc = Acc::new(id, &space, Some(ps.clone()));
        for _ in 0..n {
            let x = random_cartan(&mut rng, &params, ctx.rank(), 0.3, 3.0);
            acc.record(b_eigen_residual(ctx, &flipped, &params, &x), format!("x = {x:.4?}"));
        }
        acc.note(if amplitude > 0.0 {
            "designated check hk.b_eigenvalues, eps flipped".to_string()
        } else {
            "designated check hk.b_eigenvalues, fault disabled".to_string()
        });
        out.push(acc.finish(tol.resolve(ALG), Role::Control));
    }
    out
}
