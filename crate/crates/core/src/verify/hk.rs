//! Checks of the hyperkähler structure attached to one parameter quadruple.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{rng_for, Acc, CheckResult, Role, Tol, TolOverrides, ALG, FD};
use crate::context::SpaceContext;
use crate::error::{Error, Result};
use crate::fields::integrability::{
    closed_form_residual_a, closed_form_residual_b, imaginary_part_residual, integrability_residual, p_field, CMat,
    FD_STEP,
};
use crate::fields::ops::{b_op, b_prime, b_scalar, p_op, upsilon_star};
use crate::fields::params::{random_ad_k, random_cartan, random_m, sample_point, DomainPoint, HkParams};
use crate::fields::potential::{dbar_q_form, potential, PotentialProfile};
use crate::fields::tangent::{
    j_pm, j_tensor, j_tensor_real_times_i, omega, omega_prime, omega_prime_from_d, theta, TangentVector,
};
use crate::lie::{complexify, join, max_abs_m, max_abs_mc, CVector, Vector};
use crate::pair::{HermitianPair, RootType, SpaceSpec};
use crate::restricted::rho_m;

type CheckFn = fn(&HkEnv, &mut ChaCha8Rng, &mut Acc) -> Option<f64>;
type AppliesFn = fn(&HkEnv) -> bool;

pub struct HkEnv<'a> {
    pub ctx: &'a SpaceContext,
    pub params: HkParams,
    pub samples: usize,
}

impl HkEnv<'_> {
    fn pair(&self) -> &HermitianPair {
        &self.ctx.pair
    }

    fn point(&self, rng: &mut ChaCha8Rng) -> DomainPoint {
        sample_point(&self.ctx.pair, &self.ctx.sos, &self.params, rng)
    }

    fn cartan(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        random_cartan(rng, &self.params, self.ctx.rank(), 0.3, 3.0)
    }

    fn m_unit(&self, rng: &mut ChaCha8Rng) -> Vector {
        random_m(&self.ctx.pair, rng)
    }

    fn c_zero(&self) -> bool {
        self.params.c2() == 0.0
    }
}

fn always(_: &HkEnv) -> bool {
    true
}

fn c_zero(env: &HkEnv) -> bool {
    env.c_zero()
}

fn a2_zero(env: &HkEnv) -> bool {
    env.params.a2 == 0.0
}

fn boundary_applies(env: &HkEnv) -> bool {
    env.ctx.rrs.root_type == RootType::C && (env.params.c2() > 0.0 || env.params.a0 < 0.0)
}

fn origin_applies(env: &HkEnv) -> bool {
    env.c_zero() && env.params.eps == 1 && env.params.a0 > 0.0
}

fn is_su11(env: &HkEnv) -> bool {
    env.ctx.spec() == SpaceSpec::Su { p: 1, q: 1 }
}

/// (id, threshold class, applicability, implementation); an implementation
/// may return a threshold that replaces the class default.
pub const HK_CHECKS: &[(&str, Tol, AppliesFn, CheckFn)] = &[
    ("hk.symmetric", Tol::Fixed(1e-10), always, symmetric),
    ("hk.real_part_positive", Tol::Fixed(0.0), always, real_part_positive),
    ("hk.r_commutes_i", ALG, always, r_commutes_i),
    ("hk.s_anticommutes_i", ALG, always, s_anticommutes_i),
    ("hk.r_s_commute", ALG, always, r_s_commute),
    ("hk.s_r_inverse", ALG, always, s_r_inverse),
    ("hk.j_squared", ALG, always, j_squared),
    (
        "hk.j_minus_anticommutes",
        Tol::Fixed(1e-10),
        always,
        j_minus_anticommutes,
    ),
    ("hk.isotropy", ALG, always, isotropy),
    ("hk.isotropy_positive", Tol::Fixed(0.0), always, isotropy_positive),
    ("hk.integrability", FD, always, integrability),
    ("hk.closed_form_a", FD, always, closed_form_a),
    ("hk.closed_form_b", FD, always, closed_form_b),
    ("hk.imaginary_part", FD, always, imaginary_part),
    ("hk.conjugate_structures", FD, always, conjugate_structures),
    (
        "hk.omega_prime_exterior",
        Tol::Fixed(1e-12),
        always,
        omega_prime_exterior,
    ),
    ("hk.omega_prime_via_j", Tol::Fixed(1e-12), always, omega_prime_via_j),
    ("hk.b_eigenvalues", ALG, always, b_eigenvalues),
    ("hk.b_torus_form", ALG, always, b_torus_form),
    ("hk.b_scalar_derivative", Tol::Fixed(1e-8), always, b_scalar_derivative),
    ("hk.s_vanishing", Tol::Fixed(1e-10), always, s_vanishing),
    ("hk.r_block_diagonal", ALG, always, r_block_diagonal),
    ("hk.boundary", Tol::Fixed(0.1), boundary_applies, boundary),
    ("hk.equivariance", ALG, always, equivariance),
    ("hk.hypercomplex_pair", ALG, c_zero, hypercomplex_pair),
    ("hk.hypercomplex_integrability", FD, c_zero, hypercomplex_integrability),
    ("hk.origin_limit", Tol::Fixed(1e-4), origin_applies, origin_limit),
    ("hk.potential_ode", FD, a2_zero, potential_ode),
    ("hk.potential_theta", FD, c_zero, potential_theta),
    ("hk.potential_invariance", ALG, a2_zero, potential_invariance),
    ("hk.example_closed_form", Tol::Fixed(1e-9), is_su11, example_closed_form),
];

/// Runs every applicable check for one (space, params) cell. Parameters
/// outside the admissible set are an input error.
pub fn run_hk_suite(
    ctx: &SpaceContext,
    params: &HkParams,
    samples: usize,
    seed: u64,
    tol: &TolOverrides,
) -> Result<Vec<CheckResult>> {
    params.check(ctx.rrs.root_type)?;
    let env = HkEnv {
        ctx,
        params: *params,
        samples,
    };
    let space = ctx.spec().to_string();
    let ps = params.to_string();
    Ok(HK_CHECKS
        .par_iter()
        .filter(|(_, _, applies, _)| applies(&env))
        .map(|(id, t, _, f)| {
            let mut rng = rng_for(seed, &[&space, &ps, id]);
            let mut acc = Acc::new(id, &space, Some(ps.clone()));
            let threshold = f(&env, &mut rng, &mut acc).unwrap_or_else(|| tol.resolve(*t));
            acc.finish(threshold, Role::Check)
        })
        .collect())
}

fn x_note(p: &DomainPoint) -> String {
    format!("x = {:.4?}", p.x)
}

fn symmetric(env: &HkEnv, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Option<f64> {
    for _ in 0..env.samples {
        let pt = env.point(rng);
        let r = p_op(env.pair(), &env.params, &pt.w)
            .map(|o| max_abs_m(&(&o.r - o.r.transpose())).max(max_abs_m(&(&o.s - o.s.transpose()))));
        acc.record(r, x_note(&pt));
    }
    None
}

fn real_part_positive(env: &HkEnv, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Option<f64> {
    for _ in 0..env.samples {
        let pt = env.point(rng);
        let r = p_op(env.pair(), &env.params, &pt.w)
            .map(|o| -SymmetricEigen::new((&o.r + o.r.transpose()) * 0.5).eigenvalues.min());
        acc.record(r, format!("{}: minus smallest eigenvalue of R", x_note(&pt)));
    }
    None
}

fn with_ops<F>(env: &HkEnv, rng: &mut ChaCha8Rng, acc: &mut Acc, f: F)
where
    F: Fn(&HermitianPair, &crate::fields::ops::HkOperators) -> f64,
{
    for _ in 0..env.samples {
        let pt = env.point(rng);
        let r = p_op(env.pair(), &env.params, &pt.w).map(|o| f(env.pair(), &o));
        acc.record(r, x_note(&pt));
    }
}

fn r_commutes_i(env: &HkEnv, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Option<f64> {
    with_ops(env, rng, acc, |p, o| max_abs_m(&(&o.r * &p.i_op - &p.i_op * &o.r)));
    None
}

fn s_anticommutes_i(env: &HkEnv, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Option<f64> {
    with_ops(env, rng, acc, |p, o| max_abs_m(&(&o.s * &p.i_op + &p.i_op * &o.s)));
    None
}

fn r_s_commute(env: &HkEnv, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Option<f64> {
    with_ops(env, rng, acc, |_, o| max_abs_m(&(&o.r * &o.s - &o.s * &o.r)));
    None
}

fn s_r_inverse(env: &HkEnv, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Option<f64> {
    let params = env.params;
    for _ in 0..env.samples {
        let pt = env.point(rng);
        let r = (|| {
            let p = env.pair();
            let o = p_op(p, &params, &pt.w)?;
            let ri =
                o.r.clone()
                    .try_inverse()
                    .ok_or(Error::SingularPoint { eigenvalue: 0.0 })?;
            let d = p.dim_m();
            let u = match &o.upsilon_star {
                Some(u) => u.clone(),
                None => upsilon_star(p, &pt.w)?,
            };
            let expect = (DMatrix::<f64>::identity(d, d) * params.a1 + &p.i_op * params.a2) * u;
            Ok(max_abs_m(&(&o.s * ri - expect)))
        })();
        acc.record(r, x_note(&pt));
    }
    None
}

fn j_at(env: &HkEnv, w: &Vector) -> Result<crate::fields::tangent::TangentBlockOp> {
    let o = p_op(env.pair(), &env.params, w)?;
    j_tensor(&o.r, &o.s)
}

fn j_squared(env: &HkEnv, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Option<f64> {
    for _ in 0..env.samples {
        let pt = env.point(rng);
        acc.record(
            j_at(env, &pt.w).map(|j| max_abs_m(&j.square_plus_identity())),
            x_note(&pt),
        );
    }
    None
}

fn j_minus_anticommutes(env: &HkEnv, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Option<f64> {
    let jm = j_pm(env.pair(), -1.0);
    for _ in 0..env.samples {
        let pt = env.point(rng);
        acc.record(j_at(env, &pt.w).map(|j| max_abs_m(&j.anticommutator(&jm))), x_note(&pt));
    }
    None
}

fn cfrom_m(pair: &HermitianPair, v: &CVector) -> CVector {
    join(&pair.from_m(&v.map(|z| z.re)), &pair.from_m(&v.map(|z| z.im)))
}

fn random_c(env: &HkEnv, rng: &mut ChaCha8Rng) -> CVector {
    let (a, b) = (env.m_unit(rng), env.m_unit(rng));
    join(&a, &(b * rng.random::<f64>()))
}

/// Z = (xi, i P xi) in m-coordinates; these span the -i eigenspace of J(P).
fn generator(pm: &CMat, xi: &CVector) -> (CVector, CVector) {
    let u = pm * xi * Complex64::new(0.0, 1.0);
    (xi.clone(), u)
}

fn tangent(pair: &HermitianPair, z: &(CVector, CVector)) -> TangentVector {
    TangentVector {
        xi: cfrom_m(pair, &z.0),
        u: cfrom_m(pair, &z.1),
    }
}

fn isotropy(env: &HkEnv, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Option<f64> {
    let p = env.pair();
    for _ in 0..env.samples {
        let pt = env.point(rng);
        let (x1, x2) = (random_c(env, rng), random_c(env, rng));
        let r = (|| {
            let o = p_op(p, &env.params, &pt.w)?;
            let pm = o.p();
            let j = j_tensor(&o.r, &o.s)?.matrix.map(|v| Complex64::new(v, 0.0));
            let (z1, z2) = (generator(&pm, &x1), generator(&pm, &x2));
            let om = omega(p, &pt.w, &tangent(p, &z1), &tangent(p, &z2)).norm();
            let stacked = DVector::from_iterator(2 * p.dim_m(), z1.0.iter().chain(z1.1.iter()).copied());
            let eig = (&j * &stacked + &stacked * Complex64::new(0.0, 1.0))
                .iter()
                .fold(0.0f64, |m, z| m.max(z.norm()));
            let zbar = (z1.0.map(|z| z.conj()), z1.1.map(|z| z.conj()));
            let herm = omega(p, &pt.w, &tangent(p, &z1), &tangent(p, &zbar)) * Complex64::new(0.0, -1.0);
            Ok(om.max(eig).max(herm.im.abs()))
        })();
        acc.record(r, format!("{}: Omega on F(P), J(P) eigenvector, reality", x_note(&pt)));
    }
    None
}

fn isotropy_positive(env: &HkEnv, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Option<f64> {
    let p = env.pair();
    for _ in 0..env.samples {
        let pt = env.point(rng);
        let x = random_c(env, rng);
        let r = p_op(p, &env.params, &pt.w).map(|o| {
            let z = generator(&o.p(), &x);
            let zbar = (z.0.map(|v| v.conj()), z.1.map(|v| v.conj()));
            let h = omega(p, &pt.w, &tangent(p, &z), &tangent(p, &zbar)) * Complex64::new(0.0, -1.0);
            -h.re / x.norm_squared()
        });
        acc.record(r, format!("{}: minus normalized -i Omega(Z, conj Z)", x_note(&pt)));
    }
    None
}

fn fd_loop<F>(env: &HkEnv, rng: &mut ChaCha8Rng, acc: &mut Acc, f: F)
where
    F: Fn(&Vector, &Vector, &Vector) -> Result<f64>,
{
    for _ in 0..env.samples {
        let pt = env.point(rng);
        let (xi, eta) = (env.m_unit(rng), env.m_unit(rng));
        acc.record(f(&pt.w, &xi, &eta), x_note(&pt));
    }
}

fn integrability(env: &HkEnv, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Option<f64> {
    let field = p_field(env.pair(), &env.params);
    fd_loop(env, rng, acc, |w, xi, eta| {
        integrability_residual(&field, env.pair(), w, xi, eta, FD_STEP)
    });
    None
}

fn closed_form_a(env: &HkEnv, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Option<f64> {
    fd_loop(env, rng, acc, |w, xi, eta| {
        closed_form_residual_a(env.pair(), &env.params, w, xi, eta, FD_STEP)
    });
    None
}

fn closed_form_b(env: &HkEnv, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Option<f64> {
    fd_loop(env, rng, acc, |w, xi, eta| {
        closed_form_residual_b(env.pair(), &env.params, w, xi, eta, FD_STEP)
    });
    None
}

fn imaginary_part(env: &HkEnv, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Option<f64> {
    fd_loop(env, rng, acc, |w, xi, eta| {
        imaginary_part_residual(env.pair(), &env.params, w, xi, eta)
    });
    None
}

fn conjugate_structures(env: &HkEnv, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Option<f64> {
    let base = p_field(env.pair(), &env.params);
    let neg = |w: &Vector| base(w).map(|m| -m);
    let conj = |w: &Vector| base(w).map(|m| m.map(|z| z.conj()));
    fd_loop(env, rng, acc, |w, xi, eta| {
        let a = integrability_residual(&neg, env.pair(), w, xi, eta, FD_STEP)?;
        let b = integrability_residual(&conj, env.pair(), w, xi, eta, FD_STEP)?;
        Ok(a.max(b))
    });
    None
}

fn omega_prime_exterior(env: &HkEnv, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Option<f64> {
    let p = env.pair();
    for s in 0..10 * env.samples {
        let pt = env.point(rng);
        let v: Vec<Vector> = (0..4).map(|_| p.from_m(&env.m_unit(rng))).collect();
        let a = omega_prime_from_d(p, &pt.w, &v[0], &v[1], &v[2], &v[3]);
        let b = omega_prime(p, &v[0], &v[1], &v[2], &v[3]);
        acc.push((a - b).abs(), format!("pair {s}"));
    }
    None
}

fn omega_prime_via_j(env: &HkEnv, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Option<f64> {
    let p = env.pair();
    let jm = j_pm(p, -1.0);
    let d = p.dim_m();
    let split = |v: &Vector| {
        (
            p.from_m(&v.rows(0, d).into_owned()),
            p.from_m(&v.rows(d, d).into_owned()),
        )
    };
    for s in 0..10 * env.samples {
        let pt = env.point(rng);
        let x = Vector::from_iterator(2 * d, env.m_unit(rng).iter().chain(env.m_unit(rng).iter()).copied());
        let y = Vector::from_iterator(2 * d, env.m_unit(rng).iter().chain(env.m_unit(rng).iter()).copied());
        let r = j_at(env, &pt.w).map(|j| {
            let z = &jm.matrix * (&j.matrix * (&j.matrix * &x));
            let (zx, zu) = split(&z);
            let (yx, yu) = split(&y);
            let (xx, xu) = split(&x);
            let lhs = omega(
                p,
                &pt.w,
                &TangentVector {
                    xi: complexify(&zx),
                    u: complexify(&zu),
                },
                &TangentVector {
                    xi: complexify(&yx),
                    u: complexify(&yu),
                },
            );
            (lhs - omega_prime(p, &xx, &xu, &yx, &yu)).norm()
        });
        acc.record(r, format!("pair {s}"));
    }
    None
}

/// Eigenvalue of B on m_lambda + I m_lambda at a point of a, from the
/// scalar profile b: e + sum_j d_j (b(x_j) - e), d = restriction of lambda.
pub fn b_block_eigenvalue(params: &HkParams, d: &[f64], x: &[f64]) -> Option<f64> {
    let e = params.eps() * params.a0.abs().sqrt();
    let mut v = e;
    for (dj, xj) in d.iter().zip(x) {
        if *dj != 0.0 {
            v += dj * (b_scalar(params, *xj)? - e);
        }
    }
    Some(v)
}

/// max over restricted roots of |B v - b_lambda v| at w = sum x_j X_j, with B
/// built from `params_b` and the oracle from `params_oracle`.
pub fn b_eigen_residual(ctx: &SpaceContext, params_b: &HkParams, params_oracle: &HkParams, x: &[f64]) -> Result<f64> {
    let p = &ctx.pair;
    let b = b_op(p, params_b, &ctx.sos.combine(x))?;
    let mut worst = 0.0f64;
    let mut blocks: Vec<(Vec<f64>, Vec<Vector>)> = Vec::new();
    for (i, r) in ctx.rrs.roots.iter().enumerate() {
        let d: Vec<f64> = (0..ctx.rank()).map(|j| rho_m(&r.root).coord(j)).collect();
        blocks.push((d, ctx.rrs.m_block(p, i)));
    }
    for (d, block) in blocks {
        let mu = b_block_eigenvalue(params_oracle, &d, x)
            .ok_or_else(|| Error::OutsideDomain(format!("b undefined at x = {x:?}")))?;
        for v in block {
            let vm = p.to_m(&v);
            worst = worst.max(crate::lie::max_abs(&(&b * &vm - &vm * mu)));
        }
    }
    Ok(worst)
}

fn b_eigenvalues(env: &HkEnv, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Option<f64> {
    for _ in 0..env.samples {
        let x = env.cartan(rng);
        acc.record(
            b_eigen_residual(env.ctx, &env.params, &env.params, &x),
            format!("x = {x:.4?}"),
        );
    }
    None
}

fn b_torus_form(env: &HkEnv, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Option<f64> {
    let p = env.pair();
    let g = &p.algebra;
    let e = env.params.eps() * env.params.a0.abs().sqrt();
    let d = p.dim_m();
    for _ in 0..env.samples {
        let x = env.cartan(rng);
        let r = (|| {
            let b = b_op(p, &env.params, &env.ctx.sos.combine(&x))?;
            let mut t = Vector::zeros(g.dim);
            for (j, xj) in x.iter().enumerate() {
                let bj = b_scalar(&env.params, *xj).ok_or(Error::OutsideDomain("b undefined".into()))?;
                t -= &env.ctx.sos.t[j] * (bj - e);
            }
            let expect = &p.i_op * p.restrict_m(&g.ad(&t)) + DMatrix::<f64>::identity(d, d) * e;
            Ok(max_abs_m(&(b - expect)))
        })();
        acc.record(r, format!("x = {x:.4?}"));
    }
    None
}

fn b_scalar_derivative(env: &HkEnv, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Option<f64> {
    let h = 1e-5;
    for _ in 0..env.samples {
        let x = env.cartan(rng)[0];
        let r = (|| {
            let bp = b_scalar(&env.params, x + h)?;
            let bm = b_scalar(&env.params, x - h)?;
            Some(((bp - bm) / (2.0 * h) - b_prime(&env.params, x)?).abs())
        })()
        .ok_or_else(|| Error::OutsideDomain(format!("b undefined near x = {x}")));
        acc.record(r, format!("x = {x:.4}"));
    }
    None
}

fn s_vanishing(env: &HkEnv, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Option<f64> {
    let c_zero = env.c_zero();
    for _ in 0..env.samples {
        let pt = env.point(rng);
        let r = p_op(env.pair(), &env.params, &pt.w).map(|o| {
            let n = max_abs_m(&o.s);
            if c_zero {
                n
            } else {
                -n
            }
        });
        acc.record(r, x_note(&pt));
    }
    if c_zero {
        None
    } else {
        acc.note("c > 0: residual is minus the size of S, which must exceed 1e-3 somewhere");
        Some(-1e-3)
    }
}

fn r_block_diagonal(env: &HkEnv, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Option<f64> {
    let p = env.pair();
    let g = &p.algebra;
    let blocks: Vec<Vec<Vector>> = (0..env.ctx.rrs.roots.len())
        .map(|i| env.ctx.rrs.m_block(p, i))
        .collect();
    for _ in 0..env.samples {
        let x = env.cartan(rng);
        let r = p_op(p, &env.params, &env.ctx.sos.combine(&x)).map(|o| {
            let apply = |v: &Vector| p.from_m(&(&o.r * p.to_m(v)));
            let mut worst = 0.0f64;
            for xj in &env.ctx.sos.x {
                let rx = apply(xj);
                let off = &rx - xj * g.invariant_form(xj, &rx);
                worst = worst.max(crate::lie::max_abs(&off));
            }
            for block in &blocks {
                for v in block {
                    let rv = apply(v);
                    let mut proj = Vector::zeros(g.dim);
                    for b in block {
                        proj += b * g.invariant_form(b, &rv);
                    }
                    worst = worst.max(crate::lie::max_abs(&(rv - proj)));
                }
            }
            worst
        });
        acc.record(r, format!("x = {x:.4?}"));
    }
    None
}

fn boundary(env: &HkEnv, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Option<f64> {
    let p = env.pair();
    for _ in 0..env.samples.min(20) {
        let mut x = env.cartan(rng);
        let j = rng.random_range(0..x.len());
        x[j] = x[j].signum() * (env.params.a_dagger() + 1e-3).sqrt();
        let w = random_ad_k(p, rng, 1.0) * env.ctx.sos.combine(&x);
        let r = p_op(p, &env.params, &w).map(|o| SymmetricEigen::new(o.r.clone()).eigenvalues.min());
        acc.record(r, format!("x = {x:.4?}, smallest eigenvalue of R"));
    }
    None
}

fn equivariance(env: &HkEnv, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Option<f64> {
    let p = env.pair();
    for _ in 0..env.samples.min(50) {
        let pt = env.point(rng);
        let ad_k = random_ad_k(p, rng, 1.0);
        let k = p.restrict_m(&ad_k);
        let moved = &ad_k * &pt.w;
        let r = (|| {
            let a = p_op(p, &env.params, &pt.w)?;
            let b = p_op(p, &env.params, &moved)?;
            let conj = |m: &DMatrix<f64>| &k * m * k.transpose();
            let ua = upsilon_star(p, &pt.w)?;
            let ub = upsilon_star(p, &moved)?;
            let res = [
                max_abs_m(&(conj(&ua) - ub)),
                max_abs_m(&(conj(&a.b) - &b.b)),
                max_abs_m(&(conj(&a.r) - &b.r)),
                max_abs_m(&(conj(&a.s) - &b.s)),
            ];
            Ok(res.iter().fold(0.0f64, |m, v| m.max(*v)))
        })();
        acc.record(r, format!("{}: Upsilon_*, B, R, S", x_note(&pt)));
    }
    None
}

fn hypercomplex_pair(env: &HkEnv, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Option<f64> {
    let p = env.pair();
    for _ in 0..env.samples {
        let pt = env.point(rng);
        let r = (|| {
            let o = p_op(p, &env.params, &pt.w)?;
            let jp = j_tensor(&o.r, &o.s)?;
            let jpi = j_tensor_real_times_i(p, &o.r)?;
            Ok(max_abs_m(&jp.anticommutator(&jpi)).max(max_abs_m(&jpi.square_plus_identity())))
        })();
        acc.record(r, x_note(&pt));
    }
    None
}

fn hypercomplex_integrability(env: &HkEnv, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Option<f64> {
    let p = env.pair();
    let base = p_field(p, &env.params);
    let ic = p.i_op.map(|v| Complex64::new(v, 0.0));
    // J(P I) is the structure of the real (nonsymmetric) field P I
    let field = |w: &Vector| base(w).map(|m| m * &ic);
    fd_loop(env, rng, acc, |w, xi, eta| {
        integrability_residual(&field, p, w, xi, eta, FD_STEP)
    });
    None
}

fn origin_limit(env: &HkEnv, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Option<f64> {
    let p = env.pair();
    let d = p.dim_m();
    let target = DMatrix::<f64>::identity(d, d) * env.params.a0.sqrt();
    for _ in 0..env.samples.min(20) {
        let x = vec![1e-6; env.ctx.rank()];
        let w = random_ad_k(p, rng, 1.0) * env.ctx.sos.combine(&x);
        let r = p_op(p, &env.params, &w).map(|o| max_abs_mc(&(o.p() - target.map(|v| Complex64::new(v, 0.0)))));
        acc.record(r, "x_j = 1e-6");
    }
    None
}

fn potential_ode(env: &HkEnv, _: &mut ChaCha8Rng, acc: &mut Acc) -> Option<f64> {
    let prof = match PotentialProfile::new(env.params) {
        Ok(p) => p,
        Err(e) => {
            acc.record(Err(e), "profile");
            return None;
        }
    };
    let floor = env.params.a_dagger().max(0.0);
    let h = 1e-4;
    let n = env.samples.max(2);
    for i in 0..n {
        let x = (floor + 0.3 + 2.7 * i as f64 / (n - 1) as f64).sqrt();
        let r = (|| {
            let f = |y: f64| Ok::<f64, Error>(y * y * prof.q(y * y)?);
            let deriv = (f(x + h)? - f(x - h)?) / (2.0 * h);
            let b = b_scalar(&env.params, x).ok_or(Error::OutsideDomain("b undefined".into()))?;
            Ok((b * deriv - x).abs())
        })();
        acc.record(r, format!("x = {x:.4}"));
    }
    acc.note(format!("integration base point t0 = {}", prof.t0));
    None
}

fn potential_theta(env: &HkEnv, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Option<f64> {
    let p = env.pair();
    let prof = match PotentialProfile::new(env.params) {
        Ok(p) => p,
        Err(e) => {
            acc.record(Err(e), "profile");
            return None;
        }
    };
    for _ in 0..env.samples {
        let pt = env.point(rng);
        let eta = Vector::from_fn(p.dim(), |_, _| rng.random::<f64>() - 0.5);
        let u = p.from_m(&env.m_unit(rng));
        let r = dbar_q_form(p, &prof, &pt.w, &eta, &u).map(|v| (2.0 * v.im - theta(p, &pt.w, &eta)).abs());
        acc.record(r, x_note(&pt));
    }
    acc.note(format!("integration base point t0 = {}", prof.t0));
    None
}

fn potential_invariance(env: &HkEnv, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Option<f64> {
    let p = env.pair();
    let prof = match PotentialProfile::new(env.params) {
        Ok(p) => p,
        Err(e) => {
            acc.record(Err(e), "profile");
            return None;
        }
    };
    for _ in 0..env.samples.min(50) {
        let pt = env.point(rng);
        let moved = random_ad_k(p, rng, 1.0) * &pt.w;
        let r = (|| {
            let a = potential(p, &prof, &pt.w)?;
            let b = potential(p, &prof, &moved)?;
            Ok((a - b).abs() / (1.0 + a.abs()))
        })();
        acc.record(r, x_note(&pt));
    }
    None
}

/// psi(r) = b(r) r^4 / (r^4 + c^2).
pub fn psi(params: &HkParams, r: f64) -> Option<f64> {
    let r4 = r.powi(4);
    Some(b_scalar(params, r)? * r4 / (r4 + params.c2()))
}

/// 50 grid points z with |z|^2 above the domain bound.
pub fn example_grid(params: &HkParams) -> Vec<Complex64> {
    let floor = params.a_dagger().max(0.0);
    (0..50)
        .map(|k| {
            let r2 = floor + 0.1 + 3.0 * k as f64 / 49.0;
            let th = 0.3 + std::f64::consts::TAU * 0.381_966 * k as f64;
            Complex64::from_polar(r2.sqrt(), th)
        })
        .collect()
}

/// Closed-form R and S on su(2)/u(1) at w = z X_1, in the basis (X_1, IX_1)
/// with m identified with C. S(v) = sign psi (a1 + i a2) conj(z^-2 v).
pub fn su2_closed_form(params: &HkParams, z: Complex64, sign: f64) -> Option<(DMatrix<f64>, DMatrix<f64>)> {
    let ps = psi(params, z.norm())?;
    let r = DMatrix::identity(2, 2) * ps;
    let mu = Complex64::new(params.a1, params.a2) * (z * z).inv().conj() * (sign * ps);
    let s = DMatrix::from_row_slice(2, 2, &[mu.re, mu.im, mu.im, -mu.re]);
    Some((r, s))
}

/// Computed R and S at w = z X_1 in the basis (X_1, IX_1).
pub fn su2_computed(ctx: &SpaceContext, params: &HkParams, z: Complex64) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let p = &ctx.pair;
    let (x1, y1) = (&ctx.sos.x[0], &ctx.sos.y[0]);
    let w = x1 * z.re + y1 * z.im;
    let o = p_op(p, params, &w)?;
    let e = DMatrix::from_columns(&[p.to_m(x1), p.to_m(y1)]);
    Ok((e.transpose() * &o.r * &e, e.transpose() * &o.s * &e))
}

/// Largest deviation of computed (R, S) from the closed form over the grid.
pub fn example_residual(ctx: &SpaceContext, params: &HkParams, sign: f64) -> Result<(f64, f64)> {
    let (mut wr, mut ws) = (0.0f64, 0.0f64);
    for z in example_grid(params) {
        let (r, s) = su2_computed(ctx, params, z)?;
        let (rc, sc) = su2_closed_form(params, z, sign)
            .ok_or_else(|| Error::OutsideDomain(format!("psi undefined at |z| = {}", z.norm())))?;
        wr = wr.max(max_abs_m(&(r - rc)));
        ws = ws.max(max_abs_m(&(s - sc)));
    }
    Ok((wr, ws))
}

fn example_closed_form(env: &HkEnv, _: &mut ChaCha8Rng, acc: &mut Acc) -> Option<f64> {
    for z in example_grid(&env.params) {
        let r = (|| {
            let (r, s) = su2_computed(env.ctx, &env.params, z)?;
            let (rc, sc) = su2_closed_form(&env.params, z, -1.0).ok_or(Error::OutsideDomain("psi".into()))?;
            Ok(max_abs_m(&(r - rc)).max(max_abs_m(&(s - sc))))
        })();
        acc.record(r, format!("z = {z:.4}"));
    }
    acc.note("S(v) = -psi (a1 + i a2) conj(z^-2 v), the sign implied by the operator formula");
    None
}
