//! Parameter-independent checks: algebra, pair, roots, cascade, restricted
//! roots, restriction maps, and spectral-calculus identities.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{flag, rng_for, Acc, CheckResult, Role, Tol, TolOverrides, ALG, FD, FLAG};
use crate::context::SpaceContext;
use crate::fields::ops::{a_op, q_hat, q_hat_radial, upsilon, upsilon_star};
use crate::fields::params::random_ad_k;
use crate::lie::{complexify, max_abs, max_abs_c, max_abs_m, orthonormalize, Vector};
use crate::pair::RootType;
use crate::restricted::{
    check_centralizer, check_quadratic_identity, k_partner_for, restrict_root, rho_k, rho_m, HalfRoot, RootShape,
};
use crate::roots::lex_cmp;

/// Signature shared by all structure checks.
type CheckFn = fn(&Env, &mut ChaCha8Rng, &mut Acc);

pub struct Env<'a> {
    pub ctx: &'a SpaceContext,
    pub samples: usize,
}

/// (id, threshold class, implementation)
pub const STRUCTURE_CHECKS: &[(&str, Tol, CheckFn)] = &[
    ("algebra.antisymmetry", Tol::Fixed(1e-12), antisymmetry),
    ("algebra.jacobi", Tol::Fixed(1e-12), jacobi),
    ("algebra.ad_invariance", Tol::Fixed(1e-12), ad_invariance),
    ("algebra.form_positive", Tol::Fixed(0.0), form_positive),
    ("pair.cartan_relations", Tol::Fixed(1e-10), cartan_relations),
    ("pair.orthogonality", Tol::Fixed(1e-12), orthogonality),
    ("pair.complex_structure", Tol::Fixed(1e-10), complex_structure),
    ("pair.i_in_adk", Tol::Fixed(1e-10), i_in_adk),
    ("roots.torus_action", Tol::Fixed(1e-10), torus_action),
    ("roots.triple_normalization", Tol::Fixed(1e-10), triple_normalization),
    ("roots.simple_system", Tol::Fixed(1e-8), simple_system),
    ("roots.noncompact_sums", FLAG, noncompact_sums),
    ("roots.nonnegative_pairing", Tol::Fixed(1e-10), nonnegative_pairing),
    ("roots.counts", FLAG, root_counts),
    ("cascade.strong_orthogonality", FLAG, strong_orthogonality),
    ("cascade.sl2_relations", Tol::Fixed(1e-10), sl2_relations),
    ("cascade.dual_pairing", Tol::Fixed(1e-10), dual_pairing),
    ("cascade.unit_length", Tol::Fixed(1e-10), unit_length),
    ("restricted.decomposition", ALG, decomposition),
    ("restricted.multiplicities", FLAG, multiplicities),
    ("restricted.bc_membership", ALG, bc_membership),
    ("restricted.pairing_table", FLAG, pairing_table),
    ("restricted.type", FLAG, root_type),
    ("restricted.k_partner", Tol::Fixed(1e-10), k_partner),
    ("moore.restriction_image", ALG, restriction_image),
    ("moore.root_space_sums", ALG, root_space_sums),
    ("moore.torus_action_m", ALG, torus_action_m),
    ("moore.torus_action_k", ALG, torus_action_k),
    ("structure.quadratic_identity", Tol::Fixed(1e-10), quadratic_identity),
    ("structure.centralizer", ALG, centralizer),
    ("spectral.upsilon_on_cartan", Tol::Fixed(1e-10), upsilon_on_cartan),
    ("spectral.upsilon_star_eigen", ALG, upsilon_star_eigen),
    ("spectral.upsilon_star_fd", FD, upsilon_star_fd),
    ("spectral.upsilon_star_i", ALG, upsilon_star_i),
    ("spectral.q_hat_on_cartan", Tol::Fixed(1e-10), q_hat_on_cartan),
    ("spectral.quadratic_hat", Tol::Fixed(1e-10), quadratic_hat),
    ("spectral.eigen_transport", Tol::Fixed(1e-8), eigen_transport),
    ("spectral.derivation_identity", Tol::Alg(1e-7), derivation_identity),
];

pub fn run_structure_suite(ctx: &SpaceContext, samples: usize, seed: u64, tol: &TolOverrides) -> Vec<CheckResult> {
    let env = Env { ctx, samples };
    let space = ctx.spec().to_string();
    STRUCTURE_CHECKS
        .iter()
        .map(|(id, t, f)| {
            let mut rng = rng_for(seed, &[&space, id]);
            let mut acc = Acc::new(id, &space, None);
            f(&env, &mut rng, &mut acc);
            let mut threshold = tol.resolve(*t);
            if *id == "spectral.upsilon_star_i" && ctx.rrs.root_type == RootType::BC {
                // for BC the differential must fail to anticommute with I
                threshold = -1e-3;
            }
            acc.finish(threshold, Role::Check)
        })
        .collect()
}

fn gauss(rng: &mut ChaCha8Rng, n: usize) -> Vector {
    Vector::from_fn(n, |_, _| StandardNormal.sample(rng))
}

fn random_m_vec(env: &Env, rng: &mut ChaCha8Rng) -> Vector {
    let p = &env.ctx.pair;
    p.from_m(&gauss(rng, p.dim_m()))
}

/// Random Cartan coordinates with |x_j| in [0.5, 2] and distinct moduli.
fn random_x(env: &Env, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..env.ctx.rank())
            .map(|_| {
                let m = 0.5 + 1.5 * rng.random::<f64>();
                if rng.random::<bool>() {
                    m
                } else {
                    -m
                }
            })
            .collect();
        let distinct = x
            .iter()
            .enumerate()
            .all(|(i, a)| x.iter().skip(i + 1).all(|b| (a.abs() - b.abs()).abs() > 0.05));
        if distinct {
            return x;
        }
    }
}

/// A random point of m in general position (rotated Cartan point).
fn random_general(env: &Env, rng: &mut ChaCha8Rng) -> Vector {
    let x = random_x(env, rng);
    random_ad_k(&env.ctx.pair, rng, 1.0) * env.ctx.sos.combine(&x)
}

fn antisymmetry(env: &Env, _: &mut ChaCha8Rng, acc: &mut Acc) {
    let g = &env.ctx.pair.algebra;
    for i in 0..g.dim {
        for j in 0..g.dim {
            let r = (0..g.dim).fold(0.0f64, |m, k| m.max((g.c(i, j, k) + g.c(j, i, k)).abs()));
            acc.push(r, format!("pair ({i},{j})"));
        }
    }
}

fn jacobi(env: &Env, rng: &mut ChaCha8Rng, acc: &mut Acc) {
    let g = &env.ctx.pair.algebra;
    let jac = |x: &Vector, y: &Vector, z: &Vector| {
        max_abs(&(g.bracket(x, &g.bracket(y, z)) + g.bracket(y, &g.bracket(z, x)) + g.bracket(z, &g.bracket(x, y))))
    };
    if g.dim <= 15 {
        let e = |i: usize| {
            let mut v = Vector::zeros(g.dim);
            v[i] = 1.0;
            v
        };
        for i in 0..g.dim {
            for j in i + 1..g.dim {
                for k in j + 1..g.dim {
                    acc.push(jac(&e(i), &e(j), &e(k)), format!("basis ({i},{j},{k})"));
                }
            }
        }
    }
    for s in 0..env.samples {
        let (x, y, z) = (gauss(rng, g.dim), gauss(rng, g.dim), gauss(rng, g.dim));
        acc.push(jac(&x, &y, &z), format!("random triple {s}"));
    }
}

fn ad_invariance(env: &Env, rng: &mut ChaCha8Rng, acc: &mut Acc) {
    let g = &env.ctx.pair.algebra;
    for s in 0..env.samples {
        let (x, y, z) = (gauss(rng, g.dim), gauss(rng, g.dim), gauss(rng, g.dim));
        let r = g.invariant_form(&g.bracket(&x, &y), &z) + g.invariant_form(&y, &g.bracket(&x, &z));
        acc.push(r.abs(), format!("random triple {s}"));
    }
}

fn form_positive(env: &Env, _: &mut ChaCha8Rng, acc: &mut Acc) {
    let g = &env.ctx.pair.algebra;
    let eig = SymmetricEigen::new(g.gram.clone());
    acc.push(-eig.eigenvalues.min(), "minus smallest eigenvalue of the Gram matrix");
}

fn cartan_relations(env: &Env, _: &mut ChaCha8Rng, acc: &mut Acc) {
    let p = &env.ctx.pair;
    let g = &p.algebra;
    for (i, a) in p.k_basis.iter().enumerate() {
        for (j, b) in p.k_basis.iter().enumerate() {
            acc.push(max_abs(&p.project_m(&g.bracket(a, b))), format!("[k{i},k{j}] in k"));
        }
        for (j, b) in p.m_basis.iter().enumerate() {
            acc.push(max_abs(&p.project_k(&g.bracket(a, b))), format!("[k{i},m{j}] in m"));
        }
    }
    for (i, a) in p.m_basis.iter().enumerate() {
        for (j, b) in p.m_basis.iter().enumerate() {
            acc.push(max_abs(&p.project_m(&g.bracket(a, b))), format!("[m{i},m{j}] in k"));
        }
    }
}

fn orthogonality(env: &Env, _: &mut ChaCha8Rng, acc: &mut Acc) {
    let p = &env.ctx.pair;
    let g = &p.algebra;
    let mut all = p.k_basis.clone();
    all.extend(p.m_basis.iter().cloned());
    let mut worst = 0.0f64;
    for (i, a) in all.iter().enumerate() {
        for (j, b) in all.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g.invariant_form(a, b) - target).abs());
        }
    }
    acc.push(worst, "k + m basis is orthonormal");
    acc.push(flag(all.len() == g.dim), "dim k + dim m = dim g");
}

fn complex_structure(env: &Env, _: &mut ChaCha8Rng, acc: &mut Acc) {
    let p = &env.ctx.pair;
    let g = &p.algebra;
    let d = p.dim_m();
    let id = DMatrix::<f64>::identity(d, d);
    acc.push(max_abs_m(&(&p.i_op * &p.i_op + &id)), "I^2 = -1");
    acc.push(max_abs_m(&(p.i_op.transpose() * &p.i_op - &id)), "I is an isometry");
    for (i, a) in p.m_basis.iter().enumerate() {
        for (j, b) in p.m_basis.iter().enumerate() {
            let r = g.bracket(&p.apply_i(a), &p.apply_i(b)) - g.bracket(a, b);
            acc.push(max_abs(&r), format!("[Im{i},Im{j}] = [m{i},m{j}]"));
        }
        for (j, z) in p.k_basis.iter().enumerate() {
            let r = p.apply_i(&g.bracket(z, a)) - g.bracket(z, &p.apply_i(a));
            acc.push(max_abs(&r), format!("I[k{j},m{i}] = [k{j},Im{i}]"));
        }
    }
}

fn i_in_adk(env: &Env, _: &mut ChaCha8Rng, acc: &mut Acc) {
    acc.push(env.ctx.pair.check_i_in_adk(), "exp(pi/2 ad Z0) on m equals I");
}

fn torus_action(env: &Env, rng: &mut ChaCha8Rng, acc: &mut Acc) {
    let (p, rd) = (&env.ctx.pair, &env.ctx.roots);
    let g = &p.algebra;
    for (n, r) in rd.positive.iter().enumerate() {
        for t in &rd.t_basis {
            let a = rd.eval(p, &r.coords, t);
            let lhs = g.bracket_c(&complexify(t), &r.e);
            let rhs = r.e.map(|z| z * Complex64::new(0.0, a));
            acc.push(max_abs_c(&(lhs - rhs)), format!("root {n}: [t, E] = alpha(t) E"));
        }
        if !r.compact {
            for _ in 0..env.samples.min(20) {
                let c = gauss(rng, rd.rank());
                let mut t = Vector::zeros(g.dim);
                for (b, ci) in rd.t_basis.iter().zip(c.iter()) {
                    t += b * *ci;
                }
                let (u, v): (f64, f64) = (StandardNormal.sample(rng), StandardNormal.sample(rng));
                let xi = &r.x * u + &r.y * v;
                let a = rd.eval(p, &r.coords, &t);
                let res = g.bracket(&t, &xi) - p.apply_i(&xi) * a;
                acc.push(max_abs(&res), format!("root {n}: [T, xi] = -i alpha(T) I xi"));
            }
        }
    }
}

fn triple_normalization(env: &Env, _: &mut ChaCha8Rng, acc: &mut Acc) {
    let (p, rd) = (&env.ctx.pair, &env.ctx.roots);
    let g = &p.algebra;
    for (n, r) in rd.positive.iter().enumerate() {
        let h = complexify(&r.t).map(|z| z * Complex64::new(0.0, -2.0));
        let em = r.e.map(|z| z.conj());
        let two = Complex64::new(2.0, 0.0);
        acc.push(
            max_abs_c(&(g.bracket_c(&h, &r.e) - r.e.map(|z| z * two))),
            format!("root {n}: [H,E+] = 2E+"),
        );
        acc.push(
            max_abs_c(&(g.bracket_c(&h, &em) + em.map(|z| z * two))),
            format!("root {n}: [H,E-] = -2E-"),
        );
        acc.push(
            max_abs_c(&(g.bracket_c(&r.e, &em) + &h)),
            format!("root {n}: [E+,E-] = -H"),
        );
        acc.push(max_abs(&(g.bracket(&r.x, &r.y) - &r.t)), format!("root {n}: [X,Y] = T"));
        acc.push(max_abs(&(g.bracket(&r.t, &r.x) - &r.y)), format!("root {n}: [T,X] = Y"));
        acc.push(
            max_abs(&(g.bracket(&r.t, &r.y) + &r.x)),
            format!("root {n}: [T,Y] = -X"),
        );
        if !r.compact {
            acc.push(max_abs(&(p.apply_i(&r.x) - &r.y)), format!("root {n}: IX = Y"));
        }
    }
}

fn simple_system(env: &Env, _: &mut ChaCha8Rng, acc: &mut Acc) {
    let rd = &env.ctx.roots;
    let pos = &rd.positive;
    let l = rd.rank();
    let is_sum = |c: &[f64]| {
        pos.iter().any(|a| {
            pos.iter().any(|b| {
                let s: Vec<f64> = a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
                lex_cmp(&s, c).is_eq()
            })
        })
    };
    let simple: Vec<usize> = (0..pos.len()).filter(|&i| !is_sum(&pos[i].coords)).collect();
    acc.push(
        flag(simple.len() == l),
        format!("{} simple roots, rank {l}", simple.len()),
    );
    if simple.len() != l {
        return;
    }
    let noncompact_simple: Vec<usize> = simple.iter().copied().filter(|&i| !pos[i].compact).collect();
    acc.push(flag(noncompact_simple.len() == 1), "exactly one noncompact simple root");
    let m = DMatrix::from_fn(l, l, |row, col| pos[simple[col]].coords[row]);
    let Some(inv) = m.try_inverse() else {
        acc.push(1.0, "simple roots are dependent");
        return;
    };
    for (n, r) in pos.iter().enumerate() {
        let c = &inv * Vector::from_column_slice(&r.coords);
        let int_err = c.iter().fold(0.0f64, |m, v| m.max((v - v.round()).abs()));
        let nonneg = c.iter().all(|v| *v > -1e-8);
        acc.push(int_err, format!("root {n}: integral coefficients"));
        acc.push(flag(nonneg), format!("root {n}: nonnegative coefficients"));
        if let [k] = noncompact_simple.as_slice() {
            let col = simple.iter().position(|s| s == k).unwrap();
            let n1 = c[col].round() as i64;
            let ok = (-1..=1).contains(&n1) && ((n1 == 0) == r.compact);
            acc.push(flag(ok), format!("root {n}: n1 = {n1}"));
        }
    }
}

fn noncompact_sums(env: &Env, _: &mut ChaCha8Rng, acc: &mut Acc) {
    let rd = &env.ctx.roots;
    let nc: Vec<_> = rd.noncompact().collect();
    for a in &nc {
        for b in &nc {
            let s: Vec<f64> = a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
            acc.push(flag(!rd.is_root(&s)), "alpha + beta is not a root");
        }
    }
}

fn nonnegative_pairing(env: &Env, _: &mut ChaCha8Rng, acc: &mut Acc) {
    let (p, rd) = (&env.ctx.pair, &env.ctx.roots);
    for (i, a) in rd.noncompact().enumerate() {
        for (j, b) in rd.noncompact().enumerate() {
            let v = rd.eval(p, &a.coords, &b.t);
            acc.push(-v, format!("-i alpha{i}(T_beta{j}) = {v:.3}"));
        }
    }
}

fn root_counts(env: &Env, _: &mut ChaCha8Rng, acc: &mut Acc) {
    let (p, rd) = (&env.ctx.pair, &env.ctx.roots);
    acc.push(
        flag(2 * rd.positive.len() + rd.rank() == p.dim()),
        "2|positive| + rank = dim g",
    );
    acc.push(
        flag(2 * rd.noncompact().count() == p.dim_m()),
        "2|noncompact positive| = dim m",
    );
}

fn strong_orthogonality(env: &Env, _: &mut ChaCha8Rng, acc: &mut Acc) {
    let (p, rd, sos) = (&env.ctx.pair, &env.ctx.roots, &env.ctx.sos);
    acc.push(
        flag(sos.rank() == p.spec.rank()),
        format!("cascade length {}", sos.rank()),
    );
    for (a, &i) in sos.roots.iter().enumerate() {
        for &j in sos.roots.iter().skip(a + 1) {
            let (x, y) = (&rd.positive[i].coords, &rd.positive[j].coords);
            let s: Vec<f64> = x.iter().zip(y).map(|(u, v)| u + v).collect();
            let d: Vec<f64> = x.iter().zip(y).map(|(u, v)| u - v).collect();
            acc.push(
                flag(!rd.is_root(&s) && !rd.is_root(&d)),
                format!("beta{i} +- beta{j} not roots"),
            );
        }
    }
}

fn sl2_relations(env: &Env, _: &mut ChaCha8Rng, acc: &mut Acc) {
    let g = &env.ctx.pair.algebra;
    let sos = &env.ctx.sos;
    let r = sos.rank();
    for j in 0..r {
        for k in 0..r {
            let dl = if j == k { 1.0 } else { 0.0 };
            let checks = [
                (g.bracket(&sos.x[j], &sos.y[k]) - &sos.t[j] * dl, "[X_j,Y_k] = d T_j"),
                (g.bracket(&sos.t[j], &sos.x[k]) - &sos.y[j] * dl, "[T_j,X_k] = d Y_j"),
                (g.bracket(&sos.t[j], &sos.y[k]) + &sos.x[j] * dl, "[T_j,Y_k] = -d X_j"),
                (g.bracket(&sos.x[j], &sos.x[k]), "[X_j,X_k] = 0"),
                (g.bracket(&sos.y[j], &sos.y[k]), "[Y_j,Y_k] = 0"),
                (g.bracket(&sos.t[j], &sos.t[k]), "[T_j,T_k] = 0"),
            ];
            for (v, what) in checks {
                acc.push(max_abs(&v), format!("({j},{k}) {what}"));
            }
        }
    }
}

fn dual_pairing(env: &Env, _: &mut ChaCha8Rng, acc: &mut Acc) {
    let (p, rd, sos) = (&env.ctx.pair, &env.ctx.roots, &env.ctx.sos);
    for (k, &bk) in sos.roots.iter().enumerate() {
        for (j, t) in sos.t.iter().enumerate() {
            let v = rd.eval(p, &rd.positive[bk].coords, t);
            let target = if j == k { 1.0 } else { 0.0 };
            acc.push((v - target).abs(), format!("-i beta{k}(T_{j})"));
        }
    }
}

fn unit_length(env: &Env, _: &mut ChaCha8Rng, acc: &mut Acc) {
    let g = &env.ctx.pair.algebra;
    let sos = &env.ctx.sos;
    for j in 0..sos.rank() {
        acc.push(
            (g.invariant_form(&sos.x[j], &sos.x[j]) - 1.0).abs(),
            format!("<X_{j},X_{j}> = 1"),
        );
        acc.push(
            (g.invariant_form(&sos.y[j], &sos.y[j]) - 1.0).abs(),
            format!("<Y_{j},Y_{j}> = 1"),
        );
    }
}

fn decomposition(env: &Env, rng: &mut ChaCha8Rng, acc: &mut Acc) {
    let (p, sos, rrs) = (&env.ctx.pair, &env.ctx.sos, &env.ctx.rrs);
    let g = &p.algebra;
    // dimensions and mutual orthogonality
    let dm: usize = rrs.roots.iter().map(|r| r.m_space.len()).sum::<usize>() + sos.rank();
    let dk: usize = rrs.roots.iter().map(|r| r.k_space.len()).sum::<usize>() + rrs.k_zero.len();
    acc.push(flag(dm == p.dim_m()), "m = a + sum m_lambda");
    acc.push(flag(dk == p.dim_k()), "k = k^a + sum k_lambda");
    let mut all: Vec<Vector> = sos.x.clone();
    for r in &rrs.roots {
        all.extend(r.m_space.iter().cloned());
    }
    let ortho = orthonormalize(&g.gram, &all, 1e-6).len();
    acc.push(flag(ortho == all.len()), "m-summands independent");
    for s in 0..env.samples {
        let x = random_x(env, rng);
        let w = sos.combine(&x);
        let ad = g.ad(&w);
        let sq = &ad * &ad;
        let mut worst = 0.0f64;
        for r in &rrs.roots {
            // ad_w^2 = lambda(w)^2 = -(sum c_j x_j)^2
            let l2 = -r.root.eval(&x).powi(2);
            for v in r.m_space.iter().chain(&r.k_space) {
                worst = worst.max(max_abs(&(&sq * v - v * l2)));
            }
        }
        for v in &rrs.k_zero {
            worst = worst.max(max_abs(&(&ad * v)));
        }
        for v in &sos.x {
            worst = worst.max(max_abs(&(&ad * v)));
        }
        acc.push(worst, format!("sample {s}: joint eigenrelations at x = {x:.3?}"));
    }
}

fn multiplicities(env: &Env, _: &mut ChaCha8Rng, acc: &mut Acc) {
    for r in &env.ctx.rrs.roots {
        acc.push(
            flag(r.m_space.len() == r.k_space.len()),
            format!("{}: dim m = {}, dim k = {}", r.root, r.m_space.len(), r.k_space.len()),
        );
    }
}

fn bc_membership(env: &Env, _: &mut ChaCha8Rng, acc: &mut Acc) {
    let (p, sos, rrs) = (&env.ctx.pair, &env.ctx.sos, &env.ctx.rrs);
    let g = &p.algebra;
    for r in &rrs.roots {
        let ok = r.root.shape().is_some() && r.root.twice.iter().find(|v| **v != 0).is_some_and(|v| *v > 0);
        acc.push(flag(ok), format!("{} in (BC)_r+", r.root));
    }
    for j in 0..sos.rank() {
        let long = HalfRoot::from_shape(sos.rank(), RootShape::Long(j));
        match rrs.find(&long) {
            Some(i) => {
                let sp = &rrs.roots[i].m_space;
                acc.push(flag(sp.len() == 1), format!("{long} has multiplicity {}", sp.len()));
                let c = g.invariant_form(&sp[0], &sos.y[j]).abs();
                acc.push((1.0 - c).abs(), format!("m_{long} is spanned by IX_{j}"));
            }
            None => acc.push(1.0, format!("{long} missing")),
        }
    }
}

fn pairing_table(env: &Env, _: &mut ChaCha8Rng, acc: &mut Acc) {
    let rrs = &env.ctx.rrs;
    for r in &rrs.roots {
        let partner = r.partner.map(|i| rrs.roots[i].root.shape());
        let ok = match (r.root.shape(), partner) {
            (Some(RootShape::Half(j)), Some(Some(RootShape::Half(k)))) => j == k,
            (Some(RootShape::Long(_)), None) => true,
            (Some(RootShape::Mixed(p, k, s)), Some(Some(RootShape::Mixed(p2, k2, s2)))) => {
                p == p2 && k == k2 && s == -s2
            }
            _ => false,
        };
        let shown = r
            .partner
            .map(|i| rrs.roots[i].root.to_string())
            .unwrap_or_else(|| "0".into());
        acc.push(flag(ok), format!("({}, {shown})", r.root));
    }
}

fn root_type(env: &Env, _: &mut ChaCha8Rng, acc: &mut Acc) {
    let (p, rrs) = (&env.ctx.pair, &env.ctx.rrs);
    acc.push(
        flag(rrs.root_type == p.spec.expected_type()),
        format!("type {} (classification: {})", rrs.root_type, p.spec.expected_type()),
    );
    let r = rrs.rank();
    for a in 0..r {
        for b in a + 1..r {
            for s in [1, -1] {
                let root = HalfRoot::from_shape(r, RootShape::Mixed(a, b, s));
                acc.push(flag(rrs.find(&root).is_some()), format!("{root} present"));
            }
        }
    }
}

fn k_partner(env: &Env, rng: &mut ChaCha8Rng, acc: &mut Acc) {
    let (p, sos, rrs) = (&env.ctx.pair, &env.ctx.sos, &env.ctx.rrs);
    let g = &p.algebra;
    for s in 0..env.samples.min(25) {
        let x = random_x(env, rng);
        let w = sos.combine(&x);
        let mut worst = 0.0f64;
        for (i, r) in rrs.roots.iter().enumerate() {
            let lam = r.root.eval(&x);
            for xi in &r.m_space {
                let zeta = rrs.k_partner(p, xi, i);
                worst = worst.max(max_abs(&(g.bracket(&w, xi) + &zeta * lam)));
                worst = worst.max(max_abs(&(g.bracket(&w, &zeta) - xi * lam)));
                worst = worst.max(max_abs(&p.project_m(&zeta)));
            }
        }
        acc.push(worst, format!("sample {s}"));
    }
}

fn half_coords(d: &[f64]) -> (Option<HalfRoot>, f64) {
    let twice: Vec<i32> = d.iter().map(|v| (2.0 * v).round() as i32).collect();
    let err = d
        .iter()
        .zip(&twice)
        .fold(0.0f64, |m, (v, t)| m.max((2.0 * v - *t as f64).abs()));
    (Some(HalfRoot { twice }), err)
}

fn restriction_image(env: &Env, _: &mut ChaCha8Rng, acc: &mut Acc) {
    let (p, rd, sos) = (&env.ctx.pair, &env.ctx.roots, &env.ctx.sos);
    for (n, r) in rd.noncompact().enumerate() {
        let d = restrict_root(p, rd, sos, &r.coords);
        let (h, err) = half_coords(&d);
        acc.push(err, format!("noncompact root {n}: restriction is half-integral"));
        let ok = matches!(
            h.and_then(|h| h.shape()),
            Some(RootShape::Half(_)) | Some(RootShape::Long(_)) | Some(RootShape::Mixed(_, _, 1))
        );
        acc.push(flag(ok), format!("noncompact root {n}: restriction {d:.3?} allowed"));
    }
    for (j, &b) in sos.roots.iter().enumerate() {
        let d = restrict_root(p, rd, sos, &rd.positive[b].coords);
        let err = d
            .iter()
            .enumerate()
            .fold(0.0f64, |m, (k, v)| m.max((v - if k == j { 1.0 } else { 0.0 }).abs()));
        acc.push(err, format!("beta_{j} restricts to e'_{j}"));
    }
}

fn projector(g: &crate::lie::CompactLieAlgebra, basis: &[Vector]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(g.dim, g.dim);
    for b in basis {
        m += b * (b.transpose() * &g.gram);
    }
    m
}

fn root_space_sums(env: &Env, _: &mut ChaCha8Rng, acc: &mut Acc) {
    let (p, rd, sos, rrs) = (&env.ctx.pair, &env.ctx.roots, &env.ctx.sos, &env.ctx.rrs);
    let g = &p.algebra;
    for (i, r) in rrs.roots.iter().enumerate() {
        let block = rrs.m_block(p, i);
        let target_root = rho_m(&r.root);
        let mut span = Vec::new();
        for a in rd.noncompact() {
            let d = restrict_root(p, rd, sos, &a.coords);
            if let (Some(h), _) = half_coords(&d) {
                if h == target_root {
                    span.push(a.x.clone());
                    span.push(a.y.clone());
                }
            }
        }
        let span = orthonormalize(&g.gram, &span, 1e-8);
        if span.len() != block.len() {
            acc.push(1.0, format!("{}: dim {} vs {}", r.root, block.len(), span.len()));
            continue;
        }
        let diff = projector(g, &block) - projector(g, &span);
        acc.push(
            max_abs_m(&diff),
            format!("{}: m_lambda + I m_lambda = root spaces over {target_root}", r.root),
        );
    }
}

fn torus_action_m(env: &Env, _: &mut ChaCha8Rng, acc: &mut Acc) {
    let (p, sos, rrs) = (&env.ctx.pair, &env.ctx.sos, &env.ctx.rrs);
    let g = &p.algebra;
    for (i, r) in rrs.roots.iter().enumerate() {
        let rho = rho_m(&r.root);
        for v in rrs.m_block(p, i) {
            for (j, t) in sos.t.iter().enumerate() {
                // I ad_T acts by i rho_m(lambda)(T) = -rho_j
                let lhs = p.apply_i(&g.bracket(t, &v));
                acc.push(max_abs(&(lhs + &v * rho.coord(j))), format!("{}: I ad T_{j}", r.root));
            }
        }
    }
}

fn torus_action_k(env: &Env, _: &mut ChaCha8Rng, acc: &mut Acc) {
    let (p, sos, rrs) = (&env.ctx.pair, &env.ctx.sos, &env.ctx.rrs);
    let g = &p.algebra;
    for (i, r) in rrs.roots.iter().enumerate() {
        match (r.partner, rho_k(&r.root)) {
            (Some(pi), Some(rk)) => {
                let partner_root = &rrs.roots[pi].root;
                for xi in &r.m_space {
                    let zeta = rrs.k_partner(p, xi, i);
                    let zeta2 = k_partner_for(p, sos, partner_root, &p.apply_i(xi));
                    for (j, t) in sos.t.iter().enumerate() {
                        let res = g.bracket(t, &zeta) + &zeta2 * rk.coord(j);
                        acc.push(max_abs(&res), format!("{}: ad T_{j} on k_lambda", r.root));
                    }
                }
            }
            (None, None) => {
                for z in &r.k_space {
                    for (j, t) in sos.t.iter().enumerate() {
                        acc.push(
                            max_abs(&g.bracket(t, z)),
                            format!("{}: T_{j} centralizes k_lambda", r.root),
                        );
                    }
                }
            }
            _ => acc.push(1.0, format!("{}: partner and restriction disagree", r.root)),
        }
    }
}

fn quadratic_identity(env: &Env, rng: &mut ChaCha8Rng, acc: &mut Acc) {
    for s in 0..env.samples {
        let w = random_m_vec(env, rng);
        acc.push(check_quadratic_identity(&env.ctx.pair, &w), format!("sample {s}"));
    }
}

fn centralizer(env: &Env, _: &mut ChaCha8Rng, acc: &mut Acc) {
    match check_centralizer(&env.ctx.pair, &env.ctx.rrs) {
        Some(r) => acc.push(r, "centralizer of k^a in m is a + Ia"),
        None => {
            acc.push(0.0, "k^a = 0");
            acc.note("vacuous: the centralizer of a in k is zero");
        }
    }
}

fn upsilon_on_cartan(env: &Env, rng: &mut ChaCha8Rng, acc: &mut Acc) {
    let sos = &env.ctx.sos;
    for s in 0..env.samples {
        let x = random_x(env, rng);
        let inv: Vec<f64> = x.iter().map(|v| 1.0 / v).collect();
        let r = upsilon(&env.ctx.pair, &sos.combine(&x)).map(|u| max_abs(&(u - sos.combine(&inv))));
        acc.record(r, format!("sample {s}: x = {x:.3?}"));
    }
}

/// Expected eigenvalue of the differential of Upsilon on m_lambda at a point of a.
pub fn upsilon_star_value(root: &HalfRoot, x: &[f64]) -> f64 {
    match root.shape() {
        Some(RootShape::Half(j)) | Some(RootShape::Long(j)) => 1.0 / (x[j] * x[j]),
        Some(RootShape::Mixed(p, k, s)) => s as f64 / (x[p] * x[k]),
        None => f64::NAN,
    }
}

fn upsilon_star_eigen(env: &Env, rng: &mut ChaCha8Rng, acc: &mut Acc) {
    let (p, sos, rrs) = (&env.ctx.pair, &env.ctx.sos, &env.ctx.rrs);
    for s in 0..env.samples.min(50) {
        let x = random_x(env, rng);
        let u = match upsilon_star(p, &sos.combine(&x)) {
            Ok(u) => u,
            Err(e) => {
                acc.record(Err(e), format!("sample {s}"));
                continue;
            }
        };
        let mut worst = 0.0f64;
        for (j, xj) in x.iter().enumerate() {
            let ax = p.to_m(&sos.x[j]);
            worst = worst.max(max_abs(&(&u * &ax + &ax / (xj * xj))));
        }
        for r in &rrs.roots {
            let mu = upsilon_star_value(&r.root, &x);
            for v in &r.m_space {
                let vm = p.to_m(v);
                worst = worst.max(max_abs(&(&u * &vm - &vm * mu)));
            }
        }
        acc.push(worst, format!("sample {s}: x = {x:.3?}"));
    }
}

fn upsilon_star_fd(env: &Env, rng: &mut ChaCha8Rng, acc: &mut Acc) {
    let p = &env.ctx.pair;
    let h = 1e-5;
    for s in 0..env.samples.min(50) {
        let w = random_general(env, rng);
        let xi = gauss(rng, p.dim_m()).normalize();
        let r = (|| {
            let u = upsilon_star(p, &w)?;
            let step = p.from_m(&xi) * h;
            let fd = (upsilon(p, &(&w + &step))? - upsilon(p, &(&w - &step))?) / (2.0 * h);
            Ok(max_abs(&(&u * &xi - p.to_m(&fd))))
        })();
        acc.record(r, format!("sample {s}"));
    }
}

fn upsilon_star_i(env: &Env, rng: &mut ChaCha8Rng, acc: &mut Acc) {
    let p = &env.ctx.pair;
    let bc = env.ctx.rrs.root_type == RootType::BC;
    for s in 0..env.samples.min(50) {
        let w = random_general(env, rng);
        let r = upsilon_star(p, &w).map(|u| {
            let n = max_abs_m(&(&u * &p.i_op + &p.i_op * &u));
            if bc {
                -n
            } else {
                n
            }
        });
        acc.record(r, format!("sample {s}"));
    }
    if bc {
        acc.note("type BC: residual is minus the anticommutator size, which must exceed 1e-3");
    }
}

const POLY: [f64; 3] = [1.0, 0.5, -0.1];

fn poly(t: f64) -> f64 {
    POLY[0] + POLY[1] * t + POLY[2] * t * t
}

fn dpoly(t: f64) -> f64 {
    POLY[1] + 2.0 * POLY[2] * t
}

fn q_hat_on_cartan(env: &Env, rng: &mut ChaCha8Rng, acc: &mut Acc) {
    let (p, sos) = (&env.ctx.pair, &env.ctx.sos);
    for s in 0..env.samples {
        let x = random_x(env, rng);
        let w = sos.combine(&x);
        let y: Vec<f64> = x.iter().map(|v| v * poly(v * v)).collect();
        let yr: Vec<f64> = x
            .iter()
            .map(|v| v * (poly(v * v) + 2.0 * v * v * dpoly(v * v)))
            .collect();
        let r = (|| {
            let a = q_hat(p, &w, |t| Some(poly(t)))?;
            let b = q_hat_radial(p, &w, |t| Some(poly(t)), |t| Some(dpoly(t)))?;
            Ok(max_abs(&(a - sos.combine(&y))).max(max_abs(&(b - sos.combine(&yr)))))
        })();
        acc.record(r, format!("sample {s}: x = {x:.3?}"));
    }
}

fn quadratic_hat(env: &Env, rng: &mut ChaCha8Rng, acc: &mut Acc) {
    let p = &env.ctx.pair;
    let g = &p.algebra;
    for s in 0..env.samples {
        let w = random_m_vec(env, rng);
        let iw = p.apply_i(&w);
        let expect = g.bracket(&iw, &g.bracket(&iw, &w));
        acc.record(
            q_hat(p, &w, |t| Some(-t)).map(|v| max_abs(&(v - expect))),
            format!("sample {s}"),
        );
    }
}

/// Exact differential of w -> q(A(w)) w for a polynomial q, in m-coordinates.
pub fn poly_hat_derivative(pair: &crate::pair::HermitianPair, w: &Vector, coeffs: &[f64]) -> DMatrix<f64> {
    let g = &pair.algebra;
    let d = pair.dim_m();
    let a = a_op(pair, w);
    let wm = pair.to_m(w);
    let iw = pair.apply_i(w);
    let (ad_w, ad_iw) = (g.ad(w), g.ad(&iw));
    let mut powers = vec![DMatrix::<f64>::identity(d, d)];
    for k in 1..coeffs.len() {
        let next = &powers[k - 1] * &a;
        powers.push(next);
    }
    let mut out = DMatrix::zeros(d, d);
    for i in 0..d {
        let mut e = Vector::zeros(d);
        e[i] = 1.0;
        let xi = pair.from_m(&e);
        let ixi = pair.apply_i(&xi);
        let (ad_x, ad_ix) = (g.ad(&xi), g.ad(&ixi));
        let da = -pair.restrict_m(&(&ad_x * &ad_w + &ad_w * &ad_x + &ad_ix * &ad_iw + &ad_iw * &ad_ix));
        let mut col = Vector::zeros(d);
        for (k, c) in coeffs.iter().enumerate() {
            col += &powers[k] * &e * *c;
            for j in 0..k {
                col += &powers[j] * &da * &powers[k - 1 - j] * &wm * *c;
            }
        }
        out.set_column(i, &col);
    }
    out
}

fn eigen_transport(env: &Env, rng: &mut ChaCha8Rng, acc: &mut Acc) {
    let (p, sos, rrs) = (&env.ctx.pair, &env.ctx.sos, &env.ctx.rrs);
    for s in 0..env.samples.min(50) {
        let x = random_x(env, rng);
        let w = sos.combine(&x);
        let f = poly_hat_derivative(p, &w, &POLY);
        let y: Vec<f64> = x.iter().map(|v| v * poly(v * v)).collect();
        let mut worst = 0.0f64;
        for r in &rrs.roots {
            let mu = r.root.eval(&y) / r.root.eval(&x);
            for v in &r.m_space {
                let vm = p.to_m(v);
                worst = worst.max(max_abs(&(&f * &vm - &vm * mu)));
            }
        }
        for (j, xj) in x.iter().enumerate() {
            let t = xj * xj;
            let mu = poly(t) + 2.0 * t * dpoly(t);
            let vm = p.to_m(&sos.x[j]);
            worst = worst.max(max_abs(&(&f * &vm - &vm * mu)));
        }
        acc.push(worst, format!("sample {s}: x = {x:.3?}"));
    }
}

fn derivation_identity(env: &Env, rng: &mut ChaCha8Rng, acc: &mut Acc) {
    let p = &env.ctx.pair;
    let g = &p.algebra;
    let type_c = env.ctx.rrs.root_type == RootType::C;
    let d = p.dim_m();
    for s in 0..env.samples.min(50) {
        let w = random_general(env, rng);
        let xi = p.from_m(&gauss(rng, d));
        let eta = p.from_m(&gauss(rng, d));
        let u = match upsilon_star(p, &w) {
            Ok(u) => u,
            Err(e) => {
                acc.record(Err(e), format!("sample {s}"));
                continue;
            }
        };
        let mut maps = vec![("Upsilon", u.clone())];
        if type_c {
            let id = DMatrix::<f64>::identity(d, d);
            maps.push(("(a1 + a2 I) Upsilon", (&id * 0.7 - &p.i_op * 0.4) * &u));
        }
        for (name, f) in maps {
            let app = |v: &Vector| p.from_m(&(&f * p.to_m(v)));
            let lhs = app(&g.bracket(&w, &g.bracket(&xi, &eta)));
            let rhs = g.bracket(&g.bracket(&w, &app(&xi)), &eta) - g.bracket(&g.bracket(&w, &app(&eta)), &xi);
            acc.push(max_abs(&(lhs - rhs)), format!("sample {s}: {name}"));
        }
    }
}
