//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero when
//! any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use hksym::cli::{run_with, EXIT_OK};
use hksym::fields::params::{random_ad_k, DomainPoint};
use hksym::fields::{p_matrix, HkParams};
use hksym::lie::{max_abs_mc, Vector};
use hksym::pair::{RootType, SpaceSpec};
use hksym::restricted::{restrict_root, rho_m, HalfRoot, RootShape};
use hksym::verify::hk::example_residual;
use hksym::verify::{run_hk_suite, run_negative_controls, run_structure_suite, Campaign, CheckResult, TolOverrides};
use hksym::SpaceContext;
use nalgebra::{Complex, DMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const SPACES: &[&str] = &["su:1,1", "su:1,2", "su:2,2", "sp:2", "so*:3", "soB:3"];
const C_GRID: &[&str] = &["1,0,0,+1", "0.5,0.3,-0.2,+1", "-0.5,0.4,0,+1", "2,1,0.5,+1"];
const BC_GRID: &[&str] = &["1,0,0,+1", "1,0,0,-1", "0,0,0,-1", "2.5,0,0,+1"];

/// Name, evaluation, optional time budget.
type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn ctx(s: &str) -> SpaceContext {
    SpaceContext::build(s.parse().expect("space spec")).expect("space builds")
}

fn params(s: &str) -> HkParams {
    s.parse().expect("params")
}

fn grid_for(c: &SpaceContext) -> &'static [&'static str] {
    match c.rrs.root_type {
        RootType::C => C_GRID,
        RootType::BC => BC_GRID,
    }
}

fn worst<'a>(results: impl IntoIterator<Item = &'a CheckResult>) -> Option<&'a CheckResult> {
    results
        .into_iter()
        .max_by(|a, b| (a.max_residual - a.threshold).total_cmp(&(b.max_residual - b.threshold)))
}

// 1. su(2)/u(1): closed form of R and S with the + sign on S

fn closed_form_example() -> Outcome {
    let c = ctx("su:1,1");
    let mut pass = true;
    let mut notes = Vec::new();
    for ps in ["1,0,0,+1", "2,1,0,+1", "1,0.5,0.5,+1", "0,1,1,+1"] {
        let p = params(ps);
        let (r, s) = example_residual(&c, &p, 1.0).expect("example evaluates");
        let (_, s_neg) = example_residual(&c, &p, -1.0).expect("example evaluates");
        let ok = r < 1e-9 && s < 1e-9;
        pass &= ok;
        notes.push(format!("({ps}) R {r:.1e} S {s:.1e} [S with opposite sign {s_neg:.1e}]"));
    }
    Outcome {
        pass,
        detail: notes.join("; "),
    }
}

// 2. P tends to sqrt(a0) at the origin

fn origin_limit() -> Outcome {
    let mut worst_dev = 0.0f64;
    let mut worst_at = String::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for s in SPACES {
        let c = ctx(s);
        for ps in ["1,0,0,+1", "4,0,0,+1"] {
            let p = params(ps);
            let x = vec![1e-6; c.rank()];
            let pt = DomainPoint::rotated(&c.sos, &x, random_ad_k(&c.pair, &mut rng, 1.0));
            let pm = p_matrix(&c.pair, &p, &pt.w).expect("P evaluates near the origin");
            let d = pm.nrows();
            let target = DMatrix::<Complex<f64>>::identity(d, d) * Complex::new(p.a0.sqrt(), 0.0);
            let dev = max_abs_mc(&(pm - target));
            if dev > worst_dev {
                worst_dev = dev;
                worst_at = format!("{s} ({ps})");
            }
        }
    }
    Outcome {
        pass: worst_dev < 1e-4,
        detail: format!(
            "max |P - sqrt(a0)| = {worst_dev:.1e} at {worst_at}, x_j = 1e-6, {} spaces",
            SPACES.len()
        ),
    }
}

// 3. restricted roots against a brute-force joint diagonalization

/// Cutoff for squared residuals; the spectral gaps are of order 1e-2.
const NULL_TOL: f64 = 1e-10;

type Table = BTreeMap<Vec<i32>, (usize, Option<Vec<i32>>)>;

fn candidates(r: usize) -> Vec<HalfRoot> {
    let mut v = Vec::new();
    for j in 0..r {
        v.push(HalfRoot::from_shape(r, RootShape::Half(j)));
        v.push(HalfRoot::from_shape(r, RootShape::Long(j)));
    }
    for p in 0..r {
        for k in p + 1..r {
            v.push(HalfRoot::from_shape(r, RootShape::Mixed(p, k, 1)));
            v.push(HalfRoot::from_shape(r, RootShape::Mixed(p, k, -1)));
        }
    }
    v
}

/// Null space of sum_{j<=k} (Sym(ad X_j ad X_k) + l_j l_k)^2 on m, which is
/// the joint eigenspace where ad_w^2 = -lambda(w)^2 for every w in a.
fn joint_space(sym: &[(usize, usize, DMatrix<f64>)], root: &HalfRoot) -> (DMatrix<f64>, Vec<Vector>) {
    let d = sym[0].2.nrows();
    let mut gram = DMatrix::<f64>::zeros(d, d);
    for (j, k, s) in sym {
        let m = s + DMatrix::<f64>::identity(d, d) * (root.coord(*j) * root.coord(*k));
        gram += m.transpose() * &m;
    }
    let eig = gram.clone().symmetric_eigen();
    let basis = (0..d)
        .filter(|&i| eig.eigenvalues[i] < NULL_TOL)
        .map(|i| eig.eigenvectors.column(i).into_owned())
        .collect();
    (gram, basis)
}

fn oracle_table(c: &SpaceContext) -> Result<(Table, RootType), String> {
    let p = &c.pair;
    let r = c.rank();
    let ads: Vec<DMatrix<f64>> = c.sos.x.iter().map(|x| p.algebra.ad(x)).collect();
    let mut sym = Vec::new();
    for j in 0..r {
        for k in j..r {
            let s = (&ads[j] * &ads[k] + &ads[k] * &ads[j]) * 0.5;
            sym.push((j, k, p.restrict_m(&s)));
        }
    }
    let cands = candidates(r);
    let spaces: Vec<(DMatrix<f64>, Vec<Vector>)> = cands.iter().map(|h| joint_space(&sym, h)).collect();
    let cartan: Vec<Vector> = c.sos.x.iter().map(|x| p.to_m(x)).collect();
    let mut table = Table::new();
    for (h, (_, basis)) in cands.iter().zip(&spaces) {
        if basis.is_empty() {
            continue;
        }
        let iv = &p.i_op * &basis[0];
        let hit = cands
            .iter()
            .zip(&spaces)
            .find(|(_, (g, b))| !b.is_empty() && (iv.transpose() * g * &iv)[(0, 0)] < NULL_TOL);
        let partner = match hit {
            Some((h2, _)) => Some(h2.twice.clone()),
            None => {
                let resid = cartan.iter().fold(iv.clone(), |acc, x| {
                    let xn = x / x.norm();
                    &acc - &xn * xn.dot(&iv)
                });
                if resid.norm() > 1e-8 {
                    return Err(format!("I m_{h} lies in no candidate space"));
                }
                None
            }
        };
        table.insert(h.twice.clone(), (basis.len(), partner));
    }
    let counted: usize = table.values().map(|v| v.0).sum::<usize>() + r;
    if counted != p.dim_m() {
        return Err(format!("oracle accounts for {counted} of dim m = {}", p.dim_m()));
    }
    let ty = if table.keys().any(|t| t.iter().map(|v| v.abs()).sum::<i32>() == 1) {
        RootType::BC
    } else {
        RootType::C
    };
    Ok((table, ty))
}

fn library_table(c: &SpaceContext) -> Table {
    c.rrs
        .roots
        .iter()
        .map(|r| {
            let partner = r.partner.map(|i| c.rrs.roots[i].root.twice.clone());
            (r.root.twice.clone(), (r.multiplicity(), partner))
        })
        .collect()
}

/// Known multiplicity tables, keyed by doubled coordinates.
fn known_table(s: &str) -> Option<BTreeMap<Vec<i32>, usize>> {
    let t: &[(&[i32], usize)] = match s {
        "su:1,1" => &[(&[2], 1)],
        "su:1,2" => &[(&[2], 1), (&[1], 2)],
        "su:2,2" => &[(&[2, 0], 1), (&[0, 2], 1), (&[1, 1], 2), (&[1, -1], 2)],
        "sp:2" => &[(&[2, 0], 1), (&[0, 2], 1), (&[1, 1], 1), (&[1, -1], 1)],
        _ => return None,
    };
    Some(t.iter().map(|(k, v)| (k.to_vec(), *v)).collect())
}

fn restricted_roots() -> Outcome {
    let spaces = [
        "su:1,1", "su:1,2", "su:2,2", "sp:2", "so*:3", "soB:3", "su:2,3", "so*:4",
    ];
    let mut problems = Vec::new();
    for s in spaces {
        let c = ctx(s);
        let (oracle, ty) = match oracle_table(&c) {
            Ok(v) => v,
            Err(e) => {
                problems.push(format!("{s}: {e}"));
                continue;
            }
        };
        if library_table(&c) != oracle {
            problems.push(format!("{s}: table differs from the oracle"));
        }
        if let Some(known) = known_table(s) {
            let mults: BTreeMap<Vec<i32>, usize> = oracle.iter().map(|(k, v)| (k.clone(), v.0)).collect();
            if mults != known {
                problems.push(format!("{s}: oracle disagrees with the known table"));
            }
        }
        if ty != c.rrs.root_type || ty != s.parse::<SpaceSpec>().unwrap().expected_type() {
            problems.push(format!("{s}: type mismatch"));
        }
        // every noncompact root restricts to some rho_m(lambda), and each is hit
        let images: BTreeSet<Vec<i32>> = oracle
            .keys()
            .map(|t| rho_m(&HalfRoot { twice: t.clone() }).twice)
            .collect();
        let mut hit = BTreeSet::new();
        for root in c.roots.noncompact() {
            let d = restrict_root(&c.pair, &c.roots, &c.sos, &root.coords);
            let twice: Vec<i32> = d.iter().map(|v| (2.0 * v).round() as i32).collect();
            let err = d
                .iter()
                .zip(&twice)
                .fold(0.0f64, |m, (v, t)| m.max((2.0 * v - *t as f64).abs()));
            if err > 1e-9 || !images.contains(&twice) {
                problems.push(format!("{s}: noncompact root restricts to {d:.3?}"));
            }
            hit.insert(twice);
        }
        if hit != images {
            problems.push(format!("{s}: some rho_m(lambda) is not a restriction"));
        }
    }
    Outcome {
        pass: problems.is_empty(),
        detail: if problems.is_empty() {
            format!(
                "{} spaces: multiplicities, I-partners, type and restriction images agree",
                spaces.len()
            )
        } else {
            problems.join("; ")
        },
    }
}

// 4. integrability and the derived identities on the parameter grid

fn integrability_grid() -> Outcome {
    let ids = [
        "hk.integrability",
        "hk.closed_form_a",
        "hk.closed_form_b",
        "hk.imaginary_part",
    ];
    let cells: Vec<(String, &str)> = ["su:1,1", "su:1,2", "su:2,2", "sp:2"]
        .iter()
        .flat_map(|s| {
            let grid = grid_for(&ctx(s));
            grid.iter().map(move |p| (s.to_string(), *p))
        })
        .collect();
    let results: Vec<CheckResult> = cells
        .par_iter()
        .flat_map(|(s, p)| {
            run_hk_suite(&ctx(s), &params(p), 100, 4, &TolOverrides::default())
                .expect("admissible cell")
                .into_iter()
                .filter(|r| ids.contains(&r.check_id.as_str()))
                .collect::<Vec<_>>()
        })
        .collect();
    let pass = results.len() == ids.len() * cells.len() && results.iter().all(|r| r.passed && r.samples >= 100);
    let w = worst(&results).unwrap();
    Outcome {
        pass,
        detail: format!(
            "{} cells x {} identities, 100 samples; worst {} {} ({}) {:.1e} / {:.0e}",
            cells.len(),
            ids.len(),
            w.check_id,
            w.space,
            w.params.as_deref().unwrap_or("-"),
            w.max_residual,
            w.threshold
        ),
    }
}

// 5. J(P) anticommutes with J-, and the two descriptions of Omega'

fn forms() -> Outcome {
    let ids = [
        "hk.j_minus_anticommutes",
        "hk.omega_prime_exterior",
        "hk.omega_prime_via_j",
    ];
    let results: Vec<CheckResult> = SPACES
        .par_iter()
        .flat_map(|s| {
            let c = ctx(s);
            let p = params(grid_for(&c)[1]);
            run_hk_suite(&c, &p, 100, 5, &TolOverrides::default())
                .expect("admissible cell")
                .into_iter()
                .filter(|r| ids.contains(&r.check_id.as_str()))
                .collect::<Vec<_>>()
        })
        .collect();
    let ok = |r: &CheckResult| match r.check_id.as_str() {
        "hk.j_minus_anticommutes" => r.max_residual < 1e-10,
        _ => r.max_residual < 1e-12 && r.samples >= 1000,
    };
    let pass = results.len() == ids.len() * SPACES.len() && results.iter().all(ok);
    let max_of = |id: &str| {
        results
            .iter()
            .filter(|r| r.check_id == id)
            .fold(0.0f64, |m, r| m.max(r.max_residual))
    };
    Outcome {
        pass,
        detail: format!(
            "{} spaces; J- anticommutator {:.1e}, d theta' {:.1e}, Omega' via J {:.1e} over 1000 pairs each",
            SPACES.len(),
            max_of(ids[0]),
            max_of(ids[1]),
            max_of(ids[2])
        ),
    }
}

// 6. algebraic structure at 1e-10

fn structure_identities() -> Outcome {
    let ids = [
        "structure.quadratic_identity",
        "roots.torus_action",
        "moore.torus_action_m",
        "moore.torus_action_k",
        "cascade.sl2_relations",
        "cascade.strong_orthogonality",
        "pair.i_in_adk",
    ];
    let results: Vec<CheckResult> = SPACES
        .par_iter()
        .flat_map(|s| {
            run_structure_suite(&ctx(s), 100, 6, &TolOverrides::default())
                .into_iter()
                .filter(|r| ids.contains(&r.check_id.as_str()))
                .collect::<Vec<_>>()
        })
        .collect();
    let pass = results.len() == ids.len() * SPACES.len() && results.iter().all(|r| r.max_residual < 1e-10);
    let w = worst(&results).unwrap();
    Outcome {
        pass,
        detail: format!(
            "{} identities x {} spaces; worst {} on {} {:.1e}",
            ids.len(),
            SPACES.len(),
            w.check_id,
            w.space,
            w.max_residual
        ),
    }
}

// 7. the Kähler potential

fn potential() -> Outcome {
    let ids = ["hk.potential_ode", "hk.potential_theta"];
    let results: Vec<CheckResult> = SPACES
        .par_iter()
        .flat_map(|s| {
            let c = ctx(s);
            grid_for(&c)
                .iter()
                .flat_map(|p| run_hk_suite(&c, &params(p), 100, 7, &TolOverrides::default()).expect("admissible cell"))
                .filter(|r| ids.contains(&r.check_id.as_str()))
                .collect::<Vec<_>>()
        })
        .collect();
    let count = |id: &str| results.iter().filter(|r| r.check_id == id).count();
    let pass = count(ids[0]) > 0 && count(ids[1]) > 0 && results.iter().all(|r| r.passed);
    let w = worst(&results).unwrap();
    Outcome {
        pass,
        detail: format!(
            "{} ODE cells, {} theta cells; worst {} {} ({}) {:.1e}",
            count(ids[0]),
            count(ids[1]),
            w.check_id,
            w.space,
            w.params.as_deref().unwrap_or("-"),
            w.max_residual
        ),
    }
}

// 8. negative controls

fn controls() -> Outcome {
    let results: Vec<CheckResult> = SPACES
        .par_iter()
        .flat_map(|s| run_negative_controls(&ctx(s), 20, 8, &TolOverrides::default(), 1e-2))
        .collect();
    let fired = results.iter().all(|r| !r.passed);
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_with(
        [
            "hksym",
            "verify",
            "--space",
            "su:1,1",
            "--params",
            "1,0,0,+1",
            "--samples",
            "5",
            "--control-amplitude",
            "0",
        ],
        &mut out,
        &mut err,
    );
    Outcome {
        pass: fired && !results.is_empty() && code != EXIT_OK,
        detail: format!(
            "{} controls fail their designated check: {}; fault-free controls exit {code}",
            results.len(),
            if fired { "all" } else { "NOT all" }
        ),
    }
}

// 9. reproducibility

fn reproducibility() -> Outcome {
    let run = || {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["hksym", "verify", "--seed", "42", "--format", "json", "--samples", "20"];
        for s in SPACES {
            argv.extend(["--space", s]);
        }
        argv.extend(["--params", "1,0,0,+1", "--params", "2.5,0,0,+1"]);
        let code = run_with(argv, &mut out, &mut err);
        (code, out)
    };
    let (c1, a) = run();
    let (c2, b) = run();
    let mut camp = Campaign::new(vec!["sp:2".parse().unwrap()], vec![params("0.5,0.3,-0.2,+1")]);
    camp.seed = 42;
    camp.samples = 20;
    let lib_same = camp.run().unwrap().to_json() == camp.run().unwrap().to_json();
    Outcome {
        pass: c1 == EXIT_OK && c2 == EXIT_OK && a == b && lib_same,
        detail: format!(
            "two seed-42 campaigns over {} spaces: {} bytes, {}",
            SPACES.len(),
            a.len(),
            if a == b { "identical" } else { "DIFFERENT" }
        ),
    }
}

fn main() {
    let criteria: &[Criterion] = &[
        (
            "su(2)/u(1) closed form of R and S, + sign on S",
            closed_form_example,
            None,
        ),
        ("P tends to sqrt(a0) at the origin", origin_limit, None),
        ("restricted roots match a brute-force oracle", restricted_roots, None),
        (
            "integrability identities on the parameter grid",
            integrability_grid,
            Some(Duration::from_secs(300)),
        ),
        ("J- anticommutation and Omega' identities", forms, None),
        ("Lie-theoretic identities at 1e-10", structure_identities, None),
        ("potential ODE and 2 Im dbar Q = theta", potential, None),
        ("negative controls are detected", controls, None),
        ("seeded reports are byte-identical", reproducibility, None),
    ];
    let mut failed = 0;
    for (n, (name, f, budget)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let mut o = f();
        let dt = t.elapsed();
        if let Some(b) = budget {
            if dt > *b {
                o.pass = false;
                o.detail.push_str(&format!("; over the {}s budget", b.as_secs()));
            }
        }
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} criterion {}: {name} [{:.2}s] {}",
            if o.pass { "PASS" } else { "FAIL" },
            n + 1,
            dt.as_secs_f64(),
            o.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
