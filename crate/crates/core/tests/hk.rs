use hksym::fields::params::{random_ad_k, DomainPoint};
use hksym::fields::{p_op, HkParams};
use hksym::lie::max_abs_m;
use hksym::verify::hk::{example_residual, psi};
use hksym::verify::{run_hk_suite, run_negative_controls, Role, TolOverrides};
use hksym::SpaceContext;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ctx(s: &str) -> SpaceContext {
    SpaceContext::build(s.parse().unwrap()).unwrap()
}

fn p(s: &str) -> HkParams {
    s.parse().unwrap()
}

#[test]
fn hk_suite_passes_on_type_c() {
    for s in ["su:1,1", "sp:2", "soB:3"] {
        let c = ctx(s);
        for ps in ["1,0,0,+1", "0.5,0.3,-0.2,+1", "-0.5,0.4,0,+1"] {
            let results = run_hk_suite(&c, &p(ps), 10, 3, &TolOverrides::default()).unwrap();
            let bad: Vec<_> = results.iter().filter(|r| !r.passed).collect();
            assert!(bad.is_empty(), "{s} {ps}: {bad:#?}");
        }
    }
}

#[test]
fn hk_suite_passes_on_type_bc() {
    for s in ["su:1,2", "so*:3"] {
        let c = ctx(s);
        for ps in ["1,0,0,+1", "1,0,0,-1", "0,0,0,-1"] {
            let results = run_hk_suite(&c, &p(ps), 10, 3, &TolOverrides::default()).unwrap();
            let bad: Vec<_> = results.iter().filter(|r| !r.passed).collect();
            assert!(bad.is_empty(), "{s} {ps}: {bad:#?}");
        }
    }
}

#[test]
fn bc_rejects_nonzero_a1_a2() {
    let c = ctx("su:1,2");
    assert!(run_hk_suite(&c, &p("1,0.1,0,+1"), 5, 0, &TolOverrides::default()).is_err());
    assert!(run_hk_suite(&c, &p("1,0,0.1,+1"), 5, 0, &TolOverrides::default()).is_err());
}

#[test]
fn su2_operators_match_closed_form_with_operator_sign() {
    let c = ctx("su:1,1");
    for ps in ["1,0,0,+1", "2,1,0,+1", "1,0.5,0.5,+1", "0,1,1,+1"] {
        let (r, s) = example_residual(&c, &p(ps), -1.0).unwrap();
        assert!(r < 1e-9 && s < 1e-9, "{ps}: R {r:e}, S {s:e}");
    }
}

#[test]
fn psi_reduces_to_b_when_c_vanishes() {
    let params = p("1,0,0,+1");
    let r: f64 = 1.3;
    let expected = (1.0 + r * r).sqrt();
    assert!((psi(&params, r).unwrap() - expected).abs() < 1e-12);
}

#[test]
fn r_positive_and_s_anticommutes_at_rotated_points() {
    let c = ctx("su:2,2");
    let params = p("0.5,0.3,-0.2,+1");
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for x in [[0.6, 1.7], [2.0, 0.9], [1.1, 1.2]] {
        let pt = DomainPoint::rotated(&c.sos, &x, random_ad_k(&c.pair, &mut rng, 1.0));
        let ops = p_op(&c.pair, &params, &pt.w).unwrap();
        let i = &c.pair.i_op;
        assert!(max_abs_m(&(&ops.s * i + i * &ops.s)) < 1e-9);
        assert!(max_abs_m(&(&ops.r * i - i * &ops.r)) < 1e-9);
        let sym = (&ops.r + ops.r.transpose()) * 0.5;
        let min = sym.symmetric_eigen().eigenvalues.min();
        assert!(min > 0.0, "x = {x:?}: min eigenvalue {min}");
    }
}

#[test]
fn controls_fail_when_armed_and_pass_when_disarmed() {
    for s in ["su:1,1", "su:1,2", "sp:2"] {
        let c = ctx(s);
        let armed = run_negative_controls(&c, 5, 0, &TolOverrides::default(), 1e-2);
        assert!(!armed.is_empty());
        for r in &armed {
            assert_eq!(r.role, Role::Control);
            assert!(!r.passed && r.as_expected(), "{s} {}: control did not fire", r.check_id);
        }
        let disarmed = run_negative_controls(&c, 5, 0, &TolOverrides::default(), 0.0);
        for r in &disarmed {
            assert!(
                r.passed && !r.as_expected(),
                "{s} {}: fault-free variant failed",
                r.check_id
            );
        }
    }
}
