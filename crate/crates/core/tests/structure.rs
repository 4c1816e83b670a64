use hksym::pair::{RootType, SpaceSpec};
use hksym::restricted::{rho_k, rho_m, HalfRoot, RootShape};
use hksym::verify::{run_structure_suite, CheckResult, TolOverrides};
use hksym::SpaceContext;

fn ctx(s: &str) -> SpaceContext {
    SpaceContext::build(s.parse().unwrap()).unwrap()
}

fn assert_all_pass(results: &[CheckResult]) {
    let bad: Vec<_> = results.iter().filter(|c| !c.passed).collect();
    assert!(bad.is_empty(), "failing checks: {bad:#?}");
}

#[test]
fn structure_suite_passes_on_small_spaces() {
    for s in ["su:1,1", "su:1,2", "su:2,2", "sp:2", "so*:3", "soB:3"] {
        let results = run_structure_suite(&ctx(s), 10, 7, &TolOverrides::default());
        assert!(results.len() >= 30, "{s}: only {} checks", results.len());
        assert_all_pass(&results);
    }
}

#[test]
fn sp2_is_type_c2_with_unit_multiplicities() {
    let c = ctx("sp:2");
    assert_eq!(c.rank(), 2);
    assert_eq!(c.rrs.root_type, RootType::C);
    assert_eq!(c.rrs.roots.len(), 4);
    assert!(c.rrs.roots.iter().all(|r| r.multiplicity() == 1));
}

#[test]
fn root_types_follow_the_classification() {
    for s in ["su:1,1", "su:1,2", "su:2,3", "sp:3", "so*:4", "so*:5", "soB:4"] {
        let spec: SpaceSpec = s.parse().unwrap();
        let c = SpaceContext::build(spec).unwrap();
        assert_eq!(c.rrs.root_type, spec.expected_type(), "{s}");
        assert_eq!(c.rank(), spec.rank(), "{s}");
    }
}

#[test]
fn dimensions_add_up() {
    for s in ["su:1,2", "su:2,2", "sp:2", "so*:3", "soB:3"] {
        let c = ctx(s);
        let m: usize = c.rrs.roots.iter().map(|r| r.multiplicity()).sum();
        assert_eq!(m + c.rank(), c.pair.dim_m(), "{s}: m");
        let k: usize = c.rrs.roots.iter().map(|r| r.k_space.len()).sum();
        assert_eq!(k + c.rrs.k_zero.len(), c.pair.dim_k(), "{s}: k");
    }
}

#[test]
fn restriction_maps_on_shapes() {
    let mixed = HalfRoot::from_shape(3, RootShape::Mixed(0, 2, -1));
    assert_eq!(rho_m(&mixed).twice, vec![1, 0, 1]);
    assert_eq!(rho_k(&mixed).unwrap().twice, vec![1, 0, -1]);
    let long = HalfRoot::from_shape(3, RootShape::Long(1));
    assert_eq!(rho_m(&long), long);
    assert!(rho_k(&long).is_none());
    let half = HalfRoot::from_shape(2, RootShape::Half(1));
    assert_eq!(rho_k(&half), Some(half.clone()));
}

#[test]
fn corrupted_structure_constants_break_jacobi() {
    let mut c = ctx("su:1,2");
    let g = &mut c.pair.algebra;
    let mut table = g.structure_constants.clone();
    let d = g.dim;
    // perturb [e0, e1] antisymmetrically so only the Jacobi identity notices
    let k = (0..d).find(|&k| g.c(0, 1, k).abs() < 1e-12 && k > 1).unwrap();
    table[d + k] += 0.1; // c(0, 1, k)
    table[d * d + k] -= 0.1; // c(1, 0, k)
    g.set_structure_constants(table).unwrap();
    let results = run_structure_suite(&c, 5, 0, &TolOverrides::default());
    let get = |id: &str| results.iter().find(|r| r.check_id == id).unwrap();
    assert!(get("algebra.antisymmetry").passed);
    assert!(!get("algebra.jacobi").passed);
    assert!(!get("algebra.jacobi").details.is_empty());
}

#[test]
fn invalid_spaces_are_rejected() {
    for s in ["su:0,2", "sp:0", "so*:2", "soB:2", "su:1", "xx:3", "su:a,b"] {
        assert!(s.parse::<SpaceSpec>().is_err(), "{s}");
    }
}
