//! Coverage manifest: every check id mapped to the statement it certifies.

use std::collections::BTreeMap;

pub const MANIFEST: &[(&str, &str)] = &[
    (
        "space.construction",
        "the pair, roots, cascade and restricted roots can be built",
    ),
    ("algebra.antisymmetry", "structure constants are antisymmetric"),
    ("algebra.jacobi", "Jacobi identity"),
    ("algebra.ad_invariance", "invariance of the inner product under ad"),
    ("algebra.form_positive", "the invariant form is positive definite"),
    ("pair.cartan_relations", "[k,k] in k, [k,m] in m, [m,m] in k"),
    ("pair.orthogonality", "k and m are orthogonal complements"),
    (
        "pair.complex_structure",
        "I^2 = -1, [I a, I b] = [a, b], I[z, b] = [z, I b]",
    ),
    ("pair.i_in_adk", "I equals exp(pi/2 ad Z0) on m"),
    (
        "roots.torus_action",
        "[T, E_alpha] = alpha(T) E_alpha and [T, xi] = -i alpha(T) I xi",
    ),
    (
        "roots.triple_normalization",
        "root triples [H,E] = 2E, [E,Ebar] = -H, X, Y, T relations",
    ),
    (
        "roots.simple_system",
        "one noncompact simple root, noncompact coefficient 0 or 1",
    ),
    (
        "roots.noncompact_sums",
        "sums of two noncompact positive roots are not roots",
    ),
    (
        "roots.nonnegative_pairing",
        "noncompact roots pair nonnegatively with each T_beta",
    ),
    ("roots.counts", "root counts match dim g and dim m"),
    (
        "cascade.strong_orthogonality",
        "cascade roots are strongly orthogonal and of length rank",
    ),
    ("cascade.sl2_relations", "commutation relations of the cascade triples"),
    ("cascade.dual_pairing", "-i beta_k(T_j) is the Kronecker delta"),
    ("cascade.unit_length", "X_j and Y_j have unit length"),
    (
        "restricted.decomposition",
        "direct orthogonal decomposition of m and k into restricted root spaces",
    ),
    ("restricted.multiplicities", "dim m_lambda = dim k_lambda"),
    (
        "restricted.bc_membership",
        "positive restricted roots lie in (BC)_r and m_{i e_j} = R IX_j",
    ),
    ("restricted.pairing_table", "lambda -> lambda_I table of allowed pairs"),
    (
        "restricted.type",
        "type C or BC agrees with the classification; all mixed roots present",
    ),
    ("restricted.k_partner", "k-partner relations [w, xi] = i lambda(w) zeta"),
    (
        "moore.restriction_image",
        "restrictions of noncompact roots to the cascade torus",
    ),
    (
        "moore.root_space_sums",
        "m_lambda + I m_lambda is the sum of root spaces over rho_m(lambda)",
    ),
    ("moore.torus_action_m", "cascade torus action on m_lambda + I m_lambda"),
    ("moore.torus_action_k", "cascade torus action on k_lambda"),
    ("structure.quadratic_identity", "I ad[w, Iw] = ad_w^2 + ad_Iw^2 on m"),
    ("structure.centralizer", "centralizer of k^a in m is a + Ia"),
    ("spectral.upsilon_on_cartan", "Upsilon(sum x_j X_j) = sum x_j^-1 X_j"),
    (
        "spectral.upsilon_star_eigen",
        "eigenvalues of the differential of Upsilon on a",
    ),
    (
        "spectral.upsilon_star_fd",
        "resolvent differential of Upsilon matches finite differences",
    ),
    (
        "spectral.upsilon_star_i",
        "differential of Upsilon anticommutes with I iff type C",
    ),
    (
        "spectral.q_hat_on_cartan",
        "spectral maps on a and their radial derivative",
    ),
    ("spectral.quadratic_hat", "q(t) = -t gives [Iw, [Iw, w]]"),
    (
        "spectral.eigen_transport",
        "differential of a spectral map acts on m_lambda by lambda(f(w))/lambda(w)",
    ),
    (
        "spectral.derivation_identity",
        "derivation identity for Upsilon and (a1 + a2 I) Upsilon",
    ),
    ("hk.symmetric", "R and S are symmetric"),
    ("hk.real_part_positive", "R is positive definite"),
    ("hk.r_commutes_i", "R commutes with I"),
    ("hk.s_anticommutes_i", "S anticommutes with I"),
    ("hk.r_s_commute", "R and S commute"),
    ("hk.s_r_inverse", "S R^-1 = (a1 + a2 I) Upsilon_*"),
    ("hk.j_squared", "J(P)^2 = -1"),
    ("hk.j_minus_anticommutes", "J(P) anticommutes with J-"),
    ("hk.isotropy", "Omega vanishes on the span of (xi, i P xi)"),
    ("hk.isotropy_positive", "-i Omega(Z, conj Z) > 0"),
    ("hk.integrability", "integrability of J(P) by Lie derivatives of P"),
    ("hk.closed_form_a", "closedness identity for R + S R^-1 S"),
    ("hk.closed_form_b", "closedness identity for S R^-1"),
    ("hk.imaginary_part", "imaginary-part identity for S R^-1"),
    ("hk.conjugate_structures", "J(-P) and J(conj P) are integrable"),
    ("hk.omega_prime_exterior", "d theta' equals Omega'"),
    ("hk.omega_prime_via_j", "Omega' equals Omega composed with J- J(P)^2"),
    (
        "hk.b_eigenvalues",
        "eigenvalues of B on m_lambda + I m_lambda at points of a",
    ),
    (
        "hk.b_torus_form",
        "B = I ad T(w) + eps sqrt|a0| with T(w) in the cascade torus",
    ),
    ("hk.b_scalar_derivative", "b' = b^-1 (1 + c^2 x^-4) x"),
    ("hk.s_vanishing", "S vanishes iff a1 = a2 = 0"),
    (
        "hk.r_block_diagonal",
        "R preserves R X_j and each m_lambda + I m_lambda on a",
    ),
    ("hk.boundary", "R degenerates at the domain boundary"),
    ("hk.equivariance", "K-equivariance of Upsilon_*, B, R, S"),
    ("hk.hypercomplex_pair", "J(P) and J(PI) anticommute for real P"),
    ("hk.hypercomplex_integrability", "J(PI) is integrable for real P"),
    ("hk.origin_limit", "P tends to sqrt(a0) at the origin"),
    ("hk.potential_ode", "b(x) (x^2 q(x^2))' = x"),
    ("hk.potential_theta", "2 Im dbar Q = theta"),
    ("hk.potential_invariance", "the potential is K-invariant"),
    ("hk.example_closed_form", "closed form of R and S on su(2)/u(1)"),
    ("control.b_noise", "negative control: noise in B breaks integrability"),
    (
        "control.s_commuting_part",
        "negative control: I-commuting part in S breaks anticommutation",
    ),
    (
        "control.eps_flip",
        "negative control: flipped eps breaks the B eigenvalue table",
    ),
];

pub fn coverage_manifest() -> BTreeMap<String, String> {
    MANIFEST.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::hk::HK_CHECKS;
    use crate::verify::structure::STRUCTURE_CHECKS;
    use std::collections::BTreeSet;

    #[test]
    fn manifest_covers_exactly_the_implemented_checks() {
        let mut ids: BTreeSet<&str> = STRUCTURE_CHECKS.iter().map(|c| c.0).collect();
        ids.extend(HK_CHECKS.iter().map(|c| c.0));
        ids.extend([
            "space.construction",
            "control.b_noise",
            "control.s_commuting_part",
            "control.eps_flip",
        ]);
        let listed: BTreeSet<&str> = MANIFEST.iter().map(|c| c.0).collect();
        assert_eq!(ids, listed);
        assert_eq!(listed.len(), MANIFEST.len(), "duplicate manifest entries");
    }
}
