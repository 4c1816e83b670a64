//! Tensor fields on the domain W in m: A(w), Upsilon, B_w, P_w, the
//! almost complex structures on the tangent model, forms, and the potential.

pub mod integrability;
pub mod ops;
pub mod params;
pub mod potential;
pub mod tangent;

pub use ops::{a_op, b_op, b_prime, b_scalar, p_matrix, p_op, q_hat, q_hat_radial, upsilon, upsilon_star, HkOperators};
pub use params::{DomainPoint, HkParams};
pub use tangent::{j_pm, j_tensor, TangentBlockOp, TangentVector};
