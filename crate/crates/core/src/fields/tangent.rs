//! Block operators on the horizontal-vertical model m + m of the tangent
//! space, and the 1- and 2-forms pulled back to G x W.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lie::{CVector, Vector};
use crate::pair::HermitianPair;

/// A 2x2 block endomorphism of m + m (first block horizontal).
#[derive(Clone, Debug, PartialEq)]
pub struct TangentBlockOp {
    pub matrix: DMatrix<f64>,
}

impl TangentBlockOp {
    pub fn from_blocks(a: &DMatrix<f64>, b: &DMatrix<f64>, c: &DMatrix<f64>, d: &DMatrix<f64>) -> Self {
        let n = a.nrows();
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(a);
        m.view_mut((0, n), (n, n)).copy_from(b);
        m.view_mut((n, 0), (n, n)).copy_from(c);
        m.view_mut((n, n), (n, n)).copy_from(d);
        Self { matrix: m }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            matrix: &self.matrix * &other.matrix,
        }
    }

    pub fn anticommutator(&self, other: &Self) -> DMatrix<f64> {
        &self.matrix * &other.matrix + &other.matrix * &self.matrix
    }

    pub fn square_plus_identity(&self) -> DMatrix<f64> {
        let n = self.matrix.nrows();
        &self.matrix * &self.matrix + DMatrix::identity(n, n)
    }
}

/// J(P) = [[-R^-1 S, -R^-1], [R + S R^-1 S, S R^-1]].
pub fn j_tensor(r: &DMatrix<f64>, s: &DMatrix<f64>) -> Result<TangentBlockOp> {
    let r_inv = r
        .clone()
        .try_inverse()
        .ok_or(Error::SingularPoint { eigenvalue: 0.0 })?;
    Ok(TangentBlockOp::from_blocks(
        &(-(&r_inv * s)),
        &(-&r_inv),
        &(r + s * &r_inv * s),
        &(s * &r_inv),
    ))
}

/// diag(I, sign I).
pub fn j_pm(pair: &HermitianPair, sign: f64) -> TangentBlockOp {
    let d = pair.dim_m();
    let z = DMatrix::zeros(d, d);
    TangentBlockOp::from_blocks(&pair.i_op, &z, &z, &(&pair.i_op * sign))
}

/// J(PI) for real P: [[0, I P^-1], [P I, 0]].
pub fn j_tensor_real_times_i(pair: &HermitianPair, p: &DMatrix<f64>) -> Result<TangentBlockOp> {
    let p_inv = p
        .clone()
        .try_inverse()
        .ok_or(Error::SingularPoint { eigenvalue: 0.0 })?;
    let d = pair.dim_m();
    let z = DMatrix::zeros(d, d);
    Ok(TangentBlockOp::from_blocks(
        &z,
        &(&pair.i_op * p_inv),
        &(p * &pair.i_op),
        &z,
    ))
}

/// A complexified tangent vector (xi, u) at (e, w): xi in g, u in m (vector of g).
#[derive(Clone, Debug)]
pub struct TangentVector {
    pub xi: CVector,
    pub u: CVector,
}

/// theta(xi, u) = <w, xi>.
pub fn theta(pair: &HermitianPair, w: &Vector, xi: &Vector) -> f64 {
    pair.algebra.invariant_form(w, xi)
}

/// theta'(xi, u) = <I w, xi>.
pub fn theta_prime(pair: &HermitianPair, w: &Vector, xi: &Vector) -> f64 {
    pair.algebra.invariant_form(&pair.apply_i(w), xi)
}

/// Omega((xi1,u1),(xi2,u2)) = <xi2,u1> - <xi1,u2> - <w,[xi1,xi2]>, complex bilinear.
pub fn omega(pair: &HermitianPair, w: &Vector, a: &TangentVector, b: &TangentVector) -> Complex64 {
    let g = &pair.algebra;
    let wc = crate::lie::complexify(w);
    g.form_c(&b.xi, &a.u) - g.form_c(&a.xi, &b.u) - g.form_c(&wc, &g.bracket_c(&a.xi, &b.xi))
}

/// Omega' on m-valued arguments: <xi2, I u1> - <xi1, I u2>.
pub fn omega_prime(pair: &HermitianPair, xi1: &Vector, u1: &Vector, xi2: &Vector, u2: &Vector) -> f64 {
    let g = &pair.algebra;
    g.invariant_form(xi2, &pair.apply_i(u1)) - g.invariant_form(xi1, &pair.apply_i(u2))
}

/// Omega' from exterior differentiation of theta' along left-invariant
/// horizontal fields and constant vertical fields.
///
/// theta' is affine in w, so the symmetric difference with unit step is
/// its exact directional derivative.
pub fn omega_prime_from_d(
    pair: &HermitianPair,
    w: &Vector,
    xi1: &Vector,
    u1: &Vector,
    xi2: &Vector,
    u2: &Vector,
) -> f64 {
    let dir = |u: &Vector, xi: &Vector| 0.5 * (theta_prime(pair, &(w + u), xi) - theta_prime(pair, &(w - u), xi));
    let bracket = pair.algebra.bracket(xi1, xi2);
    dir(u1, xi2) - dir(u2, xi1) - theta_prime(pair, w, &bracket)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::max_abs_m;

    #[test]
    fn j_squares_to_minus_one() {
        let r = DMatrix::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 1.0]);
        let s = DMatrix::from_row_slice(2, 2, &[0.1, -0.2, 0.5, 0.4]);
        let j = j_tensor(&r, &s).unwrap();
        assert!(max_abs_m(&j.square_plus_identity()) < 1e-12);
    }
}
