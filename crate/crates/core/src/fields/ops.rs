//! Endomorphism fields on m built by spectral calculus of A(w).
//!
//! Points w are vectors of g lying in m; operators are matrices in
//! m-coordinates (orthonormal basis of m).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::params::HkParams;
use crate::lie::Vector;
use crate::pair::HermitianPair;
use crate::spectral::Spectrum;

/// Eigenvalues of A(w) below this on the support of w make w singular.
pub const SINGULAR_TOL: f64 = 1e-10;

/// A(w) = -ad_w^2 - ad_{Iw}^2 on m.
pub fn a_op(pair: &HermitianPair, w: &Vector) -> DMatrix<f64> {
    let g = &pair.algebra;
    let iw = pair.apply_i(w);
    // -restrict(ad^2) = (ad B)^T G (ad B) because ad is skew for the form
    let p = g.ad(w) * pair.m_matrix();
    let q = g.ad(&iw) * pair.m_matrix();
    p.transpose() * &g.gram * &p + q.transpose() * &g.gram * &q
}

fn invert_on_support(spec: &Spectrum, v: &Vector) -> Result<Vector> {
    for mu in spec.support_values(v) {
        if mu < SINGULAR_TOL {
            return Err(Error::SingularPoint { eigenvalue: mu });
        }
    }
    spec.apply(|t| Some(1.0 / t), v)
}

/// Upsilon(w) = A(w)^{-1} w, as a vector of g.
pub fn upsilon(pair: &HermitianPair, w: &Vector) -> Result<Vector> {
    let spec = Spectrum::new(&a_op(pair, w));
    Ok(pair.from_m(&invert_on_support(&spec, &pair.to_m(w))?))
}

/// (D_xi A) u for all xi at once: the matrix xi -> (D_xi A)(u) on m.
fn derivative_of_a_applied(pair: &HermitianPair, w: &Vector, u: &Vector) -> DMatrix<f64> {
    let g = &pair.algebra;
    let iw = pair.apply_i(w);
    let (ad_w, ad_iw, ad_u) = (g.ad(w), g.ad(&iw), g.ad(u));
    let u1 = g.bracket(w, u);
    let u2 = g.bracket(&iw, u);
    let plain = g.ad(&u1) + &ad_w * &ad_u;
    let twisted = (g.ad(&u2) + &ad_iw * &ad_u) * g.ad(&pair.z0);
    pair.restrict_m(&(plain + twisted))
}

/// Differential of Upsilon at w, by differentiating A(w) Upsilon(w) = w.
pub fn upsilon_star(pair: &HermitianPair, w: &Vector) -> Result<DMatrix<f64>> {
    let a = a_op(pair, w);
    let spec = Spectrum::new(&a);
    let ups = pair.from_m(&invert_on_support(&spec, &pair.to_m(w))?);
    let d = pair.dim_m();
    let rhs = DMatrix::identity(d, d) - derivative_of_a_applied(pair, w, &ups);
    let mut out = DMatrix::zeros(d, d);
    for j in 0..d {
        let col = invert_on_support(&spec, &rhs.column(j).into_owned())?;
        out.set_column(j, &col);
    }
    Ok(out)
}

/// q^(w) = q(A(w)) w.
pub fn q_hat<F>(pair: &HermitianPair, w: &Vector, q: F) -> Result<Vector>
where
    F: Fn(f64) -> Option<f64>,
{
    let spec = Spectrum::new(&a_op(pair, w));
    Ok(pair.from_m(&spec.apply(q, &pair.to_m(w))?))
}

/// d/ds q^(s w) at s = 1: coefficient q(t) + 2 t q'(t) on each eigenspace.
pub fn q_hat_radial<F, D>(pair: &HermitianPair, w: &Vector, q: F, dq: D) -> Result<Vector>
where
    F: Fn(f64) -> Option<f64>,
    D: Fn(f64) -> Option<f64>,
{
    let spec = Spectrum::new(&a_op(pair, w));
    let f = |t: f64| Some(q(t)? + 2.0 * t * dq(t)?);
    Ok(pair.from_m(&spec.apply(f, &pair.to_m(w))?))
}

/// b(x) = sqrt(a0 + x^2 - c^2 x^-2).
pub fn b_scalar(params: &HkParams, x: f64) -> Option<f64> {
    let t = x * x;
    if t == 0.0 && params.c2() > 0.0 {
        return None;
    }
    let c_term = if params.c2() > 0.0 { params.c2() / t } else { 0.0 };
    let rad = params.a0 + t - c_term;
    (rad >= 0.0).then(|| rad.sqrt())
}

/// b'(x) = b^{-1} (1 + c^2 x^-4) x.
pub fn b_prime(params: &HkParams, x: f64) -> Option<f64> {
    let b = b_scalar(params, x)?;
    (b > 0.0).then(|| (1.0 + params.c2() / x.powi(4)) * x / b)
}

/// phi(t) = (sqrt(a0 + t - c^2/t) - eps sqrt|a0|) / t, evaluated stably.
fn phi(params: &HkParams, t: f64) -> Option<f64> {
    if t <= 0.0 {
        return None;
    }
    let rad = params.a0 + t - params.c2() / t;
    if rad < 0.0 {
        return None;
    }
    let s = rad.sqrt();
    let e = params.eps() * params.a0.abs().sqrt();
    if e > 0.0 {
        // (s - e) = (s^2 - e^2) / (s + e), no cancellation
        let diff = params.a0 - params.a0.abs() + t - params.c2() / t;
        Some(diff / (t * (s + e)))
    } else {
        Some((s - e) / t)
    }
}

/// B_w = I ad([I phi^(w), w]) + eps sqrt|a0| on m.
pub fn b_op(pair: &HermitianPair, params: &HkParams, w: &Vector) -> Result<DMatrix<f64>> {
    let spec = Spectrum::new(&a_op(pair, w));
    b_from_spectrum(pair, params, w, &spec)
}

fn b_from_spectrum(pair: &HermitianPair, params: &HkParams, w: &Vector, spec: &Spectrum) -> Result<DMatrix<f64>> {
    let g = &pair.algebra;
    let phi_hat = pair.from_m(&spec.apply(|t| phi(params, t), &pair.to_m(w))?);
    let kz = g.bracket(&pair.apply_i(&phi_hat), w);
    let d = pair.dim_m();
    Ok(&pair.i_op * pair.restrict_m(&g.ad(&kz)) + DMatrix::identity(d, d) * (params.eps() * params.a0.abs().sqrt()))
}

/// All pieces of P_w = R_w + i S_w.
#[derive(Clone, Debug)]
pub struct HkOperators {
    pub b: DMatrix<f64>,
    /// None when c = 0 (then the differential of Upsilon is not needed).
    pub upsilon_star: Option<DMatrix<f64>>,
    pub r: DMatrix<f64>,
    pub s: DMatrix<f64>,
}

impl HkOperators {
    pub fn p(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.r.nrows(), self.r.ncols(), |i, j| {
            Complex64::new(self.r[(i, j)], self.s[(i, j)])
        })
    }
}

/// P_w = (1 + i (a1 + a2 I) U)(1 + c^2 U^2)^{-1} B_w with U the differential of Upsilon.
pub fn p_op(pair: &HermitianPair, params: &HkParams, w: &Vector) -> Result<HkOperators> {
    let spec = Spectrum::new(&a_op(pair, w));
    let b = b_from_spectrum(pair, params, w, &spec)?;
    let d = pair.dim_m();
    if params.c2() == 0.0 {
        return Ok(HkOperators {
            r: b.clone(),
            s: DMatrix::zeros(d, d),
            b,
            upsilon_star: None,
        });
    }
    let u = upsilon_star(pair, w)?;
    let id = DMatrix::<f64>::identity(d, d);
    let l = (&id * params.a1 + &pair.i_op * params.a2) * &u;
    let denom = &id + &u * &u * params.c2();
    let r = denom.lu().solve(&b).ok_or(Error::SingularPoint { eigenvalue: 0.0 })?;
    let s = &l * &r;
    Ok(HkOperators {
        b,
        upsilon_star: Some(u),
        r,
        s,
    })
}

/// Convenience: P_w as a complex matrix.
pub fn p_matrix(pair: &HermitianPair, params: &HkParams, w: &Vector) -> Result<DMatrix<Complex64>> {
    Ok(p_op(pair, params, w)?.p())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::max_abs_m;
    use crate::pair::build_pair;
    use crate::restricted::cascade;
    use crate::roots::compute_root_datum;

    #[test]
    fn su2_upsilon_and_b() {
        let p = build_pair("su:1,1".parse().unwrap()).unwrap();
        let rd = compute_root_datum(&p).unwrap();
        let sos = cascade(&p, &rd).unwrap();
        let w = &sos.x[0] * 2.0;
        // A = 4 Id, so f(t) = 1/t gives w/4
        let ups = upsilon(&p, &w).unwrap();
        assert!((ups - &sos.x[0] * 0.5).norm() < 1e-12);
        let params = HkParams::new(1.0, 0.0, 0.0, 1);
        let b = b_op(&p, &params, &w).unwrap();
        let expect = DMatrix::identity(2, 2) * 5f64.sqrt();
        assert!(max_abs_m(&(b - expect)) < 1e-12);
    }

    #[test]
    fn phi_matches_direct_formula() {
        let params = HkParams::new(2.0, 0.5, 0.0, 1);
        for t in [0.8, 1.0, 3.0, 10.0] {
            let direct = ((params.a0 + t - params.c2() / t).sqrt() - params.a0.sqrt()) / t;
            assert!((phi(&params, t).unwrap() - direct).abs() < 1e-14);
        }
    }
}
