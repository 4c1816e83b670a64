//! Residuals of the integrability and closedness identities, with Lie
//! derivatives along constant vector fields taken by central differences.
//! Complex directions are handled by linearity.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::ops::p_op;
use crate::fields::params::HkParams;
use crate::lie::{max_abs, Vector};
use crate::pair::HermitianPair;

/// Default step for central differences.
pub const FD_STEP: f64 = 1e-5;

pub type CMat = DMatrix<Complex64>;

fn to_c(m: &DMatrix<f64>) -> CMat {
    m.map(|v| Complex64::new(v, 0.0))
}

fn cvec(v: &Vector) -> nalgebra::DVector<Complex64> {
    v.map(|x| Complex64::new(x, 0.0))
}

/// Derivative of a matrix field along a real direction v (m-coordinates).
pub fn directional<F>(field: &F, pair: &HermitianPair, w: &Vector, v: &Vector, h: f64) -> Result<CMat>
where
    F: Fn(&Vector) -> Result<CMat>,
{
    let step = pair.from_m(v) * h;
    let plus = field(&(w + &step))?;
    let minus = field(&(w - &step))?;
    Ok((plus - minus) / Complex64::new(2.0 * h, 0.0))
}

/// Derivative along a complex direction, extended complex-linearly.
fn directional_c<F>(
    field: &F,
    pair: &HermitianPair,
    w: &Vector,
    v: &nalgebra::DVector<Complex64>,
    h: f64,
) -> Result<CMat>
where
    F: Fn(&Vector) -> Result<CMat>,
{
    let re = v.map(|z| z.re);
    let im = v.map(|z| z.im);
    let mut out = directional(field, pair, w, &re, h)?;
    if im.amax() > 0.0 {
        out += directional(field, pair, w, &im, h)? * Complex64::new(0.0, 1.0);
    }
    Ok(out)
}

/// (L_{P xi} P)(eta) - (L_{P eta} P)(xi) + [w, [xi, eta]], max-abs.
pub fn integrability_residual<F>(
    field: &F,
    pair: &HermitianPair,
    w: &Vector,
    xi: &Vector,
    eta: &Vector,
    h: f64,
) -> Result<f64>
where
    F: Fn(&Vector) -> Result<CMat>,
{
    let g = &pair.algebra;
    let p = field(w)?;
    let (xc, ec) = (cvec(xi), cvec(eta));
    let lhs =
        directional_c(field, pair, w, &(&p * &xc), h)? * &ec - directional_c(field, pair, w, &(&p * &ec), h)? * &xc;
    let rhs = pair.to_m(&g.bracket(w, &g.bracket(&pair.from_m(xi), &pair.from_m(eta))));
    let diff = lhs + cvec(&rhs);
    Ok(diff.iter().fold(0.0f64, |m, z| m.max(z.norm())))
}

/// The field w -> P_w for given parameters.
pub fn p_field<'a>(pair: &'a HermitianPair, params: &'a HkParams) -> impl Fn(&Vector) -> Result<CMat> + 'a {
    move |w: &Vector| Ok(p_op(pair, params, w)?.p())
}

fn rs_at(pair: &HermitianPair, params: &HkParams, w: &Vector) -> Result<(DMatrix<f64>, DMatrix<f64>, DMatrix<f64>)> {
    let ops = p_op(pair, params, w)?;
    let r_inv = ops
        .r
        .clone()
        .try_inverse()
        .ok_or(Error::SingularPoint { eigenvalue: 0.0 })?;
    Ok((ops.r, ops.s, r_inv))
}

/// (L_xi (R + S R^-1 S))(I eta) - [[w, I R^-1 xi], eta].
pub fn closed_form_residual_a(
    pair: &HermitianPair,
    params: &HkParams,
    w: &Vector,
    xi: &Vector,
    eta: &Vector,
    h: f64,
) -> Result<f64> {
    let g = &pair.algebra;
    let field = |p: &Vector| {
        let (r, s, ri) = rs_at(pair, params, p)?;
        Ok(to_c(&(&r + &s * &ri * &s)))
    };
    let d = directional(&field, pair, w, xi, h)?.map(|z| z.re);
    let lhs = d * (&pair.i_op * eta);
    let (_, _, ri) = rs_at(pair, params, w)?;
    let inner = pair.from_m(&(&pair.i_op * (&ri * xi)));
    let rhs = pair.to_m(&g.bracket(&g.bracket(w, &inner), &pair.from_m(eta)));
    Ok(max_abs(&(lhs - rhs)))
}

/// (L_xi (S R^-1)) eta - (L_eta (S R^-1)) xi.
pub fn closed_form_residual_b(
    pair: &HermitianPair,
    params: &HkParams,
    w: &Vector,
    xi: &Vector,
    eta: &Vector,
    h: f64,
) -> Result<f64> {
    let field = |p: &Vector| {
        let (_, s, ri) = rs_at(pair, params, p)?;
        Ok(to_c(&(&s * &ri)))
    };
    let a = directional(&field, pair, w, xi, h)?.map(|z| z.re) * eta;
    let b = directional(&field, pair, w, eta, h)?.map(|z| z.re) * xi;
    Ok(max_abs(&(a - b)))
}

/// SR^-1 [w,[xi,eta]] - [[w, R^-1 S xi], eta] + [[w, R^-1 S eta], xi].
pub fn imaginary_part_residual(
    pair: &HermitianPair,
    params: &HkParams,
    w: &Vector,
    xi: &Vector,
    eta: &Vector,
) -> Result<f64> {
    let g = &pair.algebra;
    let (_, s, ri) = rs_at(pair, params, w)?;
    let (xg, eg) = (pair.from_m(xi), pair.from_m(eta));
    let lhs = &s * &ri * pair.to_m(&g.bracket(w, &g.bracket(&xg, &eg)));
    let t1 = g.bracket(&g.bracket(w, &pair.from_m(&(&ri * &s * xi))), &eg);
    let t2 = g.bracket(&g.bracket(w, &pair.from_m(&(&ri * &s * eta))), &xg);
    Ok(max_abs(&(lhs - pair.to_m(&(t1 - t2)))))
}
