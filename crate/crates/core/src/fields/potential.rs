//! Kähler potential for the structures with a2 = 0, and its dbar-form.
//!
//! The profile q(t) = (1/2t) * int_{t0}^{t} ds / sqrt(a0 + s - a1^2/s) is
//! evaluated by adaptive Gauss-Kronrod quadrature.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::ops::{p_op, q_hat, q_hat_radial};
use crate::fields::params::HkParams;
use crate::lie::{complexify, CVector, Vector};
use crate::pair::HermitianPair;

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const K_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
// Gauss weights on the odd-indexed nodes (1, 3, 5, 7)
const G_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = K_WEIGHTS[7] * f(c);
    let mut g = G_WEIGHTS[3] * f(c);
    for i in 0..7 {
        let x = h * GK_NODES[i];
        let s = f(c - x) + f(c + x);
        k += K_WEIGHTS[i] * s;
        if i % 2 == 1 {
            g += G_WEIGHTS[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss-Kronrod quadrature of f over [a, b] (b < a allowed).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut stack = vec![(a.min(b), a.max(b), 0u32)];
    let mut total = 0.0;
    let budget = tol / (b - a).abs();
    while let Some((lo, hi, depth)) = stack.pop() {
        let (v, err) = gk15(&f, lo, hi);
        if !v.is_finite() {
            return Err(Error::Quadrature(format!("non-finite integrand on [{lo}, {hi}]")));
        }
        if err <= budget * (hi - lo) || err < 1e-15 * v.abs() {
            total += v;
        } else if depth >= 48 {
            return Err(Error::Quadrature(format!(
                "no convergence on [{lo}, {hi}], error estimate {err:e}"
            )));
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
    }
    Ok(if b > a { total } else { -total })
}

/// The radial profile of the potential.
#[derive(Clone, Copy, Debug)]
pub struct PotentialProfile {
    pub params: HkParams,
    pub t0: f64,
}

impl PotentialProfile {
    pub fn new(params: HkParams) -> Result<Self> {
        if params.a2 != 0.0 {
            return Err(Error::Params("the potential is only constructed for a2 = 0".into()));
        }
        Ok(Self {
            params,
            t0: 1f64.max(params.a_dagger() + 1.0),
        })
    }

    fn radicand(&self, s: f64) -> f64 {
        let a1 = self.params.a1;
        let c = if a1 != 0.0 { a1 * a1 / s } else { 0.0 };
        self.params.a0 + s - c
    }

    /// int_{t0}^{t} ds / sqrt(a0 + s - a1^2/s)
    pub fn primitive(&self, t: f64) -> Result<f64> {
        if t <= self.params.a_dagger() || t <= 0.0 {
            return Err(Error::OutsideDomain(format!("t = {t} is not above a_dagger")));
        }
        integrate(|s| 1.0 / self.radicand(s).sqrt(), self.t0, t, 1e-13)
    }

    pub fn q(&self, t: f64) -> Result<f64> {
        Ok(self.primitive(t)? / (2.0 * t))
    }

    pub fn dq(&self, t: f64) -> Result<f64> {
        let q = self.q(t)?;
        Ok(-q / t + 1.0 / (2.0 * t * self.radicand(t).sqrt()))
    }
}

/// Q(w) = <q(A(w)) w, w>.
pub fn potential(pair: &HermitianPair, profile: &PotentialProfile, w: &Vector) -> Result<f64> {
    let qh = q_hat(pair, w, |t| profile.q(t).ok())?;
    Ok(pair.algebra.invariant_form(&qh, w))
}

/// The dbar-form of Q at (e, w) evaluated on (eta, u), eta in g, u in m:
///
/// (i/2) <(1 + (SR^-1)^2) R w', eta> + (1/2) <(1 + i SR^-1) w', u>,
/// w' = q^(w) + radial derivative of q^ at w.
pub fn dbar_q_form(
    pair: &HermitianPair,
    profile: &PotentialProfile,
    w: &Vector,
    eta: &Vector,
    u: &Vector,
) -> Result<Complex64> {
    let g = &pair.algebra;
    let q = |t: f64| profile.q(t).ok();
    let dq = |t: f64| profile.dq(t).ok();
    let wp = q_hat(pair, w, q)? + q_hat_radial(pair, w, q, dq)?;
    let ops = p_op(pair, &profile.params, w)?;
    let r_inv = ops
        .r
        .clone()
        .try_inverse()
        .ok_or(Error::SingularPoint { eigenvalue: 0.0 })?;
    let sr = &ops.s * r_inv;
    let wpm = pair.to_m(&wp);
    let d = pair.dim_m();
    let id = nalgebra::DMatrix::<f64>::identity(d, d);
    let first = pair.from_m(&((&id + &sr * &sr) * &ops.r * &wpm));
    let second_re = pair.from_m(&wpm);
    let second_im = pair.from_m(&(&sr * &wpm));
    let second: CVector = crate::lie::join(&second_re, &second_im);
    let a = Complex64::new(0.0, 0.5) * g.invariant_form(&first, eta);
    let b = 0.5 * g.form_c(&second, &complexify(u));
    Ok(a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_matches_closed_form_when_a1_is_zero() {
        // int ds / sqrt(a0 + s) = 2 sqrt(a0 + s)
        let prof = PotentialProfile::new(HkParams::new(1.5, 0.0, 0.0, 1)).unwrap();
        for t in [0.2f64, 1.0, 4.0, 30.0] {
            let exact = 2.0 * (1.5 + t).sqrt() - 2.0 * (1.5 + prof.t0).sqrt();
            assert!((prof.primitive(t).unwrap() - exact).abs() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn quadrature_of_polynomial_is_exact() {
        let v = integrate(|x| x.powi(5) - 2.0 * x, 0.0, 2.0, 1e-14).unwrap();
        assert!((v - (64.0 / 6.0 - 4.0)).abs() < 1e-13);
    }

    #[test]
    fn a2_nonzero_is_refused() {
        assert!(PotentialProfile::new(HkParams::new(1.0, 0.0, 0.2, 1)).is_err());
    }
}
