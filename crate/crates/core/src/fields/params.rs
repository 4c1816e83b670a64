use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::Vector;
use crate::pair::{HermitianPair, RootType};
use crate::restricted::StronglyOrthogonalSet;

/// The quadruple (a0, a1, a2, eps) selecting one structure of the family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HkParams {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub eps: i8,
}

impl HkParams {
    pub fn new(a0: f64, a1: f64, a2: f64, eps: i8) -> Self {
        Self { a0, a1, a2, eps }
    }

    pub fn c2(&self) -> f64 {
        self.a1 * self.a1 + self.a2 * self.a2
    }

    pub fn eps(&self) -> f64 {
        self.eps as f64
    }

    /// Lower bound for x_j^2 on the domain.
    pub fn a_dagger(&self) -> f64 {
        let c2 = self.c2();
        if c2 > 0.0 {
            0.5 * ((self.a0 * self.a0 + 4.0 * c2).sqrt() - self.a0)
        } else {
            -self.a0
        }
    }

    /// Checks membership in the admissible set for the given root type.
    pub fn check(&self, ty: RootType) -> Result<()> {
        if !(self.a0.is_finite() && self.a1.is_finite() && self.a2.is_finite()) {
            return Err(Error::Params("a0, a1, a2 must be finite".into()));
        }
        if self.eps != 1 && self.eps != -1 {
            return Err(Error::Params("eps must be +1 or -1".into()));
        }
        match ty {
            RootType::C => {
                if self.eps != 1 {
                    return Err(Error::Params("type C requires eps = +1".into()));
                }
            }
            RootType::BC => {
                if self.a1 != 0.0 || self.a2 != 0.0 {
                    return Err(Error::Params("type BC requires a1 = a2 = 0".into()));
                }
                let origin_case = self.a0 == 0.0 && self.eps == -1;
                if !(self.a0 > 0.0 || origin_case) {
                    return Err(Error::Params("type BC requires a0 > 0, or (a0, eps) = (0, -1)".into()));
                }
            }
        }
        Ok(())
    }

    /// Whether the point with Cartan coordinates x lies in the domain.
    pub fn contains(&self, x: &[f64]) -> bool {
        let ad = self.a_dagger();
        x.iter().all(|v| v * v > ad && (self.eps == 1 || *v != 0.0))
    }
}

impl fmt::Display for HkParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{}",
            self.a0,
            self.a1,
            self.a2,
            if self.eps > 0 { "+1" } else { "-1" }
        )
    }
}

impl FromStr for HkParams {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Config(format!("params `{s}`: expected a0,a1,a2,±1")));
        }
        let num = |t: &str| {
            t.parse::<f64>()
                .map_err(|_| Error::Config(format!("params `{s}`: `{t}` is not a number")))
        };
        let eps = match parts[3] {
            "+1" | "1" => 1,
            "-1" => -1,
            other => return Err(Error::Config(format!("params `{s}`: eps `{other}` must be ±1"))),
        };
        Ok(Self::new(num(parts[0])?, num(parts[1])?, num(parts[2])?, eps))
    }
}

/// A point of the domain: w = Ad_k (sum x_j X_j).
#[derive(Clone, Debug)]
pub struct DomainPoint {
    pub x: Vec<f64>,
    /// Ad_k on g (identity for points of a).
    pub ad_k: DMatrix<f64>,
    pub w: Vector,
}

impl DomainPoint {
    pub fn on_cartan(sos: &StronglyOrthogonalSet, x: &[f64]) -> Self {
        let w = sos.combine(x);
        let n = w.len();
        Self {
            x: x.to_vec(),
            ad_k: DMatrix::identity(n, n),
            w,
        }
    }

    pub fn rotated(sos: &StronglyOrthogonalSet, x: &[f64], ad_k: DMatrix<f64>) -> Self {
        let w = &ad_k * sos.combine(x);
        Self { x: x.to_vec(), ad_k, w }
    }
}

/// Ad_k for k = exp(zeta), zeta a random element of k with norm `size`.
pub fn random_ad_k<R: Rng>(pair: &HermitianPair, rng: &mut R, size: f64) -> DMatrix<f64> {
    let c = Vector::from_fn(pair.dim_k(), |_, _| StandardNormal.sample(rng));
    let c = &c * (size / c.norm());
    (pair.algebra.ad(&pair.from_k(&c))).exp()
}

/// Random Cartan coordinates with x_j^2 in (floor + lo, floor + hi), random signs,
/// where floor = max(a_dagger, 0).
pub fn random_cartan<R: Rng>(rng: &mut R, params: &HkParams, r: usize, lo: f64, hi: f64) -> Vec<f64> {
    let floor = params.a_dagger().max(0.0);
    (0..r)
        .map(|_| {
            let t = floor + lo + (hi - lo) * rng.random::<f64>();
            let s = if rng.random::<bool>() { 1.0 } else { -1.0 };
            s * t.sqrt()
        })
        .collect()
}

pub fn sample_point<R: Rng>(
    pair: &HermitianPair,
    sos: &StronglyOrthogonalSet,
    params: &HkParams,
    rng: &mut R,
) -> DomainPoint {
    let x = random_cartan(rng, params, sos.rank(), 0.3, 3.0);
    DomainPoint::rotated(sos, &x, random_ad_k(pair, rng, 1.0))
}

/// A random unit vector of m, in m-coordinates.
pub fn random_m<R: Rng>(pair: &HermitianPair, rng: &mut R) -> Vector {
    let v = Vector::from_fn(pair.dim_m(), |_, _| StandardNormal.sample(rng));
    let n = v.norm();
    v / n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a_dagger_values() {
        assert_eq!(HkParams::new(1.0, 0.0, 0.0, 1).a_dagger(), -1.0);
        // t^2 + a0 t - c^2 = 0 at t = a_dagger
        let p = HkParams::new(0.5, 0.3, -0.4, 1);
        let t = p.a_dagger();
        assert!((t * t + p.a0 * t - p.c2()).abs() < 1e-14);
    }

    #[test]
    fn admissibility() {
        assert!(HkParams::new(1.0, 0.1, 0.0, 1).check(RootType::BC).is_err());
        assert!(HkParams::new(0.0, 0.0, 0.0, -1).check(RootType::BC).is_ok());
        assert!(HkParams::new(0.0, 0.0, 0.0, 1).check(RootType::BC).is_err());
        assert!(HkParams::new(-3.0, 1.0, 2.0, 1).check(RootType::C).is_ok());
        assert!(HkParams::new(1.0, 0.0, 0.0, -1).check(RootType::C).is_err());
    }

    #[test]
    fn text_round_trip() {
        let p = HkParams::new(1.5, -0.25, 0.0, -1);
        assert_eq!(p.to_string().parse::<HkParams>().unwrap(), p);
        assert!("1,2,3".parse::<HkParams>().is_err());
        assert!("1,2,3,0".parse::<HkParams>().is_err());
    }
}
