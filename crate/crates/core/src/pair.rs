//! Hermitian symmetric pairs (g, k) with the complex structure on m.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{basis_matrix, build_algebra, max_abs_m, CompactLieAlgebra, Family, Vector};
use crate::roots::compute_root_datum;
use crate::spectral::Spectrum;

/// Which irreducible Hermitian symmetric space.
///
/// Text form: `su:p,q`, `sp:n`, `so*:n`, `soB:n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpaceSpec {
    /// su(p+q) / s(u(p)+u(q))
    Su { p: usize, q: usize },
    /// sp(n) / u(n)
    Sp { n: usize },
    /// so(2n) / u(n), n >= 3
    SoStar { n: usize },
    /// so(n+2) / (so(2)+so(n)), n >= 3
    SoB { n: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootType {
    C,
    BC,
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RootType::C => "C",
            RootType::BC => "BC",
        })
    }
}

impl SpaceSpec {
    pub fn family_and_size(&self) -> (Family, usize) {
        match *self {
            SpaceSpec::Su { p, q } => (Family::Su, p + q),
            SpaceSpec::Sp { n } => (Family::Sp, n),
            SpaceSpec::SoStar { n } => (Family::So, 2 * n),
            SpaceSpec::SoB { n } => (Family::So, n + 2),
        }
    }

    /// Real rank of the symmetric space.
    pub fn rank(&self) -> usize {
        match *self {
            SpaceSpec::Su { p, q } => p.min(q),
            SpaceSpec::Sp { n } => n,
            SpaceSpec::SoStar { n } => n / 2,
            SpaceSpec::SoB { .. } => 2,
        }
    }

    /// Restricted root type expected from the classification.
    pub fn expected_type(&self) -> RootType {
        match *self {
            SpaceSpec::Su { p, q } if p != q => RootType::BC,
            SpaceSpec::SoStar { n } if n % 2 == 1 => RootType::BC,
            _ => RootType::C,
        }
    }

    fn validate(&self) -> std::result::Result<(), String> {
        match *self {
            SpaceSpec::Su { p, q } if p == 0 || q == 0 => Err("p and q must be positive".into()),
            SpaceSpec::Sp { n: 0 } => Err("n must be positive".into()),
            SpaceSpec::SoStar { n } if n < 3 => Err("so* needs n >= 3".into()),
            SpaceSpec::SoB { n } if n < 3 => Err("soB needs n >= 3".into()),
            _ => Ok(()),
        }
    }

    /// The central element of k whose adjoint action squares to -1 on m.
    fn center_matrix(&self) -> DMatrix<Complex64> {
        let i = Complex64::new(0.0, 1.0);
        match *self {
            SpaceSpec::Su { p, q } => {
                let n = (p + q) as f64;
                DMatrix::from_fn(p + q, p + q, |r, c| {
                    if r != c {
                        Complex64::new(0.0, 0.0)
                    } else if r < p {
                        i * (q as f64 / n)
                    } else {
                        -i * (p as f64 / n)
                    }
                })
            }
            SpaceSpec::Sp { n } => DMatrix::from_fn(2 * n, 2 * n, |r, c| {
                if r != c {
                    Complex64::new(0.0, 0.0)
                } else if r < n {
                    i * 0.5
                } else {
                    -i * 0.5
                }
            }),
            SpaceSpec::SoStar { n } => DMatrix::from_fn(2 * n, 2 * n, |r, c| {
                if r + n == c {
                    Complex64::new(-0.5, 0.0)
                } else if c + n == r {
                    Complex64::new(0.5, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
            SpaceSpec::SoB { n } => DMatrix::from_fn(n + 2, n + 2, |r, c| match (r, c) {
                (0, 1) => Complex64::new(1.0, 0.0),
                (1, 0) => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, 0.0),
            }),
        }
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SpaceSpec::Su { p, q } => write!(f, "su:{p},{q}"),
            SpaceSpec::Sp { n } => write!(f, "sp:{n}"),
            SpaceSpec::SoStar { n } => write!(f, "so*:{n}"),
            SpaceSpec::SoB { n } => write!(f, "soB:{n}"),
        }
    }
}

impl FromStr for SpaceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidSpace {
            spec: s.to_string(),
            reason: reason.to_string(),
        };
        let (kind, rest) = s.trim().split_once(':').ok_or_else(|| bad("expected `kind:args`"))?;
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| bad("expected a positive integer"))
        };
        let spec = match kind {
            "su" => {
                let (p, q) = rest.split_once(',').ok_or_else(|| bad("su needs `p,q`"))?;
                SpaceSpec::Su { p: num(p)?, q: num(q)? }
            }
            "sp" => SpaceSpec::Sp { n: num(rest)? },
            "so*" => SpaceSpec::SoStar { n: num(rest)? },
            "soB" => SpaceSpec::SoB { n: num(rest)? },
            _ => return Err(bad("kind must be one of su, sp, so*, soB")),
        };
        spec.validate().map_err(|r| bad(&r))?;
        Ok(spec)
    }
}

#[derive(Clone, Debug)]
pub struct HermitianPair {
    pub spec: SpaceSpec,
    pub algebra: CompactLieAlgebra,
    /// Orthonormal basis of k (coefficient vectors in g).
    pub k_basis: Vec<Vector>,
    /// Orthonormal basis of m.
    pub m_basis: Vec<Vector>,
    pub z0: Vector,
    /// ad(Z0) on m, in m_basis coordinates.
    pub i_op: DMatrix<f64>,
    bm: DMatrix<f64>,
    bk: DMatrix<f64>,
}

/// Tolerance for the eigenvalues of -ad(Z0)^2 to be exactly 0 or 1.
const Z0_TOL: f64 = 1e-10;

impl HermitianPair {
    fn raw(spec: SpaceSpec) -> Result<Self> {
        let (family, size) = spec.family_and_size();
        let algebra = build_algebra(family, size)?;
        let z0 = algebra.coords_of(&spec.center_matrix());
        let back = algebra.realize(&z0) - spec.center_matrix();
        if back.iter().any(|z| z.norm() > 1e-12) {
            return Err(Error::Construction("center element is not in the algebra".into()));
        }
        let ad = algebra.ad(&z0);
        let spec_dec = Spectrum::new(&(-(&ad * &ad)));
        let mut k_basis = Vec::new();
        let mut m_basis = Vec::new();
        for c in &spec_dec.clusters {
            if c.mean.abs() < Z0_TOL {
                k_basis.extend(c.vectors.iter().cloned());
            } else if (c.mean - 1.0).abs() < Z0_TOL {
                m_basis.extend(c.vectors.iter().cloned());
            } else {
                return Err(Error::Construction(format!(
                    "ad(Z0)^2 has eigenvalue {:e}, not in {{0,-1}}",
                    -c.mean
                )));
            }
        }
        Ok(Self::assemble(spec, algebra, k_basis, m_basis, z0))
    }

    fn assemble(
        spec: SpaceSpec,
        algebra: CompactLieAlgebra,
        k_basis: Vec<Vector>,
        m_basis: Vec<Vector>,
        z0: Vector,
    ) -> Self {
        let n = algebra.dim;
        let bm = basis_matrix(&m_basis, n);
        let bk = basis_matrix(&k_basis, n);
        let i_op = bm.transpose() * &algebra.gram * algebra.ad(&z0) * &bm;
        Self {
            spec,
            algebra,
            k_basis,
            m_basis,
            z0,
            i_op,
            bm,
            bk,
        }
    }

    pub fn dim_m(&self) -> usize {
        self.m_basis.len()
    }

    pub fn dim_k(&self) -> usize {
        self.k_basis.len()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim
    }

    /// m-coordinates of a vector of g (orthogonal projection).
    pub fn to_m(&self, v: &Vector) -> Vector {
        self.bm.transpose() * (&self.algebra.gram * v)
    }

    pub fn from_m(&self, c: &Vector) -> Vector {
        &self.bm * c
    }

    pub fn to_k(&self, v: &Vector) -> Vector {
        self.bk.transpose() * (&self.algebra.gram * v)
    }

    pub fn from_k(&self, c: &Vector) -> Vector {
        &self.bk * c
    }

    /// Orthogonal projection onto m, as a vector of g.
    pub fn project_m(&self, v: &Vector) -> Vector {
        self.from_m(&self.to_m(v))
    }

    pub fn project_k(&self, v: &Vector) -> Vector {
        self.from_k(&self.to_k(v))
    }

    /// Compresses an endomorphism of g to m (valid when it preserves m).
    pub fn restrict_m(&self, op: &DMatrix<f64>) -> DMatrix<f64> {
        self.bm.transpose() * &self.algebra.gram * op * &self.bm
    }

    pub fn restrict_k(&self, op: &DMatrix<f64>) -> DMatrix<f64> {
        self.bk.transpose() * &self.algebra.gram * op * &self.bk
    }

    /// I applied to a vector of g lying in m.
    pub fn apply_i(&self, v: &Vector) -> Vector {
        self.algebra.bracket(&self.z0, v)
    }

    pub fn m_matrix(&self) -> &DMatrix<f64> {
        &self.bm
    }

    pub fn k_matrix(&self) -> &DMatrix<f64> {
        &self.bk
    }

    /// Max deviation of exp(pi/2 ad Z0)|m from I.
    pub fn check_i_in_adk(&self) -> f64 {
        let e = (self.algebra.ad(&self.z0) * std::f64::consts::FRAC_PI_2).exp();
        max_abs_m(&(self.restrict_m(&e) - &self.i_op))
    }

    fn rescaled(&self, factor: f64) -> Self {
        let mut algebra = self.algebra.clone();
        algebra.rescale_form(factor);
        let s = 1.0 / factor.sqrt();
        let k = self.k_basis.iter().map(|v| v * s).collect();
        let m = self.m_basis.iter().map(|v| v * s).collect();
        Self::assemble(self.spec, algebra, k, m, self.z0.clone())
    }
}

/// Builds the pair and normalizes the form so that the root vectors X of
/// long noncompact roots have unit length.
pub fn build_pair(spec: SpaceSpec) -> Result<HermitianPair> {
    spec.validate().map_err(|reason| Error::InvalidSpace {
        spec: spec.to_string(),
        reason,
    })?;
    let raw = HermitianPair::raw(spec)?;
    let roots = compute_root_datum(&raw)?;
    let top = roots
        .highest_noncompact()
        .ok_or_else(|| Error::Construction("no noncompact roots".into()))?;
    let len2 = raw.algebra.invariant_form(&top.x, &top.x);
    Ok(raw.rescaled(1.0 / len2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_round_trip() {
        for s in ["su:1,2", "sp:3", "so*:4", "soB:5"] {
            assert_eq!(s.parse::<SpaceSpec>().unwrap().to_string(), s);
        }
        for s in ["su:0,1", "so*:2", "soB:1", "foo:1", "sp", "su:1"] {
            assert!(s.parse::<SpaceSpec>().is_err(), "{s}");
        }
    }

    #[test]
    fn dimensions_and_i() {
        let cases = [
            ("su:1,1", 2, 1),
            ("su:1,2", 4, 4),
            ("su:2,2", 8, 7),
            ("sp:2", 6, 4),
            ("so*:3", 6, 9),
            ("soB:3", 6, 4),
        ];
        for (s, dm, dk) in cases {
            let p = build_pair(s.parse().unwrap()).unwrap();
            assert_eq!((p.dim_m(), p.dim_k()), (dm, dk), "{s}");
            let i2 = &p.i_op * &p.i_op + DMatrix::identity(dm, dm);
            assert!(max_abs_m(&i2) < 1e-12, "{s}");
            assert!(p.check_i_in_adk() < 1e-10, "{s}");
        }
    }
}
