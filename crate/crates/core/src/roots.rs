//! Root datum of a Hermitian pair: a Cartan subalgebra of k containing Z0,
//! root vectors, and normalized real triples (X, Y, T) for positive roots.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::lie::{complexify, orthonormalize, CVector, Vector};
use crate::pair::HermitianPair;
use crate::spectral::Spectrum;

/// Coordinates below this are treated as zero when ordering roots.
pub const ROOT_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct Root {
    /// -i alpha(t_k) for the orthonormal torus basis t_k.
    pub coords: Vec<f64>,
    pub compact: bool,
    /// E_alpha; E_{-alpha} is its complex conjugate.
    pub e: CVector,
    /// (E + E_-)/2
    pub x: Vector,
    /// i (E - E_-)/2
    pub y: Vector,
    /// i H_alpha / 2, a real element of the torus.
    pub t: Vector,
}

#[derive(Clone, Debug)]
pub struct RootDatum {
    /// Orthonormal basis of the torus; the first vector is along Z0.
    pub t_basis: Vec<Vector>,
    pub positive: Vec<Root>,
}

/// Lexicographic comparison with tolerance.
pub fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        if (x - y).abs() > ROOT_TOL {
            return x.total_cmp(y);
        }
    }
    std::cmp::Ordering::Equal
}

fn lex_positive(a: &[f64]) -> bool {
    a.iter().find(|v| v.abs() > ROOT_TOL).is_some_and(|v| *v > 0.0)
}

impl RootDatum {
    pub fn rank(&self) -> usize {
        self.t_basis.len()
    }

    pub fn noncompact(&self) -> impl Iterator<Item = &Root> {
        self.positive.iter().filter(|r| !r.compact)
    }

    pub fn compact(&self) -> impl Iterator<Item = &Root> {
        self.positive.iter().filter(|r| r.compact)
    }

    pub fn highest_noncompact(&self) -> Option<&Root> {
        self.noncompact().max_by(|a, b| lex_cmp(&a.coords, &b.coords))
    }

    /// -i alpha(h) for a real torus element h.
    pub fn eval(&self, pair: &HermitianPair, coords: &[f64], h: &Vector) -> f64 {
        self.t_basis
            .iter()
            .zip(coords)
            .map(|(t, a)| pair.algebra.invariant_form(t, h) * a)
            .sum()
    }

    /// Whether `coords` is a root (of either sign).
    pub fn is_root(&self, coords: &[f64]) -> bool {
        let neg: Vec<f64> = coords.iter().map(|v| -v).collect();
        self.positive
            .iter()
            .any(|r| lex_cmp(&r.coords, coords).is_eq() || lex_cmp(&r.coords, &neg).is_eq())
    }
}

/// Kernel of a symmetric PSD matrix as orthonormal columns.
fn null_space(m: &DMatrix<f64>, tol: f64) -> Vec<Vector> {
    let s = Spectrum::new(m);
    s.clusters
        .iter()
        .filter(|c| c.mean.abs() < tol)
        .flat_map(|c| c.vectors.iter().cloned())
        .collect()
}

fn cartan_in_k(pair: &HermitianPair, rng: &mut ChaCha8Rng) -> Option<Vec<Vector>> {
    let g = &pair.algebra;
    let coeffs = Vector::from_fn(pair.dim_k(), |_, _| StandardNormal.sample(rng));
    let x = pair.from_k(&coeffs);
    let m = g.ad(&x) * pair.k_matrix();
    let gram = m.transpose() * &g.gram * &m;
    let scale = 1.0 + gram.norm();
    let torus: Vec<Vector> = null_space(&gram, 1e-10 * scale)
        .into_iter()
        .map(|c| pair.from_k(&c))
        .collect();
    // maximality: the centralizer of the torus in g is the torus itself
    let n = g.dim;
    let mut stacked = DMatrix::zeros(n, n);
    for t in &torus {
        let a = g.ad(t);
        stacked += a.transpose() * &g.gram * &a;
    }
    let cent = null_space(&stacked, 1e-10 * (1.0 + stacked.norm()));
    if cent.len() != torus.len() {
        return None;
    }
    let mut start = vec![pair.z0.clone()];
    start.extend(torus);
    let basis = orthonormalize(&g.gram, &start, 1e-8);
    (basis.len() == cent.len()).then_some(basis)
}

pub fn compute_root_datum(pair: &HermitianPair) -> Result<RootDatum> {
    let g = &pair.algebra;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for _attempt in 0..8 {
        let Some(t_basis) = cartan_in_k(pair, &mut rng) else {
            continue;
        };
        let weights: Vec<f64> = t_basis.iter().map(|_| StandardNormal.sample(&mut rng)).collect();
        let mut h = Vector::zeros(g.dim);
        for (t, w) in t_basis.iter().zip(&weights) {
            h += t * *w;
        }
        let ad_h = g.ad(&h);
        let spec = Spectrum::new(&(-(&ad_h * &ad_h)));
        let regular = spec.clusters.iter().all(|c| {
            if c.mean.abs() < 1e-9 {
                c.values.len() == t_basis.len()
            } else {
                c.values.len() == 2
            }
        });
        if !regular {
            continue;
        }
        let ads: Vec<DMatrix<f64>> = t_basis.iter().map(|t| g.ad(t)).collect();
        let mut positive = Vec::new();
        for c in spec.clusters.iter().filter(|c| c.mean.abs() >= 1e-9) {
            positive.push(make_root(pair, &t_basis, &ads, &ad_h, c.mean.sqrt(), &c.vectors[0])?);
        }
        positive.sort_by(|a, b| lex_cmp(&a.coords, &b.coords));
        return Ok(RootDatum { t_basis, positive });
    }
    Err(Error::Construction(format!("no regular torus found for {}", pair.spec)))
}

fn make_root(
    pair: &HermitianPair,
    t_basis: &[Vector],
    ads: &[DMatrix<f64>],
    ad_h: &DMatrix<f64>,
    theta: f64,
    u: &Vector,
) -> Result<Root> {
    let g = &pair.algebra;
    let v = ad_h * u / theta;
    let mut e = CVector::from_iterator(u.len(), u.iter().zip(v.iter()).map(|(a, b)| Complex64::new(*a, -*b)));
    let ee = g.herm(&e, &e);
    let mut coords: Vec<f64> = ads
        .iter()
        .map(|a| (g.herm(&e, &(complexify_mat(a) * &e)) / ee).im)
        .collect();
    if !lex_positive(&coords) {
        e = e.map(|z| z.conj());
        coords.iter_mut().for_each(|c| *c = -*c);
    }
    let compact = coords[0].abs() < ROOT_TOL;

    // phase: first significant coefficient real and positive
    let big = e.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let k = e.iter().position(|z| z.norm() > 1e-6 * big).unwrap();
    let phase = e[k].conj() / e[k].norm();
    e *= phase;

    // scale so that alpha(H) = 2 with [E, E_-] = -H
    let bracket = g.bracket_c(&e, &e.map(|z| z.conj()));
    let alpha_h: Complex64 = t_basis
        .iter()
        .zip(&coords)
        .map(|(t, a)| g.form_c(&complexify(t), &bracket) * Complex64::new(0.0, *a))
        .sum();
    if alpha_h.re >= 0.0 || alpha_h.im.abs() > 1e-8 * alpha_h.norm() {
        return Err(Error::Construction(format!(
            "root normalization failed: alpha([E,E-]) = {alpha_h}"
        )));
    }
    let scale = (-2.0 / alpha_h.re).sqrt();
    e *= Complex64::new(scale, 0.0);
    let hvec = -g.bracket_c(&e, &e.map(|z| z.conj()));
    // T = i H / 2
    let t = hvec.map(|z| -z.im / 2.0);
    let x = e.map(|z| z.re);
    let y = e.map(|z| -z.im);
    Ok(Root {
        coords,
        compact,
        e,
        x,
        y,
        t,
    })
}

fn complexify_mat(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|v| Complex64::new(v, 0.0))
}

/// Vector of g as a complex vector (re-export for callers working with E).
pub fn real_to_complex(v: &Vector) -> CVector {
    complexify(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{max_abs, max_abs_c};
    use crate::pair::build_pair;

    #[test]
    fn root_counts() {
        // (positive noncompact, positive compact)
        let cases = [
            ("su:1,1", 1, 0),
            ("su:1,2", 2, 1),
            ("su:2,2", 4, 2),
            ("sp:2", 3, 1),
            ("so*:3", 3, 3),
            ("soB:3", 3, 1),
        ];
        for (s, nc, c) in cases {
            let p = build_pair(s.parse().unwrap()).unwrap();
            let rd = compute_root_datum(&p).unwrap();
            assert_eq!(rd.noncompact().count(), nc, "{s}");
            assert_eq!(rd.compact().count(), c, "{s}");
        }
    }

    #[test]
    fn triples_are_normalized() {
        let p = build_pair("sp:2".parse().unwrap()).unwrap();
        let rd = compute_root_datum(&p).unwrap();
        let g = &p.algebra;
        for r in &rd.positive {
            assert!(max_abs(&(g.bracket(&r.x, &r.y) - &r.t)) < 1e-10);
            assert!(max_abs(&(g.bracket(&r.t, &r.x) - &r.y)) < 1e-10);
            assert!(max_abs(&(g.bracket(&r.t, &r.y) + &r.x)) < 1e-10);
            for t in &rd.t_basis {
                let lhs = g.bracket_c(&complexify(t), &r.e);
                let a = rd.eval(&p, &r.coords, t);
                let rhs = r.e.map(|z| z * Complex64::new(0.0, a));
                assert!(max_abs_c(&(lhs - rhs)) < 1e-10);
            }
            if !r.compact {
                assert!(max_abs(&(p.apply_i(&r.x) - &r.y)) < 1e-10);
            }
        }
        // long noncompact roots have unit X
        let top = rd.highest_noncompact().unwrap();
        assert!((g.invariant_form(&top.x, &top.x) - 1.0).abs() < 1e-10);
    }
}
