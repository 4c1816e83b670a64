//! Strongly orthogonal cascade, restricted roots and their multiplicities,
//! the partner map m_lambda -> k_lambda, and the restriction maps to the
//! torus spanned by the T_j.

use std::fmt;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::{max_abs, max_abs_m, orthonormalize, Vector};
use crate::pair::{HermitianPair, RootType};
use crate::roots::{lex_cmp, RootDatum, ROOT_TOL};
use crate::spectral::Spectrum;

#[derive(Clone, Debug)]
pub struct StronglyOrthogonalSet {
    /// Indices into `RootDatum::positive`.
    pub roots: Vec<usize>,
    pub x: Vec<Vector>,
    pub y: Vec<Vector>,
    pub t: Vec<Vector>,
}

impl StronglyOrthogonalSet {
    pub fn rank(&self) -> usize {
        self.roots.len()
    }

    /// sum_j coeffs[j] X_j
    pub fn combine(&self, coeffs: &[f64]) -> Vector {
        let mut w = Vector::zeros(self.x[0].len());
        for (x, c) in self.x.iter().zip(coeffs) {
            w += x * *c;
        }
        w
    }
}

fn strongly_orthogonal(rd: &RootDatum, a: &[f64], b: &[f64]) -> bool {
    let sum: Vec<f64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let zero = |v: &[f64]| v.iter().all(|c| c.abs() < ROOT_TOL);
    !zero(&sum) && !zero(&diff) && !rd.is_root(&sum) && !rd.is_root(&diff)
}

/// Greedy cascade: repeatedly take the highest noncompact positive root
/// strongly orthogonal to those already chosen.
pub fn cascade(pair: &HermitianPair, rd: &RootDatum) -> Result<StronglyOrthogonalSet> {
    let mut chosen: Vec<usize> = Vec::new();
    loop {
        let next = rd
            .positive
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.compact)
            .filter(|(_, r)| {
                chosen
                    .iter()
                    .all(|&c| strongly_orthogonal(rd, &rd.positive[c].coords, &r.coords))
            })
            .max_by(|a, b| lex_cmp(&a.1.coords, &b.1.coords));
        match next {
            Some((i, _)) => chosen.push(i),
            None => break,
        }
    }
    if chosen.len() != pair.spec.rank() {
        return Err(Error::Construction(format!(
            "cascade has {} roots, rank of {} is {}",
            chosen.len(),
            pair.spec,
            pair.spec.rank()
        )));
    }
    Ok(StronglyOrthogonalSet {
        x: chosen.iter().map(|&i| rd.positive[i].x.clone()).collect(),
        y: chosen.iter().map(|&i| rd.positive[i].y.clone()).collect(),
        t: chosen.iter().map(|&i| rd.positive[i].t.clone()).collect(),
        roots: chosen,
    })
}

/// A functional on a with half-integer coordinates, stored doubled:
/// lambda(sum x_j X_j) = i * sum (twice_j / 2) x_j.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct HalfRoot {
    pub twice: Vec<i32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootShape {
    /// 1/2 e_j
    Half(usize),
    /// e_j
    Long(usize),
    /// 1/2 (e_p + sign e_k), p < k
    Mixed(usize, usize, i32),
}

impl HalfRoot {
    pub fn coord(&self, j: usize) -> f64 {
        self.twice[j] as f64 / 2.0
    }

    /// -i lambda(sum x_j X_j)
    pub fn eval(&self, x: &[f64]) -> f64 {
        x.iter().enumerate().map(|(j, v)| self.coord(j) * v).sum()
    }

    pub fn shape(&self) -> Option<RootShape> {
        let nz: Vec<(usize, i32)> = self
            .twice
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0)
            .map(|(j, v)| (j, *v))
            .collect();
        match nz.as_slice() {
            [(j, 1)] => Some(RootShape::Half(*j)),
            [(j, 2)] => Some(RootShape::Long(*j)),
            [(p, 1), (k, s)] if s.abs() == 1 => Some(RootShape::Mixed(*p, *k, *s)),
            _ => None,
        }
    }

    pub fn from_shape(rank: usize, shape: RootShape) -> Self {
        let mut twice = vec![0; rank];
        match shape {
            RootShape::Half(j) => twice[j] = 1,
            RootShape::Long(j) => twice[j] = 2,
            RootShape::Mixed(p, k, s) => {
                twice[p] = 1;
                twice[k] = s;
            }
        }
        Self { twice }
    }
}

impl fmt::Display for HalfRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.shape() {
            Some(RootShape::Half(j)) => write!(f, "½ε{}", j + 1),
            Some(RootShape::Long(j)) => write!(f, "ε{}", j + 1),
            Some(RootShape::Mixed(p, k, s)) => {
                write!(f, "½(ε{}{}ε{})", p + 1, if s > 0 { '+' } else { '-' }, k + 1)
            }
            None => write!(f, "{:?}/2", self.twice),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RestrictedRoot {
    pub root: HalfRoot,
    /// Orthonormal basis of m_lambda (vectors of g).
    pub m_space: Vec<Vector>,
    /// Orthonormal basis of k_lambda.
    pub k_space: Vec<Vector>,
    /// Index of lambda_I in the root list, or None when I m_lambda lies in a.
    pub partner: Option<usize>,
}

impl RestrictedRoot {
    pub fn multiplicity(&self) -> usize {
        self.m_space.len()
    }
}

#[derive(Clone, Debug)]
pub struct RestrictedRootSystem {
    pub sos: StronglyOrthogonalSet,
    pub roots: Vec<RestrictedRoot>,
    /// Centralizer of a in k.
    pub k_zero: Vec<Vector>,
    pub root_type: RootType,
}

/// Generic weights used to separate the joint eigenspaces.
fn generic_weights(r: usize) -> Vec<f64> {
    (0..r)
        .map(|j| 1.0 + 0.618_034 * j as f64 + 0.091 * (j * j) as f64)
        .collect()
}

struct Family<'a> {
    pair: &'a HermitianPair,
    squares: Vec<DMatrix<f64>>,
    crosses: Vec<((usize, usize), DMatrix<f64>)>,
}

impl<'a> Family<'a> {
    fn new(pair: &'a HermitianPair, sos: &StronglyOrthogonalSet) -> Self {
        let g = &pair.algebra;
        let ads: Vec<DMatrix<f64>> = sos.x.iter().map(|x| g.ad(x)).collect();
        let squares = ads.iter().map(|a| -(a * a)).collect();
        let mut crosses = Vec::new();
        for p in 0..ads.len() {
            for k in p + 1..ads.len() {
                crosses.push(((p, k), &ads[p] * &ads[k]));
            }
        }
        Self { pair, squares, crosses }
    }

    fn rayleigh(&self, op: &DMatrix<f64>, v: &Vector) -> f64 {
        let g = &self.pair.algebra;
        g.invariant_form(v, &(op * v)) / g.invariant_form(v, v)
    }

    /// Reads off the functional from one joint eigenvector and checks that
    /// the whole cluster is a joint eigenspace.
    fn classify(&self, space: &[Vector]) -> Result<HalfRoot> {
        let r = self.squares.len();
        let sq: Vec<f64> = self.squares.iter().map(|m| self.rayleigh(m, &space[0])).collect();
        let mut c: Vec<f64> = sq.iter().map(|s| s.max(0.0).sqrt()).collect();
        let lead = c.iter().position(|v| *v > 1e-6);
        if let Some(p) = lead {
            for ((a, b), m) in &self.crosses {
                if *a == p {
                    // ad(X_p) ad(X_k) acts by lambda(X_p) lambda(X_k) = -c_p c_k
                    if self.rayleigh(m, &space[0]) > 0.0 {
                        c[*b] = -c[*b];
                    }
                }
            }
        }
        let twice: Vec<i32> = c.iter().map(|v| (2.0 * v).round() as i32).collect();
        let snap = c
            .iter()
            .zip(&twice)
            .fold(0.0f64, |m, (v, t)| m.max((2.0 * v - *t as f64).abs()));
        if snap > 1e-6 {
            return Err(Error::Construction(format!(
                "restricted root {c:?} is not half-integral"
            )));
        }
        let root = HalfRoot { twice };
        // joint eigenspace check
        for v in space {
            for (j, m) in self.squares.iter().enumerate() {
                let mu = root.coord(j).powi(2);
                if max_abs(&(m * v - v * mu)) > 1e-8 {
                    return Err(Error::Construction("cluster is not a joint eigenspace".into()));
                }
            }
            for ((p, k), m) in &self.crosses {
                let mu = -root.coord(*p) * root.coord(*k);
                if max_abs(&(m * v - v * mu)) > 1e-8 {
                    return Err(Error::Construction("cluster is not a joint eigenspace".into()));
                }
            }
        }
        if r > 0 && root.shape().is_none() {
            return Err(Error::Construction(format!("{root} is not in (BC)_r")));
        }
        Ok(root)
    }
}

/// Restricted root decomposition of m and k with respect to a = span{X_j}.
pub fn restricted_decomposition(pair: &HermitianPair, sos: &StronglyOrthogonalSet) -> Result<RestrictedRootSystem> {
    let g = &pair.algebra;
    let r = sos.rank();
    let w = sos.combine(&generic_weights(r));
    let ad = g.ad(&w);
    let sq = -(&ad * &ad);
    let fam = Family::new(pair, sos);

    let m_spec = Spectrum::new(&pair.restrict_m(&sq));
    let mut roots: Vec<(f64, RestrictedRoot)> = Vec::new();
    let mut a_dim = 0;
    for c in &m_spec.clusters {
        let space: Vec<Vector> = c.vectors.iter().map(|v| pair.from_m(v)).collect();
        if c.mean.abs() < 1e-8 {
            a_dim = space.len();
            continue;
        }
        let root = fam.classify(&space)?;
        roots.push((
            c.mean,
            RestrictedRoot {
                root,
                m_space: space,
                k_space: Vec::new(),
                partner: None,
            },
        ));
    }
    if a_dim != r {
        return Err(Error::Construction(format!("a has dimension {a_dim}, expected {r}")));
    }

    let k_spec = Spectrum::new(&pair.restrict_k(&sq));
    let mut k_zero = Vec::new();
    for c in &k_spec.clusters {
        let space: Vec<Vector> = c.vectors.iter().map(|v| pair.from_k(v)).collect();
        if c.mean.abs() < 1e-8 {
            k_zero = space;
            continue;
        }
        let slot = roots
            .iter_mut()
            .find(|(mu, _)| (mu - c.mean).abs() < 1e-8 * (1.0 + mu.abs()))
            .ok_or_else(|| Error::Construction(format!("eigenvalue {:e} on k has no match on m", c.mean)))?;
        slot.1.k_space = space;
    }
    let mut roots: Vec<RestrictedRoot> = roots.into_iter().map(|(_, r)| r).collect();
    roots.sort_by(|a, b| b.root.twice.cmp(&a.root.twice));

    // partners under I
    let a_basis = orthonormalize(&g.gram, &sos.x, 1e-8);
    let proj_norm =
        |space: &[Vector], v: &Vector| space.iter().map(|b| g.invariant_form(b, v).powi(2)).sum::<f64>().sqrt();
    for i in 0..roots.len() {
        let iv = pair.apply_i(&roots[i].m_space[0]);
        let mut best = (proj_norm(&a_basis, &iv), None);
        for (j, other) in roots.iter().enumerate() {
            let p = proj_norm(&other.m_space, &iv);
            if p > best.0 {
                best = (p, Some(j));
            }
        }
        if (best.0 - g.norm(&iv)).abs() > 1e-9 {
            return Err(Error::Construction("I m_lambda is not a single root space".into()));
        }
        roots[i].partner = best.1;
    }
    let root_type = if roots.iter().any(|r| matches!(r.root.shape(), Some(RootShape::Half(_)))) {
        RootType::BC
    } else {
        RootType::C
    };
    Ok(RestrictedRootSystem {
        sos: sos.clone(),
        roots,
        k_zero,
        root_type,
    })
}

impl RestrictedRootSystem {
    pub fn rank(&self) -> usize {
        self.sos.rank()
    }

    pub fn find(&self, root: &HalfRoot) -> Option<usize> {
        self.roots.iter().position(|r| &r.root == root)
    }

    /// Index of the restricted root whose m-space contains xi.
    pub fn locate(&self, pair: &HermitianPair, xi: &Vector) -> Option<usize> {
        let g = &pair.algebra;
        let n = g.norm(xi);
        self.roots.iter().position(|r| {
            let mut p = Vector::zeros(xi.len());
            for b in &r.m_space {
                p += b * g.invariant_form(b, xi);
            }
            g.norm(&(xi - p)) < 1e-9 * (1.0 + n)
        })
    }

    /// Positive roots of the form 1/2 e_j, e_j or 1/2(e_p + e_k).
    pub fn plus_plus(&self) -> Vec<&RestrictedRoot> {
        self.roots
            .iter()
            .filter(|r| !matches!(r.root.shape(), Some(RootShape::Mixed(_, _, -1))))
            .collect()
    }

    pub fn k_partner(&self, pair: &HermitianPair, xi: &Vector, idx: usize) -> Vector {
        k_partner_for(pair, &self.sos, &self.roots[idx].root, xi)
    }

    /// Basis of the sum m_lambda + I m_lambda.
    pub fn m_block(&self, pair: &HermitianPair, idx: usize) -> Vec<Vector> {
        let r = &self.roots[idx];
        let mut v = r.m_space.clone();
        v.extend(r.m_space.iter().map(|b| pair.apply_i(b)));
        orthonormalize(&pair.algebra.gram, &v, 1e-8)
    }
}

/// The element zeta of k_lambda with [w, xi] = i lambda(w) zeta and
/// [w, zeta] = -i lambda(w) xi for w in a.
pub fn k_partner_for(pair: &HermitianPair, sos: &StronglyOrthogonalSet, root: &HalfRoot, xi: &Vector) -> Vector {
    let j = (0..root.twice.len()).max_by_key(|&j| root.twice[j].abs()).unwrap();
    -pair.algebra.bracket(&sos.x[j], xi) / root.coord(j)
}

/// Images of restricted roots under the restriction to span{T_j}.
pub fn rho_m(root: &HalfRoot) -> HalfRoot {
    let mut t = root.twice.clone();
    t.iter_mut().for_each(|v| *v = v.abs());
    HalfRoot { twice: t }
}

pub fn rho_k(root: &HalfRoot) -> Option<HalfRoot> {
    match root.shape()? {
        RootShape::Long(_) => None,
        RootShape::Half(_) => Some(root.clone()),
        RootShape::Mixed(p, k, _) => Some(HalfRoot::from_shape(root.twice.len(), RootShape::Mixed(p, k, -1))),
    }
}

/// -i alpha(T_j), j = 1..r, for a root with torus coordinates `coords`.
pub fn restrict_root(pair: &HermitianPair, rd: &RootDatum, sos: &StronglyOrthogonalSet, coords: &[f64]) -> Vec<f64> {
    sos.t.iter().map(|t| rd.eval(pair, coords, t)).collect()
}

/// Residual of I ad([w, Iw]) = ad_w^2 + ad_{Iw}^2 on m, and of the
/// commutator [ad_w^2, ad_{Iw}^2] on m.
pub fn check_quadratic_identity(pair: &HermitianPair, w: &Vector) -> f64 {
    let g = &pair.algebra;
    let iw = pair.apply_i(w);
    let (aw, aiw) = (g.ad(w), g.ad(&iw));
    let sw = pair.restrict_m(&(&aw * &aw));
    let siw = pair.restrict_m(&(&aiw * &aiw));
    let lhs = &pair.i_op * pair.restrict_m(&g.ad(&g.bracket(w, &iw)));
    let r1 = max_abs_m(&(lhs - (&sw + &siw)));
    let r2 = max_abs_m(&(&sw * &siw - &siw * &sw));
    r1.max(r2)
}

/// Centralizer of k^a in m compared with a + Ia. None when k^a = 0.
pub fn check_centralizer(pair: &HermitianPair, rrs: &RestrictedRootSystem) -> Option<f64> {
    if rrs.k_zero.is_empty() {
        return None;
    }
    let g = &pair.algebra;
    let d = pair.dim_m();
    let mut stacked = DMatrix::zeros(d, d);
    for z in &rrs.k_zero {
        let a = g.ad(z) * pair.m_matrix();
        stacked += a.transpose() * &g.gram * &a;
    }
    let spec = Spectrum::new(&stacked);
    let cent: Vec<Vector> = spec
        .clusters
        .iter()
        .filter(|c| c.mean.abs() < 1e-9)
        .flat_map(|c| c.vectors.iter().map(|v| pair.from_m(v)))
        .collect();
    let mut target = rrs.sos.x.clone();
    target.extend(rrs.sos.y.iter().cloned());
    let target = orthonormalize(&g.gram, &target, 1e-8);
    if cent.len() != target.len() {
        return Some(1.0);
    }
    let mut worst = 0.0f64;
    for v in &cent {
        let mut p = Vector::zeros(v.len());
        for b in &target {
            p += b * g.invariant_form(b, v);
        }
        worst = worst.max(g.norm(&(v - p)));
    }
    Some(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pair::build_pair;
    use crate::roots::compute_root_datum;

    fn system(s: &str) -> (HermitianPair, RestrictedRootSystem) {
        let p = build_pair(s.parse().unwrap()).unwrap();
        let rd = compute_root_datum(&p).unwrap();
        let sos = cascade(&p, &rd).unwrap();
        let rrs = restricted_decomposition(&p, &sos).unwrap();
        (p, rrs)
    }

    fn table(rrs: &RestrictedRootSystem) -> Vec<(String, usize)> {
        let mut t: Vec<(String, usize)> = rrs
            .roots
            .iter()
            .map(|r| (r.root.to_string(), r.multiplicity()))
            .collect();
        t.sort();
        t
    }

    #[test]
    fn su12_is_bc1() {
        let (_, rrs) = system("su:1,2");
        assert_eq!(rrs.root_type, RootType::BC);
        assert_eq!(table(&rrs), vec![("½ε1".to_string(), 2), ("ε1".to_string(), 1)]);
    }

    #[test]
    fn sp2_is_c2() {
        let (_, rrs) = system("sp:2");
        assert_eq!(rrs.root_type, RootType::C);
        let mut expect = vec![("½(ε1+ε2)", 1), ("½(ε1-ε2)", 1), ("ε1", 1), ("ε2", 1)]
            .into_iter()
            .map(|(s, m)| (s.to_string(), m))
            .collect::<Vec<_>>();
        expect.sort();
        assert_eq!(table(&rrs), expect);
        assert!(rrs.k_zero.is_empty());
    }

    #[test]
    fn partner_relations_hold() {
        let (p, rrs) = system("su:2,2");
        let g = &p.algebra;
        let x = [0.7, -1.3];
        let w = rrs.sos.combine(&x);
        for (i, r) in rrs.roots.iter().enumerate() {
            for xi in &r.m_space {
                let zeta = rrs.k_partner(&p, xi, i);
                let lam = r.root.eval(&x);
                // i lambda(w) = -lam
                assert!(max_abs(&(g.bracket(&w, xi) + &zeta * lam)) < 1e-10);
                assert!(max_abs(&(g.bracket(&w, &zeta) - xi * lam)) < 1e-10);
            }
        }
    }
}
