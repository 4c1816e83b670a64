//! Compact classical Lie algebras given by structure constants.
//!
//! An algebra is built from a matrix realization: an orthonormal spanning
//! set of anti-Hermitian matrices is produced, structure constants are read
//! off by projection, and the residual of that projection is checked.
//! Everything downstream works with coefficient vectors only.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vector = DVector<f64>;
pub type CVector = DVector<Complex64>;

/// Largest acceptable residual when extracting structure constants.
pub const STRUCTURE_RESIDUAL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// su(n), n >= 2
    Su,
    /// compact sp(n) realized in u(2n), n >= 1
    Sp,
    /// so(n), n >= 3
    So,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Su => "su",
            Family::Sp => "sp",
            Family::So => "so",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CompactLieAlgebra {
    pub family: Family,
    pub size: usize,
    pub dim: usize,
    pub labels: Vec<String>,
    /// c[(i*dim + j)*dim + k] = k-th coefficient of [e_i, e_j]
    pub structure_constants: Vec<f64>,
    /// Gram matrix of the invariant form in the coefficient basis.
    pub gram: DMatrix<f64>,
    /// Scale of the form relative to -Re tr(XY).
    pub form_scale: f64,
    ad_basis: Vec<DMatrix<f64>>,
    realization: Vec<DMatrix<Complex64>>,
}

fn ad_matrices(c: &[f64], dim: usize) -> Vec<DMatrix<f64>> {
    (0..dim)
        .map(|i| DMatrix::from_fn(dim, dim, |k, j| c[(i * dim + j) * dim + k]))
        .collect()
}

fn mat_dim(family: Family, size: usize) -> usize {
    match family {
        Family::Su | Family::So => size,
        Family::Sp => 2 * size,
    }
}

fn unit(n: usize, r: usize, c: usize, v: Complex64) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(n, n);
    m[(r, c)] = v;
    m
}

/// Real inner product Re tr(A^* B) on complex matrices.
fn frob(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

fn spanning_set(family: Family, size: usize) -> Vec<(String, DMatrix<Complex64>)> {
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let mut out = Vec::new();
    match family {
        Family::Su => {
            let n = size;
            for a in 0..n {
                for b in a + 1..n {
                    out.push((format!("A{a}{b}"), unit(n, a, b, one) - unit(n, b, a, one)));
                    out.push((format!("S{a}{b}"), unit(n, a, b, i) + unit(n, b, a, i)));
                }
            }
            for a in 0..n - 1 {
                out.push((format!("H{a}"), unit(n, a, a, i) - unit(n, a + 1, a + 1, i)));
            }
        }
        Family::Sp => {
            // [[A, B], [-conj B, conj A]] with A skew-Hermitian, B symmetric
            let n = size;
            let m = 2 * n;
            let embed = |a: &DMatrix<Complex64>, b: &DMatrix<Complex64>| {
                let mut x = DMatrix::zeros(m, m);
                x.view_mut((0, 0), (n, n)).copy_from(a);
                x.view_mut((0, n), (n, n)).copy_from(b);
                x.view_mut((n, 0), (n, n)).copy_from(&(-b.map(|z| z.conj())));
                x.view_mut((n, n), (n, n)).copy_from(&a.map(|z| z.conj()));
                x
            };
            let zero = DMatrix::<Complex64>::zeros(n, n);
            for a in 0..n {
                for b in a + 1..n {
                    let skew = unit(n, a, b, one) - unit(n, b, a, one);
                    let herm = unit(n, a, b, i) + unit(n, b, a, i);
                    out.push((format!("A{a}{b}"), embed(&skew, &zero)));
                    out.push((format!("S{a}{b}"), embed(&herm, &zero)));
                }
                out.push((format!("D{a}"), embed(&unit(n, a, a, i), &zero)));
            }
            for a in 0..n {
                for b in a..n {
                    let mut re = unit(n, a, b, one);
                    let mut im = unit(n, a, b, i);
                    if a != b {
                        re += unit(n, b, a, one);
                        im += unit(n, b, a, i);
                    }
                    out.push((format!("Br{a}{b}"), embed(&zero, &re)));
                    out.push((format!("Bi{a}{b}"), embed(&zero, &im)));
                }
            }
        }
        Family::So => {
            let n = size;
            for a in 0..n {
                for b in a + 1..n {
                    out.push((format!("L{a}{b}"), unit(n, a, b, one) - unit(n, b, a, one)));
                }
            }
        }
    }
    out
}

impl CompactLieAlgebra {
    /// Builds su(n), sp(n) or so(n) with the form -Re tr(XY).
    pub fn build(family: Family, size: usize) -> Result<Self> {
        let ok = match family {
            Family::Su => size >= 2,
            Family::Sp => size >= 1,
            Family::So => size >= 3,
        };
        if !ok {
            return Err(Error::InvalidSize(format!("{}({size})", family.name())));
        }
        // Gram-Schmidt for the Frobenius product
        let mut labels = Vec::new();
        let mut basis: Vec<DMatrix<Complex64>> = Vec::new();
        for (label, mut m) in spanning_set(family, size) {
            for b in &basis {
                let p = frob(b, &m);
                m -= b.map(|z| z * p);
            }
            let norm = frob(&m, &m).sqrt();
            if norm > 1e-12 {
                basis.push(m.map(|z| z / norm));
                labels.push(label);
            }
        }
        let dim = basis.len();
        let mut c = vec![0.0; dim * dim * dim];
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                let br = &basis[i] * &basis[j] - &basis[j] * &basis[i];
                let mut rest = br.clone();
                for k in 0..dim {
                    let v = frob(&basis[k], &br);
                    c[(i * dim + j) * dim + k] = v;
                    rest -= basis[k].map(|z| z * v);
                }
                worst = worst.max(rest.iter().map(|z| z.norm()).fold(0.0, f64::max));
            }
        }
        if worst > STRUCTURE_RESIDUAL {
            return Err(Error::Construction(format!(
                "structure constant residual {worst:e} for {}({size})",
                family.name()
            )));
        }
        let ad_basis = ad_matrices(&c, dim);
        Ok(Self {
            family,
            size,
            dim,
            labels,
            structure_constants: c,
            gram: DMatrix::identity(dim, dim),
            form_scale: 1.0,
            ad_basis,
            realization: basis,
        })
    }

    /// Side length of the defining matrices.
    pub fn matrix_size(&self) -> usize {
        mat_dim(self.family, self.size)
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        self.structure_constants[(i * self.dim + j) * self.dim + k]
    }

    /// Replaces the structure constants (and the cached ad matrices).
    /// Used to build deliberately broken algebras for negative tests.
    pub fn set_structure_constants(&mut self, c: Vec<f64>) -> Result<()> {
        if c.len() != self.dim * self.dim * self.dim {
            return Err(Error::Construction(
                "structure constant table has the wrong length".into(),
            ));
        }
        self.ad_basis = ad_matrices(&c, self.dim);
        self.structure_constants = c;
        Ok(())
    }

    /// Multiplies the invariant form by `factor`.
    pub fn rescale_form(&mut self, factor: f64) {
        self.gram *= factor;
        self.form_scale *= factor;
    }

    pub fn ad(&self, x: &Vector) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (xi, a) in x.iter().zip(&self.ad_basis) {
            if *xi != 0.0 {
                m += a * *xi;
            }
        }
        m
    }

    pub fn bracket(&self, x: &Vector, y: &Vector) -> Vector {
        self.ad(x) * y
    }

    /// Complex-bilinear extension of the bracket.
    pub fn bracket_c(&self, x: &CVector, y: &CVector) -> CVector {
        let (xr, xi) = split(x);
        let (yr, yi) = split(y);
        let re = self.bracket(&xr, &yr) - self.bracket(&xi, &yi);
        let im = self.bracket(&xr, &yi) + self.bracket(&xi, &yr);
        join(&re, &im)
    }

    pub fn invariant_form(&self, x: &Vector, y: &Vector) -> f64 {
        (x.transpose() * &self.gram * y)[(0, 0)]
    }

    /// Complex-bilinear extension of the form.
    pub fn form_c(&self, x: &CVector, y: &CVector) -> Complex64 {
        let gy = self.gram.map(|v| Complex64::new(v, 0.0)) * y;
        x.iter().zip(gy.iter()).map(|(a, b)| a * b).sum()
    }

    /// Hermitian product conj(x)^T G y.
    pub fn herm(&self, x: &CVector, y: &CVector) -> Complex64 {
        let gy = self.gram.map(|v| Complex64::new(v, 0.0)) * y;
        x.iter().zip(gy.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn norm(&self, x: &Vector) -> f64 {
        self.invariant_form(x, x).max(0.0).sqrt()
    }

    /// The matrix represented by a coefficient vector.
    pub fn realize(&self, x: &Vector) -> DMatrix<Complex64> {
        let n = self.matrix_size();
        let mut m = DMatrix::zeros(n, n);
        for (xi, b) in x.iter().zip(&self.realization) {
            m += b.map(|z| z * *xi);
        }
        m
    }

    /// Coefficients of a matrix in the realization, by orthogonal projection.
    pub fn coords_of(&self, m: &DMatrix<Complex64>) -> Vector {
        Vector::from_iterator(self.dim, self.realization.iter().map(|b| frob(b, m)))
    }
}

pub fn split(x: &CVector) -> (Vector, Vector) {
    (x.map(|z| z.re), x.map(|z| z.im))
}

pub fn join(re: &Vector, im: &Vector) -> CVector {
    CVector::from_iterator(re.len(), re.iter().zip(im.iter()).map(|(a, b)| Complex64::new(*a, *b)))
}

pub fn complexify(x: &Vector) -> CVector {
    x.map(|v| Complex64::new(v, 0.0))
}

pub fn build_algebra(family: Family, size: usize) -> Result<CompactLieAlgebra> {
    CompactLieAlgebra::build(family, size)
}

/// Orthonormalizes `vectors` for the Gram matrix `g`, dropping dependent ones.
pub fn orthonormalize(g: &DMatrix<f64>, vectors: &[Vector], tol: f64) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &out {
                let p = (b.transpose() * g * &w)[(0, 0)];
                w -= b * p;
            }
        }
        let n = (w.transpose() * g * &w)[(0, 0)].max(0.0).sqrt();
        if n > tol {
            out.push(w / n);
        }
    }
    out
}

/// Columns of `basis` as a matrix.
pub fn basis_matrix(basis: &[Vector], rows: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(rows, basis.len());
    for (j, b) in basis.iter().enumerate() {
        m.set_column(j, b);
    }
    m
}

pub fn max_abs(v: &Vector) -> f64 {
    v.iter().fold(0.0f64, |a, b| a.max(b.abs()))
}

pub fn max_abs_c(v: &CVector) -> f64 {
    v.iter().fold(0.0f64, |a, b| a.max(b.norm()))
}

pub fn max_abs_m(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |a, b| a.max(b.abs()))
}

pub fn max_abs_mc(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0f64, |a, b| a.max(b.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(dim: usize, i: usize) -> Vector {
        let mut v = Vector::zeros(dim);
        v[i] = 1.0;
        v
    }

    #[test]
    fn dimensions() {
        let cases = [
            (Family::Su, 2, 3),
            (Family::Su, 4, 15),
            (Family::Sp, 1, 3),
            (Family::Sp, 2, 10),
            (Family::So, 5, 10),
            (Family::So, 8, 28),
        ];
        for (f, n, d) in cases {
            assert_eq!(build_algebra(f, n).unwrap().dim, d, "{f:?}({n})");
        }
        assert!(build_algebra(Family::So, 2).is_err());
        assert!(build_algebra(Family::Su, 1).is_err());
    }

    #[test]
    fn bracket_matches_matrix_commutator() {
        let g = build_algebra(Family::Sp, 2).unwrap();
        let x = Vector::from_fn(g.dim, |i, _| (i as f64 * 0.37).sin());
        let y = Vector::from_fn(g.dim, |i, _| (i as f64 * 1.1).cos());
        let (mx, my) = (g.realize(&x), g.realize(&y));
        let direct = g.coords_of(&(&mx * &my - &my * &mx));
        assert!(max_abs(&(direct - g.bracket(&x, &y))) < 1e-12);
    }

    #[test]
    fn su2_brackets_are_cyclic() {
        // su(2) with this basis: |[e_i, e_j]| = sqrt(2) for i != j
        let g = build_algebra(Family::Su, 2).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let b = g.bracket(&e(3, i), &e(3, j));
                let expect = if i == j { 0.0 } else { 2f64.sqrt() };
                assert!((g.norm(&b) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn form_is_positive_and_invariant() {
        let g = build_algebra(Family::So, 5).unwrap();
        let x = Vector::from_fn(g.dim, |i, _| 1.0 + i as f64);
        let y = Vector::from_fn(g.dim, |i, _| (i as f64).sin());
        let z = Vector::from_fn(g.dim, |i, _| (2.0 * i as f64).cos());
        let lhs = g.invariant_form(&g.bracket(&x, &y), &z);
        let rhs = -g.invariant_form(&y, &g.bracket(&x, &z));
        assert!((lhs - rhs).abs() < 1e-10);
        assert!(g.invariant_form(&x, &x) > 0.0);
    }
}
