//! Functions of form-symmetric operators, applied on the cyclic support of a vector.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::lie::Vector;

/// Eigenvalues closer than `CLUSTER_TOL * (1 + |mu|)` share an eigenspace.
pub const CLUSTER_TOL: f64 = 1e-8;
/// Eigenspaces carrying less than this fraction of |v| are outside its support.
pub const SUPPORT_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct Cluster {
    pub mean: f64,
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, one per entry of `values`.
    pub vectors: Vec<Vector>,
}

impl Cluster {
    pub fn project(&self, v: &Vector) -> Vector {
        let mut out = Vector::zeros(v.len());
        for u in &self.vectors {
            out += u * u.dot(v);
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct Spectrum {
    pub clusters: Vec<Cluster>,
}

impl Spectrum {
    /// Decomposes a matrix that is symmetric in orthonormal coordinates.
    /// The symmetric part is used, so rounding asymmetry is harmless.
    pub fn new(op: &DMatrix<f64>) -> Self {
        let sym = (op + op.transpose()) * 0.5;
        let eig = SymmetricEigen::new(sym);
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let mut clusters: Vec<Cluster> = Vec::new();
        for i in order {
            let mu = eig.eigenvalues[i];
            let u = eig.eigenvectors.column(i).into_owned();
            match clusters.last_mut() {
                Some(c) if (mu - c.values.last().unwrap()).abs() <= CLUSTER_TOL * (1.0 + mu.abs()) => {
                    c.values.push(mu);
                    c.vectors.push(u);
                    c.mean = c.values.iter().sum::<f64>() / c.values.len() as f64;
                }
                _ => clusters.push(Cluster {
                    mean: mu,
                    values: vec![mu],
                    vectors: vec![u],
                }),
            }
        }
        Self { clusters }
    }

    /// Indices of clusters on which `v` has a non-negligible component.
    pub fn support(&self, v: &Vector) -> Vec<usize> {
        let scale = v.norm();
        self.clusters
            .iter()
            .enumerate()
            .filter(|(_, c)| c.project(v).norm() > SUPPORT_TOL * scale)
            .map(|(i, _)| i)
            .collect()
    }

    /// f(op) v, evaluating f only on the support of v.
    ///
    /// f is evaluated at each eigenvalue of a supporting cluster; if it is
    /// undefined there but defined at the cluster mean, the mean is used.
    pub fn apply<F>(&self, f: F, v: &Vector) -> Result<Vector>
    where
        F: Fn(f64) -> Option<f64>,
    {
        let mut out = Vector::zeros(v.len());
        for i in self.support(v) {
            let c = &self.clusters[i];
            for (mu, u) in c.values.iter().zip(&c.vectors) {
                let fv = f(*mu)
                    .or_else(|| f(c.mean))
                    .ok_or(Error::Domain { eigenvalue: c.mean })?;
                out += u * (fv * u.dot(v));
            }
        }
        Ok(out)
    }

    /// Supporting eigenvalues of v (cluster means).
    pub fn support_values(&self, v: &Vector) -> Vec<f64> {
        self.support(v).into_iter().map(|i| self.clusters[i].mean).collect()
    }
}

/// Convenience wrapper: f(op) v for a symmetric op.
pub fn symmetric_spectral<F>(op: &DMatrix<f64>, f: F, v: &Vector) -> Result<Vector>
where
    F: Fn(f64) -> Option<f64>,
{
    Spectrum::new(op).apply(f, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_on_diagonal() {
        let op = DMatrix::from_diagonal(&Vector::from_vec(vec![4.0, 4.0, 9.0]));
        let v = Vector::from_vec(vec![2.0, 0.0, 3.0]);
        let r = symmetric_spectral(&op, |t| Some(1.0 / t), &v).unwrap();
        assert!((r - Vector::from_vec(vec![0.5, 0.0, 1.0 / 3.0])).norm() < 1e-14);
    }

    #[test]
    fn orthogonal_eigenspace_is_never_touched() {
        // sqrt is undefined on -1, but v lives in the +4 eigenspace
        let op = DMatrix::from_diagonal(&Vector::from_vec(vec![4.0, -1.0]));
        let v = Vector::from_vec(vec![1.0, 0.0]);
        let r = symmetric_spectral(&op, |t| (t >= 0.0).then(|| t.sqrt()), &v).unwrap();
        assert!((r[0] - 2.0).abs() < 1e-14);
        let bad = Vector::from_vec(vec![1.0, 1.0]);
        assert!(matches!(
            symmetric_spectral(&op, |t| (t >= 0.0).then(|| t.sqrt()), &bad),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn near_degenerate_values_cluster() {
        let op = DMatrix::from_diagonal(&Vector::from_vec(vec![1.0, 1.0 + 1e-12, 2.0]));
        let s = Spectrum::new(&op);
        assert_eq!(s.clusters.len(), 2);
        assert_eq!(s.clusters[0].values.len(), 2);
    }
}
