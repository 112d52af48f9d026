//! Restarted Lanczos for the lowest eigenpair of a symmetric operator.
//!
//! The operator enters only through a matvec closure. Each cycle builds a
//! Krylov basis of modest size with full reorthogonalization (also against
//! any deflated vectors), diagonalizes the projected tridiagonal matrix, and
//! restarts from the best Ritz vector until the explicit residual
//! ||Hy - θy|| meets the target. Memory stays bounded at krylov_dim + O(1)
//! vectors, which is what makes the seven-figure dimensions tractable.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct LanczosOptions {
    /// Krylov basis size per restart cycle.
    pub krylov_dim: usize,
    /// Total matvec budget before giving up.
    pub max_matvecs: usize,
    /// Residual target for ||Hy - θy||.
    pub tol: f64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions {
            krylov_dim: 40,
            max_matvecs: 200_000,
            tol: 1e-10,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    pub matvecs: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = norm(v);
    if n > 0.0 {
        let inv = 1.0 / n;
        for x in v.iter_mut() {
            *x *= inv;
        }
    }
    n
}

/// Project out every vector in `others` (assumed orthonormal) from `v`.
fn orthogonalize(v: &mut [f64], others: &[Vec<f64>]) {
    for q in others {
        let c = dot(v, q);
        axpy(v, -c, q);
    }
}

/// Lowest eigenpair of the symmetric operator restricted to the orthogonal
/// complement of `deflate` (pass converged eigenvectors there to reach the
/// next eigenvalue up).
pub fn lowest_eigenpair<F>(
    dim: usize,
    matvec: F,
    deflate: &[Vec<f64>],
    start: &[f64],
    opts: &LanczosOptions,
) -> Result<Eigenpair>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    assert_eq!(start.len(), dim);
    let effective_dim = dim.saturating_sub(deflate.len());
    if effective_dim == 0 {
        return Err(Error::Contract(
            "deflation space exhausts the whole space".into(),
        ));
    }
    let m = opts.krylov_dim.clamp(2, effective_dim.max(2));

    let mut q0 = start.to_vec();
    orthogonalize(&mut q0, deflate);
    if normalize(&mut q0) < 1e-13 {
        return Err(Error::Contract(
            "start vector lies in the deflated subspace".into(),
        ));
    }

    let mut matvecs = 0usize;

    loop {
        // One Krylov cycle from q0.
        let mut qs: Vec<Vec<f64>> = vec![q0.clone()];
        let mut alphas: Vec<f64> = Vec::with_capacity(m);
        let mut betas: Vec<f64> = Vec::with_capacity(m);

        for j in 0..m {
            let mut w = matvec(&qs[j]);
            matvecs += 1;
            let a = dot(&qs[j], &w);
            alphas.push(a);
            axpy(&mut w, -a, &qs[j]);
            if j > 0 {
                let b_prev = betas[j - 1];
                axpy(&mut w, -b_prev, &qs[j - 1]);
            }
            // Full reorthogonalization; twice is enough in double precision.
            for _ in 0..2 {
                orthogonalize(&mut w, deflate);
                orthogonalize(&mut w, &qs);
            }
            let b = norm(&w);
            if b < 1e-13 || j + 1 == m {
                break;
            }
            betas.push(b);
            let inv = 1.0 / b;
            for x in w.iter_mut() {
                *x *= inv;
            }
            qs.push(w);
        }

        // Lowest Ritz pair of the projected tridiagonal matrix.
        let k = alphas.len();
        let mut t = DMatrix::<f64>::zeros(k, k);
        for i in 0..k {
            t[(i, i)] = alphas[i];
            if i > 0 {
                t[(i, i - 1)] = betas[i - 1];
                t[(i - 1, i)] = betas[i - 1];
            }
        }
        let eig = t.symmetric_eigen();
        let mut best = 0;
        for i in 1..k {
            if eig.eigenvalues[i] < eig.eigenvalues[best] {
                best = i;
            }
        }
        let theta = eig.eigenvalues[best];

        let mut y = vec![0.0; dim];
        for (j, q) in qs.iter().enumerate() {
            axpy(&mut y, eig.eigenvectors[(j, best)], q);
        }
        orthogonalize(&mut y, deflate);
        normalize(&mut y);

        // Explicit residual check.
        let hy = matvec(&y);
        matvecs += 1;
        let mut r = hy;
        axpy(&mut r, -theta, &y);
        let residual = norm(&r);

        if residual <= opts.tol {
            return Ok(Eigenpair {
                value: theta,
                vector: y,
                residual,
                matvecs,
            });
        }
        if matvecs >= opts.max_matvecs {
            return Err(Error::SolverNotConverged {
                residual,
                matvecs,
                target: opts.tol,
            });
        }
        q0 = y;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_matvec(mat: &[Vec<f64>]) -> impl Fn(&[f64]) -> Vec<f64> + '_ {
        move |v: &[f64]| {
            mat.iter()
                .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
                .collect()
        }
    }

    #[test]
    fn diagonal_matrix() {
        let mat: Vec<Vec<f64>> = (0..6)
            .map(|i| {
                (0..6)
                    .map(|j| if i == j { (i as f64) - 2.0 } else { 0.0 })
                    .collect()
            })
            .collect();
        let start: Vec<f64> = (0..6).map(|i| 1.0 + 0.1 * i as f64).collect();
        let out = lowest_eigenpair(
            6,
            dense_matvec(&mat),
            &[],
            &start,
            &LanczosOptions::default(),
        )
        .unwrap();
        assert!((out.value - (-2.0)).abs() < 1e-10);
        assert!(out.residual <= 1e-10);
    }

    #[test]
    fn deflation_reaches_second_eigenvalue() {
        // symmetric matrix with eigenvalues -3, -3, 1 (degenerate lowest)
        // built as Q diag Q^T with a simple rotation
        let d = [-3.0, -3.0, 1.0];
        let q = [
            [0.6, 0.0, 0.8],
            [0.0, 1.0, 0.0],
            [-0.8, 0.0, 0.6],
        ];
        let mut mat = vec![vec![0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for (k, dk) in d.iter().enumerate() {
                    mat[i][j] += q[i][k] * dk * q[j][k];
                }
            }
        }
        let start = vec![0.3, -0.7, 0.64];
        let opts = LanczosOptions::default();
        let first = lowest_eigenpair(3, dense_matvec(&mat), &[], &start, &opts).unwrap();
        assert!((first.value + 3.0).abs() < 1e-10);
        let second = lowest_eigenpair(
            3,
            dense_matvec(&mat),
            std::slice::from_ref(&first.vector),
            &vec![0.11, 0.52, -0.9],
            &opts,
        )
        .unwrap();
        assert!((second.value + 3.0).abs() < 1e-10);
        assert!(dot(&first.vector, &second.vector).abs() < 1e-9);
        let third = lowest_eigenpair(
            3,
            dense_matvec(&mat),
            &[first.vector.clone(), second.vector.clone()],
            &vec![1.0, 0.2, 0.1],
            &opts,
        )
        .unwrap();
        assert!((third.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn dimension_one() {
        let mat = vec![vec![4.25]];
        let out = lowest_eigenpair(
            1,
            dense_matvec(&mat),
            &[],
            &[1.0],
            &LanczosOptions::default(),
        )
        .unwrap();
        assert!((out.value - 4.25).abs() < 1e-12);
    }
}
