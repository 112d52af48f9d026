//! Log-scaled complex determinants via LU with partial pivoting.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Determinant of a complex matrix in polar log form.
#[derive(Clone, Copy, Debug)]
pub struct LogDet {
    /// log |det|
    pub log_modulus: f64,
    /// arg(det), accumulated factor by factor (not reduced mod 2pi).
    pub phase: f64,
}

impl LogDet {
    /// |Im det| / |det| = |sin(phase)|.
    pub fn relative_imaginary(&self) -> f64 {
        self.phase.sin().abs()
    }

    /// Re(det) sign assuming the determinant is real.
    pub fn real_sign(&self) -> f64 {
        if self.phase.cos() >= 0.0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// LU-factorize (in place) a row-major n x n complex matrix and return the
/// determinant in log-scaled form. Errors when a pivot underflows the
/// singularity threshold relative to the largest matrix entry.
pub fn log_det_complex(mat: &mut [Complex64], n: usize) -> Result<LogDet> {
    assert_eq!(mat.len(), n * n);
    let scale = mat
        .iter()
        .map(|z| z.norm())
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut log_modulus = 0.0f64;
    let mut phase = 0.0f64;
    for k in 0..n {
        // partial pivoting on column k
        let mut pivot_row = k;
        let mut pivot_norm = mat[k * n + k].norm();
        for r in k + 1..n {
            let cand = mat[r * n + k].norm();
            if cand > pivot_norm {
                pivot_norm = cand;
                pivot_row = r;
            }
        }
        if pivot_norm < scale * 1e-300 {
            return Err(Error::Singular(format!(
                "pivot {pivot_norm:.3e} at step {k} of {n}"
            )));
        }
        if pivot_row != k {
            for c in 0..n {
                mat.swap(k * n + c, pivot_row * n + c);
            }
            phase += std::f64::consts::PI; // row swap flips the sign
        }
        let pivot = mat[k * n + k];
        log_modulus += pivot.norm().ln();
        phase += pivot.arg();
        for r in k + 1..n {
            let factor = mat[r * n + k] / pivot;
            mat[r * n + k] = factor;
            for c in k + 1..n {
                let sub = factor * mat[k * n + c];
                mat[r * n + c] -= sub;
            }
        }
    }
    Ok(LogDet { log_modulus, phase })
}
