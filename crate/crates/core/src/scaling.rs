//! Scaling fits `S(L) = a L + b log L + c` and the anisotropy/exponent/
//! radius/Luttinger conversion maps.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::ed::{entropy_scan_with, Sign, SolverOptions};
use crate::error::{Error, Result};
use crate::gas::DEFAULT_ENUMERATION_CAP;
use crate::imps::imps_min_entropy_odd;

/// Ordinary-least-squares result for the three-parameter scaling form.
#[derive(Clone, Debug)]
pub struct ScalingFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub stderr_a: f64,
    pub stderr_b: f64,
    pub stderr_c: f64,
    pub rss: f64,
    pub points: Vec<(f64, f64)>,
}

impl ScalingFit {
    pub fn predict(&self, l: f64) -> f64 {
        self.a * l + self.b * l.ln() + self.c
    }
}

/// Fit `S = a L + b log L + c` by QR-based least squares (no normal
/// equations). Standard errors come from the unbiased residual variance,
/// which needs at least one degree of freedom, hence four distinct L.
pub fn fit_scaling(points: &[(f64, f64)]) -> Result<ScalingFit> {
    let mut distinct: Vec<f64> = points.iter().map(|p| p.0).collect();
    distinct.sort_by(|x, y| x.partial_cmp(y).unwrap());
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::Fit(format!(
            "rank-deficient design: {} distinct L values, need at least 3",
            distinct.len()
        )));
    }
    if distinct.len() < 4 {
        return Err(Error::Fit(
            "need at least 4 distinct L values for an error estimate".into(),
        ));
    }
    if points.iter().any(|p| p.0 <= 0.0) {
        return Err(Error::Fit("L values must be positive".into()));
    }
    let m = points.len();
    let x = DMatrix::from_fn(m, 3, |r, c| match c {
        0 => points[r].0,
        1 => points[r].0.ln(),
        _ => 1.0,
    });
    let y = DVector::from_fn(m, |r, _| points[r].1);
    let qr = x.clone().qr();
    // thin factors: coef = R^-1 Q^T y, (X^T X)^-1 = R^-1 R^-T
    let r_inv = qr
        .r()
        .try_inverse()
        .ok_or_else(|| Error::Fit("singular R factor".into()))?;
    let coef = &r_inv * (qr.q().transpose() * &y);
    let resid = &y - &x * &coef;
    let rss = resid.dot(&resid);
    let dof = (m - 3) as f64;
    let sigma2 = rss / dof;
    let xtx_inv = &r_inv * r_inv.transpose();
    Ok(ScalingFit {
        a: coef[0],
        b: coef[1],
        c: coef[2],
        stderr_a: (sigma2 * xtx_inv[(0, 0)]).sqrt(),
        stderr_b: (sigma2 * xtx_inv[(1, 1)]).sqrt(),
        stderr_c: (sigma2 * xtx_inv[(2, 2)]).sqrt(),
        rss,
        points: points.to_vec(),
    })
}

/// `alpha = arccos(-delta) / 2 pi`, the exponent matched to the anisotropy.
pub fn alpha_from_delta(delta: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&delta) {
        return Err(Error::Domain(format!("delta {delta} outside [-1, 1]")));
    }
    Ok((-delta).acos() / std::f64::consts::TAU)
}

/// Inverse map `delta = -cos(2 pi alpha)`.
pub fn delta_from_alpha(alpha: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&alpha) {
        return Err(Error::Domain(format!("alpha {alpha} outside [0, 1/2]")));
    }
    Ok(-(std::f64::consts::TAU * alpha).cos())
}

/// Boson compactification radius
/// `R = sqrt(1/(2 pi) - arccos(delta) / (2 pi^2))`.
pub fn radius_from_delta(delta: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&delta) {
        return Err(Error::Domain(format!("delta {delta} outside [-1, 1]")));
    }
    let pi = std::f64::consts::PI;
    let r2 = 1.0 / (2.0 * pi) - delta.acos() / (2.0 * pi * pi);
    Ok(r2.max(0.0).sqrt())
}

/// Luttinger parameter `K = 1/(4 pi R^2)`; infinite at the R = 0 endpoint
/// (delta = -1), which is outside the critical phase.
pub fn luttinger_from_radius(radius: f64) -> f64 {
    if radius == 0.0 {
        f64::INFINITY
    } else {
        1.0 / (4.0 * std::f64::consts::PI * radius * radius)
    }
}

/// Which machinery produces the S(L) series a b-fit consumes.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Backend {
    /// Exact diagonalization of the canonical sectors.
    Ed,
    /// The ansatz closed form (odd rings, minority particle number).
    Imps,
}

/// One grid point of the b(delta) curve.
#[derive(Debug)]
pub struct BCurvePoint {
    pub delta: f64,
    pub alpha_theory: f64,
    pub fit: Result<ScalingFit>,
}

/// Options threaded through [`b_curve`].
#[derive(Clone, Debug)]
pub struct BCurveOptions {
    pub solver: SolverOptions,
    pub enumeration_cap: u64,
}

impl Default for BCurveOptions {
    fn default() -> Self {
        BCurveOptions {
            solver: SolverOptions::default(),
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

/// Compute S(L) over `l_list` (odd sizes) for every delta in the grid with
/// the chosen backend and fit the scaling form. Failures stay attached to
/// their grid point; the scan always completes.
pub fn b_curve(
    deltas: &[f64],
    l_list: &[usize],
    source: Backend,
    opts: &BCurveOptions,
) -> Vec<BCurvePoint> {
    deltas
        .par_iter()
        .map(|&delta| {
            let alpha_theory = alpha_from_delta(delta).unwrap_or(f64::NAN);
            let fit = b_point(delta, l_list, source, opts);
            BCurvePoint {
                delta,
                alpha_theory,
                fit,
            }
        })
        .collect()
}

fn b_point(
    delta: f64,
    l_list: &[usize],
    source: Backend,
    opts: &BCurveOptions,
) -> Result<ScalingFit> {
    if !(-1.0 < delta && delta <= 1.0) {
        return Err(Error::Domain(format!(
            "delta {delta} outside the critical interval (-1, 1]"
        )));
    }
    if let Some(&bad) = l_list.iter().find(|&&l| l % 2 == 0) {
        return Err(Error::Domain(format!(
            "b-curve fits use odd sizes only, got L = {bad}"
        )));
    }
    let points: Vec<(f64, f64)> = match source {
        Backend::Ed => entropy_scan_with(delta, l_list, Sign::Plus, &opts.solver)
            .into_iter()
            .map(|row| row.map(|r| (r.sector.length() as f64, r.s_inf)))
            .collect::<Result<_>>()?,
        Backend::Imps => {
            let alpha = alpha_from_delta(delta)?;
            l_list
                .iter()
                .map(|&l| Ok((l as f64, imps_min_entropy_odd(alpha, l, opts.enumeration_cap)?)))
                .collect::<Result<_>>()?
        }
    };
    fit_scaling(&points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_model_recovery() {
        let points: Vec<(f64, f64)> = (0..8)
            .map(|i| {
                let l = 5.0 + 2.0 * i as f64;
                (l, 0.3 * l + 0.25 * l.ln() + 0.1)
            })
            .collect();
        let fit = fit_scaling(&points).unwrap();
        assert!((fit.a - 0.3).abs() < 1e-10);
        assert!((fit.b - 0.25).abs() < 1e-10);
        assert!((fit.c - 0.1).abs() < 1e-10);
        assert!(fit.rss < 1e-20);
        assert!(fit.stderr_a >= 0.0 && fit.stderr_b >= 0.0 && fit.stderr_c >= 0.0);
    }

    #[test]
    fn refit_of_predictions_is_idempotent() {
        let noisy: Vec<(f64, f64)> = (0..10)
            .map(|i| {
                let l = 5.0 + 2.0 * i as f64;
                (l, 0.2 * l + 0.31 * l.ln() - 0.4 + 0.01 * (i as f64 * 2.7).sin())
            })
            .collect();
        let first = fit_scaling(&noisy).unwrap();
        let refit_points: Vec<(f64, f64)> =
            noisy.iter().map(|&(l, _)| (l, first.predict(l))).collect();
        let second = fit_scaling(&refit_points).unwrap();
        assert!((first.a - second.a).abs() < 1e-12);
        assert!((first.b - second.b).abs() < 1e-12);
        assert!((first.c - second.c).abs() < 1e-12);
    }

    #[test]
    fn fit_equivariance() {
        let base: Vec<(f64, f64)> = (0..7)
            .map(|i| {
                let l = 7.0 + 2.0 * i as f64;
                (l, 0.26 * l + 0.2 * l.ln() + 0.05 * (i as f64).cos())
            })
            .collect();
        let f0 = fit_scaling(&base).unwrap();
        let shifted: Vec<(f64, f64)> = base.iter().map(|&(l, s)| (l, s + 0.77)).collect();
        let f1 = fit_scaling(&shifted).unwrap();
        assert!((f1.c - f0.c - 0.77).abs() < 1e-12);
        assert!((f1.a - f0.a).abs() < 1e-12);
        assert!((f1.b - f0.b).abs() < 1e-12);
        let tilted: Vec<(f64, f64)> = base.iter().map(|&(l, s)| (l, s + 0.13 * l)).collect();
        let f2 = fit_scaling(&tilted).unwrap();
        assert!((f2.a - f0.a - 0.13).abs() < 1e-12);
        assert!((f2.b - f0.b).abs() < 1e-12);
        assert!((f2.c - f0.c).abs() < 1e-12);
    }

    #[test]
    fn too_few_points_rejected() {
        let pts = vec![(5.0, 1.0), (7.0, 2.0), (9.0, 3.0)];
        assert!(matches!(fit_scaling(&pts), Err(Error::Fit(_))));
        let degenerate = vec![(5.0, 1.0), (5.0, 1.1), (7.0, 2.0), (7.0, 2.2)];
        assert!(matches!(fit_scaling(&degenerate), Err(Error::Fit(_))));
    }

    #[test]
    fn conversion_map_special_points() {
        assert!((alpha_from_delta(0.0).unwrap() - 0.25).abs() < 1e-15);
        assert!((alpha_from_delta(0.5).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((alpha_from_delta(1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(alpha_from_delta(-1.0).unwrap().abs() < 1e-15);
        assert!(alpha_from_delta(1.2).is_err());
        assert!(delta_from_alpha(0.6).is_err());
    }

    #[test]
    fn radius_and_luttinger_special_points() {
        let pi = std::f64::consts::PI;
        let r0 = radius_from_delta(0.0).unwrap();
        assert!((r0 * r0 - 1.0 / (4.0 * pi)).abs() < 1e-15);
        let r1 = radius_from_delta(1.0).unwrap();
        assert!((r1 * r1 - 1.0 / (2.0 * pi)).abs() < 1e-15);
        let rm = radius_from_delta(-1.0).unwrap();
        assert!(rm.abs() < 1e-12);
        assert!(luttinger_from_radius(rm).is_infinite());
        // K = 1 at the free-fermion point
        assert!((luttinger_from_radius(r0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pi_r_squared_equals_alpha_functional_identity() {
        for k in 0..=1000 {
            let delta = -1.0 + 2.0 * k as f64 / 1000.0;
            let alpha = alpha_from_delta(delta).unwrap();
            let r = radius_from_delta(delta).unwrap();
            assert!(
                (std::f64::consts::PI * r * r - alpha).abs() < 1e-12,
                "delta = {delta}"
            );
        }
    }

    #[test]
    fn roundtrip_maps() {
        for k in 0..=100 {
            let alpha = 0.5 * k as f64 / 100.0;
            let back = alpha_from_delta(delta_from_alpha(alpha).unwrap()).unwrap();
            assert!((back - alpha).abs() < 1e-14);
        }
    }

    #[test]
    fn b_curve_rejects_even_l_and_noncritical_delta() {
        let opts = BCurveOptions::default();
        let pts = b_curve(&[0.0], &[5, 6, 7, 9], Backend::Imps, &opts);
        assert!(matches!(pts[0].fit, Err(Error::Domain(_))));
        let pts = b_curve(&[-1.0], &[5, 7, 9, 11], Backend::Imps, &opts);
        assert!(matches!(pts[0].fit, Err(Error::Domain(_))));
    }

    #[test]
    fn imps_backend_free_fermion_point() {
        // the delta = 0 ansatz series is the exact Slater series; its b fit
        // lands near 1/4 already at small sizes
        let opts = BCurveOptions::default();
        let pts = b_curve(&[0.0], &[7, 9, 11, 13, 15], Backend::Imps, &opts);
        let fit = pts[0].fit.as_ref().unwrap();
        assert!((fit.b - 0.25).abs() < 0.05, "b = {}", fit.b);
    }
}
