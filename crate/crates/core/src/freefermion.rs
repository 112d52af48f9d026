//! Closed-form and determinant evaluation at the free-fermion point
//! (delta = 0).
//!
//! The ground state of the XX ring with N particles is a Slater determinant;
//! for a consecutively filled momentum arc the Born probability of a position
//! configuration reduces to the squared Vandermonde of chord lengths,
//!
//! `p(n_1..n_N) = L^-N * prod_{i>j} |e^{i2pi n_i/L} - e^{i2pi n_j/L}|^2`,
//!
//! which this module accumulates entirely in the log domain. The modulus is
//! invariant under a uniform shift of the occupied momenta (the shift
//! multiplies columns of the Slater matrix by unit phases), so the formula
//! applies to either member of the degenerate odd-ring doublet; this lemma
//! has a unit test below.
//!
//! The even/odd entropy difference is evaluated through the N x N matrix
//! `W = V_o^dag V_o / N`, whose entries work out to
//!
//! `W_nn = 1,  W_nm = -1 / (N (1 + eps^{n-m}))`  with  `eps = e^{i2pi/(2N+1)}`
//!
//! (the geometric sum `sum_{k=1}^N eps^{2k(m-n)}` collapses to
//! `-eps^{m-n}/(1+eps^{m-n})`, i.e. `-1/(1+eps^{n-m})`). W is Hermitian, so
//! its determinant is real; the solver checks that.

use num_complex::Complex64;

use crate::basis::SpinConfig;
use crate::error::{Error, Result};
use crate::linalg::log_det_complex;
use crate::numeric::{log_chord_sum, log_chord_table};

/// Natural log of a probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogProb(f64);

impl LogProb {
    pub fn new(log_p: f64) -> Result<Self> {
        if log_p > 1e-12 {
            return Err(Error::Domain(format!(
                "log probability {log_p} is positive beyond tolerance"
            )));
        }
        Ok(LogProb(log_p))
    }

    #[inline]
    pub fn log(&self) -> f64 {
        self.0
    }

    #[inline]
    pub fn prob(&self) -> f64 {
        self.0.exp()
    }
}

/// Log Born probability of the position configuration in the N-particle
/// XX ground state on L sites.
pub fn slater_log_probability(l: usize, n: usize, positions: SpinConfig) -> Result<LogProb> {
    if positions.len() != l {
        return Err(Error::Contract(format!(
            "configuration length {} does not match L = {l}",
            positions.len()
        )));
    }
    if positions.n_up() != n {
        return Err(Error::Contract(format!(
            "configuration has {} occupied sites, expected N = {n}",
            positions.n_up()
        )));
    }
    if n == 0 || n >= l {
        return Err(Error::Domain(format!("need 1 <= N < L, got N={n}, L={l}")));
    }
    let table = log_chord_table(l);
    let pos = positions.up_positions();
    let log_p = -(n as f64) * (l as f64).ln() + 2.0 * log_chord_sum(&pos, &table);
    LogProb::new(log_p)
}

/// The maximal configuration n_j = 2j - 1 (1-based) as a bitmask config.
pub fn maximal_config(l: usize, n: usize) -> Result<SpinConfig> {
    if l > crate::basis::MAX_SITES {
        return Err(Error::Domain(format!(
            "ring length {l} exceeds the {} bit encoding",
            crate::basis::MAX_SITES
        )));
    }
    if n == 0 || 2 * n - 1 > l {
        return Err(Error::Domain(format!(
            "maximal configuration needs 2N-1 <= L, got N={n}, L={l}"
        )));
    }
    let mut bits = 0u64;
    for j in 0..n {
        bits |= 1 << (2 * j);
    }
    SpinConfig::new(bits, l)
}

/// Exact even-chain min-entropy: `S_inf^(e)(N) = N log 2` from the saturated
/// Hadamard bound of the Fourier matrix.
pub fn even_min_entropy(n: usize) -> f64 {
    n as f64 * std::f64::consts::LN_2
}

/// log det W of the odd/even determinant-ratio matrix defined above.
pub fn w_log_det(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("W matrix needs N >= 1".into()));
    }
    let mut mat = vec![Complex64::new(0.0, 0.0); n * n];
    let inv_n = 1.0 / n as f64;
    for row in 0..n {
        for col in 0..n {
            mat[row * n + col] = if row == col {
                Complex64::new(1.0, 0.0)
            } else {
                let eps =
                    Complex64::from_polar(1.0, std::f64::consts::TAU * (row as f64 - col as f64)
                        / (2 * n + 1) as f64);
                -inv_n / (Complex64::new(1.0, 0.0) + eps)
            };
        }
    }
    let det = log_det_complex(&mut mat, n)?;
    if det.relative_imaginary() > 1e-9 {
        return Err(Error::Domain(format!(
            "det W acquired an imaginary part ({:.3e} relative); W should be Hermitian",
            det.relative_imaginary()
        )));
    }
    if det.real_sign() < 0.0 {
        return Err(Error::Domain(
            "det W came out negative; cannot take its log".into(),
        ));
    }
    Ok(det.log_modulus)
}

/// Even/odd min-entropy difference at the free-fermion point,
/// `S_inf^(o)(N) - S_inf^(e)(N) = -log det W + N log(1 + 1/2N)`.
///
/// The prefactor is kept exact; it tends to 1/2 for large N, which is the
/// form the asymptotic analysis uses.
pub fn xx_entropy_difference(n: usize) -> Result<f64> {
    let prefactor = n as f64 * (1.0 + 0.5 / n as f64).ln();
    Ok(-w_log_det(n)? + prefactor)
}

/// Entropy difference evaluated directly from two Slater probabilities
/// (the independent route used to cross-check [`xx_entropy_difference`]).
pub fn xx_entropy_difference_direct(n: usize) -> Result<f64> {
    let odd = slater_log_probability(2 * n + 1, n, maximal_config(2 * n + 1, n)?)?;
    let even = slater_log_probability(2 * n, n, maximal_config(2 * n, n)?)?;
    Ok(-(odd.log() - even.log()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::translate;

    fn config(bits: u64, l: usize) -> SpinConfig {
        SpinConfig::new(bits, l).unwrap()
    }

    #[test]
    fn four_site_probabilities() {
        // opposite corners of the square: |i - (-i)|^2 / 16 = 1/4
        let p = slater_log_probability(4, 2, config(0b0101, 4)).unwrap();
        assert!((p.prob() - 0.25).abs() < 1e-14);
        // adjacent corners: |e^{i pi/2} - e^{i pi}|^2 / 16 = 1/8
        let p = slater_log_probability(4, 2, config(0b0011, 4)).unwrap();
        assert!((p.prob() - 0.125).abs() < 1e-14);
    }

    #[test]
    fn probabilities_normalize() {
        let sector = crate::basis::Sector::new(4, 2).unwrap();
        let total: f64 = crate::basis::sector_basis(sector)
            .unwrap()
            .into_iter()
            .map(|c| slater_log_probability(4, 2, c).unwrap().prob())
            .sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn translation_invariance() {
        let c = config(0b0100110101, 10);
        let p0 = slater_log_probability(10, 5, c).unwrap().log();
        for k in 1..10 {
            let pk = slater_log_probability(10, 5, translate(c, k)).unwrap().log();
            assert!((p0 - pk).abs() < 1e-12);
        }
    }

    #[test]
    fn even_entropy_matches_slater() {
        for n in 1..=10usize {
            let exact = even_min_entropy(n);
            assert!((exact - n as f64 * 2.0f64.ln()).abs() == 0.0);
            let l = 2 * n;
            let p = slater_log_probability(l, n, maximal_config(l, n).unwrap()).unwrap();
            assert!((exact - (-p.log())).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn w_det_trivial_and_frozen_values() {
        assert!(w_log_det(1).unwrap().abs() < 1e-14);
        // frozen from an independent LU evaluation of V_o^dag V_o / N
        for (n, expect) in [
            (2usize, -0.100363579843237),
            (3, -0.172201505425656),
            (5, -0.273551347321476),
            (10, -0.425082102673945),
            (25, -0.640130387382871),
        ] {
            let got = w_log_det(n).unwrap();
            assert!((got - expect).abs() < 1e-12, "N={n}: {got} vs {expect}");
        }
    }

    #[test]
    fn w_route_equals_direct_slater_route() {
        for n in 1..=12 {
            let via_w = xx_entropy_difference(n).unwrap();
            let direct = xx_entropy_difference_direct(n).unwrap();
            assert!(
                (via_w - direct).abs() < 1e-10,
                "N={n}: {via_w} vs {direct}"
            );
        }
    }

    #[test]
    fn prefactor_tends_to_half() {
        let n = 1_000_000u64 as f64;
        let prefactor = (2.0 * n / (2.0 * n + 1.0)).powf(n);
        assert!((prefactor - (-0.5f64).exp()).abs() < 1e-6);
    }

    #[test]
    fn momentum_shift_lemma() {
        // |det M|^2 with q_j = q_F + 2pi j / L is independent of q_F:
        // the Fermi offset multiplies columns by unit phases.
        use num_complex::Complex64;
        let (l, n) = (7usize, 3usize);
        let c = config(0b0101100, l);
        let pos = c.up_positions();
        let reference = slater_log_probability(l, n, c).unwrap().log();
        for shift in 0..l {
            let qf = std::f64::consts::TAU * shift as f64 / l as f64 + 0.21;
            let mut m = Vec::with_capacity(n * n);
            for j in 1..=n {
                for &nk in &pos {
                    let q = qf + std::f64::consts::TAU * j as f64 / l as f64;
                    m.push(Complex64::from_polar((l as f64).powf(-0.5), q * nk as f64));
                }
            }
            let det = log_det_complex(&mut m, n).unwrap();
            assert!((2.0 * det.log_modulus - reference).abs() < 1e-10);
        }
    }

    #[test]
    fn contract_errors() {
        assert!(slater_log_probability(4, 3, config(0b0101, 4)).is_err());
        assert!(slater_log_probability(4, 4, config(0b1111, 4)).is_err());
        assert!(w_log_det(0).is_err());
    }
}
