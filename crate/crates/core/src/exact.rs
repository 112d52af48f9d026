//! Exact combinatorics at the special anisotropies.
//!
//! Appendix-A quantities at delta = 1/2 (alternating-sign-matrix counts and
//! the maximal Born probability of the odd ring) stay in arbitrary-precision
//! integer/rational arithmetic until the final log, because the ASM count
//! grows super-exponentially and the integrality of the product formula is
//! itself a tested property. The discrete Coulomb gas closed forms at
//! beta = 2 and 4 normalize the ansatz at delta = 0 and 1; a direct
//! enumeration oracle backs both.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gas::{log_weight_sum, DEFAULT_ENUMERATION_CAP};

/// Gamma(2/3), forty decimal digits:
/// 1.354117939426400416945288028154513785519
/// (the f64 literal below rounds it to the nearest double).
pub const GAMMA_TWO_THIRDS: f64 = 1.354117939426400416945288028154513785519;

/// Number of N x N alternating sign matrices,
/// `A(N) = prod_{j=0}^{N-1} (3j+1)! / (N+j)!`, evaluated exactly.
pub fn asm_count(n: usize) -> BigUint {
    let mut numerator = BigUint::one();
    let mut denominator = BigUint::one();
    for j in 0..n {
        numerator *= factorial(3 * j + 1);
        denominator *= factorial(n + j);
    }
    let (q, r) = num_integer::Integer::div_rem(&numerator, &denominator);
    debug_assert!(r.is_zero(), "ASM product formula must divide exactly");
    q
}

fn factorial(n: usize) -> BigUint {
    let mut f = BigUint::one();
    for k in 2..=n {
        f *= BigUint::from(k);
    }
    f
}

/// Exact maximal Born probability of the odd ring at delta = 1/2,
/// `p_max(2N+1, N) = (4/3)^N * prod_{j=1}^N ((2j-1)/(3j-1))^2`.
pub fn rs_pmax_exact(n: usize) -> BigRational {
    let mut p = BigRational::new(BigInt::from(4), BigInt::from(3)).pow(n as i32);
    for j in 1..=n {
        let f = BigRational::new(BigInt::from(2 * j - 1), BigInt::from(3 * j - 1));
        p *= &f * &f;
    }
    p
}

/// `log p_max` at delta = 1/2 on L = 2N+1 sites, from the exact rational.
pub fn rs_log_pmax(n: usize) -> f64 {
    let p = rs_pmax_exact(n);
    big_ln(p.numer()) - big_ln(p.denom())
}

/// Natural log of a big integer, exact to double precision.
fn big_ln(x: &BigInt) -> f64 {
    let x = x.abs().to_biguint().expect("non-negative");
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().expect("fits f64").ln();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_f64().expect("53 bits fit f64");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Large-L asymptotic min-entropy at delta = 1/2:
/// `S(L) = L log(3 sqrt3 / 4) + (1/3) log(L/2) + log(4 pi / (3 sqrt3 Gamma(2/3)^2))`.
pub fn rs_asymptotic_entropy(l: usize) -> Result<f64> {
    if l < 3 || l % 2 == 0 {
        return Err(Error::Domain(format!(
            "asymptotic form applies to odd L >= 3, got {l}"
        )));
    }
    let sqrt3 = 3.0f64.sqrt();
    let linear = (3.0 * sqrt3 / 4.0).ln();
    let constant = (4.0 * std::f64::consts::PI / (3.0 * sqrt3 * GAMMA_TWO_THIRDS.powi(2))).ln();
    Ok(l as f64 * linear + (l as f64 / 2.0).ln() / 3.0 + constant)
}

/// The linear coefficient of the asymptotic form, `log(3 sqrt3 / 4)`.
pub fn rs_linear_coefficient() -> f64 {
    (3.0 * 3.0f64.sqrt() / 4.0).ln()
}

/// Parameter bundle of the discrete Coulomb gas: inverse temperature beta,
/// ansatz exponent alpha = beta/8, and the matching anisotropy
/// delta = -cos(2 pi alpha).
#[derive(Clone, Copy, Debug)]
pub struct CoulombParams {
    pub beta: f64,
    pub alpha: f64,
    pub delta: f64,
}

impl CoulombParams {
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&alpha) {
            return Err(Error::Domain(format!("alpha {alpha} outside [0, 1/2]")));
        }
        Ok(CoulombParams {
            beta: 8.0 * alpha,
            alpha,
            delta: -(std::f64::consts::TAU * alpha).cos(),
        })
    }

    pub fn from_beta(beta: f64) -> Result<Self> {
        Self::from_alpha(beta / 8.0)
    }
}

/// Exact Coulomb-gas partition function `Q_beta(L, N)` for beta in {2, 4}.
///
/// `Q_2 = 1`. For beta = 4 the dilute branch (2N <= L) is
/// `(2N)!/(2^N N!) / L^N`; the dense branch follows from particle-hole
/// duality `Q_beta(L, N) = Q_beta(L, L-N)` (the printed dense formula with
/// `2^N` in the denominator fails against direct enumeration; `2^(L-N)` is
/// what the duality gives, and the two branches agree at 2N = L).
pub fn coulomb_q(beta: u32, l: usize, n: usize) -> Result<BigRational> {
    if n > l {
        return Err(Error::Domain(format!("N = {n} exceeds L = {l}")));
    }
    match beta {
        2 => Ok(BigRational::one()),
        4 => {
            let m = if 2 * n <= l { n } else { l - n };
            // (2m)! / (2^m m!) / L^m
            let num = BigInt::from(factorial(2 * m));
            let mut den = BigInt::from(factorial(m));
            den *= BigInt::from(2u32).pow(m as u32);
            den *= BigInt::from(l).pow(m as u32);
            Ok(BigRational::new(num, den))
        }
        other => Err(Error::Domain(format!(
            "no closed form for beta = {other}; use coulomb_q_bruteforce"
        ))),
    }
}

/// Direct enumeration of `Q_beta(L, N)`: sums the Boltzmann weights
/// `prod_{j<k} |chord|^beta / L^(N beta / 2)` over all position sets,
/// each term accumulated in the log domain.
pub fn coulomb_q_bruteforce(beta: f64, l: usize, n: usize) -> Result<f64> {
    coulomb_q_bruteforce_with_cap(beta, l, n, DEFAULT_ENUMERATION_CAP)
}

pub fn coulomb_q_bruteforce_with_cap(beta: f64, l: usize, n: usize, cap: u64) -> Result<f64> {
    let log_sum = log_weight_sum(l, n, beta, cap)?;
    Ok((log_sum - (n as f64) * beta / 2.0 * (l as f64).ln()).exp())
}

/// Odd/even normalization ratio
/// `x = (2N+1)^(4 N alpha) Q_(8 alpha)(2N+1, N) / ((2N)^(4 N alpha) Q_(8 alpha)(2N, N))`.
///
/// For alpha in {1/4, 1/2} the Q factors cancel symbolically down to
/// `((2N+1)/2N)^N`, which tends to sqrt(e). Other alphas go through the
/// enumeration oracle.
pub fn z_ratio(alpha: f64, n: usize) -> Result<f64> {
    z_ratio_with_cap(alpha, n, DEFAULT_ENUMERATION_CAP)
}

pub fn z_ratio_with_cap(alpha: f64, n: usize, cap: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("z_ratio needs N >= 1".into()));
    }
    if !(0.0 < alpha && alpha <= 0.5) {
        return Err(Error::Domain(format!("alpha {alpha} outside (0, 1/2]")));
    }
    if alpha == 0.25 || alpha == 0.5 {
        return Ok((n as f64 * (0.5 / n as f64).ln_1p()).exp());
    }
    let beta = 8.0 * alpha;
    let lo = (2 * n + 1) as f64;
    let le = (2 * n) as f64;
    let log_qo = log_weight_sum(2 * n + 1, n, beta, cap)? - n as f64 * beta / 2.0 * lo.ln();
    let log_qe = log_weight_sum(2 * n, n, beta, cap)? - n as f64 * beta / 2.0 * le.ln();
    let log_x = 4.0 * n as f64 * alpha * (lo.ln() - le.ln()) + log_qo - log_qe;
    Ok(log_x.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn asm_first_values() {
        let expect: [u64; 7] = [1, 2, 7, 42, 429, 7436, 218348];
        for (i, &e) in expect.iter().enumerate() {
            assert_eq!(asm_count(i + 1), BigUint::from(e));
        }
    }

    #[test]
    fn asm_product_divides_exactly_up_to_50() {
        // the debug assertion inside asm_count does the integrality check
        let a50 = asm_count(50);
        assert!(a50.bits() > 100); // super-exponential growth
    }

    #[test]
    fn rs_pmax_small_values() {
        assert_eq!(
            rs_pmax_exact(1),
            BigRational::new(BigInt::from(1), BigInt::from(3))
        );
        assert_eq!(
            rs_pmax_exact(2),
            BigRational::new(BigInt::from(4), BigInt::from(25))
        );
        assert!((rs_log_pmax(1) - (1.0f64 / 3.0).ln()).abs() < 1e-14);
        assert!((rs_log_pmax(2) - 0.16f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn rs_pmax_consistent_with_asm_normalization() {
        // p_max = (psi_max / Norm)^2 with psi_max = A(N) and
        // Norm = sqrt(3)^N prod(3j-1) / (2^N prod(2j-1)) * A(N):
        // the A(N) cancels, leaving the tracked rational times 3^N.
        for n in 1..=8usize {
            let p = rs_pmax_exact(n);
            let mut bracket_sq = BigRational::new(BigInt::from(3), BigInt::from(4)).pow(n as i32);
            for j in 1..=n {
                let f = BigRational::new(BigInt::from(3 * j - 1), BigInt::from(2 * j - 1));
                bracket_sq *= &f * &f;
            }
            assert_eq!(p * bracket_sq, BigRational::one());
        }
    }

    #[test]
    fn asymptotic_linear_and_log_coefficients() {
        assert!((rs_linear_coefficient() - 0.261624).abs() < 1e-6);
        // the log-term coefficient is exactly 1/3: doubling the log argument
        // shifts by (1/3) log 2
        let s9 = rs_asymptotic_entropy(9).unwrap();
        let s9_lin = 9.0 * rs_linear_coefficient();
        let s17 = rs_asymptotic_entropy(17).unwrap();
        let s17_lin = 17.0 * rs_linear_coefficient();
        let log_part_9 = s9 - s9_lin;
        let log_part_17 = s17 - s17_lin;
        let expected = ((17.0f64 / 2.0).ln() - (9.0f64 / 2.0).ln()) / 3.0;
        assert!(((log_part_17 - log_part_9) - expected).abs() < 1e-12);
    }

    #[test]
    fn asymptotic_approaches_exact_monotonically() {
        let mut prev = f64::INFINITY;
        for l in (5..=21).step_by(2) {
            let n = (l - 1) / 2;
            let diff = rs_asymptotic_entropy(l).unwrap() - (-rs_log_pmax(n));
            assert!(diff > 0.0 && diff < prev, "L={l}: {diff} vs {prev}");
            prev = diff;
        }
    }

    #[test]
    fn asymptotic_domain() {
        assert!(rs_asymptotic_entropy(8).is_err());
    }

    #[test]
    fn coulomb_q_closed_forms() {
        assert_eq!(coulomb_q(2, 6, 3).unwrap(), BigRational::one());
        assert_eq!(
            coulomb_q(4, 4, 2).unwrap(),
            BigRational::new(BigInt::from(3), BigInt::from(16))
        );
        assert!(coulomb_q(3, 4, 2).is_err());
    }

    #[test]
    fn coulomb_dense_branch_matches_duality() {
        // dense branch equals the dilute branch of the hole gas
        for l in 3..=8usize {
            for n in 0..=l {
                let q = coulomb_q(4, l, n).unwrap();
                let dual = coulomb_q(4, l, l - n).unwrap();
                assert_eq!(q, dual);
            }
        }
    }

    #[test]
    fn bruteforce_matches_closed_forms() {
        for l in 3..=9usize {
            for n in 1..=l {
                let brute2 = coulomb_q_bruteforce(2.0, l, n).unwrap();
                assert!((brute2 - 1.0).abs() < 1e-10, "Q2({l},{n}) = {brute2}");
                let brute4 = coulomb_q_bruteforce(4.0, l, n).unwrap();
                let exact = coulomb_q(4, l, n).unwrap();
                let exact =
                    exact.numer().to_f64().unwrap() / exact.denom().to_f64().unwrap();
                assert!(
                    ((brute4 - exact) / exact).abs() < 1e-10,
                    "Q4({l},{n}): {brute4} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn z_ratio_closed_and_limit() {
        let x = z_ratio(0.25, 100).unwrap();
        assert!((x - 1.6466685f64).abs() < 1e-6, "x = {x}");
        assert_eq!(z_ratio(0.25, 50).unwrap(), z_ratio(0.5, 50).unwrap());
        let x = z_ratio(0.25, 10_000).unwrap();
        assert!((x - 0.5f64.exp()).abs() < 1e-3);
    }

    #[test]
    fn z_ratio_bruteforce_beta_one() {
        // frozen from the enumeration oracle
        let expect = [
            (1usize, 1.5),
            (2, 1.593522827),
            (3, 1.631809144),
            (4, 1.652347069),
            (5, 1.665090974),
            (6, 1.673750843),
        ];
        for (n, e) in expect {
            let x = z_ratio(0.125, n).unwrap();
            assert!((x - e).abs() < 1e-8, "N={n}: {x} vs {e}");
            assert!(x > 1.0 && x < 1.8);
        }
    }
}
