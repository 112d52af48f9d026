//! Named invariant and cross-check suite.
//!
//! Every check is a fast, self-contained pass/fail probe of one documented
//! property, grouped by subsystem so a filter like `coulomb` runs just the
//! partition-function checks. The CLI `verify` command and the acceptance
//! suite both feed off this registry.

use num_traits::ToPrimitive;
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::basis::{neel_states, sector_basis, translate, Sector};
use crate::ed::{ground_state, ground_state_with, min_entropy, Sign, SolverOptions};
use crate::error::Result;
use crate::exact::{
    asm_count, coulomb_q, coulomb_q_bruteforce, rs_asymptotic_entropy, rs_log_pmax, z_ratio,
};
use crate::freefermion::{
    even_min_entropy, maximal_config, slater_log_probability, xx_entropy_difference,
    xx_entropy_difference_direct,
};
use crate::imps::{ansatz_fidelity, entropy_diff_decomposition, imps_log_weight, z_alpha};
use crate::linalg::log_det_complex;
use crate::numeric::{log_chord_sum, log_chord_table};
use crate::scaling::{alpha_from_delta, delta_from_alpha, fit_scaling, radius_from_delta};

/// Outcome of one named check.
#[derive(Clone, Debug)]
pub struct CheckReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

struct Check {
    name: &'static str,
    run: fn() -> Result<(bool, String)>,
}

fn check_list() -> Vec<Check> {
    vec![
        Check { name: "basis.index-roundtrip", run: basis_index_roundtrip },
        Check { name: "basis.translation-bijection", run: basis_translation_bijection },
        Check { name: "basis.neel-bond-counts", run: basis_neel_bond_counts },
        Check { name: "ed.normalization", run: ed_normalization },
        Check { name: "ed.translation-invariance", run: ed_translation_invariance },
        Check { name: "ed.neel-argmax", run: ed_neel_argmax },
        Check { name: "ed.spin-flip-equivalence", run: ed_spin_flip },
        Check { name: "ed.degenerate-pmax-invariance", run: ed_degenerate_invariance },
        Check { name: "freefermion.even-closed-form", run: ff_even_closed_form },
        Check { name: "freefermion.w-vs-direct-slater", run: ff_w_vs_direct },
        Check { name: "freefermion.hadamard-bound", run: ff_hadamard },
        Check { name: "freefermion.slater-vs-determinant", run: ff_slater_vs_det },
        Check { name: "rs.minus-sign-ed-exactness", run: rs_ed_exactness },
        Check { name: "rs.plus-sign-proximity", run: rs_plus_proximity },
        Check { name: "rs.asymptotic-monotone", run: rs_asymptotic_monotone },
        Check { name: "rs.asm-integrality", run: rs_asm_integrality },
        Check { name: "coulomb.q2-identity", run: coulomb_q2 },
        Check { name: "coulomb.q4-both-branches", run: coulomb_q4 },
        Check { name: "coulomb.z-normalization-identity", run: coulomb_z_identity },
        Check { name: "coulomb.z-ratio-limit", run: coulomb_z_ratio },
        Check { name: "imps.probability-normalization", run: imps_normalization },
        Check { name: "imps.quarter-alpha-slater", run: imps_quarter_slater },
        Check { name: "imps.maximal-configuration", run: imps_maximal_config },
        Check { name: "imps.decomposition-identity", run: imps_decomposition },
        Check { name: "imps.fidelity-even-rings", run: imps_fidelity_even },
        Check { name: "scaling.pi-r2-equals-alpha", run: scaling_identity },
        Check { name: "scaling.map-roundtrip", run: scaling_roundtrip },
        Check { name: "scaling.exact-fit-recovery", run: scaling_fit_recovery },
        Check { name: "scaling.fig2b-window", run: scaling_fig2b_window },
    ]
}

/// Names of all registered checks (after filtering).
pub fn check_names(filter: Option<&str>) -> Vec<&'static str> {
    check_list()
        .iter()
        .map(|c| c.name)
        .filter(|n| filter.map_or(true, |f| n.contains(f)))
        .collect()
}

/// Run all checks whose name contains `filter` (all of them when `None`).
/// `inject_failure` appends an always-failing synthetic check, the hook used
/// to exercise the failure path end to end.
pub fn run_checks(filter: Option<&str>, inject_failure: bool) -> Vec<CheckReport> {
    let checks: Vec<Check> = check_list()
        .into_iter()
        .filter(|c| filter.map_or(true, |f| c.name.contains(f)))
        .collect();
    let mut reports: Vec<CheckReport> = checks
        .par_iter()
        .map(|c| match (c.run)() {
            Ok((passed, detail)) => CheckReport {
                name: c.name,
                passed,
                detail,
            },
            Err(e) => CheckReport {
                name: c.name,
                passed: false,
                detail: format!("error: {e}"),
            },
        })
        .collect();
    if inject_failure {
        reports.push(CheckReport {
            name: "selftest.injected-failure",
            passed: false,
            detail: "synthetic failure injected via test hook".into(),
        });
    }
    reports
}

fn basis_index_roundtrip() -> Result<(bool, String)> {
    for (l, n) in [(6usize, 3usize), (9, 5), (11, 4)] {
        let sector = Sector::new(l, n)?;
        for (i, c) in sector_basis(sector)?.into_iter().enumerate() {
            if sector.index_of(c) != i || sector.config_at(i) != c {
                return Ok((false, format!("roundtrip broke at {sector} index {i}")));
            }
        }
    }
    Ok((true, "index<->config maps mutually inverse".into()))
}

fn basis_translation_bijection() -> Result<(bool, String)> {
    for (l, n) in [(8usize, 4usize), (9, 5)] {
        let sector = Sector::new(l, n)?;
        let basis = sector_basis(sector)?;
        for k in 0..l {
            let mut seen = vec![false; basis.len()];
            for &c in &basis {
                let idx = sector.index_of(translate(c, k));
                if seen[idx] {
                    return Ok((false, format!("translation by {k} not injective on {sector}")));
                }
                seen[idx] = true;
            }
        }
    }
    Ok((true, "translations permute every tested sector basis".into()))
}

fn basis_neel_bond_counts() -> Result<(bool, String)> {
    for l in 4..=13usize {
        let sector = Sector::canonical(l)?;
        let expected = l % 2;
        for c in neel_states(sector)? {
            if c.equal_adjacent_bonds() != expected {
                return Ok((false, format!("config {c} has wrong bond count at L={l}")));
            }
        }
    }
    Ok((true, "even orbits defect-free, odd orbits carry one spinon pair".into()))
}

fn ed_states() -> Result<Vec<crate::ed::GroundState>> {
    [(7usize, 0.3f64), (8, -0.4), (10, 0.0), (9, 1.0)]
        .into_iter()
        .map(|(l, d)| ground_state(Sector::canonical(l)?, d))
        .collect()
}

fn ed_normalization() -> Result<(bool, String)> {
    let worst = ed_states()?
        .iter()
        .map(|g| g.normalization_defect())
        .fold(0.0, f64::max);
    Ok((worst <= 1e-10, format!("max defect {worst:.2e} (tol 1e-10)")))
}

fn ed_translation_invariance() -> Result<(bool, String)> {
    let worst = ed_states()?
        .iter()
        .map(|g| g.translation_invariance_defect())
        .fold(0.0, f64::max);
    Ok((worst <= 1e-9, format!("max defect {worst:.2e} (tol 1e-9)")))
}

fn ed_neel_argmax() -> Result<(bool, String)> {
    let mut tested = 0;
    for l in [7usize, 8, 9, 10, 11] {
        for delta in [-0.5, 0.0, 0.5, 1.0] {
            let sector = Sector::canonical(l)?;
            let gs = ground_state(sector, delta)?;
            let (_, argmax) = min_entropy(&gs);
            if !neel_states(sector)?.contains(&argmax) {
                return Ok((false, format!("argmax off the Neel orbit at L={l}, delta={delta}")));
            }
            tested += 1;
        }
    }
    Ok((true, format!("{tested} (L, delta) points, all argmaxes in the Neel orbit")))
}

fn ed_spin_flip() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for l in [7usize, 9] {
        for delta in [-0.5, 0.3, 1.0] {
            let up = ground_state(Sector::new(l, (l + 1) / 2)?, delta)?;
            let down = ground_state(Sector::new(l, (l - 1) / 2)?, delta)?;
            let (su, _) = min_entropy(&up);
            let (sd, _) = min_entropy(&down);
            worst = worst
                .max((up.energy - down.energy).abs())
                .max((su - sd).abs());
        }
    }
    Ok((worst <= 1e-9, format!("max flip defect {worst:.2e} (tol 1e-9)")))
}

fn ed_degenerate_invariance() -> Result<(bool, String)> {
    let gs = ground_state(Sector::new(9, 5)?, 0.5)?;
    if !gs.degeneracy_flag || gs.eigenspace.len() != 2 {
        return Ok((false, "expected a degenerate doublet at L=9, delta=1/2".into()));
    }
    let dim = gs.amplitudes.len();
    let pmax = (0..dim).map(|i| gs.probability(i)).fold(0.0f64, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let dist = Uniform::new(0.0, std::f64::consts::TAU);
    let mut worst = 0.0f64;
    for _ in 0..6 {
        let th = dist.sample(&mut rng);
        let (c, s) = (th.cos(), th.sin());
        let rotated_pmax = (0..dim)
            .map(|i| {
                let u = c * gs.eigenspace[0][i] + s * gs.eigenspace[1][i];
                let w = -s * gs.eigenspace[0][i] + c * gs.eigenspace[1][i];
                0.5 * (u * u + w * w)
            })
            .fold(0.0f64, f64::max);
        worst = worst.max((rotated_pmax - pmax).abs());
    }
    Ok((worst <= 1e-8, format!("max p_max drift under rotations {worst:.2e} (tol 1e-8)")))
}

fn ff_even_closed_form() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for n in 1..=10usize {
        let closed = even_min_entropy(n);
        let slater = -slater_log_probability(2 * n, n, maximal_config(2 * n, n)?)?.log();
        worst = worst.max((closed - slater).abs());
    }
    Ok((worst <= 1e-12, format!("max |N log2 - Slater| = {worst:.2e} (tol 1e-12)")))
}

fn ff_w_vs_direct() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for n in 1..=12usize {
        worst = worst.max((xx_entropy_difference(n)? - xx_entropy_difference_direct(n)?).abs());
    }
    Ok((worst <= 1e-10, format!("max route disagreement {worst:.2e} (tol 1e-10)")))
}

fn ff_hadamard() -> Result<(bool, String)> {
    use num_complex::Complex64;
    for n in 1..=8usize {
        let build = |denom: f64| -> Result<f64> {
            let mut m = Vec::with_capacity(n * n);
            for r in 1..=n {
                for c in 1..=n {
                    m.push(Complex64::from_polar(
                        1.0,
                        std::f64::consts::TAU * (r * c) as f64 / denom,
                    ));
                }
            }
            Ok(log_det_complex(&mut m, n)?.log_modulus)
        };
        let bound = 0.5 * n as f64 * (n as f64).ln();
        let even = build(n as f64)?;
        if (even - bound).abs() > 1e-9 {
            return Ok((false, format!("even case not saturated at N={n}")));
        }
        let odd = build(n as f64 + 0.5)?;
        if n >= 2 && odd >= bound - 1e-9 {
            return Ok((false, format!("odd case not strictly below the bound at N={n}")));
        }
    }
    Ok((true, "even Fourier saturates Hadamard, odd strictly below for N >= 2".into()))
}

fn ff_slater_vs_det() -> Result<(bool, String)> {
    use num_complex::Complex64;
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut worst = 0.0f64;
    for trial in 0..50 {
        let l = 5 + (trial % 6); // L in 5..=10
        let n = 2 + (trial % (l - 2)).min(l - 2) % (l - 1);
        let n = n.min(l - 1).max(1);
        let sector = Sector::new(l, n)?;
        let dim = sector.dimension();
        let idx = Uniform::new(0, dim).sample(&mut rng);
        let config = sector.config_at(idx as usize);
        let pos = config.up_positions();
        let qf = Uniform::new(0.0, std::f64::consts::TAU).sample(&mut rng);
        let mut m = Vec::with_capacity(n * n);
        for j in 1..=n {
            for &nk in &pos {
                let q = qf + std::f64::consts::TAU * j as f64 / l as f64;
                m.push(Complex64::from_polar((l as f64).powf(-0.5), q * nk as f64));
            }
        }
        let det = log_det_complex(&mut m, n)?;
        let direct = slater_log_probability(l, n, config)?.log();
        worst = worst.max((2.0 * det.log_modulus - direct).abs());
    }
    Ok((worst <= 1e-10, format!("max |logdet^2 - closed form| = {worst:.2e} (tol 1e-10)")))
}

fn rs_ed_exactness() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for n in 2..=6usize {
        let sector = Sector::new(2 * n + 1, n + 1)?;
        let gs = ground_state_with(sector, -0.5, Sign::Minus, &SolverOptions::default())?;
        let (s, _) = min_entropy(&gs);
        let rel = ((-s) - rs_log_pmax(n)).abs() / rs_log_pmax(n).abs();
        worst = worst.max(rel);
    }
    Ok((worst <= 1e-8, format!("max relative log-p defect {worst:.2e} (tol 1e-8)")))
}

fn rs_plus_proximity() -> Result<(bool, String)> {
    // The plus-sign chain at delta = +1/2 tracks the combinatorial value only
    // approximately on odd rings (the sign-reversal gauge fails around the
    // frustrated loop); figure-level agreement is ~3e-2 in log p.
    let mut worst = 0.0f64;
    for n in 2..=5usize {
        let gs = ground_state(Sector::new(2 * n + 1, n + 1)?, 0.5)?;
        let (s, _) = min_entropy(&gs);
        worst = worst.max(((-s) - rs_log_pmax(n)).abs());
    }
    Ok((worst <= 5e-2, format!("max |log p difference| = {worst:.2e} (tol 5e-2)")))
}

fn rs_asymptotic_monotone() -> Result<(bool, String)> {
    let mut prev = f64::INFINITY;
    for l in (5..=21).step_by(2) {
        let diff = rs_asymptotic_entropy(l)? - (-rs_log_pmax((l - 1) / 2));
        if diff <= 0.0 || diff >= prev {
            return Ok((false, format!("monotonicity broke at L={l}")));
        }
        prev = diff;
    }
    Ok((true, "asymptotic-minus-exact strictly decreasing over odd L=5..21".into()))
}

fn rs_asm_integrality() -> Result<(bool, String)> {
    // asm_count would trip its exactness assertion on a non-integer; spot
    // check the known small values too.
    let known: [u64; 7] = [1, 2, 7, 42, 429, 7436, 218348];
    for (i, &k) in known.iter().enumerate() {
        if asm_count(i + 1) != k.into() {
            return Ok((false, format!("A({}) mismatch", i + 1)));
        }
    }
    let _ = asm_count(50);
    Ok((true, "product formula divides exactly up to N=50".into()))
}

fn coulomb_q2() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for l in 3..=12usize {
        for n in 1..=l {
            worst = worst.max((coulomb_q_bruteforce(2.0, l, n)? - 1.0).abs());
        }
    }
    Ok((worst <= 1e-10, format!("max |Q_2 - 1| = {worst:.2e} (tol 1e-10)")))
}

fn coulomb_q4() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for l in 3..=12usize {
        for n in 1..=l {
            let brute = coulomb_q_bruteforce(4.0, l, n)?;
            let exact = coulomb_q(4, l, n)?;
            let exact = exact.numer().to_f64().unwrap() / exact.denom().to_f64().unwrap();
            worst = worst.max(((brute - exact) / exact).abs());
        }
    }
    Ok((worst <= 1e-10, format!("max relative branch defect {worst:.2e} (tol 1e-10)")))
}

fn coulomb_z_identity() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for (l, n) in [(6usize, 3usize), (9, 4), (12, 6), (11, 5)] {
        for (alpha, beta) in [(0.25f64, 2u32), (0.5, 4)] {
            let z = z_alpha(alpha, l, n)?;
            let q = coulomb_q(beta, l, n)?;
            let q = q.numer().to_f64().unwrap() / q.denom().to_f64().unwrap();
            worst = worst.max((z - (4.0 * n as f64 * alpha * (l as f64).ln() + q.ln())).abs());
        }
    }
    Ok((worst <= 1e-10, format!("max |log Z - log(L^4Na Q)| = {worst:.2e} (tol 1e-10)")))
}

fn coulomb_z_ratio() -> Result<(bool, String)> {
    for n in [10usize, 100] {
        let closed = (1.0 + 0.5 / n as f64).powi(n as i32);
        if (z_ratio(0.25, n)? - closed).abs() > 1e-12 {
            return Ok((false, format!("closed form mismatch at N={n}")));
        }
        if (z_ratio(0.5, n)? - closed).abs() > 1e-12 {
            return Ok((false, format!("alpha=1/2 mismatch at N={n}")));
        }
    }
    let x = z_ratio(0.5, 10_000)?;
    let defect = (x - 0.5f64.exp()).abs();
    Ok((defect <= 1e-3, format!("|x(1e4) - sqrt(e)| = {defect:.2e} (tol 1e-3)")))
}

fn imps_normalization() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for (alpha, l, n) in [(0.3f64, 9usize, 4usize), (0.125, 10, 5), (0.5, 11, 5)] {
        let z = z_alpha(alpha, l, n)?;
        let table = log_chord_table(l);
        let total: f64 = sector_basis(Sector::new(l, n)?)?
            .into_iter()
            .map(|c| (2.0 * 4.0 * alpha * log_chord_sum(&c.up_positions(), &table) - z).exp())
            .sum();
        worst = worst.max((total - 1.0).abs());
    }
    Ok((worst <= 1e-9, format!("max |sum p - 1| = {worst:.2e} (tol 1e-9)")))
}

fn imps_quarter_slater() -> Result<(bool, String)> {
    let (l, n) = (10usize, 5usize);
    let z = z_alpha(0.25, l, n)?;
    let mut worst = 0.0f64;
    for c in sector_basis(Sector::new(l, n)?)? {
        let (logm, _) = imps_log_weight(0.25, c);
        let ansatz_p = (2.0 * logm - z).exp();
        let slater_p = slater_log_probability(l, n, c)?.prob();
        worst = worst.max((ansatz_p - slater_p).abs());
    }
    Ok((worst <= 1e-10, format!("max pointwise |p_ansatz - p_slater| = {worst:.2e} (tol 1e-10)")))
}

fn imps_maximal_config() -> Result<(bool, String)> {
    for (alpha, l) in [(1.0f64 / 3.0, 9usize), (0.2, 11), (0.45, 13)] {
        let n = (l - 1) / 2;
        let table = log_chord_table(l);
        let reference = maximal_config(l, n)?;
        let (ref_logm, _) = imps_log_weight(alpha, reference);
        for c in sector_basis(Sector::new(l, n)?)? {
            let logm = 4.0 * alpha * log_chord_sum(&c.up_positions(), &table);
            if logm > ref_logm + 1e-12 {
                return Ok((false, format!("config {c} beats the reference at alpha={alpha}")));
            }
        }
    }
    Ok((true, "n_j = 2j-1 attains the enumerated maximum at every tested (alpha, L)".into()))
}

fn imps_decomposition() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for alpha in [0.25f64, 0.5] {
        for n in 1..=6usize {
            let d = entropy_diff_decomposition(alpha, n)?;
            let direct = -(crate::imps::imps_log_pmax(alpha, 2 * n + 1, n)?
                - crate::imps::imps_log_pmax(alpha, 2 * n, n)?);
            worst = worst.max((d.total - direct).abs());
        }
    }
    Ok((worst <= 1e-10, format!("max identity defect {worst:.2e} (tol 1e-10)")))
}

fn imps_fidelity_even() -> Result<(bool, String)> {
    let mut min_f = 1.0f64;
    for l in [8usize, 10, 12] {
        let sector = Sector::canonical(l)?;
        for delta in [-0.5, 0.0, 0.5, 1.0] {
            let alpha = alpha_from_delta(delta)?;
            let gs = ground_state(sector, delta)?;
            let f = ansatz_fidelity(alpha, sector, &gs)?;
            if delta == 0.0 && (f - 1.0).abs() > 1e-9 {
                return Ok((false, format!("fidelity not exactly 1 at delta=0, L={l}: {f}")));
            }
            min_f = min_f.min(f);
        }
    }
    Ok((min_f >= 0.99, format!("min even-ring fidelity {min_f:.6} (need >= 0.99)")))
}

fn scaling_identity() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for k in 0..=1000 {
        let delta = -1.0 + 2.0 * k as f64 / 1000.0;
        let alpha = alpha_from_delta(delta)?;
        let r = radius_from_delta(delta)?;
        worst = worst.max((std::f64::consts::PI * r * r - alpha).abs());
    }
    Ok((worst <= 1e-12, format!("max |pi R^2 - alpha| = {worst:.2e} (tol 1e-12)")))
}

fn scaling_roundtrip() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for k in 0..=500 {
        let alpha = 0.5 * k as f64 / 500.0;
        worst = worst.max((alpha_from_delta(delta_from_alpha(alpha)?)? - alpha).abs());
    }
    Ok((worst <= 1e-14, format!("max roundtrip defect {worst:.2e} (tol 1e-14)")))
}

fn scaling_fit_recovery() -> Result<(bool, String)> {
    let points: Vec<(f64, f64)> = (0..9)
        .map(|i| {
            let l = 5.0 + 2.0 * i as f64;
            (l, 0.3 * l + 0.25 * l.ln() + 0.1)
        })
        .collect();
    let fit = fit_scaling(&points)?;
    let defect = (fit.a - 0.3)
        .abs()
        .max((fit.b - 0.25).abs())
        .max((fit.c - 0.1).abs());
    Ok((defect <= 1e-10, format!("max coefficient defect {defect:.2e} (tol 1e-10)")))
}

fn scaling_fig2b_window() -> Result<(bool, String)> {
    let points: Vec<(f64, f64)> = (2..=25usize)
        .map(|n| Ok(((2 * n + 1) as f64, xx_entropy_difference(n)?)))
        .collect::<Result<_>>()?;
    let fit = fit_scaling(&points)?;
    let ok = (0.254..=0.259).contains(&fit.b)
        && (0.126..=0.146).contains(&fit.c)
        && fit.a.abs() < 1e-3;
    Ok((
        ok,
        format!(
            "a={:.2e}, b={:.6}+-{:.1e}, c={:.6}+-{:.1e}",
            fit.a, fit.b, fit.stderr_b, fit.c, fit.stderr_c
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filter_selects_groups() {
        let names = check_names(Some("coulomb"));
        assert!(!names.is_empty());
        assert!(names.iter().all(|n| n.starts_with("coulomb.")));
    }

    #[test]
    fn injected_failure_is_reported() {
        let reports = run_checks(Some("scaling.map-roundtrip"), true);
        assert_eq!(reports.len(), 2);
        assert!(reports.iter().any(|r| !r.passed));
    }

    #[test]
    fn fast_groups_pass() {
        for group in ["basis", "scaling.map", "scaling.pi"] {
            for r in run_checks(Some(group), false) {
                assert!(r.passed, "{}: {}", r.name, r.detail);
            }
        }
    }
}
