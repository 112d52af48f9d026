//! Sector-resolved exact diagonalization of the periodic XXZ chain.
//!
//! The Hamiltonian is the cyclic bond sum
//! `H = s * sum_i (sx_i sx_{i+1} + sy_i sy_{i+1} + delta * sz_i sz_{i+1})`
//! in Pauli normalization: the zz term puts `+delta` on the diagonal for an
//! equal-spin bond and `-delta` otherwise, and the xy term connects
//! configurations differing by one antiparallel swap with matrix element 2.
//! The global sign `s` is [`Sign::Plus`] for the critical chain studied
//! throughout; [`Sign::Minus`] is the sign-reversed chain whose ground state
//! at delta = -1/2 carries the positive integer amplitude structure used by
//! the exact combinatorial checks (on an odd ring the two sign choices are
//! not unitarily equivalent, so both are exposed).
//!
//! Ground states come from a restarted Krylov solver driven purely by the
//! matvec. Odd rings have an exactly degenerate lowest doublet (momentum
//! pair) in every canonical sector; the solver deflates until the gap opens
//! and reports Born probabilities averaged over the lowest eigenspace, which
//! is the basis-choice-independent quantity.

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::basis::{neel_states, Sector, SpinConfig, DEFAULT_DIMENSION_CAP};
use crate::combinatorics::{next_combination, rank_combination, unrank_combination};
use crate::error::{Error, Result};
use crate::lanczos::{lowest_eigenpair, LanczosOptions};

/// Global sign of the bond sum.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Default)]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Solver knobs. The defaults satisfy every tolerance promised by the
/// ground-state contract.
#[derive(Clone, Debug)]
pub struct SolverOptions {
    /// Residual target ||H psi - E psi||.
    pub residual_tol: f64,
    /// Two eigenvalues closer than this count as degenerate.
    pub degeneracy_tol: f64,
    /// Refuse sectors larger than this.
    pub dimension_cap: u64,
    /// Krylov block per restart cycle.
    pub krylov_dim: usize,
    /// Total matvec budget per eigenpair.
    pub max_matvecs: usize,
    /// Stop deflating after this many degenerate vectors.
    pub max_degeneracy: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            residual_tol: 1e-10,
            degeneracy_tol: 1e-8,
            dimension_cap: DEFAULT_DIMENSION_CAP,
            krylov_dim: 40,
            max_matvecs: 400_000,
            max_degeneracy: 4,
        }
    }
}

/// Matrix-free application of the sector Hamiltonian.
pub struct SectorHamiltonian {
    sector: Sector,
    delta: f64,
    sign: Sign,
}

impl SectorHamiltonian {
    pub fn new(sector: Sector, delta: f64, sign: Sign) -> Self {
        SectorHamiltonian {
            sector,
            delta,
            sign,
        }
    }

    pub fn dimension(&self) -> usize {
        self.sector.dimension() as usize
    }

    /// H.v, parallel over output rows. Each row is computed independently
    /// from the unranked configuration, so the result is deterministic for
    /// any thread count.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let dim = self.dimension();
        assert_eq!(v.len(), dim);
        let l = self.sector.length();
        let n_up = self.sector.n_up();
        let delta = self.delta;
        let s = self.sign.factor();
        let full_mask = if l == 64 { u64::MAX } else { (1u64 << l) - 1 };

        let mut out = vec![0.0f64; dim];
        let chunk = 8192;
        out.par_chunks_mut(chunk).enumerate().for_each(|(ci, o)| {
            let start = ci * chunk;
            let mut bits = unrank_combination(start as u64, n_up, l);
            for (off, oi) in o.iter_mut().enumerate() {
                // diagonal: +delta per equal bond, -delta per unequal bond
                let rotated = ((bits << 1) | (bits >> (l - 1))) & full_mask;
                let unequal = (bits ^ rotated).count_ones() as i64;
                let equal = l as i64 - unequal;
                let mut acc = delta * (equal - unequal) as f64 * v[start + off];
                // off-diagonal: swap every antiparallel cyclic pair
                let mut diff = bits ^ rotated;
                while diff != 0 {
                    let j = diff.trailing_zeros() as usize;
                    diff &= diff - 1;
                    // bond between sites j and j+1 (cyclic); rotated bit j is
                    // the original bit j-1, so the differing pair for bit j of
                    // `diff` is (j-1, j) -- equivalently enumerate bonds by
                    //.their left site directly:
                    let a = if j == 0 { l - 1 } else { j - 1 };
                    let mask = (1u64 << a) | (1u64 << j);
                    let flipped = bits ^ mask;
                    acc += 2.0 * v[rank_combination(flipped) as usize];
                }
                *oi = s * acc;
                bits = next_combination(bits);
            }
        });
        out
    }
}

/// One application of the sector Hamiltonian (global plus sign) to `v`.
pub fn apply_hamiltonian(v: &[f64], sector: Sector, delta: f64) -> Result<Vec<f64>> {
    if v.len() as u64 != sector.dimension() {
        return Err(Error::Contract(format!(
            "vector length {} does not match sector dimension {}",
            v.len(),
            sector.dimension()
        )));
    }
    Ok(SectorHamiltonian::new(sector, delta, Sign::Plus).apply(v))
}

/// Lowest eigenstate data of a sector.
///
/// When the lowest eigenvalue is degenerate (`degeneracy_flag`), the stored
/// `amplitudes` are the square roots of the eigenspace-averaged Born
/// probabilities `p_i = mean_k psi_k(i)^2`, which is the quantity invariant
/// under any orthonormal rotation of the eigenspace (on an odd ring it
/// equals the per-momentum-eigenstate probability). The orthonormal
/// eigenbasis itself is kept in `eigenspace` for overlap computations.
#[derive(Clone, Debug)]
pub struct GroundState {
    pub sector: Sector,
    pub energy: f64,
    pub amplitudes: Vec<f64>,
    pub degeneracy_flag: bool,
    pub eigenspace: Vec<Vec<f64>>,
}

impl GroundState {
    /// Born probability of basis index `i`.
    #[inline]
    pub fn probability(&self, i: usize) -> f64 {
        self.amplitudes[i] * self.amplitudes[i]
    }

    /// max_i |1 - sum_i p_i|.
    pub fn normalization_defect(&self) -> f64 {
        (1.0 - self.amplitudes.iter().map(|a| a * a).sum::<f64>()).abs()
    }

    /// Largest |p_i - p_{T i}| over the one-site translation T.
    pub fn translation_invariance_defect(&self) -> f64 {
        let sector = self.sector;
        (0..self.amplitudes.len())
            .map(|i| {
                let shifted = sector.index_of(sector.config_at(i).translate(1));
                (self.probability(i) - self.probability(shifted)).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Basis indices tied with the maximum probability within a relative
    /// tolerance, ascending.
    pub fn argmax_ties(&self, rel_tol: f64) -> Vec<usize> {
        let pmax = self
            .amplitudes
            .iter()
            .map(|a| a * a)
            .fold(0.0f64, f64::max);
        (0..self.amplitudes.len())
            .filter(|&i| self.probability(i) >= pmax * (1.0 - rel_tol))
            .collect()
    }
}

fn start_vector(dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Uniform::new(-0.5f64, 0.5f64);
    (0..dim).map(|_| dist.sample(&mut rng)).collect()
}

fn solve_seed(sector: Sector, delta: f64, sign: Sign) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for word in [
        sector.length() as u64,
        sector.n_up() as u64,
        delta.to_bits(),
        matches!(sign, Sign::Minus) as u64,
    ] {
        h ^= word;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Fix the global phase: entry of largest magnitude positive.
fn phase_fix(v: &mut [f64]) {
    let mut best = 0usize;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

/// Ground state of the sector at anisotropy `delta`, global plus sign.
pub fn ground_state(sector: Sector, delta: f64) -> Result<GroundState> {
    ground_state_with(sector, delta, Sign::Plus, &SolverOptions::default())
}

/// Ground state with an explicit Hamiltonian sign and solver options.
pub fn ground_state_with(
    sector: Sector,
    delta: f64,
    sign: Sign,
    opts: &SolverOptions,
) -> Result<GroundState> {
    let dim = sector.dimension();
    if dim > opts.dimension_cap {
        return Err(Error::Sizing(format!(
            "sector {sector} has dimension {dim} > cap {}",
            opts.dimension_cap
        )));
    }
    let dim = dim as usize;
    let ham = SectorHamiltonian::new(sector, delta, sign);
    let matvec = |v: &[f64]| ham.apply(v);
    let lopts = LanczosOptions {
        krylov_dim: opts.krylov_dim,
        max_matvecs: opts.max_matvecs,
        tol: opts.residual_tol,
    };
    let seed = solve_seed(sector, delta, sign);

    let mut eigenspace: Vec<Vec<f64>> = Vec::new();
    let mut energies: Vec<f64> = Vec::new();
    loop {
        let k = eigenspace.len();
        if k as u64 == sector.dimension() {
            break;
        }
        let start = start_vector(dim, seed.wrapping_add(k as u64));
        let pair = lowest_eigenpair(dim, matvec, &eigenspace, &start, &lopts)?;
        if k > 0 && pair.value - energies[0] > opts.degeneracy_tol {
            break;
        }
        let mut v = pair.vector;
        phase_fix(&mut v);
        eigenspace.push(v);
        energies.push(pair.value);
        if eigenspace.len() >= opts.max_degeneracy {
            break;
        }
    }

    let d = eigenspace.len();
    let degenerate = d >= 2;
    let amplitudes = if degenerate {
        let inv = 1.0 / d as f64;
        (0..dim)
            .map(|i| {
                (eigenspace.iter().map(|v| v[i] * v[i]).sum::<f64>() * inv).sqrt()
            })
            .collect()
    } else {
        eigenspace[0].clone()
    };

    Ok(GroundState {
        sector,
        energy: energies[0],
        amplitudes,
        degeneracy_flag: degenerate,
        eigenspace,
    })
}

/// Min-entropy of a ground state: `S_inf = -log p_max` (natural log) with
/// the maximizing configuration, ties broken by lowest basis index.
pub fn min_entropy(gs: &GroundState) -> (f64, SpinConfig) {
    let mut best = 0usize;
    let mut pmax = gs.probability(0);
    for i in 1..gs.amplitudes.len() {
        let p = gs.probability(i);
        if p > pmax {
            pmax = p;
            best = i;
        }
    }
    (-pmax.ln(), gs.sector.config_at(best))
}

/// One row of an entropy scan.
#[derive(Clone, Debug)]
pub struct ScanRow {
    pub sector: Sector,
    pub delta: f64,
    pub energy: f64,
    pub s_inf: f64,
    pub p_max: f64,
    pub argmax: SpinConfig,
    pub degenerate: bool,
}

/// Solve the canonical sector of each length in `l_list` and tabulate the
/// min-entropy. Rows fail independently; a solver error in one length does
/// not abort the scan. The argmax of every successful row is required to lie
/// in the Néel orbit of its sector and is reported as an invariant violation
/// otherwise.
pub fn entropy_scan(delta: f64, l_list: &[usize]) -> Vec<Result<ScanRow>> {
    entropy_scan_with(delta, l_list, Sign::Plus, &SolverOptions::default())
}

/// [`entropy_scan`] with explicit sign and options.
pub fn entropy_scan_with(
    delta: f64,
    l_list: &[usize],
    sign: Sign,
    opts: &SolverOptions,
) -> Vec<Result<ScanRow>> {
    l_list
        .par_iter()
        .map(|&l| scan_row(delta, l, sign, opts))
        .collect()
}

fn scan_row(delta: f64, l: usize, sign: Sign, opts: &SolverOptions) -> Result<ScanRow> {
    let sector = Sector::canonical(l)?;
    let gs = ground_state_with(sector, delta, sign, opts)?;
    let (s_inf, argmax) = min_entropy(&gs);
    let neel = neel_states(sector)?;
    if !neel.contains(&argmax) {
        return Err(Error::InvariantViolation(format!(
            "argmax {argmax} of sector {sector} at delta={delta} lies outside the Neel orbit"
        )));
    }
    Ok(ScanRow {
        sector,
        delta,
        energy: gs.energy,
        s_inf,
        p_max: (-s_inf).exp(),
        argmax,
        degenerate: gs.degeneracy_flag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::sector_basis;

    #[test]
    fn diagonal_vanishes_at_free_fermion_point() {
        let sector = Sector::new(6, 3).unwrap();
        let dim = sector.dimension() as usize;
        for i in 0..dim {
            let mut e = vec![0.0; dim];
            e[i] = 1.0;
            let he = apply_hamiltonian(&e, sector, 0.0).unwrap();
            assert_eq!(he[i], 0.0);
        }
    }

    #[test]
    fn hamiltonian_is_symmetric() {
        let sector = Sector::new(8, 3).unwrap();
        let dim = sector.dimension() as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let dist = Uniform::new(-1.0f64, 1.0);
        for delta in [-0.7, 0.0, 0.5, 1.0, 1.5] {
            let u: Vec<f64> = (0..dim).map(|_| dist.sample(&mut rng)).collect();
            let v: Vec<f64> = (0..dim).map(|_| dist.sample(&mut rng)).collect();
            let hu = apply_hamiltonian(&u, sector, delta).unwrap();
            let hv = apply_hamiltonian(&v, sector, delta).unwrap();
            let uhv: f64 = u.iter().zip(&hv).map(|(a, b)| a * b).sum();
            let vhu: f64 = v.iter().zip(&hu).map(|(a, b)| a * b).sum();
            assert!((uhv - vhu).abs() < 1e-10, "delta={delta}");
        }
    }

    #[test]
    fn length_mismatch_is_contract_error() {
        let sector = Sector::new(6, 3).unwrap();
        let v = vec![0.0; 3];
        assert!(matches!(
            apply_hamiltonian(&v, sector, 0.5),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn l3_heisenberg_ground_energy() {
        // Total-spin algebra on 3 sites: lowest eigenvalue -3 at delta = 1.
        let gs = ground_state(Sector::new(3, 2).unwrap(), 1.0).unwrap();
        assert!((gs.energy - (-3.0)).abs() < 1e-9, "E = {}", gs.energy);
    }

    #[test]
    fn l3_single_minority_probabilities_uniform() {
        let gs = ground_state(Sector::new(3, 2).unwrap(), 0.5).unwrap();
        assert!(gs.degeneracy_flag);
        for i in 0..3 {
            assert!((gs.probability(i) - 1.0 / 3.0).abs() < 1e-9);
        }
        let (s, _) = min_entropy(&gs);
        assert!((s - 3.0f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn l4_free_fermion_min_entropy() {
        let sector = Sector::new(4, 2).unwrap();
        let gs = ground_state(sector, 0.0).unwrap();
        let (s, argmax) = min_entropy(&gs);
        assert!((s - 2.0 * 2.0f64.ln()).abs() < 1e-9);
        let neel = neel_states(sector).unwrap();
        assert!(neel.contains(&argmax));
        assert!(!gs.degeneracy_flag);
    }

    #[test]
    fn l5_delta_half_pmax() {
        // Eigenspace-averaged p_max of the odd doublet; frozen from a dense
        // diagonalization oracle.
        let gs = ground_state(Sector::new(5, 3).unwrap(), 0.5).unwrap();
        assert!(gs.degeneracy_flag);
        let (s, _) = min_entropy(&gs);
        let pmax = (-s).exp();
        assert!((pmax - 0.162896016964509).abs() < 1e-9, "pmax = {pmax}");
        assert!((gs.energy - (-6.280513769)).abs() < 1e-7);
    }

    #[test]
    fn rs_reference_state_is_exact() {
        // Sign-reversed chain at delta = -1/2: unique positive ground state
        // with p_max = 4/25 on five sites and energy 3L/2 in magnitude.
        let gs = ground_state_with(
            Sector::new(5, 3).unwrap(),
            -0.5,
            Sign::Minus,
            &SolverOptions::default(),
        )
        .unwrap();
        assert!(!gs.degeneracy_flag);
        assert!((gs.energy - (-7.5)).abs() < 1e-9);
        let (s, argmax) = min_entropy(&gs);
        assert!(((-s).exp() - 0.16).abs() < 1e-10);
        assert!(neel_states(gs.sector).unwrap().contains(&argmax));
    }

    #[test]
    fn ground_state_invariants_hold() {
        for (l, delta) in [(7usize, 0.3), (8, -0.4), (9, 1.0)] {
            let sector = Sector::canonical(l).unwrap();
            let gs = ground_state(sector, delta).unwrap();
            assert!(gs.normalization_defect() < 1e-10);
            assert!(gs.translation_invariance_defect() < 1e-9);
        }
    }

    #[test]
    fn spin_flip_sector_equivalence() {
        for delta in [-0.5, 0.3, 1.0] {
            let a = ground_state(Sector::new(7, 4).unwrap(), delta).unwrap();
            let b = ground_state(Sector::new(7, 3).unwrap(), delta).unwrap();
            assert!((a.energy - b.energy).abs() < 1e-9);
            let (sa, _) = min_entropy(&a);
            let (sb, _) = min_entropy(&b);
            assert!((sa - sb).abs() < 1e-9);
        }
    }

    #[test]
    fn odd_scan_ties_cover_neel_orbit() {
        let gs = ground_state(Sector::new(7, 4).unwrap(), 0.5).unwrap();
        let ties = gs.argmax_ties(1e-9);
        assert_eq!(ties.len(), 7);
        let neel = neel_states(gs.sector).unwrap();
        for i in ties {
            assert!(neel.contains(&gs.sector.config_at(i)));
        }
    }

    #[test]
    fn scan_rows_and_error_isolation() {
        let rows = entropy_scan(0.0, &[4, 6, 8]);
        for row in rows {
            let row = row.unwrap();
            let n = row.sector.n_up() as f64;
            assert!((row.s_inf - n * 2.0f64.ln()).abs() < 1e-8);
        }
        // An argmax outside the Neel orbit is reported, not panicked on
        // (observed at L=5 for strongly negative delta).
        let rows = entropy_scan(-0.9, &[5, 7]);
        assert!(matches!(
            rows[0],
            Err(Error::InvariantViolation(_))
        ));
        assert!(rows[1].is_ok());
    }

    #[test]
    fn deterministic_resolve() {
        let sector = Sector::new(9, 5).unwrap();
        let a = ground_state(sector, 0.37).unwrap();
        let b = ground_state(sector, 0.37).unwrap();
        assert_eq!(a.energy.to_bits(), b.energy.to_bits());
        for (x, y) in a.amplitudes.iter().zip(&b.amplitudes) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn degenerate_probabilities_are_rotation_invariant() {
        // Random rotations within the doublet leave the averaged p alone.
        let gs = ground_state(Sector::new(7, 4).unwrap(), 0.5).unwrap();
        assert!(gs.degeneracy_flag);
        assert_eq!(gs.eigenspace.len(), 2);
        let dim = gs.amplitudes.len();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let dist = Uniform::new(0.0f64, std::f64::consts::TAU);
        for _ in 0..8 {
            let th = dist.sample(&mut rng);
            let (c, s) = (th.cos(), th.sin());
            let u: Vec<f64> = (0..dim)
                .map(|i| c * gs.eigenspace[0][i] + s * gs.eigenspace[1][i])
                .collect();
            let w: Vec<f64> = (0..dim)
                .map(|i| -s * gs.eigenspace[0][i] + c * gs.eigenspace[1][i])
                .collect();
            let pmax_rot = (0..dim)
                .map(|i| 0.5 * (u[i] * u[i] + w[i] * w[i]))
                .fold(0.0f64, f64::max);
            let pmax = (0..dim).map(|i| gs.probability(i)).fold(0.0f64, f64::max);
            assert!((pmax_rot - pmax).abs() < 1e-8);
        }
    }

    #[test]
    fn basis_order_matches_sector_indexing() {
        let sector = Sector::new(6, 3).unwrap();
        let basis = sector_basis(sector).unwrap();
        for (i, c) in basis.iter().enumerate() {
            assert_eq!(sector.index_of(*c), i);
        }
    }
}
