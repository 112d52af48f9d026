//! Magnetization-sector bases of the periodic chain.
//!
//! A spin configuration is an L-bit word with bit `j` set when site `j+1`
//! points up. Within a sector of fixed up-spin count the basis is ordered by
//! numeric value of the word, which coincides with colexicographic order on
//! the up-spin position sets, so index lookups go through the combinatorial
//! number system instead of a search.
//!
//! Site indices are 1-based in every reported position list, matching the
//! usual convention for particle coordinates on the ring; the bit encoding
//! stays 0-based internally.

use std::fmt;

use crate::combinatorics::{binomial, rank_combination, unrank_combination, Combinations};
use crate::error::{Error, Result};

/// Smallest supported chain. Below three sites the cyclic bond sum double
/// counts the single bond and the Hamiltonian is ill-defined.
pub const MIN_SITES: usize = 3;
/// Largest supported chain (bit words are u64).
pub const MAX_SITES: usize = 63;
/// Default refusal threshold for basis enumeration.
pub const DEFAULT_DIMENSION_CAP: u64 = 1 << 31;

/// An L-site up/down configuration encoded as a bitmask.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinConfig {
    bits: u64,
    length: u8,
}

impl SpinConfig {
    /// Raw configurations are valid for any ring length 1..=63; the
    /// [`MIN_SITES`] floor applies to Hamiltonian sectors, where the cyclic
    /// bond sum needs at least three sites.
    pub fn new(bits: u64, length: usize) -> Result<Self> {
        if !(1..=MAX_SITES).contains(&length) {
            return Err(Error::Domain(format!(
                "ring length {length} outside [1, {MAX_SITES}]"
            )));
        }
        if bits >> length != 0 {
            return Err(Error::Contract(format!(
                "bits {bits:#b} exceed 2^{length}"
            )));
        }
        Ok(SpinConfig {
            bits,
            length: length as u8,
        })
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.length as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    /// Number of up spins.
    #[inline]
    pub fn n_up(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Is the 1-based `site` pointing up?
    #[inline]
    pub fn site_up(&self, site: usize) -> bool {
        debug_assert!((1..=self.len()).contains(&site));
        (self.bits >> (site - 1)) & 1 == 1
    }

    /// 1-based positions of the up spins, ascending.
    pub fn up_positions(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.n_up());
        let mut rest = self.bits;
        while rest != 0 {
            out.push(rest.trailing_zeros() as usize + 1);
            rest &= rest - 1;
        }
        out
    }

    /// Cyclic rotation moving site 1 to site 1+k.
    #[inline]
    pub fn translate(&self, k: usize) -> SpinConfig {
        let l = self.len();
        let k = k % l;
        if k == 0 {
            return *self;
        }
        let mask = (1u64 << l) - 1;
        let bits = ((self.bits << k) | (self.bits >> (l - k))) & mask;
        SpinConfig {
            bits,
            length: self.length,
        }
    }

    /// Global spin flip (bitwise complement within the chain).
    pub fn spin_flipped(&self) -> SpinConfig {
        SpinConfig {
            bits: !self.bits & ((1u64 << self.len()) - 1),
            length: self.length,
        }
    }

    /// Number of cyclic bonds whose two spins are equal.
    pub fn equal_adjacent_bonds(&self) -> usize {
        let l = self.len();
        let rotated = self.translate(1).bits;
        let differing = (self.bits ^ rotated).count_ones() as usize;
        l - differing
    }

    /// '0'/'1' string with site 1 leftmost, the serialization used in all
    /// CSV/JSON output.
    pub fn to_string01(&self) -> String {
        (0..self.len())
            .map(|j| if (self.bits >> j) & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Parse the site-1-leftmost '0'/'1' serialization.
    pub fn from_string01(s: &str) -> Result<Self> {
        let mut bits = 0u64;
        for (j, ch) in s.chars().enumerate() {
            match ch {
                '1' => bits |= 1 << j,
                '0' => {}
                other => {
                    return Err(Error::Contract(format!(
                        "invalid config character {other:?}"
                    )))
                }
            }
        }
        SpinConfig::new(bits, s.len())
    }
}

impl fmt::Debug for SpinConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SpinConfig({})", self.to_string01())
    }
}

impl fmt::Display for SpinConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string01())
    }
}

/// Parity class of a chain length.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Parity {
    Even,
    Odd,
}

/// A fixed-magnetization subspace `(L, N_up)`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct Sector {
    length: usize,
    n_up: usize,
}

impl Sector {
    pub fn new(length: usize, n_up: usize) -> Result<Self> {
        if !(MIN_SITES..=MAX_SITES).contains(&length) {
            return Err(Error::Domain(format!(
                "chain length {length} outside [{MIN_SITES}, {MAX_SITES}]"
            )));
        }
        if n_up > length {
            return Err(Error::Domain(format!(
                "N_up = {n_up} exceeds L = {length}"
            )));
        }
        Ok(Sector { length, n_up })
    }

    /// The canonical sector for each parity: total S^z = 0 for even L,
    /// S^z = +1/2 for odd L.
    pub fn canonical(length: usize) -> Result<Self> {
        Sector::new(length, length.div_ceil(2))
    }

    #[inline]
    pub fn length(&self) -> usize {
        self.length
    }

    #[inline]
    pub fn n_up(&self) -> usize {
        self.n_up
    }

    pub fn parity(&self) -> Parity {
        if self.length % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.n_up == self.length.div_ceil(2)
    }

    /// The image sector under a global spin flip.
    pub fn spin_flipped(&self) -> Sector {
        Sector {
            length: self.length,
            n_up: self.length - self.n_up,
        }
    }

    /// Twice the total S^z (so it stays an integer for odd chains).
    pub fn twice_sz(&self) -> i64 {
        2 * self.n_up as i64 - self.length as i64
    }

    #[inline]
    pub fn dimension(&self) -> u64 {
        binomial(self.length, self.n_up)
    }

    /// Index of `config` in the sector basis (colex rank).
    #[inline]
    pub fn index_of(&self, config: SpinConfig) -> usize {
        debug_assert_eq!(config.len(), self.length);
        debug_assert_eq!(config.n_up(), self.n_up);
        rank_combination(config.bits()) as usize
    }

    /// Index of a raw bit word in the sector basis.
    #[inline]
    pub fn index_of_bits(&self, bits: u64) -> usize {
        rank_combination(bits) as usize
    }

    /// The `index`-th configuration of the sector basis.
    #[inline]
    pub fn config_at(&self, index: usize) -> SpinConfig {
        debug_assert!((index as u64) < self.dimension());
        SpinConfig {
            bits: unrank_combination(index as u64, self.n_up, self.length),
            length: self.length as u8,
        }
    }

    /// Iterate the sector basis in order without materializing it.
    pub fn iter_configs(&self) -> impl Iterator<Item = SpinConfig> + '_ {
        let length = self.length as u8;
        Combinations::new(self.length, self.n_up).map(move |bits| SpinConfig { bits, length })
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(L={}, N_up={})", self.length, self.n_up)
    }
}

/// Enumerate the sector basis in ascending numeric (= colex) order.
///
/// Refuses with a sizing error when the dimension exceeds
/// [`DEFAULT_DIMENSION_CAP`].
pub fn sector_basis(sector: Sector) -> Result<Vec<SpinConfig>> {
    sector_basis_with_cap(sector, DEFAULT_DIMENSION_CAP)
}

/// [`sector_basis`] with an explicit dimension cap.
pub fn sector_basis_with_cap(sector: Sector, cap: u64) -> Result<Vec<SpinConfig>> {
    let dim = sector.dimension();
    if dim > cap {
        return Err(Error::Sizing(format!(
            "sector {sector} has dimension {dim} > cap {cap}"
        )));
    }
    Ok(sector.iter_configs().collect())
}

/// Cyclic translation of a configuration by `k` sites.
pub fn translate(config: SpinConfig, k: usize) -> SpinConfig {
    config.translate(k)
}

/// The maximal (Néel-type) configurations of a canonical sector.
///
/// Even parity: the two alternating configurations. Odd parity: the L
/// translations of the configuration whose minority spins occupy sites
/// 1, 3, ..., 2N-1, each carrying exactly one adjacent parallel pair (the
/// spinon). Returned sorted ascending.
pub fn neel_states(sector: Sector) -> Result<Vec<SpinConfig>> {
    if !sector.is_canonical() {
        return Err(Error::Domain(format!(
            "neel_states requires a canonical sector, got {sector}"
        )));
    }
    let l = sector.length();
    match sector.parity() {
        Parity::Even => {
            let a = SpinConfig {
                bits: alternating_mask(l),
                length: l as u8,
            };
            Ok(vec![a, a.translate(1)])
        }
        Parity::Odd => {
            let n_minority = l - sector.n_up();
            // minority (down) spins on odd sites 1, 3, ..., 2N-1
            let mut down = 0u64;
            for j in 0..n_minority {
                down |= 1 << (2 * j);
            }
            let base = SpinConfig {
                bits: !down & ((1u64 << l) - 1),
                length: l as u8,
            };
            let mut orbit: Vec<SpinConfig> = (0..l).map(|k| base.translate(k)).collect();
            orbit.sort();
            orbit.dedup();
            Ok(orbit)
        }
    }
}

/// Bits 0, 2, 4, ... set: spin up on every odd 1-based site.
fn alternating_mask(l: usize) -> u64 {
    let mut m = 0u64;
    let mut j = 0;
    while j < l {
        m |= 1 << j;
        j += 2;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_sizes() {
        assert_eq!(sector_basis(Sector::new(4, 2).unwrap()).unwrap().len(), 6);
        assert_eq!(sector_basis(Sector::new(5, 3).unwrap()).unwrap().len(), 10);
        assert_eq!(Sector::new(23, 12).unwrap().dimension(), 1_352_078);
    }

    #[test]
    fn basis_is_sorted_unique_and_indexable() {
        let sector = Sector::new(7, 3).unwrap();
        let basis = sector_basis(sector).unwrap();
        assert!(basis.windows(2).all(|w| w[0] < w[1]));
        for (i, &c) in basis.iter().enumerate() {
            assert_eq!(sector.index_of(c), i);
            assert_eq!(sector.config_at(i), c);
        }
    }

    #[test]
    fn dimension_cap_refusal() {
        let sector = Sector::new(6, 3).unwrap();
        let err = sector_basis_with_cap(sector, 10).unwrap_err();
        assert!(matches!(err, Error::Sizing(_)));
    }

    #[test]
    fn translate_basics() {
        let c = SpinConfig::new(0b0101, 4).unwrap();
        assert_eq!(c.translate(1).bits(), 0b1010);
        assert_eq!(c.translate(4), c);
        assert_eq!(c.translate(0), c);
        // additive composition mod L
        let c = SpinConfig::new(0b0110100, 7).unwrap();
        assert_eq!(c.translate(3).translate(5), c.translate(8 % 7));
    }

    #[test]
    fn even_neel_orbit_size_two() {
        let sector = Sector::new(8, 4).unwrap();
        let neel = neel_states(sector).unwrap();
        assert_eq!(neel.len(), 2);
        // the orbit of either one under translation has size 2
        let orbit: std::collections::HashSet<u64> =
            (0..8).map(|k| neel[0].translate(k).bits()).collect();
        assert_eq!(orbit.len(), 2);
        for c in &neel {
            assert_eq!(c.equal_adjacent_bonds(), 0);
        }
    }

    #[test]
    fn l4_neel_values() {
        let neel = neel_states(Sector::new(4, 2).unwrap()).unwrap();
        let bits: Vec<u64> = neel.iter().map(|c| c.bits()).collect();
        assert_eq!(bits, vec![0b0101, 0b1010]);
    }

    #[test]
    fn odd_neel_orbit() {
        let sector = Sector::new(5, 3).unwrap();
        let neel = neel_states(sector).unwrap();
        assert_eq!(neel.len(), 5);
        for c in &neel {
            assert_eq!(c.n_up(), 3);
            assert_eq!(c.equal_adjacent_bonds(), 1);
        }
    }

    #[test]
    fn odd_neel_matches_bruteforce_scan() {
        // L=7: all C(7,4) configs with exactly one adjacent parallel pair of
        // the majority species.
        let sector = Sector::new(7, 4).unwrap();
        let neel = neel_states(sector).unwrap();
        assert_eq!(neel.len(), 7);
        let scanned: Vec<SpinConfig> = sector_basis(sector)
            .unwrap()
            .into_iter()
            .filter(|c| c.equal_adjacent_bonds() == 1)
            .collect();
        assert_eq!(neel, scanned);
    }

    #[test]
    fn non_canonical_sector_rejected() {
        let sector = Sector::new(6, 2).unwrap();
        assert!(matches!(neel_states(sector), Err(Error::Domain(_))));
    }

    #[test]
    fn string01_roundtrip() {
        let c = SpinConfig::new(0b11010, 5).unwrap();
        assert_eq!(c.to_string01(), "01011");
        assert_eq!(SpinConfig::from_string01("01011").unwrap(), c);
        assert_eq!(c.up_positions(), vec![2, 4, 5]);
    }

    #[test]
    fn length_bounds() {
        assert!(SpinConfig::new(0, 0).is_err());
        assert!(SpinConfig::new(0, 64).is_err());
        assert!(SpinConfig::new(0b01, 2).is_ok());
        assert!(Sector::new(2, 1).is_err());
    }
}
