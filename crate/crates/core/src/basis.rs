//! Fixed-excitation product basis of the lattice.
//!
//! A basis state assigns every unit cell a photon number `n_i` and a qubit
//! state. Each site is encoded as the integer `2 * n_i + spin_i`; the site codes
//! are packed into a `u64` with site 0 in the most significant slot, so numeric
//! order of the packed key is lexicographic order of the site sequence. States
//! of a sector are generated directly in that order and looked up by binary
//! search.

use thiserror::Error;

/// Largest sector that [`enumerate_basis`] will build.
pub const DEFAULT_MAX_DIMENSION: usize = 5_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BasisError {
    #[error("lattice must have at least one site")]
    NoSites,
    #[error("sector dimension {dimension} exceeds the configured maximum {limit}")]
    TooLarge { dimension: u128, limit: usize },
    #[error("sector dimension overflows the representable range")]
    Overflow,
    #[error("{sites} sites with up to {excitations} excitations do not fit a 64-bit state key")]
    KeyOverflow { sites: usize, excitations: usize },
}

/// Lattice size `M` (unit cells) and total excitation number `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeSpec {
    sites: usize,
    excitations: usize,
}

impl LatticeSpec {
    pub fn new(sites: usize, excitations: usize) -> Result<Self, BasisError> {
        if sites == 0 {
            return Err(BasisError::NoSites);
        }
        Ok(Self { sites, excitations })
    }

    /// `M`
    pub fn sites(&self) -> usize {
        self.sites
    }

    /// `N`
    pub fn excitations(&self) -> usize {
        self.excitations
    }

    /// Integer filling `N / M` when the filling is commensurate.
    pub fn commensurate_filling(&self) -> Option<usize> {
        (self.excitations > 0 && self.excitations.is_multiple_of(self.sites))
            .then(|| self.excitations / self.sites)
    }

    /// Largest periodic distance, `floor(M / 2)`.
    pub fn max_distance(&self) -> usize {
        self.sites / 2
    }
}

/// One product configuration `|n_1, s_1> (x) ... (x) |n_M, s_M>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisState {
    pub photons: Vec<u32>,
    pub spins: Vec<bool>,
}

impl BasisState {
    pub fn new(photons: Vec<u32>, spins: Vec<bool>) -> Self {
        assert_eq!(photons.len(), spins.len(), "photon and spin site counts differ");
        Self { photons, spins }
    }

    /// All cavities empty, all qubits down.
    pub fn vacuum(sites: usize) -> Self {
        Self { photons: vec![0; sites], spins: vec![false; sites] }
    }

    pub fn sites(&self) -> usize {
        self.photons.len()
    }

    pub fn excitation_number(&self) -> usize {
        self.photons.iter().map(|&n| n as usize).sum::<usize>()
            + self.spins.iter().filter(|&&s| s).count()
    }

    pub fn site_code(&self, site: usize) -> u64 {
        2 * u64::from(self.photons[site]) + u64::from(self.spins[site])
    }
}

/// All basis states of one excitation sector, canonically ordered.
#[derive(Debug, Clone)]
pub struct SectorBasis {
    spec: LatticeSpec,
    bits: u32,
    keys: Vec<u64>,
}

impl SectorBasis {
    pub fn spec(&self) -> LatticeSpec {
        self.spec
    }

    pub fn dimension(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Packed keys in increasing order.
    pub fn keys(&self) -> &[u64] {
        &self.keys
    }

    pub fn state(&self, index: usize) -> BasisState {
        self.decode(self.keys[index])
    }

    pub fn states(&self) -> impl Iterator<Item = BasisState> + '_ {
        self.keys.iter().map(move |&k| self.decode(k))
    }

    /// Ordinal of `state`, or `None` when the state is not in this sector.
    pub fn index_of(&self, state: &BasisState) -> Option<usize> {
        if state.sites() != self.spec.sites
            || state.excitation_number() != self.spec.excitations
        {
            return None;
        }
        self.index_of_key(self.encode(state)?)
    }

    pub fn index_of_key(&self, key: u64) -> Option<usize> {
        self.keys.binary_search(&key).ok()
    }

    /// Packed key of `state`, or `None` if a site code exceeds the slot width.
    pub fn encode(&self, state: &BasisState) -> Option<u64> {
        let limit = 1u64 << self.bits;
        let mut key = 0u64;
        for site in 0..state.sites() {
            let code = state.site_code(site);
            if code >= limit {
                return None;
            }
            key = (key << self.bits) | code;
        }
        Some(key)
    }

    pub fn decode(&self, key: u64) -> BasisState {
        let m = self.spec.sites;
        let mut photons = vec![0; m];
        let mut spins = vec![false; m];
        for site in 0..m {
            let code = self.site_code(key, site);
            photons[site] = (code >> 1) as u32;
            spins[site] = code & 1 == 1;
        }
        BasisState { photons, spins }
    }

    /// Site code `2 n + s` of `site` inside a packed key.
    #[inline]
    pub fn site_code(&self, key: u64, site: usize) -> u64 {
        let shift = self.shift(site);
        (key >> shift) & ((1u64 << self.bits) - 1)
    }

    /// Bit offset of `site` inside a packed key.
    #[inline]
    pub fn shift(&self, site: usize) -> u32 {
        (self.spec.sites - 1 - site) as u32 * self.bits
    }
}

/// Slot width needed for site codes up to `2N + 1`.
fn slot_bits(excitations: usize) -> u32 {
    let max_code = 2 * excitations as u64 + 1;
    (u64::BITS - max_code.leading_zeros()).max(1)
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc * (n - i) is divisible by (i + 1)
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// Number of states with exactly `N` excitations: choose which `k` qubits are
/// up, then distribute the remaining `N - k` photons over `M` cavities.
pub fn sector_dimension(spec: LatticeSpec) -> Result<u128, BasisError> {
    let m = spec.sites as u128;
    let n = spec.excitations as u128;
    let mut total: u128 = 0;
    for k in 0..=m.min(n) {
        let spins = binomial(m, k).ok_or(BasisError::Overflow)?;
        let photons = binomial(n - k + m - 1, m - 1).ok_or(BasisError::Overflow)?;
        total = spins
            .checked_mul(photons)
            .and_then(|t| total.checked_add(t))
            .ok_or(BasisError::Overflow)?;
    }
    Ok(total)
}

pub fn enumerate_basis(spec: LatticeSpec) -> Result<SectorBasis, BasisError> {
    enumerate_basis_with_limit(spec, DEFAULT_MAX_DIMENSION)
}

pub fn enumerate_basis_with_limit(
    spec: LatticeSpec,
    max_dimension: usize,
) -> Result<SectorBasis, BasisError> {
    let dimension = sector_dimension(spec)?;
    if dimension > max_dimension as u128 {
        return Err(BasisError::TooLarge { dimension, limit: max_dimension });
    }
    let bits = slot_bits(spec.excitations);
    if u64::from(bits) * spec.sites as u64 > 64 {
        return Err(BasisError::KeyOverflow { sites: spec.sites, excitations: spec.excitations });
    }
    let mut keys = Vec::with_capacity(dimension as usize);
    fill(spec.sites, spec.excitations, bits, 0, &mut keys);
    debug_assert_eq!(keys.len() as u128, dimension);
    Ok(SectorBasis { spec, bits, keys })
}

/// Appends, in increasing key order, every completion of `prefix` that places
/// exactly `remaining` excitations on the next `sites` sites.
fn fill(sites: usize, remaining: usize, bits: u32, prefix: u64, out: &mut Vec<u64>) {
    if sites == 1 {
        // the last site must absorb the remainder: codes 2r and 2(r-1)+1
        if remaining > 0 {
            out.push((prefix << bits) | (2 * remaining as u64 - 1));
        }
        out.push((prefix << bits) | (2 * remaining as u64));
        return;
    }
    for code in 0..=(2 * remaining as u64 + 1) {
        // excitations carried by code 2n+s is n+s
        let used = (code as usize).div_ceil(2);
        if used > remaining {
            break;
        }
        fill(sites - 1, remaining - used, bits, (prefix << bits) | code, out);
    }
}
