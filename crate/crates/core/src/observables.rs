//! Ground-state expectation values: the one-body density matrix
//! `<a_i^+ a_j>`, its distance profile and site occupations.

use crate::basis::SectorBasis;
use crate::eigensolver::GroundStateResult;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ObservableError {
    #[error("site {site} out of range for {sites} sites")]
    SiteOutOfRange { site: usize, sites: usize },
    #[error("state vector length {actual} does not match sector dimension {expected}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("density matrix undefined: photon density vanishes")]
    NoPhotons,
}

/// Normalized one-body density matrix versus periodic distance.
#[derive(Debug, Clone, PartialEq)]
pub struct Rho1Profile {
    /// `rho_1(x)` for `x = 0..=floor(M/2)`; `values[0] == 1`.
    pub values: Vec<f64>,
    /// Site-averaged `<a^+ a>`.
    pub photon_density: f64,
    /// Site-averaged `<s^+ s^->`.
    pub spin_density: f64,
    pub degenerate_flag: bool,
}

impl Rho1Profile {
    /// `rho_1(floor(M/2))`
    pub fn at_max_distance(&self) -> f64 {
        *self.values.last().expect("profile has at least x = 0")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OccupationProfile {
    pub photons: Vec<f64>,
    pub spins: Vec<f64>,
}

impl OccupationProfile {
    pub fn total(&self) -> f64 {
        self.photons.iter().sum::<f64>() + self.spins.iter().sum::<f64>()
    }
}

fn check_len(basis: &SectorBasis, state: &[f64]) -> Result<(), ObservableError> {
    if state.len() != basis.dimension() {
        return Err(ObservableError::DimensionMismatch { expected: basis.dimension(), actual: state.len() });
    }
    Ok(())
}

/// `<psi| a_i^+ a_j |psi>` for a real amplitude vector over `basis`.
pub fn one_body_correlation(
    state: &[f64],
    basis: &SectorBasis,
    i: usize,
    j: usize,
) -> Result<f64, ObservableError> {
    check_len(basis, state)?;
    let m = basis.spec().sites();
    for site in [i, j] {
        if site >= m {
            return Err(ObservableError::SiteOutOfRange { site, sites: m });
        }
    }
    let mut acc = 0.0;
    if i == j {
        for (&key, &amp) in basis.keys().iter().zip(state) {
            let photons = (basis.site_code(key, i) >> 1) as f64;
            acc += photons * amp * amp;
        }
        return Ok(acc);
    }
    // a_j removes a photon at j (code -2), a_i^+ adds one at i (code +2)
    let (down, up) = (2u64 << basis.shift(j), 2u64 << basis.shift(i));
    for (&key, &amp) in basis.keys().iter().zip(state) {
        if amp == 0.0 {
            continue;
        }
        let nj = basis.site_code(key, j) >> 1;
        if nj == 0 {
            continue;
        }
        let ni = basis.site_code(key, i) >> 1;
        let target = key - down + up;
        if let Some(t) = basis.index_of_key(target) {
            acc += state[t] * amp * ((nj as f64) * (ni as f64 + 1.0)).sqrt();
        }
    }
    Ok(acc)
}

/// Per-site `<a_i^+ a_i>` and `<s_i^+ s_i^->`.
pub fn occupation_profile(state: &[f64], basis: &SectorBasis) -> Result<OccupationProfile, ObservableError> {
    check_len(basis, state)?;
    let m = basis.spec().sites();
    let mut photons = vec![0.0; m];
    let mut spins = vec![0.0; m];
    for (&key, &amp) in basis.keys().iter().zip(state) {
        let w = amp * amp;
        for site in 0..m {
            let code = basis.site_code(key, site);
            photons[site] += (code >> 1) as f64 * w;
            spins[site] += (code & 1) as f64 * w;
        }
    }
    Ok(OccupationProfile { photons, spins })
}

/// `<psi| N |psi>`; every basis state carries the sector's `N`.
pub fn total_excitation_expectation(state: &[f64], basis: &SectorBasis) -> Result<f64, ObservableError> {
    check_len(basis, state)?;
    let m = basis.spec().sites();
    Ok(basis
        .keys()
        .iter()
        .zip(state)
        .map(|(&key, &amp)| {
            let count: u64 = (0..m).map(|s| {
                let c = basis.site_code(key, s);
                (c >> 1) + (c & 1)
            }).sum();
            count as f64 * amp * amp
        })
        .sum())
}

/// `rho_1(x)`: site-averaged `<a_i^+ a_{i+x}>` over the site-averaged photon
/// density, for periodic distances `x = 0..=floor(M/2)`.
pub fn rho1_profile(ground: &GroundStateResult, basis: &SectorBasis) -> Result<Rho1Profile, ObservableError> {
    let state = &ground.vector;
    let m = basis.spec().sites();
    let occupations = occupation_profile(state, basis)?;
    let photon_density = occupations.photons.iter().sum::<f64>() / m as f64;
    let spin_density = occupations.spins.iter().sum::<f64>() / m as f64;
    if photon_density <= 0.0 {
        return Err(ObservableError::NoPhotons);
    }
    let mut values = Vec::with_capacity(basis.spec().max_distance() + 1);
    values.push(1.0);
    for x in 1..=basis.spec().max_distance() {
        let mut mean = 0.0;
        for i in 0..m {
            mean += one_body_correlation(state, basis, i, (i + x) % m)?;
        }
        values.push(mean / m as f64 / photon_density);
    }
    Ok(Rho1Profile { values, photon_density, spin_density, degenerate_flag: ground.near_degenerate })
}
