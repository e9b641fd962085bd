//! Sector-restricted lattice Hamiltonian.
//!
//! Unit cell `i` holds qubit `i` and the cavity to its right. The qubit couples
//! to its own cavity with `g_r` and to cavity `i - 1 (mod M)` with `g_l`:
//!
//! ```text
//! H = sum_i [ w_c a_i^+ a_i + (w_z / 2) s_i^z
//!           + g_r (a_i^+ s_i^- + s_i^+ a_i)
//!           + g_l (a_{i-1}^+ s_i^- + s_i^+ a_{i-1}) ]
//! ```
//!
//! All matrix elements are real. The matrix is stored as a diagonal plus the
//! upper-triangle couplings, sorted by row.

use crate::basis::{BasisState, SectorBasis};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HamiltonianError {
    #[error("periodic lattice needs at least two sites (got {0})")]
    TooFewSites(usize),
    #[error("invalid model parameter: {0}")]
    InvalidParams(String),
    #[error("vector length {actual} does not match matrix dimension {expected}")]
    DimensionMismatch { expected: usize, actual: usize },
}

/// Frequencies and couplings, all in MHz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    omega_c: f64,
    omega_z: f64,
    g_l: f64,
    g_r: f64,
}

/// Cavity frequency used when only the detuning is specified.
pub const DEFAULT_OMEGA_C: f64 = 5000.0;

impl ModelParams {
    pub fn new(omega_c: f64, omega_z: f64, g_l: f64, g_r: f64) -> Result<Self, HamiltonianError> {
        let bad = |what: &str, v: f64| HamiltonianError::InvalidParams(format!("{what} = {v}"));
        if !(omega_c.is_finite() && omega_c > 0.0) {
            return Err(bad("omega_c", omega_c));
        }
        if !(omega_z.is_finite() && omega_z > 0.0) {
            return Err(bad("omega_z", omega_z));
        }
        if !(g_l.is_finite() && g_l >= 0.0) {
            return Err(bad("g_l", g_l));
        }
        if !(g_r.is_finite() && g_r >= 0.0) {
            return Err(bad("g_r", g_r));
        }
        Ok(Self { omega_c, omega_z, g_l, g_r })
    }

    /// `omega_z` is derived as `omega_c - delta`.
    pub fn from_detuning(omega_c: f64, delta: f64, g_l: f64, g_r: f64) -> Result<Self, HamiltonianError> {
        Self::new(omega_c, omega_c - delta, g_l, g_r)
    }

    /// Skips validation. Used by the validation harness to inject faulty models.
    pub(crate) fn unchecked(omega_c: f64, omega_z: f64, g_l: f64, g_r: f64) -> Self {
        Self { omega_c, omega_z, g_l, g_r }
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    pub fn omega_z(&self) -> f64 {
        self.omega_z
    }

    pub fn g_l(&self) -> f64 {
        self.g_l
    }

    pub fn g_r(&self) -> f64 {
        self.g_r
    }

    /// `omega_c - omega_z`
    pub fn detuning(&self) -> f64 {
        self.omega_c - self.omega_z
    }

    /// Same model with the two couplings exchanged.
    pub fn reflected(&self) -> Self {
        Self { g_l: self.g_r, g_r: self.g_l, ..*self }
    }

    /// Constant `omega_c N - M omega_z / 2` that every diagonal entry of the
    /// `N` sector shares up to a multiple of the detuning.
    pub fn sector_offset(&self, sites: usize, excitations: usize) -> f64 {
        self.omega_c * excitations as f64 - 0.5 * self.omega_z * sites as f64
    }
}

pub fn diagonal_energy(params: &ModelParams, state: &BasisState) -> f64 {
    state
        .photons
        .iter()
        .zip(&state.spins)
        .map(|(&n, &up)| {
            let sz = if up { 0.5 } else { -0.5 };
            params.omega_c * f64::from(n) + params.omega_z * sz
        })
        .sum()
}

/// Real symmetric sector matrix: diagonal plus couplings with `row < col`.
#[derive(Debug, Clone)]
pub struct SparseHamiltonian {
    diagonal: Vec<f64>,
    rows: Vec<u32>,
    cols: Vec<u32>,
    values: Vec<f64>,
}

impl SparseHamiltonian {
    /// Assembles from raw parts. Couplings are normalized to `row < col` and
    /// sorted; a pair given twice is summed.
    pub fn from_parts(diagonal: Vec<f64>, couplings: Vec<(usize, usize, f64)>) -> Self {
        let n = diagonal.len();
        let mut entries: Vec<(u32, u32, f64)> = couplings
            .into_iter()
            .map(|(r, c, v)| {
                assert!(r < n && c < n && r != c, "coupling ({r}, {c}) out of range");
                let (r, c) = if r < c { (r, c) } else { (c, r) };
                (r as u32, c as u32, v)
            })
            .collect();
        entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut rows = Vec::with_capacity(entries.len());
        let mut cols = Vec::with_capacity(entries.len());
        let mut values: Vec<f64> = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            if rows.last() == Some(&r) && cols.last() == Some(&c) {
                *values.last_mut().unwrap() += v;
            } else {
                rows.push(r);
                cols.push(c);
                values.push(v);
            }
        }
        Self { diagonal, rows, cols, values }
    }

    pub fn dimension(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    /// Stored upper-triangle couplings `(row, col, value)`.
    pub fn off_diagonal(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.rows
            .iter()
            .zip(&self.cols)
            .zip(&self.values)
            .map(|((&r, &c), &v)| (r as usize, c as usize, v))
    }

    pub fn off_diagonal_count(&self) -> usize {
        self.values.len()
    }

    /// Entries of the full matrix, counting both triangles.
    pub fn nonzeros(&self) -> usize {
        self.diagonal.len() + 2 * self.values.len()
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>, HamiltonianError> {
        let mut out = vec![0.0; self.dimension()];
        self.apply_into(v, &mut out)?;
        Ok(out)
    }

    /// `out = H v`.
    pub fn apply_into(&self, v: &[f64], out: &mut [f64]) -> Result<(), HamiltonianError> {
        let n = self.dimension();
        for len in [v.len(), out.len()] {
            if len != n {
                return Err(HamiltonianError::DimensionMismatch { expected: n, actual: len });
            }
        }
        for ((o, &d), &x) in out.iter_mut().zip(&self.diagonal).zip(v) {
            *o = d * x;
        }
        for ((&r, &c), &h) in self.rows.iter().zip(&self.cols).zip(&self.values) {
            let (r, c) = (r as usize, c as usize);
            out[r] += h * v[c];
            out[c] += h * v[r];
        }
        Ok(())
    }

    /// Column-major (equivalently row-major) dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dimension();
        let mut dense = vec![0.0; n * n];
        for (i, &d) in self.diagonal.iter().enumerate() {
            dense[i * n + i] = d;
        }
        for (r, c, v) in self.off_diagonal() {
            dense[r * n + c] += v;
            dense[c * n + r] += v;
        }
        dense
    }

    /// Largest absolute row sum; bounds the spectral radius.
    pub fn norm_bound(&self) -> f64 {
        let mut sums: Vec<f64> = self.diagonal.iter().map(|d| d.abs()).collect();
        for (r, c, v) in self.off_diagonal() {
            sums[r] += v.abs();
            sums[c] += v.abs();
        }
        sums.into_iter().fold(0.0, f64::max)
    }
}

/// `H v` with a length check.
pub fn apply_hamiltonian(h: &SparseHamiltonian, v: &[f64]) -> Result<Vec<f64>, HamiltonianError> {
    h.apply(v)
}

pub fn build_hamiltonian(
    params: &ModelParams,
    basis: &SectorBasis,
) -> Result<SparseHamiltonian, HamiltonianError> {
    let m = basis.spec().sites();
    if m < 2 {
        return Err(HamiltonianError::TooFewSites(m));
    }
    let dim = basis.dimension();
    let mut diagonal = Vec::with_capacity(dim);
    let mut couplings = Vec::with_capacity(dim * m);
    let mut codes = vec![0u64; m];

    for (row, &key) in basis.keys().iter().enumerate() {
        let mut energy = 0.0;
        for (site, code) in codes.iter_mut().enumerate() {
            *code = basis.site_code(key, site);
            let photons = (*code >> 1) as f64;
            let sz = if *code & 1 == 1 { 0.5 } else { -0.5 };
            energy += params.omega_c * photons + params.omega_z * sz;
        }
        diagonal.push(energy);

        // Only the a^+ s^- half of each exchange term is generated; its
        // conjugate is the same stored pair seen from the other state.
        for (qubit, &code) in codes.iter().enumerate() {
            if code & 1 == 0 {
                continue;
            }
            let left = (qubit + m - 1) % m;
            for (cavity, g) in [(qubit, params.g_r), (left, params.g_l)] {
                if g == 0.0 {
                    continue;
                }
                let target = if cavity == qubit {
                    // (n, up) -> (n + 1, down): code 2n+1 -> 2n+2
                    key + (1u64 << basis.shift(qubit))
                } else {
                    // qubit code drops by 1, cavity code rises by 2
                    key - (1u64 << basis.shift(qubit)) + (2u64 << basis.shift(cavity))
                };
                let photons = (codes[cavity] >> 1) as f64;
                let col = basis
                    .index_of_key(target)
                    .expect("exchange term leaves the sector");
                couplings.push((row, col, g * (photons + 1.0).sqrt()));
            }
        }
    }
    Ok(SparseHamiltonian::from_parts(diagonal, couplings))
}
