//! Ground state of a [`SparseHamiltonian`].
//!
//! [`lanczos_ground_state`] runs a Lanczos iteration with full
//! reorthogonalization and thick restart: when the Krylov basis reaches
//! `max_krylov` vectors, the lowest Ritz vectors are kept together with the
//! current residual direction and the recurrence continues from there.
//! Convergence is always confirmed by an explicit residual `||H x - E x||`.
//!
//! [`dense_ground_state`] diagonalizes the full matrix and serves as the
//! reference for small sectors.

use crate::hamiltonian::{HamiltonianError, SparseHamiltonian};
use crate::linalg::{self, axpy, dot, norm, scale, LinalgError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Largest sector [`dense_ground_state`] accepts.
pub const DEFAULT_DENSE_CAP: usize = 4000;

/// Energies below this magnitude (MHz) are measured on an absolute scale.
pub const ENERGY_FLOOR: f64 = 1.0;

/// Relative gap below which a ground state is reported as near-degenerate.
pub const DEGENERACY_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("empty sector")]
    Empty,
    #[error("invalid solver options: {0}")]
    InvalidOptions(String),
    #[error("dimension {dimension} exceeds the dense cap {cap}")]
    TooLargeForDense { dimension: usize, cap: usize },
    #[error("vector norm {0} is not 1")]
    NotNormalized(f64),
    #[error(transparent)]
    Hamiltonian(#[from] HamiltonianError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Relative residual threshold.
    pub tolerance: f64,
    pub max_krylov: usize,
    pub max_restarts: usize,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tolerance: 1e-9, max_krylov: 300, max_restarts: 50, seed: 1 }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(SolverError::InvalidOptions(format!("tolerance = {}", self.tolerance)));
        }
        if self.max_krylov < 2 {
            return Err(SolverError::InvalidOptions(format!("max_krylov = {}", self.max_krylov)));
        }
        Ok(())
    }
}

/// Lowest Ritz value after a Lanczos step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RitzSample {
    /// Restart cycle, starting at 0.
    pub cycle: usize,
    /// Size of the projected problem.
    pub krylov_dimension: usize,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct GroundStateResult {
    /// MHz
    pub energy: f64,
    /// Unit norm, sign fixed so the amplitudes sum to a non-negative value.
    pub vector: Vec<f64>,
    /// `||H v - E v||` from an explicit matvec (MHz).
    pub residual: f64,
    /// Matrix-vector products.
    pub iterations: usize,
    pub converged: bool,
    /// `E_1 - E_0` of the final projected problem; `None` for a 1x1 sector.
    pub gap_estimate: Option<f64>,
    pub near_degenerate: bool,
    pub restarts: usize,
    pub ritz_trace: Vec<RitzSample>,
}

impl GroundStateResult {
    fn finish(
        h: &SparseHamiltonian,
        energy: f64,
        mut vector: Vec<f64>,
        iterations: usize,
        tolerance: f64,
        gap_estimate: Option<f64>,
    ) -> Result<Self, SolverError> {
        let nrm = norm(&vector);
        scale(1.0 / nrm, &mut vector);
        fix_sign(&mut vector);
        let residual = residual_norm(h, &vector, energy)?;
        let energy_scale = energy.abs().max(ENERGY_FLOOR);
        let near_degenerate =
            gap_estimate.is_some_and(|gap| gap < DEGENERACY_THRESHOLD * energy_scale);
        Ok(Self {
            energy,
            vector,
            residual,
            iterations,
            converged: residual <= tolerance * energy_scale,
            gap_estimate,
            near_degenerate,
            restarts: 0,
            ritz_trace: Vec::new(),
        })
    }

    pub fn rayleigh_quotient(&self, h: &SparseHamiltonian) -> Result<f64, SolverError> {
        let hv = h.apply(&self.vector)?;
        Ok(dot(&self.vector, &hv) / dot(&self.vector, &self.vector))
    }
}

/// Chooses the global sign by the amplitude sum, falling back to the largest
/// entry when the sum vanishes.
fn fix_sign(v: &mut [f64]) {
    let sum: f64 = v.iter().sum();
    let flip = if sum.abs() > 1e-8 {
        sum < 0.0
    } else {
        let mut best = 0.0f64;
        for &x in v.iter() {
            if x.abs() > best.abs() + 1e-12 {
                best = x;
            }
        }
        best < 0.0
    };
    if flip {
        scale(-1.0, v);
    }
}

/// `||H v - e v||`. `v` must have unit norm to within `1e-8`.
pub fn residual_norm(h: &SparseHamiltonian, v: &[f64], energy: f64) -> Result<f64, SolverError> {
    let nrm = norm(v);
    if (nrm - 1.0).abs() > 1e-8 {
        return Err(SolverError::NotNormalized(nrm));
    }
    let mut hv = h.apply(v)?;
    axpy(-energy, v, &mut hv);
    Ok(norm(&hv))
}

pub fn dense_ground_state(h: &SparseHamiltonian) -> Result<GroundStateResult, SolverError> {
    dense_ground_state_with_cap(h, DEFAULT_DENSE_CAP)
}

pub fn dense_ground_state_with_cap(
    h: &SparseHamiltonian,
    cap: usize,
) -> Result<GroundStateResult, SolverError> {
    let n = h.dimension();
    if n == 0 {
        return Err(SolverError::Empty);
    }
    if n > cap {
        return Err(SolverError::TooLargeForDense { dimension: n, cap });
    }
    let pairs = linalg::lowest_eigenpairs(&h.to_dense(), n, 2)?;
    let gap = (pairs.values.len() > 1).then(|| pairs.values[1] - pairs.values[0]);
    // dense results are exact to rounding; report them as converged at 1e-9
    let mut result = GroundStateResult::finish(h, pairs.values[0], pairs.vector(0).to_vec(), 0, 1e-9, gap)?;
    result.converged = true;
    Ok(result)
}

/// Full spectrum of the dense matrix, ascending.
pub fn dense_spectrum(h: &SparseHamiltonian, cap: usize) -> Result<Vec<f64>, SolverError> {
    let n = h.dimension();
    if n > cap {
        return Err(SolverError::TooLargeForDense { dimension: n, cap });
    }
    Ok(linalg::symmetric_eigenvalues(&h.to_dense(), n)?)
}

/// Krylov basis stored column by column in one buffer.
struct KrylovBasis {
    n: usize,
    data: Vec<f64>,
}

impl KrylovBasis {
    fn new(n: usize, capacity: usize) -> Self {
        Self { n, data: vec![0.0; n * capacity] }
    }

    fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.n..(j + 1) * self.n]
    }

    fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.n..(j + 1) * self.n]
    }

    /// Removes the components of `w` along columns `0..count`, two passes of
    /// classical Gram-Schmidt.
    fn orthogonalize(&self, w: &mut [f64], count: usize) {
        let mut coeffs = vec![0.0; count];
        for _ in 0..2 {
            for (j, c) in coeffs.iter_mut().enumerate() {
                *c = dot(self.col(j), w);
            }
            for (j, &c) in coeffs.iter().enumerate() {
                axpy(-c, self.col(j), w);
            }
        }
    }

    /// `sum_j y[j] * col(j)`
    fn combine(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (j, &c) in y.iter().enumerate() {
            axpy(c, self.col(j), &mut out);
        }
        out
    }
}

/// Projected matrix of one Lanczos run. Before the first restart it is
/// tridiagonal; afterwards the leading block is diagonal with an arrow row
/// coupling it to the first new Lanczos vector.
struct Projection {
    size: usize,
    dense: Vec<f64>,
    tridiagonal: bool,
}

impl Projection {
    fn new(size: usize) -> Self {
        Self { size, dense: vec![0.0; size * size], tridiagonal: true }
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        self.dense[i * self.size + j]
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.dense[i * self.size + j] = v;
        self.dense[j * self.size + i] = v;
    }

    fn lowest(&self, dim: usize, count: usize) -> Result<linalg::Eigenpairs, LinalgError> {
        if self.tridiagonal {
            let diag: Vec<f64> = (0..dim).map(|i| self.get(i, i)).collect();
            let off: Vec<f64> = (1..dim).map(|i| self.get(i - 1, i)).collect();
            linalg::tridiagonal_lowest_eigenpairs(&diag, &off, count)
        } else {
            let mut block = vec![0.0; dim * dim];
            for i in 0..dim {
                block[i * dim..(i + 1) * dim].copy_from_slice(&self.dense[i * self.size..i * self.size + dim]);
            }
            linalg::lowest_eigenpairs(&block, dim, count)
        }
    }

    fn reset(&mut self) {
        self.dense.iter_mut().for_each(|x| *x = 0.0);
        self.tridiagonal = false;
    }
}

fn random_unit(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
    let nrm = norm(&v);
    scale(1.0 / nrm, &mut v);
    v
}

pub fn lanczos_ground_state(
    h: &SparseHamiltonian,
    opts: &SolverOptions,
) -> Result<GroundStateResult, SolverError> {
    opts.validate()?;
    let n = h.dimension();
    if n == 0 {
        return Err(SolverError::Empty);
    }
    if n == 1 {
        return GroundStateResult::finish(h, h.diagonal()[0], vec![1.0], 0, opts.tolerance, None);
    }

    let m = opts.max_krylov.min(n);
    let keep = (m / 10).clamp(1, m - 1);
    let breakdown = 1e-12 * h.norm_bound().max(ENERGY_FLOOR);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let mut basis = KrylovBasis::new(n, m);
    let mut t = Projection::new(m);
    let start = random_unit(n, &mut rng);
    basis.col_mut(0).copy_from_slice(&start);

    let mut w = vec![0.0; n];
    let mut locked = 0; // kept Ritz vectors in the current cycle
    let mut j = 0;
    let mut matvecs = 0;
    let mut restarts = 0;
    let mut trace = Vec::new();

    loop {
        h.apply_into(basis.col(j), &mut w)?;
        matvecs += 1;
        if j == locked && locked > 0 {
            for i in 0..locked {
                axpy(-t.get(i, locked), basis.col(i), &mut w);
            }
        } else if j > 0 {
            axpy(-t.get(j - 1, j), basis.col(j - 1), &mut w);
        }
        let alpha = dot(&w, basis.col(j));
        axpy(-alpha, basis.col(j), &mut w);
        t.set(j, j, alpha);
        basis.orthogonalize(&mut w, j + 1);
        let beta = norm(&w);

        let dim = j + 1;
        let full = dim == m;
        let wanted = if full { keep.max(2) } else { 2 };
        let ritz = t.lowest(dim, wanted)?;
        let theta = ritz.values[0];
        let y0 = ritz.vector(0);
        trace.push(RitzSample { cycle: restarts, krylov_dimension: dim, value: theta });
        let gap = (ritz.values.len() > 1).then(|| ritz.values[1] - ritz.values[0]);
        let energy_scale = theta.abs().max(ENERGY_FLOOR);
        let estimate = beta * y0[j].abs();
        let exhausted = beta <= breakdown;

        let finish = |basis: &KrylovBasis, matvecs: usize, trace: Vec<RitzSample>, restarts| {
            let x = basis.combine(y0);
            GroundStateResult::finish(h, theta, x, matvecs, opts.tolerance, gap).map(|mut r| {
                r.restarts = restarts;
                r.ritz_trace = trace;
                r
            })
        };

        if estimate <= opts.tolerance * energy_scale || exhausted {
            let result = finish(&basis, matvecs + 1, trace.clone(), restarts)?;
            matvecs += 1;
            if result.converged || (exhausted && dim == n) {
                return Ok(result);
            }
        }

        if full {
            if restarts >= opts.max_restarts {
                return finish(&basis, matvecs + 1, trace, restarts);
            }
            // thick restart: keep the lowest Ritz vectors, continue from w
            let kept = keep.min(ritz.values.len());
            let ritz_vectors: Vec<Vec<f64>> = (0..kept).map(|i| basis.combine(ritz.vector(i))).collect();
            let couplings: Vec<f64> = (0..kept).map(|i| beta * ritz.vector(i)[j]).collect();
            t.reset();
            for (i, v) in ritz_vectors.into_iter().enumerate() {
                basis.col_mut(i).copy_from_slice(&v);
                t.set(i, i, ritz.values[i]);
                t.set(i, kept, couplings[i]);
            }
            if exhausted {
                let mut fresh = random_unit(n, &mut rng);
                basis.orthogonalize(&mut fresh, kept);
                let nrm = norm(&fresh);
                scale(1.0 / nrm, &mut fresh);
                basis.col_mut(kept).copy_from_slice(&fresh);
                for i in 0..kept {
                    t.set(i, kept, 0.0);
                }
            } else {
                scale(1.0 / beta, &mut w);
                basis.col_mut(kept).copy_from_slice(&w);
            }
            locked = kept;
            j = kept;
            restarts += 1;
            continue;
        }

        if exhausted {
            // invariant subspace without the ground state: continue from a
            // fresh direction orthogonal to everything so far
            let mut fresh = random_unit(n, &mut rng);
            basis.orthogonalize(&mut fresh, dim);
            let nrm = norm(&fresh);
            if nrm <= 1e-8 {
                return finish(&basis, matvecs, trace, restarts);
            }
            scale(1.0 / nrm, &mut fresh);
            basis.col_mut(dim).copy_from_slice(&fresh);
            t.set(j, dim, 0.0);
        } else {
            scale(1.0 / beta, &mut w);
            basis.col_mut(dim).copy_from_slice(&w);
            t.set(j, dim, beta);
        }
        j = dim;
    }
}
