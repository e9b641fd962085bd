//! Reference computations that share no code path with the production
//! solvers. The validation harness and the test suites compare against them.

use crate::hamiltonian::ModelParams;
use std::f64::consts::PI;

/// Single cavity mode truncated at `max_photons`, tensored with one qubit.
/// Local index `2 * photons + spin`.
struct Site {
    max_photons: usize,
}

impl Site {
    fn dim(&self) -> usize {
        2 * (self.max_photons + 1)
    }

    fn index(&self, photons: usize, up: bool) -> usize {
        2 * photons + usize::from(up)
    }

    /// Dense matrix of the photon annihilator `a`.
    fn annihilate(&self) -> Vec<f64> {
        let d = self.dim();
        let mut m = vec![0.0; d * d];
        for p in 1..=self.max_photons {
            for up in [false, true] {
                m[self.index(p - 1, up) * d + self.index(p, up)] = (p as f64).sqrt();
            }
        }
        m
    }

    /// Dense matrix of the qubit raising operator.
    fn raise(&self) -> Vec<f64> {
        let d = self.dim();
        let mut m = vec![0.0; d * d];
        for p in 0..=self.max_photons {
            m[self.index(p, true) * d + self.index(p, false)] = 1.0;
        }
        m
    }

    fn identity(&self) -> Vec<f64> {
        let d = self.dim();
        let mut m = vec![0.0; d * d];
        for i in 0..d {
            m[i * d + i] = 1.0;
        }
        m
    }

    /// Lower eigenvector of the local JC Hamiltonian in the `n`-excitation
    /// manifold, solved as an explicit 2x2 problem. Sign: positive weight on
    /// `|n, down>`, or negative weight on `|n-1, up>` when that vanishes.
    fn lower_polariton(&self, omega_c: f64, omega_z: f64, g: f64, n: usize) -> Vec<f64> {
        let mut v = vec![0.0; self.dim()];
        if n == 0 {
            v[self.index(0, false)] = 1.0;
            return v;
        }
        let down = n as f64 * omega_c - 0.5 * omega_z;
        let up = (n as f64 - 1.0) * omega_c + 0.5 * omega_z;
        let b = g * (n as f64).sqrt();
        let mean = 0.5 * (down + up);
        let half = 0.5 * (down - up);
        let lambda = mean - (half * half + b * b).sqrt();
        // two null vectors of (A - lambda); take the better conditioned one
        let first = [b, lambda - down];
        let second = [lambda - up, b];
        let nrm = |x: [f64; 2]| (x[0] * x[0] + x[1] * x[1]).sqrt();
        let pick = if nrm(first) >= nrm(second) { first } else { second };
        let s = nrm(pick);
        let (mut x, mut y) = (pick[0] / s, pick[1] / s);
        if x < 0.0 || (x == 0.0 && y > 0.0) {
            x = -x;
            y = -y;
        }
        v[self.index(n, false)] = x;
        v[self.index(n - 1, true)] = y;
        v
    }
}

fn kron(a: &[f64], da: usize, b: &[f64], db: usize) -> Vec<f64> {
    let d = da * db;
    let mut out = vec![0.0; d * d];
    for i in 0..da {
        for j in 0..da {
            let aij = a[i * da + j];
            if aij == 0.0 {
                continue;
            }
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k) * d + j * db + l] = aij * b[k * db + l];
                }
            }
        }
    }
    out
}

fn kron_vec(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| x * y)).collect()
}

fn matmul(a: &[f64], b: &[f64], d: usize) -> Vec<f64> {
    let mut out = vec![0.0; d * d];
    for i in 0..d {
        for k in 0..d {
            let aik = a[i * d + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..d {
                out[i * d + j] += aik * b[k * d + j];
            }
        }
    }
    out
}

fn matvec(a: &[f64], v: &[f64]) -> Vec<f64> {
    let d = v.len();
    (0..d).map(|i| (0..d).map(|j| a[i * d + j] * v[j]).sum()).collect()
}

/// `<B| s_i^+ a_{i-1} |A>` built literally on the two-cell tensor space, with
/// the polariton states taken from explicit diagonalization of each cell.
pub fn hopping_element_tensor(delta: f64, g_r: f64, n_left: usize, n_right: usize) -> f64 {
    let omega_c = 5000.0;
    let omega_z = omega_c - delta;
    let site = Site { max_photons: n_left + n_right + 1 };
    let d = site.dim();
    let lower = |n| site.lower_polariton(omega_c, omega_z, g_r, n);

    let a = kron_vec(&lower(n_left), &lower(n_right));
    let b = kron_vec(&lower(n_left - 1), &lower(n_right + 1));
    // (a on cell i-1) (x) (s^+ on cell i)
    let lower_left = kron(&site.annihilate(), d, &site.identity(), d);
    let raise_right = kron(&site.identity(), d, &site.raise(), d);
    let op = matmul(&raise_right, &lower_left, d * d);
    let applied = matvec(&op, &a);
    b.iter().zip(&applied).map(|(x, y)| x * y).sum()
}

/// Spectrum of the single-excitation sector from the Bloch decomposition of
/// the alternating qubit/cavity ring: per momentum `k`, a 2x2 block with the
/// cavity `D` above the qubit and the mixing `g_r + g_l e^{-ik}`.
pub fn single_excitation_spectrum(params: &ModelParams, sites: usize) -> Vec<f64> {
    let delta = params.detuning();
    let base = params.omega_z() - 0.5 * sites as f64 * params.omega_z();
    let mut out = Vec::with_capacity(2 * sites);
    for q in 0..sites {
        let k = 2.0 * PI * q as f64 / sites as f64;
        let re = params.g_r() + params.g_l() * k.cos();
        let im = -params.g_l() * k.sin();
        let split = (0.25 * delta * delta + re * re + im * im).sqrt();
        out.push(base + 0.5 * delta - split);
        out.push(base + 0.5 * delta + split);
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}
