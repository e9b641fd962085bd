//! Single-point solves, detuning/coupling sweeps and CSV emission.
//!
//! Floats are written with 17 significant digits so every value round-trips.

use crate::analytics::{nonlinearity_table, AnalyticsError};
use crate::basis::{enumerate_basis, BasisError, LatticeSpec, SectorBasis};
use crate::config::{GridSpec, SweepConfig};
use crate::eigensolver::{lanczos_ground_state, SolverError, SolverOptions};
use crate::hamiltonian::{build_hamiltonian, HamiltonianError, ModelParams};
use crate::observables::{rho1_profile, ObservableError};
use std::collections::BTreeMap;
use std::io::Write;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Hamiltonian(#[from] HamiltonianError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Observable(#[from] ObservableError),
    #[error(transparent)]
    Analytics(#[from] AnalyticsError),
    #[error("pair index {index} out of range ({count} pairs)")]
    PairIndex { index: usize, count: usize },
    #[error("worker count must be at least 1")]
    NoThreads,
    #[error("point (pair {pair_index}, delta {delta}) failed: {source}")]
    Point {
        pair_index: usize,
        delta: f64,
        #[source]
        source: Box<SweepError>,
    },
    #[error("write failed: {0}")]
    Io(#[from] std::io::Error),
}

/// One solved grid point with all of its inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub sites: usize,
    pub excitations: usize,
    pub g_l: f64,
    pub g_r: f64,
    pub delta: f64,
    pub omega_c: f64,
    pub omega_z: f64,
    pub energy: f64,
    /// `rho_1(x)` for `x = 0..=floor(M/2)`.
    pub rho1: Vec<f64>,
    pub photon_density: f64,
    pub spin_density: f64,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
    pub degenerate_flag: bool,
}

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Column list for a lattice whose largest periodic distance is `x_max`.
pub fn csv_header(x_max: usize) -> String {
    let mut cols: Vec<String> = ["M", "N", "g_l", "g_r", "delta", "omega_c", "omega_z", "E0"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    cols.extend((0..=x_max).map(|x| format!("rho1_{x}")));
    cols.extend(
        ["photon_density", "spin_density", "iterations", "residual", "converged", "degenerate_flag"]
            .iter()
            .map(|s| s.to_string()),
    );
    cols.join(",")
}

impl ResultRow {
    pub fn to_csv(&self) -> String {
        let mut fields = vec![
            self.sites.to_string(),
            self.excitations.to_string(),
            float(self.g_l),
            float(self.g_r),
            float(self.delta),
            float(self.omega_c),
            float(self.omega_z),
            float(self.energy),
        ];
        fields.extend(self.rho1.iter().map(|&v| float(v)));
        fields.extend([
            float(self.photon_density),
            float(self.spin_density),
            self.iterations.to_string(),
            float(self.residual),
            self.converged.to_string(),
            self.degenerate_flag.to_string(),
        ]);
        fields.join(",")
    }

    pub fn rho1_at_max_distance(&self) -> f64 {
        *self.rho1.last().expect("rho1_0 always present")
    }
}

/// basis -> Hamiltonian -> Lanczos -> observables at one `(g_l, g_r, delta)`.
pub fn solve_point(
    basis: &SectorBasis,
    omega_c: f64,
    delta: f64,
    g_l: f64,
    g_r: f64,
    solver: &SolverOptions,
) -> Result<ResultRow, SweepError> {
    let params = ModelParams::from_detuning(omega_c, delta, g_l, g_r)?;
    let h = build_hamiltonian(&params, basis)?;
    let ground = lanczos_ground_state(&h, solver)?;
    let profile = rho1_profile(&ground, basis)?;
    let spec = basis.spec();
    Ok(ResultRow {
        sites: spec.sites(),
        excitations: spec.excitations(),
        g_l,
        g_r,
        delta,
        omega_c,
        omega_z: params.omega_z(),
        energy: ground.energy,
        rho1: profile.values,
        photon_density: profile.photon_density,
        spin_density: profile.spin_density,
        iterations: ground.iterations,
        residual: ground.residual,
        converged: ground.converged,
        degenerate_flag: profile.degenerate_flag,
    })
}

pub fn run_point(cfg: &SweepConfig, pair_index: usize, delta: f64) -> Result<ResultRow, SweepError> {
    let &(g_l, g_r) = cfg
        .coupling_pairs
        .get(pair_index)
        .ok_or(SweepError::PairIndex { index: pair_index, count: cfg.coupling_pairs.len() })?;
    let basis = enumerate_basis(cfg.lattice)?;
    solve_point(&basis, cfg.omega_c, delta, g_l, g_r, &cfg.solver)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepSummary {
    pub rows: usize,
    pub unconverged: usize,
}

/// Points in output order: pair-major, detuning-minor.
fn grid(cfg: &SweepConfig) -> Vec<(usize, f64)> {
    let deltas = cfg.deltas();
    (0..cfg.coupling_pairs.len())
        .flat_map(|p| deltas.iter().map(move |&d| (p, d)))
        .collect()
}

/// Runs every `(pair, delta)` point on `threads` workers and writes the CSV
/// to `out` in grid order. On the first failing point the rows before it are
/// kept, an `# error:` line is appended and the error is returned.
pub fn run_sweep<W: Write>(cfg: &SweepConfig, threads: usize, out: &mut W) -> Result<SweepSummary, SweepError> {
    if threads == 0 {
        return Err(SweepError::NoThreads);
    }
    let basis = enumerate_basis(cfg.lattice)?;
    let points = grid(cfg);
    writeln!(out, "{}", csv_header(cfg.lattice.max_distance()))?;

    let next = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);
    let (tx, rx) = mpsc::channel::<(usize, Result<ResultRow, SweepError>)>();
    let mut summary = SweepSummary { rows: 0, unconverged: 0 };

    std::thread::scope(|scope| {
        for _ in 0..threads.min(points.len().max(1)) {
            let tx = tx.clone();
            let (next, stop, basis, points) = (&next, &stop, &basis, &points);
            scope.spawn(move || loop {
                if stop.load(Ordering::Relaxed) {
                    break;
                }
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(pair, delta)) = points.get(k) else { break };
                let (g_l, g_r) = cfg.coupling_pairs[pair];
                let result = solve_point(basis, cfg.omega_c, delta, g_l, g_r, &cfg.solver);
                if tx.send((k, result)).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        let mut pending = BTreeMap::new();
        let mut emitted = 0;
        for (k, result) in rx {
            pending.insert(k, result);
            while let Some(result) = pending.remove(&emitted) {
                let (pair_index, delta) = points[emitted];
                match result {
                    Ok(row) => {
                        writeln!(out, "{}", row.to_csv())?;
                        summary.rows += 1;
                        summary.unconverged += usize::from(!row.converged);
                    }
                    Err(e) => {
                        stop.store(true, Ordering::Relaxed);
                        writeln!(out, "# error: pair {pair_index}, delta {delta}: {e}")?;
                        out.flush()?;
                        return Err(SweepError::Point { pair_index, delta, source: Box::new(e) });
                    }
                }
                emitted += 1;
            }
        }
        out.flush()?;
        Ok(summary)
    })
}

pub const ANALYTICS_HEADER: &str = "delta,delta_over_g,n,U,omega_p";

/// Nonlinearity table over `delta_over_g` (units of `g`) and `n = 1..=n_max`.
pub fn emit_analytics_table<W: Write>(
    omega_c: f64,
    g: f64,
    n_max: u32,
    delta_over_g: &GridSpec,
    out: &mut W,
) -> Result<usize, SweepError> {
    let ratios = delta_over_g.points();
    let deltas: Vec<f64> = ratios.iter().map(|r| r * g).collect();
    let rows = nonlinearity_table(omega_c, &deltas, g, n_max)?;
    writeln!(out, "{ANALYTICS_HEADER}")?;
    for (k, row) in rows.iter().enumerate() {
        let ratio = ratios[k / n_max as usize];
        writeln!(out, "{},{},{},{},{}", float(row.delta), float(ratio), row.n, float(row.u), float(row.omega_p))?;
    }
    out.flush()?;
    Ok(rows.len())
}

/// Sector size and Hamiltonian sparsity for `basis-info`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisInfo {
    pub sites: usize,
    pub excitations: usize,
    pub dimension: usize,
    pub nonzeros: usize,
}

pub fn basis_info(spec: LatticeSpec, g_l: f64, g_r: f64) -> Result<BasisInfo, SweepError> {
    let basis = enumerate_basis(spec)?;
    let params = ModelParams::new(crate::hamiltonian::DEFAULT_OMEGA_C, crate::hamiltonian::DEFAULT_OMEGA_C, g_l, g_r)?;
    let h = build_hamiltonian(&params, &basis)?;
    Ok(BasisInfo {
        sites: spec.sites(),
        excitations: spec.excitations(),
        dimension: basis.dimension(),
        nonzeros: h.nonzeros(),
    })
}
