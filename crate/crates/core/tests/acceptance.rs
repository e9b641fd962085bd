//! Acceptance suite: one PASS/FAIL line per criterion, with the measured
//! values underneath. Exits nonzero if any criterion fails.
//!
//! Runs sequentially on one thread; the M = 8 sweeps dominate the runtime.

use jclattice::analytics::{effective_u, hopping_element};
use jclattice::basis::{enumerate_basis, sector_dimension, LatticeSpec, SectorBasis};
use jclattice::config::SweepConfig;
use jclattice::eigensolver::{lanczos_ground_state, SolverOptions};
use jclattice::hamiltonian::{build_hamiltonian, ModelParams};
use jclattice::linalg::dot;
use jclattice::observables::total_excitation_expectation;
use jclattice::oracle::hopping_element_tensor;
use jclattice::sweep::{solve_point, ResultRow};
use jclattice::dense_ground_state;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::time::Instant;

struct Verdict {
    pass: bool,
    lines: Vec<String>,
}

impl Verdict {
    fn new() -> Self {
        Self { pass: true, lines: Vec::new() }
    }

    fn check(&mut self, ok: bool, line: String) {
        self.pass &= ok;
        self.lines.push(format!("{} {line}", if ok { "ok  " } else { "MISS" }));
    }
}

/// Lattice, grid and solver settings of the bundled figure configs, and
/// memoized M = 8 detuning curves.
struct Lab {
    cfg: SweepConfig,
    basis: SectorBasis,
    curves: HashMap<(u64, u64, u64), Vec<ResultRow>>,
}

impl Lab {
    fn new() -> Self {
        let cfg = SweepConfig::load("fig3").expect("bundled config");
        let basis = enumerate_basis(cfg.lattice).unwrap();
        Self { cfg, basis, curves: HashMap::new() }
    }

    fn ratios(&self) -> Vec<f64> {
        self.cfg.delta_over_g0.points()
    }

    fn point(&self, g_l: f64, g_r: f64, delta: f64) -> ResultRow {
        solve_point(&self.basis, self.cfg.omega_c, delta, g_l, g_r, &self.cfg.solver).unwrap()
    }

    /// 61-point curve with detuning unit `unit`.
    fn curve(&mut self, g_l: f64, g_r: f64, unit: f64) -> &[ResultRow] {
        let key = (g_l.to_bits(), g_r.to_bits(), unit.to_bits());
        if !self.curves.contains_key(&key) {
            let rows = self.ratios().iter().map(|r| self.point(g_l, g_r, r * unit)).collect();
            self.curves.insert(key, rows);
        }
        &self.curves[&key]
    }
}

fn rho_max(rows: &[ResultRow]) -> Vec<f64> {
    rows.iter().map(ResultRow::rho1_at_max_distance).collect()
}

fn all_converged(v: &mut Verdict, rows: &[ResultRow], what: &str) {
    let bad = rows.iter().filter(|r| !r.converged).count();
    let worst = rows.iter().map(|r| r.residual / r.energy.abs()).fold(0.0, f64::max);
    v.check(bad == 0, format!("{what}: {} points converged, max relative residual {worst:.2e}", rows.len() - bad));
}

fn fig3_symmetric(lab: &mut Lab) -> Verdict {
    let mut v = Verdict::new();
    let g0 = lab.cfg.g0;
    let rows = lab.curve(150.0, 150.0, g0).to_vec();
    all_converged(&mut v, &rows, "g_l = g_r = 150");
    let rho = rho_max(&rows);
    let (lo, mid, hi) = (rho[0], rho[rho.len() / 2], rho[rho.len() - 1]);
    v.check(lo >= 0.95, format!("rho1(4) at delta/g0 = -3: {lo:.6} (need >= 0.95)"));
    v.check((mid - 0.75).abs() <= 0.05, format!("rho1(4) at delta = 0: {mid:.6} (need 0.75 +- 0.05)"));
    v.check(hi <= 0.10, format!("rho1(4) at delta/g0 = +3: {hi:.6} (need <= 0.10)"));
    let rises: Vec<usize> = (1..rho.len()).filter(|&k| rho[k] > rho[k - 1]).collect();
    v.check(rises.is_empty(), format!("non-increasing over {} points; increases at {rises:?}", rho.len()));
    v.lines.push(format!("     curve: {}", rho.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(" ")));
    v
}

fn fig3_universality(lab: &mut Lab) -> Verdict {
    let mut v = Verdict::new();
    let gs = [100.0, 150.0, 200.0];
    let curves: Vec<Vec<f64>> = gs
        .iter()
        .map(|&g| {
            let rows = lab.curve(g, g, g).to_vec();
            all_converged(&mut v, &rows, &format!("g = {g}"));
            rho_max(&rows)
        })
        .collect();
    let mut worst = (0.0f64, 0);
    for k in 0..curves[0].len() {
        let vals = curves.iter().map(|c| c[k]);
        let spread = vals.clone().fold(f64::MIN, f64::max) - vals.fold(f64::MAX, f64::min);
        if spread > worst.0 {
            worst = (spread, k);
        }
    }
    let ratios = lab.ratios();
    v.check(
        worst.0 <= 0.01,
        format!("max pointwise spread {:.3e} at delta/g = {:.1} (need <= 0.01)", worst.0, ratios[worst.1]),
    );
    let mid: Vec<f64> = curves.iter().map(|c| c[c.len() / 2]).collect();
    let spread = mid.iter().cloned().fold(f64::MIN, f64::max) - mid.iter().cloned().fold(f64::MAX, f64::min);
    v.check(spread <= 1e-6, format!("delta = 0 values {mid:.9?}, spread {spread:.3e} (need <= 1e-6)"));
    v
}

fn fig4_asymmetric(lab: &mut Lab) -> Verdict {
    let mut v = Verdict::new();
    let g0 = lab.cfg.g0;
    let fig4 = SweepConfig::load("fig4").unwrap();
    assert_eq!((fig4.lattice, fig4.solver, fig4.g0), (lab.cfg.lattice, lab.cfg.solver, lab.cfg.g0));
    for pair in [(5.0, 295.0), (50.0, 250.0), (0.0, 300.0)] {
        assert!(fig4.coupling_pairs.contains(&pair));
    }
    let weak = lab.curve(5.0, 295.0, g0).to_vec();
    all_converged(&mut v, &weak, "(5, 295)");
    let top = rho_max(&weak).into_iter().fold(f64::MIN, f64::max);
    v.check(top <= 0.1, format!("(5, 295): max rho1(4) over the grid {top:.6} (need <= 0.1)"));

    let row = lab.point(50.0, 250.0, -3.0 * g0);
    v.check(row.converged, format!("(50, 250) at delta/g0 = -3 converged, residual {:.2e}", row.residual));
    let r = row.rho1_at_max_distance();
    v.check(r > 0.8, format!("(50, 250): rho1(4) at delta/g0 = -3 {r:.6} (need > 0.8)"));

    let decoupled = lab.curve(0.0, 300.0, g0).to_vec();
    all_converged(&mut v, &decoupled, "(0, 300)");
    let leak = decoupled
        .iter()
        .flat_map(|row| row.rho1[1..].iter().map(|x| x.abs()))
        .fold(0.0, f64::max);
    v.check(leak <= 1e-10, format!("(0, 300): max |rho1(x > 0)| {leak:.3e} (need <= 1e-10)"));
    v
}

fn fig2_nonlinearity() -> Verdict {
    let mut v = Verdict::new();
    let cfg = SweepConfig::load("fig2").unwrap();
    let g = cfg.analytics.g;
    let u0 = effective_u(0.0, g, 1).unwrap();
    let exact = g * (2.0 - 2f64.sqrt());
    v.check((u0 - exact).abs() <= 1e-12 * exact, format!("U(0, {g}, 1) = {u0:.15} vs 150(2 - sqrt 2) = {exact:.15}"));

    let ratios = cfg.analytics.delta_over_g.points();
    let mut drops = Vec::new();
    for n in 1..=cfg.analytics.n_max {
        let us: Vec<f64> = ratios.iter().map(|r| effective_u(r * g, g, n).unwrap()).collect();
        if let Some(k) = (1..us.len()).find(|&k| us[k] < us[k - 1]) {
            drops.push((n, ratios[k]));
        }
    }
    v.check(drops.is_empty(), format!("U non-decreasing on {} detunings for n = 1..=10; drops {drops:?}", ratios.len()));

    let mut worst_pos = 0.0f64;
    let mut worst_neg = 0.0f64;
    for n in 1..=cfg.analytics.n_max {
        let delta = 20.0 * g;
        worst_pos = worst_pos.max((effective_u(delta, g, n).unwrap() * n as f64 - delta).abs() / delta);
        worst_neg = worst_neg.max(effective_u(-delta, g, n).unwrap().abs() / g);
    }
    v.check(worst_pos <= 0.05, format!("max |U n - delta| / delta at delta = +20g: {worst_pos:.4} (need <= 0.05)"));
    v.check(worst_neg <= 0.05, format!("max |U| / g at delta = -20g: {worst_neg:.4} (need <= 0.05)"));
    v
}

fn oracle_equivalence() -> Verdict {
    let mut v = Verdict::new();
    let cap = 4000u128;
    let sectors: Vec<(usize, usize)> = (2..=8)
        .flat_map(|m| (0..=8).map(move |n| (m, n)))
        .filter(|&(m, n)| sector_dimension(LatticeSpec::new(m, n).unwrap()).unwrap() <= cap)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let draws: Vec<(f64, f64, f64)> = (0..20)
        .map(|_| (rng.gen_range(-450.0..=450.0), rng.gen_range(0.0..=300.0), rng.gen_range(0.0..=300.0)))
        .collect();
    let opts = SolverOptions::default();
    let (mut worst_e, mut worst_o, mut degenerate, mut count) = (0.0f64, 0.0f64, 0, 0);
    let mut failures = Vec::new();
    for &(m, n) in &sectors {
        let basis = enumerate_basis(LatticeSpec::new(m, n).unwrap()).unwrap();
        for &(delta, gl, gr) in &draws {
            let h = build_hamiltonian(&ModelParams::from_detuning(5000.0, delta, gl, gr).unwrap(), &basis).unwrap();
            let dense = dense_ground_state(&h).unwrap();
            let lanczos = lanczos_ground_state(&h, &opts).unwrap();
            let de = (lanczos.energy - dense.energy).abs() / dense.energy.abs().max(1.0);
            worst_e = worst_e.max(de);
            let mut ok = de <= 1e-8 && lanczos.converged;
            if dense.near_degenerate {
                degenerate += 1;
            } else {
                let miss = (1.0 - dot(&dense.vector, &lanczos.vector).abs()).max(0.0);
                worst_o = worst_o.max(miss);
                ok &= miss <= 1e-8;
            }
            if !ok {
                failures.push((m, n, delta, gl, gr));
            }
            count += 1;
        }
    }
    let largest = sectors.iter().map(|&(m, n)| sector_dimension(LatticeSpec::new(m, n).unwrap()).unwrap()).max().unwrap();
    v.lines.push(format!(
        "     {} sectors (M = 2..=8, N = 0..=8, dimension <= 4000, largest {largest}) x 20 draws = {count} solves",
        sectors.len()
    ));
    v.check(worst_e <= 1e-8, format!("max relative energy difference {worst_e:.3e} (need <= 1e-8)"));
    v.check(worst_o <= 1e-8, format!("max 1 - |overlap| {worst_o:.3e} over non-degenerate cases (need <= 1e-8); {degenerate} near-degenerate skipped"));
    v.check(failures.is_empty(), format!("failing cases {failures:?}"));
    v
}

fn symmetry_suite(lab: &mut Lab) -> Verdict {
    let mut v = Verdict::new();
    let tight = SolverOptions { tolerance: 1e-12, ..lab.cfg.solver };
    let big = lab.cfg.lattice;

    // reflection
    for (m, n, delta, gl, gr) in [(8, 8, -150.0, 50.0, 250.0), (5, 5, 225.0, 25.0, 275.0), (3, 6, 0.0, 100.0, 200.0)] {
        let b = enumerate_basis(LatticeSpec::new(m, n).unwrap()).unwrap();
        let p = ModelParams::from_detuning(5000.0, delta, gl, gr).unwrap();
        let a = lanczos_ground_state(&build_hamiltonian(&p, &b).unwrap(), &tight).unwrap();
        let c = lanczos_ground_state(&build_hamiltonian(&p.reflected(), &b).unwrap(), &tight).unwrap();
        let d = (a.energy - c.energy).abs() / a.energy.abs();
        v.check(d <= 1e-9, format!("reflection M={m} N={n} ({gl}, {gr}) delta={delta}: relative dE {d:.2e} (need <= 1e-9)"));
    }

    // sector offset: w_c 5000 -> 7000 at fixed detuning
    let (m, n) = (big.sites(), big.excitations());
    let d_omega = 2000.0;
    let p1 = ModelParams::from_detuning(5000.0, 150.0, 150.0, 150.0).unwrap();
    let p2 = ModelParams::from_detuning(5000.0 + d_omega, 150.0, 150.0, 150.0).unwrap();
    let g1 = lanczos_ground_state(&build_hamiltonian(&p1, &lab.basis).unwrap(), &tight).unwrap();
    let g2 = lanczos_ground_state(&build_hamiltonian(&p2, &lab.basis).unwrap(), &tight).unwrap();
    let shift = g2.energy - g1.energy;
    let constant = p2.sector_offset(m, n) - p1.sector_offset(m, n);
    v.check(
        (shift - constant).abs() <= 1e-9 * g2.energy.abs(),
        format!(
            "sector offset M={m} N={n}: dE0 = {shift:.9} vs change of w_c N - M w_z / 2 = {constant} \
             (d w_c x N alone would be {})",
            d_omega * n as f64
        ),
    );
    let overlap = dot(&g1.vector, &g2.vector).abs().min(1.0);
    v.check(1.0 - overlap <= 1e-10, format!("sector offset: ground vectors overlap 1 - {:.2e} (need <= 1e-10)", 1.0 - overlap));
    for (m, n) in [(4, 4), (6, 3)] {
        let b = enumerate_basis(LatticeSpec::new(m, n).unwrap()).unwrap();
        let a = dense_ground_state(&build_hamiltonian(&p1, &b).unwrap()).unwrap();
        let c = dense_ground_state(&build_hamiltonian(&p2, &b).unwrap()).unwrap();
        let want = p2.sector_offset(m, n) - p1.sector_offset(m, n);
        let miss = (1.0 - dot(&a.vector, &c.vector).abs()).max(0.0);
        v.check(
            ((c.energy - a.energy) - want).abs() <= 1e-9 * c.energy.abs() && miss <= 1e-12,
            format!("sector offset dense M={m} N={n}: dE0 - {want} = {:.2e}, 1 - overlap {miss:.2e}", (c.energy - a.energy) - want),
        );
    }

    // total excitation number of the M = 8 ground state
    let total = total_excitation_expectation(&g1.vector, &lab.basis).unwrap();
    v.check((total - n as f64).abs() <= 1e-12, format!("<N> = {total:.15} for N = {n}"));

    // Hermiticity
    for (m, n) in [(2, 3), (3, 3), (4, 2), (5, 2)] {
        let b = enumerate_basis(LatticeSpec::new(m, n).unwrap()).unwrap();
        let h = build_hamiltonian(&ModelParams::from_detuning(5000.0, 37.0, 80.0, 220.0).unwrap(), &b).unwrap();
        let dim = h.dimension();
        let dense = h.to_dense();
        let mut asym = 0.0f64;
        let mut col_err = 0.0f64;
        for j in 0..dim {
            let mut e = vec![0.0; dim];
            e[j] = 1.0;
            let col = h.apply(&e).unwrap();
            for i in 0..dim {
                asym = asym.max((dense[i * dim + j] - dense[j * dim + i]).abs());
                col_err = col_err.max((col[i] - dense[i * dim + j]).abs());
            }
        }
        v.check(asym == 0.0 && col_err == 0.0, format!("Hermiticity M={m} N={n} (dim {dim}): max |H - H^T| = {asym:e}, matvec vs matrix {col_err:e}"));
    }
    v
}

fn hopping_equivalence() -> Verdict {
    let mut v = Verdict::new();
    let g = 150.0;
    let mut worst = 0.0f64;
    for ratio in [-3.0, -1.5, 0.0, 1.5, 3.0] {
        for nl in 1..=5u32 {
            for nr in 1..=5u32 {
                let a = hopping_element(ratio * g, g, nl, nr).unwrap();
                let b = hopping_element_tensor(ratio * g, g, nl as usize, nr as usize);
                worst = worst.max((a - b).abs());
            }
        }
    }
    v.check(worst <= 1e-12, format!("max |closed form - tensor oracle| {worst:.3e} over 125 cases (need <= 1e-12)"));
    v
}

fn main() {
    let start = Instant::now();
    let mut lab = Lab::new();
    let mut all_pass = true;
    let mut run = |name: &str, f: &mut dyn FnMut(&mut Lab) -> Verdict| {
        let t = Instant::now();
        let verdict = f(&mut lab);
        println!("{} {name} ({:.1}s)", if verdict.pass { "PASS" } else { "FAIL" }, t.elapsed().as_secs_f64());
        for line in &verdict.lines {
            println!("    {line}");
        }
        all_pass &= verdict.pass;
    };
    run("fig2 nonlinearity U(delta, n)", &mut |_| fig2_nonlinearity());
    run("hopping element vs tensor-product oracle", &mut |_| hopping_equivalence());
    run("lanczos vs dense oracle equivalence", &mut |_| oracle_equivalence());
    run("symmetry suite", &mut symmetry_suite);
    run("fig3 symmetric couplings M=8 N=8 g=150", &mut fig3_symmetric);
    run("fig3 universality g in {100, 150, 200}", &mut fig3_universality);
    run("fig4 asymmetric couplings M=8 N=8", &mut fig4_asymmetric);
    println!("acceptance finished in {:.0}s", start.elapsed().as_secs_f64());
    if !all_pass {
        std::process::exit(1);
    }
}
