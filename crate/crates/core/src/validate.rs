//! Cross-check harness behind the `validate` subcommand.
//!
//! Each check compares a production code path against an oracle or a
//! symmetry and records inputs, expectation and outcome. A [`Mutation`]
//! injects a known defect so that tests can confirm the harness notices it.

use crate::analytics::{effective_u_with, hopping_element, VacuumReference};
use crate::basis::{enumerate_basis, LatticeSpec, SectorBasis};
use crate::eigensolver::{dense_ground_state, dense_spectrum, lanczos_ground_state, SolverOptions, DEFAULT_DENSE_CAP};
use crate::hamiltonian::{build_hamiltonian, ModelParams, SparseHamiltonian};
use crate::linalg::dot;
use crate::observables::{rho1_profile, total_excitation_expectation};
use crate::oracle::{hopping_element_tensor, single_excitation_spectrum};
use std::fmt;

/// Defects the harness can inject into its own model construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mutation {
    #[default]
    None,
    /// `g_l -> -g_l` in every Hamiltonian the harness builds.
    NegatedLeftCoupling,
    /// Empty-site energy `-w_c / 2` in the `U` formula.
    HalfCavityVacuum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub inputs: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} [{}] expected {} got {}", self.name, self.inputs, self.expected, self.actual)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Failed checks carrying `name`.
    pub fn failed(&self, name: &str) -> bool {
        self.failures().any(|c| c.name == name)
    }

    fn push(&mut self, name: &'static str, inputs: String, expected: String, actual: String, passed: bool) {
        self.checks.push(Check { name, inputs, expected, actual, passed });
    }

    /// Records an error from the pipeline itself as a failed check.
    fn error(&mut self, name: &'static str, inputs: String, err: impl fmt::Display) {
        self.push(name, inputs, "no error".into(), err.to_string(), false);
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.failures().count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

struct Harness {
    mutation: Mutation,
    solver: SolverOptions,
}

type Outcome<T> = Result<T, Box<dyn std::error::Error>>;

impl Harness {
    fn model(&self, omega_c: f64, delta: f64, g_l: f64, g_r: f64) -> Outcome<ModelParams> {
        let p = ModelParams::from_detuning(omega_c, delta, g_l, g_r)?;
        Ok(match self.mutation {
            Mutation::NegatedLeftCoupling => ModelParams::unchecked(p.omega_c(), p.omega_z(), -g_l, g_r),
            _ => p,
        })
    }

    fn hamiltonian(&self, basis: &SectorBasis, omega_c: f64, delta: f64, g_l: f64, g_r: f64) -> Outcome<SparseHamiltonian> {
        Ok(build_hamiltonian(&self.model(omega_c, delta, g_l, g_r)?, basis)?)
    }

    fn vacuum(&self) -> VacuumReference {
        match self.mutation {
            Mutation::HalfCavityVacuum => VacuumReference::HalfCavity,
            _ => VacuumReference::QubitDown,
        }
    }
}

fn basis(m: usize, n: usize) -> Outcome<SectorBasis> {
    Ok(enumerate_basis(LatticeSpec::new(m, n)?)?)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

const PARAM_SETS: [(f64, f64, f64); 4] = [(0.0, 150.0, 150.0), (-300.0, 50.0, 250.0), (220.0, 280.0, 20.0), (75.0, 0.0, 300.0)];

fn lanczos_vs_dense(h: &Harness, r: &mut Report) {
    for m in 2..=3 {
        for n in 1..=3 {
            for &(delta, gl, gr) in &PARAM_SETS {
                let inputs = format!("M={m} N={n} delta={delta} g_l={gl} g_r={gr}");
                let run = || -> Outcome<(f64, f64, f64, bool)> {
                    let b = basis(m, n)?;
                    let ham = h.hamiltonian(&b, 5000.0, delta, gl, gr)?;
                    let dense = dense_ground_state(&ham)?;
                    let lanczos = lanczos_ground_state(&ham, &h.solver)?;
                    let overlap = dot(&dense.vector, &lanczos.vector).abs();
                    Ok((dense.energy, lanczos.energy, overlap, dense.near_degenerate))
                };
                match run() {
                    Ok((ed, el, overlap, degenerate)) => {
                        let ok = rel(el, ed) <= 1e-8 && (degenerate || overlap >= 1.0 - 1e-8);
                        r.push(
                            "lanczos_vs_dense",
                            inputs,
                            format!("E0={ed:.12e} overlap>=1-1e-8"),
                            format!("E0={el:.12e} overlap={overlap:.12}"),
                            ok,
                        );
                    }
                    Err(e) => r.error("lanczos_vs_dense", inputs, e),
                }
            }
        }
    }
}

fn hopping_vs_tensor(r: &mut Report) {
    let g = 150.0;
    for ratio in [-3.0, -1.0, 0.0, 1.0, 3.0] {
        let mut worst = (0.0f64, 0, 0);
        let mut failure = None;
        for nl in 1..=5u32 {
            for nr in 1..=5u32 {
                match hopping_element(ratio * g, g, nl, nr) {
                    Ok(v) => {
                        let e = (v - hopping_element_tensor(ratio * g, g, nl as usize, nr as usize)).abs();
                        if e > worst.0 {
                            worst = (e, nl, nr);
                        }
                    }
                    Err(e) => failure = Some(e),
                }
            }
        }
        let inputs = format!("delta/g={ratio} g_r={g} n_left,n_right in 1..=5");
        match failure {
            Some(e) => r.error("hopping_vs_tensor", inputs, e),
            None => r.push(
                "hopping_vs_tensor",
                inputs,
                "max |diff| <= 1e-12".into(),
                format!("{:.3e} at ({}, {})", worst.0, worst.1, worst.2),
                worst.0 <= 1e-12,
            ),
        }
    }
}

fn reflection(h: &Harness, r: &mut Report) {
    for (m, n, delta, gl, gr) in [(3, 3, 0.0, 70.0, 230.0), (4, 4, -150.0, 25.0, 275.0), (5, 3, 200.0, 100.0, 200.0)] {
        let inputs = format!("M={m} N={n} delta={delta} (g_l, g_r)=({gl}, {gr})");
        let run = || -> Outcome<(f64, f64)> {
            let b = basis(m, n)?;
            let a = lanczos_ground_state(&h.hamiltonian(&b, 5000.0, delta, gl, gr)?, &h.solver)?;
            let c = lanczos_ground_state(&h.hamiltonian(&b, 5000.0, delta, gr, gl)?, &h.solver)?;
            Ok((a.energy, c.energy))
        };
        match run() {
            Ok((a, c)) => r.push(
                "reflection",
                inputs,
                format!("E0(g_r, g_l) = {a:.12e} within 1e-9 rel"),
                format!("{c:.12e}"),
                rel(c, a) <= 1e-9,
            ),
            Err(e) => r.error("reflection", inputs, e),
        }
    }
}

fn universality(h: &Harness, r: &mut Report) {
    let (m, n, delta, gl, gr) = (4, 4, -90.0, 60.0, 120.0);
    let inputs = format!("M={m} N={n} (delta, g_l, g_r)=({delta}, {gl}, {gr}) scaled by 2");
    let run = || -> Outcome<(f64, f64, f64)> {
        let b = basis(m, n)?;
        let p1 = h.model(5000.0, delta, gl, gr)?;
        let p2 = h.model(5000.0, 2.0 * delta, 2.0 * gl, 2.0 * gr)?;
        let g1 = dense_ground_state(&build_hamiltonian(&p1, &b)?)?;
        let g2 = dense_ground_state(&build_hamiltonian(&p2, &b)?)?;
        let e1 = g1.energy - p1.sector_offset(m, n);
        let e2 = g2.energy - p2.sector_offset(m, n);
        let (r1, r2) = (rho1_profile(&g1, &b)?, rho1_profile(&g2, &b)?);
        let drho = r1.values.iter().zip(&r2.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        Ok((2.0 * e1, e2, drho))
    };
    match run() {
        Ok((want, got, drho)) => r.push(
            "rescaling_universality",
            inputs,
            format!("E0-offset={want:.12e}, rho1 unchanged (1e-9)"),
            format!("E0-offset={got:.12e}, max |drho1|={drho:.3e}"),
            rel(got, want) <= 1e-9 && drho <= 1e-9,
        ),
        Err(e) => r.error("rescaling_universality", inputs, e),
    }
}

fn sector_offset(h: &Harness, r: &mut Report) {
    for (m, n) in [(3, 3), (4, 2)] {
        let (delta, gl, gr) = (150.0, 150.0, 150.0);
        let inputs = format!("M={m} N={n} delta={delta} omega_c 5000 -> 7000");
        let run = || -> Outcome<(f64, f64, f64)> {
            let b = basis(m, n)?;
            let a = dense_ground_state(&h.hamiltonian(&b, 5000.0, delta, gl, gr)?)?;
            let c = dense_ground_state(&h.hamiltonian(&b, 7000.0, delta, gl, gr)?)?;
            Ok((c.energy - a.energy, dot(&a.vector, &c.vector).abs(), 2000.0 * (n as f64 - 0.5 * m as f64)))
        };
        match run() {
            Ok((shift, overlap, want)) => r.push(
                "sector_offset",
                inputs,
                format!("shift={want} overlap=1"),
                format!("shift={shift:.12e} overlap={overlap:.15}"),
                (shift - want).abs() <= 1e-9 * want.abs().max(1.0) && overlap >= 1.0 - 1e-12,
            ),
            Err(e) => r.error("sector_offset", inputs, e),
        }
    }
}

fn u_asymptotes(h: &Harness, r: &mut Report) {
    let g = 150.0;
    let vacuum = h.vacuum();
    match effective_u_with(0.0, g, 1, vacuum) {
        Ok(u) => {
            let want = g * (2.0 - 2f64.sqrt());
            r.push("u_resonant", "delta=0 g=150 n=1".into(), format!("{want:.12}"), format!("{u:.12}"), (u - want).abs() <= 1e-9);
        }
        Err(e) => r.error("u_resonant", "delta=0 g=150 n=1".into(), e),
    }
    for n in 1..=10 {
        let inputs = format!("g={g} n={n} delta=+-20g");
        match (effective_u_with(20.0 * g, g, n, vacuum), effective_u_with(-20.0 * g, g, n, vacuum)) {
            (Ok(up), Ok(down)) => {
                let delta = 20.0 * g;
                let ok = (up * n as f64 - delta).abs() <= 0.05 * delta && down.abs() <= 0.05 * g;
                r.push(
                    "u_asymptotes",
                    inputs,
                    format!("U n ~ {delta} (5%), |U| <= {}", 0.05 * g),
                    format!("U n = {:.6}, U(-20g) = {down:.6}", up * n as f64),
                    ok,
                );
            }
            (Err(e), _) | (_, Err(e)) => r.error("u_asymptotes", inputs, e),
        }
    }
}

fn single_excitation(h: &Harness, r: &mut Report) {
    for (m, delta, gl, gr) in [(3, 40.0, 70.0, 230.0), (4, -100.0, 150.0, 150.0), (5, 0.0, 90.0, 10.0)] {
        let inputs = format!("M={m} N=1 delta={delta} g_l={gl} g_r={gr}");
        let run = || -> Outcome<f64> {
            let b = basis(m, 1)?;
            let spectrum = dense_spectrum(&h.hamiltonian(&b, 5000.0, delta, gl, gr)?, DEFAULT_DENSE_CAP)?;
            let bloch = single_excitation_spectrum(&ModelParams::from_detuning(5000.0, delta, gl, gr)?, m);
            Ok(spectrum.iter().zip(&bloch).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
        };
        match run() {
            Ok(err) => r.push("single_excitation_bloch", inputs, "max |dE| <= 1e-9".into(), format!("{err:.3e}"), err <= 1e-9),
            Err(e) => r.error("single_excitation_bloch", inputs, e),
        }
    }
}

fn structure(h: &Harness, r: &mut Report) {
    let (m, n) = (3, 3);
    let inputs = format!("M={m} N={n} delta=60 g_l=80 g_r=220");
    let run = || -> Outcome<(f64, f64)> {
        let b = basis(m, n)?;
        let ham = h.hamiltonian(&b, 5000.0, 60.0, 80.0, 220.0)?;
        let dim = ham.dimension();
        let dense = ham.to_dense();
        let asym = (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .map(|(i, j)| (dense[i * dim + j] - dense[j * dim + i]).abs())
            .fold(0.0, f64::max);
        let g = lanczos_ground_state(&ham, &h.solver)?;
        Ok((asym, total_excitation_expectation(&g.vector, &b)?))
    };
    match run() {
        Ok((asym, total)) => r.push(
            "hermiticity_and_closure",
            inputs,
            format!("H = H^T exactly, <N> = {n}"),
            format!("max |H - H^T| = {asym:e}, <N> = {total:.15}"),
            asym == 0.0 && (total - n as f64).abs() <= 1e-12,
        ),
        Err(e) => r.error("hermiticity_and_closure", inputs, e),
    }
}

pub fn validate() -> Report {
    validate_with(Mutation::None)
}

pub fn validate_with(mutation: Mutation) -> Report {
    let h = Harness { mutation, solver: SolverOptions { tolerance: 1e-12, ..SolverOptions::default() } };
    let mut r = Report::default();
    lanczos_vs_dense(&h, &mut r);
    hopping_vs_tensor(&mut r);
    reflection(&h, &mut r);
    universality(&h, &mut r);
    sector_offset(&h, &mut r);
    u_asymptotes(&h, &mut r);
    single_excitation(&h, &mut r);
    structure(&h, &mut r);
    r
}
