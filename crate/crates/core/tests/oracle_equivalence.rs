use jclattice::eigensolver::{lanczos_ground_state, SolverOptions};
use jclattice::linalg::dot;
use jclattice::observables::total_excitation_expectation;
use jclattice::{build_hamiltonian, dense_ground_state, enumerate_basis, LatticeSpec, ModelParams};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lanczos_matches_dense(
        m in 2usize..=5,
        n in 1usize..=4,
        delta in -450.0f64..450.0,
        gl in 0.0f64..300.0,
        gr in 0.0f64..300.0,
        seed in 0u64..1000,
    ) {
        let b = enumerate_basis(LatticeSpec::new(m, n).unwrap()).unwrap();
        prop_assume!(b.dimension() <= 1500);
        let h = build_hamiltonian(&ModelParams::from_detuning(5000.0, delta, gl, gr).unwrap(), &b).unwrap();
        let dense = dense_ground_state(&h).unwrap();
        let opts = SolverOptions { tolerance: 1e-11, seed, ..SolverOptions::default() };
        let lanczos = lanczos_ground_state(&h, &opts).unwrap();
        prop_assert!(lanczos.converged);
        prop_assert!((lanczos.energy - dense.energy).abs() <= 1e-8 * dense.energy.abs());
        if !dense.near_degenerate {
            prop_assert!(dot(&lanczos.vector, &dense.vector).abs() >= 1.0 - 1e-8);
        }
        let total = total_excitation_expectation(&lanczos.vector, &b).unwrap();
        prop_assert!((total - n as f64).abs() < 1e-12);
    }

    #[test]
    fn reflection_preserves_energy(
        m in 2usize..=5,
        n in 1usize..=3,
        delta in -450.0f64..450.0,
        gl in 0.0f64..300.0,
        gr in 0.0f64..300.0,
    ) {
        let b = enumerate_basis(LatticeSpec::new(m, n).unwrap()).unwrap();
        prop_assume!(b.dimension() <= 1500);
        let p = ModelParams::from_detuning(5000.0, delta, gl, gr).unwrap();
        let a = dense_ground_state(&build_hamiltonian(&p, &b).unwrap()).unwrap();
        let c = dense_ground_state(&build_hamiltonian(&p.reflected(), &b).unwrap()).unwrap();
        prop_assert!((a.energy - c.energy).abs() <= 1e-9 * a.energy.abs());
    }
}
