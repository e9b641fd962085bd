// The dense oracle and the Rayleigh-Ritz step call LAPACK through `lapack-sys`,
// which expects the provider to be linked by the final artifact.
fn main() {
    let lib = std::env::var("JCLATTICE_LAPACK_LIB").unwrap_or_else(|_| "openblas".to_string());
    println!("cargo:rerun-if-env-changed=JCLATTICE_LAPACK_LIB");
    println!("cargo:rustc-link-lib={lib}");
}
