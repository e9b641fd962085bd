//! Symmetric eigensolvers backed by LAPACK (`dsyevr`, `dstevr`) and the
//! vector kernels used by the Krylov solver.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix buffer holds {actual} entries, expected {expected}")]
    Shape { expected: usize, actual: usize },
    #[error("LAPACK eigensolver failed with info = {0}")]
    Lapack(i32),
}

/// Lowest eigenpairs of a dense symmetric matrix.
#[derive(Debug, Clone)]
pub struct Eigenpairs {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column-major, one column of length `n` per value.
    pub vectors: Vec<f64>,
    pub n: usize,
}

impl Eigenpairs {
    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k * self.n..(k + 1) * self.n]
    }
}

fn check(a: &[f64], n: usize) -> Result<(), LinalgError> {
    if a.len() != n * n {
        return Err(LinalgError::Shape { expected: n * n, actual: a.len() });
    }
    Ok(())
}

/// Full spectrum, ascending. Only the lower triangle of `a` is read.
pub fn symmetric_eigenvalues(a: &[f64], n: usize) -> Result<Vec<f64>, LinalgError> {
    check(a, n)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let (values, _) = dsyevr(a, n, false, n)?;
    Ok(values)
}

/// The `count` smallest eigenpairs (`count` is clamped to `n`).
pub fn lowest_eigenpairs(a: &[f64], n: usize, count: usize) -> Result<Eigenpairs, LinalgError> {
    check(a, n)?;
    let count = count.min(n);
    if count == 0 {
        return Ok(Eigenpairs { values: Vec::new(), vectors: Vec::new(), n });
    }
    let (values, vectors) = dsyevr(a, n, true, count)?;
    Ok(Eigenpairs { values, vectors, n })
}

fn dsyevr(a: &[f64], n: usize, want_vectors: bool, count: usize) -> Result<(Vec<f64>, Vec<f64>), LinalgError> {
    let mut work_a = a.to_vec();
    let ni = n as i32;
    let jobz = if want_vectors { b'V' } else { b'N' };
    let range = if count == n { b'A' } else { b'I' };
    let mut found = 0i32;
    let mut w = vec![0.0; n];
    let mut z = vec![0.0; if want_vectors { n * count } else { 1 }];
    let ldz = if want_vectors { ni } else { 1 };
    let mut isuppz = vec![0i32; 2 * count.max(1)];
    let mut info = 0i32;

    // workspace query
    let mut work_size = [0.0f64];
    let mut iwork_size = [0i32];
    unsafe {
        lapack::dsyevr(
            jobz, range, b'L', ni, &mut work_a, ni, 0.0, 0.0, 1, count as i32, 0.0, &mut found,
            &mut w, &mut z, ldz, &mut isuppz, &mut work_size, -1, &mut iwork_size, -1, &mut info,
        );
    }
    if info != 0 {
        return Err(LinalgError::Lapack(info));
    }
    let lwork = work_size[0] as i32;
    let liwork = iwork_size[0];
    let mut work = vec![0.0; lwork.max(1) as usize];
    let mut iwork = vec![0i32; liwork.max(1) as usize];
    unsafe {
        lapack::dsyevr(
            jobz, range, b'L', ni, &mut work_a, ni, 0.0, 0.0, 1, count as i32, 0.0, &mut found,
            &mut w, &mut z, ldz, &mut isuppz, &mut work, lwork, &mut iwork, liwork, &mut info,
        );
    }
    if info != 0 {
        return Err(LinalgError::Lapack(info));
    }
    w.truncate(found as usize);
    if want_vectors {
        z.truncate(n * found as usize);
    } else {
        z.clear();
    }
    Ok((w, z))
}

/// The `count` smallest eigenpairs of the symmetric tridiagonal matrix with
/// diagonal `diag` and sub-diagonal `off` (`off.len() == diag.len() - 1`).
pub fn tridiagonal_lowest_eigenpairs(
    diag: &[f64],
    off: &[f64],
    count: usize,
) -> Result<Eigenpairs, LinalgError> {
    let n = diag.len();
    if off.len() + 1 != n.max(1) {
        return Err(LinalgError::Shape { expected: n.saturating_sub(1), actual: off.len() });
    }
    let count = count.min(n);
    if count == 0 {
        return Ok(Eigenpairs { values: Vec::new(), vectors: Vec::new(), n });
    }
    let ni = n as i32;
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    let range = if count == n { b'A' } else { b'I' };
    let mut found = 0i32;
    let mut w = vec![0.0; n];
    let mut z = vec![0.0; n * n.max(count)];
    let mut isuppz = vec![0i32; 2 * n];
    let mut info = 0i32;
    let mut work_size = [0.0f64];
    let mut iwork_size = [0i32];
    unsafe {
        lapack::dstevr(
            b'V', range, ni, &mut d, &mut e, 0.0, 0.0, 1, count as i32, 0.0, &mut found, &mut w,
            &mut z, ni, &mut isuppz, &mut work_size, -1, &mut iwork_size, -1, &mut info,
        );
    }
    if info != 0 {
        return Err(LinalgError::Lapack(info));
    }
    let lwork = work_size[0] as i32;
    let liwork = iwork_size[0];
    let mut work = vec![0.0; lwork.max(1) as usize];
    let mut iwork = vec![0i32; liwork.max(1) as usize];
    unsafe {
        lapack::dstevr(
            b'V', range, ni, &mut d, &mut e, 0.0, 0.0, 1, count as i32, 0.0, &mut found, &mut w,
            &mut z, ni, &mut isuppz, &mut work, lwork, &mut iwork, liwork, &mut info,
        );
    }
    if info != 0 {
        return Err(LinalgError::Lapack(info));
    }
    w.truncate(found as usize);
    z.truncate(n * found as usize);
    Ok(Eigenpairs { values: w, vectors: z, n })
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    // four accumulators let the loop vectorize without reassociation flags
    let mut acc = [0.0f64; 4];
    let chunks_a = a.chunks_exact(4);
    let chunks_b = b.chunks_exact(4);
    let tail: f64 = chunks_a
        .remainder()
        .iter()
        .zip(chunks_b.remainder())
        .map(|(x, y)| x * y)
        .sum();
    for (x, y) in chunks_a.zip(chunks_b) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `y += alpha x`
#[inline]
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn scale(alpha: f64, x: &mut [f64]) {
    for xi in x {
        *xi *= alpha;
    }
}
