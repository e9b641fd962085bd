//! Closed-form single-site Jaynes-Cummings theory.
//!
//! Within the `n`-excitation manifold `{|n, down>, |n-1, up>}` the local
//! Hamiltonian `w_c a^+a + (w_z/2) s^z + g (a^+ s^- + s^+ a)` splits into the
//! polariton doublet
//!
//! ```text
//! |n,+> = cos(d_n/2) |n,down> + sin(d_n/2) |n-1,up>
//! |n,-> = sin(d_n/2) |n,down> - cos(d_n/2) |n-1,up>
//! e_{n,+-} = (n - 1/2) w_c +- W_n / 2,   W_n = sqrt(D^2 + 4 g^2 n)
//! ```
//!
//! with `D = w_c - w_z`. The empty site `|0, down>` has energy `-w_z / 2`.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalyticsError {
    #[error("n = 0 has no polariton doublet")]
    NoDoublet,
    #[error("mixing angle undefined: zero Rabi frequency (detuning and coupling both vanish)")]
    ZeroRabi,
    #[error("hopping element needs n_left >= 1 and n_right >= 1 (got {n_left}, {n_right})")]
    OutOfDomain { n_left: u32, n_right: u32 },
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
}

/// Detuning `D` (MHz), onsite coupling `g` (MHz) and excitation number `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolaritonParams {
    pub delta: f64,
    pub g: f64,
    pub n: u32,
}

impl PolaritonParams {
    pub fn new(delta: f64, g: f64, n: u32) -> Result<Self, AnalyticsError> {
        if !(g.is_finite() && g >= 0.0) || !delta.is_finite() {
            return Err(AnalyticsError::InvalidParams(format!("delta = {delta}, g = {g}")));
        }
        Ok(Self { delta, g, n })
    }
}

/// `cos(d_n / 2)` and `sin(d_n / 2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingAngles {
    pub cos_half: f64,
    pub sin_half: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolaritonSpectrumRow {
    pub n: u32,
    pub rabi: f64,
    pub eps_plus: f64,
    pub eps_minus: f64,
    /// Lowest cost of putting `n` excitations on an empty site, `e_{n,-} - e_0`.
    pub gap: f64,
    pub cos_half: f64,
    pub sin_half: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlinearityRow {
    pub delta: f64,
    pub n: u32,
    /// Effective onsite interaction (MHz).
    pub u: f64,
    /// Single-polariton energy `e_{1,-} - e_0` (MHz).
    pub omega_p: f64,
}

/// Energy assigned to the empty site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub(crate) enum VacuumReference {
    /// `-w_z / 2`, the energy of `|0, down>`.
    #[default]
    QubitDown,
    /// `-w_c / 2`. Wrong for a detuned site; kept to check that the
    /// validation harness notices it.
    HalfCavity,
}

impl VacuumReference {
    fn energy(self, omega_c: f64, omega_z: f64) -> f64 {
        match self {
            Self::QubitDown => -0.5 * omega_z,
            Self::HalfCavity => -0.5 * omega_c,
        }
    }

    /// `w_c / 2 + e_0`, the only place the reference enters `U`.
    fn u_offset(self, delta: f64) -> f64 {
        match self {
            Self::QubitDown => 0.5 * delta,
            Self::HalfCavity => 0.0,
        }
    }
}

pub fn rabi_frequency(p: PolaritonParams) -> f64 {
    (p.delta * p.delta + 4.0 * p.g * p.g * f64::from(p.n)).sqrt()
}

/// Mixing amplitudes of the `n` doublet; `n = 0` maps to `(0, 1)` so that
/// `|0,->` is the empty site `|0, down>`.
pub fn mixing_angles(p: PolaritonParams) -> Result<MixingAngles, AnalyticsError> {
    if p.n == 0 {
        return Ok(MixingAngles { cos_half: 0.0, sin_half: 1.0 });
    }
    strict_mixing_angles(p)
}

/// As [`mixing_angles`] but without the empty-site convention.
pub fn strict_mixing_angles(p: PolaritonParams) -> Result<MixingAngles, AnalyticsError> {
    if p.n == 0 {
        return Err(AnalyticsError::NoDoublet);
    }
    let rabi = rabi_frequency(p);
    if rabi == 0.0 {
        return Err(AnalyticsError::ZeroRabi);
    }
    let ratio = (p.delta / rabi).clamp(-1.0, 1.0);
    Ok(MixingAngles {
        cos_half: (0.5 * (1.0 + ratio)).sqrt(),
        sin_half: (0.5 * (1.0 - ratio)).sqrt(),
    })
}

pub fn polariton_energies(
    omega_c: f64,
    omega_z: f64,
    g: f64,
    n: u32,
) -> Result<PolaritonSpectrumRow, AnalyticsError> {
    polariton_energies_with(omega_c, omega_z, g, n, VacuumReference::default())
}

fn polariton_energies_with(
    omega_c: f64,
    omega_z: f64,
    g: f64,
    n: u32,
    vacuum: VacuumReference,
) -> Result<PolaritonSpectrumRow, AnalyticsError> {
    if n == 0 {
        return Err(AnalyticsError::NoDoublet);
    }
    let p = PolaritonParams::new(omega_c - omega_z, g, n)?;
    let rabi = rabi_frequency(p);
    let centre = (f64::from(n) - 0.5) * omega_c;
    let eps_minus = centre - 0.5 * rabi;
    // at zero Rabi frequency both doublet states are degenerate; any split works
    let angles = strict_mixing_angles(p).unwrap_or(MixingAngles {
        cos_half: std::f64::consts::FRAC_1_SQRT_2,
        sin_half: std::f64::consts::FRAC_1_SQRT_2,
    });
    Ok(PolaritonSpectrumRow {
        n,
        rabi,
        eps_plus: centre + 0.5 * rabi,
        eps_minus,
        gap: eps_minus - vacuum.energy(omega_c, omega_z),
        cos_half: angles.cos_half,
        sin_half: angles.sin_half,
    })
}

/// Effective Hubbard `U` of the lower-polariton ladder at `n` excitations,
/// `U = (De_{n+1} - De_n - w_p) / n` with `w_p = De_1`. Independent of `w_c`:
/// `U = [D/2 + W_1/2 - (W_{n+1} - W_n)/2] / n`.
pub fn effective_u(delta: f64, g: f64, n: u32) -> Result<f64, AnalyticsError> {
    effective_u_with(delta, g, n, VacuumReference::default())
}

pub(crate) fn effective_u_with(
    delta: f64,
    g: f64,
    n: u32,
    vacuum: VacuumReference,
) -> Result<f64, AnalyticsError> {
    if n == 0 {
        return Err(AnalyticsError::NoDoublet);
    }
    let rabi = |k: u32| PolaritonParams::new(delta, g, k).map(rabi_frequency);
    let (w1, wn, wn1) = (rabi(1)?, rabi(n)?, rabi(n + 1)?);
    Ok((vacuum.u_offset(delta) + 0.5 * w1 - 0.5 * (wn1 - wn)) / f64::from(n))
}

/// `U` and `w_p` for one `(D, n)`; `w_p` needs the cavity frequency.
pub fn nonlinearity_row(omega_c: f64, delta: f64, g: f64, n: u32) -> Result<NonlinearityRow, AnalyticsError> {
    let u = effective_u(delta, g, n)?;
    let omega_p = polariton_energies(omega_c, omega_c - delta, g, 1)?.gap;
    Ok(NonlinearityRow { delta, n, u, omega_p })
}

/// Rows for every detuning in `delta_grid` (outer) and `n = 1..=n_max` (inner).
pub fn nonlinearity_table(
    omega_c: f64,
    delta_grid: &[f64],
    g: f64,
    n_max: u32,
) -> Result<Vec<NonlinearityRow>, AnalyticsError> {
    if n_max == 0 {
        return Err(AnalyticsError::InvalidParams("n_max must be at least 1".into()));
    }
    let mut rows = Vec::with_capacity(delta_grid.len() * n_max as usize);
    for &delta in delta_grid {
        for n in 1..=n_max {
            rows.push(nonlinearity_row(omega_c, delta, g, n)?);
        }
    }
    Ok(rows)
}

/// Amplitude `<B| s_i^+ a_{i-1} |A>` between the lower-polariton pairs
/// `|A> = |n_left,-> (x) |n_right,->` and `|B> = |n_left-1,-> (x) |n_right+1,->`
/// on cells `i-1` and `i`. Multiply by `g_l` for the hopping amplitude.
pub fn hopping_element(delta: f64, g_r: f64, n_left: u32, n_right: u32) -> Result<f64, AnalyticsError> {
    if n_left == 0 || n_right == 0 {
        return Err(AnalyticsError::OutOfDomain { n_left, n_right });
    }
    let angles = |n| PolaritonParams::new(delta, g_r, n).and_then(mixing_angles);
    let right = angles(n_right)?;
    let right_up = angles(n_right + 1)?;
    let left = angles(n_left)?;
    let left_down = angles(n_left - 1)?;
    let nl = f64::from(n_left);
    Ok(-right.sin_half
        * right_up.cos_half
        * (nl.sqrt() * left_down.sin_half * left.sin_half
            + (nl - 1.0).sqrt() * left_down.cos_half * left.cos_half))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    fn p(delta: f64, g: f64, n: u32) -> PolaritonParams {
        PolaritonParams::new(delta, g, n).unwrap()
    }

    #[test]
    fn rabi_examples() {
        assert_eq!(rabi_frequency(p(0.0, 150.0, 1)), 300.0);
        assert!((rabi_frequency(p(300.0, 150.0, 1)) - 180_000f64.sqrt()).abs() < 1e-12);
        assert!((rabi_frequency(p(300.0, 150.0, 1)) - 424.264).abs() < 1e-3);
        assert_eq!(rabi_frequency(p(-450.0, 0.0, 5)), 450.0);
    }

    #[test]
    fn mixing_examples() {
        let a = mixing_angles(p(0.0, 150.0, 1)).unwrap();
        assert!((a.cos_half - 1.0 / SQRT_2).abs() < 1e-15);
        assert!((a.sin_half - 1.0 / SQRT_2).abs() < 1e-15);
        let far = mixing_angles(p(1e6, 150.0, 1)).unwrap();
        assert!((far.cos_half - 1.0).abs() < 1e-6 && far.sin_half < 1e-3);
        for delta in [-700.0, 0.0, 33.0] {
            assert_eq!(
                mixing_angles(p(delta, 80.0, 0)).unwrap(),
                MixingAngles { cos_half: 0.0, sin_half: 1.0 }
            );
        }
        assert_eq!(strict_mixing_angles(p(0.0, 1.0, 0)), Err(AnalyticsError::NoDoublet));
        assert_eq!(strict_mixing_angles(p(0.0, 0.0, 2)), Err(AnalyticsError::ZeroRabi));
    }

    #[test]
    fn energy_examples() {
        let row = polariton_energies(5000.0, 5000.0, 150.0, 1).unwrap();
        assert_eq!(row.eps_plus, 2650.0);
        assert_eq!(row.eps_minus, 2350.0);
        assert_eq!(row.gap, 4850.0);
        let flat = polariton_energies(5000.0, 5000.0, 0.0, 2).unwrap();
        assert_eq!(flat.eps_plus, 7500.0);
        assert_eq!(flat.eps_minus, 7500.0);
        assert_eq!(polariton_energies(5000.0, 5000.0, 1.0, 0), Err(AnalyticsError::NoDoublet));
    }

    #[test]
    fn u_closed_forms() {
        let u1 = effective_u(0.0, 150.0, 1).unwrap();
        assert!((u1 - 150.0 * (2.0 - SQRT_2)).abs() < 1e-12);
        assert!((u1 - 87.868).abs() < 1e-3);
        let u4 = effective_u(0.0, 150.0, 4).unwrap();
        assert!((u4 - 150.0 * (3.0 - 5f64.sqrt()) / 4.0).abs() < 1e-12);
        assert!((u4 - 28.647).abs() < 1e-3);
        // -1500 + W_1/2 - (W_2 - W_1)/2 with W_k = sqrt(9e6 + 90000 k)
        let u_neg = effective_u(-3000.0, 150.0, 1).unwrap();
        assert!((u_neg - 0.0370).abs() < 5e-4, "{u_neg}");
    }

    #[test]
    fn u_matches_energy_differences() {
        // reduced formula against the definition evaluated on the spectrum
        let (wc, g) = (5000.0, 150.0);
        for delta in [-400.0, -75.0, 0.0, 220.0] {
            let wz = wc - delta;
            let cost = |n| polariton_energies(wc, wz, g, n).unwrap().gap;
            for n in 1..6 {
                let direct = (cost(n + 1) - cost(n) - cost(1)) / f64::from(n);
                let reduced = effective_u(delta, g, n).unwrap();
                assert!((direct - reduced).abs() < 1e-9, "delta={delta} n={n}");
            }
        }
    }

    #[test]
    fn table_shape() {
        let grid = [-450.0, 0.0, 450.0];
        let rows = nonlinearity_table(5000.0, &grid, 150.0, 10).unwrap();
        assert_eq!(rows.len(), 30);
        assert_eq!((rows[10].delta, rows[10].n), (0.0, 1));
        assert!(rows.iter().all(|r| (r.omega_p - polariton_energies(5000.0, 5000.0 - r.delta, 150.0, 1).unwrap().gap).abs() < 1e-9));
        assert!(nonlinearity_table(5000.0, &grid, 150.0, 0).is_err());
    }

    #[test]
    fn hopping_examples() {
        let a = hopping_element(0.0, 150.0, 1, 1).unwrap();
        assert!((a + 1.0 / (2.0 * SQRT_2)).abs() < 1e-15);
        let b = hopping_element(0.0, 37.0, 2, 1).unwrap();
        assert!((b + (SQRT_2 + 1.0) / 4.0).abs() < 1e-15);
        assert!(hopping_element(1e6, 150.0, 1, 1).unwrap().abs() < 1e-3);
        assert_eq!(
            hopping_element(0.0, 1.0, 0, 2),
            Err(AnalyticsError::OutOfDomain { n_left: 0, n_right: 2 })
        );
    }

    #[test]
    fn wrong_vacuum_halves_the_large_detuning_limit() {
        let g = 150.0;
        let delta = 20.0 * g;
        let good = effective_u_with(delta, g, 2, VacuumReference::QubitDown).unwrap();
        let bad = effective_u_with(delta, g, 2, VacuumReference::HalfCavity).unwrap();
        assert!((good - delta / 2.0).abs() < 0.05 * delta / 2.0);
        assert!((bad - delta / 4.0).abs() < 0.05 * delta / 4.0);
    }
}
