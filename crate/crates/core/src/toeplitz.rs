//! Finite Toeplitz truncations of a dephasing symbol and their spectra.
//!
//! The level-`d` truncation of a density `p` is the `d x d` matrix
//! `T[h, k] = c_{h-k}`, the Fourier coefficients of `p`; products of
//! densities produce Kronecker products of truncations, flattened row-major
//! with the first mode slowest.  Because `p >= 0`, every truncation is a
//! moment matrix and hence positive semidefinite with unit diagonal.
//!
//! Spectra come from a dependency-free cyclic Jacobi eigensolver: real
//! symmetric matrices are handled directly, complex Hermitian ones through
//! the standard real embedding `[[A, -B], [B, A]]`, whose spectrum doubles
//! that of `A + iB`.  Szego-style spectral averages `(1/D) sum F(lambda)`
//! are what finite-size capacity formulas consume.

use num_complex::Complex64;
use thiserror::Error;

use crate::circular::CircularDensity;

/// Largest total dimension [`build_truncation`] accepts.
pub const DEFAULT_DIM_CAP: usize = 4096;

/// Off-diagonal Frobenius mass, relative to the full Frobenius norm, at
/// which the eigensolver declares convergence.
const JACOBI_REL_TOL: f64 = 1e-12;

/// Sweep budget for the eigensolver; cyclic Jacobi at these sizes needs
/// around ten.
const JACOBI_MAX_SWEEPS: usize = 30;

/// Entrywise Hermiticity tolerance required of eigensolver input.
const HERMITICITY_TOL: f64 = 1e-12;

/// Eigenvalues of a PSD matrix may land this far below zero before the
/// spectral functionals refuse them; anything in `[-1e-9, 0)` is treated
/// as an exact zero.
const EIGENVALUE_CLIP: f64 = -1e-9;

#[derive(Debug, Error)]
pub enum ToeplitzError {
    #[error("truncation dims {got:?} do not match the density's {want} mode(s)")]
    DimsMismatch { got: Vec<usize>, want: usize },
    #[error("every truncation dimension must be positive")]
    ZeroDim,
    #[error("total dimension {requested} exceeds the cap {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("matrix storage holds {len} entries, not a {dim}x{dim} square")]
    BadShape { len: usize, dim: usize },
    #[error(
        "matrix is not Hermitian: entry ({row}, {col}) deviates from its mirror by {deviation:e}"
    )]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },
    #[error("eigensolver failed to converge: off-diagonal mass {off_norm:e} after {sweeps} sweeps")]
    NoConvergence { off_norm: f64, sweeps: usize },
    #[error("eigenvalue {0:e} is too negative for a spectral functional on a PSD matrix")]
    NegativeEigenvalue(f64),
    #[error("failed to write matrix: {0}")]
    Io(#[from] std::io::Error),
}

/// Dense truncation of a dephasing symbol, stored row-major.
#[derive(Debug, Clone)]
pub struct ToeplitzTruncation {
    dims: Vec<usize>,
    total_dim: usize,
    entries: Vec<Complex64>,
}

/// Spectrum of a Hermitian matrix as the capacity formulas consume it.
#[derive(Debug, Clone)]
pub struct SpectralResult {
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Smallest eigenvalue, for PSD diagnostics.
    pub min_eig: f64,
    /// `|sum of eigenvalues - trace|`; for truncations the trace is the
    /// total dimension, so this measures how much spectral mass the solver
    /// lost.
    pub trace_residual: f64,
}

/// Outcome of a PSD check on a truncation.
#[derive(Debug, Clone, Copy)]
pub struct PsdReport {
    pub is_psd: bool,
    pub min_eig: f64,
}

/// Spectral functional to average over eigenvalues.
pub enum SzegoFunction<'a> {
    /// `lambda -> lambda * log2(lambda)`, the von Neumann kernel.
    XLog2X,
    /// `lambda -> lambda^alpha`, the Renyi kernel.
    Power(f64),
    /// Arbitrary kernel; eigenvalues are passed through unclipped.
    Custom(&'a dyn Fn(f64) -> f64),
}

/// Build the level-`dims` truncation of a density, one dimension per mode.
pub fn build_truncation(
    density: &CircularDensity,
    dims: &[usize],
) -> Result<ToeplitzTruncation, ToeplitzError> {
    if dims.len() != density.modes() {
        return Err(ToeplitzError::DimsMismatch {
            got: dims.to_vec(),
            want: density.modes(),
        });
    }
    if dims.contains(&0) {
        return Err(ToeplitzError::ZeroDim);
    }
    let total_dim: usize = dims.iter().product();
    if total_dim > DEFAULT_DIM_CAP {
        return Err(ToeplitzError::CapExceeded {
            requested: total_dim,
            cap: DEFAULT_DIM_CAP,
        });
    }
    let m = dims.len();
    let mut entries = vec![Complex64::new(0.0, 0.0); total_dim * total_dim];
    let mut freq = vec![0i64; m];
    let mut row_idx = vec![0usize; m];
    let mut col_idx = vec![0usize; m];
    for row in 0..total_dim {
        decode(row, dims, &mut row_idx);
        for col in 0..total_dim {
            decode(col, dims, &mut col_idx);
            entries[row * total_dim + col] = if row == col {
                Complex64::new(1.0, 0.0)
            } else {
                for axis in 0..m {
                    freq[axis] = row_idx[axis] as i64 - col_idx[axis] as i64;
                }
                density.fourier_coeff(&freq)
            };
        }
    }
    Ok(ToeplitzTruncation {
        dims: dims.to_vec(),
        total_dim,
        entries,
    })
}

/// Row-major multi-index decode, first axis slowest (Kronecker order).
fn decode(flat: usize, dims: &[usize], out: &mut [usize]) {
    let mut rest = flat;
    for axis in (0..dims.len()).rev() {
        out[axis] = rest % dims[axis];
        rest /= dims[axis];
    }
}

impl ToeplitzTruncation {
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.total_dim + col]
    }

    pub fn spectrum(&self) -> Result<SpectralResult, ToeplitzError> {
        eigvals_hermitian(&self.entries, self.total_dim)
    }

    /// Matrix as CSV: a `dim=<D>` preamble, then one row per line with
    /// alternating real and imaginary parts, at round-trip precision.
    pub fn to_csv_string(&self) -> String {
        matrix_csv(&self.entries, self.total_dim)
    }

    pub fn write_csv(&self, path: &std::path::Path) -> Result<(), ToeplitzError> {
        std::fs::write(path, self.to_csv_string())?;
        Ok(())
    }
}

pub(crate) fn matrix_csv(entries: &[Complex64], dim: usize) -> String {
    let mut out = format!("dim={dim}\n");
    for row in 0..dim {
        let mut fields = Vec::with_capacity(2 * dim);
        for col in 0..dim {
            let z = entries[row * dim + col];
            fields.push(format!("{:e}", z.re));
            fields.push(format!("{:e}", z.im));
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Eigenvalues of a dense Hermitian matrix (row-major, `dim x dim`).
///
/// The input must be Hermitian to `1e-12` entrywise.  Matrices whose
/// imaginary parts are identically zero use the real path directly; others
/// go through the real embedding of twice the size.
pub fn eigvals_hermitian(
    entries: &[Complex64],
    dim: usize,
) -> Result<SpectralResult, ToeplitzError> {
    if entries.len() != dim * dim || dim == 0 {
        return Err(ToeplitzError::BadShape {
            len: entries.len(),
            dim,
        });
    }
    for row in 0..dim {
        for col in row..dim {
            let dev = (entries[row * dim + col] - entries[col * dim + row].conj()).norm();
            if dev > HERMITICITY_TOL {
                return Err(ToeplitzError::NotHermitian {
                    row,
                    col,
                    deviation: dev,
                });
            }
        }
    }
    let trace: f64 = (0..dim).map(|i| entries[i * dim + i].re).sum();
    let all_real = entries.iter().all(|z| z.im == 0.0);
    let mut eigenvalues = if all_real {
        let mut a: Vec<f64> = entries.iter().map(|z| z.re).collect();
        symmetrize(&mut a, dim);
        jacobi_real(&mut a, dim)?;
        let mut eigs: Vec<f64> = (0..dim).map(|i| a[i * dim + i]).collect();
        eigs.sort_unstable_by(f64::total_cmp);
        eigs
    } else {
        let n2 = 2 * dim;
        let mut a = vec![0.0f64; n2 * n2];
        for row in 0..dim {
            for col in 0..dim {
                let z = entries[row * dim + col];
                a[row * n2 + col] = z.re;
                a[row * n2 + (col + dim)] = -z.im;
                a[(row + dim) * n2 + col] = z.im;
                a[(row + dim) * n2 + (col + dim)] = z.re;
            }
        }
        symmetrize(&mut a, n2);
        jacobi_real(&mut a, n2)?;
        let mut eigs: Vec<f64> = (0..n2).map(|i| a[i * n2 + i]).collect();
        eigs.sort_unstable_by(f64::total_cmp);
        // The embedding doubles every eigenvalue; keep one of each pair.
        eigs.into_iter().step_by(2).collect()
    };
    eigenvalues.sort_unstable_by(f64::total_cmp);
    let min_eig = eigenvalues.first().copied().unwrap_or(0.0);
    let sum: f64 = eigenvalues.iter().sum();
    Ok(SpectralResult {
        min_eig,
        trace_residual: (sum - trace).abs(),
        eigenvalues,
    })
}

/// Average the Hermiticity slack into the strictly symmetric matrix Jacobi
/// expects; deviations were already bounded by the entry check.
fn symmetrize(a: &mut [f64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            let mean = 0.5 * (a[i * n + j] + a[j * n + i]);
            a[i * n + j] = mean;
            a[j * n + i] = mean;
        }
    }
}

fn off_diag_norm(a: &[f64], n: usize) -> f64 {
    let mut off = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            off += 2.0 * a[i * n + j] * a[i * n + j];
        }
    }
    off.sqrt()
}

/// Cyclic Jacobi on a symmetric matrix, in place; on success the diagonal
/// carries the eigenvalues.
fn jacobi_real(a: &mut [f64], n: usize) -> Result<(), ToeplitzError> {
    let frob: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if frob == 0.0 || n == 1 {
        return Ok(());
    }
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off = off_diag_norm(a, n);
        if off <= JACOBI_REL_TOL * frob {
            return Ok(());
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                if apq.abs() <= 1e-18 * (app.abs() + aqq.abs() + f64::MIN_POSITIVE) {
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let new_kp = c * akp - s * akq;
                    let new_kq = s * akp + c * akq;
                    a[k * n + p] = new_kp;
                    a[p * n + k] = new_kp;
                    a[k * n + q] = new_kq;
                    a[q * n + k] = new_kq;
                }
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
    }
    let off = off_diag_norm(a, n);
    if off <= JACOBI_REL_TOL * frob {
        Ok(())
    } else {
        Err(ToeplitzError::NoConvergence {
            off_norm: off,
            sweeps: JACOBI_MAX_SWEEPS,
        })
    }
}

/// `(1/D) sum_j F(lambda_j)` over the spectrum of a truncation.
pub fn szego_functional(
    trunc: &ToeplitzTruncation,
    function: &SzegoFunction,
) -> Result<f64, ToeplitzError> {
    let spectrum = trunc.spectrum()?;
    spectral_average(&spectrum.eigenvalues, function)
}

/// The same spectral average when the eigenvalues are already in hand,
/// so one factorisation can serve several functionals.
pub fn spectral_average(
    eigenvalues: &[f64],
    function: &SzegoFunction,
) -> Result<f64, ToeplitzError> {
    let d = eigenvalues.len() as f64;
    let mut sum = 0.0;
    for &raw in eigenvalues {
        let lambda = match function {
            SzegoFunction::Custom(_) => raw,
            _ => {
                if raw < EIGENVALUE_CLIP {
                    return Err(ToeplitzError::NegativeEigenvalue(raw));
                }
                raw.max(0.0)
            }
        };
        sum += match function {
            SzegoFunction::XLog2X => crate::specfun::xlog2x(lambda),
            SzegoFunction::Power(alpha) => {
                if lambda == 0.0 {
                    0.0
                } else {
                    lambda.powf(*alpha)
                }
            }
            SzegoFunction::Custom(f) => f(lambda),
        };
    }
    Ok(sum / d)
}

/// Check a truncation for positive semidefiniteness within `tol`.
pub fn validate_psd(trunc: &ToeplitzTruncation, tol: f64) -> Result<PsdReport, ToeplitzError> {
    let spectrum = trunc.spectrum()?;
    Ok(PsdReport {
        is_psd: spectrum.min_eig >= -tol.abs(),
        min_eig: spectrum.min_eig,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circular::CircularDensity;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    fn wc_half() -> CircularDensity {
        // e^{-sqrt(kappa)} = 1/2, so the symbol coefficients are 2^{-|k|}.
        let ln2 = std::f64::consts::LN_2;
        CircularDensity::wrapped_cauchy(ln2 * ln2).unwrap()
    }

    #[test]
    fn truncation_has_unit_diagonal_and_symbol_entries() {
        let d = CircularDensity::wrapped_normal(0.7).unwrap();
        let t = build_truncation(&d, &[6]).unwrap();
        assert_eq!(t.total_dim(), 6);
        for i in 0..6 {
            assert_eq!(t.entry(i, i), num_complex::Complex64::new(1.0, 0.0));
        }
        for i in 0..6 {
            for j in 0..6 {
                let want = d.fourier_coeff(&[i as i64 - j as i64]);
                if i != j {
                    assert_eq!(t.entry(i, j), want);
                }
            }
        }
    }

    #[test]
    fn truncation_validates_input() {
        let d = CircularDensity::wrapped_normal(1.0).unwrap();
        assert!(matches!(
            build_truncation(&d, &[4, 4]),
            Err(ToeplitzError::DimsMismatch { .. })
        ));
        assert!(matches!(
            build_truncation(&d, &[0]),
            Err(ToeplitzError::ZeroDim)
        ));
        assert!(matches!(
            build_truncation(&d, &[DEFAULT_DIM_CAP + 1]),
            Err(ToeplitzError::CapExceeded { .. })
        ));
        assert!(build_truncation(&d, &[DEFAULT_DIM_CAP / 1024]).is_ok());
    }

    #[test]
    fn two_by_two_spectrum_is_analytic() {
        let d = CircularDensity::wrapped_cauchy(1.0).unwrap();
        let t = build_truncation(&d, &[2]).unwrap();
        let s = t.spectrum().unwrap();
        let c1 = (-1.0f64).exp();
        assert_relative_eq!(s.eigenvalues[0], 1.0 - c1, max_relative = 1e-12);
        assert_relative_eq!(s.eigenvalues[1], 1.0 + c1, max_relative = 1e-12);
        assert!(s.trace_residual <= 1e-8 * 2.0);

        // Coefficient 1/2 makes the 2x2 average of x log2 x exactly
        // (xlog2x(1/2) + xlog2x(3/2)) / 2.
        let t = build_truncation(&wc_half(), &[2]).unwrap();
        let avg = szego_functional(&t, &SzegoFunction::XLog2X).unwrap();
        assert_relative_eq!(avg, 0.18872187554086717, max_relative = 1e-12);
    }

    #[test]
    fn three_by_three_spectrum_is_analytic() {
        // Coefficients 2^{-|k|}: eigenvalues are 1 - t^2 and
        // 1 + t^2/2 +- t sqrt(t^2/4 + 2) with t = 1/2.
        let t = build_truncation(&wc_half(), &[3]).unwrap();
        let s = t.spectrum().unwrap();
        let tt: f64 = 0.5;
        let mid = 1.0 - tt * tt;
        let root = (tt * tt / 4.0 + 2.0).sqrt();
        let lo = 1.0 + tt * tt / 2.0 - tt * root;
        let hi = 1.0 + tt * tt / 2.0 + tt * root;
        assert_relative_eq!(s.eigenvalues[0], lo, max_relative = 1e-12);
        assert_relative_eq!(s.eigenvalues[1], mid, max_relative = 1e-12);
        assert_relative_eq!(s.eigenvalues[2], hi, max_relative = 1e-12);
    }

    #[test]
    fn complex_hermitian_matches_characteristic_polynomial() {
        // An off-centre tabulated density gives a genuinely complex symbol.
        let n = 64;
        let h = std::f64::consts::TAU / n as f64;
        let grid: Vec<f64> = (0..n)
            .map(|j| -std::f64::consts::PI + h * j as f64)
            .collect();
        let base = CircularDensity::von_mises(0.8).unwrap();
        let values: Vec<f64> = grid
            .iter()
            .map(|&g| {
                let mut shifted = g - 0.7;
                if shifted < -std::f64::consts::PI {
                    shifted += std::f64::consts::TAU;
                }
                base.pdf(&[shifted]).unwrap()
            })
            .collect();
        let density = CircularDensity::tabulated(grid, values).unwrap();
        let t = build_truncation(&density, &[3]).unwrap();
        assert!(t.entries().iter().any(|z| z.im != 0.0));
        let s = t.spectrum().unwrap();

        // Newton's identities from power sums give the characteristic
        // polynomial without any eigensolver.
        let dim = 3;
        let s1 = 3.0;
        let mut s2 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                s2 += (t.entry(i, j) * t.entry(j, i)).re;
            }
        }
        let mut s3 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    s3 += (t.entry(i, j) * t.entry(j, k) * t.entry(k, i)).re;
                }
            }
        }
        let e1 = s1;
        let e2 = (s1 * s1 - s2) / 2.0;
        let e3 = (s1 * s1 * s1 - 3.0 * s1 * s2 + 2.0 * s3) / 6.0;
        for &lambda in &s.eigenvalues {
            let p = lambda.powi(3) - e1 * lambda.powi(2) + e2 * lambda - e3;
            assert_abs_diff_eq!(p, 0.0, epsilon = 1e-10);
        }
        assert_relative_eq!(s.eigenvalues.iter().sum::<f64>(), 3.0, max_relative = 1e-12);
    }

    #[test]
    fn product_truncation_is_kronecker_of_factors() {
        let a = CircularDensity::wrapped_cauchy(1.0).unwrap();
        let b = CircularDensity::von_mises(1.5).unwrap();
        let prod = CircularDensity::product(vec![a.clone(), b.clone()]).unwrap();
        let ta = build_truncation(&a, &[4]).unwrap();
        let tb = build_truncation(&b, &[3]).unwrap();
        let tp = build_truncation(&prod, &[4, 3]).unwrap();
        assert_eq!(tp.total_dim(), 12);
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..3 {
                    for l in 0..3 {
                        let want = ta.entry(i, j) * tb.entry(k, l);
                        let got = tp.entry(i * 3 + k, j * 3 + l);
                        assert_abs_diff_eq!(got.re, want.re, epsilon = 1e-15);
                        assert_abs_diff_eq!(got.im, want.im, epsilon = 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn truncations_are_psd_with_tiny_trace_residual() {
        for density in [
            CircularDensity::wrapped_normal(0.3).unwrap(),
            CircularDensity::von_mises(1.0).unwrap(),
            CircularDensity::wrapped_cauchy(0.5).unwrap(),
        ] {
            for &d in &[2usize, 8, 32, 128] {
                let t = build_truncation(&density, &[d]).unwrap();
                let report = validate_psd(&t, 1e-9).unwrap();
                assert!(report.is_psd, "d={d}: min eig {}", report.min_eig);
                let s = t.spectrum().unwrap();
                assert!(s.trace_residual <= 1e-8 * d as f64);
            }
        }
    }

    #[test]
    fn eigensolver_rejects_bad_matrices() {
        let bad = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.2, 0.0),
            Complex64::new(1.0, 0.0),
        ];
        assert!(matches!(
            eigvals_hermitian(&bad, 2),
            Err(ToeplitzError::NotHermitian { .. })
        ));
        assert!(matches!(
            eigvals_hermitian(&bad, 3),
            Err(ToeplitzError::BadShape { .. })
        ));
    }

    #[test]
    fn spectral_average_clips_and_rejects() {
        let avg = spectral_average(&[-1e-10, 1.0, 2.0], &SzegoFunction::XLog2X).unwrap();
        assert_relative_eq!(avg, 2.0 / 3.0, max_relative = 1e-12);
        assert!(matches!(
            spectral_average(&[-1e-6, 1.0], &SzegoFunction::XLog2X),
            Err(ToeplitzError::NegativeEigenvalue(_))
        ));
        let custom = SzegoFunction::Custom(&|x| x - 1.0);
        let avg = spectral_average(&[-1e-6, 1.0], &custom).unwrap();
        assert_relative_eq!(avg, (-1.000001 + 0.0) / 2.0, max_relative = 1e-9);
        let power = spectral_average(&[0.5, 1.5], &SzegoFunction::Power(2.0)).unwrap();
        assert_relative_eq!(power, (0.25 + 2.25) / 2.0, max_relative = 1e-14);
    }

    #[test]
    fn csv_dump_has_preamble_and_full_rows() {
        let t = build_truncation(&wc_half(), &[3]).unwrap();
        let csv = t.to_csv_string();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("dim=3"));
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), 3);
        for row in rows {
            assert_eq!(row.split(',').count(), 6);
        }
        // Entries must round-trip through the printed representation.
        let first_off: f64 = csv
            .lines()
            .nth(1)
            .unwrap()
            .split(',')
            .nth(2)
            .unwrap()
            .parse()
            .unwrap();
        assert_eq!(first_off, 0.5);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn jacobi_preserves_trace_and_frobenius(seed in proptest::collection::vec(-1.0f64..1.0, 21)) {
            // Build a random 6x6 real symmetric matrix from 21 free entries.
            let n = 6;
            let mut m = vec![Complex64::new(0.0, 0.0); n * n];
            let mut it = seed.into_iter();
            for i in 0..n {
                for j in i..n {
                    let v = it.next().unwrap();
                    m[i * n + j] = Complex64::new(v, 0.0);
                    m[j * n + i] = Complex64::new(v, 0.0);
                }
            }
            let trace: f64 = (0..n).map(|i| m[i * n + i].re).sum();
            let frob2: f64 = m.iter().map(|z| z.norm_sqr()).sum();
            let s = eigvals_hermitian(&m, n).unwrap();
            let sum: f64 = s.eigenvalues.iter().sum();
            let sq: f64 = s.eigenvalues.iter().map(|l| l * l).sum();
            prop_assert!((sum - trace).abs() <= 1e-10);
            prop_assert!((sq - frob2).abs() <= 1e-9);
            // Gershgorin bound contains the whole spectrum.
            let radius: f64 = (0..n)
                .map(|i| {
                    (0..n)
                        .filter(|&j| j != i)
                        .map(|j| m[i * n + j].norm())
                        .sum::<f64>()
                        + m[i * n + i].re.abs()
                })
                .fold(0.0, f64::max);
            prop_assert!(s.eigenvalues[0] >= -radius - 1e-12);
            prop_assert!(s.eigenvalues[n - 1] <= radius + 1e-12);
            // Ascending order.
            for w in s.eigenvalues.windows(2) {
                prop_assert!(w[0] <= w[1]);
            }
        }

        #[test]
        fn diagonal_matrices_are_fixed_points(diag in proptest::collection::vec(-5.0f64..5.0, 5)) {
            let n = diag.len();
            let mut m = vec![Complex64::new(0.0, 0.0); n * n];
            for (i, &v) in diag.iter().enumerate() {
                m[i * n + i] = Complex64::new(v, 0.0);
            }
            let s = eigvals_hermitian(&m, n).unwrap();
            let mut want = diag.clone();
            want.sort_unstable_by(f64::total_cmp);
            for (got, want) in s.eigenvalues.iter().zip(&want) {
                prop_assert!((got - want).abs() <= 1e-14);
            }
        }
    }
}
