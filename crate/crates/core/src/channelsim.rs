//! Truncated Fock-space simulation of dephasing channels.
//!
//! On a `d`-level truncation the channel is the entrywise (Hadamard) product
//! of the input state with the symbol truncation: diagonals pass through
//! untouched, coherences are damped by Fourier coefficients.  The module
//! also carries the channel's Choi state (maximally correlated, so it is
//! fully described by `T/d` on the doubled-index diagonal), the standard
//! Weyl shift/phase unitaries, and the teleportation simulation built on
//! them: teleporting through the Choi state yields a channel whose symbol is
//! the Weyl-shift average of `T`, entrywise within `2 |h - k| / d` of the
//! original.  A literal tensor-network contraction of that protocol is kept
//! as an oracle for small dimensions.

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::circular::CircularDensity;
use crate::toeplitz::{self, ToeplitzError};

/// Largest dimension the end-to-end simulation commands accept.
pub const SIM_DIM_CAP: usize = 256;

/// Largest dimension for the literal teleportation oracle, which scales as
/// `d^8`.
pub const ORACLE_DIM_CAP: usize = 8;

const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("trace must be 1 within {TRACE_TOL:e}, got deviation {0:e}")]
    BadTrace(f64),
    #[error("matrix has eigenvalue {0:e} below the PSD tolerance -{PSD_TOL:e}")]
    NotPsd(f64),
    #[error("the simulator handles single-mode densities only")]
    Multimode,
    #[error("dimension {got} exceeds the cap {cap}")]
    DimCap { got: usize, cap: usize },
    #[error("dimension must be positive")]
    ZeroDim,
    #[error("failed to parse density matrix: {0}")]
    Parse(String),
    #[error(transparent)]
    Spectral(#[from] ToeplitzError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A validated density matrix: Hermitian within `1e-12`, unit trace within
/// `1e-12`, and no eigenvalue below `-1e-9`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self, SimError> {
        if dim == 0 {
            return Err(SimError::ZeroDim);
        }
        let spectrum = toeplitz::eigvals_hermitian(&entries, dim)?;
        let trace: Complex64 = (0..dim).map(|i| entries[i * dim + i]).sum();
        let trace_dev = (trace - Complex64::new(1.0, 0.0)).norm();
        if trace_dev > TRACE_TOL {
            return Err(SimError::BadTrace(trace_dev));
        }
        if spectrum.min_eig < -PSD_TOL {
            return Err(SimError::NotPsd(spectrum.min_eig));
        }
        Ok(Self { dim, entries })
    }

    /// Construct without re-validation; for channel outputs whose validity
    /// is structural.
    fn from_raw(dim: usize, entries: Vec<Complex64>) -> Self {
        Self { dim, entries }
    }

    /// The projector onto `(1/sqrt(d)) sum_k |k>`: every entry `1/d`.
    pub fn plus_state(dim: usize) -> Result<Self, SimError> {
        if dim == 0 {
            return Err(SimError::ZeroDim);
        }
        let v = Complex64::new(1.0 / dim as f64, 0.0);
        Ok(Self::from_raw(dim, vec![v; dim * dim]))
    }

    /// The maximally mixed state `I/d`.
    pub fn max_mixed(dim: usize) -> Result<Self, SimError> {
        if dim == 0 {
            return Err(SimError::ZeroDim);
        }
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        Ok(Self::from_raw(dim, entries))
    }

    /// A reproducible Haar-like random pure state from a seeded generator.
    pub fn random_pure(dim: usize, seed: u64) -> Result<Self, SimError> {
        if dim == 0 {
            return Err(SimError::ZeroDim);
        }
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut amplitudes = Vec::with_capacity(dim);
        for _ in 0..dim {
            let (re, im) = gaussian_pair(&mut rng);
            amplitudes.push(Complex64::new(re, im));
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in amplitudes.iter_mut() {
            *z /= norm;
        }
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                entries[i * dim + j] = amplitudes[i] * amplitudes[j].conj();
            }
        }
        Ok(Self::from_raw(dim, entries))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    /// CSV layout shared with the symbol truncations: a `dim=<d>` preamble,
    /// then one row per line of alternating `re,im` fields at round-trip
    /// precision.
    pub fn to_csv_string(&self) -> String {
        toeplitz::matrix_csv(&self.entries, self.dim)
    }

    pub fn write_csv(&self, path: &std::path::Path) -> Result<(), SimError> {
        std::fs::write(path, self.to_csv_string())?;
        Ok(())
    }

    pub fn from_csv_str(text: &str) -> Result<Self, SimError> {
        let mut lines = text.lines();
        let head = lines
            .next()
            .ok_or_else(|| SimError::Parse("empty input".into()))?;
        let dim: usize = head
            .strip_prefix("dim=")
            .ok_or_else(|| SimError::Parse(format!("expected dim=<d> preamble, got {head:?}")))?
            .trim()
            .parse()
            .map_err(|e| SimError::Parse(format!("bad dimension: {e}")))?;
        let mut entries = Vec::with_capacity(dim * dim);
        for (row, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 2 * dim {
                return Err(SimError::Parse(format!(
                    "row {row} has {} fields, expected {}",
                    fields.len(),
                    2 * dim
                )));
            }
            for pair in fields.chunks(2) {
                let re: f64 = pair[0]
                    .trim()
                    .parse()
                    .map_err(|e| SimError::Parse(format!("row {row}: {e}")))?;
                let im: f64 = pair[1]
                    .trim()
                    .parse()
                    .map_err(|e| SimError::Parse(format!("row {row}: {e}")))?;
                entries.push(Complex64::new(re, im));
            }
        }
        if entries.len() != dim * dim {
            return Err(SimError::Parse(format!(
                "expected {} rows of entries, found {}",
                dim,
                entries.len() / (2 * dim).max(1)
            )));
        }
        Self::new(dim, entries)
    }

    pub fn read_csv(path: &std::path::Path) -> Result<Self, SimError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_csv_str(&text)
    }
}

fn gaussian_pair(rng: &mut ChaCha12Rng) -> (f64, f64) {
    let scale = 1.0 / (1u64 << 53) as f64;
    let u1 = ((rng.next_u64() >> 11) as f64 + 0.5) * scale;
    let u2 = ((rng.next_u64() >> 11) as f64 + 0.5) * scale;
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = std::f64::consts::TAU * u2;
    (r * theta.cos(), r * theta.sin())
}

/// Label of a Weyl (generalised Pauli) unitary: `x` Fock shifts and `z`
/// phase increments, both modulo the dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeylLabel {
    pub x: usize,
    pub z: usize,
}

/// Dense `d x d` matrix of `X^x Z^z`, where `X |k> = |k + 1 mod d>` and
/// `Z |k> = e^{2 pi i k / d} |k>`.
pub fn weyl_unitary(dim: usize, label: WeylLabel) -> Vec<Complex64> {
    let mut u = vec![Complex64::new(0.0, 0.0); dim * dim];
    for k in 0..dim {
        let phase = std::f64::consts::TAU * (label.z % dim) as f64 * k as f64 / dim as f64;
        let row = (k + label.x) % dim;
        u[row * dim + k] = Complex64::from_polar(1.0, phase);
    }
    u
}

/// Apply the dephasing channel for `density` to a truncated state: the
/// entrywise product with the symbol.  Diagonal entries are copied through
/// bit-for-bit.
pub fn apply_dephasing(
    state: &DensityMatrix,
    density: &CircularDensity,
) -> Result<DensityMatrix, SimError> {
    if density.modes() != 1 {
        return Err(SimError::Multimode);
    }
    let d = state.dim;
    let mut entries = state.entries.clone();
    for h in 0..d {
        for k in 0..d {
            if h != k {
                entries[h * d + k] *= density.fourier_coeff(&[h as i64 - k as i64]);
            }
        }
    }
    Ok(DensityMatrix::from_raw(d, entries))
}

/// Choi state of the level-`d` dephasing channel.  It is maximally
/// correlated, so the `d^2`-dimensional state is carried by `T/d` on the
/// doubled-index diagonal; the full entries are exposed by
/// [`entry4`](Self::entry4).
#[derive(Debug, Clone)]
pub struct ChoiState {
    compressed: DensityMatrix,
}

impl ChoiState {
    pub fn dim(&self) -> usize {
        self.compressed.dim
    }

    /// The `d x d` matrix `T/d` carrying the whole state.
    pub fn compressed(&self) -> &DensityMatrix {
        &self.compressed
    }

    /// Full Choi entry `<a, b| omega |c, e>`, nonzero only on the
    /// correlated diagonal `a = b`, `c = e`.
    pub fn entry4(&self, a: usize, b: usize, c: usize, e: usize) -> Complex64 {
        if a == b && c == e {
            self.compressed.entry(a, c)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }
}

/// Build the Choi state of the level-`d` channel for `density`.
pub fn choi_state(density: &CircularDensity, dim: usize) -> Result<ChoiState, SimError> {
    if density.modes() != 1 {
        return Err(SimError::Multimode);
    }
    let trunc = toeplitz::build_truncation(density, &[dim])?;
    let scaled: Vec<Complex64> = trunc
        .entries()
        .iter()
        .map(|z| z / dim as f64)
        .collect();
    Ok(ChoiState {
        compressed: DensityMatrix::new(dim, scaled)?,
    })
}

/// Symbol of the teleportation-simulated channel: the Weyl-shift average
/// `M[h, k] = (1/d) sum_x T[(h+x) mod d, (k+x) mod d]`, returned row-major.
pub fn tele_sim_coeff(density: &CircularDensity, dim: usize) -> Result<Vec<Complex64>, SimError> {
    if density.modes() != 1 {
        return Err(SimError::Multimode);
    }
    let trunc = toeplitz::build_truncation(density, &[dim])?;
    let mut m = vec![Complex64::new(0.0, 0.0); dim * dim];
    for h in 0..dim {
        for k in 0..dim {
            let mut sum = Complex64::new(0.0, 0.0);
            for x in 0..dim {
                sum += trunc.entry((h + x) % dim, (k + x) % dim);
            }
            m[h * dim + k] = sum / dim as f64;
        }
    }
    Ok(m)
}

/// Apply the teleportation-simulated channel: the entrywise product with
/// the Weyl-shift-averaged symbol from [`tele_sim_coeff`].
pub fn apply_tele_sim(
    state: &DensityMatrix,
    density: &CircularDensity,
) -> Result<DensityMatrix, SimError> {
    let d = state.dim;
    let m = tele_sim_coeff(density, d)?;
    let mut entries = state.entries.clone();
    for h in 0..d {
        for k in 0..d {
            entries[h * d + k] *= m[h * d + k];
        }
    }
    Ok(DensityMatrix::from_raw(d, entries))
}

/// Literal contraction of the teleportation protocol, for cross-checking
/// [`apply_tele_sim`] at small dimension (`d <= 8`).
///
/// For every measurement outcome `(x, z)` the sender projects onto the Weyl
/// rotation of the maximally entangled state, the receiver applies the same
/// Weyl unitary, and the outcomes are summed.  The result is the channel's
/// superoperator `S[(h' d + k'), (h d + k)] = <h'| N(|h><k|) |k'>`, built
/// with no appeal to the entrywise shortcut.
pub fn tele_superop_oracle(
    density: &CircularDensity,
    dim: usize,
) -> Result<Vec<Complex64>, SimError> {
    if density.modes() != 1 {
        return Err(SimError::Multimode);
    }
    if dim > ORACLE_DIM_CAP {
        return Err(SimError::DimCap {
            got: dim,
            cap: ORACLE_DIM_CAP,
        });
    }
    let d = dim;
    let d2 = d * d;
    let choi = choi_state(density, d)?;
    let zero = Complex64::new(0.0, 0.0);

    // |Phi><Phi| on the doubled space, entry ((i, j), (k, l)).
    let mut phi = vec![zero; d2 * d2];
    for i in 0..d {
        for k in 0..d {
            phi[(i * d + i) * d2 + (k * d + k)] = Complex64::new(1.0 / d as f64, 0.0);
        }
    }

    let mut superop = vec![zero; d2 * d2];
    for x in 0..d {
        for z in 0..d {
            let u = weyl_unitary(d, WeylLabel { x, z });
            // Measurement operator (U (x) 1) Phi (U^dagger (x) 1), entry
            // ((c', c), (a', a)), built by explicit contraction.
            let mut meas = vec![zero; d2 * d2];
            for cp in 0..d {
                for c in 0..d {
                    for ap in 0..d {
                        for a in 0..d {
                            let mut sum = zero;
                            for i in 0..d {
                                for k in 0..d {
                                    sum += u[cp * d + i]
                                        * phi[(i * d + c) * d2 + (k * d + a)]
                                        * u[ap * d + k].conj();
                                }
                            }
                            meas[(cp * d + c) * d2 + (ap * d + a)] = sum;
                        }
                    }
                }
            }

            // Push every input basis operator E = |h><k| through the
            // protocol for this outcome and correct with the same Weyl
            // unitary on the receiver.
            for h in 0..d {
                for k in 0..d {
                    let mut r = vec![zero; d * d];
                    for b in 0..d {
                        for e in 0..d {
                            let mut sum = zero;
                            for ap in 0..d {
                                for a in 0..d {
                                    for cp in 0..d {
                                        for c in 0..d {
                                            let e_entry = if ap == h && cp == k {
                                                Complex64::new(1.0, 0.0)
                                            } else {
                                                zero
                                            };
                                            if e_entry == zero {
                                                continue;
                                            }
                                            sum += e_entry
                                                * choi.entry4(a, b, c, e)
                                                * meas[(cp * d + c) * d2 + (ap * d + a)];
                                        }
                                    }
                                }
                            }
                            r[b * d + e] = sum;
                        }
                    }
                    // out = U r U^dagger, accumulated into the superoperator.
                    for hp in 0..d {
                        for kp in 0..d {
                            let mut sum = zero;
                            for b in 0..d {
                                for e in 0..d {
                                    sum += u[hp * d + b] * r[b * d + e] * u[kp * d + e].conj();
                                }
                            }
                            superop[(hp * d + kp) * d2 + (h * d + k)] += sum;
                        }
                    }
                }
            }
        }
    }
    Ok(superop)
}

/// Trace distance `(1/2) || a - b ||_1` between two states of equal
/// dimension.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64, SimError> {
    if a.dim != b.dim {
        return Err(SimError::Parse(format!(
            "dimension mismatch: {} vs {}",
            a.dim, b.dim
        )));
    }
    let diff: Vec<Complex64> = a
        .entries
        .iter()
        .zip(&b.entries)
        .map(|(x, y)| x - y)
        .collect();
    let spectrum = toeplitz::eigvals_hermitian(&diff, a.dim)?;
    Ok(0.5 * spectrum.eigenvalues.iter().map(|l| l.abs()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn wc() -> CircularDensity {
        CircularDensity::wrapped_cauchy(1.0).unwrap()
    }

    #[test]
    fn canonical_states_validate() {
        for d in [1usize, 2, 5, 16] {
            assert!(DensityMatrix::plus_state(d).is_ok());
            assert!(DensityMatrix::max_mixed(d).is_ok());
            let r = DensityMatrix::random_pure(d, 7).unwrap();
            // Explicit revalidation through the public constructor.
            assert!(DensityMatrix::new(d, r.entries().to_vec()).is_ok());
        }
    }

    #[test]
    fn constructor_rejects_invalid_matrices() {
        let z = |re: f64| Complex64::new(re, 0.0);
        // Not Hermitian.
        let bad = vec![z(0.5), z(0.3), z(0.1), z(0.5)];
        assert!(matches!(
            DensityMatrix::new(2, bad),
            Err(SimError::Spectral(ToeplitzError::NotHermitian { .. }))
        ));
        // Trace off.
        let bad = vec![z(0.7), z(0.0), z(0.0), z(0.7)];
        assert!(matches!(
            DensityMatrix::new(2, bad),
            Err(SimError::BadTrace(_))
        ));
        // Negative eigenvalue.
        let bad = vec![z(1.5), z(0.0), z(0.0), z(-0.5)];
        assert!(matches!(DensityMatrix::new(2, bad), Err(SimError::NotPsd(_))));
        assert!(matches!(
            DensityMatrix::new(0, vec![]),
            Err(SimError::ZeroDim)
        ));
    }

    #[test]
    fn random_states_are_seed_deterministic() {
        let a = DensityMatrix::random_pure(6, 42).unwrap();
        let b = DensityMatrix::random_pure(6, 42).unwrap();
        assert_eq!(a, b);
        let c = DensityMatrix::random_pure(6, 43).unwrap();
        assert_ne!(a, c);
        // Pure: trace of the square is 1.
        let d = a.dim();
        let mut purity = Complex64::new(0.0, 0.0);
        for i in 0..d {
            for j in 0..d {
                purity += a.entry(i, j) * a.entry(j, i);
            }
        }
        assert_relative_eq!(purity.re, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let state = DensityMatrix::random_pure(5, 99).unwrap();
        let text = state.to_csv_string();
        let back = DensityMatrix::from_csv_str(&text).unwrap();
        assert_eq!(state, back);

        assert!(DensityMatrix::from_csv_str("").is_err());
        assert!(DensityMatrix::from_csv_str("dim=2\n1,0\n").is_err());
        assert!(DensityMatrix::from_csv_str("d=2\n").is_err());
    }

    #[test]
    fn weyl_unitaries_are_unitary_and_commute_projectively() {
        let d = 5;
        let x = weyl_unitary(d, WeylLabel { x: 1, z: 0 });
        let z = weyl_unitary(d, WeylLabel { x: 0, z: 1 });
        let mut zx = vec![Complex64::new(0.0, 0.0); d * d];
        let mut xz = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    zx[i * d + j] += z[i * d + k] * x[k * d + j];
                    xz[i * d + j] += x[i * d + k] * z[k * d + j];
                }
            }
        }
        let omega = Complex64::from_polar(1.0, std::f64::consts::TAU / d as f64);
        for i in 0..d * d {
            let want = omega * xz[i];
            assert_abs_diff_eq!(zx[i].re, want.re, epsilon = 1e-14);
            assert_abs_diff_eq!(zx[i].im, want.im, epsilon = 1e-14);
        }
        // Unitarity of a generic label.
        let u = weyl_unitary(d, WeylLabel { x: 3, z: 2 });
        for i in 0..d {
            for j in 0..d {
                let mut dot = Complex64::new(0.0, 0.0);
                for k in 0..d {
                    dot += u[k * d + i].conj() * u[k * d + j];
                }
                let want = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(dot.re, want, epsilon = 1e-14);
                assert_abs_diff_eq!(dot.im, 0.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn dephasing_preserves_diagonals_bit_for_bit() {
        let state = DensityMatrix::random_pure(8, 5).unwrap();
        let out = apply_dephasing(&state, &wc()).unwrap();
        for i in 0..8 {
            assert_eq!(out.entry(i, i), state.entry(i, i));
        }
        // Off-diagonals are damped, never amplified.
        for h in 0..8 {
            for k in 0..8 {
                assert!(out.entry(h, k).norm() <= state.entry(h, k).norm() + 1e-15);
            }
        }
        // Diagonal states are fixed points.
        let mixed = DensityMatrix::max_mixed(8).unwrap();
        let out = apply_dephasing(&mixed, &wc()).unwrap();
        assert_eq!(out, mixed);
    }

    #[test]
    fn dephasing_composes_as_a_hadamard_semigroup() {
        // Applying the wrapped Cauchy channel twice multiplies the symbol
        // coefficients: e^{-|k|} squared is the kappa = 4 symbol.
        let state = DensityMatrix::random_pure(10, 11).unwrap();
        let twice = apply_dephasing(&apply_dephasing(&state, &wc()).unwrap(), &wc()).unwrap();
        let composed = apply_dephasing(&state, &CircularDensity::wrapped_cauchy(4.0).unwrap())
            .unwrap();
        for i in 0..100 {
            assert_abs_diff_eq!(
                twice.entries()[i].re,
                composed.entries()[i].re,
                epsilon = 1e-14
            );
            assert_abs_diff_eq!(
                twice.entries()[i].im,
                composed.entries()[i].im,
                epsilon = 1e-14
            );
        }

        // Same closure for the wrapped normal: gamma doubles.
        let wn = CircularDensity::wrapped_normal(0.8).unwrap();
        let twice = apply_dephasing(&apply_dephasing(&state, &wn).unwrap(), &wn).unwrap();
        let composed =
            apply_dephasing(&state, &CircularDensity::wrapped_normal(1.6).unwrap()).unwrap();
        for i in 0..100 {
            assert_abs_diff_eq!(
                twice.entries()[i].re,
                composed.entries()[i].re,
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn choi_state_is_maximally_correlated_t_over_d() {
        let d = 6;
        let choi = choi_state(&wc(), d).unwrap();
        assert_eq!(choi.dim(), d);
        for a in 0..d {
            assert_relative_eq!(
                choi.compressed().entry(a, a).re,
                1.0 / d as f64,
                max_relative = 1e-15
            );
        }
        let trace: f64 = (0..d).map(|a| choi.compressed().entry(a, a).re).sum();
        assert_relative_eq!(trace, 1.0, max_relative = 1e-12);
        // Off-diagonal doubled-index entries vanish.
        assert_eq!(choi.entry4(0, 1, 2, 2), Complex64::new(0.0, 0.0));
        assert_eq!(
            choi.entry4(1, 1, 2, 2),
            choi.compressed().entry(1, 2)
        );
    }

    #[test]
    fn tele_sim_symbol_matches_the_wrap_formula_and_bound() {
        let d = 16;
        let density = wc();
        let m = tele_sim_coeff(&density, d).unwrap();
        let c = |k: i64| density.fourier_coeff(&[k]);
        for h in 0..d {
            for k in 0..d {
                let r = h as i64 - k as i64;
                let wrapped = if r >= 0 { r - d as i64 } else { r + d as i64 };
                let want = (c(r) * (d as i64 - r.abs()) as f64
                    + c(wrapped) * r.abs() as f64)
                    / d as f64;
                let got = m[h * d + k];
                assert_abs_diff_eq!(got.re, want.re, epsilon = 1e-14);
                assert_abs_diff_eq!(got.im, want.im, epsilon = 1e-14);
                // Entrywise distance to the true symbol obeys 2|h-k|/d.
                let violation = (c(r) - got).norm() - 2.0 * r.abs() as f64 / d as f64;
                assert!(violation <= 1e-12, "violation {violation} at ({h}, {k})");
            }
        }
        // The averaged symbol is itself a valid (PSD, unit-diagonal-trace)
        // coefficient matrix.
        let scaled: Vec<Complex64> = m.iter().map(|z| z / d as f64).collect();
        assert!(DensityMatrix::new(d, scaled).is_ok());
    }

    #[test]
    fn oracle_agrees_with_the_entrywise_shortcut() {
        for d in [2usize, 3, 4] {
            let density = wc();
            let superop = tele_superop_oracle(&density, d).unwrap();
            for state in [
                DensityMatrix::plus_state(d).unwrap(),
                DensityMatrix::random_pure(d, 3).unwrap(),
            ] {
                let fast = apply_tele_sim(&state, &density).unwrap();
                // Apply the superoperator to the flattened state.
                let d2 = d * d;
                for hp in 0..d {
                    for kp in 0..d {
                        let mut sum = Complex64::new(0.0, 0.0);
                        for h in 0..d {
                            for k in 0..d {
                                sum += superop[(hp * d + kp) * d2 + (h * d + k)]
                                    * state.entry(h, k);
                            }
                        }
                        let want = fast.entry(hp, kp);
                        assert_abs_diff_eq!(sum.re, want.re, epsilon = 1e-12);
                        assert_abs_diff_eq!(sum.im, want.im, epsilon = 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn oracle_channel_is_trace_preserving_and_cp() {
        let d = 4;
        let superop = tele_superop_oracle(&wc(), d).unwrap();
        let d2 = d * d;
        // Trace preservation: summing output diagonals gives the input
        // trace functional.
        for h in 0..d {
            for k in 0..d {
                let mut sum = Complex64::new(0.0, 0.0);
                for hp in 0..d {
                    sum += superop[(hp * d + hp) * d2 + (h * d + k)];
                }
                let want = if h == k { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(sum.re, want, epsilon = 1e-12);
                assert_abs_diff_eq!(sum.im, 0.0, epsilon = 1e-12);
            }
        }
        // Complete positivity: the Choi matrix of the superoperator is PSD.
        let mut choi = vec![Complex64::new(0.0, 0.0); d2 * d2];
        for h in 0..d {
            for k in 0..d {
                for hp in 0..d {
                    for kp in 0..d {
                        // J[(hp, h), (kp, k)] = <hp| N(|h><k|) |kp> / d
                        choi[(hp * d + h) * d2 + (kp * d + k)] =
                            superop[(hp * d + kp) * d2 + (h * d + k)] / d as f64;
                    }
                }
            }
        }
        let spectrum = toeplitz::eigvals_hermitian(&choi, d2).unwrap();
        assert!(spectrum.min_eig >= -1e-9, "min eig {}", spectrum.min_eig);
    }

    #[test]
    fn trace_distance_basics() {
        let d = 4;
        let plus = DensityMatrix::plus_state(d).unwrap();
        let mixed = DensityMatrix::max_mixed(d).unwrap();
        assert_abs_diff_eq!(trace_distance(&plus, &plus).unwrap(), 0.0, epsilon = 1e-14);
        // Pure vs maximally mixed: (d - 1) / d exactly.
        assert_relative_eq!(
            trace_distance(&plus, &mixed).unwrap(),
            (d - 1) as f64 / d as f64,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            trace_distance(&mixed, &plus).unwrap(),
            trace_distance(&plus, &mixed).unwrap(),
            max_relative = 1e-14
        );
        let other = DensityMatrix::plus_state(5).unwrap();
        assert!(trace_distance(&plus, &other).is_err());
    }

    #[test]
    fn simulation_error_decays_with_dimension() {
        let density = wc();
        let mut prev = f64::INFINITY;
        for d in [8usize, 16, 32] {
            let state = DensityMatrix::plus_state(d).unwrap();
            let truth = apply_dephasing(&state, &density).unwrap();
            let sim = apply_tele_sim(&state, &density).unwrap();
            let td = trace_distance(&truth, &sim).unwrap();
            assert!(td < prev, "trace distance must shrink: {td} at d = {d}");
            // The aggregate coherence bound dominates the trace distance.
            let mut aggregate = 0.0;
            for h in 0..d {
                for k in 0..d {
                    aggregate +=
                        state.entry(h, k).norm() * (h as i64 - k as i64).abs() as f64 / d as f64;
                }
            }
            assert!(td <= aggregate + 1e-12);
            prev = td;
        }
        // Calibrated value at d = 8 for the plus state.
        let state = DensityMatrix::plus_state(8).unwrap();
        let td = trace_distance(
            &apply_dephasing(&state, &density).unwrap(),
            &apply_tele_sim(&state, &density).unwrap(),
        )
        .unwrap();
        assert_abs_diff_eq!(td, 0.066756, epsilon = 1e-5);
    }

    #[test]
    fn oracle_respects_its_dimension_cap() {
        assert!(matches!(
            tele_superop_oracle(&wc(), 9),
            Err(SimError::DimCap { .. })
        ));
    }
}
