//! Circular probability densities and their divergences to the uniform one.
//!
//! A density here lives on `[-pi, pi)` (or a product of up to three such
//! circles) and is what a dephasing channel averages phase rotations
//! against.  The quantities that matter downstream are the Fourier
//! coefficients `c_k = int p(phi) e^{i k phi} dphi`, which fill the channel's
//! Toeplitz symbol, and the relative entropy to the uniform density,
//! `log2(2 pi) - h(p)` bits, which is the channel's capacity.
//!
//! Three parametric families have closed forms throughout:
//!
//! * wrapped normal, width `gamma`: `c_k = exp(-gamma k^2 / 2)`;
//! * von Mises, width `lambda`: `c_k = I_k(1/lambda) / I_0(1/lambda)`;
//! * wrapped Cauchy, width `kappa`: `c_k = exp(-sqrt(kappa) |k|)`.
//!
//! Tabulated densities use their own grid as the quadrature rule, and
//! product densities factor over modes.

use num_complex::Complex64;
use thiserror::Error;

use crate::specfun::{self, SpecFunError};

/// Entropies below this many bits are treated as divergent rather than
/// returned; see [`CircularDensity::differential_entropy`].
pub const ENTROPY_FLOOR_BITS: f64 = -60.0;

/// Below this `gamma` the wrapped-normal pdf switches from the direct
/// wrapped Gaussian sum to the theta-series form, which converges fast
/// exactly where the wrapped sum needs many images.
const WN_PDF_THETA_BELOW: f64 = 0.05;

/// Below this `gamma` the wrapped-normal entropy series is refused and the
/// quadrature path takes over.
const WN_SERIES_MIN_GAMMA: f64 = 0.02;

/// Quadrature refinement: starting nodes per axis and per-dimension caps.
const QUAD_START_NODES: usize = 256;
const QUAD_CAP_NODES: [usize; 3] = [1 << 17, 1 << 11, 1 << 8];
const QUAD_REL_TOL: f64 = 1e-11;

pub fn log2_two_pi() -> f64 {
    std::f64::consts::TAU.log2()
}

#[derive(Debug, Error)]
pub enum CircularError {
    #[error("{name} = {value} is out of range: {requirement}")]
    Parameter {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },
    #[error("tabulated density needs at least 32 grid points, got {0}")]
    TooFewPoints(usize),
    #[error("grid and value lengths differ: {grid} vs {values}")]
    LengthMismatch { grid: usize, values: usize },
    #[error(
        "tabulated grid must be uniform over [-pi, pi): point {index} is {value}, expected {expected}"
    )]
    NonUniformGrid {
        index: usize,
        value: f64,
        expected: f64,
    },
    #[error("tabulated values must be non-negative: value {value} at index {index}")]
    NegativeValue { index: usize, value: f64 },
    #[error("tabulated mass {mass} is further than 1e-6 from 1")]
    NotNormalized { mass: f64 },
    #[error("product densities take 1 to 3 single-mode factors")]
    BadProduct,
    #[error("Renyi order must be >= 1, got {0}")]
    BadOrder(f64),
    #[error("point has {got} coordinates, density has {want} modes")]
    DimensionMismatch { got: usize, want: usize },
    #[error("differential entropy diverges (fell below {floor_bits} bits)")]
    DivergentEntropy { floor_bits: f64 },
    #[error(transparent)]
    Numeric(#[from] SpecFunError),
}

/// How a [`DivergenceValue`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DivergenceMethod {
    ClosedForm,
    Quadrature,
}

/// A divergence from a density to the uniform density, in bits.
///
/// `order` is the Renyi order; `1` marks the relative entropy.  The value is
/// non-negative, with `+inf` reserved for integrals diagnosed as divergent.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct DivergenceValue {
    pub value: f64,
    pub order: f64,
    pub method: DivergenceMethod,
}

/// A density tabulated on a uniform grid over `[-pi, pi)`.
///
/// The grid doubles as the quadrature rule: Fourier coefficients, entropy,
/// and Renyi integrals are discrete sums over the stored values, and
/// construction rescales the values so the trapezoidal mass is exactly 1.
/// Pointwise [`pdf`](CircularDensity::pdf) queries between nodes use
/// periodic linear interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedDensity {
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl TabulatedDensity {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self, CircularError> {
        if grid.len() != values.len() {
            return Err(CircularError::LengthMismatch {
                grid: grid.len(),
                values: values.len(),
            });
        }
        if grid.len() < 32 {
            return Err(CircularError::TooFewPoints(grid.len()));
        }
        let n = grid.len();
        let h = std::f64::consts::TAU / n as f64;
        for (j, &g) in grid.iter().enumerate() {
            let expected = -std::f64::consts::PI + h * j as f64;
            if (g - expected).abs() > 1e-9 {
                return Err(CircularError::NonUniformGrid {
                    index: j,
                    value: g,
                    expected,
                });
            }
        }
        for (j, &v) in values.iter().enumerate() {
            if v.is_nan() || v < 0.0 {
                return Err(CircularError::NegativeValue { index: j, value: v });
            }
        }
        let mass: f64 = values.iter().sum::<f64>() * h;
        if (mass - 1.0).abs() > 1e-6 {
            return Err(CircularError::NotNormalized { mass });
        }
        let values = values.iter().map(|v| v / mass).collect();
        Ok(Self { grid, values })
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        std::f64::consts::TAU / self.grid.len() as f64
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn pdf(&self, phi: f64) -> f64 {
        let n = self.grid.len();
        let h = self.spacing();
        let t = (phi + std::f64::consts::PI) / h;
        let j = t.floor();
        let frac = t - j;
        let j0 = (j as isize).rem_euclid(n as isize) as usize;
        let j1 = (j0 + 1) % n;
        self.values[j0] * (1.0 - frac) + self.values[j1] * frac
    }

    fn fourier_coeff(&self, k: i64) -> Complex64 {
        let h = self.spacing();
        let mut sum = Complex64::new(0.0, 0.0);
        for (&g, &v) in self.grid.iter().zip(&self.values) {
            sum += v * Complex64::from_polar(1.0, k as f64 * g);
        }
        sum * h
    }

    fn differential_entropy_bits(&self) -> f64 {
        let h = self.spacing();
        -h * self.values.iter().map(|&v| specfun::xlog2x(v)).sum::<f64>()
    }

    fn renyi_integral(&self, alpha: f64) -> f64 {
        let h = self.spacing();
        h * self.values.iter().map(|&v| v.powf(alpha)).sum::<f64>()
    }
}

/// A probability density on the circle or on a product of up to three
/// circles.
#[derive(Debug, Clone)]
pub enum CircularDensity {
    WrappedNormal { gamma: f64 },
    VonMises { lambda: f64 },
    WrappedCauchy { kappa: f64 },
    Uniform,
    Tabulated(TabulatedDensity),
    Product(Vec<CircularDensity>),
}

impl CircularDensity {
    pub fn wrapped_normal(gamma: f64) -> Result<Self, CircularError> {
        if gamma <= 0.0 || !gamma.is_finite() {
            return Err(CircularError::Parameter {
                name: "gamma",
                value: gamma,
                requirement: "finite and > 0",
            });
        }
        Ok(Self::WrappedNormal { gamma })
    }

    pub fn von_mises(lambda: f64) -> Result<Self, CircularError> {
        if lambda <= 0.0 || !lambda.is_finite() {
            return Err(CircularError::Parameter {
                name: "lambda",
                value: lambda,
                requirement: "finite and > 0",
            });
        }
        Ok(Self::VonMises { lambda })
    }

    pub fn wrapped_cauchy(kappa: f64) -> Result<Self, CircularError> {
        if kappa <= 0.0 || !kappa.is_finite() {
            return Err(CircularError::Parameter {
                name: "kappa",
                value: kappa,
                requirement: "finite and > 0",
            });
        }
        Ok(Self::WrappedCauchy { kappa })
    }

    pub fn tabulated(grid: Vec<f64>, values: Vec<f64>) -> Result<Self, CircularError> {
        Ok(Self::Tabulated(TabulatedDensity::new(grid, values)?))
    }

    /// A product of independent single-mode factors, one circle per factor.
    pub fn product(factors: Vec<CircularDensity>) -> Result<Self, CircularError> {
        if factors.is_empty() || factors.len() > 3 || factors.iter().any(|f| f.modes() != 1) {
            return Err(CircularError::BadProduct);
        }
        Ok(Self::Product(factors))
    }

    /// Number of circle coordinates the density lives on.
    pub fn modes(&self) -> usize {
        match self {
            Self::Product(factors) => factors.len(),
            _ => 1,
        }
    }

    /// Short machine name of the family.
    pub fn family_name(&self) -> &'static str {
        match self {
            Self::WrappedNormal { .. } => "wrapped-normal",
            Self::VonMises { .. } => "von-mises",
            Self::WrappedCauchy { .. } => "wrapped-cauchy",
            Self::Uniform => "uniform",
            Self::Tabulated(_) => "tabulated",
            Self::Product(_) => "product",
        }
    }

    /// Parameters in declaration order; empty for uniform and tabulated,
    /// concatenated over factors for products.
    pub fn params(&self) -> Vec<f64> {
        match self {
            Self::WrappedNormal { gamma } => vec![*gamma],
            Self::VonMises { lambda } => vec![*lambda],
            Self::WrappedCauchy { kappa } => vec![*kappa],
            Self::Uniform | Self::Tabulated(_) => vec![],
            Self::Product(factors) => factors.iter().flat_map(|f| f.params()).collect(),
        }
    }

    /// Density value at a point of `[-pi, pi]^m` (the endpoint is accepted
    /// and identified with `-pi`).
    pub fn pdf(&self, point: &[f64]) -> Result<f64, CircularError> {
        if point.len() != self.modes() {
            return Err(CircularError::DimensionMismatch {
                got: point.len(),
                want: self.modes(),
            });
        }
        for &phi in point {
            if phi.is_nan() || phi.abs() > std::f64::consts::PI {
                return Err(CircularError::Parameter {
                    name: "phi",
                    value: phi,
                    requirement: "in [-pi, pi]",
                });
            }
        }
        match self {
            Self::WrappedNormal { gamma } => Ok(wrapped_normal_pdf(*gamma, point[0])?),
            Self::VonMises { lambda } => {
                let x = 1.0 / lambda;
                let ln = x * point[0].cos() - std::f64::consts::TAU.ln() - specfun::bessel_i0_ln(x);
                Ok(ln.exp())
            }
            Self::WrappedCauchy { kappa } => {
                let s = kappa.sqrt();
                let e = (-s).exp();
                let num = -(-2.0 * s).exp_m1();
                let den = 1.0 + (-2.0 * s).exp() - 2.0 * e * point[0].cos();
                Ok(num / den / std::f64::consts::TAU)
            }
            Self::Uniform => Ok(1.0 / std::f64::consts::TAU),
            Self::Tabulated(t) => Ok(t.pdf(point[0])),
            Self::Product(factors) => {
                let mut prod = 1.0;
                for (factor, &phi) in factors.iter().zip(point) {
                    prod *= factor.pdf(&[phi])?;
                }
                Ok(prod)
            }
        }
    }

    /// Fourier coefficient `int p(phi) e^{i <k, phi>} dphi` at an integer
    /// frequency vector with one entry per mode.
    ///
    /// Panics if `k` has the wrong length; there are no other failure modes.
    pub fn fourier_coeff(&self, k: &[i64]) -> Complex64 {
        assert_eq!(
            k.len(),
            self.modes(),
            "frequency vector length must match the mode count"
        );
        match self {
            Self::WrappedNormal { gamma } => {
                let kk = k[0] as f64;
                Complex64::new((-0.5 * gamma * kk * kk).exp(), 0.0)
            }
            Self::VonMises { lambda } => {
                let order = k[0].unsigned_abs() as u32;
                Complex64::new(specfun::bessel_i_ratio(order, 1.0 / lambda), 0.0)
            }
            Self::WrappedCauchy { kappa } => {
                Complex64::new((-kappa.sqrt() * k[0].abs() as f64).exp(), 0.0)
            }
            Self::Uniform => Complex64::new(if k[0] == 0 { 1.0 } else { 0.0 }, 0.0),
            Self::Tabulated(t) => t.fourier_coeff(k[0]),
            Self::Product(factors) => factors
                .iter()
                .zip(k)
                .map(|(factor, &ki)| factor.fourier_coeff(&[ki]))
                .product(),
        }
    }

    /// Differential entropy in bits.
    ///
    /// Closed forms serve the parametric families (with a quadrature
    /// fallback for very narrow wrapped normals); tabulated densities sum
    /// over their own grid.  Values below [`ENTROPY_FLOOR_BITS`] or failing
    /// the node-doubling test are reported as divergent.
    pub fn differential_entropy(&self) -> Result<f64, CircularError> {
        self.differential_entropy_floored(ENTROPY_FLOOR_BITS)
    }

    fn differential_entropy_floored(&self, floor_bits: f64) -> Result<f64, CircularError> {
        let value = match self {
            Self::WrappedNormal { gamma } => {
                if *gamma < WN_SERIES_MIN_GAMMA {
                    return self.entropy_by_quadrature(floor_bits);
                }
                log2_two_pi() - wrapped_normal_capacity_series(*gamma)
            }
            Self::VonMises { lambda } => log2_two_pi() - von_mises_capacity_closed(*lambda),
            Self::WrappedCauchy { kappa } => log2_two_pi() - wrapped_cauchy_capacity_closed(*kappa),
            Self::Uniform => log2_two_pi(),
            Self::Tabulated(t) => t.differential_entropy_bits(),
            Self::Product(factors) => {
                let mut sum = 0.0;
                for factor in factors {
                    sum += factor.differential_entropy_floored(floor_bits)?;
                }
                sum
            }
        };
        if value <= floor_bits {
            return Err(CircularError::DivergentEntropy { floor_bits });
        }
        Ok(value)
    }

    /// Differential entropy by periodic quadrature with node doubling.
    /// The public entry point routes here only where the series are
    /// unreliable; tests use it as an independent cross-check.
    pub(crate) fn entropy_by_quadrature(&self, floor_bits: f64) -> Result<f64, CircularError> {
        let m = self.modes();
        let value = specfun::converge_by_doubling(
            |nodes| {
                specfun::quad_periodic(
                    |point| -specfun::xlog2x(self.pdf(point).unwrap_or(f64::NAN)),
                    m,
                    nodes,
                )
            },
            QUAD_START_NODES.min(QUAD_CAP_NODES[m - 1] / 4),
            QUAD_CAP_NODES[m - 1],
            QUAD_REL_TOL,
        )?;
        if value <= floor_bits {
            return Err(CircularError::DivergentEntropy { floor_bits });
        }
        Ok(value)
    }

    /// Relative entropy `D(p || uniform)` in bits.  This is the exact
    /// capacity of the dephasing channel driven by `p`.
    pub fn kl_to_uniform(&self) -> Result<DivergenceValue, CircularError> {
        let (value, method) = match self {
            Self::WrappedNormal { gamma } => {
                if *gamma < WN_SERIES_MIN_GAMMA {
                    (
                        self.modes() as f64 * log2_two_pi()
                            - self.entropy_by_quadrature(ENTROPY_FLOOR_BITS)?,
                        DivergenceMethod::Quadrature,
                    )
                } else {
                    (
                        wrapped_normal_capacity_series(*gamma),
                        DivergenceMethod::ClosedForm,
                    )
                }
            }
            Self::VonMises { lambda } => (
                von_mises_capacity_closed(*lambda),
                DivergenceMethod::ClosedForm,
            ),
            Self::WrappedCauchy { kappa } => (
                wrapped_cauchy_capacity_closed(*kappa),
                DivergenceMethod::ClosedForm,
            ),
            Self::Uniform => (0.0, DivergenceMethod::ClosedForm),
            Self::Tabulated(t) => (
                log2_two_pi() - t.differential_entropy_bits(),
                DivergenceMethod::Quadrature,
            ),
            Self::Product(factors) => {
                let mut sum = 0.0;
                let mut method = DivergenceMethod::ClosedForm;
                for factor in factors {
                    let part = factor.kl_to_uniform()?;
                    sum += part.value;
                    if part.method == DivergenceMethod::Quadrature {
                        method = DivergenceMethod::Quadrature;
                    }
                }
                (sum, method)
            }
        };
        Ok(DivergenceValue {
            value: value.max(0.0),
            order: 1.0,
            method,
        })
    }

    /// Renyi divergence `D_alpha(p || uniform)` in bits, for `alpha >= 1`.
    ///
    /// `alpha = 1` routes to [`kl_to_uniform`](Self::kl_to_uniform).  For
    /// `alpha > 1` the value is `m log2(2 pi) + log2(int p^alpha) / (alpha - 1)`,
    /// with the integral refined under node doubling for the parametric
    /// families and summed on the grid for tabulated ones.
    pub fn renyi_to_uniform(&self, alpha: f64) -> Result<DivergenceValue, CircularError> {
        if alpha < 1.0 || !alpha.is_finite() {
            return Err(CircularError::BadOrder(alpha));
        }
        if alpha == 1.0 {
            return self.kl_to_uniform();
        }
        let (value, method) = self.renyi_inner(alpha)?;
        Ok(DivergenceValue {
            value: value.max(0.0),
            order: alpha,
            method,
        })
    }

    fn renyi_inner(&self, alpha: f64) -> Result<(f64, DivergenceMethod), CircularError> {
        match self {
            Self::Uniform => Ok((0.0, DivergenceMethod::ClosedForm)),
            Self::Tabulated(t) => Ok((
                log2_two_pi() + t.renyi_integral(alpha).log2() / (alpha - 1.0),
                DivergenceMethod::Quadrature,
            )),
            Self::Product(factors) => {
                let mut sum = 0.0;
                let mut method = DivergenceMethod::ClosedForm;
                for factor in factors {
                    let (part, part_method) = factor.renyi_inner(alpha)?;
                    sum += part;
                    if part_method == DivergenceMethod::Quadrature {
                        method = DivergenceMethod::Quadrature;
                    }
                }
                Ok((sum, method))
            }
            _ => {
                let integral = specfun::converge_by_doubling(
                    |nodes| {
                        specfun::quad_periodic(
                            |point| self.pdf(point).unwrap_or(f64::NAN).powf(alpha),
                            1,
                            nodes,
                        )
                    },
                    QUAD_START_NODES,
                    QUAD_CAP_NODES[0],
                    QUAD_REL_TOL,
                )?;
                Ok((
                    log2_two_pi() + integral.log2() / (alpha - 1.0),
                    DivergenceMethod::Quadrature,
                ))
            }
        }
    }
}

fn wrapped_normal_pdf(gamma: f64, phi: f64) -> Result<f64, CircularError> {
    if gamma >= WN_PDF_THETA_BELOW {
        Ok(wn_pdf_wrapped_sum(gamma, phi))
    } else {
        wn_pdf_theta(gamma, phi)
    }
}

/// Direct wrapped Gaussian sum; the image count keeps the dropped tail
/// below 1e-18 of the peak.
fn wn_pdf_wrapped_sum(gamma: f64, phi: f64) -> f64 {
    let images = 2 + ((83.0 * gamma).sqrt() / std::f64::consts::TAU).ceil() as i64;
    let norm = 1.0 / (std::f64::consts::TAU * gamma).sqrt();
    let mut sum = 0.0;
    for w in -images..=images {
        let y = phi + std::f64::consts::TAU * w as f64;
        sum += (-0.5 * y * y / gamma).exp();
    }
    norm * sum
}

/// Theta-series form `(1 + 2 sum e^{-gamma k^2/2} cos k phi) / (2 pi)`;
/// narrow densities make it converge slowly, hence the term guard.
fn wn_pdf_theta(gamma: f64, phi: f64) -> Result<f64, CircularError> {
    let needed = (83.0 / gamma).sqrt();
    if needed >= 1_000_000.0 {
        return Err(CircularError::Parameter {
            name: "gamma",
            value: gamma,
            requirement: "large enough for the theta series (>= 1e-10)",
        });
    }
    let mut sum = 0.0;
    let mut k = 1.0;
    loop {
        let coeff = (-0.5 * gamma * k * k).exp();
        if coeff < 1e-18 {
            break;
        }
        sum += coeff * (k * phi).cos();
        k += 1.0;
    }
    Ok(((1.0 + 2.0 * sum) / std::f64::consts::TAU).max(0.0))
}

/// Capacity of the wrapped-normal channel in bits, by the convergent series
/// `log2 phi(e^{-gamma}) + (2/ln 2) sum_{k>=1} (-1)^{k-1}
/// e^{-gamma k (k+1) / 2} / (k (1 - e^{-k gamma}))`, valid for
/// `gamma >= 0.02` (below that the caller uses quadrature).
pub(crate) fn wrapped_normal_capacity_series(gamma: f64) -> f64 {
    let ln2 = std::f64::consts::LN_2;
    let q = (-gamma).exp();
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..1_000_000u64 {
        let kf = k as f64;
        let numerator = (-0.5 * gamma * kf * (kf + 1.0)).exp();
        if numerator < 1e-300 {
            break;
        }
        let denominator = kf * (-(-kf * gamma).exp_m1());
        let term = numerator / denominator;
        sum += sign * term;
        sign = -sign;
        if term < 1e-16 * sum.abs() {
            break;
        }
    }
    specfun::log_euler_phi(q) / ln2 + 2.0 / ln2 * sum
}

/// Capacity of the von Mises channel in bits:
/// `(x I_1(x)/I_0(x) - ln I_0(x)) / ln 2` with `x = 1/lambda`.  The
/// `ln I_0` route keeps the small-`x` cancellation at full precision.
pub(crate) fn von_mises_capacity_closed(lambda: f64) -> f64 {
    let x = 1.0 / lambda;
    let r = specfun::bessel_i_ratio(1, x);
    (x * r - specfun::bessel_i0_ln(x)) / std::f64::consts::LN_2
}

/// Capacity of the wrapped Cauchy channel in bits:
/// `-log2(1 - e^{-2 sqrt(kappa)})`.
pub(crate) fn wrapped_cauchy_capacity_closed(kappa: f64) -> f64 {
    let s = kappa.sqrt();
    -(-(-2.0 * s).exp()).ln_1p() / std::f64::consts::LN_2
}
