//! Scalar special functions and periodic quadrature.
//!
//! Everything here is plain `f64` numerics with explicit series control:
//! series terminate when a term falls below `1e-15` times the running sum,
//! and no loop runs past a million terms.  Scalar domain violations signal
//! with NaN; `bessel_i` signals overflow with `+inf`.  The quadrature entry
//! point returns a `Result` because a bad dimension or a non-finite integrand
//! is a caller error worth naming.

use thiserror::Error;

/// Relative term size at which series stop.
const SERIES_TOL: f64 = 1e-15;

/// Hard cap on series length; hitting it means the parameters are outside
/// the range the series can serve.
const MAX_SERIES_TERMS: usize = 1_000_000;

/// Largest argument for which `exp` is finite.
const EXP_OVERFLOW: f64 = 709.782712893384;

/// Arguments at or above this use the large-argument Bessel evaluation.
const BESSEL_ASYMPTOTIC_MIN_X: f64 = 15.0;

#[derive(Debug, Error)]
pub enum SpecFunError {
    #[error("quadrature dimension {0} is outside the supported range 1..=3")]
    Dimension(usize),
    #[error("quadrature needs at least 2 nodes per axis, got {0}")]
    NodeCount(usize),
    #[error("integrand returned a non-finite value at {point:?}")]
    NonFiniteIntegrand { point: Vec<f64> },
    #[error("refinement stalled: delta {last_delta:e} at {nodes} nodes per axis")]
    NonConvergent { last_delta: f64, nodes: usize },
    #[error("value keeps growing under refinement; the integral looks divergent")]
    Divergent,
}

/// `x * log2(x)` extended continuously by `0` at `x = 0`.
///
/// Negative input is a domain error and returns NaN; eigenvalue clipping
/// policy lives with the spectral code, not here.
pub fn xlog2x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if x > 0.0 {
        x * x.log2()
    } else {
        f64::NAN
    }
}

/// Modified Bessel function of the first kind, `I_n(x)`, for `n >= 0` and
/// `x >= 0`.
///
/// Below `x = 15` the ascending power series is used; its terms are all
/// positive, so there is no cancellation.  From `x = 15` the large-argument
/// (Hankel) expansion is tried first and accepted only when it bottoms out
/// below `1e-13` relative; otherwise a normalised downward recurrence takes
/// over, which covers large orders where the expansion never settles.
/// Returns NaN for `x < 0` and `+inf` when the result exceeds the `f64`
/// range.
pub fn bessel_i(n: u32, x: f64) -> f64 {
    if x.is_nan() || x < 0.0 {
        return f64::NAN;
    }
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if x < BESSEL_ASYMPTOTIC_MIN_X {
        return bessel_i_series(n, x);
    }
    if let Some(v) = bessel_i_hankel(n, x) {
        return v;
    }
    bessel_i_miller(n, x).value()
}

/// Ratio `I_n(x) / I_0(x)`, evaluated without forming either factor when the
/// factors themselves would overflow.
pub(crate) fn bessel_i_ratio(n: u32, x: f64) -> f64 {
    if x.is_nan() || x < 0.0 {
        return f64::NAN;
    }
    if n == 0 {
        return 1.0;
    }
    if x == 0.0 {
        return 0.0;
    }
    if x < BESSEL_ASYMPTOTIC_MIN_X {
        return bessel_i_series(n, x) / bessel_i_series(0, x);
    }
    let pass = bessel_i_miller(n, x);
    pass.target / pass.order_zero
}

/// `ln I_0(x)`, accurate down to `x -> 0` (where `I_0 - 1` is summed
/// directly) and safe from overflow for large `x`.
pub(crate) fn bessel_i0_ln(x: f64) -> f64 {
    if x.is_nan() || x < 0.0 {
        return f64::NAN;
    }
    if x < BESSEL_ASYMPTOTIC_MIN_X {
        bessel_i0_minus_one(x).ln_1p()
    } else {
        let (sum, _) = hankel_sum(0, x);
        x - 0.5 * (2.0 * std::f64::consts::PI * x).ln() + sum.ln()
    }
}

/// `I_0(x) - 1` by its power series, avoiding the cancellation that
/// `bessel_i(0, x) - 1.0` would suffer for small `x`.
fn bessel_i0_minus_one(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 0.0;
    for j in 1..MAX_SERIES_TERMS {
        term *= q / ((j * j) as f64);
        sum += term;
        if term < SERIES_TOL * (1.0 + sum) {
            break;
        }
    }
    sum
}

fn bessel_i_series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    // Leading term (x/2)^n / n!, built multiplicatively so a huge order at a
    // modest argument underflows to the correct 0 instead of overflowing.
    let mut term = 1.0;
    for j in 1..=n as u64 {
        term *= half / j as f64;
        if term == 0.0 {
            return 0.0;
        }
    }
    let q = half * half;
    let mut sum = term;
    for j in 1..MAX_SERIES_TERMS {
        term *= q / ((j as f64) * (n as f64 + j as f64));
        sum += term;
        if term < SERIES_TOL * sum {
            break;
        }
    }
    sum
}

/// Large-argument expansion of `I_n(x)`.  The series is asymptotic, so the
/// terms shrink and then grow; the sum is kept only when the smallest term
/// is below `1e-13` of the total, otherwise `None` asks for the recurrence.
fn bessel_i_hankel(n: u32, x: f64) -> Option<f64> {
    let (sum, min_rel) = hankel_sum(n, x);
    if min_rel > 1e-13 || sum <= 0.0 {
        return None;
    }
    let ln_val = x - 0.5 * (2.0 * std::f64::consts::PI * x).ln() + sum.ln();
    if ln_val > EXP_OVERFLOW {
        Some(f64::INFINITY)
    } else {
        Some(ln_val.exp())
    }
}

/// Sum of the Hankel expansion and the smallest relative term reached.
fn hankel_sum(n: u32, x: f64) -> (f64, f64) {
    let mu = 4.0 * (n as f64) * (n as f64);
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut prev_abs = f64::INFINITY;
    let mut min_rel = 1.0_f64;
    for k in 1..60u32 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        term *= -(mu - odd * odd) / (8.0 * x * kf);
        let abs = term.abs();
        if abs >= prev_abs {
            break;
        }
        sum += term;
        prev_abs = abs;
        min_rel = abs / sum.abs().max(f64::MIN_POSITIVE);
        if min_rel < SERIES_TOL {
            break;
        }
    }
    (sum, min_rel)
}

struct MillerPass {
    /// Unnormalised `I_n` from the downward pass.
    target: f64,
    /// Unnormalised `I_0` from the same pass.
    order_zero: f64,
    /// Unnormalised `I_0 + 2 * sum_{k>=1} I_k`, which equals `e^x` once the
    /// common normalisation is fixed.
    norm: f64,
    x: f64,
}

impl MillerPass {
    fn value(&self) -> f64 {
        if self.target == 0.0 {
            return 0.0;
        }
        let ln_val = self.x + self.target.ln() - self.norm.ln();
        if ln_val > EXP_OVERFLOW {
            f64::INFINITY
        } else {
            ln_val.exp()
        }
    }
}

/// Downward three-term recurrence with on-the-fly normalisation against
/// `I_0 + 2 sum I_k = e^x`.  Robust for any order at `x >= 15`.
fn bessel_i_miller(n: u32, x: f64) -> MillerPass {
    let base = (n as usize).max(x as usize).max(1);
    let start = (n as usize).max(x as usize) + 40 + (2.0 * (base as f64).sqrt()) as usize;
    let mut above = 0.0_f64; // I_{k+1}
    let mut here = 1e-300_f64; // I_k
    let mut norm = 0.0_f64;
    let mut target: Option<f64> = None;
    for k in (1..=start).rev() {
        let below = above + (2.0 * k as f64 / x) * here;
        if k - 1 == n as usize {
            target = Some(below);
        }
        norm += 2.0 * here;
        above = here;
        here = below;
        if here.abs() > 1e250 {
            here *= 1e-250;
            above *= 1e-250;
            norm *= 1e-250;
            if let Some(t) = target.as_mut() {
                *t *= 1e-250;
            }
        }
    }
    norm += here; // the k = 0 term enters once
    let target = if n == 0 { here } else { target.unwrap_or(0.0) };
    MillerPass {
        target,
        order_zero: here,
        norm,
        x,
    }
}

/// Euler function `phi(q) = prod_{k>=1} (1 - q^k)` for `q` in `[0, 1)`.
///
/// Near `q = 1` the direct product converges too slowly, so the value is
/// recovered from [`log_euler_phi`].  Out-of-domain input returns NaN.
pub fn euler_phi(q: f64) -> f64 {
    if q.is_nan() || !(0.0..1.0).contains(&q) {
        return f64::NAN;
    }
    if q == 0.0 {
        return 1.0;
    }
    if q > 0.95 {
        return log_euler_phi(q).exp();
    }
    let mut qk = 1.0;
    let mut prod = 1.0;
    for _ in 0..MAX_SERIES_TERMS {
        qk *= q;
        if qk < 1e-17 {
            break;
        }
        prod *= 1.0 - qk;
    }
    prod
}

/// `ln phi(q)` via `-sum_{k>=1} q^k / (k (1 - q^k))`, which stays accurate
/// where the product form of [`euler_phi`] would need millions of factors.
pub fn log_euler_phi(q: f64) -> f64 {
    if q.is_nan() || !(0.0..1.0).contains(&q) {
        return f64::NAN;
    }
    if q == 0.0 {
        return 0.0;
    }
    let mut qk = 1.0;
    let mut sum = 0.0;
    for k in 1..MAX_SERIES_TERMS {
        qk *= q;
        if qk < 1e-300 {
            return -sum;
        }
        let term = qk / (k as f64 * (-((k as f64) * q.ln()).exp_m1()));
        sum += term;
        if term < SERIES_TOL * sum {
            return -sum;
        }
    }
    f64::NAN
}

/// Trapezoidal quadrature of a `2*pi`-periodic function over `[-pi, pi)^m`,
/// `m <= 3`, with `nodes_per_axis` equally spaced nodes per axis.
///
/// For periodic smooth integrands the trapezoidal rule converges
/// spectrally, so node doubling is an effective error probe.
pub fn quad_periodic<F>(f: F, m: usize, nodes_per_axis: usize) -> Result<f64, SpecFunError>
where
    F: Fn(&[f64]) -> f64,
{
    if m == 0 || m > 3 {
        return Err(SpecFunError::Dimension(m));
    }
    if nodes_per_axis < 2 {
        return Err(SpecFunError::NodeCount(nodes_per_axis));
    }
    let n = nodes_per_axis;
    let h = 2.0 * std::f64::consts::PI / n as f64;
    let node = |j: usize| -std::f64::consts::PI + h * j as f64;
    let mut sum = 0.0;
    let mut point = vec![0.0; m];
    let total = n.pow(m as u32);
    for flat in 0..total {
        let mut rest = flat;
        for coord in point.iter_mut() {
            *coord = node(rest % n);
            rest /= n;
        }
        let v = f(&point);
        if !v.is_finite() {
            return Err(SpecFunError::NonFiniteIntegrand {
                point: point.clone(),
            });
        }
        sum += v;
    }
    Ok(sum * h.powi(m as i32))
}

/// Drive an `n`-indexed evaluation through node doublings until two
/// consecutive values agree to `rel_tol`, diagnosing divergence when the
/// magnitude keeps growing instead.
pub(crate) fn converge_by_doubling<F>(
    eval: F,
    start_nodes: usize,
    cap_nodes: usize,
    rel_tol: f64,
) -> Result<f64, SpecFunError>
where
    F: Fn(usize) -> Result<f64, SpecFunError>,
{
    let mut nodes = start_nodes;
    let mut prev = eval(nodes)?;
    let mut growth_streak = 0u32;
    let mut last_delta = f64::INFINITY;
    while nodes < cap_nodes {
        nodes *= 2;
        let next = eval(nodes)?;
        last_delta = (next - prev).abs();
        if last_delta <= rel_tol * next.abs().max(1.0) {
            return Ok(next);
        }
        if next.abs() > 1.25 * prev.abs().max(1.0) {
            growth_streak += 1;
            if growth_streak >= 3 {
                return Err(SpecFunError::Divergent);
            }
        } else {
            growth_streak = 0;
        }
        prev = next;
    }
    Err(SpecFunError::NonConvergent { last_delta, nodes })
}
