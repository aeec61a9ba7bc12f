//! Fundamental functions, the exponential transform ζ, the AM(a,b) class test
//! and Laplace-method asymptotes.

use serde::Serialize;

use crate::cgls::{OuterNorm, ENDPOINT_INSET, INFINITE_B_CUTOFF, SUP_SCAN_NODES};
use crate::error::{domain, precondition, GlsError, Result};
use crate::search::scan_then_refine;
use crate::spectral::SpectralMeasure;

/// Maximum derivative order accepted by [`am_class_test`].
pub const MAX_AM_ORDER: usize = 6;
/// Relative slack of the derivative sandwich.
pub const SANDWICH_TOL: f64 = 1e-5;
/// Relative slack of the monotonicity checks behind the exponential bounds.
pub const MONOTONE_TOL: f64 = 1e-9;

fn check_delta(delta: f64) -> Result<()> {
    if delta.is_finite() && delta > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("delta = {delta} must be positive and finite")))
    }
}

/// `ln ∫ exp(x/p) ν(dp)`, shifted by the largest exponent so nothing overflows.
fn log_exp_moment(nu: &SpectralMeasure, x: f64) -> Result<f64> {
    let (lo, hi) = nu.support();
    let shift = if x >= 0.0 { x / lo } else { x / hi };
    let integral = nu.integrate(|p| (x / p - shift).exp())?;
    if !(integral.value > 0.0) {
        return Err(GlsError::Numeric(format!(
            "exponential moment at {x} underflowed to {}",
            integral.value
        )));
    }
    Ok(shift + integral.value.ln())
}

fn finite(v: f64, what: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(GlsError::Numeric(format!("{what} overflowed")))
    }
}

/// `φ(δ)`: the norm of an indicator of a set of measure δ.
///
/// IGLS: `(∫ δ^{Q/p} ν(dp))^{1/Q}`, with `δ^{Q/p}` taken as `exp((Q/p) ln δ)`
/// and accumulated relative to its maximum. GLSup: `sup_p δ^{1/p}/ψ(p)`.
pub fn fundamental_function(outer: &OuterNorm, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let l = delta.ln();
    match outer {
        OuterNorm::Igls { q, nu } => {
            if let SpectralMeasure::Dirac { p0 } = nu {
                return Ok((l / p0).exp());
            }
            let log_phi = log_exp_moment(nu, q * l)? / q;
            finite(log_phi.exp(), "fundamental function")
        }
        OuterNorm::GlSup { psi } => {
            let iv = psi.interval();
            let lo = iv.a() * (1.0 + ENDPOINT_INSET);
            let hi = if iv.is_bounded() {
                iv.b() * (1.0 - ENDPOINT_INSET)
            } else {
                INFINITE_B_CUTOFF
            };
            let m = scan_then_refine(|p| Ok(l / p - psi.eval(p)?.ln()), lo, hi, SUP_SCAN_NODES)?;
            finite(m.value.exp(), "fundamental function")
        }
    }
}

/// `ζ(λ) = ∫ e^{λ/p} ν(dp)`.
pub fn zeta(outer: &OuterNorm, lambda: f64) -> Result<f64> {
    let OuterNorm::Igls { nu, .. } = outer else {
        return Err(precondition("zeta is defined for integral outer norms only"));
    };
    if !lambda.is_finite() {
        return Err(domain(format!("lambda = {lambda} must be finite")));
    }
    if let SpectralMeasure::Dirac { p0 } = nu {
        return finite((lambda / p0).exp(), "zeta");
    }
    finite(log_exp_moment(nu, lambda)?.exp(), "zeta")
}

/// `τ(λ) = φ(e^{λ/Q})^Q` for an arbitrary fundamental function φ.
pub fn tau(phi: impl Fn(f64) -> Result<f64>, q: f64, lambda: f64) -> Result<f64> {
    if !(q.is_finite() && q >= 1.0) {
        return Err(domain(format!("Q = {q} violates Q >= 1")));
    }
    Ok(phi((lambda / q).exp())?.powf(q))
}

/// ζ of a measure evaluated on a fixed quadrature rule.
///
/// Adaptive quadrature re-partitions as λ moves, which puts jumps of the size
/// of the tolerance into ζ; finite differences of order four amplify those by
/// `h^{-4}`. A frozen rule makes ζ an exact finite exponential sum.
#[derive(Debug, Clone)]
pub struct FrozenZeta {
    rule: Vec<(f64, f64)>,
}

impl FrozenZeta {
    /// Adapts the rule to `e^{λ/p}` at both ends of `[lambda_lo, lambda_hi]`.
    pub fn new(nu: &SpectralMeasure, lambda_lo: f64, lambda_hi: f64) -> Result<Self> {
        let (lo, hi) = nu.support();
        let s_lo = lambda_lo / if lambda_lo >= 0.0 { lo } else { hi };
        let s_hi = lambda_hi / if lambda_hi >= 0.0 { lo } else { hi };
        let rule = nu.frozen_rule(|p| {
            (lambda_lo / p - s_lo).exp() + (lambda_hi / p - s_hi).exp() + 1.0
        })?;
        Ok(Self { rule })
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        self.rule.iter().map(|&(p, w)| w * (lambda / p).exp()).sum()
    }

    pub fn nodes(&self) -> usize {
        self.rule.len()
    }
}

/// Outcome of one derivative order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderCheck {
    pub order: usize,
    /// All finite differences exceed the rounding floor.
    pub positive: bool,
    /// First λ where positivity failed.
    pub witness: Option<f64>,
    /// `b^{-k}ζ ≤ ζ^{(k)} ≤ a^{-k}ζ` within tolerance.
    pub sandwich: bool,
    pub sandwich_witness: Option<f64>,
    /// Smallest and largest `ζ^{(k)}/ζ` seen.
    pub min_ratio: f64,
    pub max_ratio: f64,
}

/// Measured constants of `C₁ g₁ ≤ ζ ≤ C₂ g₂` on one side of λ = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundConstants {
    pub c1: f64,
    pub c2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AmVerdict {
    In,
    Out,
}

/// Result of [`am_class_test`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AMTestReport {
    pub a: f64,
    pub b: f64,
    /// Requested order.
    pub k_max: usize,
    /// Highest order the finite differences could resolve.
    pub k_tested: usize,
    pub orders: Vec<OrderCheck>,
    /// `ζ e^{-λ/b}` nondecreasing on the grid.
    pub lower_monotone: bool,
    /// `ζ e^{-λ/a}` nonincreasing on the grid.
    pub upper_monotone: bool,
    pub bound_witness: Option<f64>,
    /// λ ≥ 0: `C₁ e^{λ/b} ≤ ζ ≤ C₂ e^{λ/a}`.
    pub nonnegative: Option<BoundConstants>,
    /// λ ≤ 0: `C₁ e^{λ/a} ≤ ζ ≤ C₂ e^{λ/b}`.
    pub nonpositive: Option<BoundConstants>,
    pub verdict: AmVerdict,
}

impl AMTestReport {
    pub fn is_in(&self) -> bool {
        self.verdict == AmVerdict::In
    }

    pub fn positivity_passed(&self) -> bool {
        self.orders.iter().all(|o| o.positive)
    }

    pub fn sandwich_passed(&self) -> bool {
        self.orders.iter().all(|o| o.sandwich)
    }

    pub fn bounds_passed(&self) -> bool {
        self.lower_monotone && self.upper_monotone
    }
}

/// Finite-difference step used at λ.
pub fn fd_step(lambda: f64) -> f64 {
    1e-2_f64.max(1e-3 * lambda.abs())
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Central difference of order `k` with step `h`, plus the largest |ζ| on the stencil.
fn central_difference(f: &impl Fn(f64) -> f64, lambda: f64, k: usize, h: f64) -> (f64, f64) {
    let mut sum = 0.0;
    let mut peak: f64 = 0.0;
    for j in 0..=k {
        let x = lambda + (k as f64 / 2.0 - j as f64) * h;
        let v = f(x);
        peak = peak.max(v.abs());
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * binomial(k, j) * v;
    }
    (sum / h.powi(k as i32), peak)
}

/// Tests ζ against AM(a,b): positive derivatives up to `k_max`, the derivative
/// sandwich, and the sign-split exponential bounds.
///
/// On a finite grid the bounds are checked through their monotone form:
/// `ζ e^{-λ/b}` must not decrease and `ζ e^{-λ/a}` must not increase, which is
/// what lets the constants measured at λ = 0 extend to the whole line.
pub fn am_class_test(
    zeta_fn: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    k_max: usize,
    lambda_grid: &[f64],
) -> Result<AMTestReport> {
    if !(a.is_finite() && b.is_finite() && 1.0 <= a && a < b) {
        return Err(domain(format!("need 1 <= a < b < inf, got a = {a}, b = {b}")));
    }
    if k_max == 0 || k_max > MAX_AM_ORDER {
        return Err(domain(format!("k_max = {k_max} must lie in 1..={MAX_AM_ORDER}")));
    }
    if lambda_grid.is_empty() || lambda_grid.iter().any(|l| !l.is_finite()) {
        return Err(domain("lambda grid must be nonempty and finite"));
    }
    let mut grid = lambda_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let values: Vec<f64> = grid.iter().map(|&l| zeta_fn(l)).collect();
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(GlsError::Numeric(format!("zeta is {} at lambda = {}", values[i], grid[i])));
    }

    let mut orders = Vec::new();
    let mut k_tested = 0;
    'orders: for k in 1..=k_max {
        let mut check = OrderCheck {
            order: k,
            positive: true,
            witness: None,
            sandwich: true,
            sandwich_witness: None,
            min_ratio: f64::INFINITY,
            max_ratio: f64::NEG_INFINITY,
        };
        let lower = b.powi(-(k as i32));
        let upper = a.powi(-(k as i32));
        for (&l, &z) in grid.iter().zip(&values) {
            let h = fd_step(l);
            let (fd, peak) = central_difference(&zeta_fn, l, k, h);
            let floor = 2f64.powi(k as i32) * 8.0 * f64::EPSILON * peak / h.powi(k as i32);
            if !floor.is_finite() || !fd.is_finite() || floor > 0.5 * lower * z.abs() {
                // The stencil cannot resolve this order any more.
                break 'orders;
            }
            if !(fd > floor) && check.positive {
                check.positive = false;
                check.witness = Some(l);
            }
            let x = h / (2.0 * a);
            let truncation = (x.sinh() / x).powi(k as i32) - 1.0;
            let lo_ok = fd >= lower * z * (1.0 - SANDWICH_TOL) - floor;
            let hi_ok = fd <= upper * z * (1.0 + SANDWICH_TOL + truncation) + floor;
            if !(lo_ok && hi_ok) && check.sandwich {
                check.sandwich = false;
                check.sandwich_witness = Some(l);
            }
            let ratio = fd / z;
            check.min_ratio = check.min_ratio.min(ratio);
            check.max_ratio = check.max_ratio.max(ratio);
        }
        k_tested = k;
        orders.push(check);
    }

    let lows: Vec<f64> = grid.iter().zip(&values).map(|(l, z)| z * (-l / b).exp()).collect();
    let ups: Vec<f64> = grid.iter().zip(&values).map(|(l, z)| z * (-l / a).exp()).collect();
    let mut lower_monotone = true;
    let mut upper_monotone = true;
    let mut bound_witness = None;
    for i in 1..grid.len() {
        let low_ok = lows[i] >= lows[i - 1] * (1.0 - MONOTONE_TOL);
        let up_ok = ups[i] <= ups[i - 1] * (1.0 + MONOTONE_TOL);
        lower_monotone &= low_ok;
        upper_monotone &= up_ok;
        if !(low_ok && up_ok) && bound_witness.is_none() {
            bound_witness = Some(grid[i]);
        }
    }
    let side = |keep: &dyn Fn(f64) -> bool, c1: &[f64], c2: &[f64]| {
        let idx: Vec<usize> = (0..grid.len()).filter(|&i| keep(grid[i])).collect();
        if idx.is_empty() {
            return None;
        }
        Some(BoundConstants {
            c1: idx.iter().map(|&i| c1[i]).fold(f64::INFINITY, f64::min),
            c2: idx.iter().map(|&i| c2[i]).fold(f64::NEG_INFINITY, f64::max),
        })
    };
    let nonnegative = side(&|l| l >= 0.0, &lows, &ups);
    let nonpositive = side(&|l| l <= 0.0, &ups, &lows);

    let constants_ok = [nonnegative, nonpositive]
        .iter()
        .flatten()
        .all(|c| c.c1 > 0.0 && c.c2.is_finite());
    let verdict = if k_tested > 0
        && orders.iter().all(|o| o.positive && o.sandwich)
        && lower_monotone
        && upper_monotone
        && constants_ok
    {
        AmVerdict::In
    } else {
        AmVerdict::Out
    };
    Ok(AMTestReport {
        a,
        b,
        k_max,
        k_tested,
        orders,
        lower_monotone,
        upper_monotone,
        bound_witness,
        nonnegative,
        nonpositive,
        verdict,
    })
}

/// Which endpoint of the support dominates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Endpoint {
    /// `c = a`, relevant as δ → ∞.
    Lower,
    /// `c = b`, relevant as δ → 0+.
    Upper,
}

impl Endpoint {
    /// The endpoint that dominates at δ.
    pub fn for_delta(delta: f64) -> Self {
        if delta >= 1.0 {
            Self::Lower
        } else {
            Self::Upper
        }
    }
}

fn endpoint_setup(
    nu: &SpectralMeasure,
    q: f64,
    delta: f64,
    end: Endpoint,
) -> Result<(f64, f64, f64, &crate::spectral::Density)> {
    let SpectralMeasure::Density { density, lo, hi, .. } = nu else {
        return Err(precondition("saddle asymptotes need a density measure"));
    };
    check_delta(delta)?;
    if !(q.is_finite() && q >= 1.0) {
        return Err(domain(format!("Q = {q} violates Q >= 1")));
    }
    if delta == 1.0 {
        return Err(GlsError::Singular("log(delta) = 0 at delta = 1".into()));
    }
    let c = match end {
        Endpoint::Lower => *lo,
        Endpoint::Upper => *hi,
    };
    let hc = density.eval(c);
    if !(hc.is_finite() && hc > 0.0) {
        return Err(precondition(format!("density is {hc} at the endpoint {c}; must be positive")));
    }
    Ok((c, hc, delta.ln(), density))
}

/// Leading Laplace term `[h(c) c² / (Q |ln δ|)]^{1/Q} δ^{1/c}`.
pub fn saddle_asymptote(nu: &SpectralMeasure, q: f64, delta: f64, end: Endpoint) -> Result<f64> {
    let (c, hc, l, _) = endpoint_setup(nu, q, delta, end)?;
    let log = ((hc * c * c).ln() - (q * l.abs()).ln()) / q + l / c;
    finite(log.exp(), "saddle asymptote")
}

/// Laplace expansion with two correction terms.
///
/// In `u = 1/p` the integral is `∫ e^{Q ln δ · u} g(u) du` with
/// `g(u) = h(1/u)/u²`; the endpoint series is `Σ (±1)^n g^{(n)}(u₀)/M^{n+1}`,
/// `M = Q|ln δ|`. Derivatives of g are one-sided differences inside the support.
pub fn saddle_asymptote_refined(
    nu: &SpectralMeasure,
    q: f64,
    delta: f64,
    end: Endpoint,
) -> Result<f64> {
    let (c, _, l, density) = endpoint_setup(nu, q, delta, end)?;
    let (lo, hi) = nu.support();
    let g = |u: f64| density.eval(1.0 / u) / (u * u);
    let u0 = 1.0 / c;
    // Step toward the interior of [1/hi, 1/lo].
    let width = 1.0 / lo - 1.0 / hi;
    let d = match end {
        Endpoint::Lower => -1e-3 * width,
        Endpoint::Upper => 1e-3 * width,
    };
    let f: Vec<f64> = (0..4).map(|i| g(u0 + i as f64 * d)).collect();
    let g0 = f[0];
    let g1 = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * d);
    let g2 = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / (d * d);
    let m = q * l.abs();
    // Moving away from the peak decreases u for the lower end, increases it for the upper.
    let s = match end {
        Endpoint::Lower => -1.0,
        Endpoint::Upper => 1.0,
    };
    let series = g0 / m + s * g1 / (m * m) + g2 / (m * m * m);
    if !(series > 0.0) {
        return Err(GlsError::Numeric(format!("Laplace series is {series}; delta too close to 1")));
    }
    let log = (q * l / c + series.ln()) / q;
    finite(log.exp(), "refined saddle asymptote")
}

/// φ sampled on a δ grid.
#[derive(Debug, Clone)]
pub struct FundamentalCurve {
    pub space: OuterNorm,
    pub deltas: Vec<f64>,
    pub values: Vec<f64>,
}

impl FundamentalCurve {
    pub fn compute(space: &OuterNorm, deltas: &[f64]) -> Result<Self> {
        let mut sorted = deltas.to_vec();
        sorted.sort_by(f64::total_cmp);
        let values = sorted
            .iter()
            .map(|&d| fundamental_function(space, d))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            space: space.clone(),
            deltas: sorted,
            values,
        })
    }

    /// Fundamental functions are nondecreasing and positive.
    pub fn is_monotone(&self) -> bool {
        self.values.iter().all(|&v| v > 0.0)
            && self
                .values
                .windows(2)
                .all(|w| w[1] >= w[0] * (1.0 - 1e-12))
    }
}
