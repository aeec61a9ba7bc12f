//! Operators with known L_p → L_p bounds K(p) and the transfer norm `⟨|g|_p / K(p)⟩`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::cgls::{cgls_norm, NormValue, OuterNorm};
use crate::error::{domain, precondition, Result};
use crate::profiles::{BaseSpace, LpProfile, SampledFunction, SpaceKind};
use crate::report::ReportRecord;
use crate::spectral::{ExponentInterval, RealFn};

/// Default constant in the maximal-operator bound `C p/(p-1)`.
pub const DEFAULT_MAXIMAL_C: f64 = 2.0;
/// Transfer-bound slack when both profiles are analytic.
pub const CLOSED_FORM_TOL: f64 = 1e-9;
/// Transfer-bound slack for grid-discretized operators.
pub const DISCRETE_TOL: f64 = 2e-2;

/// `U[f](t) = t^{-1}∫_0^t f` on the half-line, the running mean on sequences.
pub fn hardy_average(f: &SampledFunction) -> Result<SampledFunction> {
    let space = f.space().clone();
    match space.kind() {
        SpaceKind::Sequence => {
            let mut sum = 0.0;
            let values = f
                .values()
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    sum += v;
                    sum / (i + 1) as f64
                })
                .collect();
            SampledFunction::new(space, values)
        }
        SpaceKind::HalfLine => {
            if let Some(form) = f.closed().and_then(|c| c.hardy_average()) {
                return SampledFunction::closed_form(space, form);
            }
            let t = space.points();
            let v = f.values();
            let mut out = Vec::with_capacity(t.len());
            let mut integral = if t[0] > 0.0 { v[0] * t[0] } else { 0.0 };
            out.push(if t[0] > 0.0 { integral / t[0] } else { v[0] });
            for i in 1..t.len() {
                integral += 0.5 * (v[i] + v[i - 1]) * (t[i] - t[i - 1]);
                out.push(integral / t[i]);
            }
            SampledFunction::new(space, out)
        }
        other => Err(precondition(format!("Hardy averaging needs a sequence or the half-line, not {other:?}"))),
    }
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn slope(a: (f64, f64), b: (f64, f64)) -> f64 {
    (b.1 - a.1) / (b.0 - a.0)
}

/// For each point, the largest slope to any earlier point.
///
/// The maximizer is the tangent point on the lower convex hull of the earlier
/// points; along the hull that slope is unimodal, so each query is a binary search.
fn max_slope_from_left(pts: &[(f64, f64)]) -> Vec<f64> {
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    let mut out = Vec::with_capacity(pts.len());
    for &p in pts {
        if hull.is_empty() {
            out.push(f64::NEG_INFINITY);
        } else {
            let (mut lo, mut hi) = (0, hull.len() - 1);
            while lo < hi {
                let mid = (lo + hi) / 2;
                if slope(hull[mid], p) <= slope(hull[mid + 1], p) {
                    lo = mid + 1;
                } else {
                    hi = mid;
                }
            }
            out.push(slope(hull[lo], p));
        }
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    out
}

/// Uncentered maximal function over grid intervals containing each node.
///
/// An average over `[u, v] ∋ t` is a convex combination of the averages over
/// `[u, t]` and `[t, v]`, so `Mf(t)` is the larger of the two one-sided
/// maxima, each a largest-slope query on the cumulative integral.
pub fn hl_maximal(f: &SampledFunction) -> Result<SampledFunction> {
    let space = f.space().clone();
    if !matches!(space.kind(), SpaceKind::RealLine | SpaceKind::HalfLine) {
        return Err(precondition(format!("maximal function needs a line, not {:?}", space.kind())));
    }
    let t = space.points();
    let a: Vec<f64> = f.values().iter().map(|v| v.abs()).collect();
    let mut cumulative = Vec::with_capacity(t.len());
    let mut s = 0.0;
    cumulative.push(0.0);
    for i in 1..t.len() {
        s += 0.5 * (a[i] + a[i - 1]) * (t[i] - t[i - 1]);
        cumulative.push(s);
    }
    let forward: Vec<(f64, f64)> = t.iter().copied().zip(cumulative.iter().copied()).collect();
    let left = max_slope_from_left(&forward);
    // Mirroring both coordinates keeps slopes and reverses the order.
    let mirrored: Vec<(f64, f64)> = forward.iter().rev().map(|&(x, y)| (-x, -y)).collect();
    let mut right = max_slope_from_left(&mirrored);
    right.reverse();
    let values = (0..t.len()).map(|i| a[i].max(left[i]).max(right[i])).collect();
    SampledFunction::new(space, values)
}

/// `Hf(t_i) = π^{-1} Σ_{j≠i} f(t_j) Δt / (t_i − t_j)` on a uniform real-line grid.
///
/// With uniform spacing this is the discrete convolution of f with `1/(πk)`,
/// `k ≠ 0`, evaluated by a zero-padded FFT.
pub fn hilbert_transform(f: &SampledFunction) -> Result<SampledFunction> {
    let space = f.space().clone();
    if space.kind() != SpaceKind::RealLine {
        return Err(precondition(format!("Hilbert transform needs the real line, not {:?}", space.kind())));
    }
    if space.step().is_none() {
        return Err(precondition("Hilbert transform needs a uniform grid"));
    }
    let n = f.values().len();
    let len = (2 * n).next_power_of_two();
    let mut signal: Vec<Complex<f64>> = vec![Complex::new(0.0, 0.0); len];
    for (s, &v) in signal.iter_mut().zip(f.values()) {
        s.re = v;
    }
    let mut kernel: Vec<Complex<f64>> = vec![Complex::new(0.0, 0.0); len];
    for k in 1..n {
        let c = 1.0 / (PI * k as f64);
        kernel[k].re = c;
        kernel[len - k].re = -c;
    }
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(len);
    forward.process(&mut signal);
    forward.process(&mut kernel);
    for (s, k) in signal.iter_mut().zip(&kernel) {
        *s *= k;
    }
    planner.plan_fft_inverse(len).process(&mut signal);
    let scale = 1.0 / len as f64;
    SampledFunction::new(space, signal[..n].iter().map(|c| c.re * scale).collect())
}

/// Direct O(n²) evaluation of the same PV sum; the reference for the FFT path.
pub fn hilbert_transform_direct(f: &SampledFunction) -> Result<SampledFunction> {
    let space = f.space().clone();
    if space.kind() != SpaceKind::RealLine || space.step().is_none() {
        return Err(precondition("Hilbert transform needs a uniform real-line grid"));
    }
    let v = f.values();
    let n = v.len();
    let values = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| v[j] / (PI * (i as f64 - j as f64)))
                .sum()
        })
        .collect();
    SampledFunction::new(space, values)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KpKind {
    Hilbert,
    Maximal,
    HardyAverage,
    Custom,
}

/// The operator bound `|U f|_p ≤ K(p) |f|_p`.
#[derive(Clone)]
pub struct KpConstant {
    kind: KpKind,
    name: String,
    validity: ExponentInterval,
    eval: RealFn,
}

impl fmt::Debug for KpConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KpConstant")
            .field("kind", &self.kind)
            .field("name", &self.name)
            .field("validity", &self.validity)
            .finish()
    }
}

fn open_half_line() -> ExponentInterval {
    ExponentInterval::unbounded(1.0).expect("(1, ∞) is a valid interval")
}

impl KpConstant {
    /// `p/(p-1)`, the sharp Hardy constant.
    pub fn hardy_average() -> Self {
        Self {
            kind: KpKind::HardyAverage,
            name: "p/(p-1)".into(),
            validity: open_half_line(),
            eval: Arc::new(|p| p / (p - 1.0)),
        }
    }

    /// `tan(π/2p)` for `p ≤ 2`, `cot(π/2p)` for `p ≥ 2`.
    pub fn hilbert() -> Self {
        Self {
            kind: KpKind::Hilbert,
            name: "pichorides".into(),
            validity: open_half_line(),
            eval: Arc::new(|p| {
                let x = PI / (2.0 * p);
                if p <= 2.0 {
                    x.tan()
                } else {
                    1.0 / x.tan()
                }
            }),
        }
    }

    /// `C p/(p-1)`.
    pub fn maximal(c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(domain(format!("maximal constant C = {c} must be positive")));
        }
        Ok(Self {
            kind: KpKind::Maximal,
            name: format!("{c}*p/(p-1)"),
            validity: open_half_line(),
            eval: Arc::new(move |p| c * p / (p - 1.0)),
        })
    }

    /// The envelope `C p²/(p-1)`.
    pub fn envelope(c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(domain(format!("envelope constant C = {c} must be positive")));
        }
        Ok(Self::custom(format!("{c}*p^2/(p-1)"), open_half_line(), move |p| {
            c * p * p / (p - 1.0)
        }))
    }

    pub fn custom(
        name: impl Into<String>,
        validity: ExponentInterval,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            kind: KpKind::Custom,
            name: name.into(),
            validity,
            eval: Arc::new(f),
        }
    }

    pub fn kind(&self) -> KpKind {
        self.kind
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn validity(&self) -> ExponentInterval {
        self.validity
    }

    pub fn eval(&self, p: f64) -> Result<f64> {
        if !self.validity.contains_open(p) {
            return Err(domain(format!(
                "p = {p} outside the validity interval ({}, {}) of K = {}",
                self.validity.a(),
                self.validity.b(),
                self.name
            )));
        }
        let k = (self.eval)(p);
        if !(k.is_finite() && k > 0.0) {
            return Err(domain(format!("K({p}) = {k} must be positive and finite")));
        }
        Ok(k)
    }
}

/// Preset K(p); maximal uses `C = 2`.
pub fn kp_constant(kind: KpKind, p: f64) -> Result<f64> {
    let k = match kind {
        KpKind::Hilbert => KpConstant::hilbert(),
        KpKind::Maximal => KpConstant::maximal(DEFAULT_MAXIMAL_C)?,
        KpKind::HardyAverage => KpConstant::hardy_average(),
        KpKind::Custom => return Err(domain("custom K(p) has no preset formula")),
    };
    k.eval(p)
}

/// Functions with `|||g||| = ⟨|g|_p / K(p)⟩ < ∞`.
#[derive(Debug, Clone)]
pub struct TransferSpace {
    pub outer: OuterNorm,
    pub k: KpConstant,
}

impl TransferSpace {
    /// Checks that K is finite across the support of the outer norm.
    pub fn new(outer: OuterNorm, k: KpConstant) -> Result<Self> {
        let (lo, hi) = outer.support();
        let probes: Vec<f64> = match &outer {
            OuterNorm::Igls { nu, .. } => match nu {
                crate::SpectralMeasure::Atoms { points } => points.iter().map(|&(p, _)| p).collect(),
                _ => (0..=16).map(|i| lo + (hi - lo) * i as f64 / 16.0).collect(),
            },
            OuterNorm::GlSup { .. } => {
                let top = if hi.is_finite() { hi } else { 1e6 };
                (1..16)
                    .map(|i| (lo.ln() + (top.ln() - lo.ln()) * i as f64 / 16.0).exp())
                    .collect()
            }
        };
        for p in probes {
            k.eval(p)?;
        }
        Ok(Self { outer, k })
    }
}

/// `⟨p ↦ g(p)/K(p)⟩`.
pub fn transfer_norm(g: &LpProfile, space: &TransferSpace) -> Result<NormValue> {
    let k = space.k.clone();
    // K is checked eagerly so a failure surfaces as an error, not a NaN.
    let reweighted = g.map(move |p, v| match k.eval(p) {
        Ok(kp) => v / kp,
        Err(_) => f64::NAN,
    });
    cgls_norm(&reweighted, &space.outer)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    Hilbert,
    Maximal,
    HardyAverage,
}

impl OperatorKind {
    pub fn apply(&self, f: &SampledFunction) -> Result<SampledFunction> {
        match self {
            Self::Hilbert => hilbert_transform(f),
            Self::Maximal => hl_maximal(f),
            Self::HardyAverage => hardy_average(f),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Hilbert => "hilbert",
            Self::Maximal => "maximal",
            Self::HardyAverage => "hardy_average",
        }
    }

    /// The preset bound paired with the operator.
    pub fn default_k(&self) -> KpConstant {
        match self {
            Self::Hilbert => KpConstant::hilbert(),
            Self::Maximal => KpConstant::maximal(DEFAULT_MAXIMAL_C).expect("default C is positive"),
            Self::HardyAverage => KpConstant::hardy_average(),
        }
    }
}

/// Slack for [`verify_transfer_bound`]: tight when both sides are analytic.
pub fn default_tolerance(f: &SampledFunction, uf: &SampledFunction) -> f64 {
    if f.closed().is_some() && uf.closed().is_some() {
        CLOSED_FORM_TOL
    } else {
        DISCRETE_TOL
    }
}

/// Checks `|||U f||| ≤ ⟨f⟩` with the default tolerance.
pub fn verify_transfer_bound(
    op: OperatorKind,
    f: &SampledFunction,
    space: &TransferSpace,
) -> Result<ReportRecord> {
    verify_transfer_bound_with_tol(op, f, space, None)
}

pub fn verify_transfer_bound_with_tol(
    op: OperatorKind,
    f: &SampledFunction,
    space: &TransferSpace,
    tol: Option<f64>,
) -> Result<ReportRecord> {
    let uf = op.apply(f)?;
    let dom = space.outer.profile_domain();
    let lhs = transfer_norm(&LpProfile::of(&uf, dom), space)?;
    let rhs = cgls_norm(&LpProfile::of(f, dom), &space.outer)?;
    let tol = tol.unwrap_or_else(|| default_tolerance(f, &uf)) + space.outer.tolerance();
    let ratio = if rhs.value > 0.0 {
        lhs.value / rhs.value
    } else if lhs.value == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(ReportRecord::new(op.name(), ratio)
        .with_error(lhs.error + rhs.error)
        .witness("lhs", lhs.value)
        .witness("rhs", rhs.value)
        .witness("tol", tol)
        .with_pass(ratio <= 1.0 + tol))
}

/// Uniform real-line grid with `n` nodes on `[-half_width, half_width]`.
pub fn operator_grid(half_width: f64, n: usize) -> Result<BaseSpace> {
    BaseSpace::real_line(half_width, n)
}
