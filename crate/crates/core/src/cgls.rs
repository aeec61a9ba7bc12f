//! Outer norms applied to L_p profiles.

use std::cell::Cell;

use serde::Serialize;

use crate::error::{domain, precondition, Result};
use crate::profiles::{LpProfile, SampledFunction};
use crate::search::scan_then_refine;
use crate::spectral::{ExponentInterval, PsiFunction, SpectralMeasure};

/// Number of log-spaced nodes in the coarse sup scan.
pub const SUP_SCAN_NODES: usize = 256;
/// Relative inset from the open endpoints of a ψ interval.
pub const ENDPOINT_INSET: f64 = 1e-6;
/// Scan cutoff replacing `b = ∞`.
pub const INFINITE_B_CUTOFF: f64 = 1e6;

/// The functional ⟨·⟩ applied to a profile.
#[derive(Debug, Clone)]
pub enum OuterNorm {
    /// `sup_{p∈(a,b)} h(p)/ψ(p)`.
    GlSup { psi: PsiFunction },
    /// `(∫ h(p)^Q ν(dp))^{1/Q}`.
    Igls { q: f64, nu: SpectralMeasure },
}

/// A norm evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormValue {
    pub value: f64,
    /// Maximizing exponent for sup norms.
    pub witness: Option<f64>,
    /// Estimated absolute error.
    pub error: f64,
}

impl NormValue {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            witness: None,
            error: 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }
}

impl OuterNorm {
    pub fn igls(q: f64, nu: SpectralMeasure) -> Result<Self> {
        if !(q.is_finite() && q >= 1.0) {
            return Err(domain(format!("Q = {q} violates Q >= 1")));
        }
        Ok(Self::Igls { q, nu })
    }

    pub fn gl_sup(psi: PsiFunction) -> Self {
        Self::GlSup { psi }
    }

    pub fn q(&self) -> Option<f64> {
        match self {
            Self::Igls { q, .. } => Some(*q),
            Self::GlSup { .. } => None,
        }
    }

    pub fn measure(&self) -> Option<&SpectralMeasure> {
        match self {
            Self::Igls { nu, .. } => Some(nu),
            Self::GlSup { .. } => None,
        }
    }

    /// Closed exponent range the norm looks at.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Self::Igls { nu, .. } => nu.support(),
            Self::GlSup { psi } => (psi.interval().a(), psi.interval().b()),
        }
    }

    /// Smallest exponent domain a profile must cover.
    pub fn profile_domain(&self) -> ExponentInterval {
        let (lo, hi) = self.support();
        let hi = if hi > lo { hi } else { f64::INFINITY };
        ExponentInterval::new(lo, hi).expect("supports are valid exponent ranges")
    }

    /// Relative error budget of one evaluation.
    pub fn tolerance(&self) -> f64 {
        match self {
            Self::Igls { nu, .. } => nu.tolerance(),
            Self::GlSup { .. } => 1e-9,
        }
    }

    pub fn norm(&self, h: &LpProfile) -> Result<NormValue> {
        cgls_norm(h, self)
    }
}

fn check_covers(h: &LpProfile, lo: f64, hi: f64) -> Result<()> {
    let d = h.domain();
    if d.a() > lo || d.b() < hi {
        return Err(domain(format!(
            "profile domain [{}, {}] does not cover [{lo}, {hi}]",
            d.a(),
            d.b()
        )));
    }
    Ok(())
}

/// `⟨h⟩` for either outer norm.
pub fn cgls_norm(h: &LpProfile, outer: &OuterNorm) -> Result<NormValue> {
    match outer {
        OuterNorm::Igls { q, nu } => igls_norm(h, *q, nu),
        OuterNorm::GlSup { psi } => gl_sup_norm(h, psi),
    }
}

fn igls_norm(h: &LpProfile, q: f64, nu: &SpectralMeasure) -> Result<NormValue> {
    let (lo, hi) = nu.support();
    check_covers(h, lo, hi)?;
    match nu {
        // Remark-style reduction: no powering round trip.
        SpectralMeasure::Dirac { p0 } => Ok(NormValue::exact(h.eval(*p0)?)),
        SpectralMeasure::Atoms { .. } => igls_norm_atoms(h, q, nu),
        SpectralMeasure::Density { .. } => {
            let diverged = Cell::new(false);
            let failure = Cell::new(None);
            let integral = nu.integrate(|p| match h.eval(p) {
                Ok(v) if v.is_infinite() => {
                    diverged.set(true);
                    0.0
                }
                Ok(v) => v.powf(q),
                Err(e) => {
                    failure.set(Some(e));
                    0.0
                }
            })?;
            if let Some(e) = failure.into_inner() {
                return Err(e);
            }
            if diverged.get() {
                return Ok(NormValue::exact(f64::INFINITY));
            }
            let value = integral.value.max(0.0).powf(1.0 / q);
            let error = if integral.value > 0.0 {
                value * integral.error / (q * integral.value)
            } else {
                integral.error.powf(1.0 / q)
            };
            Ok(NormValue {
                value,
                witness: None,
                error,
            })
        }
    }
}

fn gl_sup_norm(h: &LpProfile, psi: &PsiFunction) -> Result<NormValue> {
    let iv = psi.interval();
    check_covers(h, iv.a(), iv.b())?;
    let lo = iv.a() * (1.0 + ENDPOINT_INSET);
    let hi = if iv.is_bounded() {
        iv.b() * (1.0 - ENDPOINT_INSET)
    } else {
        INFINITE_B_CUTOFF
    };
    let m = scan_then_refine(
        |p| {
            let v = h.eval(p)?;
            if v == 0.0 {
                return Ok(0.0);
            }
            Ok(v / psi.eval(p)?)
        },
        lo,
        hi,
        SUP_SCAN_NODES,
    )?;
    Ok(NormValue {
        value: m.value,
        witness: Some(m.arg),
        error: m.spread,
    })
}

/// `[Σ c_k h(p_k)^Q]^{1/Q}` for an atomic measure; no quadrature error.
pub fn igls_norm_atoms(h: &LpProfile, q: f64, atoms: &SpectralMeasure) -> Result<NormValue> {
    let SpectralMeasure::Atoms { points } = atoms else {
        return Err(precondition("igls_norm_atoms needs an atomic measure"));
    };
    if !(q.is_finite() && q >= 1.0) {
        return Err(domain(format!("Q = {q} violates Q >= 1")));
    }
    let mut sum = 0.0;
    for &(p, c) in points {
        if !h.domain().contains_closed(p) {
            return Err(domain(format!("atom p = {p} outside the profile domain")));
        }
        let v = h.eval(p)?;
        if v.is_infinite() {
            return Ok(NormValue::exact(f64::INFINITY));
        }
        sum += c * v.powf(q);
    }
    Ok(NormValue::exact(sum.powf(1.0 / q)))
}

/// `[∫ (|f|_x / x^α)^p ν(dx)]^{1/p}`, the IGLS norm of the reweighted profile.
pub fn lukomsky_norm(
    f: &SampledFunction,
    p: f64,
    alpha: f64,
    nu: &SpectralMeasure,
) -> Result<NormValue> {
    if !alpha.is_finite() {
        return Err(domain(format!("alpha = {alpha} must be finite")));
    }
    let outer = OuterNorm::igls(p, nu.clone())?;
    let domain = ExponentInterval::unbounded(1.0)?;
    let weighted = LpProfile::of(f, domain).map(move |x, v| v * x.powf(-alpha));
    cgls_norm(&weighted, &outer)
}
