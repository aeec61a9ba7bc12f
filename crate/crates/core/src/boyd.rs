//! Dilation `σ_s f(t) = f(t/s)` on the half-line and Boyd index estimates.

use serde::Serialize;

use crate::cgls::{cgls_norm, OuterNorm};
use crate::error::{domain, precondition, Result};
use crate::profiles::LpProfile;
use crate::spectral::SpectralMeasure;

/// Each side of 1 must be covered by at least this many decades.
pub const MIN_DECADES: f64 = 4.0;
/// Concentration parameters ε = 0.5·2^{-k}, k = 0..=FAMILY_STEPS.
pub const FAMILY_STEPS: i32 = 20;

fn check_s(s: f64) -> Result<()> {
    if s.is_finite() && s > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("dilation factor s = {s} must be positive and finite")))
    }
}

/// `p ↦ s^{1/p} h(p)`, since `|σ_s f|_p = s^{1/p} |f|_p` on the half-line.
pub fn dilate_profile(h: &LpProfile, s: f64) -> Result<LpProfile> {
    check_s(s)?;
    let ln_s = s.ln();
    Ok(h.map(move |p, v| if v == 0.0 { 0.0 } else { (ln_s / p).exp() * v }))
}

/// Profiles over which the operator norm is bounded from below.
#[derive(Debug, Clone)]
pub enum DilationFamily {
    /// Power tails `t^{-1/(a-ε)} I(t ≥ 1)` piling mass at `a`, power heads
    /// `t^{-1/(b+ε)} I(0 < t ≤ 1)` piling mass at `b`, and `I(0,1]`.
    EndpointConcentrating,
    Profiles(Vec<LpProfile>),
}

impl DilationFamily {
    pub fn members(&self, outer: &OuterNorm) -> Vec<(String, LpProfile)> {
        match self {
            Self::Profiles(v) => v
                .iter()
                .enumerate()
                .map(|(i, h)| (format!("profile[{i}]"), h.clone()))
                .collect(),
            Self::EndpointConcentrating => {
                let dom = outer.profile_domain();
                let (a, b) = outer.support();
                let mut out = vec![("indicator".to_string(), LpProfile::constant(dom, 1.0))];
                for k in 0..=FAMILY_STEPS {
                    let eps = 0.5 * 2f64.powi(-k);
                    let r = a - eps;
                    if r > 0.0 {
                        out.push((
                            format!("tail eps={eps:e}"),
                            LpProfile::closed_form(dom, move |p| (p / r - 1.0).powf(-1.0 / p)),
                        ));
                    }
                    if b.is_finite() {
                        let r = b + eps;
                        out.push((
                            format!("head eps={eps:e}"),
                            LpProfile::closed_form(dom, move |p| (1.0 - p / r).powf(-1.0 / p)),
                        ));
                    }
                }
                out
            }
        }
    }
}

/// Bracket on `||σ_s||`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DilationBound {
    pub s: f64,
    pub lower: f64,
    pub upper: f64,
    /// Family member attaining `lower`.
    pub witness: Option<String>,
    /// Members skipped because their norm is infinite or zero.
    pub skipped: usize,
}

/// `s^{1/a}` for `s ≥ 1`, `s^{1/b}` for `s ≤ 1`.
pub fn dilation_upper(outer: &OuterNorm, s: f64) -> Result<f64> {
    check_s(s)?;
    let (a, b) = outer.support();
    let c = if s >= 1.0 { a } else { b };
    Ok((s.ln() / c).exp())
}

/// Lower and upper bounds on the operator norm of σ_s.
pub fn dilation_norm(outer: &OuterNorm, s: f64, family: &DilationFamily) -> Result<DilationBound> {
    let upper = dilation_upper(outer, s)?;
    if let Some(SpectralMeasure::Dirac { .. }) = outer.measure() {
        return Ok(DilationBound {
            s,
            lower: upper,
            upper,
            witness: Some("dirac".into()),
            skipped: 0,
        });
    }
    let mut lower = f64::NEG_INFINITY;
    let mut witness = None;
    let mut skipped = 0;
    for (label, h) in family.members(outer) {
        let base = cgls_norm(&h, outer)?.value;
        if !(base.is_finite() && base > 0.0) {
            skipped += 1;
            continue;
        }
        let dilated = cgls_norm(&dilate_profile(&h, s)?, outer)?.value;
        if !dilated.is_finite() {
            skipped += 1;
            continue;
        }
        let ratio = dilated / base;
        if ratio > lower {
            lower = ratio;
            witness = Some(label);
        }
    }
    if witness.is_none() {
        return Err(precondition("every family member has an infinite or zero norm"));
    }
    Ok(DilationBound {
        s,
        lower,
        upper,
        witness,
        skipped,
    })
}

/// One row of a Boyd trajectory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoydPoint {
    pub s: f64,
    pub lower: f64,
    pub upper: f64,
    /// `ln lower / ln s`.
    pub index: f64,
    /// Log-corrected bracket; present once `|ln s| > 1`.
    pub bracket: Option<(f64, f64)>,
}

/// Result of [`boyd_indices`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoydEstimate {
    pub points: Vec<BoydPoint>,
    /// Index at the smallest s.
    pub alpha_hat: f64,
    /// Index at the largest s.
    pub beta_hat: f64,
    /// Bracket constants measured from the non-extreme part of the grid.
    pub c_beta: f64,
    pub c_alpha: f64,
    /// Whether the extreme-s indices fall inside their brackets.
    pub beta_contained: bool,
    pub alpha_contained: bool,
    pub skipped: usize,
}

impl BoydEstimate {
    /// Indices at s > 1, in increasing s.
    pub fn beta_trajectory(&self) -> Vec<f64> {
        self.points.iter().filter(|p| p.s > 1.0).map(|p| p.index).collect()
    }
}

/// Log-corrected slack `ln|ln s|/(Q|ln s|) + C/|ln s|`.
fn slack(s: f64, q: f64, c: f64) -> f64 {
    let l = s.ln().abs();
    l.ln() / (q * l) + c / l
}

/// Estimates α = lim_{s→0} and β = lim_{s→∞} of `ln ||σ_s|| / ln s` at the
/// grid extremes, with brackets `[1/a − slack, 1/a]` and `[1/b, 1/b + slack]`.
///
/// The bracket constant is fitted on the calibration points (`|ln s| ≥ e`,
/// extreme excluded) and then tested at the extreme.
pub fn boyd_indices(outer: &OuterNorm, s_grid: &[f64]) -> Result<BoydEstimate> {
    let mut grid: Vec<f64> = s_grid.to_vec();
    for &s in &grid {
        check_s(s)?;
    }
    grid.retain(|&s| s != 1.0);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let (smin, smax) = match (grid.first(), grid.last()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => return Err(precondition("s grid is empty")),
    };
    if smax.log10() < MIN_DECADES || -smin.log10() < MIN_DECADES {
        return Err(precondition(format!(
            "s grid [{smin:e}, {smax:e}] must span {MIN_DECADES} decades above and below 1"
        )));
    }
    let (a, b) = outer.support();
    let q = outer.q().unwrap_or(f64::INFINITY);
    let dirac = outer.measure().and_then(|m| match m {
        SpectralMeasure::Dirac { p0 } => Some(*p0),
        _ => None,
    });

    let family = DilationFamily::EndpointConcentrating;
    let mut points = Vec::with_capacity(grid.len());
    let mut skipped = 0;
    for &s in &grid {
        let bound = dilation_norm(outer, s, &family)?;
        skipped += bound.skipped;
        let index = match dirac {
            Some(p0) => 1.0 / p0,
            None => bound.lower.ln() / s.ln(),
        };
        points.push(BoydPoint {
            s,
            lower: bound.lower,
            upper: bound.upper,
            index,
            bracket: None,
        });
    }

    // (1/a − index)|ln s| − ln|ln s|/Q over calibration points.
    let measure_c = |above: bool| -> f64 {
        let extreme = if above { smax } else { smin };
        points
            .iter()
            .filter(|p| (p.s > 1.0) == above && p.s != extreme && p.s.ln().abs() >= std::f64::consts::E)
            .map(|p| {
                let l = p.s.ln().abs();
                let gap = if above { 1.0 / a - p.index } else { p.index - 1.0 / b };
                gap * l - l.ln() / q
            })
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let finite_or_zero = |c: f64| if c.is_finite() { c } else { 0.0 };
    let c_beta = finite_or_zero(measure_c(true));
    let c_alpha = finite_or_zero(measure_c(false));
    for p in &mut points {
        if p.s.ln().abs() <= 1.0 {
            continue;
        }
        p.bracket = Some(if p.s > 1.0 {
            (1.0 / a - slack(p.s, q, c_beta), 1.0 / a)
        } else {
            (1.0 / b, 1.0 / b + slack(p.s, q, c_alpha))
        });
    }
    let contained = |p: &BoydPoint| {
        p.bracket
            .map(|(lo, hi)| lo <= p.index && p.index <= hi)
            .unwrap_or(false)
    };
    let first = &points[0];
    let last = &points[points.len() - 1];
    Ok(BoydEstimate {
        alpha_hat: first.index,
        beta_hat: last.index,
        c_beta,
        c_alpha,
        beta_contained: contained(last),
        alpha_contained: contained(first),
        skipped,
        points,
    })
}
