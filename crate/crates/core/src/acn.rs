//! Absolutely-continuous-norm moduli and the translation-difference modulus.
//!
//! These are necessary-condition diagnostics: a modulus that decays on the
//! tested grid is evidence, not a proof, of order continuity or compactness.

use serde::Serialize;

use crate::cgls::{cgls_norm, OuterNorm};
use crate::error::{domain, precondition, Result};
use crate::profiles::{BaseSpace, LpProfile, SampledFunction, SpaceKind};
use crate::report::ReportRecord;

/// Fraction of the full norm a modulus must fall below to count as decayed.
pub const ACN_FRACTION: f64 = 0.01;

/// `ω(ε) = sup_{μ(E) ≤ ε} ||f·I(E)||` on a decreasing ε grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AcnCurve {
    /// Decreasing.
    pub epsilons: Vec<f64>,
    pub values: Vec<f64>,
    pub full_norm: f64,
}

impl AcnCurve {
    /// `ω(ε)/||f||`, with 0 for the zero function.
    pub fn ratios(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|&v| if self.full_norm > 0.0 { v / self.full_norm } else { 0.0 })
            .collect()
    }

    /// Nondecreasing in ε and bounded by the full norm.
    pub fn is_monotone(&self) -> bool {
        self.values.windows(2).all(|w| w[1] <= w[0])
            && self.values.iter().all(|&v| v <= self.full_norm)
    }

    /// Largest grid ε from which on (towards 0) `ω ≤ fraction · ||f||`.
    pub fn eps0(&self, fraction: f64) -> Option<f64> {
        let ratios = self.ratios();
        let mut found = None;
        for i in (0..self.epsilons.len()).rev() {
            if ratios[i] <= fraction {
                found = Some(self.epsilons[i]);
            } else {
                break;
            }
        }
        found
    }
}

/// The head `f*·I(0, ε)` as weighted nodes, splitting the straddling cell.
fn rearranged_head(rearranged: &SampledFunction, eps: f64) -> SampledFunction {
    let space = rearranged.space();
    let mut points = Vec::new();
    let mut weights = Vec::new();
    let mut values = Vec::new();
    let mut used = 0.0;
    for ((&t, &w), &v) in space.points().iter().zip(space.weights()).zip(rearranged.values()) {
        if used >= eps {
            break;
        }
        let take = w.min(eps - used);
        used += w;
        points.push(t);
        weights.push(take);
        values.push(v);
    }
    if points.is_empty() {
        points.push(0.0);
        weights.push(0.0);
        values.push(0.0);
    }
    let head_space = BaseSpace::weighted(space.kind(), points, weights);
    SampledFunction::new(head_space, values).expect("values come from a valid function")
}

/// ω on the grid `epsilons`, via the decreasing rearrangement: for a
/// rearrangement-invariant lattice norm the worst set of measure ε is where
/// `|f|` is largest.
pub fn acn_modulus(f: &SampledFunction, outer: &OuterNorm, epsilons: &[f64]) -> Result<AcnCurve> {
    if epsilons.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(domain("epsilons must be positive and finite"));
    }
    let mut eps = epsilons.to_vec();
    eps.sort_by(|a, b| b.total_cmp(a));
    eps.dedup();
    let dom = outer.profile_domain();
    let full_norm = cgls_norm(&LpProfile::of(f, dom), outer)?.value;
    if full_norm.is_infinite() {
        return Ok(AcnCurve {
            values: vec![f64::INFINITY; eps.len()],
            epsilons: eps,
            full_norm,
        });
    }
    let rearranged = f.decreasing_rearrangement();
    let mut values = Vec::with_capacity(eps.len());
    for &e in &eps {
        let head = match f.closed().copied() {
            Some(form) if form.rearranged_head_lp(e, 2.0).is_some() => {
                LpProfile::closed_form(dom, move |p| form.rearranged_head_lp(e, p).unwrap_or(f64::NAN))
            }
            _ => LpProfile::of(&rearranged_head(&rearranged, e), dom),
        };
        values.push(cgls_norm(&head, outer)?.value.min(full_norm));
    }
    // Heads are nested, so ω is monotone; quadrature noise must not break that.
    for i in (0..values.len().saturating_sub(1)).rev() {
        values[i] = values[i].max(values[i + 1]);
    }
    Ok(AcnCurve {
        epsilons: eps,
        values,
        full_norm,
    })
}

/// `max_f ω_f(ε)` over a finite family, flagged against [`ACN_FRACTION`] of
/// the family norm bound.
pub fn uniform_acn(family: &[SampledFunction], outer: &OuterNorm, epsilon: f64) -> Result<ReportRecord> {
    if family.is_empty() {
        return Err(precondition("uniform ACN needs a nonempty family"));
    }
    let mut worst = 0.0f64;
    let mut arg = 0usize;
    let mut bound = 0.0f64;
    for (i, f) in family.iter().enumerate() {
        let c = acn_modulus(f, outer, &[epsilon])?;
        bound = bound.max(c.full_norm);
        if c.values[0] > worst {
            worst = c.values[0];
            arg = i;
        }
    }
    Ok(ReportRecord::new("uniform_acn", worst)
        .witness("epsilon", epsilon)
        .witness("argmax", arg as f64)
        .witness("family_norm_bound", bound)
        .with_pass(worst <= ACN_FRACTION * bound))
}

/// [`uniform_acn`] along a grid; the last record's flag says whether the
/// family modulus has decayed by the smallest ε.
pub fn uniform_acn_curve(
    family: &[SampledFunction],
    outer: &OuterNorm,
    epsilons: &[f64],
) -> Result<Vec<ReportRecord>> {
    let mut eps = epsilons.to_vec();
    eps.sort_by(|a, b| b.total_cmp(a));
    eps.iter().map(|&e| uniform_acn(family, outer, e)).collect()
}

/// `||Θ_h f||` with `Θ_h f(t) = f(t + h) − f(t)` on the circle, shifting by the
/// nearest whole number of grid cells.
pub fn difference_modulus(f: &SampledFunction, h_grid: &[f64], outer: &OuterNorm) -> Result<Vec<ReportRecord>> {
    if f.space().kind() != SpaceKind::Circle {
        return Err(precondition("the difference modulus is defined on the circle"));
    }
    let n = f.values().len();
    let dom = outer.profile_domain();
    let mut out = Vec::with_capacity(h_grid.len());
    for &h in h_grid {
        if !(0.0..1.0).contains(&h) {
            return Err(domain(format!("shift h = {h} must lie in [0, 1)")));
        }
        let m = ((h * n as f64).round() as usize) % n;
        let v = f.values();
        let diff = (0..n).map(|i| v[(i + m) % n] - v[i]).collect();
        let theta = SampledFunction::new(f.space().clone(), diff)?;
        let norm = cgls_norm(&LpProfile::of(&theta, dom), outer)?;
        out.push(
            ReportRecord::new("difference_modulus", norm.value)
                .with_error(norm.error)
                .witness("h", h)
                .witness("h_effective", m as f64 / n as f64),
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::ClosedForm;
    use crate::spectral::{ExponentInterval, PsiFunction, SpectralMeasure};

    fn eps_grid() -> Vec<f64> {
        (0..=20).map(|k| 10f64.powi(-k)).collect()
    }

    #[test]
    fn power_head_oracle() {
        let s = BaseSpace::half_line(1.0, 101).unwrap();
        let f = SampledFunction::power_head(s, 0.2).unwrap();
        let outer = OuterNorm::igls(1.0, SpectralMeasure::atoms(vec![(2.0, 1.0)]).unwrap()).unwrap();
        let c = acn_modulus(&f, &outer, &[0.5, 0.1, 1e-3]).unwrap();
        for (e, v) in c.epsilons.iter().zip(&c.values) {
            let want = (5.0f64 / 3.0).sqrt() * e.powf(0.3);
            assert!((v - want).abs() < 1e-14, "eps {e}");
        }
    }

    #[test]
    fn trivial_cases() {
        let s = BaseSpace::half_line(3.0, 301).unwrap();
        let outer = OuterNorm::igls(2.0, SpectralMeasure::lebesgue(2.0, 4.0).unwrap()).unwrap();
        let f = SampledFunction::indicator(s.clone(), 0.0, 1.0).unwrap();
        let c = acn_modulus(&f, &outer, &[2.0, 1.0]).unwrap();
        assert!(c.values.iter().all(|&v| (v - c.full_norm).abs() < 1e-12));
        let z = acn_modulus(&SampledFunction::zero(s), &outer, &[1.0, 0.1]).unwrap();
        assert!(z.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn grid_head_splits_cells() {
        let s = BaseSpace::sequence(4).unwrap();
        let f = SampledFunction::new(s, vec![1.0, 4.0, 2.0, 3.0]).unwrap();
        let outer = OuterNorm::igls(1.0, SpectralMeasure::dirac(1.0).unwrap()).unwrap();
        let c = acn_modulus(&f, &outer, &[2.5, 1.0, 0.5]).unwrap();
        assert_eq!(c.values, vec![4.0 + 3.0 + 1.0, 4.0, 2.0]);
    }

    #[test]
    fn igls_decays_glsup_does_not() {
        let s = BaseSpace::half_line(1.0, 101).unwrap();
        let b = 4.0;
        let f = SampledFunction::power_head(s, 1.0 / b).unwrap();
        let igls = OuterNorm::igls(1.0, SpectralMeasure::lebesgue(2.0, 3.5).unwrap()).unwrap();
        let c = acn_modulus(&f, &igls, &(0..=60).map(|k| 10f64.powi(-k)).collect::<Vec<_>>()).unwrap();
        assert!(c.is_monotone());
        assert!(c.eps0(ACN_FRACTION).is_some());

        let i = ExponentInterval::new(2.0, b).unwrap();
        let gl = OuterNorm::gl_sup(PsiFunction::blowup(i).unwrap());
        let c = acn_modulus(&f, &gl, &eps_grid()).unwrap();
        assert!((c.full_norm - 1.0).abs() < 1e-9);
        assert!(c.ratios().iter().all(|&r| r >= 0.25), "{:?}", c.ratios());
    }

    #[test]
    fn uniform_family() {
        let s = BaseSpace::half_line(1.0, 101).unwrap();
        let outer = OuterNorm::igls(1.0, SpectralMeasure::lebesgue(2.0, 3.0).unwrap()).unwrap();
        let family: Vec<SampledFunction> = (0..=4)
            .map(|k| {
                SampledFunction::closed_form(
                    s.clone(),
                    ClosedForm::Indicator { lo: 0.0, hi: 1.0, amp: k as f64 / 4.0 },
                )
                .unwrap()
            })
            .collect();
        let r = uniform_acn(&family, &outer, 0.5).unwrap();
        assert_eq!(r.get("argmax"), Some(4.0));
        let tails: Vec<SampledFunction> = (0..10)
            .map(|k| SampledFunction::power_head(s.clone(), 0.1 + 0.02 * k as f64).unwrap())
            .collect();
        let recs = uniform_acn_curve(&tails, &outer, &(0..=40).map(|k| 10f64.powi(-k)).collect::<Vec<_>>()).unwrap();
        assert!(recs.last().unwrap().passed());
    }

    #[test]
    fn difference_modulus_sine() {
        let s = BaseSpace::circle(1000).unwrap();
        let f = SampledFunction::from_fn(s.clone(), |t| (2.0 * std::f64::consts::PI * t).sin()).unwrap();
        let outer = OuterNorm::igls(1.0, SpectralMeasure::dirac(2.0).unwrap()).unwrap();
        let recs = difference_modulus(&f, &[0.0, 0.001, 0.1, 0.25, 0.3337], &outer).unwrap();
        for r in &recs {
            let h = r.get("h_effective").unwrap();
            let want = 2.0 * (std::f64::consts::PI * h).sin().abs() * 0.5f64.sqrt();
            assert!((r.value - want).abs() < 1e-12, "h {h}");
        }
        assert_eq!(recs[0].value, 0.0);
        let c = SampledFunction::from_fn(s, |_| 3.0).unwrap();
        assert!(difference_modulus(&c, &[0.2], &outer).unwrap()[0].value == 0.0);
        assert!(difference_modulus(&f, &[1.0], &outer).is_err());
    }
}
