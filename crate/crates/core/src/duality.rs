//! Conjugate-exponent norms, the Hölder dual bound and the fundamental-product diagnostic.

use crate::cgls::{cgls_norm, NormValue, OuterNorm};
use crate::error::{domain, precondition, Result};
use crate::fundamental::fundamental_function;
use crate::profiles::{LpProfile, SampledFunction};
use crate::report::ReportRecord;
use crate::spectral::{conjugate_exponent, Density, ExponentInterval, SpectralMeasure};

/// Slack allowed in `|∫fg| ≤ ||f|| ||g||_{Q'}`.
pub const HOLDER_TOL: f64 = 1e-9;

fn check_q(q: f64) -> Result<f64> {
    if q.is_finite() && q > 1.0 {
        Ok(q / (q - 1.0))
    } else {
        Err(domain(format!("Q = {q} must exceed 1; Q' = Q/(Q-1) is infinite at Q = 1")))
    }
}

/// `G^{(Q')}` seen from the primal: same ν, profile probed at `p' = p/(p-1)`.
#[derive(Debug, Clone)]
pub struct ConjugateSpace {
    pub q_prime: f64,
    pub nu: SpectralMeasure,
}

impl ConjugateSpace {
    pub fn new(q: f64, nu: SpectralMeasure) -> Result<Self> {
        let q_prime = check_q(q)?;
        let (lo, _) = nu.support();
        if lo <= 1.0 {
            return Err(domain("p = 1 in the support of nu has an infinite conjugate"));
        }
        Ok(Self { q_prime, nu })
    }

    pub fn q(&self) -> f64 {
        self.q_prime / (self.q_prime - 1.0)
    }

    pub fn exponent(&self, p: f64) -> f64 {
        conjugate_exponent(p)
    }

    /// Closed range of `p'` over the support of ν.
    pub fn conjugate_range(&self) -> (f64, f64) {
        let (lo, hi) = self.nu.support();
        (conjugate_exponent(hi), conjugate_exponent(lo))
    }

    /// `(∫ g(p')^{Q'} ν(dp))^{1/Q'}`.
    pub fn norm(&self, g: &LpProfile) -> Result<NormValue> {
        let (c_lo, c_hi) = self.conjugate_range();
        let d = g.domain();
        if d.a() > c_lo || d.b() < c_hi {
            return Err(domain(format!(
                "profile domain [{}, {}] does not cover the conjugate range [{c_lo}, {c_hi}]",
                d.a(),
                d.b()
            )));
        }
        let (lo, hi) = self.nu.support();
        let primal = ExponentInterval::new(lo, if hi > lo { hi } else { f64::INFINITY })?;
        let pulled = g.compose(primal, conjugate_exponent);
        let outer = OuterNorm::igls(self.q_prime, self.nu.clone())?;
        cgls_norm(&pulled, &outer)
    }
}

/// `||g||_{Q'} = (∫ g(p')^{Q'} ν(dp))^{1/Q'}`.
pub fn qprime_norm(g: &LpProfile, q: f64, nu: &SpectralMeasure) -> Result<NormValue> {
    ConjugateSpace::new(q, nu.clone())?.norm(g)
}

/// Checks `|∫ f g dμ| ≤ ||f||_Y · ||g||_{Q'}`.
///
/// The bound is stated for ν of total mass one. ν is not rescaled anywhere
/// else, so here the right side is divided by `ν((a,b))`, which is the same
/// bound with both norms taken against `ν / ν((a,b))`.
pub fn holder_pairing_check(
    f: &SampledFunction,
    g: &SampledFunction,
    outer: &OuterNorm,
) -> Result<ReportRecord> {
    let OuterNorm::Igls { q, nu } = outer else {
        return Err(precondition("the dual bound is stated for integral outer norms"));
    };
    let conj = ConjugateSpace::new(*q, nu.clone())?;
    let lhs = f.pairing(g)?.abs();
    if !lhs.is_finite() {
        return Err(crate::GlsError::Evaluation {
            at: f64::NAN,
            detail: format!("pairing integral is {lhs}"),
        });
    }
    let f_norm = cgls_norm(&LpProfile::of(f, outer.profile_domain()), outer)?;
    let (c_lo, c_hi) = conj.conjugate_range();
    let g_dom = ExponentInterval::new(c_lo, if c_hi > c_lo { c_hi } else { f64::INFINITY })?;
    let g_norm = conj.norm(&LpProfile::of(g, g_dom))?;
    let mass = nu.total_mass()?;
    let rhs = f_norm.value * g_norm.value / mass;
    let ratio = if rhs > 0.0 { lhs / rhs } else if lhs == 0.0 { 0.0 } else { f64::INFINITY };
    let error = (f_norm.error * g_norm.value + g_norm.error * f_norm.value) / mass;
    Ok(ReportRecord::new("holder_ratio", ratio)
        .with_error(if rhs > 0.0 { ratio * error / rhs } else { 0.0 })
        .witness("lhs", lhs)
        .witness("rhs", rhs)
        .witness("norm_f", f_norm.value)
        .witness("norm_g_qprime", g_norm.value)
        .witness("nu_mass", mass)
        .with_pass(lhs <= rhs * (1.0 + HOLDER_TOL)))
}

/// Pushforward of ν under `p ↦ p'`: atoms move, densities pick up `|dp/dp'| = 1/(p'-1)²`.
pub fn conjugate_measure(nu: &SpectralMeasure) -> Result<SpectralMeasure> {
    let (lo, _) = nu.support();
    if lo <= 1.0 {
        return Err(domain("p = 1 in the support of nu has an infinite conjugate"));
    }
    match nu {
        SpectralMeasure::Dirac { p0 } => SpectralMeasure::dirac(conjugate_exponent(*p0)),
        SpectralMeasure::Atoms { points } => SpectralMeasure::atoms(
            points
                .iter()
                .map(|&(p, c)| (conjugate_exponent(p), c))
                .collect(),
        ),
        SpectralMeasure::Density {
            density,
            lo,
            hi,
            rule,
        } => {
            let h = density.clone();
            let pushed = Density::custom(format!("conjugate({})", density.name()), move |q| {
                h.eval(q / (q - 1.0)) / ((q - 1.0) * (q - 1.0))
            });
            SpectralMeasure::density(pushed, conjugate_exponent(*hi), conjugate_exponent(*lo), *rule)
        }
    }
}

/// `r(δ) = φ_Y(δ) φ_cand(δ) / δ` on a δ grid, followed by a `spread` record
/// holding `max r / min r`. For a true dual pair r ≡ 1.
pub fn fundamental_product_report(outer: &OuterNorm, delta_grid: &[f64]) -> Result<Vec<ReportRecord>> {
    let OuterNorm::Igls { q, nu } = outer else {
        return Err(precondition("the fundamental product is defined for integral outer norms"));
    };
    let q_prime = check_q(*q)?;
    let candidate = OuterNorm::igls(q_prime, conjugate_measure(nu)?)?;
    let mut grid: Vec<f64> = delta_grid.to_vec();
    grid.retain(|&d| d != 1.0);
    if grid.is_empty() {
        return Err(precondition("delta grid is empty once delta = 1 is excluded"));
    }
    let mut records = Vec::with_capacity(grid.len() + 1);
    let (mut rmin, mut rmax) = (f64::INFINITY, f64::NEG_INFINITY);
    for &d in &grid {
        let primal = fundamental_function(outer, d)?;
        let cand = fundamental_function(&candidate, d)?;
        let r = primal * cand / d;
        rmin = rmin.min(r);
        rmax = rmax.max(r);
        records.push(
            ReportRecord::new("r", r)
                .witness("delta", d)
                .witness("phi_primal", primal)
                .witness("phi_candidate", cand),
        );
    }
    records.push(
        ReportRecord::new("spread", rmax / rmin)
            .witness("r_min", rmin)
            .witness("r_max", rmax),
    );
    Ok(records)
}
