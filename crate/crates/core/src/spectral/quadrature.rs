//! Adaptive nested quadrature on a finite interval.
//!
//! Both schemes run the same global refinement loop: keep a heap of
//! subintervals keyed by their local error estimate, bisect the worst one,
//! stop once the summed error drops below the requested relative tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{precondition, GlsError, Result};

/// Hard cap on the number of subintervals before reporting non-convergence.
pub const MAX_SUBINTERVALS: usize = 4000;

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureScheme {
    /// Gauss-Kronrod 7/15 pair; the error estimate is the rescaled G7/K15 gap.
    #[default]
    #[serde(rename = "gk15")]
    GaussKronrod15,
    /// Simpson's rule against its two-panel refinement, Richardson corrected.
    Simpson,
}

/// Rule selection for density measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Number of equal panels the interval is split into before adapting.
    pub nodes: usize,
    pub scheme: QuadratureScheme,
    /// Relative tolerance on the integral.
    pub tol: f64,
}

impl QuadratureSpec {
    pub fn new(nodes: usize, scheme: QuadratureScheme, tol: f64) -> Result<Self> {
        if nodes < 2 {
            return Err(precondition(format!("quadrature node count {nodes} < 2")));
        }
        if !(tol.is_finite() && tol > 0.0) {
            return Err(precondition(format!("quadrature tolerance {tol} must be > 0")));
        }
        Ok(Self { nodes, scheme, tol })
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            nodes: 4,
            scheme: QuadratureScheme::GaussKronrod15,
            tol: 1e-10,
        }
    }
}

/// An integral value with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub subintervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    abs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        // Ties broken on the left endpoint so refinement order is deterministic.
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

fn eval<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64> {
    let y = f(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(GlsError::Evaluation {
            at: x,
            detail: format!("integrand is {y}"),
        })
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = err.abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}

fn gk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<Panel> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = eval(f, center)?;
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval(f, center - dx)?;
        let f2 = eval(f, center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = res_k * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let error = rescale_error((res_k - res_g) * half, res_abs, res_asc);
    Ok(Panel {
        lo,
        hi,
        value,
        error,
        abs: res_abs,
    })
}

fn simpson<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<Panel> {
    let h = hi - lo;
    let mid = 0.5 * (lo + hi);
    let f0 = eval(f, lo)?;
    let f1 = eval(f, 0.5 * (lo + mid))?;
    let f2 = eval(f, mid)?;
    let f3 = eval(f, 0.5 * (mid + hi))?;
    let f4 = eval(f, hi)?;
    let coarse = h / 6.0 * (f0 + 4.0 * f2 + f4);
    let fine = h / 12.0 * (f0 + 4.0 * f1 + 2.0 * f2 + 4.0 * f3 + f4);
    let abs = h / 12.0 * (f0.abs() + 4.0 * f1.abs() + 2.0 * f2.abs() + 4.0 * f3.abs() + f4.abs());
    let diff = (fine - coarse) / 15.0;
    Ok(Panel {
        lo,
        hi,
        value: fine + diff,
        error: diff.abs().max(50.0 * f64::EPSILON * abs),
        abs,
    })
}

fn panel<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, scheme: QuadratureScheme) -> Result<Panel> {
    match scheme {
        QuadratureScheme::GaussKronrod15 => gk15(f, lo, hi),
        QuadratureScheme::Simpson => simpson(f, lo, hi),
    }
}

fn refine<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<(Vec<Panel>, Integral)> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(precondition(format!(
            "quadrature needs a finite interval, got [{lo}, {hi}]"
        )));
    }
    let mut heap = BinaryHeap::with_capacity(spec.nodes * 4);
    let width = (hi - lo) / spec.nodes as f64;
    for i in 0..spec.nodes {
        let a = lo + width * i as f64;
        let b = if i + 1 == spec.nodes { hi } else { a + width };
        heap.push(panel(f, a, b, spec.scheme)?);
    }
    loop {
        let (value, error, abs) = heap
            .iter()
            .fold((0.0, 0.0, 0.0), |(v, e, s), p| (v + p.value, e + p.error, s + p.abs));
        let target = (spec.tol * value.abs()).max(1e-15 * abs);
        if error <= target {
            let mut panels = heap.into_vec();
            panels.sort_by(|a, b| a.lo.total_cmp(&b.lo));
            let integral = Integral {
                value: panels.iter().map(|p| p.value).sum(),
                error,
                subintervals: panels.len(),
            };
            return Ok((panels, integral));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if heap.len() + 2 > MAX_SUBINTERVALS || mid <= worst.lo || mid >= worst.hi {
            heap.push(worst);
            return Err(GlsError::Convergence {
                estimate: value,
                error,
                subintervals: heap.len(),
            });
        }
        heap.push(panel(f, worst.lo, mid, spec.scheme)?);
        heap.push(panel(f, mid, worst.hi, spec.scheme)?);
    }
}

/// Integrates `f` over `[lo, hi]` to the relative tolerance in `spec`.
pub fn integrate_interval<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    refine(&f, lo, hi, spec).map(|(_, integral)| integral)
}

/// Adapts a partition to `probe`, then returns the fixed Gauss-Kronrod nodes
/// and weights on that partition.
///
/// Applying the returned rule to a family of integrands gives values that are
/// smooth in the family parameter, which finite differences require.
pub fn frozen_rule<F: Fn(f64) -> f64>(
    probe: F,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<Vec<(f64, f64)>> {
    let gk = QuadratureSpec {
        scheme: QuadratureScheme::GaussKronrod15,
        ..*spec
    };
    let (panels, _) = refine(&probe, lo, hi, &gk)?;
    let mut rule = Vec::with_capacity(panels.len() * 15);
    for p in panels {
        let center = 0.5 * (p.lo + p.hi);
        let half = 0.5 * (p.hi - p.lo);
        for j in 0..7 {
            rule.push((center - half * XGK[j], half * WGK[j]));
        }
        rule.push((center, half * WGK[7]));
        for j in (0..7).rev() {
            rule.push((center + half * XGK[j], half * WGK[j]));
        }
    }
    Ok(rule)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let spec = QuadratureSpec::default();
        let r = integrate_interval(|x| x.powi(5) - 3.0 * x * x, 0.0, 2.0, &spec).unwrap();
        assert!((r.value - (64.0 / 6.0 - 8.0)).abs() < 1e-13);
    }

    #[test]
    fn inverse_square_against_antiderivative() {
        for scheme in [QuadratureScheme::GaussKronrod15, QuadratureScheme::Simpson] {
            let spec = QuadratureSpec::new(2, scheme, 1e-12).unwrap();
            let r = integrate_interval(|p| p.powi(-2), 2.0, 4.0, &spec).unwrap();
            assert!((r.value - 0.25).abs() < 1e-12, "{scheme:?}: {}", r.value);
        }
    }

    #[test]
    fn sharp_peak_converges() {
        let spec = QuadratureSpec::default();
        // Laplace-type integrand concentrated at the left endpoint.
        let l = 200.0;
        let r = integrate_interval(|p| (l * (1.0 / p - 0.5)).exp(), 2.0, 4.0, &spec).unwrap();
        let u = |p: f64| 1.0 / p;
        // substitution u = 1/p: int e^{l(u-1/2)} / u^2 du over [1/4, 1/2]
        let fine = QuadratureSpec::new(64, QuadratureScheme::GaussKronrod15, 1e-13).unwrap();
        let check = integrate_interval(
            |x| (l * (x - 0.5)).exp() / (x * x),
            u(4.0),
            u(2.0),
            &fine,
        )
        .unwrap();
        assert!((r.value / check.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn non_finite_integrand_names_the_node() {
        let spec = QuadratureSpec::default();
        let err = integrate_interval(|x| if x > 1.5 { f64::NAN } else { 1.0 }, 1.0, 2.0, &spec)
            .unwrap_err();
        match err {
            GlsError::Evaluation { at, .. } => assert!(at > 1.5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn refinement_limit_reports_best_estimate() {
        let spec = QuadratureSpec::new(2, QuadratureScheme::GaussKronrod15, 1e-15).unwrap();
        let err = integrate_interval(|x: f64| (1.0 / x).sin() * 1e3, 1e-9, 1.0, &spec).unwrap_err();
        assert!(matches!(err, GlsError::Convergence { estimate, .. } if estimate.is_finite()));
    }

    #[test]
    fn frozen_rule_integrates_the_probe() {
        let spec = QuadratureSpec::default();
        let rule = frozen_rule(|p| (3.0 / p).exp(), 2.0, 4.0, &spec).unwrap();
        let total: f64 = rule.iter().map(|(x, w)| w * (3.0 / x).exp()).sum();
        let direct = integrate_interval(|p| (3.0 / p).exp(), 2.0, 4.0, &spec).unwrap();
        assert!((total / direct.value - 1.0).abs() < 1e-12);
        assert!(rule.iter().all(|(x, w)| *x > 2.0 && *x < 4.0 && *w > 0.0));
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::new(1, QuadratureScheme::GaussKronrod15, 1e-8).is_err());
        assert!(QuadratureSpec::new(4, QuadratureScheme::GaussKronrod15, 0.0).is_err());
    }
}
