//! Exponent intervals, ψ-weights and spectral measures on the exponent axis.

mod quadrature;

use std::fmt;
use std::sync::Arc;

pub use quadrature::{
    frozen_rule, integrate_interval, Integral, QuadratureScheme, QuadratureSpec, MAX_SUBINTERVALS,
};

use crate::error::{domain, precondition, GlsError, Result};

/// A real map shared between threads.
pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// The exponent interval `(a, b)` with `1 <= a < b <= ∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentInterval {
    a: f64,
    b: f64,
}

impl ExponentInterval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && a >= 1.0) {
            return Err(domain(format!("lower exponent a = {a} must be finite and >= 1")));
        }
        if b.is_nan() || b <= a {
            return Err(domain(format!("upper exponent b = {b} must exceed a = {a}")));
        }
        Ok(Self { a, b })
    }

    /// `(a, ∞)`.
    pub fn unbounded(a: f64) -> Result<Self> {
        Self::new(a, f64::INFINITY)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn is_bounded(&self) -> bool {
        self.b.is_finite()
    }

    pub fn contains_open(&self, p: f64) -> bool {
        p > self.a && p < self.b
    }

    pub fn contains_closed(&self, p: f64) -> bool {
        p >= self.a && p <= self.b
    }
}

/// Conjugate exponent `p' = p / (p - 1)`, with `1' = ∞` and `∞' = 1`.
pub fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// A positive weight ψ on an open exponent interval.
#[derive(Clone)]
pub struct PsiFunction {
    interval: ExponentInterval,
    name: String,
    eval: RealFn,
}

impl fmt::Debug for PsiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PsiFunction")
            .field("name", &self.name)
            .field("interval", &self.interval)
            .finish()
    }
}

impl PsiFunction {
    pub fn custom(
        name: impl Into<String>,
        interval: ExponentInterval,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            interval,
            name: name.into(),
            eval: Arc::new(eval),
        }
    }

    /// ψ(p) = p^β.
    pub fn power(beta: f64, interval: ExponentInterval) -> Self {
        Self::custom(format!("power:{beta}"), interval, move |p| p.powf(beta))
    }

    pub fn constant(interval: ExponentInterval) -> Self {
        Self::custom("const", interval, |_| 1.0)
    }

    /// ψ(p) = (1 - p/b)^{-1/p}, the profile of t^{-1/b} on (0, 1]. Needs b < ∞.
    pub fn blowup(interval: ExponentInterval) -> Result<Self> {
        if !interval.is_bounded() {
            return Err(domain("blowup ψ needs a finite upper exponent"));
        }
        let b = interval.b();
        Ok(Self::custom("blowup", interval, move |p| {
            (1.0 - p / b).powf(-1.0 / p)
        }))
    }

    pub fn interval(&self) -> ExponentInterval {
        self.interval
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// ψ(p) for p in the open interval; ψ = ∞ outside it.
    pub fn eval(&self, p: f64) -> Result<f64> {
        if !self.interval.contains_open(p) {
            return Ok(f64::INFINITY);
        }
        let v = (self.eval)(p);
        if v.is_nan() || v <= 0.0 {
            return Err(GlsError::Evaluation {
                at: p,
                detail: format!("ψ must be positive, got {v}"),
            });
        }
        Ok(v)
    }
}

/// Named density presets accepted by the JSON schema.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityPreset {
    /// h ≡ 1.
    Lebesgue,
    /// h(p) = p^{-2}.
    InverseSquare,
    /// h(p) = p^α.
    Poly(f64),
}

impl DensityPreset {
    pub fn parse(expr: &str) -> Result<Self> {
        match expr {
            "lebesgue" => Ok(Self::Lebesgue),
            "inverse_square" => Ok(Self::InverseSquare),
            _ => match expr.strip_prefix("poly:") {
                Some(alpha) => alpha
                    .trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|a| a.is_finite())
                    .map(Self::Poly)
                    .ok_or_else(|| domain(format!("bad exponent in density preset {expr:?}"))),
                None => Err(domain(format!("unknown density preset {expr:?}"))),
            },
        }
    }

    pub fn expr(&self) -> String {
        match self {
            Self::Lebesgue => "lebesgue".into(),
            Self::InverseSquare => "inverse_square".into(),
            Self::Poly(a) => format!("poly:{a}"),
        }
    }

    pub fn eval(&self, p: f64) -> f64 {
        match *self {
            Self::Lebesgue => 1.0,
            Self::InverseSquare => 1.0 / (p * p),
            Self::Poly(alpha) => p.powf(alpha),
        }
    }
}

/// A nonnegative density h(p) with respect to Lebesgue measure on the exponent axis.
#[derive(Clone)]
pub struct Density {
    name: String,
    preset: Option<DensityPreset>,
    eval: RealFn,
}

impl fmt::Debug for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Density").field("name", &self.name).finish()
    }
}

impl Density {
    pub fn preset(preset: DensityPreset) -> Self {
        Self {
            name: preset.expr(),
            preset: Some(preset),
            eval: Arc::new(move |p| preset.eval(p)),
        }
    }

    pub fn custom(name: impl Into<String>, h: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            preset: None,
            eval: Arc::new(h),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn as_preset(&self) -> Option<DensityPreset> {
        self.preset
    }

    pub fn eval(&self, p: f64) -> f64 {
        (self.eval)(p)
    }
}

/// The measure ν on the exponent axis.
#[derive(Debug, Clone)]
pub enum SpectralMeasure {
    Dirac {
        p0: f64,
    },
    /// Purely atomic measure Σ c_k δ(p - p_k).
    Atoms {
        points: Vec<(f64, f64)>,
    },
    Density {
        density: Density,
        lo: f64,
        hi: f64,
        rule: QuadratureSpec,
    },
}

fn check_exponent(p: f64, what: &str) -> Result<()> {
    if p.is_finite() && p >= 1.0 {
        Ok(())
    } else {
        Err(domain(format!("{what} = {p} must be a finite exponent >= 1")))
    }
}

impl SpectralMeasure {
    pub fn dirac(p0: f64) -> Result<Self> {
        check_exponent(p0, "Dirac point p0")?;
        Ok(Self::Dirac { p0 })
    }

    pub fn atoms(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(domain("atomic measure needs at least one atom"));
        }
        for &(p, c) in &points {
            check_exponent(p, "atom location")?;
            if !(c.is_finite() && c > 0.0) {
                return Err(domain(format!("atom weight {c} at p = {p} must be positive")));
            }
        }
        Ok(Self::Atoms { points })
    }

    /// Density measure on `[lo, hi]`; `hi` must be finite.
    pub fn density(density: Density, lo: f64, hi: f64, rule: QuadratureSpec) -> Result<Self> {
        check_exponent(lo, "density lower end")?;
        if !hi.is_finite() {
            return Err(domain("density measures need a finite upper exponent"));
        }
        if hi <= lo {
            return Err(domain(format!("density support [{lo}, {hi}] is empty")));
        }
        let measure = Self::Density {
            density,
            lo,
            hi,
            rule,
        };
        // Validates nonnegativity at the endpoints and finiteness of the mass.
        if let Self::Density { density, .. } = &measure {
            for p in [lo, 0.5 * (lo + hi), hi] {
                let h = density.eval(p);
                if !(h.is_finite() && h >= 0.0) {
                    return Err(domain(format!("density {} is {h} at p = {p}", density.name())));
                }
            }
        }
        measure.total_mass()?;
        Ok(measure)
    }

    pub fn preset(preset: DensityPreset, lo: f64, hi: f64) -> Result<Self> {
        Self::density(Density::preset(preset), lo, hi, QuadratureSpec::default())
    }

    /// Lebesgue measure on `[lo, hi]`.
    pub fn lebesgue(lo: f64, hi: f64) -> Result<Self> {
        Self::preset(DensityPreset::Lebesgue, lo, hi)
    }

    /// Smallest closed interval carrying the measure.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Self::Dirac { p0 } => (*p0, *p0),
            Self::Atoms { points } => points.iter().fold(
                (f64::INFINITY, f64::NEG_INFINITY),
                |(lo, hi), &(p, _)| (lo.min(p), hi.max(p)),
            ),
            Self::Density { lo, hi, .. } => (*lo, *hi),
        }
    }

    pub fn is_dirac(&self) -> bool {
        matches!(self, Self::Dirac { .. })
    }

    /// Relative tolerance attached to integrals against this measure.
    pub fn tolerance(&self) -> f64 {
        match self {
            Self::Density { rule, .. } => rule.tol,
            _ => 0.0,
        }
    }

    /// ν of the whole support; not normalized.
    pub fn total_mass(&self) -> Result<f64> {
        Ok(self.integrate(|_| 1.0)?.value)
    }

    /// ∫ g(p) ν(dp).
    pub fn integrate<G: Fn(f64) -> f64>(&self, g: G) -> Result<Integral> {
        let at = |p: f64| -> Result<f64> {
            let v = g(p);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(GlsError::Evaluation {
                    at: p,
                    detail: format!("integrand is {v} at a measure atom"),
                })
            }
        };
        match self {
            Self::Dirac { p0 } => Ok(Integral {
                value: at(*p0)?,
                error: 0.0,
                subintervals: 0,
            }),
            Self::Atoms { points } => {
                let mut value = 0.0;
                for &(p, c) in points {
                    value += c * at(p)?;
                }
                Ok(Integral {
                    value,
                    error: 0.0,
                    subintervals: 0,
                })
            }
            Self::Density {
                density,
                lo,
                hi,
                rule,
            } => integrate_interval(|p| g(p) * density.eval(p), *lo, *hi, rule),
        }
    }

    /// Fixed nodes and weights (p_i, w_i) with Σ w_i g(p_i) ≈ ∫ g dν, adapted to `probe`.
    ///
    /// Atoms are returned as-is.
    pub fn frozen_rule<G: Fn(f64) -> f64>(&self, probe: G) -> Result<Vec<(f64, f64)>> {
        match self {
            Self::Dirac { p0 } => Ok(vec![(*p0, 1.0)]),
            Self::Atoms { points } => Ok(points.clone()),
            Self::Density {
                density,
                lo,
                hi,
                rule,
            } => {
                let nodes = frozen_rule(|p| probe(p) * density.eval(p), *lo, *hi, rule)?;
                Ok(nodes
                    .into_iter()
                    .map(|(p, w)| (p, w * density.eval(p)))
                    .collect())
            }
        }
    }

    /// Requires the measure to live inside `[lo, hi]`.
    pub fn check_within(&self, lo: f64, hi: f64) -> Result<()> {
        let (a, b) = self.support();
        if a < lo || b > hi {
            return Err(precondition(format!(
                "measure support [{a}, {b}] is not inside [{lo}, {hi}]"
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_invariants() {
        assert!(ExponentInterval::new(0.5, 2.0).is_err());
        assert!(ExponentInterval::new(2.0, 2.0).is_err());
        assert!(ExponentInterval::new(2.0, f64::NAN).is_err());
        let i = ExponentInterval::unbounded(1.0).unwrap();
        assert!(!i.is_bounded());
        assert!(i.contains_open(1e9) && !i.contains_open(1.0));
    }

    #[test]
    fn integrate_examples() {
        let dirac = SpectralMeasure::dirac(3.0).unwrap();
        assert_eq!(dirac.integrate(|p| p * p).unwrap().value, 9.0);

        let atoms = SpectralMeasure::atoms(vec![(2.0, 1.0), (4.0, 2.0)]).unwrap();
        assert_eq!(atoms.integrate(|p| p).unwrap().value, 10.0);

        // Antiderivative -1/p on [2, 4].
        let inv = SpectralMeasure::preset(DensityPreset::InverseSquare, 2.0, 4.0).unwrap();
        let r = inv.integrate(|_| 1.0).unwrap();
        assert!((r.value - 0.25).abs() < 1e-14);
        assert!(r.error <= 1e-10 * 0.25);
    }

    #[test]
    fn mass_of_each_variant() {
        assert_eq!(SpectralMeasure::dirac(2.0).unwrap().total_mass().unwrap(), 1.0);
        let atoms = SpectralMeasure::atoms(vec![(2.0, 0.5), (3.0, 1.25)]).unwrap();
        assert_eq!(atoms.total_mass().unwrap(), 1.75);
        let poly = SpectralMeasure::preset(DensityPreset::Poly(1.0), 2.0, 4.0).unwrap();
        assert!((poly.total_mass().unwrap() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn construction_errors() {
        assert!(SpectralMeasure::dirac(0.5).is_err());
        assert!(SpectralMeasure::dirac(f64::INFINITY).is_err());
        assert!(SpectralMeasure::atoms(vec![]).is_err());
        assert!(SpectralMeasure::atoms(vec![(2.0, 0.0)]).is_err());
        assert!(SpectralMeasure::lebesgue(2.0, f64::INFINITY).is_err());
        assert!(SpectralMeasure::density(
            Density::custom("neg", |p| 1.0 - p),
            2.0,
            3.0,
            QuadratureSpec::default()
        )
        .is_err());
    }

    #[test]
    fn non_finite_atom_value_is_reported() {
        let atoms = SpectralMeasure::atoms(vec![(2.0, 1.0), (5.0, 1.0)]).unwrap();
        let err = atoms
            .integrate(|p| if p > 4.0 { f64::INFINITY } else { 1.0 })
            .unwrap_err();
        assert!(matches!(err, GlsError::Evaluation { at, .. } if at == 5.0));
    }

    #[test]
    fn presets_parse() {
        assert_eq!(DensityPreset::parse("lebesgue").unwrap(), DensityPreset::Lebesgue);
        assert_eq!(DensityPreset::parse("poly:-1.5").unwrap(), DensityPreset::Poly(-1.5));
        assert!(DensityPreset::parse("poly:x").is_err());
        assert!(DensityPreset::parse("gaussian").is_err());
    }

    #[test]
    fn psi_is_infinite_off_interval() {
        let i = ExponentInterval::new(2.0, 4.0).unwrap();
        let psi = PsiFunction::power(1.0, i);
        assert_eq!(psi.eval(3.0).unwrap(), 3.0);
        assert_eq!(psi.eval(4.0).unwrap(), f64::INFINITY);
        assert!(PsiFunction::blowup(ExponentInterval::unbounded(2.0).unwrap()).is_err());
    }

    #[test]
    fn conjugates() {
        assert_eq!(conjugate_exponent(2.0), 2.0);
        assert_eq!(conjugate_exponent(1.0), f64::INFINITY);
        assert_eq!(conjugate_exponent(f64::INFINITY), 1.0);
        assert!((conjugate_exponent(3.0) - 1.5).abs() < 1e-15);
    }
}
