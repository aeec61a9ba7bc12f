use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use super::sampled::SampledFunction;
use crate::error::{domain, GlsError, Result};
use crate::spectral::ExponentInterval;

type ProfileFn = Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>;

/// Where the profile values come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    Quadrature,
    Derived,
}

/// The map `p ↦ |f|_p` on an exponent interval.
///
/// Values may be `+∞`: grand Lebesgue norms legitimately probe exponents
/// where the function is not integrable.
#[derive(Clone)]
pub struct LpProfile {
    domain: ExponentInterval,
    eval: ProfileFn,
    provenance: Provenance,
}

impl fmt::Debug for LpProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LpProfile")
            .field("domain", &self.domain)
            .field("provenance", &self.provenance)
            .finish()
    }
}

impl LpProfile {
    pub fn closed_form(
        domain: ExponentInterval,
        h: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            domain,
            eval: Arc::new(move |p| Ok(h(p))),
            provenance: Provenance::ClosedForm,
        }
    }

    pub fn constant(domain: ExponentInterval, c: f64) -> Self {
        Self::closed_form(domain, move |_| c)
    }

    /// Profile of a sampled function; evaluated points are memoized.
    pub fn of(f: &SampledFunction, domain: ExponentInterval) -> Self {
        let provenance = if f.closed().is_some() {
            Provenance::ClosedForm
        } else {
            Provenance::Quadrature
        };
        let f = f.clone();
        let memo: Mutex<HashMap<u64, f64>> = Mutex::new(HashMap::new());
        Self {
            domain,
            eval: Arc::new(move |p| {
                let key = p.to_bits();
                if let Some(v) = memo.lock().expect("memo poisoned").get(&key) {
                    return Ok(*v);
                }
                let v = f.lp_norm(p)?;
                memo.lock().expect("memo poisoned").insert(key, v);
                Ok(v)
            }),
            provenance,
        }
    }

    pub fn domain(&self) -> ExponentInterval {
        self.domain
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// `h(p)` for `p` in the closed domain.
    pub fn eval(&self, p: f64) -> Result<f64> {
        if !self.domain.contains_closed(p) {
            return Err(domain(format!(
                "p = {p} outside profile domain [{}, {}]",
                self.domain.a(),
                self.domain.b()
            )));
        }
        let v = (self.eval)(p)?;
        if v.is_nan() || v < 0.0 {
            return Err(GlsError::Evaluation {
                at: p,
                detail: format!("profile value {v} is not a nonnegative extended real"),
            });
        }
        Ok(v)
    }

    /// Pointwise transform `p ↦ g(p, h(p))`.
    pub fn map(&self, g: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        let inner = self.clone();
        Self {
            domain: self.domain,
            eval: Arc::new(move |p| Ok(g(p, inner.eval(p)?))),
            provenance: Provenance::Derived,
        }
    }

    /// `p ↦ h(φ(p))` on a new domain; `φ` must map it into the old one.
    pub fn compose(
        &self,
        domain: ExponentInterval,
        phi: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let inner = self.clone();
        Self {
            domain,
            eval: Arc::new(move |p| inner.eval(phi(p))),
            provenance: Provenance::Derived,
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(move |_, v| c.abs() * v)
    }

    /// Pointwise sum; the domain is the intersection.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        let lo = self.domain.a().max(other.domain.a());
        let hi = self.domain.b().min(other.domain.b());
        let domain = ExponentInterval::new(lo, hi)?;
        let (x, y) = (self.clone(), other.clone());
        Ok(Self {
            domain,
            eval: Arc::new(move |p| Ok(x.eval(p)? + y.eval(p)?)),
            provenance: Provenance::Derived,
        })
    }

    /// Restricts the domain; the new domain must sit inside the old one.
    pub fn restrict(&self, domain: ExponentInterval) -> Result<Self> {
        if domain.a() < self.domain.a() || domain.b() > self.domain.b() {
            return Err(crate::error::domain("restriction leaves the profile domain"));
        }
        Ok(Self {
            domain,
            ..self.clone()
        })
    }

    /// `ln h(p_mid) - (ln h(p0) + ln h(p1))/2` with `1/p_mid` the midpoint of `1/p0, 1/p1`.
    ///
    /// L_p norms are log-convex in `1/p`, so this is `<= 0` wherever the three values are finite.
    pub fn log_convexity_defect(&self, p0: f64, p1: f64) -> Result<f64> {
        let mid = 2.0 / (1.0 / p0 + 1.0 / p1);
        let (h0, h1, hm) = (self.eval(p0)?, self.eval(p1)?, self.eval(mid)?);
        Ok(hm.ln() - 0.5 * (h0.ln() + h1.ln()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{BaseSpace, SampledFunction};

    fn dom(a: f64, b: f64) -> ExponentInterval {
        ExponentInterval::new(a, b).unwrap()
    }

    #[test]
    fn profile_examples() {
        let s = BaseSpace::half_line(4.0, 401).unwrap();
        let ind = SampledFunction::indicator(s.clone(), 0.0, 1.0).unwrap();
        let h = LpProfile::of(&ind, dom(1.0, 10.0));
        assert_eq!(h.eval(3.3).unwrap(), 1.0);
        let h2 = LpProfile::of(&ind.scale(2.0), dom(1.0, 10.0));
        assert_eq!(h2.eval(7.0).unwrap(), 2.0);

        let tail = SampledFunction::power_tail(s, 1.0 / 2.05).unwrap();
        let ht = LpProfile::of(&tail, dom(2.0, 4.0));
        assert_eq!(ht.eval(2.0).unwrap(), f64::INFINITY);
        assert_eq!(ht.eval(2.05).unwrap(), f64::INFINITY);
        let want = (3.0f64 / 2.05 - 1.0).powf(-1.0 / 3.0);
        assert!((ht.eval(3.0).unwrap() / want - 1.0).abs() < 1e-14);
        assert!(ht.eval(4.5).is_err());
    }

    #[test]
    fn memoized_profile_is_stable() {
        let s = BaseSpace::real_line(2.0, 101).unwrap();
        let f = SampledFunction::from_fn(s, |t| (-t * t).exp()).unwrap();
        let h = LpProfile::of(&f, dom(1.0, 5.0));
        assert_eq!(h.provenance(), Provenance::Quadrature);
        let first = h.eval(2.5).unwrap();
        assert_eq!(h.eval(2.5).unwrap().to_bits(), first.to_bits());
    }

    #[test]
    fn grid_profiles_are_log_convex() {
        let s = BaseSpace::real_line(3.0, 61).unwrap();
        let f = SampledFunction::from_fn(s, |t| 1.0 + (3.0 * t).cos().abs() * t).unwrap();
        let h = LpProfile::of(&f, dom(1.0, 20.0));
        for (p0, p1) in [(1.0, 2.0), (1.5, 19.0), (3.0, 4.0)] {
            assert!(h.log_convexity_defect(p0, p1).unwrap() <= 1e-13);
        }
    }
}
