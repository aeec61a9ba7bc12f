use std::sync::Arc;

use super::closed_form::ClosedForm;
use super::space::{BaseSpace, SpaceKind};
use crate::error::{domain, precondition, GlsError, Result};

/// A real function sampled on the nodes of a [`BaseSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    space: BaseSpace,
    values: Arc<[f64]>,
    closed: Option<ClosedForm>,
}

impl SampledFunction {
    pub fn new(space: BaseSpace, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(domain(format!(
                "{} values for a grid of {} points",
                values.len(),
                space.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(GlsError::Evaluation {
                at: space.points()[i],
                detail: format!("sample value {} is not finite", values[i]),
            });
        }
        Ok(Self {
            space,
            values: values.into(),
            closed: None,
        })
    }

    pub fn from_fn(space: BaseSpace, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = space.points().iter().map(|&t| f(t)).collect();
        Self::new(space, values)
    }

    /// Samples a closed-form family and keeps the formula for exact norms.
    pub fn closed_form(space: BaseSpace, form: ClosedForm) -> Result<Self> {
        form.validate().map_err(GlsError::Domain)?;
        if !form.fits(space.kind()) {
            return Err(domain(format!("{form:?} does not live on {:?}", space.kind())));
        }
        let cell = space.weights()[0];
        let values = space.points().iter().map(|&t| form.eval(t, cell)).collect();
        let mut f = Self::new(space, values)?;
        f.closed = Some(form);
        Ok(f)
    }

    pub fn indicator(space: BaseSpace, lo: f64, hi: f64) -> Result<Self> {
        Self::closed_form(space, ClosedForm::Indicator { lo, hi, amp: 1.0 })
    }

    /// `t^{-exponent}·I(t >= 1)`.
    pub fn power_tail(space: BaseSpace, exponent: f64) -> Result<Self> {
        Self::closed_form(space, ClosedForm::PowerTail { exponent, start: 1.0, amp: 1.0 })
    }

    /// `t^{-exponent}·I(0 < t <= 1)`.
    pub fn power_head(space: BaseSpace, exponent: f64) -> Result<Self> {
        Self::closed_form(space, ClosedForm::PowerHead { exponent, end: 1.0, amp: 1.0 })
    }

    pub fn zero(space: BaseSpace) -> Self {
        let n = space.len();
        Self {
            space,
            values: vec![0.0; n].into(),
            closed: None,
        }
    }

    pub fn space(&self) -> &BaseSpace {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn closed(&self) -> Option<&ClosedForm> {
        self.closed.as_ref()
    }

    /// Same samples without the analytic tag.
    pub fn without_closed_form(&self) -> Self {
        Self {
            closed: None,
            ..self.clone()
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            space: self.space.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
            closed: self.closed.map(|f| f.with_amp(c * f.amp())),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let values = self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| a + b)
            .collect();
        Self::new(self.space.clone(), values)
    }

    pub fn abs(&self) -> Self {
        Self {
            space: self.space.clone(),
            values: self.values.iter().map(|v| v.abs()).collect(),
            closed: self.closed.map(|f| f.with_amp(f.amp().abs())),
        }
    }

    pub(crate) fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(precondition("functions live on different base spaces"));
        }
        Ok(())
    }

    /// `|f|_p` from the grid quadrature, ignoring any analytic tag.
    pub fn grid_lp_norm(&self, p: f64) -> Result<f64> {
        check_exponent(p)?;
        let scale = self
            .values
            .iter()
            .zip(self.space.weights())
            .filter(|(_, w)| **w > 0.0)
            .fold(0.0f64, |m, (v, _)| m.max(v.abs()));
        if p.is_infinite() || scale == 0.0 {
            return Ok(scale);
        }
        let sum: f64 = self
            .values
            .iter()
            .zip(self.space.weights())
            .map(|(v, w)| w * (v.abs() / scale).powf(p))
            .sum();
        let norm = scale * sum.powf(1.0 / p);
        if norm.is_nan() {
            return Err(GlsError::Evaluation {
                at: p,
                detail: "grid norm is NaN".into(),
            });
        }
        Ok(norm)
    }

    /// `|f|_p = (∫|f|^p dμ)^{1/p}`; `p = ∞` gives the sup.
    ///
    /// Closed-form functions use their analytic norm; grid samples use the
    /// trapezoid weights (exact sums on sequences).
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        check_exponent(p)?;
        match &self.closed {
            Some(form) => Ok(form.lp_norm(p)),
            None => self.grid_lp_norm(p),
        }
    }

    /// Analytic `∫_{T}^∞ |f|^p` beyond the last grid node, if known.
    pub fn truncation_tail(&self, p: f64) -> Option<f64> {
        let t_max = *self.space.points().last()?;
        self.closed.and_then(|f| f.tail_mass(t_max, p))
    }

    /// `∫ f g dμ`.
    pub fn pairing(&self, other: &Self) -> Result<f64> {
        self.check_same_space(other)?;
        if let (Some(a), Some(b)) = (&self.closed, &other.closed) {
            if let Some(v) = a.pairing(b) {
                return Ok(v);
            }
        }
        Ok(self
            .values
            .iter()
            .zip(other.values.iter())
            .zip(self.space.weights())
            .map(|((a, b), w)| a * b * w)
            .sum())
    }

    /// Equimeasurable nonincreasing rearrangement `f*` of `|f|` on `(0, μ(T))`.
    ///
    /// Each node keeps its own weight; the node sits at the midpoint of the
    /// cell it occupies after sorting, so every `|f|_p` is preserved exactly.
    pub fn decreasing_rearrangement(&self) -> Self {
        let mut order: Vec<usize> = (0..self.values.len()).collect();
        order.sort_by(|&i, &j| {
            self.values[j]
                .abs()
                .total_cmp(&self.values[i].abs())
                .then(i.cmp(&j))
        });
        let weights: Vec<f64> = order.iter().map(|&i| self.space.weights()[i]).collect();
        let values: Vec<f64> = order.iter().map(|&i| self.values[i].abs()).collect();
        let space = if self.space.kind() == SpaceKind::Sequence {
            BaseSpace::weighted(SpaceKind::Sequence, self.space.points().to_vec(), weights)
        } else {
            let mut acc = 0.0;
            let points = weights
                .iter()
                .map(|w| {
                    let mid = acc + 0.5 * w;
                    acc += w;
                    mid
                })
                .collect();
            BaseSpace::weighted(SpaceKind::HalfLine, points, weights)
        };
        Self {
            space,
            values: values.into(),
            closed: self.closed.and_then(|f| f.rearranged()),
        }
    }

    /// `t ↦ f(t/s)` on the half-line by linear interpolation (zero past the grid).
    pub fn dilate(&self, s: f64) -> Result<Self> {
        if !(s.is_finite() && s > 0.0) {
            return Err(domain(format!("dilation factor {s} must be positive")));
        }
        if self.space.kind() != SpaceKind::HalfLine {
            return Err(precondition("dilation is defined on the half-line"));
        }
        if let Some(form) = self.closed.and_then(|f| f.dilated(s)) {
            return Self::closed_form(self.space.clone(), form);
        }
        let pts = self.space.points();
        let vals = &self.values;
        let values = pts
            .iter()
            .map(|&t| interpolate(pts, vals, t / s))
            .collect();
        Self::new(self.space.clone(), values)
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(domain(format!("L_p needs p >= 1, got {p}")));
    }
    Ok(())
}

fn interpolate(points: &[f64], values: &[f64], x: f64) -> f64 {
    let n = points.len();
    if x < points[0] || x > points[n - 1] {
        return 0.0;
    }
    let i = points.partition_point(|&t| t <= x);
    if i == 0 {
        return values[0];
    }
    if i == n {
        return values[n - 1];
    }
    let (t0, t1) = (points[i - 1], points[i]);
    let w = (x - t0) / (t1 - t0);
    values[i - 1] * (1.0 - w) + values[i] * w
}
