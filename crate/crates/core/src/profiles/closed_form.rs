//! Function families with analytic L_p norms.
//!
//! Grid truncation makes power tails and large-δ probes useless, so sampled
//! functions built from these families carry the formula along with the samples.

use serde::{Deserialize, Serialize};

use super::space::SpaceKind;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ClosedForm {
    /// `amp · I[lo, hi]`.
    Indicator { lo: f64, hi: f64, amp: f64 },
    /// `amp · t^{-exponent} · I(t >= start)` on the half-line.
    PowerTail { exponent: f64, start: f64, amp: f64 },
    /// `amp · t^{-exponent} · I(0 < t <= end)` on the half-line.
    PowerHead { exponent: f64, end: f64, amp: f64 },
    /// `amp · e^{-rate·t}` on the half-line.
    ExpDecay { rate: f64, amp: f64 },
    /// `amp · e^{-t²}` on the real line.
    Gaussian { amp: f64 },
    /// Hardy average of `amp · I(0, len]`: `amp` up to `len`, then `amp·len/t`.
    HardyIndicator { len: f64, amp: f64 },
    /// Hardy average of `amp · t^{-exponent} · I(0 < t <= end)`.
    HardyPowerHead { exponent: f64, end: f64, amp: f64 },
}

fn root(x: f64, p: f64) -> f64 {
    if x.is_infinite() {
        f64::INFINITY
    } else {
        x.powf(1.0 / p)
    }
}

impl ClosedForm {
    pub fn amp(&self) -> f64 {
        match *self {
            Self::Indicator { amp, .. }
            | Self::PowerTail { amp, .. }
            | Self::PowerHead { amp, .. }
            | Self::ExpDecay { amp, .. }
            | Self::Gaussian { amp }
            | Self::HardyIndicator { amp, .. }
            | Self::HardyPowerHead { amp, .. } => amp,
        }
    }

    pub fn with_amp(mut self, new: f64) -> Self {
        match &mut self {
            Self::Indicator { amp, .. }
            | Self::PowerTail { amp, .. }
            | Self::PowerHead { amp, .. }
            | Self::ExpDecay { amp, .. }
            | Self::Gaussian { amp }
            | Self::HardyIndicator { amp, .. }
            | Self::HardyPowerHead { amp, .. } => *amp = new,
        }
        self
    }

    /// Whether the family makes sense on the given base space.
    pub fn fits(&self, kind: SpaceKind) -> bool {
        match self {
            Self::Indicator { .. } => kind != SpaceKind::Sequence,
            Self::Gaussian { .. } => kind == SpaceKind::RealLine,
            _ => kind == SpaceKind::HalfLine,
        }
    }

    /// Parameter sanity; returns a message on violation.
    pub fn validate(&self) -> Result<(), String> {
        let ok = match *self {
            Self::Indicator { lo, hi, amp } => lo.is_finite() && hi.is_finite() && lo < hi && amp.is_finite(),
            Self::PowerTail { exponent, start, amp } => {
                exponent.is_finite() && exponent >= 0.0 && start > 0.0 && start.is_finite() && amp.is_finite()
            }
            Self::PowerHead { exponent, end, amp } | Self::HardyPowerHead { exponent, end, amp } => {
                exponent.is_finite() && (0.0..1.0).contains(&exponent) && end > 0.0 && end.is_finite() && amp.is_finite()
            }
            Self::ExpDecay { rate, amp } => rate.is_finite() && rate > 0.0 && amp.is_finite(),
            Self::Gaussian { amp } => amp.is_finite(),
            Self::HardyIndicator { len, amp } => len.is_finite() && len > 0.0 && amp.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(format!("invalid closed-form parameters {self:?}"))
        }
    }

    /// Pointwise value.
    ///
    /// At `t = 0` the singular head families return their mean over `[0, cell]`,
    /// so a trapezoid node at the origin carries the right mass.
    pub fn eval(&self, t: f64, cell: f64) -> f64 {
        match *self {
            Self::Indicator { lo, hi, amp } => {
                if t >= lo && t <= hi {
                    amp
                } else {
                    0.0
                }
            }
            Self::PowerTail { exponent, start, amp } => {
                if t >= start {
                    amp * t.powf(-exponent)
                } else {
                    0.0
                }
            }
            Self::PowerHead { exponent, end, amp } => {
                if t <= 0.0 {
                    amp * cell.min(end).powf(-exponent) / (1.0 - exponent)
                } else if t <= end {
                    amp * t.powf(-exponent)
                } else {
                    0.0
                }
            }
            Self::ExpDecay { rate, amp } => amp * (-rate * t).exp(),
            Self::Gaussian { amp } => amp * (-t * t).exp(),
            Self::HardyIndicator { len, amp } => {
                if t <= len {
                    amp
                } else {
                    amp * len / t
                }
            }
            Self::HardyPowerHead { exponent, end, amp } => {
                let c = amp / (1.0 - exponent);
                if t <= 0.0 {
                    c * cell.min(end).powf(-exponent) / (1.0 - exponent)
                } else if t <= end {
                    c * t.powf(-exponent)
                } else {
                    c * end.powf(1.0 - exponent) / t
                }
            }
        }
    }

    /// `|f|_p`, with `+∞` where the integral diverges. `p = ∞` gives the sup.
    pub fn lp_norm(&self, p: f64) -> f64 {
        let a = self.amp().abs();
        if a == 0.0 {
            return 0.0;
        }
        if p.is_infinite() {
            return match *self {
                Self::PowerTail { exponent, start, .. } => a * start.powf(-exponent),
                Self::PowerHead { exponent, .. } if exponent > 0.0 => f64::INFINITY,
                Self::HardyPowerHead { exponent, .. } if exponent > 0.0 => f64::INFINITY,
                Self::HardyPowerHead { exponent, .. } => a / (1.0 - exponent),
                _ => a,
            };
        }
        match *self {
            Self::Indicator { lo, hi, .. } => a * root(hi - lo, p),
            Self::PowerTail { exponent, start, .. } => {
                let ep = exponent * p;
                if ep > 1.0 {
                    a * root(start.powf(1.0 - ep) / (ep - 1.0), p)
                } else {
                    f64::INFINITY
                }
            }
            Self::PowerHead { exponent, end, .. } => {
                let ep = exponent * p;
                if ep < 1.0 {
                    a * root(end.powf(1.0 - ep) / (1.0 - ep), p)
                } else {
                    f64::INFINITY
                }
            }
            Self::ExpDecay { rate, .. } => a * root(1.0 / (rate * p), p),
            Self::Gaussian { .. } => a * root((std::f64::consts::PI / p).sqrt(), p),
            Self::HardyIndicator { len, .. } => {
                if p > 1.0 {
                    a * root(len * p / (p - 1.0), p)
                } else {
                    f64::INFINITY
                }
            }
            Self::HardyPowerHead { exponent, end, .. } => {
                let ep = exponent * p;
                if p > 1.0 && ep < 1.0 {
                    let c = a / (1.0 - exponent);
                    c * root(end.powf(1.0 - ep) * (1.0 / (1.0 - ep) + 1.0 / (p - 1.0)), p)
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// `∫_T^∞ |f|^p dt`, the mass a grid truncated at `T` misses.
    pub fn tail_mass(&self, t_max: f64, p: f64) -> Option<f64> {
        let a = self.amp().abs();
        match *self {
            Self::Indicator { hi, .. } | Self::PowerHead { end: hi, .. } if hi <= t_max => Some(0.0),
            Self::PowerTail { exponent, start, .. } => {
                let ep = exponent * p;
                (ep > 1.0).then(|| a.powf(p) * t_max.max(start).powf(1.0 - ep) / (ep - 1.0))
            }
            Self::ExpDecay { rate, .. } => Some(a.powf(p) * (-rate * p * t_max).exp() / (rate * p)),
            Self::HardyIndicator { len, .. } if t_max >= len && p > 1.0 => {
                Some(a.powf(p) * len.powf(p) * t_max.powf(1.0 - p) / (p - 1.0))
            }
            _ => None,
        }
    }

    /// `|f*·I(0, ε)|_p`: the norm of the rearranged head of measure ε.
    pub fn rearranged_head_lp(&self, eps: f64, p: f64) -> Option<f64> {
        let a = self.amp().abs();
        if eps <= 0.0 || a == 0.0 {
            return Some(0.0);
        }
        if p.is_infinite() {
            return Some(self.lp_norm(p));
        }
        let mass = match *self {
            Self::Indicator { lo, hi, .. } => eps.min(hi - lo),
            Self::PowerHead { exponent, end, .. } => {
                let ep = exponent * p;
                if ep >= 1.0 {
                    return Some(f64::INFINITY);
                }
                eps.min(end).powf(1.0 - ep) / (1.0 - ep)
            }
            Self::PowerTail { exponent, start, .. } => {
                let ep = exponent * p;
                let x = (eps / start).ln_1p();
                if ep == 1.0 {
                    x
                } else {
                    start.powf(1.0 - ep) * ((1.0 - ep) * x).exp_m1() / (1.0 - ep)
                }
            }
            Self::ExpDecay { rate, .. } => -(-rate * p * eps).exp_m1() / (rate * p),
            Self::HardyIndicator { len, .. } => {
                if eps <= len {
                    eps
                } else if p > 1.0 {
                    len * (1.0 + (1.0 - (len / eps).powf(p - 1.0)) / (p - 1.0))
                } else {
                    len * (1.0 + (eps / len).ln())
                }
            }
            _ => return None,
        };
        Some(a * root(mass, p))
    }

    /// Decreasing rearrangement on `(0, μ)` when it stays in the catalogue.
    pub fn rearranged(&self) -> Option<Self> {
        let a = self.amp().abs();
        match *self {
            Self::Indicator { lo, hi, .. } => Some(Self::Indicator { lo: 0.0, hi: hi - lo, amp: a }),
            Self::PowerHead { .. }
            | Self::ExpDecay { .. }
            | Self::HardyIndicator { .. }
            | Self::HardyPowerHead { .. } => Some(self.with_amp(a)),
            _ => None,
        }
    }

    /// `t ↦ f(t/s)` on the half-line.
    pub fn dilated(&self, s: f64) -> Option<Self> {
        Some(match *self {
            Self::Indicator { lo, hi, amp } => Self::Indicator { lo: s * lo, hi: s * hi, amp },
            Self::PowerTail { exponent, start, amp } => Self::PowerTail {
                exponent,
                start: s * start,
                amp: amp * s.powf(exponent),
            },
            Self::PowerHead { exponent, end, amp } => Self::PowerHead {
                exponent,
                end: s * end,
                amp: amp * s.powf(exponent),
            },
            Self::ExpDecay { rate, amp } => Self::ExpDecay { rate: rate / s, amp },
            Self::HardyIndicator { len, amp } => Self::HardyIndicator { len: s * len, amp },
            Self::HardyPowerHead { exponent, end, amp } => Self::HardyPowerHead {
                exponent,
                end: s * end,
                amp: amp * s.powf(exponent),
            },
            Self::Gaussian { .. } => return None,
        })
    }

    /// Hardy average `t^{-1}∫_0^t f`, where the result stays in the catalogue.
    pub fn hardy_average(&self) -> Option<Self> {
        match *self {
            Self::Indicator { lo, hi, amp } if lo <= 0.0 => Some(Self::HardyIndicator { len: hi, amp }),
            Self::PowerHead { exponent, end, amp } => Some(Self::HardyPowerHead { exponent, end, amp }),
            _ => None,
        }
    }

    /// `∫ f g` for two indicators.
    pub fn pairing(&self, other: &Self) -> Option<f64> {
        match (*self, *other) {
            (
                Self::Indicator { lo: a0, hi: a1, amp: x },
                Self::Indicator { lo: b0, hi: b1, amp: y },
            ) => Some(x * y * (a1.min(b1) - a0.max(b0)).max(0.0)),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_tail_norms() {
        // t^{-1/3} on [1, ∞): (∫ t^{-2})^{1/6} = 1.
        let f = ClosedForm::PowerTail { exponent: 1.0 / 3.0, start: 1.0, amp: 1.0 };
        assert!((f.lp_norm(6.0) - 1.0).abs() < 1e-15);
        assert_eq!(f.lp_norm(3.0), f64::INFINITY);
        let g = ClosedForm::PowerTail { exponent: 1.0 / 2.05, start: 1.0, amp: 1.0 };
        for p in [2.1f64, 3.0, 4.0] {
            let want = (p / 2.05 - 1.0).powf(-1.0 / p);
            assert!((g.lp_norm(p) / want - 1.0).abs() < 1e-14);
        }
        assert_eq!(g.lp_norm(2.05), f64::INFINITY);
    }

    #[test]
    fn hardy_of_indicator_matches_quotient() {
        let u = ClosedForm::Indicator { lo: 0.0, hi: 1.0, amp: 1.0 }.hardy_average().unwrap();
        let p: f64 = 2.0;
        assert!((u.lp_norm(p) - (p / (p - 1.0)).powf(1.0 / p)).abs() < 1e-15);
    }

    #[test]
    fn head_of_power_head() {
        let f = ClosedForm::PowerHead { exponent: 0.2, end: 1.0, amp: 1.0 };
        for eps in [1e-4f64, 0.1, 0.5] {
            let want = (5.0f64 / 3.0).sqrt() * eps.powf(0.3);
            assert!((f.rearranged_head_lp(eps, 2.0).unwrap() / want - 1.0).abs() < 1e-14);
        }
        assert_eq!(f.rearranged_head_lp(2.0, 2.0), Some(f.lp_norm(2.0)));
    }

    #[test]
    fn head_reaches_full_norm() {
        let forms = [
            ClosedForm::PowerTail { exponent: 0.6, start: 2.0, amp: 1.5 },
            ClosedForm::ExpDecay { rate: 0.7, amp: 2.0 },
            ClosedForm::HardyIndicator { len: 1.5, amp: 1.0 },
        ];
        for f in forms {
            for p in [2.0, 3.5] {
                let h = f.rearranged_head_lp(1e40, p).unwrap();
                assert!((h / f.lp_norm(p) - 1.0).abs() < 1e-4, "{f:?} p={p}");
            }
        }
    }

    #[test]
    fn dilation_scales_norms() {
        let forms = [
            ClosedForm::Indicator { lo: 0.0, hi: 1.0, amp: 1.0 },
            ClosedForm::PowerTail { exponent: 0.5, start: 1.0, amp: 1.0 },
            ClosedForm::PowerHead { exponent: 0.25, end: 1.0, amp: 2.0 },
            ClosedForm::ExpDecay { rate: 1.0, amp: 1.0 },
            ClosedForm::HardyPowerHead { exponent: 0.25, end: 1.0, amp: 1.0 },
        ];
        for f in forms {
            let s = 3.7;
            let g = f.dilated(s).unwrap();
            let p = 3.0;
            assert!((g.lp_norm(p) / (s.powf(1.0 / p) * f.lp_norm(p)) - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn indicator_pairing() {
        let a = ClosedForm::Indicator { lo: 0.0, hi: 1.0, amp: 2.0 };
        let b = ClosedForm::Indicator { lo: 0.5, hi: 3.0, amp: 1.0 };
        assert_eq!(a.pairing(&b), Some(1.0));
    }
}
