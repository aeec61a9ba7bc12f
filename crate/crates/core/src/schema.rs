//! Strict JSON descriptors for measures, outer norms, base spaces and functions.
//!
//! Every descriptor rejects unknown keys. Optional keys carry defaults that are
//! written back on serialization, so a round trip yields the resolved config.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cgls::OuterNorm;
use crate::profiles::{BaseSpace, ClosedForm, SampledFunction, SpaceKind, DEFAULT_SEQUENCE_LEN, DEFAULT_T_MAX};
use crate::spectral::{
    DensityPreset, ExponentInterval, PsiFunction, QuadratureScheme, QuadratureSpec, SpectralMeasure,
};
use crate::GlsError;

/// A descriptor that parsed but does not describe a valid object.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{path}: {message}")]
pub struct SchemaError {
    /// Dotted path of the offending key, e.g. `space.Q`.
    pub path: String,
    pub message: String,
}

impl SchemaError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Prefixes the path with an enclosing key.
    pub fn within(mut self, parent: &str) -> Self {
        self.path = if self.path.is_empty() {
            parent.to_string()
        } else {
            format!("{parent}.{}", self.path)
        };
        self
    }
}

fn at(path: &str) -> impl Fn(GlsError) -> SchemaError + '_ {
    move |e| SchemaError::new(path, e.to_string())
}

fn default_nodes() -> usize {
    QuadratureSpec::default().nodes
}

fn default_tol() -> f64 {
    QuadratureSpec::default().tol
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MeasureDesc {
    Dirac {
        p0: f64,
    },
    Atoms {
        points: Vec<(f64, f64)>,
    },
    Density {
        expr: String,
        a: f64,
        b: f64,
        #[serde(default = "default_nodes")]
        nodes: usize,
        #[serde(default = "default_tol")]
        tol: f64,
        #[serde(default)]
        scheme: QuadratureScheme,
    },
}

impl MeasureDesc {
    pub fn build(&self) -> Result<SpectralMeasure, SchemaError> {
        match self {
            Self::Dirac { p0 } => SpectralMeasure::dirac(*p0).map_err(at("p0")),
            Self::Atoms { points } => SpectralMeasure::atoms(points.clone()).map_err(at("points")),
            Self::Density {
                expr,
                a,
                b,
                nodes,
                tol,
                scheme,
            } => {
                let preset = DensityPreset::parse(expr).map_err(at("expr"))?;
                let rule = QuadratureSpec::new(*nodes, *scheme, *tol).map_err(at("nodes"))?;
                SpectralMeasure::density(crate::spectral::Density::preset(preset), *a, *b, rule)
                    .map_err(at("a"))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsiDesc {
    /// `power:<β>`, `const` or `blowup`.
    pub preset: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outer", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceDesc {
    Igls {
        #[serde(rename = "Q")]
        q: f64,
        measure: MeasureDesc,
    },
    Glsup {
        psi: PsiDesc,
        a: f64,
        /// `null` means b = ∞.
        b: Option<f64>,
    },
}

impl SpaceDesc {
    pub fn build(&self) -> Result<OuterNorm, SchemaError> {
        match self {
            Self::Igls { q, measure } => {
                if !(*q >= 1.0) {
                    return Err(SchemaError::new("Q", format!("Q = {q} violates Q >= 1")));
                }
                let nu = measure.build().map_err(|e| e.within("measure"))?;
                OuterNorm::igls(*q, nu).map_err(at("Q"))
            }
            Self::Glsup { psi, a, b } => {
                let interval = match b {
                    Some(b) => ExponentInterval::new(*a, *b),
                    None => ExponentInterval::unbounded(*a),
                }
                .map_err(at("a"))?;
                let psi = parse_psi(&psi.preset, interval).map_err(|e| e.within("psi"))?;
                Ok(OuterNorm::gl_sup(psi))
            }
        }
    }
}

fn parse_psi(preset: &str, interval: ExponentInterval) -> Result<PsiFunction, SchemaError> {
    match preset {
        "const" => Ok(PsiFunction::constant(interval)),
        "blowup" => PsiFunction::blowup(interval).map_err(at("preset")),
        _ => match preset.strip_prefix("power:").map(|s| s.trim().parse::<f64>()) {
            Some(Ok(beta)) if beta.is_finite() => Ok(PsiFunction::power(beta, interval)),
            _ => Err(SchemaError::new(
                "preset",
                format!("unknown psi preset {preset:?}; expected power:<beta>, const or blowup"),
            )),
        },
    }
}

fn default_t_max() -> f64 {
    DEFAULT_T_MAX
}

fn default_line_nodes() -> usize {
    1_000_000
}

fn default_half_width() -> f64 {
    50.0
}

fn default_real_nodes() -> usize {
    1 << 14
}

fn default_circle_nodes() -> usize {
    4096
}

fn default_sequence_len() -> usize {
    DEFAULT_SEQUENCE_LEN
}

/// The discretized base measure space functions are sampled on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BaseDesc {
    HalfLine {
        #[serde(default = "default_t_max")]
        t_max: f64,
        #[serde(default = "default_line_nodes")]
        n: usize,
    },
    RealLine {
        #[serde(default = "default_half_width")]
        half_width: f64,
        #[serde(default = "default_real_nodes")]
        n: usize,
    },
    Circle {
        #[serde(default = "default_circle_nodes")]
        n: usize,
    },
    Sequence {
        #[serde(default = "default_sequence_len")]
        n: usize,
    },
}

impl Default for BaseDesc {
    fn default() -> Self {
        Self::HalfLine {
            t_max: DEFAULT_T_MAX,
            n: default_line_nodes(),
        }
    }
}

impl BaseDesc {
    pub fn kind(&self) -> SpaceKind {
        match self {
            Self::HalfLine { .. } => SpaceKind::HalfLine,
            Self::RealLine { .. } => SpaceKind::RealLine,
            Self::Circle { .. } => SpaceKind::Circle,
            Self::Sequence { .. } => SpaceKind::Sequence,
        }
    }

    pub fn build(&self) -> Result<BaseSpace, SchemaError> {
        match *self {
            Self::HalfLine { t_max, n } => BaseSpace::half_line(t_max, n),
            Self::RealLine { half_width, n } => BaseSpace::real_line(half_width, n),
            Self::Circle { n } => BaseSpace::circle(n),
            Self::Sequence { n } => BaseSpace::sequence(n),
        }
        .map_err(at("n"))
    }
}

/// Names accepted by `{"kind":"expr","preset":…}`.
pub const EXPR_PRESETS: [&str; 6] = ["exp_decay", "gaussian", "sin2pi", "cos2pi", "tent", "harmonic"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionDesc {
    Indicator {
        a: f64,
        b: f64,
        #[serde(default = "one")]
        amp: f64,
    },
    PowerTail {
        exponent: f64,
        #[serde(default = "one")]
        start: f64,
        #[serde(default = "one")]
        amp: f64,
    },
    PowerHead {
        exponent: f64,
        #[serde(default = "one")]
        end: f64,
        #[serde(default = "one")]
        amp: f64,
    },
    Grid {
        points: Vec<f64>,
        values: Vec<f64>,
    },
    Expr {
        preset: String,
    },
}

impl FunctionDesc {
    /// Samples the function on `base`. Grid functions bring their own nodes and
    /// only borrow the kind (half or real line) from `base`.
    pub fn build(&self, base: &BaseDesc) -> Result<SampledFunction, SchemaError> {
        let closed = |form: ClosedForm| -> Result<SampledFunction, SchemaError> {
            let space = base.build().map_err(|e| e.within("base"))?;
            SampledFunction::closed_form(space, form).map_err(at(""))
        };
        match *self {
            Self::Indicator { a, b, amp } => closed(ClosedForm::Indicator { lo: a, hi: b, amp }),
            Self::PowerTail { exponent, start, amp } => closed(ClosedForm::PowerTail { exponent, start, amp }),
            Self::PowerHead { exponent, end, amp } => closed(ClosedForm::PowerHead { exponent, end, amp }),
            Self::Grid {
                ref points,
                ref values,
            } => {
                let space = match base.kind() {
                    SpaceKind::HalfLine => BaseSpace::half_line_grid(points.clone()),
                    SpaceKind::RealLine => BaseSpace::real_line_grid(points.clone()),
                    other => {
                        return Err(SchemaError::new(
                            "points",
                            format!("grid functions live on a half or real line, not {other:?}"),
                        ))
                    }
                }
                .map_err(at("points"))?;
                SampledFunction::new(space, values.clone()).map_err(at("values"))
            }
            Self::Expr { ref preset } => expr_function(preset, base),
        }
    }
}

fn expr_function(preset: &str, base: &BaseDesc) -> Result<SampledFunction, SchemaError> {
    let kind = base.kind();
    let space = || base.build().map_err(|e| e.within("base"));
    let sampled = |f: fn(f64) -> f64| SampledFunction::from_fn(space()?, f).map_err(at("preset"));
    let mismatch = || {
        SchemaError::new(
            "preset",
            format!("preset {preset:?} is not defined on {kind:?}"),
        )
    };
    match preset {
        "exp_decay" if kind == SpaceKind::HalfLine => {
            SampledFunction::closed_form(space()?, ClosedForm::ExpDecay { rate: 1.0, amp: 1.0 })
                .map_err(at("preset"))
        }
        "gaussian" if kind == SpaceKind::RealLine => {
            SampledFunction::closed_form(space()?, ClosedForm::Gaussian { amp: 1.0 }).map_err(at("preset"))
        }
        "sin2pi" if kind == SpaceKind::Circle => sampled(|t| (std::f64::consts::TAU * t).sin()),
        "cos2pi" if kind == SpaceKind::Circle => sampled(|t| (std::f64::consts::TAU * t).cos()),
        "tent" if kind == SpaceKind::RealLine => sampled(|t| (1.0 - t.abs()).max(0.0)),
        "harmonic" if kind == SpaceKind::Sequence => sampled(|n| 1.0 / n),
        _ if EXPR_PRESETS.contains(&preset) => Err(mismatch()),
        _ => Err(SchemaError::new(
            "preset",
            format!("unknown expr preset {preset:?}; expected one of {EXPR_PRESETS:?}"),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(json: &str) -> Result<OuterNorm, String> {
        let desc: SpaceDesc = serde_json::from_str(json).map_err(|e| e.to_string())?;
        desc.build().map_err(|e| e.to_string())
    }

    #[test]
    fn unknown_key_is_named() {
        let err = space(r#"{"outer":"igls","Qq":2,"measure":{"kind":"dirac","p0":3}}"#).unwrap_err();
        assert!(err.contains("Qq"), "{err}");
    }

    #[test]
    fn small_q_cites_bound() {
        let err = space(r#"{"outer":"igls","Q":0.5,"measure":{"kind":"dirac","p0":3}}"#).unwrap_err();
        assert!(err.contains("Q >= 1"), "{err}");
        assert!(err.starts_with("Q:"), "{err}");
    }

    #[test]
    fn malformed_measure_kind() {
        let err = space(r#"{"outer":"igls","Q":1,"measure":{"kind":"dirak","p0":3}}"#).unwrap_err();
        assert!(err.contains("dirak"), "{err}");
    }

    #[test]
    fn density_defaults_are_echoed() {
        let desc: MeasureDesc =
            serde_json::from_str(r#"{"kind":"density","expr":"lebesgue","a":2,"b":4}"#).unwrap();
        let echoed = serde_json::to_value(&desc).unwrap();
        assert_eq!(echoed["nodes"], 4);
        assert_eq!(echoed["tol"], 1e-10);
        assert_eq!(echoed["scheme"], "gk15");
        desc.build().unwrap();
    }

    #[test]
    fn glsup_presets() {
        let outer = space(r#"{"outer":"glsup","psi":{"preset":"power:0.5"},"a":1,"b":null}"#).unwrap();
        assert_eq!(outer.support(), (1.0, f64::INFINITY));
        assert!(space(r#"{"outer":"glsup","psi":{"preset":"blowup"},"a":1,"b":null}"#).is_err());
        assert!(space(r#"{"outer":"glsup","psi":{"preset":"cosh"},"a":1,"b":3}"#)
            .unwrap_err()
            .contains("psi.preset"));
    }

    #[test]
    fn functions_build_on_their_base() {
        let base = BaseDesc::HalfLine { t_max: 10.0, n: 1001 };
        let f: FunctionDesc = serde_json::from_str(r#"{"kind":"indicator","a":0,"b":1}"#).unwrap();
        let f = f.build(&base).unwrap();
        assert_eq!(f.lp_norm(2.0).unwrap(), 1.0);

        let g: FunctionDesc =
            serde_json::from_str(r#"{"kind":"grid","points":[0,1,2],"values":[1,1,0]}"#).unwrap();
        assert!((g.build(&base).unwrap().lp_norm(1.0).unwrap() - 1.5).abs() < 1e-15);

        let e: FunctionDesc = serde_json::from_str(r#"{"kind":"expr","preset":"sin2pi"}"#).unwrap();
        assert!(e.build(&base).unwrap_err().message.contains("not defined"));
        assert!(e.build(&BaseDesc::Circle { n: 64 }).is_ok());
    }

    #[test]
    fn unknown_function_field() {
        let err = serde_json::from_str::<FunctionDesc>(r#"{"kind":"indicator","a":0,"b":1,"c":2}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("`c`"), "{err}");
    }
}
