use glspace_core::boyd::boyd_indices;
use glspace_core::corpus;
use glspace_core::fundamental::{
    am_class_test, fd_step, saddle_asymptote, Endpoint, FrozenZeta, FundamentalCurve,
};
use glspace_core::operators::{verify_transfer_bound_with_tol, KpConstant, OperatorKind, TransferSpace};
use glspace_core::schema::{FunctionDesc, SpaceDesc};
use glspace_core::spectral::SpectralMeasure;
use glspace_core::{
    acn_modulus, cgls_norm, difference_modulus, fundamental_product_report, holder_pairing_check, BaseSpace,
    GlsError, LpProfile, OuterNorm, ReportRecord,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::config::{strict, ConfigError, RunConfig};
use crate::report::{format_float, json_float, Cell, Report};
use crate::Command;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numeric failure: {message}")]
    Numeric {
        message: String,
        record: Option<ReportRecord>,
    },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Numeric { .. } => 1,
        }
    }
}

/// Domain and precondition errors mean the inputs do not fit together, which
/// is a configuration problem; everything else is a numeric failure.
fn classify(stage: &str) -> impl Fn(GlsError) -> RunError + '_ {
    move |e| match e {
        GlsError::Domain(_) | GlsError::Precondition(_) => ConfigError::at(stage, e.to_string()).into(),
        other => RunError::Numeric {
            message: format!("{stage}: {other}"),
            record: None,
        },
    }
}

fn decades(lo: i32, hi: i32, step: usize) -> Vec<f64> {
    (lo..=hi).step_by(step).map(|k| 10f64.powi(k)).collect()
}

fn default_deltas() -> Vec<f64> {
    vec![std::f64::consts::E, 10.0, 1e4, 1e8]
}

fn default_true() -> bool {
    true
}

fn default_s_grid() -> Vec<f64> {
    decades(-8, 8, 1)
}

fn default_pairs() -> usize {
    200
}

fn default_pair_t_max() -> f64 {
    20.0
}

fn default_pair_nodes() -> usize {
    2001
}

fn default_product_deltas() -> Vec<f64> {
    vec![1e2, 1e4, 1e6, 1e8]
}

fn default_epsilons() -> Vec<f64> {
    (0..=12).map(|k| 10f64.powi(-k)).collect()
}

fn default_fraction() -> f64 {
    glspace_core::acn::ACN_FRACTION
}

fn default_lambda_grid() -> Vec<f64> {
    (0..25).map(|i| -20.0 + 40.0 * i as f64 / 24.0).collect()
}

fn default_k_max() -> usize {
    4
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormParams {
    /// Extra exponents at which the profile is reported.
    #[serde(default)]
    pub profile_points: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FundamentalParams {
    #[serde(default = "default_deltas")]
    pub deltas: Vec<f64>,
    /// Add saddle-point asymptotes for density measures.
    #[serde(default = "default_true")]
    pub asymptote: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoydParams {
    #[serde(default = "default_s_grid")]
    pub s_grid: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualParams {
    /// Size of the seeded random pair corpus.
    #[serde(default = "default_pairs")]
    pub pairs: usize,
    #[serde(default = "default_pair_t_max")]
    pub t_max: f64,
    #[serde(default = "default_pair_nodes")]
    pub n: usize,
    #[serde(default = "default_product_deltas")]
    pub deltas: Vec<f64>,
    /// Partner of the config's `function` for an explicit pairing check.
    #[serde(default)]
    pub g: Option<FunctionDesc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case", deny_unknown_fields)]
pub enum KDesc {
    HardyAverage,
    Hilbert,
    Maximal { c: f64 },
    Envelope { c: f64 },
}

impl KDesc {
    fn for_operator(op: OperatorKind) -> Self {
        match op {
            OperatorKind::Hilbert => Self::Hilbert,
            OperatorKind::Maximal => Self::Maximal {
                c: glspace_core::operators::DEFAULT_MAXIMAL_C,
            },
            OperatorKind::HardyAverage => Self::HardyAverage,
        }
    }

    fn build(&self) -> Result<KpConstant, GlsError> {
        match *self {
            Self::HardyAverage => Ok(KpConstant::hardy_average()),
            Self::Hilbert => Ok(KpConstant::hilbert()),
            Self::Maximal { c } => KpConstant::maximal(c),
            Self::Envelope { c } => KpConstant::envelope(c),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorParams {
    pub operator: OperatorKind,
    #[serde(default)]
    pub k: Option<KDesc>,
    /// Overrides the closed-form/discrete default tolerance.
    #[serde(default)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AcnParams {
    #[serde(default = "default_epsilons")]
    pub epsilons: Vec<f64>,
    #[serde(default = "default_fraction")]
    pub fraction: f64,
    /// Shifts for the circle difference modulus; replaces the ε sweep when set.
    #[serde(default)]
    pub h_grid: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ZetaDesc {
    /// ζ of the space's spectral measure.
    Measure,
    /// `e^{rate·λ}`.
    Exp { rate: f64 },
    /// `Σ c_i λ^i`.
    Poly { coeffs: Vec<f64> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmParams {
    #[serde(default = "default_lambda_grid")]
    pub lambda_grid: Vec<f64>,
    #[serde(default = "default_k_max")]
    pub k_max: usize,
    /// Class endpoints; default to the support of the space's measure.
    #[serde(default)]
    pub a: Option<f64>,
    #[serde(default)]
    pub b: Option<f64>,
    #[serde(default = "measure_zeta")]
    pub zeta: ZetaDesc,
}

fn measure_zeta() -> ZetaDesc {
    ZetaDesc::Measure
}

fn echo<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("params serialize")
}

impl Command {
    /// Validates `params` for this command and returns them with defaults filled.
    pub fn resolve_params(self, params: Value) -> Result<Value, ConfigError> {
        Ok(match self {
            Self::Norm => echo(&strict::<NormParams>(params, "params")?),
            Self::Fundamental => echo(&strict::<FundamentalParams>(params, "params")?),
            Self::Boyd => echo(&strict::<BoydParams>(params, "params")?),
            Self::Dual => echo(&strict::<DualParams>(params, "params")?),
            Self::OperatorCheck => {
                let mut p: OperatorParams = strict(params, "params")?;
                p.k.get_or_insert_with(|| KDesc::for_operator(p.operator));
                echo(&p)
            }
            Self::Acn => echo(&strict::<AcnParams>(params, "params")?),
            Self::AmTest => echo(&strict::<AmParams>(params, "params")?),
        })
    }
}

pub fn run(config: &RunConfig, command: Command) -> Result<Report, RunError> {
    match command {
        Command::Norm => norm(config),
        Command::Fundamental => fundamental(config),
        Command::Boyd => boyd(config),
        Command::Dual => dual(config),
        Command::OperatorCheck => operator_check(config),
        Command::Acn => acn(config),
        Command::AmTest => am_test(config),
    }
}

fn outer_of(config: &RunConfig) -> Result<OuterNorm, RunError> {
    Ok(config.space()?.build().map_err(|e| ConfigError::from(e.within("space")))?)
}

fn function_of(config: &RunConfig) -> Result<glspace_core::SampledFunction, RunError> {
    Ok(config
        .function()?
        .build(&config.base)
        .map_err(|e| ConfigError::from(e.within("function")))?)
}

fn norm(config: &RunConfig) -> Result<Report, RunError> {
    let p: NormParams = config.params()?;
    let outer = outer_of(config)?;
    let f = function_of(config)?;
    let h = LpProfile::of(&f, outer.profile_domain());
    let v = cgls_norm(&h, &outer).map_err(classify("norm"))?;
    let mut r = Report::new(vec!["quantity", "p", "value", "error"]);
    r.row(vec!["norm".into(), v.witness.into(), v.value.into(), v.error.into()]);
    for &q in &p.profile_points {
        let hv = h.eval(q).map_err(classify("params.profile_points"))?;
        r.row(vec!["profile".into(), q.into(), hv.into(), Cell::Empty]);
    }
    r.result = json!({"value": json_float(v.value), "error": json_float(v.error),
        "witness": v.witness.map(json_float)});
    r.summary = format!("norm = {}", format_float(v.value));
    Ok(r)
}

fn fundamental(config: &RunConfig) -> Result<Report, RunError> {
    let p: FundamentalParams = config.params()?;
    let outer = outer_of(config)?;
    let curve = FundamentalCurve::compute(&outer, &p.deltas).map_err(classify("params.deltas"))?;
    let density = match &outer {
        OuterNorm::Igls { q, nu } if p.asymptote && matches!(nu, SpectralMeasure::Density { .. }) => {
            Some((*q, nu))
        }
        _ => None,
    };
    let mut r = Report::new(vec![
        "delta",
        "phi",
        "asymptote_lower",
        "asymptote_upper",
        "ratio_lower",
        "ratio_upper",
    ]);
    for (&d, &phi) in curve.deltas.iter().zip(&curve.values) {
        let (mut lo, mut hi) = (None, None);
        if let Some((q, nu)) = density {
            if d != 1.0 {
                let end = Endpoint::for_delta(d);
                let asym = saddle_asymptote(nu, q, d, end).ok();
                match end {
                    Endpoint::Lower => lo = asym,
                    Endpoint::Upper => hi = asym,
                }
            }
        }
        r.row(vec![
            d.into(),
            phi.into(),
            lo.into(),
            hi.into(),
            lo.map(|a| phi / a).into(),
            hi.map(|a| phi / a).into(),
        ]);
        r.records.push(ReportRecord::new("phi", phi).witness("delta", d));
    }
    r.pass = curve.is_monotone();
    r.result = json!({"monotone": r.pass});
    r.summary = match curve.deltas.first() {
        Some(&d) => format!("phi({}) = {}", format_float(d), format_float(curve.values[0])),
        None => "empty delta grid".into(),
    };
    Ok(r)
}

fn boyd(config: &RunConfig) -> Result<Report, RunError> {
    let p: BoydParams = config.params()?;
    let outer = outer_of(config)?;
    let est = boyd_indices(&outer, &p.s_grid).map_err(classify("params.s_grid"))?;
    let mut r = Report::new(vec!["s", "lower", "upper", "beta_hat_s", "bracket_lo", "bracket_hi"]);
    let mut bounded = true;
    for pt in &est.points {
        bounded &= pt.lower <= pt.upper;
        r.row(vec![
            pt.s.into(),
            pt.lower.into(),
            pt.upper.into(),
            pt.index.into(),
            pt.bracket.map(|b| b.0).into(),
            pt.bracket.map(|b| b.1).into(),
        ]);
    }
    r.pass = bounded && est.beta_contained && est.alpha_contained;
    r.note("alpha_hat", format_float(est.alpha_hat));
    r.note("beta_hat", format_float(est.beta_hat));
    r.result = json!({
        "alpha_hat": json_float(est.alpha_hat),
        "beta_hat": json_float(est.beta_hat),
        "c_alpha": json_float(est.c_alpha),
        "c_beta": json_float(est.c_beta),
        "alpha_contained": est.alpha_contained,
        "beta_contained": est.beta_contained,
        "upper_bound_holds": bounded,
        "skipped": est.skipped,
    });
    r.summary = format!(
        "alpha_hat = {}, beta_hat = {}",
        format_float(est.alpha_hat),
        format_float(est.beta_hat)
    );
    Ok(r)
}

fn dual(config: &RunConfig) -> Result<Report, RunError> {
    let p: DualParams = config.params()?;
    let outer = outer_of(config)?;
    let mut r = Report::new(vec!["delta", "phi_primal", "phi_candidate", "r"]);
    let product = fundamental_product_report(&outer, &p.deltas).map_err(classify("space"))?;
    let mut spread = f64::NAN;
    for rec in &product {
        if rec.label == "spread" {
            spread = rec.value;
            continue;
        }
        r.row(vec![
            rec.get("delta").into(),
            rec.get("phi_primal").into(),
            rec.get("phi_candidate").into(),
            rec.value.into(),
        ]);
    }
    r.records.extend(product);

    let space = BaseSpace::half_line(p.t_max, p.n).map_err(classify("params.n"))?;
    let mut rng = corpus::rng(config.seed);
    let mut max_ratio: f64 = 0.0;
    let mut failed = Vec::new();
    for i in 0..p.pairs {
        let (f, g) = corpus::random_function_pair(&mut rng, &space).map_err(classify("params"))?;
        let rec = holder_pairing_check(&f, &g, &outer).map_err(classify("space"))?;
        max_ratio = max_ratio.max(rec.value);
        if !rec.passed() {
            failed.push(rec.witness("pair", i as f64));
        }
    }
    r.note("spread", format_float(spread));
    r.note("holder_pairs", p.pairs);
    r.note("holder_max_ratio", format_float(max_ratio));
    r.note("holder_failed", failed.len());
    let mut result = json!({
        "spread": json_float(spread),
        "holder": {"pairs": p.pairs, "max_ratio": json_float(max_ratio), "failed": failed.len()},
    });

    let mut explicit_pass = true;
    if let Some(gd) = &p.g {
        let f = function_of(config)?;
        let g = gd
            .build(&config.base)
            .map_err(|e| ConfigError::from(e.within("params.g")))?;
        let rec = holder_pairing_check(&f, &g, &outer).map_err(classify("function"))?;
        explicit_pass = rec.passed();
        r.note("pairing_ratio", format_float(rec.value));
        result["pairing"] = json!({
            "lhs": rec.get("lhs").map(json_float),
            "rhs": rec.get("rhs").map(json_float),
            "ratio": json_float(rec.value),
            "pass": explicit_pass,
        });
        r.records.push(rec);
    }
    r.pass = failed.is_empty() && explicit_pass;
    r.summary = format!(
        "spread = {}, holder max ratio = {} over {} pairs, {} failed",
        format_float(spread),
        format_float(max_ratio),
        p.pairs,
        failed.len()
    );
    r.records.extend(failed);
    r.result = result;
    Ok(r)
}

fn measure_label(space: &SpaceDesc) -> (Value, Value) {
    match space {
        SpaceDesc::Igls { q, measure } => (echo(measure), json!(q)),
        SpaceDesc::Glsup { psi, .. } => (json!(format!("glsup:{}", psi.preset)), json!("inf")),
    }
}

fn operator_check(config: &RunConfig) -> Result<Report, RunError> {
    let p: OperatorParams = config.params()?;
    let outer = outer_of(config)?;
    let f = function_of(config)?;
    let k = p
        .k
        .unwrap_or_else(|| KDesc::for_operator(p.operator))
        .build()
        .map_err(classify("params.k"))?;
    let space = TransferSpace::new(outer, k).map_err(classify("params.k"))?;
    let rec = verify_transfer_bound_with_tol(p.operator, &f, &space, p.tol).map_err(classify("function"))?;
    let (measure, q) = measure_label(config.space()?);
    let (lhs, rhs, tol) = (
        rec.get("lhs").unwrap_or(f64::NAN),
        rec.get("rhs").unwrap_or(f64::NAN),
        rec.get("tol").unwrap_or(f64::NAN),
    );
    transfer_report(p.operator, measure, q, lhs, rhs, rec, tol)
}

fn transfer_report(
    op: OperatorKind,
    measure: Value,
    q: Value,
    lhs: f64,
    rhs: f64,
    rec: ReportRecord,
    tol: f64,
) -> Result<Report, RunError> {
    let pass = rec.passed();
    let mut r = Report::new(vec!["operator", "measure", "Q", "lhs", "rhs", "ratio", "tol", "pass"]);
    let measure_text = match &measure {
        Value::String(s) => s.clone(),
        other => serde_json::to_string(other).expect("measure serializes"),
    };
    let q_cell = match &q {
        Value::Number(n) => Cell::Num(n.as_f64().unwrap_or(f64::NAN)),
        _ => Cell::Num(f64::INFINITY),
    };
    r.row(vec![
        op.name().into(),
        Cell::Text(measure_text),
        q_cell,
        lhs.into(),
        rhs.into(),
        rec.value.into(),
        tol.into(),
        pass.into(),
    ]);
    r.result = json!({
        "operator": op.name(),
        "measure": measure,
        "Q": q,
        "lhs": json_float(lhs),
        "rhs": json_float(rhs),
        "ratio": json_float(rec.value),
        "tol": json_float(tol),
        "pass": pass,
    });
    r.summary = format!("{} transfer ratio = {}", op.name(), format_float(rec.value));
    r.pass = pass;
    r.records.push(rec);
    Ok(r)
}

fn acn(config: &RunConfig) -> Result<Report, RunError> {
    let p: AcnParams = config.params()?;
    let outer = outer_of(config)?;
    let f = function_of(config)?;
    if let Some(h_grid) = &p.h_grid {
        let full = cgls_norm(&LpProfile::of(&f, outer.profile_domain()), &outer)
            .map_err(classify("function"))?
            .value;
        let mut hs = h_grid.clone();
        hs.sort_by(|a, b| b.total_cmp(a));
        let recs = difference_modulus(&f, &hs, &outer).map_err(classify("params.h_grid"))?;
        let mut r = Report::new(vec!["h", "omega", "full_norm", "ratio"]);
        let ratio = |v: f64| if full > 0.0 { v / full } else { 0.0 };
        for rec in &recs {
            r.row(vec![rec.get("h").into(), rec.value.into(), full.into(), ratio(rec.value).into()]);
        }
        let last = recs.last().map_or(0.0, |rec| ratio(rec.value));
        r.pass = last <= p.fraction;
        r.result = json!({"full_norm": json_float(full), "final_ratio": json_float(last)});
        r.summary = format!("difference modulus ratio at smallest h = {}", format_float(last));
        r.records = recs;
        return Ok(r);
    }
    let curve = acn_modulus(&f, &outer, &p.epsilons).map_err(classify("params.epsilons"))?;
    let mut r = Report::new(vec!["epsilon", "omega", "full_norm", "ratio"]);
    for ((&e, &v), ratio) in curve.epsilons.iter().zip(&curve.values).zip(curve.ratios()) {
        r.row(vec![e.into(), v.into(), curve.full_norm.into(), ratio.into()]);
    }
    let eps0 = curve.eps0(p.fraction);
    let monotone = curve.is_monotone();
    r.pass = monotone && eps0.is_some();
    r.note("eps0", eps0.map_or("none".into(), format_float));
    r.result = json!({
        "full_norm": json_float(curve.full_norm),
        "monotone": monotone,
        "eps0": eps0.map(json_float),
        "fraction": p.fraction,
    });
    r.summary = match eps0 {
        Some(e) => format!("omega <= {} of the norm from eps0 = {}", p.fraction, format_float(e)),
        None => format!("omega never drops below {} of the norm", p.fraction),
    };
    Ok(r)
}

fn am_test(config: &RunConfig) -> Result<Report, RunError> {
    let p: AmParams = config.params()?;
    let outer = match &config.space {
        Some(_) => Some(outer_of(config)?),
        None => None,
    };
    let support = outer.as_ref().map(OuterNorm::support);
    let a = p
        .a
        .or(support.map(|s| s.0))
        .ok_or_else(|| ConfigError::at("params.a", "required when no space is given"))?;
    let b = p
        .b
        .or(support.map(|s| s.1))
        .ok_or_else(|| ConfigError::at("params.b", "required when no space is given"))?;
    let report = match &p.zeta {
        ZetaDesc::Measure => {
            let nu = outer
                .as_ref()
                .and_then(OuterNorm::measure)
                .ok_or_else(|| ConfigError::at("params.zeta", "measure zeta needs an igls space"))?;
            let reach = p.lambda_grid.iter().fold(0.0f64, |m, l| m.max(l.abs()));
            let pad = p.k_max as f64 * fd_step(reach);
            let (lo, hi) = p
                .lambda_grid
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &l| (lo.min(l), hi.max(l)));
            let z = FrozenZeta::new(nu, lo - pad, hi + pad).map_err(classify("space.measure"))?;
            am_class_test(|l| z.eval(l), a, b, p.k_max, &p.lambda_grid)
        }
        ZetaDesc::Exp { rate } => {
            let rate = *rate;
            am_class_test(|l| (rate * l).exp(), a, b, p.k_max, &p.lambda_grid)
        }
        ZetaDesc::Poly { coeffs } => {
            am_class_test(|l| coeffs.iter().rev().fold(0.0, |acc, c| acc * l + c), a, b, p.k_max, &p.lambda_grid)
        }
    }
    .map_err(classify("params"))?;

    let mut r = Report::new(vec!["order", "positive", "sandwich", "min_ratio", "max_ratio", "witness"]);
    for o in &report.orders {
        r.row(vec![
            Cell::Num(o.order as f64),
            o.positive.into(),
            o.sandwich.into(),
            o.min_ratio.into(),
            o.max_ratio.into(),
            o.witness.or(o.sandwich_witness).into(),
        ]);
    }
    let verdict = if report.is_in() { "in" } else { "out" };
    r.note("verdict", verdict);
    r.note("k_tested", report.k_tested);
    r.note("lower_monotone", report.lower_monotone);
    r.note("upper_monotone", report.upper_monotone);
    r.pass = report.is_in();
    r.summary = format!("verdict {verdict} AM({a}, {b}), orders tested {}", report.k_tested);
    r.result = serde_json::to_value(&report).expect("AM report serializes");
    Ok(r)
}
