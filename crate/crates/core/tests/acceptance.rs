//! Acceptance suite: one PASS/FAIL line per check, grouped by criterion.
//!
//! Runs without the libtest harness so the lines always reach the terminal.
//! Checks under two id prefixes fail because the expected value they encode
//! is wrong (see the README, "Known failing checks"). They are listed in
//! `KNOWN_FAILURES`, still print FAIL, and do not change the exit status.
//! Any other failure exits nonzero, and so does a known failure that passes.

use std::f64::consts::E;
use std::time::Instant;

use glspace_core::boyd::boyd_indices;
use glspace_core::corpus;
use glspace_core::fundamental::{
    am_class_test, fundamental_function, saddle_asymptote, saddle_asymptote_refined, Endpoint, FrozenZeta,
};
use glspace_core::operators::{
    hilbert_transform, verify_transfer_bound, KpConstant, OperatorKind, TransferSpace,
};
use glspace_core::spectral::{Density, DensityPreset};
use glspace_core::{
    acn_modulus, cgls_norm, fundamental_product_report, holder_pairing_check, BaseSpace, ClosedForm,
    ExponentInterval, OuterNorm, PsiFunction, QuadratureSpec, SampledFunction, SpectralMeasure,
};
use rand::Rng;

const KNOWN_FAILURES: [&str; 2] = ["3:h=1", "4:exp(l/3)"];

struct Suite {
    unexpected: Vec<String>,
    known_seen: Vec<String>,
}

impl Suite {
    fn check(&mut self, id: &str, pass: bool, text: String) {
        let known = KNOWN_FAILURES.iter().any(|k| id.starts_with(k));
        let tag = if pass { "PASS" } else { "FAIL" };
        let note = if known && !pass { "  [known: expected value is wrong]" } else { "" };
        println!("{tag}  [{id}] {text}{note}");
        if known {
            if pass {
                self.unexpected.push(format!("{id} was expected to fail but passed"));
            } else {
                self.known_seen.push(id.to_string());
            }
        } else if !pass {
            self.unexpected.push(id.to_string());
        }
    }
}

fn rel(x: f64, y: f64) -> f64 {
    ((x - y) / y).abs()
}

fn lebesgue(a: f64, b: f64) -> SpectralMeasure {
    SpectralMeasure::lebesgue(a, b).unwrap()
}

fn preset(p: DensityPreset, a: f64, b: f64) -> SpectralMeasure {
    SpectralMeasure::preset(p, a, b).unwrap()
}

fn dirac_reduction(s: &mut Suite) {
    let t = Instant::now();
    let mut rng = corpus::rng(101);
    let dom = ExponentInterval::new(1.5, 10.0).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let h = corpus::random_profile(&mut rng, dom);
        let p0 = rng.gen_range(1.5..10.0);
        let q = [1.0, 2.0, 3.5][rng.gen_range(0..3)];
        let outer = OuterNorm::igls(q, SpectralMeasure::dirac(p0).unwrap()).unwrap();
        let v = cgls_norm(&h, &outer).unwrap().value;
        worst = worst.max(rel(v, h.eval(p0).unwrap()));
    }
    let secs = t.elapsed().as_secs_f64();
    s.check(
        "1",
        worst <= 1e-12 && secs < 1.0,
        format!("Dirac reduction: 20 profiles, max rel err {worst:.2e} (<= 1e-12), {secs:.3} s (< 1 s)"),
    );
}

fn example_closed_form(s: &mut Suite) {
    let outer = OuterNorm::igls(1.0, preset(DensityPreset::InverseSquare, 2.0, 4.0)).unwrap();
    let closed = |d: f64| (d.sqrt() - d.powf(0.25)) / d.ln();
    let mut worst: f64 = 0.0;
    for d in [E, 10.0, 1e4, 1e8] {
        worst = worst.max(rel(fundamental_function(&outer, d).unwrap(), closed(d)));
    }
    s.check(
        "2a",
        worst <= 1e-8,
        format!("h = p^-2 on [2,4], Q = 1: quadrature vs closed form, max rel err {worst:.2e} (<= 1e-8)"),
    );
    let at_e = fundamental_function(&outer, E).unwrap();
    s.check(
        "2b",
        (at_e - 0.364696).abs() <= 1e-6,
        format!("phi(e) = {at_e:.9} (0.364696 +- 1e-6)"),
    );
}

fn saddle(s: &mut Suite) {
    let t = Instant::now();
    let cases = [
        ("h=1", DensityPreset::Lebesgue),
        ("h=p^-2", DensityPreset::InverseSquare),
    ];
    for (name, dens) in cases {
        let nu = preset(dens, 2.0, 4.0);
        for q in [1.0, 2.0] {
            let outer = OuterNorm::igls(q, nu.clone()).unwrap();
            for d in [1e8, 1e-8] {
                let end = Endpoint::for_delta(d);
                let quad = fundamental_function(&outer, d).unwrap();
                let lead = saddle_asymptote(&nu, q, d, end).unwrap();
                let refined = saddle_asymptote_refined(&nu, q, d, end).unwrap();
                let ratio = quad / lead;
                s.check(
                    &format!("3:{name}:Q={q}:d={d:e}"),
                    (0.95..=1.05).contains(&ratio),
                    format!(
                        "saddle {name}, Q = {q}, delta = {d:e}: quadrature/asymptote = {ratio:.4} in [0.95, 1.05] \
                         (two-term Laplace ratio {:.4})",
                        quad / refined
                    ),
                );
            }
        }
    }
    let secs = t.elapsed().as_secs_f64();
    s.check("3:runtime", secs < 5.0, format!("saddle checks took {secs:.3} s (< 5 s)"));
}

fn am_class(s: &mut Suite) {
    let grid: Vec<f64> = (0..25).map(|i| -20.0 + 40.0 * i as f64 / 24.0).collect();
    let measures = [
        ("Dirac(3)", SpectralMeasure::dirac(3.0).unwrap()),
        ("atoms{2.5:1, 3.5:2}", SpectralMeasure::atoms(vec![(2.5, 1.0), (3.5, 2.0)]).unwrap()),
        ("lebesgue[2,4]", lebesgue(2.0, 4.0)),
        ("inverse_square[2,4]", preset(DensityPreset::InverseSquare, 2.0, 4.0)),
        ("poly:2[2,4]", preset(DensityPreset::Poly(2.0), 2.0, 4.0)),
    ];
    for (name, nu) in &measures {
        let z = FrozenZeta::new(nu, -21.0, 21.0).unwrap();
        let r = am_class_test(|l| z.eval(l), 2.0, 4.0, 4, &grid).unwrap();
        s.check(
            &format!("4:{name}"),
            r.k_tested == 4 && r.positivity_passed() && r.sandwich_passed(),
            format!(
                "AM(2,4) zeta of {name}: orders 1..{} positive = {}, sandwich within 1e-5 = {}, verdict {:?}",
                r.k_tested,
                r.positivity_passed(),
                r.sandwich_passed(),
                r.verdict
            ),
        );
    }
    let literal = am_class_test(|l| (l / 3.0).exp(), 2.0, 4.0, 4, &grid).unwrap();
    s.check(
        "4:exp(l/3)",
        !literal.is_in(),
        format!(
            "negative control zeta = e^(l/3) rejected from AM(2,4): verdict {:?} (it is zeta of Dirac(3), 3 in [2,4])",
            literal.verdict
        ),
    );
    let outside = am_class_test(|l| (l / 5.0).exp(), 2.0, 4.0, 4, &grid).unwrap();
    s.check(
        "4:exp(l/5)",
        !outside.is_in(),
        format!("Dirac outside the class, zeta = e^(l/5), rejected from AM(2,4): verdict {:?}", outside.verdict),
    );
}

fn boyd(s: &mut Suite) {
    let s_grid: Vec<f64> = (-8..=8).map(|k| 10f64.powi(k)).collect();
    let outer = OuterNorm::igls(1.0, lebesgue(2.0, 4.0)).unwrap();
    let est = boyd_indices(&outer, &s_grid).unwrap();
    let exact = est.points.iter().all(|p| {
        let bound = if p.s >= 1.0 { p.s.powf(0.5) } else { p.s.powf(0.25) };
        p.lower <= bound
    });
    s.check(
        "5a",
        exact,
        "lower(s) <= s^(1/2) (s >= 1) and <= s^(1/4) (s < 1), zero tolerance, 17 grid points".into(),
    );
    s.check(
        "5b",
        (0.40..=0.50).contains(&est.beta_hat),
        format!("beta_hat(1e8) = {:.4} in [0.40, 0.50]", est.beta_hat),
    );
    s.check(
        "5c",
        (0.25..=0.35).contains(&est.alpha_hat),
        format!("alpha_hat(1e-8) = {:.4} in [0.25, 0.35]", est.alpha_hat),
    );
    s.check(
        "5d",
        est.beta_contained && est.alpha_contained,
        format!(
            "log-corrected brackets contain both estimates (C_beta = {:.4}, C_alpha = {:.4})",
            est.c_beta, est.c_alpha
        ),
    );
    let p0 = 2.5;
    let dirac = boyd_indices(&OuterNorm::igls(1.0, SpectralMeasure::dirac(p0).unwrap()).unwrap(), &s_grid).unwrap();
    s.check(
        "5e",
        dirac.alpha_hat == 1.0 / p0 && dirac.beta_hat == 1.0 / p0,
        format!("Dirac(2.5) control: alpha_hat = {}, beta_hat = {} (exactly 0.4)", dirac.alpha_hat, dirac.beta_hat),
    );
}

fn dual(s: &mut Suite) {
    let measures = [
        ("Dirac(2.5)", SpectralMeasure::dirac(2.5).unwrap()),
        ("atoms{2:0.5, 3:0.5}", SpectralMeasure::atoms(vec![(2.0, 0.5), (3.0, 0.5)]).unwrap()),
        ("lebesgue[2,3]", lebesgue(2.0, 3.0)),
        ("inverse_square[2,4]", preset(DensityPreset::InverseSquare, 2.0, 4.0)),
    ];
    let space = BaseSpace::half_line(20.0, 2001).unwrap();
    let mut rng = corpus::rng(2024);
    let pairs: Vec<_> = (0..200)
        .map(|_| corpus::random_function_pair(&mut rng, &space).unwrap())
        .collect();
    for (name, nu) in &measures {
        let outer = OuterNorm::igls(2.0, nu.clone()).unwrap();
        let mut worst: f64 = 0.0;
        let mut failed = 0;
        for (f, g) in &pairs {
            let rec = holder_pairing_check(f, g, &outer).unwrap();
            worst = worst.max(rec.value);
            failed += usize::from(!rec.passed());
        }
        s.check(
            &format!("6:{name}"),
            failed == 0,
            format!("Hoelder bound, Q = 2, {name}: 200 seeded pairs, {failed} violations, max ratio {worst:.4}"),
        );
    }
    let unit = BaseSpace::half_line(4.0, 401).unwrap();
    let f = SampledFunction::indicator(unit.clone(), 0.0, 1.0).unwrap();
    let outer = OuterNorm::igls(2.0, SpectralMeasure::dirac(2.0).unwrap()).unwrap();
    let rec = holder_pairing_check(&f, &f, &outer).unwrap();
    s.check(
        "6:equality",
        (rec.value - 1.0).abs() <= 1e-10,
        format!("indicator equality case: ratio = {:.12} (1 +- 1e-10)", rec.value),
    );
}

fn non_coincidence(s: &mut Suite) {
    let deltas = [1e2, 1e4, 1e6, 1e8];
    let spread = |outer: &OuterNorm| {
        fundamental_product_report(outer, &deltas)
            .unwrap()
            .into_iter()
            .find(|r| r.label == "spread")
            .unwrap()
    };
    let leb = spread(&OuterNorm::igls(2.0, lebesgue(2.0, 4.0)).unwrap());
    s.check(
        "7a",
        leb.value > 2.0,
        format!("h = 1 on [2,4], Q = 2: spread max r / min r = {:.4} (> 2)", leb.value),
    );
    let dirac = spread(&OuterNorm::igls(2.0, SpectralMeasure::dirac(3.0).unwrap()).unwrap());
    let (lo, hi) = (dirac.get("r_min").unwrap(), dirac.get("r_max").unwrap());
    s.check(
        "7b",
        (lo - 1.0).abs() <= 1e-10 && (hi - 1.0).abs() <= 1e-10,
        format!("Dirac control: r in [{lo:.12}, {hi:.12}] (1 +- 1e-10)"),
    );
}

fn operator_measures() -> Vec<(&'static str, SpectralMeasure)> {
    vec![
        ("Dirac(2)", SpectralMeasure::dirac(2.0).unwrap()),
        ("atoms{2:0.5, 3:0.5}", SpectralMeasure::atoms(vec![(2.0, 0.5), (3.0, 0.5)]).unwrap()),
        ("lebesgue[2,4]", lebesgue(2.0, 4.0)),
        (
            "inverse_square[1.5,3]",
            SpectralMeasure::density(
                Density::preset(DensityPreset::InverseSquare),
                1.5,
                3.0,
                QuadratureSpec::default(),
            )
            .unwrap(),
        ),
    ]
}

fn operators(s: &mut Suite) {
    let half = BaseSpace::half_line(100.0, 100_001).unwrap();
    let hardy_fixtures: Vec<SampledFunction> = vec![
        SampledFunction::indicator(half.clone(), 0.0, 1.0).unwrap(),
        SampledFunction::closed_form(half.clone(), ClosedForm::Indicator { lo: 0.0, hi: 5.0, amp: 2.0 }).unwrap(),
        SampledFunction::power_head(half.clone(), 0.2).unwrap(),
        SampledFunction::closed_form(half.clone(), ClosedForm::PowerHead { exponent: 0.1, end: 2.0, amp: 0.5 })
            .unwrap(),
        SampledFunction::closed_form(half.clone(), ClosedForm::Indicator { lo: 0.0, hi: 0.3, amp: 4.0 }).unwrap(),
    ];
    let line = BaseSpace::real_line(50.0, 1 << 14).unwrap();
    let line_fixtures: Vec<SampledFunction> = vec![
        SampledFunction::indicator(line.clone(), -1.0, 1.0).unwrap(),
        SampledFunction::indicator(line.clone(), 0.0, 3.0).unwrap(),
        SampledFunction::closed_form(line.clone(), ClosedForm::Gaussian { amp: 1.0 }).unwrap(),
        SampledFunction::from_fn(line.clone(), |t| (1.0 - t.abs()).max(0.0)).unwrap(),
        SampledFunction::from_fn(line.clone(), |t| {
            if (-2.0..0.0).contains(&t) {
                1.0
            } else if (1.0..1.5).contains(&t) {
                -2.0
            } else {
                0.0
            }
        })
        .unwrap(),
    ];
    for op in [OperatorKind::HardyAverage, OperatorKind::Hilbert, OperatorKind::Maximal] {
        let fixtures = if op == OperatorKind::HardyAverage { &hardy_fixtures } else { &line_fixtures };
        let mut worst: f64 = 0.0;
        let mut worst_tol = 0.0;
        let mut failed = 0;
        for (_, nu) in operator_measures() {
            let space = TransferSpace::new(OuterNorm::igls(1.0, nu).unwrap(), op.default_k()).unwrap();
            for f in fixtures {
                let rec = verify_transfer_bound(op, f, &space).unwrap();
                if rec.value > worst {
                    worst = rec.value;
                    worst_tol = rec.get("tol").unwrap();
                }
                failed += usize::from(!rec.passed());
            }
        }
        s.check(
            &format!("8:{}", op.name()),
            failed == 0,
            format!(
                "transfer bound, {}: 5 functions x 4 measures, {failed} violations, max ratio {worst:.4} (tol {worst_tol:.1e})",
                op.name()
            ),
        );
    }
    let dirac = TransferSpace::new(
        OuterNorm::igls(1.0, SpectralMeasure::dirac(2.0).unwrap()).unwrap(),
        KpConstant::hardy_average(),
    )
    .unwrap();
    let sharp = verify_transfer_bound(OperatorKind::HardyAverage, &hardy_fixtures[0], &dirac).unwrap();
    s.check(
        "8:sharpness",
        sharp.value >= 0.5,
        format!("Dirac(2) Hardy indicator near-sharpness: ratio {:.6} (>= 0.5; sqrt(2)/2 expected)", sharp.value),
    );
    let f = &line_fixtures[0];
    let hf = hilbert_transform(f).unwrap();
    let iso = hf.lp_norm(2.0).unwrap() / f.lp_norm(2.0).unwrap();
    s.check(
        "8:isometry",
        (iso - 1.0).abs() <= 0.01,
        format!("Hilbert L2 isometry on I[-1,1], n = 2^14: |Hf|_2/|f|_2 = {iso:.4} (within 1%)"),
    );
}

fn acn(s: &mut Suite) {
    let eps: Vec<f64> = (0..=20).map(|k| 10f64.powi(-k)).collect();
    let half = BaseSpace::half_line(10.0, 10_001).unwrap();
    let unit = BaseSpace::half_line(1.0, 1001).unwrap();
    let fixtures: Vec<(&str, SampledFunction, OuterNorm)> = vec![
        (
            "I[0,1], lebesgue[2,4], Q=1",
            SampledFunction::indicator(half.clone(), 0.0, 1.0).unwrap(),
            OuterNorm::igls(1.0, lebesgue(2.0, 4.0)).unwrap(),
        ),
        (
            "t^-0.2 on (0,1], Dirac(2)",
            SampledFunction::power_head(unit.clone(), 0.2).unwrap(),
            OuterNorm::igls(1.0, SpectralMeasure::dirac(2.0).unwrap()).unwrap(),
        ),
        (
            "e^-t, atoms{2:1, 3:1}, Q=2",
            SampledFunction::closed_form(half.clone(), ClosedForm::ExpDecay { rate: 1.0, amp: 1.0 }).unwrap(),
            OuterNorm::igls(2.0, SpectralMeasure::atoms(vec![(2.0, 1.0), (3.0, 1.0)]).unwrap()).unwrap(),
        ),
        (
            "2 I[0,3], inverse_square[2,4], Q=2",
            SampledFunction::closed_form(half.clone(), ClosedForm::Indicator { lo: 0.0, hi: 3.0, amp: 2.0 })
                .unwrap(),
            OuterNorm::igls(2.0, preset(DensityPreset::InverseSquare, 2.0, 4.0)).unwrap(),
        ),
    ];
    for (name, f, outer) in &fixtures {
        let curve = acn_modulus(f, outer, &eps).unwrap();
        let eps0 = curve.eps0(0.01);
        s.check(
            &format!("9:{name}"),
            curve.is_monotone() && eps0.is_some(),
            format!(
                "ACN {name}: monotone = {}, omega <= 1% of norm from eps0 = {}",
                curve.is_monotone(),
                eps0.map_or("none".into(), |e| format!("{e:e}"))
            ),
        );
    }
    let psi = PsiFunction::blowup(ExponentInterval::new(1.0, 4.0).unwrap()).unwrap();
    let f = SampledFunction::power_head(unit, 0.25).unwrap();
    let curve = acn_modulus(&f, &OuterNorm::gl_sup(psi), &eps).unwrap();
    let min_ratio = curve.ratios().into_iter().fold(f64::INFINITY, f64::min);
    s.check(
        "9:glsup",
        min_ratio >= 0.25,
        format!("GLSup negative control (psi blowup on (1,4), t^-1/4): min omega/norm = {min_ratio:.4} (>= 0.25)"),
    );
}

fn norm_axioms(s: &mut Suite) {
    let t = Instant::now();
    let variants: Vec<(&str, OuterNorm)> = vec![
        ("igls lebesgue[2,4] Q=2", OuterNorm::igls(2.0, lebesgue(2.0, 4.0)).unwrap()),
        (
            "glsup power:0.5 on (1.5,6)",
            OuterNorm::gl_sup(PsiFunction::power(0.5, ExponentInterval::new(1.5, 6.0).unwrap())),
        ),
    ];
    for (i, (name, outer)) in variants.iter().enumerate() {
        let dom = outer.profile_domain();
        let mut rng = corpus::rng(500 + i as u64);
        let (mut hom, mut tri, mut lat): (f64, f64, f64) = (0.0, 0.0, 0.0);
        for _ in 0..500 {
            let (h1, h2) = corpus::random_profile_pair(&mut rng, dom);
            let c = rng.gen_range(0.01..100.0);
            let n1 = cgls_norm(&h1, outer).unwrap();
            let n2 = cgls_norm(&h2, outer).unwrap();
            let ns = cgls_norm(&h1.sum(&h2).unwrap(), outer).unwrap();
            let nc = cgls_norm(&h1.scale(c), outer).unwrap();
            let tol = outer.tolerance();
            hom = hom.max(rel(nc.value, c * n1.value));
            tri = tri.max((ns.value - n1.value - n2.value) / (n1.value + n2.value) - tol);
            lat = lat.max((n1.value.max(n2.value) - ns.value) / ns.value - tol);
        }
        s.check(
            &format!("10:{name}"),
            hom <= 1e-12 && tri <= 0.0 && lat <= 0.0,
            format!(
                "norm axioms, {name}, 500 seeded pairs: homogeneity rel err {hom:.1e}, \
                 triangle excess {tri:.1e}, lattice excess {lat:.1e} (<= 0 after tolerance)"
            ),
        );
    }
    let secs = t.elapsed().as_secs_f64();
    s.check("10:runtime", secs < 60.0, format!("norm-axiom suite took {secs:.2} s (< 60 s)"));
}

fn main() {
    let mut s = Suite {
        unexpected: Vec::new(),
        known_seen: Vec::new(),
    };
    let t = Instant::now();
    dirac_reduction(&mut s);
    example_closed_form(&mut s);
    saddle(&mut s);
    am_class(&mut s);
    boyd(&mut s);
    dual(&mut s);
    non_coincidence(&mut s);
    operators(&mut s);
    acn(&mut s);
    norm_axioms(&mut s);
    println!(
        "acceptance: {:.1} s, {} known failing checks, {} unexpected",
        t.elapsed().as_secs_f64(),
        s.known_seen.len(),
        s.unexpected.len()
    );
    if !s.unexpected.is_empty() {
        eprintln!("unexpected: {:?}", s.unexpected);
        std::process::exit(1);
    }
}
