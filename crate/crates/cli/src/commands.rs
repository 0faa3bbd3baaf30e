//! Subcommand implementations. Each returns the process exit code; input and
//! usage problems are reported as `Err` and exit 3.

use crate::io::{
    complex_json, emit, load_h2, load_operator, load_poly, load_region, load_signal,
    parse_complex,
};
use crate::{default_tol, Args};
use serde_json::json;
use stabil_core::analysis::{self, AnalysisError, Classification, ClassifyOptions};
use stabil_core::hardy::{
    classify_h2_operator, jensen_outer_test, minimum_phase_test, H2Classification, OuterMode,
    OuterReport, OuterVerdict, DEFAULT_JENSEN_SAMPLES,
};
use stabil_core::suites::{run_selfcheck, CheckLevel};
use stabil_core::{
    compose_operators, make_dilation, make_pcd, make_product_composition, make_rank1,
    StabilityVerdict,
};

pub fn stable(raw: &[String]) -> Result<u8, String> {
    let args = Args::parse(raw, &[])?;
    let [poly_path, region_path] = two_positional(&args, "stable <poly.json> <region.json>")?;
    let poly = load_poly(&poly_path)?;
    let region = load_region(&region_path)?;
    let verdict = region
        .is_stable(&poly)
        .map_err(|e| format!("root finding failed: {e}"))?;
    match verdict {
        StabilityVerdict::Stable => {
            emit(&json!({"verdict": "stable"}));
            Ok(0)
        }
        StabilityVerdict::Unstable(root) => {
            emit(&json!({"verdict": "unstable", "witness_root": complex_json(root)}));
            Ok(1)
        }
        StabilityVerdict::Borderline(root) => {
            emit(&json!({"verdict": "borderline", "witness_root": complex_json(root)}));
            Ok(2)
        }
        StabilityVerdict::ZeroPoly => {
            emit(&json!({"verdict": "zero_polynomial"}));
            Ok(3)
        }
    }
}

pub fn classify(raw: &[String]) -> Result<u8, String> {
    let args = Args::parse(raw, &["tol", "budget", "seed", "grid"])?;
    if args.positional.len() != 3 {
        return Err("usage: classify <operator.json> <region1.json> <region2.json>".into());
    }
    let operator = load_operator(&args.positional[0])?;
    let omega1 = load_region(&args.positional[1])?;
    let omega2 = load_region(&args.positional[2])?;
    let opts = ClassifyOptions {
        tol: default_tol(&args)?,
        budget: args.get_usize("budget", 10_000)?,
        seed: args.get_u64("seed", 0)?,
        grid_density: args.get_usize("grid", 24)?,
    };
    let classification = match analysis::classify(&operator, &omega1, &omega2, &opts) {
        Ok(c) => c,
        Err(AnalysisError::PreconditionViolated(message)) => return Err(message),
        Err(e) => return Err(format!("classification failed: {e}")),
    };
    let code = match &classification {
        Classification::Rank1 { .. } | Classification::ProductComposition { .. } => 0,
        Classification::NotPreserving { .. } => 1,
        Classification::Inconclusive { .. } => 2,
    };
    let payload =
        serde_json::to_value(&classification).map_err(|e| format!("serialization: {e}"))?;
    emit(&payload);
    Ok(code)
}

pub fn falsify(raw: &[String]) -> Result<u8, String> {
    let args = Args::parse(raw, &["budget", "seed"])?;
    if args.positional.len() != 3 {
        return Err("usage: falsify <operator.json> <region1.json> <region2.json>".into());
    }
    let operator = load_operator(&args.positional[0])?;
    let omega1 = load_region(&args.positional[1])?;
    let omega2 = load_region(&args.positional[2])?;
    if !omega1.bounded() {
        return Err("the first region must be bounded".into());
    }
    let budget = args.get_usize("budget", 10_000)?;
    let seed = args.get_u64("seed", 0)?;
    match analysis::falsify(&operator, &omega1, &omega2, budget, seed) {
        Some((witness, image_root)) => {
            let witness_json =
                serde_json::to_value(&witness).map_err(|e| format!("serialization: {e}"))?;
            emit(&json!({
                "verdict": "not_preserving",
                "witness": witness_json,
                "image_root": complex_json(image_root),
            }));
            Ok(1)
        }
        None => {
            emit(&json!({"verdict": "no_counterexample", "budget": budget}));
            Ok(0)
        }
    }
}

pub fn apply(raw: &[String]) -> Result<u8, String> {
    let args = Args::parse(raw, &[])?;
    let [operator_path, poly_path] = two_positional(&args, "apply <operator.json> <poly.json>")?;
    let operator = load_operator(&operator_path)?;
    let poly = load_poly(&poly_path)?;
    let image = operator
        .apply(&poly)
        .map_err(|e| format!("cannot apply: {e}"))?;
    let payload = serde_json::to_value(&image).map_err(|e| format!("serialization: {e}"))?;
    emit(&payload);
    Ok(0)
}

pub fn make_operator(raw: &[String]) -> Result<u8, String> {
    let args = Args::parse(
        raw,
        &["kind", "psi", "phi", "nu", "tau", "derivs", "truncation", "out"],
    )?;
    let kind = args.get("kind").ok_or("make-operator requires --kind")?;
    let truncation = args.get_usize("truncation", 8)?;
    let operator = match kind {
        "product-composition" => {
            let psi = load_poly(args.get("psi").ok_or("--psi is required")?)?;
            let phi = load_poly(args.get("phi").ok_or("--phi is required")?)?;
            if psi.is_zero() {
                return Err("the multiplier polynomial must be nonzero".into());
            }
            make_product_composition(&psi, &phi, truncation)
        }
        "rank1" => {
            let nu = load_poly(args.get("nu").ok_or("--nu is required")?)?;
            let psi = load_poly(args.get("psi").ok_or("--psi is required")?)?;
            let mut values: Vec<_> = nu.coeffs().to_vec();
            values.resize(truncation + 1, num_complex::Complex64::new(0.0, 0.0));
            make_rank1(&values, &psi, truncation)
        }
        "dilation" => {
            let tau = parse_complex(args.get("tau").ok_or("--tau is required")?)?;
            make_dilation(tau, truncation).map_err(|e| e.to_string())?
        }
        "pcd" => {
            let psi = load_poly(args.get("psi").ok_or("--psi is required")?)?;
            let phi = load_poly(args.get("phi").ok_or("--phi is required")?)?;
            let derivs = args.get_usize("derivs", 1)?;
            make_pcd(&psi, &phi, derivs, truncation)
        }
        "compose" => {
            let outer = load_operator(args.get("psi").ok_or("--psi (outer operator) is required")?)?;
            let inner = load_operator(args.get("phi").ok_or("--phi (inner operator) is required")?)?;
            compose_operators(&outer, &inner).map_err(|e| e.to_string())?
        }
        other => return Err(format!("unknown operator kind `{other}`")),
    };
    let payload = serde_json::to_value(&operator).map_err(|e| format!("serialization: {e}"))?;
    match args.get("out") {
        Some(path) => {
            let text =
                serde_json::to_string_pretty(&payload).map_err(|e| format!("serialization: {e}"))?;
            std::fs::write(path, text + "\n").map_err(|e| format!("cannot write {path}: {e}"))?;
            emit(&json!({"written": path, "N": operator.source_bound()}));
        }
        None => emit(&payload),
    }
    Ok(0)
}

pub fn outer(raw: &[String]) -> Result<u8, String> {
    let args = Args::parse(raw, &["samples", "tol"])?;
    if args.positional.len() != 1 {
        return Err("usage: outer <h2.json>".into());
    }
    let f = load_h2(&args.positional[0])?;
    let samples = args.get_usize("samples", DEFAULT_JENSEN_SAMPLES)?.max(64);
    let tol = args.get_f64("tol", 1e-6)?;
    let report = jensen_outer_test(&f, samples, tol).map_err(|e| e.to_string())?;
    let mut payload = outer_report_json(&report, "outer", "not_outer");
    // The deficit tolerance has no canonical value; surface the one used.
    payload["tol"] = json!(tol);
    emit(&payload);
    Ok(outer_code(report.verdict))
}

pub fn minphase(raw: &[String]) -> Result<u8, String> {
    let args = Args::parse(raw, &[])?;
    if args.positional.len() != 1 {
        return Err("usage: minphase <signal.json | signal.txt>".into());
    }
    let signal = load_signal(&args.positional[0])?;
    let report = minimum_phase_test(&signal).map_err(|e| e.to_string())?;
    emit(&outer_report_json(&report, "minimum_phase", "not_minimum_phase"));
    Ok(outer_code(report.verdict))
}

fn outer_code(verdict: OuterVerdict) -> u8 {
    match verdict {
        OuterVerdict::Outer => 0,
        OuterVerdict::NotOuter => 1,
        OuterVerdict::Borderline => 2,
    }
}

fn outer_report_json(report: &OuterReport, positive: &str, negative: &str) -> serde_json::Value {
    let verdict = match report.verdict {
        OuterVerdict::Outer => positive,
        OuterVerdict::NotOuter => negative,
        OuterVerdict::Borderline => "borderline",
    };
    let deficit = if report.deficit.is_finite() {
        json!(report.deficit)
    } else {
        json!("infinite")
    };
    json!({
        "verdict": verdict,
        "deficit": deficit,
        "radius": report.radius,
        "samples": report.samples,
        "truncation_len": report.truncation_len,
        "boundary_roots": report.boundary_roots.iter().map(|&r| complex_json(r)).collect::<Vec<_>>(),
        "radius_deficits": report.radius_deficits.iter().map(|&(r, d)| json!([r, d])).collect::<Vec<_>>(),
    })
}

pub fn classify_h2(raw: &[String]) -> Result<u8, String> {
    let args = Args::parse(raw, &["mode", "tol", "budget", "seed"])?;
    if args.positional.len() != 1 {
        return Err("usage: classify-h2 <operator.json> --mode outer|shifted".into());
    }
    let operator = load_operator(&args.positional[0])?;
    let mode = match args.get("mode").unwrap_or("outer") {
        "outer" => OuterMode::Outer,
        "shifted" => OuterMode::Shifted,
        other => return Err(format!("--mode must be outer or shifted, got `{other}`")),
    };
    let tol = default_tol(&args)?;
    let budget = args.get_usize("budget", 2_000)?;
    let seed = args.get_u64("seed", 0)?;
    let result = classify_h2_operator(&operator, mode, tol, budget, seed);
    let code = match &result {
        H2Classification::ProductComposition { .. } | H2Classification::Rank1 { .. } => 0,
        H2Classification::NotPreserving { .. } => 1,
        H2Classification::Inconclusive { .. } => 2,
    };
    let payload = serde_json::to_value(&result).map_err(|e| format!("serialization: {e}"))?;
    emit(&payload);
    Ok(code)
}

pub fn selfcheck(raw: &[String]) -> Result<u8, String> {
    let args = Args::parse(raw, &["level"])?;
    let level = match args.get("level").unwrap_or("fast") {
        "fast" => CheckLevel::Fast,
        "full" => CheckLevel::Full,
        other => return Err(format!("--level must be fast or full, got `{other}`")),
    };
    let results = run_selfcheck(level);
    let passed = results.iter().all(|s| s.passed);
    let first_failure = results.iter().find(|s| !s.passed).map(|s| s.name.clone());
    let payload = json!({
        "level": match level { CheckLevel::Fast => "fast", CheckLevel::Full => "full" },
        "passed": passed,
        "first_failure": first_failure,
        "suites": serde_json::to_value(&results).map_err(|e| format!("serialization: {e}"))?,
    });
    emit(&payload);
    if passed {
        Ok(0)
    } else {
        Ok(1)
    }
}

fn two_positional(args: &Args, usage: &str) -> Result<[String; 2], String> {
    if args.positional.len() != 2 {
        return Err(format!("usage: {usage}"));
    }
    Ok([args.positional[0].clone(), args.positional[1].clone()])
}
