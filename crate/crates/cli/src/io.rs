//! File loading for the JSON input formats, plus the plain-text signal form.

use num_complex::Complex64;
use stabil_core::hardy::{H2Trunc, Signal};
use stabil_core::{ComplexPoly, OperatorTruncation, Region};

fn read(path: &str) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))
}

pub fn load_poly(path: &str) -> Result<ComplexPoly, String> {
    serde_json::from_str(&read(path)?).map_err(|e| format!("{path}: bad polynomial JSON: {e}"))
}

pub fn load_region(path: &str) -> Result<Region, String> {
    serde_json::from_str(&read(path)?).map_err(|e| format!("{path}: bad region JSON: {e}"))
}

pub fn load_operator(path: &str) -> Result<OperatorTruncation, String> {
    serde_json::from_str(&read(path)?).map_err(|e| format!("{path}: bad operator JSON: {e}"))
}

pub fn load_h2(path: &str) -> Result<H2Trunc, String> {
    let poly = load_poly(path)?;
    Ok(H2Trunc::from_poly(&poly))
}

/// Signals come either as `{"samples": [[re, im], ...]}` or as a plain-text
/// trace with one real sample per line (blank lines and `#` comments are
/// skipped).
pub fn load_signal(path: &str) -> Result<Signal, String> {
    let content = read(path)?;
    let trimmed = content.trim_start();
    if trimmed.starts_with('{') {
        let value: serde_json::Value =
            serde_json::from_str(&content).map_err(|e| format!("{path}: bad signal JSON: {e}"))?;
        let samples = value
            .get("samples")
            .and_then(|s| s.as_array())
            .ok_or_else(|| format!("{path}: signal JSON needs a `samples` array"))?;
        let mut out = Vec::with_capacity(samples.len());
        for (i, entry) in samples.iter().enumerate() {
            let pair = entry
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| format!("{path}: sample {i} is not a [re, im] pair"))?;
            let re = pair[0]
                .as_f64()
                .ok_or_else(|| format!("{path}: sample {i} has a non-numeric part"))?;
            let im = pair[1]
                .as_f64()
                .ok_or_else(|| format!("{path}: sample {i} has a non-numeric part"))?;
            out.push(Complex64::new(re, im));
        }
        Ok(Signal::new(out))
    } else {
        let mut out = Vec::new();
        for (lineno, line) in content.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let value: f64 = line
                .parse()
                .map_err(|_| format!("{path}:{}: not a number: `{line}`", lineno + 1))?;
            out.push(Complex64::new(value, 0.0));
        }
        if out.is_empty() {
            return Err(format!("{path}: no samples found"));
        }
        Ok(Signal::new(out))
    }
}

/// `RE` or `RE,IM`.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = text.split(',').collect();
    match parts.as_slice() {
        [re] => Ok(Complex64::new(
            re.trim()
                .parse()
                .map_err(|_| format!("not a number: `{re}`"))?,
            0.0,
        )),
        [re, im] => Ok(Complex64::new(
            re.trim()
                .parse()
                .map_err(|_| format!("not a number: `{re}`"))?,
            im.trim()
                .parse()
                .map_err(|_| format!("not a number: `{im}`"))?,
        )),
        _ => Err(format!("expected RE or RE,IM, got `{text}`")),
    }
}

pub fn emit(payload: &serde_json::Value) {
    use std::io::Write;
    let text = serde_json::to_string_pretty(payload).expect("payload serializes");
    // A closed pipe on the reading side is not our error.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

pub fn complex_json(c: Complex64) -> serde_json::Value {
    serde_json::json!([c.re, c.im])
}
