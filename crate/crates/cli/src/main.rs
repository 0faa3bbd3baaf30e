//! `stabil`: construct, apply, and classify stability-preserving operators on
//! polynomials; test outer functions and minimum-phase signals.
//!
//! Exit codes: 0 definitive positive verdict, 1 definitive negative (with a
//! witness where applicable), 2 inconclusive or borderline, 3 usage or input
//! error. All payloads are JSON on standard output; diagnostics go to
//! standard error. Identical inputs and seeds produce identical output.

mod commands;
mod io;

use std::process::ExitCode;

const USAGE: &str = "\
usage: stabil <command> [args]

commands:
  stable <poly.json> <region.json>
      Decide whether the polynomial has roots in the region.
  classify <operator.json> <region1.json> <region2.json>
      Decide the structure of an operator carrying region1-stable
      polynomials to region2-stable ones.
      flags: --tol T  --budget N  --seed S  --grid D
  falsify <operator.json> <region1.json> <region2.json>
      Search for a stability counterexample only.
      flags: --budget N  --seed S
  apply <operator.json> <poly.json>
      Apply an operator to a polynomial.
  make-operator --kind K ... [--out FILE]
      Construct an operator truncation. Kinds:
        product-composition --psi P.json --phi P.json --truncation N
        rank1 --nu P.json --psi P.json --truncation N
        dilation --tau RE[,IM] --truncation N
        pcd --psi P.json --phi P.json --derivs M --truncation N
        compose --psi OUTER_OP.json --phi INNER_OP.json
  outer <h2.json>
      Jensen outer test for truncated coefficient data.
      flags: --samples K  --tol T
  minphase <signal.json | signal.txt>
      Minimum-phase test for a causal signal (JSON or one real per line).
  classify-h2 <operator.json> --mode outer|shifted
      Classify an operator on truncated Hardy data.
      flags: --tol T  --budget N  --seed S
  selfcheck [--level fast|full]
      Run the built-in invariant suites.

environment:
  STABIL_DEFAULT_TOL   default tolerance when --tol is not given
";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let code = match run(&args) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("stabil: {message}");
            3
        }
    };
    ExitCode::from(code)
}

fn run(args: &[String]) -> Result<u8, String> {
    let command = match args.first() {
        Some(c) => c.as_str(),
        None => {
            eprint!("{USAGE}");
            return Ok(3);
        }
    };
    let rest = &args[1..];
    match command {
        "stable" => commands::stable(rest),
        "classify" => commands::classify(rest),
        "falsify" => commands::falsify(rest),
        "apply" => commands::apply(rest),
        "make-operator" => commands::make_operator(rest),
        "outer" => commands::outer(rest),
        "minphase" => commands::minphase(rest),
        "classify-h2" => commands::classify_h2(rest),
        "selfcheck" => commands::selfcheck(rest),
        "help" | "--help" | "-h" => {
            print!("{USAGE}");
            Ok(0)
        }
        other => Err(format!("unknown command `{other}`; try `stabil help`")),
    }
}

/// Minimal flag parser: positional arguments plus `--name value` pairs.
pub(crate) struct Args {
    pub positional: Vec<String>,
    flags: Vec<(String, String)>,
}

impl Args {
    pub fn parse(args: &[String], known_flags: &[&str]) -> Result<Args, String> {
        let mut positional = Vec::new();
        let mut flags = Vec::new();
        let mut iter = args.iter();
        while let Some(arg) = iter.next() {
            if let Some(name) = arg.strip_prefix("--") {
                if !known_flags.contains(&name) {
                    return Err(format!("unknown flag --{name}"));
                }
                let value = iter
                    .next()
                    .ok_or_else(|| format!("flag --{name} needs a value"))?;
                flags.push((name.to_string(), value.clone()));
            } else {
                positional.push(arg.clone());
            }
        }
        Ok(Args { positional, flags })
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.flags
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_str())
    }

    pub fn get_f64(&self, name: &str, default: f64) -> Result<f64, String> {
        match self.get(name) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| format!("flag --{name} expects a number, got `{v}`")),
        }
    }

    pub fn get_usize(&self, name: &str, default: usize) -> Result<usize, String> {
        match self.get(name) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| format!("flag --{name} expects an integer, got `{v}`")),
        }
    }

    pub fn get_u64(&self, name: &str, default: u64) -> Result<u64, String> {
        match self.get(name) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| format!("flag --{name} expects an integer, got `{v}`")),
        }
    }
}

/// Default tolerance: `--tol` wins, then STABIL_DEFAULT_TOL, then 1e-8.
pub(crate) fn default_tol(args: &Args) -> Result<f64, String> {
    if let Some(v) = args.get("tol") {
        return v
            .parse()
            .map_err(|_| format!("flag --tol expects a number, got `{v}`"));
    }
    match std::env::var("STABIL_DEFAULT_TOL") {
        Ok(v) => v
            .parse()
            .map_err(|_| format!("STABIL_DEFAULT_TOL is not a number: `{v}`")),
        Err(_) => Ok(1e-8),
    }
}
