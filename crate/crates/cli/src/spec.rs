//! The `--function` mini-grammar:
//!
//! * `const` or `const=<c>` — the constant weight `c` (default 1)
//! * `expo=<alpha>`         — the exponential phase `e(alpha·n)`
//! * `char=<q>,<index>`     — Dirichlet character, prime modulus `q`
//! * `table=<path>`         — explicit values, one `re [im]` pair per line

use std::path::Path;

use num_complex::Complex;
use roughsum_core::func::{DirichletCharacter, TestFunction};

use crate::error::{CliError, CliResult};

pub fn parse_function_spec(spec: &str) -> CliResult<TestFunction<f64>> {
    if spec == "const" {
        return Ok(TestFunction::one());
    }
    if let Some(rest) = spec.strip_prefix("const=") {
        let c: f64 = rest
            .parse()
            .map_err(|_| CliError::Usage(format!("function spec: bad constant value {rest:?}")))?;
        return Ok(TestFunction::constant(Complex::new(c, 0.0)));
    }
    if let Some(rest) = spec.strip_prefix("expo=") {
        let alpha: f64 = rest.parse().map_err(|_| {
            CliError::Usage(format!("function spec: bad phase {rest:?} (want a real α)"))
        })?;
        if !alpha.is_finite() {
            return Err(CliError::Usage(
                "function spec: phase must be finite".into(),
            ));
        }
        return Ok(TestFunction::phase(alpha));
    }
    if let Some(rest) = spec.strip_prefix("char=") {
        let (q, index) = rest.split_once(',').ok_or_else(|| {
            CliError::Usage(format!(
                "function spec: char wants <q>,<index>, got {rest:?}"
            ))
        })?;
        let q: u64 = q
            .parse()
            .map_err(|_| CliError::Usage(format!("function spec: bad modulus {q:?}")))?;
        let index: u64 = index.parse().map_err(|_| {
            CliError::Usage(format!("function spec: bad character index {index:?}"))
        })?;
        let chi = DirichletCharacter::new(q, index)?;
        return Ok(TestFunction::character(chi));
    }
    if let Some(rest) = spec.strip_prefix("table=") {
        return read_table_function(Path::new(rest));
    }
    Err(CliError::Usage(format!(
        "function spec {spec:?} not understood; \
         expected const[=c], expo=<alpha>, char=<q>,<index> or table=<path>"
    )))
}

/// Table file: one value per line, `re` or `re im`, blank lines and
/// `#` comments skipped; line k gives F(k).
fn read_table_function(path: &Path) -> CliResult<TestFunction<f64>> {
    let text = std::fs::read_to_string(path)?;
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let re: f64 = parts
            .next()
            .unwrap()
            .parse()
            .map_err(|_| bad_table_line(path, lineno))?;
        let im: f64 = match parts.next() {
            Some(s) => s.parse().map_err(|_| bad_table_line(path, lineno))?,
            None => 0.0,
        };
        if parts.next().is_some() {
            return Err(bad_table_line(path, lineno));
        }
        values.push(Complex::new(re, im));
    }
    if values.is_empty() {
        return Err(CliError::Usage(format!(
            "function spec: table {} has no values",
            path.display()
        )));
    }
    Ok(TestFunction::table(values))
}

fn bad_table_line(path: &Path, lineno: usize) -> CliError {
    CliError::Usage(format!(
        "function spec: table {} line {}: want `re` or `re im`",
        path.display(),
        lineno + 1
    ))
}
