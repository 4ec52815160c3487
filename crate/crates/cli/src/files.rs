//! Structure-constant tables and ideal files.

use cgsb_core::freelie::LieSpec;
use cgsb_core::linear::Q;
use cgsb_core::poisson::PoissonExpr;
use serde_json::Value;

use crate::expr::{parse_expr, ParseError};

/// `{"basis":["e","f","h"],"brackets":{"e,f":[["h","1"]], ...}}`.
pub fn parse_table(text: &str) -> Result<LieSpec, String> {
    let v: Value = serde_json::from_str(text).map_err(|e| format!("table: {}", e))?;
    let basis: Vec<String> = v
        .get("basis")
        .and_then(Value::as_array)
        .ok_or("table: missing \"basis\" array")?
        .iter()
        .map(|b| b.as_str().map(str::to_owned).ok_or("table: basis names must be strings"))
        .collect::<Result<_, _>>()?;
    for name in &basis {
        if !is_ident(name) {
            return Err(format!("table: {:?} is not an identifier", name));
        }
    }
    let mut entries = Vec::new();
    if let Some(br) = v.get("brackets") {
        let br = br.as_object().ok_or("table: \"brackets\" must be an object")?;
        for (pair, rhs) in br {
            let (a, b) = pair.split_once(',').ok_or_else(|| format!("table: bad pair key {:?}", pair))?;
            let mut terms = Vec::new();
            for t in rhs.as_array().ok_or_else(|| format!("table: value of {:?} must be an array", pair))? {
                let t = t.as_array().filter(|t| t.len() == 2);
                let (name, c) = match t.map(|t| (t[0].as_str(), coeff(&t[1]))) {
                    Some((Some(n), Some(c))) => (n.to_owned(), c),
                    _ => return Err(format!("table: entries of {:?} must be [name, coefficient]", pair)),
                };
                terms.push((name, c));
            }
            entries.push(((a.trim().to_owned(), b.trim().to_owned()), terms));
        }
    }
    LieSpec::table(&basis, &entries).map_err(|e| format!("table: {}", e))
}

fn coeff(v: &Value) -> Option<Q> {
    match v {
        Value::String(s) => s.trim().parse().ok(),
        Value::Number(n) => n.as_i64().map(cgsb_core::linear::q),
        _ => None,
    }
}

pub fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic()) && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// One relation per line, `#` starts a comment; a JSON array of strings is
/// also accepted.
pub fn parse_ideal(text: &str, spec: &LieSpec) -> Result<Vec<PoissonExpr>, String> {
    if text.trim_start().starts_with('[') {
        let v: Vec<String> = serde_json::from_str(text).map_err(|e| format!("ideal: {}", e))?;
        return v
            .iter()
            .enumerate()
            .map(|(i, s)| parse_expr(s, spec).map_err(|e| format!("ideal relation {}: {}", i + 1, e)))
            .collect();
    }
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        out.push(parse_expr(body, spec).map_err(|e: ParseError| format!("ideal line {}: {}", i + 1, e))?);
    }
    Ok(out)
}
