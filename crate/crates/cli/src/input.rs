//! Input parsing: grammars, families, polynomials, loop specs.

use std::fmt;
use std::io::Read;

use serde_json::json;

use subcocycle_core::iet::{family_zeta_n, Perm, RauzyLoop, RauzyMove};
use subcocycle_core::{IntPolynomial, Substitution, TrigMatrix};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Core(subcocycle_core::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => f.write_str(msg),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<subcocycle_core::Error> for CliError {
    fn from(e: subcocycle_core::Error) -> Self {
        CliError::Core(e)
    }
}

pub fn resolve_substitution(
    sub: Option<&str>,
    file: Option<&str>,
    family: Option<&str>,
) -> Result<Substitution, CliError> {
    if let Some(text) = sub {
        return Ok(Substitution::parse(text)?);
    }
    if let Some(path) = file {
        let text = if path == "-" {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| CliError::Config(format!("reading stdin: {e}")))?;
            buf
        } else {
            std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("reading {path}: {e}")))?
        };
        return Ok(Substitution::parse(&text)?);
    }
    if let Some(name) = family {
        return family_substitution(name);
    }
    Err(CliError::Config("give one of --sub, --file or --family".into()))
}

/// Built-in substitutions: `fibonacci`, `thue-morse`, `zeta-m:<m>`,
/// `loop:<n>`.
pub fn family_substitution(name: &str) -> Result<Substitution, CliError> {
    match name {
        "fibonacci" => Ok(Substitution::parse("0->01;1->0")?),
        "thue-morse" => Ok(Substitution::parse("0->01;1->10")?),
        _ => {
            if let Some(m) = name.strip_prefix("zeta-m:") {
                let m: usize = m
                    .parse()
                    .map_err(|_| CliError::Config(format!("bad parameter in '{name}'")))?;
                if m == 0 {
                    return Err(CliError::Config("zeta-m parameter must be >= 1".into()));
                }
                let mut img0 = vec![0; m];
                img0.push(1);
                return Ok(Substitution::new(vec![img0, vec![0, 1, 2], vec![1]])?);
            }
            if let Some(n) = name.strip_prefix("loop:") {
                let n: usize = n
                    .parse()
                    .map_err(|_| CliError::Config(format!("bad parameter in '{name}'")))?;
                if n == 0 {
                    return Err(CliError::Config("loop parameter must be >= 1".into()));
                }
                return Ok(family_zeta_n(n));
            }
            Err(CliError::Config(format!(
                "unknown family '{name}' (expected fibonacci, thue-morse, zeta-m:<m> or loop:<n>)"
            )))
        }
    }
}

/// Comma-separated integer coefficients, highest degree first.
pub fn parse_polynomial(text: &str) -> Result<IntPolynomial, CliError> {
    let mut coeffs: Vec<i64> = Vec::new();
    for tok in text.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        coeffs.push(
            tok.parse()
                .map_err(|_| CliError::Config(format!("bad coefficient '{tok}'")))?,
        );
    }
    if coeffs.is_empty() {
        return Err(CliError::Config("empty coefficient list".into()));
    }
    coeffs.reverse(); // internal representation is constant-first
    Ok(IntPolynomial::from_i64(&coeffs))
}

/// Loop mini-language: whitespace-separated `key=value` pairs.
///
/// `base=4321` sets the starting permutation, `moves=b,a,a,b,a*n,b,a,a,a`
/// lists the moves (with `*<count>` repetition, where the count is a number
/// or a symbol), and any other pair such as `n=3` binds a symbol.
pub fn parse_loop_spec(spec: &str) -> Result<RauzyLoop, CliError> {
    let mut base: Option<Perm> = None;
    let mut moves_text: Option<String> = None;
    let mut bindings: Vec<(String, usize)> = Vec::new();
    for token in spec.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("expected key=value, got '{token}'")))?;
        match key {
            "base" => {
                base = Some(
                    Perm::parse(value)
                        .map_err(|_| CliError::Config(format!("bad permutation '{value}'")))?,
                )
            }
            "moves" => moves_text = Some(value.to_string()),
            _ => {
                let v: usize = value
                    .parse()
                    .map_err(|_| CliError::Config(format!("bad binding '{token}'")))?;
                bindings.push((key.to_string(), v));
            }
        }
    }
    let base = base.ok_or_else(|| CliError::Config("loop spec needs base=<perm>".into()))?;
    let moves_text =
        moves_text.ok_or_else(|| CliError::Config("loop spec needs moves=<list>".into()))?;
    let mut moves = Vec::new();
    for item in moves_text.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let (name, count) = match item.split_once('*') {
            Some((name, count_text)) => {
                let count = match count_text.parse::<usize>() {
                    Ok(v) => v,
                    Err(_) => bindings
                        .iter()
                        .find(|(k, _)| k == count_text)
                        .map(|(_, v)| *v)
                        .ok_or_else(|| {
                            CliError::Config(format!("unbound repeat count '{count_text}'"))
                        })?,
                };
                (name, count)
            }
            None => (item, 1),
        };
        let mv = match name {
            "a" => RauzyMove::A,
            "b" => RauzyMove::B,
            _ => return Err(CliError::Config(format!("unknown move '{name}'"))),
        };
        moves.extend(std::iter::repeat(mv).take(count));
    }
    if moves.is_empty() {
        return Err(CliError::Config("loop spec has no moves".into()));
    }
    Ok(RauzyLoop { base, moves })
}

/// Cocycle matrix as JSON: row-major entries, each a list of
/// `[[frequency vector], coefficient]` pairs in deterministic order.
pub fn substitution_to_json(trig: &TrigMatrix) -> serde_json::Value {
    let d = trig.dim();
    let mut entries = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let terms: Vec<serde_json::Value> = trig
                .entry(i, j)
                .terms()
                .map(|(k, c)| json!([k, c.to_string()]))
                .collect();
            entries.push(serde_json::Value::Array(terms));
        }
    }
    json!({ "d": d, "entries": entries })
}
