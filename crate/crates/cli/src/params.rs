//! Raw parameter values gathered from flags, `--input` files and sweep grid
//! points, parsed on demand by each command.

use crate::CliError;
use k3sv::rational::{is_integer, parse_rational, to_string};
use k3sv::{KClassInvariants, ModuliData, MukaiVector, Rational};
use serde_json::Value;
use std::collections::BTreeMap;

/// Scalar parameter names, spelled as on the command line.
pub const KEYS: &[&str] = &[
    "rho", "s", "r", "c2", "c1sq", "n", "order", "chiL", "alpha", "Lsq", "u",
];

#[derive(Debug, Clone, Default)]
pub struct Params {
    values: BTreeMap<String, String>,
    pub v: Option<MukaiVector>,
    pub xs: Option<Vec<MukaiVector>>,
}

impl Params {
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<(), CliError> {
        if !KEYS.contains(&key) {
            return Err(CliError::Usage(format!("unknown parameter {key:?}")));
        }
        self.values.insert(key.to_string(), value.into());
        Ok(())
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Fill parameters not already set from a JSON object. Scalars may be
    /// numbers or rational strings; `alpha` may be an object with the four
    /// invariants; `v` and `xs` are Mukai vectors.
    pub fn merge_json(&mut self, doc: &Value) -> Result<(), CliError> {
        let obj = doc
            .as_object()
            .ok_or_else(|| CliError::Input("input must be a JSON object".into()))?;
        for (key, value) in obj {
            match key.as_str() {
                "v" => {
                    if self.v.is_none() {
                        self.v = Some(from_json(value, "v")?);
                    }
                }
                "xs" => {
                    if self.xs.is_none() {
                        self.xs = Some(from_json(value, "xs")?);
                    }
                }
                "alpha" if value.is_object() => {
                    if self.raw("alpha").is_none() {
                        let a: KClassInvariants = from_json(value, "alpha")?;
                        let s = [&a.rank, &a.c1sq, &a.c1l, &a.v2].map(to_string).join(",");
                        self.set("alpha", s)?;
                    }
                }
                _ => {
                    if self.raw(key).is_some() {
                        continue;
                    }
                    let text = match value {
                        Value::String(s) => s.clone(),
                        Value::Number(n) => n.to_string(),
                        _ => return Err(CliError::Input(format!("{key}: expected a number or string"))),
                    };
                    self.set(key, text)
                        .map_err(|_| CliError::Input(format!("unknown input field {key:?}")))?;
                }
            }
        }
        Ok(())
    }

    fn required(&self, key: &str) -> Result<&str, CliError> {
        self.raw(key)
            .ok_or_else(|| CliError::Usage(format!("missing required parameter --{key}")))
    }

    pub fn rational(&self, key: &str) -> Result<Rational, CliError> {
        parse_value(key, self.required(key)?)
    }

    pub fn rational_or(&self, key: &str, default: Rational) -> Result<Rational, CliError> {
        match self.raw(key) {
            Some(s) => parse_value(key, s),
            None => Ok(default),
        }
    }

    pub fn int(&self, key: &str) -> Result<i64, CliError> {
        let q = self.rational(key)?;
        integer(key, &q)
    }

    pub fn nat(&self, key: &str) -> Result<u32, CliError> {
        let v = self.int(key)?;
        u32::try_from(v).map_err(|_| CliError::Input(format!("--{key}: expected a non-negative integer, got {v}")))
    }

    pub fn nat_opt(&self, key: &str) -> Result<Option<u32>, CliError> {
        self.raw(key).map(|_| self.nat(key)).transpose()
    }

    pub fn alpha(&self) -> Result<KClassInvariants, CliError> {
        let raw = self.required("alpha")?;
        let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
        let [r, c1sq, c1l, v2] = parts.as_slice() else {
            return Err(CliError::Input(format!(
                "--alpha: expected rank,c1sq,c1L,v2, got {raw:?}"
            )));
        };
        Ok(KClassInvariants::new(
            parse_value("alpha", r)?,
            parse_value("alpha", c1sq)?,
            parse_value("alpha", c1l)?,
            parse_value("alpha", v2)?,
        ))
    }

    /// `ModuliData` from rho, n, alpha, Lsq and u; `n` falls back to
    /// `default_n` when given, and `Lsq`, `u` to zero.
    pub fn moduli_data(&self, default_n: Option<u32>) -> Result<ModuliData, CliError> {
        let n = match (self.nat_opt("n")?, default_n) {
            (Some(n), _) | (None, Some(n)) => n,
            (None, None) => return Err(CliError::Usage("missing required parameter --n".into())),
        };
        let zero = Rational::from_integer(0.into());
        Ok(ModuliData::new(
            self.nat("rho")?,
            n,
            self.alpha()?,
            self.rational_or("Lsq", zero.clone())?,
            self.rational_or("u", zero)?,
        )?)
    }

    pub fn mukai_input(&self) -> Result<(&MukaiVector, &[MukaiVector]), CliError> {
        match (&self.v, &self.xs) {
            (Some(v), Some(xs)) => Ok((v, xs)),
            _ => Err(CliError::Usage(
                "this command reads {\"v\": ..., \"xs\": [...]} from --input".into(),
            )),
        }
    }
}

fn parse_value(key: &str, s: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|e| CliError::Input(format!("--{key}: {e}")))
}

fn integer(key: &str, q: &Rational) -> Result<i64, CliError> {
    if !is_integer(q) {
        return Err(CliError::Input(format!("--{key}: expected an integer, got {}", to_string(q))));
    }
    i64::try_from(q.to_integer()).map_err(|_| CliError::Input(format!("--{key}: value out of range")))
}

fn from_json<T: serde::de::DeserializeOwned>(value: &Value, what: &str) -> Result<T, CliError> {
    serde_json::from_value(value.clone()).map_err(|e| CliError::Input(format!("{what}: {e}")))
}
