use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::renorm::{Character, ExternalStructureWeights, FeynmanRules, LaurentSeries};

use super::{tokens, IoError};

/// A parsed rules file: the Feynman rules and, optionally, how two-point
/// poles are split over counterterm slots.
#[derive(Debug, Clone)]
pub struct RulesConfig {
    pub rules: FeynmanRules,
    pub split: Option<ExternalStructureWeights>,
}

impl RulesConfig {
    pub fn character(&self) -> Character {
        Character::new(self.rules.clone())
    }
}

/// ```text
/// rules pole_per_loop c=1 d=-1/2
/// ```
/// or
/// ```text
/// rules table
/// phi 3fa1c2d4e5f60718: -1*e^-1 + 2
/// ```
/// An optional `split mass=<rat> wave=<rat> oscillator=<rat>` line sets the
/// two-point counterterm weights.
pub fn parse_rules(text: &str) -> Result<RulesConfig, IoError> {
    let mut rules: Option<FeynmanRules> = None;
    let mut split = None;
    let mut last = 1;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let toks = tokens(raw);
        let Some(&(col, head)) = toks.first() else {
            continue;
        };
        match head {
            "rules" => {
                if rules.is_some() {
                    return Err(IoError::syntax(line, col, "rules declared twice"));
                }
                rules = Some(match toks.get(1) {
                    Some((_, "pole_per_loop")) => {
                        let kv = key_values(line, &toks[2..], &["c", "d"])?;
                        FeynmanRules::PolePerLoop {
                            c: kv[0].clone(),
                            d: kv[1].clone(),
                        }
                    }
                    Some((_, "table")) if toks.len() == 2 => FeynmanRules::Table(HashMap::new()),
                    Some(&(c, other)) => {
                        return Err(IoError::syntax(
                            line,
                            c,
                            format!("unknown rules kind {other:?}"),
                        ))
                    }
                    None => {
                        return Err(IoError::syntax(
                            line,
                            col,
                            "expected 'pole_per_loop' or 'table'",
                        ))
                    }
                });
            }
            "phi" => {
                let Some(FeynmanRules::Table(table)) = rules.as_mut() else {
                    return Err(IoError::syntax(
                        line,
                        col,
                        "'phi' lines need a preceding 'rules table'",
                    ));
                };
                let Some(&(hcol, hash)) = toks.get(1) else {
                    return Err(IoError::syntax(
                        line,
                        col,
                        "expected 'phi <hash>: <series>'",
                    ));
                };
                let Some(hash) = hash.strip_suffix(':') else {
                    return Err(IoError::syntax(line, hcol, "expected ':' after the hash"));
                };
                let code = raw.split('#').next().unwrap_or("");
                let colon = code.find(':').expect("token had a colon");
                let series: LaurentSeries =
                    code[colon + 1..]
                        .parse()
                        .map_err(|e: crate::renorm::LaurentParseError| {
                            IoError::syntax(line, colon + 2, e.reason)
                        })?;
                if table.insert(hash.to_string(), series).is_some() {
                    return Err(IoError::syntax(
                        line,
                        hcol,
                        format!("hash {hash} listed twice"),
                    ));
                }
            }
            "split" => {
                let kv = key_values(line, &toks[1..], &["mass", "wave", "oscillator"])?;
                split = Some(ExternalStructureWeights::new(
                    kv[0].clone(),
                    kv[1].clone(),
                    kv[2].clone(),
                ));
            }
            other => {
                return Err(IoError::syntax(
                    line,
                    col,
                    format!("unknown line kind {other:?}"),
                ))
            }
        }
    }
    let rules = rules.ok_or_else(|| IoError::syntax(last, 1, "no 'rules' line"))?;
    Ok(RulesConfig { rules, split })
}

fn key_values(
    line: usize,
    toks: &[(usize, &str)],
    keys: &[&str],
) -> Result<Vec<BigRational>, IoError> {
    let mut values: Vec<Option<BigRational>> = vec![None; keys.len()];
    for &(col, tok) in toks {
        let (k, v) = tok.split_once('=').ok_or_else(|| {
            IoError::syntax(line, col, format!("expected key=value, found {tok:?}"))
        })?;
        let slot = keys
            .iter()
            .position(|&key| key == k)
            .ok_or_else(|| IoError::syntax(line, col, format!("unknown key {k:?}")))?;
        let value = parse_rational(v).ok_or_else(|| {
            IoError::syntax(line, col + k.len() + 1, format!("bad rational {v:?}"))
        })?;
        if values[slot].replace(value).is_some() {
            return Err(IoError::syntax(line, col, format!("key {k:?} repeated")));
        }
    }
    values
        .into_iter()
        .zip(keys)
        .map(|(v, k)| {
            v.ok_or_else(|| {
                IoError::syntax(
                    line,
                    toks.last().map_or(1, |t| t.0),
                    format!("missing key {k:?}"),
                )
            })
        })
        .collect()
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    (d != BigInt::from(0)).then(|| BigRational::new(n, d))
}
