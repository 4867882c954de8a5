//! Line-based instance files.
//!
//! ```text
//! # comment
//! primary   -1   -1
//! secondary  0    1.1
//! weights  1/3  1/2      # optional, defaults to (1/n, 1/m)
//! ```
//!
//! Coordinates and weights are rationals (`p/q`), integers, or decimals;
//! decimals are converted exactly.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exact_arith::{format_rational, parse_rational, Rational};
use crate::geometry::Point2;
use crate::instance::{Instance, Weights};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedInstance {
    pub instance: Instance,
    /// Explicit `weights` line, if present.
    pub weights: Option<Weights>,
}

impl ParsedInstance {
    /// Explicit weights, or `(1/n, 1/m)`; checked for normalization.
    pub fn weights(&self) -> Result<Weights> {
        let w = match &self.weights {
            Some(w) => w.clone(),
            None => Weights::uniform(&self.instance)?,
        };
        w.check(&self.instance)?;
        Ok(w)
    }
}

/// Parses an instance that must have both families.
pub fn parse_instance(text: &str) -> Result<(Instance, Weights)> {
    let parsed = parse_lenient(text)?;
    if parsed.instance.m() == 0 {
        return Err(Error::MissingSection("secondary"));
    }
    let w = parsed.weights()?;
    Ok((parsed.instance, w))
}

/// Like [`parse_instance`] but allows an empty secondary family, for
/// ordering-only work on a plain point set.
pub fn parse_lenient(text: &str) -> Result<ParsedInstance> {
    let mut primaries = Vec::new();
    let mut secondaries = Vec::new();
    let mut weights: Option<Weights> = None;
    let mut seen: HashMap<Point2, usize> = HashMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let parse_err = |message: String| Error::Parse { line, message };
        let value = |tok: &str| -> Result<Rational> {
            parse_rational(tok).map_err(|_| parse_err(format!("invalid number {tok:?}")))
        };
        match tokens[0] {
            kw @ ("primary" | "secondary") => {
                if tokens.len() != 3 {
                    return Err(parse_err(format!("`{kw}` expects two coordinates")));
                }
                let p = Point2::new(value(tokens[1])?, value(tokens[2])?);
                if seen.insert(p.clone(), line).is_some() {
                    return Err(Error::DuplicatePoint {
                        line,
                        x: format_rational(&p.x),
                        y: format_rational(&p.y),
                    });
                }
                if kw == "primary" {
                    primaries.push(p);
                } else {
                    secondaries.push(p);
                }
            }
            "weights" => {
                if tokens.len() != 3 {
                    return Err(parse_err("`weights` expects two values".into()));
                }
                if weights.is_some() {
                    return Err(parse_err("repeated `weights` line".into()));
                }
                weights = Some(Weights::new(value(tokens[1])?, value(tokens[2])?));
            }
            other => return Err(parse_err(format!("unknown keyword {other:?}"))),
        }
    }

    if primaries.is_empty() {
        return Err(Error::MissingSection("primary"));
    }
    Ok(ParsedInstance {
        instance: Instance::new(primaries, secondaries)?,
        weights,
    })
}
