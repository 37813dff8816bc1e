//! Relaxation lift functions: head-size dependent multipliers that let the head
//! search trade a slightly lower heuristic value for more labels.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Serializes as its textual form, e.g. `"kln:k=0.2"`.
#[derive(Debug, Clone, PartialEq)]
pub enum LiftFunction {
    /// No lift: plain decomposability-based search.
    Identity,
    /// `1 + k ln(x)`.
    Kln { k: f64 },
    /// Rises from 1 at one label to `max_lift` at `peak` labels, then falls back
    /// to 1 at `n` labels. `curvature == 1` gives straight lines.
    Peak {
        peak: usize,
        max_lift: f64,
        curvature: f64,
    },
    /// Explicit lifts for head sizes 1, 2, ... (entry 0 must be 1).
    Table(Vec<f64>),
}

impl LiftFunction {
    /// Checks the parameters against a label count `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            LiftFunction::Identity => Ok(()),
            LiftFunction::Kln { k } => {
                if k.is_finite() && *k >= 0.0 {
                    Ok(())
                } else {
                    Err(Error::Config(format!("kln: k must be >= 0, got {k}")))
                }
            }
            LiftFunction::Peak {
                peak,
                max_lift,
                curvature,
            } => {
                if *peak < 1 || *peak > n.max(1) {
                    return Err(Error::Config(format!(
                        "peak: m must lie in [1, {n}], got {peak}"
                    )));
                }
                if !(max_lift.is_finite() && *max_lift >= 1.0) {
                    return Err(Error::Config(format!(
                        "peak: lmax must be >= 1, got {max_lift}"
                    )));
                }
                if !(curvature.is_finite() && *curvature > 0.0) {
                    return Err(Error::Config(format!(
                        "peak: c must be > 0, got {curvature}"
                    )));
                }
                Ok(())
            }
            LiftFunction::Table(values) => {
                if values.first().copied() != Some(1.0) {
                    return Err(Error::Config("table: lift at size 1 must be 1".into()));
                }
                if values.len() < n {
                    return Err(Error::Config(format!(
                        "table: {} entries, {n} labels need one per head size",
                        values.len()
                    )));
                }
                if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
                    return Err(Error::Config(format!("table: invalid lift {v}")));
                }
                Ok(())
            }
        }
    }

    /// Lift for a head with `x` labels out of `n`.
    pub fn lift_at(&self, x: usize, n: usize) -> Result<f64> {
        if x < 1 || x > n {
            return Err(Error::Domain(format!("head size {x} outside [1, {n}]")));
        }
        if x == 1 {
            return Ok(1.0);
        }
        Ok(match self {
            LiftFunction::Identity => 1.0,
            LiftFunction::Kln { k } => 1.0 + k * (x as f64).ln(),
            LiftFunction::Peak {
                peak,
                max_lift,
                curvature,
            } => {
                let m = *peak;
                if m > n {
                    return Err(Error::Domain(format!("peak {m} exceeds label count {n}")));
                }
                // m == 1 never takes the left branch here since x > 1; m == n
                // never takes the right one.
                let (a, b) = if x <= m { (m, 1) } else { (m, n) };
                let base = (x as f64 - b as f64) / (a as f64 - b as f64);
                debug_assert!(base >= 0.0, "negative base in peak lift");
                1.0 + base.powf(1.0 / curvature) * (max_lift - 1.0)
            }
            LiftFunction::Table(values) => *values
                .get(x - 1)
                .ok_or_else(|| Error::Domain(format!("lift table has no entry for size {x}")))?,
        })
    }

    /// Largest lift available to heads longer than `k`, or `None` when `k == n`.
    pub fn max_remaining_lift(&self, k: usize, n: usize) -> Option<f64> {
        ((k + 1)..=n)
            .filter_map(|i| self.lift_at(i, n).ok())
            .fold(None, |acc: Option<f64>, l| Some(acc.map_or(l, |a| a.max(l))))
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, LiftFunction::Identity)
    }
}

/// `h * lift(x)`.
pub fn lifted_value(h: f64, x: usize, f: &LiftFunction, n: usize) -> Result<f64> {
    Ok(h * f.lift_at(x, n)?)
}

impl fmt::Display for LiftFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LiftFunction::Identity => f.write_str("none"),
            LiftFunction::Kln { k } => write!(f, "kln:k={k}"),
            LiftFunction::Peak {
                peak,
                max_lift,
                curvature,
            } => write!(f, "peak:m={peak},lmax={max_lift},c={curvature}"),
            LiftFunction::Table(values) => {
                f.write_str("table:")?;
                for (i, v) in values.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{v:?}")?;
                }
                Ok(())
            }
        }
    }
}

impl Serialize for LiftFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LiftFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for LiftFunction {
    type Err = Error;

    /// Accepts `none`, `kln:k=0.14`, `peak:m=3,lmax=1.2,c=1` and
    /// `table:1.0,1.1,1.15`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, params) = match s.split_once(':') {
            Some((k, p)) => (k.trim().to_ascii_lowercase(), p.trim()),
            None => (s.to_ascii_lowercase(), ""),
        };
        let bad = |msg: String| Error::Config(format!("lift '{s}': {msg}"));
        let num = |v: &str| -> Result<f64> {
            v.trim()
                .parse::<f64>()
                .map_err(|_| bad(format!("'{v}' is not a number")))
        };
        let lift = match kind.as_str() {
            "none" | "identity" => {
                if !params.is_empty() {
                    return Err(bad("takes no parameters".into()));
                }
                LiftFunction::Identity
            }
            "kln" => {
                let mut k = None;
                for (key, v) in key_values(params).map_err(bad)? {
                    match key {
                        "k" => k = Some(num(v)?),
                        other => return Err(bad(format!("unknown parameter '{other}'"))),
                    }
                }
                LiftFunction::Kln {
                    k: k.ok_or_else(|| bad("missing k".into()))?,
                }
            }
            "peak" => {
                let (mut m, mut lmax, mut c) = (None, None, None);
                for (key, v) in key_values(params).map_err(bad)? {
                    match key {
                        "m" => {
                            m = Some(
                                v.trim()
                                    .parse::<usize>()
                                    .map_err(|_| bad(format!("m '{v}' is not a positive integer")))?,
                            )
                        }
                        "lmax" => lmax = Some(num(v)?),
                        "c" => c = Some(num(v)?),
                        other => return Err(bad(format!("unknown parameter '{other}'"))),
                    }
                }
                LiftFunction::Peak {
                    peak: m.ok_or_else(|| bad("missing m".into()))?,
                    max_lift: lmax.ok_or_else(|| bad("missing lmax".into()))?,
                    curvature: c.unwrap_or(1.0),
                }
            }
            "table" => {
                let values = params
                    .split(',')
                    .map(num)
                    .collect::<Result<Vec<f64>>>()?;
                if values.first().copied() != Some(1.0) {
                    return Err(bad("first entry must be 1".into()));
                }
                LiftFunction::Table(values)
            }
            other => return Err(bad(format!("unknown lift function '{other}'"))),
        };
        // label-count independent checks
        match &lift {
            LiftFunction::Peak { .. } => lift.validate(usize::MAX)?,
            LiftFunction::Table(_) => lift.validate(0)?,
            _ => lift.validate(1)?,
        }
        Ok(lift)
    }
}

fn key_values(params: &str) -> std::result::Result<Vec<(&str, &str)>, String> {
    params
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| format!("expected key=value, got '{p}'"))
        })
        .collect()
}

/// Default candidate grid for lift selection: identity, five KLN settings and
/// a small peak grid. Peak entries with `m > n` are skipped by callers.
pub fn default_grid() -> Vec<LiftFunction> {
    let mut grid = vec![LiftFunction::Identity];
    for k in [0.05, 0.1, 0.2, 0.3, 0.4] {
        grid.push(LiftFunction::Kln { k });
    }
    for peak in [2, 3, 5] {
        for max_lift in [1.05, 1.1, 1.2] {
            for curvature in [1.0, 2.0] {
                grid.push(LiftFunction::Peak {
                    peak,
                    max_lift,
                    curvature,
                });
            }
        }
    }
    grid
}
