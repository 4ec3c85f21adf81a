//! Value parsers for command-line arguments.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

/// A list of non-negative integers: `4`, `2,4,6`, `8..16` (inclusive) or a
/// mix such as `2,6..9`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NumList {
    pub values: Vec<usize>,
    /// True when at least one `lo..hi` range was expanded.
    #[serde(skip)]
    pub ranged: bool,
}

impl FromStr for NumList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut values = Vec::new();
        let mut ranged = false;
        for part in s.split(',').map(str::trim) {
            if let Some((lo, hi)) = part.split_once("..") {
                let hi = hi.strip_prefix('=').unwrap_or(hi);
                let lo: usize = lo.parse().map_err(|_| format!("bad range start in '{part}'"))?;
                let hi: usize = hi.parse().map_err(|_| format!("bad range end in '{part}'"))?;
                if lo > hi {
                    return Err(format!("empty range '{part}'"));
                }
                values.extend(lo..=hi);
                ranged = true;
            } else {
                values.push(
                    part.parse()
                        .map_err(|_| format!("'{part}' is not a non-negative integer"))?,
                );
            }
        }
        Ok(Self { values, ranged })
    }
}

impl fmt::Display for NumList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Decimal, `0b…` or `0x…` bitmask; underscores are ignored.
pub fn parse_mask(s: &str) -> Result<u64, String> {
    let clean: String = s.chars().filter(|&c| c != '_').collect();
    let parsed = if let Some(b) = clean.strip_prefix("0b").or_else(|| clean.strip_prefix("0B")) {
        u64::from_str_radix(b, 2)
    } else if let Some(h) = clean.strip_prefix("0x").or_else(|| clean.strip_prefix("0X")) {
        u64::from_str_radix(h, 16)
    } else {
        clean.parse()
    };
    parsed.map_err(|e| format!("bad bitmask '{s}': {e}"))
}

/// Graph ensembles selectable with `--ensemble`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleArg {
    Uniform,
    Family(String),
    Iso,
}

impl FromStr for EnsembleArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "uniform" => Ok(Self::Uniform),
            "iso" => Ok(Self::Iso),
            _ => match s.strip_prefix("family:") {
                Some(name) => {
                    name.parse::<entloc::graphs::Family>().map_err(|e| e.to_string())?;
                    Ok(Self::Family(name.to_string()))
                }
                None => Err(format!(
                    "unknown ensemble '{s}' (expected uniform, family:<name> or iso)"
                )),
            },
        }
    }
}

impl fmt::Display for EnsembleArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Uniform => f.write_str("uniform"),
            Self::Family(name) => write!(f, "family:{name}"),
            Self::Iso => f.write_str("iso"),
        }
    }
}
