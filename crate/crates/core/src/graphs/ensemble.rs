use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};

/// Deterministic and random graph families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Path,
    Cycle,
    Complete,
    /// Uniformly random `k`-regular graphs (pairing model).
    Regular(usize),
}

impl Family {
    /// True when every draw yields the same graph.
    pub fn is_deterministic(&self) -> bool {
        !matches!(self, Family::Regular(_))
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match *self {
            Family::Cycle if n < 3 => Err(contract(format!("a cycle needs n >= 3, got {n}"))),
            Family::Regular(k) if k >= n || !(k * n).is_multiple_of(2) => Err(contract(format!(
                "no {k}-regular graph on {n} vertices (need k < n and k·n even)"
            ))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Path => write!(f, "path"),
            Family::Cycle => write!(f, "cycle"),
            Family::Complete => write!(f, "complete"),
            Family::Regular(k) => write!(f, "regular{k}"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "path" | "line" => Ok(Family::Path),
            "cycle" => Ok(Family::Cycle),
            "complete" => Ok(Family::Complete),
            _ => {
                let k = s
                    .strip_prefix("regular")
                    .map(|rest| rest.trim_start_matches([':', '-']))
                    .and_then(|k| k.parse().ok())
                    .ok_or_else(|| contract(format!("unknown graph family '{s}'")))?;
                Ok(Family::Regular(k))
            }
        }
    }
}

/// How a bipartition is drawn for each graph of the isomorphism-class ensemble.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BipartitionMode {
    /// `|A|` fixed to the ensemble's `n_a`; one point per `N_A` on a curve.
    FixedSize,
    /// Uniform over every bipartition with nonempty `A` and even nonzero `|B|`.
    AnyEvenTarget,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EnsembleKind {
    /// Every labelled graph equally likely.
    Uniform,
    /// Graphs streamed from a graph6 list of nonisomorphic graphs.
    IsomorphismClass {
        source: PathBuf,
        mode: BipartitionMode,
        connected_only: bool,
    },
    Family {
        family: Family,
    },
}

/// A distribution over bipartitioned graphs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    #[serde(flatten)]
    pub kind: EnsembleKind,
    pub n: usize,
    pub n_a: usize,
}

impl EnsembleSpec {
    pub fn uniform(n: usize, n_a: usize) -> Self {
        Self {
            kind: EnsembleKind::Uniform,
            n,
            n_a,
        }
    }

    pub fn family(family: Family, n: usize, n_a: usize) -> Self {
        Self {
            kind: EnsembleKind::Family { family },
            n,
            n_a,
        }
    }

    pub fn n_b(&self) -> usize {
        self.n - self.n_a
    }

    /// Checks `n_a < n`, a nonempty `A`, an even target and family constraints.
    pub fn validate(&self) -> Result<()> {
        if self.n > super::MAX_VERTICES {
            return Err(contract(format!("n = {} exceeds {}", self.n, super::MAX_VERTICES)));
        }
        let any_size = matches!(
            self.kind,
            EnsembleKind::IsomorphismClass {
                mode: BipartitionMode::AnyEvenTarget,
                ..
            }
        );
        if !any_size {
            if self.n_a == 0 || self.n_a >= self.n {
                return Err(contract(format!(
                    "need 0 < n_a < n, got n = {}, n_a = {}",
                    self.n, self.n_a
                )));
            }
            if !self.n_b().is_multiple_of(2) {
                return Err(contract(format!("|B| = {} is odd", self.n_b())));
            }
        }
        if let EnsembleKind::Family { family } = &self.kind {
            family.validate(self.n)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names_round_trip() {
        for f in [Family::Path, Family::Cycle, Family::Complete, Family::Regular(4)] {
            assert_eq!(f.to_string().parse::<Family>().unwrap(), f);
        }
        assert_eq!("regular:3".parse::<Family>().unwrap(), Family::Regular(3));
        assert!("petersen".parse::<Family>().is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(EnsembleSpec::uniform(10, 6).validate().is_ok());
        assert!(EnsembleSpec::uniform(10, 0).validate().is_err());
        assert!(EnsembleSpec::uniform(10, 5).validate().is_err());
        assert!(EnsembleSpec::uniform(10, 10).validate().is_err());
        assert!(EnsembleSpec::family(Family::Regular(3), 7, 1).validate().is_err());
        assert!(EnsembleSpec::family(Family::Regular(4), 16, 4).validate().is_ok());
    }
}
