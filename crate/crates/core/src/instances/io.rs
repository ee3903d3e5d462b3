//! Native instance serialization (JSON) and family-aware loading.
//!
//! Max-Cut instances additionally load from the standard G-Set text
//! format; the loader sniffs JSON by the leading '{'.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instances::gset::{self, GsetGraph};
use crate::instances::nae3sat::{self, NaeFormula};
use crate::instances::sk::{self, SkInstance};
use crate::problem::{IsingProblem, SpinAssignment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    MaxCut,
    Nae3Sat,
    Sk,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "maxcut" => Ok(Family::MaxCut),
            "nae3sat" => Ok(Family::Nae3Sat),
            "sk" => Ok(Family::Sk),
            other => Err(Error::Config(format!("unknown instance family '{other}'"))),
        }
    }
}

/// One benchmark instance, tagged with how it was produced.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Instance {
    MaxCut { name: String, n: usize, edges: Vec<(usize, usize, f64)> },
    Nae3Sat { name: String, n: usize, seed: u64, ratio: f64, clauses: Vec<[(usize, i8); 3]> },
    Sk { name: String, n: usize, seed: u64 },
}

impl Instance {
    pub fn from_graph(name: impl Into<String>, g: GsetGraph) -> Self {
        Instance::MaxCut { name: name.into(), n: g.n, edges: g.edges }
    }

    pub fn generate(family: Family, n: usize, seed: u64, ratio: Option<f64>) -> Result<Instance> {
        match family {
            Family::MaxCut => Err(Error::Config(
                "maxcut instances are parsed from G-Set files, not generated".into(),
            )),
            Family::Nae3Sat => {
                let ratio = ratio.unwrap_or(2.11);
                let f = nae3sat::nae3sat_generate(n, ratio, seed)?;
                Ok(Instance::Nae3Sat {
                    name: format!("nae3sat-n{n}-s{seed}"),
                    n,
                    seed,
                    ratio,
                    clauses: f.clauses,
                })
            }
            Family::Sk => {
                sk::sk_generate(n, seed)?; // validate parameters
                Ok(Instance::Sk { name: format!("sk-n{n}-s{seed}"), n, seed })
            }
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Instance::MaxCut { name, .. }
            | Instance::Nae3Sat { name, .. }
            | Instance::Sk { name, .. } => name,
        }
    }

    pub fn family(&self) -> Family {
        match self {
            Instance::MaxCut { .. } => Family::MaxCut,
            Instance::Nae3Sat { .. } => Family::Nae3Sat,
            Instance::Sk { .. } => Family::Sk,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Instance::MaxCut { n, .. } | Instance::Nae3Sat { n, .. } | Instance::Sk { n, .. } => *n,
        }
    }

    pub fn graph(&self) -> Option<GsetGraph> {
        match self {
            Instance::MaxCut { n, edges, .. } => Some(GsetGraph { n: *n, edges: edges.clone() }),
            _ => None,
        }
    }

    pub fn to_ising(&self) -> IsingProblem {
        match self {
            Instance::MaxCut { n, edges, .. } => {
                gset::maxcut_to_ising(&GsetGraph { n: *n, edges: edges.clone() })
            }
            Instance::Nae3Sat { n, clauses, .. } => {
                nae3sat::nae3sat_to_ising(&NaeFormula { n: *n, clauses: clauses.clone() })
            }
            Instance::Sk { n, seed, .. } => {
                sk::sk_generate(*n, *seed).expect("parameters validated at construction").to_ising()
            }
        }
    }

    /// Family-specific reported objective for a solution with Ising energy
    /// `energy`: -cut for Max-Cut, the offset-free spin objective for
    /// NAE-3SAT, and the raw energy for SK.
    pub fn objective(&self, energy: f64) -> f64 {
        match self {
            Instance::MaxCut { n, edges, .. } => {
                let total: f64 = edges.iter().map(|&(_, _, w)| w).sum();
                let _ = n;
                (energy - total) / 2.0 // = -cut
            }
            Instance::Nae3Sat { clauses, .. } => energy - clauses.len() as f64 / 4.0,
            Instance::Sk { .. } => energy,
        }
    }

    /// Secondary domain metric: violated-clause count for NAE-3SAT,
    /// cut weight for Max-Cut.
    pub fn domain_metric(&self, s: &SpinAssignment) -> Result<Option<(String, f64)>> {
        match self {
            Instance::MaxCut { n, edges, .. } => {
                let g = GsetGraph { n: *n, edges: edges.clone() };
                Ok(Some(("cut".into(), gset::cut_value(&g, s)?)))
            }
            Instance::Nae3Sat { n, clauses, .. } => {
                let f = NaeFormula { n: *n, clauses: clauses.clone() };
                Ok(Some(("unsat_clauses".into(), nae3sat::unsat_count(&f, s)? as f64)))
            }
            Instance::Sk { .. } => Ok(None),
        }
    }

    pub fn sk_instance(&self) -> Option<SkInstance> {
        match self {
            Instance::Sk { n, seed, .. } => sk::sk_generate(*n, *seed).ok(),
            _ => None,
        }
    }
}

pub fn save_instance(path: &Path, inst: &Instance) -> Result<()> {
    let json = serde_json::to_string_pretty(inst)
        .map_err(|e| Error::Config(format!("serialize instance: {e}")))?;
    fs::write(path, json)?;
    Ok(())
}

/// Load a native JSON instance or a raw G-Set text file.
pub fn load_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path)?;
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        serde_json::from_str(&text)
            .map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })
    } else {
        let g = gset::parse_gset(&text)?;
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("maxcut")
            .to_string();
        Ok(Instance::from_graph(name, g))
    }
}
