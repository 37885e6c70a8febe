use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use spca_core::data::{
    gaussian_source, load_csv, pitprops_source, synthetic_source, SyntheticSpec,
};
use spca_core::DataSource;

use crate::error::{CliError, CliResult};

/// A dataset selector as written on the command line.
///
/// - `pitprops`
/// - `synthetic` (population covariance) or `synthetic:n=N[,seed=S]`
/// - `random:n=N,d=D[,seed=S]`
/// - `csv:PATH[,header]`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum SourceSpec {
    Pitprops,
    Synthetic { n: usize, seed: u64 },
    Random { n: usize, d: usize, seed: u64 },
    Csv { path: PathBuf, header: bool },
}

impl SourceSpec {
    pub fn load(&self) -> CliResult<DataSource> {
        let src = match self {
            SourceSpec::Pitprops => pitprops_source(),
            SourceSpec::Synthetic { n, seed } => {
                synthetic_source(SyntheticSpec { n: *n, seed: *seed })
            }
            SourceSpec::Random { n, d, seed } => gaussian_source(*n, *d, *seed),
            SourceSpec::Csv { path, header } => load_csv(path, *header),
        };
        src.map_err(CliError::Invalid)
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Splits `k=v,k=v` into pairs, rejecting unknown keys.
fn pairs<'a>(body: &'a str, allowed: &[&str]) -> CliResult<Vec<(&'a str, &'a str)>> {
    body.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| usage(format!("expected key=value, got {item:?}")))?;
            let k = k.trim();
            if !allowed.contains(&k) {
                return Err(usage(format!(
                    "unknown source parameter {k:?} (allowed: {})",
                    allowed.join(", ")
                )));
            }
            Ok((k, v.trim()))
        })
        .collect()
}

fn number<T: FromStr>(key: &str, value: &str) -> CliResult<T> {
    value.parse().map_err(|_| {
        usage(format!(
            "source parameter {key}={value:?} is not a valid number"
        ))
    })
}

impl FromStr for SourceSpec {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let (kind, body) = s.split_once(':').unwrap_or((s, ""));
        match kind.trim() {
            "pitprops" if body.is_empty() => Ok(SourceSpec::Pitprops),
            "synthetic" => {
                let (mut n, mut seed) = (0, 0);
                for (k, v) in pairs(body, &["n", "seed"])? {
                    match k {
                        "n" => n = number(k, v)?,
                        _ => seed = number(k, v)?,
                    }
                }
                Ok(SourceSpec::Synthetic { n, seed })
            }
            "random" => {
                let (mut n, mut d, mut seed) = (None, None, 0);
                for (k, v) in pairs(body, &["n", "d", "seed"])? {
                    match k {
                        "n" => n = Some(number(k, v)?),
                        "d" => d = Some(number(k, v)?),
                        _ => seed = number(k, v)?,
                    }
                }
                match (n, d) {
                    (Some(n), Some(d)) if n >= 2 && d >= 1 => Ok(SourceSpec::Random { n, d, seed }),
                    (Some(_), Some(_)) => Err(usage("random source needs n >= 2 and d >= 1")),
                    _ => Err(usage("random source needs both n= and d=, e.g. random:n=200,d=50")),
                }
            }
            "csv" => {
                let (path, header) = match body.rsplit_once(',') {
                    Some((p, "header")) => (p, true),
                    _ => (body, false),
                };
                if path.is_empty() {
                    return Err(usage("csv source needs a path, e.g. csv:data.csv,header"));
                }
                Ok(SourceSpec::Csv {
                    path: PathBuf::from(path),
                    header,
                })
            }
            _ => Err(usage(format!(
                "unknown source {s:?}; expected pitprops, synthetic[:n=..,seed=..], random:n=..,d=..[,seed=..] or csv:PATH[,header]"
            ))),
        }
    }
}

impl fmt::Display for SourceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SourceSpec::Pitprops => write!(f, "pitprops"),
            SourceSpec::Synthetic { n: 0, .. } => write!(f, "synthetic"),
            SourceSpec::Synthetic { n, seed } => write!(f, "synthetic:n={n},seed={seed}"),
            SourceSpec::Random { n, d, seed } => write!(f, "random:n={n},d={d},seed={seed}"),
            SourceSpec::Csv { path, header } => {
                write!(f, "csv:{}", path.display())?;
                if *header {
                    write!(f, ",header")?;
                }
                Ok(())
            }
        }
    }
}

impl From<SourceSpec> for String {
    fn from(s: SourceSpec) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for SourceSpec {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse().map_err(|e: CliError| e.to_string())
    }
}
