//! Experiment configuration and the instance-spec mini language.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::BenchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Continuous,
    Augment,
    Submodular,
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Domain::Continuous => "continuous",
            Domain::Augment => "augment",
            Domain::Submodular => "submodular",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// One cell of an experiment matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Defaults to `domain/algo/instance`.
    #[serde(default)]
    pub id: Option<String>,
    pub domain: Domain,
    pub algo: String,
    /// `name` or `name:key=value,...`, or a path to an instance file.
    pub instance: String,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    /// Cardinality budget (submodular).
    #[serde(default)]
    pub k: Option<usize>,
    /// Strong-convexity constant handed to the solver instead of the true
    /// one (continuous).
    #[serde(default)]
    pub mu: Option<f64>,
    /// Improving-oracle policy for augmentation: `max`, `min` or `lex`.
    #[serde(default)]
    pub policy: Option<String>,
}

impl ExperimentConfig {
    pub fn id(&self) -> String {
        self.id
            .clone()
            .unwrap_or_else(|| format!("{}/{}/{}", self.domain, self.algo, self.instance))
    }
}

/// A TOML file with an `[[experiment]]` array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    #[serde(rename = "experiment", default)]
    pub experiments: Vec<ExperimentConfig>,
}

impl MatrixFile {
    /// Reads a matrix file; relative instance paths are resolved against the
    /// file's directory.
    pub fn load(path: &Path) -> Result<Self, BenchError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| BenchError::usage("config", format!("{}: {e}", path.display())))?;
        let mut file: MatrixFile = toml::from_str(&text)
            .map_err(|e| BenchError::usage("config", format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for cfg in &mut file.experiments {
            if let InstanceSpec::File(p) = InstanceSpec::from_str(&cfg.instance)? {
                if p.is_relative() {
                    cfg.instance = base.join(p).to_string_lossy().into_owned();
                }
            }
        }
        Ok(file)
    }
}

/// Parsed form of [`ExperimentConfig::instance`].
#[derive(Debug, Clone, PartialEq)]
pub enum InstanceSpec {
    Builtin { name: String, params: Params },
    File(PathBuf),
}

impl FromStr for InstanceSpec {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(BenchError::usage("instance", "empty instance spec"));
        }
        if s.contains('/') || s.contains('\\') || s.ends_with(".txt") {
            return Ok(InstanceSpec::File(PathBuf::from(s)));
        }
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut params = BTreeMap::new();
        for pair in rest.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = pair.split_once('=').ok_or_else(|| {
                BenchError::usage("instance", format!("`{pair}` is not key=value"))
            })?;
            params.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(InstanceSpec::Builtin {
            name: name.to_string(),
            params: Params(params),
        })
    }
}

/// `key=value` parameters of a built-in instance. Every key must be consumed.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Params(BTreeMap<String, String>);

impl Params {
    pub fn take<T: FromStr>(&mut self, key: &str, default: T) -> Result<T, BenchError> {
        match self.0.remove(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| BenchError::usage("instance", format!("bad value `{v}` for `{key}`"))),
        }
    }

    pub fn finish(self, name: &str) -> Result<(), BenchError> {
        match self.0.keys().next() {
            None => Ok(()),
            Some(k) => Err(BenchError::usage(
                "instance",
                format!("unknown parameter `{k}` for `{name}`"),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_builtin_specs() {
        let spec: InstanceSpec = "quadratic:n=20, l=10,mu=1".parse().unwrap();
        let InstanceSpec::Builtin { name, mut params } = spec else {
            panic!()
        };
        assert_eq!(name, "quadratic");
        assert_eq!(params.take("n", 0usize).unwrap(), 20);
        assert_eq!(params.take("l", 0.0).unwrap(), 10.0);
        assert!(params.clone().finish("quadratic").is_err());
        assert_eq!(params.take("mu", 0.0).unwrap(), 1.0);
        params.finish("quadratic").unwrap();
        assert!(matches!("data/x.txt".parse(), Ok(InstanceSpec::File(_))));
        assert!("quadratic:n".parse::<InstanceSpec>().is_err());
    }

    #[test]
    fn parses_matrix_toml() {
        let text = r#"
            [[experiment]]
            id = "a"
            domain = "continuous"
            algo = "restarted-gd"
            instance = "quadratic:l=10"
            epsilon = 1e-6

            [[experiment]]
            domain = "submodular"
            algo = "greedy"
            instance = "coverage:n=10,u=20"
            k = 3
        "#;
        let m: MatrixFile = toml::from_str(text).unwrap();
        assert_eq!(m.experiments.len(), 2);
        assert_eq!(m.experiments[0].epsilon, Some(1e-6));
        assert_eq!(
            m.experiments[1].id(),
            "submodular/greedy/coverage:n=10,u=20"
        );
        assert!(toml::from_str::<MatrixFile>("[[experiment]]\ndomain = \"x\"").is_err());
    }
}
