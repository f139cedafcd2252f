//! Flag and config-file merging.
//!
//! Every setting is a `key = value` pair. Command-line flags win over the
//! config file; nothing is read from the environment.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;

use crate::CliError;

/// Flags shared by all subcommands; each subcommand accepts a subset.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Plain-text `key = value` file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub j: Option<String>,
    #[arg(long)]
    pub k: Option<String>,
    #[arg(long)]
    pub n: Option<String>,
    /// Erasure probability; a comma-separated list for `simulate`.
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long)]
    pub epsilon: Option<String>,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub trials: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Report growth rates in bits instead of nats.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub base2: Option<String>,
    /// `bp`, `ml` or a comma-separated list.
    #[arg(long)]
    pub decoder: Option<String>,
    /// `check-regular`, `variable-regular`, `punctured` (and `gallager`
    /// for `simulate`).
    #[arg(long)]
    pub construction: Option<String>,
    /// Base of a punctured construction.
    #[arg(long)]
    pub base: Option<String>,
    #[arg(long)]
    pub degree_cap: Option<String>,
    #[arg(long)]
    pub max_iters: Option<String>,
    /// Design channel of a sampled truncated ensemble.
    #[arg(long)]
    pub design_q: Option<String>,
    /// Largest `n` accepted by `enumerate`.
    #[arg(long)]
    pub exact_cap: Option<String>,
    /// Ensemble spec file for `de`.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Where `de` writes the `degree,coefficient` table.
    #[arg(long)]
    pub coeffs: Option<PathBuf>,
    /// `random` or `zero`.
    #[arg(long)]
    pub codeword: Option<String>,
}

/// Keys that locate files rather than configure the computation; they are
/// left out of output headers.
const IO_KEYS: [&str; 3] = ["out", "coeffs", "spec"];

impl Flags {
    fn pairs(&self) -> Vec<(&'static str, Option<String>)> {
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        vec![
            ("j", self.j.clone()),
            ("k", self.k.clone()),
            ("n", self.n.clone()),
            ("q", self.q.clone()),
            ("epsilon", self.epsilon.clone()),
            ("p", self.p.clone()),
            ("grid", self.grid.clone()),
            ("trials", self.trials.clone()),
            ("seed", self.seed.clone()),
            ("out", path(&self.out)),
            ("base2", self.base2.clone()),
            ("decoder", self.decoder.clone()),
            ("construction", self.construction.clone()),
            ("base", self.base.clone()),
            ("degree-cap", self.degree_cap.clone()),
            ("max-iters", self.max_iters.clone()),
            ("design-q", self.design_q.clone()),
            ("exact-cap", self.exact_cap.clone()),
            ("spec", path(&self.spec)),
            ("coeffs", path(&self.coeffs)),
            ("codeword", self.codeword.clone()),
        ]
    }
}

/// Parses `key = value` lines; `#` starts a comment and `_` in keys is
/// read as `-`.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Validation(format!("config line {}: expected key = value", i + 1)))?;
        map.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(map)
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", path.display())))
}

/// Resolved settings of one run.
#[derive(Debug, Clone)]
pub struct Resolved {
    command: &'static str,
    values: BTreeMap<&'static str, String>,
}

impl Resolved {
    /// Merges flags over the config file, rejecting keys the command does
    /// not use.
    pub fn new(command: &'static str, flags: &Flags, allowed: &[&'static str]) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(p) => parse_config_text(&read_text(p)?)?,
            None => BTreeMap::new(),
        };
        let mut values = BTreeMap::new();
        for (key, flag) in flags.pairs() {
            let value = flag.or_else(|| file.get(key).cloned());
            if let Some(v) = value {
                if !allowed.contains(&key) {
                    return Err(CliError::Validation(format!("{key} does not apply to {command}")));
                }
                values.insert(key, v);
            }
        }
        let known: Vec<&str> = flags.pairs().iter().map(|(k, _)| *k).collect();
        if let Some(k) = file.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(CliError::Validation(format!("unknown config key {k:?}")));
        }
        Ok(Resolved { command, values })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &'static str) -> Result<Option<T>, CliError>
    where
        T::Err: Display,
    {
        self.raw(key)
            .map(|v| v.parse::<T>().map_err(|e| CliError::Validation(format!("invalid {key} = {v:?}: {e}"))))
            .transpose()
    }

    pub fn require<T: FromStr>(&self, key: &'static str) -> Result<T, CliError>
    where
        T::Err: Display,
    {
        self.get(key)?.ok_or_else(|| CliError::Validation(format!("{} needs --{key}", self.command)))
    }

    /// Value of `key`, recording `default` when unset so that it shows up
    /// in the header.
    pub fn or_default<T: FromStr + Display>(&mut self, key: &'static str, default: T) -> Result<T, CliError>
    where
        T::Err: Display,
    {
        if let Some(v) = self.get(key)? {
            return Ok(v);
        }
        self.values.insert(key, default.to_string());
        Ok(default)
    }

    pub fn set(&mut self, key: &'static str, value: impl Display) {
        self.values.insert(key, value.to_string());
    }

    pub fn list<T: FromStr>(&self, key: &'static str) -> Result<Option<Vec<T>>, CliError>
    where
        T::Err: Display,
    {
        self.raw(key)
            .map(|v| {
                v.split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<T>()
                            .map_err(|e| CliError::Validation(format!("invalid {key} entry {s:?}: {e}")))
                    })
                    .collect()
            })
            .transpose()
    }

    pub fn path(&self, key: &str) -> Option<PathBuf> {
        self.raw(key).map(PathBuf::from)
    }

    /// Comment block with the tool version and every resolved setting.
    pub fn header(&self) -> String {
        let mut h = format!("# ldpcgm {}\n# command = {}\n", env!("CARGO_PKG_VERSION"), self.command);
        for (k, v) in self.values.iter().filter(|(k, _)| !IO_KEYS.contains(k)) {
            h.push_str(&format!("# {k} = {v}\n"));
        }
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_text() {
        let m = parse_config_text("# c\nj = 4\ndegree_cap=10 # x\n\n").unwrap();
        assert_eq!(m.get("j").unwrap(), "4");
        assert_eq!(m.get("degree-cap").unwrap(), "10");
        assert!(parse_config_text("j 4").is_err());
    }

    #[test]
    fn flags_override_and_filter() {
        let flags = Flags { j: Some("3".into()), ..Flags::default() };
        let mut r = Resolved::new("threshold", &flags, &["j", "k"]).unwrap();
        assert_eq!(r.require::<usize>("j").unwrap(), 3);
        assert!(r.require::<usize>("k").is_err());
        assert_eq!(r.or_default("k", 6usize).unwrap(), 6);
        assert!(r.header().contains("# k = 6\n"));
        let bad = Flags { trials: Some("3".into()), ..Flags::default() };
        assert!(Resolved::new("threshold", &bad, &["j", "k"]).is_err());
    }
}
