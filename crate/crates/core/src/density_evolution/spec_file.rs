//! Plain-text `key = value` ensemble descriptions.
//!
//! ```text
//! # comment
//! construction = punctured
//! base = check-regular
//! k = 3
//! q = 0.95
//! epsilon = 0.1
//! degree_cap = 400
//! p = 0.3
//! ```
//!
//! For `punctured`, `q` is the design channel `q'` of the base ensemble.

use std::fmt;
use std::str::FromStr;

use super::{
    check_regular_lambda, check_regular_spec, punctured_spec, truncate_check_regular, truncate_variable_regular,
    variable_regular_rho, variable_regular_spec, EnsembleSpec,
};
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const DEFAULT_DEGREE_CAP: usize = 400;
/// Largest cap tried for the variable-regular `rho` when none is given; the
/// cap doubles from 4096 until the truncation point fits.
pub const DEFAULT_RHO_CAP: usize = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructionName {
    CheckRegular,
    VariableRegular,
    Punctured,
}

impl ConstructionName {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConstructionName::CheckRegular => "check-regular",
            ConstructionName::VariableRegular => "variable-regular",
            ConstructionName::Punctured => "punctured",
        }
    }
}

impl FromStr for ConstructionName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "check-regular" => Ok(ConstructionName::CheckRegular),
            "variable-regular" => Ok(ConstructionName::VariableRegular),
            "punctured" => Ok(ConstructionName::Punctured),
            other => Err(Error::invalid(format!(
                "unknown construction {other:?} (expected check-regular, variable-regular or punctured)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpecFile {
    pub construction: ConstructionName,
    /// Base ensemble of a punctured construction.
    pub base: Option<ConstructionName>,
    pub k: Option<usize>,
    pub q: f64,
    pub epsilon: Option<f64>,
    pub degree_cap: Option<usize>,
    pub p: Option<f64>,
}

fn parse_num<V: FromStr>(key: &str, value: &str) -> Result<V> {
    value.parse().map_err(|_| Error::invalid(format!("cannot parse {key} = {value:?}")))
}

impl SpecFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut construction = None;
        let mut base = None;
        let mut k = None;
        let mut q = None;
        let mut epsilon = None;
        let mut degree_cap = None;
        let mut p = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "construction" => construction = Some(value.parse()?),
                "base" => base = Some(value.parse()?),
                "k" => k = Some(parse_num(key, value)?),
                "q" => q = Some(parse_num(key, value)?),
                "epsilon" => epsilon = Some(parse_num(key, value)?),
                "degree_cap" => degree_cap = Some(parse_num(key, value)?),
                "p" => p = Some(parse_num(key, value)?),
                other => return Err(Error::invalid(format!("line {}: unknown key {other:?}", lineno + 1))),
            }
        }
        Ok(SpecFile {
            construction: construction.ok_or_else(|| Error::invalid("missing key: construction"))?,
            base,
            k,
            q: q.ok_or_else(|| Error::invalid("missing key: q"))?,
            epsilon,
            degree_cap,
            p,
        })
    }

    fn build_plain<T: Real>(&self, name: ConstructionName) -> Result<EnsembleSpec<T>> {
        let q = T::of(self.q);
        let eps = self.epsilon.map(T::of);
        match name {
            ConstructionName::CheckRegular => {
                let k = self.k.ok_or_else(|| Error::invalid("check-regular needs k"))?;
                let cap = self.degree_cap.unwrap_or(DEFAULT_DEGREE_CAP);
                let lambda = check_regular_lambda(k, q, cap)?;
                match eps {
                    Some(e) => truncate_check_regular(&lambda, k, q, e),
                    None => check_regular_spec(&lambda, k, q),
                }
            }
            ConstructionName::VariableRegular => match eps {
                Some(e) => {
                    if let Some(cap) = self.degree_cap {
                        return truncate_variable_regular(&variable_regular_rho(q, cap)?, q, e);
                    }
                    let mut cap = 1 << 12;
                    loop {
                        match truncate_variable_regular(&variable_regular_rho(q, cap)?, q, e) {
                            Err(Error::InsufficientDegreeCap { .. }) if cap < DEFAULT_RHO_CAP => cap *= 2,
                            other => return other,
                        }
                    }
                }
                None => variable_regular_spec(q),
            },
            ConstructionName::Punctured => Err(Error::invalid("punctured base must be check-regular or variable-regular")),
        }
    }

    /// Builds the ensemble, truncated when `epsilon` is given.
    pub fn build<T: Real>(&self) -> Result<EnsembleSpec<T>> {
        match self.construction {
            ConstructionName::Punctured => {
                let base = self.build_plain(self.base.unwrap_or(ConstructionName::VariableRegular))?;
                punctured_spec(&base, T::of(self.q), T::of(self.p.unwrap_or(0.0)))
            }
            name => self.build_plain(name),
        }
    }
}

impl fmt::Display for SpecFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "construction = {}", self.construction.as_str())?;
        if let Some(b) = self.base {
            writeln!(f, "base = {}", b.as_str())?;
        }
        if let Some(k) = self.k {
            writeln!(f, "k = {k}")?;
        }
        writeln!(f, "q = {}", self.q)?;
        if let Some(e) = self.epsilon {
            writeln!(f, "epsilon = {e}")?;
        }
        if let Some(c) = self.degree_cap {
            writeln!(f, "degree_cap = {c}")?;
        }
        if let Some(p) = self.p {
            writeln!(f, "p = {p}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "# x\nconstruction = punctured\nbase = check-regular\nk = 3\nq = 0.95\nepsilon = 0.1\ndegree_cap = 400\np = 0.3\n";
        let s = SpecFile::parse(text).unwrap();
        assert_eq!(s.p, Some(0.3));
        assert_eq!(SpecFile::parse(&s.to_string()).unwrap(), s);
        let spec = s.build::<f64>().unwrap();
        assert!((spec.q - (0.95 - 0.3) / 0.7).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(SpecFile::parse("construction = foo\nq = 0.5").is_err());
        assert!(SpecFile::parse("q = 0.5").is_err());
        assert!(SpecFile::parse("construction = check-regular\nq = x").is_err());
        assert!(SpecFile::parse("construction = check-regular\nq = 0.5\nzz = 1").is_err());
    }
}
