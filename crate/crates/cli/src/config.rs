//! Flat `key = value` config files merged under command-line flags.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::error::CliError;

#[derive(Debug, Default)]
pub struct Settings {
    values: BTreeMap<String, String>,
    used: RefCell<BTreeSet<String>>,
}

impl Settings {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(Settings::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| {
                    CliError::Config(format!("cannot read config file {}: {e}", p.display()))
                })?;
                Settings::parse(&text)
            }
        }
    }

    /// One `key = value` per line; `#` starts a comment; keys are the long
    /// flag names without the leading dashes.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("config line {}: expected key = value", lineno + 1))
            })?;
            let key = key.trim().to_string();
            if key.is_empty() {
                return Err(CliError::Config(format!(
                    "config line {}: empty key",
                    lineno + 1
                )));
            }
            if values
                .insert(key.clone(), value.trim().to_string())
                .is_some()
            {
                return Err(CliError::Config(format!("config key {key} given twice")));
            }
        }
        Ok(Settings {
            values,
            used: RefCell::new(BTreeSet::new()),
        })
    }

    fn from_file<T>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.used.borrow_mut().insert(key.to_string());
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|e| CliError::Config(format!("config key {key} = {raw}: {e}"))),
        }
    }

    /// Flag, else config file, else `default`.
    pub fn get<T>(&self, key: &str, flag: Option<T>, default: T) -> Result<T, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        Ok(self.get_opt(key, flag)?.unwrap_or(default))
    }

    pub fn get_opt<T>(&self, key: &str, flag: Option<T>) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        let file = self.from_file(key)?;
        Ok(flag.or(file))
    }

    /// Rejects file keys that the command never asked for.
    pub fn finish(&self) -> Result<(), CliError> {
        let used = self.used.borrow();
        let unknown: Vec<&str> = self
            .values
            .keys()
            .filter(|k| !used.contains(*k))
            .map(String::as_str)
            .collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(CliError::Config(format!(
                "unknown config key(s) for this command: {}",
                unknown.join(", ")
            )))
        }
    }
}

/// Comma-separated list, e.g. `0,3,5`; empty string is the empty list.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct List<T>(pub Vec<T>);

impl<T: FromStr> FromStr for List<T>
where
    T::Err: Display,
{
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(List(Vec::new()));
        }
        s.split(',')
            .map(|x| x.trim().parse::<T>().map_err(|e| format!("{x}: {e}")))
            .collect::<Result<Vec<_>, _>>()
            .map(List)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let s = Settings::parse("theta = 0.4\n# comment\nn = 64 # trailing\n").unwrap();
        assert_eq!(s.get("theta", Some(0.9), 0.0).unwrap(), 0.9);
        assert_eq!(s.get("theta", None, 0.0).unwrap(), 0.4);
        assert_eq!(s.get("n", None::<usize>, 8).unwrap(), 64);
        assert_eq!(s.get("mass-dt", None, 0.25).unwrap(), 0.25);
        s.finish().unwrap();
    }

    #[test]
    fn rejects_bad_files() {
        assert!(Settings::parse("theta 0.4").is_err());
        assert!(Settings::parse("a = 1\na = 2").is_err());
        let s = Settings::parse("thetta = 1").unwrap();
        assert!(s.finish().is_err());
        let s = Settings::parse("n = x").unwrap();
        assert!(s.get("n", None::<usize>, 1).is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(
            "0, 3,5".parse::<List<usize>>().unwrap(),
            List(vec![0, 3, 5])
        );
        assert_eq!("".parse::<List<usize>>().unwrap(), List(vec![]));
        assert!("1,a".parse::<List<usize>>().is_err());
    }
}
