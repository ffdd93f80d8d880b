use std::collections::BTreeMap;
use std::str::FromStr;

use crate::CliError;

/// `key=value` tokens. Every key must be read before [`Params::finish`].
pub struct Params {
    map: BTreeMap<String, String>,
    used: std::cell::RefCell<Vec<String>>,
}

impl Params {
    pub fn parse(tokens: &[String]) -> Result<Self, CliError> {
        let mut map = BTreeMap::new();
        for t in tokens {
            let (k, v) = t
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("expected key=value, got `{t}`")))?;
            if map.insert(k.to_string(), v.to_string()).is_some() {
                return Err(CliError::Usage(format!("`{k}` given twice")));
            }
        }
        Ok(Self {
            map,
            used: Default::default(),
        })
    }

    pub fn str(&self, key: &str) -> Option<&str> {
        self.used.borrow_mut().push(key.to_string());
        self.map.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.str(key)
            .map(|s| {
                s.parse()
                    .map_err(|_| CliError::Usage(format!("bad value `{s}` for `{key}`")))
            })
            .transpose()
    }

    pub fn required<T: FromStr>(&self, key: &str) -> Result<T, CliError> {
        self.get(key)?
            .ok_or_else(|| CliError::Usage(format!("missing `{key}=`")))
    }

    pub fn or<T: FromStr>(&self, key: &str, default: T) -> Result<T, CliError> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    /// Rejects keys that no command read.
    pub fn finish(&self) -> Result<(), CliError> {
        let used = self.used.borrow();
        match self.map.keys().find(|k| !used.contains(k)) {
            Some(k) => Err(CliError::Usage(format!("unknown parameter `{k}`"))),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &[&str]) -> Vec<String> {
        s.iter().map(|t| t.to_string()).collect()
    }

    #[test]
    fn parses_and_tracks_keys() {
        let p = Params::parse(&toks(&["q=4", "latin=jm:1"])).unwrap();
        assert_eq!(p.required::<u32>("q").unwrap(), 4);
        assert!(p.finish().is_err());
        assert_eq!(p.str("latin"), Some("jm:1"));
        assert!(p.finish().is_ok());
        assert!(Params::parse(&toks(&["q"])).is_err());
        assert!(Params::parse(&toks(&["q=1", "q=2"])).is_err());
        let p = Params::parse(&toks(&["q=x"])).unwrap();
        assert!(p.required::<u32>("q").is_err());
    }
}
