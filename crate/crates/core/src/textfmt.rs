//! Line-oriented `key = value` text with optional `[section]` headers.
//!
//! Blank lines and lines starting with `#` are ignored. Keys before the first
//! header belong to the unnamed section `""`. Vectors are comma lists and
//! matrices are row-major comma lists with their shape stored under separate keys.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{FpError, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct KeyValueDoc {
    entries: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    section: String,
    key: String,
    value: String,
    line: usize,
}

impl KeyValueDoc {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut section = String::new();
        let mut entries: Vec<Entry> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| FpError::Parse { line, message: "unterminated section header".into() })?;
                section = name.trim().to_string();
                continue;
            }
            let (key, value) = trimmed
                .split_once('=')
                .ok_or_else(|| FpError::Parse { line, message: format!("expected `key = value`, got `{trimmed}`") })?;
            let key = key.trim();
            if key.is_empty() {
                return Err(FpError::Parse { line, message: "empty key".into() });
            }
            if entries.iter().any(|e| e.section == section && e.key == key) {
                return Err(FpError::Parse { line, message: format!("duplicate key `{key}`") });
            }
            entries.push(Entry { section: section.clone(), key: key.to_string(), value: value.trim().to_string(), line });
        }
        Ok(Self { entries })
    }

    pub fn set(&mut self, section: &str, key: &str, value: impl ToString) {
        let value = value.to_string();
        match self.entries.iter_mut().find(|e| e.section == section && e.key == key) {
            Some(e) => e.value = value,
            None => self.entries.push(Entry { section: section.into(), key: key.into(), value, line: 0 }),
        }
    }

    pub fn set_list(&mut self, section: &str, key: &str, values: &[f64]) {
        self.set(section, key, join(values));
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.entries.iter().find(|e| e.section == section && e.key == key).map(|e| e.value.as_str())
    }

    pub fn contains(&self, section: &str, key: &str) -> bool {
        self.get(section, key).is_some()
    }

    pub fn sections(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for e in &self.entries {
            if !out.contains(&e.section.as_str()) {
                out.push(&e.section);
            }
        }
        out
    }

    pub fn keys<'a>(&'a self, section: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.entries.iter().filter(move |e| e.section == section).map(|e| e.key.as_str())
    }

    fn line_of(&self, section: &str, key: &str) -> usize {
        self.entries.iter().find(|e| e.section == section && e.key == key).map_or(0, |e| e.line)
    }

    pub fn require(&self, section: &str, key: &str) -> Result<&str> {
        self.get(section, key).ok_or_else(|| {
            let at = if section.is_empty() { String::new() } else { format!(" in [{section}]") };
            FpError::InvalidConfig(format!("missing key `{key}`{at}"))
        })
    }

    pub fn parse_value<T: FromStr>(&self, section: &str, key: &str) -> Result<Option<T>> {
        match self.get(section, key) {
            None => Ok(None),
            Some(v) => v.parse::<T>().map(Some).map_err(|_| FpError::Parse {
                line: self.line_of(section, key),
                message: format!("cannot parse `{v}` for key `{key}`"),
            }),
        }
    }

    pub fn value_or<T: FromStr>(&self, section: &str, key: &str, default: T) -> Result<T> {
        Ok(self.parse_value(section, key)?.unwrap_or(default))
    }

    pub fn required_value<T: FromStr>(&self, section: &str, key: &str) -> Result<T> {
        self.require(section, key)?;
        Ok(self.parse_value(section, key)?.expect("presence checked"))
    }

    pub fn list<T: FromStr>(&self, section: &str, key: &str) -> Result<Option<Vec<T>>> {
        let Some(v) = self.get(section, key) else { return Ok(None) };
        if v.is_empty() {
            return Ok(Some(Vec::new()));
        }
        v.split(',')
            .map(|s| {
                s.trim().parse::<T>().map_err(|_| FpError::Parse {
                    line: self.line_of(section, key),
                    message: format!("cannot parse list item `{}` for key `{key}`", s.trim()),
                })
            })
            .collect::<Result<Vec<T>>>()
            .map(Some)
    }

    pub fn required_list<T: FromStr>(&self, section: &str, key: &str) -> Result<Vec<T>> {
        self.require(section, key)?;
        Ok(self.list(section, key)?.expect("presence checked"))
    }

    /// Renders the document; the unnamed section is written first, without a header.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut sections = self.sections();
        sections.sort_by_key(|s| !s.is_empty());
        for (n, section) in sections.iter().enumerate() {
            if !section.is_empty() {
                if n > 0 {
                    out.push('\n');
                }
                let _ = writeln!(out, "[{section}]");
            }
            for e in self.entries.iter().filter(|e| e.section == *section) {
                let _ = writeln!(out, "{} = {}", e.key, e.value);
            }
        }
        out
    }
}

/// Comma-joins values using the shortest representation that round-trips.
pub fn join(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_and_comments() {
        let doc = KeyValueDoc::parse("scenario = aoi\n# note\n[instance]\nk = 3\nmu = 1.5\nseeds = 1, 2,3\n").unwrap();
        assert_eq!(doc.get("", "scenario"), Some("aoi"));
        assert_eq!(doc.value_or("instance", "k", 0usize).unwrap(), 3);
        assert_eq!(doc.required_list::<u64>("instance", "seeds").unwrap(), vec![1, 2, 3]);
        assert!(doc.get("", "k").is_none());
    }

    #[test]
    fn reports_bad_lines() {
        assert!(matches!(KeyValueDoc::parse("a = 1\nnope\n"), Err(FpError::Parse { line: 2, .. })));
        assert!(matches!(KeyValueDoc::parse("[open\n"), Err(FpError::Parse { line: 1, .. })));
        assert!(matches!(KeyValueDoc::parse("a=1\na=2\n"), Err(FpError::Parse { line: 2, .. })));
        let doc = KeyValueDoc::parse("x = abc\n").unwrap();
        assert!(doc.value_or::<f64>("", "x", 0.0).is_err());
    }

    #[test]
    fn render_round_trip() {
        let mut doc = KeyValueDoc::new();
        doc.set("net", "gains", join(&[0.1, 1.0 / 3.0, 1e-300]));
        doc.set("", "kind", "siso");
        let back = KeyValueDoc::parse(&doc.render()).unwrap();
        assert_eq!(back.required_list::<f64>("net", "gains").unwrap(), vec![0.1, 1.0 / 3.0, 1e-300]);
        assert_eq!(back.get("", "kind"), Some("siso"));
    }
}
