//! Flat key-value config files with one section per subcommand:
//!
//! ```text
//! # comment
//! [phase-diagram]
//! gamma = 1.0
//! nu-grid = 1:4:101
//!
//! [noise-floor]
//! class = 1.5,0.8; 2,0.5; 1.2,1.0
//! ```
//!
//! Values are kept as strings; typed parsing happens where they are used,
//! through the same code path as command-line flags (flags win on
//! conflict). Duplicate keys keep the last occurrence.

use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("config line {line}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    sections: BTreeMap<String, BTreeMap<String, String>>,
}

impl ConfigFile {
    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.sections
            .get(section)
            .and_then(|kv| kv.get(key))
            .map(String::as_str)
    }

    pub fn sections(&self) -> impl Iterator<Item = &str> {
        self.sections.keys().map(String::as_str)
    }
}

pub fn parse_config(text: &str) -> Result<ConfigFile, ConfigError> {
    let mut sections: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(inner) = line.strip_prefix('[') {
            let Some(name) = inner.strip_suffix(']') else {
                return Err(ConfigError {
                    line: line_no,
                    message: "section header is missing the closing ']'".into(),
                });
            };
            let name = name.trim();
            if name.is_empty() {
                return Err(ConfigError {
                    line: line_no,
                    message: "section name is empty".into(),
                });
            }
            if name.contains('[') || name.contains(']') {
                return Err(ConfigError {
                    line: line_no,
                    message: format!("malformed section name {name:?}"),
                });
            }
            sections.entry(name.to_string()).or_default();
            current = Some(name.to_string());
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError {
                line: line_no,
                message: format!("expected `key = value` or a section header, got {line:?}"),
            });
        };
        let key = key.trim();
        if key.is_empty() {
            return Err(ConfigError {
                line: line_no,
                message: "key is empty".into(),
            });
        }
        let Some(section) = current.clone() else {
            return Err(ConfigError {
                line: line_no,
                message: format!("key {key:?} appears before any [section] header"),
            });
        };
        sections
            .get_mut(&section)
            .expect("section inserted when the header was read")
            .insert(key.to_string(), value.trim().to_string());
    }
    Ok(ConfigFile { sections })
}
