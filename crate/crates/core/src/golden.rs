//! Line-oriented `name = hex` vector files.
//!
//! Blank lines and lines starting with `#` are ignored. Names are unique.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VectorFile {
    entries: BTreeMap<String, Vec<u8>>,
}

impl VectorFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (name, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Payload(format!("line {}: expected `name = hex`", lineno + 1)))?;
            let name = name.trim();
            if name.is_empty() {
                return Err(Error::Payload(format!("line {}: empty name", lineno + 1)));
            }
            let bytes = hex::decode(value.trim()).map_err(|e| Error::Payload(format!("line {}: {e}", lineno + 1)))?;
            if entries.insert(name.to_owned(), bytes).is_some() {
                return Err(Error::Payload(format!("line {}: duplicate name {name}", lineno + 1)));
            }
        }
        Ok(Self { entries })
    }

    pub fn get(&self, name: &str) -> Option<&[u8]> {
        self.entries.get(name).map(Vec::as_slice)
    }

    pub fn insert(&mut self, name: impl Into<String>, value: impl Into<Vec<u8>>) {
        self.entries.insert(name.into(), value.into());
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn render(&self) -> String {
        self.entries.iter().map(|(k, v)| format!("{k} = {}\n", hex::encode(v))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_renders() {
        let file = VectorFile::parse("# header\n\nalpha = 00ff\nbeta=01\n").unwrap();
        assert_eq!(file.get("alpha"), Some(&[0x00, 0xff][..]));
        assert_eq!(file.get("beta"), Some(&[0x01][..]));
        assert_eq!(VectorFile::parse(&file.render()).unwrap(), file);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(VectorFile::parse("alpha 00").is_err());
        assert!(VectorFile::parse("alpha = zz").is_err());
        assert!(VectorFile::parse(" = 00").is_err());
        assert!(VectorFile::parse("a = 00\na = 01").is_err());
    }
}
