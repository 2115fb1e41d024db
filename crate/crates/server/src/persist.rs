//! Single-document JSON persistence for users and sessions.
//!
//! Writes go to a temporary file in the target directory which is then
//! renamed over the old document, so readers see either the old or the new
//! state.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::model::{SessionRecord, UserRecord};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoreDocument {
    pub version: u32,
    pub users: BTreeMap<String, UserRecord>,
    pub sessions: BTreeMap<String, SessionRecord>,
}

pub fn load(path: &Path) -> io::Result<StoreDocument> {
    match fs::read(path) {
        Ok(bytes) => {
            let doc: StoreDocument = serde_json::from_slice(&bytes).map_err(io::Error::other)?;
            if doc.version != FORMAT_VERSION {
                return Err(io::Error::other(format!("unsupported store version {}", doc.version)));
            }
            Ok(doc)
        }
        Err(e) if e.kind() == io::ErrorKind::NotFound => {
            Ok(StoreDocument { version: FORMAT_VERSION, ..Default::default() })
        }
        Err(e) => Err(e),
    }
}

pub fn save(path: &Path, doc: &StoreDocument) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    serde_json::to_writer_pretty(&mut tmp, doc).map_err(io::Error::other)?;
    tmp.write_all(b"\n")?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
