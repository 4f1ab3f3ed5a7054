use std::io::Write;
use std::path::Path;

use kanform::chains::Chain;
use kanform::simplicial::{ComplexDescriptor, FreeSimplicialGroup, KanJson};
use kanform::{Error, Result};
use serde::de::DeserializeOwned;
use serde_json::Value;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// A complex descriptor, a `build` artifact, or a bare serialized group.
pub fn load_complex(path: &Path) -> Result<FreeSimplicialGroup> {
    let v: Value = read_json(path)?;
    if v.get("kind").is_some() {
        return serde_json::from_value::<ComplexDescriptor>(v)?.build();
    }
    let kan = v.get("kan").cloned().unwrap_or(v);
    FreeSimplicialGroup::from_json(&serde_json::from_value::<KanJson>(kan)?)
}

/// A chain array or a `cycle` artifact with a `cycle` field.
pub fn load_chain(path: &Path) -> Result<Chain> {
    let v: Value = read_json(path)?;
    let chain = v.get("cycle").cloned().unwrap_or(v);
    Ok(serde_json::from_value(chain)?)
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}
