//! Named byte sections that make up a serialized index.

use std::collections::BTreeMap;

use crate::error::{format_err, Result};
use crate::persist::Persist;

/// Whether a section belongs to the counting core or to the locating
/// machinery; used for space reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Counting,
    Locating,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub name: String,
    pub role: Role,
    pub bytes: Vec<u8>,
}

impl Section {
    pub fn new(name: &str, role: Role, item: &impl Persist) -> Self {
        Self {
            name: name.to_string(),
            role,
            bytes: item.to_bytes(),
        }
    }
}

/// Decoded sections of an envelope, looked up by name.
#[derive(Debug, Default)]
pub struct SectionMap<'a> {
    entries: BTreeMap<String, &'a [u8]>,
}

impl<'a> SectionMap<'a> {
    pub fn insert(&mut self, name: String, bytes: &'a [u8]) -> Result<()> {
        if self.entries.insert(name.clone(), bytes).is_some() {
            return format_err(format!("duplicate section {name:?}"));
        }
        Ok(())
    }

    pub fn raw(&self, name: &str) -> Result<&'a [u8]> {
        self.entries
            .get(name)
            .copied()
            .ok_or_else(|| crate::Error::Format(format!("missing section {name:?}")))
    }

    pub fn get<T: Persist>(&self, name: &str) -> Result<T> {
        T::from_bytes(self.raw(name)?)
            .map_err(|e| crate::Error::Format(format!("section {name:?}: {e}")))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn from_sections(sections: &'a [Section]) -> Result<Self> {
        let mut map = Self::default();
        for s in sections {
            map.insert(s.name.clone(), &s.bytes)?;
        }
        Ok(map)
    }
}
