//! The attribute universe and its duplicated expansion.
//!
//! Policies may repeat an attribute; the row-labeling of a secret-sharing
//! matrix must stay injective. The standard fix is to work over an expanded
//! universe holding `dup` copies of every attribute: ciphertexts publish
//! components for all copies of each attribute they carry, and each policy
//! occurrence binds to a distinct copy.

use crate::error::{Error, Result};
use crate::serial::{Reader, Writer};
use std::collections::BTreeSet;

/// One member of the expanded universe: attribute index plus copy number
/// (copies are 1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExpandedAttr {
    pub attr: u32,
    pub copy: u32,
}

/// Base attribute names plus the per-attribute duplication factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeUniverse {
    names: Vec<String>,
    dup: u32,
}

impl AttributeUniverse {
    pub fn new<S: Into<String>>(names: Vec<S>, dup: u32) -> Result<AttributeUniverse> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::InvalidParameter("empty attribute universe".into()));
        }
        if dup == 0 {
            return Err(Error::InvalidParameter(
                "duplication factor must be at least 1".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        for n in &names {
            if n.is_empty() {
                return Err(Error::InvalidParameter("empty attribute name".into()));
            }
            if !seen.insert(n.clone()) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate attribute name `{n}`"
                )));
            }
        }
        Ok(AttributeUniverse { names, dup })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Duplication factor: copies per attribute in the expanded universe.
    pub fn dup(&self) -> u32 {
        self.dup
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, attr: u32) -> &str {
        &self.names[attr as usize]
    }

    pub fn index_of(&self, name: &str) -> Result<u32> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| i as u32)
            .ok_or_else(|| Error::UnknownAttribute(name.to_string()))
    }

    /// Size of the expanded universe |A'| = |A| · dup.
    pub fn expanded_len(&self) -> usize {
        self.names.len() * self.dup as usize
    }

    /// Sorted, de-duplicated attribute indices for a set of names.
    pub fn resolve_set<S: AsRef<str>>(&self, set: &[S]) -> Result<Vec<u32>> {
        let mut idx = BTreeSet::new();
        for name in set {
            idx.insert(self.index_of(name.as_ref())?);
        }
        Ok(idx.into_iter().collect())
    }

    pub(crate) fn encode(&self, w: &mut Writer) {
        w.u32(self.names.len() as u32);
        for n in &self.names {
            w.str(n);
        }
        w.u32(self.dup);
    }

    pub(crate) fn decode(r: &mut Reader<'_>) -> Result<AttributeUniverse> {
        let count = r.u32()? as usize;
        let mut names = Vec::with_capacity(count);
        for _ in 0..count {
            names.push(r.str()?);
        }
        let dup = r.u32()?;
        AttributeUniverse::new(names, dup)
    }
}
