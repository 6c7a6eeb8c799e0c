//! Self-describing index files.
//!
//! Layout, all integers little-endian u64:
//!
//! ```text
//! magic "SRIX\0\0\0\0" | version | kind | variant | n | sigma | r | s | B | sections
//! per section: name (16 bytes, NUL padded) | role | offset | length
//! section payloads, each padded to 8 bytes
//! CRC-32 of everything before it
//! ```
//!
//! `s`, `variant` and `B` are 0 for kinds that do not use them.

use std::path::Path;

use crate::error::{Error, Result};
use crate::index::{AnyIndex, BuildParams, IndexKind};
use crate::section::{Role, SectionMap};
use crate::srindex::Variant;

pub const MAGIC: [u8; 8] = *b"SRIX\0\0\0\0";
pub const VERSION: u64 = 1;
const HEADER_WORDS: usize = 10;
const NAME_LEN: usize = 16;
const ENTRY_LEN: usize = NAME_LEN + 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Header {
    pub kind: IndexKind,
    pub variant: u64,
    pub n: u64,
    pub sigma: u64,
    pub r: u64,
    pub s: u64,
    pub block: u64,
}

impl Header {
    pub fn params(&self) -> Result<BuildParams> {
        let mut p = BuildParams::new(self.kind);
        if self.kind.is_subsampled() {
            p.s = self.s as usize;
            p.variant = Variant::from_index(self.variant)?;
        } else if self.s != 0 || self.variant != 0 {
            return Err(Error::Format("sampling parameters on a non-subsampled kind".into()));
        }
        if self.kind.uses_block() {
            p.block = self.block as usize;
        } else if self.block != 0 {
            return Err(Error::Format("block size on a kind without Psi runs".into()));
        }
        p.validate().map_err(|e| Error::Format(e.to_string()))?;
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct SectionInfo {
    pub name: String,
    pub role: Role,
    pub offset: u64,
    pub len: u64,
}

/// A checked file: header, section table, and the raw bytes.
#[derive(Debug)]
pub struct Envelope<'a> {
    pub header: Header,
    pub sections: Vec<SectionInfo>,
    bytes: &'a [u8],
}

fn put(out: &mut Vec<u8>, v: u64) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn word(bytes: &[u8], at: usize) -> u64 {
    u64::from_le_bytes(bytes[at..at + 8].try_into().unwrap())
}

fn pad8(len: usize) -> usize {
    len.div_ceil(8) * 8
}

pub fn encode(index: &AnyIndex) -> Vec<u8> {
    let params = index.params();
    let kind = params.kind;
    let sections = index.sections();
    let table_end = 8 * HEADER_WORDS + ENTRY_LEN * sections.len();
    let mut out = Vec::with_capacity(
        table_end + sections.iter().map(|s| pad8(s.bytes.len())).sum::<usize>() + 8,
    );
    out.extend_from_slice(&MAGIC);
    put(&mut out, VERSION);
    put(&mut out, kind.code());
    put(&mut out, if kind.is_subsampled() { params.variant.index() } else { 0 });
    put(&mut out, index.len() as u64);
    put(&mut out, index.sigma() as u64);
    put(&mut out, index.runs() as u64);
    put(&mut out, if kind.is_subsampled() { params.s as u64 } else { 0 });
    put(&mut out, if kind.uses_block() { params.block as u64 } else { 0 });
    put(&mut out, sections.len() as u64);
    let mut offset = table_end;
    for s in &sections {
        assert!(s.name.len() <= NAME_LEN, "section name too long");
        let mut name = [0u8; NAME_LEN];
        name[..s.name.len()].copy_from_slice(s.name.as_bytes());
        out.extend_from_slice(&name);
        put(&mut out, s.role as u64);
        put(&mut out, offset as u64);
        put(&mut out, s.bytes.len() as u64);
        offset += pad8(s.bytes.len());
    }
    for s in &sections {
        out.extend_from_slice(&s.bytes);
        out.resize(pad8(out.len()), 0);
    }
    let crc = crc32fast::hash(&out);
    put(&mut out, crc as u64);
    out
}

impl<'a> Envelope<'a> {
    /// Checks magic, checksum, version and the section table.
    pub fn parse(bytes: &'a [u8]) -> Result<Self> {
        if bytes.len() < MAGIC.len() || bytes[..MAGIC.len()] != MAGIC {
            return Err(Error::BadMagic);
        }
        if bytes.len() < 8 * HEADER_WORDS + 8 || !bytes.len().is_multiple_of(8) {
            return Err(Error::Format("truncated index file".into()));
        }
        let body = bytes.len() - 8;
        let stored = word(bytes, body);
        let computed = crc32fast::hash(&bytes[..body]) as u64;
        if stored != computed {
            return Err(Error::Checksum { stored, computed });
        }
        let version = word(bytes, 8);
        if version != VERSION {
            return Err(Error::UnsupportedVersion(version));
        }
        let h = |i: usize| word(bytes, 8 * i);
        let header = Header {
            kind: IndexKind::from_code(h(2))?,
            variant: h(3),
            n: h(4),
            sigma: h(5),
            r: h(6),
            s: h(7),
            block: h(8),
        };
        let count = h(9) as usize;
        let table_start = 8 * HEADER_WORDS;
        if count > (body - table_start) / ENTRY_LEN {
            return Err(Error::Format("section table runs past the end".into()));
        }
        let mut next = (table_start + ENTRY_LEN * count) as u64;
        let mut sections = Vec::with_capacity(count);
        for k in 0..count {
            let at = table_start + ENTRY_LEN * k;
            let raw = &bytes[at..at + NAME_LEN];
            let name_len = raw.iter().position(|&b| b == 0).unwrap_or(NAME_LEN);
            let name = std::str::from_utf8(&raw[..name_len])
                .map_err(|_| Error::Format("section name is not UTF-8".into()))?
                .to_string();
            let role = match word(bytes, at + NAME_LEN) {
                0 => Role::Counting,
                1 => Role::Locating,
                v => return Err(Error::Format(format!("unknown section role {v}"))),
            };
            let offset = word(bytes, at + NAME_LEN + 8);
            let len = word(bytes, at + NAME_LEN + 16);
            if offset != next || len > body as u64 - offset {
                return Err(Error::Format(format!("section {name:?} is out of place")));
            }
            next = offset + pad8(len as usize) as u64;
            sections.push(SectionInfo {
                name,
                role,
                offset,
                len,
            });
        }
        if next != body as u64 {
            return Err(Error::Format("unexpected bytes after the sections".into()));
        }
        Ok(Self {
            header,
            sections,
            bytes,
        })
    }

    pub fn total_bytes(&self) -> usize {
        self.bytes.len()
    }

    /// Decodes the index and checks it against the header.
    pub fn index(&self) -> Result<AnyIndex> {
        let params = self.header.params()?;
        let mut map = SectionMap::default();
        for s in &self.sections {
            let range = s.offset as usize..(s.offset + s.len) as usize;
            map.insert(s.name.clone(), &self.bytes[range])?;
        }
        let index = AnyIndex::from_sections(params, &map)?;
        let h = &self.header;
        if index.len() as u64 != h.n || index.sigma() as u64 != h.sigma || index.runs() as u64 != h.r
        {
            return Err(Error::Format("header disagrees with the payload".into()));
        }
        let expected: Vec<(String, Role)> =
            index.sections().into_iter().map(|s| (s.name, s.role)).collect();
        let found: Vec<(String, Role)> =
            self.sections.iter().map(|s| (s.name.clone(), s.role)).collect();
        if expected != found {
            return Err(Error::Format("unexpected section list".into()));
        }
        Ok(index)
    }
}

pub fn decode(bytes: &[u8]) -> Result<AnyIndex> {
    Envelope::parse(bytes)?.index()
}

pub fn save(index: &AnyIndex, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, encode(index))?;
    Ok(())
}

pub fn load(path: impl AsRef<Path>) -> Result<AnyIndex> {
    decode(&std::fs::read(path)?)
}

/// Whether `bytes` start like an index file.
pub fn looks_like_index(bytes: &[u8]) -> bool {
    bytes.len() >= MAGIC.len() && bytes[..MAGIC.len()] == MAGIC
}
