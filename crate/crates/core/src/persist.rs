//! Little-endian, length-prefixed byte encoding used by every serialized
//! structure. All integers are written as 64-bit words.

use crate::error::{format_err, Result};

#[derive(Debug, Default)]
pub struct ByteSink {
    buf: Vec<u8>,
}

impl ByteSink {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn put_u64(&mut self, v: u64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn put_usize(&mut self, v: usize) {
        self.put_u64(v as u64);
    }

    /// Writes a length prefix followed by the words.
    pub fn put_words(&mut self, words: &[u64]) {
        self.put_usize(words.len());
        for &w in words {
            self.put_u64(w);
        }
    }

    /// Writes a length prefix followed by the raw bytes, zero-padded to a
    /// multiple of eight.
    pub fn put_bytes(&mut self, bytes: &[u8]) {
        self.put_usize(bytes.len());
        self.buf.extend_from_slice(bytes);
        let pad = (8 - bytes.len() % 8) % 8;
        self.buf.extend(std::iter::repeat_n(0u8, pad));
    }

    pub fn len(&self) -> usize {
        self.buf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buf.is_empty()
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.buf
    }
}

#[derive(Debug)]
pub struct ByteSource<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> ByteSource<'a> {
    pub fn new(data: &'a [u8]) -> Self {
        Self { data, pos: 0 }
    }

    pub fn get_u64(&mut self) -> Result<u64> {
        let end = self.pos + 8;
        if end > self.data.len() {
            return format_err("unexpected end of section");
        }
        let mut b = [0u8; 8];
        b.copy_from_slice(&self.data[self.pos..end]);
        self.pos = end;
        Ok(u64::from_le_bytes(b))
    }

    pub fn get_usize(&mut self) -> Result<usize> {
        let v = self.get_u64()?;
        usize::try_from(v).or_else(|_| format_err("integer does not fit in usize"))
    }

    /// Reads a length that will be used to size an allocation of
    /// `unit`-byte elements, rejecting lengths that cannot be backed by the
    /// remaining bytes.
    fn get_len(&mut self, unit: usize) -> Result<usize> {
        let len = self.get_usize()?;
        if len.saturating_mul(unit) > self.remaining() {
            return format_err(format!("declared length {len} exceeds section size"));
        }
        Ok(len)
    }

    pub fn get_words(&mut self) -> Result<Vec<u64>> {
        let len = self.get_len(8)?;
        (0..len).map(|_| self.get_u64()).collect()
    }

    pub fn get_bytes(&mut self) -> Result<Vec<u8>> {
        let len = self.get_len(1)?;
        let out = self.data[self.pos..self.pos + len].to_vec();
        let padded = len + (8 - len % 8) % 8;
        if self.pos + padded > self.data.len() {
            return format_err("unexpected end of section");
        }
        self.pos += padded;
        Ok(out)
    }

    pub fn remaining(&self) -> usize {
        self.data.len() - self.pos
    }

    pub fn finish(&self) -> Result<()> {
        if self.remaining() != 0 {
            return format_err(format!("{} trailing bytes in section", self.remaining()));
        }
        Ok(())
    }
}

/// Structures that round-trip through a byte section.
pub trait Persist: Sized {
    fn write_to(&self, out: &mut ByteSink);
    fn read_from(src: &mut ByteSource<'_>) -> Result<Self>;

    fn to_bytes(&self) -> Vec<u8> {
        let mut sink = ByteSink::new();
        self.write_to(&mut sink);
        sink.into_inner()
    }

    fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut src = ByteSource::new(bytes);
        let v = Self::read_from(&mut src)?;
        src.finish()?;
        Ok(v)
    }
}

impl Persist for Vec<u64> {
    fn write_to(&self, out: &mut ByteSink) {
        out.put_words(self);
    }

    fn read_from(src: &mut ByteSource<'_>) -> Result<Self> {
        src.get_words()
    }
}
