//! Byte-level encoding helpers shared by all binary formats.
//!
//! Integers are big-endian. Unbounded integers (scalars, moduli) use a
//! 2-byte length prefix followed by minimal magnitude bytes, so equal values
//! always encode identically.

use crate::error::{Error, Result};

#[derive(Default)]
pub(crate) struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    pub fn new() -> Writer {
        Writer::default()
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf
    }

    pub fn bytes(&mut self, b: &[u8]) {
        self.buf.extend_from_slice(b);
    }

    pub fn u8(&mut self, v: u8) {
        self.buf.push(v);
    }

    pub fn u16(&mut self, v: u16) {
        self.buf.extend_from_slice(&v.to_be_bytes());
    }

    pub fn u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_be_bytes());
    }

    pub fn u64(&mut self, v: u64) {
        self.buf.extend_from_slice(&v.to_be_bytes());
    }

    /// 2-byte length followed by the minimal big-endian magnitude.
    pub fn uint(&mut self, v: u128) {
        let be = v.to_be_bytes();
        let skip = be.iter().take_while(|&&b| b == 0).count();
        let mag = &be[skip..];
        self.u16(mag.len() as u16);
        self.bytes(mag);
    }

    /// Length-prefixed byte string (4-byte count).
    pub fn blob(&mut self, b: &[u8]) {
        self.u32(b.len() as u32);
        self.bytes(b);
    }

    pub fn str(&mut self, s: &str) {
        self.blob(s.as_bytes());
    }
}

pub(crate) struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub fn new(data: &'a [u8]) -> Reader<'a> {
        Reader { data, pos: 0 }
    }

    pub fn is_empty(&self) -> bool {
        self.pos == self.data.len()
    }

    pub fn finish(&self) -> Result<()> {
        if self.is_empty() {
            Ok(())
        } else {
            Err(Error::Codec("trailing bytes".into()))
        }
    }

    pub fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        if self.data.len() - self.pos < len {
            return Err(Error::Codec("truncated input".into()));
        }
        let slice = &self.data[self.pos..self.pos + len];
        self.pos += len;
        Ok(slice)
    }

    pub fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_be_bytes(self.take(2)?.try_into().unwrap()))
    }

    pub fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_be_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_be_bytes(self.take(8)?.try_into().unwrap()))
    }

    pub fn uint(&mut self) -> Result<u128> {
        let len = self.u16()? as usize;
        if len > 16 {
            return Err(Error::Codec("integer wider than 128 bits".into()));
        }
        let mag = self.take(len)?;
        if !mag.is_empty() && mag[0] == 0 {
            return Err(Error::Codec("non-minimal integer encoding".into()));
        }
        let mut be = [0u8; 16];
        be[16 - mag.len()..].copy_from_slice(mag);
        Ok(u128::from_be_bytes(be))
    }

    pub fn blob(&mut self) -> Result<&'a [u8]> {
        let len = self.u32()? as usize;
        self.take(len)
    }

    pub fn str(&mut self) -> Result<String> {
        let raw = self.blob()?;
        String::from_utf8(raw.to_vec()).map_err(|_| Error::Codec("invalid utf-8 string".into()))
    }

    pub fn magic(&mut self, expected: &[u8]) -> Result<()> {
        let got = self.take(expected.len())?;
        if got != expected {
            return Err(Error::Codec(format!(
                "bad magic tag: expected {:?}",
                String::from_utf8_lossy(expected)
            )));
        }
        Ok(())
    }
}
