//! The `CRK1` compressed stream.
//!
//! ```text
//! magic            4   "CRK1"
//! width            u32
//! height           u32
//! bits_per_pixel   u8
//! blob_len         u32
//! header_blob      blob_len bytes: the source file up to its pixel data
//! chain_count      u32
//! chain_count records:
//!   row            u16
//!   col            u16
//!   value          1 byte (indexed) or 3 bytes R, G, B (24-bit)
//!   code_count     u32
//!   codes          ceil(code_count / 4) bytes, 2 bits per code, MSB first
//! ```
//!
//! All integers are little-endian. A stream must be consumed exactly:
//! trailing bytes are an error.

use crate::bitpack::{self, packed_len};
use crate::bmp::{self, BmpError, BmpImage, PixelValue};
use crate::codec::{Chain, ChainSet};
use std::fmt::Write as _;
use thiserror::Error;

pub const MAGIC: [u8; 4] = *b"CRK1";
/// Largest width or height a record coordinate can address.
pub const MAX_DIMENSION: usize = u16::MAX as usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContainerError {
    #[error("not a CRK1 stream")]
    BadMagic,
    #[error("truncated stream: {what} needs {needed} bytes at offset {offset}, {available} left")]
    Truncated {
        what: &'static str,
        offset: usize,
        needed: u64,
        available: usize,
    },
    #[error("{rows}x{cols} image does not fit 16-bit chain coordinates")]
    TooLarge { rows: usize, cols: usize },
    #[error("source image has {0} bytes after its pixel array, which the stream cannot carry")]
    UnsupportedTrailer(usize),
    #[error("chain set is {chain_rows}x{chain_cols} but the image is {rows}x{cols}")]
    DimensionMismatch {
        chain_rows: usize,
        chain_cols: usize,
        rows: usize,
        cols: usize,
    },
    #[error("unsupported bit depth {0}")]
    UnsupportedDepth(u8),
    #[error("embedded BMP header: {0}")]
    BadHeaderBlob(#[source] BmpError),
    #[error("stream says {stream_cols}x{stream_rows} at {stream_bpp} bpp, embedded header says {cols}x{rows} at {bpp} bpp")]
    HeaderMismatch {
        stream_rows: usize,
        stream_cols: usize,
        stream_bpp: u8,
        rows: usize,
        cols: usize,
        bpp: u16,
    },
    #[error("record {record} starts at ({row}, {col}), outside the image")]
    BoundsViolation { record: usize, row: usize, col: usize },
    #[error("record {record} has value {value}, not valid at {bits_per_pixel} bpp")]
    BadValue {
        record: usize,
        value: u32,
        bits_per_pixel: u8,
    },
    #[error("records cover {covered} pixels, image has {expected}")]
    CoverageMismatch { covered: u64, expected: u64 },
    #[error("{0} unexpected bytes after the last record")]
    TrailingData(usize),
}

/// A deserialized stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamContents {
    pub chains: ChainSet,
    pub bits_per_pixel: u8,
    /// Verbatim BMP headers, palette and gap of the original file.
    pub header_blob: Vec<u8>,
}

fn value_len(bits_per_pixel: u8) -> usize {
    if bits_per_pixel == 24 {
        3
    } else {
        1
    }
}

fn value_fits(value: PixelValue, bits_per_pixel: u8) -> bool {
    if bits_per_pixel == 24 {
        value.0 <= 0x00ff_ffff
    } else {
        value.0 < 1 << bits_per_pixel
    }
}

/// Writes `chains`, computed from `source`'s pixels, as a CRK1 stream.
pub fn serialize(chains: &ChainSet, source: &BmpImage) -> Result<Vec<u8>, ContainerError> {
    let (rows, cols) = (source.matrix.rows(), source.matrix.cols());
    if rows > MAX_DIMENSION || cols > MAX_DIMENSION {
        return Err(ContainerError::TooLarge { rows, cols });
    }
    if chains.rows != rows || chains.cols != cols {
        return Err(ContainerError::DimensionMismatch {
            chain_rows: chains.rows,
            chain_cols: chains.cols,
            rows,
            cols,
        });
    }
    if !source.trailer.is_empty() {
        return Err(ContainerError::UnsupportedTrailer(source.trailer.len()));
    }
    let bpp = source.bits_per_pixel() as u8;
    let blob = source.header.to_bytes();
    let chain_count = u32::try_from(chains.chains.len()).map_err(|_| ContainerError::TooLarge { rows, cols })?;

    let vlen = value_len(bpp);
    let body: usize = chains
        .chains
        .iter()
        .map(|c| 4 + vlen + 4 + packed_len(c.codes.len()))
        .sum();
    let mut out = Vec::with_capacity(21 + blob.len() + body);
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&(cols as u32).to_le_bytes());
    out.extend_from_slice(&(rows as u32).to_le_bytes());
    out.push(bpp);
    out.extend_from_slice(&(blob.len() as u32).to_le_bytes());
    out.extend_from_slice(&blob);
    out.extend_from_slice(&chain_count.to_le_bytes());

    for (record, chain) in chains.chains.iter().enumerate() {
        if chain.row >= rows || chain.col >= cols {
            return Err(ContainerError::BoundsViolation {
                record,
                row: chain.row,
                col: chain.col,
            });
        }
        if !value_fits(chain.value, bpp) {
            return Err(ContainerError::BadValue {
                record,
                value: chain.value.0,
                bits_per_pixel: bpp,
            });
        }
        out.extend_from_slice(&(chain.row as u16).to_le_bytes());
        out.extend_from_slice(&(chain.col as u16).to_le_bytes());
        if bpp == 24 {
            let (r, g, b) = chain.value.rgb();
            out.extend_from_slice(&[r, g, b]);
        } else {
            out.push(chain.value.0 as u8);
        }
        let count = u32::try_from(chain.codes.len()).map_err(|_| ContainerError::TooLarge { rows, cols })?;
        out.extend_from_slice(&count.to_le_bytes());
        let start = out.len();
        out.resize(start + packed_len(chain.codes.len()), 0);
        bitpack::pack_into(&chain.codes, &mut out[start..]);
    }
    Ok(out)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: u64, what: &'static str) -> Result<&'a [u8], ContainerError> {
        let available = self.bytes.len() - self.pos;
        if n > available as u64 {
            return Err(ContainerError::Truncated {
                what,
                offset: self.pos,
                needed: n,
                available,
            });
        }
        let s = &self.bytes[self.pos..self.pos + n as usize];
        self.pos += n as usize;
        Ok(s)
    }

    fn u8(&mut self, what: &'static str) -> Result<u8, ContainerError> {
        Ok(self.take(1, what)?[0])
    }

    fn u16(&mut self, what: &'static str) -> Result<u16, ContainerError> {
        let b = self.take(2, what)?;
        Ok(u16::from_le_bytes([b[0], b[1]]))
    }

    fn u32(&mut self, what: &'static str) -> Result<u32, ContainerError> {
        let b = self.take(4, what)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }

    fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }
}

/// Parses and validates a CRK1 stream.
///
/// Walk-level consistency (no overlaps, walks inside the image) is left
/// to [`crate::codec::decode`]; everything checkable from the record
/// headers alone is checked here.
pub fn deserialize(bytes: &[u8]) -> Result<StreamContents, ContainerError> {
    let mut cur = Cursor { bytes, pos: 0 };
    let magic = cur.take(4, "magic")?;
    if magic != MAGIC {
        return Err(ContainerError::BadMagic);
    }
    let cols = cur.u32("width")? as usize;
    let rows = cur.u32("height")? as usize;
    let bpp = cur.u8("bits per pixel")?;
    if !bmp::SUPPORTED_DEPTHS.contains(&u16::from(bpp)) {
        return Err(ContainerError::UnsupportedDepth(bpp));
    }
    let blob_len = cur.u32("header blob length")?;
    let header_blob = cur.take(u64::from(blob_len), "header blob")?.to_vec();
    let header = bmp::parse_header_block(&header_blob).map_err(ContainerError::BadHeaderBlob)?;
    if header.file_header.pixel_data_offset as usize != header_blob.len() {
        return Err(ContainerError::BadHeaderBlob(BmpError::BadHeader(format!(
            "blob is {} bytes but its pixel data offset is {}",
            header_blob.len(),
            header.file_header.pixel_data_offset
        ))));
    }
    if header.rows() != rows || header.cols() != cols || header.bits_per_pixel() != u16::from(bpp) {
        return Err(ContainerError::HeaderMismatch {
            stream_rows: rows,
            stream_cols: cols,
            stream_bpp: bpp,
            rows: header.rows(),
            cols: header.cols(),
            bpp: header.bits_per_pixel(),
        });
    }

    let chain_count = cur.u32("chain count")? as usize;
    let vlen = value_len(bpp);
    let min_record = 4 + vlen + 4;
    let mut chains = Vec::with_capacity(chain_count.min(cur.remaining() / min_record));
    let mut covered: u64 = 0;
    for record in 0..chain_count {
        let row = cur.u16("record row")? as usize;
        let col = cur.u16("record column")? as usize;
        let raw = cur.take(vlen as u64, "record value")?;
        let value = if bpp == 24 {
            PixelValue::from_rgb(raw[0], raw[1], raw[2])
        } else {
            PixelValue(u32::from(raw[0]))
        };
        let code_count = cur.u32("record code count")? as usize;
        let packed = cur.take(packed_len(code_count) as u64, "record codes")?;
        if row >= rows || col >= cols {
            return Err(ContainerError::BoundsViolation { record, row, col });
        }
        if !value_fits(value, bpp) {
            return Err(ContainerError::BadValue {
                record,
                value: value.0,
                bits_per_pixel: bpp,
            });
        }
        let codes = bitpack::unpack_slice(packed, code_count).expect("slice length taken from packed_len");
        covered += code_count as u64 + 1;
        chains.push(Chain { row, col, value, codes });
    }
    let expected = rows as u64 * cols as u64;
    if covered != expected {
        return Err(ContainerError::CoverageMismatch { covered, expected });
    }
    if cur.remaining() != 0 {
        return Err(ContainerError::TrailingData(cur.remaining()));
    }
    Ok(StreamContents {
        chains: ChainSet { rows, cols, chains },
        bits_per_pixel: bpp,
        header_blob,
    })
}

/// Human-readable listing: one line per chain,
/// `row col value code code ... -1`. 24-bit values print as `r,g,b`.
pub fn dump_text(chains: &ChainSet, bits_per_pixel: u16) -> String {
    let mut out = String::new();
    for chain in &chains.chains {
        let _ = write!(out, "{} {} ", chain.row, chain.col);
        if bits_per_pixel == 24 {
            let (r, g, b) = chain.value.rgb();
            let _ = write!(out, "{r},{g},{b}");
        } else {
            let _ = write!(out, "{}", chain.value);
        }
        for code in &chain.codes {
            let _ = write!(out, " {code}");
        }
        out.push_str(" -1\n");
    }
    out
}
