//! 2-bit packing of direction codes.
//!
//! Four codes per byte, first code in bits 7-6. Unused bit pairs at the
//! end of the last byte are zero.

use crate::codec::Direction;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{bytes} packed bytes cannot hold exactly {codes} codes")]
pub struct BadLength {
    pub bytes: usize,
    pub codes: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PackedCodes {
    pub bytes: Vec<u8>,
    pub code_count: usize,
}

/// Bytes needed for `code_count` codes.
pub const fn packed_len(code_count: usize) -> usize {
    code_count.div_ceil(4)
}

pub fn pack(codes: &[Direction]) -> PackedCodes {
    let mut bytes = vec![0u8; packed_len(codes.len())];
    pack_into(codes, &mut bytes);
    PackedCodes {
        bytes,
        code_count: codes.len(),
    }
}

/// Packs into a zeroed slice of exactly `packed_len(codes.len())` bytes.
pub(crate) fn pack_into(codes: &[Direction], out: &mut [u8]) {
    for (byte, quad) in out.iter_mut().zip(codes.chunks(4)) {
        *byte = quad
            .iter()
            .enumerate()
            .fold(0u8, |acc, (k, d)| acc | d.code() << (6 - 2 * k));
    }
}

pub fn unpack(packed: &PackedCodes) -> Result<Vec<Direction>, BadLength> {
    unpack_slice(&packed.bytes, packed.code_count)
}

pub(crate) fn unpack_slice(bytes: &[u8], code_count: usize) -> Result<Vec<Direction>, BadLength> {
    if bytes.len() != packed_len(code_count) {
        return Err(BadLength {
            bytes: bytes.len(),
            codes: code_count,
        });
    }
    Ok((0..code_count)
        .map(|i| Direction::from_bits(bytes[i / 4] >> (6 - 2 * (i % 4))))
        .collect())
}
