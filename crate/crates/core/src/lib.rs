//! Lossless compression of uncompressed BMP images by greedy 4-connected
//! crack coding.
//!
//! An image is split into chains of same-valued pixels. Each chain stores
//! its start position, its value, and one 2-bit direction per further
//! pixel. The chains are written to a `CRK1` stream together with the
//! original BMP headers, so decompression restores the source file byte
//! for byte.
//!
//! ```
//! use crackcode::bmp::{BmpImage, PixelMatrix, RgbQuad, write_bmp};
//!
//! let palette = vec![RgbQuad::grey(0), RgbQuad::grey(255)];
//! let matrix = PixelMatrix::from_rows(&[[0u32, 0, 1], [0, 1, 1]]);
//! let original = write_bmp(&BmpImage::new(8, palette, matrix).unwrap()).unwrap();
//!
//! let stream = crackcode::compress(&original).unwrap();
//! assert_eq!(crackcode::decompress(&stream).unwrap(), original);
//! ```

pub mod bench;
pub mod bitpack;
pub mod bmp;
pub mod codec;
pub mod container;
pub mod report;
pub mod rle;
pub mod synthetic;

use std::time::{Duration, Instant};
use thiserror::Error;

pub use bmp::{parse_bmp, write_bmp, BmpError, BmpImage, PixelMatrix, PixelValue};
pub use codec::{decode, encode, Chain, ChainSet, CodecError, Direction};
pub use container::{deserialize, dump_text, serialize, ContainerError};
pub use report::CompressionReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Bmp(#[from] BmpError),
    #[error(transparent)]
    Container(#[from] ContainerError),
    #[error("corrupt chain data: {0}")]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Rle(#[from] rle::RleError),
    #[error(transparent)]
    Spec(#[from] synthetic::SpecError),
    #[error("restored file differs from the original in {0} bytes")]
    VerifyMismatch(u64),
}

impl Error {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    pub fn class(&self) -> ErrorClass {
        use ErrorClass as C;
        match self {
            Error::Io { .. } => C::Io,
            Error::Bmp(e) => match e {
                BmpError::BadMagic => C::BmpBadMagic,
                BmpError::UnsupportedCompression(_) => C::BmpUnsupportedCompression,
                BmpError::UnsupportedDepth(_) => C::BmpUnsupportedDepth,
                BmpError::Truncated { .. } => C::BmpTruncated,
                BmpError::BadHeader(_) => C::BmpBadHeader,
                BmpError::IndexOutOfPalette { .. } | BmpError::InvalidImage(_) => C::BmpInvalidImage,
            },
            Error::Container(e) => match e {
                ContainerError::BadMagic => C::StreamBadMagic,
                ContainerError::Truncated { .. } => C::StreamTruncated,
                ContainerError::BoundsViolation { .. } | ContainerError::BadValue { .. } => {
                    C::StreamBoundsViolation
                }
                ContainerError::CoverageMismatch { .. } => C::StreamCoverageMismatch,
                ContainerError::UnsupportedDepth(_)
                | ContainerError::BadHeaderBlob(_)
                | ContainerError::HeaderMismatch { .. }
                | ContainerError::TrailingData(_) => C::StreamMalformed,
                ContainerError::TooLarge { .. }
                | ContainerError::UnsupportedTrailer(_)
                | ContainerError::DimensionMismatch { .. } => C::TooLarge,
            },
            Error::Codec(e) => match e {
                CodecError::WalkOutOfBounds { .. } => C::WalkOutOfBounds,
                CodecError::IncompleteCover { .. } => C::IncompleteCover,
                CodecError::OverlapWrite { .. } => C::OverlapWrite,
            },
            Error::VerifyMismatch(_) => C::VerifyMismatch,
            Error::Spec(_) => C::BadSpec,
            Error::Rle(_) => C::Rle,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Stable numeric error classes. The CLI uses them as exit codes and the
/// C API as status codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(i32)]
pub enum ErrorClass {
    Io = 1,
    Usage = 2,
    BmpBadMagic = 3,
    BmpUnsupportedCompression = 4,
    BmpUnsupportedDepth = 5,
    BmpTruncated = 6,
    BmpBadHeader = 7,
    BmpInvalidImage = 8,
    StreamBadMagic = 10,
    StreamTruncated = 11,
    StreamBoundsViolation = 12,
    StreamCoverageMismatch = 13,
    StreamMalformed = 14,
    TooLarge = 15,
    WalkOutOfBounds = 16,
    IncompleteCover = 17,
    OverlapWrite = 18,
    VerifyMismatch = 20,
    BadSpec = 21,
    Rle = 22,
}

impl ErrorClass {
    pub const ALL: [ErrorClass; 20] = [
        ErrorClass::Io,
        ErrorClass::Usage,
        ErrorClass::BmpBadMagic,
        ErrorClass::BmpUnsupportedCompression,
        ErrorClass::BmpUnsupportedDepth,
        ErrorClass::BmpTruncated,
        ErrorClass::BmpBadHeader,
        ErrorClass::BmpInvalidImage,
        ErrorClass::StreamBadMagic,
        ErrorClass::StreamTruncated,
        ErrorClass::StreamBoundsViolation,
        ErrorClass::StreamCoverageMismatch,
        ErrorClass::StreamMalformed,
        ErrorClass::TooLarge,
        ErrorClass::WalkOutOfBounds,
        ErrorClass::IncompleteCover,
        ErrorClass::OverlapWrite,
        ErrorClass::VerifyMismatch,
        ErrorClass::BadSpec,
        ErrorClass::Rle,
    ];

    pub fn code(self) -> i32 {
        self as i32
    }

    pub fn description(self) -> &'static str {
        match self {
            ErrorClass::Io => "file could not be read or written",
            ErrorClass::Usage => "invalid command line",
            ErrorClass::BmpBadMagic => "input is not a BMP file",
            ErrorClass::BmpUnsupportedCompression => "BMP is compressed (only uncompressed BMPs are accepted)",
            ErrorClass::BmpUnsupportedDepth => "BMP bit depth is not 1, 4, 8 or 24",
            ErrorClass::BmpTruncated => "BMP file is truncated",
            ErrorClass::BmpBadHeader => "BMP header is malformed",
            ErrorClass::BmpInvalidImage => "BMP pixel data is inconsistent with its palette",
            ErrorClass::StreamBadMagic => "input is not a CRK1 stream",
            ErrorClass::StreamTruncated => "CRK1 stream is truncated",
            ErrorClass::StreamBoundsViolation => "CRK1 record lies outside the image",
            ErrorClass::StreamCoverageMismatch => "CRK1 records do not cover the image",
            ErrorClass::StreamMalformed => "CRK1 stream is malformed",
            ErrorClass::TooLarge => "image cannot be stored in a CRK1 stream",
            ErrorClass::WalkOutOfBounds => "chain walks outside the image",
            ErrorClass::IncompleteCover => "chains leave pixels unwritten",
            ErrorClass::OverlapWrite => "chains write a pixel twice",
            ErrorClass::VerifyMismatch => "restored file differs from the original",
            ErrorClass::BadSpec => "synthetic image spec is invalid",
            ErrorClass::Rle => "run-length baseline failed",
        }
    }
}

/// Result of compressing one parsed image.
#[derive(Debug, Clone)]
pub struct Compressed {
    pub stream: Vec<u8>,
    pub chains: ChainSet,
    /// Wall-clock time spent in [`encode`].
    pub encode_time: Duration,
}

pub fn compress_image(image: &BmpImage) -> Result<Compressed> {
    let start = Instant::now();
    let chains = encode(&image.matrix);
    let encode_time = start.elapsed();
    let stream = serialize(&chains, image)?;
    Ok(Compressed {
        stream,
        chains,
        encode_time,
    })
}

/// BMP file bytes to CRK1 stream bytes.
pub fn compress(bmp_bytes: &[u8]) -> Result<Vec<u8>> {
    Ok(compress_image(&parse_bmp(bmp_bytes)?)?.stream)
}

/// CRK1 stream bytes back to the original BMP file bytes.
pub fn decompress(stream: &[u8]) -> Result<Vec<u8>> {
    let contents = deserialize(stream)?;
    let matrix = decode(&contents.chains)?;
    let header = bmp::parse_header_block(&contents.header_blob).map_err(ContainerError::BadHeaderBlob)?;
    let pixels = bmp::encode_pixel_array(&header, &matrix)?;
    let mut out = contents.header_blob;
    out.extend_from_slice(&pixels);
    Ok(out)
}

/// Number of byte positions where `a` and `b` differ; a length difference
/// counts every missing or extra byte.
pub fn bytes_differed(a: &[u8], b: &[u8]) -> u64 {
    let common = a.iter().zip(b).filter(|(x, y)| x != y).count();
    (common + a.len().abs_diff(b.len())) as u64
}
