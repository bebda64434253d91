//! C ABI for the crackcode codec.
//!
//! Every fallible call returns a [`CrkStatus`]; `CRK_STATUS_OK` is zero and
//! the remaining values equal the `crackcode` CLI exit codes. Results are
//! handed out through opaque handles ([`CrkBuffer`], [`CrkImage`]) that the
//! caller releases with the matching `*_free` function. After a failure,
//! [`crk_last_error_message`] describes it in detail.

use crackcode::bmp::{self, BmpImage};
use crackcode::{container, Error, ErrorClass};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrkStatus {
    Ok = 0,
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
    /// A required pointer argument was NULL.
    NullArgument = 100,
    /// Row or column outside the image.
    OutOfRange = 101,
    /// Internal panic; the call had no effect.
    Panic = 102,
}

impl From<ErrorClass> for CrkStatus {
    fn from(class: ErrorClass) -> Self {
        match class {
            ErrorClass::Io => CrkStatus::Io,
            ErrorClass::Usage => CrkStatus::Usage,
            ErrorClass::BmpBadMagic => CrkStatus::BmpBadMagic,
            ErrorClass::BmpUnsupportedCompression => CrkStatus::BmpUnsupportedCompression,
            ErrorClass::BmpUnsupportedDepth => CrkStatus::BmpUnsupportedDepth,
            ErrorClass::BmpTruncated => CrkStatus::BmpTruncated,
            ErrorClass::BmpBadHeader => CrkStatus::BmpBadHeader,
            ErrorClass::BmpInvalidImage => CrkStatus::BmpInvalidImage,
            ErrorClass::StreamBadMagic => CrkStatus::StreamBadMagic,
            ErrorClass::StreamTruncated => CrkStatus::StreamTruncated,
            ErrorClass::StreamBoundsViolation => CrkStatus::StreamBoundsViolation,
            ErrorClass::StreamCoverageMismatch => CrkStatus::StreamCoverageMismatch,
            ErrorClass::StreamMalformed => CrkStatus::StreamMalformed,
            ErrorClass::TooLarge => CrkStatus::TooLarge,
            ErrorClass::WalkOutOfBounds => CrkStatus::WalkOutOfBounds,
            ErrorClass::IncompleteCover => CrkStatus::IncompleteCover,
            ErrorClass::OverlapWrite => CrkStatus::OverlapWrite,
            ErrorClass::VerifyMismatch => CrkStatus::VerifyMismatch,
            ErrorClass::BadSpec => CrkStatus::BadSpec,
            ErrorClass::Rle => CrkStatus::Rle,
        }
    }
}

/// Owned byte buffer returned by the library.
pub struct CrkBuffer {
    data: Vec<u8>,
}

/// A parsed BMP image.
pub struct CrkImage {
    image: BmpImage,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn fail(status: CrkStatus, msg: impl Into<String>) -> CrkStatus {
    set_last_error(msg);
    status
}

fn fail_with(e: Error) -> CrkStatus {
    fail(e.class().into(), e.to_string())
}

/// Runs `f`, converting a panic into `CRK_STATUS_PANIC`.
fn guarded(f: impl FnOnce() -> CrkStatus) -> CrkStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(CrkStatus::Panic, "internal panic"))
}

unsafe fn input<'a>(data: *const u8, len: usize) -> Option<&'a [u8]> {
    if len == 0 {
        return Some(&[]);
    }
    if data.is_null() {
        return None;
    }
    // SAFETY: caller guarantees `data` points to `len` readable bytes.
    Some(std::slice::from_raw_parts(data, len))
}

unsafe fn buffer_call(
    data: *const u8,
    len: usize,
    out: *mut *mut CrkBuffer,
    f: impl FnOnce(&[u8]) -> Result<Vec<u8>, Error>,
) -> CrkStatus {
    guarded(|| {
        if out.is_null() {
            return fail(CrkStatus::NullArgument, "output pointer is NULL");
        }
        *out = ptr::null_mut();
        let Some(bytes) = input(data, len) else {
            return fail(CrkStatus::NullArgument, "input pointer is NULL");
        };
        match f(bytes) {
            Ok(data) => {
                *out = Box::into_raw(Box::new(CrkBuffer { data }));
                CrkStatus::Ok
            }
            Err(e) => fail_with(e),
        }
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn crk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Short static description of a status code.
#[no_mangle]
pub extern "C" fn crk_status_message(status: i32) -> *const c_char {
    let text: &'static CStr = match status {
        0 => c"ok",
        100 => c"required pointer argument is NULL",
        101 => c"row or column outside the image",
        102 => c"internal panic",
        _ => match ErrorClass::ALL.iter().find(|c| c.code() == status) {
            Some(class) => return class_message(*class).as_ptr(),
            None => c"unknown status",
        },
    };
    text.as_ptr()
}

fn class_message(class: ErrorClass) -> &'static CStr {
    match class {
        ErrorClass::Io => c"file could not be read or written",
        ErrorClass::Usage => c"invalid command line",
        ErrorClass::BmpBadMagic => c"input is not a BMP file",
        ErrorClass::BmpUnsupportedCompression => c"BMP is compressed (only uncompressed BMPs are accepted)",
        ErrorClass::BmpUnsupportedDepth => c"BMP bit depth is not 1, 4, 8 or 24",
        ErrorClass::BmpTruncated => c"BMP file is truncated",
        ErrorClass::BmpBadHeader => c"BMP header is malformed",
        ErrorClass::BmpInvalidImage => c"BMP pixel data is inconsistent with its palette",
        ErrorClass::StreamBadMagic => c"input is not a CRK1 stream",
        ErrorClass::StreamTruncated => c"CRK1 stream is truncated",
        ErrorClass::StreamBoundsViolation => c"CRK1 record lies outside the image",
        ErrorClass::StreamCoverageMismatch => c"CRK1 records do not cover the image",
        ErrorClass::StreamMalformed => c"CRK1 stream is malformed",
        ErrorClass::TooLarge => c"image cannot be stored in a CRK1 stream",
        ErrorClass::WalkOutOfBounds => c"chain walks outside the image",
        ErrorClass::IncompleteCover => c"chains leave pixels unwritten",
        ErrorClass::OverlapWrite => c"chains write a pixel twice",
        ErrorClass::VerifyMismatch => c"restored file differs from the original",
        ErrorClass::BadSpec => c"synthetic image spec is invalid",
        ErrorClass::Rle => c"run-length baseline failed",
    }
}

/// Detail message of the last failed call on this thread. Valid until the
/// next failing call on the same thread. Empty if nothing failed yet.
#[no_mangle]
pub extern "C" fn crk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Compresses a BMP file image into a CRK1 stream.
///
/// # Safety
/// `bmp` must point to `len` readable bytes (or be NULL with `len == 0`);
/// `out` must be a valid pointer to write the result handle to.
#[no_mangle]
pub unsafe extern "C" fn crk_compress(bmp: *const u8, len: usize, out: *mut *mut CrkBuffer) -> CrkStatus {
    buffer_call(bmp, len, out, crackcode::compress)
}

/// Restores the original BMP file from a CRK1 stream.
///
/// # Safety
/// Same contract as [`crk_compress`].
#[no_mangle]
pub unsafe extern "C" fn crk_decompress(stream: *const u8, len: usize, out: *mut *mut CrkBuffer) -> CrkStatus {
    buffer_call(stream, len, out, crackcode::decompress)
}

/// Chain listing (`row col value codes... -1` per line) of a BMP file or a
/// CRK1 stream, as UTF-8 text without a terminating NUL.
///
/// # Safety
/// Same contract as [`crk_compress`].
#[no_mangle]
pub unsafe extern "C" fn crk_dump_text(data: *const u8, len: usize, out: *mut *mut CrkBuffer) -> CrkStatus {
    buffer_call(data, len, out, |bytes| {
        let text = if bytes.starts_with(&container::MAGIC) {
            let contents = container::deserialize(bytes)?;
            let header = bmp::parse_header_block(&contents.header_blob).map_err(container::ContainerError::BadHeaderBlob)?;
            container::dump_text(&contents.chains, header.bits_per_pixel())
        } else {
            let image = bmp::parse_bmp(bytes)?;
            container::dump_text(&crackcode::encode(&image.matrix), image.bits_per_pixel())
        };
        Ok(text.into_bytes())
    })
}

/// # Safety
/// `buf` must be NULL or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn crk_buffer_data(buf: *const CrkBuffer) -> *const u8 {
    buf.as_ref().map_or(ptr::null(), |b| b.data.as_ptr())
}

/// # Safety
/// `buf` must be NULL or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn crk_buffer_len(buf: *const CrkBuffer) -> usize {
    buf.as_ref().map_or(0, |b| b.data.len())
}

/// # Safety
/// `buf` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn crk_buffer_free(buf: *mut CrkBuffer) {
    if !buf.is_null() {
        drop(Box::from_raw(buf));
    }
}

/// Parses an uncompressed BMP file.
///
/// # Safety
/// Same contract as [`crk_compress`].
#[no_mangle]
pub unsafe extern "C" fn crk_image_parse(bmp: *const u8, len: usize, out: *mut *mut CrkImage) -> CrkStatus {
    guarded(|| {
        if out.is_null() {
            return fail(CrkStatus::NullArgument, "output pointer is NULL");
        }
        *out = ptr::null_mut();
        let Some(bytes) = input(bmp, len) else {
            return fail(CrkStatus::NullArgument, "input pointer is NULL");
        };
        match bmp::parse_bmp(bytes) {
            Ok(image) => {
                *out = Box::into_raw(Box::new(CrkImage { image }));
                CrkStatus::Ok
            }
            Err(e) => fail_with(e.into()),
        }
    })
}

/// Width in pixels, or 0 for NULL.
///
/// # Safety
/// `img` must be NULL or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn crk_image_width(img: *const CrkImage) -> u32 {
    img.as_ref().map_or(0, |i| i.image.matrix.cols() as u32)
}

/// Height in pixels, or 0 for NULL.
///
/// # Safety
/// `img` must be NULL or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn crk_image_height(img: *const CrkImage) -> u32 {
    img.as_ref().map_or(0, |i| i.image.matrix.rows() as u32)
}

/// 1, 4, 8 or 24; 0 for NULL.
///
/// # Safety
/// `img` must be NULL or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn crk_image_bits_per_pixel(img: *const CrkImage) -> u32 {
    img.as_ref().map_or(0, |i| u32::from(i.image.bits_per_pixel()))
}

/// Pixel value at (`row`, `col`), row 0 at the top: a palette index, or
/// `0xRRGGBB` for 24-bit images.
///
/// # Safety
/// `img` must be a live handle and `value` a valid pointer, or NULL.
#[no_mangle]
pub unsafe extern "C" fn crk_image_pixel(img: *const CrkImage, row: u32, col: u32, value: *mut u32) -> CrkStatus {
    let (Some(img), false) = (img.as_ref(), value.is_null()) else {
        return fail(CrkStatus::NullArgument, "image or value pointer is NULL");
    };
    let m = &img.image.matrix;
    let (row, col) = (row as usize, col as usize);
    if row >= m.rows() || col >= m.cols() {
        return fail(
            CrkStatus::OutOfRange,
            format!("({row}, {col}) outside {}x{} image", m.rows(), m.cols()),
        );
    }
    *value = m.get(row, col).0;
    CrkStatus::Ok
}

/// Number of chains the encoder produces for this image.
///
/// # Safety
/// `img` must be NULL or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn crk_image_chain_count(img: *const CrkImage) -> usize {
    img.as_ref()
        .map_or(0, |i| crackcode::encode(&i.image.matrix).chain_count())
}

/// # Safety
/// `img` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn crk_image_free(img: *mut CrkImage) {
    if !img.is_null() {
        drop(Box::from_raw(img));
    }
}
