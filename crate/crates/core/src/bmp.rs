//! Uncompressed Windows BMP (BITMAPINFOHEADER) reading and writing.
//!
//! Pixels are exposed as a top-down [`PixelMatrix`]; the on-disk
//! bottom-up scanline order and 32-bit row padding are handled here and
//! nowhere else. 1- and 4-bit rows are unpacked to one palette index per
//! cell, most significant bits first.

use thiserror::Error;

/// `"BM"` read as a little-endian `u16`.
pub const BMP_MAGIC: u16 = 19778;
pub const FILE_HEADER_LEN: usize = 14;
pub const INFO_HEADER_LEN: usize = 40;
/// File header plus info header.
pub const HEADERS_LEN: usize = FILE_HEADER_LEN + INFO_HEADER_LEN;
pub const SUPPORTED_DEPTHS: [u16; 4] = [1, 4, 8, 24];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BmpError {
    #[error("not a BMP file (magic is not \"BM\")")]
    BadMagic,
    #[error("unsupported BMP compression type {0} (only uncompressed input is accepted)")]
    UnsupportedCompression(u32),
    #[error("unsupported bit depth {0} (expected 1, 4, 8 or 24)")]
    UnsupportedDepth(u16),
    #[error("truncated BMP: need {needed} bytes, have {available}")]
    Truncated { needed: u64, available: u64 },
    #[error("bad BMP header: {0}")]
    BadHeader(String),
    #[error("pixel ({row}, {col}) uses index {index} but the palette has {palette_len} entries")]
    IndexOutOfPalette {
        row: usize,
        col: usize,
        index: u32,
        palette_len: usize,
    },
    #[error("invalid image: {0}")]
    InvalidImage(String),
}

/// A pixel value: a palette index for 1/4/8-bit images, or
/// `red << 16 | green << 8 | blue` for 24-bit images.
///
/// Two pixels are "the same grey value" iff their `PixelValue`s are equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PixelValue(pub u32);

impl PixelValue {
    pub const fn from_rgb(red: u8, green: u8, blue: u8) -> Self {
        PixelValue((red as u32) << 16 | (green as u32) << 8 | blue as u32)
    }

    /// `(red, green, blue)` of a 24-bit value.
    pub const fn rgb(self) -> (u8, u8, u8) {
        ((self.0 >> 16) as u8, (self.0 >> 8) as u8, self.0 as u8)
    }
}

impl From<u32> for PixelValue {
    fn from(v: u32) -> Self {
        PixelValue(v)
    }
}

impl std::fmt::Display for PixelValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Row-major grid of pixel values; row 0 is the visually top row.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PixelMatrix {
    rows: usize,
    cols: usize,
    values: Vec<PixelValue>,
}

impl PixelMatrix {
    /// Panics if `values.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, values: Vec<PixelValue>) -> Self {
        assert_eq!(
            values.len(),
            rows * cols,
            "matrix of {rows}x{cols} needs {} values",
            rows * cols
        );
        PixelMatrix { rows, cols, values }
    }

    pub fn filled(rows: usize, cols: usize, value: PixelValue) -> Self {
        PixelMatrix {
            rows,
            cols,
            values: vec![value; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> PixelValue) -> Self {
        let mut values = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                values.push(f(r, c));
            }
        }
        PixelMatrix { rows, cols, values }
    }

    /// Builds a matrix from nested rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[u32]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut values = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), cols, "ragged matrix rows");
            values.extend(row.iter().copied().map(PixelValue));
        }
        PixelMatrix {
            rows: rows.len(),
            cols,
            values,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> PixelValue {
        self.values[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: PixelValue) {
        self.values[row * self.cols + col] = value;
    }

    pub fn values(&self) -> &[PixelValue] {
        &self.values
    }

    pub fn row(&self, row: usize) -> &[PixelValue] {
        &self.values[row * self.cols..(row + 1) * self.cols]
    }

    /// Reverses the row order (top-down <-> bottom-up).
    pub fn flip_rows(&mut self) {
        if self.cols == 0 {
            return;
        }
        let rows = self.rows;
        for r in 0..rows / 2 {
            let (head, tail) = self.values.split_at_mut((rows - 1 - r) * self.cols);
            head[r * self.cols..(r + 1) * self.cols].swap_with_slice(&mut tail[..self.cols]);
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|v| v.0).collect())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BmpFileHeader {
    pub file_type: u16,
    pub file_size: u32,
    pub reserved1: u16,
    pub reserved2: u16,
    pub pixel_data_offset: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BmpInfoHeader {
    pub header_size: u32,
    pub width: i32,
    pub height: i32,
    pub planes: u16,
    pub bits_per_pixel: u16,
    pub compression: u32,
    pub image_data_size: u32,
    pub x_pixels_per_meter: i32,
    pub y_pixels_per_meter: i32,
    pub colors_used: u32,
    pub colors_important: u32,
}

impl BmpInfoHeader {
    pub fn rows(&self) -> usize {
        self.height as usize
    }

    pub fn cols(&self) -> usize {
        self.width as usize
    }

    pub fn is_indexed(&self) -> bool {
        self.bits_per_pixel != 24
    }

    /// Bytes per stored scanline, including padding.
    pub fn stride(&self) -> usize {
        row_stride(self.cols(), self.bits_per_pixel)
    }
}

/// One RGBQUAD palette entry, in file order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RgbQuad {
    pub blue: u8,
    pub green: u8,
    pub red: u8,
    pub reserved: u8,
}

impl RgbQuad {
    pub const fn grey(level: u8) -> Self {
        RgbQuad {
            blue: level,
            green: level,
            red: level,
            reserved: 0,
        }
    }
}

/// Everything in a BMP file before the pixel array, kept verbatim so it
/// can be written back byte for byte.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeaderBlock {
    pub file_header: BmpFileHeader,
    pub info_header: BmpInfoHeader,
    /// Empty for 24-bit images.
    pub palette: Vec<RgbQuad>,
    /// Bytes between the end of the palette and `pixel_data_offset`.
    pub trailing_gap: Vec<u8>,
}

impl HeaderBlock {
    pub fn rows(&self) -> usize {
        self.info_header.rows()
    }

    pub fn cols(&self) -> usize {
        self.info_header.cols()
    }

    pub fn bits_per_pixel(&self) -> u16 {
        self.info_header.bits_per_pixel
    }

    /// Size in bytes of the pixel array these headers describe.
    pub fn pixel_array_len(&self) -> usize {
        self.info_header.stride() * self.rows()
    }

    /// Serializes the headers, palette and gap exactly as stored.
    pub fn to_bytes(&self) -> Vec<u8> {
        let fh = &self.file_header;
        let ih = &self.info_header;
        let mut out = Vec::with_capacity(HEADERS_LEN + self.palette.len() * 4 + self.trailing_gap.len());
        out.extend_from_slice(&fh.file_type.to_le_bytes());
        out.extend_from_slice(&fh.file_size.to_le_bytes());
        out.extend_from_slice(&fh.reserved1.to_le_bytes());
        out.extend_from_slice(&fh.reserved2.to_le_bytes());
        out.extend_from_slice(&fh.pixel_data_offset.to_le_bytes());
        out.extend_from_slice(&ih.header_size.to_le_bytes());
        out.extend_from_slice(&ih.width.to_le_bytes());
        out.extend_from_slice(&ih.height.to_le_bytes());
        out.extend_from_slice(&ih.planes.to_le_bytes());
        out.extend_from_slice(&ih.bits_per_pixel.to_le_bytes());
        out.extend_from_slice(&ih.compression.to_le_bytes());
        out.extend_from_slice(&ih.image_data_size.to_le_bytes());
        out.extend_from_slice(&ih.x_pixels_per_meter.to_le_bytes());
        out.extend_from_slice(&ih.y_pixels_per_meter.to_le_bytes());
        out.extend_from_slice(&ih.colors_used.to_le_bytes());
        out.extend_from_slice(&ih.colors_important.to_le_bytes());
        for q in &self.palette {
            out.extend_from_slice(&[q.blue, q.green, q.red, q.reserved]);
        }
        out.extend_from_slice(&self.trailing_gap);
        out
    }
}

/// A parsed BMP file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BmpImage {
    pub header: HeaderBlock,
    pub matrix: PixelMatrix,
    /// Bytes after the pixel array, if the file has any.
    pub trailer: Vec<u8>,
}

impl BmpImage {
    /// Builds an image with freshly computed, self-consistent headers.
    ///
    /// `palette` must be empty for 24-bit images and hold between 1 and
    /// `2^bits_per_pixel` entries otherwise.
    pub fn new(bits_per_pixel: u16, palette: Vec<RgbQuad>, matrix: PixelMatrix) -> Result<Self, BmpError> {
        if !SUPPORTED_DEPTHS.contains(&bits_per_pixel) {
            return Err(BmpError::UnsupportedDepth(bits_per_pixel));
        }
        if matrix.is_empty() {
            return Err(BmpError::InvalidImage("image has no pixels".into()));
        }
        let (Ok(width), Ok(height)) = (i32::try_from(matrix.cols()), i32::try_from(matrix.rows())) else {
            return Err(BmpError::InvalidImage("dimensions exceed i32".into()));
        };
        let full = if bits_per_pixel == 24 { 0 } else { 1usize << bits_per_pixel };
        if bits_per_pixel == 24 && !palette.is_empty() {
            return Err(BmpError::InvalidImage("24-bit images carry no palette".into()));
        }
        if bits_per_pixel != 24 && (palette.is_empty() || palette.len() > full) {
            return Err(BmpError::InvalidImage(format!(
                "palette of {} entries for a {bits_per_pixel}-bit image",
                palette.len()
            )));
        }
        let colors_used = if palette.len() == full { 0 } else { palette.len() as u32 };
        let offset = HEADERS_LEN + palette.len() * 4;
        let image_data_size = row_stride(matrix.cols(), bits_per_pixel) * matrix.rows();
        let file_size = offset + image_data_size;
        let (Ok(file_size), Ok(image_data_size)) = (u32::try_from(file_size), u32::try_from(image_data_size)) else {
            return Err(BmpError::InvalidImage("image too large for a BMP file".into()));
        };
        let header = HeaderBlock {
            file_header: BmpFileHeader {
                file_type: BMP_MAGIC,
                file_size,
                reserved1: 0,
                reserved2: 0,
                pixel_data_offset: offset as u32,
            },
            info_header: BmpInfoHeader {
                header_size: INFO_HEADER_LEN as u32,
                width,
                height,
                planes: 1,
                bits_per_pixel,
                compression: 0,
                image_data_size,
                x_pixels_per_meter: 0,
                y_pixels_per_meter: 0,
                colors_used,
                colors_important: 0,
            },
            palette,
            trailing_gap: Vec::new(),
        };
        check_matrix(&header, &matrix)?;
        Ok(BmpImage {
            header,
            matrix,
            trailer: Vec::new(),
        })
    }

    pub fn file_header(&self) -> &BmpFileHeader {
        &self.header.file_header
    }

    pub fn info_header(&self) -> &BmpInfoHeader {
        &self.header.info_header
    }

    pub fn palette(&self) -> &[RgbQuad] {
        &self.header.palette
    }

    pub fn bits_per_pixel(&self) -> u16 {
        self.header.bits_per_pixel()
    }
}

/// Top-down pixel matrix of a parsed image.
pub fn matrix_of(image: &BmpImage) -> &PixelMatrix {
    &image.matrix
}

/// Stored scanline length: `ceil(width * bpp / 32) * 4`.
pub fn row_stride(width: usize, bits_per_pixel: u16) -> usize {
    (width * bits_per_pixel as usize).div_ceil(32) * 4
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn u16(&mut self) -> u16 {
        let v = u16::from_le_bytes([self.bytes[self.pos], self.bytes[self.pos + 1]]);
        self.pos += 2;
        v
    }

    fn u32(&mut self) -> u32 {
        let b = &self.bytes[self.pos..self.pos + 4];
        self.pos += 4;
        u32::from_le_bytes([b[0], b[1], b[2], b[3]])
    }

    fn i32(&mut self) -> i32 {
        self.u32() as i32
    }
}

fn need(needed: usize, available: usize) -> Result<(), BmpError> {
    if available < needed {
        Err(BmpError::Truncated {
            needed: needed as u64,
            available: available as u64,
        })
    } else {
        Ok(())
    }
}

/// Parses the headers, palette and gap: everything before the pixel array.
///
/// `bytes` may be a whole file or just its first `pixel_data_offset` bytes.
pub fn parse_header_block(bytes: &[u8]) -> Result<HeaderBlock, BmpError> {
    need(2, bytes.len())?;
    if bytes[..2] != *b"BM" {
        return Err(BmpError::BadMagic);
    }
    need(HEADERS_LEN, bytes.len())?;
    let mut r = Reader { bytes, pos: 0 };
    let file_header = BmpFileHeader {
        file_type: r.u16(),
        file_size: r.u32(),
        reserved1: r.u16(),
        reserved2: r.u16(),
        pixel_data_offset: r.u32(),
    };
    let info_header = BmpInfoHeader {
        header_size: r.u32(),
        width: r.i32(),
        height: r.i32(),
        planes: r.u16(),
        bits_per_pixel: r.u16(),
        compression: r.u32(),
        image_data_size: r.u32(),
        x_pixels_per_meter: r.i32(),
        y_pixels_per_meter: r.i32(),
        colors_used: r.u32(),
        colors_important: r.u32(),
    };

    if file_header.reserved1 != 0 || file_header.reserved2 != 0 {
        return Err(BmpError::BadHeader("reserved fields must be zero".into()));
    }
    if info_header.header_size != INFO_HEADER_LEN as u32 {
        return Err(BmpError::BadHeader(format!(
            "info header size {} (only the 40-byte header is supported)",
            info_header.header_size
        )));
    }
    if info_header.planes != 1 {
        return Err(BmpError::BadHeader(format!("planes = {}", info_header.planes)));
    }
    if info_header.compression != 0 {
        return Err(BmpError::UnsupportedCompression(info_header.compression));
    }
    if !SUPPORTED_DEPTHS.contains(&info_header.bits_per_pixel) {
        return Err(BmpError::UnsupportedDepth(info_header.bits_per_pixel));
    }
    if info_header.width <= 0 || info_header.height <= 0 {
        return Err(BmpError::BadHeader(format!(
            "dimensions {}x{} must be positive",
            info_header.width, info_header.height
        )));
    }
    let offset = file_header.pixel_data_offset as usize;
    if offset < HEADERS_LEN {
        return Err(BmpError::BadHeader(format!("pixel data offset {offset} inside the headers")));
    }
    need(offset, bytes.len())?;

    let palette_len = if info_header.bits_per_pixel == 24 {
        0
    } else {
        let full = 1usize << info_header.bits_per_pixel;
        match info_header.colors_used as usize {
            0 => full,
            n if n > full => {
                return Err(BmpError::BadHeader(format!(
                    "{n} colors used exceeds {full} for {}-bit images",
                    info_header.bits_per_pixel
                )))
            }
            n => n,
        }
    };
    let palette_end = HEADERS_LEN + palette_len * 4;
    if palette_end > offset {
        return Err(BmpError::BadHeader(format!(
            "palette of {palette_len} entries overlaps pixel data at offset {offset}"
        )));
    }
    let palette = bytes[HEADERS_LEN..palette_end]
        .chunks_exact(4)
        .map(|q| RgbQuad {
            blue: q[0],
            green: q[1],
            red: q[2],
            reserved: q[3],
        })
        .collect();

    Ok(HeaderBlock {
        file_header,
        info_header,
        palette,
        trailing_gap: bytes[palette_end..offset].to_vec(),
    })
}

/// Parses a complete uncompressed BMP file.
pub fn parse_bmp(bytes: &[u8]) -> Result<BmpImage, BmpError> {
    let header = parse_header_block(bytes)?;
    let offset = header.file_header.pixel_data_offset as usize;
    let stride = header.info_header.stride();
    let array_len = (stride as u64) * (header.rows() as u64);
    let available = (bytes.len() - offset) as u64;
    if array_len > available {
        return Err(BmpError::Truncated {
            needed: offset as u64 + array_len,
            available: bytes.len() as u64,
        });
    }
    let end = offset + array_len as usize;
    let matrix = decode_pixel_array(&header, &bytes[offset..end])?;
    Ok(BmpImage {
        header,
        matrix,
        trailer: bytes[end..].to_vec(),
    })
}

/// Unpacks a bottom-up padded pixel array into a top-down matrix.
pub fn decode_pixel_array(header: &HeaderBlock, data: &[u8]) -> Result<PixelMatrix, BmpError> {
    let rows = header.rows();
    let cols = header.cols();
    let bpp = header.bits_per_pixel();
    let stride = header.info_header.stride();
    need(stride * rows, data.len())?;
    let palette_len = header.palette.len();

    let mut values = Vec::with_capacity(rows * cols);
    for row in 0..rows {
        let line = &data[(rows - 1 - row) * stride..][..stride];
        for col in 0..cols {
            let v = match bpp {
                1 => u32::from(line[col / 8] >> (7 - col % 8) & 1),
                4 => u32::from(line[col / 2] >> if col % 2 == 0 { 4 } else { 0 } & 0x0f),
                8 => u32::from(line[col]),
                _ => {
                    let px = &line[col * 3..col * 3 + 3];
                    PixelValue::from_rgb(px[2], px[1], px[0]).0
                }
            };
            if bpp != 24 && v as usize >= palette_len {
                return Err(BmpError::IndexOutOfPalette {
                    row,
                    col,
                    index: v,
                    palette_len,
                });
            }
            values.push(PixelValue(v));
        }
    }
    Ok(PixelMatrix::from_vec(rows, cols, values))
}

fn check_matrix(header: &HeaderBlock, matrix: &PixelMatrix) -> Result<(), BmpError> {
    if matrix.rows() != header.rows() || matrix.cols() != header.cols() {
        return Err(BmpError::InvalidImage(format!(
            "matrix is {}x{} but the header says {}x{}",
            matrix.rows(),
            matrix.cols(),
            header.rows(),
            header.cols()
        )));
    }
    let palette_len = header.palette.len();
    for (i, v) in matrix.values().iter().enumerate() {
        let ok = if header.bits_per_pixel() == 24 {
            v.0 <= 0x00ff_ffff
        } else {
            (v.0 as usize) < palette_len
        };
        if !ok {
            return Err(BmpError::InvalidImage(format!(
                "pixel ({}, {}) has value {} outside the {}-bit range of this image",
                i / matrix.cols(),
                i % matrix.cols(),
                v.0,
                header.bits_per_pixel()
            )));
        }
    }
    Ok(())
}

/// Packs a top-down matrix into bottom-up, zero-padded scanlines.
pub fn encode_pixel_array(header: &HeaderBlock, matrix: &PixelMatrix) -> Result<Vec<u8>, BmpError> {
    check_matrix(header, matrix)?;
    let rows = matrix.rows();
    let bpp = header.bits_per_pixel();
    let stride = header.info_header.stride();
    let mut out = vec![0u8; stride * rows];
    for row in 0..rows {
        let line = &mut out[(rows - 1 - row) * stride..][..stride];
        for (col, v) in matrix.row(row).iter().enumerate() {
            match bpp {
                1 => line[col / 8] |= (v.0 as u8 & 1) << (7 - col % 8),
                4 => line[col / 2] |= (v.0 as u8 & 0x0f) << if col % 2 == 0 { 4 } else { 0 },
                8 => line[col] = v.0 as u8,
                _ => {
                    let (r, g, b) = v.rgb();
                    line[col * 3..col * 3 + 3].copy_from_slice(&[b, g, r]);
                }
            }
        }
    }
    Ok(out)
}

/// Writes the image: stored headers verbatim, then the pixel array, then
/// any trailer the source file carried.
pub fn write_bmp(image: &BmpImage) -> Result<Vec<u8>, BmpError> {
    let pixels = encode_pixel_array(&image.header, &image.matrix)?;
    let mut out = image.header.to_bytes();
    out.extend_from_slice(&pixels);
    out.extend_from_slice(&image.trailer);
    Ok(out)
}
