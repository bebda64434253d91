//! Per-row run-length coding of 8-bit images, used only as a comparison
//! baseline. Each run is a count byte (1..=255) followed by the value.
//! Runs never cross row boundaries.

use crate::bmp::{PixelMatrix, PixelValue};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RleError {
    #[error("run-length baseline supports 8-bit images only, got {0}-bit")]
    UnsupportedDepth(u16),
    #[error("corrupt run-length data: {0}")]
    Corrupt(&'static str),
}

pub fn rle_encode_row(row: &[u8], out: &mut Vec<u8>) {
    let mut i = 0;
    while i < row.len() {
        let value = row[i];
        let run = row[i..].iter().take(255).take_while(|&&v| v == value).count();
        out.push(run as u8);
        out.push(value);
        i += run;
    }
}

pub fn rle_baseline_encode(matrix: &PixelMatrix, bits_per_pixel: u16) -> Result<Vec<u8>, RleError> {
    if bits_per_pixel != 8 {
        return Err(RleError::UnsupportedDepth(bits_per_pixel));
    }
    let mut out = Vec::new();
    let mut row_bytes = Vec::with_capacity(matrix.cols());
    for r in 0..matrix.rows() {
        row_bytes.clear();
        for v in matrix.row(r) {
            let byte = u8::try_from(v.0).map_err(|_| RleError::UnsupportedDepth(bits_per_pixel))?;
            row_bytes.push(byte);
        }
        rle_encode_row(&row_bytes, &mut out);
    }
    Ok(out)
}

pub fn rle_baseline_decode(bytes: &[u8], rows: usize, cols: usize) -> Result<PixelMatrix, RleError> {
    let mut values = Vec::with_capacity(rows * cols);
    let mut pairs = bytes.chunks(2);
    for _ in 0..rows {
        let mut filled = 0;
        while filled < cols {
            let pair = pairs.next().ok_or(RleError::Corrupt("data ends mid-image"))?;
            let &[count, value] = pair else {
                return Err(RleError::Corrupt("odd byte count"));
            };
            if count == 0 || filled + count as usize > cols {
                return Err(RleError::Corrupt("run length does not fit the row"));
            }
            values.extend(std::iter::repeat_n(PixelValue(u32::from(value)), count as usize));
            filled += count as usize;
        }
    }
    if pairs.next().is_some() {
        return Err(RleError::Corrupt("data continues past the image"));
    }
    Ok(PixelMatrix::from_vec(rows, cols, values))
}
