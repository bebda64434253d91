//! Crack-code encoder and decoder.
//!
//! The encoder scans the matrix in raster order. Every pixel not yet
//! claimed by an earlier chain opens a new [`Chain`], which then grows
//! greedily: from the current pixel it steps to the first neighbour, in
//! the order left, up, right, down, that is inside the image, unvisited
//! and has the chain's value. A chain ends when no neighbour qualifies.
//! Each step costs one 2-bit [`Direction`], so the chains of an image
//! partition its pixels and decoding is a replay of the walks.

use crate::bmp::{PixelMatrix, PixelValue};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("chain {chain} leaves the {rows}x{cols} image at step {step}")]
    WalkOutOfBounds {
        chain: usize,
        step: usize,
        rows: usize,
        cols: usize,
    },
    #[error("pixel ({row}, {col}) is not covered by any chain")]
    IncompleteCover { row: usize, col: usize },
    #[error("pixel ({row}, {col}) is written by more than one chain step")]
    OverlapWrite { row: usize, col: usize },
}

/// Unit step of a chain. The discriminant is the 2-bit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Direction {
    Left = 0,
    Up = 1,
    Right = 2,
    Down = 3,
}

impl Direction {
    /// Neighbour priority used by the tracer.
    pub const PRIORITY: [Direction; 4] = [Direction::Left, Direction::Up, Direction::Right, Direction::Down];

    pub const fn code(self) -> u8 {
        self as u8
    }

    pub const fn from_code(code: u8) -> Option<Direction> {
        match code {
            0 => Some(Direction::Left),
            1 => Some(Direction::Up),
            2 => Some(Direction::Right),
            3 => Some(Direction::Down),
            _ => None,
        }
    }

    /// Low two bits of `bits` as a direction.
    pub const fn from_bits(bits: u8) -> Direction {
        match bits & 3 {
            0 => Direction::Left,
            1 => Direction::Up,
            2 => Direction::Right,
            _ => Direction::Down,
        }
    }

    /// The neighbour of `(row, col)` in this direction, if it lies inside
    /// a `rows` x `cols` grid.
    #[inline]
    pub fn step(self, row: usize, col: usize, rows: usize, cols: usize) -> Option<(usize, usize)> {
        match self {
            Direction::Left => col.checked_sub(1).map(|c| (row, c)),
            Direction::Up => row.checked_sub(1).map(|r| (r, col)),
            Direction::Right => (col + 1 < cols).then_some((row, col + 1)),
            Direction::Down => (row + 1 < rows).then_some((row + 1, col)),
        }
    }
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.code().fmt(f)
    }
}

/// One greedy walk over same-valued pixels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    pub row: usize,
    pub col: usize,
    pub value: PixelValue,
    pub codes: Vec<Direction>,
}

impl Chain {
    pub fn new(row: usize, col: usize, value: impl Into<PixelValue>, codes: Vec<Direction>) -> Self {
        Chain {
            row,
            col,
            value: value.into(),
            codes,
        }
    }

    /// Number of pixels the chain covers.
    pub fn pixel_count(&self) -> usize {
        self.codes.len() + 1
    }
}

/// All chains of one image, in discovery order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChainSet {
    pub rows: usize,
    pub cols: usize,
    pub chains: Vec<Chain>,
}

impl ChainSet {
    pub fn code_count(&self) -> usize {
        self.chains.iter().map(|c| c.codes.len()).sum()
    }

    pub fn chain_count(&self) -> usize {
        self.chains.len()
    }
}

/// Per-pixel "already claimed" flags. Bits are only ever set.
#[derive(Debug, Clone)]
pub struct VisitedMask {
    cols: usize,
    bits: Vec<bool>,
    set_count: usize,
}

impl VisitedMask {
    pub fn new(rows: usize, cols: usize) -> Self {
        VisitedMask {
            cols,
            bits: vec![false; rows * cols],
            set_count: 0,
        }
    }

    #[inline]
    pub fn is_set(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.cols + col]
    }

    /// Sets the bit and reports whether it was clear before.
    #[inline]
    pub fn mark(&mut self, row: usize, col: usize) -> bool {
        let bit = &mut self.bits[row * self.cols + col];
        let fresh = !*bit;
        *bit = true;
        self.set_count += usize::from(fresh);
        fresh
    }

    pub fn all_set(&self) -> bool {
        self.set_count == self.bits.len()
    }

    /// First clear bit in raster order.
    pub fn first_clear(&self) -> Option<(usize, usize)> {
        self.bits
            .iter()
            .position(|b| !b)
            .map(|i| (i / self.cols, i % self.cols))
    }
}

/// Extends a chain from `(row, col)`, which must already be marked.
///
/// Every pixel entered is marked in `visited`.
pub fn trace_chain(
    matrix: &PixelMatrix,
    visited: &mut VisitedMask,
    row: usize,
    col: usize,
    value: PixelValue,
) -> Vec<Direction> {
    let (rows, cols) = (matrix.rows(), matrix.cols());
    let (mut r, mut c) = (row, col);
    let mut codes = Vec::new();
    'walk: loop {
        for dir in Direction::PRIORITY {
            if let Some((nr, nc)) = dir.step(r, c, rows, cols) {
                if !visited.is_set(nr, nc) && matrix.get(nr, nc) == value {
                    visited.mark(nr, nc);
                    codes.push(dir);
                    (r, c) = (nr, nc);
                    continue 'walk;
                }
            }
        }
        return codes;
    }
}

/// Encodes a matrix as chains. The matrix is not modified.
pub fn encode(matrix: &PixelMatrix) -> ChainSet {
    let (rows, cols) = (matrix.rows(), matrix.cols());
    let mut visited = VisitedMask::new(rows, cols);
    let mut chains = Vec::new();
    for row in 0..rows {
        for col in 0..cols {
            if !visited.mark(row, col) {
                continue;
            }
            let value = matrix.get(row, col);
            let codes = trace_chain(matrix, &mut visited, row, col, value);
            chains.push(Chain {
                row,
                col,
                value,
                codes,
            });
        }
    }
    debug_assert!(visited.all_set());
    ChainSet { rows, cols, chains }
}

/// Replays every chain onto a fresh matrix.
///
/// Fails if a walk leaves the image, a pixel is written twice, or some
/// pixel is never written.
pub fn decode(set: &ChainSet) -> Result<PixelMatrix, CodecError> {
    let (rows, cols) = (set.rows, set.cols);
    let mut matrix = PixelMatrix::filled(rows, cols, PixelValue::default());
    let mut written = VisitedMask::new(rows, cols);
    let out_of_bounds = |chain, step| CodecError::WalkOutOfBounds { chain, step, rows, cols };

    for (index, chain) in set.chains.iter().enumerate() {
        if chain.row >= rows || chain.col >= cols {
            return Err(out_of_bounds(index, 0));
        }
        let (mut r, mut c) = (chain.row, chain.col);
        let mut put = |r: usize, c: usize| {
            if !written.mark(r, c) {
                return Err(CodecError::OverlapWrite { row: r, col: c });
            }
            matrix.set(r, c, chain.value);
            Ok(())
        };
        put(r, c)?;
        for (step, dir) in chain.codes.iter().enumerate() {
            (r, c) = dir.step(r, c, rows, cols).ok_or_else(|| out_of_bounds(index, step + 1))?;
            put(r, c)?;
        }
    }
    if let Some((row, col)) = written.first_clear() {
        return Err(CodecError::IncompleteCover { row, col });
    }
    Ok(matrix)
}
