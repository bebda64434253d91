//! Test oracles. Nothing here calls into the code paths it is used to
//! check: BMP fixtures are assembled byte by byte, the reference tracer
//! is a literal recursion over plain vectors, and packing is checked
//! against bit strings.
#![allow(dead_code)]

use crackcode::synthetic::{GeneratorKind, SyntheticSpec};

/// Builds a BMP file by hand. `pixel(row, col)` is in top-down
/// orientation; the value is a palette index, or `0xRRGGBB` at 24 bpp.
pub fn handmade_bmp(bpp: u16, width: usize, height: usize, colors_used: u32, pixel: impl Fn(usize, usize) -> u32) -> Vec<u8> {
    let palette_len = match (bpp, colors_used) {
        (24, _) => 0,
        (_, 0) => 1usize << bpp,
        (_, n) => n as usize,
    };
    let offset = 54 + palette_len * 4;
    let row_bits = width * bpp as usize;
    let stride = (row_bits + 31) / 32 * 4;
    let mut f = Vec::new();
    f.extend_from_slice(b"BM");
    f.extend_from_slice(&((offset + stride * height) as u32).to_le_bytes());
    f.extend_from_slice(&[0, 0, 0, 0]);
    f.extend_from_slice(&(offset as u32).to_le_bytes());
    f.extend_from_slice(&40u32.to_le_bytes());
    f.extend_from_slice(&(width as i32).to_le_bytes());
    f.extend_from_slice(&(height as i32).to_le_bytes());
    f.extend_from_slice(&1u16.to_le_bytes());
    f.extend_from_slice(&bpp.to_le_bytes());
    f.extend_from_slice(&0u32.to_le_bytes());
    f.extend_from_slice(&((stride * height) as u32).to_le_bytes());
    f.extend_from_slice(&2835i32.to_le_bytes());
    f.extend_from_slice(&2835i32.to_le_bytes());
    f.extend_from_slice(&colors_used.to_le_bytes());
    f.extend_from_slice(&0u32.to_le_bytes());
    for i in 0..palette_len {
        let l = (i * 255 / palette_len.max(2).saturating_sub(1).max(1)) as u8;
        f.extend_from_slice(&[l, l.wrapping_add(1), l.wrapping_add(2), 0]);
    }
    assert_eq!(f.len(), offset);
    for file_row in 0..height {
        let row = height - 1 - file_row;
        // Build the scanline as a bit string, then pad to the stride.
        let mut bits = String::new();
        for col in 0..width {
            let v = pixel(row, col);
            match bpp {
                24 => {
                    let (r, g, b) = ((v >> 16) & 0xff, (v >> 8) & 0xff, v & 0xff);
                    bits.push_str(&format!("{b:08b}{g:08b}{r:08b}"));
                }
                _ => bits.push_str(&format!("{:0width$b}", v, width = bpp as usize)),
            }
        }
        while bits.len() < stride * 8 {
            bits.push('0');
        }
        for chunk in bits.as_bytes().chunks(8) {
            f.push(u8::from_str_radix(std::str::from_utf8(chunk).unwrap(), 2).unwrap());
        }
    }
    f
}

/// Golden fixtures covering every depth and every padding residue.
pub fn golden_fixtures() -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let pattern = |modulus: u32| move |r: usize, c: usize| ((r * 7 + c * 3 + (r / 2) * c) as u32) % modulus;
    // 8-bit widths 1..=4 give 3, 2, 1, 0 padding bytes.
    for w in 1..=4 {
        out.push((format!("d8_w{w}"), handmade_bmp(8, w, 3, 0, pattern(256))));
    }
    // 24-bit widths 1..=4 give 1, 2, 3, 0 padding bytes.
    for w in 1..=4 {
        out.push((
            format!("d24_w{w}"),
            handmade_bmp(24, w, 3, 0, |r, c| ((r * 0x10203 + c * 0x30201) as u32 * 977) & 0xff_ffff),
        ));
    }
    // 4-bit: 1, 2, 3, 4 data bytes per row.
    for w in [1, 3, 5, 7, 8] {
        out.push((format!("d4_w{w}"), handmade_bmp(4, w, 4, 0, pattern(16))));
    }
    // 1-bit: 1, 2, 3, 4 data bytes per row plus partial bytes.
    for w in [5, 8, 13, 24, 32, 33] {
        out.push((format!("d1_w{w}"), handmade_bmp(1, w, 5, 0, |r, c| ((r + c / 2) % 2) as u32)));
    }
    // Short palette and a larger patterned image.
    out.push(("d8_short_palette".into(), handmade_bmp(8, 6, 5, 5, pattern(5))));
    out.push((
        "d8_regions_37x23".into(),
        handmade_bmp(8, 37, 23, 0, |r, c| if r < 10 && c < 20 { 200 } else if c > 30 { 17 } else { 90 }),
    ));
    // Zero image size field and a gap between palette and pixels.
    let mut zero_size = handmade_bmp(8, 3, 2, 4, pattern(4));
    zero_size[34..38].copy_from_slice(&0u32.to_le_bytes());
    out.push(("d8_zero_size_field".into(), zero_size));
    let base = handmade_bmp(24, 2, 2, 0, |r, c| (r * 2 + c) as u32 * 0x101010);
    let mut gap = base[..54].to_vec();
    gap.extend_from_slice(&[0xde, 0xad, 0xbe, 0xef]);
    gap.extend_from_slice(&base[54..]);
    gap[10..14].copy_from_slice(&58u32.to_le_bytes());
    let total = gap.len() as u32;
    gap[2..6].copy_from_slice(&total.to_le_bytes());
    out.push(("d24_gap".into(), gap));
    out
}

/// The seeded corpus: every generator kind at depths 8 and 24, from 1x1
/// up to 512x512.
pub fn synthetic_corpus() -> Vec<SyntheticSpec> {
    let sizes = [(1, 1), (2, 2), (3, 7), (17, 5), (100, 100), (64, 200), (512, 512)];
    let mut specs = Vec::new();
    let mut seed = 1;
    for kind in GeneratorKind::ALL {
        for depth in [8u16, 24] {
            for &(w, h) in &sizes {
                // 512x512 only for a subset to keep the run short.
                if w == 512 && !matches!(kind, GeneratorKind::Blobs | GeneratorKind::Noise | GeneratorKind::Uniform) {
                    continue;
                }
                specs.push(SyntheticSpec::new(kind, w, h, depth, seed).with_regions(1 + (seed as u32 % 9)));
                seed += 1;
            }
        }
    }
    specs
}

pub type Grid = Vec<Vec<u32>>;

/// (row, col, value, codes) as plain integers.
pub type RawChain = (usize, usize, u32, Vec<u8>);

const STEPS: [(isize, isize); 4] = [(0, -1), (-1, 0), (0, 1), (1, 0)];

/// Literal recursive greedy tracer: the reference encoder for small grids.
pub fn reference_encode(grid: &Grid) -> Vec<RawChain> {
    fn crack(grid: &Grid, seen: &mut Vec<Vec<bool>>, i: usize, j: usize, g: u32, out: &mut Vec<u8>) {
        for (code, (di, dj)) in STEPS.iter().enumerate() {
            let (ni, nj) = (i as isize + di, j as isize + dj);
            if ni < 0 || nj < 0 || ni as usize >= grid.len() || nj as usize >= grid[0].len() {
                continue;
            }
            let (ni, nj) = (ni as usize, nj as usize);
            if !seen[ni][nj] && grid[ni][nj] == g {
                seen[ni][nj] = true;
                out.push(code as u8);
                crack(grid, seen, ni, nj, g, out);
                return;
            }
        }
    }
    let mut seen = vec![vec![false; grid[0].len()]; grid.len()];
    let mut chains = Vec::new();
    for i in 0..grid.len() {
        for j in 0..grid[0].len() {
            if seen[i][j] {
                continue;
            }
            seen[i][j] = true;
            let mut codes = Vec::new();
            crack(grid, &mut seen, i, j, grid[i][j], &mut codes);
            chains.push((i, j, grid[i][j], codes));
        }
    }
    chains
}

/// Re-walks chains cell by cell against `grid`. Returns an error message
/// on any out-of-bounds step, value mismatch, double cover or gap.
pub fn walk_check(grid: &Grid, chains: &[RawChain]) -> Result<(), String> {
    let (n, m) = (grid.len(), grid[0].len());
    let mut cover = vec![vec![0u32; m]; n];
    for (k, (i, j, g, codes)) in chains.iter().enumerate() {
        let (mut i, mut j) = (*i as isize, *j as isize);
        for step in 0..=codes.len() {
            if step > 0 {
                let (di, dj) = STEPS[codes[step - 1] as usize];
                i += di;
                j += dj;
            }
            if i < 0 || j < 0 || i as usize >= n || j as usize >= m {
                return Err(format!("chain {k} leaves the grid at step {step}"));
            }
            let (ui, uj) = (i as usize, j as usize);
            if grid[ui][uj] != *g {
                return Err(format!("chain {k} crosses value {} at ({ui}, {uj})", grid[ui][uj]));
            }
            cover[ui][uj] += 1;
        }
    }
    for (i, row) in cover.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c != 1 {
                return Err(format!("cell ({i}, {j}) covered {c} times"));
            }
        }
    }
    Ok(())
}

pub fn raw_chains(set: &crackcode::ChainSet) -> Vec<RawChain> {
    set.chains
        .iter()
        .map(|c| (c.row, c.col, c.value.0, c.codes.iter().map(|d| d.code()).collect()))
        .collect()
}

/// Every `n`x`m` grid over an alphabet of `k` values.
pub fn all_grids(n: usize, m: usize, k: u32) -> Vec<Grid> {
    let cells = n * m;
    let total = (k as usize).pow(cells as u32);
    (0..total)
        .map(|mut idx| {
            let mut g = vec![vec![0u32; m]; n];
            for c in 0..cells {
                g[c / m][c % m] = (idx % k as usize) as u32;
                idx /= k as usize;
            }
            g
        })
        .collect()
}

/// Packs 2-bit codes by concatenating their bits, high bit first, into
/// one bit string and cutting it into bytes.
pub fn bitstring_pack(codes: &[u8]) -> Vec<u8> {
    let mut bits: Vec<bool> = Vec::with_capacity(codes.len() * 2 + 6);
    for &c in codes {
        bits.push(c & 2 != 0);
        bits.push(c & 1 != 0);
    }
    while bits.len() % 8 != 0 {
        bits.push(false);
    }
    bits.chunks(8)
        .map(|b| b.iter().fold(0u8, |acc, &bit| acc * 2 + u8::from(bit)))
        .collect()
}

/// Expected CRK1 stream length.
pub fn stream_size(blob_len: usize, value_bytes: usize, codes_per_chain: &[usize]) -> usize {
    4 + 4 + 4 + 1 + (4 + blob_len) + 4 + codes_per_chain.iter().map(|&c| 4 + value_bytes + 4 + (c + 3) / 4).sum::<usize>()
}
