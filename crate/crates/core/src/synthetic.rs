//! Seeded synthetic BMP images for benchmarks and tests.
//!
//! The same spec always yields the same file bytes: all randomness comes
//! from a ChaCha8 stream seeded with `spec.seed`.
//!
//! 8-bit images use small palette indices (0 for the background, one more
//! per region) and a grey palette holding exactly `max index + 1`
//! entries, with `colors_used` set accordingly. Noise uses all 256.

use crate::bmp::{BmpImage, PixelMatrix, PixelValue, RgbQuad};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Pixel budget per image, to keep a bad spec from exhausting memory.
pub const MAX_PIXELS: u64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("bad synthetic spec: {0}")]
    Invalid(String),
    #[error("cannot read synthetic specs: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorKind {
    /// Every pixel has the same value.
    Uniform,
    /// `region_count` horizontal bands.
    Stripes,
    /// `region_count` random rectangles over a background.
    Blobs,
    /// Alternating single-pixel cells of two values.
    Checker,
    /// Independent random values.
    Noise,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 5] = [
        GeneratorKind::Uniform,
        GeneratorKind::Stripes,
        GeneratorKind::Blobs,
        GeneratorKind::Checker,
        GeneratorKind::Noise,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::Uniform => "uniform",
            GeneratorKind::Stripes => "stripes",
            GeneratorKind::Blobs => "blobs",
            GeneratorKind::Checker => "checker",
            GeneratorKind::Noise => "noise",
        }
    }
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SyntheticSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub width: u32,
    pub height: u32,
    pub depth: u16,
    pub kind: GeneratorKind,
    #[serde(default = "one")]
    pub region_count: u32,
    #[serde(default)]
    pub seed: u64,
    /// Fill/background value: a palette index at depth 8, `0xRRGGBB` at
    /// depth 24. Drawn from the seed when absent (index 0 at depth 8).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<u32>,
}

impl SyntheticSpec {
    pub fn new(kind: GeneratorKind, width: u32, height: u32, depth: u16, seed: u64) -> Self {
        SyntheticSpec {
            name: None,
            width,
            height,
            depth,
            kind,
            region_count: 1,
            seed,
            value: None,
        }
    }

    pub fn with_regions(mut self, region_count: u32) -> Self {
        self.region_count = region_count;
        self
    }

    pub fn with_value(mut self, value: u32) -> Self {
        self.value = Some(value);
        self
    }

    /// File name used by `gen` and as the benchmark row name.
    pub fn file_name(&self) -> String {
        match &self.name {
            Some(n) if n.ends_with(".bmp") => n.clone(),
            Some(n) => format!("{n}.bmp"),
            None => format!(
                "{}_{}x{}_d{}_r{}_s{}.bmp",
                self.kind.name(),
                self.width,
                self.height,
                self.depth,
                self.region_count,
                self.seed
            ),
        }
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        let bad = |m: String| Err(SpecError::Invalid(m));
        if self.width == 0 || self.height == 0 || self.width > 65535 || self.height > 65535 {
            return bad(format!("dimensions {}x{} outside 1..=65535", self.width, self.height));
        }
        if u64::from(self.width) * u64::from(self.height) > MAX_PIXELS {
            return bad(format!("{}x{} exceeds the pixel budget", self.width, self.height));
        }
        if self.depth != 8 && self.depth != 24 {
            return bad(format!("depth {} (expected 8 or 24)", self.depth));
        }
        if self.region_count == 0 {
            return bad("region_count must be positive".into());
        }
        if self.depth == 8 && self.region_count > 255 && matches!(self.kind, GeneratorKind::Blobs) {
            return bad("8-bit blobs support at most 255 regions".into());
        }
        let max = if self.depth == 8 { 0xff } else { 0xff_ffff };
        if let Some(v) = self.value {
            if v > max {
                return bad(format!("value {v:#x} does not fit depth {}", self.depth));
            }
        }
        Ok(())
    }
}

/// Parses a JSON array of specs.
pub fn parse_specs(text: &str) -> Result<Vec<SyntheticSpec>, SpecError> {
    let specs: Vec<SyntheticSpec> = serde_json::from_str(text).map_err(|e| SpecError::Parse(e.to_string()))?;
    for s in &specs {
        s.validate()?;
    }
    Ok(specs)
}

pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<BmpImage, SpecError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (w, h) = (spec.width as usize, spec.height as usize);
    let truecolor = spec.depth == 24;
    let max = if truecolor { 0xff_ffff } else { 0xff };
    let random_value = |rng: &mut ChaCha8Rng| rng.gen_range(0..=max);
    let base = match spec.value {
        Some(v) => v,
        None if truecolor => random_value(&mut rng),
        None => 0,
    };
    // Value of region k (k >= 1) at depth 8.
    let indexed = |k: u32| (base + k) % 256;

    let matrix = match spec.kind {
        GeneratorKind::Uniform => PixelMatrix::filled(h, w, PixelValue(base)),
        GeneratorKind::Stripes => {
            let bands = spec.region_count as usize;
            let colors: Vec<u32> = (0..bands as u32)
                .map(|k| {
                    if k == 0 {
                        base
                    } else if truecolor {
                        random_value(&mut rng)
                    } else {
                        indexed(k)
                    }
                })
                .collect();
            PixelMatrix::from_fn(h, w, |r, _| PixelValue(colors[r * bands / h]))
        }
        GeneratorKind::Blobs => {
            let mut m = PixelMatrix::filled(h, w, PixelValue(base));
            for k in 1..=spec.region_count {
                let bw = rng.gen_range(1..=(w / 2).max(1));
                let bh = rng.gen_range(1..=(h / 2).max(1));
                let x0 = rng.gen_range(0..=w - bw);
                let y0 = rng.gen_range(0..=h - bh);
                let v = if truecolor { random_value(&mut rng) } else { indexed(k) };
                for r in y0..y0 + bh {
                    for c in x0..x0 + bw {
                        m.set(r, c, PixelValue(v));
                    }
                }
            }
            m
        }
        GeneratorKind::Checker => {
            let other = if truecolor { base ^ 0xff_ffff } else { indexed(1) };
            PixelMatrix::from_fn(h, w, |r, c| PixelValue(if (r + c) % 2 == 0 { base } else { other }))
        }
        GeneratorKind::Noise => {
            let values = (0..w * h).map(|_| PixelValue(random_value(&mut rng))).collect();
            PixelMatrix::from_vec(h, w, values)
        }
    };

    let palette = if truecolor {
        Vec::new()
    } else {
        let len = if spec.kind == GeneratorKind::Noise {
            256
        } else {
            matrix.values().iter().map(|v| v.0).max().unwrap_or(0) as usize + 1
        };
        (0..len)
            .map(|i| RgbQuad::grey(if len == 1 { 0 } else { (i * 255 / (len - 1)) as u8 }))
            .collect()
    };
    BmpImage::new(spec.depth, palette, matrix).map_err(|e| SpecError::Invalid(e.to_string()))
}
