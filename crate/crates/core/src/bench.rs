//! Corpus benchmark: compress, restore and compare every image, with a
//! run-length baseline for reference, and write one CSV row per image.

use crate::report::{compression_percentage, CompressionReport};
use crate::rle;
use crate::synthetic::{generate_synthetic, SyntheticSpec};
use crate::{bmp, bytes_differed, compress_image, decompress, encode, Error, Result};
use rayon::prelude::*;
use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

pub const CSV_COLUMNS: [&str; 11] = [
    "name",
    "original_size",
    "compressed_size",
    "compression_pct",
    "time_s",
    "bytes_differed",
    "chain_count",
    "code_count",
    "rle_size",
    "rle_pct",
    "error",
];

/// Encode repetitions per image; the median is reported.
pub const TIMING_RUNS: usize = 5;

/// An image to benchmark: a name and the raw BMP file bytes.
#[derive(Debug, Clone)]
pub struct BenchInput {
    pub name: String,
    pub bytes: Vec<u8>,
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub name: String,
    pub outcome: std::result::Result<BenchMetrics, String>,
}

#[derive(Debug, Clone)]
pub struct BenchMetrics {
    pub report: CompressionReport,
    pub chain_count: usize,
    pub code_count: usize,
    /// Header blob plus run-length body; `None` for non-8-bit images.
    pub rle_size: Option<u64>,
}

impl BenchMetrics {
    pub fn rle_percentage(&self) -> Option<f64> {
        self.rle_size
            .map(|s| compression_percentage(self.report.original_size, s))
    }
}

/// Reads every `*.bmp` file in `dir`, sorted by name.
pub fn load_corpus(dir: &Path) -> Result<Vec<BenchInput>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        let is_bmp = path
            .extension()
            .is_some_and(|x| x.eq_ignore_ascii_case("bmp"));
        if is_bmp && path.is_file() {
            paths.push(path);
        }
    }
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let bytes = std::fs::read(&p).map_err(|e| Error::io(&p, e))?;
            let name = p.file_name().unwrap_or_default().to_string_lossy().into_owned();
            Ok(BenchInput { name, bytes })
        })
        .collect()
}

pub fn synthesize_corpus(specs: &[SyntheticSpec]) -> Result<Vec<BenchInput>> {
    specs
        .par_iter()
        .map(|s| {
            let img = generate_synthetic(s)?;
            Ok(BenchInput {
                name: s.file_name(),
                bytes: bmp::write_bmp(&img)?,
            })
        })
        .collect()
}

fn median(mut samples: Vec<Duration>) -> Duration {
    samples.sort();
    samples[samples.len() / 2]
}

/// Benchmarks one file. Timing repetitions run sequentially.
pub fn bench_one(input: &BenchInput) -> Result<BenchMetrics> {
    let image = bmp::parse_bmp(&input.bytes)?;
    let compressed = compress_image(&image)?;
    let mut times = vec![compressed.encode_time];
    for _ in 1..TIMING_RUNS {
        let start = Instant::now();
        let set = encode(&image.matrix);
        times.push(start.elapsed());
        std::hint::black_box(set);
    }
    let restored = decompress(&compressed.stream)?;
    let differed = bytes_differed(&input.bytes, &restored);

    let rle_size = if image.bits_per_pixel() == 8 {
        let body = rle::rle_baseline_encode(&image.matrix, 8)?;
        let back = rle::rle_baseline_decode(&body, image.matrix.rows(), image.matrix.cols())?;
        if back != image.matrix {
            return Err(rle::RleError::Corrupt("baseline round trip mismatch").into());
        }
        Some((image.header.to_bytes().len() + body.len()) as u64)
    } else {
        None
    };

    Ok(BenchMetrics {
        report: CompressionReport::new(
            input.bytes.len() as u64,
            compressed.stream.len() as u64,
            median(times),
            differed,
        ),
        chain_count: compressed.chains.chain_count(),
        code_count: compressed.chains.code_count(),
        rle_size,
    })
}

/// Benchmarks all inputs in parallel; rows come back in input order.
/// A failing file produces a row with its error instead of metrics.
pub fn run_bench(inputs: &[BenchInput]) -> Vec<BenchRow> {
    inputs
        .par_iter()
        .map(|input| BenchRow {
            name: input.name.clone(),
            outcome: bench_one(input).map_err(|e| e.to_string()),
        })
        .collect()
}

pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for row in rows {
        let record: Vec<String> = match &row.outcome {
            Ok(m) => {
                let r = &m.report;
                vec![
                    row.name.clone(),
                    r.original_size.to_string(),
                    r.compressed_size.to_string(),
                    format!("{:.2}", r.compression_percentage),
                    format!("{:.6}", r.computation_time.as_secs_f64()),
                    r.bytes_differed.to_string(),
                    m.chain_count.to_string(),
                    m.code_count.to_string(),
                    m.rle_size.map(|s| s.to_string()).unwrap_or_default(),
                    m.rle_percentage().map(|p| format!("{p:.2}")).unwrap_or_default(),
                    String::new(),
                ]
            }
            Err(e) => {
                let mut rec = vec![row.name.clone()];
                rec.extend(std::iter::repeat_n(String::new(), CSV_COLUMNS.len() - 2));
                rec.push(e.clone());
                rec
            }
        };
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}
