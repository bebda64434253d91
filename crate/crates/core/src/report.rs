//! Per-file compression metrics.

use std::fmt;
use std::time::Duration;

#[derive(Debug, Clone, PartialEq)]
pub struct CompressionReport {
    pub original_size: u64,
    pub compressed_size: u64,
    /// `(1 - compressed / original) * 100`; negative when the stream is
    /// larger than the input.
    pub compression_percentage: f64,
    /// Encoding time only, excluding file I/O and serialization.
    pub computation_time: Duration,
    pub bytes_differed: u64,
}

impl CompressionReport {
    pub fn new(original_size: u64, compressed_size: u64, computation_time: Duration, bytes_differed: u64) -> Self {
        CompressionReport {
            original_size,
            compressed_size,
            compression_percentage: compression_percentage(original_size, compressed_size),
            computation_time,
            bytes_differed,
        }
    }

    /// Single `key=value` line for scripts.
    pub fn machine_line(&self) -> String {
        format!(
            "report original_size={} compressed_size={} compression_pct={:.2} time_s={:.6} bytes_differed={}",
            self.original_size,
            self.compressed_size,
            self.compression_percentage,
            self.computation_time.as_secs_f64(),
            self.bytes_differed
        )
    }
}

impl fmt::Display for CompressionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "original size:       {} bytes", self.original_size)?;
        writeln!(f, "compressed size:     {} bytes", self.compressed_size)?;
        writeln!(f, "compression:         {:.2}%", self.compression_percentage)?;
        writeln!(f, "computation time:    {:.6} s", self.computation_time.as_secs_f64())?;
        write!(f, "bytes differed:      {}", self.bytes_differed)
    }
}

/// Space saved, in percent of the original size. Zero for empty input.
pub fn compression_percentage(original_size: u64, compressed_size: u64) -> f64 {
    if original_size == 0 {
        return 0.0;
    }
    (1.0 - compressed_size as f64 / original_size as f64) * 100.0
}
