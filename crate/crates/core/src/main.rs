use clap::{Args, Parser, Subcommand};
use crackcode::bench::{self, BenchInput};
use crackcode::bmp::{self, HeaderBlock};
use crackcode::synthetic::{self, generate_synthetic};
use crackcode::{
    bytes_differed, compress_image, container, decompress, dump_text, encode, CompressionReport, Error, ErrorClass,
};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "crackcode",
    version,
    about = "Lossless BMP compression with 4-connected crack codes",
    after_help = exit_code_help()
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compress an uncompressed BMP into a CRK1 stream.
    Compress { input: PathBuf, output: PathBuf },
    /// Restore the original BMP from a CRK1 stream.
    Decompress {
        input: PathBuf,
        output: PathBuf,
        /// Compare the restored file against this original and fail on any difference.
        #[arg(long, value_name = "ORIGINAL")]
        verify: Option<PathBuf>,
    },
    /// Print header fields and the chain listing of a BMP or CRK1 file.
    Inspect { input: PathBuf },
    /// Benchmark a corpus and write a CSV report.
    Bench(BenchArgs),
    /// Generate synthetic BMPs from a JSON spec file.
    Gen {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "source")]
struct BenchSource {
    /// Directory of .bmp files.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// JSON array of synthetic image specs.
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    source: BenchSource,
    #[arg(long)]
    out: PathBuf,
}

fn exit_code_help() -> String {
    let mut s = String::from("Exit codes:\n  0   success\n");
    for class in ErrorClass::ALL {
        let _ = writeln!(s, "  {:<3} {}", class.code(), class.description());
    }
    s
}

fn read(path: &Path) -> Result<Vec<u8>, Error> {
    std::fs::read(path).map_err(|e| Error::io(path, e))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn cmd_compress(input: &Path, output: &Path) -> Result<CompressionReport, Error> {
    let original = read(input)?;
    let image = bmp::parse_bmp(&original)?;
    let compressed = compress_image(&image)?;
    let restored = decompress(&compressed.stream)?;
    let report = CompressionReport::new(
        original.len() as u64,
        compressed.stream.len() as u64,
        compressed.encode_time,
        bytes_differed(&original, &restored),
    );
    if report.bytes_differed != 0 {
        return Err(Error::VerifyMismatch(report.bytes_differed));
    }
    write(output, &compressed.stream)?;
    println!("{report}");
    println!("chains:              {}", compressed.chains.chain_count());
    println!("{}", report.machine_line());
    Ok(report)
}

fn cmd_decompress(input: &Path, output: &Path, verify: Option<&Path>) -> Result<(), Error> {
    let stream = read(input)?;
    // Fully decoded in memory first, so a corrupt stream leaves no output file.
    let restored = decompress(&stream)?;
    write(output, &restored)?;
    println!("restored {} bytes to {}", restored.len(), output.display());
    if let Some(original) = verify {
        let differed = bytes_differed(&read(original)?, &restored);
        println!("bytes_differed={differed}");
        if differed != 0 {
            return Err(Error::VerifyMismatch(differed));
        }
    }
    Ok(())
}

fn header_text(h: &HeaderBlock) -> String {
    let f = &h.file_header;
    let i = &h.info_header;
    let mut s = String::new();
    let fields: [(&str, String); 16] = [
        ("bfType", f.file_type.to_string()),
        ("bfSize", f.file_size.to_string()),
        ("bfReserved1", f.reserved1.to_string()),
        ("bfReserved2", f.reserved2.to_string()),
        ("bfOffBits", f.pixel_data_offset.to_string()),
        ("biSize", i.header_size.to_string()),
        ("biWidth", i.width.to_string()),
        ("biHeight", i.height.to_string()),
        ("biPlanes", i.planes.to_string()),
        ("biBitCount", i.bits_per_pixel.to_string()),
        ("biCompression", i.compression.to_string()),
        ("biSizeImage", i.image_data_size.to_string()),
        ("biXPelsPerMeter", i.x_pixels_per_meter.to_string()),
        ("biYPelsPerMeter", i.y_pixels_per_meter.to_string()),
        ("biClrUsed", i.colors_used.to_string()),
        ("biClrImportant", i.colors_important.to_string()),
    ];
    for (name, value) in fields {
        let _ = writeln!(s, "# {name} {value}");
    }
    let _ = writeln!(s, "# palette_entries {}", h.palette.len());
    s
}

fn cmd_inspect(input: &Path) -> Result<String, Error> {
    let bytes = read(input)?;
    let mut out = String::new();
    if bytes.starts_with(&container::MAGIC) {
        let contents = container::deserialize(&bytes)?;
        let header = bmp::parse_header_block(&contents.header_blob)
            .map_err(container::ContainerError::BadHeaderBlob)?;
        out.push_str("# format CRK1\n");
        out.push_str(&header_text(&header));
        let _ = writeln!(out, "# chains {}", contents.chains.chain_count());
        out.push_str(&dump_text(&contents.chains, header.bits_per_pixel()));
    } else {
        let image = bmp::parse_bmp(&bytes)?;
        let chains = encode(&image.matrix);
        out.push_str("# format BMP\n");
        out.push_str(&header_text(&image.header));
        let _ = writeln!(out, "# chains {}", chains.chain_count());
        out.push_str(&dump_text(&chains, image.bits_per_pixel()));
    }
    Ok(out)
}

fn cmd_bench(args: &BenchArgs) -> Result<(), Error> {
    let inputs: Vec<BenchInput> = match (&args.source.corpus, &args.source.spec) {
        (Some(dir), _) => bench::load_corpus(dir)?,
        (None, Some(spec)) => bench::synthesize_corpus(&load_specs(spec)?)?,
        (None, None) => unreachable!("clap requires one source"),
    };
    let rows = bench::run_bench(&inputs);
    let file = std::fs::File::create(&args.out).map_err(|e| Error::io(&args.out, e))?;
    bench::write_csv(&rows, std::io::BufWriter::new(file))
        .map_err(|e| Error::io(&args.out, std::io::Error::other(e)))?;
    let failed = rows.iter().filter(|r| r.outcome.is_err()).count();
    println!("{} images benchmarked ({failed} failed) -> {}", rows.len(), args.out.display());
    Ok(())
}

fn load_specs(path: &Path) -> Result<Vec<synthetic::SyntheticSpec>, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(synthetic::parse_specs(&text)?)
}

fn cmd_gen(spec: &Path, out: &Path) -> Result<(), Error> {
    let specs = load_specs(spec)?;
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    for s in &specs {
        let bytes = bmp::write_bmp(&generate_synthetic(s)?)?;
        let path = out.join(s.file_name());
        write(&path, &bytes)?;
        println!("{}", path.display());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Compress { input, output } => cmd_compress(&input, &output).map(drop),
        Command::Decompress { input, output, verify } => cmd_decompress(&input, &output, verify.as_deref()),
        Command::Inspect { input } => {
            print!("{}", cmd_inspect(&input)?);
            Ok(())
        }
        Command::Bench(args) => cmd_bench(&args),
        Command::Gen { spec, out } => cmd_gen(&spec, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(ErrorClass::Usage.code() as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.class().code() as u8)
        }
    }
}
