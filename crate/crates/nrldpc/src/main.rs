//! Command-line front end: base-graph validation, encoding, Monte-Carlo
//! BER/FER sweeps, shift-network verification, and throughput reports.
//!
//! Exit codes: 0 success, 1 usage error, 2 validation failure, 3 runtime
//! error.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use nrldpc::basegraph::{
    mb_for_rate, parse_bg_table, standard_lifting_set, BaseGraph, CodeConfig, BG1_COLS,
    BG1_INFO_COLS, BG1_ROWS,
};
use nrldpc::codec::{puncture, Encoder};
use nrldpc::decoder::DecodeParams;
use nrldpc::perfmodel::{
    cycles_per_iter_for, frames_in_flight, throughput_vs_z, BitsConvention, PerfParams,
};
use nrldpc::shiftnet::{
    banyan_variant_shift_traced, cyclic_shift_oracle, network_costs, partitioned_shift,
    rotator_stage_count, structural_mux_count, PartitionMode, ShiftConfig,
};
use nrldpc::sweep::{emit_csv, run_sweep, EbN0Norm, SweepConfig};
use nrldpc::Error;

const EXIT_USAGE: i32 = 1;
const EXIT_VALIDATION: i32 = 2;
const EXIT_RUNTIME: i32 = 3;

#[derive(Parser)]
#[command(
    name = "nrldpc",
    version,
    about = "Multi-mode 5G NR LDPC decoder model (BG1, Z <= 96)",
    long_about = "Multi-mode 5G NR LDPC decoder model (BG1, Z <= 96).\n\n\
        Exit codes: 0 success, 1 usage error, 2 validation failure, 3 runtime error."
)]
struct Cli {
    /// Base graph table file; defaults to the built-in BG1 table
    #[arg(long, global = true, value_name = "PATH")]
    bg: Option<PathBuf>,

    /// Shift-coefficient set index 0..7; defaults to the standard set for Z
    #[arg(long, global = true, value_name = "0..7")]
    lifting_set: Option<usize>,

    /// Master RNG seed
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for sweeps (results do not depend on this)
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a base graph table against every BG1 structural rule
    Validate,
    /// Encode information bits into codewords
    Encode(EncodeArgs),
    /// Run a seeded Monte-Carlo BER/FER sweep and emit CSV
    #[command(
        long_about = "Run a seeded Monte-Carlo BER/FER sweep and emit CSV.\n\n\
            Bit errors are counted on the 22*Z information positions of each \
            frame, including the 2*Z punctured ones (they are information \
            bits the user transmitted; the decoder recovers them from \
            erasures). Results are a pure function of --seed and the \
            configuration, independent of --workers."
    )]
    BerSweep(BerSweepArgs),
    /// Verify the shift-network model against the cyclic-shift oracle
    ShiftnetVerify(ShiftnetArgs),
    /// Report analytical decoder throughput
    Throughput(ThroughputArgs),
}

#[derive(Args)]
struct EncodeArgs {
    /// Lifting size, 1..=96
    #[arg(long)]
    z: usize,
    /// Parity rows, 4..=46
    #[arg(long)]
    mb: usize,
    /// Input bit file: ASCII '0'/'1' (default) or packed bytes with --packed
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Output bit file
    #[arg(long = "out", value_name = "PATH")]
    output: PathBuf,
    /// Read and write raw packed bytes, most-significant bit first
    #[arg(long)]
    packed: bool,
    /// Write transmitted frames (first 2Z bits punctured) instead of full codewords
    #[arg(long)]
    punctured: bool,
}

#[derive(Args)]
struct BerSweepArgs {
    /// Lifting size, 1..=96
    #[arg(long)]
    z: usize,
    /// Parity rows, 4..=46 (or use --rate)
    #[arg(long, conflicts_with = "rate")]
    mb: Option<usize>,
    /// Transmitted-rate alias like 11/12, 1/2, 1/3 (resolves to mb)
    #[arg(long)]
    rate: Option<String>,
    /// Eb/N0 grid in dB: a single value or start:step:stop
    #[arg(long)]
    ebn0: String,
    /// Frames per point
    #[arg(long, default_value_t = 100_000)]
    frames: u64,
    /// Stop a point early after this many frame errors
    #[arg(long, default_value_t = 100)]
    frame_errors: u64,
    /// Stop a point early after this many bit errors
    #[arg(long, default_value_t = u64::MAX)]
    bit_errors: u64,
    /// Maximum decoder iterations
    #[arg(long, default_value_t = 10)]
    iters: u32,
    /// Min-sum offset in LSB units (1 LSB = LLR 0.5)
    #[arg(long, default_value_t = 1)]
    offset_lsb: u8,
    /// Disable early termination (always run all iterations)
    #[arg(long)]
    no_early_term: bool,
    /// Eb/N0 normalization: tx uses rate 22/(20+mb) (punctured bits carry no
    /// energy), info uses rate 22/(22+mb)
    #[arg(long, value_enum, default_value_t = NormArg::Tx)]
    ebn0_norm: NormArg,
    /// Write CSV here instead of stdout
    #[arg(long = "out", value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormArg {
    Tx,
    Info,
}

#[derive(Args)]
struct ShiftnetArgs {
    /// Network width
    #[arg(long, default_value_t = 96)]
    n: usize,
    /// Sweep every (Z, SV) pair instead of a random sample
    #[arg(long)]
    exhaustive: bool,
}

#[derive(Args)]
struct ThroughputArgs {
    /// Clock frequency in Hz (e.g. 526e6)
    #[arg(long)]
    fclk: f64,
    /// Lifting sizes to tabulate
    #[arg(long, value_delimiter = ',', default_value = "96")]
    z: Vec<usize>,
    /// Parity rows, 4..=46
    #[arg(long, default_value_t = 4)]
    mb: usize,
    /// Clock cycles per iteration (defaults to 18, the mother-code schedule;
    /// required for mb != 4)
    #[arg(long)]
    cycles_per_iter: Option<u32>,
    /// Iteration budget
    #[arg(long, default_value_t = 10)]
    iters: u32,
    /// Frames interleaved in the check-node pipeline
    #[arg(long, default_value_t = 2)]
    pipelined: u32,
    /// Which bits count toward throughput
    #[arg(long, value_enum, default_value_t = BitsArg::Tx)]
    bits: BitsArg,
    /// Write the table as CSV here
    #[arg(long = "out", value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BitsArg {
    Tx,
    Info,
    Code,
}

struct AppError {
    code: i32,
    msg: String,
}

impl AppError {
    fn usage(msg: impl Into<String>) -> AppError {
        AppError {
            code: EXIT_USAGE,
            msg: msg.into(),
        }
    }

    fn validation(msg: impl Into<String>) -> AppError {
        AppError {
            code: EXIT_VALIDATION,
            msg: msg.into(),
        }
    }

    fn runtime(msg: impl Into<String>) -> AppError {
        AppError {
            code: EXIT_RUNTIME,
            msg: msg.into(),
        }
    }
}

impl From<Error> for AppError {
    fn from(e: Error) -> AppError {
        let code = match e {
            Error::Config(_) => EXIT_USAGE,
            Error::Parse { .. }
            | Error::Validation { .. }
            | Error::Setup(_)
            | Error::Dimension(_) => EXIT_VALIDATION,
            Error::Io(_) => EXIT_RUNTIME,
        };
        AppError {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> AppError {
        AppError::runtime(e.to_string())
    }
}

fn main() {
    // Die quietly on a closed pipe (`nrldpc ... | head`) like other Unix
    // tools instead of panicking in println.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {}", e.msg);
            std::process::exit(e.code);
        }
    }
}

fn run(cli: Cli) -> Result<(), AppError> {
    match &cli.cmd {
        Cmd::Validate => cmd_validate(&cli),
        Cmd::Encode(args) => cmd_encode(&cli, args),
        Cmd::BerSweep(args) => cmd_ber_sweep(&cli, args),
        Cmd::ShiftnetVerify(args) => cmd_shiftnet_verify(&cli, args),
        Cmd::Throughput(args) => cmd_throughput(args),
    }
}

fn load_graph(cli: &Cli) -> Result<BaseGraph, AppError> {
    match &cli.bg {
        None => Ok(BaseGraph::bg1()),
        Some(path) => {
            let file = File::open(path)
                .map_err(|e| AppError::runtime(format!("{}: {e}", path.display())))?;
            Ok(BaseGraph::load_bg1(BufReader::new(file))?)
        }
    }
}

fn resolve_lifting_set(cli: &Cli, z: usize) -> Result<usize, AppError> {
    match cli.lifting_set {
        Some(set) => Ok(set),
        None => standard_lifting_set(z).ok_or_else(|| {
            AppError::usage(format!(
                "Z = {z} is not a standard lifting size; pass --lifting-set explicitly"
            ))
        }),
    }
}

fn cmd_validate(cli: &Cli) -> Result<(), AppError> {
    let source = match &cli.bg {
        None => "built-in BG1 table".to_string(),
        Some(path) => path.display().to_string(),
    };
    println!("validating {source}");

    let entries = match &cli.bg {
        None => parse_bg_table(include_str!("../data/nr_bg1.txt").as_bytes()),
        Some(path) => {
            let file = File::open(path)
                .map_err(|e| AppError::runtime(format!("{}: {e}", path.display())))?;
            parse_bg_table(BufReader::new(file))
        }
    };
    let entries = match entries {
        Ok(entries) => {
            println!("parse: PASS ({} entries)", entries.len());
            entries
        }
        Err(e) => {
            println!("parse: FAIL ({e})");
            return Err(AppError::validation("base graph file does not parse"));
        }
    };

    let bg = match BaseGraph::from_entries(BG1_ROWS, BG1_COLS, BG1_INFO_COLS, entries) {
        Ok(bg) => bg,
        Err(e) => {
            if let Error::Validation { rule, detail } = &e {
                println!("{rule}: FAIL ({detail})");
            }
            return Err(e.into());
        }
    };
    for rule in [
        "row index range",
        "column index range",
        "shift set count",
        "duplicate entry",
    ] {
        println!("{rule}: PASS");
    }

    let mut all_ok = true;
    for check in bg.bg1_invariant_report() {
        let verdict = if check.passed { "PASS" } else { "FAIL" };
        println!("{}: {} ({})", check.rule, verdict, check.detail);
        all_ok &= check.passed;
    }
    if all_ok {
        Ok(())
    } else {
        Err(AppError::validation("base graph violates BG1 structure"))
    }
}

fn read_bits(path: &Path, packed: bool) -> Result<Vec<bool>, AppError> {
    let mut raw = Vec::new();
    File::open(path)
        .map_err(|e| AppError::runtime(format!("{}: {e}", path.display())))?
        .read_to_end(&mut raw)?;
    if packed {
        Ok(raw
            .iter()
            .flat_map(|byte| (0..8).map(move |b| (byte >> (7 - b)) & 1 == 1))
            .collect())
    } else {
        let mut bits = Vec::new();
        for (i, &ch) in raw.iter().enumerate() {
            match ch {
                b'0' => bits.push(false),
                b'1' => bits.push(true),
                b' ' | b'\t' | b'\r' | b'\n' => {}
                other => {
                    return Err(AppError::validation(format!(
                        "{}: unexpected byte 0x{other:02x} at offset {i}",
                        path.display()
                    )));
                }
            }
        }
        Ok(bits)
    }
}

fn write_bits(path: &Path, frames: &[Vec<bool>], packed: bool) -> Result<(), AppError> {
    let mut out = BufWriter::new(File::create(path)?);
    if packed {
        let total: usize = frames.iter().map(Vec::len).sum();
        if !total.is_multiple_of(8) {
            return Err(AppError::usage(format!(
                "packed output needs a multiple of 8 bits, got {total}; use ASCII output"
            )));
        }
        let mut byte = 0u8;
        let mut filled = 0;
        for &bit in frames.iter().flatten() {
            byte = byte << 1 | u8::from(bit);
            filled += 1;
            if filled == 8 {
                out.write_all(&[byte])?;
                byte = 0;
                filled = 0;
            }
        }
    } else {
        for frame in frames {
            let line: String = frame.iter().map(|&b| if b { '1' } else { '0' }).collect();
            writeln!(out, "{line}")?;
        }
    }
    Ok(())
}

fn cmd_encode(cli: &Cli, args: &EncodeArgs) -> Result<(), AppError> {
    let bg = load_graph(cli)?;
    let lifting_set = resolve_lifting_set(cli, args.z)?;
    let cfg = CodeConfig::new(args.z, args.mb, lifting_set)?;
    let h = bg.expand(&cfg)?;
    let encoder = Encoder::new(&h)?;
    let lengths = cfg.lengths();

    let bits = read_bits(&args.input, args.packed)?;
    if bits.is_empty() || bits.len() % lengths.k != 0 {
        return Err(AppError::validation(format!(
            "input holds {} bits, expected a positive multiple of k = {}",
            bits.len(),
            lengths.k
        )));
    }
    let frames: Vec<Vec<bool>> = bits
        .chunks(lengths.k)
        .map(|info| {
            let cw = encoder.encode(info, &h)?;
            Ok(if args.punctured {
                puncture(&cw, &cfg).bits().to_vec()
            } else {
                cw.into_bits()
            })
        })
        .collect::<Result<_, Error>>()?;
    write_bits(&args.output, &frames, args.packed)?;
    eprintln!(
        "encoded {} frame(s): k = {}, n = {}",
        frames.len(),
        lengths.k,
        frames[0].len()
    );
    Ok(())
}

fn parse_ebn0_grid(spec: &str) -> Result<Vec<f64>, AppError> {
    let bad = |msg: &str| AppError::usage(format!("--ebn0 `{spec}`: {msg}"));
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| -> Result<f64, AppError> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| bad("fields must be numbers"))
    };
    match parts.len() {
        1 => Ok(vec![num(parts[0])?]),
        3 => {
            let (start, step, stop) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
            if step <= 0.0 {
                return Err(bad("step must be positive"));
            }
            if stop < start {
                return Err(bad("stop must not be below start"));
            }
            let mut grid = Vec::new();
            let mut i = 0;
            loop {
                let v = start + step * i as f64;
                if v > stop + 1e-9 {
                    break;
                }
                grid.push(v);
                i += 1;
            }
            Ok(grid)
        }
        _ => Err(bad("expected a single value or start:step:stop")),
    }
}

fn parse_rate_alias(rate: &str) -> Result<usize, AppError> {
    let parts: Vec<&str> = rate.split('/').collect();
    if parts.len() != 2 {
        return Err(AppError::usage(format!(
            "--rate `{rate}`: expected a fraction like 11/12"
        )));
    }
    let num = parts[0]
        .trim()
        .parse::<u32>()
        .map_err(|_| AppError::usage(format!("--rate `{rate}`: bad numerator")))?;
    let den = parts[1]
        .trim()
        .parse::<u32>()
        .map_err(|_| AppError::usage(format!("--rate `{rate}`: bad denominator")))?;
    Ok(mb_for_rate(num, den)?)
}

fn cmd_ber_sweep(cli: &Cli, args: &BerSweepArgs) -> Result<(), AppError> {
    let mb = match (&args.mb, &args.rate) {
        (Some(mb), None) => *mb,
        (None, Some(rate)) => parse_rate_alias(rate)?,
        (None, None) => return Err(AppError::usage("pass --mb or --rate")),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    let bg = load_graph(cli)?;
    let lifting_set = resolve_lifting_set(cli, args.z)?;

    let mut cfg = SweepConfig::new(args.z, mb, lifting_set, parse_ebn0_grid(&args.ebn0)?);
    cfg.max_frames = args.frames;
    cfg.max_frame_errors = args.frame_errors;
    cfg.max_bit_errors = args.bit_errors;
    cfg.seed = cli.seed;
    cfg.workers = cli.workers.max(1);
    cfg.decode = DecodeParams {
        max_iters: args.iters,
        offset_lsb: args.offset_lsb,
        early_termination: !args.no_early_term,
    };
    cfg.ebn0_norm = match args.ebn0_norm {
        NormArg::Tx => EbN0Norm::Tx,
        NormArg::Info => EbN0Norm::Info,
    };

    let points = run_sweep(&bg, &cfg)?;
    for p in &points {
        eprintln!(
            "ebn0 {:>6.2} dB: {} frames, ber {:.3e}, fer {:.3e}, avg iters {:.2}",
            p.ebn0_db, p.frames, p.ber, p.fer, p.avg_iterations
        );
    }
    match &args.output {
        Some(path) => {
            let file = BufWriter::new(File::create(path)?);
            emit_csv(&cfg, &points, file)?;
        }
        None => {
            let stdout = std::io::stdout();
            emit_csv(&cfg, &points, stdout.lock())?;
        }
    }
    Ok(())
}

fn cmd_shiftnet_verify(cli: &Cli, args: &ShiftnetArgs) -> Result<(), AppError> {
    let n = args.n;
    if n == 0 {
        return Err(AppError::usage("network width must be positive"));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(cli.seed);
    let mut cases = 0u64;
    let mut failures = 0u64;

    let mut check = |z: usize, sv: usize, rng: &mut ChaCha12Rng| {
        let cfg = ShiftConfig { n, z, sv };
        let data: Vec<u32> = (0..z).map(|_| rng.random()).collect();
        let want = cyclic_shift_oracle(&data, sv);
        cases += 1;
        match banyan_variant_shift_traced(&data, &cfg) {
            Ok((got, trace)) => {
                let rule_ok = (0..z).all(|i| trace.from_duplicate[i] == (i >= z - sv));
                if got != want || !rule_ok {
                    failures += 1;
                }
            }
            Err(_) => failures += 1,
        }
    };

    if args.exhaustive {
        for z in 1..=n {
            for sv in 0..z {
                check(z, sv, &mut rng);
            }
        }
    } else {
        for _ in 0..256 {
            let z = rng.random_range(1..=n);
            let sv = rng.random_range(0..z);
            check(z, sv, &mut rng);
        }
    }
    println!(
        "structural vs oracle: {} configurations, {} failures{}",
        cases,
        failures,
        if args.exhaustive { " (exhaustive)" } else { "" }
    );

    // Partition isolation applies to the full-width fabric.
    let mut partition_failures = 0u64;
    if n == 96 {
        for _ in 0..64 {
            let z = rng.random_range(1..=48);
            let frames: Vec<(Vec<u32>, usize)> = (0..2)
                .map(|_| {
                    let sv = rng.random_range(0..z);
                    ((0..z).map(|_| rng.random()).collect(), sv)
                })
                .collect();
            let out = partitioned_shift(&frames, PartitionMode::Dual48)
                .map_err(|e| AppError::runtime(e.to_string()))?;
            for ((data, sv), got) in frames.iter().zip(&out) {
                if got != &cyclic_shift_oracle(data, *sv) {
                    partition_failures += 1;
                }
            }
        }
        println!("dual-48 partition: 64 frame pairs, {partition_failures} failures");
    }

    println!(
        "structural model at N = {n}: {} rotator stages, {} with the output mux stage, {} multiplexers",
        rotator_stage_count(n),
        rotator_stage_count(n) + 1,
        structural_mux_count(n)
    );
    match network_costs(n.next_power_of_two().max(2)) {
        Ok(c) => {
            if c.n != n {
                println!("closed-form costs at the next power of two, N = {}:", c.n);
            }
            println!("  topology   muxes  stages");
            println!("  Benes   {:>8}  {:>6}", c.benes_muxes, c.benes_stages);
            println!("  Banyan  {:>8}  {:>6}", c.banyan_muxes, c.banyan_stages);
            println!("  QSN            -  {:>6}", c.qsn_stages);
        }
        Err(e) => println!("closed-form costs unavailable: {e}"),
    }

    if failures == 0 && partition_failures == 0 {
        Ok(())
    } else {
        Err(AppError::validation(
            "shift network model disagrees with the oracle",
        ))
    }
}

fn cmd_throughput(args: &ThroughputArgs) -> Result<(), AppError> {
    let cycles = match args
        .cycles_per_iter
        .or_else(|| cycles_per_iter_for(args.mb))
    {
        Some(c) => c,
        None => {
            return Err(AppError::usage(format!(
                "no schedule constant is known for mb = {}; pass --cycles-per-iter",
                args.mb
            )));
        }
    };
    let bits = match args.bits {
        BitsArg::Tx => BitsConvention::Tx,
        BitsArg::Info => BitsConvention::Info,
        BitsArg::Code => BitsConvention::Code,
    };
    let base = PerfParams {
        f_clk_hz: args.fclk,
        cycles_per_iter: cycles,
        max_iters: args.iters,
        frames_pipelined: args.pipelined,
        frames_parallel: 1,
        bits_per_frame: 1,
    };
    let rows = throughput_vs_z(&base, args.mb, bits, &args.z)?;

    println!(
        "f_clk {:.3} MHz, {} cycles/iteration, {} iterations, {} frames pipelined, mb = {}",
        args.fclk / 1e6,
        cycles,
        args.iters,
        args.pipelined,
        args.mb
    );
    println!("   Z  mode       frames  bits/frame   single Gbps    multi Gbps  in flight");
    for row in &rows {
        let p = PerfParams {
            frames_parallel: row.frames_parallel,
            bits_per_frame: row.bits_per_frame,
            ..base
        };
        println!(
            "  {:>2}  {:<9} {:>6}  {:>10}  {:>12.4}  {:>12.4}  {:>9}",
            row.z,
            format!("{:?}", row.mode),
            row.frames_parallel,
            row.bits_per_frame,
            row.single_bps / 1e9,
            row.multi_bps / 1e9,
            frames_in_flight(&p),
        );
    }
    if let Some(path) = &args.output {
        let mut out = BufWriter::new(File::create(path)?);
        writeln!(
            out,
            "z,mode,frames_parallel,bits_per_frame,single_bps,multi_bps"
        )?;
        for row in &rows {
            writeln!(
                out,
                "{},{:?},{},{},{},{}",
                row.z,
                row.mode,
                row.frames_parallel,
                row.bits_per_frame,
                row.single_bps,
                row.multi_bps
            )?;
        }
    }
    Ok(())
}
