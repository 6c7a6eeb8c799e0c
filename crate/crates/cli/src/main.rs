use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use srx::toolkit::{bench, corpus, envelope, stats, verify};
use srx::{AnyIndex, BuildParams, IndexKind, Variant};

#[derive(Parser)]
#[command(name = "srx", version, about = "Build and query run-length compressed text indexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Rlbwt,
    #[value(name = "r-index")]
    RIndex,
    #[value(name = "sr-index")]
    SrIndex,
    #[value(name = "r-csa")]
    RCsa,
    #[value(name = "sr-csa")]
    SrCsa,
}

impl From<Kind> for IndexKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Rlbwt => IndexKind::Rlbwt,
            Kind::RIndex => IndexKind::RIndex,
            Kind::SrIndex => IndexKind::SrIndex,
            Kind::RCsa => IndexKind::RCsa,
            Kind::SrCsa => IndexKind::SrCsa,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Count,
    Locate,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Build an index file from a text file.
    Build {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Sampling factor (sr-index, sr-csa; default 8).
        #[arg(long)]
        s: Option<usize>,
        /// Psi block size (r-csa, sr-csa; default 64).
        #[arg(long = "B")]
        block: Option<usize>,
        /// 0, 1 or 2 (sr-index, sr-csa; default 0).
        #[arg(long)]
        variant: Option<u64>,
        /// Treat the input as FASTA: drop header lines and newlines.
        #[arg(long)]
        fasta: bool,
    },
    /// Answer patterns, one per line, as `<id>\t<occ>[\t<pos>...]`.
    Query {
        index: PathBuf,
        patterns: PathBuf,
        #[arg(long, value_enum, default_value = "locate")]
        mode: Mode,
        /// Report positions in ascending order.
        #[arg(long)]
        sorted: bool,
    },
    /// Report sizes and repetitiveness of an index or a text file.
    Stats {
        input: PathBuf,
        /// Slices of the text for the run-head histogram.
        #[arg(long, default_value_t = 20)]
        bins: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        fasta: bool,
    },
    /// Check indexes built over a text against naive search.
    Verify {
        input: PathBuf,
        /// Kinds to check (default: all).
        #[arg(long, value_enum)]
        kind: Vec<Kind>,
        /// Sampling factors for subsampled kinds.
        #[arg(long, value_delimiter = ',', default_value = "1,4,8,16")]
        s: Vec<usize>,
        /// Variants for subsampled kinds (default: all).
        #[arg(long, value_delimiter = ',')]
        variant: Vec<u64>,
        #[arg(long = "B")]
        block: Option<usize>,
        /// Patterns sampled per length.
        #[arg(long, default_value_t = 20)]
        per_length: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        fasta: bool,
    },
    /// Time queries; CSV on stdout.
    Bench {
        /// An index file, or a text file to build the requested kinds from.
        input: PathBuf,
        patterns: PathBuf,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(long, value_enum)]
        kind: Vec<Kind>,
        #[arg(long, value_delimiter = ',', default_value = "4,8,16")]
        s: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        variant: Vec<u64>,
        #[arg(long = "B")]
        block: Option<usize>,
        #[arg(long)]
        fasta: bool,
    },
    /// Write a synthetic repetitive text.
    GenCorpus {
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        base: usize,
        #[arg(long, default_value_t = 10)]
        copies: usize,
        #[arg(long, default_value_t = 0.001)]
        mutation: f64,
        #[arg(long, default_value = "ACGT")]
        alphabet: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

fn usage(msg: impl std::fmt::Display) -> ! {
    Cli::command().error(ErrorKind::InvalidValue, msg).exit()
}

fn read_text(path: &Path, fasta: bool) -> Result<Vec<u8>> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(if fasta { srx::text::flatten_fasta(&bytes) } else { bytes })
}

fn read_patterns(path: &Path) -> Result<Vec<Vec<u8>>> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines: Vec<Vec<u8>> = bytes.split(|&b| b == b'\n').map(<[u8]>::to_vec).collect();
    if lines.last().is_some_and(|l| l.is_empty()) {
        lines.pop();
    }
    if let Some(i) = lines.iter().position(|l| l.is_empty()) {
        usage(format!("pattern {i} in {} is empty", path.display()));
    }
    Ok(lines)
}

fn variant(v: u64) -> Variant {
    Variant::from_index(v).unwrap_or_else(|e| usage(e))
}

/// Checks that flags fit the kind and fills in defaults.
fn build_params(kind: IndexKind, s: Option<usize>, block: Option<usize>, v: Option<u64>) -> BuildParams {
    if !kind.is_subsampled() && (s.is_some() || v.is_some()) {
        usage(format!("--s and --variant do not apply to {kind}"));
    }
    if !kind.uses_block() && block.is_some() {
        usage(format!("--B does not apply to {kind}"));
    }
    let mut p = BuildParams::new(kind);
    if kind.is_subsampled() {
        p.s = s.unwrap_or(8);
        p.variant = variant(v.unwrap_or(0));
    }
    if let Some(b) = block {
        p.block = b;
    }
    p.validate().unwrap_or_else(|e| usage(e));
    p
}

/// Kind x s x variant combinations; `s` and variants only fan out for
/// subsampled kinds.
fn grid(kinds: &[Kind], s: &[usize], variants: &[Variant], block: Option<usize>) -> Vec<BuildParams> {
    let kinds: Vec<IndexKind> = if kinds.is_empty() {
        IndexKind::ALL.to_vec()
    } else {
        kinds.iter().map(|&k| k.into()).collect()
    };
    let mut out = Vec::new();
    for kind in kinds {
        let blk = block.filter(|_| kind.uses_block());
        if kind.is_subsampled() {
            for &v in variants {
                for &s in s {
                    out.push(build_params(kind, Some(s), blk, Some(v.index())));
                }
            }
        } else {
            out.push(build_params(kind, None, blk, None));
        }
    }
    out
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Build { input, output, kind, s, block, variant, fasta } => {
            let params = build_params(kind.into(), s, block, variant);
            let text = srx::text::Text::ingest(&read_text(&input, fasta)?)?;
            let index = AnyIndex::build(&text, params)?;
            envelope::save(&index, &output)
                .with_context(|| format!("writing {}", output.display()))?;
        }
        Command::Query { index, patterns, mode, sorted } => {
            let idx = envelope::load(&index).with_context(|| format!("loading {}", index.display()))?;
            let patterns = read_patterns(&patterns)?;
            if mode == Mode::Locate && !idx.kind().can_locate() {
                usage(format!("{} indexes only support --mode count", idx.kind()));
            }
            let mut out = BufWriter::new(io::stdout().lock());
            for (id, p) in patterns.iter().enumerate() {
                match mode {
                    Mode::Count => writeln!(out, "{id}\t{}", idx.count(p)?)?,
                    Mode::Locate => {
                        let pos = idx.locate(p, sorted)?;
                        write!(out, "{id}\t{}", pos.len())?;
                        for x in pos {
                            write!(out, "\t{x}")?;
                        }
                        writeln!(out)?;
                    }
                }
            }
            out.flush()?;
        }
        Command::Stats { input, bins, format, fasta } => {
            if bins == 0 {
                usage("--bins must be at least 1");
            }
            let bytes = fs::read(&input).with_context(|| format!("reading {}", input.display()))?;
            let mut out = BufWriter::new(io::stdout().lock());
            if envelope::looks_like_index(&bytes) {
                let st = stats::index_stats(&bytes, bins)?;
                match format {
                    Format::Json => serde_json::to_writer_pretty(&mut out, &st)?,
                    Format::Csv => {
                        let mut w = csv::Writer::from_writer(&mut out);
                        w.write_record(["section", "role", "bytes", "bps"])?;
                        for s in &st.sections {
                            let role = if s.role == srx::section::Role::Locating { "locating" } else { "counting" };
                            w.write_record([&s.name, role, &s.bytes.to_string(), &s.bps.to_string()])?;
                        }
                        w.write_record(["total", "", &(st.total_bits / 8).to_string(), &st.bps.to_string()])?;
                        w.flush()?;
                    }
                }
            } else {
                let bytes = if fasta { srx::text::flatten_fasta(&bytes) } else { bytes };
                let text = srx::text::Text::ingest(&bytes)?;
                let st = stats::text_stats(&text, bins);
                match format {
                    Format::Json => serde_json::to_writer_pretty(&mut out, &st)?,
                    Format::Csv => {
                        let mut w = csv::Writer::from_writer(&mut out);
                        w.write_record(["field", "value"])?;
                        let mut rows = vec![
                            ("n".to_string(), st.n.to_string()),
                            ("sigma".into(), st.sigma.to_string()),
                            ("r".into(), st.r.to_string()),
                            ("n_over_r".into(), st.n_over_r.to_string()),
                            ("psi_runs".into(), st.psi_runs.to_string()),
                        ];
                        for k in &st.kept {
                            rows.push((format!("kept_sr_index_s{}", k.s), k.sr_index.to_string()));
                            rows.push((format!("kept_sr_csa_s{}", k.s), k.sr_csa.to_string()));
                        }
                        for (i, h) in st.histogram.iter().enumerate() {
                            rows.push((format!("heads_bin{i}"), h.to_string()));
                        }
                        for (k, v) in rows {
                            w.write_record([k, v])?;
                        }
                        w.flush()?;
                    }
                }
            }
            writeln!(out)?;
            out.flush()?;
        }
        Command::Verify { input, kind, s, variant: vs, block, per_length, seed, fasta } => {
            let variants: Vec<Variant> = if vs.is_empty() {
                Variant::ALL.to_vec()
            } else {
                vs.into_iter().map(variant).collect()
            };
            let configs = grid(&kind, &s, &variants, block);
            let results = verify::verify_text(&read_text(&input, fasta)?, &configs, per_length, seed)?;
            let mut ok = true;
            for r in &results {
                ok &= r.passed();
                let status = if r.passed() { "PASS" } else { "FAIL" };
                print!("{status}\t{}\t{} patterns", r.label, r.patterns);
                if let Some(f) = &r.first_failure {
                    print!("\t{f}");
                }
                println!();
            }
            return Ok(ok);
        }
        Command::Bench { input, patterns, reps, kind, s, variant: vs, block, fasta } => {
            if reps < 3 {
                usage("--reps must be at least 3");
            }
            let patterns = read_patterns(&patterns)?;
            let bytes = read_text(&input, false)?;
            let mut rows = Vec::new();
            if envelope::looks_like_index(&bytes) {
                let idx = envelope::decode(&bytes)?;
                rows.push(bench::bench_index(&idx, None, &patterns, reps)?);
            } else {
                let bytes = if fasta { srx::text::flatten_fasta(&bytes) } else { bytes };
                let text = srx::text::Text::ingest(&bytes)?;
                let bundle = srx::text::SuffixBundle::build(&text);
                let kinds = if kind.is_empty() {
                    vec![Kind::RIndex, Kind::SrIndex, Kind::RCsa, Kind::SrCsa]
                } else {
                    kind
                };
                let variants: Vec<Variant> = vs.into_iter().map(variant).collect();
                for p in grid(&kinds, &s, &variants, block) {
                    let start = Instant::now();
                    let idx = AnyIndex::build_with(&text, &bundle, p)?;
                    let ms = start.elapsed().as_secs_f64() * 1e3;
                    rows.push(bench::bench_index(&idx, Some(ms), &patterns, reps)?);
                }
            }
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Command::GenCorpus { output, base, copies, mutation, alphabet, seed } => {
            if !(0.0..=1.0).contains(&mutation) {
                usage("--mutation must lie in [0, 1]");
            }
            if alphabet.is_empty() || alphabet.as_bytes().contains(&0) {
                usage("--alphabet must be nonempty and free of NUL bytes");
            }
            if base == 0 || copies == 0 {
                bail!("--base and --copies must be positive");
            }
            let spec = corpus::SyntheticSpec {
                base_len: base,
                copies,
                mutation,
                alphabet: alphabet.into_bytes(),
                seed,
            };
            fs::write(&output, corpus::synthetic(&spec))
                .with_context(|| format!("writing {}", output.display()))?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
