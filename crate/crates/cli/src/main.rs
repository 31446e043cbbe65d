use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use dsalign::oracle::{oracle_affine, DEFAULT_MEMBER_CAP};
use dsalign::sim::{extract_choice, generate_dstring, DivergenceSpec, SimSpec};
use dsalign::{dwf_align, Alphabet, Penalties};
use dsalign_cli::bench::{render_table, run_bench, BenchOptions, DivergenceKind, GridConfig};
use dsalign_cli::input::{read_dstring, read_pattern};
use dsalign_cli::report::{peak_rss_kb, sha256_hex, RunReport, Seeds, Timing};
use dsalign_cli::truth::{variant_picks, TruthLog};
use dsalign_cli::{exit_code, VerificationFailure};

/// Exact affine-gap alignment of a sequence against a degenerate string.
#[derive(Parser)]
#[command(name = "dsalign", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Align a query against a D-string.
    Align(AlignArgs),
    /// Generate a random D-string.
    Generate(GenerateArgs),
    /// Extract a member of a D-string and plant SNPs and indels in it.
    Mutate(MutateArgs),
    /// Run the generate/mutate/align grid and check every cell.
    Bench(BenchArgs),
}

#[derive(Args)]
struct Common {
    /// Symbols allowed in texts and queries.
    #[arg(long, default_value = "ACGT")]
    alphabet: String,
    /// Penalties as a/x/o/e: match, mismatch, gap open, gap extend.
    #[arg(long, default_value_t = Penalties::default())]
    penalties: Penalties,
}

impl Common {
    fn alphabet(&self) -> Result<Alphabet> {
        Ok(Alphabet::new(self.alphabet.as_bytes())?)
    }
}

#[derive(Args)]
struct AlignArgs {
    /// D-string in bracket notation.
    text: PathBuf,
    /// Query, raw or FASTA (first record).
    query: PathBuf,
    #[command(flatten)]
    common: Common,
    /// Cross-check the distance by enumerating every member.
    #[arg(long)]
    oracle: bool,
    /// Most members the oracle will enumerate.
    #[arg(long, default_value_t = DEFAULT_MEMBER_CAP)]
    member_cap: u64,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
    /// Also print the edit string and the variant chosen at each degenerate letter.
    #[arg(long)]
    cigar: bool,
    /// Record wall time and peak memory.
    #[arg(long)]
    timing: bool,
    /// Check the alignment against a truth log written by `mutate`.
    #[arg(long)]
    truth: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    width: usize,
    /// Fraction of the width covered by degenerate letters.
    #[arg(long)]
    degeneracy: f64,
    #[arg(long)]
    max_variants: usize,
    #[arg(long)]
    max_len: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = "ACGT")]
    alphabet: String,
    /// Output file; the D-string goes to stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct MutateArgs {
    /// D-string in bracket notation.
    text: PathBuf,
    /// SNP rate per base.
    #[arg(long, default_value_t = 0.0)]
    snps: f64,
    /// Indel rate per base.
    #[arg(long, default_value_t = 0.0)]
    indels: f64,
    /// Member seed; SNPs use seed + 1 and indels seed + 2.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    common: Common,
    /// Where to write the pattern.
    #[arg(short, long)]
    output: PathBuf,
    /// Where to write the truth log [default: <output>.truth.json].
    #[arg(long)]
    truth: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Width of every generated D-string.
    #[arg(long, default_value_t = 10_000)]
    scale: usize,
    /// Comma-separated g:S:L configurations.
    #[arg(long, value_delimiter = ',', default_values_t = GridConfig::DEFAULT)]
    grid: Vec<GridConfig>,
    /// Comma-separated divergences: none, snp:<rate>, indel:<rate>.
    #[arg(long, value_delimiter = ',', default_values_t = DivergenceKind::DEFAULT)]
    divergence: Vec<DivergenceKind>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    common: Common,
    /// Print the cells as JSON.
    #[arg(long)]
    json: bool,
    /// Record wall time and peak memory per cell.
    #[arg(long)]
    timing: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Align(a) => align(a),
        Command::Generate(a) => generate(a),
        Command::Mutate(a) => mutate(a),
        Command::Bench(a) => bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn write_output(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn align(args: AlignArgs) -> Result<()> {
    let alphabet = args.common.alphabet()?;
    let pen = args.common.penalties;
    let ds = read_dstring(&args.text, &alphabet)?;
    let pattern = read_pattern(&args.query, &alphabet)?;
    let truth: Option<TruthLog> = match &args.truth {
        Some(path) => {
            let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
            Some(
                serde_json::from_slice(&bytes)
                    .with_context(|| format!("parsing {}", path.display()))?,
            )
        }
        None => None,
    };
    if let Some(t) = &truth {
        if t.penalties != pen {
            bail!(
                "truth log was written for penalties {}, not {pen}",
                t.penalties
            );
        }
    }

    let started = Instant::now();
    let aln = dwf_align(&ds, &pattern, &pen)?;
    let elapsed = started.elapsed().as_secs_f64();

    let mut report = RunReport::new(&ds, &pattern, &pen, &aln);
    if args.timing {
        report.timing = Some(Timing {
            wall_time_s: elapsed,
            peak_rss_kb: peak_rss_kb(),
        });
    }
    let mut oracle_members = None;
    if args.oracle {
        let o = oracle_affine(&ds, &pattern, &pen, args.member_cap)?;
        report.oracle_distance = Some(o.distance);
        oracle_members = Some(o.members);
    }

    let mut out = std::io::stdout().lock();
    if args.json {
        serde_json::to_writer_pretty(&mut out, &report)?;
        writeln!(out)?;
    } else {
        writeln!(out, "{}", report.human_line())?;
        if args.cigar {
            writeln!(out, "cigar: {}", report.cigar)?;
            writeln!(out, "variants: {}", variant_picks(&ds, &aln.variant_path))?;
        }
        if let (Some(d), Some(members)) = (report.oracle_distance, oracle_members) {
            writeln!(out, "oracle d={d}  members={members}")?;
        }
        if let Some(t) = report.timing {
            let rss = t
                .peak_rss_kb
                .map_or("unavailable".to_string(), |k| format!("{k} kB"));
            writeln!(out, "time={:.6}s  peak_rss={rss}", t.wall_time_s)?;
        }
    }
    out.flush()?;

    if let Some(t) = &truth {
        let failures = t.expected.violations(report.distance, &report.summary);
        if !failures.is_empty() {
            return Err(VerificationFailure(format!(
                "truth log violated: {}",
                failures.join("; ")
            ))
            .into());
        }
    }
    if let Some(d) = report.oracle_distance {
        if d != report.distance {
            return Err(VerificationFailure(format!(
                "oracle distance {d} differs from wavefront distance {}",
                report.distance
            ))
            .into());
        }
    }
    Ok(())
}

fn generate(args: GenerateArgs) -> Result<()> {
    let alphabet = Alphabet::new(args.alphabet.as_bytes())?;
    let spec = SimSpec {
        width: args.width,
        degeneracy: args.degeneracy,
        max_variants: args.max_variants,
        max_len: args.max_len,
        seed: args.seed,
    };
    let ds = generate_dstring(&spec, &alphabet)?;
    let stats = format!("n={} N={} W={}", ds.len(), ds.size(), ds.width());
    let text = format!("{ds}\n");
    match args.output {
        Some(path) => {
            write_output(&path, text.as_bytes())?;
            println!("{stats}");
        }
        None => {
            print!("{text}");
            eprintln!("{stats}");
        }
    }
    Ok(())
}

fn mutate(args: MutateArgs) -> Result<()> {
    let alphabet = args.common.alphabet()?;
    let pen = args.common.penalties;
    let ds = read_dstring(&args.text, &alphabet)?;
    let seeds = Seeds::derived(None, args.seed);
    let choice = extract_choice(&ds, seeds.member);
    let member = ds.member(&choice);
    let div = DivergenceSpec {
        snp_rate: args.snps,
        indel_rate: args.indels,
        seed: seeds.snp,
    }
    .apply(&member, &alphabet)?;
    let log = TruthLog::new(
        sha256_hex(ds.to_string().as_bytes()),
        &ds,
        &member,
        &choice,
        seeds,
        &pen,
        args.snps,
        args.indels,
        &div,
    );
    let truth_path = args.truth.unwrap_or_else(|| {
        let mut p = args.output.clone().into_os_string();
        p.push(".truth.json");
        p.into()
    });
    let mut pattern = div.pattern.clone();
    pattern.push(b'\n');
    write_output(&args.output, &pattern)?;
    let mut json = serde_json::to_vec_pretty(&log)?;
    json.push(b'\n');
    write_output(&truth_path, &json)?;
    println!(
        "length={} snps={} changed={} indels={} inserted={} deleted={}",
        div.pattern.len(),
        div.snps.positions.len(),
        div.snps.changed,
        div.indels.events.len(),
        div.indels.inserted,
        div.indels.deleted
    );
    Ok(())
}

fn bench(args: BenchArgs) -> Result<()> {
    let opts = BenchOptions {
        width: args.scale,
        grid: args.grid,
        divergences: args.divergence,
        seed: args.seed,
        penalties: args.common.penalties,
        alphabet: args.common.alphabet()?,
        timing: args.timing,
    };
    let cells = run_bench(&opts)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&cells)?);
    } else {
        print!("{}", render_table(&cells));
    }
    let failed = cells.iter().filter(|c| !c.passed()).count();
    if failed > 0 {
        return Err(
            VerificationFailure(format!("{failed} of {} cells failed", cells.len())).into(),
        );
    }
    Ok(())
}
