//! The benchmark grid: generate, extract, diverge, align and check, once per
//! (configuration, divergence) cell.
//!
//! Seeds for cell `(i, j)` with base seed `s`: the D-string of
//! configuration `i` uses `s + i`; the member for divergence `j` uses
//! `s + 1000 * (i + 1) + 10 * j`, and its SNP and indel draws use the next
//! two values.

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use dsalign::sim::{extract_choice, generate_dstring, DivergenceSpec, SimSpec};
use dsalign::{dwf_align, Alphabet, Penalties};

use crate::report::{peak_rss_kb, RunReport, Seeds, Timing};
use crate::truth::Expected;

/// Degeneracy, largest variant count and largest variant length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub g: f64,
    pub s: usize,
    pub l: usize,
}

impl GridConfig {
    pub const DEFAULT: [GridConfig; 5] = [
        GridConfig {
            g: 0.01,
            s: 2,
            l: 1,
        },
        GridConfig {
            g: 0.01,
            s: 5,
            l: 4,
        },
        GridConfig {
            g: 0.10,
            s: 2,
            l: 1,
        },
        GridConfig {
            g: 0.10,
            s: 5,
            l: 4,
        },
        GridConfig {
            g: 0.20,
            s: 2,
            l: 1,
        },
    ];
}

impl fmt::Display for GridConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.g, self.s, self.l)
    }
}

impl FromStr for GridConfig {
    type Err = String;

    /// `g:S:L`, for example `0.05:10:3`.
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [g, sv, l] = parts[..] else {
            return Err(format!("expected g:S:L, got {s:?}"));
        };
        let bad = |what: &str| format!("bad {what} in {s:?}");
        Ok(Self {
            g: g.parse().map_err(|_| bad("g"))?,
            s: sv.parse().map_err(|_| bad("S"))?,
            l: l.parse().map_err(|_| bad("L"))?,
        })
    }
}

/// How the pattern departs from its member.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "rate", rename_all = "lowercase")]
pub enum DivergenceKind {
    None,
    Snp(f64),
    Indel(f64),
}

impl DivergenceKind {
    pub const DEFAULT: [DivergenceKind; 4] = [
        DivergenceKind::None,
        DivergenceKind::Snp(0.001),
        DivergenceKind::Snp(0.01),
        DivergenceKind::Indel(0.001),
    ];

    fn rates(self) -> (f64, f64) {
        match self {
            DivergenceKind::None => (0.0, 0.0),
            DivergenceKind::Snp(r) => (r, 0.0),
            DivergenceKind::Indel(r) => (0.0, r),
        }
    }
}

impl fmt::Display for DivergenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivergenceKind::None => f.write_str("none"),
            DivergenceKind::Snp(r) => write!(f, "snp:{r}"),
            DivergenceKind::Indel(r) => write!(f, "indel:{r}"),
        }
    }
}

impl FromStr for DivergenceKind {
    type Err = String;

    /// `none`, `snp:<rate>` or `indel:<rate>`.
    fn from_str(s: &str) -> Result<Self, String> {
        let rate = |r: &str| -> Result<f64, String> {
            let v: f64 = r.parse().map_err(|_| format!("bad rate in {s:?}"))?;
            if (0.0..=1.0).contains(&v) {
                Ok(v)
            } else {
                Err(format!("rate {v} outside [0, 1]"))
            }
        };
        match s.split_once(':') {
            None if s == "none" => Ok(Self::None),
            Some(("snp", r)) => rate(r).map(Self::Snp),
            Some(("indel", r)) => rate(r).map(Self::Indel),
            _ => Err(format!(
                "expected none, snp:<rate> or indel:<rate>, got {s:?}"
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub width: usize,
    pub grid: Vec<GridConfig>,
    pub divergences: Vec<DivergenceKind>,
    pub seed: u64,
    pub penalties: Penalties,
    pub alphabet: Alphabet,
    pub timing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchCell {
    pub config: GridConfig,
    pub divergence: DivergenceKind,
    pub report: RunReport,
    pub expected: Expected,
    pub failures: Vec<String>,
}

impl BenchCell {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn cell_seeds(base: u64, config: usize, divergence: usize) -> Seeds {
    let member = base
        .wrapping_add(1000 * (config as u64 + 1))
        .wrapping_add(10 * divergence as u64);
    Seeds::derived(Some(base.wrapping_add(config as u64)), member)
}

/// Runs every cell, in parallel, and returns them in grid order:
/// configurations outermost, divergences innermost.
pub fn run_bench(opts: &BenchOptions) -> Result<Vec<BenchCell>> {
    if opts.grid.is_empty() || opts.divergences.is_empty() {
        bail!("empty benchmark grid");
    }
    let texts = opts
        .grid
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let spec = SimSpec {
                width: opts.width,
                degeneracy: c.g,
                max_variants: c.s,
                max_len: c.l,
                seed: opts.seed.wrapping_add(i as u64),
            };
            generate_dstring(&spec, &opts.alphabet).with_context(|| format!("configuration {c}"))
        })
        .collect::<Result<Vec<_>>>()?;

    let jobs: Vec<(usize, usize)> = (0..opts.grid.len())
        .flat_map(|i| (0..opts.divergences.len()).map(move |j| (i, j)))
        .collect();
    jobs.par_iter()
        .map(|&(i, j)| {
            let ds = &texts[i];
            let div_kind = opts.divergences[j];
            let seeds = cell_seeds(opts.seed, i, j);
            let choice = extract_choice(ds, seeds.member);
            let member = ds.member(&choice);
            let (snp_rate, indel_rate) = div_kind.rates();
            let div = DivergenceSpec {
                snp_rate,
                indel_rate,
                seed: seeds.snp,
            }
            .apply(&member, &opts.alphabet)?;
            let expected = Expected::from_divergence(&div, &opts.penalties);
            let started = Instant::now();
            let aln = dwf_align(ds, &div.pattern, &opts.penalties)?;
            let elapsed = started.elapsed().as_secs_f64();
            let mut report = RunReport::new(ds, &div.pattern, &opts.penalties, &aln);
            report.seeds = Some(seeds);
            if opts.timing {
                report.timing = Some(Timing {
                    wall_time_s: elapsed,
                    peak_rss_kb: peak_rss_kb(),
                });
            }
            let failures = expected.violations(aln.distance, &aln.summary());
            Ok(BenchCell {
                config: opts.grid[i],
                divergence: div_kind,
                report,
                expected,
                failures,
            })
        })
        .collect()
}

/// Plain-text table, one row per cell.
pub fn render_table(cells: &[BenchCell]) -> String {
    let mut out = String::new();
    let timed = cells.iter().any(|c| c.report.timing.is_some());
    let _ = write!(
        out,
        "{:<13} {:<11} {:>8} {:>7} {:>6} {:>6} {:>4} {:>4} {:>4} {:>9}",
        "g:S:L", "divergence", "N", "n", "d", "X", "I", "D", "G", "work"
    );
    if timed {
        let _ = write!(out, " {:>9}", "time_ms");
    }
    out.push_str("  result\n");
    for c in cells {
        let r = &c.report;
        let s = &r.summary;
        let _ = write!(
            out,
            "{:<13} {:<11} {:>8} {:>7} {:>6} {:>6} {:>4} {:>4} {:>4} {:>9}",
            c.config.to_string(),
            c.divergence.to_string(),
            r.text.size,
            r.text.letters,
            r.distance,
            s.mismatches,
            s.insertions,
            s.deletions,
            s.gap_opens,
            r.work
        );
        if let Some(t) = r.timing {
            let _ = write!(out, " {:>9.3}", t.wall_time_s * 1e3);
        }
        if c.passed() {
            out.push_str("  pass\n");
        } else {
            let _ = writeln!(out, "  FAIL: {}", c.failures.join("; "));
        }
    }
    out
}
