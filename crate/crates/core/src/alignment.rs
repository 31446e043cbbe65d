//! Alignment events and results shared by every aligner in the crate.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dstring::DString;
use crate::error::{Error, Result};
use crate::penalties::Penalties;

/// One alignment column. Insertions consume a pattern character only;
/// deletions consume a text character only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Match,
    Mismatch,
    Insertion,
    Deletion,
}

impl Op {
    pub fn code(self) -> char {
        match self {
            Op::Match => 'M',
            Op::Mismatch => 'X',
            Op::Insertion => 'I',
            Op::Deletion => 'D',
        }
    }

    pub fn from_code(c: char) -> Option<Self> {
        Some(match c {
            'M' | '=' => Op::Match,
            'X' => Op::Mismatch,
            'I' => Op::Insertion,
            'D' => Op::Deletion,
            _ => return None,
        })
    }

    pub fn consumes_text(self) -> bool {
        !matches!(self, Op::Insertion)
    }

    pub fn consumes_pattern(self) -> bool {
        !matches!(self, Op::Deletion)
    }

    pub fn is_gap(self) -> bool {
        matches!(self, Op::Insertion | Op::Deletion)
    }
}

/// Run-length encoded event list. Adjacent runs always carry different ops.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Events {
    runs: Vec<(Op, u32)>,
}

impl Events {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, op: Op, len: u32) {
        if len == 0 {
            return;
        }
        match self.runs.last_mut() {
            Some((last, n)) if *last == op => *n += len,
            _ => self.runs.push((op, len)),
        }
    }

    pub fn runs(&self) -> &[(Op, u32)] {
        &self.runs
    }

    /// Expanded, one op per column.
    pub fn ops(&self) -> impl Iterator<Item = Op> + '_ {
        self.runs
            .iter()
            .flat_map(|&(op, n)| std::iter::repeat(op).take(n as usize))
    }

    pub fn summary(&self) -> EventSummary {
        let mut s = EventSummary::default();
        for &(op, n) in &self.runs {
            let n = u64::from(n);
            match op {
                Op::Match => s.matches += n,
                Op::Mismatch => s.mismatches += n,
                Op::Insertion => s.insertions += n,
                Op::Deletion => s.deletions += n,
            }
            if op.is_gap() {
                s.gap_opens += 1;
            }
        }
        s
    }

    /// Score of this event list under `pen`.
    pub fn score(&self, pen: &Penalties) -> u64 {
        self.runs
            .iter()
            .map(|&(op, n)| {
                let n = u64::from(n);
                match op {
                    Op::Match => u64::from(pen.matching) * n,
                    Op::Mismatch => u64::from(pen.mismatch) * n,
                    Op::Insertion | Op::Deletion => {
                        u64::from(pen.gap_open) + n * u64::from(pen.gap_extend)
                    }
                }
            })
            .sum()
    }
}

impl FromIterator<Op> for Events {
    fn from_iter<I: IntoIterator<Item = Op>>(iter: I) -> Self {
        let mut ev = Events::new();
        for op in iter {
            ev.push(op, 1);
        }
        ev
    }
}

impl fmt::Display for Events {
    /// Compact run-length string such as `2M1D1M`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &(op, n) in &self.runs {
            write!(f, "{n}{}", op.code())?;
        }
        Ok(())
    }
}

impl FromStr for Events {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut ev = Events::new();
        let mut num = String::new();
        for c in s.chars() {
            if c.is_ascii_digit() {
                num.push(c);
                continue;
            }
            let op = Op::from_code(c)
                .ok_or_else(|| Error::Internal(format!("bad event code {c:?} in {s:?}")))?;
            let n = num
                .parse()
                .map_err(|_| Error::Internal(format!("missing run length in {s:?}")))?;
            ev.push(op, n);
            num.clear();
        }
        if !num.is_empty() {
            return Err(Error::Internal(format!("dangling run length in {s:?}")));
        }
        Ok(ev)
    }
}

/// Per-op counts plus the number of gap runs `G`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EventSummary {
    #[serde(rename = "M")]
    pub matches: u64,
    #[serde(rename = "X")]
    pub mismatches: u64,
    #[serde(rename = "I")]
    pub insertions: u64,
    #[serde(rename = "D")]
    pub deletions: u64,
    #[serde(rename = "G")]
    pub gap_opens: u64,
}

impl fmt::Display for EventSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}M {}X {}I {}D {}G",
            self.matches, self.mismatches, self.insertions, self.deletions, self.gap_opens
        )
    }
}

/// An optimal alignment of a pattern against one member of a D-string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    pub distance: u32,
    pub events: Events,
    /// Chosen variant per letter (0 for single-variant letters).
    pub variant_path: Vec<usize>,
    /// Offset-slot writes performed while aligning.
    pub work: u64,
}

impl Alignment {
    pub fn summary(&self) -> EventSummary {
        self.events.summary()
    }

    pub fn gap_opens(&self) -> u64 {
        self.summary().gap_opens
    }

    /// The member string selected by the variant path.
    pub fn member(&self, ds: &DString) -> Vec<u8> {
        ds.member(&self.variant_path)
    }

    /// Checks length bookkeeping, score reconstruction, replay fidelity and
    /// that the variant path picks a genuine member.
    pub fn verify(&self, ds: &DString, pattern: &[u8], pen: &Penalties) -> Result<()> {
        let fail = |msg: String| Err(Error::Internal(msg));
        let s = self.summary();
        if s.matches + s.mismatches + s.deletions != ds.width() as u64 {
            return fail(format!(
                "events consume {} text characters, width is {}",
                s.matches + s.mismatches + s.deletions,
                ds.width()
            ));
        }
        if s.matches + s.mismatches + s.insertions != pattern.len() as u64 {
            return fail(format!(
                "events consume {} pattern characters, pattern has {}",
                s.matches + s.mismatches + s.insertions,
                pattern.len()
            ));
        }
        let score = self.events.score(pen);
        if score != u64::from(self.distance) {
            return fail(format!(
                "events score {score}, distance is {}",
                self.distance
            ));
        }
        if self.variant_path.len() != ds.len()
            || self
                .variant_path
                .iter()
                .zip(ds.letters())
                .any(|(&h, l)| h >= l.variant_count())
        {
            return fail("variant path does not fit the D-string".into());
        }
        let text = self.member(ds);
        if !ds.contains(&text) {
            return fail("variant path member is not in the D-string".into());
        }
        let (mut i, mut j) = (0, 0);
        for op in self.events.ops() {
            match op {
                Op::Match | Op::Mismatch => {
                    let same = text[i] == pattern[j];
                    if same != (op == Op::Match) {
                        return fail(format!(
                            "{} at text {i}, pattern {j} does not replay",
                            op.code()
                        ));
                    }
                    i += 1;
                    j += 1;
                }
                Op::Insertion => j += 1,
                Op::Deletion => i += 1,
            }
        }
        Ok(())
    }
}
