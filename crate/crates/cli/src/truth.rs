//! Ground-truth log written by `dsalign mutate`, and the checks it implies
//! for a later alignment.
//!
//! Positions in the log are 1-based. SNP positions refer to the chosen
//! member; indel positions refer to the member after SNPs, which has the
//! same length.

use serde::{Deserialize, Serialize};

use dsalign::sim::{Divergence, IndelKind};
use dsalign::{DString, EventSummary, Penalties};

use crate::report::{sha256_hex, Seeds};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnpLog {
    pub rate: f64,
    pub positions: Vec<usize>,
    /// Base written at each position, in position order.
    pub bases: String,
    pub changed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndelLogEvent {
    pub kind: IndelKind,
    pub position: usize,
    pub bases: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndelLog {
    pub rate: f64,
    pub events: Vec<IndelLogEvent>,
    pub inserted: usize,
    pub deleted: usize,
}

/// What any optimal alignment of the mutated pattern must satisfy.
///
/// `distance_max` is the cost of the planted edits, which bounds the
/// optimum from above. The remaining fields are set only when the planted
/// edits are of a single kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub distance_max: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mismatches_max: Option<u64>,
    #[serde(default)]
    pub gap_free: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap_opens: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub net_insertions: Option<i64>,
}

impl Expected {
    pub fn from_divergence(div: &Divergence, pen: &Penalties) -> Self {
        let snps = div.snps.changed as u64;
        let events = div.indels.events.len() as u64;
        let indel_cost: u64 = div
            .indels
            .events
            .iter()
            .map(|e| u64::from(pen.gap(e.bases.len() as u32)))
            .sum();
        let distance_max = snps * u64::from(pen.mismatch) + indel_cost;
        let net = div.indels.inserted as i64 - div.indels.deleted as i64;
        match (snps > 0, events > 0) {
            (_, false) => Self {
                distance_max,
                mismatches_max: Some(snps),
                gap_free: true,
                gap_opens: None,
                net_insertions: None,
            },
            (false, true) => Self {
                distance_max,
                mismatches_max: Some(0),
                gap_free: false,
                gap_opens: Some(events),
                net_insertions: Some(net),
            },
            (true, true) => Self {
                distance_max,
                mismatches_max: None,
                gap_free: false,
                gap_opens: None,
                net_insertions: None,
            },
        }
    }

    /// Every expectation the alignment breaks, as readable messages.
    pub fn violations(&self, distance: u32, s: &EventSummary) -> Vec<String> {
        let mut out = Vec::new();
        if u64::from(distance) > self.distance_max {
            out.push(format!(
                "d={distance} exceeds planted cost {}",
                self.distance_max
            ));
        }
        if let Some(max) = self.mismatches_max {
            if s.mismatches > max {
                out.push(format!("X={} exceeds {max}", s.mismatches));
            }
        }
        if self.gap_free && (s.insertions > 0 || s.deletions > 0) {
            out.push(format!(
                "expected no gaps, got I={} D={}",
                s.insertions, s.deletions
            ));
        }
        if let Some(g) = self.gap_opens {
            if s.gap_opens != g {
                out.push(format!("G={} but {g} indels were planted", s.gap_opens));
            }
        }
        if let Some(net) = self.net_insertions {
            let got = s.insertions as i64 - s.deletions as i64;
            if got != net {
                out.push(format!("I-D={got} but planted net insertion is {net}"));
            }
        }
        out
    }
}

/// `letter:variant` pairs (1-based) for the degenerate letters of `ds`.
pub fn variant_picks(ds: &DString, choice: &[usize]) -> String {
    choice
        .iter()
        .enumerate()
        .filter(|&(j, _)| ds.letter(j).variant_count() > 1)
        .map(|(j, &h)| format!("{}:{}", j + 1, h + 1))
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthLog {
    pub text_sha256: String,
    pub member_sha256: String,
    pub pattern_sha256: String,
    pub seeds: Seeds,
    /// Variant chosen at each degenerate letter, as space-separated
    /// `letter:variant` pairs, both 1-based.
    pub variants: String,
    pub penalties: Penalties,
    pub snp: SnpLog,
    pub indel: IndelLog,
    pub expected: Expected,
}

impl TruthLog {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        text_sha256: String,
        ds: &DString,
        member: &[u8],
        choice: &[usize],
        seeds: Seeds,
        pen: &Penalties,
        snp_rate: f64,
        indel_rate: f64,
        div: &Divergence,
    ) -> Self {
        let text = |b: &[u8]| String::from_utf8_lossy(b).into_owned();
        Self {
            text_sha256,
            member_sha256: sha256_hex(member),
            pattern_sha256: sha256_hex(&div.pattern),
            seeds,
            variants: variant_picks(ds, choice),
            penalties: *pen,
            snp: SnpLog {
                rate: snp_rate,
                positions: div.snps.positions.iter().map(|p| p + 1).collect(),
                bases: text(&div.snps.bases),
                changed: div.snps.changed,
            },
            indel: IndelLog {
                rate: indel_rate,
                events: div
                    .indels
                    .events
                    .iter()
                    .map(|e| IndelLogEvent {
                        kind: e.kind,
                        position: e.position + 1,
                        bases: text(&e.bases),
                    })
                    .collect(),
                inserted: div.indels.inserted,
                deleted: div.indels.deleted,
            },
            expected: Expected::from_divergence(div, pen),
        }
    }
}
