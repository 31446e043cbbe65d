use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use dsalign::{Alignment, DString, EventSummary, Penalties};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Peak resident set size of this process in KiB, where the platform
/// reports it.
pub fn peak_rss_kb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TextInfo {
    /// Digest of the text in bracket notation, without a trailing newline.
    pub sha256: String,
    pub letters: usize,
    pub width: usize,
    pub size: usize,
}

impl TextInfo {
    pub fn new(ds: &DString) -> Self {
        Self {
            sha256: sha256_hex(ds.to_string().as_bytes()),
            letters: ds.len(),
            width: ds.width(),
            size: ds.size(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryInfo {
    pub sha256: String,
    pub length: usize,
}

/// Seeds behind a simulated run. `dstring` is absent when the text was not
/// generated in the same run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seeds {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dstring: Option<u64>,
    pub member: u64,
    pub snp: u64,
    pub indel: u64,
}

impl Seeds {
    /// The member seed and the two divergence seeds derived from `seed`.
    pub fn derived(dstring: Option<u64>, seed: u64) -> Self {
        Self {
            dstring,
            member: seed,
            snp: seed.wrapping_add(1),
            indel: seed.wrapping_add(2),
        }
    }
}

/// Measurements that differ between runs. Only reported on request, so
/// that default reports are byte-for-byte reproducible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_time_s: f64,
    pub peak_rss_kb: Option<u64>,
}

/// Machine-readable outcome of one alignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub distance: u32,
    pub summary: EventSummary,
    pub cigar: String,
    pub work: u64,
    pub penalties: Penalties,
    pub text: TextInfo,
    pub query: QueryInfo,
    /// Digest of the member chosen by the alignment.
    pub member_sha256: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Seeds>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_distance: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl RunReport {
    pub fn new(ds: &DString, pattern: &[u8], pen: &Penalties, aln: &Alignment) -> Self {
        Self {
            distance: aln.distance,
            summary: aln.summary(),
            cigar: aln.events.to_string(),
            work: aln.work,
            penalties: *pen,
            text: TextInfo::new(ds),
            query: QueryInfo {
                sha256: sha256_hex(pattern),
                length: pattern.len(),
            },
            member_sha256: sha256_hex(&aln.member(ds)),
            seeds: None,
            oracle_distance: None,
            timing: None,
        }
    }

    /// `d=<n>  <M>M <X>X <I>I <D>D <G>G`.
    pub fn human_line(&self) -> String {
        format!("d={}  {}", self.distance, self.summary)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let ds: DString = "AC[GC/AT]A".parse().unwrap();
        let pen = Penalties::default();
        let aln = dsalign::dwf_align(&ds, b"ACGTA", &pen).unwrap();
        let mut r = RunReport::new(&ds, b"ACGTA", &pen, &aln);
        assert_eq!(r.human_line(), "d=1  4M 1X 0I 0D 0G");
        let back: RunReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
        r.seeds = Some(Seeds::derived(Some(3), 9));
        r.oracle_distance = Some(1);
        r.timing = Some(Timing {
            wall_time_s: 0.1 + 0.2,
            peak_rss_kb: None,
        });
        let text = serde_json::to_string_pretty(&r).unwrap();
        assert!(text.contains("\"peak_rss_kb\": null"));
        let back: RunReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn digest_is_sha256() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
