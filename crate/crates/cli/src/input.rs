use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use dsalign::{Alphabet, DString};

pub fn read_dstring(path: &Path, alphabet: &Alphabet) -> Result<DString> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    DString::parse(&bytes, alphabet).with_context(|| format!("parsing {}", path.display()))
}

pub fn read_pattern(path: &Path, alphabet: &Alphabet) -> Result<Vec<u8>> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    parse_pattern(&bytes, alphabet).with_context(|| format!("parsing {}", path.display()))
}

/// Accepts raw text or FASTA. For FASTA only the first record is used and
/// its sequence lines are joined; raw text may end in one newline.
pub fn parse_pattern(bytes: &[u8], alphabet: &Alphabet) -> Result<Vec<u8>> {
    let (seq, base) = if bytes.first() == Some(&b'>') {
        let header_end = bytes
            .iter()
            .position(|&c| c == b'\n')
            .unwrap_or(bytes.len());
        let body = &bytes[(header_end + 1).min(bytes.len())..];
        let end = body
            .windows(2)
            .position(|w| w == b"\n>")
            .map_or(body.len(), |i| i + 1);
        let seq: Vec<u8> = body[..end]
            .iter()
            .copied()
            .filter(|c| !c.is_ascii_whitespace())
            .collect();
        (seq, None)
    } else {
        let raw = bytes.strip_suffix(b"\n").unwrap_or(bytes);
        let raw = raw.strip_suffix(b"\r").unwrap_or(raw);
        (raw.to_vec(), Some(()))
    };
    if seq.is_empty() {
        bail!("empty pattern");
    }
    if let Some((i, c)) = alphabet.find_invalid(&seq) {
        match base {
            Some(()) => bail!(
                "character {:?} is not in the alphabet at byte {i}",
                c as char
            ),
            None => bail!(
                "character {:?} is not in the alphabet at sequence position {}",
                c as char,
                i + 1
            ),
        }
    }
    Ok(seq)
}
