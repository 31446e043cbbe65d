//! Seeded generators for random D-strings, ground-truth members and
//! divergent patterns.
//!
//! All randomness comes from [`SimRng`]: ChaCha8 seeded with
//! `seed_from_u64`, with bounded integers drawn by Lemire's multiply-shift
//! rejection method. Each generator documents the order of its draws, so
//! the streams can be reproduced by another implementation.

use std::collections::BTreeSet;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::alphabet::Alphabet;
use crate::dstring::{DString, DegenerateLetter};
use crate::error::{Error, Result};

/// Portable seeded random source.
#[derive(Debug, Clone)]
pub struct SimRng(ChaCha8Rng);

impl SimRng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `0..n`. `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        let mut m = u128::from(self.next_u64()) * u128::from(n);
        if (m as u64) < n {
            let threshold = n.wrapping_neg() % n;
            while (m as u64) < threshold {
                m = u128::from(self.next_u64()) * u128::from(n);
            }
        }
        (m >> 64) as u64
    }

    /// Uniform in `lo..=hi`.
    pub fn range_inclusive(&mut self, lo: u64, hi: u64) -> u64 {
        lo + self.below(hi - lo + 1)
    }

    /// `k` distinct values from `0..n` in increasing order (Floyd's method).
    pub fn sample_distinct(&mut self, n: u64, k: u64) -> Vec<u64> {
        assert!(k <= n, "cannot draw {k} distinct values from {n}");
        let mut set = BTreeSet::new();
        for j in n - k..n {
            let t = self.below(j + 1);
            if !set.insert(t) {
                set.insert(j);
            }
        }
        set.into_iter().collect()
    }

    fn symbol(&mut self, alphabet: &Alphabet) -> u8 {
        alphabet.symbols()[self.below(alphabet.len() as u64) as usize]
    }

    fn string(&mut self, alphabet: &Alphabet, len: usize) -> Vec<u8> {
        (0..len).map(|_| self.symbol(alphabet)).collect()
    }
}

/// Parameters of a random D-string.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSpec {
    /// Width `W`.
    pub width: usize,
    /// Fraction of `W` turned into degenerate letters, `g`.
    pub degeneracy: f64,
    /// Largest variant count `S` (at least 2).
    pub max_variants: usize,
    /// Largest variant length `L` (at least 1).
    pub max_len: usize,
    pub seed: u64,
}

impl SimSpec {
    /// `round(g * W)`.
    pub fn letter_count(&self) -> usize {
        (self.degeneracy * self.width as f64).round() as usize
    }

    /// Rejects parameters that are out of range or that could fail to fit:
    /// `c` windows of the longest length plus one separator between
    /// neighbours must fit in `W`, whatever lengths are drawn.
    pub fn validate(&self, alphabet: &Alphabet) -> Result<()> {
        let bad = |m: String| Err(Error::Infeasible(m));
        if self.width == 0 {
            return bad("width must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.degeneracy) {
            return bad(format!("degeneracy {} outside [0, 1]", self.degeneracy));
        }
        if self.max_variants < 2 {
            return bad("a degenerate letter needs at least 2 variants".into());
        }
        if self.max_len == 0 {
            return bad("variant length must be at least 1".into());
        }
        let c = self.letter_count();
        if c > 0 && alphabet.len() < 2 {
            return bad("a one-symbol alphabet cannot form two distinct variants".into());
        }
        let need = c
            .checked_mul(self.max_len)
            .and_then(|n| n.checked_add(c.saturating_sub(1)));
        match need {
            Some(n) if n <= self.width => Ok(()),
            _ => bad(format!(
                "{c} letters of length up to {} do not fit in width {}",
                self.max_len, self.width
            )),
        }
    }
}

/// Builds a random D-string of exact width `W`.
///
/// Draw order: the `W` base characters; the length of each of the
/// `c = round(g * W)` windows; `c` sorted distinct values that place the
/// windows, with at least one solid character between neighbours; then per
/// window its variant count in `2..=min(S, |Σ|^ℓ)` followed by the extra
/// variants, redrawing any duplicate. Variant 0 is always the replaced
/// substring.
pub fn generate_dstring(spec: &SimSpec, alphabet: &Alphabet) -> Result<DString> {
    spec.validate(alphabet)?;
    let mut rng = SimRng::new(spec.seed);
    let w = spec.width;
    let base = rng.string(alphabet, w);
    let c = spec.letter_count();
    let lens: Vec<usize> = (0..c)
        .map(|_| rng.range_inclusive(1, spec.max_len as u64) as usize)
        .collect();
    let total: usize = lens.iter().sum();
    let slack = w - total - c.saturating_sub(1);
    let picks = rng.sample_distinct((slack + c) as u64, c as u64);

    let mut letters = Vec::with_capacity(w);
    let mut u = 0;
    let mut placed = 0;
    for (i, (&y, &len)) in picks.iter().zip(&lens).enumerate() {
        let start = y as usize + placed;
        letters.extend(base[u..start].iter().map(|&ch| DegenerateLetter::solid(ch)));
        let original = &base[start..start + len];
        let cap = (alphabet.len() as u64)
            .checked_pow(len as u32)
            .map_or(spec.max_variants, |n| spec.max_variants.min(n as usize));
        let s = rng.range_inclusive(2, cap as u64) as usize;
        let mut variants = vec![original.to_vec()];
        while variants.len() < s {
            let v = rng.string(alphabet, len);
            if !variants.contains(&v) {
                variants.push(v);
            }
        }
        letters.push(
            DegenerateLetter::new(&variants)
                .map_err(|k| Error::Internal(format!("generated letter {i}: {k}")))?,
        );
        u = start + len;
        placed += len;
    }
    letters.extend(base[u..].iter().map(|&ch| DegenerateLetter::solid(ch)));
    DString::from_letters(letters)
}

/// One variant index per letter, uniform over each degenerate letter's
/// variants. Only letters with more than one variant consume a draw.
pub fn extract_choice(ds: &DString, seed: u64) -> Vec<usize> {
    let mut rng = SimRng::new(seed);
    ds.letters()
        .iter()
        .map(|l| match l.variant_count() {
            1 => 0,
            s => rng.below(s as u64) as usize,
        })
        .collect()
}

/// A uniformly chosen member of `ds`.
pub fn extract_member(ds: &DString, seed: u64) -> Vec<u8> {
    ds.member(&extract_choice(ds, seed))
}

fn event_count(rate: f64, n: usize) -> Result<usize> {
    if !(0.0..=1.0).contains(&rate) {
        return Err(Error::Infeasible(format!("rate {rate} outside [0, 1]")));
    }
    Ok((rate * n as f64).round() as usize)
}

/// Result of [`mutate_snps`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnpMutation {
    pub pattern: Vec<u8>,
    /// 0-based positions drawn, increasing.
    pub positions: Vec<usize>,
    /// The base written at each drawn position.
    pub bases: Vec<u8>,
    /// Positions whose base actually changed.
    pub changed: usize,
}

/// Overwrites `round(rate * |p0|)` distinct positions with uniform bases.
/// A draw may repeat the original base, so `changed` can fall short of the
/// number of positions.
///
/// Draw order: the sorted positions, then one base per position.
pub fn mutate_snps(p0: &[u8], rate: f64, alphabet: &Alphabet, seed: u64) -> Result<SnpMutation> {
    let count = event_count(rate, p0.len())?;
    let mut rng = SimRng::new(seed);
    let positions: Vec<usize> = rng
        .sample_distinct(p0.len() as u64, count as u64)
        .into_iter()
        .map(|p| p as usize)
        .collect();
    let mut pattern = p0.to_vec();
    let mut bases = Vec::with_capacity(count);
    let mut changed = 0;
    for &pos in &positions {
        let b = rng.symbol(alphabet);
        changed += usize::from(pattern[pos] != b);
        pattern[pos] = b;
        bases.push(b);
    }
    Ok(SnpMutation {
        pattern,
        positions,
        bases,
        changed,
    })
}

/// Untouched bases [`mutate_indels`] keeps between consecutive events.
/// Events much closer than this can be bridged by a few mismatches more
/// cheaply than by two separate gaps, which would blur the
/// one-gap-per-event expectation.
pub const DEFAULT_INDEL_SPACING: usize = 32;

/// Longest indel drawn.
pub const MAX_INDEL_LEN: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndelKind {
    Insertion,
    Deletion,
}

/// One indel, located in the coordinates of the original pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndelEvent {
    pub kind: IndelKind,
    /// For insertions, the bases are inserted before this position; for
    /// deletions, this is the first removed position.
    pub position: usize,
    /// Inserted or removed bases.
    pub bases: Vec<u8>,
}

/// Result of [`mutate_indels`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndelMutation {
    pub pattern: Vec<u8>,
    pub events: Vec<IndelEvent>,
    pub inserted: usize,
    pub deleted: usize,
}

/// [`mutate_indels_spaced`] with [`DEFAULT_INDEL_SPACING`].
pub fn mutate_indels(
    p0: &[u8],
    rate: f64,
    alphabet: &Alphabet,
    seed: u64,
) -> Result<IndelMutation> {
    mutate_indels_spaced(p0, rate, DEFAULT_INDEL_SPACING, alphabet, seed)
}

/// Applies `round(rate * |p0|)` insertions or deletions of 1 to 3 bases,
/// each kind with probability 1/2, with at least `spacing` untouched bases
/// between consecutive events.
///
/// Draw order: per event its kind then its length; the sorted placement
/// values; then the bases of each insertion in event order.
pub fn mutate_indels_spaced(
    p0: &[u8],
    rate: f64,
    spacing: usize,
    alphabet: &Alphabet,
    seed: u64,
) -> Result<IndelMutation> {
    let n = p0.len();
    let count = event_count(rate, n)?;
    let mut rng = SimRng::new(seed);
    let shapes: Vec<(IndelKind, usize)> = (0..count)
        .map(|_| {
            let kind = if rng.below(2) == 0 {
                IndelKind::Insertion
            } else {
                IndelKind::Deletion
            };
            (kind, rng.range_inclusive(1, MAX_INDEL_LEN as u64) as usize)
        })
        .collect();
    let footprint = |&(kind, len): &(IndelKind, usize)| match kind {
        IndelKind::Insertion => 0,
        IndelKind::Deletion => len,
    };
    let used: usize =
        shapes.iter().map(footprint).sum::<usize>() + count.saturating_sub(1) * spacing;
    let Some(slack) = n.checked_sub(used) else {
        return Err(Error::Infeasible(format!(
            "{count} indels spaced {spacing} apart do not fit in {n} bases"
        )));
    };
    let picks = rng.sample_distinct((slack + count) as u64, count as u64);

    let mut events = Vec::with_capacity(count);
    let mut offset = 0;
    for (i, (&y, shape)) in picks.iter().zip(&shapes).enumerate() {
        let position = y as usize - i + offset;
        let (kind, len) = *shape;
        let bases = match kind {
            IndelKind::Insertion => rng.string(alphabet, len),
            IndelKind::Deletion => p0[position..position + len].to_vec(),
        };
        events.push(IndelEvent {
            kind,
            position,
            bases,
        });
        offset += footprint(shape) + spacing;
    }

    let mut pattern = Vec::with_capacity(n + count * MAX_INDEL_LEN);
    let (mut inserted, mut deleted, mut u) = (0, 0, 0);
    for ev in &events {
        pattern.extend_from_slice(&p0[u..ev.position]);
        u = ev.position;
        match ev.kind {
            IndelKind::Insertion => {
                pattern.extend_from_slice(&ev.bases);
                inserted += ev.bases.len();
            }
            IndelKind::Deletion => {
                u += ev.bases.len();
                deleted += ev.bases.len();
            }
        }
    }
    pattern.extend_from_slice(&p0[u..]);
    Ok(IndelMutation {
        pattern,
        events,
        inserted,
        deleted,
    })
}

/// SNP and indel rates for one pattern, as fractions of its length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceSpec {
    pub snp_rate: f64,
    pub indel_rate: f64,
    /// SNPs draw from `seed`, indels from `seed + 1`.
    pub seed: u64,
}

/// A pattern derived from a ground-truth member, with its edit log.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    pub pattern: Vec<u8>,
    pub snps: SnpMutation,
    pub indels: IndelMutation,
}

impl DivergenceSpec {
    /// Applies SNPs to `p0`, then indels (with the default spacing) to the
    /// result. Indel positions refer to the SNP-mutated pattern, which has
    /// the same length as `p0`.
    pub fn apply(&self, p0: &[u8], alphabet: &Alphabet) -> Result<Divergence> {
        let snps = mutate_snps(p0, self.snp_rate, alphabet, self.seed)?;
        let indels = mutate_indels(
            &snps.pattern,
            self.indel_rate,
            alphabet,
            self.seed.wrapping_add(1),
        )?;
        Ok(Divergence {
            pattern: indels.pattern.clone(),
            snps,
            indels,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(width: usize, g: f64, s: usize, l: usize, seed: u64) -> SimSpec {
        SimSpec {
            width,
            degeneracy: g,
            max_variants: s,
            max_len: l,
            seed,
        }
    }

    #[test]
    fn rng_is_reproducible_and_bounded() {
        let mut a = SimRng::new(7);
        let mut b = SimRng::new(7);
        for n in [1, 2, 3, 10, 1 << 40] {
            let x = a.below(n);
            assert_eq!(x, b.below(n));
            assert!(x < n);
        }
        let s = a.sample_distinct(10, 10);
        assert_eq!(s, (0..10).collect::<Vec<_>>());
        let s = a.sample_distinct(1000, 50);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn below_is_roughly_uniform() {
        let mut r = SimRng::new(1);
        let mut counts = [0u32; 3];
        for _ in 0..30_000 {
            counts[r.below(3) as usize] += 1;
        }
        assert!(
            counts.iter().all(|&c| (9_500..10_500).contains(&c)),
            "{counts:?}"
        );
    }

    #[test]
    fn sizes_follow_letter_count() {
        let dna = Alphabet::dna();
        let ds = generate_dstring(&spec(100_000, 0.01, 2, 1, 1), &dna).unwrap();
        assert_eq!((ds.width(), ds.size()), (100_000, 101_000));
        let ds = generate_dstring(&spec(100_000, 0.10, 2, 1, 1), &dna).unwrap();
        assert_eq!(ds.size(), 110_000);
        let ds = generate_dstring(&spec(100, 0.0, 3, 3, 1), &dna).unwrap();
        assert_eq!((ds.size(), ds.len()), (100, 100));
    }

    #[test]
    fn size_formula_and_spacing() {
        let dna = Alphabet::dna();
        for seed in 0..20 {
            let ds = generate_dstring(&spec(500, 0.2, 5, 3, seed), &dna).unwrap();
            assert_eq!(ds.width(), 500);
            let extra: usize = ds
                .letters()
                .iter()
                .map(|l| (l.variant_count() - 1) * l.width())
                .sum();
            assert_eq!(ds.size(), 500 + extra);
            let degenerate: Vec<bool> =
                ds.letters().iter().map(|l| l.variant_count() > 1).collect();
            assert_eq!(degenerate.iter().filter(|&&d| d).count(), 100);
            assert!(!degenerate.windows(2).any(|w| w[0] && w[1]));
            assert!(ds
                .letters()
                .iter()
                .all(|l| l.variant_count() <= 5 && l.width() <= 3));
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let dna = Alphabet::dna();
        let s = spec(2_000, 0.1, 5, 4, 42);
        assert_eq!(
            generate_dstring(&s, &dna).unwrap(),
            generate_dstring(&s, &dna).unwrap()
        );
        let other = spec(2_000, 0.1, 5, 4, 43);
        assert_ne!(
            generate_dstring(&s, &dna).unwrap(),
            generate_dstring(&other, &dna).unwrap()
        );
    }

    #[test]
    fn infeasible_specs() {
        let dna = Alphabet::dna();
        assert!(generate_dstring(&spec(100, 0.3, 2, 3, 0), &dna).is_err());
        assert!(generate_dstring(&spec(100, 0.1, 1, 1, 0), &dna).is_err());
        assert!(generate_dstring(&spec(100, 1.5, 2, 1, 0), &dna).is_err());
        assert!(generate_dstring(&spec(0, 0.0, 2, 1, 0), &dna).is_err());
        let one = Alphabet::new(b"A").unwrap();
        assert!(generate_dstring(&spec(100, 0.1, 2, 1, 0), &one).is_err());
        // the largest feasible load: 25 windows of 3 plus 24 separators
        assert!(generate_dstring(&spec(99, 25.0 / 99.0, 2, 3, 0), &dna).is_ok());
    }

    #[test]
    fn small_alphabet_caps_variant_count() {
        let ab = Alphabet::new(b"AB").unwrap();
        let ds = generate_dstring(&spec(60, 0.2, 9, 1, 3), &ab).unwrap();
        assert!(ds.letters().iter().all(|l| l.variant_count() <= 2));
    }

    #[test]
    fn extracted_member_belongs() {
        let dna = Alphabet::dna();
        let example: DString = "GCA[AT/CG]C[G/T]GG[TA/AA/AT]TT".parse().unwrap();
        let all: Vec<_> = example.members(100).collect();
        for seed in 0..20 {
            let m = extract_member(&example, seed);
            assert!(all.contains(&m));
            assert_eq!(m, extract_member(&example, seed));
        }
        let ds = generate_dstring(&spec(1_000, 0.1, 4, 2, 9), &dna).unwrap();
        assert!(ds.contains(&extract_member(&ds, 5)));
        let solid: DString = "ACGT".parse().unwrap();
        assert_eq!(extract_member(&solid, 3), b"ACGT");
    }

    #[test]
    fn snps() {
        let dna = Alphabet::dna();
        let p0 = SimRng::new(0).string(&dna, 100_000);
        let m = mutate_snps(&p0, 0.001, &dna, 11).unwrap();
        assert_eq!(m.positions.len(), 100);
        let diff = p0.iter().zip(&m.pattern).filter(|(a, b)| a != b).count();
        assert_eq!(diff, m.changed);
        assert!((50..=100).contains(&m.changed));
        assert_eq!(m, mutate_snps(&p0, 0.001, &dna, 11).unwrap());
        let none = mutate_snps(&p0, 0.0, &dna, 11).unwrap();
        assert_eq!((none.pattern == p0, none.changed), (true, 0));
        assert!(mutate_snps(&p0, -0.1, &dna, 0).is_err());
    }

    #[test]
    fn indels() {
        let dna = Alphabet::dna();
        let p0 = SimRng::new(0).string(&dna, 100_000);
        let m = mutate_indels(&p0, 0.001, &dna, 5).unwrap();
        assert_eq!(m.events.len(), 100);
        assert_eq!(m.pattern.len() + m.deleted, p0.len() + m.inserted);
        assert!(m.events.iter().all(|e| (1..=3).contains(&e.bases.len())));
        for w in m.events.windows(2) {
            let end = w[0].position
                + if w[0].kind == IndelKind::Deletion {
                    w[0].bases.len()
                } else {
                    0
                };
            assert!(w[1].position >= end + DEFAULT_INDEL_SPACING);
        }
        assert_eq!(m, mutate_indels(&p0, 0.001, &dna, 5).unwrap());
        let both = DivergenceSpec {
            snp_rate: 0.001,
            indel_rate: 0.001,
            seed: 4,
        }
        .apply(&p0, &dna)
        .unwrap();
        assert_eq!(both.snps, mutate_snps(&p0, 0.001, &dna, 4).unwrap());
        assert_eq!(
            both.indels,
            mutate_indels(&both.snps.pattern, 0.001, &dna, 5).unwrap()
        );
        let none = mutate_indels(&p0, 0.0, &dna, 5).unwrap();
        assert_eq!(none.pattern, p0);
        assert!(mutate_indels(&p0[..50], 0.1, &dna, 0).is_err());
        let tight = mutate_indels_spaced(&p0[..20], 0.1, 1, &dna, 0).unwrap();
        assert_eq!(tight.events.len(), 2);
    }
}
