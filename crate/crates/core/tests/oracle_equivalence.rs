//! Randomized agreement between the wavefront aligner and exhaustive oracles.

use dsalign::oracle::{gotoh_align, oracle_affine, poa_align_linear};
use dsalign::{dwf_align, DString, DegenerateLetter, Penalties};
use proptest::prelude::*;

/// A D-string of up to `max_letters` letters over `ACGT`, each either solid
/// or holding 2..=3 distinct variants of length 1..=3.
fn dstring(max_letters: usize) -> impl Strategy<Value = DString> {
    let solid = prop::sample::select(b"ACGT".to_vec()).prop_map(DegenerateLetter::solid);
    let degenerate = (1usize..=3, 2usize..=3)
        .prop_flat_map(|(len, s)| prop::sample::subsequence(all_strings(len), s))
        .prop_map(|v| DegenerateLetter::new(&v).unwrap());
    prop::collection::vec(prop_oneof![3 => solid, 1 => degenerate], 1..=max_letters)
        .prop_map(|l| DString::from_letters(l).unwrap())
}

fn all_strings(len: usize) -> Vec<Vec<u8>> {
    (0..4usize.pow(len as u32))
        .map(|mut i| {
            (0..len)
                .map(|_| {
                    let c = b"ACGT"[i % 4];
                    i /= 4;
                    c
                })
                .collect()
        })
        .collect()
}

/// A member of `ds` with a few random edits applied.
fn near_member(ds: &DString, choice: &[usize], edits: &[(u8, usize, u8)]) -> Vec<u8> {
    let choice: Vec<usize> = choice
        .iter()
        .zip(ds.letters())
        .map(|(&c, l)| c % l.variant_count())
        .collect();
    let mut p = ds.member(&choice);
    for &(kind, pos, base) in edits {
        let base = b"ACGT"[base as usize % 4];
        let pos = pos % (p.len() + 1);
        match kind % 3 {
            0 if pos < p.len() => p[pos] = base,
            1 => p.insert(pos, base),
            _ if pos < p.len() && p.len() > 1 => {
                p.remove(pos);
            }
            _ => {}
        }
    }
    p
}

fn linear_nw(t: &[u8], p: &[u8], a: u32, x: u32, g: u32) -> u32 {
    let mut prev: Vec<u32> = (0..=p.len() as u32).map(|j| j * g).collect();
    for (i, &tc) in t.iter().enumerate() {
        let mut row = vec![(i as u32 + 1) * g; p.len() + 1];
        for j in 1..=p.len() {
            let s = if tc == p[j - 1] { a } else { x };
            row[j] = (prev[j - 1] + s).min(prev[j] + g).min(row[j - 1] + g);
        }
        prev = row;
    }
    prev[p.len()]
}

fn penalties() -> impl Strategy<Value = Penalties> {
    prop_oneof![
        3 => Just(Penalties::new(0, 1, 2, 1)),
        1 => (1u32..=6, 0u32..=6, 1u32..=3).prop_map(|(x, o, e)| Penalties::new(0, x, o, e)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3000))]

    #[test]
    fn wavefront_matches_member_enumeration(
        ds in dstring(14),
        choice in prop::collection::vec(0usize..3, 14),
        edits in prop::collection::vec((0u8..3, 0usize..64, 0u8..4), 0..5),
        pen in penalties(),
    ) {
        let p = near_member(&ds, &choice[..ds.len()], &edits);
        prop_assume!(!p.is_empty());
        let aln = dwf_align(&ds, &p, &pen).unwrap();
        let oracle = oracle_affine(&ds, &p, &pen, 100_000).unwrap();
        prop_assert_eq!(aln.distance, oracle.distance, "{} vs {}", ds, String::from_utf8_lossy(&p));
        aln.verify(&ds, &p, &pen).unwrap();
        prop_assert!(ds.contains(&aln.member(&ds)));
        prop_assert_eq!(aln.distance == 0, ds.contains(&p));
    }

    #[test]
    fn wavefront_on_unrelated_pattern(
        ds in dstring(10),
        p in prop::collection::vec(prop::sample::select(b"ACGT".to_vec()), 1..14),
        pen in penalties(),
    ) {
        let aln = dwf_align(&ds, &p, &pen).unwrap();
        let oracle = oracle_affine(&ds, &p, &pen, 100_000).unwrap();
        prop_assert_eq!(aln.distance, oracle.distance, "{} vs {}", ds, String::from_utf8_lossy(&p));
    }

    #[test]
    fn linear_poa_matches_member_enumeration(
        ds in dstring(12),
        p in prop::collection::vec(prop::sample::select(b"ACGT".to_vec()), 1..14),
        x in 1u32..4,
        g in 1u32..4,
    ) {
        let (d, _) = poa_align_linear(&ds, &p, 0, x, g);
        let best = ds.members(usize::MAX).map(|t| linear_nw(&t, &p, 0, x, g)).min().unwrap();
        prop_assert_eq!(d, best);
    }

    #[test]
    fn gotoh_events_reconstruct_score(
        t in prop::collection::vec(prop::sample::select(b"ACGT".to_vec()), 1..20),
        p in prop::collection::vec(prop::sample::select(b"ACGT".to_vec()), 1..20),
        pen in penalties(),
    ) {
        let (d, ev) = gotoh_align(&t, &p, &pen);
        prop_assert_eq!(ev.score(&pen), u64::from(d));
        let s = ev.summary();
        prop_assert_eq!(s.matches + s.mismatches + s.deletions, t.len() as u64);
        prop_assert_eq!(s.matches + s.mismatches + s.insertions, p.len() as u64);
    }
}
