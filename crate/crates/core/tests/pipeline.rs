//! Generate, extract, mutate and align at benchmark scale.

use std::time::Instant;

use dsalign::sim::{extract_member, generate_dstring, mutate_indels, mutate_snps, SimSpec};
use dsalign::{dwf_align, Alphabet, Penalties};

const CONFIGS: [(f64, usize, usize); 5] = [
    (0.01, 2, 1),
    (0.01, 5, 4),
    (0.10, 2, 1),
    (0.10, 5, 4),
    (0.20, 2, 1),
];

fn spec(width: usize, (g, s, l): (f64, usize, usize), seed: u64) -> SimSpec {
    SimSpec {
        width,
        degeneracy: g,
        max_variants: s,
        max_len: l,
        seed,
    }
}

#[test]
fn snp_runs_have_no_gaps() {
    let dna = Alphabet::dna();
    let pen = Penalties::default();
    for (i, cfg) in CONFIGS.into_iter().enumerate() {
        for seed in 0..3u64 {
            let ds = generate_dstring(&spec(10_000, cfg, seed + 10 * i as u64), &dna).unwrap();
            let p0 = extract_member(&ds, seed);
            let m = mutate_snps(&p0, 0.001, &dna, seed + 1).unwrap();
            let t = Instant::now();
            let a = dwf_align(&ds, &m.pattern, &pen).unwrap();
            let s = a.summary();
            eprintln!(
                "{cfg:?} seed {seed}: d={} {s} work={} {:?}",
                a.distance,
                a.work,
                t.elapsed()
            );
            assert_eq!((s.insertions, s.deletions), (0, 0));
            assert!(s.mismatches <= m.changed as u64);
            assert_eq!(u64::from(a.distance), s.mismatches);
        }
    }
}

#[test]
fn indel_runs_have_one_gap_per_event() {
    let dna = Alphabet::dna();
    let pen = Penalties::default();
    for (i, cfg) in CONFIGS.into_iter().enumerate() {
        for seed in 0..3u64 {
            let ds = generate_dstring(&spec(10_000, cfg, seed + 10 * i as u64), &dna).unwrap();
            let p0 = extract_member(&ds, seed);
            let m = mutate_indels(&p0, 0.001, &dna, seed + 2).unwrap();
            let t = Instant::now();
            let a = dwf_align(&ds, &m.pattern, &pen).unwrap();
            let s = a.summary();
            eprintln!(
                "{cfg:?} seed {seed}: d={} {s} work={} {:?}",
                a.distance,
                a.work,
                t.elapsed()
            );
            assert_eq!(s.gap_opens, m.events.len() as u64);
            assert_eq!(s.mismatches, 0);
            assert_eq!(
                s.insertions as i64 - s.deletions as i64,
                m.inserted as i64 - m.deleted as i64
            );
        }
    }
}

#[test]
fn full_width_exact_member() {
    let dna = Alphabet::dna();
    let ds = generate_dstring(&spec(100_000, CONFIGS[0], 1), &dna).unwrap();
    let p0 = extract_member(&ds, 1);
    let t = Instant::now();
    let a = dwf_align(&ds, &p0, &Penalties::default()).unwrap();
    eprintln!("W=100000: {:?} work={}", t.elapsed(), a.work);
    assert_eq!(a.distance, 0);
    assert_eq!(a.events.to_string(), "100000M");
}
