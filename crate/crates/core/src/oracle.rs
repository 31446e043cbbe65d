//! Exact reference aligners.
//!
//! These are quadratic dynamic programs meant for small instances. They are
//! the ground truth the wavefront aligner is tested against.

use crate::alignment::{Events, Op};
use crate::dstring::DString;
use crate::error::{Error, Result};
use crate::penalties::Penalties;

/// Default ceiling on members enumerated by [`oracle_affine`].
pub const DEFAULT_MEMBER_CAP: u64 = 100_000;

/// Scores of the tuple partial-order DP under a flat gap cost.
///
/// Row `u` covers the first `u` text widths. Row 0 holds one score per
/// pattern prefix; row `u >= 1` holds, per pattern prefix, one score for
/// each variant of the letter covering width `u - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleDpTable {
    cols: usize,
    arity: Vec<usize>,
    rows: Vec<Vec<u32>>,
}

impl TupleDpTable {
    /// `W + 1`.
    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    /// `m + 1`.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn arity(&self, u: usize) -> usize {
        self.arity[u]
    }

    pub fn cell(&self, u: usize, v: usize) -> &[u32] {
        let a = self.arity[u];
        &self.rows[u][v * a..(v + 1) * a]
    }
}

/// Global alignment of `p` against the best member of `ds`, scoring matches
/// `a`, mismatches `x` and every gap character `g`.
///
/// A row that opens a letter reads the minimum over all slots of the row
/// above; inside a letter each slot only sees its own predecessor, so
/// variants are never mixed.
pub fn poa_align_linear(ds: &DString, p: &[u8], a: u32, x: u32, g: u32) -> (u32, TupleDpTable) {
    let m = p.len();
    let w = ds.width();
    let mut arity = Vec::with_capacity(w + 1);
    let mut rows = Vec::with_capacity(w + 1);
    arity.push(1);
    rows.push((0..=m as u32).map(|v| v * g).collect::<Vec<_>>());

    let mut pred = vec![0u32; 0];
    for u in 1..=w {
        let pos = ds.locate(u - 1);
        let letter = ds.letter(pos.letter);
        let s = letter.variant_count();
        let prev_s = arity[u - 1];
        let prev = &rows[u - 1];
        // predecessor score per (v, slot)
        pred.clear();
        pred.resize((m + 1) * s, 0);
        for v in 0..=m {
            if pos.col == 0 {
                let best = *prev[v * prev_s..(v + 1) * prev_s]
                    .iter()
                    .min()
                    .expect("non-empty tuple");
                pred[v * s..(v + 1) * s].fill(best);
            } else {
                debug_assert_eq!(prev_s, s);
                pred[v * s..(v + 1) * s].copy_from_slice(&prev[v * s..(v + 1) * s]);
            }
        }
        let mut row = vec![0u32; (m + 1) * s];
        row[..s].fill(u as u32 * g);
        for v in 1..=m {
            for h in 0..s {
                let c = letter.symbol(h, pos.col);
                let sub = if c == p[v - 1] { a } else { x };
                let diag = pred[(v - 1) * s + h] + sub;
                let del = pred[v * s + h] + g;
                let ins = row[(v - 1) * s + h] + g;
                row[v * s + h] = diag.min(del).min(ins);
            }
        }
        arity.push(s);
        rows.push(row);
    }
    let table = TupleDpTable {
        cols: m + 1,
        arity,
        rows,
    };
    let d = *table.cell(w, m).iter().min().expect("non-empty tuple");
    (d, table)
}

const INF: u32 = u32::MAX / 4;

/// Affine-gap global alignment of two plain strings (three matrices).
///
/// Deletions consume `t`, insertions consume `p`. The traceback prefers a
/// diagonal step, then a deletion, then an insertion.
pub fn gotoh_align(t: &[u8], p: &[u8], pen: &Penalties) -> (u32, Events) {
    let (n, m) = (t.len(), p.len());
    let (o, e) = (pen.gap_open, pen.gap_extend);
    let idx = |i: usize, j: usize| i * (m + 1) + j;
    let mut h = vec![INF; (n + 1) * (m + 1)];
    let mut del = vec![INF; (n + 1) * (m + 1)];
    let mut ins = vec![INF; (n + 1) * (m + 1)];
    h[0] = 0;
    for i in 1..=n {
        del[idx(i, 0)] = o + i as u32 * e;
        h[idx(i, 0)] = del[idx(i, 0)];
    }
    for j in 1..=m {
        ins[idx(0, j)] = o + j as u32 * e;
        h[idx(0, j)] = ins[idx(0, j)];
    }
    for i in 1..=n {
        for j in 1..=m {
            let dv = (h[idx(i - 1, j)] + o + e).min(del[idx(i - 1, j)] + e);
            let iv = (h[idx(i, j - 1)] + o + e).min(ins[idx(i, j - 1)] + e);
            let mv = h[idx(i - 1, j - 1)] + pen.substitution(t[i - 1], p[j - 1]);
            del[idx(i, j)] = dv;
            ins[idx(i, j)] = iv;
            h[idx(i, j)] = mv.min(dv).min(iv);
        }
    }

    #[derive(Clone, Copy, PartialEq)]
    enum State {
        H,
        D,
        I,
    }
    let mut ops = Vec::with_capacity(n + m);
    let (mut i, mut j, mut state) = (n, m, State::H);
    while i > 0 || j > 0 {
        match state {
            State::H => {
                let here = h[idx(i, j)];
                if i > 0
                    && j > 0
                    && here == h[idx(i - 1, j - 1)] + pen.substitution(t[i - 1], p[j - 1])
                {
                    ops.push(if t[i - 1] == p[j - 1] {
                        Op::Match
                    } else {
                        Op::Mismatch
                    });
                    i -= 1;
                    j -= 1;
                } else if i > 0 && here == del[idx(i, j)] {
                    state = State::D;
                } else {
                    state = State::I;
                }
            }
            State::D => {
                ops.push(Op::Deletion);
                let here = del[idx(i, j)];
                let opened = if i == 1 && j == 0 {
                    true
                } else {
                    here == h[idx(i - 1, j)] + o + e
                };
                if opened {
                    state = State::H;
                }
                i -= 1;
            }
            State::I => {
                ops.push(Op::Insertion);
                let here = ins[idx(i, j)];
                let opened = if j == 1 && i == 0 {
                    true
                } else {
                    here == h[idx(i, j - 1)] + o + e
                };
                if opened {
                    state = State::H;
                }
                j -= 1;
            }
        }
    }
    ops.reverse();
    (h[idx(n, m)], ops.into_iter().collect())
}

/// Distance only, in `O(|p|)` memory.
pub fn gotoh_distance(t: &[u8], p: &[u8], pen: &Penalties) -> u32 {
    let m = p.len();
    let (o, e) = (pen.gap_open, pen.gap_extend);
    let mut h: Vec<u32> = (0..=m as u32)
        .map(|j| if j == 0 { 0 } else { o + j * e })
        .collect();
    let mut del = vec![INF; m + 1];
    for (i, &tc) in t.iter().enumerate() {
        let mut diag = h[0];
        del[0] = o + (i as u32 + 1) * e;
        h[0] = del[0];
        let mut ins = INF;
        for j in 1..=m {
            del[j] = (h[j] + o + e).min(del[j] + e);
            ins = (h[j - 1] + o + e).min(ins + e);
            let mv = diag + pen.substitution(tc, p[j - 1]);
            diag = h[j];
            h[j] = mv.min(del[j]).min(ins);
        }
    }
    h[m]
}

/// Outcome of [`oracle_affine`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub distance: u32,
    /// The first member, in enumeration order, attaining `distance`.
    pub witness: Vec<u8>,
    pub members: u64,
}

/// Minimum affine-gap distance from `p` to any member of `ds`, by exhaustive
/// enumeration. Refuses D-strings with more than `cap` members.
pub fn oracle_affine(ds: &DString, p: &[u8], pen: &Penalties, cap: u64) -> Result<OracleResult> {
    let count = ds.member_count();
    match count {
        Some(c) if c <= cap => {}
        _ => {
            return Err(Error::TooManyMembers {
                count: count.map_or_else(|| "more than 2^64".to_string(), |c| c.to_string()),
                cap,
            })
        }
    }
    let mut best: Option<(u32, Vec<u8>)> = None;
    for t in ds.members(usize::MAX) {
        let d = gotoh_distance(&t, p, pen);
        if best.as_ref().map_or(true, |(b, _)| d < *b) {
            let done = d == 0;
            best = Some((d, t));
            if done {
                break;
            }
        }
    }
    let (distance, witness) = best.expect("a D-string has at least one member");
    Ok(OracleResult {
        distance,
        witness,
        members: count.unwrap_or(0),
    })
}
