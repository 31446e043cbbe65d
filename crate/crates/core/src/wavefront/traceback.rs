//! Backward walk from the end cell to the origin.
//!
//! A cell is `(letter, slot, u)`. Cells on a letter boundary
//! (`u == letter_start`) carry no slot: nothing of that letter has been
//! read yet, so every variant is still open. At each step the walk asks
//! which move produced the current cell, trying a match run first, then a
//! mismatch, a deletion and an insertion.

use super::record::{apply_step, lambda_extend, DiagonalRecord, Step};
use super::{Component, WavefrontAligner};
use crate::alignment::{Alignment, Events, Op};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Cell {
    letter: usize,
    slot: Option<usize>,
    u: u32,
}

struct Walk<'w, 'a> {
    al: &'w WavefrontAligner<'a>,
    ops: Vec<(Op, u32)>,
    path: Vec<Option<usize>>,
}

fn internal(msg: impl Into<String>) -> Error {
    Error::Internal(msg.into())
}

impl Walk<'_, '_> {
    fn cell(&self, letter: usize, slot: usize, u: u32) -> Cell {
        let boundary = letter == self.al.ds.len() || u as usize == self.al.ds.letter_start(letter);
        Cell {
            letter,
            slot: (!boundary).then_some(slot),
            u,
        }
    }

    fn choose(&mut self, letter: usize, slot: usize) -> Result<()> {
        match self.path[letter] {
            Some(h) if h != slot => Err(internal(format!(
                "letter {letter} read from variants {h} and {slot}"
            ))),
            _ => {
                self.path[letter] = Some(slot);
                Ok(())
            }
        }
    }

    fn holds(rec: Option<&DiagonalRecord>, c: Cell) -> bool {
        rec.is_some_and(|r| r.holds(c.letter, c.slot, c.u))
    }

    /// Source cell of a one-width move (mismatch or deletion) that lands on
    /// `c`, if `rec` can supply it. Records the variant read.
    fn source_of_advance(&mut self, rec: Option<&DiagonalRecord>, c: Cell) -> Result<Option<Cell>> {
        let Some(rec) = rec else { return Ok(None) };
        let found = match c.slot {
            Some(h) => rec
                .holds(c.letter, Some(h), c.u - 1)
                .then_some((c.letter, h)),
            None if c.letter > 0 => {
                let prev = c.letter - 1;
                (rec.letter == prev)
                    .then(|| rec.slot_at(c.u - 1))
                    .flatten()
                    .map(|h| (prev, h))
            }
            None => None,
        };
        match found {
            Some((letter, h)) => {
                self.choose(letter, h)?;
                Ok(Some(self.cell(letter, h, c.u - 1)))
            }
            None => Ok(None),
        }
    }

    fn advance_via(
        &mut self,
        rec: Option<&DiagonalRecord>,
        step: Step,
        k: i64,
        c: Cell,
    ) -> Result<Option<Cell>> {
        if produces(rec, step, k, c, self.al) {
            self.source_of_advance(rec, c)
        } else {
            Ok(None)
        }
    }

    fn emit(&mut self, op: Op, n: u32) {
        if n > 0 {
            self.ops.push((op, n));
        }
    }

    /// Undoes the extension of the M record at `(d, k)`, emitting the match
    /// run that ends at `c`. Returns the cell the run started from.
    fn unextend(&mut self, d: i64, k: i64, c: Cell) -> Result<Cell> {
        let ds = self.al.ds;
        let mut scratch = 0;
        let seed = self
            .al
            .seed_m(d, k, &mut scratch)
            .ok_or_else(|| internal(format!("no M seed at score {d}, diagonal {k}")))?;
        let mut rec = seed.clone();
        let mut log = Vec::new();
        while lambda_extend(&mut rec, k, ds, self.al.p, &mut scratch, Some(&mut log)) {}
        if !Self::holds(Some(&rec), c) {
            return Err(internal(format!(
                "cell {c:?} missing from extended M record at score {d}, diagonal {k}"
            )));
        }
        let origin = match log.first() {
            None => match c.slot {
                None => c,
                Some(h) => {
                    let u = seed.offsets[h].ok_or_else(|| internal("dead slot extended"))?;
                    if u < c.u {
                        self.choose(c.letter, h)?;
                    }
                    self.cell(c.letter, h, u)
                }
            },
            Some(&(first, h0)) => {
                for &(letter, h) in &log {
                    self.choose(letter, h)?;
                }
                if let Some(h) = c.slot {
                    self.choose(c.letter, h)?;
                }
                let u = seed.offsets[h0].ok_or_else(|| internal("dead slot crossed"))?;
                self.cell(first, h0, u)
            }
        };
        self.emit(Op::Match, c.u - origin.u);
        Ok(origin)
    }
}

/// True if applying `step` to `rec` (on diagonal `k`) yields a record
/// holding `c`.
fn produces(
    rec: Option<&DiagonalRecord>,
    step: Step,
    k: i64,
    c: Cell,
    al: &WavefrontAligner<'_>,
) -> bool {
    let mut scratch = 0;
    rec.and_then(|r| apply_step(r, step, k, al.ds, al.p.len() as i64, &mut scratch))
        .is_some_and(|out| out.holds(c.letter, c.slot, c.u))
}

pub(super) fn traceback(al: &WavefrontAligner<'_>, d_final: u32) -> Result<Alignment> {
    let ds = al.ds;
    let (x, o, e) = (
        i64::from(al.pen.mismatch),
        i64::from(al.pen.gap_open),
        i64::from(al.pen.gap_extend),
    );
    let mut walk = Walk {
        al,
        ops: Vec::new(),
        path: vec![None; ds.len()],
    };
    let mut comp = Component::M;
    let mut d = i64::from(d_final);
    let mut k = al.final_diagonal();
    let mut c = Cell {
        letter: ds.len(),
        slot: None,
        u: ds.width() as u32,
    };
    let set = &al.set;

    loop {
        match comp {
            Component::M => {
                let origin = walk.unextend(d, k, c)?;
                c = origin;
                if d == 0 {
                    if k != 0 || c.u != 0 {
                        return Err(internal(format!(
                            "walk ended at diagonal {k}, offset {}",
                            c.u
                        )));
                    }
                    break;
                }
                let mis_src = set.get(Component::M, d - x, k);
                let mis = if produces(mis_src, Step::Mismatch, k, c, al) {
                    walk.source_of_advance(mis_src, c)?
                } else {
                    None
                };
                if let Some(src) = mis {
                    walk.emit(Op::Mismatch, 1);
                    c = src;
                    d -= x;
                } else if Walk::holds(set.get(Component::D, d, k), c) {
                    comp = Component::D;
                } else if Walk::holds(set.get(Component::I, d, k), c) {
                    comp = Component::I;
                } else {
                    return Err(internal(format!(
                        "no move explains M cell {c:?} at score {d}, diagonal {k}"
                    )));
                }
            }
            Component::D => {
                walk.emit(Op::Deletion, 1);
                let open = set.get(Component::M, d - o - e, k - 1);
                let extend = set.get(Component::D, d - e, k - 1);
                if let Some(src) = walk.advance_via(open, Step::Deletion, k - 1, c)? {
                    comp = Component::M;
                    d -= o + e;
                    c = src;
                } else if let Some(src) = walk.advance_via(extend, Step::Deletion, k - 1, c)? {
                    d -= e;
                    c = src;
                } else {
                    return Err(internal(format!(
                        "no move explains D cell {c:?} at score {d}, diagonal {k}"
                    )));
                }
                k -= 1;
            }
            Component::I => {
                walk.emit(Op::Insertion, 1);
                let open = set.get(Component::M, d - o - e, k + 1);
                let extend = set.get(Component::I, d - e, k + 1);
                if produces(open, Step::Insertion, k + 1, c, al) {
                    comp = Component::M;
                    d -= o + e;
                } else if produces(extend, Step::Insertion, k + 1, c, al) {
                    d -= e;
                } else {
                    return Err(internal(format!(
                        "no move explains I cell {c:?} at score {d}, diagonal {k}"
                    )));
                }
                k += 1;
            }
        }
    }

    let mut events = Events::new();
    for &(op, n) in walk.ops.iter().rev() {
        events.push(op, n);
    }
    let variant_path = walk
        .path
        .iter()
        .enumerate()
        .map(|(i, h)| h.ok_or_else(|| internal(format!("letter {i} never read"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Alignment {
        distance: d_final,
        events,
        variant_path,
        work: al.work,
    })
}
