use crate::dstring::DString;

/// Furthest-reaching state of one diagonal, for one score and component.
///
/// `letter` is the letter holding the furthest cell. Inside a degenerate
/// letter every variant keeps its own offset, since cells of different
/// variants never dominate one another. Offsets are absolute text widths,
/// so a slot at `letter_start(letter)` sits on the letter boundary. A
/// record at `letter == n` is the terminal record with one slot at `W`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalRecord {
    pub letter: usize,
    pub offsets: Vec<Option<u32>>,
    pub abandoned: Vec<bool>,
}

impl DiagonalRecord {
    /// All slots of `letter` parked on its first width.
    pub fn fresh(ds: &DString, letter: usize) -> Self {
        let mut r = Self {
            letter,
            offsets: Vec::new(),
            abandoned: Vec::new(),
        };
        r.reset_fresh(ds, letter);
        r
    }

    /// In-place form of [`DiagonalRecord::fresh`]; reuses the allocations.
    pub(crate) fn reset_fresh(&mut self, ds: &DString, letter: usize) {
        let (arity, start) = if letter == ds.len() {
            (1, ds.width())
        } else {
            (ds.letter(letter).variant_count(), ds.letter_start(letter))
        };
        self.letter = letter;
        self.offsets.clear();
        self.offsets.resize(arity, Some(start as u32));
        self.abandoned.clear();
        self.abandoned.resize(arity, false);
    }

    pub fn is_terminal(&self, ds: &DString) -> bool {
        self.letter == ds.len()
    }

    /// Largest live offset.
    pub fn max_offset(&self) -> Option<u32> {
        self.offsets.iter().flatten().copied().max()
    }

    /// True if slot `h` holds `u`, or, for `h == None`, if any slot holds `u`.
    pub(crate) fn holds(&self, letter: usize, slot: Option<usize>, u: u32) -> bool {
        self.letter == letter
            && match slot {
                Some(h) => self.offsets.get(h).copied().flatten() == Some(u),
                None => self.offsets.contains(&Some(u)),
            }
    }

    /// First slot holding `u`.
    pub(crate) fn slot_at(&self, u: u32) -> Option<usize> {
        self.offsets.iter().position(|&o| o == Some(u))
    }

    /// Keeps the further of two records. On the same letter slots are
    /// combined one by one, keeping the larger offset.
    pub fn merge(a: Option<Self>, b: Option<Self>) -> Option<Self> {
        match (a, b) {
            (None, r) | (r, None) => r,
            (Some(a), Some(b)) => Some(match a.letter.cmp(&b.letter) {
                std::cmp::Ordering::Less => b,
                std::cmp::Ordering::Greater => a,
                std::cmp::Ordering::Equal => {
                    let mut out = a;
                    for (x, y) in out.offsets.iter_mut().zip(b.offsets) {
                        *x = (*x).max(y);
                    }
                    out.abandoned.iter_mut().for_each(|f| *f = false);
                    out
                }
            }),
        }
    }
}

/// The three moves that change the score.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Step {
    /// Same diagonal, one text and one pattern character.
    Mismatch,
    /// Diagonal `k + 1`, one text character.
    Deletion,
    /// Diagonal `k - 1`, one pattern character.
    Insertion,
}

impl Step {
    pub(crate) fn target(self, k: i64) -> i64 {
        match self {
            Step::Mismatch => k,
            Step::Deletion => k + 1,
            Step::Insertion => k - 1,
        }
    }
}

/// Applies `step` to every live slot of `rec`, which sits on diagonal `k`.
///
/// Slots whose move would leave the text or pattern die. If any slot steps
/// onto the end of its letter, the result is the fresh record of the next
/// letter.
pub(crate) fn apply_step(
    rec: &DiagonalRecord,
    step: Step,
    k: i64,
    ds: &DString,
    m: i64,
    work: &mut u64,
) -> Option<DiagonalRecord> {
    let n = ds.len();
    if rec.letter == n {
        let v = ds.width() as i64 - k;
        return (step == Step::Insertion && v < m).then(|| {
            *work += 1;
            DiagonalRecord::fresh(ds, n)
        });
    }
    let end = ds.letter_end(rec.letter) as u32;
    let mut crossed = false;
    let mut live = 0u64;
    let offsets: Vec<Option<u32>> = rec
        .offsets
        .iter()
        .map(|&slot| {
            let u = slot?;
            let v = i64::from(u) - k;
            let next = match step {
                Step::Mismatch if v < m => u + 1,
                Step::Deletion => u + 1,
                Step::Insertion if v < m => u,
                _ => return None,
            };
            live += 1;
            crossed |= next == end;
            Some(next)
        })
        .collect();
    if live == 0 {
        return None;
    }
    *work += live;
    if crossed {
        return Some(DiagonalRecord::fresh(ds, rec.letter + 1));
    }
    let arity = offsets.len();
    Some(DiagonalRecord {
        letter: rec.letter,
        offsets,
        abandoned: vec![false; arity],
    })
}

/// One column of exact-match extension on diagonal `k`.
///
/// Every slot that is neither dead nor abandoned compares its next text
/// character with the pattern. A match advances the slot, a mismatch (or
/// an exhausted pattern) abandons it for the rest of this extension. When
/// a slot reaches the end of the letter, the record moves to the fresh
/// state of the next letter and the crossing slot is appended to `log`.
/// Returns whether any slot advanced.
pub fn lambda_extend(
    rec: &mut DiagonalRecord,
    k: i64,
    ds: &DString,
    p: &[u8],
    work: &mut u64,
    log: Option<&mut Vec<(usize, usize)>>,
) -> bool {
    let j = rec.letter;
    if j == ds.len() {
        return false;
    }
    let letter = ds.letter(j);
    let start = ds.letter_start(j) as u32;
    let end = ds.letter_end(j) as u32;
    let mut advanced = false;
    let mut crossed = None;
    for h in 0..rec.offsets.len() {
        if rec.abandoned[h] {
            continue;
        }
        let Some(u) = rec.offsets[h] else {
            rec.abandoned[h] = true;
            continue;
        };
        let v = (i64::from(u) - k) as usize;
        if v >= p.len() || letter.symbol(h, (u - start) as usize) != p[v] {
            rec.abandoned[h] = true;
            continue;
        }
        rec.offsets[h] = Some(u + 1);
        *work += 1;
        advanced = true;
        if u + 1 == end && crossed.is_none() {
            crossed = Some(h);
        }
    }
    if let Some(h) = crossed {
        if let Some(log) = log {
            log.push((j, h));
        }
        rec.reset_fresh(ds, j + 1);
        *work += rec.offsets.len() as u64;
    }
    advanced
}
