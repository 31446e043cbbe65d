//! Wavefront alignment of a string against a D-string.
//!
//! Scores are explored in increasing order. For every score `d` three
//! wavefronts are kept: `M` (any cell), `I` (cells ending an insertion run)
//! and `D` (cells ending a deletion run). Each maps a diagonal `k = u - v`
//! to the furthest cell reachable with score `d`, where `u` counts text
//! widths and `v` pattern characters. Within a degenerate letter the
//! furthest cell is tracked per variant, see [`DiagonalRecord`].
//!
//! ```
//! use dsalign::{wavefront::dwf_align, DString, Penalties};
//!
//! let ds: DString = "AC[GC/AT]A".parse().unwrap();
//! let aln = dwf_align(&ds, b"ACGTA", &Penalties::default()).unwrap();
//! assert_eq!(aln.distance, 1);
//! assert_eq!(aln.summary().to_string(), "4M 1X 0I 0D 0G");
//! ```

mod record;
mod traceback;

pub use record::{lambda_extend, DiagonalRecord};

use record::{apply_step, Step};

use crate::alignment::Alignment;
use crate::dstring::DString;
use crate::error::{Error, Result};
use crate::penalties::Penalties;

/// Records of one component over a contiguous diagonal range.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Band {
    lo: i64,
    records: Vec<Option<DiagonalRecord>>,
}

impl Band {
    fn from_fn(lo: i64, hi: i64, mut f: impl FnMut(i64) -> Option<DiagonalRecord>) -> Self {
        let mut records: Vec<_> = (lo..=hi).map(&mut f).collect();
        while records.last().is_some_and(Option::is_none) {
            records.pop();
        }
        let lead = records.iter().take_while(|r| r.is_none()).count();
        records.drain(..lead);
        Self {
            lo: lo + lead as i64,
            records,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Diagonal bounds, `None` when empty.
    pub fn bounds(&self) -> Option<(i64, i64)> {
        (!self.is_empty()).then(|| (self.lo, self.lo + self.records.len() as i64 - 1))
    }

    pub fn get(&self, k: i64) -> Option<&DiagonalRecord> {
        let i = usize::try_from(k - self.lo).ok()?;
        self.records.get(i)?.as_ref()
    }

    fn get_mut(&mut self, k: i64) -> Option<&mut DiagonalRecord> {
        let i = usize::try_from(k - self.lo).ok()?;
        self.records.get_mut(i)?.as_mut()
    }

    /// `(k, record)` for every stored diagonal.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &DiagonalRecord)> + '_ {
        self.records
            .iter()
            .enumerate()
            .filter_map(|(i, r)| Some((self.lo + i as i64, r.as_ref()?)))
    }
}

/// Which of the three wavefronts a record belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    M,
    I,
    D,
}

/// The three components for one score.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Wavefront {
    pub m: Band,
    pub i: Band,
    pub d: Band,
}

impl Wavefront {
    pub fn is_empty(&self) -> bool {
        self.m.is_empty() && self.i.is_empty() && self.d.is_empty()
    }

    pub fn band(&self, c: Component) -> &Band {
        match c {
            Component::M => &self.m,
            Component::I => &self.i,
            Component::D => &self.d,
        }
    }
}

/// Every wavefront computed during one run, indexed by score.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WavefrontSet {
    fronts: Vec<Wavefront>,
}

impl WavefrontSet {
    /// Number of scores computed, `d_max + 1`.
    pub fn len(&self) -> usize {
        self.fronts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fronts.is_empty()
    }

    pub fn front(&self, d: u32) -> Option<&Wavefront> {
        self.fronts.get(d as usize)
    }

    /// Record of component `c` at score `d` on diagonal `k`. Negative
    /// scores resolve to nothing.
    pub fn get(&self, c: Component, d: i64, k: i64) -> Option<&DiagonalRecord> {
        let d = usize::try_from(d).ok()?;
        self.fronts.get(d)?.band(c).get(k)
    }

    fn band_or_empty(&self, c: Component, d: i64) -> Option<&Band> {
        let d = usize::try_from(d).ok()?;
        Some(self.fronts.get(d)?.band(c)).filter(|b| !b.is_empty())
    }
}

/// Runs the wavefront recurrences for one pattern and D-string.
///
/// [`dwf_align`] drives this to completion; the step methods are public for
/// inspection and testing.
#[derive(Debug)]
pub struct WavefrontAligner<'a> {
    ds: &'a DString,
    p: &'a [u8],
    pen: Penalties,
    set: WavefrontSet,
    work: u64,
}

impl<'a> WavefrontAligner<'a> {
    pub fn new(ds: &'a DString, p: &'a [u8], pen: &Penalties) -> Result<Self> {
        pen.validate()?;
        if p.is_empty() {
            return Err(Error::EmptyInput("pattern"));
        }
        if ds.width() > u32::MAX as usize / 2 || p.len() > u32::MAX as usize / 2 {
            return Err(Error::Infeasible(
                "input longer than 2^31 characters".into(),
            ));
        }
        Ok(Self {
            ds,
            p,
            pen: *pen,
            set: WavefrontSet::default(),
            work: 0,
        })
    }

    pub fn set(&self) -> &WavefrontSet {
        &self.set
    }

    /// Offset-slot writes so far.
    pub fn work(&self) -> u64 {
        self.work
    }

    /// The diagonal holding the bottom-right cell, `W - m`.
    pub fn final_diagonal(&self) -> i64 {
        self.ds.width() as i64 - self.p.len() as i64
    }

    /// A score no alignment can exceed: delete all text, insert all pattern.
    pub fn score_bound(&self) -> u64 {
        let (o, e) = (u64::from(self.pen.gap_open), u64::from(self.pen.gap_extend));
        2 * o + (self.ds.width() + self.p.len()) as u64 * e
    }

    /// M record for score `d` before extension.
    pub(crate) fn seed_m(&self, d: i64, k: i64, work: &mut u64) -> Option<DiagonalRecord> {
        if d == 0 {
            return (k == 0).then(|| DiagonalRecord::fresh(self.ds, 0));
        }
        let m = self.p.len() as i64;
        let x = i64::from(self.pen.mismatch);
        let mis = self
            .set
            .get(Component::M, d - x, k)
            .and_then(|r| apply_step(r, Step::Mismatch, k, self.ds, m, work));
        let del = self.set.get(Component::D, d, k).cloned();
        let ins = self.set.get(Component::I, d, k).cloned();
        DiagonalRecord::merge(DiagonalRecord::merge(mis, del), ins)
    }

    /// Computes the gap components for score `d` and seeds its M component.
    /// Requires every lower score to be complete.
    pub fn next(&mut self, d: u32) {
        debug_assert_eq!(self.set.fronts.len(), d as usize);
        let di = i64::from(d);
        let m = self.p.len() as i64;
        let (x, o, e) = (
            i64::from(self.pen.mismatch),
            i64::from(self.pen.gap_open),
            i64::from(self.pen.gap_extend),
        );
        let mut work = 0;
        let mut gap = |src: [(Component, i64); 2], comp: Step| -> Band {
            let shift = comp.target(0);
            let bands: Vec<(Component, i64, &Band)> = src
                .iter()
                .filter_map(|&(c, sd)| Some((c, sd, self.set.band_or_empty(c, sd)?)))
                .collect();
            let Some((lo, hi)) = span(bands.iter().map(|b| b.2)) else {
                return Band::default();
            };
            Band::from_fn(lo + shift, hi + shift, |k| {
                bands.iter().fold(None, |acc, &(c, sd, _)| {
                    let r = self
                        .set
                        .get(c, sd, k - shift)
                        .and_then(|r| apply_step(r, comp, k - shift, self.ds, m, &mut work));
                    DiagonalRecord::merge(acc, r)
                })
            })
        };
        let del = gap(
            [(Component::M, di - o - e), (Component::D, di - e)],
            Step::Deletion,
        );
        let ins = gap(
            [(Component::M, di - o - e), (Component::I, di - e)],
            Step::Insertion,
        );
        self.set.fronts.push(Wavefront {
            m: Band::default(),
            i: ins,
            d: del,
        });

        let front = &self.set.fronts[d as usize];
        let mis_band = self.set.band_or_empty(Component::M, di - x);
        let m_band = if d == 0 {
            Band::from_fn(0, 0, |_| Some(DiagonalRecord::fresh(self.ds, 0)))
        } else {
            match span(
                [mis_band, Some(&front.i), Some(&front.d)]
                    .into_iter()
                    .flatten(),
            ) {
                None => Band::default(),
                Some((lo, hi)) => Band::from_fn(lo, hi, |k| self.seed_m(di, k, &mut work)),
            }
        };
        self.set.fronts[d as usize].m = m_band;
        self.work += work;
    }

    /// Runs exact-match extension on every M record of score `d`.
    pub fn extend(&mut self, d: u32) {
        let (ds, p) = (self.ds, self.p);
        let band = &mut self.set.fronts[d as usize].m;
        let Some((lo, hi)) = band.bounds() else {
            return;
        };
        for k in lo..=hi {
            if let Some(rec) = band.get_mut(k) {
                while lambda_extend(rec, k, ds, p, &mut self.work, None) {}
            }
        }
    }

    /// True once the M record on the final diagonal at score `d` reaches
    /// the end of both sequences.
    pub fn is_done(&self, d: u32) -> bool {
        self.set
            .get(Component::M, i64::from(d), self.final_diagonal())
            .is_some_and(|r| r.is_terminal(self.ds))
    }

    /// Iterates scores until the end cell is reached; returns the distance.
    pub fn run(&mut self) -> Result<u32> {
        let bound = self.score_bound();
        let mut d = self.set.len() as u32;
        loop {
            if u64::from(d) > bound {
                return Err(Error::Internal(format!(
                    "no alignment found within score bound {bound}"
                )));
            }
            self.next(d);
            self.extend(d);
            if self.is_done(d) {
                return Ok(d);
            }
            d += 1;
        }
    }

    /// Reconstructs the alignment ending at score `d`.
    pub fn traceback(&self, d: u32) -> Result<Alignment> {
        traceback::traceback(self, d)
    }
}

fn span<'b>(bands: impl IntoIterator<Item = &'b Band>) -> Option<(i64, i64)> {
    bands
        .into_iter()
        .filter_map(Band::bounds)
        .reduce(|(a, b), (c, d)| (a.min(c), b.max(d)))
}

/// Optimal alignment of `p` against any member of `ds`.
///
/// The result is checked before it is returned: events must consume both
/// sequences, reproduce the distance, replay against the chosen member, and
/// the member must belong to `ds`. A failed check is reported as
/// [`Error::Internal`].
pub fn dwf_align(ds: &DString, p: &[u8], pen: &Penalties) -> Result<Alignment> {
    dwf_align_with_set(ds, p, pen).map(|(a, _)| a)
}

/// As [`dwf_align`], also returning every wavefront computed.
pub fn dwf_align_with_set(
    ds: &DString,
    p: &[u8],
    pen: &Penalties,
) -> Result<(Alignment, WavefrontSet)> {
    let mut aligner = WavefrontAligner::new(ds, p, pen)?;
    let d = aligner.run()?;
    let aln = aligner.traceback(d)?;
    aln.verify(ds, p, pen)?;
    Ok((aln, aligner.set))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{gotoh_align, oracle_affine, DEFAULT_MEMBER_CAP};

    const PEN: Penalties = Penalties::new(0, 1, 2, 1);

    fn ds(s: &str) -> DString {
        s.parse().unwrap()
    }

    fn align(t: &str, p: &str) -> Alignment {
        dwf_align(&ds(t), p.as_bytes(), &PEN).unwrap()
    }

    #[test]
    fn member_aligns_at_zero() {
        let a = align("GCA[AT/CG]C[G/T]GG[TA/AA/AT]TT", "GCACGCTGGAATT");
        assert_eq!(a.distance, 0);
        assert_eq!(a.events.to_string(), "13M");
        assert_eq!(a.variant_path, [0, 0, 0, 1, 0, 1, 0, 0, 1, 0, 0]);
    }

    #[test]
    fn single_mismatch_in_letter() {
        let a = align("AC[GC/AT]A", "ACGTA");
        assert_eq!(a.distance, 1);
        let s = a.summary();
        assert_eq!((s.matches, s.mismatches, s.gap_opens), (4, 1, 0));
    }

    #[test]
    fn single_deletion() {
        let a = align("ACGT", "ACT");
        assert_eq!(a.distance, 3);
        assert_eq!(a.events.to_string(), "2M1D1M");
        assert_eq!(a.gap_opens(), 1);
    }

    #[test]
    fn three_base_deletion_is_one_gap() {
        let a = align("ACGTTTACGA", "ACGACGA");
        assert_eq!(a.distance, 5);
        let s = a.summary();
        assert_eq!((s.deletions, s.gap_opens), (3, 1));
    }

    #[test]
    fn no_artefact_match() {
        // ACAT would be free by reading AC from ACGG and AT from TTTT
        let a = align("[ACGG/TTTT]", "ACAT");
        assert_eq!(a.distance, 2);
        assert_eq!(
            oracle_affine(&ds("[ACGG/TTTT]"), b"ACAT", &PEN, 10)
                .unwrap()
                .distance,
            2
        );
    }

    #[test]
    fn width_and_pattern_lengths_differ() {
        for (t, p) in [
            ("A", "AAAAAA"),
            ("ACGTACGT", "T"),
            ("[AC/GT]", "CCCCC"),
            ("T", "G"),
        ] {
            let a = align(t, p);
            let o = oracle_affine(&ds(t), p.as_bytes(), &PEN, DEFAULT_MEMBER_CAP).unwrap();
            assert_eq!(a.distance, o.distance, "{t} vs {p}");
        }
    }

    #[test]
    fn solid_text_matches_gotoh() {
        let pens = [PEN, Penalties::new(0, 4, 6, 2), Penalties::new(0, 3, 0, 1)];
        let pairs = [
            ("GATTACA", "GCATGCT"),
            ("AAAA", "AATTTAA"),
            ("ACGTACGTTGCA", "ACGTTGCAACGT"),
            ("C", "CCCCCCCC"),
        ];
        for pen in pens {
            for (t, p) in pairs {
                let a = dwf_align(&ds(t), p.as_bytes(), &pen).unwrap();
                let (g, _) = gotoh_align(t.as_bytes(), p.as_bytes(), &pen);
                assert_eq!(a.distance, g, "{t} vs {p} under {pen}");
            }
        }
    }

    #[test]
    fn skipped_scores_leave_empty_wavefronts() {
        let pen = Penalties::new(0, 2, 2, 1);
        let d = ds("ACGT");
        let mut al = WavefrontAligner::new(&d, b"ACTT", &pen).unwrap();
        assert_eq!(al.run().unwrap(), 2);
        assert!(al.set().front(1).unwrap().is_empty());
    }

    #[test]
    fn first_gap_widens_band_both_ways() {
        let d = ds("ACGTACGT");
        let mut al = WavefrontAligner::new(&d, b"TTTTTTTT", &PEN).unwrap();
        al.run().unwrap();
        let f = al.set().front(3).unwrap();
        assert_eq!(f.d.bounds(), Some((1, 1)));
        assert_eq!(f.i.bounds(), Some((-1, -1)));
    }

    #[test]
    fn rejects_bad_input() {
        let d = ds("ACGT");
        assert!(matches!(
            dwf_align(&d, b"", &PEN),
            Err(Error::EmptyInput(_))
        ));
        assert!(matches!(
            dwf_align(&d, b"ACGT", &Penalties::new(1, 1, 2, 1)),
            Err(Error::InvalidPenalties(_))
        ));
    }

    #[test]
    fn work_is_linear_for_exact_match() {
        let text = "ACGT".repeat(250);
        let a = align(&text, &text);
        assert_eq!(a.distance, 0);
        assert!(a.work <= 3 * 1000, "work {}", a.work);
    }
}
