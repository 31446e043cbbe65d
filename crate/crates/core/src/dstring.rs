//! Degenerate strings.
//!
//! A D-string is a sequence of *degenerate letters*; each letter is a
//! non-empty set of distinct variants that all share one length. A letter
//! with a single variant of length one is a *solid* position. Two lengths
//! matter throughout the crate:
//!
//! * the **width** `W`, the sum of letter lengths, which is the length of
//!   every member string, and
//! * the **size** `N`, the sum of `variants × length`, the number of stored
//!   characters.
//!
//! Positions along the width are 0-based. Each width position maps to the
//! letter that covers it and the column inside that letter.
//!
//! ```
//! use dsalign::DString;
//!
//! let ds: DString = "GCA[AT/CG]C[G/T]GG[TA/AA/AT]TT".parse().unwrap();
//! assert_eq!((ds.len(), ds.size(), ds.width()), (11, 20, 13));
//! assert_eq!(ds.member_count(), Some(12));
//! assert!(ds.contains(b"GCACGCTGGAATT"));
//! ```

use std::fmt;
use std::str::FromStr;

use crate::alphabet::Alphabet;
use crate::error::{Error, ParseError, ParseErrorKind, Result};

/// One position of a D-string: `s` distinct variants of common length `ℓ`.
///
/// Variants are stored back to back, so variant `h` occupies
/// `symbols[h * ℓ .. (h + 1) * ℓ]`. The variant order is the tuple order used
/// by every aligner in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DegenerateLetter {
    width: usize,
    symbols: Vec<u8>,
}

impl DegenerateLetter {
    pub fn new<V: AsRef<[u8]>>(variants: &[V]) -> Result<Self, ParseErrorKind> {
        let first = variants.first().ok_or(ParseErrorKind::EmptyBracket)?;
        let width = first.as_ref().len();
        if width == 0 {
            return Err(ParseErrorKind::EmptyVariant);
        }
        let mut symbols = Vec::with_capacity(width * variants.len());
        for (h, v) in variants.iter().enumerate() {
            let v = v.as_ref();
            if v.is_empty() {
                return Err(ParseErrorKind::EmptyVariant);
            }
            if v.len() != width {
                return Err(ParseErrorKind::UnequalVariantLengths);
            }
            if symbols.chunks_exact(width).take(h).any(|w| w == v) {
                return Err(ParseErrorKind::DuplicateVariant);
            }
            symbols.extend_from_slice(v);
        }
        Ok(Self { width, symbols })
    }

    pub fn solid(c: u8) -> Self {
        Self {
            width: 1,
            symbols: vec![c],
        }
    }

    /// Number of variants, `s`.
    #[inline]
    pub fn variant_count(&self) -> usize {
        self.symbols.len() / self.width
    }

    /// Common variant length, `ℓ`.
    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn is_solid(&self) -> bool {
        self.width == 1 && self.symbols.len() == 1
    }

    #[inline]
    pub fn variant(&self, h: usize) -> &[u8] {
        &self.symbols[h * self.width..(h + 1) * self.width]
    }

    pub fn variants(&self) -> impl Iterator<Item = &[u8]> + '_ {
        self.symbols.chunks_exact(self.width)
    }

    /// Character of variant `h` at column `col`.
    #[inline]
    pub fn symbol(&self, h: usize, col: usize) -> u8 {
        self.symbols[h * self.width + col]
    }
}

/// Where a width position lands: enclosing letter and column inside it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WidthPos {
    pub letter: usize,
    pub col: usize,
}

/// The characters readable at one width position, one per variant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WidthColumn {
    pub letter_id: usize,
    pub col: usize,
    pub chars: Vec<u8>,
}

/// An immutable degenerate string with cached metrics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DString {
    letters: Vec<DegenerateLetter>,
    /// `starts[i]` is the first width of letter `i`; `starts[n] == W`.
    starts: Vec<usize>,
    size: usize,
    width_index: Vec<WidthPos>,
}

impl DString {
    pub fn from_letters(letters: Vec<DegenerateLetter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::EmptyInput("D-string"));
        }
        let mut starts = Vec::with_capacity(letters.len() + 1);
        let mut width_index = Vec::new();
        let mut size = 0;
        for (i, l) in letters.iter().enumerate() {
            starts.push(width_index.len());
            size += l.variant_count() * l.width();
            width_index.extend((0..l.width()).map(|col| WidthPos { letter: i, col }));
        }
        starts.push(width_index.len());
        let ds = Self {
            letters,
            starts,
            size,
            width_index,
        };
        debug_assert!(ds.size >= ds.width() && ds.len() <= ds.width());
        Ok(ds)
    }

    /// Reads bracket notation, e.g. `GCA[AT/CG]C[G/T]GG[TA/AA/AT]TT`.
    ///
    /// Each bare character becomes its own solid letter. One trailing
    /// newline is ignored.
    pub fn parse(text: &[u8], alphabet: &Alphabet) -> Result<Self> {
        let text = strip_newline(text);
        let err = |kind, offset| Error::Parse(ParseError { kind, offset });
        if text.is_empty() {
            return Err(err(ParseErrorKind::Empty, 0));
        }

        let mut letters = Vec::new();
        let mut i = 0;
        while i < text.len() {
            match text[i] {
                b'[' => {
                    let open = i;
                    let mut variants: Vec<&[u8]> = Vec::new();
                    let mut start = i + 1;
                    i += 1;
                    loop {
                        let Some(&c) = text.get(i) else {
                            return Err(err(ParseErrorKind::UnbalancedBracket, open));
                        };
                        match c {
                            b'/' | b']' => {
                                let v = &text[start..i];
                                if v.is_empty() {
                                    let kind = if c == b']' && variants.is_empty() {
                                        ParseErrorKind::EmptyBracket
                                    } else {
                                        ParseErrorKind::EmptyVariant
                                    };
                                    let at = if kind == ParseErrorKind::EmptyBracket {
                                        open
                                    } else {
                                        i
                                    };
                                    return Err(err(kind, at));
                                }
                                if let Some(first) = variants.first() {
                                    if first.len() != v.len() {
                                        return Err(err(
                                            ParseErrorKind::UnequalVariantLengths,
                                            start,
                                        ));
                                    }
                                }
                                if variants.contains(&v) {
                                    return Err(err(ParseErrorKind::DuplicateVariant, start));
                                }
                                variants.push(v);
                                start = i + 1;
                                if c == b']' {
                                    break;
                                }
                            }
                            b'[' => return Err(err(ParseErrorKind::NestedBracket, i)),
                            c if !alphabet.contains(c) => {
                                return Err(err(ParseErrorKind::InvalidChar(c as char), i))
                            }
                            _ => {}
                        }
                        i += 1;
                    }
                    letters.push(DegenerateLetter::new(&variants).map_err(|k| err(k, open))?);
                }
                b']' => return Err(err(ParseErrorKind::UnbalancedBracket, i)),
                b'/' => return Err(err(ParseErrorKind::StraySeparator, i)),
                c if alphabet.contains(c) => letters.push(DegenerateLetter::solid(c)),
                c => return Err(err(ParseErrorKind::InvalidChar(c as char), i)),
            }
            i += 1;
        }
        Self::from_letters(letters)
    }

    /// Number of letters, `n`.
    #[inline]
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    /// Always false: a D-string has at least one letter.
    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Total width `W`.
    #[inline]
    pub fn width(&self) -> usize {
        self.width_index.len()
    }

    /// Total size `N`.
    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn letters(&self) -> &[DegenerateLetter] {
        &self.letters
    }

    #[inline]
    pub fn letter(&self, i: usize) -> &DegenerateLetter {
        &self.letters[i]
    }

    /// First width covered by letter `i`. `letter_start(n)` is `W`.
    #[inline]
    pub fn letter_start(&self, i: usize) -> usize {
        self.starts[i]
    }

    /// One past the last width covered by letter `i`.
    #[inline]
    pub fn letter_end(&self, i: usize) -> usize {
        self.starts[i + 1]
    }

    #[inline]
    pub fn locate(&self, u: usize) -> WidthPos {
        self.width_index[u]
    }

    pub fn column(&self, u: usize) -> Result<WidthColumn> {
        let pos = *self.width_index.get(u).ok_or(Error::WidthOutOfRange {
            index: u,
            width: self.width(),
        })?;
        let l = &self.letters[pos.letter];
        Ok(WidthColumn {
            letter_id: pos.letter,
            col: pos.col,
            chars: (0..l.variant_count())
                .map(|h| l.symbol(h, pos.col))
                .collect(),
        })
    }

    /// The D-substring spanning widths `u1..=u2`. Both ends must sit on
    /// letter boundaries.
    pub fn dsubstring(&self, u1: usize, u2: usize) -> Result<Self> {
        for u in [u1, u2] {
            if u >= self.width() {
                return Err(Error::WidthOutOfRange {
                    index: u,
                    width: self.width(),
                });
            }
        }
        if u1 > u2 {
            return Err(Error::WidthOutOfRange {
                index: u1,
                width: u2 + 1,
            });
        }
        let first = self.locate(u1);
        if first.col != 0 {
            return Err(Error::SplitsLetter {
                index: u1,
                letter: first.letter,
            });
        }
        let last = self.locate(u2);
        if last.col + 1 != self.letters[last.letter].width() {
            return Err(Error::SplitsLetter {
                index: u2,
                letter: last.letter,
            });
        }
        Self::from_letters(self.letters[first.letter..=last.letter].to_vec())
    }

    /// Product of variant counts, or `None` if it overflows `u64`.
    pub fn member_count(&self) -> Option<u64> {
        self.letters
            .iter()
            .try_fold(1u64, |acc, l| acc.checked_mul(l.variant_count() as u64))
    }

    /// Members in lexicographic order of variant indices (first letter most
    /// significant), stopping after `cap` strings.
    pub fn members(&self, cap: usize) -> Members<'_> {
        Members::new(self, cap)
    }

    /// The member selected by one variant index per letter.
    pub fn member(&self, choice: &[usize]) -> Vec<u8> {
        assert_eq!(choice.len(), self.len(), "one choice per letter");
        let mut out = Vec::with_capacity(self.width());
        for (l, &h) in self.letters.iter().zip(choice) {
            out.extend_from_slice(l.variant(h));
        }
        out
    }

    /// True iff `t` is a member: it has length `W` and each letter's slice of
    /// `t` equals one of that letter's variants.
    pub fn contains(&self, t: &[u8]) -> bool {
        t.len() == self.width()
            && self.letters.iter().enumerate().all(|(i, l)| {
                let slice = &t[self.starts[i]..self.starts[i + 1]];
                l.variants().any(|v| v == slice)
            })
    }
}

fn strip_newline(text: &[u8]) -> &[u8] {
    let text = text.strip_suffix(b"\n").unwrap_or(text);
    text.strip_suffix(b"\r").unwrap_or(text)
}

impl FromStr for DString {
    type Err = Error;

    /// Parses over the DNA alphabet.
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s.as_bytes(), &Alphabet::dna())
    }
}

impl fmt::Display for DString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            if l.is_solid() {
                write!(f, "{}", l.symbol(0, 0) as char)?;
            } else {
                f.write_str("[")?;
                for (h, v) in l.variants().enumerate() {
                    if h > 0 {
                        f.write_str("/")?;
                    }
                    f.write_str(std::str::from_utf8(v).map_err(|_| fmt::Error)?)?;
                }
                f.write_str("]")?;
            }
        }
        Ok(())
    }
}

/// Iterator over member strings, see [`DString::members`].
pub struct Members<'a> {
    ds: &'a DString,
    /// Letters with more than one variant; only these drive the odometer.
    degenerate: Vec<usize>,
    choice: Vec<usize>,
    remaining: usize,
    done: bool,
    total: Option<u64>,
}

impl<'a> Members<'a> {
    fn new(ds: &'a DString, cap: usize) -> Self {
        Self {
            ds,
            degenerate: (0..ds.len())
                .filter(|&i| ds.letter(i).variant_count() > 1)
                .collect(),
            choice: vec![0; ds.len()],
            remaining: cap,
            done: false,
            total: ds.member_count(),
        }
    }

    /// Total number of members, `None` when uncountable in 64 bits.
    pub fn total(&self) -> Option<u64> {
        self.total
    }
}

impl Iterator for Members<'_> {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        if self.done || self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let out = self.ds.member(&self.choice);
        // advance the odometer, last degenerate letter fastest
        self.done = true;
        for &i in self.degenerate.iter().rev() {
            self.choice[i] += 1;
            if self.choice[i] < self.ds.letter(i).variant_count() {
                self.done = false;
                break;
            }
            self.choice[i] = 0;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = "GCA[AT/CG]C[G/T]GG[TA/AA/AT]TT";

    fn ds(s: &str) -> DString {
        s.parse().unwrap()
    }

    fn parse_err(s: &str) -> ParseError {
        match s.parse::<DString>() {
            Err(Error::Parse(e)) => e,
            other => panic!("expected parse error for {s:?}, got {other:?}"),
        }
    }

    #[test]
    fn example_metrics() {
        let d = ds(EXAMPLE);
        assert_eq!((d.len(), d.size(), d.width()), (11, 20, 13));
        let d = ds("CA[AT/CG]C[G/T]GG[TA/AA]T");
        assert_eq!((d.len(), d.width(), d.size()), (9, 11, 16));
        let d = ds("A");
        assert_eq!((d.len(), d.size(), d.width()), (1, 1, 1));
        assert!(d.letter(0).is_solid());
    }

    #[test]
    fn solid_positions_match_example() {
        let d = ds(EXAMPLE);
        let solid: Vec<usize> = (0..d.len())
            .filter(|&i| d.letter(i).is_solid())
            .map(|i| i + 1)
            .collect();
        assert_eq!(solid, [1, 2, 3, 5, 7, 8, 10, 11]);
        assert_eq!(d.letter(3).width(), 2);
        assert_eq!(d.letter(8).variant_count(), 3);
    }

    #[test]
    fn format_round_trip() {
        for s in [EXAMPLE, "A", "[A/C][G/T]", "[ACG]T", "T[AC/GG]"] {
            assert_eq!(ds(s).to_string(), s);
        }
    }

    #[test]
    fn trailing_newline_ignored() {
        assert_eq!(ds("AC[G/T]\n"), ds("AC[G/T]"));
        assert_eq!(ds("AC[G/T]\r\n"), ds("AC[G/T]"));
    }

    #[test]
    fn parse_errors_carry_offsets() {
        use ParseErrorKind::*;
        assert_eq!(parse_err("AC[GT").kind, UnbalancedBracket);
        assert_eq!(parse_err("AC[GT").offset, 2);
        assert_eq!(parse_err("ACG]T").offset, 3);
        assert_eq!(parse_err("A[]C").kind, EmptyBracket);
        assert_eq!(parse_err("A[A/]C").kind, EmptyVariant);
        assert_eq!(parse_err("A[/A]C").kind, EmptyVariant);
        let e = parse_err("A[AT/C]");
        assert_eq!((e.kind, e.offset), (UnequalVariantLengths, 5));
        let e = parse_err("A[AT/CG/AT]");
        assert_eq!((e.kind, e.offset), (DuplicateVariant, 8));
        let e = parse_err("ACNT");
        assert_eq!((e.kind, e.offset), (InvalidChar('N'), 2));
        assert_eq!(parse_err("A[C[G/T]]").kind, NestedBracket);
        assert_eq!(parse_err("A/C").kind, StraySeparator);
        assert_eq!(parse_err("").kind, Empty);
        assert_eq!(parse_err("\n").kind, Empty);
    }

    #[test]
    fn custom_alphabet() {
        let a = Alphabet::new(b"ACGTN").unwrap();
        let d = DString::parse(b"AN[N/C]", &a).unwrap();
        assert_eq!(d.width(), 3);
    }

    #[test]
    fn columns() {
        let d = ds(EXAMPLE);
        let c = d.column(2).unwrap();
        assert_eq!((c.chars.as_slice(), c.letter_id), (&b"A"[..], 2));
        let c = d.column(3).unwrap();
        assert_eq!(c.chars, b"AC");
        assert_eq!((c.letter_id, c.col), (3, 0));
        let c = d.column(4).unwrap();
        assert_eq!((c.chars.as_slice(), c.col), (&b"TG"[..], 1));
        assert_eq!(d.column(0).unwrap().chars, b"G");
        assert!(matches!(d.column(13), Err(Error::WidthOutOfRange { .. })));
    }

    #[test]
    fn width_index_is_monotone_and_total() {
        let d = ds(EXAMPLE);
        let mut counts = vec![0; d.len()];
        for u in 0..d.width() {
            let p = d.locate(u);
            counts[p.letter] += 1;
            if u > 0 {
                assert!(d.locate(u - 1).letter <= p.letter);
            }
        }
        for (i, c) in counts.into_iter().enumerate() {
            assert_eq!(c, d.letter(i).width());
        }
    }

    #[test]
    fn dsubstrings() {
        let d = ds(EXAMPLE);
        // widths 3..7 in 1-based terms
        assert_eq!(d.dsubstring(2, 6).unwrap().to_string(), "A[AT/CG]C[G/T]");
        assert_eq!(d.dsubstring(0, 12).unwrap(), d);
        assert_eq!(d.dsubstring(1, 1).unwrap().to_string(), "C");
        assert!(matches!(
            d.dsubstring(4, 6),
            Err(Error::SplitsLetter { .. })
        ));
        assert!(matches!(
            d.dsubstring(2, 3),
            Err(Error::SplitsLetter { .. })
        ));
        assert!(matches!(
            d.dsubstring(2, 13),
            Err(Error::WidthOutOfRange { .. })
        ));
        assert!(d.dsubstring(5, 2).is_err());
    }

    #[test]
    fn members_of_example() {
        let d = ds(EXAMPLE);
        let all: Vec<_> = d.members(usize::MAX).collect();
        assert_eq!(all.len(), 12);
        assert!(all.contains(&b"GCACGCTGGAATT".to_vec()));
        assert!(all.contains(&b"GCAATCTGGTATT".to_vec()));
        assert_eq!(d.members(5).count(), 5);
        assert_eq!(d.members(1).total(), Some(12));
    }

    #[test]
    fn members_small_product() {
        let got: Vec<_> = ds("[A/C][G/T]").members(100).collect();
        assert_eq!(
            got,
            [
                b"AG".to_vec(),
                b"AT".to_vec(),
                b"CG".to_vec(),
                b"CT".to_vec()
            ]
        );
        let solid = ds("ACGT");
        assert_eq!(solid.members(10).collect::<Vec<_>>(), [b"ACGT".to_vec()]);
    }

    #[test]
    fn uncountable_members() {
        let text = "[A/C]".repeat(70);
        let d = ds(&text);
        assert_eq!(d.member_count(), None);
        assert_eq!(d.members(3).count(), 3);
    }

    #[test]
    fn membership() {
        let d = ds(EXAMPLE);
        assert!(d.contains(b"GCACGCTGGAATT"));
        assert!(!d.contains(b"GCAATCGGGTAT"));
        // AG mixes the AT and CG variants
        assert!(!d.contains(b"GCAAGCTGGTATT"));
        assert!(!d.members(100).any(|m| m == b"GCAAGCTGGTATT"));
    }

    #[test]
    fn duplicate_letter_constructor() {
        assert_eq!(
            DegenerateLetter::new(&[b"AC", b"AC"]),
            Err(ParseErrorKind::DuplicateVariant)
        );
        let empty: [&[u8]; 0] = [];
        assert_eq!(
            DegenerateLetter::new(&empty),
            Err(ParseErrorKind::EmptyBracket)
        );
    }
}
