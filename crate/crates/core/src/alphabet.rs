use crate::error::{Error, Result};

/// The set of characters a D-string or pattern may contain.
///
/// Any set of ASCII letters is allowed. `[`, `]` and `/` are reserved for
/// bracket notation and can never be members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<u8>,
    member: [bool; 256],
}

impl Alphabet {
    pub fn new(symbols: &[u8]) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet("no symbols".into()));
        }
        let mut member = [false; 256];
        let mut ordered = Vec::with_capacity(symbols.len());
        for &c in symbols {
            if !c.is_ascii_alphabetic() {
                return Err(Error::InvalidAlphabet(format!(
                    "{:?} is not an ASCII letter",
                    c as char
                )));
            }
            if member[c as usize] {
                return Err(Error::InvalidAlphabet(format!(
                    "{:?} listed twice",
                    c as char
                )));
            }
            member[c as usize] = true;
            ordered.push(c);
        }
        Ok(Self {
            symbols: ordered,
            member,
        })
    }

    /// `{A, C, G, T}`.
    pub fn dna() -> Self {
        Self::new(b"ACGT").expect("DNA alphabet is valid")
    }

    #[inline]
    pub fn contains(&self, c: u8) -> bool {
        self.member[c as usize]
    }

    /// Symbols in declaration order. Generators index into this slice, so the
    /// order is part of their reproducibility contract.
    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// First offending byte offset and character, if any.
    pub fn find_invalid(&self, text: &[u8]) -> Option<(usize, u8)> {
        text.iter()
            .position(|&c| !self.contains(c))
            .map(|i| (i, text[i]))
    }
}

impl Default for Alphabet {
    fn default() -> Self {
        Self::dna()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_reserved_and_duplicates() {
        assert!(Alphabet::new(b"AC[").is_err());
        assert!(Alphabet::new(b"A/").is_err());
        assert!(Alphabet::new(b"AA").is_err());
        assert!(Alphabet::new(b"").is_err());
    }

    #[test]
    fn custom_letters() {
        let a = Alphabet::new(b"ACDEFGHIKLMNPQRSTVWY").unwrap();
        assert!(a.contains(b'W'));
        assert!(!a.contains(b'B'));
        assert_eq!(a.find_invalid(b"ACXA"), Some((2, b'X')));
    }
}
