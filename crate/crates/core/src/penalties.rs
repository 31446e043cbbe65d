use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Match, mismatch, gap-open and gap-extend scores. Distances are minimized,
/// and a gap run of length `k` costs `gap_open + k * gap_extend`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Penalties {
    #[serde(rename = "a")]
    pub matching: u32,
    #[serde(rename = "x")]
    pub mismatch: u32,
    #[serde(rename = "o")]
    pub gap_open: u32,
    #[serde(rename = "e")]
    pub gap_extend: u32,
}

impl Penalties {
    pub const fn new(matching: u32, mismatch: u32, gap_open: u32, gap_extend: u32) -> Self {
        Self {
            matching,
            mismatch,
            gap_open,
            gap_extend,
        }
    }

    /// Checks the constraints of the wavefront formulation: free matches and
    /// strictly positive mismatch and extension costs.
    pub fn validate(&self) -> Result<()> {
        if self.matching != 0 {
            return Err(Error::InvalidPenalties(format!(
                "match score must be 0, got {}",
                self.matching
            )));
        }
        if self.mismatch == 0 {
            return Err(Error::InvalidPenalties(
                "mismatch score must be at least 1".into(),
            ));
        }
        if self.gap_extend == 0 {
            return Err(Error::InvalidPenalties(
                "gap extension score must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Cost of a gap run of `len` characters.
    #[inline]
    pub fn gap(&self, len: u32) -> u32 {
        self.gap_open + len * self.gap_extend
    }

    #[inline]
    pub fn substitution(&self, a: u8, b: u8) -> u32 {
        if a == b {
            self.matching
        } else {
            self.mismatch
        }
    }
}

impl Default for Penalties {
    /// `a=0, x=1, o=2, e=1`.
    fn default() -> Self {
        Self::new(0, 1, 2, 1)
    }
}

impl fmt::Display for Penalties {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{}/{}/{}",
            self.matching, self.mismatch, self.gap_open, self.gap_extend
        )
    }
}

impl FromStr for Penalties {
    type Err = Error;

    /// Accepts `a/x/o/e` or `a,x,o,e`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(['/', ',']).map(str::trim).collect();
        let bad = || Error::InvalidPenalties(format!("expected a/x/o/e, got {s:?}"));
        if parts.len() != 4 {
            return Err(bad());
        }
        let mut v = [0u32; 4];
        for (slot, p) in v.iter_mut().zip(&parts) {
            *slot = p.parse().map_err(|_| bad())?;
        }
        Ok(Self::new(v[0], v[1], v[2], v[3]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_gap_cost() {
        let p = Penalties::default();
        assert_eq!(p.to_string(), "0/1/2/1");
        assert_eq!(p.gap(3), 5);
        assert!(p.validate().is_ok());
    }

    #[test]
    fn rejects_nonzero_match_and_free_ops() {
        assert!(Penalties::new(1, 1, 2, 1).validate().is_err());
        assert!(Penalties::new(0, 0, 2, 1).validate().is_err());
        assert!(Penalties::new(0, 1, 2, 0).validate().is_err());
        assert!(Penalties::new(0, 1, 0, 1).validate().is_ok());
    }

    #[test]
    fn parses_both_separators() {
        assert_eq!(
            "0/4/6/2".parse::<Penalties>().unwrap(),
            Penalties::new(0, 4, 6, 2)
        );
        assert_eq!(
            "0, 1, 2, 1".parse::<Penalties>().unwrap(),
            Penalties::default()
        );
        assert!("0/1/2".parse::<Penalties>().is_err());
        assert!("0/1/x/1".parse::<Penalties>().is_err());
    }
}
