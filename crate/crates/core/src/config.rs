//! TASEP configurations and the bonds where a move can fire.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rates::Rate;

/// Occupation of a single site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Site {
    Empty,
    Filled,
}

impl Site {
    pub fn is_filled(self) -> bool {
        self == Site::Filled
    }
}

/// A length-`n` particle configuration; index 0 is site 1.
///
/// The text form is a `0`/`1` string with the leftmost character for site 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    sites: Vec<Site>,
}

impl Configuration {
    pub fn new(sites: Vec<Site>) -> Self {
        Configuration { sites }
    }

    /// Decodes a state index: site `k` is filled iff bit `k - 1` is set.
    pub fn from_index(n: usize, index: usize) -> Self {
        let sites = (0..n)
            .map(|k| if index >> k & 1 == 1 { Site::Filled } else { Site::Empty })
            .collect();
        Configuration { sites }
    }

    pub fn index(&self) -> usize {
        self.sites
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_filled())
            .map(|(k, _)| 1usize << k)
            .sum()
    }

    /// All `2^n` configurations in state-index order.
    pub fn all(n: usize) -> impl Iterator<Item = Configuration> {
        (0..1usize << n).map(move |i| Configuration::from_index(n, i))
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    /// Site `k`, 1-based.
    pub fn site(&self, k: usize) -> Site {
        self.sites[k - 1]
    }

    pub fn particles(&self) -> usize {
        self.sites.iter().filter(|s| s.is_filled()).count()
    }

    /// Renders with `•` and `∘`, for human-facing output.
    pub fn to_glyphs(&self) -> String {
        self.sites
            .iter()
            .map(|s| if s.is_filled() { '•' } else { '∘' })
            .collect()
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.sites {
            f.write_str(if s.is_filled() { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Configuration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let sites = s
            .char_indices()
            .map(|(pos, c)| match c {
                '1' | '•' => Ok(Site::Filled),
                '0' | '∘' => Ok(Site::Empty),
                _ => Err(Error::Parse {
                    pos,
                    msg: format!("unexpected {c:?} in configuration"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Configuration { sites })
    }
}

/// A place where a transition can happen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bond {
    /// Injection at site 1.
    Entry,
    /// Hop from site `k` to site `k + 1`, `1 <= k <= n - 1`.
    Bulk(usize),
    /// Extraction at site `n`.
    Exit,
}

impl Bond {
    pub fn rate(self) -> Rate {
        match self {
            Bond::Entry => Rate::Alpha,
            Bond::Bulk(_) => Rate::One,
            Bond::Exit => Rate::Beta,
        }
    }

    pub fn is_active(self, c: &Configuration) -> bool {
        let n = c.len();
        match self {
            Bond::Entry => n >= 1 && c.site(1) == Site::Empty,
            Bond::Bulk(k) => {
                k >= 1 && k < n && c.site(k) == Site::Filled && c.site(k + 1) == Site::Empty
            }
            Bond::Exit => n >= 1 && c.site(n) == Site::Filled,
        }
    }

    /// The configuration reached by firing this bond. The bond must be active.
    pub fn apply(self, c: &Configuration) -> Configuration {
        debug_assert!(self.is_active(c), "{self} is not active in {c}");
        let mut sites = c.sites.clone();
        match self {
            Bond::Entry => sites[0] = Site::Filled,
            Bond::Bulk(k) => {
                sites[k - 1] = Site::Empty;
                sites[k] = Site::Filled;
            }
            Bond::Exit => {
                let n = sites.len();
                sites[n - 1] = Site::Empty;
            }
        }
        Configuration { sites }
    }
}

impl fmt::Display for Bond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bond::Entry => f.write_str("entry"),
            Bond::Bulk(k) => write!(f, "bulk({k})"),
            Bond::Exit => f.write_str("exit"),
        }
    }
}

/// Active bonds of `c`, left to right.
pub fn active_bonds(c: &Configuration) -> Vec<Bond> {
    let n = c.len();
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    if Bond::Entry.is_active(c) {
        out.push(Bond::Entry);
    }
    out.extend((1..n).map(Bond::Bulk).filter(|b| b.is_active(c)));
    if Bond::Exit.is_active(c) {
        out.push(Bond::Exit);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(s: &str) -> Configuration {
        s.parse().unwrap()
    }

    #[test]
    fn active_bond_examples() {
        assert_eq!(active_bonds(&cfg("00")), vec![Bond::Entry]);
        assert_eq!(active_bonds(&cfg("10")), vec![Bond::Bulk(1)]);
        assert_eq!(active_bonds(&cfg("01")), vec![Bond::Entry, Bond::Exit]);
        assert_eq!(active_bonds(&cfg("11")), vec![Bond::Exit]);
    }

    #[test]
    fn moves() {
        assert_eq!(Bond::Entry.apply(&cfg("01")), cfg("11"));
        assert_eq!(Bond::Bulk(2).apply(&cfg("0100")), cfg("0010"));
        assert_eq!(Bond::Exit.apply(&cfg("011")), cfg("010"));
    }

    #[test]
    fn index_round_trip() {
        for c in Configuration::all(4) {
            assert_eq!(Configuration::from_index(4, c.index()), c);
        }
        // site 1 is the least significant bit
        assert_eq!(cfg("100").index(), 1);
        assert_eq!(cfg("001").index(), 4);
    }

    #[test]
    fn glyphs_parse() {
        assert_eq!(cfg("•∘"), cfg("10"));
        assert_eq!(cfg("10").to_glyphs(), "•∘");
        assert!("1x".parse::<Configuration>().is_err());
    }
}
