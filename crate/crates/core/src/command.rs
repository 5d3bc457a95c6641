//! Commands: the finite binary strings a process-control computer transmits.
//!
//! A [`Command`] is a (possibly empty) sequence of bits. Concatenation is
//! associative with the empty command as identity, which makes the set of
//! all commands a free monoid; a session's command set is a finite subset
//! of it.
//!
//! Textual convention: a command renders as its bit string (`"0110"`), and
//! the empty command renders as the sentinel `-` so it survives
//! whitespace-delimited file formats. Parsing accepts both `-` and the
//! empty string.

use std::fmt;
use std::str::FromStr;

use indexmap::IndexSet;

use crate::error::{Error, Result};

/// A finite binary string, the unit of instrument control.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Command {
    bits: Vec<bool>,
}

impl Command {
    /// The empty command, identity for concatenation.
    pub fn empty() -> Self {
        Command { bits: Vec::new() }
    }

    /// Build from raw bits.
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        Command {
            bits: bits.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Concatenation `self ‖ other`.
    pub fn concat(&self, other: &Command) -> Command {
        let mut bits = Vec::with_capacity(self.bits.len() + other.bits.len());
        bits.extend_from_slice(&self.bits);
        bits.extend_from_slice(&other.bits);
        Command { bits }
    }

    /// Split into `(prefix of length mid, rest)`. Panics if `mid > len`.
    pub fn split_at(&self, mid: usize) -> (Command, Command) {
        let (a, b) = self.bits.split_at(mid);
        (Command { bits: a.to_vec() }, Command { bits: b.to_vec() })
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits.is_empty() {
            return f.write_str("-");
        }
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() || s == "-" {
            return Ok(Command::empty());
        }
        let mut bits = Vec::with_capacity(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => {
                    return Err(Error::FileFormat(format!(
                        "invalid character `{c}` at position {i} in command `{s}` \
                         (expected 0, 1, or the empty-command sentinel `-`)"
                    )));
                }
            }
        }
        Ok(Command { bits })
    }
}

/// A session's finite command set `B`, insertion-ordered.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CommandSet {
    inner: IndexSet<Command>,
}

impl CommandSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts, returning whether the command was new.
    pub fn insert(&mut self, c: Command) -> bool {
        self.inner.insert(c)
    }

    pub fn contains(&self, c: &Command) -> bool {
        self.inner.contains(c)
    }

    pub fn len(&self) -> usize {
        self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Command> {
        self.inner.iter()
    }

    /// Set equality irrespective of insertion order.
    pub fn same_set(&self, other: &CommandSet) -> bool {
        self.len() == other.len() && self.iter().all(|c| other.contains(c))
    }
}

impl FromIterator<Command> for CommandSet {
    fn from_iter<T: IntoIterator<Item = Command>>(iter: T) -> Self {
        CommandSet {
            inner: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a CommandSet {
    type Item = &'a Command;
    type IntoIter = indexmap::set::Iter<'a, Command>;

    fn into_iter(self) -> Self::IntoIter {
        self.inner.iter()
    }
}

/// A command split into preparation, evolution, and measurement parts,
/// `b = b_v ‖ b_U ‖ b_M`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FactoredCommand {
    pub b_v: Command,
    pub b_u: Command,
    pub b_m: Command,
}

impl FactoredCommand {
    pub fn new(b_v: Command, b_u: Command, b_m: Command) -> Self {
        FactoredCommand { b_v, b_u, b_m }
    }

    /// The flattened command `b_v ‖ b_U ‖ b_M`.
    pub fn flatten(&self) -> Command {
        self.b_v.concat(&self.b_u).concat(&self.b_m)
    }
}

impl fmt::Display for FactoredCommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}‖{}‖{}", self.b_v, self.b_u, self.b_m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cmd(s: &str) -> Command {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["-", "0", "1", "0101", "111000"] {
            assert_eq!(cmd(s).to_string(), s);
        }
        assert_eq!(cmd(""), Command::empty());
        assert_eq!(Command::empty().to_string(), "-");
    }

    #[test]
    fn parse_rejects_non_binary() {
        assert!("01x".parse::<Command>().is_err());
        assert!("2".parse::<Command>().is_err());
    }

    #[test]
    fn empty_is_identity() {
        let b = cmd("0110");
        assert_eq!(Command::empty().concat(&b), b);
        assert_eq!(b.concat(&Command::empty()), b);
    }

    #[test]
    fn factored_flattens_in_order() {
        let f = FactoredCommand::new(cmd("0"), cmd("11"), cmd("-"));
        assert_eq!(f.flatten(), cmd("011"));
    }

    #[test]
    fn command_set_same_set_ignores_order() {
        let a: CommandSet = [cmd("0"), cmd("1")].into_iter().collect();
        let b: CommandSet = [cmd("1"), cmd("0")].into_iter().collect();
        assert!(a.same_set(&b));
        let c: CommandSet = [cmd("1")].into_iter().collect();
        assert!(!a.same_set(&c));
    }

    proptest! {
        #[test]
        fn concat_associative(a in proptest::collection::vec(any::<bool>(), 0..12),
                              b in proptest::collection::vec(any::<bool>(), 0..12),
                              c in proptest::collection::vec(any::<bool>(), 0..12)) {
            let (a, b, c) = (Command::from_bits(a), Command::from_bits(b), Command::from_bits(c));
            prop_assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
        }

        #[test]
        fn display_parse_round_trip(bits in proptest::collection::vec(any::<bool>(), 0..24)) {
            let c = Command::from_bits(bits);
            let parsed: Command = c.to_string().parse().unwrap();
            prop_assert_eq!(parsed, c);
        }
    }
}
