//! Words in the Bockstein `b` and the power operations `P^i` (written
//! `Sq^i` when p = 2), with degree, excess, and admissibility.

use crate::fp::Prime;
use crate::{Error, Result};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    /// The Bockstein. Never appears at p = 2, where `P(1)` plays its role.
    B,
    /// `P^i` at odd primes, `Sq^i` at p = 2; the index is at least 1.
    P(u32),
}

/// A composite of operations, leftmost letter applied last.
///
/// The empty word is the identity operation.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OperationWord(pub Vec<Letter>);

impl OperationWord {
    pub fn identity() -> OperationWord {
        OperationWord(Vec::new())
    }

    pub fn single(l: Letter) -> OperationWord {
        OperationWord(vec![l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self, p: Prime) -> u32 {
        self.0
            .iter()
            .map(|l| match *l {
                Letter::B => 1,
                Letter::P(i) => {
                    if p.is_two() {
                        i
                    } else {
                        2 * i * (p.get() - 1)
                    }
                }
            })
            .sum()
    }

    /// Excess. For a word with no power operations this is 1 when the word
    /// is a lone Bockstein and 0 when the word is empty.
    pub fn excess(&self, p: Prime) -> i64 {
        let Some(first_p) = self.0.iter().position(|l| matches!(l, Letter::P(_))) else {
            return if self.0.is_empty() { 0 } else { 1 };
        };
        let Letter::P(s1) = self.0[first_p] else { unreachable!() };
        if p.is_two() {
            let rest: i64 = self.0[first_p + 1..]
                .iter()
                .map(|l| match *l {
                    Letter::P(i) => i as i64,
                    Letter::B => 0,
                })
                .sum();
            s1 as i64 - rest
        } else {
            let eps0 = i64::from(first_p > 0);
            let tail = OperationWord(self.0[first_p + 1..].to_vec());
            2 * s1 as i64 + eps0 - tail.degree(p) as i64
        }
    }

    pub fn has_double_bockstein(&self) -> bool {
        self.0.windows(2).any(|w| w[0] == Letter::B && w[1] == Letter::B)
    }

    /// Admissibility: every adjacent pair of power operations, with an
    /// optional Bockstein between them, satisfies `a >= p*b + eps`, no two
    /// Bocksteins are adjacent, and every index is positive.
    pub fn is_admissible(&self, p: Prime) -> bool {
        if self.has_double_bockstein() {
            return false;
        }
        if self.0.iter().any(|l| *l == Letter::P(0)) {
            return false;
        }
        if p.is_two() && self.0.contains(&Letter::B) {
            return false;
        }
        let mut prev: Option<(u32, u32)> = None; // (index, eps after it so far)
        for l in &self.0 {
            match *l {
                Letter::B => {
                    if let Some((_, eps)) = prev.as_mut() {
                        *eps = 1;
                    }
                }
                Letter::P(b) => {
                    if let Some((a, eps)) = prev {
                        if a < p.get() * b + eps {
                            return false;
                        }
                    }
                    prev = Some((b, 0));
                }
            }
        }
        true
    }

    /// Render using `Sq` at p = 2 and `P`/`b` at odd primes; the identity
    /// prints as `1`.
    pub fn display(&self, p: Prime) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        let mut out = String::new();
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                out.push(' ');
            }
            match *l {
                Letter::B => out.push('b'),
                Letter::P(i) => {
                    let _ = write!(out, "{}{}", if p.is_two() { "Sq" } else { "P" }, i);
                }
            }
        }
        out
    }

    /// Space-free rendering used inside basis labels; the identity gives an
    /// empty string so a label can be the bare generator name.
    pub fn compact(&self, p: Prime) -> String {
        let mut out = String::new();
        for l in &self.0 {
            match *l {
                Letter::B => out.push('b'),
                Letter::P(i) => {
                    let _ = write!(out, "{}{}", if p.is_two() { "Sq" } else { "P" }, i);
                }
            }
        }
        out
    }

    /// Parse the format produced by [`display`](Self::display). Tokens are
    /// whitespace separated; `1` denotes the identity and must stand alone.
    pub fn parse(p: Prime, s: &str) -> Result<OperationWord> {
        let toks: Vec<&str> = s.split_whitespace().collect();
        if toks == ["1"] {
            return Ok(OperationWord::identity());
        }
        let mut letters = Vec::with_capacity(toks.len());
        for t in &toks {
            letters.push(parse_letter(p, t)?);
        }
        if letters.is_empty() {
            return Err(Error::Parse { line: 0, msg: "empty operation".into() });
        }
        Ok(OperationWord(letters))
    }
}

fn parse_letter(p: Prime, t: &str) -> Result<Letter> {
    let bad = |msg: String| Error::Parse { line: 0, msg };
    if t == "b" {
        if p.is_two() {
            return Err(bad("`b` is not used at p = 2; write Sq1".into()));
        }
        return Ok(Letter::B);
    }
    let (prefix, rest) = if let Some(r) = t.strip_prefix("Sq") {
        ("Sq", r)
    } else if let Some(r) = t.strip_prefix('P') {
        ("P", r)
    } else {
        return Err(bad(format!("unknown operation token `{t}`")));
    };
    if p.is_two() && prefix == "P" {
        return Err(bad(format!("`{t}`: use Sq notation at p = 2")));
    }
    if !p.is_two() && prefix == "Sq" {
        return Err(bad(format!("`{t}`: Sq notation is only for p = 2")));
    }
    let i: u32 = rest
        .parse()
        .map_err(|_| bad(format!("bad operation index in `{t}`")))?;
    if i == 0 {
        return Err(bad(format!("`{t}`: index must be positive (the identity is `1`)")));
    }
    Ok(Letter::P(i))
}
