//! Freely reduced words in a free group of fixed rank.
//!
//! Letters are signed 1-based generator indices: `+k` is `x<k>`, `-k` is
//! `x<k>^-1`. Every [`Word`] is kept freely reduced, so equality of words is
//! equality of group elements.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("generator index {index} is outside 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("rank must be positive")]
    ZeroRank,
    #[error("malformed token {token:?} at position {position}")]
    MalformedToken { token: String, position: usize },
}

/// A single generator or inverse generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(i32);

impl Letter {
    /// `x<index>` (1-based).
    pub fn gen(index: usize) -> Self {
        assert!(index >= 1 && index <= i32::MAX as usize, "letter index {index}");
        Letter(index as i32)
    }

    /// `x<index>^-1` (1-based).
    pub fn inv(index: usize) -> Self {
        Letter::gen(index).inverse()
    }

    pub fn signed(index: usize, positive: bool) -> Self {
        if positive {
            Letter::gen(index)
        } else {
            Letter::inv(index)
        }
    }

    pub fn index(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_positive() {
            write!(f, "x{}", self.index())
        } else {
            write!(f, "x{}^-1", self.index())
        }
    }
}

/// Reduced word in the free group of rank `rank`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

/// Pushes `letter` onto a reduced stack, cancelling against the top.
#[inline]
pub(crate) fn push_reduced(stack: &mut Vec<Letter>, letter: Letter) {
    if stack.last() == Some(&letter.inverse()) {
        stack.pop();
    } else {
        stack.push(letter);
    }
}

impl Word {
    pub fn empty(rank: usize) -> Self {
        Word { rank, letters: Vec::new() }
    }

    /// The basis letter `x<index>` as a word.
    pub fn generator(rank: usize, index: usize) -> Result<Self, WordError> {
        Word::reduce(rank, [(index, true)])
    }

    /// Freely reduces a sequence of `(index, positive)` pairs.
    pub fn reduce<I>(rank: usize, raw: I) -> Result<Self, WordError>
    where
        I: IntoIterator<Item = (usize, bool)>,
    {
        if rank == 0 {
            return Err(WordError::ZeroRank);
        }
        let mut letters = Vec::new();
        for (index, positive) in raw {
            if index == 0 || index > rank {
                return Err(WordError::IndexOutOfRange { index, rank });
            }
            push_reduced(&mut letters, Letter::signed(index, positive));
        }
        Ok(Word { rank, letters })
    }

    /// Reduces a sequence of letters that are already known to be in range.
    pub(crate) fn from_letters(rank: usize, raw: impl IntoIterator<Item = Letter>) -> Self {
        let mut letters = Vec::new();
        for letter in raw {
            debug_assert!(letter.index() >= 1 && letter.index() <= rank);
            push_reduced(&mut letters, letter);
        }
        Word { rank, letters }
    }

    pub(crate) fn from_reduced(rank: usize, letters: Vec<Letter>) -> Self {
        debug_assert!(letters.windows(2).all(|p| p[0] != p[1].inverse()));
        Word { rank, letters }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Result<Word, WordError> {
        if self.rank != other.rank {
            return Err(WordError::RankMismatch { left: self.rank, right: other.rank });
        }
        let mut letters = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut letters, l);
        }
        Ok(Word { rank: self.rank, letters })
    }

    pub fn inverse(&self) -> Word {
        Word { rank: self.rank, letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    /// Exponent sum of each generator, indexed from 0.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut sums = vec![0i64; self.rank];
        for l in &self.letters {
            sums[l.index() - 1] += if l.is_positive() { 1 } else { -1 };
        }
        sums
    }

    /// Parses the whitespace-separated text form (`x1 x2^-1`, or `1` for the
    /// empty word).
    pub fn parse(rank: usize, text: &str) -> Result<Word, WordError> {
        if rank == 0 {
            return Err(WordError::ZeroRank);
        }
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens == ["1"] {
            return Ok(Word::empty(rank));
        }
        let mut raw = Vec::with_capacity(tokens.len());
        for (position, token) in tokens.iter().enumerate() {
            let (index, positive) =
                parse_token(token).ok_or_else(|| WordError::MalformedToken { token: token.to_string(), position })?;
            raw.push((index, positive));
        }
        Word::reduce(rank, raw)
    }
}

fn parse_token(token: &str) -> Option<(usize, bool)> {
    let body = token.strip_prefix('x')?;
    let (digits, positive) = match body.strip_suffix("^-1") {
        Some(d) => (d, false),
        None => (body, true),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let index: usize = digits.parse().ok()?;
    if index == 0 {
        return None;
    }
    Some((index, positive))
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A parsed word whose rank is not yet fixed; used by [`FromStr`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnrankedWord(pub Vec<(usize, bool)>);

impl FromStr for UnrankedWord {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        if tokens == ["1"] {
            return Ok(UnrankedWord(Vec::new()));
        }
        tokens
            .iter()
            .enumerate()
            .map(|(position, token)| {
                parse_token(token).ok_or_else(|| WordError::MalformedToken { token: token.to_string(), position })
            })
            .collect::<Result<_, _>>()
            .map(UnrankedWord)
    }
}

// Serialized as the text form; the rank travels alongside in the
// enclosing document.
impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for UnrankedWord {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
