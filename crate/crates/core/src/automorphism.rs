//! Automorphisms of a free group, stored as images of the basis together
//! with the images under the inverse.
//!
//! Composition follows the right-action convention: in `a.then(&b)` the
//! automorphism `a` acts first, so `(a.then(b))(x) = b(a(x))`.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::word::{push_reduced, Letter, UnrankedWord, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("closure caps must be positive")]
    CapConfiguration,
    #[error("closure needs at least one generator")]
    NoGenerators,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeAutomorphism {
    rank: usize,
    images: Vec<Word>,
    inverse_images: Vec<Word>,
}

/// Substitutes each letter of `word` by its image (inverted for inverse
/// letters) and reduces.
fn substitute(images: &[Word], rank: usize, word: &Word) -> Word {
    let mut letters = Vec::with_capacity(word.len());
    for &l in word.letters() {
        let image = images[l.index() - 1].letters();
        if l.is_positive() {
            for &x in image {
                push_reduced(&mut letters, x);
            }
        } else {
            for &x in image.iter().rev() {
                push_reduced(&mut letters, x.inverse());
            }
        }
    }
    Word::from_reduced(rank, letters)
}

impl FreeAutomorphism {
    pub fn identity(rank: usize) -> Self {
        let basis: Vec<Word> = (1..=rank).map(|i| Word::from_letters(rank, [Letter::gen(i)])).collect();
        FreeAutomorphism { rank, images: basis.clone(), inverse_images: basis }
    }

    /// Validates that `images` and `inverse_images` describe mutually inverse
    /// endomorphisms.
    pub fn new(rank: usize, images: Vec<Word>, inverse_images: Vec<Word>) -> Result<Self, AutError> {
        if rank == 0 {
            return Err(WordError::ZeroRank.into());
        }
        for (what, list) in [("images", &images), ("inverse_images", &inverse_images)] {
            if list.len() != rank {
                return Err(AutError::InvalidAutomorphism(format!(
                    "{what} has {} entries, expected {rank}",
                    list.len()
                )));
            }
            if let Some(w) = list.iter().find(|w| w.rank() != rank) {
                return Err(AutError::RankMismatch { left: rank, right: w.rank() });
            }
        }
        let candidate = FreeAutomorphism { rank, images, inverse_images };
        for i in 1..=rank {
            let basis = Word::from_letters(rank, [Letter::gen(i)]);
            let forward_back = substitute(&candidate.inverse_images, rank, &candidate.images[i - 1]);
            if forward_back != basis {
                return Err(AutError::InvalidAutomorphism(format!(
                    "inverse_images applied to image of x{i} gives {forward_back}"
                )));
            }
            let back_forward = substitute(&candidate.images, rank, &candidate.inverse_images[i - 1]);
            if back_forward != basis {
                return Err(AutError::InvalidAutomorphism(format!(
                    "images applied to inverse image of x{i} gives {back_forward}"
                )));
            }
        }
        Ok(candidate)
    }

    /// Automorphism permuting the basis up to inversion: `x_i ↦ x_{perm[i]}^{±1}`.
    /// Indices are 0-based here.
    pub(crate) fn signed_permutation(rank: usize, perm: &[usize], positive: &[bool]) -> Self {
        let mut images = Vec::with_capacity(rank);
        let mut inverse_images = vec![Word::empty(rank); rank];
        for i in 0..rank {
            let target = perm[i];
            images.push(Word::from_letters(rank, [Letter::signed(target + 1, positive[i])]));
            inverse_images[target] = Word::from_letters(rank, [Letter::signed(i + 1, positive[i])]);
        }
        FreeAutomorphism { rank, images, inverse_images }
    }

    /// Builds from trusted images; callers guarantee validity.
    pub(crate) fn from_parts(rank: usize, images: Vec<Word>, inverse_images: Vec<Word>) -> Self {
        let a = FreeAutomorphism { rank, images, inverse_images };
        debug_assert!(FreeAutomorphism::new(a.rank, a.images.clone(), a.inverse_images.clone()).is_ok());
        a
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn inverse_images(&self) -> &[Word] {
        &self.inverse_images
    }

    /// Image of the basis letter `x<index>` (1-based).
    pub fn image(&self, index: usize) -> &Word {
        &self.images[index - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, w)| w.letters() == [Letter::gen(i + 1)])
    }

    pub fn max_image_length(&self) -> usize {
        self.images.iter().chain(&self.inverse_images).map(Word::len).max().unwrap_or(0)
    }

    fn check_rank(&self, other_rank: usize) -> Result<(), AutError> {
        if self.rank == other_rank {
            Ok(())
        } else {
            Err(AutError::RankMismatch { left: self.rank, right: other_rank })
        }
    }

    pub fn apply(&self, word: &Word) -> Result<Word, AutError> {
        self.check_rank(word.rank())?;
        Ok(substitute(&self.images, self.rank, word))
    }

    /// `self` acts first, then `next`.
    pub fn then(&self, next: &FreeAutomorphism) -> Result<FreeAutomorphism, AutError> {
        self.check_rank(next.rank)?;
        Ok(self.then_unchecked(next))
    }

    fn then_unchecked(&self, next: &FreeAutomorphism) -> FreeAutomorphism {
        let images = self.images.iter().map(|w| substitute(&next.images, self.rank, w)).collect();
        let inverse_images =
            next.inverse_images.iter().map(|w| substitute(&self.inverse_images, self.rank, w)).collect();
        FreeAutomorphism { rank: self.rank, images, inverse_images }
    }

    pub fn inverse(&self) -> FreeAutomorphism {
        FreeAutomorphism { rank: self.rank, images: self.inverse_images.clone(), inverse_images: self.images.clone() }
    }

    /// Left-to-right product of `factors` (the first factor acts first).
    pub fn product<'a, I>(rank: usize, factors: I) -> Result<FreeAutomorphism, AutError>
    where
        I: IntoIterator<Item = &'a FreeAutomorphism>,
    {
        factors.into_iter().try_fold(FreeAutomorphism::identity(rank), |acc, f| acc.then(f))
    }

    pub fn pow(&self, k: usize) -> FreeAutomorphism {
        (0..k).fold(FreeAutomorphism::identity(self.rank), |acc, _| acc.then_unchecked(self))
    }

    /// Commutator `a b a⁻¹ b⁻¹`, read left to right (so `a` acts first).
    pub fn commutator(a: &FreeAutomorphism, b: &FreeAutomorphism) -> Result<FreeAutomorphism, AutError> {
        FreeAutomorphism::product(a.rank, [a, b, &a.inverse(), &b.inverse()])
    }

    /// Matrix of the induced map on the abelianization. Row `i` holds the
    /// exponent sums of the image of `x_{i+1}`, which makes
    /// `abelianize(a.then(b)) = abelianize(a) * abelianize(b)`.
    pub fn abelianize(&self) -> IntegerMatrix {
        IntegerMatrix::from_rows(self.images.iter().map(Word::exponent_sums).collect())
    }

    pub fn is_special(&self) -> bool {
        self.abelianize().determinant() == 1
    }

    pub fn to_document(&self) -> AutomorphismDocument {
        AutomorphismDocument {
            rank: self.rank,
            images: self.images.iter().map(ToString::to_string).collect(),
            inverse_images: self.inverse_images.iter().map(ToString::to_string).collect(),
        }
    }
}

impl fmt::Display for FreeAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "x{} -> {}", i + 1, w)?;
        }
        Ok(())
    }
}

/// `{"rank": n, "images": [..], "inverse_images": [..]}` with words in text form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomorphismDocument {
    pub rank: usize,
    pub images: Vec<String>,
    pub inverse_images: Vec<String>,
}

impl AutomorphismDocument {
    pub fn to_automorphism(&self) -> Result<FreeAutomorphism, AutError> {
        let parse_all = |list: &[String]| -> Result<Vec<Word>, AutError> {
            list.iter()
                .map(|s| {
                    let raw: UnrankedWord = s.parse()?;
                    Ok(Word::reduce(self.rank, raw.0)?)
                })
                .collect()
        };
        FreeAutomorphism::new(self.rank, parse_all(&self.images)?, parse_all(&self.inverse_images)?)
    }
}

/// Exact square integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntegerMatrix {
    rows: Vec<Vec<i64>>,
}

impl IntegerMatrix {
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        IntegerMatrix { rows }
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        IntegerMatrix { rows }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.rows[i][j]
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        let n = self.size();
        assert_eq!(n, other.size());
        let rows = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| self.rows[i][k] * other.rows[k][j]).sum()).collect())
            .collect();
        IntegerMatrix { rows }
    }

    /// Fraction-free (Bareiss) elimination. Every intermediate division is
    /// exact, so the result is the exact integer determinant.
    pub fn determinant(&self) -> i64 {
        let n = self.size();
        if n == 0 {
            return 1;
        }
        let mut m: Vec<Vec<i128>> = self.rows.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if m[k][k] == 0 {
                match (k + 1..n).find(|&r| m[r][k] != 0) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
                }
            }
            prev = m[k][k];
        }
        i64::try_from(sign * m[n - 1][n - 1]).expect("determinant overflows i64")
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureCaps {
    pub max_elements: usize,
    pub max_image_length: usize,
}

impl Default for ClosureCaps {
    fn default() -> Self {
        ClosureCaps { max_elements: 100_000, max_image_length: 4096 }
    }
}

/// Verdict of [`closure_enumerate`]. `NotFiniteWithinBounds` only says a cap
/// was hit; it is not a proof of infiniteness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosureResult {
    Finite { order: usize, elements: Vec<FreeAutomorphism> },
    NotFiniteWithinBounds { elements_seen: usize, max_image_length_seen: usize },
}

impl ClosureResult {
    pub fn is_finite(&self) -> bool {
        matches!(self, ClosureResult::Finite { .. })
    }

    pub fn order(&self) -> Option<usize> {
        match self {
            ClosureResult::Finite { order, .. } => Some(*order),
            ClosureResult::NotFiniteWithinBounds { .. } => None,
        }
    }
}

/// Breadth-first closure of the subgroup generated by `generators`, right
/// multiplying by each generator and its inverse. Elements are identified by
/// their reduced image tuples.
pub fn closure_enumerate(generators: &[FreeAutomorphism], caps: ClosureCaps) -> Result<ClosureResult, AutError> {
    if caps.max_elements == 0 || caps.max_image_length == 0 {
        return Err(AutError::CapConfiguration);
    }
    let first = generators.first().ok_or(AutError::NoGenerators)?;
    let rank = first.rank;
    for g in generators {
        first.check_rank(g.rank)?;
    }
    let mut steps: Vec<FreeAutomorphism> = Vec::new();
    for g in generators {
        for s in [g.clone(), g.inverse()] {
            if !steps.contains(&s) {
                steps.push(s);
            }
        }
    }

    let identity = FreeAutomorphism::identity(rank);
    let mut index: HashMap<Vec<Word>, usize> = HashMap::new();
    let mut elements = vec![identity.clone()];
    index.insert(identity.images.clone(), 0);
    let mut queue = VecDeque::from([0usize]);
    let mut longest = identity.max_image_length();

    while let Some(current) = queue.pop_front() {
        for step in &steps {
            let next = elements[current].then_unchecked(step);
            let len = next.max_image_length();
            longest = longest.max(len);
            if len > caps.max_image_length {
                return Ok(ClosureResult::NotFiniteWithinBounds {
                    elements_seen: elements.len(),
                    max_image_length_seen: longest,
                });
            }
            if let Entry::Vacant(slot) = index.entry(next.images.clone()) {
                if elements.len() >= caps.max_elements {
                    return Ok(ClosureResult::NotFiniteWithinBounds {
                        elements_seen: elements.len(),
                        max_image_length_seen: longest,
                    });
                }
                slot.insert(elements.len());
                queue.push_back(elements.len());
                elements.push(next);
            }
        }
    }
    elements.sort();
    Ok(ClosureResult::Finite { order: elements.len(), elements })
}
