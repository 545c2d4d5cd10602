//! Named automorphisms of `F_n` (Nielsen maps, inversions, basis
//! permutations) and the generating sets `Y1`..`Y4` built from them.
//!
//! Products such as `(x1,x2)e(1)e(2)` are read left to right: the leftmost
//! factor acts first, matching [`FreeAutomorphism::then`].

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automorphism::{closure_enumerate, AutError, ClosureCaps, ClosureResult, FreeAutomorphism};
use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("bad indices {indices:?} for rank {rank}")]
    BadIndices { indices: Vec<usize>, rank: usize },
    #[error("family {family} needs rank at least {min}, got {rank}")]
    RankTooSmall { family: FamilyName, min: usize, rank: usize },
    #[error("cannot parse expression {text:?}: {reason}")]
    Expression { text: String, reason: String },
    #[error(transparent)]
    Aut(#[from] AutError),
}

fn basis(rank: usize, index: usize) -> Word {
    Word::from_letters(rank, [Letter::gen(index)])
}

fn check_pair(i: usize, j: usize, n: usize) -> Result<(), CatalogError> {
    if i == 0 || j == 0 || i > n || j > n || i == j {
        return Err(CatalogError::BadIndices { indices: vec![i, j], rank: n });
    }
    Ok(())
}

fn nielsen(i: usize, j: usize, n: usize, right: bool) -> Result<FreeAutomorphism, CatalogError> {
    check_pair(i, j, n)?;
    let mut images: Vec<Word> = (1..=n).map(|k| basis(n, k)).collect();
    let mut inverse = images.clone();
    let (xi, xj) = (Letter::gen(i), Letter::gen(j));
    if right {
        images[i - 1] = Word::from_letters(n, [xi, xj]);
        inverse[i - 1] = Word::from_letters(n, [xi, xj.inverse()]);
    } else {
        images[i - 1] = Word::from_letters(n, [xj, xi]);
        inverse[i - 1] = Word::from_letters(n, [xj.inverse(), xi]);
    }
    Ok(FreeAutomorphism::from_parts(n, images, inverse))
}

/// Right Nielsen map `ρ_ij`: `x_i ↦ x_i x_j`.
pub fn rho(i: usize, j: usize, n: usize) -> Result<FreeAutomorphism, CatalogError> {
    nielsen(i, j, n, true)
}

/// Left Nielsen map `λ_ij`: `x_i ↦ x_j x_i`.
pub fn lambda(i: usize, j: usize, n: usize) -> Result<FreeAutomorphism, CatalogError> {
    nielsen(i, j, n, false)
}

/// `e_i`: `x_i ↦ x_i^-1`.
pub fn e_inv(i: usize, n: usize) -> Result<FreeAutomorphism, CatalogError> {
    if i == 0 || i > n {
        return Err(CatalogError::BadIndices { indices: vec![i], rank: n });
    }
    let perm: Vec<usize> = (0..n).collect();
    let signs: Vec<bool> = (0..n).map(|k| k != i - 1).collect();
    Ok(FreeAutomorphism::signed_permutation(n, &perm, &signs))
}

/// `(x_i, x_j)`: swaps two basis letters.
pub fn transposition(i: usize, j: usize, n: usize) -> Result<FreeAutomorphism, CatalogError> {
    check_pair(i, j, n)?;
    let mut perm: Vec<usize> = (0..n).collect();
    perm.swap(i - 1, j - 1);
    Ok(FreeAutomorphism::signed_permutation(n, &perm, &vec![true; n]))
}

/// `(x_1, x_2, …, x_n)`: `x_k ↦ x_{k+1}`, `x_n ↦ x_1`.
pub fn cycle(n: usize) -> Result<FreeAutomorphism, CatalogError> {
    if n == 0 {
        return Err(CatalogError::BadIndices { indices: vec![], rank: n });
    }
    let perm: Vec<usize> = (0..n).map(|k| (k + 1) % n).collect();
    Ok(FreeAutomorphism::signed_permutation(n, &perm, &vec![true; n]))
}

/// Commutator convention used throughout: `[a, b] = a b a⁻¹ b⁻¹`, read left
/// to right. With it `[ρ_ij, ρ_jk] = ρ_ik` and `[λ_ij, λ_jk] = λ_ik`.
pub fn commutator(a: &FreeAutomorphism, b: &FreeAutomorphism) -> Result<FreeAutomorphism, AutError> {
    FreeAutomorphism::commutator(a, b)
}

// ---------------------------------------------------------------------------
// Expressions

/// One factor of a product expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Atom {
    Rho(usize, usize),
    Lambda(usize, usize),
    E(usize),
    Swap(usize, usize),
    /// The full cycle `(x1,…,xn)` of the ambient rank.
    Cycle,
}

impl Atom {
    pub fn evaluate(self, n: usize) -> Result<FreeAutomorphism, CatalogError> {
        match self {
            Atom::Rho(i, j) => rho(i, j, n),
            Atom::Lambda(i, j) => lambda(i, j, n),
            Atom::E(i) => e_inv(i, n),
            Atom::Swap(i, j) => transposition(i, j, n),
            Atom::Cycle => cycle(n),
        }
    }
}

/// A left-to-right product of atoms, e.g. `(x1,x2)e(1)e(2)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Expression(pub Vec<Atom>);

impl Expression {
    pub fn evaluate(&self, n: usize) -> Result<FreeAutomorphism, CatalogError> {
        let mut acc = FreeAutomorphism::identity(n);
        for atom in &self.0 {
            acc = acc.then(&atom.evaluate(n)?)?;
        }
        Ok(acc)
    }

    /// Name with the cycle written out for rank `n`.
    pub fn render(&self, n: usize) -> String {
        if self.0.is_empty() {
            return "id".to_string();
        }
        self.0
            .iter()
            .map(|a| match a {
                Atom::Rho(i, j) => format!("rho({i},{j})"),
                Atom::Lambda(i, j) => format!("lambda({i},{j})"),
                Atom::E(i) => format!("e({i})"),
                Atom::Swap(i, j) => format!("(x{i},x{j})"),
                Atom::Cycle => {
                    let inner: Vec<String> = (1..=n).map(|k| format!("x{k}")).collect();
                    format!("({})", inner.join(","))
                }
            })
            .collect()
    }
}

fn parse_indices(body: &str) -> Option<Vec<usize>> {
    body.split(',').map(|t| t.trim().parse::<usize>().ok()).collect()
}

impl FromStr for Expression {
    type Err = CatalogError;

    /// Grammar: a sequence of `rho(i,j)`, `lambda(i,j)`, `e(i)`, `(xi,xj)` and
    /// `(x1,x2,…,xn)` (full cycle), optionally separated by whitespace or
    /// `*`. `id` is the empty product.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = |reason: String| CatalogError::Expression { text: text.to_string(), reason };
        let mut atoms = Vec::new();
        let mut rest = text.trim();
        if rest == "id" {
            return Ok(Expression(atoms));
        }
        while !rest.is_empty() {
            rest = rest.trim_start_matches(|c: char| c.is_whitespace() || c == '*');
            if rest.is_empty() {
                break;
            }
            let open = rest.find('(').ok_or_else(|| err(format!("expected '(' in {rest:?}")))?;
            let close = rest.find(')').ok_or_else(|| err(format!("unclosed '(' in {rest:?}")))?;
            if close < open {
                return Err(err(format!("unbalanced ')' in {rest:?}")));
            }
            let head = &rest[..open];
            let body = &rest[open + 1..close];
            let atom = match head {
                "rho" | "lambda" => {
                    let idx = parse_indices(body).ok_or_else(|| err(format!("bad indices {body:?}")))?;
                    if idx.len() != 2 {
                        return Err(err(format!("{head} takes two indices")));
                    }
                    if head == "rho" {
                        Atom::Rho(idx[0], idx[1])
                    } else {
                        Atom::Lambda(idx[0], idx[1])
                    }
                }
                "e" => match parse_indices(body).as_deref() {
                    Some(&[i]) => Atom::E(i),
                    _ => return Err(err(format!("e takes one index, got {body:?}"))),
                },
                "" => {
                    let idx: Option<Vec<usize>> =
                        body.split(',').map(|t| t.trim().strip_prefix('x').and_then(|d| d.parse().ok())).collect();
                    let idx = idx.ok_or_else(|| err(format!("bad permutation {body:?}")))?;
                    match idx.len() {
                        2 => Atom::Swap(idx[0], idx[1]),
                        k if k >= 3 && idx.iter().enumerate().all(|(p, &v)| v == p + 1) => Atom::Cycle,
                        _ => return Err(err(format!("unsupported permutation ({body})"))),
                    }
                }
                other => return Err(err(format!("unknown atom {other:?}"))),
            };
            atoms.push(atom);
            rest = &rest[close + 1..];
        }
        Ok(Expression(atoms))
    }
}

// ---------------------------------------------------------------------------
// Families

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyName {
    Y1,
    Y2,
    Y3,
    Y4,
}

impl FamilyName {
    pub fn min_rank(self) -> usize {
        match self {
            FamilyName::Y1 | FamilyName::Y2 | FamilyName::Y3 => 3,
            FamilyName::Y4 => 4,
        }
    }
}

impl fmt::Display for FamilyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for FamilyName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "Y1" => Ok(FamilyName::Y1),
            "Y2" => Ok(FamilyName::Y2),
            "Y3" => Ok(FamilyName::Y3),
            "Y4" => Ok(FamilyName::Y4),
            _ => Err(format!("unknown family {s:?} (expected Y1, Y2, Y3 or Y4)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Member {
    pub name: String,
    pub expression: Expression,
    pub automorphism: FreeAutomorphism,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorFamily {
    pub name: FamilyName,
    pub rank: usize,
    pub members: Vec<Member>,
}

fn member_expressions(name: FamilyName, n: usize) -> Vec<Expression> {
    use Atom::*;
    let ex = |atoms: &[Atom]| Expression(atoms.to_vec());
    match name {
        FamilyName::Y1 => vec![ex(&[Rho(1, 2)]), ex(&[E(1)]), ex(&[Swap(1, 2)]), ex(&[Cycle])],
        FamilyName::Y2 => {
            let mut v = vec![ex(&[Swap(1, 2), E(1), E(2)]), ex(&[Swap(2, 3), E(1)])];
            v.extend((3..n).map(|i| ex(&[Swap(i, i + 1)])));
            v.push(ex(&[E(2), Rho(1, 2)]));
            v.push(ex(&[E(n)]));
            v
        }
        FamilyName::Y3 => {
            let mut v: Vec<Expression> = (1..n).map(|i| ex(&[Rho(i, i + 1)])).collect();
            v.push(ex(&[Rho(n, 1)]));
            v.extend((1..n).map(|i| ex(&[Lambda(i, i + 1)])));
            v.push(ex(&[Lambda(n, 1)]));
            v
        }
        FamilyName::Y4 => {
            let mut v = vec![ex(&[Swap(1, 2), E(1), E(2), E(3)]), ex(&[Swap(2, 3), E(1)])];
            v.extend((3..n).map(|i| ex(&[Swap(i, i + 1), E(i)])));
            v.push(ex(&[E(2), E(4), Rho(1, 2)]));
            v.push(ex(&[E(3), E(4)]));
            v
        }
    }
}

pub fn family(name: FamilyName, n: usize) -> Result<GeneratorFamily, CatalogError> {
    if n < name.min_rank() {
        return Err(CatalogError::RankTooSmall { family: name, min: name.min_rank(), rank: n });
    }
    let members = member_expressions(name, n)
        .into_iter()
        .map(|expression| Ok(Member { name: expression.render(n), automorphism: expression.evaluate(n)?, expression }))
        .collect::<Result<Vec<_>, CatalogError>>()?;
    Ok(GeneratorFamily { name, rank: n, members })
}

impl GeneratorFamily {
    pub fn member(&self, name: &str) -> Option<&Member> {
        self.members.iter().find(|m| m.name == name)
    }

    pub fn automorphisms(&self) -> Vec<FreeAutomorphism> {
        self.members.iter().map(|m| m.automorphism.clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairClosure {
    /// Member indices, `first <= second`; equal indices are the singleton case.
    pub first: usize,
    pub second: usize,
    pub result: ClosureResult,
}

/// Closure of every unordered pair of members, singletons included.
pub fn pairwise_orders(f: &GeneratorFamily, caps: ClosureCaps) -> Result<Vec<PairClosure>, AutError> {
    let k = f.members.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect();
    pairs
        .par_iter()
        .map(|&(i, j)| {
            let mut gens = vec![f.members[i].automorphism.clone()];
            if i != j {
                gens.push(f.members[j].automorphism.clone());
            }
            closure_enumerate(&gens, caps).map(|result| PairClosure { first: i, second: j, result })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommutatorFailure {
    pub kind: String,
    pub triple: (usize, usize, usize),
    pub got: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommutatorReport {
    pub rank: usize,
    pub checked: usize,
    pub failures: Vec<CommutatorFailure>,
}

impl CommutatorReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `[ρ_ij, ρ_jk] = ρ_ik` and `[λ_ij, λ_jk] = λ_ik` over every ordered
/// triple of distinct indices.
pub fn commutator_identity_check(n: usize) -> Result<CommutatorReport, CatalogError> {
    if n < 3 {
        return Err(CatalogError::RankTooSmall { family: FamilyName::Y3, min: 3, rank: n });
    }
    let mut checked = 0;
    let mut failures = Vec::new();
    for i in 1..=n {
        for j in (1..=n).filter(|&j| j != i) {
            for k in (1..=n).filter(|&k| k != i && k != j) {
                for (kind, make) in [("rho", rho as fn(_, _, _) -> _), ("lambda", lambda)] {
                    checked += 1;
                    let c = commutator(&make(i, j, n)?, &make(j, k, n)?)?;
                    if c != make(i, k, n)? {
                        failures.push(CommutatorFailure {
                            kind: kind.to_string(),
                            triple: (i, j, k),
                            got: c.to_string(),
                        });
                    }
                }
            }
        }
    }
    Ok(CommutatorReport { rank: n, checked, failures })
}

// ---------------------------------------------------------------------------
// Witness search

/// One factor of a witness: a family member, possibly inverted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFactor {
    pub member: String,
    pub inverted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessOutcome {
    /// Left-to-right product of family members equal to the target.
    Found(Vec<WitnessFactor>),
    Inconclusive {
        max_length: usize,
        elements_explored: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WitnessBounds {
    pub max_length: usize,
    /// Cap on the size of each search ball.
    pub max_ball: usize,
}

impl Default for WitnessBounds {
    fn default() -> Self {
        WitnessBounds { max_length: 12, max_ball: 400_000 }
    }
}

pub fn render_witness(factors: &[WitnessFactor]) -> String {
    if factors.is_empty() {
        return "id".to_string();
    }
    factors
        .iter()
        .map(|f| if f.inverted { format!("[{}]^-1", f.member) } else { format!("[{}]", f.member) })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Evaluates a witness against `f`.
pub fn evaluate_witness(f: &GeneratorFamily, factors: &[WitnessFactor]) -> Option<FreeAutomorphism> {
    let mut acc = FreeAutomorphism::identity(f.rank);
    for factor in factors {
        let m = f.member(&factor.member)?;
        let step = if factor.inverted { m.automorphism.inverse() } else { m.automorphism.clone() };
        acc = acc.then(&step).ok()?;
    }
    Some(acc)
}

struct Ball {
    elements: Vec<FreeAutomorphism>,
    words: Vec<Vec<usize>>,
    index: HashMap<Vec<Word>, usize>,
    explored: usize,
}

/// Breadth-first ball of radius `radius` around the identity in the Cayley
/// graph of `steps`, shortest words first.
fn ball(rank: usize, steps: &[FreeAutomorphism], radius: usize, cap: usize) -> Ball {
    let id = FreeAutomorphism::identity(rank);
    let mut b = Ball {
        index: HashMap::from([(id.images().to_vec(), 0)]),
        elements: vec![id],
        words: vec![vec![]],
        explored: 1,
    };
    let mut queue = VecDeque::from([0usize]);
    while let Some(cur) = queue.pop_front() {
        if b.words[cur].len() >= radius {
            continue;
        }
        for (s, step) in steps.iter().enumerate() {
            let next = b.elements[cur].then(step).expect("equal ranks");
            b.explored += 1;
            let key = next.images().to_vec();
            if b.index.contains_key(&key) || b.elements.len() >= cap {
                continue;
            }
            let mut word = b.words[cur].clone();
            word.push(s);
            b.index.insert(key, b.elements.len());
            queue.push_back(b.elements.len());
            b.elements.push(next);
            b.words.push(word);
        }
    }
    b
}

/// Bounded search for `target` as a product of members of `f` and their
/// inverses. Meets in the middle: `target = P·S` with `P` from a ball of
/// radius `⌈L/2⌉` and `S` from a ball of radius `⌊L/2⌋`, where `L` is the
/// length bound. Among all splits found, the shortest total word is returned.
pub fn witness_search(
    target: &FreeAutomorphism,
    f: &GeneratorFamily,
    bounds: WitnessBounds,
) -> Result<WitnessOutcome, AutError> {
    if target.rank() != f.rank {
        return Err(AutError::RankMismatch { left: target.rank(), right: f.rank });
    }
    let mut steps = Vec::new();
    let mut labels = Vec::new();
    for m in &f.members {
        steps.push(m.automorphism.clone());
        labels.push(WitnessFactor { member: m.name.clone(), inverted: false });
        let inv = m.automorphism.inverse();
        if inv != m.automorphism {
            steps.push(inv);
            labels.push(WitnessFactor { member: m.name.clone(), inverted: true });
        }
    }
    let outer = bounds.max_length.div_ceil(2);
    let inner = bounds.max_length / 2;
    let prefix = ball(f.rank, &steps, outer, bounds.max_ball);
    let mut best: Option<(usize, usize, usize)> = None;
    // Suffix words come from the same ball restricted to radius `inner`;
    // elements are visited in BFS order so the first hit per length wins.
    for (s_idx, s) in prefix.elements.iter().enumerate() {
        let s_len = prefix.words[s_idx].len();
        if s_len > inner {
            break;
        }
        let p = target.then(&s.inverse())?;
        if let Some(&p_idx) = prefix.index.get(p.images()) {
            let total = prefix.words[p_idx].len() + s_len;
            if best.is_none_or(|(t, _, _)| total < t) {
                best = Some((total, p_idx, s_idx));
            }
        }
    }
    Ok(match best {
        Some((_, p_idx, s_idx)) => {
            let word = prefix.words[p_idx].iter().chain(&prefix.words[s_idx]);
            WitnessOutcome::Found(word.map(|&s| labels[s].clone()).collect())
        }
        None => WitnessOutcome::Inconclusive { max_length: bounds.max_length, elements_explored: prefix.explored },
    })
}

/// Serializable summary of a family, used by the JSON reports.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyListing {
    pub family: FamilyName,
    pub rank: usize,
    pub members: BTreeMap<String, crate::automorphism::AutomorphismDocument>,
}

impl From<&GeneratorFamily> for FamilyListing {
    fn from(f: &GeneratorFamily) -> Self {
        FamilyListing {
            family: f.name,
            rank: f.rank,
            members: f.members.iter().map(|m| (m.name.clone(), m.automorphism.to_document())).collect(),
        }
    }
}
