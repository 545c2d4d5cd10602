//! Permutations of `0..n` and the finite groups they generate.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

/// `p[i]` is the image of `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// Returns `None` unless `images` is a bijection of `0..images.len()`.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return None;
            }
        }
        Some(Perm(images))
    }

    /// Product of disjoint cycles on `n` points, e.g. `from_cycles(5, &[&[0, 1, 2]])`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        for cyc in cycles {
            for (k, &a) in cyc.iter().enumerate() {
                images[a] = cyc[(k + 1) % cyc.len()];
            }
        }
        Perm::from_images(images).expect("disjoint cycles")
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `self` first, then `next`.
    pub fn then(&self, next: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| next.0[i]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn fixes(&self, i: usize) -> bool {
        self.0[i] == i
    }

    /// Even iff the number of even-length cycles is even.
    pub fn is_even(&self) -> bool {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut transpositions = 0;
        for start in 0..n {
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i];
                len += 1;
            }
            if len > 0 {
                transpositions += len - 1;
            }
        }
        transpositions % 2 == 0
    }

    /// `a b a⁻¹ b⁻¹` with `a` acting first.
    pub fn commutator(a: &Perm, b: &Perm) -> Perm {
        a.then(b).then(&a.inverse()).then(&b.inverse())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut any = false;
        for start in 0..n {
            if seen[start] || self.0[start] == start {
                continue;
            }
            let mut cyc = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cyc.push(i.to_string());
                i = self.0[i];
            }
            write!(f, "({})", cyc.join(" "))?;
            any = true;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupCapExceeded {
    pub cap: usize,
}

/// A finite permutation group listed element by element. Each element
/// carries a shortest word in the generators (indices into `generators`,
/// `inverted` steps never needed since the group is finite).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    words: Vec<Vec<usize>>,
    index: HashMap<Perm, usize>,
}

impl PermGroup {
    /// Breadth-first closure under right multiplication by the generators.
    pub fn generate(degree: usize, generators: &[Perm], cap: usize) -> Result<Self, GroupCapExceeded> {
        let id = Perm::identity(degree);
        let mut g = PermGroup {
            degree,
            generators: generators.to_vec(),
            index: HashMap::from([(id.clone(), 0)]),
            elements: vec![id],
            words: vec![vec![]],
        };
        let mut queue = VecDeque::from([0usize]);
        while let Some(cur) = queue.pop_front() {
            for (s, step) in generators.iter().enumerate() {
                let next = g.elements[cur].then(step);
                if g.index.contains_key(&next) {
                    continue;
                }
                if g.elements.len() >= cap {
                    return Err(GroupCapExceeded { cap });
                }
                let mut word = g.words[cur].clone();
                word.push(s);
                g.index.insert(next.clone(), g.elements.len());
                queue.push_back(g.elements.len());
                g.elements.push(next);
                g.words.push(word);
            }
        }
        Ok(g)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    /// Elements in discovery order; the identity comes first.
    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.index.contains_key(p)
    }

    /// Shortest generator word for `p`, if it is a member.
    pub fn word_of(&self, p: &Perm) -> Option<&[usize]> {
        self.index.get(p).map(|&i| self.words[i].as_slice())
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// Subgroup generated by all commutators.
    pub fn derived_subgroup(&self) -> PermGroup {
        let commutators: BTreeSet<Perm> = self
            .elements
            .iter()
            .flat_map(|a| self.elements.iter().map(move |b| Perm::commutator(a, b)))
            .filter(|c| !c.is_identity())
            .collect();
        let gens: Vec<Perm> = commutators.into_iter().collect();
        PermGroup::generate(self.degree, &gens, usize::MAX).expect("subgroup of a finite group")
    }

    pub fn is_perfect(&self) -> bool {
        self.derived_subgroup().order() == self.order()
    }

    pub fn all_even(&self) -> bool {
        self.elements.iter().all(Perm::is_even)
    }

    /// Orbit of a point under the generators.
    pub fn orbit(&self, point: usize) -> BTreeSet<usize> {
        let mut orbit = BTreeSet::from([point]);
        let mut queue = VecDeque::from([point]);
        while let Some(p) = queue.pop_front() {
            for g in &self.generators {
                let q = g.apply(p);
                if orbit.insert(q) {
                    queue.push_back(q);
                }
            }
        }
        orbit
    }
}
