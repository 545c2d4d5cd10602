//! Finite simplicial group actions on median complexes, given by vertex
//! permutations of named generators.
//!
//! Two routes to a global fixed vertex are provided: the direct
//! intersection of generator fixed sets, and the criterion route
//! (strong simpliciality, convex fixed sets, pairwise intersection, then the
//! Helly median recursion).

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{
    helly_common_point, ComplexDocument, ComplexError, HellyOptions, MedianComplex, Vertex, VertexSet,
};
use crate::perm::{Perm, PermGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("generator {generator:?} has {len} images for {expected} vertices")]
    WrongLength { generator: String, len: usize, expected: usize },
    #[error("generator {generator:?} is not a bijection")]
    NotBijective { generator: String },
    #[error("generator {generator:?} maps edge {edge:?} to non-edge {image:?}")]
    NotSimplicial { generator: String, edge: [Vertex; 2], image: [Vertex; 2] },
    #[error("image group exceeds {cap} elements")]
    CapExceeded { cap: usize },
    #[error("unknown element {0}")]
    UnknownElement(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Where an action document finds its complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexSource {
    Path(String),
    Inline(ComplexDocument),
}

/// `{"complex": <path or inline>, "generators": {"name": [image per vertex], ...}}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionDocument {
    pub complex: ComplexSource,
    pub generators: BTreeMap<String, Vec<Vertex>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ActionOptions {
    /// Cube dimension cap for strong-simpliciality checks.
    pub max_dim: usize,
    /// Upper bound on the image group order.
    pub group_cap: usize,
}

impl Default for ActionOptions {
    fn default() -> Self {
        ActionOptions { max_dim: 8, group_cap: 1_000_000 }
    }
}

/// Named generators acting by graph automorphisms. Generators are kept in
/// name order, which fixes every derived ordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialAction {
    vertex_count: usize,
    names: Vec<String>,
    perms: Vec<Perm>,
}

impl SimplicialAction {
    pub fn validate(c: &MedianComplex, raw: &BTreeMap<String, Vec<Vertex>>) -> Result<Self, ActionError> {
        let n = c.vertex_count();
        let mut names = Vec::with_capacity(raw.len());
        let mut perms = Vec::with_capacity(raw.len());
        for (name, images) in raw {
            if images.len() != n {
                return Err(ActionError::WrongLength { generator: name.clone(), len: images.len(), expected: n });
            }
            let p = Perm::from_images(images.clone())
                .ok_or_else(|| ActionError::NotBijective { generator: name.clone() })?;
            // A bijection sending edges to edges on a finite graph also sends
            // non-edges to non-edges.
            for [u, v] in c.edges() {
                let image = [p.apply(u), p.apply(v)];
                if !c.adjacent(image[0], image[1]) {
                    return Err(ActionError::NotSimplicial { generator: name.clone(), edge: [u, v], image });
                }
            }
            names.push(name.clone());
            perms.push(p);
        }
        Ok(SimplicialAction { vertex_count: n, names, perms })
    }

    pub fn from_pairs<S: Into<String>>(
        c: &MedianComplex,
        pairs: impl IntoIterator<Item = (S, Vec<Vertex>)>,
    ) -> Result<Self, ActionError> {
        let raw: BTreeMap<String, Vec<Vertex>> = pairs.into_iter().map(|(k, v)| (k.into(), v)).collect();
        SimplicialAction::validate(c, &raw)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn generators(&self) -> impl Iterator<Item = (&str, &Perm)> {
        self.names.iter().map(String::as_str).zip(&self.perms)
    }

    pub fn generator(&self, name: &str) -> Option<&Perm> {
        self.names.iter().position(|n| n == name).map(|i| &self.perms[i])
    }

    pub fn to_document(&self, complex: ComplexSource) -> ActionDocument {
        ActionDocument {
            complex,
            generators: self.generators().map(|(n, p)| (n.to_string(), p.images().to_vec())).collect(),
        }
    }

    pub fn image_group(&self, cap: usize) -> Result<ImageGroup, ActionError> {
        let group = PermGroup::generate(self.vertex_count, &self.perms, cap)
            .map_err(|e| ActionError::CapExceeded { cap: e.cap })?;
        Ok(ImageGroup { names: self.names.clone(), group })
    }

    /// Orbit of `v` under the generators.
    pub fn orbit(&self, v: Vertex) -> Result<VertexSet, ActionError> {
        if v >= self.vertex_count {
            return Err(ComplexError::BadVertex { vertex: v, count: self.vertex_count }.into());
        }
        let mut orbit = VertexSet::from([v]);
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for p in &self.perms {
                let w = p.apply(u);
                if orbit.insert(w) {
                    stack.push(w);
                }
            }
        }
        Ok(orbit)
    }

    /// `Fix(G)` at the vertex level: the intersection of the generators'
    /// fixed sets.
    pub fn fixed_points_direct(&self) -> VertexSet {
        (0..self.vertex_count).filter(|&v| self.perms.iter().all(|p| p.fixes(v))).collect()
    }
}

pub fn fix_of(p: &Perm) -> VertexSet {
    (0..p.degree()).filter(|&v| p.fixes(v)).collect()
}

/// The finite group of vertex permutations generated by an action.
#[derive(Debug, Clone)]
pub struct ImageGroup {
    names: Vec<String>,
    group: PermGroup,
}

/// Selects a group element for [`ImageGroup::fix_set`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElementRef {
    Generator(String),
    Element(Perm),
}

impl ImageGroup {
    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn elements(&self) -> &[Perm] {
        self.group.elements()
    }

    /// Generator names spelling `p` (shortest word), if `p` is a member.
    pub fn word_of(&self, p: &Perm) -> Option<Vec<String>> {
        self.group.word_of(p).map(|w| w.iter().map(|&i| self.names[i].clone()).collect())
    }

    pub fn resolve(&self, element: &ElementRef) -> Result<Perm, ActionError> {
        match element {
            ElementRef::Generator(name) => self
                .names
                .iter()
                .position(|n| n == name)
                .map(|i| self.group.generators()[i].clone())
                .ok_or_else(|| ActionError::UnknownElement(name.clone())),
            ElementRef::Element(p) if self.group.contains(p) => Ok(p.clone()),
            ElementRef::Element(p) => Err(ActionError::UnknownElement(p.to_string())),
        }
    }

    pub fn fix_set(&self, element: &ElementRef) -> Result<VertexSet, ActionError> {
        Ok(fix_of(&self.resolve(element)?))
    }
}

/// A cube stabilised setwise but not pointwise by some element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrongViolation {
    pub cube: Vec<Vertex>,
    pub dimension: usize,
    pub element: Vec<Vertex>,
    pub element_word: Vec<String>,
}

/// Checks that every element of the image group that maps a cube onto
/// itself fixes that cube pointwise. Returns the first violation in
/// (cube order, element discovery order).
pub fn strong_simplicial_violation(
    c: &MedianComplex,
    a: &SimplicialAction,
    opts: ActionOptions,
) -> Result<Option<StrongViolation>, ActionError> {
    let cubes = c.enumerate_cubes(opts.max_dim)?;
    let group = a.image_group(opts.group_cap)?;
    for cube in cubes.iter().filter(|q| q.dimension() > 0) {
        let members = cube.vertex_set();
        for g in group.elements() {
            let setwise = members.iter().all(|v| members.contains(g.apply(v)));
            if setwise && !members.iter().all(|v| g.fixes(v)) {
                return Ok(Some(StrongViolation {
                    cube: members.to_vec(),
                    dimension: cube.dimension(),
                    element: g.images().to_vec(),
                    element_word: group.word_of(g).unwrap_or_default(),
                }));
            }
        }
    }
    Ok(None)
}

pub fn is_strong_simplicial(c: &MedianComplex, a: &SimplicialAction, opts: ActionOptions) -> Result<bool, ActionError> {
    Ok(strong_simplicial_violation(c, a, opts)?.is_none())
}

/// Why the criterion route declined to produce a vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "hypothesis", rename_all = "snake_case")]
pub enum Refusal {
    NotMedian {
        triple: [Vertex; 3],
        candidates: Vec<Vertex>,
    },
    NotStrongSimplicial(StrongViolation),
    FixNotConvex {
        generator: String,
        between: [Vertex; 2],
        outside: Vertex,
    },
    /// `Fix(first) ∩ Fix(second)` is empty; equal names mean `Fix(first)` is.
    PairwiseEmpty {
        first: String,
        second: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum CriterionOutcome {
    FixedVertex { vertex: Vertex, fix_sets: BTreeMap<String, VertexSet> },
    Refused(Refusal),
}

impl CriterionOutcome {
    pub fn vertex(&self) -> Option<Vertex> {
        match self {
            CriterionOutcome::FixedVertex { vertex, .. } => Some(*vertex),
            CriterionOutcome::Refused(_) => None,
        }
    }
}

/// The criterion pipeline: require a median complex and a strong simplicial
/// action, compute each generator's fixed set, require each to be convex and
/// every pair (a generator with itself included) to intersect, then run the
/// Helly recursion over the fixed sets.
pub fn fixed_point_via_criterion(
    c: &MedianComplex,
    a: &SimplicialAction,
    opts: ActionOptions,
) -> Result<CriterionOutcome, ActionError> {
    if let crate::complex::MedianVerdict::NotMedian { triple, candidates } = c.median_verdict() {
        return Ok(CriterionOutcome::Refused(Refusal::NotMedian { triple: *triple, candidates: candidates.clone() }));
    }
    if let Some(v) = strong_simplicial_violation(c, a, opts)? {
        return Ok(CriterionOutcome::Refused(Refusal::NotStrongSimplicial(v)));
    }
    let fix_sets: Vec<(String, VertexSet)> =
        a.names.par_iter().zip(&a.perms).map(|(name, p)| (name.clone(), fix_of(p))).collect();
    for (name, set) in &fix_sets {
        if let Some((between, outside)) = c.convexity_violation(set) {
            return Ok(CriterionOutcome::Refused(Refusal::FixNotConvex { generator: name.clone(), between, outside }));
        }
    }
    for (i, (first, s)) in fix_sets.iter().enumerate() {
        for (second, t) in &fix_sets[i..] {
            if s.intersection(t).is_empty() {
                return Ok(CriterionOutcome::Refused(Refusal::PairwiseEmpty {
                    first: first.clone(),
                    second: second.clone(),
                }));
            }
        }
    }
    let vertex = if fix_sets.is_empty() {
        0
    } else {
        let sets: Vec<VertexSet> = fix_sets.iter().map(|(_, s)| s.clone()).collect();
        helly_common_point(c, &sets, HellyOptions { validate_convex: false })?
    };
    Ok(CriterionOutcome::FixedVertex { vertex, fix_sets: fix_sets.into_iter().collect() })
}

/// Cubes inside `Fix(G)` that are stabilised setwise, paired with whether
/// they are fixed pointwise by every element.
pub fn invariant_cubes_in_fixed_set(
    c: &MedianComplex,
    a: &SimplicialAction,
    opts: ActionOptions,
) -> Result<Vec<(Vec<Vertex>, bool)>, ActionError> {
    let fixed = a.fixed_points_direct();
    let group = a.image_group(opts.group_cap)?;
    let mut out = Vec::new();
    for cube in c.enumerate_cubes(opts.max_dim)? {
        let members: BTreeSet<Vertex> = cube.vertices.iter().copied().collect();
        if !members.iter().all(|&v| fixed.contains(v)) {
            continue;
        }
        let pointwise = group.elements().iter().all(|g| members.iter().all(|&v| g.fixes(v)));
        out.push((members.into_iter().collect(), pointwise));
    }
    Ok(out)
}
