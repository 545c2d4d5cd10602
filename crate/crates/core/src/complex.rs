//! Finite median graphs standing in for the 1-skeleta of CAT(0) cube
//! complexes.
//!
//! Geodesic segments are replaced by graph intervals
//! `I(u, v) = { x : d(u, x) + d(x, v) = d(u, v) }`, convex subcomplexes by
//! interval-closed vertex sets, and cubes by induced hypercube subgraphs.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("malformed complex: {0}")]
    Malformed(String),
    #[error("graph is disconnected: vertex {unreachable} is not reachable from 0")]
    Disconnected { unreachable: Vertex },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("vertex {vertex} is not in 0..{count}")]
    BadVertex { vertex: Vertex, count: usize },
    #[error("triple {triple:?} has {} medians", candidates.len())]
    NotMedianTriple { triple: [Vertex; 3], candidates: Vec<Vertex> },
    #[error("graph is not median: triple {triple:?} has {} medians", candidates.len())]
    NotMedian { triple: [Vertex; 3], candidates: Vec<Vertex> },
    #[error("complex has cubes of dimension above the cap {cap}")]
    DimensionCapExceeded { cap: usize },
    #[error("set {index} is empty")]
    EmptySet { index: usize },
    #[error("set {index} is not convex: {between:?} has {outside} in its interval")]
    NotConvexInput { index: usize, between: [Vertex; 2], outside: Vertex },
    #[error("sets {first} and {second} do not intersect")]
    PairwiseEmpty { first: usize, second: usize },
}

/// A set of vertices, kept sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(BTreeSet<Vertex>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(BTreeSet::new())
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.contains(&v)
    }

    pub fn insert(&mut self, v: Vertex) -> bool {
        self.0.insert(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    /// Smallest member, the tie-break used wherever a vertex is picked.
    pub fn first(&self) -> Option<Vertex> {
        self.0.first().copied()
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.intersection(&other.0).copied().collect())
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn to_vec(&self) -> Vec<Vertex> {
        self.iter().collect()
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        VertexSet(iter.into_iter().collect())
    }
}

impl<const N: usize> From<[Vertex; N]> for VertexSet {
    fn from(a: [Vertex; N]) -> Self {
        a.into_iter().collect()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

/// `{"name": ..., "vertices": N, "edges": [[u, v], ...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDocument {
    #[serde(default)]
    pub name: String,
    pub vertices: usize,
    pub edges: Vec<[Vertex; 2]>,
}

/// `{"sets": {"A": [ids], ...}}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetsDocument {
    pub sets: BTreeMap<String, Vec<Vertex>>,
}

/// Outcome of the exhaustive median check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum MedianVerdict {
    Median,
    NotMedian { triple: [Vertex; 3], candidates: Vec<Vertex> },
}

impl MedianVerdict {
    pub fn is_median(&self) -> bool {
        matches!(self, MedianVerdict::Median)
    }
}

/// Connected simple graph with an all-pairs distance table.
pub struct MedianComplex {
    name: String,
    adjacency: Vec<Vec<Vertex>>,
    distances: Vec<Vec<u32>>,
    intervals: OnceLock<Vec<FixedBitSet>>,
    verdict: OnceLock<MedianVerdict>,
}

impl fmt::Debug for MedianComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MedianComplex")
            .field("name", &self.name)
            .field("vertices", &self.vertex_count())
            .field("edges", &self.edge_count())
            .finish()
    }
}

impl MedianComplex {
    pub fn from_edges(
        name: impl Into<String>,
        vertex_count: usize,
        edges: &[[Vertex; 2]],
    ) -> Result<Self, ComplexError> {
        if vertex_count == 0 {
            return Err(ComplexError::Malformed("a complex needs at least one vertex".into()));
        }
        let mut adjacency = vec![Vec::new(); vertex_count];
        let mut seen = BTreeSet::new();
        for &[u, v] in edges {
            for x in [u, v] {
                if x >= vertex_count {
                    return Err(ComplexError::BadVertex { vertex: x, count: vertex_count });
                }
            }
            if u == v {
                return Err(ComplexError::SelfLoop(u));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(ComplexError::DuplicateEdge(u.min(v), u.max(v)));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let distances: Vec<Vec<u32>> = (0..vertex_count).into_par_iter().map(|s| bfs(&adjacency, s)).collect();
        if let Some(unreachable) = distances[0].iter().position(|&d| d == u32::MAX) {
            return Err(ComplexError::Disconnected { unreachable });
        }
        Ok(MedianComplex {
            name: name.into(),
            adjacency,
            distances,
            intervals: OnceLock::new(),
            verdict: OnceLock::new(),
        })
    }

    pub fn from_document(doc: &ComplexDocument) -> Result<Self, ComplexError> {
        MedianComplex::from_edges(doc.name.clone(), doc.vertices, &doc.edges)
    }

    pub fn from_json(text: &str) -> Result<Self, ComplexError> {
        let doc: ComplexDocument = serde_json::from_str(text).map_err(|e| ComplexError::Malformed(e.to_string()))?;
        MedianComplex::from_document(&doc)
    }

    pub fn to_document(&self) -> ComplexDocument {
        ComplexDocument { name: self.name.clone(), vertices: self.vertex_count(), edges: self.edges() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `[u, v]` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<[Vertex; 2]> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, list) in self.adjacency.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| v > u).map(|&v| [u, v]));
        }
        out
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.vertex_count()
    }

    pub fn neighbours(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<(), ComplexError> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(ComplexError::BadVertex { vertex: v, count: self.vertex_count() })
        }
    }

    pub fn all_vertices(&self) -> VertexSet {
        self.vertices().collect()
    }

    pub fn distance(&self, u: Vertex, v: Vertex) -> Result<u32, ComplexError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.distances[u][v])
    }

    #[inline]
    fn dist(&self, u: Vertex, v: Vertex) -> u32 {
        self.distances[u][v]
    }

    #[inline]
    fn between(&self, u: Vertex, x: Vertex, v: Vertex) -> bool {
        self.dist(u, x) + self.dist(x, v) == self.dist(u, v)
    }

    pub fn interval(&self, u: Vertex, v: Vertex) -> Result<VertexSet, ComplexError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.vertices().filter(|&x| self.between(u, x, v)).collect())
    }

    /// All vertices in `I(x,y) ∩ I(y,z) ∩ I(x,z)`.
    pub fn median_candidates(&self, x: Vertex, y: Vertex, z: Vertex) -> Result<Vec<Vertex>, ComplexError> {
        for v in [x, y, z] {
            self.check_vertex(v)?;
        }
        Ok(self
            .vertices()
            .filter(|&m| self.between(x, m, y) && self.between(y, m, z) && self.between(x, m, z))
            .collect())
    }

    pub fn median(&self, x: Vertex, y: Vertex, z: Vertex) -> Result<Vertex, ComplexError> {
        let candidates = self.median_candidates(x, y, z)?;
        match candidates.as_slice() {
            [m] => Ok(*m),
            _ => Err(ComplexError::NotMedianTriple { triple: [x, y, z], candidates }),
        }
    }

    fn interval_table(&self) -> &[FixedBitSet] {
        self.intervals.get_or_init(|| {
            let n = self.vertex_count();
            (0..n * n)
                .into_par_iter()
                .map(|k| {
                    let (u, v) = (k / n, k % n);
                    let mut bits = FixedBitSet::with_capacity(n);
                    for x in 0..n {
                        if self.between(u, x, v) {
                            bits.insert(x);
                        }
                    }
                    bits
                })
                .collect()
        })
    }

    /// Exhaustive check that every triple of vertices has exactly one
    /// median. The verdict is computed once and cached; the counterexample
    /// reported is the lexicographically smallest triple.
    pub fn median_verdict(&self) -> &MedianVerdict {
        self.verdict.get_or_init(|| {
            let n = self.vertex_count();
            let table = self.interval_table();
            let first_bad = (0..n).into_par_iter().find_map_first(|x| {
                let mut scratch = FixedBitSet::with_capacity(n);
                for y in x + 1..n {
                    for z in y + 1..n {
                        scratch.clone_from(&table[x * n + y]);
                        scratch.intersect_with(&table[y * n + z]);
                        scratch.intersect_with(&table[x * n + z]);
                        if scratch.count_ones(..) != 1 {
                            return Some(([x, y, z], scratch.ones().collect::<Vec<_>>()));
                        }
                    }
                }
                None
            });
            match first_bad {
                None => MedianVerdict::Median,
                Some((triple, candidates)) => MedianVerdict::NotMedian { triple, candidates },
            }
        })
    }

    pub fn is_median_graph(&self) -> bool {
        self.median_verdict().is_median()
    }

    pub fn require_median(&self) -> Result<(), ComplexError> {
        match self.median_verdict() {
            MedianVerdict::Median => Ok(()),
            MedianVerdict::NotMedian { triple, candidates } => {
                Err(ComplexError::NotMedian { triple: *triple, candidates: candidates.clone() })
            }
        }
    }

    /// First pair `(u, v)` of `s` together with a vertex of `I(u, v)` outside `s`.
    pub fn convexity_violation(&self, s: &VertexSet) -> Option<([Vertex; 2], Vertex)> {
        let members = s.to_vec();
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                if let Some(x) = self.vertices().find(|&x| !s.contains(x) && self.between(u, x, v)) {
                    return Some(([u, v], x));
                }
            }
        }
        None
    }

    pub fn is_convex(&self, s: &VertexSet) -> bool {
        self.convexity_violation(s).is_none()
    }

    /// Least interval-closed superset of `s`, by iterating to a fixed point.
    pub fn convex_hull(&self, s: &VertexSet) -> VertexSet {
        let mut hull = s.clone();
        loop {
            let members = hull.to_vec();
            let mut grown = hull.clone();
            for (i, &u) in members.iter().enumerate() {
                for &v in &members[i + 1..] {
                    for x in self.vertices() {
                        if self.between(u, x, v) {
                            grown.insert(x);
                        }
                    }
                }
            }
            if grown.len() == hull.len() {
                return hull;
            }
            hull = grown;
        }
    }

    pub fn link_degree(&self, v: Vertex) -> Result<usize, ComplexError> {
        self.check_vertex(v)?;
        Ok(self.adjacency[v].len())
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_m_ary(&self, m: usize) -> bool {
        self.max_degree() <= m
    }

    /// Every cube of dimension at most `max_dim`, sorted by dimension and
    /// then by vertex set. Fails if the complex contains a cube of
    /// dimension `max_dim + 1`.
    pub fn enumerate_cubes(&self, max_dim: usize) -> Result<Vec<Cube>, ComplexError> {
        self.require_median()?;
        let mut all: Vec<Cube> = self.vertices().map(|v| Cube { vertices: vec![v] }).collect();
        let mut layer = all.clone();
        for dim in 1..=max_dim + 1 {
            layer = self.extend_layer(&layer);
            if layer.is_empty() {
                break;
            }
            if dim > max_dim {
                return Err(ComplexError::DimensionCapExceeded { cap: max_dim });
            }
            all.extend(layer.iter().cloned());
        }
        Ok(all)
    }

    fn extend_layer(&self, layer: &[Cube]) -> Vec<Cube> {
        let mut found: BTreeMap<Vec<Vertex>, Cube> = BTreeMap::new();
        for cube in layer {
            let base = cube.vertices[0];
            let members: BTreeSet<Vertex> = cube.vertices.iter().copied().collect();
            for &w in self.neighbours(base) {
                if members.contains(&w) {
                    continue;
                }
                if let Some(bigger) = self.try_extend(cube, w) {
                    found.entry(bigger.vertex_set().to_vec()).or_insert(bigger);
                }
            }
        }
        found.into_values().collect()
    }

    /// Extends `cube` along the edge from its base vertex to `w`, building the
    /// parallel face one vertex at a time, then verifies the result.
    fn try_extend(&self, cube: &Cube, w: Vertex) -> Option<Cube> {
        let size = cube.vertices.len();
        let mut top = vec![usize::MAX; size];
        top[0] = w;
        for mask in 1..size {
            let low = mask.trailing_zeros() as usize;
            let below = cube.vertices[mask];
            let across = top[mask ^ (1 << low)];
            let skip = cube.vertices[mask ^ (1 << low)];
            let mut common = self.neighbours(below).iter().copied().filter(|&c| c != skip && self.adjacent(c, across));
            let c = common.next()?;
            if common.next().is_some() {
                return None;
            }
            top[mask] = c;
        }
        let mut vertices = cube.vertices.clone();
        vertices.extend(top);
        let candidate = Cube { vertices };
        self.is_hypercube(&candidate).then_some(candidate)
    }

    /// Checks the coordinate labeling: distinct vertices, adjacency exactly
    /// between labels at Hamming distance one, and graph distance equal to
    /// Hamming distance.
    pub fn is_hypercube(&self, cube: &Cube) -> bool {
        let vs = &cube.vertices;
        if !vs.len().is_power_of_two() {
            return false;
        }
        let distinct: BTreeSet<Vertex> = vs.iter().copied().collect();
        if distinct.len() != vs.len() || vs.iter().any(|&v| v >= self.vertex_count()) {
            return false;
        }
        for a in 0..vs.len() {
            for b in a + 1..vs.len() {
                let hamming = (a ^ b).count_ones();
                if self.adjacent(vs[a], vs[b]) != (hamming == 1) || self.dist(vs[a], vs[b]) != hamming {
                    return false;
                }
            }
        }
        true
    }
}

fn bfs(adjacency: &[Vec<Vertex>], source: Vertex) -> Vec<u32> {
    let mut dist = vec![u32::MAX; adjacency.len()];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for &v in &adjacency[u] {
            if dist[v] == u32::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// An induced hypercube. `vertices[mask]` is the vertex with coordinate
/// vector `mask`, so the labeling is its own isomorphism witness.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cube {
    pub vertices: Vec<Vertex>,
}

impl Cube {
    pub fn dimension(&self) -> usize {
        self.vertices.len().trailing_zeros() as usize
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices.iter().copied().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HellyOptions {
    /// Verify that each input set is convex before recursing.
    pub validate_convex: bool,
}

impl Default for HellyOptions {
    fn default() -> Self {
        HellyOptions { validate_convex: true }
    }
}

/// A vertex common to every set of a pairwise-intersecting family of convex
/// vertex sets, computed by the median recursion: with `Y = X3 ∩ … ∩ Xm`, pick
/// `P ∈ X1 ∩ Y`, `Q ∈ X2 ∩ Y`, `R ∈ X1 ∩ X2` and return `m(P, Q, R)`.
pub fn helly_common_point(c: &MedianComplex, sets: &[VertexSet], opts: HellyOptions) -> Result<Vertex, ComplexError> {
    if sets.is_empty() {
        return Err(ComplexError::Malformed("empty family".into()));
    }
    c.require_median()?;
    for (index, s) in sets.iter().enumerate() {
        if s.is_empty() {
            return Err(ComplexError::EmptySet { index });
        }
        if let Some(v) = s.iter().find(|&v| v >= c.vertex_count()) {
            return Err(ComplexError::BadVertex { vertex: v, count: c.vertex_count() });
        }
        if opts.validate_convex {
            if let Some((between, outside)) = c.convexity_violation(s) {
                return Err(ComplexError::NotConvexInput { index, between, outside });
            }
        }
    }
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if sets[i].intersection(&sets[j]).is_empty() {
                return Err(ComplexError::PairwiseEmpty { first: i, second: j });
            }
        }
    }
    let indices: Vec<usize> = (0..sets.len()).collect();
    let mut memo = HashMap::new();
    helly_rec(c, sets, &indices, &mut memo)
}

fn helly_rec(
    c: &MedianComplex,
    sets: &[VertexSet],
    family: &[usize],
    memo: &mut HashMap<Vec<usize>, Vertex>,
) -> Result<Vertex, ComplexError> {
    if let Some(&v) = memo.get(family) {
        return Ok(v);
    }
    let v = match family {
        [a] => sets[*a].first().expect("checked nonempty"),
        [a, b] => {
            sets[*a].intersection(&sets[*b]).first().ok_or(ComplexError::PairwiseEmpty { first: *a, second: *b })?
        }
        [x1, x2, rest @ ..] => {
            let with_first: Vec<usize> = std::iter::once(*x1).chain(rest.iter().copied()).collect();
            let with_second: Vec<usize> = std::iter::once(*x2).chain(rest.iter().copied()).collect();
            let p = helly_rec(c, sets, &with_first, memo)?;
            let q = helly_rec(c, sets, &with_second, memo)?;
            let r = helly_rec(c, sets, &[*x1, *x2], memo)?;
            c.median(p, q, r)?
        }
        [] => unreachable!("family is never empty"),
    };
    memo.insert(family.to_vec(), v);
    Ok(v)
}
