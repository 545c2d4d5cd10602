//! Triviality cascade for a concrete action: find a global fixed vertex,
//! look at the induced action on its link, and, where that is trivial,
//! propagate fixedness outward through the complex.
//!
//! The cascade checks permutation data. It cannot certify that an action
//! arises from `SAut(F_n)`; the declared rank `n` is only compared with the
//! vertex degrees and reported.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::action::{fixed_point_via_criterion, ActionError, ActionOptions, SimplicialAction};
use crate::complex::{MedianComplex, Vertex};
use crate::perm::{Perm, PermGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrivialityError {
    #[error("vertex {0} is not fixed by every generator")]
    NotFixedVertex(Vertex),
    #[error("the action has no fixed vertex; the cascade cannot start")]
    NoFixedVertex,
    #[error(transparent)]
    Action(#[from] ActionError),
}

/// The image group restricted to the neighbours of a fixed vertex.
/// Point `k` of the group is `neighbours[k]`.
#[derive(Debug, Clone)]
pub struct LinkAction {
    pub vertex: Vertex,
    pub neighbours: Vec<Vertex>,
    pub group: PermGroup,
}

impl LinkAction {
    pub fn size(&self) -> usize {
        self.neighbours.len()
    }
}

fn restrict(p: &Perm, neighbours: &[Vertex]) -> Perm {
    let images = neighbours
        .iter()
        .map(|&u| {
            let target = p.apply(u);
            neighbours.binary_search(&target).expect("a fixed vertex's link is invariant")
        })
        .collect();
    Perm::from_images(images).expect("restriction of a bijection")
}

pub fn link_action(c: &MedianComplex, a: &SimplicialAction, v: Vertex) -> Result<LinkAction, TrivialityError> {
    c.check_vertex(v).map_err(ActionError::from)?;
    if a.generators().any(|(_, p)| !p.fixes(v)) {
        return Err(TrivialityError::NotFixedVertex(v));
    }
    let neighbours = c.neighbours(v).to_vec();
    let gens: Vec<Perm> = a.generators().map(|(_, p)| restrict(p, &neighbours)).collect();
    let group = PermGroup::generate(neighbours.len(), &gens, usize::MAX).expect("finite symmetric group");
    Ok(LinkAction { vertex: v, neighbours, group })
}

pub fn is_perfect(g: &PermGroup) -> bool {
    g.is_perfect()
}

/// True iff every element of the link group is an even permutation.
pub fn even_image_check(link: &PermGroup) -> bool {
    link.all_even()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    Trivial,
    NotTrivial,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CascadeWitness {
    /// Some element moves a neighbour of a vertex already known to be fixed.
    NontrivialLink { vertex: Vertex, generator: String, neighbour: Vertex, image: Vertex },
    /// A generator moving a vertex.
    MovedVertex { generator: String, vertex: Vertex, image: Vertex },
    /// An odd permutation in the link group.
    OddLinkElement { vertex: Vertex, element: Vec<Vertex> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankComparison {
    /// Declared rank `n`.
    pub n: usize,
    /// Largest vertex degree: the complex is `m`-ary for this `m`.
    pub m: usize,
    pub m_below_n: bool,
    /// The action is nontrivial although `m < n`. Such an action cannot be a
    /// strong simplicial action of `SAut(F_n)` for `n ≥ 4`.
    pub inconsistent_with_rank: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CascadeReport {
    pub fixed_vertex: Option<Vertex>,
    /// `criterion` or `direct`.
    pub fixed_vertex_source: String,
    pub link_size: usize,
    pub link_group_order: usize,
    pub image_order: usize,
    pub image_perfect: bool,
    pub image_in_alt: bool,
    pub rank_comparison: RankComparison,
    pub propagated_vertices: usize,
    pub propagation_rounds: usize,
    pub conclusion: Conclusion,
    pub witnesses: Vec<CascadeWitness>,
}

/// Runs the cascade. The fixed vertex comes from the criterion route when it
/// applies and from the direct intersection otherwise. `Trivial` is only
/// reported when every generator is literally the identity.
pub fn propagate_triviality(
    c: &MedianComplex,
    a: &SimplicialAction,
    declared_rank: usize,
    opts: ActionOptions,
) -> Result<CascadeReport, TrivialityError> {
    let (v, source) = match fixed_point_via_criterion(c, a, opts)?.vertex() {
        Some(v) => (v, "criterion"),
        None => (a.fixed_points_direct().first().ok_or(TrivialityError::NoFixedVertex)?, "direct"),
    };
    let link = link_action(c, a, v)?;
    let image = a.image_group(opts.group_cap)?;
    let mut witnesses = Vec::new();

    let image_in_alt = even_image_check(&link.group);
    if let Some(odd) = link.group.elements().iter().find(|p| !p.is_even()) {
        witnesses.push(CascadeWitness::OddLinkElement {
            vertex: v,
            element: odd.images().iter().map(|&k| link.neighbours[k]).collect(),
        });
    }

    // Mark vertices known to be fixed; a marked vertex whose link is fixed
    // pointwise passes the mark to its neighbours.
    let n = c.vertex_count();
    let mut marked = vec![false; n];
    marked[v] = true;
    let mut propagated = 1;
    let mut frontier = vec![v];
    let mut rounds = 0;
    'outer: while !frontier.is_empty() {
        rounds += 1;
        let mut next = Vec::new();
        for &u in &frontier {
            for &w in c.neighbours(u) {
                if let Some((name, p)) = a.generators().find(|(_, p)| !p.fixes(w)) {
                    witnesses.push(CascadeWitness::NontrivialLink {
                        vertex: u,
                        generator: name.to_string(),
                        neighbour: w,
                        image: p.apply(w),
                    });
                    break 'outer;
                }
            }
            for &w in c.neighbours(u) {
                if !marked[w] {
                    marked[w] = true;
                    propagated += 1;
                    next.push(w);
                }
            }
        }
        next.sort_unstable();
        frontier = next;
    }

    let moved =
        a.generators().find_map(|(name, p)| (0..n).find(|&x| !p.fixes(x)).map(|x| (name.to_string(), x, p.apply(x))));
    let conclusion = match moved {
        Some((generator, vertex, image)) => {
            witnesses.push(CascadeWitness::MovedVertex { generator, vertex, image });
            Conclusion::NotTrivial
        }
        None if propagated == n => Conclusion::Trivial,
        None => Conclusion::Inconclusive,
    };

    let m = c.max_degree();
    Ok(CascadeReport {
        fixed_vertex: Some(v),
        fixed_vertex_source: source.to_string(),
        link_size: link.size(),
        link_group_order: link.group.order(),
        image_order: image.order(),
        image_perfect: image.group().is_perfect(),
        image_in_alt,
        rank_comparison: RankComparison {
            n: declared_rank,
            m,
            m_below_n: m < declared_rank,
            inconsistent_with_rank: m < declared_rank && conclusion != Conclusion::Trivial,
        },
        propagated_vertices: propagated,
        propagation_rounds: rounds,
        conclusion,
        witnesses,
    })
}
