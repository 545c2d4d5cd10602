//! Small graph families: paths, cycles, stars, grids, hypercubes, trees,
//! and Cartesian products.

use rand::Rng;

use crate::complex::{MedianComplex, Vertex};

fn build(name: String, n: usize, edges: Vec<[Vertex; 2]>) -> MedianComplex {
    MedianComplex::from_edges(name, n, &edges).expect("generated graphs are connected and simple")
}

pub fn path(n: usize) -> MedianComplex {
    build(format!("P{n}"), n, (1..n).map(|i| [i - 1, i]).collect())
}

pub fn cycle(n: usize) -> MedianComplex {
    assert!(n >= 3);
    build(format!("C{n}"), n, (0..n).map(|i| [i, (i + 1) % n]).collect())
}

/// Star with centre 0 and leaves `1..=leaves`.
pub fn star(leaves: usize) -> MedianComplex {
    build(format!("S{leaves}"), leaves + 1, (1..=leaves).map(|i| [0, i]).collect())
}

pub fn complete(n: usize) -> MedianComplex {
    let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| [i, j])).collect();
    build(format!("K{n}"), n, edges)
}

pub fn complete_bipartite(a: usize, b: usize) -> MedianComplex {
    let edges = (0..a).flat_map(|i| (0..b).map(move |j| [i, a + j])).collect();
    build(format!("K{a},{b}"), a + b, edges)
}

/// `Q_d`: vertices are bitmasks, edges join masks differing in one bit.
pub fn hypercube(d: usize) -> MedianComplex {
    let n = 1usize << d;
    let edges = (0..n).flat_map(|v| (0..d).map(move |k| [v, v ^ (1 << k)])).filter(|[u, v]| u < v).collect();
    build(format!("Q{d}"), n, edges)
}

/// Row-major index of a grid point.
pub fn grid_index(dims: &[usize], coords: &[usize]) -> Vertex {
    coords.iter().zip(dims).fold(0, |acc, (&c, &d)| acc * d + c)
}

pub fn grid_coords(dims: &[usize], mut v: Vertex) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = v % d;
        v /= d;
    }
    out
}

/// Cartesian product of paths with the given numbers of vertices.
pub fn grid(dims: &[usize]) -> MedianComplex {
    let name = dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("x");
    let mut g = path(dims[0]);
    for &d in &dims[1..] {
        g = product(&g, &path(d));
    }
    let doc = g.to_document();
    build(format!("grid{name}"), doc.vertices, doc.edges)
}

/// Tree from a parent array: vertex `i + 1` hangs off `parents[i]`.
pub fn tree_from_parents(parents: &[Vertex]) -> MedianComplex {
    let edges = parents.iter().enumerate().map(|(i, &p)| [p, i + 1]).collect();
    build(format!("T{}", parents.len() + 1), parents.len() + 1, edges)
}

/// Uniformly random recursive tree on `n` vertices.
pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> MedianComplex {
    let parents: Vec<Vertex> = (1..n).map(|i| rng.gen_range(0..i)).collect();
    tree_from_parents(&parents)
}

/// Cartesian product; vertex `(a, b)` is `a * |B| + b`.
pub fn product(a: &MedianComplex, b: &MedianComplex) -> MedianComplex {
    let nb = b.vertex_count();
    let mut edges = Vec::new();
    for [u, v] in a.edges() {
        for y in 0..nb {
            edges.push([u * nb + y, v * nb + y]);
        }
    }
    for x in a.vertices() {
        for [u, v] in b.edges() {
            edges.push([x * nb + u, x * nb + v]);
        }
    }
    build(format!("{}*{}", a.name(), b.name()), a.vertex_count() * nb, edges)
}

/// `copies` copies of `piece`, each joined to a fresh hub vertex 0 through
/// the copy of `root`. Copy `k` occupies `1 + k*|piece| ..`.
pub fn hub_of_copies(piece: &MedianComplex, root: Vertex, copies: usize) -> MedianComplex {
    let m = piece.vertex_count();
    let mut edges = Vec::new();
    for k in 0..copies {
        let off = 1 + k * m;
        edges.push([0, off + root]);
        edges.extend(piece.edges().into_iter().map(|[u, v]| [off + u, off + v]));
    }
    build(format!("hub{copies}({})", piece.name()), 1 + copies * m, edges)
}
