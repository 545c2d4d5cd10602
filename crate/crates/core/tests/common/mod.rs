//! Reference implementations used as oracles by the integration tests.
//! Nothing here calls into the library's algorithms beyond reading graph
//! adjacency and automorphism images.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use cubefix::action::SimplicialAction;
use cubefix::perm::Perm;
use cubefix::shapes;
use cubefix::{FreeAutomorphism, MedianComplex, Vertex, VertexSet};
use rand::seq::SliceRandom;
use rand::Rng;

// ---------- graphs ----------

pub fn distances(c: &MedianComplex) -> Vec<Vec<u32>> {
    c.vertices()
        .map(|s| {
            let mut d = vec![u32::MAX; c.vertex_count()];
            d[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &v in c.neighbours(u) {
                    if d[v] == u32::MAX {
                        d[v] = d[u] + 1;
                        q.push_back(v);
                    }
                }
            }
            d
        })
        .collect()
}

pub fn interval(d: &[Vec<u32>], u: Vertex, v: Vertex) -> BTreeSet<Vertex> {
    (0..d.len()).filter(|&x| d[u][x] + d[x][v] == d[u][v]).collect()
}

pub fn is_convex(d: &[Vec<u32>], s: &BTreeSet<Vertex>) -> bool {
    s.iter().all(|&u| s.iter().all(|&v| u >= v || interval(d, u, v).is_subset(s)))
}

/// Vertices lying in all three pairwise intervals.
pub fn medians(d: &[Vec<u32>], x: Vertex, y: Vertex, z: Vertex) -> Vec<Vertex> {
    (0..d.len())
        .filter(|&m| d[x][m] + d[m][y] == d[x][y] && d[y][m] + d[m][z] == d[y][z] && d[x][m] + d[m][z] == d[x][z])
        .collect()
}

/// Exhaustive definition check; returns the first bad triple.
pub fn median_counterexample(c: &MedianComplex) -> Option<[Vertex; 3]> {
    let d = distances(c);
    let n = c.vertex_count();
    for x in 0..n {
        for y in x + 1..n {
            for z in y + 1..n {
                if medians(&d, x, y, z).len() != 1 {
                    return Some([x, y, z]);
                }
            }
        }
    }
    None
}

pub fn to_set(s: &VertexSet) -> BTreeSet<Vertex> {
    s.iter().collect()
}

// ---------- free groups ----------

/// Signed 1-based letters.
pub type Raw = Vec<i32>;

pub fn raw_reduce(w: &[i32]) -> Raw {
    let mut out: Raw = Vec::new();
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn raw_images(a: &FreeAutomorphism) -> Vec<Raw> {
    a.images()
        .iter()
        .map(|w| {
            w.letters().iter().map(|l| if l.is_positive() { l.index() as i32 } else { -(l.index() as i32) }).collect()
        })
        .collect()
}

fn raw_invert(w: &[i32]) -> Raw {
    w.iter().rev().map(|l| -l).collect()
}

/// Image of a word under the substitution `x_i -> images[i-1]`.
pub fn raw_apply(images: &[Raw], w: &[i32]) -> Raw {
    let mut out = Vec::new();
    for &l in w {
        let img = &images[(l.unsigned_abs() - 1) as usize];
        if l > 0 {
            out.extend_from_slice(img);
        } else {
            out.extend(raw_invert(img));
        }
    }
    raw_reduce(&out)
}

/// Right action: first `a`, then `b`, i.e. `x -> b(a(x))`.
pub fn raw_then(a: &[Raw], b: &[Raw]) -> Vec<Raw> {
    a.iter().map(|w| raw_apply(b, w)).collect()
}

pub fn raw_identity(n: usize) -> Vec<Raw> {
    (1..=n as i32).map(|i| vec![i]).collect()
}

pub fn raw_nielsen(n: usize, i: usize, j: usize, right: bool) -> Vec<Raw> {
    let mut imgs = raw_identity(n);
    let (i, j) = (i as i32, j as i32);
    imgs[i as usize - 1] = if right { vec![i, j] } else { vec![j, i] };
    imgs
}

/// Inverse of a Nielsen move on the generators.
pub fn raw_nielsen_inv(n: usize, i: usize, j: usize, right: bool) -> Vec<Raw> {
    let mut imgs = raw_identity(n);
    let (i, j) = (i as i32, j as i32);
    imgs[i as usize - 1] = if right { vec![i, -j] } else { vec![-j, i] };
    imgs
}

pub fn raw_swap(n: usize, i: usize, j: usize) -> Vec<Raw> {
    let mut imgs = raw_identity(n);
    imgs.swap(i - 1, j - 1);
    imgs
}

// ---------- integer matrices ----------

pub type Mat = Vec<Vec<i64>>;

pub fn exponent_matrix(a: &FreeAutomorphism) -> Mat {
    let n = a.rank();
    raw_images(a)
        .iter()
        .map(|w| {
            let mut row = vec![0; n];
            for &l in w {
                row[(l.unsigned_abs() - 1) as usize] += l.signum() as i64;
            }
            row
        })
        .collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

/// Order of the matrix group generated by `gens`, or `None` past `cap`.
pub fn matrix_group_order(gens: &[Mat], cap: usize) -> Option<usize> {
    let n = gens[0].len();
    let id: Mat = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let mut seen = HashSet::from([id.clone()]);
    let mut q = VecDeque::from([id]);
    while let Some(m) = q.pop_front() {
        for g in gens {
            let p = mat_mul(&m, g);
            if seen.insert(p.clone()) {
                if seen.len() > cap {
                    return None;
                }
                q.push_back(p);
            }
        }
    }
    Some(seen.len())
}

/// Laplace expansion along the first row.
pub fn cofactor_det(m: &Mat) -> i64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|c| {
            let minor: Mat = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &x)| x).collect())
                .collect();
            let sign = if c % 2 == 0 { 1 } else { -1 };
            sign * m[0][c] * cofactor_det(&minor)
        })
        .sum()
}

// ---------- actions ----------

pub fn perm(images: Vec<usize>) -> Perm {
    Perm::from_images(images).expect("bijection")
}

/// Diagonal action on a Cartesian product built by `shapes::product`.
pub fn product_perm(pa: &Perm, pb: &Perm) -> Perm {
    let nb = pb.degree();
    perm((0..pa.degree() * nb).map(|v| pa.apply(v / nb) * nb + pb.apply(v % nb)).collect())
}

/// Reflection of a grid along one axis.
pub fn grid_flip(dims: &[usize], axis: usize) -> Perm {
    let n = dims.iter().product();
    perm(
        (0..n)
            .map(|v| {
                let mut c = shapes::grid_coords(dims, v);
                c[axis] = dims[axis] - 1 - c[axis];
                shapes::grid_index(dims, &c)
            })
            .collect(),
    )
}

/// Swap of two grid axes of equal length.
pub fn grid_transpose(dims: &[usize], a: usize, b: usize) -> Perm {
    let n = dims.iter().product();
    perm(
        (0..n)
            .map(|v| {
                let mut c = shapes::grid_coords(dims, v);
                c.swap(a, b);
                shapes::grid_index(dims, &c)
            })
            .collect(),
    )
}

/// Permutes the copies of `hub_of_copies(piece, _, k)` by `sigma`.
pub fn copy_perm(piece_size: usize, sigma: &[usize]) -> Perm {
    let n = 1 + sigma.len() * piece_size;
    perm(
        (0..n)
            .map(|v| {
                if v == 0 {
                    0
                } else {
                    let (k, r) = ((v - 1) / piece_size, (v - 1) % piece_size);
                    1 + sigma[k] * piece_size + r
                }
            })
            .collect(),
    )
}

/// Acts on the leaves of a star through a permutation of `0..leaves`.
pub fn star_perm(sigma: &[usize]) -> Perm {
    perm(std::iter::once(0).chain(sigma.iter().map(|&i| i + 1)).collect())
}

/// The two standard generators of `A_k` (k odd: a 3-cycle and a k-cycle).
pub fn alternating_gens(k: usize) -> Vec<Vec<usize>> {
    let three = Perm::from_cycles(k, &[&[0, 1, 2]]).images().to_vec();
    let long: Vec<usize> = if k % 2 == 1 {
        (0..k).map(|i| (i + 1) % k).collect()
    } else {
        // (1 2 ... k-1) fixes 0
        (0..k)
            .map(|i| {
                if i == 0 {
                    0
                } else if i == k - 1 {
                    1
                } else {
                    i + 1
                }
            })
            .collect()
    };
    vec![three, long]
}

/// `A_5` acting on the ten 2-subsets of `0..5`.
pub fn alt5_on_pairs() -> Vec<Vec<usize>> {
    let pairs: Vec<(usize, usize)> = (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))).collect();
    alternating_gens(5)
        .into_iter()
        .map(|g| {
            pairs
                .iter()
                .map(|&(i, j)| {
                    let (a, b) = (g[i].min(g[j]), g[i].max(g[j]));
                    pairs.iter().position(|&p| p == (a, b)).unwrap()
                })
                .collect()
        })
        .collect()
}

pub fn random_sigma<R: Rng>(k: usize, rng: &mut R) -> Vec<usize> {
    let mut s: Vec<usize> = (0..k).collect();
    s.shuffle(rng);
    s
}

pub fn action(c: &MedianComplex, gens: Vec<Perm>) -> SimplicialAction {
    SimplicialAction::from_pairs(c, gens.into_iter().enumerate().map(|(i, p)| (format!("g{i}"), p.images().to_vec())))
        .expect("valid action")
}

pub fn random_convex<R: Rng>(c: &MedianComplex, rng: &mut R) -> VertexSet {
    let seeds = rng.gen_range(1..=3);
    let s: VertexSet = (0..seeds).map(|_| rng.gen_range(0..c.vertex_count())).collect();
    c.convex_hull(&s)
}

/// Random median host: grid, tree, or a product of the two.
pub fn random_median_host<R: Rng>(rng: &mut R) -> MedianComplex {
    match rng.gen_range(0..4) {
        0 => shapes::grid(&[rng.gen_range(2..7), rng.gen_range(2..7)]),
        1 => shapes::grid(&[rng.gen_range(2..4), rng.gen_range(2..4), rng.gen_range(2..4)]),
        2 => shapes::random_tree(rng.gen_range(2..60), rng),
        _ => shapes::product(&shapes::random_tree(rng.gen_range(2..12), rng), &shapes::path(rng.gen_range(2..5))),
    }
}
