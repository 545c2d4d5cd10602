//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion.

mod common;

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use cubefix::action::{
    fixed_point_via_criterion, strong_simplicial_violation, ActionOptions, CriterionOutcome, ElementRef, Refusal,
    SimplicialAction,
};
use cubefix::catalog::{self, commutator_identity_check, family, pairwise_orders, FamilyName};
use cubefix::complex::MedianVerdict;
use cubefix::perm::{Perm, PermGroup};
use cubefix::shapes;
use cubefix::triviality::{even_image_check, link_action, propagate_triviality, Conclusion};
use cubefix::{helly_common_point, ClosureCaps, ClosureResult, HellyOptions, MedianComplex, Vertex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

// (first, second, order) over member indices of the family listing.
const Y2_3: &[(usize, usize, usize)] =
    &[(0, 0, 2), (0, 1, 12), (0, 2, 6), (0, 3, 4), (1, 1, 2), (1, 2, 8), (1, 3, 8), (2, 2, 2), (2, 3, 4), (3, 3, 2)];
const Y2_4: &[(usize, usize, usize)] = &[
    (0, 0, 2),
    (0, 1, 12),
    (0, 2, 4),
    (0, 3, 6),
    (0, 4, 4),
    (1, 1, 2),
    (1, 2, 12),
    (1, 3, 8),
    (1, 4, 4),
    (2, 2, 2),
    (2, 3, 4),
    (2, 4, 8),
    (3, 3, 2),
    (3, 4, 4),
    (4, 4, 2),
];
const Y2_5: &[(usize, usize, usize)] = &[
    (0, 0, 2),
    (0, 1, 12),
    (0, 2, 4),
    (0, 3, 4),
    (0, 4, 6),
    (0, 5, 4),
    (1, 1, 2),
    (1, 2, 12),
    (1, 3, 4),
    (1, 4, 8),
    (1, 5, 4),
    (2, 2, 2),
    (2, 3, 6),
    (2, 4, 4),
    (2, 5, 4),
    (3, 3, 2),
    (3, 4, 4),
    (3, 5, 8),
    (4, 4, 2),
    (4, 5, 4),
    (5, 5, 2),
];
const Y4_4: &[(usize, usize, usize)] = &[
    (0, 0, 2),
    (0, 1, 6),
    (0, 2, 8),
    (0, 3, 12),
    (0, 4, 4),
    (1, 1, 2),
    (1, 2, 48),
    (1, 3, 8),
    (1, 4, 8),
    (2, 2, 4),
    (2, 3, 8),
    (2, 4, 4),
    (3, 3, 2),
    (3, 4, 4),
    (4, 4, 2),
];
const Y4_5: &[(usize, usize, usize)] = &[
    (0, 0, 2),
    (0, 1, 6),
    (0, 2, 8),
    (0, 3, 8),
    (0, 4, 12),
    (0, 5, 4),
    (1, 1, 2),
    (1, 2, 48),
    (1, 3, 8),
    (1, 4, 8),
    (1, 5, 8),
    (2, 2, 4),
    (2, 3, 24),
    (2, 4, 8),
    (2, 5, 4),
    (3, 3, 4),
    (3, 4, 8),
    (3, 5, 8),
    (4, 4, 2),
    (4, 5, 4),
    (5, 5, 2),
];

fn pairwise_against_goldens(name: FamilyName, n: usize, golden: &[(usize, usize, usize)]) -> Outcome {
    let f = family(name, n).map_err(|e| e.to_string())?;
    let results = pairwise_orders(&f, ClosureCaps::default()).map_err(|e| e.to_string())?;
    let m = f.members.len();
    ensure!(results.len() == m * (m + 1) / 2, "{name} n={n}: {} pairs for {m} members", results.len());
    ensure!(results.len() == golden.len(), "{name} n={n}: golden table has {} rows", golden.len());
    for (r, &(i, j, order)) in results.iter().zip(golden) {
        ensure!((r.first, r.second) == (i, j), "{name} n={n}: pair order ({},{})", r.first, r.second);
        let got = match &r.result {
            ClosureResult::Finite { order, .. } => *order,
            ClosureResult::NotFiniteWithinBounds { elements_seen, max_image_length_seen } => {
                return Err(format!(
                    "{name} n={n} pair ({i},{j}) not finite within bounds ({elements_seen} elements, image length {max_image_length_seen})"
                ))
            }
        };
        ensure!(got == order, "{name} n={n} pair ({i},{j}): order {got}, golden {order}");
        let mats = [exponent_matrix(&f.members[i].automorphism), exponent_matrix(&f.members[j].automorphism)];
        let oracle = matrix_group_order(&mats, 100_000);
        ensure!(
            oracle == Some(order),
            "{name} n={n} pair ({i},{j}): GL_n(Z) image has order {oracle:?}, closure {order}"
        );
    }
    Ok(format!("{name} n={n}: {} pairs finite", results.len()))
}

fn criterion_1() -> Outcome {
    let parts = [
        pairwise_against_goldens(FamilyName::Y2, 3, Y2_3)?,
        pairwise_against_goldens(FamilyName::Y2, 4, Y2_4)?,
        pairwise_against_goldens(FamilyName::Y2, 5, Y2_5)?,
    ];
    Ok(parts.join("; "))
}

fn criterion_2() -> Outcome {
    let parts =
        [pairwise_against_goldens(FamilyName::Y4, 4, Y4_4)?, pairwise_against_goldens(FamilyName::Y4, 5, Y4_5)?];
    Ok(parts.join("; "))
}

fn criterion_3() -> Outcome {
    let mut total = 0;
    for n in 3..=5 {
        let report = commutator_identity_check(n).map_err(|e| e.to_string())?;
        ensure!(report.passed(), "n={n}: failures {:?}", report.failures);
        ensure!(report.checked == 2 * n * (n - 1) * (n - 2), "n={n}: checked {}", report.checked);
        total += report.checked;
        for i in 1..=n {
            for j in (1..=n).filter(|&j| j != i) {
                for k in (1..=n).filter(|&k| k != i && k != j) {
                    for right in [true, false] {
                        let a = raw_nielsen(n, i, j, right);
                        let b = raw_nielsen(n, j, k, right);
                        let ai = raw_nielsen_inv(n, i, j, right);
                        let bi = raw_nielsen_inv(n, j, k, right);
                        let comm = raw_then(&raw_then(&raw_then(&a, &b), &ai), &bi);
                        ensure!(comm == raw_nielsen(n, i, k, right), "oracle: [{i}{j},{j}{k}] right={right} n={n}");
                        let (x, y) = if right {
                            (catalog::rho(i, j, n), catalog::rho(j, k, n))
                        } else {
                            (catalog::lambda(i, j, n), catalog::lambda(j, k, n))
                        };
                        let lib = catalog::commutator(&x.unwrap(), &y.unwrap()).map_err(|e| e.to_string())?;
                        ensure!(
                            raw_images(&lib) == comm,
                            "library commutator differs from oracle at ({i},{j},{k}) n={n}"
                        );
                    }
                }
            }
        }
    }
    Ok(format!("{total} identities, 0 failures"))
}

fn criterion_4() -> Outcome {
    for n in 3..=6 {
        let cyc = catalog::cycle(n).map_err(|e| e.to_string())?;
        let expected: Vec<Raw> = (0..n as i32).map(|k| vec![(k + 1) % n as i32 + 1]).collect();
        ensure!(raw_images(&cyc) == expected, "cycle({n}) images {:?}", raw_images(&cyc));
        let oracle = (1..n).rev().fold(raw_identity(n), |acc, i| raw_then(&acc, &raw_swap(n, i, i + 1)));
        ensure!(oracle == expected, "oracle product differs for n={n}");
        let factors: Vec<_> = (1..n).rev().map(|i| catalog::transposition(i, i + 1, n).unwrap()).collect();
        let lib = cubefix::FreeAutomorphism::product(n, factors.iter()).map_err(|e| e.to_string())?;
        ensure!(lib == cyc, "library product differs from cycle({n})");
    }
    Ok("n=3..6 exact".into())
}

fn criterion_5() -> Outcome {
    let mut checked = 0;
    for n in [4, 5] {
        for m in family(FamilyName::Y4, n).unwrap().members {
            ensure!(m.automorphism.is_special(), "{} (n={n}) not special", m.name);
            ensure!(cofactor_det(&exponent_matrix(&m.automorphism)) == 1, "{} (n={n}) oracle det", m.name);
            checked += 1;
        }
    }
    for n in 3..=5 {
        let f = family(FamilyName::Y2, n).unwrap();
        let e = f.member(&format!("e({n})")).ok_or(format!("e({n}) missing from Y2"))?;
        let pi = e.automorphism.abelianize();
        ensure!(pi.determinant() == -1, "det e({n}) = {}", pi.determinant());
        ensure!(cofactor_det(&exponent_matrix(&e.automorphism)) == -1, "oracle det e({n})");
        let rho = catalog::rho(1, 2, n).unwrap().abelianize();
        let mut expected: Mat = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        expected[0][1] = 1;
        ensure!(rho.rows() == expected.as_slice(), "pi(rho12) = {:?} at n={n}", rho.rows());
    }
    Ok(format!("{checked} Y4 members special; det e_n = -1; pi(rho12) = I + E12"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut good: Vec<MedianComplex> = (1..=4).map(shapes::hypercube).collect();
    good.extend((0..50).map(|_| {
        let n = rng.gen_range(1..=200);
        shapes::random_tree(n, &mut rng)
    }));
    for c in &good {
        ensure!(c.is_median_graph(), "{} rejected: {:?}", c.name(), c.median_verdict());
        ensure!(median_counterexample(c).is_none(), "oracle rejects {}", c.name());
    }
    let bad = [shapes::cycle(6), shapes::complete_bipartite(2, 3), shapes::complete(4)];
    let mut triples = Vec::new();
    for c in &bad {
        let MedianVerdict::NotMedian { triple, candidates } = c.median_verdict() else {
            return Err(format!("{} accepted", c.name()));
        };
        let d = distances(c);
        let oracle = medians(&d, triple[0], triple[1], triple[2]);
        ensure!(oracle.len() != 1, "{} witness {triple:?} has a unique median", c.name());
        ensure!(&oracle == candidates, "{} candidates {candidates:?}, oracle {oracle:?}", c.name());
        ensure!(median_counterexample(c) == Some(*triple), "{} witness is not the first bad triple", c.name());
        triples.push(format!("{} {triple:?}", c.name()));
    }
    Ok(format!("{} median graphs accepted; rejected {}", good.len(), triples.join(", ")))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut trials, mut attempts) = (0, 0);
    while trials < 200 {
        attempts += 1;
        ensure!(attempts < 200_000, "only {trials} pairwise-intersecting families found");
        let c = random_median_host(&mut rng);
        let k = rng.gen_range(3..=6);
        let sets: Vec<_> = (0..k).map(|_| random_convex(&c, &mut rng)).collect();
        let plain: Vec<BTreeSet<Vertex>> = sets.iter().map(to_set).collect();
        let pairwise = (0..k).all(|i| (i + 1..k).all(|j| !plain[i].is_disjoint(&plain[j])));
        if !pairwise {
            continue;
        }
        let d = distances(&c);
        ensure!(plain.iter().all(|s| is_convex(&d, s)), "hull not convex on {}", c.name());
        let total = plain.iter().skip(1).fold(plain[0].clone(), |acc, s| &acc & s);
        let v = helly_common_point(&c, &sets, HellyOptions::default()).map_err(|e| e.to_string())?;
        ensure!(total.contains(&v), "{}: vertex {v} outside the intersection {total:?}", c.name());
        trials += 1;
    }
    Ok(format!("{trials} trials sound ({attempts} families drawn)"))
}

/// A constructed finite action together with a label for reports.
struct Trial {
    label: String,
    complex: MedianComplex,
    action: SimplicialAction,
}

fn trial(label: String, complex: MedianComplex, gens: Vec<Perm>) -> Trial {
    let action = common::action(&complex, gens);
    Trial { label, complex, action }
}

fn candidate(kind: usize, rng: &mut ChaCha8Rng) -> Trial {
    match kind {
        0 => {
            let dims = [rng.gen_range(2..=7), rng.gen_range(2..=7)];
            let mut pool =
                vec![grid_flip(&dims, 0), grid_flip(&dims, 1), grid_flip(&dims, 0).then(&grid_flip(&dims, 1))];
            if dims[0] == dims[1] {
                pool.push(grid_transpose(&dims, 0, 1));
            }
            let gens: Vec<Perm> = pool.into_iter().filter(|_| rng.gen_bool(0.5)).collect();
            trial(format!("grid{dims:?} reflections"), shapes::grid(&dims), gens)
        }
        1 => {
            let dims = [rng.gen_range(2..=5), rng.gen_range(2..=5), rng.gen_range(2..=4)];
            let gens = (0..3).filter(|_| rng.gen_bool(0.5)).map(|a| grid_flip(&dims, a)).collect();
            trial(format!("grid{dims:?} reflections"), shapes::grid(&dims), gens)
        }
        2 => {
            let m = rng.gen_range(1..=8);
            let piece = shapes::random_tree(m, rng);
            let root = rng.gen_range(0..m);
            let k = rng.gen_range(2..=4);
            let gens = (0..rng.gen_range(1..=2)).map(|_| copy_perm(m, &random_sigma(k, rng))).collect();
            trial(format!("hub of {k} trees"), shapes::hub_of_copies(&piece, root, k), gens)
        }
        3 => {
            let m = rng.gen_range(1..=5);
            let piece = shapes::random_tree(m, rng);
            let k = rng.gen_range(2..=3);
            let hub = shapes::hub_of_copies(&piece, 0, k);
            let len = rng.gen_range(2..=5);
            let flip = perm((0..len).rev().collect());
            let keep = Perm::identity(len);
            let sigma = copy_perm(m, &random_sigma(k, rng));
            let gens = vec![
                product_perm(&sigma, if rng.gen_bool(0.5) { &flip } else { &keep }),
                product_perm(&Perm::identity(hub.vertex_count()), &flip),
            ];
            let c = shapes::product(&hub, &shapes::path(len));
            trial(format!("hub x P{len} product"), c, gens)
        }
        4 => {
            let d = rng.gen_range(1..=3);
            let q = shapes::hypercube(d);
            let nq = q.vertex_count();
            let mut gens = Vec::new();
            if rng.gen_bool(0.3) {
                // bit flip or coordinate swap on the cube factor
                let swap = d >= 2 && rng.gen_bool(0.5);
                let g: Vec<usize> =
                    (0..nq).map(|v| if swap { (v & !3) | ((v & 1) << 1) | ((v >> 1) & 1) } else { v ^ 1 }).collect();
                gens.push(product_perm(&perm(g), &Perm::identity(5)));
            }
            let piece = shapes::path(2);
            let hub = shapes::hub_of_copies(&piece, 0, 2);
            gens.push(product_perm(&Perm::identity(nq), &copy_perm(2, &[1, 0])));
            trial(format!("Q{d} x hub"), shapes::product(&q, &hub), gens)
        }
        _ => match rng.gen_range(0..4) {
            0 => trial(
                "A5 on star leaves".into(),
                shapes::star(5),
                alternating_gens(5).into_iter().map(|g| star_perm(&g)).collect(),
            ),
            1 => trial(
                "A6 on star leaves".into(),
                shapes::star(6),
                alternating_gens(6).into_iter().map(|g| star_perm(&g)).collect(),
            ),
            2 => trial(
                "A5 on 2-subsets".into(),
                shapes::star(10),
                alt5_on_pairs().into_iter().map(|g| star_perm(&g)).collect(),
            ),
            _ => {
                let m = rng.gen_range(1..=4);
                let piece = shapes::random_tree(m, rng);
                let root = rng.gen_range(0..m);
                let gens = alternating_gens(5).into_iter().map(|g| copy_perm(m, &g)).collect();
                trial("A5 on a hub of 5 trees".into(), shapes::hub_of_copies(&piece, root, 5), gens)
            }
        },
    }
}

struct PipelineStats {
    strong: Vec<Trial>,
    kinds: BTreeSet<usize>,
    refused: usize,
    fix_sets: usize,
    elapsed: Duration,
}

fn run_pipeline() -> Result<PipelineStats, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let opts = ActionOptions::default();
    let start = Instant::now();
    let mut stats =
        PipelineStats { strong: Vec::new(), kinds: BTreeSet::new(), refused: 0, fix_sets: 0, elapsed: Duration::ZERO };
    let mut attempt = 0;
    while stats.strong.len() < 100 || stats.refused < 20 {
        ensure!(attempt < 5000, "only {} strong and {} refused candidates", stats.strong.len(), stats.refused);
        let kind = attempt % 6;
        let t = candidate(kind, &mut rng);
        attempt += 1;
        let (c, a) = (&t.complex, &t.action);
        let violation = strong_simplicial_violation(c, a, opts).map_err(|e| e.to_string())?;
        let outcome = fixed_point_via_criterion(c, a, opts).map_err(|e| e.to_string())?;
        let direct = a.fixed_points_direct();
        if let Some(v) = violation {
            let group = a.image_group(opts.group_cap).map_err(|e| e.to_string())?;
            let g = perm(v.element.clone());
            ensure!(group.group().contains(&g), "{}: witness element outside the image group", t.label);
            let cube: BTreeSet<Vertex> = v.cube.iter().copied().collect();
            let image: BTreeSet<Vertex> = cube.iter().map(|&x| g.apply(x)).collect();
            ensure!(image == cube && cube.iter().any(|&x| g.apply(x) != x), "{}: bad witness {v:?}", t.label);
            ensure!(
                outcome == CriterionOutcome::Refused(Refusal::NotStrongSimplicial(v)),
                "{}: expected NotStrongSimplicial, got {outcome:?}",
                t.label
            );
            stats.refused += 1;
            continue;
        }
        match (&outcome, direct.is_empty()) {
            (CriterionOutcome::FixedVertex { vertex, .. }, false) => {
                ensure!(direct.contains(*vertex), "{}: vertex {vertex} not fixed", t.label)
            }
            (CriterionOutcome::Refused(_), true) => {}
            _ => return Err(format!("{}: criterion {outcome:?} vs direct {direct}", t.label)),
        }
        let group = a.image_group(opts.group_cap).map_err(|e| e.to_string())?;
        let d = distances(c);
        let mut seen = BTreeSet::new();
        for g in group.elements() {
            let fix = to_set(&group.fix_set(&ElementRef::Element(g.clone())).map_err(|e| e.to_string())?);
            let oracle: BTreeSet<Vertex> = c.vertices().filter(|&x| g.apply(x) == x).collect();
            ensure!(fix == oracle, "{}: fix set of {g} differs from oracle", t.label);
            if seen.insert(fix.clone()) {
                ensure!(is_convex(&d, &fix), "{}: Fix({g}) = {fix:?} not convex", t.label);
                stats.fix_sets += 1;
            }
        }
        if stats.strong.len() < 100 {
            stats.kinds.insert(kind);
            stats.strong.push(t);
        }
    }
    stats.elapsed = start.elapsed();
    Ok(stats)
}

fn criterion_8(stats: &Result<PipelineStats, String>) -> Outcome {
    let s = stats.as_ref().map_err(Clone::clone)?;
    Ok(format!(
        "{} strong actions agree with the direct fixed set ({} constructions); {} non-strong candidates refused; pipeline {:.2}s",
        s.strong.len(),
        s.kinds.len(),
        s.refused,
        s.elapsed.as_secs_f64()
    ))
}

fn criterion_9(stats: &Result<PipelineStats, String>) -> Outcome {
    let s = stats.as_ref().map_err(Clone::clone)?;
    Ok(format!("{} distinct fix sets checked, 0 non-convex", s.fix_sets))
}

fn criterion_10() -> Outcome {
    let opts = ActionOptions::default();
    let square = shapes::cycle(4);
    for (label, g) in [("diagonal reflection", vec![0, 3, 2, 1]), ("rotation", vec![1, 2, 3, 0])] {
        let a = common::action(&square, vec![perm(g.clone())]);
        let v = strong_simplicial_violation(&square, &a, opts)
            .map_err(|e| e.to_string())?
            .ok_or(format!("square {label} accepted"))?;
        ensure!(v.dimension == 2, "square {label}: witness dimension {}", v.dimension);
        let cube: BTreeSet<Vertex> = v.cube.iter().copied().collect();
        ensure!(cube == BTreeSet::from([0, 1, 2, 3]), "square {label}: witness cube {:?}", v.cube);
    }
    let p3 = shapes::path(3);
    let swap = common::action(&p3, vec![perm(vec![2, 1, 0])]);
    ensure!(strong_simplicial_violation(&p3, &swap, opts).unwrap().is_none(), "3-path swap rejected");
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut hosts: Vec<MedianComplex> = (1..=4).map(shapes::hypercube).collect();
    hosts.extend([shapes::grid(&[3, 4]), shapes::grid(&[2, 3, 3]), shapes::star(4), shapes::path(5)]);
    hosts.extend((0..5).map(|_| random_median_host(&mut rng)));
    for c in &hosts {
        let id = common::action(c, vec![Perm::identity(c.vertex_count())]);
        ensure!(strong_simplicial_violation(c, &id, opts).unwrap().is_none(), "identity on {} rejected", c.name());
    }
    Ok(format!(
        "square reflection and rotation rejected with 2-cube witnesses; swap and {} identities accepted",
        hosts.len()
    ))
}

fn perfect_examples() -> Vec<(Trial, usize)> {
    let a5 = || alternating_gens(5).into_iter().map(|g| star_perm(&g)).collect::<Vec<_>>();
    let star5 = shapes::star(5);
    let p3 = shapes::path(3);
    let prod = shapes::product(&star5, &p3);
    let prod_gens = a5().iter().map(|g| product_perm(g, &Perm::identity(3))).collect();
    let piece = shapes::path(3);
    let hub = shapes::hub_of_copies(&piece, 1, 5);
    let hub_gens = alternating_gens(5).into_iter().map(|g| copy_perm(3, &g)).collect();
    vec![
        (trial("A5 on star leaves".into(), shapes::star(5), a5()), 60),
        (
            trial(
                "A6 on star leaves".into(),
                shapes::star(6),
                alternating_gens(6).into_iter().map(|g| star_perm(&g)).collect(),
            ),
            360,
        ),
        (
            trial(
                "A5 on 2-subsets".into(),
                shapes::star(10),
                alt5_on_pairs().into_iter().map(|g| star_perm(&g)).collect(),
            ),
            60,
        ),
        (trial("A5 on star x P3".into(), prod, prod_gens), 60),
        (trial("A5 on a hub of 5 paths".into(), hub, hub_gens), 60),
    ]
}

fn criterion_11(stats: &Result<PipelineStats, String>) -> Outcome {
    let opts = ActionOptions::default();
    for c in [shapes::hypercube(3), shapes::grid(&[3, 3]), shapes::star(4)] {
        let id = common::action(&c, vec![Perm::identity(c.vertex_count())]);
        let r = propagate_triviality(&c, &id, 3, opts).map_err(|e| e.to_string())?;
        ensure!(r.conclusion == Conclusion::Trivial, "identity on {}: {:?}", c.name(), r.conclusion);
        ensure!(r.propagated_vertices == c.vertex_count(), "identity on {}: propagation stopped", c.name());
    }
    let s = stats.as_ref().map_err(Clone::clone)?;
    let mut nontrivial = 0;
    let perfect = perfect_examples();
    for t in s.strong.iter().chain(perfect.iter().map(|(t, _)| t)) {
        if t.action.generators().all(|(_, g)| g.is_identity()) {
            continue;
        }
        let r = propagate_triviality(&t.complex, &t.action, 3, opts).map_err(|e| e.to_string())?;
        ensure!(r.conclusion != Conclusion::Trivial, "{}: nontrivial action reported Trivial", t.label);
        nontrivial += 1;
    }
    let star = shapes::star(3);
    let rot = common::action(&star, vec![perm(vec![0, 2, 3, 1])]);
    let r = propagate_triviality(&star, &rot, 4, opts).map_err(|e| e.to_string())?;
    let rc = &r.rank_comparison;
    ensure!(rc.n == 4 && rc.m == 3 && rc.m_below_n && rc.inconsistent_with_rank, "3-star rotation: {rc:?}");
    ensure!(r.conclusion == Conclusion::NotTrivial, "3-star rotation: {:?}", r.conclusion);
    let mut checked = 0;
    for (t, order) in perfect {
        let r = propagate_triviality(&t.complex, &t.action, 3, opts).map_err(|e| e.to_string())?;
        ensure!(
            r.image_order == order && r.image_perfect,
            "{}: order {} perfect {}",
            t.label,
            r.image_order,
            r.image_perfect
        );
        let v = r.fixed_vertex.ok_or(format!("{}: no fixed vertex", t.label))?;
        let link = link_action(&t.complex, &t.action, v).map_err(|e| e.to_string())?;
        ensure!(even_image_check(&link.group), "{}: odd element in the link at {v}", t.label);
        ensure!(r.image_in_alt, "{}: report disagrees with even-image check", t.label);
        let independent = PermGroup::generate(link.group.degree(), link.group.generators(), usize::MAX).unwrap();
        ensure!(independent.elements().iter().all(Perm::is_even), "{}: link group has odd elements", t.label);
        checked += 1;
    }
    Ok(format!(
        "identity Trivial; {nontrivial} nontrivial actions never Trivial; 3-star rotation flagged; {checked} perfect images even"
    ))
}

fn run(number: usize, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let result = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panicked: {}", msg.unwrap_or_default()))
    });
    let elapsed = start.elapsed();
    let result = match result {
        Ok(detail) if elapsed > budget => Err(format!("{detail}; took {elapsed:?}, budget {budget:?}")),
        other => other,
    };
    match &result {
        Ok(detail) => println!("criterion {number:>2}: PASS  {detail} [{:.2}s]", elapsed.as_secs_f64()),
        Err(why) => println!("criterion {number:>2}: FAIL  {why} [{:.2}s]", elapsed.as_secs_f64()),
    }
    result.is_ok()
}

fn main() {
    let secs = Duration::from_secs;
    let mut ok = vec![
        run(1, secs(60), criterion_1),
        run(2, secs(120), criterion_2),
        run(3, secs(60), criterion_3),
        run(4, secs(60), criterion_4),
        run(5, secs(60), criterion_5),
        run(6, secs(30), criterion_6),
        run(7, secs(60), criterion_7),
    ];
    let stats = panic::catch_unwind(run_pipeline).unwrap_or_else(|_| Err("pipeline panicked".into()));
    ok.push(run(8, secs(120), || {
        let s = stats.as_ref().map_err(Clone::clone)?;
        ensure!(s.elapsed < secs(120), "pipeline took {:?}", s.elapsed);
        criterion_8(&stats)
    }));
    ok.push(run(9, secs(120), || criterion_9(&stats)));
    ok.push(run(10, secs(60), criterion_10));
    ok.push(run(11, secs(120), || criterion_11(&stats)));
    let failed: Vec<usize> = ok.iter().enumerate().filter(|(_, &p)| !p).map(|(i, _)| i + 1).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", ok.len());
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
