use std::fs;
use std::path::{Path, PathBuf};

use cubefix::action::{
    fixed_point_via_criterion, strong_simplicial_violation, ActionDocument, ActionOptions, ComplexSource,
    CriterionOutcome, SimplicialAction,
};
use cubefix::automorphism::AutomorphismDocument;
use cubefix::catalog::{
    family, pairwise_orders, render_witness, witness_search, Expression, FamilyListing, WitnessBounds, WitnessOutcome,
};
use cubefix::complex::{ComplexError, MedianVerdict, SetsDocument};
use cubefix::shapes;
use cubefix::triviality::{propagate_triviality, Conclusion};
use cubefix::{closure_enumerate, helly_common_point, ClosureCaps, ClosureResult, FreeAutomorphism, HellyOptions};
use cubefix::{MedianComplex, VertexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::json;

use crate::report::CheckResult;
use crate::{Cli, Command, Global, Via};

type Checks = Result<Vec<CheckResult>, String>;

pub fn dispatch(cli: &Cli) -> Checks {
    let g = &cli.global;
    match &cli.command {
        Command::CheckMedian { complex } => check_median(&load_complex(complex)?, g),
        Command::Helly { complex, sets, unchecked } => helly(&load_complex(complex)?, sets, *unchecked),
        Command::Fix { action, via } => {
            let (c, a) = load_action(action)?;
            fix(&c, &a, *via, g)
        }
        Command::StrongCheck { action } => {
            let (c, a) = load_action(action)?;
            strong_check(&c, &a, g)
        }
        Command::Gens { family: name, rank, list: _, pairwise_orders, witness, max_length } => {
            let f = family(*name, *rank).map_err(|e| e.to_string())?;
            if let Some(target) = witness {
                let bounds = WitnessBounds { max_length: *max_length, ..WitnessBounds::default() };
                witness_check(&f, target, bounds)
            } else if *pairwise_orders {
                pairwise(&f, caps(g))
            } else {
                Ok(vec![listing(&f)])
            }
        }
        Command::Order { inputs, rank } => order(inputs, *rank, g),
        Command::Abelianize { input, rank } => abelianize(input, *rank),
        Command::Triviality { action, rank } => {
            let (c, a) = load_action(action)?;
            triviality(&c, &a, *rank, g)
        }
        Command::Selfcheck { trials } => selfcheck(*trials, g.seed),
    }
}

fn caps(g: &Global) -> ClosureCaps {
    ClosureCaps { max_elements: g.max_elements, max_image_length: g.max_image_length }
}

fn options(g: &Global) -> ActionOptions {
    ActionOptions { max_dim: g.max_dim, ..ActionOptions::default() }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_complex(path: &Path) -> Result<MedianComplex, String> {
    MedianComplex::from_json(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

/// The complex path inside an action file is relative to that file.
fn load_action(path: &Path) -> Result<(MedianComplex, SimplicialAction), String> {
    let doc: ActionDocument = serde_json::from_str(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    let c = match &doc.complex {
        ComplexSource::Path(p) => {
            let base = path.parent().unwrap_or(Path::new("."));
            load_complex(&base.join(p))?
        }
        ComplexSource::Inline(d) => MedianComplex::from_document(d).map_err(|e| format!("{}: {e}", path.display()))?,
    };
    let a = SimplicialAction::validate(&c, &doc.generators).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((c, a))
}

fn check_median(c: &MedianComplex, g: &Global) -> Checks {
    let summary =
        json!({"name": c.name(), "vertices": c.vertex_count(), "edges": c.edge_count(), "max_degree": c.max_degree()});
    let check = match c.median_verdict() {
        MedianVerdict::Median => {
            let mut check = CheckResult::new("median", true).line(format!(
                "{}: {} vertices, {} edges, max degree {}",
                c.name(),
                c.vertex_count(),
                c.edge_count(),
                c.max_degree()
            ));
            let mut details = summary;
            match c.enumerate_cubes(g.max_dim) {
                Ok(cubes) => {
                    let top = cubes.iter().map(|q| q.dimension()).max().unwrap_or(0);
                    let counts: Vec<usize> =
                        (0..=top).map(|k| cubes.iter().filter(|q| q.dimension() == k).count()).collect();
                    check = check.line(format!("cubes by dimension: {counts:?}"));
                    details["cube_counts"] = json!(counts);
                }
                Err(e) => {
                    check = check.line(e.to_string());
                    details["cube_counts"] = json!(null);
                }
            }
            check.details(details)
        }
        v @ MedianVerdict::NotMedian { triple, candidates } => CheckResult::new("median", false)
            .line(format!("triple {triple:?} has medians {candidates:?}"))
            .witness(v)
            .details(summary),
    };
    Ok(vec![check])
}

fn helly(c: &MedianComplex, sets_path: &Path, unchecked: bool) -> Checks {
    let doc: SetsDocument =
        serde_json::from_str(&read(sets_path)?).map_err(|e| format!("{}: {e}", sets_path.display()))?;
    let names: Vec<&String> = doc.sets.keys().collect();
    let sets: Vec<VertexSet> = doc.sets.values().map(|s| s.iter().copied().collect()).collect();
    let opts = HellyOptions { validate_convex: !unchecked };
    let check = match helly_common_point(c, &sets, opts) {
        Ok(v) => CheckResult::new("helly", true)
            .line(format!("common vertex {v} of {}", names.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")))
            .details(json!({"vertex": v, "sets": names})),
        Err(ComplexError::PairwiseEmpty { first, second }) => CheckResult::new("helly", false)
            .line(format!("sets {} and {} do not intersect", names[first], names[second]))
            .witness(json!({"kind": "pairwise_empty", "first": names[first], "second": names[second]})),
        Err(ComplexError::EmptySet { index }) => CheckResult::new("helly", false)
            .line(format!("set {} is empty", names[index]))
            .witness(json!({"kind": "empty_set", "set": names[index]})),
        Err(ComplexError::NotConvexInput { index, between, outside }) => CheckResult::new("helly", false)
            .line(format!("set {} is not convex: {outside} lies between {between:?}", names[index]))
            .witness(json!({"kind": "not_convex", "set": names[index], "between": between, "outside": outside})),
        Err(ComplexError::NotMedian { triple, candidates }) => CheckResult::new("helly", false)
            .line(format!("complex is not median: triple {triple:?} has medians {candidates:?}"))
            .witness(json!({"kind": "not_median", "triple": triple, "candidates": candidates})),
        Err(e) => return Err(e.to_string()),
    };
    Ok(vec![check])
}

fn fix(c: &MedianComplex, a: &SimplicialAction, via: Via, g: &Global) -> Checks {
    let check = match via {
        Via::Direct => {
            let fixed = a.fixed_points_direct();
            CheckResult::new("fix", !fixed.is_empty())
                .line(format!("fixed vertices: {fixed}"))
                .details(json!({"via": "direct", "vertex": fixed.first(), "fixed": fixed}))
        }
        Via::Criterion => match fixed_point_via_criterion(c, a, options(g)).map_err(|e| e.to_string())? {
            CriterionOutcome::FixedVertex { vertex, fix_sets } => {
                let mut check = CheckResult::new("fix", true).line(format!("fixed vertex {vertex}"));
                for (name, s) in &fix_sets {
                    check = check.line(format!("Fix({name}) = {s}"));
                }
                check.details(json!({"via": "criterion", "vertex": vertex, "fix_sets": fix_sets}))
            }
            CriterionOutcome::Refused(r) => CheckResult::new("fix", false)
                .line(format!("refused: {}", serde_json::to_string(&r).unwrap()))
                .witness(&r)
                .details(json!({"via": "criterion"})),
        },
    };
    Ok(vec![check])
}

fn strong_check(c: &MedianComplex, a: &SimplicialAction, g: &Global) -> Checks {
    let check = match strong_simplicial_violation(c, a, options(g)).map_err(|e| e.to_string())? {
        None => CheckResult::new("strong_simplicial", true).line("every cube stabilizer fixes its cube pointwise"),
        Some(v) => CheckResult::new("strong_simplicial", false)
            .line(format!(
                "element {} stabilizes the {}-cube {:?} without fixing it",
                if v.element_word.is_empty() { "id".to_string() } else { v.element_word.join("*") },
                v.dimension,
                v.cube
            ))
            .witness(&v),
    };
    Ok(vec![check])
}

fn listing(f: &cubefix::catalog::GeneratorFamily) -> CheckResult {
    let mut check = CheckResult::new("gens", true).details(FamilyListing::from(f));
    for m in &f.members {
        check = check.line(format!("{}: {}", m.name, m.automorphism));
    }
    check
}

fn pairwise(f: &cubefix::catalog::GeneratorFamily, caps: ClosureCaps) -> Checks {
    let results = pairwise_orders(f, caps).map_err(|e| e.to_string())?;
    let mut check = CheckResult::new("pairwise_orders", results.iter().all(|r| r.result.is_finite()));
    let mut rows = Vec::new();
    for r in &results {
        let (a, b) = (&f.members[r.first].name, &f.members[r.second].name);
        let cell = match &r.result {
            ClosureResult::Finite { order, .. } => {
                check = check.line(format!("<{a}, {b}>: order {order}"));
                json!({"first": a, "second": b, "finite": true, "order": order})
            }
            ClosureResult::NotFiniteWithinBounds { elements_seen, max_image_length_seen } => {
                check = check.line(format!(
                    "<{a}, {b}>: not finite within bounds ({elements_seen} elements, image length {max_image_length_seen})"
                ));
                let w = json!({"first": a, "second": b, "finite": false, "elements_seen": elements_seen,
                    "max_image_length_seen": max_image_length_seen});
                check = check.witness(&w);
                w
            }
        };
        rows.push(cell);
    }
    Ok(vec![check.details(json!({"family": f.name, "rank": f.rank, "pairs": rows}))])
}

fn witness_check(f: &cubefix::catalog::GeneratorFamily, target: &str, bounds: WitnessBounds) -> Checks {
    let expr: Expression = target.parse().map_err(|e: cubefix::catalog::CatalogError| e.to_string())?;
    let aut = expr.evaluate(f.rank).map_err(|e| e.to_string())?;
    let check = match witness_search(&aut, f, bounds).map_err(|e| e.to_string())? {
        WitnessOutcome::Found(factors) => {
            let word = render_witness(&factors);
            CheckResult::new("witness", true)
                .line(format!("{target} = {word}"))
                .details(json!({"target": target, "family": f.name, "rank": f.rank, "word": word, "factors": factors}))
        }
        WitnessOutcome::Inconclusive { max_length, elements_explored } => CheckResult::new("witness", false)
            .line(format!("no product of length <= {max_length} found ({elements_explored} elements explored)"))
            .details(json!({"target": target, "family": f.name, "rank": f.rank, "max_length": max_length,
                "elements_explored": elements_explored})),
    };
    Ok(vec![check])
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AutomorphismFile {
    One(AutomorphismDocument),
    Many(Vec<AutomorphismDocument>),
}

/// Each input is a JSON file, or else a product expression at `--rank`.
fn load_automorphisms(input: &str, rank: Option<usize>) -> Result<Vec<FreeAutomorphism>, String> {
    let path = PathBuf::from(input);
    if path.is_file() {
        let docs = match serde_json::from_str(&read(&path)?).map_err(|e| format!("{input}: {e}"))? {
            AutomorphismFile::One(d) => vec![d],
            AutomorphismFile::Many(ds) => ds,
        };
        return docs.iter().map(|d| d.to_automorphism().map_err(|e| format!("{input}: {e}"))).collect();
    }
    let rank = rank.ok_or(format!("{input}: not a file; expressions need --rank"))?;
    let expr: Expression = input.parse().map_err(|e: cubefix::catalog::CatalogError| e.to_string())?;
    Ok(vec![expr.evaluate(rank).map_err(|e| e.to_string())?])
}

fn order(inputs: &[String], rank: Option<usize>, g: &Global) -> Checks {
    let mut gens = Vec::new();
    for i in inputs {
        gens.extend(load_automorphisms(i, rank)?);
    }
    let check = match closure_enumerate(&gens, caps(g)).map_err(|e| e.to_string())? {
        ClosureResult::Finite { order, .. } => CheckResult::new("order", true)
            .line(format!("finite, order {order}"))
            .details(json!({"finite": true, "order": order})),
        ClosureResult::NotFiniteWithinBounds { elements_seen, max_image_length_seen } => {
            let w = json!({"elements_seen": elements_seen, "max_image_length_seen": max_image_length_seen});
            CheckResult::new("order", false)
                .line(format!(
                    "not finite within bounds: {elements_seen} elements, image length {max_image_length_seen}"
                ))
                .witness(&w)
                .details(json!({"finite": false}))
        }
    };
    Ok(vec![check])
}

fn abelianize(input: &str, rank: Option<usize>) -> Checks {
    let auts = load_automorphisms(input, rank)?;
    let mut checks = Vec::new();
    for a in auts {
        let m = a.abelianize();
        let det = m.determinant();
        let mut check = CheckResult::new("abelianize", true)
            .details(json!({"rank": a.rank(), "matrix": m, "determinant": det, "special": det == 1}));
        for row in m.rows() {
            check = check.line(format!("{row:?}"));
        }
        checks.push(check.line(format!("det = {det}")));
    }
    Ok(checks)
}

fn triviality(c: &MedianComplex, a: &SimplicialAction, rank: usize, g: &Global) -> Checks {
    let r = propagate_triviality(c, a, rank, options(g)).map_err(|e| e.to_string())?;
    let rc = &r.rank_comparison;
    let mut check = CheckResult::new("triviality", !rc.inconsistent_with_rank)
        .line(format!(
            "fixed vertex {} ({}), link of size {} with group of order {}",
            r.fixed_vertex.map_or("-".into(), |v| v.to_string()),
            r.fixed_vertex_source,
            r.link_size,
            r.link_group_order
        ))
        .line(format!("image order {}, perfect {}, inside Alt {}", r.image_order, r.image_perfect, r.image_in_alt))
        .line(format!(
            "propagated to {} of {} vertices in {} rounds",
            r.propagated_vertices,
            c.vertex_count(),
            r.propagation_rounds
        ))
        .line(format!("conclusion: {}", serde_json::to_value(r.conclusion).unwrap().as_str().unwrap()));
    if rc.inconsistent_with_rank {
        check = check.line(format!(
            "inconsistent: complex is {}-ary with {} < n = {}, yet the action is not trivial",
            rc.m, rc.m, rc.n
        ));
    }
    for w in &r.witnesses {
        check = check.witness(w);
    }
    debug_assert!(r.conclusion != Conclusion::Trivial || r.witnesses.is_empty());
    Ok(vec![check.details(&r)])
}

fn selfcheck(trials: usize, seed: u64) -> Checks {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut done, mut drawn) = (0, 0);
    let mut failures = Vec::new();
    while done < trials && drawn < trials * 1000 {
        drawn += 1;
        let c = match rng.gen_range(0..3) {
            0 => shapes::grid(&[rng.gen_range(2..7), rng.gen_range(2..7)]),
            1 => shapes::random_tree(rng.gen_range(2..60), &mut rng),
            _ => shapes::product(
                &shapes::random_tree(rng.gen_range(2..12), &mut rng),
                &shapes::path(rng.gen_range(2..5)),
            ),
        };
        let k = rng.gen_range(3..=6);
        let sets: Vec<VertexSet> = (0..k)
            .map(|_| {
                let seeds: VertexSet = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..c.vertex_count())).collect();
                c.convex_hull(&seeds)
            })
            .collect();
        let pairwise = (0..k).all(|i| (i + 1..k).all(|j| !sets[i].intersection(&sets[j]).is_empty()));
        if !pairwise {
            continue;
        }
        done += 1;
        match helly_common_point(&c, &sets, HellyOptions::default()) {
            Ok(v) if sets.iter().all(|s| s.contains(v)) => {}
            other => failures.push(json!({"complex": c.name(), "sets": sets, "result": format!("{other:?}")})),
        }
    }
    let mut check = CheckResult::new("selfcheck", failures.is_empty() && done == trials)
        .line(format!("{done} Helly trials, {} failures (seed {seed})", failures.len()))
        .details(json!({"trials": done, "families_drawn": drawn, "seed": seed, "failures": failures.len()}));
    for f in failures {
        check = check.witness(f);
    }
    Ok(vec![check])
}
