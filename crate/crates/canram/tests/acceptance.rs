//! Acceptance suite: one pass/fail line per criterion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines for
//! passing criteria too.

use std::sync::OnceLock;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use canram::density::{max_k_density, threshold_scale};
use canram::encoding::{
    build_encoding, colouring_to_vertexset, degree_profile, EncodingHypergraph,
};
use canram::error::Guards;
use canram::experiments::{
    scaled_grid, threshold_sweep, ExperimentConfig, ListSpec, PatternSpec, SigmaPolicy,
    ThresholdCurve,
};
use canram::graph::{cycle_graph, path_graph, Colouring, KGraph, ListAssignment, VertexOrdering};
use canram::localdense::resilience_bound;
use canram::patterns::{
    classify_pattern, count_canonical_copies, is_lexicographic, project, PositionSet,
};
use canram::solver::{
    canonical_ramsey_number, decide_canarrow_unrestricted, find_avoiding_colouring,
    AvoidanceInstance, RamseyOutcome,
};

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn report(id: u32, name: &str, ok: bool, detail: &str) {
    println!(
        "ACCEPTANCE {id:02} ({name}): {} — {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {id} failed: {detail}");
}

fn complete(n: usize) -> KGraph {
    KGraph::complete(n, 2).unwrap()
}

fn graph_from_edge_mask(n: usize, mask: u64) -> KGraph {
    let full = complete(n);
    let edges: Vec<Vec<usize>> = full
        .edges()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, e)| e.to_vec())
        .collect();
    KGraph::new(2, n, edges).unwrap()
}

#[test]
fn criterion_01_density_exactness() {
    let start = Instant::now();
    let mut ok = true;
    for m in 3..=7 {
        let d = max_k_density(&complete(m)).unwrap();
        ok &= d.value == rat(m as i64 + 1, 2);
    }
    for k in 2..=5i64 {
        let d = max_k_density(&cycle_graph(2 * k as usize).unwrap()).unwrap();
        ok &= d.value == rat(2 * k - 1, 2 * k - 2);
    }
    let elapsed = start.elapsed();
    ok &= elapsed.as_secs_f64() < 1.0;
    report(
        1,
        "density exactness",
        ok,
        &format!("K_3..K_7 and C_4..C_10 exact in {elapsed:.2?}"),
    );
}

#[test]
fn criterion_02_projection_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x70726f6a);
    let n = 20;
    let mut checked = 0u32;
    let mut ok = true;
    while checked < 1000 {
        for k in [2usize, 3, 4] {
            let mut pool: Vec<usize> = (0..n).collect();
            pool.shuffle(&mut rng);
            let t: Vec<usize> = pool[..k].to_vec();
            pool.shuffle(&mut rng);
            let sigma = VertexOrdering::from_sequence(&pool).unwrap();
            ok &= project(&t, PositionSet::EMPTY, &sigma).unwrap().is_empty();
            let mut sorted = t.clone();
            sorted.sort_unstable();
            ok &= project(&t, PositionSet::full(k), &sigma).unwrap() == sorted;
            checked += 1;
        }
    }
    report(
        2,
        "projection identities",
        ok,
        &format!("{checked} random (T, sigma) pairs, k in {{2,3,4}}"),
    );
}

/// All orderings of 0..n as rank vectors.
fn all_orderings(n: usize) -> Vec<VertexOrdering> {
    fn perms(xs: Vec<usize>) -> Vec<Vec<usize>> {
        if xs.len() <= 1 {
            return vec![xs];
        }
        let mut out = Vec::new();
        for i in 0..xs.len() {
            let mut rest = xs.clone();
            let x = rest.remove(i);
            for mut p in perms(rest) {
                p.insert(0, x);
                out.push(p);
            }
        }
        out
    }
    perms((0..n).collect())
        .into_iter()
        .map(|seq| VertexOrdering::from_sequence(&seq).unwrap())
        .collect()
}

#[test]
fn criterion_03_classifier_matches_lexicographic_definition() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6c6578);
    let mut checked = 0u64;
    let mut ok = true;
    let s1 = PositionSet::from_positions(&[1], 2).unwrap();
    for n in 3..=5usize {
        let sigmas: Vec<VertexOrdering> = if n <= 4 {
            all_orderings(n)
        } else {
            let mut v = vec![
                VertexOrdering::natural(n),
                VertexOrdering::natural(n).reversed(),
            ];
            for _ in 0..4 {
                let mut seq: Vec<usize> = (0..n).collect();
                seq.shuffle(&mut rng);
                v.push(VertexOrdering::from_sequence(&seq).unwrap());
            }
            v
        };
        let full_edges = complete(n).edge_count();
        for mask in 1u64..(1 << full_edges) {
            if mask.count_ones() > 5 {
                continue;
            }
            let h = graph_from_edge_mask(n, mask);
            let e = h.edge_count();
            for sigma in &sigmas {
                for code in 0..3u64.pow(e as u32) {
                    let mut c = code;
                    let chi = Colouring::new(
                        (0..e)
                            .map(|_| {
                                let col = c % 3;
                                c /= 3;
                                col + 1
                            })
                            .collect(),
                    );
                    let classified = classify_pattern(&h, sigma, &chi).unwrap().contains(s1);
                    let direct = is_lexicographic(&h, sigma, &chi).unwrap();
                    ok &= classified == direct;
                    checked += 1;
                }
            }
        }
    }
    report(
        3,
        "classifier vs lexicographic definition",
        ok,
        &format!("{checked} (H, sigma, chi) triples agree in {:.2?}", start.elapsed()),
    );
}

struct EncodingCase {
    n: usize,
    r: usize,
    vertex_count: usize,
    bound_ok: bool,
    violations: Vec<(usize, u64, f64)>,
}

fn encoding_cases() -> &'static (Vec<EncodingCase>, f64) {
    static CASES: OnceLock<(Vec<EncodingCase>, f64)> = OnceLock::new();
    CASES.get_or_init(|| {
        let start = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(0x656e63);
        let guards = Guards::default();
        let patterns = [complete(3), cycle_graph(4).unwrap(), path_graph(4).unwrap()];
        let mut cases = Vec::new();
        for n in 6..=10 {
            let gamma = complete(n);
            for h in &patterns {
                for r in 1..=3usize {
                    let lists = ListAssignment::new(
                        r,
                        (0..gamma.edge_count())
                            .map(|_| (0..r).map(|_| rng.random_range(1..=3u64)).collect())
                            .collect(),
                    )
                    .unwrap();
                    let sigma = VertexOrdering::natural(h.vertex_count());
                    let enc = build_encoding(h, &sigma, &gamma, &lists, &guards).unwrap();
                    let profile = degree_profile(&enc, h, &guards).unwrap();
                    cases.push(EncodingCase {
                        n,
                        r,
                        vertex_count: enc.vertex_count(),
                        bound_ok: profile.entries.iter().all(|e| e.within_bound),
                        violations: profile
                            .entries
                            .iter()
                            .filter(|e| !e.within_bound)
                            .map(|e| (e.j, e.delta, e.bound))
                            .collect(),
                    });
                }
            }
        }
        (cases, start.elapsed().as_secs_f64())
    })
}

#[test]
fn criterion_04_degree_bound() {
    let (cases, seconds) = encoding_cases();
    let ok = cases.iter().all(|c| c.bound_ok) && *seconds < 60.0;
    let violations: Vec<String> = cases
        .iter()
        .filter(|c| !c.bound_ok)
        .map(|c| format!("n={} r={} {:?}", c.n, c.r, c.violations))
        .collect();
    report(
        4,
        "degree bound",
        ok,
        &format!(
            "{} instances (n=6..10, K3/C4/P4, r=1..3), violations: {violations:?}, {seconds:.1}s",
            cases.len()
        ),
    );
}

#[test]
fn criterion_05_encoding_vertex_count() {
    let (cases, _) = encoding_cases();
    let ok = cases
        .iter()
        .all(|c| c.vertex_count == c.r * c.n * (c.n - 1) / 2);
    report(
        5,
        "encoding vertex count",
        ok,
        &format!("v = r * C(n,2) on all {} instances", cases.len()),
    );
}

#[test]
fn criterion_06_independence_transfer() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x696e64);
    let guards = Guards::default();
    let patterns = [complete(3), path_graph(3).unwrap()];
    let mut ok = true;
    let mut agree = 0u32;
    for trial in 0..200 {
        let n = rng.random_range(4..=5usize);
        let full = complete(n);
        let ecount = rng.random_range(3..=7.min(full.edge_count()));
        let mut idxs: Vec<usize> = (0..full.edge_count()).collect();
        idxs.shuffle(&mut rng);
        let edges: Vec<Vec<usize>> = idxs[..ecount]
            .iter()
            .map(|&i| full.edge(i).to_vec())
            .collect();
        let g = KGraph::new(2, n, edges).unwrap();
        let h = &patterns[trial % 2];
        let sigma = if rng.random::<bool>() {
            VertexOrdering::natural(h.vertex_count())
        } else {
            VertexOrdering::natural(h.vertex_count()).reversed()
        };
        let r = rng.random_range(1..=2usize);
        let lists = ListAssignment::new(
            r,
            (0..g.edge_count())
                .map(|_| (0..r).map(|_| rng.random_range(1..=3u64)).collect())
                .collect(),
        )
        .unwrap();
        let enc: EncodingHypergraph = build_encoding(h, &sigma, &g, &lists, &guards).unwrap();
        let chi = Colouring::new(
            (0..g.edge_count())
                .map(|i| {
                    let l = lists.list(i);
                    l[rng.random_range(0..l.len())]
                })
                .collect(),
        );
        let avoids = count_canonical_copies(&g, &chi, h, &sigma).unwrap() == 0;
        let w = colouring_to_vertexset(&g, &chi, &lists, &g).unwrap();
        let independent = enc.is_independent(&w);
        ok &= avoids == independent;
        agree += (avoids == independent) as u32;
    }
    report(
        6,
        "independence transfer",
        ok,
        &format!("{agree}/200 instances agree (chi canonical-free iff W independent)"),
    );
}

#[test]
fn criterion_07_solver_vs_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6f7263);
    let guards = Guards::default();
    let patterns = [complete(3), path_graph(3).unwrap(), cycle_graph(4).unwrap()];
    let mut ok = true;
    for trial in 0..200 {
        let n = rng.random_range(3..=5usize);
        let g = graph_from_edge_mask(n, rng.random::<u64>());
        let h = &patterns[trial % 3];
        let sigma = {
            let mut seq: Vec<usize> = (0..h.vertex_count()).collect();
            seq.shuffle(&mut rng);
            VertexOrdering::from_sequence(&seq).unwrap()
        };
        let r = rng.random_range(1..=3usize);
        let lists = ListAssignment::new(
            r,
            (0..g.edge_count())
                .map(|_| (0..r).map(|_| rng.random_range(1..=4u64)).collect())
                .collect(),
        )
        .unwrap();
        let inst = AvoidanceInstance {
            host: g.clone(),
            pattern: h.clone(),
            sigma: sigma.clone(),
            lists: lists.clone(),
        };
        let res = find_avoiding_colouring(&inst, &guards).unwrap();
        // naive oracle: all r^{e(G)} compatible colourings
        let e = g.edge_count();
        let mut slots = vec![0usize; e];
        let mut oracle = false;
        'outer: loop {
            let chi = Colouring::new((0..e).map(|i| lists.list(i)[slots[i]]).collect());
            if count_canonical_copies(&g, &chi, h, &sigma).unwrap() == 0 {
                oracle = true;
                break;
            }
            for i in (0..e).rev() {
                if slots[i] + 1 < r {
                    slots[i] += 1;
                    slots[i + 1..].iter_mut().for_each(|s| *s = 0);
                    continue 'outer;
                }
            }
            break;
        }
        if e == 0 {
            oracle = true;
        }
        ok &= res.found().is_some() == oracle;
    }
    let seconds = start.elapsed().as_secs_f64();
    ok &= seconds < 120.0;
    report(
        7,
        "solver vs oracle",
        ok,
        &format!("200 instances agree in {seconds:.1}s"),
    );
}

#[test]
fn criterion_08_canonical_ramsey_baseline() {
    let start = Instant::now();
    let guards = Guards::default();
    let arrow = decide_canarrow_unrestricted(&complete(3), &complete(3), &guards).unwrap();
    let number = canonical_ramsey_number(&complete(3), 4, &guards).unwrap();
    let elapsed = start.elapsed();
    let ok = arrow && number == RamseyOutcome::Exact(3) && elapsed.as_secs_f64() < 1.0;
    report(
        8,
        "canonical Ramsey baseline",
        ok,
        &format!("K3 arrows K3, cr(K3) = 3 in {elapsed:.2?}"),
    );
}

#[test]
fn criterion_09_resilience_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x726573);
    let mut ok = true;
    for _ in 0..100 {
        let d = {
            let q = rng.random_range(2..=40i64);
            rat(rng.random_range(1..=q), q)
        };
        let rho = {
            let q = rng.random_range(2..=40i64);
            rat(rng.random_range(1..=q), q)
        };
        let gamma = rat(rng.random_range(0..=20i64), rng.random_range(1..=40i64));
        let r = resilience_bound(&d, &gamma, &rho).unwrap();
        let expected = &d - rat(2, 1) * &gamma / (&rho * &rho);
        ok &= r.d_prime == expected;
        ok &= r.corollary_applies == (gamma <= &rho * &rho * &d / rat(4, 1));
    }
    report(
        9,
        "resilience formula",
        ok,
        "d' = d - 2*gamma/rho^2 exact on 100 random triples; corollary flag exact",
    );
}

const SWEEP_SEED: u64 = 20260823;
const SWEEP_GUARDS: Guards = Guards {
    nodes: 5_000_000,
    copies: 10_000_000,
};

fn sweep_config() -> ExperimentConfig {
    let scale = threshold_scale(&cycle_graph(4).unwrap(), 32).unwrap().value;
    ExperimentConfig {
        n: 32,
        k: 2,
        pattern: PatternSpec::Named("C4".into()),
        lists: ListSpec::Constant {
            colours: vec![1, 2],
        },
        p_grid: scaled_grid(scale, 0.3, 3.0, 8),
        trials: 200,
        seed: Some(SWEEP_SEED),
        sigma: SigmaPolicy::AllOrderings,
        workers: Some(8),
    }
}

fn first_sweep() -> &'static (ThresholdCurve, f64) {
    static SWEEP: OnceLock<(ThresholdCurve, f64)> = OnceLock::new();
    SWEEP.get_or_init(|| {
        let start = Instant::now();
        let curve = threshold_sweep(&sweep_config(), &SWEEP_GUARDS).unwrap();
        (curve, start.elapsed().as_secs_f64())
    })
}

#[test]
fn criterion_10_threshold_curve() {
    let (curve, seconds) = first_sweep();
    let est: Vec<f64> = curve.points.iter().map(|p| p.estimate).collect();
    let rise = est[7] - est[0];
    let mut monotone_ok = true;
    for w in curve.points.windows(2) {
        let hw0 = (w[0].ci_hi - w[0].ci_lo) / 2.0;
        let hw1 = (w[1].ci_hi - w[1].ci_lo) / 2.0;
        if w[1].estimate < w[0].estimate - (hw0 + hw1) {
            monotone_ok = false;
        }
    }
    let ok = rise >= 0.5 && monotone_ok && *seconds < 1800.0;
    let guard_total: u64 = curve.points.iter().map(|p| p.guard_exceeded).sum();
    report(
        10,
        "threshold curve",
        ok,
        &format!(
            "estimates {:?}, rise {rise:.3}, guard-exceeded {guard_total}/1600 trials, {seconds:.0}s",
            est.iter().map(|e| (e * 1000.0).round() / 1000.0).collect::<Vec<_>>()
        ),
    );
}

#[test]
fn criterion_11_determinism() {
    let (curve, _) = first_sweep();
    let again = threshold_sweep(&sweep_config(), &SWEEP_GUARDS).unwrap();
    // wall-clock timings are the one column that cannot reproduce; the
    // decision content of the CSV must be bit-identical
    let ok = curve.to_csv(false) == again.to_csv(false);
    report(
        11,
        "determinism",
        ok,
        "repeated sweep with the same seed is bit-identical (timing column excluded)",
    );
}
