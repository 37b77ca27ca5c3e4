//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.
//!
//! Runs as a plain binary (`harness = false`) so the lines show up in
//! `cargo test` output. Run alone with `cargo test -p pdom-cli --test acceptance`.

use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use pdom_cli::{bench_rows, BenchRow};
use pdom_core::dp::compute_states;
use pdom_core::oracle::{oracle_gamma_p, oracle_is_dh, oracle_node_state};
use pdom_core::{
    decompose, fixtures, generate, is_distance_hereditary, solve, DecompTree, Gamma, Graph, Node,
    Op, OpWeights,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn weight_mix(i: u64) -> OpWeights {
    match i % 4 {
        0 => OpWeights::default(),
        1 => OpWeights::new(1.0, 0.0, 2.0).unwrap(),
        2 => OpWeights::new(0.5, 2.0, 1.0).unwrap(),
        _ => OpWeights::new(2.0, 1.0, 0.5).unwrap(),
    }
}

/// Criterion 3/7 corpus: 300 seeded trees with 2 <= n <= 14.
fn small_corpus() -> Vec<(u64, DecompTree)> {
    (0..300u64)
        .map(|i| {
            (
                i,
                generate(2 + (i as usize % 13), 70_000 + i, weight_mix(i)).unwrap(),
            )
        })
        .collect()
}

fn c1_fig1_end_to_end() -> Outcome {
    let dir = std::env::temp_dir().join(format!("pdom-acceptance-{}", std::process::id()));
    fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let path = dir.join("fig1.txt");
    fs::write(&path, fixtures::fig1_graph_text()).map_err(|e| e.to_string())?;

    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_pdom"))
        .args(["solve", "--graph", path.to_str().unwrap(), "--witness"])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    ensure(out.status.success(), || {
        format!("exit {:?}", out.status.code())
    })?;
    ensure(text.starts_with("gamma_p 2\n"), || {
        format!("graph path printed {text:?}")
    })?;
    let witness: pdom_core::VertexSet = text
        .lines()
        .nth(1)
        .and_then(|l| l.strip_prefix("witness "))
        .ok_or("no witness line")?
        .parse()
        .map_err(|e| format!("{e}"))?;
    let g = fixtures::fig1_graph();
    ensure(witness.len() == 2, || format!("witness {witness}"))?;
    ensure(g.is_paired_dominating(&witness).unwrap(), || {
        format!("witness {witness} fails check")
    })?;

    let tree = solve(&fixtures::fig1_tree(), true).map_err(|e| e.to_string())?;
    ensure(tree.gamma_p == Gamma::Finite(2), || {
        format!("tree path gave {}", tree.gamma_p)
    })?;
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "gamma_p 2 via graph and tree, witness {witness}, {:.1} ms",
        elapsed.as_secs_f64() * 1e3
    ))
}

fn c2_fig1_profile() -> Outcome {
    let t = fixtures::fig1_tree();
    let states = compute_states(&t).map_err(|e| e.to_string())?;
    let profile = states[t.root()].profile();
    ensure(profile == [2, 1, 2, 3, 4, 5], || {
        format!("profile {profile:?}")
    })?;
    Ok(format!("root profile {profile:?}"))
}

fn c3_dp_vs_oracle(corpus: &[(u64, DecompTree)]) -> Outcome {
    let start = Instant::now();
    let mut infinite = 0;
    for (i, t) in corpus {
        let g = t.expand().unwrap().graph;
        let dp = solve(t, false).map_err(|e| e.to_string())?.gamma_p;
        let oracle = oracle_gamma_p(&g).map_err(|e| e.to_string())?;
        ensure(dp == oracle, || {
            format!("instance {i}: dp {dp} oracle {oracle}")
        })?;
        infinite += (dp == Gamma::Infinite) as usize;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(300), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{} trees agree ({infinite} without a PDS), {:.2} s",
        corpus.len(),
        elapsed.as_secs_f64()
    ))
}

fn c4_node_states() -> Outcome {
    let (mut trees, mut nodes) = (0, 0);
    for i in 0..120u64 {
        let t = generate(2 + (i as usize % 11), 80_000 + i, weight_mix(i)).unwrap();
        let states = compute_states(&t).map_err(|e| e.to_string())?;
        for (id, s) in states.iter().enumerate() {
            let e = t.expand_node(id).map_err(|e| e.to_string())?;
            let r = oracle_node_state(&e.graph, &e.twin_set).map_err(|e| e.to_string())?;
            let dp: Vec<Option<usize>> = s.profile().into_iter().map(Some).collect();
            ensure(dp == r.gamma_k, || {
                format!("tree {i} node {id}: gamma_k {dp:?} vs {:?}", r.gamma_k)
            })?;
            ensure(s.mty_ts == r.mty_ts, || {
                format!("tree {i} node {id}: mty_ts")
            })?;
            ensure(s.mty_pr == r.mty_pr, || {
                format!("tree {i} node {id}: mty_pr")
            })?;
            ensure(s.gamma_p == r.gamma_p, || {
                format!("tree {i} node {id}: gamma_p")
            })?;
            nodes += 1;
        }
        trees += 1;
    }
    Ok(format!("{trees} trees, {nodes} nodes match"))
}

fn c5_unit_step() -> Outcome {
    let mut nodes = 0;
    for i in 0..300u64 {
        let t = generate(1 + (i as usize * 7) % 300, 90_000 + i, weight_mix(i)).unwrap();
        for s in compute_states(&t).map_err(|e| e.to_string())? {
            let p = s.profile();
            ensure(p.windows(2).all(|w| w[0].abs_diff(w[1]) == 1), || {
                format!("tree {i}: profile {p:?}")
            })?;
            ensure((s.beta - s.alpha) % 2 == 0, || {
                format!("tree {i}: alpha {} beta {}", s.alpha, s.beta)
            })?;
            ensure(s.gamma_p.finite().is_none_or(|g| g % 2 == 0), || {
                format!("tree {i}: gamma_p {}", s.gamma_p)
            })?;
            nodes += 1;
        }
    }
    Ok(format!("{nodes} nodes"))
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let p: f64 = rng.gen_range(0.2..0.8);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

fn cycle(n: usize) -> Graph {
    Graph::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
}

fn c6_recognition() -> Outcome {
    for i in 0..500u64 {
        let n = 1 + (i as usize * 13) % 200;
        let g = generate(n, 100_000 + i, weight_mix(i))
            .unwrap()
            .expand()
            .unwrap()
            .graph;
        let t = decompose(&g).map_err(|e| format!("tree {i}: {e}"))?;
        ensure(t.expand().unwrap().graph == g, || {
            format!("tree {i}: expansion differs")
        })?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut graphs: Vec<Graph> = (0..198)
        .map(|_| {
            let n = rng.gen_range(1..=8);
            random_graph(&mut rng, n)
        })
        .collect();
    graphs.push(cycle(5));
    graphs.push(cycle(6));
    let mut rejected = 0;
    for (i, g) in graphs.iter().enumerate() {
        let expected = oracle_is_dh(g).map_err(|e| e.to_string())?;
        ensure(is_distance_hereditary(g) == expected, || {
            format!("graph {i}: {}", g.to_text())
        })?;
        rejected += !expected as usize;
    }
    ensure(
        !is_distance_hereditary(&cycle(5)) && !is_distance_hereditary(&cycle(6)),
        || "C5/C6 accepted".into(),
    )?;
    Ok(format!(
        "500 round trips; {} graphs agree with the oracle ({rejected} non-DH, incl. C5, C6)",
        graphs.len()
    ))
}

fn c7_witnesses(corpus: &[(u64, DecompTree)]) -> Outcome {
    let mut checked = 0;
    for (i, t) in corpus {
        let r = solve(t, true).map_err(|e| format!("instance {i}: {e}"))?;
        let g = t.expand().unwrap().graph;
        match (r.gamma_p, r.witness) {
            (Gamma::Finite(x), Some(w)) => {
                ensure(w.len() == x as usize, || {
                    format!("instance {i}: |W| {} vs {x}", w.len())
                })?;
                ensure(g.is_paired_dominating(&w).unwrap(), || {
                    format!("instance {i}: {w} invalid")
                })?;
                checked += 1;
            }
            (Gamma::Infinite, None) => {}
            (gp, w) => return Err(format!("instance {i}: gamma_p {gp} with witness {w:?}")),
        }
    }
    Ok(format!("{checked} witnesses valid and minimum"))
}

fn c8_scaling() -> Outcome {
    let row = |n: usize, repeats: usize| -> Result<BenchRow, String> {
        bench_rows(&[n], 42, repeats)
            .map(|mut r| r.remove(0))
            .map_err(|f| f.message)
    };
    // warm up allocator and caches before the smallest, noisiest size
    row(10_000, 5)?;
    let small = row(10_000, 41)?;
    let mid = row(100_000, 11)?;
    let large = row(1_000_000, 5)?;
    let ratio = large.median_seconds / mid.median_seconds;
    let per_leaf = large.ns_per_leaf / small.ns_per_leaf;
    let summary = format!(
        "medians {:.3}/{:.3}/{:.3} ms, 10^6:10^5 = {ratio:.2}, per-leaf 10^6:10^4 = {per_leaf:.2} ({:.1} vs {:.1} ns)",
        small.median_seconds * 1e3,
        mid.median_seconds * 1e3,
        large.median_seconds * 1e3,
        large.ns_per_leaf,
        small.ns_per_leaf
    );
    ensure(
        ratio <= 15.0 && (1.0 / 3.0..=3.0).contains(&per_leaf),
        || summary.clone(),
    )?;
    Ok(summary)
}

fn c9_eq1_audit() -> Outcome {
    let (mut twin, mut joins) = (0, 0);
    for i in 0..300u64 {
        let t = generate(2 + (i as usize * 11) % 400, 110_000 + i, weight_mix(i)).unwrap();
        let states = compute_states(&t).map_err(|e| e.to_string())?;
        for (id, node) in t.nodes().iter().enumerate() {
            let s = states[id];
            match *node {
                Node::Leaf { .. } => {}
                Node::Internal {
                    op: Op::FalseTwin,
                    left,
                    right,
                } => {
                    let sum = states[left].gamma_p + states[right].gamma_p;
                    ensure(s.gamma_p == sum, || {
                        format!("tree {i} node {id}: {} vs {sum}", s.gamma_p)
                    })?;
                    twin += 1;
                }
                Node::Internal { .. } => {
                    let want = Gamma::Finite(s.gamma_0() as u32 + 2 * s.mty_pr as u32);
                    ensure(s.gamma_p == want, || {
                        format!("tree {i} node {id}: {} vs {want}", s.gamma_p)
                    })?;
                    joins += 1;
                }
            }
        }
    }
    Ok(format!(
        "{twin} false-twin nodes, {joins} true-twin/attach nodes"
    ))
}

fn main() {
    let corpus = small_corpus();
    let criteria: Vec<Criterion> = vec![
        ("1 fig1 end-to-end", Box::new(c1_fig1_end_to_end)),
        ("2 fig1 root profile", Box::new(c2_fig1_profile)),
        (
            "3 dp gamma_p = oracle",
            Box::new(|| c3_dp_vs_oracle(&corpus)),
        ),
        ("4 per-node state = oracle", Box::new(c4_node_states)),
        ("5 unit step / parity", Box::new(c5_unit_step)),
        ("6 recognition", Box::new(c6_recognition)),
        ("7 witnesses", Box::new(|| c7_witnesses(&corpus))),
        ("8 linear scaling", Box::new(c8_scaling)),
        ("9 eq. (1) audit", Box::new(c9_eq1_audit)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        match check() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
