use pdom_core::oracle::oracle_is_dh;
use pdom_core::{decompose, generate, is_distance_hereditary, Error, Graph, OpWeights};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cycle(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

#[test]
fn generated_graphs_decompose_back() {
    for seed in 0..500u64 {
        let n = 1 + (seed as usize * 37) % 200;
        let t = generate(n, seed, OpWeights::default()).unwrap();
        let g = t.expand().unwrap().graph;
        let t2 = decompose(&g).unwrap();
        assert_eq!(t2.expand().unwrap().graph, g, "seed {seed}");
        assert!(is_distance_hereditary(&g));
    }
}

#[test]
fn agrees_with_the_oracle_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut yes, mut no) = (0, 0);
    for _ in 0..200 {
        let n = rng.gen_range(1..=8);
        let p: f64 = rng.gen_range(0.2..0.8);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n, &edges).unwrap();
        let expected = oracle_is_dh(&g).unwrap();
        assert_eq!(is_distance_hereditary(&g), expected, "{}", g.to_text());
        if expected {
            yes += 1;
            assert_eq!(decompose(&g).unwrap().expand().unwrap().graph, g);
        } else {
            no += 1;
            assert!(matches!(
                decompose(&g),
                Err(Error::NotDistanceHereditary { .. })
            ));
        }
    }
    assert!(yes > 0 && no > 0, "corpus has both classes: {yes} / {no}");
}

#[test]
fn short_cycles() {
    for (n, dh) in [(3, true), (4, true), (5, false), (6, false), (7, false)] {
        let g = cycle(n);
        assert_eq!(is_distance_hereditary(&g), dh, "C{n}");
        assert_eq!(oracle_is_dh(&g).unwrap(), dh, "C{n}");
    }
}

#[test]
fn readme_path_example() {
    let g = Graph::parse("4 3\n0 1\n1 2\n2 3\n").unwrap();
    let tree = decompose(&g).unwrap();
    let result = pdom_core::solve(&tree, true).unwrap();
    assert_eq!(result.gamma_p, pdom_core::Gamma::Finite(2));
    assert!(g.is_paired_dominating(&result.witness.unwrap()).unwrap());
}
