#![allow(dead_code)]

pub mod charpoly;

use graph_spectra::random::{random_connected_graph, seed_from_env, RandomGraphParams};
use graph_spectra::Graph;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed_from_env());
    rng.set_stream(stream);
    rng
}

pub fn random_graphs(count: usize, params: &RandomGraphParams, stream: u64) -> Vec<Graph> {
    let mut rng = rng(stream);
    (0..count)
        .map(|_| random_connected_graph(&mut rng, params))
        .collect()
}

/// Same graph with the potential removed.
pub fn without_potential(g: &Graph) -> Graph {
    g.clone().with_potential(vec![0.0; g.len()]).unwrap()
}

pub fn complete_graph(n: usize) -> Graph {
    let mut g = Graph::new(vec![1.0; n]);
    for x in 0..n {
        for y in (x + 1)..n {
            g.set_edge(x, y, 1.0).unwrap();
        }
    }
    g
}
