//! Seeded random connected graphs for property tests and benchmarks.

use rand::Rng;

use crate::graph::Graph;

/// Environment variable holding the seed for random-graph suites.
pub const SEED_ENV: &str = "SPECTRAL_GRAPH_SEED";
pub const DEFAULT_SEED: u64 = 42;

/// Seed from `SPECTRAL_GRAPH_SEED`, falling back to 42.
pub fn seed_from_env() -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

#[derive(Clone, Debug)]
pub struct RandomGraphParams {
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub measure: (f64, f64),
    pub weight: (f64, f64),
    pub potential: (f64, f64),
    /// Expected number of extra edges per vertex on top of the spanning tree.
    pub extra_degree: f64,
}

impl Default for RandomGraphParams {
    fn default() -> Self {
        Self {
            min_vertices: 2,
            max_vertices: 200,
            measure: (0.1, 10.0),
            weight: (0.0, 5.0),
            potential: (0.0, 5.0),
            extra_degree: 2.0,
        }
    }
}

impl RandomGraphParams {
    pub fn with_vertices(mut self, min: usize, max: usize) -> Self {
        self.min_vertices = min;
        self.max_vertices = max;
        self
    }
}

fn sample<R: Rng>(rng: &mut R, (lo, hi): (f64, f64)) -> f64 {
    if hi > lo {
        rng.gen_range(lo..hi)
    } else {
        lo
    }
}

/// Connected graph: a random recursive spanning tree with strictly positive
/// weights plus independent extra edges.
pub fn random_connected_graph<R: Rng>(rng: &mut R, params: &RandomGraphParams) -> Graph {
    let n = rng.gen_range(params.min_vertices..=params.max_vertices);
    let measure: Vec<f64> = (0..n)
        .map(|_| {
            let m = sample(rng, params.measure);
            if m > 0.0 {
                m
            } else {
                params.measure.1
            }
        })
        .collect();
    let mut graph = Graph::new(measure);
    let positive = |rng: &mut R| loop {
        let b = sample(rng, params.weight);
        if b > 0.0 {
            break b;
        }
    };
    for x in 1..n {
        let parent = rng.gen_range(0..x);
        let b = positive(rng);
        graph.set_edge(parent, x, b).expect("indices in range");
    }
    if n > 2 {
        let p = (params.extra_degree / (n - 1) as f64).min(1.0);
        for x in 0..n {
            for y in (x + 1)..n {
                if graph.edge_weight(x, y) == 0.0 && rng.gen_bool(p) {
                    let b = sample(rng, params.weight);
                    graph.set_edge(x, y, b).expect("indices in range");
                }
            }
        }
    }
    let potential = (0..n).map(|_| sample(rng, params.potential)).collect();
    graph.set_potential(potential).expect("one value per vertex");
    graph
}
