//! Seeded random instances for self-tests, property tests and benchmarks.

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::extensions::SourceSpec;
use crate::graph::{Arc, Graph};
use crate::numeric::{Int, Scalar};

/// The generator used everywhere a seed is accepted.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Parameters of a random integer instance. Arcs are a uniform sample of
/// distinct ordered pairs (self-loops included); prices are uniform or
/// infinite, and at least one vertex is always a station.
#[derive(Debug, Clone)]
pub struct InstanceFamily {
    pub min_n: usize,
    pub max_n: usize,
    pub max_m: usize,
    pub cost: (Int, Int),
    pub capacity: (Int, Int),
    pub max_price: Int,
    /// Probability that a vertex has no charging station.
    pub no_station: f64,
}

impl InstanceFamily {
    /// Small signed instances, checkable against the state-graph oracle.
    pub fn small_signed() -> Self {
        InstanceFamily {
            min_n: 1,
            max_n: 7,
            max_m: 20,
            cost: (-4, 4),
            capacity: (3, 10),
            max_price: 9,
            no_station: 0.3,
        }
    }

    /// Same shape with costs in `[0, 6]`.
    pub fn small_nonnegative() -> Self {
        InstanceFamily {
            cost: (0, 6),
            ..Self::small_signed()
        }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Graph<Int> {
        let n = rng.gen_range(self.min_n..=self.max_n);
        let m = rng.gen_range(0..=self.max_m.min(n * n));
        let mut price: Vec<Int> = (0..n)
            .map(|_| {
                if rng.gen_bool(self.no_station) {
                    Int::INFINITY
                } else {
                    rng.gen_range(0..=self.max_price)
                }
            })
            .collect();
        if price.iter().all(|p| p.is_pos_inf()) {
            price[rng.gen_range(0..n)] = rng.gen_range(0..=self.max_price);
        }
        let arcs = sample(rng, n * n, m)
            .into_iter()
            .map(|pair| Arc {
                tail: pair / n,
                head: pair % n,
                cost: rng.gen_range(self.cost.0..=self.cost.1),
            })
            .collect();
        let capacity = rng.gen_range(self.capacity.0..=self.capacity.1);
        Graph::new(price, capacity, arcs).expect("generated graph is valid")
    }
}

/// A complete digraph (`m = n^2`) with signed costs but no negative cycle:
/// costs are `w + p(u) - p(v)` for non-negative `w` and random potentials
/// `p`, so every cycle costs the sum of its `w`.
pub fn dense_without_negative_cycles<R: Rng>(rng: &mut R, n: usize) -> Graph<Int> {
    let potential: Vec<Int> = (0..n).map(|_| rng.gen_range(0..=20)).collect();
    let mut arcs = Vec::with_capacity(n * n);
    for u in 0..n {
        for v in 0..n {
            let w: Int = rng.gen_range(0..=30);
            arcs.push(Arc {
                tail: u,
                head: v,
                cost: w + potential[u] - potential[v],
            });
        }
    }
    let price = (0..n)
        .map(|_| {
            if rng.gen_bool(0.5) {
                rng.gen_range(1..=9)
            } else {
                Int::INFINITY
            }
        })
        .collect();
    Graph::new(price, 60, arcs).expect("generated graph is valid")
}

/// One to three cars at random vertices with random initial charges.
pub fn source_spec<R: Rng>(rng: &mut R, g: &Graph<Int>) -> SourceSpec<Int> {
    let cars = rng.gen_range(1..=3);
    SourceSpec::new(
        (0..cars)
            .map(|_| (rng.gen_range(0..g.n()), rng.gen_range(0..=g.capacity())))
            .collect(),
    )
}
