//! Seeded random instances: semicomplete parts, tunable cross-part density,
//! optional planted solution.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::digraph::{CliquePartition, Digraph, ProblemInstance};

/// Probability that a same-part pair gets both orientations instead of one.
const BOTH_DIRECTIONS_PROB: f64 = 0.1;

/// Most intermediate vertices a planted member takes.
const MAX_PLANTED_INTERMEDIATES: usize = 2;

#[derive(Debug, Error, PartialEq)]
pub enum GenerateError {
    #[error("need n >= 2k to place terminals, got n = {n}, k = {k}")]
    InfeasibleParameters { n: usize, k: usize },
    #[error("clique count {c} outside 1..={n}")]
    BadCliqueCount { c: usize, n: usize },
    #[error("cross density {0} outside [0, 1]")]
    BadDensity(f64),
}

/// Builds an instance deterministically from `seed`. Every same-part pair is
/// oriented at least one way, cross-part edges appear with probability
/// `cross_density`, and with `plant_linkage` a k-member disjoint solution is
/// embedded first, so the instance is guaranteed feasible.
pub fn generate_instance(
    seed: u64,
    n: usize,
    k: usize,
    c: usize,
    cross_density: f64,
    plant_linkage: bool,
) -> Result<ProblemInstance, GenerateError> {
    if k == 0 || n < 2 * k {
        return Err(GenerateError::InfeasibleParameters { n, k });
    }
    if c == 0 || c > n {
        return Err(GenerateError::BadCliqueCount { c, n });
    }
    if !(0.0..=1.0).contains(&cross_density) {
        return Err(GenerateError::BadDensity(cross_density));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let assignment: Vec<usize> = (0..n).map(|_| rng.random_range(1..=c)).collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let pairs: Vec<(usize, usize)> = (0..k).map(|i| (order[2 * i], order[2 * i + 1])).collect();

    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    if plant_linkage {
        let mut cursor = 2 * k;
        for &(s, t) in &pairs {
            let room = n - cursor;
            let extra = rng.random_range(0..=MAX_PLANTED_INTERMEDIATES.min(room));
            let mut prev = s;
            for _ in 0..extra {
                let mid = order[cursor];
                cursor += 1;
                edges.insert((prev, mid));
                prev = mid;
            }
            edges.insert((prev, t));
        }
    }

    for u in 0..n {
        for v in u + 1..n {
            if assignment[u] != assignment[v] {
                continue;
            }
            let forward = edges.contains(&(u, v));
            let backward = edges.contains(&(v, u));
            if !forward && !backward {
                if rng.random_bool(0.5) {
                    edges.insert((u, v));
                } else {
                    edges.insert((v, u));
                }
                if rng.random_bool(BOTH_DIRECTIONS_PROB) {
                    edges.insert((u, v));
                    edges.insert((v, u));
                }
            } else if !(forward && backward) && rng.random_bool(BOTH_DIRECTIONS_PROB) {
                edges.insert((u, v));
                edges.insert((v, u));
            }
        }
    }

    for u in 0..n {
        for v in 0..n {
            if u == v || assignment[u] == assignment[v] || edges.contains(&(u, v)) {
                continue;
            }
            if rng.random_bool(cross_density) {
                edges.insert((u, v));
            }
        }
    }

    let digraph = Digraph::new(n, edges).expect("generator emits well-formed edges");
    let partition = CliquePartition::new(c, assignment).expect("generator emits valid ids");
    Ok(ProblemInstance::new(digraph, partition, pairs).expect("generator emits valid instances"))
}
