#![allow(dead_code)]

use rand::Rng;
use uso_phase::cube::Edge;
use uso_phase::orientation::{DenseOrientation, EdgeSet};
use uso_phase::reduction::{QbfInstance, Quantifier};

/// Every orientation of `Q_n`, one per choice of edge directions.
pub fn all_orientations(n: usize) -> Vec<DenseOrientation> {
    let edges: Vec<Edge> = (0..n)
        .flat_map(|axis| (0..1usize << (n - 1)).map(move |k| Edge::from_index(k, axis)))
        .collect();
    (0..1u64 << edges.len())
        .map(|choice| {
            // start from all edges pointing down, then reverse the chosen ones
            let mut maps: Vec<u32> = (0..1u32 << n).collect();
            for (k, e) in edges.iter().enumerate() {
                if choice >> k & 1 == 1 {
                    maps[e.base() as usize] ^= 1 << e.axis();
                    maps[e.upper() as usize] ^= 1 << e.axis();
                }
            }
            DenseOrientation::new(n, maps).unwrap()
        })
        .collect()
}

/// Every matching of `Q_n` with at most `max` edges.
pub fn matchings(n: usize, max: usize) -> Vec<EdgeSet> {
    let edges: Vec<Edge> = (0..n)
        .flat_map(|axis| (0..1usize << (n - 1)).map(move |k| Edge::from_index(k, axis)))
        .collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    extend(&edges, 0, max, 0, &mut current, &mut out);
    out
}

fn extend(edges: &[Edge], from: usize, max: usize, used: u64, current: &mut Vec<Edge>, out: &mut Vec<EdgeSet>) {
    out.push(current.iter().copied().collect());
    if current.len() == max {
        return;
    }
    for k in from..edges.len() {
        let e = edges[k];
        let touched = 1u64 << e.base() | 1u64 << e.upper();
        if used & touched == 0 {
            current.push(e);
            extend(edges, k + 1, max, used | touched, current, out);
            current.pop();
        }
    }
}

/// `count` chain samples from independent seeds.
pub fn sampled(n: usize, count: u64, seed_base: u64) -> Vec<DenseOrientation> {
    (0..count)
        .map(|k| uso_phase::sample_uniform(n, 8 * n as u64 + 16, seed_base + k).unwrap())
        .collect()
}

/// A random closed CNF with `vars` variables.
pub fn random_qbf<R: Rng>(rng: &mut R, vars: usize) -> QbfInstance {
    let quantifiers = (0..vars)
        .map(|_| if rng.gen::<bool>() { Quantifier::Forall } else { Quantifier::Exists })
        .collect();
    let clauses = (0..rng.gen_range(1..=4))
        .map(|_| {
            (0..rng.gen_range(1..=3))
                .map(|_| {
                    let v = rng.gen_range(1..=vars as i32);
                    if rng.gen::<bool>() {
                        v
                    } else {
                        -v
                    }
                })
                .collect()
        })
        .collect();
    QbfInstance::new(quantifiers, clauses).unwrap()
}

/// Runs the CLI in-process on the given standard input.
pub fn cli(args: &[&str], input: &str) -> (i32, String, String) {
    let mut argv = vec!["uso".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = uso_phase::cli::run(&argv, &mut input.as_bytes(), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}
