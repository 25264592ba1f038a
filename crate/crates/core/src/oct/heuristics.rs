//! Heuristic odd cycle transversals.
//!
//! None of these guarantee a minimum. Every returned set bipartizes the
//! graph and is peeled to inclusion-minimality, which the order extension
//! step depends on.
//!
//! Annealing and the genetic algorithm work on class vectors: each vertex is
//! on side 0, side 1, or removed (2). The cost of a vector is the number of
//! removed vertices plus `penalty` per edge whose endpoints share a side.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{peel_to_minimal, OctMethod, OctResult, OctStats};
use crate::graph::{tree_cycle, UGraph};
use crate::par::{self, Parallelism};

const REMOVED: u8 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct AnnealParams {
    pub initial_temperature: f64,
    /// Geometric cooling factor applied after every step.
    pub cooling: f64,
    pub steps: usize,
    pub penalty: f64,
}

impl Default for AnnealParams {
    fn default() -> Self {
        AnnealParams {
            initial_temperature: 1.0,
            cooling: 0.995,
            steps: 10_000,
            penalty: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneticParams {
    pub population: usize,
    pub mutation_rate: f64,
    pub generations: usize,
    pub penalty: f64,
    pub tournament: usize,
    pub elite: usize,
    /// Fitness evaluation of a generation.
    pub par: Parallelism,
}

impl Default for GeneticParams {
    fn default() -> Self {
        GeneticParams {
            population: 50,
            mutation_rate: 0.05,
            generations: 200,
            penalty: 2.0,
            tournament: 2,
            elite: 2,
            par: Parallelism::default(),
        }
    }
}

fn finish(g: &UGraph, removed: Vec<usize>, method: OctMethod, iterations: u64) -> OctResult {
    OctResult {
        removed: peel_to_minimal(g, &removed),
        method,
        optimal: false,
        stats: OctStats {
            iterations,
            k_tried: Vec::new(),
        },
    }
}

/// One odd cycle per monochromatic edge of a BFS 2-colouring of `g` minus
/// the flagged vertices.
fn odd_cycles(g: &UGraph, removed: &[bool]) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut color = vec![u8::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    let mut cycles = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    for root in 0..n {
        if removed[root] || color[root] != u8::MAX {
            continue;
        }
        color[root] = 0;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                if removed[v] {
                    continue;
                }
                if color[v] == u8::MAX {
                    color[v] = 1 - color[u];
                    parent[v] = u;
                    depth[v] = depth[u] + 1;
                    queue.push_back(v);
                } else if color[v] == color[u] && u < v {
                    cycles.push(tree_cycle(u, v, &parent, &depth));
                }
            }
        }
    }
    cycles
}

/// Repeatedly removes the vertex lying on the most detected odd cycles.
pub fn oct_greedy(g: &UGraph) -> OctResult {
    let n = g.vertex_count();
    let mut removed = vec![false; n];
    let mut rounds = 0u64;
    loop {
        let cycles = odd_cycles(g, &removed);
        if cycles.is_empty() {
            break;
        }
        rounds += 1;
        let mut count = vec![0usize; n];
        for c in &cycles {
            for &v in c {
                count[v] += 1;
            }
        }
        let best = (0..n).max_by_key(|&v| (count[v], std::cmp::Reverse(v))).unwrap();
        removed[best] = true;
    }
    let set = (0..n).filter(|&v| removed[v]).collect();
    finish(g, set, OctMethod::Greedy, rounds)
}

fn bfs_classes(g: &UGraph) -> Vec<u8> {
    let n = g.vertex_count();
    let mut color = vec![u8::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    for root in 0..n {
        if color[root] != u8::MAX {
            continue;
        }
        color[root] = 0;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                if color[v] == u8::MAX {
                    color[v] = 1 - color[u];
                    queue.push_back(v);
                }
            }
        }
    }
    color
}

fn conflicts(g: &UGraph, classes: &[u8]) -> usize {
    g.edges()
        .filter(|&(u, v)| classes[u] != REMOVED && classes[u] == classes[v])
        .count()
}

fn cost(g: &UGraph, classes: &[u8], penalty: f64) -> f64 {
    let removed = classes.iter().filter(|&&c| c == REMOVED).count();
    removed as f64 + penalty * conflicts(g, classes) as f64
}

/// Moves conflicting vertices to the removed class until no edge is
/// monochromatic.
fn repair(g: &UGraph, classes: &mut [u8]) {
    loop {
        let n = g.vertex_count();
        let mut count = vec![0usize; n];
        for (u, v) in g.edges() {
            if classes[u] != REMOVED && classes[u] == classes[v] {
                count[u] += 1;
                count[v] += 1;
            }
        }
        let worst = (0..n).max_by_key(|&v| (count[v], std::cmp::Reverse(v)));
        match worst {
            Some(v) if count[v] > 0 => classes[v] = REMOVED,
            _ => return,
        }
    }
}

fn removed_of(classes: &[u8]) -> Vec<usize> {
    (0..classes.len()).filter(|&v| classes[v] == REMOVED).collect()
}

/// Change in the number of monochromatic edges when `v` moves to `to`.
fn conflict_delta(g: &UGraph, classes: &[u8], v: usize, to: u8) -> i64 {
    let from = classes[v];
    let mut delta = 0;
    for &w in g.neighbors(v) {
        let cw = classes[w];
        if cw == REMOVED {
            continue;
        }
        delta -= i64::from(from != REMOVED && cw == from);
        delta += i64::from(to != REMOVED && cw == to);
    }
    delta
}

fn removed_delta(classes: &[u8], v: usize, to: u8) -> i64 {
    i64::from(to == REMOVED) - i64::from(classes[v] == REMOVED)
}

/// Change in cost when vertex `v` moves to class `to`.
fn move_delta(g: &UGraph, classes: &[u8], v: usize, to: u8, penalty: f64) -> f64 {
    removed_delta(classes, v, to) as f64 + penalty * conflict_delta(g, classes, v, to) as f64
}

pub fn oct_anneal(g: &UGraph, seed: u64, params: &AnnealParams) -> OctResult {
    let n = g.vertex_count();
    if n == 0 {
        return finish(g, Vec::new(), OctMethod::Anneal, 0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut classes = bfs_classes(g);
    let mut current_conflicts = conflicts(g, &classes) as i64;
    let mut current_removed = 0i64;
    let mut best: Option<(i64, Vec<u8>)> = (current_conflicts == 0).then(|| (0, classes.clone()));
    let mut temperature = params.initial_temperature;
    for _ in 0..params.steps {
        let v = rng.gen_range(0..n);
        let to = (classes[v] + rng.gen_range(1..=2)) % 3;
        let delta = move_delta(g, &classes, v, to, params.penalty);
        let accept = delta <= 0.0 || rng.gen::<f64>() < (-delta / temperature).exp();
        if accept {
            current_removed += removed_delta(&classes, v, to);
            current_conflicts += conflict_delta(g, &classes, v, to);
            classes[v] = to;
            if current_conflicts == 0 && best.as_ref().is_none_or(|(r, _)| current_removed < *r) {
                best = Some((current_removed, classes.clone()));
            }
        }
        temperature *= params.cooling;
    }
    let mut chosen = best.map(|(_, c)| c).unwrap_or(classes);
    repair(g, &mut chosen);
    finish(g, removed_of(&chosen), OctMethod::Anneal, params.steps as u64)
}

pub fn oct_genetic(g: &UGraph, seed: u64, params: &GeneticParams) -> OctResult {
    let n = g.vertex_count();
    if n == 0 || params.population == 0 {
        return finish(g, Vec::new(), OctMethod::Genetic, 0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut population: Vec<Vec<u8>> = Vec::with_capacity(params.population);
    population.push(bfs_classes(g));
    while population.len() < params.population {
        population.push(
            (0..n)
                .map(|_| match rng.gen_range(0..10) {
                    0 => REMOVED,
                    x => (x % 2) as u8,
                })
                .collect(),
        );
    }
    let evaluate = |pop: &[Vec<u8>]| -> Vec<f64> { par::map(pop, params.par, |c| cost(g, c, params.penalty)) };
    let mut fitness = evaluate(&population);
    let ranked = |fitness: &[f64]| {
        let mut idx: Vec<usize> = (0..fitness.len()).collect();
        idx.sort_by(|&a, &b| fitness[a].total_cmp(&fitness[b]).then(a.cmp(&b)));
        idx
    };
    for _ in 0..params.generations {
        let order = ranked(&fitness);
        let mut next: Vec<Vec<u8>> = order
            .iter()
            .take(params.elite.min(params.population))
            .map(|&i| population[i].clone())
            .collect();
        while next.len() < params.population {
            let pick = |rng: &mut ChaCha8Rng| {
                (0..params.tournament.max(1))
                    .map(|_| rng.gen_range(0..population.len()))
                    .min_by(|&a, &b| fitness[a].total_cmp(&fitness[b]).then(a.cmp(&b)))
                    .unwrap()
            };
            let (pa, pb) = (pick(&mut rng), pick(&mut rng));
            let child: Vec<u8> = (0..n)
                .map(|v| {
                    let gene = if rng.gen_bool(0.5) { population[pa][v] } else { population[pb][v] };
                    if rng.gen::<f64>() < params.mutation_rate {
                        rng.gen_range(0..3)
                    } else {
                        gene
                    }
                })
                .collect();
            next.push(child);
        }
        population = next;
        fitness = evaluate(&population);
    }
    let mut best = population[ranked(&fitness)[0]].clone();
    repair(g, &mut best);
    finish(
        g,
        removed_of(&best),
        OctMethod::Genetic,
        (params.generations * params.population) as u64,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oct::is_inclusion_minimal;

    fn heuristics(g: &UGraph, seed: u64) -> Vec<OctResult> {
        vec![
            oct_greedy(g),
            oct_anneal(g, seed, &AnnealParams::default()),
            oct_genetic(g, seed, &GeneticParams::default()),
        ]
    }

    #[test]
    fn bipartite_graphs_need_nothing() {
        for g in [UGraph::new(0), UGraph::cycle(6), UGraph::from_edges(3, [(0, 1)])] {
            for r in heuristics(&g, 1) {
                assert!(r.is_empty(), "{:?}", r.method);
                assert!(!r.optimal);
            }
        }
    }

    #[test]
    fn greedy_on_five_cycle_removes_one() {
        let r = oct_greedy(&UGraph::cycle(5));
        assert_eq!(r.len(), 1);
    }

    #[test]
    fn results_are_valid_and_minimal() {
        let g = UGraph::complete(6);
        for seed in 0..3 {
            for r in heuristics(&g, seed) {
                assert!(is_inclusion_minimal(&g, &r.removed), "{:?}", r.method);
                assert_eq!(r.len(), 4, "{:?}", r.method);
            }
        }
    }

    #[test]
    fn seeded_runs_repeat() {
        let g = UGraph::from_edges(9, (0..9).flat_map(|i| [(i, (i + 1) % 9), (i, (i + 3) % 9)]));
        let a = oct_anneal(&g, 42, &AnnealParams::default());
        let b = oct_anneal(&g, 42, &AnnealParams::default());
        assert_eq!(a, b);
        let seq = GeneticParams {
            par: Parallelism::Sequential,
            ..GeneticParams::default()
        };
        assert_eq!(oct_genetic(&g, 5, &GeneticParams::default()), oct_genetic(&g, 5, &seq));
    }

    #[test]
    fn move_delta_matches_recomputed_cost() {
        let g = UGraph::complete(4);
        let mut classes = vec![0, 0, 1, 2];
        let before = cost(&g, &classes, 2.0);
        for v in 0..4 {
            for to in 0..3u8 {
                let d = move_delta(&g, &classes, v, to, 2.0);
                let old = classes[v];
                classes[v] = to;
                assert_eq!(cost(&g, &classes, 2.0) - before, d, "v={v} to={to}");
                classes[v] = old;
            }
        }
    }
}
