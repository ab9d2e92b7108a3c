//! Random walks with stopping sets and Monte Carlo hit estimates.

use crate::error::{Error, Result};
use crate::graph::{EmbeddedWeightedGraph, LatticePath};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::VecDeque;

pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000_000;

/// Reproducible random source identified by `(seed, stream_id)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RngStream { seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(self.stream_id);
        r
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MCEstimate {
    pub value: f64,
    pub samples: u64,
    pub std_error: f64,
    pub seed: u64,
}

impl MCEstimate {
    pub fn bernoulli(hits: u64, samples: u64, seed: u64) -> Self {
        let p = if samples == 0 { 0.0 } else { hits as f64 / samples as f64 };
        let se = if samples == 0 { 0.0 } else { (p * (1.0 - p) / samples as f64).sqrt() };
        MCEstimate { value: p, samples, std_error: se, seed }
    }
}

/// `W(v,w) / Σ_u W(v,u)` over the neighbours of `v`.
pub fn step_distribution(g: &EmbeddedWeightedGraph, v: usize) -> Result<Vec<(usize, f64)>> {
    let total = g.total_weight(v);
    if total <= 0.0 {
        return Err(Error::NoTransition(v));
    }
    Ok(g.neighbors(v).map(|(w, x)| (w, x / total)).collect())
}

/// Per-vertex alias tables laid out like the graph's adjacency rows.
#[derive(Clone, Debug)]
pub struct WalkSampler<'g> {
    graph: &'g EmbeddedWeightedGraph,
    prob: Vec<f64>,
    alias: Vec<u32>,
    offsets: Vec<usize>,
}

impl<'g> WalkSampler<'g> {
    pub fn new(graph: &'g EmbeddedWeightedGraph) -> Self {
        let n = graph.len();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut prob = Vec::new();
        let mut alias = Vec::new();
        offsets.push(0);
        for v in 0..n {
            let (_, w) = graph.neighbor_slice(v);
            let (p, a) = vose(w);
            prob.extend(p);
            alias.extend(a);
            offsets.push(prob.len());
        }
        WalkSampler { graph, prob, alias, offsets }
    }

    pub fn graph(&self) -> &'g EmbeddedWeightedGraph {
        self.graph
    }

    #[inline]
    pub fn step<R: Rng>(&self, v: usize, rng: &mut R) -> usize {
        let lo = self.offsets[v];
        let k = self.offsets[v + 1] - lo;
        let (nb, _) = self.graph.neighbor_slice(v);
        let u = rng.gen::<f64>() * k as f64;
        let i = (u as usize).min(k - 1);
        if u - (i as f64) < self.prob[lo + i] {
            nb[i]
        } else {
            nb[self.alias[lo + i] as usize]
        }
    }
}

fn vose(w: &[f64]) -> (Vec<f64>, Vec<u32>) {
    let k = w.len();
    if k == 0 {
        return (vec![], vec![]);
    }
    let total: f64 = w.iter().sum();
    let mut p: Vec<f64> = w.iter().map(|x| x * k as f64 / total).collect();
    let mut alias: Vec<u32> = (0..k as u32).collect();
    let (mut small, mut large): (Vec<usize>, Vec<usize>) = (0..k).partition(|&i| p[i] < 1.0);
    while let (Some(s), Some(&l)) = (small.pop(), large.last()) {
        alias[s] = l as u32;
        p[l] -= 1.0 - p[s];
        if p[l] < 1.0 {
            large.pop();
            small.push(l);
        }
    }
    for i in large.into_iter().chain(small) {
        p[i] = 1.0;
    }
    (p, alias)
}

/// Stop on the first visit to `stop` at time `>= min_time`.
#[derive(Clone, Debug)]
pub struct StopRule {
    stop: Vec<bool>,
    pub min_time: u8,
}

impl StopRule {
    pub fn new(n_vertices: usize, stop_set: &[usize], min_time: u8) -> Result<Self> {
        if stop_set.is_empty() {
            return Err(Error::InvalidInput("empty stop set".into()));
        }
        if min_time > 1 {
            return Err(Error::InvalidInput("min_time must be 0 or 1".into()));
        }
        let mut stop = vec![false; n_vertices];
        for &v in stop_set {
            if v >= n_vertices {
                return Err(Error::InvalidInput(format!("stop vertex {v} out of range")));
            }
            stop[v] = true;
        }
        Ok(StopRule { stop, min_time })
    }

    #[inline]
    pub fn is_stop(&self, v: usize) -> bool {
        self.stop[v]
    }

    /// Whether a walk from `start` can reach the stop set.
    pub fn reachable_from(&self, g: &EmbeddedWeightedGraph, start: usize) -> bool {
        if self.min_time == 0 && self.stop[start] {
            return true;
        }
        let mut seen = vec![false; g.len()];
        let mut queue = VecDeque::new();
        seen[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            for (w, _) in g.neighbors(v) {
                if self.stop[w] {
                    return true;
                }
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        false
    }
}

/// Runs one walk; the returned path ends at its first admissible stop.
pub fn run_walk<R: Rng>(
    sampler: &WalkSampler<'_>,
    start: usize,
    rule: &StopRule,
    rng: &mut R,
    step_budget: u64,
) -> Result<LatticePath> {
    let mut path = Vec::new();
    walk_into(sampler, start, rule, rng, step_budget, &mut path)?;
    Ok(LatticePath::trusted(path))
}

/// As `run_walk`, reusing the caller's buffer.
pub fn walk_into<R: Rng>(
    sampler: &WalkSampler<'_>,
    start: usize,
    rule: &StopRule,
    rng: &mut R,
    step_budget: u64,
    path: &mut Vec<usize>,
) -> Result<()> {
    path.clear();
    path.push(start);
    if rule.min_time == 0 && rule.is_stop(start) {
        return Ok(());
    }
    if sampler.graph().degree(start) == 0 {
        return Err(Error::NoTransition(start));
    }
    let mut v = start;
    let mut steps = 0u64;
    loop {
        if steps >= step_budget {
            path.clear();
            return Err(Error::Timeout(step_budget));
        }
        v = sampler.step(v, rng);
        steps += 1;
        path.push(v);
        if rule.is_stop(v) {
            return Ok(());
        }
    }
}

/// Endpoint of a walk without storing the trajectory.
pub fn walk_endpoint<R: Rng>(
    sampler: &WalkSampler<'_>,
    start: usize,
    rule: &StopRule,
    rng: &mut R,
    step_budget: u64,
) -> Result<usize> {
    if rule.min_time == 0 && rule.is_stop(start) {
        return Ok(start);
    }
    let mut v = start;
    for _ in 0..step_budget {
        v = sampler.step(v, rng);
        if rule.is_stop(v) {
            return Ok(v);
        }
    }
    Err(Error::Timeout(step_budget))
}

/// Splits `samples` into fixed chunks, each with its own stream, and
/// folds per-chunk results in chunk order. The result does not depend on
/// the number of threads.
pub fn par_chunks<T, F>(seed: u64, samples: u64, chunk: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(RngStream, u64) -> Result<T> + Sync,
{
    let chunk = chunk.max(1);
    let n_chunks = samples.div_ceil(chunk);
    (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let m = chunk.min(samples - c * chunk);
            f(RngStream::new(seed, c + 1), m)
        })
        .collect()
}

pub const CHUNK: u64 = 2048;

/// Hit counts for `(A, B \ A)` from the same trajectories.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HitCounts {
    pub in_a: u64,
    pub outside_a: u64,
}

pub fn count_hits(
    g: &EmbeddedWeightedGraph,
    v: usize,
    a: &[usize],
    b: &[usize],
    samples: u64,
    seed: u64,
    step_budget: u64,
) -> Result<HitCounts> {
    let mut in_b = vec![false; g.len()];
    for &x in b {
        in_b[x] = true;
    }
    if let Some(x) = a.iter().find(|x| !in_b[**x]) {
        return Err(Error::InvalidInput(format!("A is not a subset of B (vertex {x})")));
    }
    let rule = StopRule::new(g.len(), b, 1)?;
    if !rule.reachable_from(g, v) {
        return Err(Error::InvalidInput("B unreachable from start".into()));
    }
    let mut in_a = vec![false; g.len()];
    for &x in a {
        in_a[x] = true;
    }
    let sampler = WalkSampler::new(g);
    let parts = par_chunks(seed, samples, CHUNK, |s, m| {
        let mut rng = s.rng();
        let mut h = 0u64;
        for _ in 0..m {
            if in_a[walk_endpoint(&sampler, v, &rule, &mut rng, step_budget)?] {
                h += 1;
            }
        }
        Ok(h)
    })?;
    let hits: u64 = parts.into_iter().sum();
    Ok(HitCounts { in_a: hits, outside_a: samples - hits })
}

/// Monte Carlo estimate of `q(v, A, B, G)`.
pub fn estimate_hit(
    g: &EmbeddedWeightedGraph,
    v: usize,
    a: &[usize],
    b: &[usize],
    samples: u64,
    seed: u64,
) -> Result<MCEstimate> {
    let c = count_hits(g, v, a, b, samples, seed, DEFAULT_STEP_BUDGET)?;
    Ok(MCEstimate::bernoulli(c.in_a, samples, seed))
}

/// Exit-point histogram of `samples` walks from `v` stopped on `b`.
pub fn exit_histogram(
    g: &EmbeddedWeightedGraph,
    v: usize,
    b: &[usize],
    samples: u64,
    seed: u64,
) -> Result<Vec<u64>> {
    let rule = StopRule::new(g.len(), b, 1)?;
    if !rule.reachable_from(g, v) {
        return Err(Error::InvalidInput("B unreachable from start".into()));
    }
    let sampler = WalkSampler::new(g);
    let parts = par_chunks(seed, samples, CHUNK, |s, m| {
        let mut rng = s.rng();
        let mut h = vec![0u64; g.len()];
        for _ in 0..m {
            h[walk_endpoint(&sampler, v, &rule, &mut rng, DEFAULT_STEP_BUDGET)?] += 1;
        }
        Ok(h)
    })?;
    let mut total = vec![0u64; g.len()];
    for p in parts {
        for (t, x) in total.iter_mut().zip(p) {
            *t += x;
        }
    }
    Ok(total)
}
