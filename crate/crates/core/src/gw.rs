//! Marked branching trees that mirror the local in-neighborhood geometry of
//! sampled digraphs, and Monte Carlo checks of the associated weight
//! martingale.
//!
//! A tree node carries a vertex mark from `[n]`. Under the pairing model a
//! node marked `j` has exactly `in_degree(j)` children, each marked
//! independently with probability `out_degree(k)/m`; under the selection
//! model every mark `j` is independently a child with probability
//! `out_degree(j)/n`, regardless of the parent's mark. A node at generation
//! `t` has weight equal to the product of `1/out_degree` over its own mark
//! and its ancestors' marks, the root excluded, and
//! `M_t = n * sum_x mu_in(mark(x)) * w(x)` over generation `t` is a
//! martingale with mean one. Its increments satisfy an exact second-moment
//! law `E[(M_{t+1} - M_t)^2] = c * (1 - rho) * rho^t`, which is what the
//! checks below estimate.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use thiserror::Error;

use crate::degree::{DegreeError, DegreeSequence, Model};
use crate::graph::{sample_digraph, Digraph, GraphError};
use crate::prob::{neumaier_sum, ProbVector};
use crate::rng::{stream_rng, substream};

#[derive(Debug, Error)]
pub enum GwError {
    /// The tree-likeness guarantee is weaker than the trivial bound of one at
    /// this scale, so there is nothing to test.
    #[error("agreement bound {bound:.4} is at least 1 and carries no information")]
    BoundVacuous { bound: f64 },
    /// The requested depth leaves too much of the limit variance in the tail
    /// for the truncation `M_deep` to stand in for the limit value.
    #[error(
        "depth {deep_t} leaves a tail factor {residual:.3e} above 1e-4; use depth >= {needed}"
    )]
    InsufficientDepth {
        deep_t: u32,
        needed: u32,
        residual: f64,
    },
    #[error(transparent)]
    Degree(#[from] DegreeError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// How the root mark is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootChoice {
    Mark(u32),
    Uniform,
}

/// Offspring algorithm for the selection model.
///
/// `PerMark` runs one exact integer Bernoulli test per mark and is the
/// default. `Thinned` draws a Binomial count for each out-degree class and
/// then a uniform subset of that class; children come out in ascending mark
/// order under both methods, and the resulting tree laws coincide up to the
/// single f64 rounding of each class probability `d/n` (about one part in
/// 2^52), which is why `Thinned` is opt-in. It exists because `PerMark`
/// costs `n` draws per node, which dominates large Monte Carlo runs. The
/// pairing model has a single natural sampler and ignores this choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OffspringMethod {
    #[default]
    PerMark,
    Thinned,
}

/// One tree node: a vertex mark and the index of its parent within the
/// previous generation. The root stores parent zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GwNode {
    pub mark: u32,
    pub parent: u32,
}

/// A marked branching tree stored generation by generation. Generations can
/// be empty once the line dies out; every later generation is then empty
/// too, so `levels` always has `depth + 1` entries.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkedGwTree {
    model: Model,
    seed: u64,
    levels: Vec<Vec<GwNode>>,
}

impl MarkedGwTree {
    pub fn model(&self) -> Model {
        self.model
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn depth(&self) -> u32 {
        self.levels.len() as u32 - 1
    }

    pub fn root_mark(&self) -> u32 {
        self.levels[0][0].mark
    }

    pub fn levels(&self) -> &[Vec<GwNode>] {
        &self.levels
    }

    pub fn generation(&self, t: u32) -> &[GwNode] {
        &self.levels[t as usize]
    }

    pub fn node_count(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }
}

/// Martingale values along one sampled tree, generation by generation.
#[derive(Debug, Clone)]
pub struct MartingaleLevels {
    /// `M_t` for `t = 0..=depth`. Zero from the first empty generation on.
    pub m: Vec<f64>,
    /// `n * X_t(lambda)` alongside, when a reweighting was supplied.
    pub n_x_lambda: Option<Vec<f64>>,
}

struct DegreeClass {
    members: Vec<u32>,
    count: Binomial,
}

/// Reusable sampler for one degree sequence: lookup tables are built once
/// and shared across replicas (the sampler is `Sync`, so replicas can run on
/// worker threads, each with its own derived RNG stream).
pub struct GwSampler<'a> {
    seq: &'a DegreeSequence,
    method: OffspringMethod,
    /// `n * mu_in(j)`, the martingale integrand.
    n_mu: Vec<f64>,
    /// `1 / out_degree(j)`, the per-generation weight factor.
    inv_d: Vec<f64>,
    /// Pairing model: stub `k` belongs to `tail_owner[k]`, so a uniform stub
    /// lands on mark `j` with probability `out_degree(j)/m` exactly.
    tail_owner: Vec<u32>,
    /// Selection model with `Thinned` offspring: marks grouped by out-degree.
    classes: Vec<DegreeClass>,
}

impl<'a> GwSampler<'a> {
    pub fn new(seq: &'a DegreeSequence, method: OffspringMethod) -> Self {
        let n = seq.n();
        let out = seq.out_degrees();
        let inv_d: Vec<f64> = out.iter().map(|&d| 1.0 / d as f64).collect();
        let n_mu: Vec<f64> = seq
            .mu_in()
            .into_weights()
            .into_iter()
            .map(|p| p * n as f64)
            .collect();
        let mut tail_owner = Vec::new();
        let mut classes = Vec::new();
        match seq.model() {
            Model::Dcm => {
                tail_owner.reserve(seq.m() as usize);
                for (j, &d) in out.iter().enumerate() {
                    tail_owner.extend(std::iter::repeat(j as u32).take(d as usize));
                }
            }
            Model::Ocm => {
                if method == OffspringMethod::Thinned {
                    let mut by_degree: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
                    for (j, &d) in out.iter().enumerate() {
                        by_degree.entry(d).or_default().push(j as u32);
                    }
                    classes = by_degree
                        .into_iter()
                        .map(|(d, members)| DegreeClass {
                            count: Binomial::new(members.len() as u64, d as f64 / n as f64)
                                .expect("degree validation keeps d/n inside (0, 1]"),
                            members,
                        })
                        .collect();
                }
            }
        }
        Self {
            seq,
            method,
            n_mu,
            inv_d,
            tail_owner,
            classes,
        }
    }

    fn root_mark<R: Rng>(&self, root: RootChoice, rng: &mut R) -> u32 {
        match root {
            RootChoice::Mark(j) => {
                assert!(
                    (j as usize) < self.seq.n(),
                    "root mark {j} out of range for n = {}",
                    self.seq.n()
                );
                j
            }
            RootChoice::Uniform => rng.random_range(0..self.seq.n() as u32),
        }
    }

    /// Appends the child marks of a node marked `mark` to `out`. Under the
    /// selection model the parent's mark is irrelevant.
    fn offspring<R: Rng>(&self, mark: u32, rng: &mut R, out: &mut Vec<u32>) {
        match self.seq.model() {
            Model::Dcm => {
                let m = self.tail_owner.len();
                let brood =
                    self.seq.in_degrees().expect("pairing model keeps in-degrees")[mark as usize];
                for _ in 0..brood {
                    out.push(self.tail_owner[rng.random_range(0..m)]);
                }
            }
            Model::Ocm => match self.method {
                OffspringMethod::PerMark => {
                    let n = self.seq.n() as u64;
                    for (j, &d) in self.seq.out_degrees().iter().enumerate() {
                        if rng.random_range(0..n) < d as u64 {
                            out.push(j as u32);
                        }
                    }
                }
                OffspringMethod::Thinned => {
                    let start = out.len();
                    for class in &self.classes {
                        let picks = class.count.sample(rng) as usize;
                        sample_distinct(&class.members, picks, rng, out);
                    }
                    out[start..].sort_unstable();
                }
            },
        }
    }

    /// Materializes a tree of the given depth. The seed is recorded on the
    /// tree so any sampled object can be regenerated from its provenance.
    pub fn sample_tree(&self, root: RootChoice, depth: u32, seed: u64) -> MarkedGwTree {
        let mut rng = stream_rng(seed);
        let root_mark = self.root_mark(root, &mut rng);
        let mut levels = vec![vec![GwNode {
            mark: root_mark,
            parent: 0,
        }]];
        let mut marks = Vec::new();
        for _ in 0..depth {
            let mut next = Vec::new();
            for idx in 0..levels[levels.len() - 1].len() {
                let mark = levels[levels.len() - 1][idx].mark;
                marks.clear();
                self.offspring(mark, &mut rng, &mut marks);
                next.extend(marks.iter().map(|&mark| GwNode {
                    mark,
                    parent: idx as u32,
                }));
            }
            levels.push(next);
        }
        MarkedGwTree {
            model: self.seq.model(),
            seed,
            levels,
        }
    }

    /// Streams a tree generation by generation, keeping only the current
    /// frontier, and scores `M_t` (plus `n * X_t(lambda)` if `n_lambda` is
    /// given — the slice must already be scaled by `n`, i.e. hold
    /// `n * lambda(j)`, so that the two accumulations are term-for-term
    /// comparable). Deep trees never need to be materialized this way.
    pub fn martingale_levels<R: Rng>(
        &self,
        root: RootChoice,
        depth: u32,
        n_lambda: Option<&[f64]>,
        rng: &mut R,
    ) -> MartingaleLevels {
        let root_mark = self.root_mark(root, rng);
        let mut frontier: Vec<(u32, f64)> = vec![(root_mark, 1.0)];
        let mut m = Vec::with_capacity(depth as usize + 1);
        let mut n_x = n_lambda.map(|_| Vec::with_capacity(depth as usize + 1));
        let mut marks = Vec::new();
        for t in 0..=depth {
            m.push(frontier_score(&frontier, &self.n_mu));
            if let (Some(acc), Some(scaled)) = (n_x.as_mut(), n_lambda) {
                acc.push(frontier_score(&frontier, scaled));
            }
            if t == depth {
                break;
            }
            let mut next = Vec::new();
            for &(mark, weight) in &frontier {
                marks.clear();
                self.offspring(mark, rng, &mut marks);
                for &child in &marks {
                    next.push((child, weight * self.inv_d[child as usize]));
                }
            }
            frontier = next;
        }
        MartingaleLevels { m, n_x_lambda: n_x }
    }
}

/// Sums `values[mark] * weight` over a frontier in a fixed compensated
/// order, so equal frontiers always score bitwise-equal.
fn frontier_score(frontier: &[(u32, f64)], values: &[f64]) -> f64 {
    let terms: Vec<f64> = frontier
        .iter()
        .map(|&(mark, w)| values[mark as usize] * w)
        .collect();
    neumaier_sum(&terms)
}

/// Draws `picks` distinct members uniformly from `members`, using a sparse
/// partial shuffle so the cost is proportional to `picks`, not to the class
/// size.
fn sample_distinct<R: Rng>(members: &[u32], picks: usize, rng: &mut R, out: &mut Vec<u32>) {
    let len = members.len() as u32;
    let mut displaced: HashMap<u32, u32> = HashMap::new();
    for slot in 0..picks as u32 {
        let j = rng.random_range(slot..len);
        let pick = *displaced.get(&j).unwrap_or(&j);
        let at_slot = *displaced.get(&slot).unwrap_or(&slot);
        displaced.insert(j, at_slot);
        out.push(members[pick as usize]);
    }
}

/// Samples one marked tree with the default per-mark offspring method.
pub fn sample_gw_tree(
    seq: &DegreeSequence,
    root: RootChoice,
    depth: u32,
    seed: u64,
) -> MarkedGwTree {
    GwSampler::new(seq, OffspringMethod::PerMark).sample_tree(root, depth, seed)
}

/// Evaluates `X_t(phi) = sum over generation t of phi(mark) * weight`,
/// recomputing node weights from the stored marks. An empty generation
/// contributes zero.
pub fn weight_functional<F: Fn(u32) -> f64>(
    seq: &DegreeSequence,
    tree: &MarkedGwTree,
    phi: F,
    t: u32,
) -> f64 {
    assert!(
        t <= tree.depth(),
        "generation {t} beyond sampled depth {}",
        tree.depth()
    );
    let out = seq.out_degrees();
    let mut weights = vec![1.0f64];
    for level in &tree.levels[1..=t as usize] {
        weights = level
            .iter()
            .map(|node| weights[node.parent as usize] * (1.0 / out[node.mark as usize] as f64))
            .collect();
    }
    let terms: Vec<f64> = tree.levels[t as usize]
        .iter()
        .zip(&weights)
        .map(|(node, &w)| phi(node.mark) * w)
        .collect();
    neumaier_sum(&terms)
}

/// The martingale values `M_0..=M_t_max` along one materialized tree.
pub fn martingale_path(seq: &DegreeSequence, tree: &MarkedGwTree, t_max: u32) -> Vec<f64> {
    assert!(
        t_max <= tree.depth(),
        "path to {t_max} beyond sampled depth {}",
        tree.depth()
    );
    let n = seq.n() as f64;
    let n_mu: Vec<f64> = seq
        .mu_in()
        .into_weights()
        .into_iter()
        .map(|p| p * n)
        .collect();
    let out = seq.out_degrees();
    let mut weights = vec![1.0f64];
    let mut path = Vec::with_capacity(t_max as usize + 1);
    for t in 0..=t_max {
        let terms: Vec<f64> = tree.levels[t as usize]
            .iter()
            .zip(&weights)
            .map(|(node, &w)| n_mu[node.mark as usize] * w)
            .collect();
        path.push(neumaier_sum(&terms));
        if t < t_max {
            weights = tree.levels[t as usize + 1]
                .iter()
                .map(|node| {
                    weights[node.parent as usize] * (1.0 / out[node.mark as usize] as f64)
                })
                .collect();
        }
    }
    path
}

/// Monte Carlo verdict on the increment law at one generation.
#[derive(Debug, Clone, Copy)]
pub struct McCheck {
    /// Sample mean of `(M_{t+1} - M_t)^2`.
    pub estimate: f64,
    pub std_error: f64,
    /// `c * (1 - rho) * rho^t`.
    pub target: f64,
    /// `(estimate - target) / std_error`; zero when both sides are exact.
    pub z: f64,
    pub samples: usize,
    /// Sample mean of the raw increment, which should sit within noise of
    /// zero — a cheap drift alarm on top of the second-moment law.
    pub mean_delta: f64,
    pub mean_delta_se: f64,
}

/// Estimates `E[(M_{t+1} - M_t)^2]` over independently sampled trees with a
/// uniform root and compares it with the exact law. Replica `i` draws from
/// its own derived stream, so results do not depend on thread scheduling.
pub fn variance_law_check(
    seq: &DegreeSequence,
    t: u32,
    samples: usize,
    seed: u64,
    method: OffspringMethod,
) -> McCheck {
    assert!(samples > 0, "at least one replica required");
    let law = seq.rho_and_c();
    let target = law.c * (1.0 - law.rho) * law.rho.powi(t as i32);
    let sampler = GwSampler::new(seq, method);
    let deltas: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(substream(seed, i));
            let lv = sampler.martingale_levels(RootChoice::Uniform, t + 1, None, &mut rng);
            lv.m[t as usize + 1] - lv.m[t as usize]
        })
        .collect();
    let squares: Vec<f64> = deltas.iter().map(|d| d * d).collect();
    let (estimate, std_error) = mean_and_se(&squares);
    let (mean_delta, mean_delta_se) = mean_and_se(&deltas);
    McCheck {
        estimate,
        std_error,
        target,
        z: z_score(estimate, target, std_error),
        samples,
        mean_delta,
        mean_delta_se,
    }
}

/// Monte Carlo comparison of `E[(M_t - n X_t(lambda))^2]` against its
/// geometric ceiling.
#[derive(Debug, Clone, Copy)]
pub struct L2Check {
    pub estimate: f64,
    pub std_error: f64,
    /// Reference ceiling `gamma(lambda) * rho^t`.
    pub bound: f64,
    /// Exact second moment from the conditional-variance recursion:
    /// `2 * gamma(lambda)` at `t = 0`, then `c_lambda * rho^(t-1)` with
    /// `c_lambda <= gamma(lambda)` the one-generation variance constant.
    pub closed_form: f64,
    /// Whether `estimate <= bound + 3 * std_error`. The ceiling trails the
    /// recursion by one contraction factor, so near-uniform degree sequences
    /// sit above it by up to a factor of two at small `t`; `closed_form` is
    /// the sharp value to validate against.
    pub pass: bool,
    pub samples: usize,
}

/// One-generation variance constant of the recentred functional
/// `phi = n * (mu_in - lambda)`.
fn c_lambda(seq: &DegreeSequence, lambda: &ProbVector) -> f64 {
    let n = seq.n() as f64;
    let mu = seq.mu_in();
    let terms: Vec<f64> = seq
        .out_degrees()
        .iter()
        .zip(mu.as_slice().iter().zip(lambda.as_slice()))
        .map(|(&d, (&mu_j, &lam_j))| {
            let phi = n * (mu_j - lam_j);
            let thinning = match seq.model() {
                Model::Dcm => 1.0,
                Model::Ocm => 1.0 - d as f64 / n,
            };
            phi * phi * thinning / d as f64
        })
        .collect();
    neumaier_sum(&terms) / n
}

/// Estimates `E[(M_t - n X_t(lambda))^2]` over trees with a uniform root and
/// reports it against the geometric ceiling `gamma(lambda) * rho^t` as well
/// as the exact recursion value.
pub fn lambda_l2_check(
    seq: &DegreeSequence,
    lambda: &ProbVector,
    t: u32,
    samples: usize,
    seed: u64,
    method: OffspringMethod,
) -> Result<L2Check, GwError> {
    assert!(samples > 0, "at least one replica required");
    let gamma = seq.gamma_lambda(lambda)?;
    let law = seq.rho_and_c();
    let bound = gamma * law.rho.powi(t as i32);
    let closed_form = if t == 0 {
        2.0 * gamma
    } else {
        c_lambda(seq, lambda) * law.rho.powi(t as i32 - 1)
    };
    let n = seq.n() as f64;
    let n_lambda: Vec<f64> = lambda.as_slice().iter().map(|&p| p * n).collect();
    let sampler = GwSampler::new(seq, method);
    let squares: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(substream(seed, i));
            let lv = sampler.martingale_levels(RootChoice::Uniform, t, Some(&n_lambda), &mut rng);
            let x = lv.n_x_lambda.as_ref().expect("lambda supplied")[t as usize];
            let diff = lv.m[t as usize] - x;
            diff * diff
        })
        .collect();
    let (estimate, std_error) = mean_and_se(&squares);
    Ok(L2Check {
        estimate,
        std_error,
        bound,
        closed_form,
        pass: estimate <= bound + 3.0 * std_error,
        samples,
    })
}

/// Monte Carlo moments of the martingale limit, read off at a depth where
/// the remaining tail is negligible.
#[derive(Debug, Clone, Copy)]
pub struct MomentReport {
    pub mean: f64,
    pub mean_se: f64,
    pub variance: f64,
    pub variance_se: f64,
    /// `c + Var(M_0)`: the limit variance obtained by summing the increment
    /// law across all generations. `Var(M_0)` vanishes for the selection
    /// model, where `M_0 = 1` identically.
    pub variance_target: f64,
    pub samples: usize,
    pub deep_t: u32,
}

/// Estimates mean and variance of `M_infinity` via `M_deep_t`. Requires
/// `rho^deep_t <= 1e-4` so that the unread tail,
/// `E[(M_deep - M_infinity)^2] = c * rho^deep`, sits far below the Monte
/// Carlo resolution of any affordable sample count.
pub fn m_infinity_moments(
    seq: &DegreeSequence,
    deep_t: u32,
    samples: usize,
    seed: u64,
    method: OffspringMethod,
) -> Result<MomentReport, GwError> {
    assert!(samples > 1, "variance needs at least two replicas");
    let law = seq.rho_and_c();
    let residual = law.rho.powi(deep_t as i32);
    if residual > 1e-4 {
        let needed = (1e-4f64.ln() / law.rho.ln()).ceil() as u32;
        return Err(GwError::InsufficientDepth {
            deep_t,
            needed,
            residual,
        });
    }
    let sampler = GwSampler::new(seq, method);
    let values: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(substream(seed, i));
            let lv = sampler.martingale_levels(RootChoice::Uniform, deep_t, None, &mut rng);
            lv.m[deep_t as usize]
        })
        .collect();
    let (mean, mean_se) = mean_and_se(&values);
    let devs: Vec<f64> = values.iter().map(|&x| (x - mean) * (x - mean)).collect();
    let variance = neumaier_sum(&devs) / (samples - 1) as f64;
    let fourths: Vec<f64> = devs.iter().map(|&d| d * d).collect();
    let fourth_moment = neumaier_sum(&fourths) / samples as f64;
    let variance_se =
        ((fourth_moment - variance * variance).max(0.0) / samples as f64).sqrt();
    let var_m0 = match seq.model() {
        Model::Ocm => 0.0,
        Model::Dcm => {
            let n = seq.n() as f64;
            let terms: Vec<f64> = seq
                .mu_in()
                .as_slice()
                .iter()
                .map(|&mu_j| {
                    let scaled = n * mu_j;
                    scaled * scaled / n
                })
                .collect();
            neumaier_sum(&terms) - 1.0
        }
    };
    Ok(MomentReport {
        mean,
        mean_se,
        variance,
        variance_se,
        variance_target: law.c + var_m0,
        samples,
        deep_t,
    })
}

/// The depth-`t` in-neighborhood of a vertex on a realized digraph.
#[derive(Debug, Clone)]
pub struct InNeighborhood {
    center: u32,
    levels: Vec<Vec<u32>>,
    edges: u64,
    is_tree: bool,
}

impl InNeighborhood {
    pub fn center(&self) -> u32 {
        self.center
    }

    /// Vertices first reached by a reverse path of length `k`, ascending
    /// within each level. `levels()[0]` is the center alone.
    pub fn levels(&self) -> &[Vec<u32>] {
        &self.levels
    }

    /// Directed edges discovered while expanding, counted with multiplicity.
    pub fn edges(&self) -> u64 {
        self.edges
    }

    /// True when every discovered edge led to a brand-new vertex, i.e. the
    /// neighborhood carries no cycle, no parallel edge, and no vertex with
    /// two outbound paths into the center.
    pub fn is_tree(&self) -> bool {
        self.is_tree
    }

    pub fn size(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }
}

/// Reverse breadth-first search to depth `t`.
pub fn explore_in_neighborhood(g: &Digraph, v: u32, t: u32) -> InNeighborhood {
    assert!((v as usize) < g.n(), "vertex {v} out of range");
    let mut seen = vec![false; g.n()];
    seen[v as usize] = true;
    let mut levels = vec![vec![v]];
    let mut edges = 0u64;
    let mut every_edge_fresh = true;
    for _ in 0..t {
        let mut next = Vec::new();
        for &u in levels.last().expect("levels never empty") {
            for &w in g.in_neighbors(u) {
                edges += 1;
                if seen[w as usize] {
                    every_edge_fresh = false;
                } else {
                    seen[w as usize] = true;
                    next.push(w);
                }
            }
        }
        next.sort_unstable();
        levels.push(next);
    }
    InNeighborhood {
        center: v,
        levels,
        edges,
        is_tree: every_edge_fresh,
    }
}

/// Empirical rate of non-tree in-neighborhoods over freshly sampled graphs,
/// against the model's tree-likeness guarantee.
#[derive(Debug, Clone, Copy)]
pub struct CouplingReport {
    pub fraction: f64,
    pub bound: f64,
    /// Binomial confidence half-width at 95%; the rule-of-three upper bound
    /// `3/samples` when no failure was observed.
    pub ci_halfwidth: f64,
    pub samples: usize,
    pub failures: usize,
}

/// Samples `graph_samples` independent (graph, vertex) pairs and measures
/// how often the depth-`t` in-neighborhood fails to be a tree. The guarantee
/// is `max_degree^(2t+3) / m` for the pairing model and
/// `max_degree^(3t) * (ln n)^4 / n` for the selection model; a guarantee of
/// one or more is reported as an error rather than trivially passed. Replica
/// `i` uses streams `2i` (graph) and `2i + 1` (vertex choice).
pub fn coupling_agreement(
    seq: &DegreeSequence,
    t: u32,
    graph_samples: usize,
    seed: u64,
) -> Result<CouplingReport, GwError> {
    assert!(graph_samples > 0, "at least one graph required");
    let n = seq.n() as f64;
    let delta = seq.delta() as f64;
    let bound = match seq.model() {
        Model::Dcm => delta.powi(2 * t as i32 + 3) / seq.m() as f64,
        Model::Ocm => delta.powi(3 * t as i32) * n.ln().powi(4) / n,
    };
    if bound >= 1.0 {
        return Err(GwError::BoundVacuous { bound });
    }
    let non_tree: Vec<bool> = (0..graph_samples as u64)
        .into_par_iter()
        .map(|i| {
            let g = sample_digraph(seq, substream(seed, 2 * i))?;
            let v = stream_rng(substream(seed, 2 * i + 1)).random_range(0..seq.n() as u32);
            Ok(!explore_in_neighborhood(&g, v, t).is_tree())
        })
        .collect::<Result<_, GraphError>>()?;
    let failures = non_tree.iter().filter(|&&b| b).count();
    let fraction = failures as f64 / graph_samples as f64;
    let ci_halfwidth = if failures == 0 {
        3.0 / graph_samples as f64
    } else {
        1.96 * (fraction * (1.0 - fraction) / graph_samples as f64).sqrt()
    };
    Ok(CouplingReport {
        fraction,
        bound,
        ci_halfwidth,
        samples: graph_samples,
        failures,
    })
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let count = xs.len();
    let mean = neumaier_sum(xs) / count as f64;
    if count < 2 {
        return (mean, 0.0);
    }
    let devs: Vec<f64> = xs.iter().map(|&x| (x - mean) * (x - mean)).collect();
    let var = neumaier_sum(&devs) / (count - 1) as f64;
    (mean, (var / count as f64).sqrt())
}

fn z_score(estimate: f64, target: f64, se: f64) -> f64 {
    if se == 0.0 {
        if estimate == target {
            0.0
        } else {
            f64::INFINITY * (estimate - target).signum()
        }
    } else {
        (estimate - target) / se
    }
}
