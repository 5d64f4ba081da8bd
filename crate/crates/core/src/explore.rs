//! Local exploration of out-neighborhoods and the diagnostics built on it.
//!
//! The walk's behavior before it has had time to mix is governed by the
//! geometry of small out-balls: path weights (products of `1/d+` along the
//! path), the set of vertices at a given tree height, and how rarely other
//! walks intersect that set. This module grows those trees, computes the
//! associated measure decomposition, and exposes the pre-mixing distance
//! diagnostics used by the scenario experiments.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::io::Write;

use thiserror::Error;

use crate::graph::Digraph;
use crate::prob::{neumaier_sum, tv_dense, ProbVector};
use crate::walk::{stationary_pagerank, TransitionKernel, WalkError, WalkParams};

#[derive(Debug, Error)]
pub enum ExploreError {
    #[error("time {t} exceeds the decomposition window {limit} for eta = {eta}")]
    EtaTooLarge { t: u64, limit: u64, eta: f64 },
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One node of an exploration tree. The weight is the chance that the
/// no-teleport walk follows the root path to this node, i.e. the product of
/// `1/d+` over proper ancestors; the node's own degree does not enter.
#[derive(Debug, Clone, Copy)]
pub struct TreeNode {
    pub mark: u32,
    /// Index of the parent node; `None` for the root.
    pub parent: Option<usize>,
    /// Position among the parent's out-edges that produced this node.
    pub slot: u32,
    pub height: u32,
    pub weight: f64,
}

/// An out-edge whose head was already in the tree when it was revealed.
/// Such edges are recorded, not inserted, so marks stay unique.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DuplicateArrival {
    pub parent: usize,
    pub slot: u32,
    pub mark: u32,
}

/// Result of a max-weight-first exploration from one root.
#[derive(Debug, Clone)]
pub struct ExplorationTree {
    pub root: u32,
    pub eta: f64,
    pub t_max: u32,
    /// Expansion floor `n^(eta^2 - 1)`: nodes lighter than this are kept
    /// as leaves but never expanded.
    pub w_min: f64,
    nodes: Vec<TreeNode>,
    children: Vec<Vec<usize>>,
    pub duplicate_arrivals: Vec<DuplicateArrival>,
}

impl ExplorationTree {
    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn children_of(&self, node: usize) -> &[usize] {
        &self.children[node]
    }

    /// Number of nodes revealed by the exploration.
    pub fn kappa(&self) -> usize {
        self.nodes.len()
    }

    /// Marks sitting at the given height, ascending.
    pub fn annulus(&self, height: u32) -> Vec<u32> {
        let mut marks: Vec<u32> = self
            .nodes
            .iter()
            .filter(|nd| nd.height == height)
            .map(|nd| nd.mark)
            .collect();
        marks.sort_unstable();
        marks
    }

    /// Total weight at the given height: the chance the no-teleport walk is
    /// at tree height `height` having followed tree edges the whole way.
    pub fn walk_in_tree_probability(&self, height: u32) -> f64 {
        let weights: Vec<f64> = self
            .nodes
            .iter()
            .filter(|nd| nd.height == height)
            .map(|nd| nd.weight)
            .collect();
        neumaier_sum(&weights)
    }
}

/// Heap entry: heaviest first, ties to the lowest mark then lowest slot.
#[derive(Debug, Clone, Copy)]
struct Candidate {
    weight: f64,
    mark: u32,
    slot: u32,
    node: usize,
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight
            .total_cmp(&other.weight)
            .then_with(|| other.mark.cmp(&self.mark))
            .then_with(|| other.slot.cmp(&self.slot))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

/// Grows the exploration tree from `root`, always expanding the heaviest
/// unexpanded node (ties broken by mark, then slot, so the order is a
/// total one). Expansion reveals the node's out-edges; heads already seen
/// are logged as duplicate arrivals and heads below the weight floor or at
/// `t_max` become permanent leaves.
///
/// The revealed-node count is asserted against `n^(1 - eta^2/2)`, which
/// holds with overwhelming probability in the regimes the experiments use;
/// tripping it on hand-built inputs means the exploration was pushed
/// outside its design window.
pub fn explore_out_tree(g: &Digraph, root: u32, eta: f64, t_max: u32) -> ExplorationTree {
    assert!(eta > 0.0 && eta < 0.5, "eta must lie in (0, 1/2)");
    let n = g.n();
    assert!((root as usize) < n, "root {root} out of range");
    let nf = n as f64;
    let w_min = nf.powf(eta * eta - 1.0);

    let mut nodes = vec![TreeNode {
        mark: root,
        parent: None,
        slot: 0,
        height: 0,
        weight: 1.0,
    }];
    let mut children: Vec<Vec<usize>> = vec![Vec::new()];
    let mut duplicate_arrivals = Vec::new();
    let mut by_mark: HashMap<u32, usize> = HashMap::new();
    by_mark.insert(root, 0);

    let mut heap = BinaryHeap::new();
    if t_max > 0 {
        heap.push(Candidate {
            weight: 1.0,
            mark: root,
            slot: 0,
            node: 0,
        });
    }
    while let Some(cand) = heap.pop() {
        let (height, weight) = (nodes[cand.node].height, nodes[cand.node].weight);
        let out = g.out_neighbors(cand.mark);
        if out.is_empty() {
            continue;
        }
        let child_weight = weight / out.len() as f64;
        for (slot, &head) in out.iter().enumerate() {
            let slot = slot as u32;
            if by_mark.contains_key(&head) {
                duplicate_arrivals.push(DuplicateArrival {
                    parent: cand.node,
                    slot,
                    mark: head,
                });
                continue;
            }
            let idx = nodes.len();
            nodes.push(TreeNode {
                mark: head,
                parent: Some(cand.node),
                slot,
                height: height + 1,
                weight: child_weight,
            });
            children.push(Vec::new());
            children[cand.node].push(idx);
            by_mark.insert(head, idx);
            if height + 1 < t_max && child_weight >= w_min {
                heap.push(Candidate {
                    weight: child_weight,
                    mark: head,
                    slot,
                    node: idx,
                });
            }
        }
    }

    let cap = nf.powf(1.0 - eta * eta / 2.0);
    assert!(
        nodes.len() as f64 <= cap + 1e-6,
        "explored {} nodes, above the n^(1 - eta^2/2) = {cap:.1} ceiling",
        nodes.len()
    );
    ExplorationTree {
        root,
        eta,
        t_max,
        w_min,
        nodes,
        children,
        duplicate_arrivals,
    }
}

/// Writes a tree as whitespace-separated rows, root first. The parent id of
/// the root is printed as -1.
pub fn write_tree<W: Write>(mut w: W, tree: &ExplorationTree) -> Result<(), ExploreError> {
    writeln!(w, "node_id parent_id mark height weight")?;
    for (id, node) in tree.nodes.iter().enumerate() {
        let parent = node.parent.map(|p| p as i64).unwrap_or(-1);
        writeln!(
            w,
            "{id} {parent} {} {} {}",
            node.mark, node.height, node.weight
        )?;
    }
    Ok(())
}

/// Number of walk paths of length at most `u` from `x` whose endpoint lies
/// in `annulus` (sorted marks). The trivial length-0 path counts when `x`
/// itself is in the set, and parallel edges contribute distinct paths.
pub fn path_annulus_intersections(g: &Digraph, x: u32, annulus: &[u32], u: u32) -> u64 {
    debug_assert!(annulus.windows(2).all(|w| w[0] < w[1]), "sorted marks");
    fn go(g: &Digraph, v: u32, left: u32, annulus: &[u32]) -> u64 {
        let mut count = annulus.binary_search(&v).is_ok() as u64;
        if left > 0 {
            for &w in g.out_neighbors(v) {
                count += go(g, w, left - 1, annulus);
            }
        }
        count
    }
    go(g, x, u, annulus)
}

/// Ceiling `(9 + 3 log2 delta) / eta^2` on how often a length-u path family
/// can hit one annulus in the regimes the experiments run.
pub fn k_bound(delta: u32, eta: f64) -> f64 {
    assert!(delta >= 2, "degree bound below 2 is degenerate");
    assert!(eta > 0.0 && eta < 0.5);
    (9.0 + 3.0 * (delta as f64).log2()) / (eta * eta)
}

/// Census of vertices whose out-ball of the scaling depth
/// `ceil(log_delta(n) / 10)` is a tree (no revisits, loops, or parallel
/// edges inside the ball).
#[derive(Debug, Clone, Copy)]
pub struct TreeLikeCensus {
    pub depth: u32,
    pub tree_like: usize,
    pub n: usize,
}

impl TreeLikeCensus {
    pub fn fraction(&self) -> f64 {
        self.tree_like as f64 / self.n as f64
    }
}

pub fn tree_like_vertices(g: &Digraph) -> TreeLikeCensus {
    let n = g.n();
    let delta = g.max_out_degree().max(2) as f64;
    let depth = ((n as f64).ln() / (10.0 * delta.ln())).ceil().max(1.0) as u32;
    let mut visited: Vec<u32> = Vec::new();
    let mut frontier: Vec<u32> = Vec::new();
    let mut next: Vec<u32> = Vec::new();
    let mut tree_like = 0usize;
    'vertices: for v in 0..n as u32 {
        visited.clear();
        visited.push(v);
        frontier.clear();
        frontier.push(v);
        for _ in 0..depth {
            next.clear();
            for &u in &frontier {
                for &w in g.out_neighbors(u) {
                    if visited.contains(&w) {
                        continue 'vertices;
                    }
                    visited.push(w);
                    next.push(w);
                }
            }
            std::mem::swap(&mut frontier, &mut next);
        }
        tree_like += 1;
    }
    TreeLikeCensus {
        depth,
        tree_like,
        n,
    }
}

/// The heavy head of the stationary law pushed t steps forward.
///
/// Cutting the restart series at `cut = floor((1 - eta) t_ent) - t` writes
/// `pi P^t` as `a * mu_lambda + (mass 1 - a remainder)`, where `mu_lambda`
/// is the normalized partial sum and `a = 1 - (1 - alpha)^(cut + 1)`. The
/// residual against any reference measure standing in for the remainder is
/// at most `1 - a`; that bound is a mass identity and is asserted.
#[derive(Debug, Clone)]
pub struct MuLambdaDecomposition {
    pub a: f64,
    pub cut: u64,
    pub t: u64,
    pub eta: f64,
    pub mu_lambda: ProbVector,
    /// tv(pi P^t, a mu_lambda + (1 - a) pi0).
    pub residual: f64,
    /// The guaranteed ceiling `1 - a` for the residual.
    pub mass_bound: f64,
}

pub fn mu_lambda_decomposition(
    kernel: &TransitionKernel,
    params: &WalkParams,
    t: u64,
    eta: f64,
    t_ent: f64,
    pi0: &ProbVector,
    series_tol: f64,
) -> Result<MuLambdaDecomposition, ExploreError> {
    assert!(eta > 0.0 && eta < 0.5, "eta must lie in (0, 1/2)");
    assert!(t_ent > 0.0 && t_ent.is_finite());
    let n = kernel.n();
    assert_eq!(pi0.len(), n, "reference measure dimension");
    let limit = ((1.0 - 2.0 * eta) * t_ent).floor() as u64;
    if t > limit {
        return Err(ExploreError::EtaTooLarge { t, limit, eta });
    }
    let alpha = params.alpha();
    if alpha == 0.0 {
        return Err(ExploreError::Walk(WalkError::AlphaZero));
    }
    let cut = ((1.0 - eta) * t_ent).floor() as u64 - t;
    let a = 1.0 - (1.0 - alpha).powf(cut as f64 + 1.0);

    // Normalized head of the restart series, advanced t steps: the partial
    // sums reuse one rolling power of the kernel.
    let mut cur = params.lambda().as_slice().to_vec();
    let mut next = vec![0.0; n];
    for _ in 0..t {
        kernel.apply(&cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
    }
    let mut acc = vec![0.0f64; n];
    let mut coeff = alpha;
    for _ in 0..=cut {
        for (a_i, &c_i) in acc.iter_mut().zip(&cur) {
            *a_i += coeff * c_i;
        }
        kernel.apply(&cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
        coeff *= 1.0 - alpha;
    }
    for a_i in acc.iter_mut() {
        *a_i /= a;
    }
    let mu_lambda = ProbVector::with_tolerance(acc, 1e-9).map_err(WalkError::from)?;

    let mut target = stationary_pagerank(kernel, params, series_tol)?
        .pi
        .into_weights();
    for _ in 0..t {
        kernel.apply(&target, &mut next);
        std::mem::swap(&mut target, &mut next);
    }
    let mix: Vec<f64> = mu_lambda
        .as_slice()
        .iter()
        .zip(pi0.as_slice())
        .map(|(&m, &p)| a * m + (1.0 - a) * p)
        .collect();
    let residual = tv_dense(&target, &mix);
    let mass_bound = 1.0 - a;
    assert!(
        residual <= mass_bound + 1e-9,
        "residual {residual} breaks the mass ceiling {mass_bound}"
    );
    Ok(MuLambdaDecomposition {
        a,
        cut,
        t,
        eta,
        mu_lambda,
        residual,
        mass_bound,
    })
}

/// One row of the pre-mixing closeness table: total variation between the
/// t-step no-teleport spread of a point mass and of the stationary law.
#[derive(Debug, Clone, Copy)]
pub struct SingularityPoint {
    pub x: u32,
    pub t: u64,
    pub tv: f64,
}

/// Measures `tv(delta_x P^t, pi P^t)` on a time grid for several starts.
/// Values near 1 witness that the walk measure is still essentially
/// singular; the sequence is non-increasing in t for each start.
pub fn singularity_diagnostic(
    kernel: &TransitionKernel,
    params: &WalkParams,
    xs: &[u32],
    times: &[u64],
    series_tol: f64,
) -> Result<Vec<SingularityPoint>, ExploreError> {
    assert!(!xs.is_empty() && !times.is_empty());
    assert!(
        times.windows(2).all(|w| w[0] < w[1]),
        "times must be strictly increasing"
    );
    let n = kernel.n();
    let mut pi_t = stationary_pagerank(kernel, params, series_tol)?
        .pi
        .into_weights();
    let mut spreads: Vec<Vec<f64>> = xs
        .iter()
        .map(|&x| {
            assert!((x as usize) < n, "start {x} out of range");
            let mut v = vec![0.0; n];
            v[x as usize] = 1.0;
            v
        })
        .collect();
    let mut scratch = vec![0.0; n];
    let mut rows = Vec::with_capacity(xs.len() * times.len());
    let mut last: Vec<f64> = vec![f64::INFINITY; xs.len()];
    let mut t_now = 0u64;
    for &t in times {
        while t_now < t {
            kernel.apply(&pi_t, &mut scratch);
            std::mem::swap(&mut pi_t, &mut scratch);
            for v in spreads.iter_mut() {
                kernel.apply(v, &mut scratch);
                std::mem::swap(v, &mut scratch);
            }
            t_now += 1;
        }
        for (i, (&x, v)) in xs.iter().zip(&spreads).enumerate() {
            let tv = tv_dense(v, &pi_t);
            assert!(
                tv <= last[i] + 1e-9,
                "distance must not grow: start {x}, t = {t}"
            );
            last[i] = tv;
            rows.push(SingularityPoint { x, t, tv });
        }
    }
    Ok(rows)
}
