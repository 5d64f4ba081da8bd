//! Shared test oracles.
//!
//! Everything in here recomputes expected values through a route that is
//! independent of the library implementation: dense linear algebra instead
//! of sparse truncated series, exhaustive enumeration instead of max-weight
//! search, forward reachability tables instead of reverse indices. Frozen
//! expected values are hand-derived and documented next to their constants.

#![allow(dead_code)]

use std::collections::BTreeSet;

use surfmix::graph::Digraph;

// ---------------------------------------------------------------------------
// Frozen expected values
// ---------------------------------------------------------------------------

/// Stationary law of the two-state kernel [[1/2, 1/2], [1, 0]].
/// By balance: pi0 = pi0/2 + pi1 and pi1 = pi0/2, so pi = (2/3, 1/3).
pub const TWO_STATE_STATIONARY: [f64; 2] = [2.0 / 3.0, 1.0 / 3.0];

/// Teleporting walk on the complete 3-vertex digraph without self-loops,
/// alpha = 1/2, lambda = delta_0. Solving pi = a*delta_0 + (1-a)*pi*P with
/// P(x, y) = 1/2 off-diagonal gives 1.25*pi(y) = 0.5*[y=0] + 0.25, i.e.
/// pi = (0.6, 0.2, 0.2).
pub const COMPLETE3_PAGERANK: [f64; 3] = [0.6, 0.2, 0.2];

/// Out-regular model with d+ = 3 on n = 1000 vertices:
/// rho = sum_j (1/n)(1/3) = 1/3 and C = (rho - 1/n)/(1 - rho)
///     = (997/3000)/(2/3) = 997/2000 exactly.
pub const OCM_REG3_N1000_RHO: f64 = 1.0 / 3.0;
pub const OCM_REG3_N1000_C: f64 = 0.4985;

/// lambda = uniform over the first 252 of n = 10^4 vertices (252 = ceil of
/// 10^4 raised to 0.6). Direct evaluation of (1/n) * sum_j (1 - n*lambda_j)^2:
/// (9748^2/252 + 9748)/10^4 = 38.68253968...
pub const SPREAD252_ELL2: f64 = (9748.0 * 9748.0 / 252.0 + 9748.0) / 1e4;

/// Mixed two-vertex pairing sequence out = (2, 4), in = (4, 2):
/// mu_in = (2/3, 1/3), H = (2/3)ln2 + (1/3)ln4 = (4/3)ln2, and since
/// ln n = ln 2 the entropic time is exactly 3/4.
pub const MIXED2_T_ENT: f64 = 0.75;

/// Non-tree fraction bound for in-neighbourhoods of a pairing-model graph
/// with Delta = 3, t = 2, m = 3e5: Delta^(2t+3)/m = 3^7/3e5 = 0.00729.
pub const DCM_COUPLING_BOUND_N1E5_D3_T2: f64 = 2187.0 / 300_000.0;

/// Annulus-intersection bound for Delta = 3, eta = 0.3:
/// ceil((9 + 3*log2(3)) / 0.09) = ceil(152.832...) = 153.
pub const EK_BOUND_D3_ETA03: u64 = 153;

// ---------------------------------------------------------------------------
// Dense linear-algebra oracles
// ---------------------------------------------------------------------------

/// Row-stochastic dense matrix built straight from the adjacency lists:
/// each out-edge contributes 1/d+ to its target's column; a vertex without
/// out-edges keeps all mass in place.
pub fn dense_kernel(g: &Digraph) -> Vec<Vec<f64>> {
    let n = g.n();
    let mut p = vec![vec![0.0; n]; n];
    for x in 0..n {
        let row = g.out_neighbors(x as u32);
        if row.is_empty() {
            p[x][x] = 1.0;
        } else {
            let share = 1.0 / row.len() as f64;
            for &y in row {
                p[x][y as usize] += share;
            }
        }
    }
    p
}

pub fn dense_apply(p: &[Vec<f64>], mu: &[f64]) -> Vec<f64> {
    let n = mu.len();
    let mut out = vec![0.0; n];
    for x in 0..n {
        for y in 0..n {
            out[y] += mu[x] * p[x][y];
        }
    }
    out
}

pub fn dense_evolve(p: &[Vec<f64>], mu: &[f64], steps: u64) -> Vec<f64> {
    let mut cur = mu.to_vec();
    for _ in 0..steps {
        cur = dense_apply(p, &cur);
    }
    cur
}

/// Gaussian elimination with partial pivoting; panics on a singular system
/// (fine for oracles, the test instances are well conditioned).
pub fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        assert!(a[pivot][col].abs() > 1e-14, "singular oracle system");
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    x
}

/// Stationary teleporting-walk law by direct linear solve of
/// (I - (1-alpha) P^T) pi = alpha lambda.
pub fn dense_pagerank(p: &[Vec<f64>], alpha: f64, lambda: &[f64]) -> Vec<f64> {
    let n = lambda.len();
    let mut a = vec![vec![0.0; n]; n];
    for y in 0..n {
        for x in 0..n {
            a[y][x] = -(1.0 - alpha) * p[x][y];
        }
        a[y][y] += 1.0;
    }
    let b: Vec<f64> = lambda.iter().map(|&l| alpha * l).collect();
    solve_linear(a, b)
}

/// Stationary law of a dense row-stochastic matrix: solve (I - P^T) pi = 0
/// with the last balance equation replaced by the normalization sum = 1.
pub fn dense_stationary(p: &[Vec<f64>]) -> Vec<f64> {
    let n = p.len();
    let mut a = vec![vec![0.0; n]; n];
    for y in 0..n {
        for x in 0..n {
            a[y][x] = -p[x][y];
        }
        a[y][y] += 1.0;
    }
    let mut b = vec![0.0; n];
    a[n - 1] = vec![1.0; n];
    b[n - 1] = 1.0;
    solve_linear(a, b)
}

pub fn tv_slices(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration oracles
// ---------------------------------------------------------------------------

/// In-neighbourhood oracle via forward reachability: reach[k] holds the set
/// of vertices with a walk of length exactly k into `v`. Returns the vertex
/// set of all walks of length <= t ending at v, the number of edge instances
/// on such walks, and the edge count's tree verdict.
pub fn reverse_ball_oracle(g: &Digraph, v: u32, t: u32) -> (BTreeSet<u32>, usize, bool) {
    let n = g.n();
    let mut reach = vec![vec![false; n]; t as usize + 1];
    reach[0][v as usize] = true;
    for k in 1..=t as usize {
        for x in 0..n {
            let hits = g
                .out_neighbors(x as u32)
                .iter()
                .any(|&y| reach[k - 1][y as usize]);
            if hits {
                reach[k][x] = true;
            }
        }
    }
    let mut vertices = BTreeSet::new();
    for k in 0..=t as usize {
        for x in 0..n {
            if reach[k][x] {
                vertices.insert(x as u32);
            }
        }
    }
    let mut edges = 0usize;
    if t > 0 {
        for x in 0..n {
            for &y in g.out_neighbors(x as u32) {
                let on_path = (0..t as usize).any(|k| reach[k][y as usize]);
                if on_path {
                    edges += 1;
                }
            }
        }
    }
    let is_tree = edges + 1 == vertices.len();
    (vertices, edges, is_tree)
}

// ---------------------------------------------------------------------------
// Random-instance helpers (seeded by the caller for reproducibility)
// ---------------------------------------------------------------------------

use rand::Rng;

/// Random out/in degree pair with entries in [lo, hi] and equal sums, for
/// pairing-model instances. The deficient side gets bumped up one entry at
/// a time, which keeps every entry inside the box.
pub fn balanced_degrees<R: Rng>(rng: &mut R, n: usize, lo: u32, hi: u32) -> (Vec<u32>, Vec<u32>) {
    assert!(lo >= 2 && hi > lo);
    let mut out: Vec<u32> = (0..n).map(|_| rng.random_range(lo..=hi)).collect();
    let mut inn: Vec<u32> = (0..n).map(|_| rng.random_range(lo..=hi)).collect();
    loop {
        let so: u64 = out.iter().map(|&d| d as u64).sum();
        let si: u64 = inn.iter().map(|&d| d as u64).sum();
        if so == si {
            return (out, inn);
        }
        let side = if so < si { &mut out } else { &mut inn };
        let i = rng.random_range(0..n);
        if side[i] < hi {
            side[i] += 1;
        }
    }
}

/// Strictly positive random probability vector (normalized exponentials).
pub fn random_lambda<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n)
        .map(|_| {
            let u: f64 = 1.0 - rng.random::<f64>();
            -u.ln() + 1e-12
        })
        .collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / s).collect()
}
