//! Exploration-layer agreement with independent enumeration oracles: tree
//! growth against ball characterizations and a linear-scan reference,
//! reverse neighborhoods against forward reachability, path counts against
//! adjacency-matrix powers, and the measure split against dense series.

mod common;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::Rng;
use surfmix::degree::{DegreeSequence, Model};
use surfmix::explore::{
    explore_out_tree, mu_lambda_decomposition, path_annulus_intersections,
    singularity_diagnostic, tree_like_vertices, ExploreError,
};
use surfmix::graph::{sample_dcm, sample_digraph, Digraph, Provenance};
use surfmix::gw::explore_in_neighborhood;
use surfmix::prob::ProbVector;
use surfmix::rng::stream_rng;
use surfmix::walk::{TransitionKernel, WalkParams};

fn random_dcm(n: usize, lo: u32, hi: u32, seed: u64) -> Digraph {
    let mut rng = stream_rng(seed);
    let (out, inn) = common::balanced_degrees(&mut rng, n, lo, hi);
    let seq = DegreeSequence::new(Model::Dcm, out, Some(inn)).unwrap();
    sample_dcm(&seq, seed ^ 0x5151).unwrap()
}

fn random_ocm(n: usize, lo: u32, hi: u32, seed: u64) -> Digraph {
    let mut rng = stream_rng(seed);
    let out: Vec<u32> = (0..n).map(|_| rng.random_range(lo..=hi)).collect();
    let seq = DegreeSequence::new(Model::Ocm, out, None).unwrap();
    sample_digraph(&seq, seed ^ 0x1515).unwrap()
}

fn hand_provenance() -> Provenance {
    Provenance {
        model: Model::Dcm,
        seed: 0,
        degree_hash: 0,
    }
}

// ---------------------------------------------------------------------------
// Out-tree growth
// ---------------------------------------------------------------------------

/// A hand-built graph where the expansion floor genuinely bites: the root
/// fans out to ten children of weight 1/10; five sit on chains (children keep
/// weight 1/10 and expand to the horizon) and five fan out three ways, so
/// their children weigh 1/30, fall under `w_min ~ 0.0382`, and must stay
/// leaves even though the height budget would allow another level.
#[test]
fn expansion_floor_prunes_light_branches_before_the_horizon() {
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); 60];
    adj[0] = (1..=10).collect();
    for i in 1..=5u32 {
        adj[i as usize] = vec![10 + i]; // chain: 1 -> 11, ..., 5 -> 15
        adj[10 + i as usize] = vec![15 + i]; // 11 -> 16, ..., 15 -> 20
        adj[15 + i as usize] = vec![35 + i]; // never revealed: height = t_max
    }
    for (k, v) in (6..=10u32).enumerate() {
        let base = 21 + 3 * k as u32;
        adj[v as usize] = vec![base, base + 1, base + 2]; // 6 -> 21,22,23, ...
    }
    let g = Digraph::from_adjacency(adj, hand_provenance()).unwrap();

    let tree = explore_out_tree(&g, 0, 0.45, 3);
    assert!(
        0.1 >= tree.w_min && 0.1 / 3.0 < tree.w_min,
        "floor {} must separate the chain weight from the fan weight",
        tree.w_min
    );

    assert_eq!(tree.kappa(), 36);
    assert_eq!(tree.children_of(0).len(), 10);
    assert!(tree.duplicate_arrivals.is_empty());
    assert_eq!(tree.annulus(1), (1..=10).collect::<Vec<u32>>());
    let mut mid: Vec<u32> = (11..=15).chain(21..=35).collect();
    mid.sort_unstable();
    assert_eq!(tree.annulus(2), mid);
    // The fans' children are present but were never expanded, so height 3
    // holds only the five chain tips.
    assert_eq!(tree.annulus(3), (16..=20).collect::<Vec<u32>>());

    for node in tree.nodes() {
        let expect: f64 = match (node.height, node.mark) {
            (0, _) => 1.0,
            (1, _) => 1.0 / 10.0,
            (2, m) if m >= 21 => 1.0 / 10.0 / 3.0,
            _ => 1.0 / 10.0,
        };
        assert_eq!(node.weight.to_bits(), expect.to_bits(), "mark {}", node.mark);
    }
    assert!((tree.walk_in_tree_probability(2) - 1.0).abs() < 1e-14);
    assert!((tree.walk_in_tree_probability(3) - 0.5).abs() < 1e-14);
}

/// Out-ball of `root` up to `radius`, with first-arrival distances.
fn bfs_ball(g: &Digraph, root: u32, radius: u32) -> BTreeMap<u32, u32> {
    let mut dist = BTreeMap::new();
    dist.insert(root, 0u32);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        if d == radius {
            continue;
        }
        for &w in g.out_neighbors(v) {
            if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(w) {
                e.insert(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// On out-regular graphs every path of a given length has the same weight,
/// so the tree is exactly the breadth-first ball truncated at the first
/// height whose expansion would dip under the floor. Degrees and horizons
/// are chosen so the worst-case ball stays under the revealed-node ceiling.
#[test]
fn regular_out_trees_are_truncated_balls() {
    let combos: [(usize, u32, u32, f64); 6] = [
        (60, 3, 2, 0.3),
        (80, 4, 2, 0.3),
        (64, 2, 3, 0.3),
        (100, 3, 3, 0.3),
        (100, 3, 2, 0.45),
        (90, 2, 3, 0.45),
    ];
    for (i, &(n, d, t_max, eta)) in combos.iter().enumerate() {
        for model in [Model::Dcm, Model::Ocm] {
            let seed = 90 + i as u64;
            let seq = DegreeSequence::regular(model, n, d).unwrap();
            let g = sample_digraph(&seq, seed).unwrap();
            let root = (seed * 17 % n as u64) as u32;
            let tree = explore_out_tree(&g, root, eta, t_max);

            // Heights expand while d^-h stays at or above the floor.
            let mut level_weight = vec![1.0f64];
            while level_weight.len() <= t_max as usize {
                level_weight.push(level_weight.last().unwrap() / d as f64);
            }
            let h_star = (0..t_max).take_while(|&h| level_weight[h as usize] >= tree.w_min).count() as u32;
            let radius = t_max.min(h_star);
            let ball = bfs_ball(&g, root, radius);

            let marks: BTreeSet<u32> = tree.nodes().iter().map(|nd| nd.mark).collect();
            assert_eq!(
                marks,
                ball.keys().copied().collect::<BTreeSet<u32>>(),
                "model {model:?} combo {i}: tree marks differ from the radius-{radius} ball"
            );
            assert_eq!(tree.kappa(), ball.len());
            for node in tree.nodes() {
                assert_eq!(node.height, ball[&node.mark], "mark {}", node.mark);
                assert_eq!(
                    node.weight.to_bits(),
                    level_weight[node.height as usize].to_bits(),
                    "mark {} at height {}",
                    node.mark,
                    node.height
                );
            }
        }
    }
}

struct RefTree {
    nodes: Vec<(u32, Option<usize>, u32, u32, f64)>,
    children: Vec<Vec<usize>>,
    duplicates: Vec<(usize, u32, u32)>,
}

/// Same growth policy as the library, rebuilt around a plain vector with a
/// linear scan for the next node to expand (heaviest, then lowest mark, then
/// lowest slot) instead of a priority queue.
fn reference_explore(g: &Digraph, root: u32, eta: f64, t_max: u32) -> RefTree {
    let w_min = (g.n() as f64).powf(eta * eta - 1.0);
    let mut nodes = vec![(root, None, 0u32, 0u32, 1.0f64)];
    let mut children: Vec<Vec<usize>> = vec![Vec::new()];
    let mut duplicates = Vec::new();
    let mut seen: BTreeSet<u32> = BTreeSet::from([root]);
    let mut pool: Vec<(f64, u32, u32, usize)> = if t_max > 0 {
        vec![(1.0, root, 0, 0)]
    } else {
        Vec::new()
    };
    while !pool.is_empty() {
        let mut best = 0;
        for i in 1..pool.len() {
            let (aw, am, asl, _) = pool[i];
            let (bw, bm, bsl, _) = pool[best];
            let ord = aw
                .total_cmp(&bw)
                .then_with(|| bm.cmp(&am))
                .then_with(|| bsl.cmp(&asl));
            if ord == Ordering::Greater {
                best = i;
            }
        }
        let (_, mark, _, id) = pool.swap_remove(best);
        let (height, weight) = (nodes[id].3, nodes[id].4);
        let out = g.out_neighbors(mark);
        if out.is_empty() {
            continue;
        }
        let child_weight = weight / out.len() as f64;
        for (slot, &head) in out.iter().enumerate() {
            let slot = slot as u32;
            if !seen.insert(head) {
                duplicates.push((id, slot, head));
                continue;
            }
            let idx = nodes.len();
            nodes.push((head, Some(id), slot, height + 1, child_weight));
            children.push(Vec::new());
            children[id].push(idx);
            if height + 1 < t_max && child_weight >= w_min {
                pool.push((child_weight, head, slot, idx));
            }
        }
    }
    RefTree {
        nodes,
        children,
        duplicates,
    }
}

/// With mixed degrees the expansion order is weight-driven and non-trivial;
/// the library must agree with the linear-scan reference node for node,
/// including discovery indices, parents, slots, and duplicate logs.
#[test]
fn mixed_degree_trees_match_a_linear_scan_reference() {
    for i in 0..18u64 {
        // Wider degrees get the short horizon, narrow degrees the deep one,
        // keeping the worst-case revealed count under the ceiling.
        let (lo, hi, t_max, eta, n) = if i % 2 == 0 {
            (2, 5, 2, if i % 4 == 0 { 0.3 } else { 0.45 }, 55 + (i as usize * 7) % 46)
        } else {
            (2, 3, 3, 0.3, 60 + (i as usize * 5) % 41)
        };
        let g = if i % 3 == 0 {
            random_ocm(n, lo, hi, 700 + i)
        } else {
            random_dcm(n, lo, hi, 700 + i)
        };
        let root = ((i * 31) % n as u64) as u32;
        let tree = explore_out_tree(&g, root, eta, t_max);
        let oracle = reference_explore(&g, root, eta, t_max);

        assert_eq!(tree.kappa(), oracle.nodes.len(), "instance {i}");
        for (id, node) in tree.nodes().iter().enumerate() {
            let (mark, parent, slot, height, weight) = oracle.nodes[id];
            assert_eq!(node.mark, mark, "instance {i} node {id}");
            assert_eq!(node.parent, parent, "instance {i} node {id}");
            assert_eq!(node.slot, slot, "instance {i} node {id}");
            assert_eq!(node.height, height, "instance {i} node {id}");
            assert_eq!(
                node.weight.to_bits(),
                weight.to_bits(),
                "instance {i} node {id}"
            );
            assert_eq!(tree.children_of(id), oracle.children[id].as_slice(), "instance {i}");
        }
        let dups: Vec<(usize, u32, u32)> = tree
            .duplicate_arrivals
            .iter()
            .map(|d| (d.parent, d.slot, d.mark))
            .collect();
        assert_eq!(dups, oracle.duplicates, "instance {i}");
    }
}

// ---------------------------------------------------------------------------
// In-neighborhoods
// ---------------------------------------------------------------------------

/// Reverse exploration must agree with the forward-reachability oracle on
/// the vertex set, the edge count, and the tree verdict; levels must be the
/// successive differences of the growing balls.
#[test]
fn in_neighborhoods_match_forward_reachability() {
    for i in 0..24u64 {
        let n = 30 + (i as usize * 11) % 61;
        let t = (i % 4) as u32;
        let g = if i % 2 == 0 {
            random_dcm(n, 2, 5, 400 + i)
        } else {
            random_ocm(n, 2, 5, 400 + i)
        };
        let v = ((i * 13) % n as u64) as u32;
        let hood = explore_in_neighborhood(&g, v, t);
        let (vertices, edges, is_tree) = common::reverse_ball_oracle(&g, v, t);

        let mut lib_vertices = BTreeSet::new();
        for level in hood.levels() {
            assert!(level.windows(2).all(|w| w[0] < w[1]), "sorted, distinct");
            for &x in level {
                assert!(lib_vertices.insert(x), "levels must be disjoint");
            }
        }
        assert_eq!(hood.levels()[0], vec![v]);
        assert_eq!(hood.levels().len() as u32, t + 1);
        assert_eq!(lib_vertices, vertices, "instance {i}");
        assert_eq!(hood.size(), vertices.len());
        assert_eq!(hood.edges(), edges as u64, "instance {i}");
        assert_eq!(hood.is_tree(), is_tree, "instance {i}");

        // Level k is exactly ball(k) minus ball(k-1).
        let mut prev = BTreeSet::new();
        for (k, level) in hood.levels().iter().enumerate() {
            let ball_k = common::reverse_ball_oracle(&g, v, k as u32).0;
            let fresh: BTreeSet<u32> = ball_k.difference(&prev).copied().collect();
            assert_eq!(
                level.iter().copied().collect::<BTreeSet<u32>>(),
                fresh,
                "instance {i} level {k}"
            );
            prev = ball_k;
        }
    }
}

// ---------------------------------------------------------------------------
// Path counting
// ---------------------------------------------------------------------------

/// Walk counts into an annulus must equal sums of adjacency-matrix powers
/// (with multiplicity), for the tree root and for unrelated starts.
#[test]
fn annulus_path_counts_match_matrix_powers() {
    for seed in [21u64, 22, 23] {
        let n = 80;
        let g = random_dcm(n, 2, 4, seed);
        let root = ((seed * 19) % n as u64) as u32;
        let tree = explore_out_tree(&g, root, 0.3, 2);
        let annulus = tree.annulus(2);
        assert!(!annulus.is_empty(), "seed {seed}: want a non-trivial annulus");

        let mut a = vec![vec![0u64; n]; n];
        for x in 0..n as u32 {
            for &y in g.out_neighbors(x) {
                a[x as usize][y as usize] += 1;
            }
        }
        for x in [root, (root + 13) % n as u32, (root + 29) % n as u32] {
            for u in 0..=3u32 {
                let mut row = vec![0u64; n];
                row[x as usize] = 1;
                let mut expected = 0u64;
                for step in 0..=u {
                    expected += annulus.iter().map(|&y| row[y as usize]).sum::<u64>();
                    if step < u {
                        let mut next = vec![0u64; n];
                        for (i, &c) in row.iter().enumerate() {
                            if c > 0 {
                                for (j, &mult) in a[i].iter().enumerate() {
                                    next[j] += c * mult;
                                }
                            }
                        }
                        row = next;
                    }
                }
                assert_eq!(
                    path_annulus_intersections(&g, x, &annulus, u),
                    expected,
                    "seed {seed} start {x} horizon {u}"
                );
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Tree-likeness census
// ---------------------------------------------------------------------------

/// At the census depth every tree-like ball has full cardinality, so the
/// census must equal a count of breadth-first set sizes.
#[test]
fn census_counts_full_cardinality_balls() {
    for (which, model) in [Model::Dcm, Model::Ocm].into_iter().enumerate() {
        let n = 1100;
        let seq = DegreeSequence::regular(model, n, 2).unwrap();
        let g = sample_digraph(&seq, 3000 + which as u64).unwrap();
        let census = tree_like_vertices(&g);
        assert_eq!(census.depth, 2, "ln(1100) / (10 ln 2) rounds up to 2");
        assert_eq!(census.n, n);

        let full = 1 + 2 + 4;
        let mut expected = 0usize;
        for v in 0..n as u32 {
            let mut walks: Vec<u32> = vec![v];
            let mut frontier = vec![v];
            for _ in 0..2 {
                let mut next = Vec::new();
                for &u in &frontier {
                    for &w in g.out_neighbors(u) {
                        walks.push(w);
                        next.push(w);
                    }
                }
                frontier = next;
            }
            let distinct: BTreeSet<u32> = walks.iter().copied().collect();
            // A ball is a tree exactly when no walk endpoint repeats.
            if distinct.len() == walks.len() {
                assert_eq!(walks.len(), full);
                expected += 1;
            }
        }
        assert_eq!(census.tree_like, expected, "model {model:?}");
        assert!((census.fraction() - expected as f64 / n as f64).abs() < 1e-15);
    }
}

// ---------------------------------------------------------------------------
// Measure decomposition and the singularity table
// ---------------------------------------------------------------------------

/// The normalized series head and its residual must match a dense
/// recomputation, stay under the mass ceiling, and refuse horizons past the
/// decomposition window.
#[test]
fn measure_split_matches_dense_series() {
    let n = 60;
    let g = random_dcm(n, 2, 5, 77);
    let kernel = TransitionKernel::from_digraph(&g);
    let lambda = ProbVector::new(common::random_lambda(&mut stream_rng(78), n)).unwrap();
    let alpha = 0.25;
    let params = WalkParams::new(alpha, lambda.clone()).unwrap();
    let pi0 = ProbVector::uniform(n);
    let (t, eta, t_ent) = (2u64, 0.3f64, 8.0f64);

    let split = mu_lambda_decomposition(&kernel, &params, t, eta, t_ent, &pi0, 1e-13).unwrap();
    assert_eq!(split.cut, 3, "floor(0.7 * 8) - 2");
    assert!((split.a - (1.0 - 0.75f64.powi(4))).abs() < 1e-15);

    let p = common::dense_kernel(&g);
    let mut dense_mu = vec![0.0; n];
    let mut head = common::dense_evolve(&p, lambda.as_slice(), t);
    let mut coeff = alpha;
    for _ in 0..=split.cut {
        for (m, &h) in dense_mu.iter_mut().zip(&head) {
            *m += coeff * h;
        }
        head = common::dense_apply(&p, &head);
        coeff *= 1.0 - alpha;
    }
    for m in dense_mu.iter_mut() {
        *m /= split.a;
    }
    assert!(common::tv_slices(split.mu_lambda.as_slice(), &dense_mu) < 1e-12);

    let pi = common::dense_pagerank(&p, alpha, lambda.as_slice());
    let pushed = common::dense_evolve(&p, &pi, t);
    let mix: Vec<f64> = dense_mu
        .iter()
        .zip(pi0.as_slice())
        .map(|(&m, &q)| split.a * m + (1.0 - split.a) * q)
        .collect();
    let dense_residual = common::tv_slices(&pushed, &mix);
    assert!((split.residual - dense_residual).abs() < 1e-10);
    assert!(split.residual <= split.mass_bound);
    assert!((split.mass_bound - 0.75f64.powi(4)).abs() < 1e-15);

    match mu_lambda_decomposition(&kernel, &params, 4, eta, t_ent, &pi0, 1e-13) {
        Err(ExploreError::EtaTooLarge { t: 4, limit: 3, .. }) => {}
        other => panic!("want the window refusal, got {other:?}"),
    }
}

/// Each diagnostic row is a plain total-variation distance; recompute every
/// row densely and check the per-start rows never increase with time.
#[test]
fn singularity_rows_match_dense_distances() {
    let n = 50;
    let g = random_ocm(n, 2, 5, 555);
    let kernel = TransitionKernel::from_digraph(&g);
    let params = WalkParams::new(0.2, ProbVector::uniform(n)).unwrap();
    let xs = [0u32, 7, 23];
    let times = [0u64, 2, 5];
    let rows = singularity_diagnostic(&kernel, &params, &xs, &times, 1e-13).unwrap();
    assert_eq!(rows.len(), xs.len() * times.len());

    let p = common::dense_kernel(&g);
    let pi = common::dense_pagerank(&p, 0.2, &vec![1.0 / n as f64; n]);
    let mut by_start: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
    for row in &rows {
        assert!(xs.contains(&row.x) && times.contains(&row.t));
        let mut point = vec![0.0; n];
        point[row.x as usize] = 1.0;
        let spread = common::dense_evolve(&p, &point, row.t);
        let reference = common::dense_evolve(&p, &pi, row.t);
        let want = common::tv_slices(&spread, &reference);
        assert!(
            (row.tv - want).abs() < 1e-10,
            "start {} time {}: {} vs dense {}",
            row.x,
            row.t,
            row.tv,
            want
        );
        by_start.entry(row.x).or_default().push(row.tv);
    }
    for (x, series) in by_start {
        assert_eq!(series.len(), times.len());
        assert!(
            series.windows(2).all(|w| w[1] <= w[0] + 1e-12),
            "start {x}: distances must not increase"
        );
    }
}
