//! The teleporting walk: kernels, distributions at time t, stationary laws,
//! and distance-to-equilibrium profiles.
//!
//! A step of the walk from x goes to a uniform out-neighbor with probability
//! `1 - alpha` and to a fresh sample from the restart measure `lambda` with
//! probability `alpha`. The no-teleport kernel P merges parallel edges into
//! weights `m(x,y)/d+(x)`; vertices without out-edges hold still.
//!
//! # Determinism
//!
//! Kernels are stored column-oriented: for each target y we keep the list of
//! sources feeding it, in ascending source order. `apply` computes each
//! output entry as an independent compensated dot product in that fixed
//! order, so results are bit-identical regardless of how many threads rayon
//! distributes the columns over. Nothing downstream reduces across threads.

use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::Digraph;
use crate::prob::{tv_dense, CumulativeSampler, ProbError, ProbVector};

#[derive(Debug, Error)]
pub enum WalkError {
    #[error("alpha must lie in [0, 1), got {alpha}")]
    AlphaOutOfRange { alpha: f64 },
    #[error("the stationary series requires alpha > 0")]
    AlphaZero,
    #[error("row {row} sums to {sum}, not 1")]
    RowNotStochastic { row: usize, sum: f64 },
    #[error("row {row} holds negative weight {value}")]
    NegativeWeight { row: usize, value: f64 },
    #[error("edge target {target} out of range for {n} states")]
    TargetOutOfRange { target: u32, n: usize },
    #[error("no convergence after {sweeps} sweeps; residual {residual}")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("profile never reaches {eps} within horizon {horizon}")]
    HorizonTooShort { eps: f64, horizon: u64 },
    #[error(transparent)]
    Prob(#[from] ProbError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Row-stochastic kernel in column-compressed form.
///
/// `col_start[y]..col_start[y+1]` indexes the (source, weight) pairs of
/// edges into y, sources ascending. Row-stochasticity is an invariant:
/// constructors either derive rows from a graph or validate them.
#[derive(Debug, Clone)]
pub struct TransitionKernel {
    n: usize,
    col_start: Vec<usize>,
    src: Vec<u32>,
    weight: Vec<f64>,
}

/// Columns are processed in parallel chunks of this size; the value only
/// affects scheduling, never results.
const APPLY_CHUNK: usize = 8 * 1024;

impl TransitionKernel {
    /// Uniform-out-neighbor kernel of a digraph. Parallel edges merge into
    /// integer multiples of `1/d+`; vertices with no out-edges self-loop.
    pub fn from_digraph(g: &Digraph) -> Self {
        let n = g.n();
        let mut rows: Vec<Vec<(u32, f64)>> = Vec::with_capacity(n);
        let mut scratch: Vec<u32> = Vec::new();
        for x in 0..n as u32 {
            let targets = g.out_neighbors(x);
            if targets.is_empty() {
                rows.push(vec![(x, 1.0)]);
                continue;
            }
            scratch.clear();
            scratch.extend_from_slice(targets);
            scratch.sort_unstable();
            let d = targets.len() as f64;
            let mut row = Vec::new();
            let mut i = 0;
            while i < scratch.len() {
                let y = scratch[i];
                let mut mult = 1;
                while i + mult < scratch.len() && scratch[i + mult] == y {
                    mult += 1;
                }
                row.push((y, mult as f64 / d));
                i += mult;
            }
            rows.push(row);
        }
        Self::from_rows_unchecked(n, rows)
    }

    /// Builds from explicit rows of (target, weight) pairs. Every row must
    /// sum to 1 within `1e-9`; an empty row becomes a holding state.
    pub fn from_weighted_rows(n: usize, rows: Vec<Vec<(u32, f64)>>) -> Result<Self, WalkError> {
        assert_eq!(rows.len(), n, "one row per state");
        let mut checked = Vec::with_capacity(n);
        for (x, row) in rows.into_iter().enumerate() {
            if row.is_empty() {
                checked.push(vec![(x as u32, 1.0)]);
                continue;
            }
            let mut sum = 0.0;
            for &(t, w) in &row {
                if t as usize >= n {
                    return Err(WalkError::TargetOutOfRange { target: t, n });
                }
                if w < 0.0 {
                    return Err(WalkError::NegativeWeight { row: x, value: w });
                }
                sum += w;
            }
            if (sum - 1.0).abs() > 1e-9 {
                return Err(WalkError::RowNotStochastic { row: x, sum });
            }
            checked.push(row);
        }
        Ok(Self::from_rows_unchecked(n, checked))
    }

    fn from_rows_unchecked(n: usize, rows: Vec<Vec<(u32, f64)>>) -> Self {
        let mut counts = vec![0usize; n + 1];
        for row in &rows {
            for &(y, _) in row {
                counts[y as usize + 1] += 1;
            }
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let col_start = counts.clone();
        let mut cursor = counts;
        let nnz = col_start[n];
        let mut src = vec![0u32; nnz];
        let mut weight = vec![0.0f64; nnz];
        // Row-major fill leaves each column's sources in ascending order,
        // which pins the summation order used by `apply`.
        for (x, row) in rows.iter().enumerate() {
            for &(y, w) in row {
                let slot = cursor[y as usize];
                src[slot] = x as u32;
                weight[slot] = w;
                cursor[y as usize] += 1;
            }
        }
        Self {
            n,
            col_start,
            src,
            weight,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Left action `out = input P`. Each output entry is a compensated dot
    /// product over that column's fixed source order.
    pub fn apply(&self, input: &[f64], out: &mut [f64]) {
        assert_eq!(input.len(), self.n, "input dimension");
        assert_eq!(out.len(), self.n, "output dimension");
        out.par_chunks_mut(APPLY_CHUNK)
            .enumerate()
            .for_each(|(chunk, slot)| {
                let base = chunk * APPLY_CHUNK;
                for (off, o) in slot.iter_mut().enumerate() {
                    let y = base + off;
                    let mut sum = 0.0f64;
                    let mut comp = 0.0f64;
                    for k in self.col_start[y]..self.col_start[y + 1] {
                        let term = self.weight[k] * input[self.src[k] as usize];
                        let fresh = sum + term;
                        if sum.abs() >= term.abs() {
                            comp += (sum - fresh) + term;
                        } else {
                            comp += (term - fresh) + sum;
                        }
                        sum = fresh;
                    }
                    *o = sum + comp;
                }
            });
    }

    /// Convenience single step of the no-teleport chain.
    pub fn step(&self, v: &ProbVector) -> ProbVector {
        let mut out = vec![0.0; self.n];
        self.apply(v.as_slice(), &mut out);
        ProbVector::with_tolerance(out, 1e-9).expect("stochastic step preserves mass")
    }
}

/// Teleport probability and restart measure, validated once.
#[derive(Debug, Clone)]
pub struct WalkParams {
    alpha: f64,
    lambda: ProbVector,
}

impl WalkParams {
    pub fn new(alpha: f64, lambda: ProbVector) -> Result<Self, WalkError> {
        if !(0.0..1.0).contains(&alpha) {
            return Err(WalkError::AlphaOutOfRange { alpha });
        }
        Ok(Self { alpha, lambda })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn lambda(&self) -> &ProbVector {
        &self.lambda
    }
}

/// One step of the teleporting walk: `(1 - alpha) vP + alpha lambda`.
/// With `alpha = 0` this is exactly a no-teleport step.
pub fn evolve(kernel: &TransitionKernel, params: &WalkParams, v: &ProbVector) -> ProbVector {
    assert_eq!(params.lambda.len(), kernel.n(), "restart measure dimension");
    let mut out = vec![0.0; kernel.n()];
    kernel.apply(v.as_slice(), &mut out);
    let a = params.alpha;
    if a > 0.0 {
        for (o, &l) in out.iter_mut().zip(params.lambda.as_slice()) {
            *o = (1.0 - a) * *o + a * l;
        }
    }
    ProbVector::with_tolerance(out, 1e-9).expect("teleport step preserves mass")
}

#[derive(Debug, Clone)]
pub struct StationarySrw {
    pub pi: ProbVector,
    pub sweeps: usize,
    pub residual: f64,
}

/// Stationary law of the no-teleport chain reached from the uniform start.
///
/// Iterates the lazy chain `v <- (v + vP)/2` (same fixed points, but immune
/// to periodicity) and stops when `tv(vP, v) <= tol` for the original chain.
pub fn stationary_srw(
    kernel: &TransitionKernel,
    tol: f64,
    max_sweeps: usize,
) -> Result<StationarySrw, WalkError> {
    assert!(tol > 0.0, "tolerance must be positive");
    let n = kernel.n();
    let mut v = vec![1.0 / n as f64; n];
    let mut vp = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for sweep in 1..=max_sweeps {
        kernel.apply(&v, &mut vp);
        residual = tv_dense(&v, &vp);
        if residual <= tol {
            let pi = ProbVector::with_tolerance(vp, 1e-9)?;
            return Ok(StationarySrw {
                pi,
                sweeps: sweep,
                residual,
            });
        }
        for (a, &b) in v.iter_mut().zip(&vp) {
            *a = 0.5 * (*a + b);
        }
    }
    Err(WalkError::NoConvergence {
        sweeps: max_sweeps,
        residual,
    })
}

#[derive(Debug, Clone)]
pub struct PageRankSeries {
    pub pi: ProbVector,
    /// Number of powers summed before the closing term.
    pub terms: usize,
}

/// Stationary law of the teleporting walk via its restart-series expansion.
///
/// Sums `alpha (1-alpha)^k lambda P^k` for `k < K` and closes the tail with
/// `(1-alpha)^K lambda P^K`, so the result has exactly unit mass and total
/// variation error at most `(1-alpha)^(K+1) <= series_tol * (1-alpha)`.
pub fn stationary_pagerank(
    kernel: &TransitionKernel,
    params: &WalkParams,
    series_tol: f64,
) -> Result<PageRankSeries, WalkError> {
    assert!(
        series_tol > 0.0 && series_tol < 1.0,
        "series tolerance must lie in (0, 1)"
    );
    let alpha = params.alpha;
    if alpha == 0.0 {
        return Err(WalkError::AlphaZero);
    }
    assert_eq!(params.lambda.len(), kernel.n(), "restart measure dimension");
    let n = kernel.n();
    let terms = (series_tol.ln() / (1.0 - alpha).ln()).ceil().max(1.0) as usize;
    let mut cur = params.lambda.as_slice().to_vec();
    let mut next = vec![0.0; n];
    let mut acc = vec![0.0f64; n];
    let mut comp = vec![0.0f64; n];
    let mut coeff = alpha;
    for _ in 0..terms {
        add_scaled(&mut acc, &mut comp, &cur, coeff);
        kernel.apply(&cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
        coeff *= 1.0 - alpha;
    }
    // coeff is now alpha (1-alpha)^terms; the closing weight drops the alpha.
    add_scaled(&mut acc, &mut comp, &cur, coeff / alpha);
    for (a, c) in acc.iter_mut().zip(&comp) {
        *a += c;
    }
    let pi = ProbVector::with_tolerance(acc, 1e-9)?;
    Ok(PageRankSeries { pi, terms })
}

fn add_scaled(acc: &mut [f64], comp: &mut [f64], v: &[f64], coeff: f64) {
    for ((a, c), &x) in acc.iter_mut().zip(comp.iter_mut()).zip(v) {
        let term = coeff * x;
        let fresh = *a + term;
        if a.abs() >= term.abs() {
            *c += (*a - fresh) + term;
        } else {
            *c += (term - fresh) + *a;
        }
        *a = fresh;
    }
}

/// Which starting points a profile ranges over.
#[derive(Debug, Clone)]
pub enum StartSet {
    One(u32),
    /// Worst case over the listed starts.
    MaxOver(Vec<u32>),
}

impl StartSet {
    fn starts(&self) -> Vec<u32> {
        match self {
            StartSet::One(x) => vec![*x],
            StartSet::MaxOver(xs) => xs.clone(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            StartSet::One(x) => x.to_string(),
            StartSet::MaxOver(xs) => format!("max_over_{}", xs.len()),
        }
    }
}

/// Metadata carried along with a profile into CSV output.
#[derive(Debug, Clone)]
pub struct ProfileContext {
    pub start_label: String,
    pub alpha: f64,
    pub lambda_label: String,
    pub t_ent: f64,
    pub n: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct DistanceProfile {
    pub times: Vec<u64>,
    pub values: Vec<f64>,
    pub context: ProfileContext,
}

#[derive(Debug, Clone, Copy)]
pub struct ProfileOptions {
    /// Tail tolerance for the stationary series.
    pub series_tol: f64,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        Self { series_tol: 1e-12 }
    }
}

/// Float slack absorbing series truncation and accumulated rounding in the
/// profile guarantees checked below.
const PROFILE_SLACK: f64 = 1e-9;

/// Total-variation distance to the stationary law at the requested times
/// (strictly increasing), maximized over the start set.
///
/// Two facts about these profiles hold with probability one, so they are
/// asserted rather than returned: the distance never exceeds
/// `(1 - alpha)^t`, and it is non-increasing in t.
pub fn distance_profile(
    kernel: &TransitionKernel,
    params: &WalkParams,
    starts: &StartSet,
    times: &[u64],
    context: ProfileContext,
    opts: &ProfileOptions,
) -> Result<DistanceProfile, WalkError> {
    assert!(!times.is_empty(), "need at least one time point");
    assert!(
        times.windows(2).all(|w| w[0] < w[1]),
        "times must be strictly increasing"
    );
    let pi = if params.alpha == 0.0 {
        // No teleporting: the reference is the plain-walk stationary law.
        stationary_srw(kernel, opts.series_tol.max(1e-12), 200_000)?.pi
    } else {
        stationary_pagerank(kernel, params, opts.series_tol)?.pi
    };
    let n = kernel.n();
    let mut values = vec![0.0f64; times.len()];
    for x in starts.starts() {
        assert!((x as usize) < n, "start {x} out of range");
        let mut v = ProbVector::dirac(n, x as usize);
        let mut t_now = 0u64;
        for (i, &t) in times.iter().enumerate() {
            while t_now < t {
                v = evolve(kernel, params, &v);
                t_now += 1;
            }
            let d = tv_dense(v.as_slice(), pi.as_slice());
            let bound = (1.0 - params.alpha).powf(t as f64);
            assert!(
                d <= bound + PROFILE_SLACK,
                "distance {d} at t = {t} exceeds geometric bound {bound}"
            );
            if d > values[i] {
                values[i] = d;
            }
        }
    }
    for w in values.windows(2) {
        assert!(
            w[1] <= w[0] + PROFILE_SLACK,
            "profile must be non-increasing: {} then {}",
            w[0],
            w[1]
        );
    }
    Ok(DistanceProfile {
        times: times.to_vec(),
        values,
        context,
    })
}

/// First grid time at which the profile is within `eps` of stationarity.
///
/// On a dense grid `0, 1, ..., T` the geometric bound makes
/// `ceil(ln(1/eps) / alpha)` an unconditional ceiling for the answer, so it
/// is asserted whenever the grid can resolve it.
pub fn mixing_time(profile: &DistanceProfile, eps: f64) -> Result<u64, WalkError> {
    assert!(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
    let hit = profile
        .times
        .iter()
        .zip(&profile.values)
        .find(|(_, &v)| v <= eps)
        .map(|(&t, _)| t);
    let t = match hit {
        Some(t) => t,
        None => {
            return Err(WalkError::HorizonTooShort {
                eps,
                horizon: *profile.times.last().unwrap(),
            })
        }
    };
    let dense = profile
        .times
        .iter()
        .enumerate()
        .all(|(i, &tt)| tt == i as u64);
    if dense && profile.context.alpha > 0.0 {
        let ceiling = ((1.0 / eps).ln() / profile.context.alpha).ceil() as u64;
        if ceiling <= *profile.times.last().unwrap() {
            assert!(
                t <= ceiling,
                "mixing time {t} exceeds teleport ceiling {ceiling}"
            );
        }
    }
    Ok(t)
}

/// Both sides of the exact contraction identity
/// `tv(walk at t, pi) = (1-alpha)^t * tv(no-teleport walk at t, pi P^t)`.
#[derive(Debug, Clone, Copy)]
pub struct TeleportIdentity {
    pub left: f64,
    pub right: f64,
    pub residual: f64,
}

/// Evaluates the identity from start x at time t. The two sides are
/// computed along entirely different routes (teleporting evolution versus
/// two no-teleport evolutions), so a small residual is strong evidence
/// both are correct.
pub fn verify_teleport_identity(
    kernel: &TransitionKernel,
    params: &WalkParams,
    x: u32,
    t: u64,
    series_tol: f64,
) -> Result<TeleportIdentity, WalkError> {
    let n = kernel.n();
    assert!((x as usize) < n, "start {x} out of range");
    let pi = stationary_pagerank(kernel, params, series_tol)?.pi;
    let pure = WalkParams::new(0.0, params.lambda.clone())?;

    let mut walk = ProbVector::dirac(n, x as usize);
    let mut plain = ProbVector::dirac(n, x as usize);
    let mut pi_t = pi.clone();
    for _ in 0..t {
        walk = evolve(kernel, params, &walk);
        plain = evolve(kernel, &pure, &plain);
        pi_t = evolve(kernel, &pure, &pi_t);
    }
    let left = tv_dense(walk.as_slice(), pi.as_slice());
    let right =
        (1.0 - params.alpha).powf(t as f64) * tv_dense(plain.as_slice(), pi_t.as_slice());
    Ok(TeleportIdentity {
        left,
        right,
        residual: (left - right).abs(),
    })
}

/// A simulated path of the teleporting walk.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Visited vertices; `path[0]` is the start, length is `steps + 1`.
    pub path: Vec<u32>,
    /// Time of the first teleport move, if one happened.
    pub first_teleport: Option<u64>,
}

pub fn sample_trajectory<R: Rng>(
    g: &Digraph,
    params: &WalkParams,
    x: u32,
    steps: u64,
    rng: &mut R,
) -> Trajectory {
    assert_eq!(params.lambda.len(), g.n(), "restart measure dimension");
    assert!((x as usize) < g.n(), "start {x} out of range");
    let sampler = CumulativeSampler::new(&params.lambda);
    let mut path = Vec::with_capacity(steps as usize + 1);
    path.push(x);
    let mut here = x;
    let mut first_teleport = None;
    for step in 1..=steps {
        let teleport = params.alpha > 0.0 && rng.random::<f64>() < params.alpha;
        here = if teleport {
            if first_teleport.is_none() {
                first_teleport = Some(step);
            }
            sampler.index(rng.random::<f64>()) as u32
        } else {
            let out = g.out_neighbors(here);
            if out.is_empty() {
                here
            } else {
                out[rng.random_range(0..out.len())]
            }
        };
        path.push(here);
    }
    Trajectory {
        path,
        first_teleport,
    }
}

/// Column header matching `write_profile_rows`.
pub const PROFILE_CSV_HEADER: &str = "t,value,alpha,lambda_label,start,n,seed,t_ent";

/// Writes one row per time point with the context repeated on every row, so
/// several profiles can share a file and stay self-describing.
pub fn write_profile_rows<W: Write>(mut w: W, profile: &DistanceProfile) -> Result<(), WalkError> {
    let c = &profile.context;
    for (&t, &v) in profile.times.iter().zip(&profile.values) {
        writeln!(
            w,
            "{t},{v},{},{},{},{},{},{}",
            c.alpha, c.lambda_label, c.start_label, c.n, c.seed, c.t_ent
        )?;
    }
    Ok(())
}

/// Writes a profile as a standalone CSV document.
pub fn write_profile_csv<W: Write>(mut w: W, profile: &DistanceProfile) -> Result<(), WalkError> {
    writeln!(w, "{PROFILE_CSV_HEADER}")?;
    write_profile_rows(w, profile)
}
