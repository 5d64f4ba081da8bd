//! The seven experiment commands. Each one resolves what it needs from the
//! config, runs, writes CSV (plus text artifacts where noted), and returns
//! the list of files it produced.
//!
//! Determinism contract: given the same config file and `--seed`, every
//! output file is byte-identical regardless of thread count. All randomness
//! flows through fixed substreams of the master seed, Monte Carlo replicas
//! reduce in index order inside the library, and rows are emitted in config
//! order.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use rand::Rng;
use surfmix::degree::{limit_profile, widespread_report, DegreeSequence};
use surfmix::explore::{
    explore_out_tree, k_bound, singularity_diagnostic, tree_like_vertices, write_tree,
};
use surfmix::graph::{inspect_simple, sample_digraph, sample_simple, Digraph};
use surfmix::gw::{
    coupling_agreement, explore_in_neighborhood, lambda_l2_check, m_infinity_moments,
    variance_law_check,
};
use surfmix::prob::{tv, ProbVector};
use surfmix::rng::{stream_rng, substream};
use surfmix::walk::{
    distance_profile, evolve, mixing_time, stationary_pagerank, stationary_srw,
    write_profile_rows, DistanceProfile, ProfileContext, ProfileOptions, StartSet,
    TransitionKernel, WalkParams, PROFILE_CSV_HEADER,
};

use crate::config::{require_times, Config, ScenarioKind, StartSample};

/// Substream roles hanging off the master seed.
const GRAPH_STREAM: u64 = 10;
const START_STREAM: u64 = 11;
const ROOT_STREAM: u64 = 12;
/// Monte Carlo jobs use `MC_STREAM + job_index`.
const MC_STREAM: u64 = 20;

/// Two-sided z cutoff for Monte Carlo pass flags. Wide enough that a grid
/// of a few dozen honest checks fails with probability well under 1/100.
const Z_CUT: f64 = 3.5;

/// Mixing thresholds swept when the config leaves `epsilons` empty.
const DEFAULT_EPSILONS: &[f64] = &[0.25, 0.5, 0.75];

pub struct RunContext<'a> {
    pub config: &'a Config,
    pub hash: &'a str,
    pub seed: u64,
    pub out: &'a Path,
    pub command: &'static str,
}

impl RunContext<'_> {
    fn graph(&self, seq: &DegreeSequence) -> Result<Digraph> {
        let gseed = substream(self.seed, GRAPH_STREAM);
        let g = if self.config.simple {
            sample_simple(seq, gseed, self.config.max_attempts.unwrap_or(1000))?
        } else {
            sample_digraph(seq, gseed)?
        };
        Ok(g)
    }

    /// Starting vertices: the explicit list if given, otherwise a uniform
    /// sample without replacement (ascending, for stable output).
    fn starts(&self, n: usize) -> Result<Vec<u32>> {
        if !self.config.starts.is_empty() {
            for &x in &self.config.starts {
                ensure!((x as usize) < n, "start {x} out of range for n = {n}");
            }
            return Ok(self.config.starts.clone());
        }
        match self.config.start_sample {
            Some(StartSample::All) => Ok((0..n as u32).collect()),
            Some(StartSample::Count(k)) => {
                ensure!(k <= n, "cannot sample {k} distinct starts from {n} vertices");
                let mut rng = stream_rng(substream(self.seed, START_STREAM));
                let mut picked = rand::seq::index::sample(&mut rng, n, k).into_vec();
                picked.sort_unstable();
                Ok(picked.into_iter().map(|i| i as u32).collect())
            }
            None => bail!("provide `starts` or `start_sample`"),
        }
    }

    /// Opens `name` in the output directory and stamps it with the command,
    /// config hash, and master seed, so each file identifies its run.
    fn csv(&self, name: &str) -> Result<BufWriter<File>> {
        let path = self.out.join(name);
        let file =
            File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        let mut w = BufWriter::new(file);
        writeln!(
            w,
            "# command={} config={} seed={}",
            self.command, self.hash, self.seed
        )?;
        Ok(w)
    }

    fn epsilons(&self) -> Result<Vec<f64>> {
        let eps = if self.config.epsilons.is_empty() {
            DEFAULT_EPSILONS.to_vec()
        } else {
            self.config.epsilons.clone()
        };
        for &e in &eps {
            ensure!(e > 0.0 && e < 1.0, "mixing threshold {e} must lie in (0, 1)");
        }
        Ok(eps)
    }
}

/// Total variation between two evolved laws.
fn tv_between(a: &ProbVector, b: &ProbVector) -> f64 {
    tv(a, b).expect("laws on the same vertex set")
}

/// Sample a graph and persist it together with its summary statistics.
pub fn generate(ctx: &RunContext) -> Result<Vec<String>> {
    let seq = ctx.config.degree_sequence()?;
    let g = ctx.graph(&seq)?;
    let ent = seq.entropic();
    let law = seq.rho_and_c();
    let simplicity = inspect_simple(&g);

    let path = ctx.out.join("graph.txt");
    let mut w = BufWriter::new(
        File::create(&path).with_context(|| format!("creating {}", path.display()))?,
    );
    g.to_writer(&mut w)?;
    w.flush()?;

    let mut w = ctx.csv("generate.csv")?;
    writeln!(w, "quantity,value")?;
    writeln!(w, "n,{}", g.n())?;
    writeln!(w, "m,{}", g.m())?;
    writeln!(w, "model,{}", seq.model().as_str())?;
    writeln!(w, "graph_seed,{}", g.provenance().seed)?;
    writeln!(w, "degree_hash,{}", seq.degree_hash())?;
    writeln!(w, "simple_requested,{}", ctx.config.simple)?;
    writeln!(w, "self_loops,{}", simplicity.self_loops)?;
    writeln!(w, "multi_edges,{}", simplicity.multi_edges)?;
    writeln!(w, "max_out_degree,{}", g.max_out_degree())?;
    writeln!(w, "max_in_degree,{}", g.max_in_degree())?;
    writeln!(w, "mean_degree,{}", seq.mean_degree())?;
    writeln!(w, "degree_ceiling,{}", seq.delta())?;
    writeln!(w, "entropy,{}", ent.h)?;
    writeln!(w, "t_ent,{}", ent.t_ent)?;
    writeln!(w, "rho,{}", law.rho)?;
    writeln!(w, "variance_constant,{}", law.c)?;
    w.flush()?;
    Ok(vec!["graph.txt".into(), "generate.csv".into()])
}

/// Worst-case distance profile over the start set on an explicit time grid,
/// one curve per restart measure, plus mixing times when thresholds are set.
pub fn profile(ctx: &RunContext) -> Result<Vec<String>> {
    let cfg = ctx.config;
    let seq = cfg.degree_sequence()?;
    let ent = seq.entropic();
    let alpha = cfg.resolve_alpha(ent.t_ent)?;
    let times = require_times(&cfg.times)?;
    let g = ctx.graph(&seq)?;
    let kernel = TransitionKernel::from_digraph(&g);
    let starts = ctx.starts(g.n())?;
    let start_set = StartSet::MaxOver(starts);
    let opts = ProfileOptions {
        series_tol: cfg.series_tol(),
    };

    let mut profiles: Vec<DistanceProfile> = Vec::new();
    for (lambda, label) in cfg.lambdas(&seq)? {
        let params = WalkParams::new(alpha, lambda)?;
        let context = ProfileContext {
            start_label: start_set.label(),
            alpha,
            lambda_label: label,
            t_ent: ent.t_ent,
            n: g.n(),
            seed: ctx.seed,
        };
        profiles.push(distance_profile(
            &kernel, &params, &start_set, times, context, &opts,
        )?);
    }

    let mut w = ctx.csv("profile.csv")?;
    writeln!(w, "{PROFILE_CSV_HEADER}")?;
    for p in &profiles {
        write_profile_rows(&mut w, p)?;
    }
    w.flush()?;
    let mut outputs = vec!["profile.csv".into()];

    if !cfg.epsilons.is_empty() {
        let mut w = ctx.csv("mixing.csv")?;
        writeln!(w, "lambda,eps,t_mix,t_ent,ratio")?;
        for p in &profiles {
            for &eps in &ctx.epsilons()? {
                let t_mix = mixing_time(p, eps)?;
                let ratio = t_mix as f64 / ent.t_ent;
                writeln!(
                    w,
                    "{},{eps},{t_mix},{},{ratio}",
                    p.context.lambda_label, ent.t_ent
                )?;
            }
        }
        w.flush()?;
        outputs.push("mixing.csv".into());
    }
    Ok(outputs)
}

/// Rescaled-time window around the profile jump that the summary statistic
/// skips: the limit shape is discontinuous there, so finite-size runs are
/// not expected to match it.
const JUMP_WINDOW: f64 = 0.25;
/// Grid points closer to the jump than this are rejected outright.
const JUMP_CLEARANCE: f64 = 0.05;

/// Sweep the distance profile across a rescaled time grid and compare it
/// with the limiting shape for the configured teleport regime, then locate
/// mixing times on a dense grid.
pub fn scenario(ctx: &RunContext) -> Result<Vec<String>> {
    let cfg = ctx.config;
    let kind = cfg
        .scenario
        .context("scenario command needs a `scenario` section")?;
    let seq = cfg.degree_sequence()?;
    let ent = seq.entropic();
    let alpha = kind.alpha(ent.t_ent)?;
    let gamma = kind.gamma();
    let jump = kind.jump();

    ensure!(!cfg.s_grid.is_empty(), "provide a non-empty `s_grid`");
    for &s in &cfg.s_grid {
        ensure!(s > 0.0 && s.is_finite(), "rescaled time {s} must be positive");
        if let Some(j) = jump {
            ensure!(
                (s - j).abs() >= JUMP_CLEARANCE,
                "rescaled time {s} sits within {JUMP_CLEARANCE} of the profile jump at {j}; \
                 the limit is direction-dependent there"
            );
        }
    }

    let g = ctx.graph(&seq)?;
    let n = g.n();
    let kernel = TransitionKernel::from_digraph(&g);
    let starts = ctx.starts(n)?;
    let tol = cfg.series_tol();
    let walk_times: Vec<u64> = cfg
        .s_grid
        .iter()
        .map(|&s| kind.walk_time(s, ent.t_ent, alpha))
        .collect();
    let mut unique = walk_times.clone();
    unique.sort_unstable();
    unique.dedup();

    let lambdas = cfg.lambdas(&seq)?;
    let mut w = ctx.csv("scenario.csv")?;
    writeln!(w, "s,t,alpha,lambda,start,value,limit,prelimit,deviation")?;
    let mut max_dev_off_jump: f64 = 0.0;
    let mut included = 0usize;
    let mut excluded = 0usize;

    for (lambda, label) in &lambdas {
        let params = WalkParams::new(alpha, lambda.clone())?;
        let pi = stationary_pagerank(&kernel, &params, tol)?.pi;
        for &x in &starts {
            let mut v = ProbVector::dirac(n, x as usize);
            let mut t_now = 0u64;
            let mut at_time = vec![0.0f64; unique.len()];
            for (ui, &t) in unique.iter().enumerate() {
                while t_now < t {
                    v = evolve(&kernel, &params, &v);
                    t_now += 1;
                }
                at_time[ui] = tv_between(&v, &pi);
            }
            for (gi, &s) in cfg.s_grid.iter().enumerate() {
                let t = walk_times[gi];
                let ui = unique.binary_search(&t).expect("time came from this grid");
                let value = at_time[ui];
                let limit = limit_profile(gamma, s)?;
                let prelimit = (1.0 - alpha).powf(t as f64);
                let deviation = (value - limit).abs();
                writeln!(
                    w,
                    "{s},{t},{alpha},{label},{x},{value},{limit},{prelimit},{deviation}"
                )?;
                if jump.map_or(true, |j| (s - j).abs() > JUMP_WINDOW) {
                    max_dev_off_jump = max_dev_off_jump.max(deviation);
                    included += 1;
                } else {
                    excluded += 1;
                }
            }
        }
    }
    w.flush()?;

    // Mixing times against the same stationary laws, from a dense grid so
    // the first crossing is exact. The horizon covers the entropic cutoff
    // with slack and, when teleporting sets the scale, the geometric
    // ceiling for the smallest threshold.
    let epsilons = ctx.epsilons()?;
    let mut horizon = (3.0 * ent.t_ent).ceil() as u64;
    if !matches!(kind, ScenarioKind::GammaZero { .. }) {
        let eps_min = epsilons.iter().cloned().fold(1.0, f64::min);
        horizon = horizon.max(((1.0 / eps_min).ln() / alpha).ceil() as u64 + 1);
    }
    horizon = horizon.max(*unique.last().unwrap());
    let dense: Vec<u64> = (0..=horizon).collect();
    let opts = ProfileOptions { series_tol: tol };
    let start_set = StartSet::MaxOver(starts);

    let mut w = ctx.csv("mixing.csv")?;
    writeln!(w, "lambda,eps,t_mix,t_ent,ratio")?;
    for (lambda, label) in &lambdas {
        let params = WalkParams::new(alpha, lambda.clone())?;
        let context = ProfileContext {
            start_label: start_set.label(),
            alpha,
            lambda_label: label.clone(),
            t_ent: ent.t_ent,
            n,
            seed: ctx.seed,
        };
        let prof = distance_profile(&kernel, &params, &start_set, &dense, context, &opts)?;
        for &eps in &epsilons {
            let t_mix = mixing_time(&prof, eps)?;
            let ratio = t_mix as f64 / ent.t_ent;
            writeln!(w, "{label},{eps},{t_mix},{},{ratio}", ent.t_ent)?;
            // In the weak-teleport regime the cutoff pins every moderate
            // threshold to the entropic time once the graph is large.
            if matches!(kind, ScenarioKind::GammaZero { .. })
                && n >= 100_000
                && (0.2..=0.8).contains(&eps)
            {
                ensure!(
                    (0.8..=1.2).contains(&ratio),
                    "mixing time {t_mix} for eps = {eps} strays from the entropic time \
                     {} (ratio {ratio})",
                    ent.t_ent
                );
            }
        }
    }
    w.flush()?;

    let mut w = ctx.csv("summary.csv")?;
    writeln!(w, "quantity,value")?;
    writeln!(w, "regime,{}", kind.label())?;
    writeln!(w, "alpha,{alpha}")?;
    writeln!(w, "t_ent,{}", ent.t_ent)?;
    writeln!(w, "n,{n}")?;
    writeln!(w, "max_deviation_off_jump,{max_dev_off_jump}")?;
    writeln!(w, "rows_included,{included}")?;
    writeln!(w, "rows_excluded_near_jump,{excluded}")?;
    match jump {
        Some(j) => writeln!(w, "jump,{j}")?,
        None => writeln!(w, "jump,")?,
    }
    writeln!(w, "jump_window,{JUMP_WINDOW}")?;
    w.flush()?;

    Ok(vec!["scenario.csv".into(), "mixing.csv".into(), "summary.csv".into()])
}

/// Spread diagnostics for each restart measure: the two-part widespread
/// criterion, decay of `lambda P^t` toward the plain-walk stationary law,
/// the teleported stationary law's distance to it across an alpha grid, and
/// the in-profile pushed a fraction of the entropic time.
pub fn widespread(ctx: &RunContext) -> Result<Vec<String>> {
    let cfg = ctx.config;
    let seq = cfg.degree_sequence()?;
    let ent = seq.entropic();
    let g = ctx.graph(&seq)?;
    let kernel = TransitionKernel::from_digraph(&g);
    let tol = cfg.series_tol();
    let thresholds = cfg.widespread.unwrap_or_default();
    let pi0 = stationary_srw(&kernel, tol.max(1e-12), 200_000)?.pi;
    let lambdas = cfg.lambdas(&seq)?;

    let mut w = ctx.csv("widespread.csv")?;
    writeln!(w, "quantity,lambda,param,value")?;
    for (lambda, label) in &lambdas {
        let report = widespread_report(lambda, thresholds.delta, thresholds.c1, thresholds.c2);
        writeln!(w, "max_mass,{label},,{}", report.max_mass)?;
        writeln!(w, "max_mass_bound,{label},,{}", report.max_mass_bound)?;
        writeln!(w, "ell2_statistic,{label},,{}", report.ell2_statistic)?;
        writeln!(w, "ell2_bound,{label},,{}", report.c2)?;
        writeln!(w, "pass_max_mass,{label},,{}", report.pass_max_mass)?;
        writeln!(w, "pass_ell2,{label},,{}", report.pass_ell2)?;
        writeln!(w, "widespread,{label},,{}", report.pass())?;

        if !cfg.times.is_empty() {
            let times = require_times(&cfg.times)?;
            let pure = WalkParams::new(0.0, lambda.clone())?;
            let mut v = lambda.clone();
            let mut t_now = 0u64;
            for &t in times {
                while t_now < t {
                    v = evolve(&kernel, &pure, &v);
                    t_now += 1;
                }
                writeln!(w, "tv_pushed_vs_plain,{label},{t},{}", tv_between(&v, &pi0))?;
            }
        }
        for &alpha in &cfg.alphas {
            ensure!(
                alpha > 0.0 && alpha < 1.0,
                "contrast alpha {alpha} must lie in (0, 1)"
            );
            let params = WalkParams::new(alpha, lambda.clone())?;
            let pi = stationary_pagerank(&kernel, &params, tol)?.pi;
            writeln!(
                w,
                "tv_stationary_vs_plain,{label},{alpha},{}",
                tv_between(&pi, &pi0)
            )?;
        }
    }

    // In-profile proxy: push mu_in for a fraction of the entropic time.
    let frac = cfg.epsilon.unwrap_or(0.5);
    ensure!(frac > 0.0, "entropic fraction must be positive");
    let h = (frac * ent.t_ent).ceil() as u64;
    let mu = seq.mu_in();
    let pure = WalkParams::new(0.0, mu.clone())?;
    let mut v = mu;
    for _ in 0..h {
        v = evolve(&kernel, &pure, &v);
    }
    writeln!(w, "tv_in_profile_pushed,mu_in,{h},{}", tv_between(&v, &pi0))?;
    w.flush()?;
    Ok(vec!["widespread.csv".into()])
}

/// Distances `tv(delta_x P^t, pi P^t)` witnessing how singular the walk law
/// stays against its stationary start, plus the contrast between the
/// teleported stationary law and the plain-walk one.
pub fn singularity(ctx: &RunContext) -> Result<Vec<String>> {
    let cfg = ctx.config;
    let seq = cfg.degree_sequence()?;
    let ent = seq.entropic();
    let alpha = cfg.resolve_alpha(ent.t_ent)?;
    ensure!(alpha > 0.0, "singularity diagnostics need alpha > 0");
    let times = require_times(&cfg.times)?;
    let g = ctx.graph(&seq)?;
    let kernel = TransitionKernel::from_digraph(&g);
    let starts = ctx.starts(g.n())?;
    let tol = cfg.series_tol();
    let pi0 = stationary_srw(&kernel, tol.max(1e-12), 200_000)?.pi;

    let mut w = ctx.csv("singularity.csv")?;
    writeln!(w, "kind,lambda,x,t,value")?;
    for (lambda, label) in cfg.lambdas(&seq)? {
        let params = WalkParams::new(alpha, lambda)?;
        for point in singularity_diagnostic(&kernel, &params, &starts, times, tol)? {
            writeln!(
                w,
                "walk_vs_stationary,{label},{},{},{}",
                point.x, point.t, point.tv
            )?;
        }
        let pi = stationary_pagerank(&kernel, &params, tol)?.pi;
        writeln!(
            w,
            "stationary_vs_plain,{label},,,{}",
            tv_between(&pi, &pi0)
        )?;
    }
    w.flush()?;
    Ok(vec!["singularity.csv".into()])
}

fn z_score(estimate: f64, target: f64, se: f64) -> f64 {
    if se > 0.0 {
        (estimate - target) / se
    } else {
        0.0
    }
}

/// Monte Carlo checks of the branching-tree moment laws, one row per check.
pub fn martingale(ctx: &RunContext) -> Result<Vec<String>> {
    let cfg = ctx.config;
    let seq = cfg.degree_sequence()?;
    let mc = cfg
        .martingale
        .as_ref()
        .context("martingale command needs a `martingale` section")?;
    ensure!(mc.samples > 1, "need at least two Monte Carlo samples");
    let method = mc.method.into();
    let mut job: u64 = 0;
    let next_seed = |job: &mut u64| {
        let s = substream(ctx.seed, MC_STREAM + *job);
        *job += 1;
        s
    };

    let mut w = ctx.csv("martingale.csv")?;
    writeln!(
        w,
        "quantity,t,lambda,estimate,std_error,target,ceiling,z,samples,seed,pass"
    )?;

    for &t in &mc.variance_times {
        let seed = next_seed(&mut job);
        let chk = variance_law_check(&seq, t, mc.samples, seed, method);
        writeln!(
            w,
            "increment_second_moment,{t},,{},{},{},,{},{},{seed},{}",
            chk.estimate,
            chk.std_error,
            chk.target,
            chk.z,
            chk.samples,
            chk.z.abs() <= Z_CUT
        )?;
        writeln!(
            w,
            "increment_mean,{t},,{},{},0,,{},{},{seed},{}",
            chk.mean_delta,
            chk.mean_delta_se,
            z_score(chk.mean_delta, 0.0, chk.mean_delta_se),
            chk.samples,
            z_score(chk.mean_delta, 0.0, chk.mean_delta_se).abs() <= Z_CUT
        )?;
    }

    for l2 in &mc.l2 {
        let (lambda, label) = l2.lambda.resolve(&seq)?;
        for &t in &l2.times {
            let seed = next_seed(&mut job);
            let chk = lambda_l2_check(&seq, &lambda, t, mc.samples, seed, method)?;
            writeln!(
                w,
                "recentred_second_moment,{t},{label},{},{},{},{},{},{},{seed},{}",
                chk.estimate,
                chk.std_error,
                chk.closed_form,
                chk.bound,
                z_score(chk.estimate, chk.closed_form, chk.std_error),
                chk.samples,
                chk.pass
            )?;
        }
    }

    if let Some(depth) = mc.limit_depth {
        let seed = next_seed(&mut job);
        let report = m_infinity_moments(&seq, depth, mc.samples, seed, method)?;
        let mean_z = z_score(report.mean, 1.0, report.mean_se);
        writeln!(
            w,
            "limit_mean,{depth},,{},{},1,,{mean_z},{},{seed},{}",
            report.mean,
            report.mean_se,
            report.samples,
            mean_z.abs() <= Z_CUT
        )?;
        let var_z = z_score(report.variance, report.variance_target, report.variance_se);
        writeln!(
            w,
            "limit_variance,{depth},,{},{},{},,{var_z},{},{seed},{}",
            report.variance,
            report.variance_se,
            report.variance_target,
            report.samples,
            var_z.abs() <= Z_CUT
        )?;
    }

    if let Some(cj) = &mc.coupling {
        let seed = next_seed(&mut job);
        let report = coupling_agreement(&seq, cj.t, cj.graphs, seed)?;
        writeln!(
            w,
            "neighborhood_tree_failure,{},,{},{},,{},,{},{seed},{}",
            cj.t,
            report.fraction,
            report.ci_halfwidth,
            report.bound,
            report.samples,
            report.fraction <= report.bound + report.ci_halfwidth
        )?;
    }
    w.flush()?;
    Ok(vec!["martingale.csv".into()])
}

/// Grow the weight-floored exploration tree from a root, write it out, and
/// report its diagnostics together with the reverse neighborhood and the
/// graph-wide tree-likeness census.
pub fn tree(ctx: &RunContext) -> Result<Vec<String>> {
    let cfg = ctx.config;
    let seq = cfg.degree_sequence()?;
    let g = ctx.graph(&seq)?;
    let n = g.n();
    let eta = cfg.eta.context("tree command needs `eta` in (0, 1/2)")?;
    let t_max = cfg.t_max.context("tree command needs `t_max`")?;
    let root = match cfg.root {
        Some(r) => {
            ensure!((r as usize) < n, "root {r} out of range for n = {n}");
            r
        }
        None => stream_rng(substream(ctx.seed, ROOT_STREAM)).random_range(0..n as u32),
    };

    let tree = explore_out_tree(&g, root, eta, t_max);
    let path = ctx.out.join("tree.txt");
    let mut w = BufWriter::new(
        File::create(&path).with_context(|| format!("creating {}", path.display()))?,
    );
    writeln!(
        w,
        "# command={} config={} seed={}",
        ctx.command, ctx.hash, ctx.seed
    )?;
    write_tree(&mut w, &tree)?;
    w.flush()?;

    let depth = cfg.neighborhood_depth.unwrap_or(t_max);
    let hood = explore_in_neighborhood(&g, root, depth);
    let census = tree_like_vertices(&g);

    let mut w = ctx.csv("tree.csv")?;
    writeln!(w, "quantity,param,value")?;
    writeln!(w, "root,,{root}")?;
    writeln!(w, "eta,,{eta}")?;
    writeln!(w, "t_max,,{t_max}")?;
    writeln!(w, "expansion_floor,,{}", tree.w_min)?;
    writeln!(w, "nodes,,{}", tree.kappa())?;
    writeln!(
        w,
        "node_ceiling,,{}",
        (n as f64).powf(1.0 - eta * eta / 2.0)
    )?;
    writeln!(w, "duplicate_arrivals,,{}", tree.duplicate_arrivals.len())?;
    for h in 0..=t_max {
        writeln!(w, "annulus_size,{h},{}", tree.annulus(h).len())?;
    }
    for h in 0..=t_max {
        writeln!(
            w,
            "walk_in_tree_probability,{h},{}",
            tree.walk_in_tree_probability(h)
        )?;
    }
    writeln!(w, "expansion_bound,,{}", k_bound(seq.delta(), eta))?;
    writeln!(w, "in_depth,,{depth}")?;
    writeln!(w, "in_size,,{}", hood.size())?;
    writeln!(w, "in_edges,,{}", hood.edges())?;
    writeln!(w, "in_is_tree,,{}", hood.is_tree())?;
    for (k, level) in hood.levels().iter().enumerate() {
        writeln!(w, "in_level_size,{k},{}", level.len())?;
    }
    writeln!(w, "census_depth,,{}", census.depth)?;
    writeln!(w, "census_tree_like,,{}", census.tree_like)?;
    writeln!(w, "census_fraction,,{}", census.fraction())?;
    w.flush()?;
    Ok(vec!["tree.txt".into(), "tree.csv".into()])
}
