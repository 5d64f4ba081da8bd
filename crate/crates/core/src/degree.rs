//! Degree sequences for the two random-digraph models and the scalar
//! functionals of them that parameterize every experiment.
//!
//! Two models are supported. `Dcm` is the directed configuration model: an
//! out- and an in-degree sequence with equal sums, realized by a uniform
//! pairing of out-stubs to in-stubs. `Ocm` keeps only the out-degrees and
//! wires each vertex to distinct uniform targets. Everything downstream is
//! driven by a handful of quantities computed here:
//!
//! * `mu_in`, the in-degree profile (d-/m for `Dcm`, uniform for `Ocm`);
//! * the entropy `H = sum mu_in(x) ln d+_x` and entropic time `ln n / H`;
//! * `rho = sum_j mu_in(j)/d+_j` and the constant `C` governing the
//!   second-moment law of the weight martingale;
//! * `gamma_lambda = (n/2) sum_j (lambda_j - mu_in_j)^2`, the l2 distance
//!   controlling how well a start measure mimics `mu_in`.
//!
//! All logarithms are natural.

use std::io::{BufRead, Write};

use thiserror::Error;

use crate::prob::{neumaier_sum, ProbVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// Directed configuration model: uniform pairing of out- to in-stubs.
    Dcm,
    /// Out-configuration model: per-vertex distinct uniform targets.
    Ocm,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::Dcm => "DCM",
            Model::Ocm => "OCM",
        }
    }

    pub fn parse(s: &str) -> Option<Model> {
        match s {
            "DCM" => Some(Model::Dcm),
            "OCM" => Some(Model::Ocm),
            _ => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum DegreeError {
    #[error("degree sequences must be non-empty")]
    Empty,
    #[error("out sequence has {out} entries but in sequence has {in_count}")]
    LengthMismatch { out: usize, in_count: usize },
    #[error("out-degrees sum to {out_sum} but in-degrees sum to {in_sum}")]
    SumMismatch { out_sum: u64, in_sum: u64 },
    #[error("vertex {vertex} has degree {degree}; every degree must be at least 2")]
    MinDegree { vertex: usize, degree: u32 },
    #[error("the pairing model requires an in-degree sequence")]
    MissingInDegrees,
    #[error("the out-only model does not take an in-degree sequence")]
    UnexpectedInDegrees,
    #[error("limit profile is discontinuous at s = {s}")]
    DiscontinuityPoint { s: f64 },
    #[error("lambda has {lambda} entries for {n} vertices")]
    LambdaLength { lambda: usize, n: usize },
    #[error("degree file line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Validated degree data for one of the two models.
///
/// Invariants enforced at construction: sequences non-empty, every degree
/// at least 2 (so walks never stall and weights decay geometrically), and
/// for `Dcm` equal out/in sums. `Ocm` sequences never carry in-degrees.
#[derive(Debug, Clone)]
pub struct DegreeSequence {
    model: Model,
    out: Vec<u32>,
    in_: Option<Vec<u32>>,
    m: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct EntropicTime {
    /// Entropy of the walk increment under the in-degree profile.
    pub h: f64,
    /// ln n / h, in walk steps. Real-valued; callers round as needed.
    pub t_ent: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct VarianceLaw {
    /// Contraction factor of the second-moment recursion, in (0, 1/2].
    pub rho: f64,
    /// Scale constant: the martingale increment law is c*(1-rho)*rho^t.
    pub c: f64,
}

impl DegreeSequence {
    pub fn new(
        model: Model,
        out: Vec<u32>,
        in_degrees: Option<Vec<u32>>,
    ) -> Result<Self, DegreeError> {
        if out.is_empty() {
            return Err(DegreeError::Empty);
        }
        for (vertex, &degree) in out.iter().enumerate() {
            if degree < 2 {
                return Err(DegreeError::MinDegree { vertex, degree });
            }
        }
        let out_sum: u64 = out.iter().map(|&d| d as u64).sum();
        let in_ = match model {
            Model::Dcm => {
                let inn = in_degrees.ok_or(DegreeError::MissingInDegrees)?;
                if inn.len() != out.len() {
                    return Err(DegreeError::LengthMismatch {
                        out: out.len(),
                        in_count: inn.len(),
                    });
                }
                for (vertex, &degree) in inn.iter().enumerate() {
                    if degree < 2 {
                        return Err(DegreeError::MinDegree { vertex, degree });
                    }
                }
                let in_sum: u64 = inn.iter().map(|&d| d as u64).sum();
                if in_sum != out_sum {
                    return Err(DegreeError::SumMismatch { out_sum, in_sum });
                }
                Some(inn)
            }
            Model::Ocm => {
                if in_degrees.is_some() {
                    return Err(DegreeError::UnexpectedInDegrees);
                }
                None
            }
        };
        Ok(Self {
            model,
            out,
            in_,
            m: out_sum,
        })
    }

    /// d-regular sequence (out and, for the pairing model, in).
    pub fn regular(model: Model, n: usize, d: u32) -> Result<Self, DegreeError> {
        let out = vec![d; n];
        let in_ = match model {
            Model::Dcm => Some(vec![d; n]),
            Model::Ocm => None,
        };
        Self::new(model, out, in_)
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn n(&self) -> usize {
        self.out.len()
    }

    /// Total number of edges.
    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn mean_degree(&self) -> f64 {
        self.m as f64 / self.n() as f64
    }

    /// Maximum degree over all available sequences.
    pub fn delta(&self) -> u32 {
        let out_max = self.out.iter().copied().max().unwrap_or(0);
        let in_max = self
            .in_
            .as_ref()
            .map(|inn| inn.iter().copied().max().unwrap_or(0))
            .unwrap_or(0);
        out_max.max(in_max)
    }

    pub fn out_degrees(&self) -> &[u32] {
        &self.out
    }

    pub fn in_degrees(&self) -> Option<&[u32]> {
        self.in_.as_deref()
    }

    /// In-degree profile: d-_x/m for the pairing model, uniform otherwise.
    pub fn mu_in(&self) -> ProbVector {
        match (&self.in_, self.model) {
            (Some(inn), Model::Dcm) => {
                let m = self.m as f64;
                let weights = inn.iter().map(|&d| d as f64 / m).collect();
                ProbVector::with_tolerance(weights, 1e-9)
                    .expect("in-degree profile normalizes by construction")
            }
            _ => ProbVector::uniform(self.n()),
        }
    }

    /// Walk entropy and the entropic time ln n / H.
    pub fn entropic(&self) -> EntropicTime {
        let mu = self.mu_in();
        let terms: Vec<f64> = mu
            .as_slice()
            .iter()
            .zip(&self.out)
            .map(|(&w, &d)| w * (d as f64).ln())
            .collect();
        let h = neumaier_sum(&terms);
        EntropicTime {
            h,
            t_ent: (self.n() as f64).ln() / h,
        }
    }

    /// Contraction factor and scale constant of the second-moment law.
    pub fn rho_and_c(&self) -> VarianceLaw {
        let n = self.n() as f64;
        let mu = self.mu_in();
        let terms: Vec<f64> = mu
            .as_slice()
            .iter()
            .zip(&self.out)
            .map(|(&w, &d)| w / d as f64)
            .collect();
        let rho = neumaier_sum(&terms);
        let c = match self.model {
            Model::Dcm => {
                let m = self.m as f64;
                let inn = self.in_.as_ref().expect("pairing model has in-degrees");
                let sq: Vec<f64> = inn
                    .iter()
                    .zip(&self.out)
                    .map(|(&di, &do_)| {
                        let diff = di as f64 - do_ as f64;
                        diff * diff / (m * do_ as f64)
                    })
                    .collect();
                n / (m * (1.0 - rho)) * neumaier_sum(&sq)
            }
            Model::Ocm => (rho - 1.0 / n) / (1.0 - rho),
        };
        VarianceLaw { rho, c }
    }

    /// (n/2) * sum_j (lambda_j - mu_in_j)^2.
    pub fn gamma_lambda(&self, lambda: &ProbVector) -> Result<f64, DegreeError> {
        if lambda.len() != self.n() {
            return Err(DegreeError::LambdaLength {
                lambda: lambda.len(),
                n: self.n(),
            });
        }
        let mu = self.mu_in();
        let terms: Vec<f64> = lambda
            .as_slice()
            .iter()
            .zip(mu.as_slice())
            .map(|(&l, &u)| (l - u) * (l - u))
            .collect();
        Ok(self.n() as f64 / 2.0 * neumaier_sum(&terms))
    }

    /// FNV-1a over the model tag and the degree arrays; recomputable from a
    /// realized graph, which makes it a stable provenance fingerprint.
    pub fn degree_hash(&self) -> u64 {
        let mut h = Fnv::new();
        h.byte(match self.model {
            Model::Dcm => 1,
            Model::Ocm => 2,
        });
        for &d in &self.out {
            h.u32(d);
        }
        if let Some(inn) = &self.in_ {
            for &d in inn {
                h.u32(d);
            }
        }
        h.finish()
    }

    /// Writes the line-oriented degree file: a `model=` header, then one
    /// line per vertex (`out,in` for the pairing model, `out` otherwise).
    pub fn to_writer<W: Write>(&self, mut w: W) -> Result<(), DegreeError> {
        writeln!(w, "model={}", self.model.as_str())?;
        match &self.in_ {
            Some(inn) => {
                for (o, i) in self.out.iter().zip(inn) {
                    writeln!(w, "{o},{i}")?;
                }
            }
            None => {
                for o in &self.out {
                    writeln!(w, "{o}")?;
                }
            }
        }
        Ok(())
    }

    pub fn from_reader<R: BufRead>(r: R) -> Result<Self, DegreeError> {
        let mut lines = r.lines().enumerate();
        let header = lines
            .next()
            .ok_or_else(|| DegreeError::Parse {
                line: 1,
                message: "missing model header".into(),
            })?
            .1?;
        let model = header
            .strip_prefix("model=")
            .and_then(Model::parse)
            .ok_or_else(|| DegreeError::Parse {
                line: 1,
                message: format!("bad header {header:?}"),
            })?;
        let mut out = Vec::new();
        let mut in_ = Vec::new();
        for (idx, line) in lines {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let parse = |s: &str| {
                s.parse::<u32>().map_err(|e| DegreeError::Parse {
                    line: idx + 1,
                    message: format!("{e} in {s:?}"),
                })
            };
            match (model, line.split_once(',')) {
                (Model::Dcm, Some((o, i))) => {
                    out.push(parse(o.trim())?);
                    in_.push(parse(i.trim())?);
                }
                (Model::Dcm, None) => {
                    return Err(DegreeError::Parse {
                        line: idx + 1,
                        message: "pairing model needs out,in".into(),
                    })
                }
                (Model::Ocm, None) => out.push(parse(line.trim())?),
                (Model::Ocm, Some(_)) => {
                    return Err(DegreeError::Parse {
                        line: idx + 1,
                        message: "out-only model takes a single degree".into(),
                    })
                }
            }
        }
        let in_ = match model {
            Model::Dcm => Some(in_),
            Model::Ocm => None,
        };
        Self::new(model, out, in_)
    }
}

// ---------------------------------------------------------------------------
// Widespread start measures
// ---------------------------------------------------------------------------

pub const WIDESPREAD_DELTA: f64 = 0.1;
pub const WIDESPREAD_C1: f64 = 1.0;
pub const WIDESPREAD_C2: f64 = 4.0;

/// Diagnostics for the two-part spread criterion on a start measure: a
/// max-mass cap `max lambda <= c1 * n^(-1/2-delta)` and an l2 closeness to
/// uniform `(1/n) sum (1 - n lambda_j)^2 <= c2`.
#[derive(Debug, Clone, Copy)]
pub struct WidespreadReport {
    pub max_mass: f64,
    pub max_mass_bound: f64,
    pub ell2_statistic: f64,
    pub pass_max_mass: bool,
    pub pass_ell2: bool,
    pub delta: f64,
    pub c1: f64,
    pub c2: f64,
}

impl WidespreadReport {
    pub fn pass(&self) -> bool {
        self.pass_max_mass && self.pass_ell2
    }
}

pub fn widespread_report(lambda: &ProbVector, delta: f64, c1: f64, c2: f64) -> WidespreadReport {
    assert!(delta > 0.0 && delta <= 0.5, "delta must lie in (0, 1/2]");
    assert!(c1 > 0.0 && c2 > 0.0, "constants must be positive");
    let n = lambda.len() as f64;
    let max_mass = lambda.max_entry();
    let max_mass_bound = c1 * n.powf(-0.5 - delta);
    let terms: Vec<f64> = lambda
        .as_slice()
        .iter()
        .map(|&l| {
            let d = 1.0 - n * l;
            d * d
        })
        .collect();
    let ell2_statistic = neumaier_sum(&terms) / n;
    WidespreadReport {
        max_mass,
        max_mass_bound,
        ell2_statistic,
        pass_max_mass: max_mass <= max_mass_bound,
        pass_ell2: ell2_statistic <= c2,
        delta,
        c1,
        c2,
    }
}

// ---------------------------------------------------------------------------
// Limit shapes
// ---------------------------------------------------------------------------

/// Limit of alpha * t_ent: the three regimes have qualitatively different
/// profile shapes and mixing times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gamma {
    Zero,
    Finite(f64),
    Infinite,
}

/// Limiting distance profile at rescaled time `s > 0`.
///
/// * `Zero`: step function (1 below s = 1, 0 above) in entropic-time units.
/// * `Finite(g)`: `exp(-s)` while s < g, then 0, in 1/alpha units.
/// * `Infinite`: `exp(-s)` in 1/alpha units.
///
/// Errs exactly at a jump point, where the limit is direction-dependent.
pub fn limit_profile(gamma: Gamma, s: f64) -> Result<f64, DegreeError> {
    assert!(s > 0.0 && s.is_finite(), "rescaled time must be positive");
    match gamma {
        Gamma::Zero => {
            if s < 1.0 {
                Ok(1.0)
            } else if s > 1.0 {
                Ok(0.0)
            } else {
                Err(DegreeError::DiscontinuityPoint { s })
            }
        }
        Gamma::Finite(g) => {
            assert!(g > 0.0 && g.is_finite(), "finite gamma must be positive");
            if s < g {
                Ok((-s).exp())
            } else if s > g {
                Ok(0.0)
            } else {
                Err(DegreeError::DiscontinuityPoint { s })
            }
        }
        Gamma::Infinite => Ok((-s).exp()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeUnit {
    /// Multiples of the entropic time.
    EntropicTime,
    /// Multiples of 1/alpha.
    InverseAlpha,
}

/// Limiting epsilon-mixing time and its natural unit.
///
/// With `Finite(g)`, targets below `exp(-g)` are only reached at the jump
/// (one entropic time); larger targets are hit on the exponential ramp at
/// `(1/g) ln(1/eps)` entropic times. With `Infinite` the profile is a pure
/// exponential and the answer is `ln(1/eps)` teleport times.
pub fn limit_mixing_time(gamma: Gamma, eps: f64) -> (f64, TimeUnit) {
    assert!(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
    match gamma {
        Gamma::Zero => (1.0, TimeUnit::EntropicTime),
        Gamma::Finite(g) => {
            assert!(g > 0.0 && g.is_finite());
            if eps < (-g).exp() {
                (1.0, TimeUnit::EntropicTime)
            } else {
                ((1.0 / eps).ln() / g, TimeUnit::EntropicTime)
            }
        }
        Gamma::Infinite => ((1.0 / eps).ln(), TimeUnit::InverseAlpha),
    }
}

// ---------------------------------------------------------------------------

struct Fnv(u64);

impl Fnv {
    fn new() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }
    fn byte(&mut self, b: u8) {
        self.0 = (self.0 ^ b as u64).wrapping_mul(0x1_0000_0000_01b3);
    }
    fn u32(&mut self, v: u32) {
        for b in v.to_le_bytes() {
            self.byte(b);
        }
    }
    fn finish(&self) -> u64 {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_sequence_basics() {
        let seq = DegreeSequence::regular(Model::Dcm, 1000, 3).unwrap();
        assert_eq!(seq.n(), 1000);
        assert_eq!(seq.m(), 3000);
        assert_eq!(seq.delta(), 3);
        assert_eq!(seq.mean_degree(), 3.0);
    }

    #[test]
    fn rejects_bad_sequences() {
        assert!(matches!(
            DegreeSequence::new(Model::Dcm, vec![2, 3], Some(vec![3, 3])),
            Err(DegreeError::SumMismatch {
                out_sum: 5,
                in_sum: 6
            })
        ));
        for model in [Model::Dcm, Model::Ocm] {
            let in_ = matches!(model, Model::Dcm).then(|| vec![2, 2, 2, 1]);
            assert!(matches!(
                DegreeSequence::new(model, vec![1, 2, 2, 2], in_),
                Err(DegreeError::MinDegree {
                    vertex: 0,
                    degree: 1
                })
            ));
        }
        assert!(matches!(
            DegreeSequence::new(Model::Dcm, vec![2, 2], None),
            Err(DegreeError::MissingInDegrees)
        ));
        assert!(matches!(
            DegreeSequence::new(Model::Ocm, vec![2, 2], Some(vec![2, 2])),
            Err(DegreeError::UnexpectedInDegrees)
        ));
        assert!(matches!(
            DegreeSequence::new(Model::Ocm, vec![], None),
            Err(DegreeError::Empty)
        ));
    }

    #[test]
    fn mu_in_profiles() {
        let seq = DegreeSequence::new(Model::Dcm, vec![2, 4, 2, 4], Some(vec![2, 4, 2, 4])).unwrap();
        let mu = seq.mu_in();
        assert_eq!(mu.as_slice(), &[1.0 / 6.0, 1.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0]);
        let seq = DegreeSequence::regular(Model::Ocm, 4, 3).unwrap();
        assert_eq!(seq.mu_in().as_slice(), &[0.25; 4]);
    }

    #[test]
    fn entropic_time_values() {
        let seq = DegreeSequence::regular(Model::Dcm, 1000, 3).unwrap();
        let e = seq.entropic();
        assert!((e.h - 3.0f64.ln()).abs() < 1e-15);
        assert!((e.t_ent - 1000.0f64.ln() / 3.0f64.ln()).abs() < 1e-12);

        // Powers of two make the entropic time exactly log2 n.
        let seq = DegreeSequence::regular(Model::Ocm, 1024, 2).unwrap();
        assert!((seq.entropic().t_ent - 10.0).abs() < 1e-12);

        // Mixed two-vertex pairing sequence: H = (4/3) ln 2, t_ent = 3/4.
        let seq = DegreeSequence::new(Model::Dcm, vec![2, 4], Some(vec![4, 2])).unwrap();
        let e = seq.entropic();
        assert!((e.h - 4.0 / 3.0 * 2.0f64.ln()).abs() < 1e-15);
        assert!((e.t_ent - 0.75).abs() < 1e-15);
    }

    #[test]
    fn variance_law_constants() {
        let seq = DegreeSequence::regular(Model::Dcm, 100, 4).unwrap();
        let v = seq.rho_and_c();
        assert!((v.rho - 0.25).abs() < 1e-15);
        assert_eq!(v.c, 0.0);

        let seq = DegreeSequence::regular(Model::Ocm, 1000, 3).unwrap();
        let v = seq.rho_and_c();
        assert!((v.rho - 1.0 / 3.0).abs() < 1e-15);
        assert!((v.c - 0.4985).abs() < 1e-12);
    }

    #[test]
    fn gamma_lambda_values() {
        let n = 500;
        let seq = DegreeSequence::regular(Model::Ocm, n, 3).unwrap();
        assert_eq!(seq.gamma_lambda(&seq.mu_in()).unwrap(), 0.0);
        let g = seq.gamma_lambda(&ProbVector::dirac(n, 0)).unwrap();
        assert!((g - (n as f64 - 1.0) / 2.0).abs() < 1e-9);
        assert!(matches!(
            seq.gamma_lambda(&ProbVector::uniform(3)),
            Err(DegreeError::LambdaLength { lambda: 3, n: 500 })
        ));
    }

    #[test]
    fn widespread_uniform_and_dirac() {
        let n = 10_000;
        let r = widespread_report(&ProbVector::uniform(n), 0.4, 1.0, 1.0);
        assert!(r.pass_max_mass && r.pass_ell2 && r.pass());
        assert_eq!(r.ell2_statistic, 0.0);

        let r = widespread_report(&ProbVector::dirac(n, 7), WIDESPREAD_DELTA, 1.0, 4.0);
        assert!(!r.pass_max_mass);
        assert!(!r.pass());
    }

    #[test]
    fn widespread_partial_support() {
        // Uniform on the first 252 = ceil(10^2.4) vertices of n = 10^4.
        let n = 10_000;
        let k = 252;
        let mut w = vec![0.0; n];
        for e in w.iter_mut().take(k) {
            *e = 1.0 / k as f64;
        }
        let lam = ProbVector::with_tolerance(w, 1e-9).unwrap();
        let r = widespread_report(&lam, 0.1, 1.0, 10.0);
        let expect = (9748.0 * 9748.0 / 252.0 + 9748.0) / 1e4;
        assert!((r.ell2_statistic - expect).abs() < 1e-9);
        assert!(r.pass_max_mass, "1/252 is under 10^-1.5-ish cap");
        assert!(!r.pass_ell2, "statistic {} exceeds 10", r.ell2_statistic);
    }

    #[test]
    fn limit_profile_shapes() {
        assert_eq!(limit_profile(Gamma::Zero, 0.5).unwrap(), 1.0);
        assert_eq!(limit_profile(Gamma::Zero, 1.5).unwrap(), 0.0);
        assert!(matches!(
            limit_profile(Gamma::Zero, 1.0),
            Err(DegreeError::DiscontinuityPoint { .. })
        ));
        let v = limit_profile(Gamma::Finite(1.0), 0.5).unwrap();
        assert!((v - (-0.5f64).exp()).abs() < 1e-15);
        assert_eq!(limit_profile(Gamma::Finite(1.0), 1.5).unwrap(), 0.0);
        assert!(matches!(
            limit_profile(Gamma::Finite(2.0), 2.0),
            Err(DegreeError::DiscontinuityPoint { .. })
        ));
        let v = limit_profile(Gamma::Infinite, 0.7).unwrap();
        assert!((v - (-0.7f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn limit_mixing_points() {
        assert_eq!(limit_mixing_time(Gamma::Zero, 0.3), (1.0, TimeUnit::EntropicTime));
        // gamma = 2: eps = 0.5 sits on the ramp, eps = 0.1 < e^-2 hits the jump.
        let (t, u) = limit_mixing_time(Gamma::Finite(2.0), 0.5);
        assert!((t - 0.5 * 2.0f64.ln()).abs() < 1e-15);
        assert_eq!(u, TimeUnit::EntropicTime);
        assert_eq!(
            limit_mixing_time(Gamma::Finite(2.0), 0.1),
            (1.0, TimeUnit::EntropicTime)
        );
        let (t, u) = limit_mixing_time(Gamma::Infinite, 0.1);
        assert!((t - 10.0f64.ln()).abs() < 1e-15);
        assert_eq!(u, TimeUnit::InverseAlpha);
    }

    #[test]
    fn degree_file_round_trip() {
        let seq = DegreeSequence::new(Model::Dcm, vec![2, 4, 3], Some(vec![3, 3, 3])).unwrap();
        let mut buf = Vec::new();
        seq.to_writer(&mut buf).unwrap();
        let back = DegreeSequence::from_reader(&buf[..]).unwrap();
        assert_eq!(back.out_degrees(), seq.out_degrees());
        assert_eq!(back.in_degrees(), seq.in_degrees());
        assert_eq!(back.degree_hash(), seq.degree_hash());

        let seq = DegreeSequence::new(Model::Ocm, vec![2, 5, 4], None).unwrap();
        let mut buf = Vec::new();
        seq.to_writer(&mut buf).unwrap();
        let back = DegreeSequence::from_reader(&buf[..]).unwrap();
        assert_eq!(back.out_degrees(), seq.out_degrees());
        assert!(back.in_degrees().is_none());
    }
}
