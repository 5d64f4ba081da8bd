//! Sparse digraph storage and the two random samplers.
//!
//! Graphs are stored in compressed sparse row form over out-edges, with a
//! matching reverse (in-edge) index built once at construction. Multi-edges
//! and self-loops are kept as-is: the pairing sampler produces them with
//! positive probability, and the walk kernel merges parallel edges into
//! weights only when it is built.
//!
//! Sampling is deterministic given a seed. `sample_dcm` shuffles the array
//! of in-stub owners and reads off heads in tail order; `sample_ocm` draws,
//! for each vertex, a uniform set of distinct targets via a sparse partial
//! Fisher-Yates pass, so cost is O(sum of degrees) not O(n) per vertex.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use rand::Rng;
use thiserror::Error;

use crate::degree::{DegreeSequence, Model};
use crate::rng::{shuffle, stream_rng, substream};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("out-only model needs degree < n for distinct targets: vertex {vertex} has degree {degree} with n = {n}")]
    DegreeExceedsN { vertex: usize, degree: u32, n: usize },
    #[error("graph file declares model {found} but {expected} was requested")]
    ModelMismatch { expected: String, found: String },
    #[error("edge target {target} out of range for {n} vertices")]
    TargetOutOfRange { target: u32, n: usize },
    #[error("no simple graph found in {attempts} sampling attempts")]
    SimplicityRetriesExhausted { attempts: u32 },
    #[error("graph file line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// How a graph was produced, carried alongside the edges so downstream
/// artifacts can be traced back to a model, seed, and degree fingerprint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Provenance {
    pub model: Model,
    pub seed: u64,
    pub degree_hash: u64,
}

/// Directed multigraph in CSR form, plus a reverse index for in-neighbor
/// queries. Vertex ids are `u32`; edge order within a vertex's target list
/// is the tail order produced by the sampler (meaningful for tie-breaks).
#[derive(Debug, Clone)]
pub struct Digraph {
    out_start: Vec<usize>,
    targets: Vec<u32>,
    in_start: Vec<usize>,
    sources: Vec<u32>,
    provenance: Provenance,
}

impl Digraph {
    /// Builds from per-vertex target lists, preserving their order.
    pub fn from_adjacency(adj: Vec<Vec<u32>>, provenance: Provenance) -> Result<Self, GraphError> {
        let n = adj.len();
        let mut out_start = Vec::with_capacity(n + 1);
        out_start.push(0usize);
        let mut targets = Vec::new();
        for row in &adj {
            for &t in row {
                if t as usize >= n {
                    return Err(GraphError::TargetOutOfRange { target: t, n });
                }
                targets.push(t);
            }
            out_start.push(targets.len());
        }
        let (in_start, sources) = reverse_index(n, &out_start, &targets);
        Ok(Self {
            out_start,
            targets,
            in_start,
            sources,
            provenance,
        })
    }

    pub fn n(&self) -> usize {
        self.out_start.len() - 1
    }

    /// Total edge count with multiplicity.
    pub fn m(&self) -> usize {
        self.targets.len()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn out_degree(&self, v: u32) -> u32 {
        (self.out_start[v as usize + 1] - self.out_start[v as usize]) as u32
    }

    pub fn in_degree(&self, v: u32) -> u32 {
        (self.in_start[v as usize + 1] - self.in_start[v as usize]) as u32
    }

    /// Targets of v's out-edges, in tail order; repeats mark multi-edges.
    pub fn out_neighbors(&self, v: u32) -> &[u32] {
        &self.targets[self.out_start[v as usize]..self.out_start[v as usize + 1]]
    }

    /// Sources of v's in-edges, in ascending source order.
    pub fn in_neighbors(&self, v: u32) -> &[u32] {
        &self.sources[self.in_start[v as usize]..self.in_start[v as usize + 1]]
    }

    pub fn max_out_degree(&self) -> u32 {
        (0..self.n() as u32).map(|v| self.out_degree(v)).max().unwrap_or(0)
    }

    pub fn max_in_degree(&self) -> u32 {
        (0..self.n() as u32).map(|v| self.in_degree(v)).max().unwrap_or(0)
    }

    /// Writes `n m MODEL seed degree_hash` then one line per vertex with
    /// space-separated 0-based targets (empty lines for sinks).
    pub fn to_writer<W: Write>(&self, mut w: W) -> Result<(), GraphError> {
        writeln!(
            w,
            "{} {} {} {} {}",
            self.n(),
            self.m(),
            self.provenance.model.as_str(),
            self.provenance.seed,
            self.provenance.degree_hash
        )?;
        let mut line = String::new();
        for v in 0..self.n() as u32 {
            line.clear();
            for (i, t) in self.out_neighbors(v).iter().enumerate() {
                if i > 0 {
                    line.push(' ');
                }
                line.push_str(&t.to_string());
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn from_reader<R: BufRead>(r: R) -> Result<Self, GraphError> {
        let mut lines = r.lines();
        let header = lines.next().ok_or_else(|| GraphError::Parse {
            line: 1,
            message: "missing header".into(),
        })??;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(GraphError::Parse {
                line: 1,
                message: format!("expected 5 header fields, got {}", fields.len()),
            });
        }
        let n: usize = fields[0].parse().map_err(|e| GraphError::Parse {
            line: 1,
            message: format!("n: {e}"),
        })?;
        let m: usize = fields[1].parse().map_err(|e| GraphError::Parse {
            line: 1,
            message: format!("m: {e}"),
        })?;
        let model = Model::parse(fields[2]).ok_or_else(|| GraphError::Parse {
            line: 1,
            message: format!("unknown model {:?}", fields[2]),
        })?;
        let seed: u64 = fields[3].parse().map_err(|e| GraphError::Parse {
            line: 1,
            message: format!("seed: {e}"),
        })?;
        let degree_hash: u64 = fields[4].parse().map_err(|e| GraphError::Parse {
            line: 1,
            message: format!("degree_hash: {e}"),
        })?;
        let mut adj = Vec::with_capacity(n);
        for (idx, line) in lines.enumerate() {
            let line = line?;
            if adj.len() == n {
                if line.trim().is_empty() {
                    continue;
                }
                return Err(GraphError::Parse {
                    line: idx + 2,
                    message: "more vertex lines than declared".into(),
                });
            }
            let row: Result<Vec<u32>, _> = line
                .split_whitespace()
                .map(|s| {
                    s.parse::<u32>().map_err(|e| GraphError::Parse {
                        line: idx + 2,
                        message: format!("{e} in {s:?}"),
                    })
                })
                .collect();
            adj.push(row?);
        }
        if adj.len() != n {
            return Err(GraphError::Parse {
                line: adj.len() + 1,
                message: format!("declared {n} vertices, found {}", adj.len()),
            });
        }
        let graph = Self::from_adjacency(
            adj,
            Provenance {
                model,
                seed,
                degree_hash,
            },
        )?;
        if graph.m() != m {
            return Err(GraphError::Parse {
                line: 1,
                message: format!("declared {m} edges, found {}", graph.m()),
            });
        }
        Ok(graph)
    }
}

fn reverse_index(n: usize, out_start: &[usize], targets: &[u32]) -> (Vec<usize>, Vec<u32>) {
    let mut counts = vec![0usize; n + 1];
    for &t in targets {
        counts[t as usize + 1] += 1;
    }
    for i in 0..n {
        counts[i + 1] += counts[i];
    }
    let in_start = counts.clone();
    let mut cursor = counts;
    let mut sources = vec![0u32; targets.len()];
    for v in 0..n {
        for &t in &targets[out_start[v]..out_start[v + 1]] {
            sources[cursor[t as usize]] = v as u32;
            cursor[t as usize] += 1;
        }
    }
    (in_start, sources)
}

/// Uniform pairing of out-stubs to in-stubs: lay out one owner entry per
/// in-stub, shuffle, and read heads off in tail order.
pub fn sample_dcm(seq: &DegreeSequence, seed: u64) -> Result<Digraph, GraphError> {
    assert_eq!(seq.model(), Model::Dcm, "pairing sampler needs in-degrees");
    let in_degrees = seq.in_degrees().expect("validated at construction");
    let mut heads: Vec<u32> = Vec::with_capacity(seq.m() as usize);
    for (v, &d) in in_degrees.iter().enumerate() {
        heads.extend(std::iter::repeat(v as u32).take(d as usize));
    }
    let mut rng = stream_rng(seed);
    shuffle(&mut heads, &mut rng);
    let mut adj = Vec::with_capacity(seq.n());
    let mut next = 0usize;
    for &d in seq.out_degrees() {
        adj.push(heads[next..next + d as usize].to_vec());
        next += d as usize;
    }
    Digraph::from_adjacency(
        adj,
        Provenance {
            model: Model::Dcm,
            seed,
            degree_hash: seq.degree_hash(),
        },
    )
}

/// Per-vertex distinct uniform targets. Each vertex draws a uniform
/// injection of its out-stubs into the vertex set, using a partial
/// Fisher-Yates over a sparse displacement map so the per-vertex cost is
/// O(degree) and the scratch map is cleared between vertices.
pub fn sample_ocm(seq: &DegreeSequence, seed: u64) -> Result<Digraph, GraphError> {
    assert_eq!(seq.model(), Model::Ocm, "out-only sampler takes no in-degrees");
    let n = seq.n();
    for (vertex, &degree) in seq.out_degrees().iter().enumerate() {
        if degree as usize > n {
            return Err(GraphError::DegreeExceedsN { vertex, degree, n });
        }
    }
    let mut rng = stream_rng(seed);
    let mut displaced: HashMap<u32, u32> = HashMap::new();
    let mut adj = Vec::with_capacity(n);
    for &d in seq.out_degrees() {
        displaced.clear();
        let mut row = Vec::with_capacity(d as usize);
        for k in 0..d {
            // Swap a uniform pick from the untouched suffix into slot k of a
            // virtual 0..n array; `displaced` records only the moved entries.
            let j = rng.random_range(k..n as u32);
            let pick = *displaced.get(&j).unwrap_or(&j);
            let at_k = *displaced.get(&k).unwrap_or(&k);
            displaced.insert(j, at_k);
            row.push(pick);
        }
        adj.push(row);
    }
    Digraph::from_adjacency(
        adj,
        Provenance {
            model: Model::Ocm,
            seed,
            degree_hash: seq.degree_hash(),
        },
    )
}

/// Dispatches on the sequence's model.
pub fn sample_digraph(seq: &DegreeSequence, seed: u64) -> Result<Digraph, GraphError> {
    match seq.model() {
        Model::Dcm => sample_dcm(seq, seed),
        Model::Ocm => sample_ocm(seq, seed),
    }
}

/// Multi-edge and self-loop census for one realized graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimplicityReport {
    pub self_loops: usize,
    /// Edges beyond the first within each parallel class.
    pub multi_edges: usize,
}

impl SimplicityReport {
    pub fn is_simple(&self) -> bool {
        self.self_loops == 0 && self.multi_edges == 0
    }
}

pub fn inspect_simple(g: &Digraph) -> SimplicityReport {
    let mut self_loops = 0;
    let mut multi_edges = 0;
    let mut seen: Vec<u32> = Vec::new();
    for v in 0..g.n() as u32 {
        seen.clear();
        seen.extend_from_slice(g.out_neighbors(v));
        seen.sort_unstable();
        for (i, &t) in seen.iter().enumerate() {
            if t == v {
                self_loops += 1;
            }
            if i > 0 && seen[i - 1] == t {
                multi_edges += 1;
            }
        }
    }
    SimplicityReport {
        self_loops,
        multi_edges,
    }
}

/// Resamples with per-attempt sub-seeds until the realized graph is simple.
/// The conditional law is uniform over simple graphs with the given degrees.
pub fn sample_simple(
    seq: &DegreeSequence,
    seed: u64,
    max_attempts: u32,
) -> Result<Digraph, GraphError> {
    for attempt in 0..max_attempts {
        let g = sample_digraph(seq, substream(seed, attempt as u64))?;
        if inspect_simple(&g).is_simple() {
            return Ok(g);
        }
    }
    Err(GraphError::SimplicityRetriesExhausted {
        attempts: max_attempts,
    })
}
