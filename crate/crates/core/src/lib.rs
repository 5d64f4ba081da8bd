//! Sparse random digraphs with prescribed degrees, and the generalized
//! PageRank walk on them.
//!
//! The crate covers the full pipeline at desk scale:
//!
//! * [`degree`] — validated degree sequences, their entropy and variance
//!   constants, and the limit shapes the mixing profile converges to;
//! * [`graph`] — two samplers (uniform stub pairing, and per-vertex uniform
//!   distinct target selection) with reproducible provenance;
//! * [`walk`] — the teleporting transition kernel, exact stationary
//!   distributions via truncated geometric series, total-variation distance
//!   profiles, and the teleport cancellation identity;
//! * [`explore`] — weight-driven tree exploration of out-neighborhoods with
//!   certified size bounds, plus the decomposition of the teleport measure
//!   into a short-horizon part and a remainder;
//! * [`gw`] — marked branching trees mirroring local in-neighborhoods, the
//!   weight martingale along them, and Monte Carlo checks of its exact
//!   second-moment laws;
//! * [`prob`] / [`rng`] — dense probability vectors with compensated
//!   summation, and seedable, substreamable randomness.
//!
//! Everything downstream of a seed is deterministic: samplers derive
//! per-replica streams, and kernel application sums in a fixed order, so
//! results are bit-identical across runs and thread counts.

pub mod degree;
pub mod explore;
pub mod graph;
pub mod gw;
pub mod prob;
pub mod rng;
pub mod walk;

pub use degree::{
    DegreeError, DegreeSequence, EntropicTime, Gamma, Model, TimeUnit, VarianceLaw,
    WidespreadReport,
};
pub use explore::{
    ExplorationTree, ExploreError, MuLambdaDecomposition, SingularityPoint, TreeLikeCensus,
};
pub use graph::{Digraph, GraphError, Provenance, SimplicityReport};
pub use gw::{
    CouplingReport, GwError, GwSampler, InNeighborhood, L2Check, MarkedGwTree, McCheck,
    MomentReport, OffspringMethod, RootChoice,
};
pub use prob::{tv, ProbError, ProbVector};
pub use walk::{
    DistanceProfile, PageRankSeries, ProfileContext, StartSet, StationarySrw, TeleportIdentity,
    TransitionKernel, Trajectory, WalkError, WalkParams,
};
