//! Exact decision procedures and constructive certificates for majorization,
//! catalytic majorization, and convertibility with a bounded number of
//! injected auxiliary systems, over finite discrete probability
//! distributions with rational entries.
//!
//! Probabilities are exact rationals throughout; entropies are evaluated in
//! configurable-precision floating point. Every constructive claim (a
//! bistochastic reduction, a catalyst, an assembled witness) is re-verified
//! by exact rational arithmetic before being reported.

pub mod construct;
pub mod dist;
pub mod entropy;
pub mod error;
pub mod majorization;
pub mod real;
pub mod runs;
pub mod trumping;

pub use construct::ctrump::{
    build_ctrump_witness, decide_ctrump, replay_ctrump, CtrumpStatus, CtrumpVerdict,
    CtrumpWitness,
};
pub use construct::lambda::{lambda_max, LambdaVerdict};
pub use construct::SearchConfig;
pub use dist::{Dist, JointDist};
pub use entropy::{burg, entropy_gap, renyi, shannon, EntropyValue, Order};
pub use error::{Error, Result};
pub use majorization::{majorizes, witness, BistochasticWitness, MajorizationVerdict};
pub use real::{Precision, Real};
pub use runs::Pmf;
pub use trumping::{trumps, AlphaGrid, TrumpStatus, TrumpingVerdict};
