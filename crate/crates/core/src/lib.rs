//! Generalized degrees of freedom of the K-user asymmetric interference
//! channel, where every link into receiver k scales as `P^{α_k/2}`.
//!
//! - [`gdof`]: exact optimal sum GDoF, the weighted converse bounds and
//!   the bound family certifying it, and the finite-`n` achievable rate.
//! - [`scheme`]: the multi-layer interference-alignment transmitter
//!   (layer plan, PAM constellations, monomial dimension sets, power
//!   normalization).
//! - [`link_sim`]: finite-SNR simulation of that scheme with layer-peeling
//!   successive decoding, brute-force minimum distances and the residual
//!   interference bound.

pub mod alpha;
pub mod error;
pub mod exact;
pub mod gdof;
pub mod link_sim;
pub mod scheme;

pub use alpha::AlphaProfile;
pub use error::{Error, ErrorKind, Result};
pub use gdof::{
    achievable_gdof, achievable_gdof_limit, certify_family, converse_family, make_pair_bound, make_weighted_bound,
    optimal_sum_gdof, BoundFamily, WeightedBound,
};

/// Version tag embedded in every serialized output.
pub const SCHEMA_VERSION: &str = "mlia/1";
