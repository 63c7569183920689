//! The multi-layer interference-alignment transmitter.
//!
//! Layer ℓ is shared by users `ℓ..=K`. Each alignment layer (`ℓ ≤ K−2`)
//! sends `N_ℓ` PAM symbols per user along the monomial dimensions
//! `V_{ℓ,n}`; the last two layers send one symbol each. A [`Scheme`] fixes
//! everything deterministic about a run at one power level.

pub mod constellation;
pub mod monomial;
pub mod plan;
pub mod transmit;

pub use constellation::Constellation;
pub use monomial::{
    cross_pairs, desired_set, interference_set, monomial_set, DimensionKind, DimensionSet, MAX_SET_SIZE,
};
pub use plan::{build_layer_plan, default_eps, LayerParams, LayerPlan};
pub use transmit::{build_transmit_config, power_normalizer, Scheme, TransmitConfig, TransmitLayer};
