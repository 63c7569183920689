//! Finite-SNR simulation of the alignment scheme: channel draws, received
//! samples, layer-peeling successive decoding, minimum distances and the
//! residual-interference bound.

pub mod channel;
pub mod codebook;
pub mod decode;
pub mod distance;
pub mod frame;
pub mod montecarlo;
pub mod receiver;
pub mod rng;

pub use channel::{sample_channel, ChannelRealization};
pub use codebook::{all_receivers, layer_codebook, receiver_codebooks, LayerCodebook, ReceiverCodebooks};
pub use decode::{decode_layer, decode_layer_exhaustive, dmin_bruteforce, dmin_exhaustive};
pub use distance::{cell_distances, least_squares_slope, noiseless_threshold, sweep_distances, DistanceRow};
pub use frame::{draw_frame, residual_interference, synthesize_frame, t_bound, transmit_configs, ReceivedFrame};
pub use montecarlo::{run_monte_carlo, CellReport, PowerPoint, SerRow, SimConfig, SimReport};
pub use receiver::{layer_observation, score, successive_decode, DecodeOutcome, LayerOutcome, ReceiverState};
