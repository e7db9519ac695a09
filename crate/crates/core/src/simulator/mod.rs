//! Monte Carlo evaluation of information-density events.

pub mod berry_esseen;
pub mod bounds;
pub mod codeword;
pub mod engine;
pub mod stream;

pub use berry_esseen::{berry_esseen_check, berry_esseen_report, BerryEsseenReport, BERRY_ESSEEN_CONSTANT};
pub use bounds::{
    achievability_bound, achievability_grid, converse_bound, converse_from_samples, converse_grid, default_gamma,
    BoundKind, BoundReport, MCEstimate,
};
pub use codeword::{representative_pair, type_class_index, CodewordPair};
pub use engine::{
    sample_infodensity_sums, sample_random_coding, sample_with_third_moments, AnSamples, RandomCodingSamples,
    ThirdMoments, SHARD_TRIALS,
};
pub use stream::{read_an_stream, write_an_stream, AnStream};
