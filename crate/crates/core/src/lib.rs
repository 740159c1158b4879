//! Word embeddings from a factorized PPMI matrix.
//!
//! Training pairs come from a symmetric context window (optionally with
//! positional contexts) plus negative samples, and each pair pulls the dot
//! product of a word row and a context row towards the pair's PPMI. Training
//! runs either in memory or from an aggregated pair file on disk, in which
//! case only the marginal counts stay resident.

pub mod cli;
pub mod cooc;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod extmem;
pub mod hogwild;
pub mod negsampler;
pub mod ppmi;
pub mod seed;
pub mod trainer;
pub mod vectors;
pub mod vocab;

pub use cooc::{count_corpus, count_pairs, encode_context, stream_pairs, ContextId, ContextSpace, CoocStats, Marginals};
pub use corpus::Corpus;
pub use error::{Error, Result};
pub use negsampler::SamplerTable;
pub use ppmi::{ppmi_value, Ppmi};
pub use trainer::{global_loss, sgd_update, train_standard, EmbeddingPair, TrainConfig};
pub use vocab::{build_vocab, subsample_stream, Subsampler, Vocabulary};
