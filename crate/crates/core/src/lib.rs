//! Simulation core for quantum transfer learning with pre-trained embeddings:
//! density-matrix algebra, parameterized embeddings, Helstrom classifiers,
//! task dissimilarity, Rademacher complexity and excess-risk bounds.

// Negated comparisons are how inputs containing NaN get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod classifier;
pub mod complexity;
pub mod divergence;
pub mod embedding;
pub mod error;
pub mod pipeline;
pub mod qmath;
pub mod rng;
pub mod scalar;
pub mod tasks;
pub mod validation;

pub use classifier::Povm;
pub use divergence::TaskPair;
pub use embedding::{Embedding, EmbeddingAnsatz, EmbeddingTable, TableEmbedding, ThetaGrid, ThetaVector};
pub use error::{Error, Result};
pub use pipeline::{BoundConfig, ComplexityMode, DstMode};
pub use qmath::{CMatrix, DensityMatrix};
pub use scalar::Real;
pub use tasks::{Dataset, DiscreteTask, GaussianTaskSpec};

pub type DensityMatrix64 = DensityMatrix<f64>;
pub type DensityMatrix32 = DensityMatrix<f32>;
pub type CMatrix64 = CMatrix<f64>;
pub type CMatrix32 = CMatrix<f32>;
pub type Povm64 = Povm<f64>;
pub type Povm32 = Povm<f32>;
pub type DiscreteTask64 = DiscreteTask<f64>;
pub type DiscreteTask32 = DiscreteTask<f32>;
pub type ThetaGrid64 = ThetaGrid<f64>;
pub type ThetaGrid32 = ThetaGrid<f32>;
pub type EmbeddingTable64 = EmbeddingTable<f64>;
pub type EmbeddingTable32 = EmbeddingTable<f32>;
