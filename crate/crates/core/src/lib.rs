//! Compiler and analysis toolkit for linear quantum optical networks.
//!
//! The pipeline turns a `.qon` netlist of sources, sinks, cavities,
//! squeezers and beamsplitters into a linear QSDE state-space model
//! `(F, G, H, K)` and, for passive networks, the equivalent `(S, L, H)`
//! parameters `(S, N, M)`:
//!
//! ```text
//! netlist ─▶ digraph ─▶ structmat ─▶ compile ─▶ analysis
//! ```
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`). The aliases
//! at the crate root fix the scalar to `f64`; `*32` variants use `f32`.

pub mod analysis;
pub mod cli;
pub mod compile;
pub mod digraph;
pub mod error;
pub mod linalg;
pub mod model;
pub mod netlist;
pub mod scalar;
pub mod structmat;

pub use error::{Error, Result};
pub use netlist::{parse_netlist, serialize_netlist, validate, NetworkSpec};
pub use scalar::{CMatrix, Scalar};

pub type Network = compile::Network<f64>;
pub type Network32 = compile::Network<f32>;
pub type StateSpaceModel = model::StateSpaceModel<f64>;
pub type StateSpaceModel32 = model::StateSpaceModel<f32>;
pub type SlhModel = model::SlhModel<f64>;
pub type SlhModel32 = model::SlhModel<f32>;
pub type AdjacencyPartition = digraph::AdjacencyPartition<f64>;
pub type StructuralMatrices = structmat::StructuralMatrices<f64>;
pub type RealizabilityReport = analysis::RealizabilityReport<f64>;
pub type FrequencyResponse = analysis::FrequencyResponse<f64>;
