//! Geometric inhomogeneous random graphs (GIRGs), their non-geometric
//! Chung–Lu counterpart, clustering statistics, and a latent-dimension
//! test based on the clustering coefficient of narrow weight bands.
//!
//! The crate is organised around a pipeline: sample or ingest a graph
//! ([`GraphInstance`]), compute the band clustering statistic
//! ([`clustering::band_cc_plus`]), and feed it to the dimension test
//! ([`dimension::infer_dimension`]). Monte Carlo oracles in [`oracle`]
//! cross-check the distributional facts the test relies on.

#![forbid(unsafe_code)]

pub mod clustering;
pub mod dimension;
pub mod dist;
pub mod error;
pub mod generate;
pub mod geometry;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod rng;
pub mod special;
pub mod weights;

pub use clustering::BandStatistic;
pub use dimension::{DimensionVerdict, GeometryLabel};
pub use error::{Error, Result};
pub use generate::GirgParams;
pub use geometry::{NormOrder, TorusPoint};
pub use graph::{GraphInstance, WeightBand};
pub use oracle::OracleReport;
pub use rng::SeededStream;
pub use weights::WeightEstimate;

/// Schema tag written into every serialized artifact.
pub const SCHEMA_VERSION: &str = "girgdim/1";
