//! Tilings, canal systems and 4-coloring machinery on maximal planar
//! graphs (MPGs) and semi-MPGs.
//!
//! The crate is organized around a rotation-system representation of
//! sphere embeddings ([`embedding`]), an exhaustive isomorphism-free
//! generator of small MPGs ([`generator`]), red/black and RGB edge
//! tilings ([`tiling`]), the canal systems dual to a single-color
//! tiling together with grandness checks ([`canal`]), vertex colorings
//! and Kempe machinery ([`coloring`]), degree-statistics identities
//! ([`stats`]), and a desk-scale verification harness ([`harness`]).

pub mod canal;
pub mod coloring;
pub mod corpus;
pub mod embedding;
pub mod generator;
pub mod harness;
pub mod io;
pub mod stats;
pub mod tiling;

pub use embedding::{ClassifyOptions, Face, PlanarEmbedding, SemiMpg};
pub use tiling::{EdgeColor, Tiling, TilingMode};
