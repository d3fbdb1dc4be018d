//! Homotopy theory of finite digraphs as exact, testable algorithms.
//!
//! The crate provides:
//!
//! - validated digraphs, digraph maps and the box/Cartesian/relative-box
//!   products ([`digraph`]);
//! - the subdivision calculus on line digraphs: shrinking maps,
//!   standardization, minimal reduction and common subdivisions ([`lines`]);
//! - n-dimensional grid maps with the homotopy-group operations and the
//!   loop-digraph duality ([`grids`]);
//! - decision procedures and certificate search for one-step and multi-step
//!   F-homotopy, plus path components ([`homotopy`]);
//! - truncated reduced path/loop digraphs, pullbacks, mapping path digraphs
//!   and the connecting maps of the resulting exact sequence ([`spaces`]).
//!
//! Everything is exact: searches return machine-checkable certificates or an
//! explicit `Exhausted`, never an unproven "no".

pub mod digraph;
pub mod error;
pub mod grids;
pub mod homotopy;
pub mod lines;
pub mod sample;
pub mod spaces;

pub use digraph::{box_product, cartesian_product, relative_box_product};
pub use digraph::{Digraph, DigraphMap, DigraphPair, VertexName};
pub use error::{Error, Result};
pub use grids::{GridMap, GridShrinkingMap, LoopClassGridMap};
pub use homotopy::{
    f_homotopic, pi0, HomotopyCertificate, OneStepWitness, SearchBudget, SearchOutcome,
};
pub use lines::{
    common_subdivision, concatenate, enumerate_shrinking_maps, enumerate_shrinking_maps_up_to,
    invert, minimal_reduction, pad_to_length, standardize, subdivide, subdivision_is_one_step,
    CylinderCertificate, Dir, HomotopyDir, LineDigraph, PathKind, PathMap, ShrinkingMap,
};
