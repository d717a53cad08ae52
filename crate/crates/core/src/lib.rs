//! Dimer models on surfaces, zigzag consistency, perfect-matching polygons,
//! mirror duality and exceptional sequences on toric weak Fano surfaces.

pub mod catalog;
pub mod dimer;
pub mod fano;
pub mod format;
pub mod lattice;
pub mod lp;
pub mod matching;
pub mod mirror;
pub mod par;
pub mod render;
pub mod report;
pub mod synth;
pub mod toric;
pub mod zigzag;
