//! Bimodule resolutions of `S#G`, the twisted-product bicomplex, its homology,
//! comparison maps with the bar resolution, and Hochschild cochains.

pub mod algebra;
pub mod bicomplex;
pub mod chain_map;
pub mod cochain;
pub mod free;
pub mod group_res;
pub mod homology;
pub mod koszul_res;

pub use algebra::{Basis, GradedSkewAlgebra};
pub use free::{BimoduleMap, Generator, GradedFreeBimodule, Term, TruncatedComplex};
pub use group_res::{bar_resolution_kg, periodic_resolution_cyclic};
pub use homology::{homology_dims, HomologyEntry, HomologyReport};
pub use koszul_res::{koszul_resolution, koszul_resolution_unchecked, KoszulResolution};
pub use bicomplex::{build_x, build_x_with, BiComplexX, BicomplexIdentity, BuildOptions};
pub use chain_map::{lift_chain_map, ChainMapReport, ChainMaps, TruncatedBar};
pub use cochain::{
    cocycle_check, coboundary3, deformation_maps, obstruction_eval, partial_derivative, Cochain2, Cochain3,
};
