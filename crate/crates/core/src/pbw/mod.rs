//! Filtered quadratic presentations over kG and the cohomological PBW conditions.

pub mod conditions;
pub mod koszul;
pub mod presentation;
pub mod quadratic;

pub use conditions::{
    certify_koszul, check_conditions, condition_j_holds, evaluate_conditions, overlap_space,
    uniqueness_check, Condition, ConditionVerdict,
};
pub use koszul::{koszul_check, koszul_component, symmetric_relations, KoszulReport};
pub use presentation::{
    normalize_relations, FilteredQuadraticPresentation, HomQuadraticPresentation, KoszulStatus,
};
pub use quadratic::QuadraticAlgebra;
