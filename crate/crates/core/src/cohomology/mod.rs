//! Group cohomology with coefficients in finite modules: the bar complex,
//! simplicial covers of `BG` and their Čech double complexes.

pub mod abelian;
pub mod bar;
pub mod complex;
pub mod cover;
pub mod double;
mod linalg;

pub use abelian::{
    all_actions, automorphisms, describe_factors, invariant_factors_from_table,
    invariant_factors_of, AbelianHom, ActionData, FiniteAbelianGroup, GAction, ModuleData,
};
pub use bar::{
    bar_differential, cohomology_group, cohomology_group_with, BarComplex, Cochain, GroupCohomology,
};
pub use complex::{Cohomology, Differential, Enumerated, LinearComplex, Term, ENUMERATION_LIMIT};
pub use cover::{CoverData, CoverLevel, CoverMap, SimplicialCover, SimplicialSet};
pub use double::{total_cohomology, Block, DoubleComplex, TotalCochain, TotalCohomology};
