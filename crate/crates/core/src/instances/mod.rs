//! Concrete triples: the circle, the unitarized compacts, the iterated
//! construction over the circle and the even doubling.

pub mod circle;
pub mod compacts;
pub mod doubling;
pub mod podles;

pub use circle::{arc_distance, build_circle, CircleInstance};
pub use compacts::{
    build_compacts, build_gamma_j, check_axioms, AxiomEntry, AxiomStatus, AxiomsReport, CompactsInstance,
    RealStructure,
};
pub use doubling::{even_doubling, DoubledTriple};
pub use podles::{build_podles, off_diagonal_criterion, Membership, PodlesInstance, PodlesRelations};
