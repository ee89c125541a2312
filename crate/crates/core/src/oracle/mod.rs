//! Brute-force references for the closed-form solvers.

pub mod coupling;
pub mod maps;
pub mod polytope;

pub use coupling::{coupling_information, coupling_oracle_theta, FrechetInterval};
pub use maps::{
    enumerate_maps, enumerate_maps_capped, LabelModel, MapEntry, MapTable, DEFAULT_MAP_CAP,
};
pub use polytope::{
    induced_joint, solve_bernoulli_vertex, solve_vertex, Budgets, LinearPolytope, VertexResult,
};
