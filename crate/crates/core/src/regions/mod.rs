//! Decomposition of truncated regions into pieces whose vertices move
//! affinely with the truncation parameters.

pub mod cones;
pub mod decompose;
pub mod frame;
pub mod polytopes;
pub mod refine;

pub use cones::{b_functional, in_c_eps, kappa_squared, pi_cones, Cone, ConeFamily, DistanceFunction};
pub use decompose::{
    build_system, check_affine, decompose, decompose_cell, partition_check, sign_cells, transport_vertices,
    well_situated_failures, AffinityReport, Decomposition, PartitionReport, RegionContext, RegionDescriptor, Situation,
    TransportedVertex,
};
pub use frame::{params, pi_forms, psi_pi, Frame, Params, RowKind, SymRow, SymbolicPolytope};
pub use polytopes::{face_census, face_map, r_prime, r_region, region_system, FaceCensus, FaceMap};
pub use refine::{
    closure_violations, fit_slice_integral, kernel_basis, refine, slice_exp_integral, slice_polytope, symbolic_slice,
    RefinedCell, Refinement, RegionView, SliceFamily, SliceFit,
};
