//! Exact rational polyhedra: H/V representations, vertices, faces,
//! distances, Minkowski sums and integration oracles.

mod distance;
mod faces;
mod hpoly;
mod integrate;
mod vpoly;

pub use distance::{kernel_distance_matrix, squared_distance};
pub use faces::{face_lattice, face_lattice_bruteforce, triangulation, volume, Face, FaceLattice};
#[allow(unused_imports)]
pub(crate) use hpoly::next_combination;
pub use hpoly::{HPolyhedron, Halfspace};
pub use integrate::{exp_divided_difference, integrate_exp_oracle, monte_carlo_exp, simplex_exp_integral, ExpIntegral};
pub use vpoly::{minkowski_sum, VPolytope};
