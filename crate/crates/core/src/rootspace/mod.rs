//! Root data, standard parabolics, projections, `Γ` indicators and weight sets.

mod datum;
mod gamma;
mod parabolic;
mod weights;

pub use datum::{build_root_datum, CartanKind, RootDatum};
pub use gamma::{gamma, hull_membership, hull_points, tau, tau_hat, GammaValue};
#[allow(unused_imports)]
pub(crate) use parabolic::require_contained;
pub use parabolic::Parabolic;
pub use weights::{multiple_of_rho, weights_of, RepSpec, WeightSet};
