//! Exponential-polynomial ("t-finite") functions.

mod fit;
mod function;
mod poly;

pub use fit::{fit_tfinite, FitReport, CONDITION_LIMIT};
pub use function::{constant_term, TFinite, TfEval};
pub use poly::{monomials, Coeff, Poly};
