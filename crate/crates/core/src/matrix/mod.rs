//! Dense numerical primitives shared by every factorization method.

mod dense;
mod simplex;
mod volume;

pub use dense::{frobenius_norm, squared_distance, DenseMatrix, RandomSeed};
pub(crate) use dense::{axpy as axpy_into, dot, sq_dist};
pub use simplex::project_to_simplex;
pub use volume::{cayley_menger_squared_volume, cayley_menger_volume};
pub(crate) use simplex::project_in_place as simplex_project_in_place;
pub(crate) use volume::squared_volume_from_distances;
