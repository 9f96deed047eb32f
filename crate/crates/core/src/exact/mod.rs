//! Exact evaluation of permanents, multidimensional permanents, hafnians and
//! hyperhafnians, together with their Laplace-type expansions.

mod expansion;
mod hafnian;
mod matrix;
mod permanent;

pub use expansion::{hyperhafnian_via_expansion, multidim_permanent_via_laplace, permanent_via_laplace};
pub use hafnian::{
    block_embed_per_as_haf, hafnian, hafnian_by_definition, hyperhafnian, hyperhafnian_by_definition,
};
pub use matrix::{ComplexMatrix, ComplexTensor, MinorSelector, C64, SYMMETRY_TOLERANCE};
pub use permanent::{
    d_matrix, multidim_permanent, multidim_permanent_by_definition, multidim_permanent_minor,
    permanent, permanent_by_definition, permanent_d, permanent_minor,
};
