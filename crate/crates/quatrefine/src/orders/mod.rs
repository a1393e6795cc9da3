//! Quaternion orders over the ring of integers of a real quadratic field:
//! lattice arithmetic, discriminants, maximal overorders, unit groups,
//! the catalogue of distinguished orders, and optimal embedding counts.

pub mod catalog;
pub mod disc;
pub mod embed;
pub mod lattice;
pub mod overorders;
pub mod units;

pub use catalog::{explicit_maximal_order, minimal_g_order, CatalogCase, CatalogError};
pub use embed::{cyclic_class_profile, optimal_embedding_counts};
pub use overorders::{maximal_overorders, maximal_overorders_with_budget, orbit_count};
pub use units::{unit_group, GroupTag, UnitError, UnitGroup};

pub use lattice::{
    dual_index, dual_lattice, lattice_basis_quats, lattice_from_quats, make_order,
    normalizer_membership, order_from_lattice, quat_to_rat_vec, rat_vec_to_quat, OrderError,
    QuatOrder, ZLattice,
};
