//! Refined class numbers h(G) and refined type numbers t(G) of totally
//! definite quaternion algebras over real quadratic fields Q(√d), computed
//! in exact arithmetic.
//!
//! The refinement splits the classical class and type numbers by the
//! reduced unit group O^♭ = O^×/O_F^× of each order: for every finite
//! group G that can occur, h(G) counts conjugacy classes of maximal orders
//! with a given unit group up to F^×-equivalence and t(G) counts them up
//! to isomorphism. The crate builds the counts from explicitly presented
//! maximal orders, unit-group enumeration, optimal embedding numbers, and
//! class numbers of CM quadratic extensions, and cross-checks every total
//! against the Eichler class number formula and the mass formula.

pub mod cmorders;
pub mod orders;
pub mod quadclass;
pub mod quadfield;
pub mod quatalg;

pub use cmorders::{class_number_b, enumerate_b, r_s_pair, CMOrderDescriptor, CmFieldTag, CmOrderError};
pub use quadfield::{FieldElem, Rat};
pub use quatalg::{AlgebraInput, Quat, QuatAlgebra, StandardTag};
