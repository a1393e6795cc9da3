//! Exact arithmetic in real quadratic fields F = Q(√d): elements,
//! fundamental units, prime ideals, and local symbols.

pub mod elem;
pub mod hilbert;
pub mod ideal;
pub mod symbols;
pub mod unit;

pub use elem::{FieldElem, Rat};
pub use hilbert::{hilbert_symbol_at, hilbert_symbol_inf, is_local_square, splitting_symbol};
pub use ideal::{factor, prime_above, primes_above, IdealF, PrimeIdealF, PrimeKind};
pub use symbols::{artin_symbol, field_disc, kronecker};
pub use unit::{
    fundamental_unit, minus_eps_square_mod_4, minus_eps_square_witness, residue_conditions,
    FundUnitData, ModulusTag,
};
