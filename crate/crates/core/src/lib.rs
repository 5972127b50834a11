//! Circular units of Z[ζ_{2^n}]: exact arithmetic, mod-2 congruences on the
//! special basis of the real subfield, funnel subgroups, and the trace-formula
//! units of the integral group ring of the cyclic group of order 2^n.

pub mod congruence;
pub mod cyclotomic;
pub mod error;
pub mod f2;
pub mod funnel;
pub mod group_ring;
pub mod lattice;
pub mod mod2;
pub mod real_basis;
pub mod tables;
pub mod units;

pub use cyclotomic::{CycInt, GaloisIndex, Level};
pub use error::{Error, Result};
pub use f2::{BitMatrix, BitVec};
pub use mod2::Mod2Elem;
pub use real_basis::{seq_d, seq_r, seq_s, special_mod2, BasisElem, RealElem, SeqIndex, SpecialCoordsMod2};
pub use units::{eval_word, PWord, UnitWord};
