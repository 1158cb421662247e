//! Monomial clones over finite fields.
//!
//! Monomials are stored as counts of exponent residues, clones as closed sets of such
//! counts inside a capped universe. On top of that sit lattice enumeration, the
//! semi-affine image of a clone and its minor-set image.

mod closure;

pub mod check;
pub mod clone;
pub mod error;
pub mod export;
pub mod field;
pub mod lattice;
pub mod minorset;
pub mod monomial;
pub mod oracle;
pub mod parse;
pub mod semiaffine;

pub use clone::{
    congruence_clone_member, equal, generate, generate_default, generated_subset, join, meet, member_query, subset,
    CapPolicy, Confidence, Membership, MonomialClone,
};
pub use error::{Error, Result};
pub use field::{reduce_exponent, FieldParam};
pub use monomial::{all_monomials, canonicalize, Elem, Monomial};
pub use parse::{parse_linear_form, parse_linear_forms, parse_monomial, parse_monomial_list};
