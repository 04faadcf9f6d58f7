//! Exact computer algebra for identities of k-strong Lie algebras.
//!
//! Everything runs over F_p with exact arithmetic: no floats, no hashing
//! of symbolic data, deterministic output. The pipeline has three legs
//! that check each other.
//!
//! - Symbolic: [`relations`] builds the canned linearized relation
//!   families, [`nilquot`] decides two-sided ideal membership per
//!   multiweight and returns replayable certificates, [`conjecture`]
//!   packages the identity checks into stable JSON reports.
//! - Derivational: [`asym`] re-runs the recorded equation chain step by
//!   step, verifying every certificate, and triangularizes the
//!   one-variable operator presentation of the same statements.
//! - Concrete: [`liering`] runs the brute-force predicates on
//!   structure-constant Lie rings, including scalar extension to small
//!   field extensions, so symbolic claims can be spot-checked on actual
//!   rings.
//!
//! [`gf`] supplies the field arithmetic and row reduction, [`freealg`]
//! the free associative algebra. [`cli`] is the batch front end behind
//! the `stronglie` binary. The `examples/` directory has one runnable
//! walkthrough per capability.

pub mod asym;
pub mod cli;
pub mod conjecture;
pub mod freealg;
pub mod gf;
pub mod liering;
pub mod nilquot;
pub mod relations;

pub use asym::{build_sigma_matrix, replay_appendix, sigma_reduce, DerivationLog, SigmaOperator};
pub use conjecture::{check_variant_i, check_variant_ii, search_variant_iii, ConjectureReport};
pub use freealg::{Multiweight, Poly, Word};
pub use liering::{heisenberg, LieRing, PredicateReport};
pub use nilquot::{ideal_basis, is_member, verify_certificate, Certificate, MembershipOracle};
pub use relations::{standard_relation_set, RelationChoice, RelationSet};
