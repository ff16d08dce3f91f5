//! Arithmetic core of a sieve for the possible types of mod-p `A_p`-spaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`padic`]: valuations `e`, `nu`, digit sums, primitive roots mod `p^2`.
//! * [`psimod`]: degree data of truncated polynomial psi-modules and the
//!   divisibility condition that rules out a non-vanishing `p`-th power.
//! * [`steenrod`]: odd-prime Adem relations and the unstable action on
//!   truncated polynomial algebras with unknown coefficients.
//! * [`classifier`]: the rank-3, `p = 3` constraint pipeline.
//! * [`finiteness`]: the effective degree bound for a fixed rank.

pub mod classifier;
pub mod error;
pub mod finiteness;
pub mod padic;
pub mod psimod;
pub mod steenrod;

pub use error::{Error, Result};
pub use padic::{PrimeContext, Valuation};
pub use psimod::{ConditionReport, PsiCertificate, PsiModule, SpaceType, Window};
