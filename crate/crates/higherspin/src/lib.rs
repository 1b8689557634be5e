//! Exact symbolic calculus for conformally invariant differential operators
//! on higher spin spaces in Clifford analysis.
//!
//! The crate builds, over exact rational arithmetic:
//!
//! * the real Clifford algebra Cl_m with `e_i e_j + e_j e_i = -2 δ_ij`
//!   ([`clifford`]);
//! * the algebra of Clifford-valued polynomials in two vector variables
//!   extended by integer powers of `|x|` ([`weighted`]);
//! * explicit bases of harmonic and monogenic polynomial spaces, the
//!   Almansi–Fischer decomposition, projections and reproducing kernels
//!   ([`spaces`]);
//! * symbolic differential operators as expression trees, including the
//!   third-order operator on monogenic-valued functions and the fourth-order
//!   operator on harmonic-valued functions ([`ops`]);
//! * finite conformal transformations — translations, dilations and the
//!   monogenic/harmonic inversions — and fundamental solutions
//!   ([`conformal`]);
//! * a registry of exactly decidable operator identities with a
//!   machine-readable verification report ([`verify`]).
//!
//! Everything is decided by exact computation: an identity check applies both
//! sides to a finite basis of test functions and demands the difference
//! canonicalize to zero. There are no floating tolerances on any verification
//! path.

pub mod clifford;
pub mod conformal;
pub mod error;
pub mod linalg;
pub mod ops;
pub mod scalar;
pub mod spaces;
pub mod util;
pub mod verify;
pub mod weighted;

pub use clifford::{Blade, Multivector, VectorValue};
pub use error::{Error, Result};
pub use scalar::{int, rat, Coeff, Rat};
pub use weighted::{fischer_pair, fischer_pair_u, MultiIndex, Var, WeightedFunction};

// The book chapters double as doctests so the narrative guide can never
// drift from the API.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            #[allow(unused)]
            mod $name {}
        };
    }
    chapter!(intro, "../../../book/src/intro.md");
    chapter!(clifford, "../../../book/src/clifford.md");
    chapter!(weighted, "../../../book/src/weighted.md");
    chapter!(spaces, "../../../book/src/spaces.md");
    chapter!(operators, "../../../book/src/operators.md");
    chapter!(conformal, "../../../book/src/conformal.md");
    chapter!(verification, "../../../book/src/verification.md");
}
