//! Exact computer algebra for noncommutative Jacobi algebras.
//!
//! Given a potential `f` (a power-series germ with no constant or linear
//! terms in `d` noncommuting variables), this crate computes invariants of
//! the Jacobi algebra `Jac(f)`: the dimension filtration `dim Jac(f)/J^i`,
//! corank sequences, normal-form classification of Types A and D, central
//! element and ideal-membership certificates, Gopakumar--Vafa style
//! invariant pairs, and the growth series that bound these dimensions.
//!
//! All arithmetic is over exact rationals; there is no floating point
//! anywhere. Truncation degrees are tracked pessimistically so that no
//! operation ever reports information it cannot certify.

pub mod auto;
pub mod calculus;
pub mod classify;
pub mod error;
pub mod growth;
pub mod io;
pub mod poly;
pub mod quotient;
pub mod rational;
pub mod word;

pub use auto::{AutoChain, AutoStep, ChasePoly, CubicCase, LinearAuto, UnitriangularAuto};
pub use calculus::{abelianize, cyclic_canonical, cyclic_derivative, strike_derivative, sym, CPoly};
pub use classify::{
    classify, elephant, gv_admissible, gv_invariants, make_normal_form, ElephantTag, GVPair,
    NormalForm, Param,
};
pub use error::Error;
pub use poly::{NCPoly, Order, TruncatedSeries};
pub use quotient::{DimReport, JdimVerdict, TruncatedIdeal};
pub use rational::Q;
pub use word::{Context, Word};
