//! Spin fidelity of three-qubit GHZ and W wave packets as seen by
//! Lorentz-boosted observers.
//!
//! Each particle of a Gaussian momentum wave packet picks up a
//! momentum-dependent Wigner rotation under the boost. Tracing out momentum
//! leaves a mixed spin state whose fidelity with the rest-frame state depends
//! on the averages `⟨cosᵏΩ⟩` of the rotation angle.
//!
//! - [`kinematics`]: rapidities and the Wigner rotation for boosts in the xz-plane.
//! - [`moments`]: adaptive-quadrature moments `⟨cosᵏΩ⟩` and their large-boost limits.
//! - [`fidelity`]: density matrices, the six closed-form fidelities and Uhlmann fidelity.
//! - [`oracle`]: explicit momentum-grid construction of the boosted spin state.
//! - [`cli`]: the `spinfid` command line (single points, sweeps, verification).

// Negated comparisons below are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod fidelity;
pub mod kinematics;
pub mod moments;
pub mod oracle;
pub mod quadrature;

pub use error::{Error, Result};
