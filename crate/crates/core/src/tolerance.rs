//! Numerical tolerances shared by every module.
//!
//! Algebraic identities are checked at [`ALGEBRAIC`], optimisation certificates at
//! [`SDP_GAP`], and positive semidefiniteness at [`PSD`]. Statistical checks pick
//! their own bounds next to the test that uses them.

/// Identities that hold exactly in exact arithmetic.
pub const ALGEBRAIC: f64 = 1e-9;

/// Mass at or below this is treated as outside a mixed strategy's support.
pub const SUPPORT: f64 = 1e-12;

/// Probability vectors must sum to one within this.
pub const PROBABILITY_SUM: f64 = 1e-9;

/// Entrywise Hermiticity of density matrices and deviation operators.
pub const HERMITIAN: f64 = 1e-10;

/// Smallest admissible eigenvalue of a positive semidefinite matrix.
pub const PSD: f64 = -1e-9;

/// Trace of a density matrix must be within this of one.
pub const TRACE: f64 = 1e-9;

/// Norm of a pure state or state vector must be within this of one.
pub const NORM: f64 = 1e-10;

/// Kraus completeness `sum A^dagger A = I`, entrywise.
pub const KRAUS: f64 = 1e-9;

/// POVM completeness `sum E = I`, entrywise.
pub const POVM: f64 = 1e-8;

/// Target duality gap of the best-deviation optimiser.
pub const SDP_GAP: f64 = 1e-6;

/// Frobenius distance below which a state counts as a product state.
pub const PRODUCT: f64 = 1e-8;

/// Default regret threshold for declaring a quantum equilibrium.
pub const QUANTUM_EQ: f64 = 1e-6;

/// Regret bound every returned classical equilibrium satisfies.
pub const EQUILIBRIUM: f64 = 1e-8;

/// Unitarity of circuit blocks.
pub const UNITARY: f64 = 1e-10;
