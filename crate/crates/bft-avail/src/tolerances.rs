//! Pinned numerical tolerances. Every validity check, solver guard, and test
//! bound in the crate reads from here so the numbers exist in exactly one place.

/// Largest acceptable |column sum| of a balance-equation matrix. Columns carry
/// the conservation identity in the stored orientation; the sums cancel exactly
/// up to floating-point association of the rate terms.
pub const CONSERVATION_ABS: f64 = 1e-12;

/// Structural sparsity of the stencil: a balance-equation row touches at most
/// the state itself plus four lattice neighbours.
pub const STENCIL_MAX_ROW_NONZEROS: usize = 5;

/// A matrix counts as numerically singular when sigma_min <= this factor times
/// sigma_max. The SVD solver requires singularity and rejects a second small
/// singular value (non-unique stationary vector) at the same threshold.
pub const SINGULARITY_REL: f64 = 1e-10;

/// The replaced-equation solver rejects systems whose estimated condition
/// number exceeds this bound.
pub const CONDITION_MAX: f64 = 1e14;

/// Residual bound after a solve: ||Q * P||_inf <= RESIDUAL_REL * max row scale.
pub const RESIDUAL_REL: f64 = 1e-9;

/// Most negative entry tolerated in a raw stationary vector before clamping.
pub const PROB_NEGATIVE_ABS: f64 = 1e-12;

/// Probabilities must sum to one within this bound.
pub const PROB_SUM_ABS: f64 = 1e-10;

/// Max |difference| allowed between the SVD and replaced-equation solutions.
pub const SOLVER_AGREEMENT_ABS: f64 = 1e-10;

/// Max |difference| allowed against closed-form stationary solutions.
pub const CLOSED_FORM_ABS: f64 = 1e-10;

/// Probability mass functions must sum to one within this bound.
pub const PMF_SUM_ABS: f64 = 1e-12;

/// Moment identities (analytic mean/variance vs direct summation).
pub const MOMENT_ABS: f64 = 1e-9;

/// Mean availability must equal the dot product of its own per-fault
/// breakdown within this bound.
pub const BREAKDOWN_CONSISTENCY_ABS: f64 = 1e-12;

/// Slack when checking curve orderings; violations smaller than this are
/// treated as floating-point noise.
pub const ORDERING_ABS: f64 = 1e-9;

/// Rescaling both rates by a common factor must leave the stationary vector
/// unchanged within this bound.
pub const SCALE_INVARIANCE_ABS: f64 = 1e-10;

/// Largest state count solved by SVD when the solver choice is automatic;
/// bigger systems fall back to the replaced-equation path.
pub const SVD_STATE_LIMIT: usize = 2_500;
