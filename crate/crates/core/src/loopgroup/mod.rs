//! Truncated Laurent loops on a circle C_r, their Birkhoff factorization, and
//! the finite-type machinery built on it: the Symes map, the isospectral
//! action and spectral data. Independent of the closed-form dressing, which
//! it is used to check.

mod birkhoff;
mod laurent;
mod oracle;
mod potential;

pub use birkhoff::{
    birkhoff_factorize, random_big_cell_loop, reality_check, Factorization, MAX_CONDITION,
    REALITY_TOL, RECOMPOSITION_TOL, TAIL_TOL,
};
pub use laurent::{nodes, LaurentLoop};
pub use oracle::{
    dressing_oracle_compare, isospectral_action, symes_equivariance_deviation, symes_map,
    PotentialFlow, SymesPoint, DEFAULT_ORDER,
};
pub use potential::{
    spectral_det, FiniteTypePotential, SpectralData, BRANCH_SEPARATION, POTENTIAL_TOL,
};
