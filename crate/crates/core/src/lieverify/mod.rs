//! Numerical matrix realizations of small real semisimple Lie algebras.
//!
//! Algebras are realized as bases of real matrices (complex and quaternionic
//! entries realified), with the Cartan involution `θ(X) = -Xᵀ` in the
//! defining representation. The Killing form is computed from ad-traces, the
//! restricted root space decomposition from joint eigenspaces of `ad(H)` for
//! a generic element of the maximal abelian subspace, and the automorphism
//! lifts of reflections and diagram automorphisms are built explicitly and
//! certified against their targets on `a*`.
//!
//! All numerics are double precision. Exactness is never assumed: every
//! certificate carries residuals, and the restricted-root functionals are
//! snapped to small rationals with an explicit snapping guard.

mod algebra;
mod lifts;
mod roots;

pub use algebra::{realize, MatrixAlgebra};
pub use lifts::{
    choice_independence, omega_image_check, reflection_lift, scenario_lift, ChoiceReport,
    LiftCertificate, OmegaReport,
};
pub use roots::{restricted_roots, restricted_roots_with_a, RestrictedRootData};

use thiserror::Error;

/// Numerical tolerances: absolute eigenvalue clustering and certificate
/// acceptance. The defaults match desk-scale ad-matrices with entries of
/// magnitude at most a few units.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub cluster: f64,
    pub certificate: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            cluster: 1e-8,
            certificate: 1e-6,
        }
    }
}

impl Tolerances {
    /// Derive both tolerances from a certificate tolerance (clustering two
    /// orders tighter).
    pub fn from_certificate(certificate: f64) -> Self {
        Tolerances {
            cluster: certificate * 1e-2,
            certificate,
        }
    }
}

#[derive(Debug, Error)]
pub enum LieError {
    #[error("unsupported algebra for matrix realization: {0}")]
    Unsupported(String),
    #[error("parameter out of range for {0}")]
    ParameterOutOfRange(String),
    #[error("algebra dimension {dim} exceeds the desk-scale bound {max}")]
    TooLarge { dim: usize, max: usize },
    #[error("bracket left the basis span (residual {residual:.3e})")]
    NotClosed { residual: f64 },
    #[error("theta is not an involutive automorphism (residual {residual:.3e})")]
    ThetaNotAutomorphism { residual: f64 },
    #[error("Killing form signature violates the Cartan decomposition")]
    CartanSignature,
    #[error("chosen a is not abelian (residual {residual:.3e})")]
    NotAbelian { residual: f64 },
    #[error("eigenvalue clustering ambiguity: {0}")]
    ClusterResolution(String),
    #[error("could not snap {value} to a small rational")]
    SnapFailed { value: f64 },
    #[error("zero root space: reflection normalization impossible")]
    ZeroRootSpace,
    #[error("no sign choice produces a valid lift (best residual {best_residual:.3e})")]
    LiftConstruction { best_residual: f64 },
    #[error("restricted root pattern not recognized as a standard type")]
    Unrecognized,
    #[error("singular matrix in numerical linear algebra")]
    Singular,
    #[error(transparent)]
    Weighted(#[from] crate::weighted::WeightedError),
}
