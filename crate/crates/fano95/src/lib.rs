//! Exact-arithmetic toolkit for quasismooth terminal anticanonically embedded
//! weighted Fano threefold hypersurfaces.
//!
//! The crate enumerates the 95 families of such hypersurfaces
//! `X_d ⊂ P(1,a₁,a₂,a₃,a₄)` with `d = a₁+a₂+a₃+a₄`, computes their
//! singularity baskets and weighted-blow-up invariants, classifies the
//! birational involutions attached to singular points, evaluates a ledger of
//! family-index claims against the catalog, and decides rational linear
//! inequality systems by exact Fourier–Motzkin elimination with
//! machine-checkable infeasibility certificates.
//!
//! Everything is computed over arbitrary-precision rationals; there is no
//! floating point anywhere.

pub mod blowup;
pub mod catalog;
pub mod fm;
pub mod golden;
pub mod ledger;
pub mod rational;
pub mod singularities;
pub mod weights;

pub use blowup::{
    blowup_children, contracted_curves, epsilon_coefficient, involutions, ku3, kw3, midpoint_model,
    mu_bounds, sign_class, CurveCountVariant, EpsilonVariant, Involution, InvolutionKind, MuBounds,
    Sign,
};
pub use catalog::{enumerate_families, Catalog, FamilyRecord, PointAnalysis};
pub use fm::{
    check_certificate, fm_feasibility, parse_system, Constraint, FeasibilityResult,
    InfeasibilityCertificate, LinearSystem, Relation,
};
pub use ledger::{evaluate_claim, verify_all, ClaimResult, ClaimStatus, VerificationReport};
pub use rational::{rat, Rational};
pub use singularities::{
    basket, edge_points, is_terminal_general, normalize_quotient, vertex_point, Basket,
    BasketEntry, EdgeOutcome, Locus, NormalizeOutcome, QuotientType, VertexOutcome,
};
pub use weights::{
    degree_and_kx3, is_quasismooth_general, is_well_formed, monomials, WeightSystem,
};
