//! Exact spectrality decisions for planar self-affine measures with three
//! integer digits.
//!
//! Given an expanding integer matrix `M` and a digit set
//! `D = {0, (α1,α2), (β1,β2)}` of three integer vectors, the measure
//! `μ_{M,D}` is the unique probability measure satisfying
//! `μ = (1/3) Σ_d μ(M(·) − d)`. This crate decides, in exact integer and
//! rational arithmetic, whether `μ_{M,D}` admits an orthonormal basis of
//! exponentials, and when it does, produces a verifiable certificate: a
//! conjugating matrix `Q`, an admissible pair `(M̄, D̄)` and a digit set `S`
//! making the associated 3×3 exponential matrix unitary.
//!
//! Modules:
//! - [`exactalg`]: integer/rational 2×2 linear algebra, Bezout, 3-adic
//!   valuations, mod-3 inverses, the exact expanding test.
//! - [`maskzero`]: digit normalization, the mask polynomial `m_D`, exact zero
//!   set enumeration on `[0,1)²`, and the canonical point families.
//! - [`canonical`]: the unimodular reduction to `D̃ = {0,(σ,0),(ω,3^η ϑ)}`
//!   and spectrum transport across similarity.
//! - [`classify`]: mod-3 residue classes of the reduced matrix and the
//!   region tags that drive the verdict.
//! - [`spectrality`]: Hadamard-triple tests, the two divisibility criteria,
//!   the finite-orthogonality orbit oracle, and the top-level decision.
//! - [`numverify`]: floating-point cross-checks (truncated Fourier
//!   transform, orthogonality residuals, completeness profiles, attractor
//!   sampling). Numerics are evidence only; verdicts come from the exact
//!   layer.

pub mod canonical;
pub mod classify;
pub mod exactalg;
pub mod maskzero;
pub mod numverify;
pub mod spectrality;

use thiserror::Error;

/// Errors shared by the exact and numeric layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("matrix is singular modulo 3")]
    SingularMod3,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("conjugate has non-integer entries")]
    NonIntegralConjugate,
    #[error("digit set has repeated points")]
    DuplicateDigits,
    #[error("digit set is collinear")]
    CollinearDigits,
    #[error("digit coordinates share a common factor; normalize first")]
    DigitsNotPrimitive,
    #[error("matrix is not expanding")]
    NotExpanding,
    #[error("operation applied outside its branch: {0}")]
    WrongBranch(&'static str),
    #[error("spectrum digit set contains repeated points")]
    DuplicateSpectrumDigits,
    #[error("depth {0} exceeds the enumeration cap")]
    DepthCap(u32),
    #[error("integer overflow while expanding matrix powers")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;

pub use canonical::{canonicalize, q_n, transport_spectrum, CanonicalForm};
pub use classify::{decompose, region, Case, ClassDecomposition, RegionTag};
pub use exactalg::{bezout, integer_conjugate, is_expanding, mod3_inverse, val3, IMat2, IVec2, QMat2, QVec2, Val3};
pub use maskzero::{
    classify_zero_point, j_set, mask_is_zero_exact, normalize_digits, zero_set_fundamental,
    Digits3, PointFamilyTag,
};
pub use numverify::{
    attractor_points, completeness_profile, mu_hat, mu_hat_at_rational, orthogonality_residual,
    CompletenessProfile, FourierEval,
};
pub use spectrality::{
    decide, decide_with_bezout_shift, finite_orthogonals, is_hadamard, j_witness,
    liu_wang_criterion, reduced_pair_criterion, search_hadamard_s, spectrum_truncated, Branch,
    Certificate, Reason, SpectrumLevel, Status, Verdict,
};
