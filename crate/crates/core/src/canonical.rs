//! Reduction of `(M, D)` to the canonical pair `(M̃, D̃)` by a unimodular
//! change of coordinates, together with the diagonal conjugators
//! `Q_n = diag(1, 3^{-n})` and spectrum transport across similarity.
//!
//! Writing `D = {0, α, β}` with `gcd` of all coordinates 1, pick the pair
//! whose own gcd `σ` is coprime to 3 (swapping α and β if needed), factor
//! `α = σ·t` with `t` primitive, and complete `t` to the unimodular
//! `P = [[p, q], [-t2, t1]]` via `p·t1 + q·t2 = 1`. Then
//! `P·D = {0, (σ,0), (ω, 3^η ϑ)}` and `M̃ = P·M·P⁻¹` is integral with the
//! same determinant and trace.

use num::rational::Ratio;
use num::One;
use serde::{Deserialize, Serialize};

use crate::exactalg::{bezout, val3, IMat2, IVec2, Q, QMat2, QVec2, Val3};
use crate::maskzero::Digits3;
use crate::{Error, Result};

/// The canonical data attached to a valid pair `(M, D)`.
///
/// Invariants: `det P = 1`, `M̃ = P·M·P⁻¹`, `D̃ = P·D = {0,(σ,0),(ω,3^η ϑ)}`,
/// `3 ∤ σ`, `3 ∤ ϑ`, `γ = σ·ϑ`, and `p·t1 + q·t2 = 1` with `α = σ·(t1,t2)`
/// (after any swap).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub p: IMat2,
    pub m_tilde: IMat2,
    pub d_tilde: Digits3,
    pub sigma: i64,
    pub omega: i64,
    pub eta: u32,
    pub theta: i64,
    pub gamma: i64,
    pub t1: i64,
    pub t2: i64,
    pub bez_p: i64,
    pub bez_q: i64,
    /// Whether the two nonzero digits were exchanged to keep `3 ∤ σ`.
    pub swapped: bool,
}

impl CanonicalForm {
    /// Whether `2σ − ω ∈ 3ℤ`, the dichotomy driving the decision tree.
    pub fn digit_case_aligned(&self) -> bool {
        (2 * self.sigma - self.omega).rem_euclid(3) == 0
    }
}

/// Canonicalize with the normalized Bezout coefficients.
pub fn canonicalize(m: &IMat2, d: &Digits3) -> Result<CanonicalForm> {
    canonicalize_with_bezout_shift(m, d, 0)
}

/// Canonicalize after replacing `(p, q)` by `(p + k·t2, q − k·t1)`. All
/// shifts give a valid unimodular `P` and the same `(σ, η, ϑ, γ)`; only
/// `ω` and the off-canonical entries of `M̃` move. Downstream verdicts are
/// invariant in the shift, which the decision tests exercise.
pub fn canonicalize_with_bezout_shift(m: &IMat2, d: &Digits3, shift: i64) -> Result<CanonicalForm> {
    if !m.is_expanding() {
        return Err(Error::NotExpanding);
    }
    if d.det() == 0 {
        return Err(Error::CollinearDigits);
    }
    let (alpha, beta) = (d.d1(), d.d2());
    if gcd4(&alpha, &beta) != 1 {
        return Err(Error::DigitsNotPrimitive);
    }
    // Keep 3 ∤ σ: primitivity rules out both pair-gcds being multiples of 3.
    let swapped = num::integer::gcd(alpha.x, alpha.y) % 3 == 0;
    let (a, b) = if swapped { (beta, alpha) } else { (alpha, beta) };

    let sigma = num::integer::gcd(a.x, a.y);
    debug_assert!(sigma % 3 != 0);
    let (t1, t2) = (a.x / sigma, a.y / sigma);
    let (g, p0, q0) = bezout(t1, t2)?;
    debug_assert_eq!(g, 1);
    let (bez_p, bez_q) = (p0 + shift * t2, q0 - shift * t1);
    let omega = bez_p * b.x + bez_q * b.y;
    let dd = t1 * b.y - t2 * b.x;
    let (eta, theta) = match val3(dd) {
        Val3::Finite { s, c } => (s, c),
        Val3::Infinite => return Err(Error::CollinearDigits),
    };
    let gamma = sigma * theta;

    let p = IMat2::new(bez_p, bez_q, -t2, t1);
    debug_assert_eq!(p.det(), 1);
    let p_inv = p.adjugate();
    let m_tilde = p.mul(m).mul(&p_inv);
    let d_tilde = Digits3::new(
        IVec2::new(sigma, 0),
        IVec2::new(omega, 3i64.pow(eta) * theta),
    )?;
    debug_assert_eq!(d.map(&p)?, if swapped { d_tilde.swapped() } else { d_tilde });

    Ok(CanonicalForm {
        p,
        m_tilde,
        d_tilde,
        sigma,
        omega,
        eta,
        theta,
        gamma,
        t1,
        t2,
        bez_p,
        bez_q,
        swapped,
    })
}

fn gcd4(a: &IVec2, b: &IVec2) -> i64 {
    num::integer::gcd(
        num::integer::gcd(a.x, a.y),
        num::integer::gcd(b.x, b.y),
    )
}

/// `Q_n = diag(1, 3^{-n})`.
pub fn q_n(n: u32) -> QMat2 {
    QMat2::diag(Q::one(), Ratio::new(1, 3i64.pow(n)))
}

/// Conjugate the canonical pair by `Q_n`: returns
/// `(Q_n·M̃·Q_n⁻¹, Q_n·D̃)` with `Q_n·D̃ = {0, (σ,0), (ω, 3^{η−n} ϑ)}`.
/// Errors when either image leaves the integers.
pub fn conjugate_canonical_pair(cf: &CanonicalForm, n: u32) -> Result<(IMat2, Digits3)> {
    if n > cf.eta {
        return Err(Error::NonIntegralConjugate);
    }
    let m = &cf.m_tilde;
    let pow = 3i64.pow(n);
    if m.a21 % pow != 0 {
        return Err(Error::NonIntegralConjugate);
    }
    let m_bar = IMat2::new(m.a11, m.a12 * pow, m.a21 / pow, m.a22);
    let d_bar = Digits3::new(
        IVec2::new(cf.sigma, 0),
        IVec2::new(cf.omega, 3i64.pow(cf.eta - n) * cf.theta),
    )?;
    Ok((m_bar, d_bar))
}

/// Transport a bi-zero set or spectrum across the similarity `A`: applies
/// `A^{*-1}` to every element.
pub fn transport_spectrum(points: &[QVec2], a: &QMat2) -> Result<Vec<QVec2>> {
    let map = a.transpose().inverse()?;
    Ok(points.iter().map(|p| map.mul_vec(p)).collect())
}
