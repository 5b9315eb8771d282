//! Floating-point cross-checks: truncated evaluation of the Fourier
//! transform `μ̂(ξ) = Π_{j≥1} m_D(M^{*−j} ξ)`, orthogonality residuals over
//! candidate spectra, completeness profiles `Σ_λ |μ̂(ξ+λ)|²`, and attractor
//! point sampling for rendering.
//!
//! The argument recursion for rational inputs runs in exact big-rational
//! arithmetic and only the unit-interval residue is rounded to `f64`, so a
//! factor sitting on an exact mask zero evaluates at machine epsilon no
//! matter how large the input frequency is. Numerics here are evidence; the
//! exact layer owns every verdict.

use num::integer::Integer;
use num::{BigRational, Complex, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::exactalg::{IMat2, IVec2, QVec2};
use crate::maskzero::Digits3;
use crate::spectrality::{is_hadamard, spectrum_truncated};
use crate::{Error, Result};

type C64 = Complex<f64>;

/// Hard cap on the number of product factors.
const MAX_FACTORS: u32 = 200;

/// One truncated evaluation of `μ̂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourierEval {
    pub xi: [f64; 2],
    pub re: f64,
    pub im: f64,
    pub modulus: f64,
    /// Number of product factors taken.
    pub depth: u32,
    /// Estimated multiplicative tail error after truncation.
    pub tail_bound: f64,
}

impl FourierEval {
    pub fn value(&self) -> C64 {
        C64::new(self.re, self.im)
    }
}

/// Completeness evidence: partial sums `Q_Λ(ξ) = Σ_{λ∈Λ_k} |μ̂(ξ+λ)|²`
/// over a grid of base points. For a spectrum these converge to 1; the
/// profile is bounded by 1 for any orthonormal family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletenessProfile {
    pub depth: u32,
    pub grid: u32,
    pub points: Vec<[f64; 2]>,
    pub values: Vec<f64>,
    pub min: f64,
    pub mean: f64,
}

fn mask_value_f64(d: &Digits3, x: [f64; 2]) -> C64 {
    let tau = std::f64::consts::TAU;
    let mut acc = C64::new(1.0, 0.0);
    for dig in [d.d1(), d.d2()] {
        let angle = tau * (dig.x as f64 * x[0] + dig.y as f64 * x[1]);
        acc += C64::new(angle.cos(), angle.sin());
    }
    acc / 3.0
}

/// Decay ratio used for the geometric tail estimate: the reciprocal of the
/// smallest eigenvalue modulus of `M`, padded toward 1.
fn tail_ratio(m: &IMat2) -> f64 {
    let (lo, _) = m.eigen_moduli();
    let rho = 1.0 / lo;
    ((rho + 1.0) / 2.0).min(0.999)
}

/// Truncated `μ̂(ξ)` at a real frequency. The product stops at the first
/// depth where `2π·max‖d‖·‖M^{*−j}ξ‖` has a geometric tail below `eps`
/// (using `|1 − m_D(x)| ≤ 2π·max‖d‖·‖x‖`), after the argument norms have
/// started to decay; a hard cap of 200 factors guards slow decay.
pub fn mu_hat(m: &IMat2, d: &Digits3, xi: [f64; 2], eps: f64) -> Result<FourierEval> {
    if !m.is_expanding() {
        return Err(Error::NotExpanding);
    }
    if eps <= 0.0 {
        return Err(Error::DegenerateInput("eps must be positive"));
    }
    let det = m.det() as f64;
    let mt = m.transpose();
    // inverse of M^T
    let inv = [
        [mt.a22 as f64 / det, -mt.a12 as f64 / det],
        [-mt.a21 as f64 / det, mt.a11 as f64 / det],
    ];
    let maxd = d.max_norm();
    let ratio = tail_ratio(m);
    let tau = std::f64::consts::TAU;
    let mut value = C64::new(1.0, 0.0);
    let mut arg = xi;
    let mut prev_norm = f64::INFINITY;
    let mut depth = 0;
    let mut tail = f64::INFINITY;
    while depth < MAX_FACTORS {
        arg = [
            inv[0][0] * arg[0] + inv[0][1] * arg[1],
            inv[1][0] * arg[0] + inv[1][1] * arg[1],
        ];
        value *= mask_value_f64(d, arg);
        depth += 1;
        let norm = (arg[0] * arg[0] + arg[1] * arg[1]).sqrt();
        tail = tau * maxd * norm * ratio / (1.0 - ratio);
        if tail < eps && norm <= prev_norm {
            break;
        }
        prev_norm = norm;
    }
    Ok(FourierEval {
        xi,
        re: value.re,
        im: value.im,
        modulus: value.norm(),
        depth,
        tail_bound: tail,
    })
}

fn big_frac_to_f64(num: &num::BigInt, den: &num::BigInt) -> f64 {
    debug_assert!(den.is_positive());
    let negative = num.is_negative();
    let na = num.abs();
    let int_part = (&na / den).to_f64().unwrap_or(f64::MAX);
    let rem = &na % den;
    let frac = ((rem << 60u32) / den).to_f64().unwrap_or(0.0) / (1u64 << 60) as f64;
    let out = int_part + frac;
    if negative {
        -out
    } else {
        out
    }
}

fn big_ratio_to_f64(r: &BigRational) -> f64 {
    big_frac_to_f64(r.numer(), r.denom())
}

/// Truncated `μ̂(ξ)` at an exact rational frequency. The argument sequence
/// `M^{*−j}ξ` is carried exactly as an integer vector over the common
/// denominator `den·det^j` (never reduced, so no gcd cost) and taken mod 1
/// only at evaluation; exact mask zeros are hit exactly even for
/// frequencies far outside the unit box.
pub fn mu_hat_at_rational(m: &IMat2, d: &Digits3, xi: &QVec2, eps: f64) -> Result<FourierEval> {
    use num::BigInt;
    if !m.is_expanding() {
        return Err(Error::NotExpanding);
    }
    if eps <= 0.0 {
        return Err(Error::DegenerateInput("eps must be positive"));
    }
    let det = m.det();
    let adj = m.transpose().adjugate();
    let maxd = d.max_norm();
    let ratio = tail_ratio(m);
    let tau = std::f64::consts::TAU;

    // common-denominator representation (vx/den, vy/den)
    let d0 = num::integer::lcm(*xi.x.denom(), *xi.y.denom());
    let mut vx = BigInt::from(*xi.x.numer() * (d0 / *xi.x.denom()));
    let mut vy = BigInt::from(*xi.y.numer() * (d0 / *xi.y.denom()));
    let mut den = BigInt::from(d0);
    let xi_f = [
        big_frac_to_f64(&vx, &den),
        big_frac_to_f64(&vy, &den),
    ];
    let (adj11, adj12, adj21, adj22) = (
        BigInt::from(adj.a11),
        BigInt::from(adj.a12),
        BigInt::from(adj.a21),
        BigInt::from(adj.a22),
    );
    let digit_dot = |dig: &crate::exactalg::IVec2, vx: &BigInt, vy: &BigInt| -> BigInt {
        BigInt::from(dig.x) * vx + BigInt::from(dig.y) * vy
    };

    let mut value = C64::new(1.0, 0.0);
    let mut prev_norm = f64::INFINITY;
    let mut depth = 0;
    let mut tail = f64::INFINITY;
    while depth < MAX_FACTORS {
        (vx, vy) = (&adj11 * &vx + &adj12 * &vy, &adj21 * &vx + &adj22 * &vy);
        den *= det;
        if den.is_negative() {
            den = -den;
            vx = -vx;
            vy = -vy;
        }
        // one mask factor, with the residues taken exactly mod 1
        let mut factor = C64::new(1.0, 0.0);
        for dig in [d.d1(), d.d2()] {
            let dot = digit_dot(&dig, &vx, &vy);
            let residue = dot.mod_floor(&den);
            let angle = tau * big_frac_to_f64(&residue, &den);
            factor += C64::new(angle.cos(), angle.sin());
        }
        value *= factor / 3.0;
        depth += 1;
        let (ax, ay) = (big_frac_to_f64(&vx, &den), big_frac_to_f64(&vy, &den));
        let norm = (ax * ax + ay * ay).sqrt();
        tail = tau * maxd * norm * ratio / (1.0 - ratio);
        if tail < eps && norm <= prev_norm {
            break;
        }
        prev_norm = norm;
    }
    Ok(FourierEval {
        xi: xi_f,
        re: value.re,
        im: value.im,
        modulus: value.norm(),
        depth,
        tail_bound: tail,
    })
}

/// Maximum of `|μ̂(λ − λ′)|` over distinct pairs of the candidate set; zero
/// for singletons. Exact zeros of the mask make this vanish to machine
/// precision for genuine bi-zero sets.
pub fn orthogonality_residual(m: &IMat2, d: &Digits3, lambda: &[QVec2]) -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 0..lambda.len() {
        for j in (i + 1)..lambda.len() {
            let diff = lambda[i].sub(&lambda[j]);
            let eval = mu_hat_at_rational(m, d, &diff, 1e-12)?;
            worst = worst.max(eval.modulus);
        }
    }
    Ok(worst)
}

/// Partial completeness sums over an `grid × grid` lattice in `[0,1)²` for
/// the truncated spectrum of a certified Hadamard triple.
pub fn completeness_profile(
    m: &IMat2,
    d: &Digits3,
    s: &[IVec2; 3],
    depth: u32,
    grid: u32,
) -> Result<CompletenessProfile> {
    if grid == 0 {
        return Err(Error::DegenerateInput("grid must be positive"));
    }
    if !is_hadamard(m, d, s)? {
        return Err(Error::WrongBranch("completeness profile needs a Hadamard triple"));
    }
    let lambda: Vec<IVec2> = if depth == 0 {
        vec![IVec2::ZERO]
    } else {
        spectrum_truncated(m, s, depth)?.points
    };
    let g = grid as i64;
    let mut points = Vec::new();
    let mut values = Vec::new();
    for i in 0..g {
        for j in 0..g {
            let xi = QVec2::from_fractions(i, g, j, g);
            let mut sum = 0.0;
            for l in &lambda {
                let shifted = xi.add(&QVec2::from_ivec(l));
                let eval = mu_hat_at_rational(m, d, &shifted, 1e-10)?;
                sum += eval.modulus * eval.modulus;
            }
            points.push([i as f64 / g as f64, j as f64 / g as f64]);
            values.push(sum);
        }
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    Ok(CompletenessProfile {
        depth,
        grid,
        points,
        values,
        min,
        mean,
    })
}

/// All `3^depth` attractor samples `Σ_{j=1..depth} M^{−j} d_j`, enumerated
/// depth-first in digit order. Capped at `3^depth ≤ 10^7`.
pub fn attractor_points(m: &IMat2, d: &Digits3, depth: u32) -> Result<Vec<[f64; 2]>> {
    if !m.is_expanding() {
        return Err(Error::NotExpanding);
    }
    if depth == 0 {
        return Err(Error::DegenerateInput("depth must be at least 1"));
    }
    if depth > 14 {
        return Err(Error::DepthCap(depth));
    }
    let det = m.det() as f64;
    let inv = [
        [m.a22 as f64 / det, -m.a12 as f64 / det],
        [-m.a21 as f64 / det, m.a11 as f64 / det],
    ];
    let digits = d.digits();
    let mut pts: Vec<[f64; 2]> = vec![[0.0, 0.0]];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(pts.len() * 3);
        for p in &pts {
            for dig in &digits {
                let shifted = [p[0] + dig.x as f64, p[1] + dig.y as f64];
                next.push([
                    inv[0][0] * shifted[0] + inv[0][1] * shifted[1],
                    inv[1][0] * shifted[0] + inv[1][1] * shifted[1],
                ]);
            }
        }
        pts = next;
    }
    Ok(pts)
}
