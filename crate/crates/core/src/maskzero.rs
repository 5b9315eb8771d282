//! Digit-set normalization, the mask polynomial `m_D`, exact membership and
//! enumeration of its zero set inside `[0,1)²`, and the canonical point
//! families attached to a reduced digit set.
//!
//! The mask of a three-digit set is `m_D(x) = (1 + e(⟨d1,x⟩) + e(⟨d2,x⟩))/3`
//! with `e(t) = e^{2πit}`. A sum of three unit roots with one of them equal
//! to 1 vanishes exactly when the other two are the nontrivial cube roots of
//! unity, so zero membership reduces to a set equality on exact rationals
//! modulo 1 — no cyclotomic machinery is needed.

use std::collections::BTreeSet;

use num::rational::Ratio;
use num::Zero;
use serde::{Deserialize, Serialize};

use crate::exactalg::{IMat2, IVec2, Q, QVec2};
use crate::{Error, Result};

/// Ordered digit triple `{0, d1, d2}` with pairwise distinct elements.
///
/// The leading zero digit is implicit; `d1` and `d2` are stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[[i64; 2]; 3]", into = "[[i64; 2]; 3]")]
pub struct Digits3 {
    d1: IVec2,
    d2: IVec2,
}

impl Digits3 {
    pub fn new(d1: IVec2, d2: IVec2) -> Result<Self> {
        if d1.is_zero() || d2.is_zero() || d1 == d2 {
            return Err(Error::DuplicateDigits);
        }
        Ok(Self { d1, d2 })
    }

    pub fn d1(&self) -> IVec2 {
        self.d1
    }

    pub fn d2(&self) -> IVec2 {
        self.d2
    }

    /// All three digits, zero first.
    pub fn digits(&self) -> [IVec2; 3] {
        [IVec2::ZERO, self.d1, self.d2]
    }

    /// The digit matrix `B = [d1 | d2]` with the digits as columns.
    pub fn b_matrix(&self) -> IMat2 {
        IMat2::from_columns(&self.d1, &self.d2)
    }

    /// `det B = d1.x·d2.y − d1.y·d2.x`; zero exactly for collinear digits.
    pub fn det(&self) -> i64 {
        self.b_matrix().det()
    }

    /// Swap the two nonzero digits.
    pub fn swapped(&self) -> Digits3 {
        Digits3 {
            d1: self.d2,
            d2: self.d1,
        }
    }

    /// Apply an integer matrix to every digit.
    pub fn map(&self, m: &IMat2) -> Result<Digits3> {
        Digits3::new(m.mul_vec(&self.d1), m.mul_vec(&self.d2))
    }

    pub fn max_norm(&self) -> f64 {
        self.d1.norm2().max(self.d2.norm2())
    }
}

impl TryFrom<[[i64; 2]; 3]> for Digits3 {
    type Error = Error;

    fn try_from(v: [[i64; 2]; 3]) -> Result<Self> {
        if v[0] != [0, 0] {
            return Err(Error::DegenerateInput("digit triple must start at 0"));
        }
        Digits3::new(v[1].into(), v[2].into())
    }
}

impl From<Digits3> for [[i64; 2]; 3] {
    fn from(d: Digits3) -> Self {
        [[0, 0], [d.d1.x, d.d1.y], [d.d2.x, d.d2.y]]
    }
}

impl std::fmt::Display for Digits3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{0,{},{}}}", self.d1, self.d2)
    }
}

/// Membership of a point in the canonical families attached to a reduced
/// digit set with parameters `γ` and `η`. Several tags can hold at once
/// (`g1`/`g2` refine `g`); all false means none.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PointFamilyTag {
    pub h: bool,
    pub g: bool,
    pub g1: bool,
    pub g2: bool,
}

impl PointFamilyTag {
    pub fn is_none(&self) -> bool {
        !(self.h || self.g || self.g1 || self.g2)
    }
}

/// Translate one digit to the origin and divide out the common factor of the
/// remaining coordinates. Returns `(D, translation, scale)` with
/// `raw_i = scale·D_i + translation`, so spectra transport back through a
/// scalar similarity.
pub fn normalize_digits(raw: &[IVec2; 3]) -> Result<(Digits3, IVec2, i64)> {
    let translation = raw[0];
    let e1 = raw[1].sub(&translation);
    let e2 = raw[2].sub(&translation);
    if e1.is_zero() || e2.is_zero() || e1 == e2 {
        return Err(Error::DuplicateDigits);
    }
    let scale = gcd4(e1.x, e1.y, e2.x, e2.y);
    let d = Digits3::new(
        IVec2::new(e1.x / scale, e1.y / scale),
        IVec2::new(e2.x / scale, e2.y / scale),
    )?;
    Ok((d, translation, scale))
}

fn gcd2(a: i64, b: i64) -> i64 {
    num::integer::gcd(a, b)
}

fn gcd4(a: i64, b: i64, c: i64, d: i64) -> i64 {
    gcd2(gcd2(a, b), gcd2(c, d))
}

/// Exact zero test for the mask polynomial: with `e1 = ⟨x,d1⟩ mod 1` and
/// `e2 = ⟨x,d2⟩ mod 1`, the mask vanishes iff `{e1, e2} = {1/3, 2/3}`.
pub fn mask_is_zero_exact(d: &Digits3, x: &QVec2) -> bool {
    let dot = |v: &IVec2| -> Q {
        let t = x.x * Ratio::from_integer(v.x) + x.y * Ratio::from_integer(v.y);
        t - t.floor()
    };
    let e1 = dot(&d.d1);
    let e2 = dot(&d.d2);
    let third = Ratio::new(1, 3);
    let two_thirds = Ratio::new(2, 3);
    (e1 == third && e2 == two_thirds) || (e1 == two_thirds && e2 == third)
}

/// The complete zero set of `m_D` inside `[0,1)²`, found by exactly solving
/// the two congruence systems `⟨x,d1⟩ ≡ 1/3, ⟨x,d2⟩ ≡ 2/3 (mod 1)` and the
/// swapped one. Requires non-collinear digits (`det B ≠ 0`); the collinear
/// zero set is a union of lines and is rejected here.
///
/// The result is sorted lexicographically and free of duplicates, and every
/// point passes [`mask_is_zero_exact`].
pub fn zero_set_fundamental(d: &Digits3) -> Result<Vec<QVec2>> {
    let det = d.det();
    if det == 0 {
        return Err(Error::CollinearDigits);
    }
    // Rows of A are the digits: A·x = (⟨x,d1⟩, ⟨x,d2⟩).
    let a = d.b_matrix().transpose();
    let adj = a.adjugate();
    let mut points = BTreeSet::new();
    let targets = [
        QVec2::from_fractions(1, 3, 2, 3),
        QVec2::from_fractions(2, 3, 1, 3),
    ];
    // x ∈ [0,1)² forces A·x into the parallelogram A·[0,1)², whose bounding
    // box limits the integer offsets k with A·x = y + k.
    let row_bounds = |r1: i64, r2: i64| -> (i64, i64) {
        let vals = [0, r1, r2, r1 + r2];
        (*vals.iter().min().unwrap(), *vals.iter().max().unwrap())
    };
    let (min1, max1) = row_bounds(a.a11, a.a12);
    let (min2, max2) = row_bounds(a.a21, a.a22);
    for y in &targets {
        for k1 in (min1 - 1)..=(max1 + 1) {
            for k2 in (min2 - 1)..=(max2 + 1) {
                let t = QVec2::new(
                    y.x + Ratio::from_integer(k1),
                    y.y + Ratio::from_integer(k2),
                );
                let x = QVec2::new(
                    (Ratio::from_integer(adj.a11) * t.x + Ratio::from_integer(adj.a12) * t.y)
                        / Ratio::from_integer(det),
                    (Ratio::from_integer(adj.a21) * t.x + Ratio::from_integer(adj.a22) * t.y)
                        / Ratio::from_integer(det),
                );
                if x.x >= Q::zero()
                    && x.x < Ratio::from_integer(1)
                    && x.y >= Q::zero()
                    && x.y < Ratio::from_integer(1)
                {
                    points.insert(x);
                }
            }
        }
    }
    let out: Vec<QVec2> = points.into_iter().collect();
    for p in &out {
        assert!(mask_is_zero_exact(d, p), "solver produced a non-zero point");
    }
    Ok(out)
}

/// Tag a point against the families attached to parameters `γ` (coprime to
/// 3) and `η ≥ 0`:
///
/// - `h`:  `x = (ℓ1/(3γ), ℓ2/(3^η γ))` with `3 ∤ ℓ1`, `ℓ2 ∈ ℤ`;
/// - `g`:  `x = (ℓ1/(3γ), ℓ2/(3^{η+1} γ))` with `3 ∤ ℓ1` and `3 ∤ ℓ2`;
/// - `g1`/`g2`: `x = (ℓ1/3, ℓ2/3^{η+1})` with `3 ∤ ℓ1ℓ2` and `ℓ1 ≡ ℓ2`
///   resp. `ℓ1 ≢ ℓ2 (mod 3)`.
pub fn classify_zero_point(x: &QVec2, gamma: i64, eta: u32) -> PointFamilyTag {
    let mut tag = PointFamilyTag::default();
    let as_unit = |t: Q| -> Option<i64> {
        if t.is_integer() {
            Some(t.to_integer())
        } else {
            None
        }
    };
    let g = Ratio::from_integer(gamma);
    let p3 = |e: u32| Ratio::from_integer(3i64.pow(e));

    if let Some(l1) = as_unit(x.x * p3(1) * g) {
        if l1.rem_euclid(3) != 0 && (x.y * p3(eta) * g).is_integer() {
            tag.h = true;
        }
    }
    if let (Some(l1), Some(l2)) = (as_unit(x.x * p3(1) * g), as_unit(x.y * p3(eta + 1) * g)) {
        if l1.rem_euclid(3) != 0 && l2.rem_euclid(3) != 0 {
            tag.g = true;
        }
    }
    if let (Some(l1), Some(l2)) = (as_unit(x.x * p3(1)), as_unit(x.y * p3(eta + 1))) {
        if l1.rem_euclid(3) != 0 && l2.rem_euclid(3) != 0 {
            if l1.rem_euclid(3) == l2.rem_euclid(3) {
                tag.g1 = true;
            } else {
                tag.g2 = true;
            }
        }
    }
    tag
}

/// The three reference triples with entries in thirds:
/// `J0 = {0,(1/3,0),(2/3,0)}`, `J1 = {0,(1/3,2/3),(2/3,1/3)}`,
/// `J2 = {0,(1/3,1/3),(2/3,2/3)}`.
pub fn j_set(i: usize) -> [QVec2; 3] {
    let t = |n: i64, m: i64| QVec2::from_fractions(n, 3, m, 3);
    match i {
        0 => [QVec2::zero(), t(1, 0), t(2, 0)],
        1 => [QVec2::zero(), t(1, 2), t(2, 1)],
        2 => [QVec2::zero(), t(1, 1), t(2, 2)],
        _ => panic!("reference triple index must be 0, 1 or 2"),
    }
}
