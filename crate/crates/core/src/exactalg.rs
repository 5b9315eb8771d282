//! Exact integer and rational 2×2 linear algebra plus the number-theoretic
//! helpers used by every other module: extended Euclid, 3-adic valuations,
//! mod-3 matrix inverses, and an exact expanding test.
//!
//! All operations are pure functions on small copyable values.

use num::rational::Ratio;
use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Exact rational scalar backing [`QVec2`] and [`QMat2`].
pub type Q = Ratio<i64>;

/// Integer 2-vector. Houses digits, spectrum elements and criterion vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct IVec2 {
    pub x: i64,
    pub y: i64,
}

impl IVec2 {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    pub const ZERO: IVec2 = IVec2 { x: 0, y: 0 };

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn add(&self, other: &IVec2) -> IVec2 {
        IVec2::new(self.x + other.x, self.y + other.y)
    }

    pub fn sub(&self, other: &IVec2) -> IVec2 {
        IVec2::new(self.x - other.x, self.y - other.y)
    }

    pub fn scale(&self, k: i64) -> IVec2 {
        IVec2::new(self.x * k, self.y * k)
    }

    pub fn norm2(&self) -> f64 {
        ((self.x * self.x + self.y * self.y) as f64).sqrt()
    }
}

impl From<[i64; 2]> for IVec2 {
    fn from(v: [i64; 2]) -> Self {
        IVec2::new(v[0], v[1])
    }
}

impl From<IVec2> for [i64; 2] {
    fn from(v: IVec2) -> Self {
        [v.x, v.y]
    }
}

impl std::fmt::Display for IVec2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Integer 2×2 matrix in row-major order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[[i64; 2]; 2]", into = "[[i64; 2]; 2]")]
pub struct IMat2 {
    pub a11: i64,
    pub a12: i64,
    pub a21: i64,
    pub a22: i64,
}

impl IMat2 {
    pub const fn new(a11: i64, a12: i64, a21: i64, a22: i64) -> Self {
        Self { a11, a12, a21, a22 }
    }

    pub const fn identity() -> Self {
        Self::new(1, 0, 0, 1)
    }

    /// Matrix with the given column vectors.
    pub fn from_columns(c1: &IVec2, c2: &IVec2) -> Self {
        Self::new(c1.x, c2.x, c1.y, c2.y)
    }

    pub fn det(&self) -> i64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn trace(&self) -> i64 {
        self.a11 + self.a22
    }

    pub fn transpose(&self) -> IMat2 {
        IMat2::new(self.a11, self.a21, self.a12, self.a22)
    }

    /// Adjugate, so that `self * adjugate = det * I`.
    pub fn adjugate(&self) -> IMat2 {
        IMat2::new(self.a22, -self.a12, -self.a21, self.a11)
    }

    pub fn mul(&self, other: &IMat2) -> IMat2 {
        IMat2::new(
            self.a11 * other.a11 + self.a12 * other.a21,
            self.a11 * other.a12 + self.a12 * other.a22,
            self.a21 * other.a11 + self.a22 * other.a21,
            self.a21 * other.a12 + self.a22 * other.a22,
        )
    }

    pub fn add(&self, other: &IMat2) -> IMat2 {
        IMat2::new(
            self.a11 + other.a11,
            self.a12 + other.a12,
            self.a21 + other.a21,
            self.a22 + other.a22,
        )
    }

    pub fn scale(&self, k: i64) -> IMat2 {
        IMat2::new(self.a11 * k, self.a12 * k, self.a21 * k, self.a22 * k)
    }

    pub fn mul_vec(&self, v: &IVec2) -> IVec2 {
        IVec2::new(
            self.a11 * v.x + self.a12 * v.y,
            self.a21 * v.x + self.a22 * v.y,
        )
    }

    /// Entrywise residues in `{0, 1, 2}`.
    pub fn mod3(&self) -> IMat2 {
        IMat2::new(
            self.a11.rem_euclid(3),
            self.a12.rem_euclid(3),
            self.a21.rem_euclid(3),
            self.a22.rem_euclid(3),
        )
    }

    /// Exact expanding test: both eigenvalues have modulus strictly greater
    /// than one. With `t = trace` and `d = det`, complex eigenvalues
    /// (`t² < 4d`) have squared modulus `d`; for real eigenvalues the
    /// characteristic polynomial is checked at `±1` against the sign of `d`.
    /// Entirely in integer arithmetic, so there are no ties at modulus one.
    pub fn is_expanding(&self) -> bool {
        let t = self.trace() as i128;
        let d = self.det() as i128;
        if t * t < 4 * d {
            d > 1
        } else {
            d.abs() > 1 && (d - t + 1) * d > 0 && (d + t + 1) * d > 0
        }
    }

    /// Floating-point eigenvalue moduli, ordered `min, max`.
    pub fn eigen_moduli(&self) -> (f64, f64) {
        let t = self.trace() as f64;
        let d = self.det() as f64;
        let disc = t * t - 4.0 * d;
        if disc < 0.0 {
            let m = d.sqrt();
            (m, m)
        } else {
            let r = disc.sqrt();
            let l1 = ((t + r) / 2.0).abs();
            let l2 = ((t - r) / 2.0).abs();
            (l1.min(l2), l1.max(l2))
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == IMat2::identity()
    }
}

impl From<[[i64; 2]; 2]> for IMat2 {
    fn from(m: [[i64; 2]; 2]) -> Self {
        IMat2::new(m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

impl From<IMat2> for [[i64; 2]; 2] {
    fn from(m: IMat2) -> Self {
        [[m.a11, m.a12], [m.a21, m.a22]]
    }
}

impl std::fmt::Display for IMat2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a11, self.a12, self.a21, self.a22)
    }
}

fn q_to_string(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn q_from_string(s: &str) -> std::result::Result<Q, String> {
    let parse = |t: &str| t.trim().parse::<i64>().map_err(|e| e.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let den = parse(d)?;
            if den == 0 {
                return Err("zero denominator".into());
            }
            Ok(Ratio::new(parse(n)?, den))
        }
        None => Ok(Ratio::from_integer(parse(s)?)),
    }
}

/// Exact rational 2-vector. Houses zero-set points and transported spectra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QVec2 {
    pub x: Q,
    pub y: Q,
}

impl QVec2 {
    pub fn new(x: Q, y: Q) -> Self {
        Self { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Self::new(Ratio::from_integer(x), Ratio::from_integer(y))
    }

    pub fn from_fractions(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        Self::new(Ratio::new(xn, xd), Ratio::new(yn, yd))
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn add(&self, other: &QVec2) -> QVec2 {
        QVec2::new(self.x + other.x, self.y + other.y)
    }

    pub fn sub(&self, other: &QVec2) -> QVec2 {
        QVec2::new(self.x - other.x, self.y - other.y)
    }

    /// Componentwise fractional part, landing in `[0, 1)²`.
    pub fn frac(&self) -> QVec2 {
        QVec2::new(self.x - self.x.floor(), self.y - self.y.floor())
    }

    pub fn is_integral(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }

    pub fn to_ivec(&self) -> Option<IVec2> {
        if self.is_integral() {
            Some(IVec2::new(self.x.to_integer(), self.y.to_integer()))
        } else {
            None
        }
    }

    pub fn from_ivec(v: &IVec2) -> Self {
        Self::from_ints(v.x, v.y)
    }
}

impl Serialize for QVec2 {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        [q_to_string(&self.x), q_to_string(&self.y)].serialize(ser)
    }
}

impl<'de> Deserialize<'de> for QVec2 {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let [x, y] = <[String; 2]>::deserialize(de)?;
        Ok(QVec2::new(
            q_from_string(&x).map_err(serde::de::Error::custom)?,
            q_from_string(&y).map_err(serde::de::Error::custom)?,
        ))
    }
}

impl std::fmt::Display for QVec2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", q_to_string(&self.x), q_to_string(&self.y))
    }
}

/// Exact rational 2×2 matrix in row-major order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QMat2 {
    pub a11: Q,
    pub a12: Q,
    pub a21: Q,
    pub a22: Q,
}

impl QMat2 {
    pub fn new(a11: Q, a12: Q, a21: Q, a22: Q) -> Self {
        Self { a11, a12, a21, a22 }
    }

    pub fn identity() -> Self {
        Self::from_imat(&IMat2::identity())
    }

    pub fn from_imat(m: &IMat2) -> Self {
        Self::new(
            Ratio::from_integer(m.a11),
            Ratio::from_integer(m.a12),
            Ratio::from_integer(m.a21),
            Ratio::from_integer(m.a22),
        )
    }

    pub fn diag(x: Q, y: Q) -> Self {
        Self::new(x, Q::zero(), Q::zero(), y)
    }

    pub fn det(&self) -> Q {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn transpose(&self) -> QMat2 {
        QMat2::new(self.a11, self.a21, self.a12, self.a22)
    }

    pub fn mul(&self, other: &QMat2) -> QMat2 {
        QMat2::new(
            self.a11 * other.a11 + self.a12 * other.a21,
            self.a11 * other.a12 + self.a12 * other.a22,
            self.a21 * other.a11 + self.a22 * other.a21,
            self.a21 * other.a12 + self.a22 * other.a22,
        )
    }

    pub fn mul_vec(&self, v: &QVec2) -> QVec2 {
        QVec2::new(
            self.a11 * v.x + self.a12 * v.y,
            self.a21 * v.x + self.a22 * v.y,
        )
    }

    /// Exact inverse; errors on a singular matrix.
    pub fn inverse(&self) -> Result<QMat2> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(QMat2::new(
            self.a22 / det,
            -self.a12 / det,
            -self.a21 / det,
            self.a11 / det,
        ))
    }

    pub fn is_integral(&self) -> bool {
        self.a11.is_integer()
            && self.a12.is_integer()
            && self.a21.is_integer()
            && self.a22.is_integer()
    }

    pub fn to_imat(&self) -> Option<IMat2> {
        if self.is_integral() {
            Some(IMat2::new(
                self.a11.to_integer(),
                self.a12.to_integer(),
                self.a21.to_integer(),
                self.a22.to_integer(),
            ))
        } else {
            None
        }
    }
}

impl Serialize for QMat2 {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        [
            [q_to_string(&self.a11), q_to_string(&self.a12)],
            [q_to_string(&self.a21), q_to_string(&self.a22)],
        ]
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for QMat2 {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let [[a11, a12], [a21, a22]] = <[[String; 2]; 2]>::deserialize(de)?;
        let q = |s: &str| q_from_string(s).map_err(serde::de::Error::custom::<String>);
        Ok(QMat2::new(q(&a11)?, q(&a12)?, q(&a21)?, q(&a22)?))
    }
}

/// 3-adic valuation: `n = 3^s · c` with `3 ∤ c`, or `Infinite` for `n = 0`.
///
/// The infinite value compares above every finite exponent, matching the
/// convention that a vanishing lower-left entry satisfies `s ≥ η` for any η.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Val3 {
    Infinite,
    Finite { s: u32, c: i64 },
}

impl Val3 {
    pub fn exponent(&self) -> Option<u32> {
        match self {
            Val3::Infinite => None,
            Val3::Finite { s, .. } => Some(*s),
        }
    }

    pub fn unit(&self) -> i64 {
        match self {
            Val3::Infinite => 0,
            Val3::Finite { c, .. } => *c,
        }
    }

    /// `s ≥ bound`, with `Infinite` counting as larger than everything.
    pub fn ge(&self, bound: u32) -> bool {
        match self {
            Val3::Infinite => true,
            Val3::Finite { s, .. } => *s >= bound,
        }
    }
}

impl std::fmt::Display for Val3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Val3::Infinite => write!(f, "INFINITE"),
            Val3::Finite { s, .. } => write!(f, "{s}"),
        }
    }
}

/// `val3(n)` splits `n = 3^s · c` with `3 ∤ c`; `val3(0)` is infinite.
pub fn val3(n: i64) -> Val3 {
    if n == 0 {
        return Val3::Infinite;
    }
    let mut s = 0;
    let mut c = n;
    while c % 3 == 0 {
        c /= 3;
        s += 1;
    }
    Val3::Finite { s, c }
}

/// Extended Euclid with a deterministic normalization: returns
/// `(g, p, q)` with `g = gcd(a, b) > 0` and `p·a + q·b = g`. When `b ≠ 0`
/// the coefficient `p` is the unique representative in `(0, |b|/g]`, so the
/// output is independent of the reduction path.
pub fn bezout(a: i64, b: i64) -> Result<(i64, i64, i64)> {
    if a == 0 && b == 0 {
        return Err(Error::DegenerateInput("bezout(0, 0)"));
    }
    if b == 0 {
        return Ok((a.abs(), a.signum(), 0));
    }
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let quot = r0 / r1;
        (r0, r1) = (r1, r0 - quot * r1);
        (s0, s1) = (s1, s0 - quot * s1);
    }
    let (g, mut p) = if r0 < 0 { (-r0, -s0) } else { (r0, s0) };
    let modulus = (b / g).abs();
    p = p.rem_euclid(modulus);
    if p == 0 {
        p = modulus;
    }
    let q = ((g as i128 - p as i128 * a as i128) / b as i128) as i64;
    Ok((g, p, q))
}

/// Inverse of `R` modulo 3: the unique `A` with entries in `{0,1,2}` and
/// `A·R ≡ R·A ≡ I (mod 3)`. Errors when `det R ≡ 0 (mod 3)`.
pub fn mod3_inverse(r: &IMat2) -> Result<IMat2> {
    let det = r.det().rem_euclid(3);
    if det == 0 {
        return Err(Error::SingularMod3);
    }
    // 1 and 2 are their own inverses mod 3.
    let adj = r.adjugate();
    Ok(adj.scale(det).mod3())
}

/// Free-function form of [`IMat2::is_expanding`].
pub fn is_expanding(m: &IMat2) -> bool {
    m.is_expanding()
}

/// `Q · M · Q⁻¹` when every entry of the conjugate is an integer, else an
/// error. `Q` must be invertible.
pub fn integer_conjugate(m: &IMat2, q: &QMat2) -> Result<IMat2> {
    let inv = q.inverse()?;
    let conj = q.mul(&QMat2::from_imat(m)).mul(&inv);
    conj.to_imat().ok_or(Error::NonIntegralConjugate)
}
