//! Mod-3 residue decomposition of the reduced matrix and the region tags
//! that drive the verdict.
//!
//! A reduced matrix with `det ∈ 3ℤ` splits uniquely as
//! `M̃ = 3·[[a, b], [3^{s−1}c, d]] + M_k` where the entries of `M_k` are the
//! residues of `M̃` mod 3 and `c` is either 0 or coprime to 3. Exactly ten
//! residue patterns are compatible with `det ≡ 0 (mod 3)`; the pattern index
//! `k` together with the valuation `s` of the lower-left entry and the
//! parameter `η` of the digit set determines the region.

use serde::{Deserialize, Serialize};

use crate::exactalg::{val3, IMat2, Val3};
use crate::{Error, Result};

/// Which digit dichotomy applies: `I` when `2σ − ω ∈ 3ℤ`, `II` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case {
    I,
    II,
}

impl std::fmt::Display for Case {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Case::I => write!(f, "I"),
            Case::II => write!(f, "II"),
        }
    }
}

/// Residue decomposition of a reduced matrix with `det ∈ 3ℤ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassDecomposition {
    /// Residue class index in `1..=10`.
    pub k: u8,
    /// Nonzero residues, present per class: numbered by position
    /// top-left, top-right, lower-left, lower-right.
    pub p1: Option<u8>,
    pub p2: Option<u8>,
    pub p3: Option<u8>,
    pub p4: Option<u8>,
    /// Valuation of the lower-left entry of `M̃ − M_k` (infinite when that
    /// entry vanishes).
    pub s: Val3,
    /// For `k ∈ {4, 6, 8, 10}` no verdict consults `s`; it is still
    /// reported for the trace but flagged here.
    pub s_relevant: bool,
    pub a: i64,
    pub b: i64,
    pub d: i64,
}

impl ClassDecomposition {
    /// The residue matrix `M_k`.
    pub fn residue_matrix(&self) -> IMat2 {
        IMat2::new(
            self.p1.unwrap_or(0) as i64,
            self.p2.unwrap_or(0) as i64,
            self.p3.unwrap_or(0) as i64,
            self.p4.unwrap_or(0) as i64,
        )
    }

    /// Rebuild the matrix from the decomposition, the identity the
    /// invariants pin down: `M̃ = 3·[[a, b], [3^{s−1}c, d]] + M_k`.
    pub fn reconstruct(&self) -> IMat2 {
        let lower_left = match self.s {
            Val3::Infinite => 0,
            Val3::Finite { s, c } => 3i64.pow(s - 1) * c,
        };
        IMat2::new(self.a, self.b, lower_left, self.d)
            .scale(3)
            .add(&self.residue_matrix())
    }
}

/// Region tags: `B`, `B1`, `B2` partition case I and `R1`, `R2`, `R3`
/// partition case II.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegionTag {
    B,
    B1,
    B2,
    R1,
    R2,
    R3,
}

impl std::fmt::Display for RegionTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RegionTag::B => "B",
            RegionTag::B1 => "B1",
            RegionTag::B2 => "B2",
            RegionTag::R1 => "R1",
            RegionTag::R2 => "R2",
            RegionTag::R3 => "R3",
        };
        write!(f, "{s}")
    }
}

/// Decompose a matrix with `det ∈ 3ℤ` into its residue class. The class
/// index is determined by which entries are nonzero mod 3:
///
/// ```text
/// k=1: ----    k=2: p1 ---   k=3: -- p2   k=4: ----    k=5:  ----
///      ----         -- --         -- --        p3 --         -- p4
/// k=6: p1 --  k=7: p1 p2    k=8: ----     k=9: -- p2   k=10: p1 p2
///      p3 --       -- --         p3 p4         -- p4         p3 p4
/// ```
///
/// with `p1·p4 − p2·p3 ∈ 3ℤ` forced in class 10.
pub fn decompose(m_tilde: &IMat2) -> Result<ClassDecomposition> {
    if m_tilde.det().rem_euclid(3) != 0 {
        return Err(Error::WrongBranch("residue decomposition needs det in 3Z"));
    }
    let r = m_tilde.mod3();
    let nz = |v: i64| -> Option<u8> {
        if v == 0 {
            None
        } else {
            Some(v as u8)
        }
    };
    let (p1, p2, p3, p4) = (nz(r.a11), nz(r.a12), nz(r.a21), nz(r.a22));
    let pattern = (
        p1.is_some(),
        p2.is_some(),
        p3.is_some(),
        p4.is_some(),
    );
    let k: u8 = match pattern {
        (false, false, false, false) => 1,
        (true, false, false, false) => 2,
        (false, true, false, false) => 3,
        (false, false, true, false) => 4,
        (false, false, false, true) => 5,
        (true, false, true, false) => 6,
        (true, true, false, false) => 7,
        (false, false, true, true) => 8,
        (false, true, false, true) => 9,
        (true, true, true, true) => 10,
        // the remaining patterns all have det ≢ 0 (mod 3)
        _ => return Err(Error::WrongBranch("residue pattern incompatible with det in 3Z")),
    };
    let s_relevant = !matches!(k, 4 | 6 | 8 | 10);
    let lower_left_rest = m_tilde.a21 - r.a21;
    debug_assert_eq!(lower_left_rest.rem_euclid(3), 0);
    let s = val3(lower_left_rest);
    debug_assert!(s.ge(1));
    Ok(ClassDecomposition {
        k,
        p1,
        p2,
        p3,
        p4,
        s,
        s_relevant,
        a: (m_tilde.a11 - r.a11) / 3,
        b: (m_tilde.a12 - r.a12) / 3,
        d: (m_tilde.a22 - r.a22) / 3,
    })
}

/// Resolve the region from the class, the valuation `s` and the digit
/// parameter `η ≥ 1`. An infinite `s` counts as `s ≥ η`.
pub fn region(dec: &ClassDecomposition, eta: u32, case: Case) -> RegionTag {
    debug_assert!(eta >= 1);
    match case {
        Case::I => match dec.k {
            2 | 7 => {
                if dec.s.ge(eta) {
                    RegionTag::B
                } else {
                    RegionTag::B2
                }
            }
            _ => RegionTag::B1,
        },
        Case::II => match dec.k {
            4 | 6 | 8 | 10 => RegionTag::R1,
            _ => {
                if dec.s.ge(eta) {
                    RegionTag::R3
                } else {
                    RegionTag::R2
                }
            }
        },
    }
}
