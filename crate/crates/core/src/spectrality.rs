//! The decision core: exact Hadamard-triple checking, the two divisibility
//! criteria, the finite-orthogonality orbit oracle, witness construction and
//! search, the top-level decision tree, and truncated spectra.
//!
//! Every `SPECTRAL` verdict carries a certificate `(Q, M̄, D̄, S)` with
//! `M̄ = Q·M̃·Q⁻¹`, `D̄ = Q·D̃`, and `(M̄, D̄, S)` validated as a Hadamard
//! triple before the verdict is returned. `NOT_SPECTRAL` verdicts carry the
//! failing criterion vector, a finite-orthogonality orbit proof, or the
//! region that excludes a spectrum. Collinear digit sets fall outside the
//! decided theory except for a sufficient condition; they resolve to
//! dedicated `OPEN_*` statuses rather than a guess.

use std::collections::{BTreeSet, HashMap};

use num::BigRational;
use serde::{Deserialize, Serialize};

use crate::canonical::{
    canonicalize_with_bezout_shift, conjugate_canonical_pair, q_n, CanonicalForm,
};
use crate::classify::{decompose, region, Case, ClassDecomposition, RegionTag};
use crate::exactalg::{mod3_inverse, IMat2, IVec2, QMat2, QVec2};
use crate::maskzero::{
    j_set, mask_is_zero_exact, normalize_digits, zero_set_fundamental, Digits3,
};
use crate::{Error, Result};

/// Decision outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "SPECTRAL")]
    Spectral,
    #[serde(rename = "NOT_SPECTRAL")]
    NotSpectral,
    /// Collinear digits, nonempty zero set, `det M ∈ 3ℤ`: spectral by a
    /// sufficient condition, with necessity unresolved.
    #[serde(rename = "OPEN_COLLINEAR_SPECTRAL_SUFFICIENT")]
    OpenCollinearSpectralSufficient,
    /// Collinear digits, nonempty zero set, `det M ∉ 3ℤ`: undecided.
    #[serde(rename = "OPEN_COLLINEAR_UNKNOWN")]
    OpenCollinearUnknown,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Status::Spectral => "SPECTRAL",
            Status::NotSpectral => "NOT_SPECTRAL",
            Status::OpenCollinearSpectralSufficient => "OPEN_COLLINEAR_SPECTRAL_SUFFICIENT",
            Status::OpenCollinearUnknown => "OPEN_COLLINEAR_UNKNOWN",
        };
        write!(f, "{s}")
    }
}

/// Which rule of the decision tree settled the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    #[serde(rename = "LIU_WANG")]
    LiuWang,
    #[serde(rename = "DET_NOT_3Z")]
    DetNot3Z,
    #[serde(rename = "CASE_I")]
    CaseI,
    #[serde(rename = "CASE_II")]
    CaseII,
    #[serde(rename = "COLLINEAR")]
    Collinear,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Branch::LiuWang => "LIU_WANG",
            Branch::DetNot3Z => "DET_NOT_3Z",
            Branch::CaseI => "CASE_I",
            Branch::CaseII => "CASE_II",
            Branch::Collinear => "COLLINEAR",
        };
        write!(f, "{s}")
    }
}

/// Spectrality certificate: `(M̄, D̄, S)` is a Hadamard triple with
/// `M̄ = Q·M̃·Q⁻¹` and `D̄ = Q·D̃`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub q: QMat2,
    pub m_bar: IMat2,
    pub d_bar: Digits3,
    pub s: [IVec2; 3],
    /// How the witness was found: `"reference-triple"`, `"box-search"` or
    /// `"zero-set-search"`.
    pub witness_source: String,
}

/// Record of a divisibility criterion evaluation `(A·M·B)^*(1,−1)^t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionRecord {
    /// `"direct"` for the unreduced digit matrix, `"reduced"` for the
    /// conjugated canonical pair.
    pub stage: String,
    pub a: IMat2,
    pub b: IMat2,
    pub v: IVec2,
    pub pass: bool,
}

/// One fundamental zero point whose scaled orbit closes without meeting the
/// integer lattice: `M^{*j} z ∉ ℤ²` for every `j ≥ 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitClosure {
    pub point: QVec2,
    pub tail: u32,
    pub period: u32,
}

/// A witnessing integral hit `M^{*j} z ∈ ℤ²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitHit {
    pub point: QVec2,
    pub j: u32,
    /// The integral image, absent only if it overflows 64-bit integers.
    pub image: Option<IVec2>,
}

/// Outcome of the orbit scan behind the finite-orthogonality test. The
/// orbits of the scaled zero set live in `(ℤ/N)²` for `N = 3·|det B|`, so
/// cycle detection decides the universally quantified statement exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitEvidence {
    pub modulus: i64,
    /// True when every orbit avoids the integer lattice, i.e. only finitely
    /// many mutually orthogonal exponentials exist.
    pub finite: bool,
    pub hit: Option<OrbitHit>,
    pub closed_orbits: Vec<OrbitClosure>,
}

/// Why a verdict is negative or open.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Reason {
    /// The governing criterion vector is not in `3ℤ²`.
    #[serde(rename = "CRITERION_VECTOR")]
    CriterionVector { v: IVec2 },
    /// Only finitely many orthogonal exponentials exist.
    #[serde(rename = "FINITE_ORTHOGONALS")]
    FiniteOrthogonals {
        evidence: OrbitEvidence,
        region: Option<RegionTag>,
    },
    /// The reduced matrix lies in a region with no spectrum.
    #[serde(rename = "REGION")]
    Region { tag: RegionTag },
    /// Collinear digits whose mask has an empty zero set: no two
    /// exponentials are orthogonal.
    #[serde(rename = "COLLINEAR_EMPTY_ZERO_SET")]
    CollinearEmptyZeroSet { a: i64, b: i64, direction: IVec2 },
    /// Collinear digits with nonempty zero set; outside the decided theory.
    #[serde(rename = "COLLINEAR_OPEN")]
    CollinearOpen {
        a: i64,
        b: i64,
        direction: IVec2,
        det_m_multiple_of_3: bool,
        note: String,
    },
}

/// Decision outcome with certificate or reason and an ordered trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub branch: Branch,
    pub criterion: Option<CriterionRecord>,
    pub certificate: Option<Certificate>,
    pub reason: Option<Reason>,
    pub trace: Vec<(String, String)>,
}

/// Truncated spectrum level `Λ_k = {Σ_{j<k} M^{*j} s_j : s_j ∈ S}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumLevel {
    pub depth: u32,
    pub points: Vec<IVec2>,
}

/// Exact Hadamard-triple test: the 3×3 matrix
/// `(1/√3)[e^{2πi⟨M⁻¹d, s⟩}]` is unitary iff for every pair `s ≠ s′` in `S`
/// the mask of `D` vanishes at `M^{*−1}(s − s′)`. Row normalization is
/// automatic, so column orthogonality is the whole test.
pub fn is_hadamard(m: &IMat2, d: &Digits3, s: &[IVec2; 3]) -> Result<bool> {
    if s[0] == s[1] || s[0] == s[2] || s[1] == s[2] {
        return Err(Error::DuplicateSpectrumDigits);
    }
    let inv_t = QMat2::from_imat(&m.transpose()).inverse()?;
    for i in 0..3 {
        for j in (i + 1)..3 {
            let diff = s[i].sub(&s[j]);
            let x = inv_t.mul_vec(&QVec2::from_ivec(&diff));
            if !mask_is_zero_exact(d, &x) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Structural witness from the reference triples: the smallest `i` with
/// `(J_i − J_i)\{0}` inside the mask zero set and `M̃^* J_i ⊂ ℤ²` yields
/// `S = M̃^* J_i`.
pub fn j_witness(m_tilde: &IMat2, d_tilde: &Digits3) -> Option<[IVec2; 3]> {
    let mt = QMat2::from_imat(&m_tilde.transpose());
    'candidates: for i in 0..3 {
        let js = j_set(i);
        for a in 0..3 {
            for b in 0..3 {
                if a == b {
                    continue;
                }
                if !mask_is_zero_exact(d_tilde, &js[a].sub(&js[b])) {
                    continue 'candidates;
                }
            }
        }
        let mut out = [IVec2::ZERO; 3];
        for (slot, p) in js.iter().enumerate() {
            match mt.mul_vec(p).to_ivec() {
                Some(v) => out[slot] = v,
                None => continue 'candidates,
            }
        }
        return Some(out);
    }
    None
}

/// Exhaustive fallback witness search over the box `[−bound, bound]²`:
/// returns the lexicographically smallest `S = {0, s1, s2}` passing
/// [`is_hadamard`], or none. A non-positive bound yields an empty box.
pub fn search_hadamard_s(m: &IMat2, d: &Digits3, bound: i64) -> Result<Option<[IVec2; 3]>> {
    let inv_t = QMat2::from_imat(&m.transpose()).inverse()?;
    let mut singles = Vec::new();
    for x in -bound..=bound {
        for y in -bound..=bound {
            let v = IVec2::new(x, y);
            if v.is_zero() {
                continue;
            }
            if mask_is_zero_exact(d, &inv_t.mul_vec(&QVec2::from_ivec(&v))) {
                singles.push(v);
            }
        }
    }
    // `singles` is lexicographically sorted by construction.
    for i in 0..singles.len() {
        for j in (i + 1)..singles.len() {
            let diff = singles[i].sub(&singles[j]);
            if mask_is_zero_exact(d, &inv_t.mul_vec(&QVec2::from_ivec(&diff))) {
                return Ok(Some([IVec2::ZERO, singles[i], singles[j]]));
            }
        }
    }
    Ok(None)
}

/// Complete witness search through the fundamental zero set. Any Hadamard
/// `S = {0, s1, s2}` reduces modulo `M^*ℤ²` to `s_i = M^* z_i` with `z_i`
/// fundamental zero points whose difference is again in the zero set, so
/// scanning pairs of zero points decides admissibility outright.
pub fn witness_from_zero_set(m: &IMat2, d: &Digits3) -> Result<Option<[IVec2; 3]>> {
    let zs = zero_set_fundamental(d)?;
    let zset: BTreeSet<QVec2> = zs.iter().copied().collect();
    let mt = QMat2::from_imat(&m.transpose());
    let images: Vec<Option<IVec2>> = zs.iter().map(|z| mt.mul_vec(z).to_ivec()).collect();
    for i in 0..zs.len() {
        let Some(s1) = images[i] else { continue };
        for j in 0..zs.len() {
            if i == j {
                continue;
            }
            let Some(s2) = images[j] else { continue };
            if zset.contains(&zs[i].sub(&zs[j]).frac()) {
                return Ok(Some([IVec2::ZERO, s1, s2]));
            }
        }
    }
    Ok(None)
}

/// Decide whether only finitely many mutually orthogonal exponentials exist:
/// true iff `M^{*j} z ∉ ℤ²` for every fundamental zero point `z` and every
/// `j ≥ 1`, settled by cycle detection in `(ℤ/N)²`, `N = 3·|det B|`.
pub fn finite_orthogonals(m: &IMat2, d: &Digits3) -> Result<bool> {
    Ok(finite_orthogonals_evidence(m, d)?.finite)
}

/// [`finite_orthogonals`] with the orbit proof attached.
pub fn finite_orthogonals_evidence(m: &IMat2, d: &Digits3) -> Result<OrbitEvidence> {
    let det_b = d.det();
    if det_b == 0 {
        return Err(Error::CollinearDigits);
    }
    let modulus = 3 * det_b.abs();
    let mt = m.transpose();
    let step = |w: (i64, i64)| -> (i64, i64) {
        (
            (mt.a11 * w.0 + mt.a12 * w.1).rem_euclid(modulus),
            (mt.a21 * w.0 + mt.a22 * w.1).rem_euclid(modulus),
        )
    };
    let mut closed = Vec::new();
    for z in zero_set_fundamental(d)? {
        // scaled representative N·z in (Z/N)²
        let w0 = (
            (z.x * num::rational::Ratio::from_integer(modulus)).to_integer().rem_euclid(modulus),
            (z.y * num::rational::Ratio::from_integer(modulus)).to_integer().rem_euclid(modulus),
        );
        let mut seen: HashMap<(i64, i64), u32> = HashMap::new();
        seen.insert(w0, 0);
        let mut w = w0;
        let mut j = 0u32;
        loop {
            w = step(w);
            j += 1;
            if w == (0, 0) {
                let image = exact_orbit_image(&mt, &z, j);
                return Ok(OrbitEvidence {
                    modulus,
                    finite: false,
                    hit: Some(OrbitHit { point: z, j, image }),
                    closed_orbits: Vec::new(),
                });
            }
            if let Some(&first) = seen.get(&w) {
                closed.push(OrbitClosure {
                    point: z,
                    tail: first,
                    period: j - first,
                });
                break;
            }
            seen.insert(w, j);
        }
    }
    Ok(OrbitEvidence {
        modulus,
        finite: true,
        hit: None,
        closed_orbits: closed,
    })
}

fn exact_orbit_image(mt: &IMat2, z: &QVec2, j: u32) -> Option<IVec2> {
    let big = |n: i64| BigRational::from_integer(n.into());
    let conv = |q: &crate::exactalg::Q| {
        BigRational::new((*q.numer()).into(), (*q.denom()).into())
    };
    let (a11, a12, a21, a22) = (big(mt.a11), big(mt.a12), big(mt.a21), big(mt.a22));
    let (mut x, mut y) = (conv(&z.x), conv(&z.y));
    for _ in 0..j {
        (x, y) = (&a11 * &x + &a12 * &y, &a21 * &x + &a22 * &y);
    }
    if !x.is_integer() || !y.is_integer() {
        return None;
    }
    use num::ToPrimitive;
    Some(IVec2::new(
        x.to_integer().to_i64()?,
        y.to_integer().to_i64()?,
    ))
}

/// Outcome of [`liu_wang_criterion`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiuWangOutcome {
    pub a: IMat2,
    pub v: IVec2,
    pub pass: bool,
}

/// The divisibility criterion for `det B ∉ 3ℤ`: with `A` the mod-3 inverse
/// of the digit matrix `B`, spectrality is equivalent to
/// `(A·M·B)^*(1,−1)^t ∈ 3ℤ²`.
pub fn liu_wang_criterion(m: &IMat2, d: &Digits3) -> Result<LiuWangOutcome> {
    let b = d.b_matrix();
    if b.det().rem_euclid(3) == 0 {
        return Err(Error::WrongBranch("criterion needs det B coprime to 3"));
    }
    let a = mod3_inverse(&b)?;
    let v = a.mul(m).mul(&b).transpose().mul_vec(&IVec2::new(1, -1));
    let pass = v.x.rem_euclid(3) == 0 && v.y.rem_euclid(3) == 0;
    Ok(LiuWangOutcome { a, v, pass })
}

/// Outcome of [`reduced_pair_criterion`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedCriterionOutcome {
    pub a: IMat2,
    pub b: IMat2,
    pub m_bar: IMat2,
    pub v: IVec2,
    pub pass: bool,
}

/// The criterion on the `Q_η`-conjugated canonical pair, applicable when
/// `2σ − ω ∉ 3ℤ` and the reduced matrix sits in region `R3`. Uses the
/// explicit representatives `B = [[σ, ω], [0, ϑ]]` and
/// `A = σϑ·[[ϑ, −ω], [0, σ]]`; the pass bit only depends on `A` mod 3.
pub fn reduced_pair_criterion(
    cf: &CanonicalForm,
    dec: &ClassDecomposition,
) -> Result<ReducedCriterionOutcome> {
    reduced_pair_criterion_with(cf, dec, &IMat2::new(0, 0, 0, 0))
}

/// [`reduced_pair_criterion`] with `A` replaced by `A + 3·a_shift`, used to
/// exercise representative invariance.
pub fn reduced_pair_criterion_with(
    cf: &CanonicalForm,
    dec: &ClassDecomposition,
    a_shift: &IMat2,
) -> Result<ReducedCriterionOutcome> {
    if cf.digit_case_aligned() {
        return Err(Error::WrongBranch("reduced criterion needs 2σ−ω not in 3Z"));
    }
    if cf.eta < 1 || region(dec, cf.eta, Case::II) != RegionTag::R3 {
        return Err(Error::WrongBranch("reduced criterion needs region R3"));
    }
    let (m_bar, _) = conjugate_canonical_pair(cf, cf.eta)?;
    let b = IMat2::new(cf.sigma, cf.omega, 0, cf.theta);
    let a = IMat2::new(cf.theta, -cf.omega, 0, cf.sigma)
        .scale(cf.sigma * cf.theta)
        .add(&a_shift.scale(3));
    let v = a.mul(&m_bar).mul(&b).transpose().mul_vec(&IVec2::new(1, -1));
    let pass = v.x.rem_euclid(3) == 0 && v.y.rem_euclid(3) == 0;
    Ok(ReducedCriterionOutcome { a, b, m_bar, v, pass })
}

/// All `3^k` truncated sums `Σ_{j<k} M^{*j} s_j`, deduplicated and sorted.
/// For a Hadamard triple the cardinality is exactly `3^k`.
pub fn spectrum_truncated(m: &IMat2, s: &[IVec2; 3], depth: u32) -> Result<SpectrumLevel> {
    if depth == 0 {
        return Err(Error::DegenerateInput("spectrum depth must be at least 1"));
    }
    if !s.iter().any(IVec2::is_zero) {
        return Err(Error::DegenerateInput("spectrum digits must contain 0"));
    }
    if s[0] == s[1] || s[0] == s[2] || s[1] == s[2] {
        return Err(Error::DuplicateSpectrumDigits);
    }
    if depth > 14 {
        // 3^15 > 10^7
        return Err(Error::DepthCap(depth));
    }
    let mt = m.transpose();
    let apply = |w: (i128, i128)| -> Result<(i128, i128)> {
        let x = (mt.a11 as i128)
            .checked_mul(w.0)
            .and_then(|t| t.checked_add((mt.a12 as i128).checked_mul(w.1)?))
            .ok_or(Error::Overflow)?;
        let y = (mt.a21 as i128)
            .checked_mul(w.0)
            .and_then(|t| t.checked_add((mt.a22 as i128).checked_mul(w.1)?))
            .ok_or(Error::Overflow)?;
        Ok((x, y))
    };
    let mut level: Vec<(i128, i128)> = vec![(0, 0)];
    let mut weights: Vec<(i128, i128)> =
        s.iter().map(|v| (v.x as i128, v.y as i128)).collect();
    for stage in 0..depth {
        let mut next = Vec::with_capacity(level.len() * 3);
        for &(px, py) in &level {
            for &(wx, wy) in &weights {
                next.push((
                    px.checked_add(wx).ok_or(Error::Overflow)?,
                    py.checked_add(wy).ok_or(Error::Overflow)?,
                ));
            }
        }
        level = next;
        if stage + 1 < depth {
            weights = weights
                .iter()
                .map(|&w| apply(w))
                .collect::<Result<Vec<_>>>()?;
        }
    }
    let mut points = BTreeSet::new();
    for (x, y) in level {
        let x64 = i64::try_from(x).map_err(|_| Error::Overflow)?;
        let y64 = i64::try_from(y).map_err(|_| Error::Overflow)?;
        points.insert(IVec2::new(x64, y64));
    }
    Ok(SpectrumLevel {
        depth,
        points: points.into_iter().collect(),
    })
}

/// Top-level decision for an expanding `M` and three raw digit points.
pub fn decide(m: &IMat2, d_raw: &[IVec2; 3]) -> Result<Verdict> {
    decide_with_bezout_shift(m, d_raw, 0)
}

/// [`decide`] with a shifted Bezout representative inside the
/// canonicalization; every shift must yield the same status.
pub fn decide_with_bezout_shift(m: &IMat2, d_raw: &[IVec2; 3], shift: i64) -> Result<Verdict> {
    if !m.is_expanding() {
        return Err(Error::NotExpanding);
    }
    let mut trace: Vec<(String, String)> = Vec::new();
    let push = |trace: &mut Vec<(String, String)>, k: &str, v: String| {
        trace.push((k.to_string(), v));
    };
    let (d, translation, scale) = normalize_digits(d_raw)?;
    push(&mut trace, "normalize", format!("translation={translation} scale={scale} digits={d}"));
    let det_b = d.det();
    let det_m = m.det();
    push(&mut trace, "det_b", det_b.to_string());
    push(&mut trace, "det_m", det_m.to_string());

    if det_b == 0 {
        return collinear_verdict(&d, det_m, trace);
    }

    if det_b.rem_euclid(3) != 0 {
        let lw = liu_wang_criterion(m, &d)?;
        push(&mut trace, "branch", Branch::LiuWang.to_string());
        push(&mut trace, "criterion", format!("v={} pass={}", lw.v, lw.pass));
        if det_m.rem_euclid(3) != 0 {
            push(
                &mut trace,
                "note",
                "det M coprime to 3: finitely many orthogonal exponentials, criterion fails by necessity".to_string(),
            );
        }
        let b = d.b_matrix();
        let record = CriterionRecord {
            stage: "direct".to_string(),
            a: lw.a,
            b,
            v: lw.v,
            pass: lw.pass,
        };
        if lw.pass {
            let cf = canonicalize_with_bezout_shift(m, &d, shift)?;
            push_canonical(&mut trace, &cf);
            return spectral_verdict(Branch::LiuWang, &cf, 0, Some(record), trace);
        }
        return Ok(Verdict {
            status: Status::NotSpectral,
            branch: Branch::LiuWang,
            criterion: Some(record.clone()),
            certificate: None,
            reason: Some(Reason::CriterionVector { v: record.v }),
            trace,
        });
    }

    if det_m.rem_euclid(3) != 0 {
        push(&mut trace, "branch", Branch::DetNot3Z.to_string());
        let evidence = finite_orthogonals_evidence(m, &d)?;
        debug_assert!(evidence.finite, "orbit oracle must confirm finiteness here");
        push(&mut trace, "orbit_scan", format!("finite={} modulus={}", evidence.finite, evidence.modulus));
        return Ok(Verdict {
            status: Status::NotSpectral,
            branch: Branch::DetNot3Z,
            criterion: None,
            certificate: None,
            reason: Some(Reason::FiniteOrthogonals { evidence, region: None }),
            trace,
        });
    }

    let cf = canonicalize_with_bezout_shift(m, &d, shift)?;
    push_canonical(&mut trace, &cf);
    let dec = decompose(&cf.m_tilde)?;
    push(&mut trace, "class", format!("k={} s={} c={}", dec.k, dec.s, dec.s.unit()));
    let case = if cf.digit_case_aligned() { Case::I } else { Case::II };
    let reg = region(&dec, cf.eta, case);
    push(&mut trace, "case", case.to_string());
    push(&mut trace, "region", reg.to_string());

    match (case, reg) {
        (Case::I, RegionTag::B) => {
            push(&mut trace, "branch", Branch::CaseI.to_string());
            let evidence = finite_orthogonals_evidence(m, &d)?;
            debug_assert!(evidence.finite, "region B must have finitely many orthogonals");
            push(&mut trace, "orbit_scan", format!("finite={} modulus={}", evidence.finite, evidence.modulus));
            Ok(Verdict {
                status: Status::NotSpectral,
                branch: Branch::CaseI,
                criterion: None,
                certificate: None,
                reason: Some(Reason::FiniteOrthogonals {
                    evidence,
                    region: Some(RegionTag::B),
                }),
                trace,
            })
        }
        (Case::I, RegionTag::B1) => {
            push(&mut trace, "branch", Branch::CaseI.to_string());
            // class 3 needs one diagonal rescale; the rest certify in place
            let n = if dec.k == 3 { 1 } else { 0 };
            spectral_verdict(Branch::CaseI, &cf, n, None, trace)
        }
        (Case::I, RegionTag::B2) => {
            push(&mut trace, "branch", Branch::CaseI.to_string());
            let n = dec
                .s
                .exponent()
                .expect("region B2 forces a finite valuation");
            spectral_verdict(Branch::CaseI, &cf, n, None, trace)
        }
        (Case::II, RegionTag::R1 | RegionTag::R2) => {
            push(&mut trace, "branch", Branch::CaseII.to_string());
            Ok(Verdict {
                status: Status::NotSpectral,
                branch: Branch::CaseII,
                criterion: None,
                certificate: None,
                reason: Some(Reason::Region { tag: reg }),
                trace,
            })
        }
        (Case::II, RegionTag::R3) => {
            push(&mut trace, "branch", Branch::CaseII.to_string());
            let rc = reduced_pair_criterion(&cf, &dec)?;
            push(&mut trace, "criterion", format!("v={} pass={}", rc.v, rc.pass));
            let record = CriterionRecord {
                stage: "reduced".to_string(),
                a: rc.a,
                b: rc.b,
                v: rc.v,
                pass: rc.pass,
            };
            if rc.pass {
                spectral_verdict(Branch::CaseII, &cf, cf.eta, Some(record), trace)
            } else {
                Ok(Verdict {
                    status: Status::NotSpectral,
                    branch: Branch::CaseII,
                    criterion: Some(record.clone()),
                    certificate: None,
                    reason: Some(Reason::CriterionVector { v: record.v }),
                    trace,
                })
            }
        }
        _ => unreachable!("region tags are partitioned by case"),
    }
}

fn push_canonical(trace: &mut Vec<(String, String)>, cf: &CanonicalForm) {
    trace.push((
        "canonical".to_string(),
        format!(
            "P={} M~={} D~={} sigma={} omega={} eta={} theta={} gamma={} swapped={}",
            cf.p, cf.m_tilde, cf.d_tilde, cf.sigma, cf.omega, cf.eta, cf.theta, cf.gamma, cf.swapped
        ),
    ));
}

/// Default witness-search box: `3·max(|σ|, |ω|, 3^η·|ϑ|)`.
pub fn default_search_bound(cf: &CanonicalForm) -> i64 {
    3 * cf
        .sigma
        .abs()
        .max(cf.omega.abs())
        .max(3i64.pow(cf.eta) * cf.theta.abs())
}

fn find_witness(
    m_bar: &IMat2,
    d_bar: &Digits3,
    cf: &CanonicalForm,
) -> Result<([IVec2; 3], &'static str)> {
    if let Some(s) = j_witness(m_bar, d_bar) {
        return Ok((s, "reference-triple"));
    }
    if let Some(s) = search_hadamard_s(m_bar, d_bar, default_search_bound(cf))? {
        return Ok((s, "box-search"));
    }
    if let Some(s) = witness_from_zero_set(m_bar, d_bar)? {
        return Ok((s, "zero-set-search"));
    }
    Err(Error::WrongBranch("no admissible witness exists for this pair"))
}

fn spectral_verdict(
    branch: Branch,
    cf: &CanonicalForm,
    n: u32,
    criterion: Option<CriterionRecord>,
    mut trace: Vec<(String, String)>,
) -> Result<Verdict> {
    let (m_bar, d_bar) = conjugate_canonical_pair(cf, n)?;
    let (s, source) = find_witness(&m_bar, &d_bar, cf)?;
    trace.push(("witness".to_string(), format!("source={source} S={{{},{},{}}}", s[0], s[1], s[2])));
    let ok = is_hadamard(&m_bar, &d_bar, &s)?;
    assert!(ok, "witness must validate as a Hadamard triple");
    trace.push(("certificate_check".to_string(), "hadamard=true".to_string()));
    Ok(Verdict {
        status: Status::Spectral,
        branch,
        criterion,
        certificate: Some(Certificate {
            q: q_n(n),
            m_bar,
            d_bar,
            s,
            witness_source: source.to_string(),
        }),
        reason: None,
        trace,
    })
}

fn collinear_verdict(d: &Digits3, det_m: i64, mut trace: Vec<(String, String)>) -> Result<Verdict> {
    let d1 = d.d1();
    let g = num::integer::gcd(d1.x, d1.y);
    let direction = IVec2::new(d1.x / g, d1.y / g);
    let a = g;
    let b = if direction.x != 0 {
        d.d2().x / direction.x
    } else {
        d.d2().y / direction.y
    };
    debug_assert_eq!(direction.scale(b), d.d2());
    push_trace(&mut trace, "branch", Branch::Collinear.to_string());
    push_trace(&mut trace, "collinear", format!("direction={direction} a={a} b={b}"));
    let residues = (a.rem_euclid(3), b.rem_euclid(3));
    let nonempty_zero_set = residues == (1, 2) || residues == (2, 1);
    if !nonempty_zero_set {
        push_trace(&mut trace, "note", "mask zero set is empty: no orthogonal pair exists".to_string());
        return Ok(Verdict {
            status: Status::NotSpectral,
            branch: Branch::Collinear,
            criterion: None,
            certificate: None,
            reason: Some(Reason::CollinearEmptyZeroSet { a, b, direction }),
            trace,
        });
    }
    let det_multiple = det_m.rem_euclid(3) == 0;
    let (status, note) = if det_multiple {
        (
            Status::OpenCollinearSpectralSufficient,
            "spectral by the sufficient condition (det M divisible by 3); necessity of that condition is an open question, so no certificate is emitted",
        )
    } else {
        (
            Status::OpenCollinearUnknown,
            "outside the decided theory: det M coprime to 3 with a nonempty collinear zero set is conjectured non-spectral but unresolved",
        )
    };
    push_trace(&mut trace, "note", note.to_string());
    Ok(Verdict {
        status,
        branch: Branch::Collinear,
        criterion: None,
        certificate: None,
        reason: Some(Reason::CollinearOpen {
            a,
            b,
            direction,
            det_m_multiple_of_3: det_multiple,
            note: note.to_string(),
        }),
        trace,
    })
}

fn push_trace(trace: &mut Vec<(String, String)>, k: &str, v: String) {
    trace.push((k.to_string(), v));
}
