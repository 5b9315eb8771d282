//! Shared generators and oracles for the integration suites.

#![allow(dead_code)]

use num::Complex;
use rand::Rng;
use spectra_core::{normalize_digits, Digits3, IMat2, IVec2, QVec2};

pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec<R: Rng>(rng: &mut R, bound: i64) -> IVec2 {
    IVec2::new(rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound))
}

pub fn random_mat<R: Rng>(rng: &mut R, bound: i64) -> IMat2 {
    IMat2::new(
        rng.gen_range(-bound..=bound),
        rng.gen_range(-bound..=bound),
        rng.gen_range(-bound..=bound),
        rng.gen_range(-bound..=bound),
    )
}

/// Random non-collinear digit set with entries in `[-bound, bound]`,
/// normalized to a primitive triple starting at 0.
pub fn random_digits<R: Rng>(rng: &mut R, bound: i64) -> Digits3 {
    loop {
        let raw = [IVec2::ZERO, random_vec(rng, bound), random_vec(rng, bound)];
        if let Ok((d, _, _)) = normalize_digits(&raw) {
            if d.det() != 0 {
                return d;
            }
        }
    }
}

/// Random expanding matrix with entries in `[-bound, bound]`.
pub fn random_expanding<R: Rng>(rng: &mut R, bound: i64) -> IMat2 {
    loop {
        let m = random_mat(rng, bound);
        if m.is_expanding() {
            return m;
        }
    }
}

/// Random expanding matrix with `det ∈ 3ℤ`.
pub fn random_expanding_det3<R: Rng>(rng: &mut R, bound: i64) -> IMat2 {
    loop {
        let m = random_expanding(rng, bound);
        if m.det() % 3 == 0 {
            return m;
        }
    }
}

/// Whether the normalized digit set satisfies the aligned-digit condition
/// `2·d1 − d2 ∈ 3ℤ²`.
pub fn digits_aligned(d: &Digits3) -> bool {
    let w = d.d1().scale(2).sub(&d.d2());
    w.x.rem_euclid(3) == 0 && w.y.rem_euclid(3) == 0
}

/// Random instance of the fully reduced branch: `det M ∈ 3ℤ`,
/// `det B ∈ 3ℤ`, aligned digits.
pub fn random_case_one_instance<R: Rng>(rng: &mut R, bound: i64) -> (IMat2, Digits3) {
    loop {
        let d = random_digits(rng, bound);
        if d.det() % 3 != 0 || !digits_aligned(&d) {
            continue;
        }
        let m = random_expanding_det3(rng, bound);
        return (m, d);
    }
}

/// Random unimodular integer matrix built from a few elementary shears.
pub fn random_unimodular<R: Rng>(rng: &mut R) -> IMat2 {
    let mut u = IMat2::identity();
    for step in 0..3 {
        let k = rng.gen_range(-2..=2i64);
        let shear = if step % 2 == 0 {
            IMat2::new(1, k, 0, 1)
        } else {
            IMat2::new(1, 0, k, 1)
        };
        u = u.mul(&shear);
    }
    debug_assert_eq!(u.det(), 1);
    u
}

/// Independent zero-set oracle: scan the full rational grid with
/// denominator `N = 3·|det B|` in each coordinate and keep the points where
/// a direct complex evaluation of the mask is below `1e-12`. Uses
/// precomputed `N`-th roots of unity, so every evaluation is exact up to
/// rounding of the table.
pub fn zero_set_bruteforce(d: &Digits3) -> Vec<QVec2> {
    let n = 3 * d.det().abs();
    assert!(n > 0, "oracle needs non-collinear digits");
    let tau = std::f64::consts::TAU;
    let roots: Vec<Complex<f64>> = (0..n)
        .map(|t| {
            let a = tau * t as f64 / n as f64;
            Complex::new(a.cos(), a.sin())
        })
        .collect();
    let (d1, d2) = (d.d1(), d.d2());
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let t1 = (i * d1.x + j * d1.y).rem_euclid(n) as usize;
            let t2 = (i * d2.x + j * d2.y).rem_euclid(n) as usize;
            let value = (Complex::new(1.0, 0.0) + roots[t1] + roots[t2]) / 3.0;
            if value.norm() < 1e-12 {
                out.push(QVec2::from_fractions(i, n, j, n));
            }
        }
    }
    out.sort();
    out
}
