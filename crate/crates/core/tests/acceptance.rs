//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line with its elapsed time. Run with
//! `cargo test -p spectra-core --test acceptance -- --nocapture`.

mod common;

use std::time::Instant;

use common::{rng, zero_set_bruteforce};
use spectra_core::{
    canonicalize, completeness_profile, decide, decide_with_bezout_shift, decompose,
    finite_orthogonals, is_hadamard, liu_wang_criterion, orthogonality_residual,
    reduced_pair_criterion, search_hadamard_s, spectrality::default_search_bound,
    spectrality::reduced_pair_criterion_with, spectrum_truncated, zero_set_fundamental, Branch,
    Certificate, Digits3, IMat2, IVec2, QVec2, Status,
};

struct Criterion {
    number: u32,
    label: &'static str,
    budget_secs: f64,
}

impl Criterion {
    fn start(number: u32, label: &'static str, budget_secs: f64) -> (Self, Instant) {
        (
            Criterion {
                number,
                label,
                budget_secs,
            },
            Instant::now(),
        )
    }

    fn finish(self, started: Instant) {
        let elapsed = started.elapsed().as_secs_f64();
        println!(
            "ACCEPTANCE {:>2} PASS ({elapsed:.2}s / {:.0}s budget): {}",
            self.number, self.budget_secs, self.label
        );
        assert!(
            elapsed <= self.budget_secs,
            "criterion {} exceeded its {}s budget ({elapsed:.2}s)",
            self.number,
            self.budget_secs
        );
    }
}

fn worked_digits_raw() -> [IVec2; 3] {
    [IVec2::ZERO, IVec2::new(2, 1), IVec2::new(2, 4)]
}

fn unit_digits_raw() -> [IVec2; 3] {
    [IVec2::ZERO, IVec2::new(1, 0), IVec2::new(0, 1)]
}

#[test]
fn criterion_1_worked_example_end_to_end() {
    let (c, t0) = Criterion::start(1, "worked example end-to-end with exact canonical block", 1.0);
    let d = worked_digits_raw();

    let m1 = IMat2::new(8, -5, 4, -1);
    let v1 = decide(&m1, &d).unwrap();
    assert_eq!(v1.status, Status::Spectral);
    assert_eq!(v1.branch, Branch::CaseII);
    assert_eq!(v1.criterion.as_ref().unwrap().v, IVec2::new(18, -24));

    let m2 = IMat2::new(5, -1, 2, 2);
    let v2 = decide(&m2, &d).unwrap();
    assert_eq!(v2.status, Status::NotSpectral);
    assert_eq!(v2.branch, Branch::CaseII);
    assert_eq!(v2.criterion.as_ref().unwrap().v, IVec2::new(14, -12));

    let d_norm = Digits3::new(IVec2::new(2, 1), IVec2::new(2, 4)).unwrap();
    let d_tilde = Digits3::new(IVec2::new(1, 0), IVec2::new(-2, 6)).unwrap();
    let cf1 = canonicalize(&m1, &d_norm).unwrap();
    assert_eq!(cf1.p, IMat2::new(1, -1, -1, 2));
    assert_eq!(cf1.m_tilde, IMat2::new(4, 0, 3, 3));
    assert_eq!(cf1.d_tilde, d_tilde);
    assert_eq!((cf1.sigma, cf1.omega, cf1.eta, cf1.theta), (1, -2, 1, 2));

    let cf2 = canonicalize(&m2, &d_norm).unwrap();
    assert_eq!(cf2.p, IMat2::new(1, -1, -1, 2));
    assert_eq!(cf2.m_tilde, IMat2::new(3, 0, 3, 4));
    assert_eq!(cf2.d_tilde, d_tilde);
    assert_eq!((cf2.sigma, cf2.omega, cf2.eta, cf2.theta), (1, -2, 1, 2));

    c.finish(t0);
}

#[test]
fn criterion_2_unit_digit_pair() {
    let (c, t0) = Criterion::start(2, "unit-digit pair: criterion vector, witness, verdicts", 1.0);
    let d_norm = Digits3::new(IVec2::new(1, 0), IVec2::new(0, 1)).unwrap();

    let lw = liu_wang_criterion(&IMat2::new(4, 0, 2, 3), &d_norm).unwrap();
    assert_eq!(lw.v, IVec2::new(2, -3));
    assert!(!lw.pass);

    let s = [IVec2::ZERO, IVec2::new(2, 2), IVec2::new(3, 1)];
    assert!(is_hadamard(&IMat2::new(4, 0, 1, 3), &d_norm, &s).unwrap());

    let v = decide(&IMat2::new(4, 0, 1, 3), &unit_digits_raw()).unwrap();
    assert_eq!(v.status, Status::Spectral);
    let v = decide(&IMat2::new(4, 0, 2, 3), &unit_digits_raw()).unwrap();
    assert_eq!(v.status, Status::NotSpectral);

    c.finish(t0);
}

#[test]
fn criterion_3_nontrivial_conjugator() {
    let (c, t0) = Criterion::start(3, "conjugation is necessary: no witness before rescale", 5.0);
    let m_tilde = IMat2::new(4, 0, 3, 3);
    let d_tilde = Digits3::new(IVec2::new(1, 0), IVec2::new(-2, 6)).unwrap();

    let cf = canonicalize(&IMat2::new(8, -5, 4, -1), &Digits3::new(IVec2::new(2, 1), IVec2::new(2, 4)).unwrap()).unwrap();
    let bound = default_search_bound(&cf);
    assert_eq!(bound, 18);
    // the unreduced pair admits no witness anywhere in the default box
    assert_eq!(search_hadamard_s(&m_tilde, &d_tilde, bound).unwrap(), None);

    // after the diagonal rescale a witness exists
    let m_bar = IMat2::new(4, 0, 1, 3);
    let d_bar = Digits3::new(IVec2::new(1, 0), IVec2::new(-2, 2)).unwrap();
    let s = search_hadamard_s(&m_bar, &d_bar, bound).unwrap().unwrap();
    assert!(is_hadamard(&m_bar, &d_bar, &s).unwrap());

    // and the decision procedure finds it through Q = diag(1, 1/3)
    let v = decide(&IMat2::new(8, -5, 4, -1), &worked_digits_raw()).unwrap();
    assert_eq!(v.status, Status::Spectral);
    let cert = v.certificate.unwrap();
    assert_eq!(cert.q, spectra_core::q_n(1));
    assert_eq!(cert.m_bar, m_bar);
    assert_eq!(cert.d_bar, d_bar);

    c.finish(t0);
}

#[test]
fn criterion_4_oracle_equivalence() {
    let (c, t0) = Criterion::start(4, "1000 aligned instances agree with the orbit oracle", 60.0);
    let mut rng = rng(0xacce_0004);
    for _ in 0..1000 {
        let (m, d) = common::random_case_one_instance(&mut rng, 12);
        let ds = d.digits();
        let verdict = decide(&m, &[ds[0], ds[1], ds[2]]).unwrap();
        let finite = finite_orthogonals(&m, &d).unwrap();
        match verdict.status {
            Status::Spectral => assert!(!finite, "m {m} digits {d}"),
            Status::NotSpectral => assert!(finite, "m {m} digits {d}"),
            other => panic!("unexpected status {other:?}"),
        }
    }
    c.finish(t0);
}

#[test]
fn criterion_5_invariance_suite() {
    let (c, t0) = Criterion::start(5, "verdicts invariant under every representative choice", 60.0);
    let mut rng = rng(0xacce_0005);

    let e = Digits3::new(IVec2::new(1, 0), IVec2::new(0, 1)).unwrap();
    let worked = Digits3::new(IVec2::new(2, 1), IVec2::new(2, 4)).unwrap();
    let mut bases = vec![
        (IMat2::new(4, 0, 1, 3), e),
        (IMat2::new(4, 0, 2, 3), e),
        (IMat2::new(8, -5, 4, -1), worked),
        (IMat2::new(5, -1, 2, 2), worked),
    ];
    for _ in 0..16 {
        let d = common::random_digits(&mut rng, 9);
        let m = common::random_expanding(&mut rng, 9);
        bases.push((m, d));
    }

    let mut conjugations = 0;
    for (m, d) in &bases {
        let ds = d.digits();
        let raw = [ds[0], ds[1], ds[2]];
        let status = decide(m, &raw).unwrap().status;

        for _ in 0..10 {
            let u = common::random_unimodular(&mut rng);
            let mu = u.mul(m).mul(&u.adjugate());
            let du = d.map(&u).unwrap();
            let dus = du.digits();
            assert_eq!(decide(&mu, &[dus[0], dus[1], dus[2]]).unwrap().status, status);
            conjugations += 1;
        }

        let sw = d.swapped();
        let sws = sw.digits();
        assert_eq!(decide(m, &[sws[0], sws[1], sws[2]]).unwrap().status, status);

        for g in [2i64, 5] {
            let scaled = [IVec2::ZERO, d.d1().scale(g), d.d2().scale(g)];
            assert_eq!(decide(m, &scaled).unwrap().status, status);
        }

        for k in -3..=3 {
            assert_eq!(decide_with_bezout_shift(m, &raw, k).unwrap().status, status);
        }
    }
    assert!(conjugations >= 200);

    // representative invariance of the reduced criterion
    let cf = canonicalize(&IMat2::new(8, -5, 4, -1), &worked).unwrap();
    let dec = decompose(&cf.m_tilde).unwrap();
    let base = reduced_pair_criterion(&cf, &dec).unwrap();
    for _ in 0..25 {
        let shift = common::random_mat(&mut rng, 5);
        let got = reduced_pair_criterion_with(&cf, &dec, &shift).unwrap();
        assert_eq!(got.pass, base.pass);
    }

    c.finish(t0);
}

#[test]
fn criterion_6_zero_set_against_bruteforce() {
    let (c, t0) = Criterion::start(6, "zero sets match the denominator-grid scan", 30.0);
    let mut rng = rng(0xacce_0006);
    for _ in 0..100 {
        let d = common::random_digits(&mut rng, 9);
        assert_eq!(
            zero_set_fundamental(&d).unwrap(),
            zero_set_bruteforce(&d),
            "digit set {d}"
        );
    }

    let d = Digits3::new(IVec2::new(1, 0), IVec2::new(-2, 6)).unwrap();
    let z = zero_set_fundamental(&d).unwrap();
    assert_eq!(z.len(), 12);
    let mut expected = Vec::new();
    for y in [1i64, 4, 7, 10, 13, 16] {
        expected.push(QVec2::from_fractions(1, 3, y, 18));
    }
    for y in [2i64, 5, 8, 11, 14, 17] {
        expected.push(QVec2::from_fractions(2, 3, y, 18));
    }
    expected.sort();
    assert_eq!(z, expected);

    c.finish(t0);
}

#[test]
fn criterion_7_power_shape_lemmas() {
    let (c, t0) = Criterion::start(7, "power shapes of classes 2 and 6 hold to depth 8", 10.0);
    let mut rng = rng(0xacce_0007);
    use rand::Rng;

    let pow_t = |m: &IMat2, l: u32| {
        let mt = m.transpose();
        let mut acc = IMat2::identity();
        for _ in 0..l {
            acc = acc.mul(&mt);
        }
        acc
    };

    for _ in 0..100 {
        // class 2 member
        let p1 = rng.gen_range(1..=2i64);
        let s = rng.gen_range(1..=3u32);
        let c2 = if rng.gen_bool(0.2) {
            0
        } else {
            loop {
                let c = rng.gen_range(-7..=7i64);
                if c % 3 != 0 {
                    break c;
                }
            }
        };
        let m = IMat2::new(
            3 * rng.gen_range(-5..=5i64) + p1,
            3 * rng.gen_range(-5..=5i64),
            3i64.pow(s) * c2,
            3 * rng.gen_range(-5..=5i64),
        );
        assert_eq!(decompose(&m).unwrap().k, 2);
        for l in 1..=8u32 {
            let p = pow_t(&m, l);
            assert_eq!(p.a11.rem_euclid(3), p1.pow(l).rem_euclid(3));
            assert_eq!(p.a12 % 3i64.pow(s), 0);
            assert_eq!(p.a21 % 3, 0);
            assert_eq!(p.a22 % 3, 0);
            if c2 == 0 {
                assert_eq!(p.a12, 0);
            }
        }

        // class 6 member
        let p3 = rng.gen_range(1..=2i64);
        let c6 = loop {
            let c = rng.gen_range(-7..=7i64);
            if c % 3 != 0 {
                break c;
            }
        };
        let m = IMat2::new(
            3 * rng.gen_range(-5..=5i64) + p1,
            3 * rng.gen_range(-5..=5i64),
            3i64.pow(s) * c6 + p3,
            3 * rng.gen_range(-5..=5i64),
        );
        assert_eq!(decompose(&m).unwrap().k, 6);
        for l in 1..=8u32 {
            let p = pow_t(&m, l);
            assert_eq!(p.a11.rem_euclid(3), p1.pow(l).rem_euclid(3));
            assert_eq!(p.a12.rem_euclid(3), (p1.pow(l - 1) * p3).rem_euclid(3));
            assert_eq!(p.a21 % 3, 0);
            assert_eq!(p.a22 % 3, 0);
        }
    }
    c.finish(t0);
}

#[test]
fn criterion_8_numeric_completeness_evidence() {
    let t0 = Instant::now();
    let mut certs: Vec<(&str, Certificate)> = Vec::new();
    let v = decide(&IMat2::new(8, -5, 4, -1), &worked_digits_raw()).unwrap();
    certs.push(("worked-pair", v.certificate.unwrap()));
    let v = decide(&IMat2::new(4, 0, 1, 3), &unit_digits_raw()).unwrap();
    certs.push(("unit-pair", v.certificate.unwrap()));

    let mut lines = Vec::new();
    let mut all_ok = true;
    for (label, cert) in &certs {
        let lvl = spectrum_truncated(&cert.m_bar, &cert.s, 4).unwrap();
        assert_eq!(lvl.points.len(), 81);
        let pts: Vec<QVec2> = lvl.points.iter().map(QVec2::from_ivec).collect();
        let residual = orthogonality_residual(&cert.m_bar, &cert.d_bar, &pts).unwrap();

        let prof = completeness_profile(&cert.m_bar, &cert.d_bar, &cert.s, 6, 5).unwrap();
        assert_eq!(prof.values.len(), 25);
        assert!(prof.values.iter().all(|v| *v <= 1.0 + 1e-6));

        let ok = residual < 1e-8 && prof.min >= 0.98;
        all_ok &= ok;
        lines.push(format!(
            "{label}: residual={residual:.2e} (<1e-8) completeness min={:.4} mean={:.4} (>=0.98) -> {}",
            prof.min,
            prof.mean,
            if ok { "ok" } else { "below threshold" }
        ));
    }
    let elapsed = t0.elapsed().as_secs_f64();
    println!(
        "ACCEPTANCE  8 {} ({elapsed:.2}s / 120s budget): numeric completeness evidence [{}]",
        if all_ok { "PASS" } else { "FAIL" },
        lines.join("; ")
    );
    assert!(elapsed <= 120.0, "criterion 8 exceeded its budget ({elapsed:.2}s)");
    assert!(
        all_ok,
        "completeness evidence threshold (0.98 at level 6) not met by every certified pair: {}",
        lines.join("; ")
    );
}
