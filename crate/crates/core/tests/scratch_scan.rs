mod common;

use spectra_core::{completeness_profile, decide, IMat2, IVec2, Status};

#[test]
#[ignore]
fn scan_completeness_levels() {
    let worked = [IVec2::ZERO, IVec2::new(2, 1), IVec2::new(2, 4)];
    let unit = [IVec2::ZERO, IVec2::new(1, 0), IVec2::new(0, 1)];
    for (label, m, raw) in [
        ("worked-4.9", IMat2::new(8, -5, 4, -1), worked),
        ("unit-4.5", IMat2::new(4, 0, 1, 3), unit),
    ] {
        let v = decide(&m, &raw).unwrap();
        assert_eq!(v.status, Status::Spectral);
        let cert = v.certificate.unwrap();
        println!(
            "{label}: m_bar={} d_bar={} s={:?}",
            cert.m_bar, cert.d_bar, cert.s
        );
        for k in 4..=8 {
            let prof = completeness_profile(&cert.m_bar, &cert.d_bar, &cert.s, k, 5).unwrap();
            println!("  k={k} min={:.6} mean={:.6}", prof.min, prof.mean);
        }
    }
}
