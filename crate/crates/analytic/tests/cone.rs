use std::f64::consts::{LN_2, PI};
use std::time::Instant;

use icone_analytic::cone_analytic::{anomalies, cone_global_torsion, frustum_global_torsion, CmReport};
use icone_analytic::spectra::Ladder;
use icone_analytic::{cheeger_muller_check, ConeGeometry, MiddlePerversity, Profile, Section, SectionSpectrum};
use proptest::prelude::*;

const BOTH: [MiddlePerversity; 2] = [MiddlePerversity::Lower, MiddlePerversity::Upper];

fn circle(r: f64, l: f64, profile: Profile) -> ConeGeometry {
    ConeGeometry::new(SectionSpectrum::new(Section::Circle { r }, 100.0).unwrap(), l, profile).unwrap()
}

fn torus(l1: f64, l2: f64, l: f64, cutoff: f64, profile: Profile) -> ConeGeometry {
    ConeGeometry::new(SectionSpectrum::new(Section::Torus { l1, l2 }, cutoff).unwrap(), l, profile).unwrap()
}

fn cm(g: &ConeGeometry, per: MiddlePerversity) -> CmReport {
    cheeger_muller_check(g, per).unwrap()
}

#[test]
fn circle_cones_satisfy_the_identity() {
    for r in [1.0, 2.0] {
        for l in [1.0, 0.5] {
            for profile in [Profile::Flat, Profile::quadratic(0.2), Profile::Polynomial(vec![1.0, -0.3, 0.1])] {
                for per in BOTH {
                    let rep = cm(&circle(r, l, profile.clone()), per);
                    assert!(rep.residual.abs() < 1e-10, "r = {r}, l = {l}, {profile:?}: {rep:?}");
                    assert_eq!(rep.combinatorial_anomaly, 0.0);
                    assert_eq!(rep.analytic_anomaly, 0.0);
                }
            }
        }
    }
}

#[test]
fn circle_global_torsion_closed_form() {
    // ½ log(2πr) + ½ log(l²/2) for the flat cone
    for (r, l) in [(1.0, 1.0), (2.0, 0.5), (0.3, 3.0)] {
        let b = cone_global_torsion(&circle(r, l, Profile::Flat), MiddlePerversity::Lower).unwrap();
        let want = 0.5 * (2.0 * PI * r).ln() + 0.5 * (l * l / 2.0).ln();
        assert!((b.global - want).abs() < 1e-13, "{} vs {want}", b.global);
        assert!(b.assembly_checked);
    }
}

#[test]
fn square_torus_cone_satisfies_the_identity() {
    let tp = 2.0 * PI;
    for per in BOTH {
        let start = Instant::now();
        let rep = cm(&torus(tp, tp, 1.0, 1e4, Profile::Flat), per);
        assert!(rep.residual.abs() < 1e-6, "{rep:?}");
        assert!(start.elapsed().as_secs() < 60);
    }
}

#[test]
fn curved_rectangular_torus_cones() {
    let tp = 2.0 * PI;
    for profile in [Profile::Flat, Profile::quadratic(0.3)] {
        for per in BOTH {
            let rep = cm(&torus(tp, 1.3 * tp, 0.5, 4e3, profile.clone()), per);
            assert!(rep.residual.abs() < 1e-6, "{profile:?}: {rep:?}");
        }
    }
}

#[test]
fn torus_terms_sum_to_the_closed_form() {
    let g = torus(2.0 * PI, 2.0 * PI, 1.0, 4e3, Profile::Flat);
    for per in BOTH {
        let b = cone_global_torsion(&g, per).unwrap();
        let sum = b.t0.value + b.t1.value + b.t2.value + b.t3.value - 0.25 * b.euler_characteristic as f64 * LN_2;
        assert_eq!(sum, b.global);
        assert!((b.global - b.closed_form).abs() <= b.bound + 1e-9);
        assert!(b.assembly_checked);
        assert_eq!(b.t1.value, 0.0);
    }
}

#[test]
fn anomalies_vanish_in_odd_dimension_only() {
    let c = SectionSpectrum::new(Section::Circle { r: 1.0 }, 10.0).unwrap();
    let t = SectionSpectrum::new(Section::Torus { l1: 2.0 * PI, l2: 2.0 * PI }, 2e3).unwrap();
    for per in BOTH {
        let a = anomalies(&c, per).unwrap();
        assert_eq!((a.combinatorial, a.analytic.value), (0.0, 0.0));
        let b = anomalies(&t, per).unwrap();
        assert!(b.combinatorial.abs() > 0.1 && b.analytic.value.abs() > 0.1);
    }
    // square torus, m: −(½ log det G_0 + ½ log det G_1 ... ) with unit-volume Grams
    let a = anomalies(&t, MiddlePerversity::Lower).unwrap();
    assert!((a.combinatorial + (2.0 * PI).ln()).abs() < 1e-12, "{}", a.combinatorial);
}

#[test]
fn long_torus_falls_back_to_the_truncated_ladder() {
    use icone_analytic::cone_analytic::RegsumMethod;
    let g = torus(2.0 * PI, 10.0, 1.0, 2e3, Profile::Flat);
    let b = cone_global_torsion(&g, MiddlePerversity::Lower).unwrap();
    assert_eq!(b.closed_form_method, RegsumMethod::TruncatedLadder);
    let rep = cm(&g, MiddlePerversity::Lower);
    assert!(rep.residual.abs() < 1e-6, "{rep:?}");
    let short = cone_global_torsion(&torus(2.0 * PI, 2.0 * PI, 1.0, 1e3, Profile::Flat), MiddlePerversity::Lower).unwrap();
    assert_eq!(short.closed_form_method, RegsumMethod::ZetaExpansion);
}

#[test]
fn user_ladders_skip_the_assembly_check() {
    let lad = Ladder::from_unsorted(vec![(2.0, 1), (5.0, 2)]);
    let s = SectionSpectrum::from_ladders(2, vec![1, 2, 1], vec![lad.clone(), lad]).unwrap();
    let g = ConeGeometry::new(s, 1.0, Profile::Flat).unwrap();
    let b = cone_global_torsion(&g, MiddlePerversity::Lower).unwrap();
    assert!(!b.assembly_checked);
    assert!(b.global.is_finite());
}

#[test]
fn reports_are_deterministic() {
    let g = torus(2.0 * PI, 3.0, 0.8, 1e3, Profile::quadratic(0.1));
    let a = serde_json::to_string(&cone_global_torsion(&g, MiddlePerversity::Upper).unwrap()).unwrap();
    let b = serde_json::to_string(&cone_global_torsion(&g, MiddlePerversity::Upper).unwrap()).unwrap();
    assert_eq!(a, b);
    assert!(a.contains("\"schema\":1"));
}

#[test]
fn frustum_torsion_is_exact() {
    let tp = 2.0 * PI;
    let sphere_like = Ladder::from_unsorted(vec![(2.0, 3), (6.0, 5)]);
    let cases = vec![
        SectionSpectrum::new(Section::Circle { r: 1.0 }, 10.0).unwrap(),
        SectionSpectrum::new(Section::Circle { r: 2.5 }, 10.0).unwrap(),
        SectionSpectrum::new(Section::Torus { l1: tp, l2: 1.3 * tp }, 500.0).unwrap(),
        // in dimension 2 only Betti numbers enter, so any ladder will do
        SectionSpectrum::from_ladders(2, vec![1, 0, 1], vec![sphere_like.clone(), sphere_like]).unwrap(),
    ];
    for s in &cases {
        for profile in [Profile::Flat, Profile::quadratic(0.4), Profile::Polynomial(vec![1.0, -0.1, 0.02])] {
            for (l1, l2) in [(0.5, 1.0), (1.0, 3.0)] {
                let f = frustum_global_torsion(s, &profile, l1, l2).unwrap();
                let want = if s.dim % 2 == 1 { 0.0 } else { 0.5 * s.euler_characteristic() as f64 * LN_2 };
                assert_eq!(f.closed_form, want);
                assert!(f.exact, "m = {}, {profile:?}: {} vs {want}", s.dim, f.total);
                assert_eq!(f.total, want);
                assert!((f.w0 + f.w1 + f.w2 + f.w3 - f.total).abs() < 1e-14);
            }
        }
    }
    assert!(frustum_global_torsion(&cases[0], &Profile::Flat, 1.0, 1.0).is_err());
}

#[test]
fn scaling_the_circle_shifts_both_sides_equally() {
    for l in [1.0, 0.5] {
        let base = cm(&circle(1.0, l, Profile::Flat), MiddlePerversity::Lower);
        for c in [0.5, 2.0, 3.7] {
            let scaled = cm(&circle(c, l, Profile::Flat), MiddlePerversity::Lower);
            let shift = 0.5 * c.ln();
            assert!((scaled.log_global - base.log_global - shift).abs() < 1e-12);
            assert!((scaled.log_intersection_torsion - base.log_intersection_torsion - shift).abs() < 1e-12);
            assert!((scaled.residual - base.residual).abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn circle_identity_for_random_geometry(r in 0.1f64..10.0, l in 0.1f64..3.0, eps in -0.2f64..0.5) {
        let g = ConeGeometry::new(SectionSpectrum::new(Section::Circle { r }, 10.0).unwrap(), l, Profile::quadratic(eps));
        prop_assume!(g.is_ok());
        for per in BOTH {
            prop_assert!(cm(g.as_ref().unwrap(), per).residual.abs() < 1e-10);
        }
    }
}

#[test]
fn torus_scaling_leaves_the_residual_unchanged() {
    let tp = 2.0 * PI;
    let base = cm(&torus(tp, tp, 1.0, 2e3, Profile::Flat), MiddlePerversity::Upper);
    let c = 1.5;
    // same eigenvalue count: scale the cutoff with the spectrum
    let scaled = cm(&torus(c * tp, c * tp, 1.0, 2e3 / (c * c), Profile::Flat), MiddlePerversity::Upper);
    assert!((scaled.residual - base.residual).abs() < 1e-8, "{} vs {}", scaled.residual, base.residual);
}
