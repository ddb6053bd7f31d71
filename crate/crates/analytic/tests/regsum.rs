use std::f64::consts::PI;

use icone_analytic::cone_analytic::{regularized_log_sum, RegsumMethod};
use icone_analytic::spectra::Ladder;
use icone_analytic::{AnalyticError, Section, SectionSpectrum};
use proptest::prelude::*;

/// `F(ε) = Σ' log((μ+α)/(μ−α)) e^{−εμ²}` over the torus lattice.
fn heat_regulated(l1: f64, l2: f64, alpha: f64, eps: f64) -> f64 {
    let (c1, c2) = ((2.0 * PI / l1).powi(2), (2.0 * PI / l2).powi(2));
    let lmax = 45.0 / eps;
    let jm = (lmax / c1).sqrt() as i64 + 1;
    let km = (lmax / c2).sqrt() as i64 + 1;
    let mut s = 0.0;
    for j in -jm..=jm {
        for k in -km..=km {
            let lam = c1 * (j * j) as f64 + c2 * (k * k) as f64;
            if (j, k) == (0, 0) || lam > lmax {
                continue;
            }
            let mu2 = lam + alpha * alpha;
            let mu = mu2.sqrt();
            s += ((mu + alpha) / (mu - alpha)).ln() * (-eps * mu2).exp();
        }
    }
    s
}

/// Linear coefficient of the polynomial interpolating `(u_i, g_i)`.
fn linear_coefficient(u: &[f64], g: &[f64]) -> f64 {
    let n = u.len();
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row: Vec<f64> = (0..n).map(|k| u[i].powi(k as i32)).collect();
            row.push(g[i]);
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs())).unwrap();
        a.swap(c, p);
        for i in 0..n {
            if i != c {
                let f = a[i][c] / a[c][c];
                for k in c..=n {
                    a[i][k] -= f * a[c][k];
                }
            }
        }
    }
    a[1][n] / a[1][1]
}

/// The heat expansion is `F(ε) = a ε^{−½} + R + b ε^{½} + …` and the
/// regularized value is `R`, the slope of `√ε F(ε)` at zero.
fn heat_oracle(l1: f64, l2: f64, alpha: f64) -> f64 {
    let u: Vec<f64> = (0..8).map(|i| 0.04 + 0.12 * i as f64 / 7.0).collect();
    let g: Vec<f64> = u.iter().map(|&u| u * heat_regulated(l1, l2, alpha, u * u)).collect();
    linear_coefficient(&u, &g)
}

#[test]
fn both_routes_match_the_heat_regulated_sum() {
    for (l1, l2) in [(2.0 * PI, 2.0 * PI), (2.0 * PI, 1.3 * 2.0 * PI)] {
        let s = SectionSpectrum::new(Section::Torus { l1, l2 }, 1e4).unwrap();
        for alpha in [0.5, -0.5, 0.3] {
            let oracle = heat_oracle(l1, l2, alpha);
            let a = regularized_log_sum(&s, 0, alpha, RegsumMethod::ZetaExpansion).unwrap();
            let b = regularized_log_sum(&s, 0, alpha, RegsumMethod::TruncatedLadder).unwrap();
            assert!((a.value - oracle).abs() < 1e-7, "{l1} × {l2}, α = {alpha}: {} vs {oracle}", a.value);
            assert!((b.value - oracle).abs() < 1e-7, "{l1} × {l2}, α = {alpha}: {} vs {oracle}", b.value);
            assert!((a.value - b.value).abs() < 1e-6);
            assert!((a.value - b.value).abs() <= a.bound + b.bound + 1e-12, "bounds too tight: {a:?} {b:?}");
        }
    }
}

#[test]
fn finite_ladder_routes_agree_with_the_plain_sum() {
    let lad = Ladder::from_unsorted(vec![(3.0, 2), (7.5, 1), (20.0, 4)]);
    let s = SectionSpectrum::from_ladders(2, vec![1, 0, 1], vec![lad.clone(), lad]).unwrap();
    let alpha = 0.8;
    let direct: f64 = [(3.0f64, 2.0), (7.5, 1.0), (20.0, 4.0)]
        .iter()
        .map(|(l, m)| {
            let mu = (l + alpha * alpha).sqrt();
            m * ((mu + alpha) / (mu - alpha)).ln()
        })
        .sum();
    for method in [RegsumMethod::ZetaExpansion, RegsumMethod::TruncatedLadder] {
        let v = regularized_log_sum(&s, 1, alpha, method).unwrap();
        assert!((v.value - direct).abs() < 1e-12, "{method:?}: {} vs {direct}", v.value);
    }
}

#[test]
fn errors() {
    let lad = Ladder::from_unsorted(vec![(0.2, 1)]);
    let s = SectionSpectrum::from_ladders(1, vec![1, 1], vec![lad]).unwrap();
    assert!(matches!(regularized_log_sum(&s, 0, 0.5, RegsumMethod::ZetaExpansion), Err(AnalyticError::PoleCollision(_))));
    let c = SectionSpectrum::new(Section::Circle { r: 1.0 }, 10.0).unwrap();
    assert!(matches!(regularized_log_sum(&c, 0, 0.5, RegsumMethod::ZetaExpansion), Err(AnalyticError::UnsupportedSection(_))));
    assert!(regularized_log_sum(&c, 3, 0.5, RegsumMethod::ZetaExpansion).is_err());
    // long torus: λ₁ = (2π/10)² < 2α² for α = ½
    let long = SectionSpectrum::new(Section::Torus { l1: 2.0 * PI, l2: 10.0 }, 1e3).unwrap();
    assert!(matches!(regularized_log_sum(&long, 0, 0.5, RegsumMethod::ZetaExpansion), Err(AnalyticError::SeriesDivergence(_))));
    let t = regularized_log_sum(&long, 0, 0.5, RegsumMethod::TruncatedLadder).unwrap();
    assert!((t.value - heat_oracle(2.0 * PI, 10.0, 0.5)).abs() < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn odd_in_alpha(l2 in 3.0f64..9.0, alpha in 0.05f64..0.95) {
        let s = SectionSpectrum::new(Section::Torus { l1: 2.0 * PI, l2 }, 2e3).unwrap();
        let lmin = s.ladders[0].min().unwrap();
        prop_assume!(2.0 * alpha * alpha < 0.9 * lmin);
        let plus = regularized_log_sum(&s, 0, alpha, RegsumMethod::ZetaExpansion).unwrap().value;
        let minus = regularized_log_sum(&s, 0, -alpha, RegsumMethod::ZetaExpansion).unwrap().value;
        prop_assert!((plus + minus).abs() < 1e-12 * plus.abs().max(1.0));
    }

    #[test]
    fn finite_ladders_are_odd_and_monotone(vals in prop::collection::vec((1.0f64..50.0, 1u64..4), 1..6), alpha in 0.05f64..0.9) {
        let lad = Ladder::from_unsorted(vals);
        let s = SectionSpectrum::from_ladders(1, vec![1, 1], vec![lad]).unwrap();
        let a = regularized_log_sum(&s, 0, alpha, RegsumMethod::TruncatedLadder).unwrap().value;
        let b = regularized_log_sum(&s, 0, -alpha, RegsumMethod::TruncatedLadder).unwrap().value;
        let c = regularized_log_sum(&s, 0, alpha * 1.05, RegsumMethod::TruncatedLadder).unwrap().value;
        prop_assert!((a + b).abs() < 1e-13 * a.abs().max(1.0));
        prop_assert!(c > a);
    }
}
