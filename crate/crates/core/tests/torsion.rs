use std::collections::HashMap;

use icone_core::bundled;
use icone_core::complex::{ChainComplex, RegularCWComplex};
use icone_core::intersection::{intersection_cone_complex, intersection_cone_complex_with_kernel, intersection_mapping_cone};
use icone_core::linalg::{Int, IntMatrix, Rat, RatMatrix};
use icone_core::snf::standard_bases;
use icone_core::torsion::{
    based_intersection_cone, cone_into_mapping_cone, intersection_torsion_cone, intersection_torsion_of,
    intersection_torsion_pseudomanifold, milnor_additivity_check, milnor_standard, r_torsion, r_torsion_detailed,
    torsion_duality_check, SectionBases,
};
use icone_core::{BasedChainComplex, CoreError, Perversity, TorsionValue};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

fn tv(n: i64, d: i64) -> TorsionValue {
    TorsionValue::from_rational(rat(n, d))
}

/// Product of random elementary column operations, swaps and sign flips.
fn random_unimodular(n: usize, rng: &mut ChaCha8Rng) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    if n == 0 {
        return u;
    }
    for _ in 0..12 {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        match rng.gen_range(0..3) {
            0 if i != j => u.add_col_multiple(j, i, &Int::from(rng.gen_range(-3..=3))),
            1 => u.swap_cols(i, j),
            _ => u.negate_col(i),
        }
    }
    u
}

/// Adds random boundaries to each homology representative.
fn perturb_lifts(c: &ChainComplex, h: &[RatMatrix], rng: &mut ChaCha8Rng) -> Vec<RatMatrix> {
    h.iter()
        .enumerate()
        .map(|(q, hq)| {
            let b = c.boundary(q + 1).to_rational();
            if b.cols() == 0 || hq.cols() == 0 {
                return hq.clone();
            }
            let x = RatMatrix::from_fn(b.cols(), hq.cols(), |_, _| rat(rng.gen_range(-4..=4), 1));
            let bx = &b * &x;
            RatMatrix::from_fn(hq.rows(), hq.cols(), |i, j| &hq[(i, j)] + &bx[(i, j)])
        })
        .collect()
}

/// The subdivision chain map: a vertex goes to its barycentre and a
/// q-cell `x` to `(−1)^q · sd(∂x) * x`, where `* x` appends `x` to each
/// flag. Independent of the library's construction apart from labels.
fn subdivision_map(k: &RegularCWComplex, sd: &ChainComplex) -> Vec<RatMatrix> {
    let mut image: HashMap<String, HashMap<String, i64>> = HashMap::new();
    for q in 0..=k.dim() {
        for cell in k.cells_of_dim(q) {
            let mut chain: HashMap<String, i64> = HashMap::new();
            if q == 0 {
                chain.insert(format!("b({})", cell.id), 1);
            } else {
                let sign = if q % 2 == 0 { 1 } else { -1 };
                for (face, coeff) in &cell.boundary {
                    for (flag, c) in &image[face] {
                        let inner = flag.trim_start_matches("b(").trim_end_matches(')');
                        *chain.entry(format!("b({inner}<{})", cell.id)).or_default() += sign * coeff * c;
                    }
                }
            }
            chain.retain(|_, v| *v != 0);
            image.insert(cell.id.clone(), chain);
        }
    }
    let cc = k.chain_complex();
    (0..=k.dim())
        .map(|q| {
            let pos: HashMap<&str, usize> = sd.labels(q).iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
            let mut m = RatMatrix::zeros(sd.dim(q), cc.dim(q));
            for (j, id) in cc.labels(q).iter().enumerate() {
                for (flag, c) in &image[id] {
                    m[(pos[flag.as_str()], j)] = rat(*c, 1);
                }
            }
            m
        })
        .collect()
}

fn orientable() -> Vec<(&'static str, RegularCWComplex)> {
    bundled::sections().into_iter().filter(|(n, _)| *n != "rp2").collect()
}

#[test]
fn elementary_values() {
    let c = ChainComplex::from_boundaries(vec![1, 1], vec![IntMatrix::from_i64(&[vec![3]])], "e").unwrap();
    assert_eq!(r_torsion(&BasedChainComplex::new(&c, vec![])).unwrap(), tv(3, 1));

    let circle = bundled::load("circle").chain_complex();
    let std = BasedChainComplex::with_standard_homology(&circle);
    assert_eq!(r_torsion(&std).unwrap(), tv(1, 1));

    let mut h = standard_bases(&circle).n_rational();
    h[0] = h[0].map(|x| x * rat(2, 1));
    assert_eq!(r_torsion(&BasedChainComplex::new(&circle, h)).unwrap(), tv(2, 1));

    // RP²: ∏ #TH_q^{(−1)^q} = 2^{−1}
    let rp2 = bundled::load("rp2").chain_complex();
    assert_eq!(r_torsion(&BasedChainComplex::with_standard_homology(&rp2)).unwrap(), tv(1, 2));
}

#[test]
fn errors_on_bad_homology_data() {
    let circle = bundled::load("circle").chain_complex();
    let mut h = standard_bases(&circle).n_rational();
    h[1] = RatMatrix::zeros(3, 0);
    assert!(matches!(r_torsion(&BasedChainComplex::new(&circle, h)), Err(CoreError::RankMismatch { degree: 1, .. })));
    let mut h = standard_bases(&circle).n_rational();
    h[0] = RatMatrix::zeros(3, 1);
    assert!(matches!(r_torsion(&BasedChainComplex::new(&circle, h)), Err(CoreError::SingularBasis { degree: 0 })));
}

#[test]
fn pivot_order_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (name, k) in bundled::sections() {
        let c = k.chain_complex();
        for p in Perversity::all(c.top() + 1) {
            for relative in [false, true] {
                let x = intersection_cone_complex(&c, &p, relative).unwrap();
                let b = based_intersection_cone(&x, &c, &SectionBases::standard(&c)).unwrap();
                let reference = r_torsion(&b).unwrap();
                for _ in 0..100 {
                    let orders: Vec<Vec<usize>> = (0..=b.top())
                        .map(|q| {
                            let mut o: Vec<usize> = (0..b.dim(q)).collect();
                            o.shuffle(&mut rng);
                            o
                        })
                        .collect();
                    let v = r_torsion_detailed(&b, Some(&orders)).unwrap().value;
                    assert_eq!(v, reference, "{name} {p} relative={relative}");
                }
            }
        }
    }
}

#[test]
fn kernel_basis_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for (name, k) in bundled::sections() {
        let c = k.chain_complex();
        let bases = SectionBases::standard(&c);
        for p in Perversity::all(c.top() + 1) {
            for relative in [false, true] {
                let x = intersection_cone_complex(&c, &p, relative).unwrap();
                let reference = r_torsion(&based_intersection_cone(&x, &c, &bases).unwrap()).unwrap();
                for _ in 0..20 {
                    let u = random_unimodular(x.kernel.rank(), &mut rng);
                    let y = intersection_cone_complex_with_kernel(&c, &p, relative, x.kernel.rebased(&u)).unwrap();
                    let v = r_torsion(&based_intersection_cone(&y, &c, &bases).unwrap()).unwrap();
                    assert_eq!(v, reference, "{name} {p} relative={relative}");
                }
            }
        }
    }
}

#[test]
fn homology_lift_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for (name, k) in bundled::manifolds() {
        let c = k.chain_complex();
        let n = standard_bases(&c).n_rational();
        let reference = r_torsion(&BasedChainComplex::new(&c, n.clone())).unwrap();
        for _ in 0..20 {
            let h = perturb_lifts(&c, &n, &mut rng);
            assert_eq!(r_torsion(&BasedChainComplex::new(&c, h)).unwrap(), reference, "{name}");
        }
    }
    for (name, k) in bundled::sections() {
        let c = k.chain_complex();
        let std = SectionBases::standard(&c);
        for p in Perversity::all(c.top() + 1) {
            for relative in [false, true] {
                let reference = intersection_torsion_cone(&c, &p, relative, &std, 1).unwrap().direct;
                for _ in 0..5 {
                    let bases = SectionBases { homology: perturb_lifts(&c, &std.homology, &mut rng), grams: std.grams.clone() };
                    let r = intersection_torsion_cone(&c, &p, relative, &bases, 1).unwrap();
                    assert!(r.exact);
                    assert_eq!(r.direct, reference, "{name} {p} relative={relative}");
                }
            }
        }
    }
}

#[test]
fn subdivision_map_is_a_chain_map() {
    for (name, k) in bundled::manifolds() {
        let sd = k.barycentric_subdivision().chain_complex();
        let f = subdivision_map(&k, &sd);
        let c = k.chain_complex();
        for q in 1..=c.top() {
            let lhs = &sd.boundary(q).to_rational() * &f[q];
            let rhs = &f[q - 1] * &c.boundary(q).to_rational();
            assert_eq!(lhs, rhs, "{name} degree {q}");
        }
    }
}

#[test]
fn subdivision_invariance() {
    for (name, k) in bundled::manifolds() {
        let sdk = k.barycentric_subdivision();
        let sd = sdk.chain_complex();
        let c = k.chain_complex();
        let f = subdivision_map(&k, &sd);
        let n = standard_bases(&c).n_rational();
        let pushed: Vec<RatMatrix> = (0..=c.top()).map(|q| &f[q] * &n[q]).collect();
        let before = r_torsion(&BasedChainComplex::new(&c, n.clone())).unwrap();
        let after = r_torsion(&BasedChainComplex::new(&sd, pushed.clone())).unwrap();
        assert_eq!(before, after, "{name}");

        if bundled::sections().iter().any(|(s, _)| *s == name) {
            for p in Perversity::all(c.top() + 1) {
                for relative in [false, true] {
                    let a = intersection_torsion_cone(&c, &p, relative, &SectionBases { homology: n.clone(), grams: vec![None; c.top() + 1] }, 1).unwrap();
                    let b = intersection_torsion_cone(&sd, &p, relative, &SectionBases { homology: pushed.clone(), grams: vec![None; c.top() + 1] }, 1).unwrap();
                    assert!(a.exact && b.exact);
                    assert_eq!(a.direct, b.direct, "{name} {p} relative={relative}");
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn scaling_a_homology_vector(section in 0usize..4, degree in 0usize..3, num in 1i64..9, den in 1i64..9) {
        let (_, k) = &bundled::sections()[section];
        let c = k.chain_complex();
        let q = degree.min(c.top());
        let mut h = standard_bases(&c).n_rational();
        prop_assume!(h[q].cols() > 0);
        let before = r_torsion(&BasedChainComplex::new(&c, h.clone())).unwrap();
        let s = rat(num, den);
        for i in 0..h[q].rows() {
            h[q][(i, 0)] = &h[q][(i, 0)] * &s;
        }
        let after = r_torsion(&BasedChainComplex::new(&c, h)).unwrap();
        prop_assert_eq!(after, &before * &TorsionValue::from_rational(s).alt(q));
    }

    #[test]
    fn milnor_with_random_homology_bases(seed in 0u64..1000, which in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let incs = all_inclusions();
        let inc = &incs[which % incs.len()].1;
        let random_basis = |c: &ChainComplex, rng: &mut ChaCha8Rng| -> Vec<RatMatrix> {
            standard_bases(c)
                .n_rational()
                .into_iter()
                .map(|h| {
                    let u = random_unimodular(h.cols(), rng).to_rational();
                    let d = RatMatrix::from_fn(h.cols(), h.cols(), |i, j| if i == j { rat(rng.gen_range(1..4), rng.gen_range(1..4)) } else { Rat::zero() });
                    &(&h * &u) * &d
                })
                .collect()
        };
        let hs = random_basis(&inc.source, &mut rng);
        let ht = random_basis(&inc.target, &mut rng);
        let hq = random_basis(&inc.quotient(), &mut rng);
        let r = milnor_additivity_check(inc, &hs, &ht, &hq).unwrap();
        prop_assert!(r.holds, "{:?}", r);
    }
}

/// Inclusions of subcomplexes and of cone bases shipped with the crate.
fn all_inclusions() -> Vec<(String, icone_core::ChainInclusion)> {
    let mut out = vec![];
    for (name, k) in bundled::manifolds() {
        for sub in k.subcomplex_names() {
            out.push((format!("{name}/{sub}"), k.inclusion_of(k.subcomplex(sub).unwrap()).unwrap()));
        }
    }
    for (name, k) in bundled::sections() {
        out.push((format!("cone-{name}"), k.cone().unwrap().1));
    }
    out
}

#[test]
fn milnor_on_bundled_inclusions() {
    for (name, inc) in all_inclusions() {
        let r = milnor_standard(&inc).unwrap();
        assert!(r.holds, "{name}: {} vs {}", r.total, r.product);
    }
}

#[test]
fn relative_cone_torsion_inverts_the_section() {
    for (name, k) in bundled::sections() {
        let (_, inc) = k.cone().unwrap();
        let r = milnor_standard(&inc).unwrap();
        // the cone is contractible with torsion 1 and the sequence torsion
        // is trivial for standard bases
        assert_eq!(r.total, TorsionValue::one(), "{name}");
        assert_eq!(&r.quotient * &r.sub, TorsionValue::one(), "{name}");
    }
    let rp2 = bundled::load("rp2");
    let r = milnor_standard(&rp2.cone().unwrap().1).unwrap();
    assert_eq!(r.sub, tv(1, 2));
    assert_eq!(r.quotient, tv(2, 1));
}

#[test]
fn cone_closed_form_matches_direct_torsion() {
    for (name, k) in bundled::sections() {
        let c = k.chain_complex();
        let bases = SectionBases::standard(&c);
        for p in Perversity::all(c.top() + 1) {
            for relative in [false, true] {
                for rank in [1, 3] {
                    let r = intersection_torsion_cone(&c, &p, relative, &bases, rank).unwrap();
                    assert!(r.exact, "{name} {p} relative={relative}: {} vs {}", r.closed_form, r.direct);
                }
            }
        }
    }
}

#[test]
fn torsion_subgroup_factor_on_rp2() {
    let c = bundled::load("rp2").chain_complex();
    let bases = SectionBases::standard(&c);
    // lower middle: a = 3, degrees 0 and 1 contribute, #TH_1 = 2 with exponent −1
    let r = intersection_torsion_cone(&c, &Perversity::lower_middle(3), false, &bases, 1).unwrap();
    assert_eq!(r.direct, tv(1, 2));
    assert_eq!(r.factors[1].torsion_order, "2");
    // upper middle: a = 2, only degree 0
    let r = intersection_torsion_cone(&c, &Perversity::upper_middle(3), false, &bases, 1).unwrap();
    assert_eq!(r.direct, tv(1, 1));
    // relative, upper middle: degrees 1, 2 with exponent (−1)^{q+1}
    let r = intersection_torsion_cone(&c, &Perversity::upper_middle(3), true, &bases, 1).unwrap();
    assert_eq!(r.direct, tv(2, 1));
    // coefficient rank multiplies the log
    let r = intersection_torsion_cone(&c, &Perversity::lower_middle(3), false, &bases, 4).unwrap();
    assert_eq!(r.direct, tv(1, 16));
}

#[test]
fn scaled_and_weighted_homology_bases() {
    let c = bundled::load("circle").chain_complex();
    let mut bases = SectionBases::standard(&c);
    bases.homology[0] = bases.homology[0].map(|x| x * rat(2, 1));
    let r = intersection_torsion_cone(&c, &Perversity::zero(2), false, &bases, 1).unwrap();
    assert!(r.exact);
    assert_eq!(r.direct, tv(2, 1));

    // a Gram matrix [γ] on H_0 adds ½ log γ
    let l: f64 = 0.7;
    let gamma = l * l / 2.0;
    let bases = SectionBases::standard(&c).with_grams(vec![Some(vec![vec![gamma]]), None]);
    let r = intersection_torsion_cone(&c, &Perversity::zero(2), false, &bases, 1).unwrap();
    assert!(r.exact);
    assert!((r.direct.log() - 0.5 * gamma.ln()).abs() < 1e-15);
}

fn pseudomanifold_inclusions() -> Vec<(String, usize, icone_core::ChainInclusion)> {
    let mut out = vec![];
    for (name, k) in bundled::pseudomanifolds() {
        for v in k.singular_vertices().clone() {
            let text = k
                .to_text()
                .lines()
                .map(|l| if l.starts_with("singular") { format!("singular {v}") } else { l.to_string() })
                .collect::<Vec<_>>()
                .join("\n");
            let one = RegularCWComplex::parse(&text).unwrap();
            out.push((format!("{name}@{v}"), one.dim(), one.singular_decomposition().unwrap().inclusion));
        }
    }
    let torus = bundled::load("torus");
    let pinched = RegularCWComplex::parse(&format!("{}\nsingular 4\n", torus.to_text())).unwrap();
    out.push(("torus@4".into(), 2, pinched.singular_decomposition().unwrap().inclusion));
    out
}

#[test]
fn pseudomanifold_torsion_factorises() {
    for (name, n, inc) in pseudomanifold_inclusions() {
        for p in Perversity::all(n) {
            let r = intersection_torsion_pseudomanifold(&inc, &p).unwrap_or_else(|e| panic!("{name} {p}: {e}"));
            assert!(r.exact, "{name} {p}: {} vs {}", r.product, r.direct);
        }
    }
}

#[test]
fn mapping_cone_split_is_milnor_exact() {
    for (name, n, inc) in pseudomanifold_inclusions() {
        let section = inc.source.truncated_to(n - 1).unwrap().extended_to(n - 1);
        for p in Perversity::all(n) {
            let total = intersection_mapping_cone(&inc, &p).unwrap();
            let cone = intersection_cone_complex(&section, &p, false).unwrap();
            let ext = icone_core::ChainInclusion::new(
                section.extended_to(n),
                inc.target.truncated_to(n).unwrap().extended_to(n),
                (0..=n).map(|q| inc.map(q).to_vec()).collect(),
            )
            .unwrap();
            let split = cone_into_mapping_cone(&cone, &total, &ext).unwrap();
            let r = milnor_standard(&split).unwrap();
            assert!(r.holds, "{name} {p}");
            // cone factor of the split equals the closed form
            let cf = intersection_torsion_of(&cone, &section, &SectionBases::standard(&section), 1).unwrap();
            assert!(cf.exact);
        }
    }
}

#[test]
fn identity_inclusion_matches_cone_torsion() {
    for (name, k) in bundled::sections() {
        let c = k.chain_complex();
        let inc = icone_core::ChainInclusion::identity(&c);
        for p in Perversity::all(c.top() + 1) {
            let r = intersection_torsion_pseudomanifold(&inc, &p).unwrap();
            let cone = intersection_torsion_cone(&c, &p, false, &SectionBases::standard(&c), 1).unwrap();
            assert!(r.exact, "{name} {p}");
            assert_eq!(r.direct, cone.direct, "{name} {p}");
        }
    }
}

fn circle_grams(r: f64) -> Vec<Option<Vec<Vec<f64>>>> {
    let len = 2.0 * std::f64::consts::PI * r;
    vec![Some(vec![vec![len]]), Some(vec![vec![1.0 / len]])]
}

fn torus_grams(l1: f64, l2: f64) -> Vec<Option<Vec<Vec<f64>>>> {
    let a = l1 * l2;
    vec![Some(vec![vec![a]]), Some(vec![vec![l2 / l1, 0.0], vec![0.0, l1 / l2]]), Some(vec![vec![1.0 / a]])]
}

#[test]
fn torsion_duality_on_orientable_sections() {
    for (name, k) in orientable() {
        let c = k.chain_complex();
        for p in Perversity::all(c.top() + 1) {
            let r = torsion_duality_check(&c, &p, &SectionBases::standard(&c)).unwrap_or_else(|e| panic!("{name} {p}: {e}"));
            assert!(r.exact);
        }
    }
    let circle = bundled::load("circle").chain_complex();
    for r in [1.0, 2.0, 0.3] {
        let bases = SectionBases::standard(&circle).with_grams(circle_grams(r));
        let rep = torsion_duality_check(&circle, &Perversity::zero(2), &bases).unwrap();
        assert!((rep.log_absolute - rep.log_relative_dual).abs() < 1e-14);
        assert!((rep.log_absolute - 0.5 * (2.0 * std::f64::consts::PI * r).ln()).abs() < 1e-14);
    }
    let torus = bundled::load("torus").chain_complex();
    for (l1, l2) in [(2.0 * std::f64::consts::PI, 2.0 * std::f64::consts::PI), (1.0, 3.0)] {
        let bases = SectionBases::standard(&torus).with_grams(torus_grams(l1, l2));
        for p in Perversity::all(3) {
            let rep = torsion_duality_check(&torus, &p, &bases).unwrap();
            assert!((rep.log_absolute - rep.log_relative_dual).abs() < 1e-13, "{p}");
        }
    }
}

#[test]
fn even_middle_perversity_products_are_trivial() {
    // m = 2: I^m τ(C) · I^m τ(C, W) = 1 for the self-dual pairing with Grams
    let torus = bundled::load("torus").chain_complex();
    let bases = SectionBases::standard(&torus).with_grams(torus_grams(1.0, 2.0));
    let abs = intersection_torsion_cone(&torus, &Perversity::lower_middle(3), false, &bases, 1).unwrap();
    let rel = intersection_torsion_cone(&torus, &Perversity::upper_middle(3), true, &bases, 1).unwrap();
    assert!((abs.direct.log() - rel.direct.log()).abs() < 1e-14);
    assert!(One::is_one(&abs.direct.rational));
}
