use std::collections::BTreeSet;

use icone_core::bundled;
use icone_core::complex::{algebraic_cone, mapping_cone, ChainInclusion};
use icone_core::linalg::{Int, IntMatrix};
use icone_core::snf::{homology, standard_bases, HomologyGroup};
use icone_core::CoreError;
use num_traits::{One, Signed, ToPrimitive};

const P: i64 = 1_000_000_007;

/// Rank over 𝔽_p by plain elimination on i64; independent of the exact code.
fn rank_mod_p(m: &IntMatrix) -> usize {
    let mut a: Vec<Vec<i64>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)].to_i64().unwrap().rem_euclid(P)).collect())
        .collect();
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, p);
        let inv = pow_mod(a[r][c], P - 2);
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let f = a[i][c] * inv % P;
                for j in c..cols {
                    a[i][j] = (a[i][j] - f * a[r][j]).rem_euclid(P);
                }
            }
        }
        r += 1;
    }
    r
}

fn pow_mod(mut b: i64, mut e: i64) -> i64 {
    let mut acc = 1i64;
    b %= P;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    acc
}

/// Plain triple-loop product on i64.
fn product_i64(a: &IntMatrix, b: &IntMatrix) -> Vec<Vec<i64>> {
    (0..a.rows())
        .map(|i| {
            (0..b.cols())
                .map(|j| (0..a.cols()).map(|k| a[(i, k)].to_i64().unwrap() * b[(k, j)].to_i64().unwrap()).sum())
                .collect()
        })
        .collect()
}

fn free(ranks: &[usize]) -> Vec<HomologyGroup> {
    ranks.iter().map(|&r| HomologyGroup::free(r)).collect()
}

#[test]
fn boundary_squares_vanish_by_direct_product() {
    for (name, k) in bundled::manifolds().into_iter().map(|(n, k)| (n.to_string(), k)).chain(bundled::pseudomanifolds()) {
        let c = k.chain_complex();
        for q in 1..c.top() {
            let prod = product_i64(&c.boundary(q), &c.boundary(q + 1));
            assert!(prod.iter().flatten().all(|&x| x == 0), "{name}: ∂_{q}∂_{} ≠ 0", q + 1);
        }
    }
}

#[test]
fn cell_counts_and_ranks() {
    let circle = bundled::load("circle").chain_complex();
    assert_eq!(circle.dims(), &[3, 3]);
    assert_eq!(rank_mod_p(&circle.boundary(1)), 2);
    let tet = bundled::load("tetrahedron").chain_complex();
    assert_eq!(tet.dims(), &[4, 6, 4]);
    assert_eq!(rank_mod_p(&tet.boundary(1)), 3);
    assert_eq!(rank_mod_p(&tet.boundary(2)), 3);
    assert_eq!(bundled::load("torus").counts(), vec![9, 27, 18]);
    assert_eq!(bundled::load("rp2").counts(), vec![6, 15, 10]);
    assert_eq!(bundled::load("point").chain_complex().dims(), &[1]);
}

#[test]
fn homology_of_bundled_manifolds() {
    let cases: Vec<(&str, Vec<HomologyGroup>)> = vec![
        ("circle", free(&[1, 1])),
        ("disk", free(&[1, 0, 0])),
        ("annulus", free(&[1, 1, 0])),
        ("tetrahedron", free(&[1, 0, 1])),
        ("torus", free(&[1, 2, 1])),
        ("rp2", vec![HomologyGroup::free(1), HomologyGroup { rank: 0, torsion: vec![Int::from(2)] }, HomologyGroup::zero()]),
    ];
    for (name, expected) in cases {
        let c = bundled::load(name).chain_complex();
        let h = homology(&c);
        assert_eq!(h, expected, "{name}");
        // rank cross-check over 𝔽_p (p odd, so torsion 2 does not interfere)
        for q in 0..=c.top() {
            let r = c.dim(q) - rank_mod_p(&c.boundary(q)) - rank_mod_p(&c.boundary(q + 1));
            assert_eq!(r, h[q].rank, "{name} degree {q}");
        }
    }
}

#[test]
fn geometric_cones_are_contractible_and_match_algebraic_cone() {
    for (name, k) in bundled::manifolds() {
        let (cone, j) = k.cone().unwrap();
        let h = homology(&cone.chain_complex());
        assert_eq!(h[0], HomologyGroup::free(1), "{name}");
        assert!(h[1..].iter().all(HomologyGroup::is_zero), "{name}");
        assert!(j.matrix(0).cols() == k.count(0));

        // Ċ and the geometric cone differ by a diagonal ±1 change of basis:
        // base y_q ↦ (−1)^q y_q, v*e ↦ (−1)^{dim e} (e in the cone block), v ↦ −v.
        let base = k.chain_complex();
        let alg = algebraic_cone(&base, &base.standard_augmentation());
        let geo = cone.chain_complex();
        for q in 1..=alg.top() {
            let sign_of = |deg: usize, label: &str| -> i64 {
                if label == "v" {
                    -1
                } else if label.starts_with("v*") {
                    if (deg - 1) % 2 == 0 { 1 } else { -1 }
                } else if deg % 2 == 0 {
                    1
                } else {
                    -1
                }
            };
            let g = geo.boundary(q);
            let a = alg.boundary(q);
            for (ci, cl) in alg.labels(q).iter().enumerate() {
                let gc = geo.labels(q).iter().position(|x| x == cl).unwrap();
                for (ri, rl) in alg.labels(q - 1).iter().enumerate() {
                    let gr = geo.labels(q - 1).iter().position(|x| x == rl).unwrap();
                    let expect = &a[(ri, ci)] * Int::from(sign_of(q, cl) * sign_of(q - 1, rl));
                    assert_eq!(g[(gr, gc)], expect, "{name}: degree {q} entry ({rl}, {cl})");
                }
            }
        }
    }
}

#[test]
fn cone_of_circle_counts() {
    let (c, _) = bundled::load("circle").cone().unwrap();
    assert_eq!(c.counts(), vec![4, 6, 3]);
    assert!(c.singular_vertices().contains("v"));
}

#[test]
fn mapping_cones_compute_relative_homology() {
    for (name, k) in bundled::manifolds() {
        for sub in k.subcomplex_names().cloned().collect::<Vec<_>>() {
            let ids = k.subcomplex(&sub).unwrap().clone();
            let inc = k.inclusion_of(&ids).unwrap();
            let cone = homology(&mapping_cone(&inc));
            let rel = homology(&k.relative_chain(&ids).unwrap());
            assert_eq!(cone[0], HomologyGroup::free(1));
            for q in 1..rel.len() {
                assert_eq!(cone[q], rel[q], "{name} rel {sub}, degree {q}");
            }
        }
    }
    // identity of the circle: the mapping cone is the cone
    let c = bundled::load("circle").chain_complex();
    let h = homology(&mapping_cone(&ChainInclusion::identity(&c)));
    assert_eq!(h, free(&[1, 0, 0]));
}

#[test]
fn relative_homology_examples() {
    let disk = bundled::load("disk");
    let h = homology(&disk.relative_chain(disk.subcomplex("boundary").unwrap()).unwrap());
    assert_eq!(h, free(&[0, 0, 1]));
    let cc = bundled::load("circle-cone");
    let h = homology(&cc.relative_chain(cc.subcomplex("base").unwrap()).unwrap());
    assert_eq!(h, free(&[0, 0, 1]));
    let bad: BTreeSet<String> = ["0-1".to_string()].into();
    assert!(matches!(disk.relative_chain(&bad), Err(CoreError::NotSubcomplex { .. })));
}

#[test]
fn subdivision_preserves_homology() {
    for (name, k) in bundled::manifolds() {
        let sd = k.barycentric_subdivision();
        assert_eq!(homology(&sd.chain_complex()), homology(&k.chain_complex()), "{name}");
        for sub in k.subcomplex_names() {
            let a = homology(&k.relative_chain(k.subcomplex(sub).unwrap()).unwrap());
            let b = homology(&sd.relative_chain(sd.subcomplex(sub).unwrap()).unwrap());
            assert_eq!(a, b, "{name} rel {sub}");
        }
    }
    let t = bundled::load("torus").barycentric_subdivision();
    assert_eq!(t.counts(), vec![54, 162, 108]);
}

#[test]
fn standard_bases_invariants() {
    for (name, k) in bundled::manifolds() {
        let c = k.chain_complex();
        let sb = standard_bases(&c);
        let h = homology(&c);
        for q in 0..=c.top() {
            let d = &sb.degrees[q];
            assert_eq!(d.e.rows(), c.dim(q));
            assert_eq!(d.e.cols(), c.dim(q), "{name} degree {q}");
            assert!(icone_core::linalg::bareiss_det(&d.e).abs().is_one(), "{name}: e_{q} not unimodular");
            assert_eq!(d.free_rank(), h[q].rank);
            assert_eq!(d.torsion(), h[q].torsion);
            // ∂ of the lifts hits k_{q−1,j} times the refined cycles
            if q >= 1 {
                let img = &c.boundary(q) * &d.lifts;
                assert_eq!(img, sb.degrees[q - 1].boundary_images(), "{name} degree {q}");
            }
            // det(∂b_{q+1}, n_q, b_q / c_q) = #TH_q
            let m = IntMatrix::hstack(&[&d.boundary_images(), &d.n, &d.lifts]);
            assert_eq!(icone_core::linalg::bareiss_det(&m).abs(), d.torsion_order(), "{name} degree {q}");
            assert!((&c.boundary(q) * &d.cycles).is_zero());
        }
    }
}

#[test]
fn rp2_standard_data() {
    let c = bundled::load("rp2").chain_complex();
    let sb = standard_bases(&c);
    assert_eq!(sb.degrees[1].torsion_order(), Int::from(2));
    assert_eq!(sb.degrees[0].torsion_order(), Int::one());
    // n_0 is a vertex class: augmentation ±1
    let n0 = &sb.degrees[0].n;
    let aug: Int = (0..n0.rows()).map(|i| n0[(i, 0)].clone()).sum();
    assert!(aug.abs().is_one());
    let snf = icone_core::smith_normal_form(&c.boundary(2));
    assert_eq!(snf.factors.iter().filter(|f| !f.is_one()).collect::<Vec<_>>(), vec![&Int::from(2)]);
}
