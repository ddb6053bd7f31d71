//! Complexes shipped with the crate.

use crate::complex::RegularCWComplex;

pub const FILES: &[(&str, &str)] = &[
    ("point", include_str!("../data/point.cw")),
    ("circle", include_str!("../data/circle.cw")),
    ("disk", include_str!("../data/disk.cw")),
    ("annulus", include_str!("../data/annulus.cw")),
    ("tetrahedron", include_str!("../data/tetrahedron.cw")),
    ("torus", include_str!("../data/torus.cw")),
    ("rp2", include_str!("../data/rp2.cw")),
    ("circle-cone", include_str!("../data/circle-cone.cw")),
    ("coned-annulus", include_str!("../data/coned-annulus.cw")),
    ("suspended-circle", include_str!("../data/suspended-circle.cw")),
];

/// Parses a bundled complex by name. Panics on unknown names.
pub fn load(name: &str) -> RegularCWComplex {
    let text = FILES.iter().find(|(n, _)| *n == name).unwrap_or_else(|| panic!("no bundled complex {name:?}")).1;
    RegularCWComplex::parse(text).expect("bundled complexes are valid")
}

/// The manifolds (possibly with boundary): circle, disk, annulus,
/// tetrahedron boundary, torus, projective plane.
pub fn manifolds() -> Vec<(&'static str, RegularCWComplex)> {
    ["circle", "disk", "annulus", "tetrahedron", "torus", "rp2"].into_iter().map(|n| (n, load(n))).collect()
}

/// Closed sections usable as cone links.
pub fn sections() -> Vec<(&'static str, RegularCWComplex)> {
    ["circle", "tetrahedron", "torus", "rp2"].into_iter().map(|n| (n, load(n))).collect()
}

/// Complexes with marked singular vertices: the bundled files plus the
/// geometric cones over the two-dimensional sections.
pub fn pseudomanifolds() -> Vec<(String, RegularCWComplex)> {
    let mut out: Vec<(String, RegularCWComplex)> =
        ["circle-cone", "coned-annulus", "suspended-circle"].into_iter().map(|n| (n.to_string(), load(n))).collect();
    for n in ["tetrahedron", "torus", "rp2"] {
        let (c, _) = load(n).cone().expect("sections are nonempty");
        out.push((format!("cone-{n}"), c));
    }
    out
}
