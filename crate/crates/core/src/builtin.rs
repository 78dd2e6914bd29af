//! The two builtin catalogs: the one-holed torus and the two-holed torus.
//!
//! Conventions: a positive twist turns left when the page is drawn with its
//! standard orientation, and `z2` is the class of the second boundary
//! component, so `[d1] = −[d2]`. The automorphisms were derived by hand and
//! are re-checked by `Surface::validate_catalog`.

use crate::freegroup::{FreeAutomorphism, FreeWord};
use crate::surface::{
    boundary_twist, ChainRelation, CurveConfig, LanternRelation, Relations, Surface, SurfaceSpec,
};

fn aut(spec: &SurfaceSpec, images: &[&str], inverse_images: &[&str]) -> FreeAutomorphism {
    let names = spec.letter_names();
    let parse = |ws: &[&str]| -> Vec<FreeWord> {
        ws.iter().map(|w| FreeWord::parse(w, &names).expect("builtin word parses")).collect()
    };
    FreeAutomorphism::new(parse(images), parse(inverse_images)).expect("builtin automorphism is valid")
}

fn curve(
    spec: &SurfaceSpec,
    name: &str,
    hqp: [&[i64]; 3],
    images: &[&str],
    inverse_images: &[&str],
) -> CurveConfig {
    CurveConfig {
        name: name.to_string(),
        h: hqp[0].to_vec(),
        q: hqp[1].to_vec(),
        p: hqp[2].to_vec(),
        boundary_parallel_to: None,
        aut: Some(aut(spec, images, inverse_images)),
    }
}

fn pairs(list: &[(&str, &str)]) -> Vec<[String; 2]> {
    list.iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect()
}

/// Σ₁,₁ with curves `a`, `b` (meeting once) and the boundary-parallel `d`.
pub fn sigma11() -> Surface {
    let spec = SurfaceSpec::standard(1, 1).expect("valid spec");
    let curves = vec![
        curve(&spec, "a", [&[1, 0], &[0, 1], &[0, 1]], &["x1", "x1 y1"], &["x1", "x1^-1 y1"]),
        curve(&spec, "b", [&[0, 1], &[-1, 0], &[-1, 0]], &["x1 y1^-1", "y1"], &["x1 y1", "y1"]),
        boundary_twist(&spec, 1, "d").expect("boundary 1 exists"),
    ];
    let relations = Relations {
        braid: pairs(&[("a", "b")]),
        commute: pairs(&[("a", "d"), ("b", "d")]),
        chain: vec![ChainRelation { a: "a".into(), b: "b".into(), boundary: "d".into() }],
        lantern: vec![],
    };
    Surface::new("sigma11", spec, curves, relations).expect("builtin catalog is well formed")
}

/// Σ₁,₂ with `a`, `b`, the separating `g` around both boundary circles, the
/// boundary-parallel `d1`, `d2`, the non-separating `e` whose complement is a
/// four-holed sphere, and the three interior lantern curves `s1`, `s2`, `s3`.
pub fn sigma12() -> Surface {
    let spec = SurfaceSpec::standard(1, 2).expect("valid spec");
    let curves = vec![
        curve(
            &spec,
            "a",
            [&[1, 0, 0], &[0, 1, 0], &[0, 1, 0]],
            &["x1", "x1 y1", "z2", "a2"],
            &["x1", "x1^-1 y1", "z2", "a2"],
        ),
        curve(
            &spec,
            "b",
            [&[0, 1, 0], &[-1, 0, 0], &[-1, 0, 0]],
            &["x1 y1^-1", "y1", "z2", "a2"],
            &["x1 y1", "y1", "z2", "a2"],
        ),
        curve(
            &spec,
            "g",
            [&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]],
            &["x1 y1^-1 x1^-1 y1 x1 y1^-1 x1 y1 x1^-1", "x1 y1^-1 x1^-1 y1 x1 y1 x1^-1", "z2", "a2"],
            &["y1^-1 x1 y1 x1 y1^-1 x1^-1 y1", "y1^-1 x1 y1 x1^-1 y1 x1 y1^-1 x1^-1 y1", "z2", "a2"],
        ),
        boundary_twist(&spec, 1, "d1").expect("boundary 1 exists"),
        boundary_twist(&spec, 2, "d2").expect("boundary 2 exists"),
        curve(
            &spec,
            "e",
            [&[1, -1, 0], &[1, 1, 0], &[1, 1, 0]],
            &["x1 y1^-1 x1", "x1", "z2", "a2"],
            &["y1", "y1 x1^-1 y1", "z2", "a2"],
        ),
        curve(
            &spec,
            "s1",
            [&[1, -1, -1], &[1, 1, 0], &[1, 1, 1]],
            &[
                "x1 y1^-1 z2^-1 x1 z2^-1 x1 y1^-1 z2 y1 x1^-1",
                "x1 y1^-1 z2^-1 y1 z2^-1 x1 y1^-1 z2 y1 x1^-1",
                "x1 y1^-1 z2 y1 x1^-1",
                "x1 y1^-1 z2^-1 a2",
            ],
            &[
                "z2 y1 y1 x1^-1 z2 x1 y1^-1 z2^-1",
                "z2 y1 x1^-1 y1 y1 x1^-1 z2 x1 y1^-1 z2^-1",
                "z2 y1 x1^-1 z2 x1 y1^-1 z2^-1",
                "z2 y1 x1^-1 a2",
            ],
        ),
        curve(
            &spec,
            "s2",
            [&[1, -1, 1], &[1, 1, 0], &[1, 1, -1]],
            &["x1 z2 y1^-1 x1", "y1 z2 y1^-1 x1", "x1^-1 y1 z2 y1^-1 x1", "x1^-1 y1 z2^-1 a2"],
            &["y1 z2^-1", "y1 x1^-1 y1 z2^-1", "z2 y1^-1 x1 z2 x1^-1 y1 z2^-1", "z2 y1^-1 x1 a2"],
        ),
        curve(
            &spec,
            "s3",
            [&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]],
            &[
                "x1 y1^-1 z2 x1^-1 y1 z2^-1 x1 z2^-1 y1 x1^-1 z2 y1^-1 x1 z2 x1^-1 y1 z2^-1 x1 y1^-1 z2 y1^-1 x1 z2^-1 y1 x1^-1",
                "x1 y1^-1 z2 x1^-1 y1 z2^-1 y1 z2^-1 y1 x1^-1 z2 y1^-1 x1 z2 x1^-1 y1 z2^-1 x1 y1^-1 z2 y1^-1 x1 z2^-1 y1 x1^-1",
                "x1 y1^-1 z2 x1^-1 y1 z2^-1 y1 x1^-1 z2 y1^-1 x1 z2 x1^-1 y1 z2^-1 x1 y1^-1 z2 y1^-1 x1 z2^-1 y1 x1^-1",
                "x1 y1^-1 z2 x1^-1 y1 z2^-1 y1 x1^-1 z2 y1^-1 x1 z2^-1 a2",
            ],
            &[
                "z2 y1^-1 x1 z2^-1 y1 x1^-1 y1 z2^-1 x1 y1^-1 z2 y1 x1^-1 z2 y1^-1 x1 z2^-1 x1 y1^-1 z2 x1^-1 y1 z2^-1",
                "z2 y1^-1 x1 z2^-1 y1 x1^-1 y1 x1^-1 y1 z2^-1 x1 y1^-1 z2 y1 x1^-1 z2 y1^-1 x1 z2^-1 x1 y1^-1 z2 x1^-1 y1 z2^-1",
                "z2 y1^-1 x1 z2^-1 y1 x1^-1 z2 x1^-1 y1 z2^-1 x1 y1^-1 z2 y1 x1^-1 z2 y1^-1 x1 z2^-1 x1 y1^-1 z2 x1^-1 y1 z2^-1",
                "z2 y1^-1 x1 z2^-1 y1 x1^-1 z2 x1^-1 y1 z2^-1 x1 y1^-1 a2",
            ],
        ),
    ];
    let relations = Relations {
        braid: pairs(&[("a", "b"), ("a", "e"), ("a", "s1"), ("a", "s2"), ("b", "e"), ("b", "s1"), ("b", "s2")]),
        commute: pairs(&[
            ("a", "g"),
            ("a", "d1"),
            ("a", "d2"),
            ("b", "g"),
            ("b", "d1"),
            ("b", "d2"),
            ("g", "d1"),
            ("g", "d2"),
            ("g", "e"),
            ("d1", "d2"),
            ("d1", "e"),
            ("d1", "s1"),
            ("d1", "s2"),
            ("d1", "s3"),
            ("d2", "e"),
            ("d2", "s1"),
            ("d2", "s2"),
            ("d2", "s3"),
            ("e", "s1"),
            ("e", "s2"),
            ("e", "s3"),
        ]),
        chain: vec![ChainRelation { a: "a".into(), b: "b".into(), boundary: "g".into() }],
        lantern: vec![LanternRelation {
            lhs: vec!["d1".into(), "d2".into(), "e".into(), "e".into()],
            rhs: vec!["s1".into(), "s2".into(), "s3".into()],
        }],
    };
    Surface::new("sigma12", spec, curves, relations).expect("builtin catalog is well formed")
}
