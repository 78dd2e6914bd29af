use openbook::homology::h1_of_word;
use openbook::{FreeAutomorphism, Surface, TwistWord};

fn builtin(name: &str) -> Surface {
    Surface::load_builtin(name).unwrap()
}

#[test]
fn builtin_catalogs_validate() {
    for name in ["sigma11", "sigma12"] {
        let report = builtin(name).validate_catalog().unwrap();
        assert!(report.all_passed(), "{name}:\n{}", report.render());
    }
}

#[test]
fn unknown_surface_is_an_error() {
    assert!(Surface::load_builtin("sigma33").is_err());
}

#[test]
fn identity_automorphism_fails_transvection_check() {
    let mut s = builtin("sigma12");
    let rank = s.spec.ext_rank();
    let i = s.curve_index("a").unwrap();
    s.curves[i].aut = Some(FreeAutomorphism::identity(rank));
    let report = s.validate_catalog().unwrap();
    let fail = report.first_failure().expect("a failing check");
    assert_eq!(fail.name, "transvection a");
}

#[test]
fn json_round_trip_is_exact() {
    for name in ["sigma11", "sigma12"] {
        let s = builtin(name);
        let text = s.to_json();
        let back = Surface::from_json(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_json(), text);
    }
}

#[test]
fn json_round_trip_after_stabilisation() {
    let s = builtin("sigma12").stabilize(2).unwrap().surface;
    let back = Surface::from_json(&s.to_json()).unwrap();
    assert_eq!(back, s);
}

fn edit_json(name: &str, edit: impl FnOnce(&mut serde_json::Value)) -> String {
    let mut v: serde_json::Value = serde_json::from_str(&builtin(name).to_json()).unwrap();
    edit(&mut v);
    serde_json::to_string(&v).unwrap()
}

fn curve_mut<'a>(v: &'a mut serde_json::Value, name: &str) -> &'a mut serde_json::Value {
    v["curves"].as_array_mut().unwrap().iter_mut().find(|c| c["name"] == name).unwrap()
}

#[test]
fn non_invertible_automorphism_is_rejected() {
    let text = edit_json("sigma11", |v| {
        curve_mut(v, "a")["aut"]["images"] = serde_json::json!(["x1^2", "y1"]);
    });
    assert!(Surface::from_json(&text).is_err());
}

#[test]
fn null_homologous_curve_with_nonzero_q_is_rejected() {
    let text = edit_json("sigma12", |v| {
        curve_mut(v, "g")["q"][0] = serde_json::json!(1);
    });
    let s = Surface::from_json(&text).unwrap();
    let report = s.validate_catalog().unwrap();
    let fail = report.first_failure().unwrap();
    assert_eq!(fail.name, "invariants g");
    assert!(fail.detail.contains("null-homologous"));
}

#[test]
fn unknown_fields_and_bad_lengths_are_rejected() {
    let extra = edit_json("sigma11", |v| v["colour"] = serde_json::json!("blue"));
    assert!(Surface::from_json(&extra).is_err());
    let short = edit_json("sigma11", |v| {
        curve_mut(v, "a")["h"] = serde_json::json!([1]);
    });
    assert!(Surface::from_json(&short).is_err());
    let dangling = edit_json("sigma11", |v| v["relations"]["braid"] = serde_json::json!([["a", "zz"]]));
    assert!(Surface::from_json(&dangling).is_err());
}

#[test]
fn parse_errors_carry_a_position() {
    let err = Surface::from_json("{\n  \"name\": 3\n}").unwrap_err().to_string();
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn generic_stabilisation_reproduces_sigma12() {
    let mut s11 = builtin("sigma11");
    s11.name = "copy".into();
    let st = s11.stabilize(1).unwrap();
    let s12 = builtin("sigma12");
    assert_eq!(st.new_k, 2);
    for c in &st.surface.curves {
        let target = if c.name == "g2" { "g" } else { c.name.as_str() };
        let mut renamed = c.clone();
        renamed.name = target.to_string();
        assert_eq!(&renamed, s12.curve(target).unwrap(), "curve {}", c.name);
    }
    assert_eq!(st.surface.spec, s12.spec);
}

#[test]
fn builtin_stabilisation_lands_on_sigma12() {
    let st = builtin("sigma11").stabilize(1).unwrap();
    assert_eq!(st.surface, builtin("sigma12"));
    assert_eq!(st.renames.get("d").map(String::as_str), Some("g"));
    assert_eq!(st.stabilisation_curve, "d1");
    assert_eq!(st.k_curve, "d2");
}

#[test]
fn repeated_stabilisations_validate() {
    let mut cur = builtin("sigma12");
    for k in [2, 1, 3, 2, 4, 1] {
        let st = cur.stabilize(k).unwrap();
        let report = st.surface.validate_catalog().unwrap();
        assert!(report.all_passed(), "after stabilising at {k}:\n{}", report.render());
        assert_eq!(st.surface.spec.boundary_count(), cur.spec.boundary_count() + 1);
        cur = st.surface;
    }
}

#[test]
fn stabilising_an_open_book_keeps_the_manifold_homology() {
    let s = builtin("sigma12");
    let w = TwistWord::parse("a b g^-1 d1 d2^4").unwrap();
    let before = h1_of_word(&s, &w).unwrap();
    for k in 1..=2 {
        let st = s.stabilize(k).unwrap();
        let mut w2 = w.rename(&st.renames);
        w2.push(st.stabilisation_curve.clone(), 1);
        assert_eq!(h1_of_word(&st.surface, &w2).unwrap(), before, "stabilising at {k}");
    }
}

#[test]
fn boundary_words_abelianize_to_boundary_classes() {
    let s = builtin("sigma12").stabilize(2).unwrap().surface;
    let m = s.spec.rank();
    for k in 1..=s.spec.boundary_count() {
        let ab = s.spec.boundary_word(k).unwrap().abelianize();
        assert_eq!(ab[..m].to_vec(), s.spec.boundary_class(k).unwrap(), "boundary {k}");
    }
    assert!(s.spec.boundary_word(0).is_err());
}

#[test]
fn boundary_twists_fix_every_boundary_word() {
    let s = builtin("sigma12");
    for c in s.curves.iter().filter(|c| c.boundary_parallel_to.is_some()) {
        let aut = c.aut().unwrap();
        for (k, w) in s.spec.boundary_words().iter().enumerate() {
            assert_eq!(aut.apply(w), *w, "{} moves boundary {}", c.name, k + 1);
        }
    }
}

#[test]
fn missing_pairing_data_is_rejected() {
    let text = edit_json("sigma12", |v| {
        curve_mut(v, "e").as_object_mut().unwrap().remove("q");
    });
    let err = Surface::from_json(&text).unwrap_err().to_string();
    assert!(err.contains("missing field `q`"), "{err}");
}
