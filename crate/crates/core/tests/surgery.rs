use openbook::surgery::{admissible_surgery, default_n, inadmissible_surgery, neg_continued_fraction};
use openbook::{AbelianGroup, Error, OpenBook, Rational, Surface, TwistWord};

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The open book of `S³` whose binding is a right-handed trefoil.
fn trefoil() -> OpenBook {
    OpenBook::new(Surface::load_builtin("sigma11").unwrap(), TwistWord::parse("a b").unwrap()).unwrap()
}

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p, q).unwrap()
}

#[test]
fn continued_fractions_round_trip() {
    for q in 1..=200i64 {
        for p in -200..-q {
            if gcd(p, q) != 1 {
                continue;
            }
            let cf = neg_continued_fraction(r(p, q)).unwrap();
            assert!(cf.entries().iter().all(|&c| c <= -2), "{p}/{q}");
            assert_eq!(cf.value(), r(p, q));
        }
    }
}

#[test]
fn golden_expansions() {
    assert_eq!(neg_continued_fraction(r(-5, 4)).unwrap().to_string(), "[-3+1, -2, -2, -2]^-");
    assert_eq!(neg_continued_fraction(r(-7, 3)).unwrap().entries(), &[-3, -2, -2]);
    assert!(matches!(neg_continued_fraction(r(-1, 1)), Err(Error::Unrepresentable(_))));
    assert!(matches!(neg_continued_fraction(r(-2, 3)), Err(Error::Unrepresentable(_))));
}

#[test]
fn compiler_goldens() {
    let ob = trefoil();
    let phi0 = inadmissible_surgery(&ob, "1", Rational::integer(5), Some(1)).unwrap();
    assert_eq!(phi0.surface.name, "sigma12");
    assert_eq!(phi0.word.to_string(), "a b g^-1 d1 d2^4");
    let phi_prime = inadmissible_surgery(&ob, "1", Rational::integer(2), Some(1)).unwrap();
    assert_eq!(phi_prime.word.to_string(), "a b g^-1 d1 d2");
    for n_hat in 0..=10 {
        let out = inadmissible_surgery(&ob, "1", Rational::integer(5 + n_hat), Some(1)).unwrap();
        assert_eq!(out.word.to_string(), format!("a b g^-1 d1 d2^{}", 4 + n_hat));
    }
}

#[test]
fn admissible_minus_two_is_one_stabilisation_and_one_twist() {
    // -2 is displayed as [-3+1]: |-3 + 2| = 1 stabilisation, then a twist.
    let out = admissible_surgery(&trefoil(), "1", Rational::integer(-2)).unwrap();
    assert_eq!(out.surface.name, "sigma12");
    assert_eq!(out.word.to_string(), "a b d1 d2");
}

#[test]
fn admissible_surgery_stabilises_per_coefficient() {
    // -5/4 expands to [-3+1, -2, -2, -2]: one stabilisation, then four twists.
    let out = admissible_surgery(&trefoil(), "1", r(-5, 4)).unwrap();
    assert_eq!(out.surface.spec.boundary_count(), 2);
    assert_eq!(out.word.length(), 2 + 1 + 4);
    assert!(out.word.is_positive());
}

#[test]
fn labels_follow_the_surgered_component() {
    let out = admissible_surgery(&trefoil(), "1", r(-7, 2)).unwrap();
    assert_eq!(out.bindings.last().map(String::as_str), Some("1"));
    assert_eq!(out.binding_index("1").unwrap(), out.surface.spec.boundary_count());
}

#[test]
fn surgery_on_the_trefoil_has_homology_of_order_p() {
    // r = p/q surgery on a knot in S³ has H₁ = Z/|p|, whatever the knot.
    let ob = trefoil();
    for p in 2..=15i64 {
        for q in 1..p {
            if gcd(p, q) != 1 {
                continue;
            }
            let adm = admissible_surgery(&ob, "1", r(-p, q)).unwrap();
            assert_eq!(adm.h1().unwrap(), AbelianGroup::cyclic(p), "r = -{p}/{q}");
        }
        let inad = inadmissible_surgery(&ob, "1", Rational::integer(p), Some(1)).unwrap();
        assert_eq!(inad.h1().unwrap(), AbelianGroup::cyclic(p), "r = {p}");
    }
}

#[test]
fn default_n_choices() {
    assert_eq!(default_n(Rational::integer(5)).unwrap(), 1);
    assert_eq!(default_n(r(1, 2)).unwrap(), 3);
    assert_eq!(default_n(Rational::integer(1)).unwrap(), 2);
    assert_eq!(default_n(r(3, 7)).unwrap(), 3);
    assert!(default_n(r(-1, 2)).is_err());
}

#[test]
fn inadmissible_errors() {
    let ob = trefoil();
    assert!(matches!(inadmissible_surgery(&ob, "1", Rational::integer(1), Some(1)), Err(Error::InvalidSurgery(_))));
    let msg = inadmissible_surgery(&ob, "1", r(1, 2), None).unwrap_err().to_string();
    assert!(msg.contains("choose a different n"), "{msg}");
    assert!(inadmissible_surgery(&ob, "9", Rational::integer(5), Some(1)).is_err());
    assert!(inadmissible_surgery(&ob, "1", r(1, 2), Some(4)).is_err());
    let ok = inadmissible_surgery(&ob, "1", r(2, 3), Some(2)).unwrap();
    assert_eq!(ok.h1().unwrap(), AbelianGroup::cyclic(2));
}

#[test]
fn open_book_stabilisation_keeps_homology() {
    let ob = OpenBook::new(
        Surface::load_builtin("sigma12").unwrap(),
        TwistWord::parse("a b g^-1 d1 d2^4").unwrap(),
    )
    .unwrap();
    let h = ob.h1().unwrap();
    let mut cur = ob;
    for label in ["1", "2", "1", "3"] {
        cur = cur.stabilize(label).unwrap();
        assert_eq!(cur.h1().unwrap(), h);
    }
    assert_eq!(cur.bindings.len(), 6);
}
