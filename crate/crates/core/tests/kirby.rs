use openbook::kirby::{
    blow_down, chain_presentation, h1_of_link, rational_to_chain, seifert_presentation, substitute_chain,
    FramedLinkPresentation, SeifertData,
};
use openbook::{AbelianGroup, IntMatrix, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

#[test]
fn chains_present_lens_spaces() {
    // The chain for p/q < -1 presents L(|p|, q), whose H₁ is cyclic of order |p|.
    for den in 1..=50i64 {
        for num in -50..-den {
            if gcd(num, den) != 1 {
                continue;
            }
            let r = Rational::new(num, den).unwrap();
            let chain = chain_presentation(&rational_to_chain(r).unwrap());
            assert_eq!(h1_of_link(&chain), AbelianGroup::cyclic(num), "{r}");
            let single = FramedLinkPresentation::unlinked(vec![r]);
            assert_eq!(h1_of_link(&single), h1_of_link(&chain), "{r}");
        }
    }
}

#[test]
fn seifert_order_formula_matches_presentation() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e1f);
    for _ in 0..1000 {
        let e0 = rng.random_range(-4..=4);
        let r = [(); 3].map(|_| {
            let den = rng.random_range(1..=9);
            Rational::new(rng.random_range(1..=den), den).unwrap()
        });
        let data = SeifertData::new(e0, r).unwrap();
        let h = h1_of_link(&seifert_presentation(&data));
        let order = data.h1_order();
        if order == 0 {
            assert!(h.free_rank > 0, "{data:?}: {h}");
        } else {
            assert_eq!(h.order(), Some(order), "{data:?}: {h}");
        }
    }
}

#[test]
fn seifert_example_has_order_two() {
    let data = SeifertData::new(-1, [q("1/2"), q("1/3"), q("1/4")]).unwrap();
    let link = seifert_presentation(&data);
    assert_eq!(link.labels(), &["c", "m1", "m2", "m3"]);
    assert_eq!(link.coeffs()[1..], [q("-2"), q("-3"), q("-4")]);
    assert_eq!(h1_of_link(&link), AbelianGroup::cyclic(2));
    assert_eq!(data.h1_order(), 2);
    assert!(SeifertData::new(0, [q("3/2"), q("1/2"), q("1/2")]).is_err());
    assert!(SeifertData::new(0, [q("0"), q("1/2"), q("1/2")]).is_err());
}

fn random_link(rng: &mut ChaCha8Rng) -> FramedLinkPresentation {
    let n = rng.random_range(1..=5usize);
    let mut coeffs = Vec::new();
    for _ in 0..n {
        coeffs.push(match rng.random_range(0..3) {
            0 => Rational::integer(rng.random_range(-5..=5)),
            1 => Rational::integer(if rng.random_bool(0.5) { 1 } else { -1 }),
            _ => {
                let den = rng.random_range(2..=6);
                Rational::new(rng.random_range(-30..=30), den).unwrap()
            }
        });
    }
    let mut lk = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.random_range(-3..=3);
            lk[(i, j)] = v;
            lk[(j, i)] = v;
        }
    }
    let labels = (1..=n).map(|i| format!("k{i}")).collect();
    FramedLinkPresentation::new(labels, coeffs, lk).unwrap()
}

#[test]
fn random_moves_preserve_homology() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xb10d);
    let mut applied = 0;
    while applied < 1000 {
        let mut link = random_link(&mut rng);
        let h = h1_of_link(&link);
        for _ in 0..4 {
            let c = rng.random_range(0..link.len());
            let coeff = link.coeffs()[c];
            let next = if coeff.is_integer() && coeff.numer().abs() == 1 && link.len() > 1 {
                blow_down(&link, c).unwrap()
            } else if coeff.ratio() < (-1).into() {
                substitute_chain(&link, c).unwrap()
            } else {
                continue;
            };
            link = next;
            applied += 1;
            assert_eq!(h1_of_link(&link), h, "after a move:\n{link}");
        }
    }
}

#[test]
fn blow_down_updates_framings_and_linking() {
    let link = FramedLinkPresentation::parse("3,2,-1", &["1-3:2", "2-3:1", "1-2:1"]).unwrap();
    let down = blow_down(&link, 2).unwrap();
    assert_eq!(down.coeffs(), &[q("7"), q("3")]);
    assert_eq!(down.linking(0, 1), 3);
    assert_eq!(h1_of_link(&down), h1_of_link(&link));
    assert!(blow_down(&link, 0).is_err());
    assert!(blow_down(&link, 7).is_err());
}

#[test]
fn chain_substitution_labels() {
    let link = FramedLinkPresentation::parse("-7/3", &[]).unwrap();
    let chain = substitute_chain(&link, 0).unwrap();
    assert_eq!(chain.labels(), &["1", "1.1", "1.2"]);
    assert_eq!(chain.coeffs(), &[q("-3"), q("-2"), q("-2")]);
    assert!(substitute_chain(&link, 3).is_err());
    assert!(substitute_chain(&FramedLinkPresentation::parse("5", &[]).unwrap(), 0).is_err());
}

#[test]
fn parsing_rejects_bad_links() {
    assert!(FramedLinkPresentation::parse("1,2", &["1-1:3"]).is_err());
    assert!(FramedLinkPresentation::parse("1,2", &["1-3:1"]).is_err());
    assert!(FramedLinkPresentation::parse("1,x", &[]).is_err());
    assert!(FramedLinkPresentation::parse("1,2", &["1-2"]).is_err());
    let asym = IntMatrix::from_rows(&[vec![0, 1], vec![2, 0]]);
    assert!(FramedLinkPresentation::new(vec!["a".into(), "b".into()], vec![q("1"), q("1")], asym).is_err());
}

#[test]
fn hopf_link_with_zero_framings_is_the_sphere() {
    let link = FramedLinkPresentation::parse("0,0", &["1-2:1"]).unwrap();
    assert!(h1_of_link(&link).is_trivial());
    let unknot_zero = FramedLinkPresentation::parse("0", &[]).unwrap();
    assert_eq!(h1_of_link(&unknot_zero).to_string(), "Z");
}
