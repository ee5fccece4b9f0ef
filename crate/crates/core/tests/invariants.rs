//! Property tests across modules on small random inputs.

use proptest::prelude::*;

use twistlab::meshbraid::{divisor_boundary, divisor_hypotheses};
use twistlab::reconstruct::min_degree;
use twistlab::twists::twist_inv;
use twistlab::{
    equivalent, find_left_divisor, flatten, layer, left_divisible_by, profiles_equal, recover_word, to_decorated, twist, twist_of_word,
    BraidWord, DynkinDiagram, Field, Fp, ProjComplex, Rational, F2,
};

type F5 = Fp<5>;

fn diagrams() -> impl Strategy<Value = DynkinDiagram> {
    prop::sample::select(vec!["A2", "A3", "A4", "D4", "D4'"]).prop_map(|s| s.parse().unwrap())
}

fn word(max_len: usize) -> impl Strategy<Value = BraidWord> {
    diagrams().prop_flat_map(move |d| prop::collection::vec(1..=d.rank(), 0..=max_len).prop_map(move |l| BraidWord::new(d, l).unwrap()))
}

fn scalar() -> impl Strategy<Value = i64> {
    -20i64..20
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn prime_field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        let (a, b, c) = (F5::from_i64(a), F5::from_i64(b), F5::from_i64(c));
        prop_assert_eq!(a * (b + c), a * b + a * c);
        prop_assert_eq!(a - a, F5::zero());
        if !a.is_zero() {
            prop_assert_eq!(a * a.inv().unwrap(), F5::one());
        }
    }

    #[test]
    fn rational_inverse(a in scalar(), b in 1i64..9) {
        let q = Rational::from_i64(a) * Rational::from_i64(b).inv().unwrap();
        if a != 0 {
            prop_assert!((q.clone() * q.inv().unwrap()).is_one());
        } else {
            prop_assert!(q.inv().is_none());
        }
    }

    #[test]
    fn word_display_parses_back(w in word(8)) {
        let back = BraidWord::parse(w.diagram(), &w.to_string()).unwrap();
        prop_assert_eq!(back, w);
    }

    #[test]
    fn layering_preserves_the_class(w in word(6)) {
        let lw = layer(&w);
        prop_assert_eq!(lw.len(), w.len());
        prop_assert!(equivalent(&flatten(&lw), &w).unwrap());
    }

    #[test]
    fn left_divisor_quotients_are_exact(w in word(6), j in 1usize..=4) {
        prop_assume!(w.diagram().contains(j));
        if let Some(rest) = left_divisible_by(&w, j).unwrap() {
            prop_assert!(equivalent(&rest.prepend(j).unwrap(), &w).unwrap());
        }
    }

    #[test]
    fn minimize_keeps_the_profile(w in word(5), n in -2i64..=2) {
        let t = twist_of_word::<F2>(&w).shift(n);
        let m = t.minimize();
        prop_assert!(m.is_minimal());
        prop_assert_eq!(m.profile(), t.profile());
        prop_assert!(m.check_d_squared().is_ok());
        prop_assert_eq!(m.minimize(), m.clone());
    }

    #[test]
    fn shift_moves_every_summand(w in word(4), n in -3i64..=3) {
        let t = twist_of_word::<F2>(&w);
        let s = t.shift(n);
        for deg in t.degrees() {
            prop_assert_eq!(s.summands(deg - n), t.summands(deg));
        }
        prop_assert_eq!(min_degree(&s).unwrap(), min_degree(&t).unwrap() - n);
    }

    #[test]
    fn complex_json_round_trip(w in word(5)) {
        let t = twist_of_word::<F2>(&w);
        let back = ProjComplex::<F2>::from_json(w.diagram(), &t.to_json()).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn twists_are_invertible(w in word(4), j in 1usize..=4) {
        let d = w.diagram();
        prop_assume!(d.contains(j));
        let t = twist_of_word::<F2>(&w);
        prop_assert!(profiles_equal(&twist_inv(j, &twist(j, &t).unwrap()).unwrap(), &t));
        prop_assert!(profiles_equal(&twist(j, &twist_inv(j, &t).unwrap()).unwrap(), &t));
    }

    #[test]
    fn twisting_lowers_min_degree_by_at_most_one(w in word(5), j in 1usize..=4) {
        let d = w.diagram();
        prop_assume!(d.contains(j));
        let t = twist_of_word::<F2>(&w);
        let m = min_degree(&t).unwrap();
        let m2 = min_degree(&twist(j, &t).unwrap()).unwrap();
        prop_assert!(m2 == m || m2 == m - 1);
    }

    #[test]
    fn recovery_inverts_twisting(w in word(6)) {
        let r = recover_word(&twist_of_word::<F2>(&w)).unwrap();
        prop_assert_eq!(r.word.len(), w.len());
        prop_assert!(equivalent(&r.word, &w).unwrap());
        prop_assert!(r.peels.windows(2).all(|p| p[0].min_degree <= p[1].min_degree));
    }

    #[test]
    fn category_and_oracle_agree(a in word(5), tail in prop::collection::vec(1usize..=4, 0..=5)) {
        let d = a.diagram();
        let letters: Vec<usize> = tail.into_iter().filter(|&l| d.contains(l)).collect();
        prop_assume!(letters.len() == a.len());
        let b = BraidWord::new(d, letters).unwrap();
        let cat = profiles_equal(&twist_of_word::<F2>(&a), &twist_of_word::<F2>(&b));
        prop_assert_eq!(cat, equivalent(&a, &b).unwrap());
    }

    #[test]
    fn mesh_solver_finds_true_divisors(w in word(7)) {
        prop_assume!(!w.is_empty());
        let d = w.diagram();
        let i = w.letters()[0];
        let s = to_decorated(&layer(&w), &divisor_boundary(&d, i)).unwrap();
        prop_assert!(s.check_mesh_relations());
        if divisor_hypotheses(&s).is_ok() {
            let (j, cert) = find_left_divisor(&s).unwrap();
            prop_assert_ne!(j, i);
            prop_assert!(left_divisible_by(&w, j).unwrap().is_some());
            let end = cert.replay(&s).unwrap();
            prop_assert!(equivalent(&end.word_of(), &w).unwrap());
            prop_assert!(end.check_mesh_relations());
        }
    }
}
