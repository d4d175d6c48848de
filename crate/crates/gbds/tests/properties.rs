use std::collections::BTreeSet;

use num::{BigRational, Zero};
use proptest::prelude::*;

use gbds::checks;
use gbds::filters::{enumerate_tight, tight_oracle};
use gbds::format::{parse_system, serialize_system};
use gbds::groupoid::{compose, finite_gamma, longest_boundary_len, GroupoidElem};
use gbds::semigroup::{enumerate_elements, product};
use gbds::steinberg::{atomic_triples, equal, Element, Grading};
use gbds::surgery::{cut, glue};
use gbds::{Gbds, SetElem};

/// Per label: an optional image for each atom, and extra ideal atoms.
type LabelShape = (Vec<Option<usize>>, Vec<bool>);

fn system_shape() -> impl Strategy<Value = (usize, Vec<LabelShape>)> {
    (1usize..=4).prop_flat_map(|n| {
        let label = (
            prop::collection::vec(prop::option::weighted(0.6, 0..n), n),
            prop::collection::vec(any::<bool>(), n),
        );
        (Just(n), prop::collection::vec(label, 1..=2))
    })
}

fn build((n, labels): (usize, Vec<LabelShape>)) -> Gbds {
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let mut b = Gbds::builder().atoms(names.clone());
    for (li, (map, extra)) in labels.iter().enumerate() {
        let l = format!("l{li}");
        b = b.label(l.clone());
        let mut ideal = Vec::new();
        for (x, y) in map.iter().enumerate() {
            if let Some(y) = y {
                b = b.map(&l, &names[x], &names[*y]);
            }
            if y.is_some() || extra[x] {
                ideal.push(names[x].clone());
            }
        }
        b = b.ideal(&l, ideal);
    }
    b.build().expect("domains lie in the ideals by construction")
}

fn systems() -> impl Strategy<Value = Gbds> {
    system_shape().prop_map(build)
}

fn brute_preimage(sys: &Gbds, l: gbds::Label, set: &SetElem) -> SetElem {
    SetElem::from_atoms(
        sys.atom_count(),
        sys.atoms().filter(|x| sys.image(l, *x).is_some_and(|y| set.contains(y))),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn actions_are_boolean_homomorphisms(sys in systems()) {
        let sets = sys.full_set().subsets();
        for l in sys.labels() {
            prop_assert!(sys.act(l, &sys.empty_set()).is_empty());
            for a in &sets {
                prop_assert_eq!(sys.act(l, a), brute_preimage(&sys, l, a));
                for b in &sets {
                    prop_assert_eq!(sys.act(l, &a.intersection(b)), sys.act(l, a).intersection(&sys.act(l, b)));
                    prop_assert_eq!(sys.act(l, &a.union(b)), sys.act(l, a).union(&sys.act(l, b)));
                    prop_assert_eq!(sys.act(l, &a.difference(b)), sys.act(l, a).difference(&sys.act(l, b)));
                }
            }
        }
    }

    #[test]
    fn word_actions_compose_and_ideals_shrink(sys in systems()) {
        let words = sys.words(3);
        for a in &words {
            for b in &words {
                let ab = a.concat(b);
                if ab.len() > 3 {
                    continue;
                }
                for set in sys.full_set().subsets() {
                    prop_assert_eq!(sys.act_word(&ab, &set), sys.act_word(b, &sys.act_word(a, &set)));
                }
                prop_assert!(sys.ideal_gen(&ab).is_subset(&sys.ideal_gen(b)));
                if !a.is_empty() {
                    prop_assert_eq!(sys.ideal_gen(&ab), sys.act_word(b, &sys.ideal_gen(a)));
                }
            }
        }
    }

    #[test]
    fn serialization_round_trips(sys in systems()) {
        let text = serialize_system(&sys);
        prop_assert_eq!(parse_system(&text).unwrap(), sys.clone());
        prop_assert_eq!(serialize_system(&parse_system(&text).unwrap()), text);
    }

    #[test]
    fn semigroup_laws_on_random_systems(sys in systems()) {
        for c in checks::semigroup_laws(&sys, 1) {
            prop_assert!(c.passed(), "{}", c.line());
        }
        let elems = enumerate_elements(&sys, 2);
        for s in &elems {
            for t in &elems {
                prop_assert_eq!(product(&sys, s, t).star(), product(&sys, &t.star(), &s.star()));
            }
        }
    }

    #[test]
    fn tightness_criteria_agree(sys in systems()) {
        let c = checks::tight_agreement(&sys, 3, 1);
        prop_assert!(c.passed(), "{}", c.line());
        for xi in enumerate_tight(&sys, 3).finite {
            prop_assert!(tight_oracle(&sys, &xi, 2).unwrap());
        }
    }

    #[test]
    fn pairs_round_trip(sys in systems()) {
        let c = checks::filter_round_trip(&sys, 3);
        prop_assert!(c.passed(), "{}", c.line());
    }

    #[test]
    fn cutting_undoes_gluing(sys in systems()) {
        for c in checks::surgery_laws(&sys, 2) {
            prop_assert!(c.passed(), "{}", c.line());
        }
        for xi in enumerate_tight(&sys, 2).points() {
            for w in sys.admissible_words(2) {
                if let Ok(g) = glue(&sys, &xi, &w) {
                    prop_assert!(g.is_tight(&sys));
                    prop_assert_eq!(cut(&sys, &g, &w).unwrap(), xi.clone());
                }
            }
        }
    }

    #[test]
    fn transcription_is_a_bijection_that_intertwines(sys in systems()) {
        for depth in 0..=2 {
            for c in checks::phi_laws(&sys, depth) {
                prop_assert!(c.passed(), "{}", c.line());
            }
        }
    }

    #[test]
    fn groupoid_axioms_and_germs(sys in systems()) {
        let elems = gbds::groupoid::enumerate_gamma(&sys, 2);
        for c in checks::groupoid_laws(&sys, &elems) {
            prop_assert!(c.passed(), "{}", c.line());
        }
        for c in checks::germ_laws(&sys, 2) {
            prop_assert!(c.passed(), "{}", c.line());
        }
        prop_assert!(checks::transport_law(&sys, 2).passed());
    }

    #[test]
    fn relations_hold(sys in systems()) {
        for c in gbds::steinberg::ck_check(&sys, 2) {
            prop_assert!(c.passed(), "{}", c.line());
        }
    }

    #[test]
    fn algebra_axioms(sys in systems(), picks in prop::collection::vec(any::<prop::sample::Index>(), 3)) {
        let triples = atomic_triples(&sys, 2);
        prop_assume!(!triples.is_empty());
        let pick = |i: &prop::sample::Index| Element::from_triple(&sys, i.get(&triples));
        let (f, g, h) = (pick(&picks[0]), pick(&picks[1]), pick(&picks[2]));
        let fg = f.mul(&sys, &g);
        prop_assert!(equal(&sys, &fg.mul(&sys, &h), &f.mul(&sys, &g.mul(&sys, &h))));
        prop_assert!(equal(&sys, &fg.star(), &g.star().mul(&sys, &f.star())));
        if let (Grading::Homogeneous(a), Grading::Homogeneous(b), Grading::Homogeneous(c)) =
            (f.grading(&sys), g.grading(&sys), fg.grading(&sys))
        {
            prop_assert_eq!(a + b, c);
        }
    }

    /// Products and equality against pointwise evaluation on a finite groupoid.
    #[test]
    fn convolution_matches_evaluation(sys in systems(), picks in prop::collection::vec(any::<prop::sample::Index>(), 2)) {
        prop_assume!(longest_boundary_len(&sys).is_some());
        let gamma = finite_gamma(&sys).unwrap();
        let triples = atomic_triples(&sys, 2);
        prop_assume!(!triples.is_empty());
        let f = Element::from_triple(&sys, picks[0].get(&triples));
        let g = Element::from_triple(&sys, picks[1].get(&triples));
        let fg = f.mul(&sys, &g);
        for x in &gamma {
            let mut sum = BigRational::zero();
            for a in gamma.iter().filter(|a| a.range() == x.range()) {
                let b = compose(&sys, &a.inverse(), x).unwrap();
                sum += f.evaluate(&sys, a) * g.evaluate(&sys, &b);
            }
            prop_assert_eq!(fg.evaluate(&sys, x), sum);
        }
        let pointwise = gamma.iter().all(|x| fg.evaluate(&sys, x) == g.evaluate(&sys, x));
        prop_assert_eq!(equal(&sys, &fg, &g), pointwise);
        let units: BTreeSet<&GroupoidElem> = gamma.iter().filter(|x| x.is_unit()).collect();
        prop_assert!(!units.is_empty());
    }
}
