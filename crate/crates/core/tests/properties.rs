//! Invariants as proptest properties.

mod common;

use common::*;
use num_traits::{Signed, Zero};
use pmp_core::action::{action_distance, definable_closure, definable_closure_by_enumeration, uniform_distance, Action, Perm, Word};
use pmp_core::canonical::{canonical_colored_component, canonical_rooted_schreier, CanonLimits, ColoredGraph, RootedSchreierClass};
use pmp_core::conjugacy::{lift_action, verify_witness, approximate_conjugacy, Mode};
use pmp_core::format::{parse_action, serialize_action, ActionDocument};
use pmp_core::gen;
use pmp_core::graphing::{build_schreier, edge_measure, hyperfinite_decomposition, incident_vertices, EdgeSet, Strategy as Cut};
use pmp_core::irs::{empirical_irs, EmpiricalIRS};
use pmp_core::logic::{check_theta_axioms, eval_formula, eval_formula_with, Assignment, Domain, EvalOptions, Formula, Term};
use pmp_core::measure::{conditional_expectation, refine, Subalgebra};
use pmp_core::Q;
use proptest::prelude::*;

fn action_strategy(max_atoms: usize, max_k: usize) -> impl Strategy<Value = Action> {
    (any::<u64>(), 1..=max_k).prop_map(move |(seed, k)| random_action(&mut rng(seed), max_atoms, k))
}

fn perm_strategy(n: usize) -> impl Strategy<Value = Perm> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Perm::from_images(v).unwrap())
}

fn word_strategy(k: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((1..=k as i32, any::<bool>()), 0..4)
        .prop_map(|ls| Word::new(ls.into_iter().map(|(g, inv)| if inv { -g } else { g })))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn document_round_trip(a in action_strategy(20, 3), mask in any::<u64>()) {
        let n = a.len();
        let mut doc = ActionDocument::new(a);
        doc.events.push(("A".into(), from_mask(n, mask & ((1u64 << n) - 1))));
        let text = serialize_action(&doc);
        let back = parse_action(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(serialize_action(&back), text);
    }

    #[test]
    fn irs_is_relabeling_invariant(a in action_strategy(20, 2), seed in any::<u64>()) {
        let relabel = gen::random_perm(&mut rng(seed), a.len());
        let b = a.relabeled(&relabel).unwrap();
        prop_assert_eq!(empirical_irs(&a), empirical_irs(&b));
        let irs = empirical_irs(&a);
        prop_assert_eq!(EmpiricalIRS::from_text(&irs.to_text()).unwrap(), irs.clone());
        let total: Q = irs.masses().values().sum();
        prop_assert_eq!(total, q(1, 1));
    }

    #[test]
    fn rooted_classes_decode_and_trace(a in action_strategy(16, 3), w in word_strategy(3)) {
        for x in 0..a.len() {
            let c = canonical_rooted_schreier(&a, x);
            prop_assert_eq!(RootedSchreierClass::decode(&c.encode()).unwrap(), c.clone());
            let w = Word::new(w.letters().iter().copied().filter(|l| l.unsigned_abs() as usize <= a.generator_count()));
            prop_assert_eq!(c.contains_loop(&w), a.act(&w, x) == x);
        }
    }

    #[test]
    fn uniform_distance_is_a_metric(n in 1usize..12, s in any::<u64>()) {
        let a = random_weighted_action(&mut rng(s), n, 3);
        let g = a.generators();
        let d = |p: &Perm, q: &Perm| uniform_distance(a.space(), p, q).unwrap();
        prop_assert!(d(&g[0], &g[0]).is_zero());
        prop_assert_eq!(d(&g[0], &g[1]), d(&g[1], &g[0]));
        prop_assert!(d(&g[0], &g[2]) <= d(&g[0], &g[1]) + d(&g[1], &g[2]));
        // right-invariance under the measure-preserving group
        prop_assert_eq!(d(&g[0].compose(&g[2]), &g[1].compose(&g[2])), d(&g[0], &g[1]));
    }

    #[test]
    fn colored_canonical_form_is_invariant(p in perm_strategy(7), colors in prop::collection::vec(0u64..3, 7),
                                           edges in prop::collection::btree_set((0usize..7, 0usize..7, 1u64..4), 0..14)) {
        let mut seen = std::collections::HashSet::new();
        let edges: Vec<(usize, usize, u64)> = edges.into_iter().filter(|e| seen.insert((e.0, e.1))).collect();
        let g = ColoredGraph { vertex_colors: colors, edges };
        let h = g.relabeled(p.images());
        let (cg, map) = canonical_colored_component(&g, None, CanonLimits::default()).unwrap();
        let (ch, _) = canonical_colored_component(&h, None, CanonLimits::default()).unwrap();
        prop_assert_eq!(&cg, &ch);
        // the map is an isomorphism onto the canonical graph
        let (again, _) = canonical_colored_component(&g.relabeled(&map), None, CanonLimits::default()).unwrap();
        prop_assert_eq!(cg, again);
    }

    #[test]
    fn edge_measure_sandwich(a in action_strategy(24, 3), s in any::<u64>(), m in 1usize..8) {
        let k = a.generator_count();
        let g = build_schreier(&a, &(0..k).map(Word::generator).collect::<Vec<_>>(), &[]).unwrap();
        let cert = hyperfinite_decomposition(&g, m, Cut::Auto).unwrap();
        cert.validate(&g).unwrap();
        let z = if s % 2 == 0 { cert.z } else { EdgeSet::from_undirected(a.len(), g.undirected_edges().into_iter().step_by(2)) };
        let em = edge_measure(&g, &z).unwrap();
        let v = a.space().measure(&incident_vertices(&g, &z).unwrap());
        prop_assert!(q(1, 2) * &v <= em.mu_e);
        prop_assert!(em.mu_e <= Q::from_integer((g.degree() as i64).into()) * v);
    }

    #[test]
    fn conditional_expectation_integrates(n in 1usize..12, mask in any::<u64>(), labels in prop::collection::vec(0usize..3, 12)) {
        let space = random_weighted_action(&mut rng(mask), n, 1).space().clone();
        let e = from_mask(n, mask & ((1u64 << n) - 1));
        let alg = Subalgebra::from_labels(&labels[..n]);
        let ce = conditional_expectation(&space, &e, &alg).unwrap();
        prop_assert_eq!(ce.integral(&space), space.measure(&e));
    }

    #[test]
    fn lifted_action_keeps_the_irs(a in action_strategy(12, 2), split in 1usize..4) {
        // split every atom of an orbit the same way
        let orbit_of: Vec<usize> = {
            let mut o = vec![0; a.len()];
            for (i, orb) in a.orbits().iter().enumerate() { for &x in orb { o[x] = i; } }
            o
        };
        let plan: Vec<Vec<Q>> = (0..a.len())
            .map(|x| {
                let parts = 1 + (orbit_of[x] + split) % 3;
                vec![a.space().weight(x) / Q::from_integer((parts as i64).into()); parts]
            })
            .collect();
        let r = refine(a.space(), &plan).unwrap();
        let lifted = lift_action(&a, &r).unwrap();
        prop_assert_eq!(empirical_irs(&lifted), empirical_irs(&a));
        prop_assert_eq!(r.pushforward(), a.space().weights().to_vec());
    }

    #[test]
    fn theta_axioms_hold_against_own_irs(a in action_strategy(14, 3), w in word_strategy(3), v in word_strategy(3)) {
        let k = a.generator_count();
        let clip = |w: &Word| Word::new(w.letters().iter().copied().filter(|l| l.unsigned_abs() as usize <= k));
        let f = vec![vec![clip(&w)], vec![clip(&w), clip(&v)]];
        let r = check_theta_axioms(&a, &empirical_irs(&a), &f);
        prop_assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn exact_conjugacy_of_equal_irs_pairs(seed in any::<u64>(), k in 1usize..3) {
        let (a, b) = gen::equal_irs_pair(&mut rng(seed), 24, k).unwrap();
        let words: Vec<Word> = (0..k).map(Word::generator).collect();
        let w = approximate_conjugacy(&a, &b, &words, &Mode::Exact).unwrap();
        prop_assert!(w.error.is_empty());
        prop_assert!(verify_witness(&w, &a, &b, &[]).passed());
    }

    #[test]
    fn definable_closure_matches_enumeration(a in action_strategy(10, 2), mask in any::<u64>()) {
        let e = from_mask(a.len(), mask & ((1u64 << a.len()) - 1));
        let fast = definable_closure(&a, std::slice::from_ref(&e)).unwrap();
        let slow = definable_closure_by_enumeration(&a, &[e], 100_000).unwrap();
        prop_assert_eq!(fast, slow);
    }
}

// Evaluation moduli: one free variable changed, or the action changed.

fn sample_terms() -> Vec<Term> {
    let x = || Term::var("x");
    let g = Word::generator(0);
    vec![
        x(),
        Term::Not(Box::new(x())),
        Term::apply(g.clone(), x()),
        Term::sym(x(), Term::apply(g.clone(), x())),
        Term::and(x(), Term::apply(g.inverse(), x())),
        Term::t(g.clone(), x()),
        Term::t(g.pow(2), Term::or(x(), Term::apply(g, x()))),
    ]
}

fn sample_formulas() -> Vec<Formula> {
    let mut out = Vec::new();
    for t in sample_terms() {
        out.push(Formula::mu(t.clone()));
        out.push(Formula::d(t.clone(), Term::var("x")));
        out.push(Formula::Neg(Box::new(Formula::mu(t.clone()))));
        out.push(Formula::Scale(q(-3, 2), Box::new(Formula::mu(t.clone()))));
        out.push(Formula::AbsDiff(Box::new(Formula::mu(t.clone())), Box::new(Formula::Const(q(1, 3)))));
        out.push(Formula::Max(vec![Formula::mu(t.clone()), Formula::d(t, Term::One)]));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn variable_modulus_bounds_changes(n in 1usize..9, s in any::<u64>(), m1 in any::<u64>(), m2 in any::<u64>()) {
        let a = random_weighted_action(&mut rng(s), n, 1);
        let full = (1u64 << n) - 1;
        let (x1, x2) = (from_mask(n, m1 & full), from_mask(n, m2 & full));
        let dist = a.space().measure(&x1.sym_diff(&x2));
        for f in sample_formulas() {
            let v1 = eval_formula(&a, &f, &Assignment::from([("x".to_string(), x1.clone())])).unwrap();
            let v2 = eval_formula(&a, &f, &Assignment::from([("x".to_string(), x2.clone())])).unwrap();
            prop_assert!((v1 - v2).abs() <= f.variable_modulus() * &dist);
        }
    }

    #[test]
    fn action_modulus_bounds_changes(n in 1usize..8, s in any::<u64>(), m in any::<u64>()) {
        let pair = random_weighted_action(&mut rng(s), n, 2);
        let alpha = Action::with_default_names(pair.space().clone(), vec![pair.generators()[0].clone()]).unwrap();
        let beta = Action::with_default_names(pair.space().clone(), vec![pair.generators()[1].clone()]).unwrap();
        let d = action_distance(&alpha, &beta).unwrap();
        let x = from_mask(n, m & ((1u64 << n) - 1));
        let env = Assignment::from([("x".to_string(), x)]);
        for f in sample_formulas() {
            let gap = (eval_formula(&alpha, &f, &env).unwrap() - eval_formula(&beta, &f, &env).unwrap()).abs();
            prop_assert!(gap <= f.action_modulus() * &d);
        }
    }

    #[test]
    fn quantifier_domains_are_monotone(n in 1usize..8, s in any::<u64>(), labels in prop::collection::vec(0usize..3, 8)) {
        let a = random_weighted_action(&mut rng(s), n, 1);
        let mut opts = EvalOptions::default();
        opts.domains.insert("Z".into(), Subalgebra::from_labels(&labels[..n]));
        for t in sample_terms() {
            let body = Box::new(Formula::mu(t));
            let sup_full = eval_formula_with(&a, &Formula::Sup("x".into(), Domain::Full, body.clone()), &Assignment::new(), &opts).unwrap();
            let sup_z = eval_formula_with(&a, &Formula::Sup("x".into(), Domain::Named("Z".into()), body.clone()), &Assignment::new(), &opts).unwrap();
            let inf_full = eval_formula_with(&a, &Formula::Inf("x".into(), Domain::Full, body.clone()), &Assignment::new(), &opts).unwrap();
            let inf_z = eval_formula_with(&a, &Formula::Inf("x".into(), Domain::Named("Z".into()), body), &Assignment::new(), &opts).unwrap();
            prop_assert!(sup_z <= sup_full);
            prop_assert!(inf_z >= inf_full);
        }
    }
}

#[test]
fn formula_examples_from_enumeration() {
    // sup_a μ(t_g(a)) over all 16 events of the 4-cycle, against μ(supp g)
    let c4 = gen::cyclic(4).unwrap();
    let w = weights(c4.space());
    let img = c4.generators()[0].images().to_vec();
    let best = (0u64..16)
        .map(|m| {
            let core = m & !mask_image(&img, m);
            mask_measure(&w, mask_preimage(&img, core) | core | mask_image(&img, core))
        })
        .max()
        .unwrap();
    let f = Formula::sup("a", Formula::mu(Term::t(Word::generator(0), Term::var("a"))));
    assert_eq!(eval_formula(&c4, &f, &Assignment::new()).unwrap(), best);
    assert_eq!(best, q(1, 1));
}
