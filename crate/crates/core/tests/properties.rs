use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hhs_core::action::ActionTable;
use hhs_core::crystal::{decide_hhg, embeds, wallpaper_catalog, FiniteGroup, QMatrix};
use hhs_core::eyries::{classify_trichotomy, compute_eyries_default, compute_subgroup_eyries, SubgroupLabeling, Trichotomy};
use hhs_core::model::experiments::{lipschitz_check, realise, ConsistentTuple};
use hhs_core::model::{BigSetConfig, Model, Point};
use hhs_core::sample::{random_instance, random_invariant_labels, RandomInstance};
use hhs_core::structure::{
    parse_structure_file, render_structure_file, validate, Axiom, Domain, IndexStructure, Relation,
};
use hhs_core::word::{Letter, Word};

fn instance(seed: u64, max: usize) -> RandomInstance {
    random_instance(&mut ChaCha8Rng::seed_from_u64(seed), max)
}

/// Arbitrary declared data, valid or not.
fn arbitrary_structure() -> impl Strategy<Value = IndexStructure> {
    (1usize..8)
        .prop_flat_map(|n| {
            let pairs = proptest::collection::vec((0..n, 0..n), 0..12);
            (Just(n), proptest::collection::vec(any::<bool>(), n), pairs.clone(), pairs)
        })
        .prop_map(|(n, bounded, nest, ortho)| {
            let id = |i: usize| format!("D{i}");
            let domains = (0..n).map(|i| Domain::new(id(i), bounded[i])).collect();
            let nest: Vec<_> = nest.into_iter().map(|(a, b)| (id(a), id(b))).collect();
            let ortho: Vec<_> = ortho.into_iter().map(|(a, b)| (id(a), id(b))).collect();
            IndexStructure::new(domains, &nest, &ortho, &[]).expect("ids exist")
        })
}

/// Longest ⊊-chain ending at `u`, by plain recursion.
fn chain_length(s: &IndexStructure, u: usize) -> usize {
    1 + (0..s.len()).filter(|&v| s.is_nested(v, u)).map(|v| chain_length(s, v)).max().unwrap_or(0)
}

fn random_word<R: Rng>(rng: &mut R, gens: usize, len: usize) -> Word {
    Word::from_letters((0..len).map(|_| Letter::new(rng.gen_range(0..gens), rng.gen_bool(0.5))))
}

/// Orbits by union-find over every generator edge.
fn orbits_by_union_find(s: &IndexStructure, a: &ActionTable, order: &[usize]) -> BTreeSet<BTreeSet<usize>> {
    let mut parent: Vec<usize> = (0..s.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for &g in order {
        for u in 0..s.len() {
            if let Some(v) = a.apply(Letter::new(g, false), u) {
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                parent[ru] = rv;
            }
        }
    }
    let mut by_root: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for u in 0..s.len() {
        let r = find(&mut parent, u);
        by_root.entry(r).or_default().insert(u);
    }
    by_root.into_values().collect()
}

/// The same instance with domains shuffled and renamed.
fn relabel(inst: &RandomInstance, seed: u64) -> (IndexStructure, ActionTable, BTreeMap<String, String>) {
    let s = &inst.structure;
    let n = s.len();
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in (1..n).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let new_pos: Vec<usize> = {
        let mut p = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            p[old] = new;
        }
        p
    };
    let name = |u: usize| format!("q{}", new_pos[u]);
    let domains = order
        .iter()
        .map(|&u| {
            let mut d = s.domain(u).clone();
            d.id = name(u);
            d
        })
        .collect();
    let mut nest = Vec::new();
    let mut ortho = Vec::new();
    let mut cont = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if s.is_nested(u, v) {
                nest.push((name(u), name(v)));
            }
            if u < v && s.is_orthogonal(u, v) {
                ortho.push((name(u), name(v)));
            }
        }
        if let Some(w) = s.container(u) {
            cont.push((name(u), name(w)));
        }
    }
    let t = IndexStructure::new(domains, &nest, &ortho, &cont).expect("relabeling keeps ids unique");
    let gens = inst
        .action
        .names()
        .iter()
        .enumerate()
        .map(|(g, nm)| {
            let pairs = (0..n)
                .filter_map(|u| inst.action.apply(Letter::new(g, false), u).map(|v| (new_pos[u], new_pos[v])))
                .collect();
            (nm.clone(), pairs)
        })
        .collect();
    let a = ActionTable::from_indices(&t, gens, inst.action.orbit_bound()).expect("same maps");
    let renaming = (0..n).map(|u| (s.id(u).to_string(), name(u))).collect();
    (t, a, renaming)
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn free_model() -> Model {
    Model::free(2, 4).unwrap()
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn exactly_one_relation_holds(seed in any::<u64>()) {
        let s = instance(seed, 15).structure;
        for u in 0..s.len() {
            for v in 0..s.len() {
                let flags = [u == v, s.is_nested(u, v), s.is_nested(v, u), s.is_orthogonal(u, v), s.is_transverse(u, v)];
                prop_assert_eq!(flags.iter().filter(|&&f| f).count(), 1, "{} vs {}", s.id(u), s.id(v));
                prop_assert_eq!(s.relation(u, v), s.relation(v, u).flip());
            }
        }
    }

    #[test]
    fn double_declaration_is_flagged(s in arbitrary_structure()) {
        let clash = (0..s.len()).any(|u| (0..s.len()).any(|v| u != v && s.is_orthogonal(u, v) && (s.is_nested(u, v) || s.is_nested(v, u))));
        let report = validate(&s);
        if clash {
            prop_assert!(report.violations.iter().any(|v| v.axiom == Axiom::MutuallyExclusive));
        }
    }

    #[test]
    fn validate_is_idempotent_and_survives_a_round_trip(s in arbitrary_structure()) {
        let a = validate(&s);
        prop_assert_eq!(&a, &validate(&s));
        let text = render_structure_file(&s, None);
        let back = parse_structure_file(&text).unwrap().structure;
        prop_assert_eq!(a.is_valid(), validate(&back).is_valid());
        prop_assert_eq!(a.violations.len(), validate(&back).violations.len());
    }

    #[test]
    fn levels_increase_along_nesting(seed in any::<u64>()) {
        let s = instance(seed, 15).structure;
        for u in 0..s.len() {
            prop_assert_eq!(s.level(u), chain_length(&s, u));
            for v in 0..s.len() {
                if s.is_nested(u, v) {
                    prop_assert!(s.level(u) < s.level(v));
                }
            }
        }
        let top = s.maximal().unwrap();
        prop_assert_eq!(s.level(top), s.complexity());
    }

    #[test]
    fn transversality_graph_is_induced(seed in any::<u64>(), mask in any::<u32>()) {
        let s = instance(seed, 15).structure;
        let subset: BTreeSet<usize> = (0..s.len()).filter(|u| mask >> u & 1 == 1).collect();
        let g = s.transversality_graph_idx(&subset);
        let mut expect = Vec::new();
        for &u in &subset {
            for &v in &subset {
                let (a, b) = (s.id(u).to_string(), s.id(v).to_string());
                if a < b && s.is_transverse(u, v) {
                    expect.push((a, b));
                }
            }
        }
        expect.sort();
        prop_assert_eq!(&g.edges, &expect);
        let covered: usize = g.components.iter().map(Vec::len).sum();
        prop_assert_eq!(covered, subset.len());
        // the restriction sees the same graph
        let r = s.restrict(&subset);
        let all: BTreeSet<usize> = (0..r.len()).collect();
        prop_assert_eq!(r.transversality_graph_idx(&all).edges, expect);
    }

    #[test]
    fn group_words_preserve_relations(seed in any::<u64>()) {
        let inst = instance(seed, 15);
        let (s, a) = (&inst.structure, &inst.action);
        prop_assume!(a.generator_count() > 0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        for _ in 0..8 {
            let len = rng.gen_range(1..6);
            let w = random_word(&mut rng, a.generator_count(), len);
            for u in 0..s.len() {
                for v in 0..s.len() {
                    if let (Some(x), Some(y)) = (a.apply_word(&w, u), a.apply_word(&w, v)) {
                        prop_assert_eq!(s.relation(x, y), s.relation(u, v));
                        prop_assert_eq!(s.domain(x).bounded, s.domain(u).bounded);
                    }
                }
            }
        }
    }

    #[test]
    fn orbits_do_not_depend_on_generator_order(seed in any::<u64>()) {
        let inst = instance(seed, 15);
        let (s, a) = (&inst.structure, &inst.action);
        let fwd: Vec<usize> = (0..a.generator_count()).collect();
        let rev: Vec<usize> = fwd.iter().rev().copied().collect();
        let table: BTreeSet<BTreeSet<usize>> = a.orbit_partition().into_iter().collect();
        prop_assert_eq!(&table, &orbits_by_union_find(s, a, &fwd));
        prop_assert_eq!(&table, &orbits_by_union_find(s, a, &rev));
    }

    #[test]
    fn subgroup_certificates_are_sound(seed in any::<u64>()) {
        let inst = instance(seed, 15);
        let (s, a) = (&inst.structure, &inst.action);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let labels = random_invariant_labels(&mut rng, &inst);
        let labeling = SubgroupLabeling { unbounded_for_h: labels.clone(), generators: a.names().to_vec() };
        let cert = compute_subgroup_eyries(s, &labeling, Some(a)).unwrap();
        prop_assume!(cert.is_success());
        let idx: Vec<usize> = cert.eyries.iter().map(|e| s.index_of(e).unwrap()).collect();
        for (i, &x) in idx.iter().enumerate() {
            prop_assert!(labels.contains(s.id(x)));
            for &y in &idx[i + 1..] {
                prop_assert!(s.is_orthogonal(x, y));
            }
        }
        for l in &labels {
            let u = s.index_of(l).unwrap();
            prop_assert!(idx.iter().any(|&e| e == u || s.is_nested(u, e)), "{} uncovered", l);
        }
    }

    #[test]
    fn trichotomy_is_invariant_under_relabeling(seed in any::<u64>(), shuffle in any::<u64>()) {
        let inst = instance(seed, 15);
        let (t, b, renaming) = relabel(&inst, shuffle);
        prop_assert!(validate(&t).is_valid());
        let c1 = compute_eyries_default(&inst.structure, Some(&inst.action)).unwrap();
        let c2 = compute_eyries_default(&t, Some(&b)).unwrap();
        prop_assert_eq!(c1.is_success(), c2.is_success());
        let renamed: BTreeSet<String> = c1.eyries.iter().map(|e| renaming[e].clone()).collect();
        prop_assert_eq!(&renamed, &c2.eyries);
        if c1.is_success() {
            let kind = |t: Trichotomy| match t {
                Trichotomy::NoEyrie => 0,
                Trichotomy::SingleEyrie(_) => 1,
                Trichotomy::ProductOfK { k, .. } => k,
            };
            prop_assert_eq!(kind(classify_trichotomy(&c1).unwrap()), kind(classify_trichotomy(&c2).unwrap()));
        }
    }
}

fn test_groups() -> Vec<FiniteGroup> {
    let mut g: Vec<FiniteGroup> = (2..=8).map(FiniteGroup::cyclic).collect();
    g.extend((1..=6).map(FiniteGroup::dihedral));
    g.push(FiniteGroup::quaternion());
    g.push(FiniteGroup::alternating4());
    g
}

#[test]
fn embedding_is_monotone_in_dimension() {
    for f in test_groups() {
        for n in 1..=3 {
            if embeds(&f, n).unwrap().embeds() {
                assert!(embeds(&f, n + 1).unwrap().embeds(), "{} embeds in B{n} but not B{}", f.name, n + 1);
            }
        }
    }
}

#[test]
fn hyperoctahedral_groups_embed_in_themselves() {
    for n in 1..=3 {
        let b = FiniteGroup::hyperoctahedral(n);
        assert!(embeds(&b, n).unwrap().embeds(), "B{n}");
        if n > 1 {
            assert!(!embeds(&b, n - 1).unwrap().embeds(), "B{n} into B{}", n - 1);
        }
    }
}

/// Products of elementary unimodular matrices.
fn unimodular() -> impl Strategy<Value = QMatrix> {
    proptest::collection::vec((0usize..4, -2i64..=2), 1..5).prop_map(|steps| {
        steps.into_iter().fold(QMatrix::identity(2), |m, (kind, k)| {
            let e = match kind {
                0 => QMatrix::from_int_rows(&[&[1, k], &[0, 1]]),
                1 => QMatrix::from_int_rows(&[&[1, 0], &[k, 1]]),
                2 => QMatrix::from_int_rows(&[&[0, 1], &[1, 0]]),
                _ => QMatrix::from_int_rows(&[&[-1, 0], &[0, 1]]),
            };
            m.mul(&e)
        })
    })
}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn decision_is_basis_independent(u in unimodular(), which in 0usize..17) {
        let entry = &wallpaper_catalog().unwrap()[which];
        let moved = entry.group.change_basis(&u).unwrap();
        let (a, b) = (decide_hhg(&entry.group).unwrap(), decide_hhg(&moved).unwrap());
        prop_assert_eq!(a.point_group_order, b.point_group_order);
        prop_assert_eq!(&a.order_spectrum, &b.order_spectrum);
        prop_assert_eq!(a.is_admissible(), b.is_admissible());
    }

    #[test]
    fn model_metrics_are_symmetric_and_equivariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for model in [free_model(), Model::zn(3).unwrap(), Model::parse("product(free(2,3),zn(1))").unwrap()] {
            let (x, y, g) = (model.sample_point(&mut rng, 5), model.sample_point(&mut rng, 5), model.sample_point(&mut rng, 3));
            prop_assert_eq!(model.dist(&x, &y), model.dist(&y, &x));
            prop_assert_eq!(model.dist(&x, &x), 0.0);
            let (gx, gy) = (model.mul(&g, &x), model.mul(&g, &y));
            prop_assert_eq!(model.dist(&gx, &gy), model.dist(&x, &y));
            for (u, d) in model.separating(&x, &y) {
                prop_assert_eq!(model.d(&u, &y, &x), d);
                let gu = model.act_dom(&g, &u);
                prop_assert_eq!(model.d(&gu, &gx, &gy), d, "{} under {}", model.dom_id(&u), model.render_point(&g));
            }
            prop_assert!(lipschitz_check(&model, &[(x, y)]).violations.is_empty());
        }
    }

    #[test]
    fn big_sets_are_pairwise_orthogonal(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for model in [free_model(), Model::zn(3).unwrap(), Model::parse("product(free(2,3),zn(1))").unwrap()] {
            let g = model.sample_point(&mut rng, 4);
            let big = model.big_set_of(&g, BigSetConfig::default());
            for (i, a) in big.iter().enumerate() {
                for b in &big[i + 1..] {
                    prop_assert_eq!(model.relation(a, b), Relation::Orthogonal);
                }
            }
            if g == model.identity() {
                prop_assert!(big.is_empty());
            }
        }
    }
}

proptest! {
    #![proptest_config(config(12))]

    #[test]
    fn realisation_round_trips(seed in any::<u64>()) {
        let model = free_model();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Point = model.sample_point(&mut rng, 4);
        let window = model.window();
        let tuple = ConsistentTuple::of_point(&model, &window, &x);
        let r = realise(&model, &tuple, model.e()).unwrap();
        prop_assert!(r.theta_e <= 3.0 * model.e());
    }
}
