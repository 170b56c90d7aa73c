use std::sync::OnceLock;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use prepcode::code::{hamming_distance, parse_code, render_code, BinaryWord, Code};
use prepcode::construct::build_extended_preparata;
use prepcode::graphs::{build_mdg, canonical_form, find_isomorphism, Coloring, Graph};
use prepcode::isometry::{apply_automorphism, SpaceAutomorphism};
use prepcode::verify::{neighbor_profile, Mode};

fn nr() -> &'static Code {
    static C: OnceLock<Code> = OnceLock::new();
    C.get_or_init(|| build_extended_preparata(3).unwrap())
}

fn punctured() -> &'static Code {
    static C: OnceLock<Code> = OnceLock::new();
    C.get_or_init(|| nr().puncture(16).unwrap())
}

fn mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1 << n) - 1
    }
}

fn word(n: usize) -> impl Strategy<Value = BinaryWord> {
    any::<u64>().prop_map(move |b| BinaryWord::new(n, b & mask(n)).unwrap())
}

fn three_words() -> impl Strategy<Value = (BinaryWord, BinaryWord, BinaryWord)> {
    (1usize..=64).prop_flat_map(|n| (word(n), word(n), word(n)))
}

fn small_code() -> impl Strategy<Value = Code> {
    (2usize..=24).prop_flat_map(|n| {
        prop::collection::vec(any::<u64>(), 2..40)
            .prop_map(move |v| {
                Code::new_dedup(n, v.into_iter().map(|b| BinaryWord::new(n, b & mask(n)).unwrap())).unwrap()
            })
            .prop_filter("needs two words", |c| c.len() >= 2)
    })
}

proptest! {
    #[test]
    fn distance_is_weight_of_xor((a, b, c) in three_words()) {
        let dab = hamming_distance(&a, &b).unwrap();
        prop_assert_eq!(dab, a.xor(&b).unwrap().weight());
        prop_assert_eq!(dab, hamming_distance(&b, &a).unwrap());
        let dbc = hamming_distance(&b, &c).unwrap();
        let dac = hamming_distance(&a, &c).unwrap();
        prop_assert!(dac <= dab + dbc);
    }

    #[test]
    fn distance_matches_bitwise_count((a, b, _) in three_words()) {
        let s1 = a.to_string();
        let s2 = b.to_string();
        let naive = s1.chars().zip(s2.chars()).filter(|(x, y)| x != y).count();
        prop_assert_eq!(hamming_distance(&a, &b).unwrap(), naive);
    }

    #[test]
    fn hex_and_bit_strings_round_trip((a, _, _) in three_words()) {
        prop_assert_eq!(BinaryWord::from_hex(&a.to_hex(), a.len()).unwrap(), a);
        prop_assert_eq!(BinaryWord::from_bit_str(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn deleting_a_coordinate_matches_string_edit((a, _, _) in three_words(), pos in 1usize..=64) {
        prop_assume!(a.len() >= 2 && pos <= a.len());
        let mut s: Vec<char> = a.to_string().chars().collect();
        s.remove(pos - 1);
        let expected = BinaryWord::from_bit_str(&s.into_iter().collect::<String>()).unwrap();
        prop_assert_eq!(a.delete_coordinate(pos).unwrap(), expected);
    }

    #[test]
    fn translation_preserves_all_distances(c in small_code(), seed in any::<u64>()) {
        let t = BinaryWord::new(c.n(), seed & mask(c.n())).unwrap();
        let moved = c.translate(&t).unwrap();
        prop_assert_eq!(moved.distance(), c.distance());
        for x in c.words() {
            for y in c.words() {
                let (tx, ty) = (x.xor(&t).unwrap(), y.xor(&t).unwrap());
                prop_assert!(moved.contains(&tx));
                prop_assert_eq!(hamming_distance(&tx, &ty).unwrap(), hamming_distance(x, y).unwrap());
            }
        }
    }

    #[test]
    fn code_files_round_trip(c in small_code()) {
        let back = parse_code(&render_code(&c)).unwrap();
        prop_assert_eq!(back.distance(), c.distance());
        prop_assert_eq!(back, c);
    }

    #[test]
    fn automorphisms_are_isometries(c in small_code(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = SpaceAutomorphism::random(c.n(), &mut rng).unwrap();
        let img = apply_automorphism(&f, &c).unwrap();
        prop_assert_eq!(img.distance(), c.distance());
        prop_assert_eq!(apply_automorphism(&f.inverse(), &img).unwrap(), c.clone());
        let back = SpaceAutomorphism::from_json(&f.to_json()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn random_graph_certificates_are_relabelling_invariant(
        n in 1usize..40,
        edges in prop::collection::vec((0usize..40, 0usize..40), 0..120),
        seed in any::<u64>(),
    ) {
        let edges: Vec<(usize, usize)> = edges.into_iter().map(|(u, v)| (u % n, v % n)).filter(|(u, v)| u != v).collect();
        let g = Graph::from_edges(n, edges).unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let h = g.permuted(&perm);
        let uni = Coloring::uniform(n);
        prop_assert_eq!(canonical_form(&g, &uni).unwrap().certificate, canonical_form(&h, &uni).unwrap().certificate);
        let iso = find_isomorphism(&g, &h).unwrap().unwrap();
        prop_assert!(iso.verify(&g, &uni, &h, &uni));
    }
}

#[test]
fn punctured_code_is_distance_invariant() {
    let c = punctured();
    let wd = c.weight_distribution();
    for x in c.words() {
        assert_eq!(c.translate(x).unwrap().weight_distribution(), wd, "from {}", x.to_hex());
    }
}

#[test]
fn neighbor_profiles_partition_the_neighbourhood() {
    for (c, mode, degree) in [(punctured(), Mode::Punctured, 42), (nr(), Mode::Extended, 112)] {
        let d = mode.distance();
        for x in c.words() {
            let p = neighbor_profile(c, x).unwrap();
            assert_eq!(p.degree(), degree);
            let mut all: Vec<BinaryWord> = p.neighbors().copied().collect();
            all.sort();
            let mut scan: Vec<BinaryWord> =
                c.words().iter().copied().filter(|y| hamming_distance(x, y).unwrap() == d).collect();
            scan.sort();
            assert_eq!(all, scan);
            for (j, set) in &p.sets {
                assert!(set.iter().all(|y| y.weight() == *j));
            }
        }
    }
}

#[test]
fn profile_examples_at_15() {
    let c = punctured();
    let zero = BinaryWord::zero(15).unwrap();
    let p = neighbor_profile(c, &zero).unwrap();
    assert_eq!(p.d_set(5).len(), 42);
    assert_eq!(p.sets.len(), 1);
    for x in c.words_of_weight(5) {
        assert_eq!(neighbor_profile(c, &x).unwrap().d_set(0), &[zero]);
    }
}

#[test]
fn mdgs_are_regular() {
    assert_eq!(build_mdg(punctured()).unwrap().graph.regular_degree(), Some(42));
    assert_eq!(build_mdg(nr()).unwrap().graph.regular_degree(), Some(112));
}

#[test]
fn nr_certificate_survives_a_hundred_shuffles() {
    for c in [punctured(), nr()] {
        let g = build_mdg(c).unwrap().graph;
        let n = g.vertex_count();
        let uni = Coloring::uniform(n);
        let reference = canonical_form(&g, &uni).unwrap().certificate;
        let mut rng = ChaCha8Rng::seed_from_u64(100);
        for _ in 0..100 {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let h = g.permuted(&perm);
            assert_eq!(canonical_form(&h, &uni).unwrap().certificate, reference);
        }
    }
}

#[test]
fn non_isomorphic_graphs_have_distinct_certificates() {
    // the 3-prism and K_{3,3} are both 3-regular on 6 vertices
    let prism = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)]).unwrap();
    let k33 = Graph::from_edges(6, (0..3).flat_map(|a| (3..6).map(move |b| (a, b)))).unwrap();
    let uni = Coloring::uniform(6);
    assert_ne!(canonical_form(&prism, &uni).unwrap().certificate, canonical_form(&k33, &uni).unwrap().certificate);
    assert!(find_isomorphism(&prism, &k33).unwrap().is_none());
}
