use super::*;
use crate::freewords::ReducedWord;

fn f2() -> Alphabet {
    Alphabet::new(2).unwrap()
}

fn w(s: &str) -> ReducedWord {
    ReducedWord::parse(f2(), s).unwrap()
}

fn graph(gens: &[&str]) -> StallingsGraph {
    let gens: Vec<ReducedWord> = gens.iter().map(|s| w(s)).collect();
    StallingsGraph::from_generators(f2(), &gens).unwrap()
}

#[test]
fn first_levels_match_the_pictures() {
    let t = build_tower(2, 2).unwrap();
    assert_eq!(t.levels[0].a, graph(&["b"]));
    assert_eq!(t.levels[0].c, graph(&["bb"]));
    assert_eq!(t.levels[1].a, graph(&["a", "bb"]));
    assert_eq!(t.levels[1].c, graph(&["bb", "aa", "abbA"]));
    assert_eq!(t.top, graph(&["b", "aa", "abbA"]));
}

#[test]
fn rank_two_tower_invariants() {
    let t = build_tower(2, 5).unwrap();
    for l in &t.levels {
        assert_eq!(l.a.rank(), l.i);
        assert_eq!(l.c.rank(), 2 * l.i - 1);
        assert_eq!(index_of(&l.c.free_basis(), &l.a).unwrap(), Index::Finite(2));
        assert!(coverage_bullet(t.a(l.i + 1).unwrap(), l.i));
    }
    for i in 1..5 {
        let next = &t.levels[i].c;
        assert!(t.levels[i - 1].c.free_basis().iter().all(|x| next.contains(x)));
    }
}

#[test]
fn recursion_holds_in_both_directions() {
    let t = build_tower(2, 5).unwrap();
    let a0 = graph(&["a"]);
    for i in 1..=5 {
        let prev = if i == 1 { &a0 } else { &t.levels[i - 2].a };
        let ci = &t.levels[i - 1].c;
        let next = t.a(i + 1).unwrap();
        let mut gens = prev.free_basis();
        gens.extend(ci.free_basis());
        assert!(gens.iter().all(|x| next.contains(x)));
        let join = StallingsGraph::from_generators(f2(), &gens).unwrap();
        assert!(next.free_basis().iter().all(|x| join.contains(x)));
    }
}

#[test]
fn coverage_bullet_examples() {
    let t = build_tower(2, 1).unwrap();
    assert!(coverage_bullet(&t.top, 1));
    assert!(coverage_bullet(&t.levels[0].a, 0));
    assert_eq!(coverage_gap(&t.levels[0].a, 1), Some(w("a")));
    let g = graph(&["a", "bb"]);
    let gap = coverage_gap(&g, 2).unwrap();
    assert_eq!(gap.len(), 2);
    assert_eq!(g.read(g.base(), gap.letters()), None);
}

#[test]
fn witnesses_cover_and_belong() {
    for (k, i) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)] {
        let t = build_tower(k, i).unwrap();
        let h = witness_word(k, i).unwrap();
        assert!(t.top.contains(&h));
        assert!(h.is_cyclically_reduced());
        let c = CyclicWord::new(h.clone()).unwrap();
        assert!(covers_all_subwords(&c, 2 * i, Orientation::Directed).unwrap().covered);
        assert!(BigUint::from(h.len()) <= witness_length_bound(k, i), "k={k} i={i} |h|={}", h.len());
    }
}

#[test]
fn first_witness_covers_the_twelve_words() {
    let h = witness_word(2, 1).unwrap();
    assert!(graph(&["a", "bb"]).contains(&h));
    let c = CyclicWord::new(h).unwrap();
    let r = covers_all_subwords(&c, 2, Orientation::Directed).unwrap();
    assert_eq!(r.total, BigUint::from(12u32));
    assert!(r.covered);
}

#[test]
fn rank_two_splittings_are_sharp() {
    for i in 1..=4 {
        let r = verify_sharpness(2, i).unwrap();
        assert_eq!(r.rank_c, 2 * i - 1);
        assert!(r.equality);
        assert!(r.coverage_bullet);
    }
    assert_eq!(verify_sharpness(2, 3).unwrap().proposition_rank, 5);
}

#[test]
fn rank_three_is_measured() {
    let r = verify_sharpness(3, 2).unwrap();
    assert_eq!(r.proposition_rank, 5);
    assert!(r.satisfies_bound);
    assert_eq!(r.rank_c, r.lemma_rank_c);
    assert_eq!(r.equality, r.rank_c == 5);
}

#[test]
fn documents_round_trip() {
    let t = build_tower(2, 3).unwrap();
    let doc = t.to_doc();
    let text = serde_json::to_string(&doc).unwrap();
    let back: TowerDoc = serde_json::from_str(&text).unwrap();
    assert_eq!(back, doc);
    assert_eq!(back.levels[2].a.to_graph().unwrap(), t.levels[2].a);
    let r = verify_sharpness(2, 2).unwrap();
    let back: SharpnessReport = serde_json::from_str(&r.to_json_pretty()).unwrap();
    assert_eq!(back, r);
}

#[test]
fn gf2_nullspace() {
    let rows = vec![vec![true, true, false], vec![false, true, true]];
    let ns = nullspace_gf2(&rows, 3);
    assert_eq!(ns, vec![vec![true, true, true]]);
    assert_eq!(nullspace_gf2(&[], 2).len(), 2);
}

#[test]
fn bad_parameters() {
    assert!(build_tower(1, 2).is_err());
    assert!(build_tower(2, 0).is_err());
}
