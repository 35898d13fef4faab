mod common;

use std::collections::BTreeSet;

use common::{completions, doubled_cycle, walk};
use eulertrail::connectivity::find_cut_vertices;
use eulertrail::edge_enum::contract_rule2;
use eulertrail::oracle::{brute_edge, brute_vertex, corpus_generate};
use eulertrail::search::{CollectSink, EnumOptions, Mode, NullSink, Session};
use eulertrail::vertex_enum::{
    candidate_groups, contract_rule3, contract_rule4, enumerate_vertex_distinct, multibirth, pair_class, PairClass,
};
use eulertrail::{EdgeId, Multigraph, RuleRecord, VertexId};

fn v(i: u32) -> VertexId {
    VertexId(i)
}

fn e(i: u32) -> EdgeId {
    EdgeId(i)
}

fn collect(g: &Multigraph, s: u32, t: u32) -> Vec<Vec<u32>> {
    let mut sink = CollectSink::new(Mode::Vertex);
    enumerate_vertex_distinct(g, v(s), v(t), &mut sink, &EnumOptions::default()).unwrap();
    let mut out = sink.solutions;
    out.sort();
    out
}

/// Square 0-1-2-3 with 1 and 3 smoothed: two 0-2 edges carrying different
/// middle vertices.
fn good_pair_session() -> Session {
    let g = Multigraph::from_edges(4, &[(0, 1), (1, 2), (0, 3), (3, 2)]);
    let mut s = Session::new(g, Mode::Vertex, v(0), v(0));
    contract_rule2(&mut s, v(1)).unwrap();
    contract_rule2(&mut s, v(3)).unwrap();
    s
}

#[test]
fn pair_classes() {
    let g = Multigraph::from_edges(3, &[(0, 1), (1, 0), (1, 2)]);
    assert_eq!(pair_class(&g, v(0), v(1)), PairClass::Bad);
    assert_eq!(pair_class(&g, v(1), v(2)), PairClass::Bad);
    assert_eq!(pair_class(&g, v(0), v(2)), PairClass::Absent);
    let s = good_pair_session();
    assert_eq!(s.graph().multiplicity(v(0), v(2)), 2);
    assert_eq!(pair_class(s.graph(), v(0), v(2)), PairClass::Good);
}

#[test]
fn bad_parallels_form_one_group() {
    let g = Multigraph::from_edges(2, &[(0, 1), (0, 1)]);
    let mut s = Session::new(g, Mode::Vertex, v(0), v(0));
    let groups = candidate_groups(&mut s);
    assert_eq!(groups.len(), 1);
    assert_eq!(groups[0].size, 2);
    assert_eq!(groups[0].step.edge, e(0));
}

#[test]
fn good_parallels_form_two_groups() {
    let mut s = good_pair_session();
    let groups = candidate_groups(&mut s);
    assert_eq!(groups.len(), 2);
    assert!(groups.iter().all(|g| g.landing == v(2) && g.size == 1));
}

#[test]
fn asymmetric_loop_gives_both_orientations() {
    let mut s = Session::new(
        Multigraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]),
        Mode::Vertex,
        v(0),
        v(0),
    );
    contract_rule2(&mut s, v(1)).unwrap();
    contract_rule2(&mut s, v(2)).unwrap();
    let lp = s.graph().edges_between(v(0), v(0));
    assert_eq!(lp.len(), 1);
    let groups = candidate_groups(&mut s);
    assert_eq!(groups.len(), 2);
    assert_ne!(groups[0].step.reversed, groups[1].step.reversed);
    // The oracle sees the two orientations as distinct vertex sequences.
    let tri = Multigraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
    assert_eq!(brute_vertex(&tri, v(0), v(0)).unwrap().len(), 2);
}

#[test]
fn split_moves_all_but_one_bundle_edge() {
    // u = 0, v = 1, w = 2; five v-w edges and a closing path through 3.
    let g = Multigraph::from_edges(4, &[(0, 1), (1, 2), (1, 2), (1, 2), (1, 2), (1, 2), (2, 3), (3, 0)]);
    let mut s = Session::new(g, Mode::Vertex, v(0), v(0));
    let live = s.graph().live_edge_count();
    let rec = contract_rule3(&mut s, v(1)).unwrap();
    assert_eq!(
        rec,
        RuleRecord::R3 {
            v: v(1),
            vp: v(4),
            moved: 4
        }
    );
    let g = s.graph();
    assert_eq!(g.live_edge_count(), live);
    assert_eq!(g.edges_between(v(1), v(2)), vec![e(1)]);
    assert_eq!(g.multiplicity(v(4), v(2)), 4);
    assert_eq!(g.orig(v(4)), v(1));
    // Afterwards the smoothing applies at v and the fold at the copy.
    assert!(contract_rule2(&mut s, v(1)).is_ok());
    let d2 = s.graph().degree(v(2));
    assert_eq!(
        contract_rule4(&mut s, v(4)),
        Ok(RuleRecord::R4 {
            v: v(4),
            u: v(2),
            loops: 2,
            odd: false
        })
    );
    assert_eq!(s.graph().degree(v(2)), d2);
}

#[test]
fn split_refuses_good_bundle() {
    let g = Multigraph::from_edges(5, &[(0, 1), (1, 3), (3, 2), (1, 4), (4, 2), (2, 0)]);
    let mut s = Session::new(g, Mode::Vertex, v(0), v(0));
    contract_rule2(&mut s, v(3)).unwrap();
    contract_rule2(&mut s, v(4)).unwrap();
    assert_eq!(pair_class(s.graph(), v(1), v(2)), PairClass::Good);
    assert!(contract_rule3(&mut s, v(1)).is_err());
}

#[test]
fn fold_of_five_keeps_one_edge() {
    // The odd bundle sits at the terminal.
    let g = Multigraph::from_edges(2, &[(0, 1); 5]);
    let mut s = Session::new(g, Mode::Vertex, v(0), v(1));
    let d = s.graph().degree(v(0));
    let rec = contract_rule4(&mut s, v(1)).unwrap();
    assert_eq!(
        rec,
        RuleRecord::R4 {
            v: v(1),
            u: v(0),
            loops: 2,
            odd: true
        }
    );
    let g = s.graph();
    assert_eq!(g.degree(v(0)), d);
    assert_eq!(g.loop_count(v(0)), 2);
    assert_eq!(g.edges_between(v(0), v(1)), vec![e(0)]);
}

#[test]
fn fold_of_four_removes_the_vertex() {
    let g = Multigraph::from_edges(2, &[(0, 1); 4]);
    let mut s = Session::new(g, Mode::Vertex, v(0), v(0));
    let rec = contract_rule4(&mut s, v(1)).unwrap();
    assert_eq!(
        rec,
        RuleRecord::R4 {
            v: v(1),
            u: v(0),
            loops: 2,
            odd: false
        }
    );
    let g = s.graph();
    assert!(!g.is_vertex_alive(v(1)));
    assert_eq!(g.degree(v(0)), 4);
    assert_eq!(g.loop_count(v(0)), 2);
}

#[test]
fn fold_refuses_a_double_bundle() {
    let g = Multigraph::from_edges(2, &[(0, 1); 2]);
    let mut s = Session::new(g, Mode::Vertex, v(0), v(0));
    assert!(contract_rule4(&mut s, v(1)).is_err());
    assert!(contract_rule2(&mut s, v(1)).is_ok());
    assert_eq!(s.graph().loop_count(v(0)), 1);
}

fn multibirth_partition(g: Multigraph, target: VertexId) -> (BTreeSet<Vec<u32>>, BTreeSet<Vec<u32>>) {
    let mut s = Session::new(g, Mode::Vertex, v(0), v(0));
    let all = completions(&mut s);
    let mut parts = Vec::new();
    for variant in [1, 2] {
        let mark = s.mark();
        assert_eq!(
            multibirth(&mut s, target, variant).unwrap(),
            RuleRecord::Mb { v: target, variant }
        );
        parts.push(completions(&mut s));
        s.rollback(mark);
    }
    let (a, b) = (parts.remove(0), parts.remove(0));
    assert!(a.is_disjoint(&b));
    let union: BTreeSet<_> = a.union(&b).cloned().collect();
    assert_eq!(union, all);
    (a, b)
}

#[test]
fn multibirth_on_a_non_cut_vertex() {
    let g = Multigraph::from_edges(3, &[(0, 1), (0, 1), (1, 2), (1, 2), (2, 0), (2, 0)]);
    assert!(!find_cut_vertices(&g).contains(&v(1)));
    let oracle: BTreeSet<_> = brute_vertex(&g, v(0), v(0)).unwrap().into_iter().collect();
    let (a, b) = multibirth_partition(g, v(1));
    assert!(!a.is_empty() && !b.is_empty());
    assert_eq!(a.len() + b.len(), oracle.len());
}

#[test]
fn multibirth_on_a_cut_vertex_needs_one_variant() {
    let g = Multigraph::from_edges(3, &[(0, 1), (0, 1), (1, 2), (1, 2)]);
    assert!(find_cut_vertices(&g).contains(&v(1)));
    let (a, b) = multibirth_partition(g, v(1));
    assert!(b.is_empty());
    assert_eq!(a.len(), 1);
}

#[test]
fn multibirth_refuses_good_or_protected_vertices() {
    let g = Multigraph::from_edges(3, &[(0, 1), (0, 1), (1, 2), (1, 2), (2, 0), (2, 0)]);
    let mut s = Session::new(g, Mode::Vertex, v(0), v(0));
    assert!(multibirth(&mut s, v(0), 1).is_err());
    let mut s = good_pair_session();
    assert!(multibirth(&mut s, v(2), 1).is_err());
}

#[test]
fn tiny_counts() {
    assert_eq!(
        collect(&Multigraph::from_edges(2, &[(0, 1), (0, 1)]), 0, 0),
        vec![vec![0, 1, 0]]
    );
    assert_eq!(
        collect(&Multigraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]), 0, 0).len(),
        2
    );
    let doubled = doubled_cycle(3);
    let got = collect(&doubled, 0, 0);
    let want = brute_vertex(&doubled, v(0), v(0)).unwrap();
    assert_eq!(got, want);
    assert!(want.len() < brute_edge(&doubled, v(0), v(0)).unwrap().len());
}

#[test]
fn doubled_cycles_match_the_oracle() {
    for k in 2..=5 {
        let g = doubled_cycle(k);
        for s in 0..k {
            assert_eq!(collect(&g, s, s), brute_vertex(&g, v(s), v(s)).unwrap(), "k={k} s={s}");
        }
    }
}

#[test]
fn run_leaves_the_graph_untouched() {
    let g = doubled_cycle(4);
    let mut s = Session::new(g, Mode::Vertex, v(0), v(0));
    let before = s.graph().snapshot();
    let r = s.run(&mut NullSink, &EnumOptions::default()).unwrap();
    assert!(r.rule_counts.iter().sum::<u64>() > 0);
    assert_eq!(s.graph().snapshot(), before);
}

#[test]
fn rules_preserve_counts_on_corpus_frames() {
    let (mut splits, mut folds) = (0, 0);
    for c in corpus_generate(4, 7) {
        for (s, t) in c.endpoint_choices() {
            let mut sess = Session::new(c.graph(), Mode::Vertex, s, t);
            let (_, children) = sess.preprocess().unwrap();
            walk(
                &mut sess,
                children,
                &mut |_, _| {},
                &mut |before, rec, after| match *rec {
                    RuleRecord::R3 { .. } => {
                        splits += 1;
                        assert_eq!(before.live_edge_count(), after.live_edge_count());
                    }
                    RuleRecord::R4 { u, .. } => {
                        folds += 1;
                        assert_eq!(before.degree(u), after.degree(u));
                    }
                    _ => {}
                },
            );
        }
    }
    assert!(splits > 0 && folds > 0, "splits {splits} folds {folds}");
}

#[test]
fn extension_cases_are_all_seen_and_never_violate() {
    let mut total = eulertrail::search::ExtensionCases::default();
    for c in corpus_generate(5, 8) {
        for (s, t) in c.endpoint_choices() {
            let r = enumerate_vertex_distinct(&c.graph(), s, t, &mut NullSink, &EnumOptions::default()).unwrap();
            total.a_plain += r.cases.a_plain;
            total.a1 += r.cases.a1;
            total.a2 += r.cases.a2;
            total.b1 += r.cases.b1;
            total.b2 += r.cases.b2;
            total.b3_violations += r.cases.b3_violations;
        }
    }
    assert_eq!(total.b3_violations, 0);
    assert!(
        total.a1 > 0 && total.a2 > 0 && total.b1 > 0 && total.b2 > 0,
        "{total:?}"
    );
}
