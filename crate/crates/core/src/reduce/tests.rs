use super::*;
use crate::linalg::KernelStrategy;
use crate::pwl::AffineFunc;
use crate::rational::int;

fn five_pieces() -> Vec<AffineFunc> {
    [([3, -4], 1), ([-3, -1], -2), ([2, 1], -1), ([3, 2], 2), ([-2, 4], 3)]
        .iter()
        .map(|(g, c)| AffineFunc::from_ints(g, *c).unwrap())
        .collect()
}

fn m(g: &[AffineFunc], idx: &[usize]) -> MaxTerm {
    MaxTerm::new(idx.iter().map(|&i| g[i - 1].clone())).unwrap()
}

#[test]
fn recorded_execution_replays() {
    let g = five_pieces();
    let four: Vec<AffineFunc> = [1, 2, 4, 5].iter().map(|&i| g[i - 1].clone()).collect();
    let chooser = InjectedAlpha::new(KernelStrategy::First)
        .with(&g, &[4, 1, -21, 13, 3])
        .with(&four, &[9, -10, -11, 12]);
    let (comb, trace) = reduce_max_traced(&MaxTerm::new(g.clone()).unwrap(), &chooser).unwrap();
    let expected = LinComb::new(
        2,
        [
            (int(-1), m(&g, &[1, 5])),
            (int(1), m(&g, &[1, 2, 5])),
            (int(1), m(&g, &[1, 4, 5])),
        ],
    )
    .unwrap()
    .canonicalize();
    assert_eq!(comb, expected);

    assert_eq!(trace.children.len(), 1);
    assert_eq!(trace.children[0].term, m(&g, &[1, 2, 4, 5]));
    let labels: Vec<String> = trace.children[0].children.iter().map(|c| c.label(&g)).collect();
    assert_eq!(labels, ["m_15", "m_125", "m_145"]);
    let signs: Vec<i8> = trace.children[0].children.iter().map(|c| c.sign).collect();
    assert_eq!(signs, [-1, 1, 1]);
}

#[test]
fn default_strategy_matches_recorded_execution() {
    let g = five_pieces();
    let comb = reduce_max(&MaxTerm::new(g.clone()).unwrap(), &KernelStrategy::First).unwrap();
    let expected = LinComb::new(
        2,
        [
            (int(-1), m(&g, &[1, 5])),
            (int(1), m(&g, &[1, 2, 5])),
            (int(1), m(&g, &[1, 4, 5])),
        ],
    )
    .unwrap()
    .canonicalize();
    assert_eq!(comb, expected);
}

#[test]
fn shifted_copies_prune_to_the_top() {
    let g = AffineFunc::from_ints(&[2, 5], 0).unwrap();
    let t = MaxTerm::new((0..4).map(|i| g.shift(&int(i)))).unwrap();
    let (comb, trace) = reduce_max_traced(&t, &KernelStrategy::First).unwrap();
    assert_eq!(comb, LinComb::from_affine(g.shift(&int(3))));
    assert!(trace.is_leaf());
}

#[test]
fn independent_term_is_unchanged() {
    let t = MaxTerm::new([
        AffineFunc::zero(2),
        AffineFunc::variable(2, 0),
        AffineFunc::variable(2, 1),
    ])
    .unwrap();
    let (comb, trace) = reduce_max_traced(&t, &KernelStrategy::Last).unwrap();
    assert_eq!(comb, LinComb::from_term(t));
    assert!(trace.is_leaf());
}

#[test]
fn reduced_lincomb_is_a_fixpoint() {
    let g = five_pieces();
    let c = LinComb::new(2, [(int(2), m(&g, &[1, 2, 5])), (int(-3), m(&g, &[3, 4]))])
        .unwrap()
        .canonicalize();
    assert!(is_reduced(&c));
    assert_eq!(reduce_lincomb(&c, &KernelStrategy::First).unwrap(), c);
}

#[test]
fn trace_leaves_reproduce_the_output() {
    let g = five_pieces();
    let (comb, trace) = reduce_max_traced(&MaxTerm::new(g).unwrap(), &KernelStrategy::SeededRandom(5)).unwrap();
    let from_leaves = LinComb::new(
        2,
        trace
            .signed_leaves()
            .into_iter()
            .map(|(s, t)| (int(s.into()), t.clone())),
    )
    .unwrap()
    .canonicalize();
    assert_eq!(from_leaves, comb);
}

#[test]
fn dot_output_names_nodes_by_input_order() {
    let g = five_pieces();
    let four: Vec<AffineFunc> = [1, 2, 4, 5].iter().map(|&i| g[i - 1].clone()).collect();
    let chooser = InjectedAlpha::new(KernelStrategy::First)
        .with(&g, &[4, 1, -21, 13, 3])
        .with(&four, &[9, -10, -11, 12]);
    let (_, trace) = reduce_max_traced(&MaxTerm::new(g.clone()).unwrap(), &chooser).unwrap();
    let dot = TraceNode::to_dot(&[trace], Some(&g));
    assert!(dot.contains("m_12345\\nα=(4,1,-21,13,3)"), "{dot}");
    assert!(dot.contains("m_1245\\nα=(-9,10,11,-12)"), "{dot}");
    assert!(dot.contains("-m_15"));
    assert!(dot.starts_with("digraph"));
}

#[test]
fn probe_on_independent_term_is_identical() {
    let t = MaxTerm::new([AffineFunc::variable(2, 0), AffineFunc::variable(2, 1)]).unwrap();
    let report = conjecture_probe(&t, &[KernelStrategy::First, KernelStrategy::Last]).unwrap();
    assert!(report.identical);
    assert_eq!(report.distinct_outputs, 1);
}
