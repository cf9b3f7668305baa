//! Small named pomonoids used by tests, benchmarks and the command line.

use std::sync::Arc;

use crate::amalgam::PoAmalgam;
use crate::pomonoid::{Pomonoid, PomonoidCandidate, PomonoidMorphism, SubPomonoid};
use crate::poset::{names, Poset};

/// The five-element pomonoid on `a f b e 1` whose submonoid `{1, e, f}` is
/// pounitary but neither upper nor lower strongly right pounitary.
///
/// `a` and `b` are left zeros, `e` and `f` idempotents with
/// `ef = f`, `fe = f`; the order has `a` at the bottom, `b` at the top and
/// `1, e, f` pairwise incomparable in between.
pub fn strong_gap_pomonoid() -> Pomonoid {
    // rows a f b e 1
    let rows = [
        "a a a a a", //
        "a f b f f",
        "b b b b b",
        "a f b e e",
        "a f b e 1",
    ];
    from_rows(&["a", "f", "b", "e", "1"], &rows, &[("a", "1"), ("a", "e"), ("a", "f"), ("1", "b"), ("e", "b"), ("f", "b")])
}

/// `{1, e, f}` inside [`strong_gap_pomonoid`].
pub fn strong_gap_core(s: &Arc<Pomonoid>) -> SubPomonoid {
    let members: Vec<usize> = ["1", "e", "f"].iter().map(|n| s.index_of(n).expect("fixture element")).collect();
    SubPomonoid::new(s.clone(), &members).expect("fixture submonoid")
}

/// The amalgam with core `{1, e, f}` and both factors equal to [`strong_gap_pomonoid`].
pub fn strong_gap_amalgam() -> PoAmalgam {
    let s = Arc::new(strong_gap_pomonoid());
    let u = strong_gap_core(&s);
    let phi = u.inclusion().clone();
    PoAmalgam::new(phi.clone(), phi).expect("fixture amalgam")
}

/// The degenerate amalgam `[S; S, S]` with identity embeddings.
pub fn degenerate_amalgam(s: Arc<Pomonoid>) -> PoAmalgam {
    let id = PomonoidMorphism::identity_on(s);
    PoAmalgam::new(id.clone(), id).expect("identity amalgam")
}

/// `{0, …, m}` under `max`, ordered as a chain; the identity is `0`.
pub fn max_chain(m: usize) -> Pomonoid {
    let n = m + 1;
    let table = (0..n).flat_map(|s| (0..n).map(move |t| s.max(t))).collect();
    build(Poset::chain(numerals(n)), table)
}

/// `{0, …, m}` under `min`, ordered as a chain; the identity is `m`.
pub fn min_chain(m: usize) -> Pomonoid {
    let n = m + 1;
    let table = (0..n).flat_map(|s| (0..n).map(move |t| s.min(t))).collect();
    build(Poset::chain(numerals(n)), table)
}

/// `{0, …, m}` under `max` with the discrete order.
pub fn max_semilattice(m: usize) -> Pomonoid {
    let n = m + 1;
    let table = (0..n).flat_map(|s| (0..n).map(move |t| s.max(t))).collect();
    build(Poset::antichain(numerals(n)), table)
}

/// The cyclic group `Z_n`, trivially ordered.
pub fn cyclic_group(n: usize) -> Pomonoid {
    let table = (0..n).flat_map(|s| (0..n).map(move |t| (s + t) % n)).collect();
    build(Poset::antichain(numerals(n)), table)
}

/// `U = {0, …, n}` inside `S = {0, …, m}`, both under `max`: a finite
/// truncation of the non-negative integers under `max`.
pub fn max_truncation(n: usize, m: usize) -> (Arc<Pomonoid>, SubPomonoid) {
    assert!(n < m, "the truncation needs n < m");
    let s = Arc::new(max_chain(m));
    let u = SubPomonoid::new(s.clone(), &(0..=n).collect::<Vec<_>>()).expect("initial segment is closed");
    (s, u)
}

/// Pomonoids the property suites sweep over, smallest first.
pub fn golden_set() -> Vec<Arc<Pomonoid>> {
    vec![
        Arc::new(Pomonoid::trivial()),
        Arc::new(max_chain(1)),
        Arc::new(min_chain(1)),
        Arc::new(max_semilattice(1)),
        Arc::new(cyclic_group(2)),
        Arc::new(max_chain(2)),
        Arc::new(strong_gap_pomonoid()),
    ]
}

fn numerals(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn build(poset: Poset, table: Vec<usize>) -> Pomonoid {
    Pomonoid::validate(PomonoidCandidate {
        poset,
        table,
        identity: None,
    })
    .expect("fixture is a pomonoid")
}

fn from_rows(elements: &[&str], rows: &[&str], order: &[(&str, &str)]) -> Pomonoid {
    let idx = |n: &str| elements.iter().position(|e| *e == n).expect("fixture element");
    let table = rows.iter().flat_map(|r| r.split_whitespace().map(idx)).collect();
    let pairs: Vec<(usize, usize)> = order.iter().map(|&(a, b)| (idx(a), idx(b))).collect();
    build(Poset::from_pairs(names(elements), &pairs).expect("fixture order"), table)
}
