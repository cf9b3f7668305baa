//! The preorder `≤_α(R)` induced by a relation on an S-poset, the
//! congruences `ν(R)` and `θ(R)` it defines, and the ordered quotients.
//!
//! `≤_α(R)` is the least preorder containing the base order and every
//! translate `(x·s, x'·s)` of a generator `(x, x')`; on a two-sided poset the
//! translates are `(s·x·t, s·x'·t)`. Translating a generator by a product is
//! again a translate and the base order is monotone in the action, so one
//! reflexive-transitive closure of these edges is already compatible with the
//! action. `ν(R)` identifies the strongly connected elements of the closure.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::relation::{BitSet, Relation};
use crate::sposet::{Action, SPoset};

/// `≤_α(R)` on the carrier of an S-poset.
#[derive(Clone, Debug)]
pub struct InducedPreorder {
    pub generators: Vec<(usize, usize)>,
    pub leq: Relation,
}

impl InducedPreorder {
    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.leq.contains(a, b)
    }
}

/// Edges generating `≤_α(R)`: the base order plus every translate of every
/// generator.
pub(crate) fn alpha_edges(a: &SPoset, r: &[(usize, usize)]) -> Vec<BitSet> {
    let n = a.len();
    let mut adj: Vec<BitSet> = (0..n).map(|i| a.poset().relation().row(i).clone()).collect();
    let lefts: Vec<usize> = a.left_actor().map(|u| u.elements().collect()).unwrap_or_else(|| vec![usize::MAX]);
    let rights: Vec<usize> = a.right_actor().map(|u| u.elements().collect()).unwrap_or_else(|| vec![usize::MAX]);
    let translate = |x: usize, s: usize, t: usize| {
        let y = if s == usize::MAX { x } else { a.act_left(s, x) };
        if t == usize::MAX {
            y
        } else {
            a.act_right(y, t)
        }
    };
    for &(x, y) in r {
        for &s in &lefts {
            for &t in &rights {
                adj[translate(x, s, t)].insert(translate(y, s, t));
            }
        }
    }
    adj
}

pub fn alpha_preorder(a: &SPoset, r: &[(usize, usize)]) -> Result<InducedPreorder> {
    check_pairs(a.len(), r)?;
    let leq = crate::relation::reflexive_transitive_closure(&alpha_edges(a, r));
    Ok(InducedPreorder {
        generators: r.to_vec(),
        leq,
    })
}

/// `A/ν(R)`.
pub fn nu_congruence(a: &SPoset, r: &[(usize, usize)]) -> Result<Quotient> {
    let pre = alpha_preorder(a, r)?;
    Ok(Quotient::from_preorder(a, &pre.leq))
}

/// `A/θ(R) = A/ν(R ∪ R⁻¹)`.
pub fn theta_congruence(a: &SPoset, r: &[(usize, usize)]) -> Result<Quotient> {
    let sym: Vec<(usize, usize)> = r.iter().flat_map(|&(x, y)| [(x, y), (y, x)]).collect();
    nu_congruence(a, &sym)
}

fn check_pairs(n: usize, r: &[(usize, usize)]) -> Result<()> {
    match r.iter().find(|&&(x, y)| x >= n || y >= n) {
        Some(&(x, y)) => Err(Error::BadInput(format!("pair ({x}, {y}) outside a carrier of size {n}"))),
        None => Ok(()),
    }
}

/// An S-poset divided by the kernel of an action-compatible preorder, with the
/// induced order on classes.
#[derive(Clone, Debug)]
pub struct Quotient {
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    sposet: SPoset,
}

impl Quotient {
    /// `leq` must be a preorder containing the order of `base` and compatible
    /// with its actions. Classes are numbered by their least member, which
    /// also names them.
    pub(crate) fn from_preorder(base: &SPoset, leq: &Relation) -> Quotient {
        let n = base.len();
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let c = classes.len();
            let members: Vec<usize> = leq.row(x).iter().filter(|&y| leq.contains(y, x)).collect();
            for &y in &members {
                class_of[y] = c;
            }
            classes.push(members);
        }
        let k = classes.len();
        let order = Relation::from_pairs(
            k,
            classes.iter().enumerate().flat_map(|(c, m)| leq.row(m[0]).iter().map(move |y| (c, y))).map(|(c, y)| (c, class_of[y])),
        );
        let names = classes.iter().map(|c| base.name(c[0]).to_string()).collect();
        let poset = Poset::from_closed_unchecked(names, order);
        let induce = |act: &Action| {
            let m = act.actor().len();
            let table = (0..k)
                .flat_map(|c| (0..m).map(move |s| (c, s)))
                .map(|(c, s)| class_of[act.apply(classes[c][0], s)])
                .collect();
            Action::new(act.actor().clone(), table)
        };
        let sposet = SPoset::from_parts_unchecked(poset, base.left().map(induce), base.right().map(induce));
        Quotient {
            class_of,
            classes,
            sposet,
        }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    /// The projection `A → A/ρ` as an assignment.
    pub fn projection(&self) -> &[usize] {
        &self.class_of
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn representative(&self, c: usize) -> usize {
        self.classes[c][0]
    }

    pub fn sposet(&self) -> &SPoset {
        &self.sposet
    }

    pub fn into_sposet(self) -> SPoset {
        self.sposet
    }
}

/// Outcome of the S-poset congruence criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceCheck {
    pub holds: bool,
    /// `(a, b)` with `a ≤_ρ b ≤_ρ a` but `a` and `b` in different classes.
    pub witness: Option<(usize, usize)>,
}

/// Decides whether the act congruence given by class labels is an S-poset
/// congruence, i.e. whether `a ≤_ρ b ≤_ρ a` forces `a ρ b`.
pub fn is_sposet_congruence(a: &SPoset, labels: &[usize]) -> Result<CongruenceCheck> {
    let n = a.len();
    if labels.len() != n {
        return Err(Error::BadInput("partition does not cover the carrier".into()));
    }
    for x in 0..n {
        for y in (x + 1..n).filter(|&y| labels[x] == labels[y]) {
            for act in a.left().into_iter().chain(a.right()) {
                for s in act.actor().elements() {
                    if labels[act.apply(x, s)] != labels[act.apply(y, s)] {
                        return Err(Error::NotActCongruence(format!(
                            "{} and {} are related but their translates by {} are not",
                            a.name(x),
                            a.name(y),
                            act.actor().name(s)
                        )));
                    }
                }
            }
        }
    }
    // ≤_ρ: chains of order steps and ρ-steps
    let mut adj: Vec<BitSet> = (0..n).map(|i| a.poset().relation().row(i).clone()).collect();
    for x in 0..n {
        for y in (0..n).filter(|&y| labels[x] == labels[y]) {
            adj[x].insert(y);
        }
    }
    let le = crate::relation::reflexive_transitive_closure(&adj);
    let witness = le.pairs().find(|&(x, y)| le.contains(y, x) && labels[x] != labels[y]);
    Ok(CongruenceCheck {
        holds: witness.is_none(),
        witness,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fixtures;
    use crate::pomonoid::Pomonoid;
    use crate::poset::names;

    fn over_trivial(p: Poset) -> SPoset {
        let t = Arc::new(Pomonoid::trivial());
        let n = p.len();
        SPoset::from_parts_unchecked(p, None, Some(Action::new(t, (0..n).collect())))
    }

    /// Least preorder by naive saturation: repeat transitivity and translation
    /// until nothing changes.
    fn saturate(a: &SPoset, r: &[(usize, usize)]) -> Vec<Vec<bool>> {
        let n = a.len();
        let mut m = vec![vec![false; n]; n];
        for (x, y) in a.poset().relation().pairs() {
            m[x][y] = true;
        }
        for &(x, y) in r {
            m[x][y] = true;
        }
        loop {
            let mut changed = false;
            for x in 0..n {
                for y in 0..n {
                    if !m[x][y] {
                        continue;
                    }
                    if let Some(act) = a.right() {
                        for s in act.actor().elements() {
                            let (p, q) = (act.apply(x, s), act.apply(y, s));
                            if !m[p][q] {
                                m[p][q] = true;
                                changed = true;
                            }
                        }
                    }
                    for z in 0..n {
                        if m[y][z] && !m[x][z] {
                            m[x][z] = true;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return m;
            }
        }
    }

    #[test]
    fn empty_generators_give_the_base_order() {
        let s = Arc::new(fixtures::strong_gap_pomonoid());
        let a = SPoset::regular_right(&s);
        let pre = alpha_preorder(&a, &[]).unwrap();
        assert_eq!(&pre.leq, a.poset().relation());
        assert_eq!(nu_congruence(&a, &[]).unwrap().len(), 5);
        assert_eq!(theta_congruence(&a, &[]).unwrap().len(), 5);
    }

    #[test]
    fn single_generator_on_an_antichain() {
        let a = over_trivial(Poset::antichain(names(&["x", "y"])));
        let pre = alpha_preorder(&a, &[(0, 1)]).unwrap();
        assert!(pre.contains(0, 1) && !pre.contains(1, 0));
        assert_eq!(nu_congruence(&a, &[(0, 1)]).unwrap().len(), 2);
        assert_eq!(theta_congruence(&a, &[(0, 1)]).unwrap().len(), 1);
    }

    #[test]
    fn translates_of_one_below_e() {
        let s = Arc::new(fixtures::strong_gap_pomonoid());
        let i = |n: &str| s.index_of(n).unwrap();
        let a = SPoset::regular_right(&s);
        let pre = alpha_preorder(&a, &[(i("1"), i("e"))]).unwrap();
        // (1·t, e·t) for every t: (a,a) (f,f) (b,b) (e,e) (1,e)
        for t in s.elements() {
            assert!(pre.contains(s.mul(i("1"), t), s.mul(i("e"), t)));
        }
        assert!(pre.contains(i("1"), i("e")));
        assert!(!pre.contains(i("e"), i("1")));
        let oracle = saturate(&a, &[(i("1"), i("e"))]);
        for x in 0..5 {
            for y in 0..5 {
                assert_eq!(pre.contains(x, y), oracle[x][y]);
            }
        }
    }

    #[test]
    fn reversed_chain_pair_collapses() {
        let a = over_trivial(Poset::chain(names(&["x", "y"])));
        let q = nu_congruence(&a, &[(1, 0)]).unwrap();
        assert_eq!(q.len(), 1);
    }

    #[test]
    fn one_below_b_merges_nothing() {
        // every translate (t, b·t) = (t, b) already holds because b is the top
        let s = Arc::new(fixtures::strong_gap_pomonoid());
        let a = SPoset::regular_right(&s);
        let q = nu_congruence(&a, &[(s.index_of("1").unwrap(), s.index_of("b").unwrap())]).unwrap();
        assert_eq!(q.len(), 5);
    }

    #[test]
    fn nu_partition_passes_the_criterion() {
        let s = Arc::new(fixtures::strong_gap_pomonoid());
        let a = SPoset::regular_right(&s);
        let i = |n: &str| s.index_of(n).unwrap();
        let q = nu_congruence(&a, &[(i("e"), i("1")), (i("1"), i("e"))]).unwrap();
        assert!(q.len() < 5);
        assert!(is_sposet_congruence(&a, q.projection()).unwrap().holds);
    }

    #[test]
    fn identity_partition_on_a_chain() {
        let a = over_trivial(Poset::chain(names(&["x", "y"])));
        assert!(is_sposet_congruence(&a, &[0, 1]).unwrap().holds);
    }

    #[test]
    fn partition_with_a_gap_fails_the_criterion() {
        // chain 0 < 1 < 2 with 0 ~ 2 but 1 alone: 0 ≤ 1 ≤ 2 ρ 0
        let a = over_trivial(Poset::chain(names(&["0", "1", "2"])));
        let check = is_sposet_congruence(&a, &[0, 1, 0]).unwrap();
        assert!(!check.holds);
        assert!(check.witness.is_some());
    }

    #[test]
    fn non_act_congruence_is_rejected() {
        let s = Arc::new(fixtures::strong_gap_pomonoid());
        let a = SPoset::regular_right(&s);
        let i = |n: &str| s.index_of(n).unwrap();
        // {1, b} together: 1·e = e but b·e = b, and e sits alone
        let mut labels: Vec<usize> = (0..5).collect();
        labels[i("b")] = labels[i("1")];
        assert!(matches!(is_sposet_congruence(&a, &labels), Err(Error::NotActCongruence(_))));
    }

    proptest::proptest! {
        #[test]
        fn closure_matches_naive_saturation(raw in proptest::collection::vec((0usize..5, 0usize..5), 0..4)) {
            let s = Arc::new(fixtures::strong_gap_pomonoid());
            let a = SPoset::regular_right(&s);
            let pre = alpha_preorder(&a, &raw).unwrap();
            let oracle = saturate(&a, &raw);
            for x in 0..5 {
                for y in 0..5 {
                    proptest::prop_assert_eq!(pre.contains(x, y), oracle[x][y]);
                    if pre.contains(x, y) {
                        for t in s.elements() {
                            proptest::prop_assert!(pre.contains(s.mul(x, t), s.mul(y, t)));
                        }
                    }
                }
            }
            let q = Quotient::from_preorder(&a, &pre.leq);
            proptest::prop_assert!(q.sposet().poset().relation().antisymmetry_witness().is_none());
            let proj = crate::sposet::analyze_map(q.projection(), &a, q.sposet()).unwrap();
            proptest::prop_assert!(proj.flags.monotone && proj.flags.surjective);
        }
    }
}
