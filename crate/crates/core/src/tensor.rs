//! Tensor products `A ⊗_S B` of a right S-poset and a left S-poset.
//!
//! The order on `A ⊗_S B` is usually written as the existence of a scheme of
//! unbounded length
//!
//! ```text
//! a       ≤ a₁s₁     s₁b   ≤ t₁b₂
//! a₁t₁    ≤ a₂s₂     s₂b₂  ≤ t₂b₃
//! …
//! aₙtₙ    ≤ a'       sₙbₙ  ≤ tₙb'
//! ```
//!
//! On finite carriers this collapses to reachability. Let `G` be the directed
//! graph on `A × B` with an edge for every componentwise inequality and both
//! edges `(as, b) ⇄ (a, sb)`. Every scheme row is a path in `G` (go from
//! `(aₖ₋₁tₖ₋₁, bₖ)` up to `(aₖsₖ, bₖ)`, across to `(aₖ, sₖbₖ)`, up to
//! `(aₖ, tₖbₖ₊₁)` and across to `(aₖtₖ, bₖ₊₁)`), and every edge of `G` is a
//! one-row scheme. So `a ⊗ b ≤ a' ⊗ b'` holds exactly when `(a', b')` is
//! reachable from `(a, b)`, and the whole order is one reflexive-transitive
//! closure of `G`. Certificates are shortest paths in `G`, rewritten edge by
//! edge into scheme rows.

use std::sync::Arc;

use serde::Serialize;

use crate::congruence::Quotient;
use crate::error::{Error, Result};
use crate::pomonoid::Pomonoid;
use crate::poset::{map_flags, MapFlags, Poset};
use crate::relation::{reflexive_transitive_closure, BitSet, Relation};
use crate::sposet::{analyze_map, same_actor, Action, SPoset, SPosetMap};

/// `A ⊗_S B` with its pair preorder and class structure.
#[derive(Clone, Debug)]
pub struct TensorPoset {
    left: SPoset,
    right: SPoset,
    actor: Arc<Pomonoid>,
    generators: Relation,
    preorder: Relation,
    quotient: Quotient,
}

/// One row `(aₖ, sₖ, tₖ, bₖ₊₁)` of an order scheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SchemeRow {
    pub a: usize,
    pub s: usize,
    pub t: usize,
    pub b: usize,
}

/// A scheme witnessing `from.0 ⊗ from.1 ≤ to.0 ⊗ to.1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TensorCertificate {
    pub from: (usize, usize),
    pub to: (usize, usize),
    pub rows: Vec<SchemeRow>,
}

impl TensorCertificate {
    /// Checks every inequality of the scheme in `A`, `S` and `B` directly.
    pub fn replay(&self, a: &SPoset, b: &SPoset) -> std::result::Result<(), String> {
        if self.rows.is_empty() {
            return Err("a scheme has at least one row".into());
        }
        let (mut cur_a, mut cur_b) = self.from;
        for (k, row) in self.rows.iter().enumerate() {
            let upper = a.act_right(row.a, row.s);
            if !a.leq(cur_a, upper) {
                return Err(format!("row {k}: {} ≰ {}", a.name(cur_a), a.name(upper)));
            }
            let (lo, hi) = (b.act_left(row.s, cur_b), b.act_left(row.t, row.b));
            if !b.leq(lo, hi) {
                return Err(format!("row {k}: {} ≰ {}", b.name(lo), b.name(hi)));
            }
            cur_a = a.act_right(row.a, row.t);
            cur_b = row.b;
        }
        if !a.leq(cur_a, self.to.0) {
            return Err(format!("last row: {} ≰ {}", a.name(cur_a), a.name(self.to.0)));
        }
        if cur_b != self.to.1 {
            return Err(format!("scheme ends at {} instead of {}", b.name(cur_b), b.name(self.to.1)));
        }
        Ok(())
    }

    /// The scheme as printable inequalities.
    pub fn render(&self, a: &SPoset, b: &SPoset, s: &Pomonoid) -> Vec<String> {
        let mut out = Vec::new();
        let mut prev_a = a.name(self.from.0).to_string();
        let mut prev_b = b.name(self.from.1).to_string();
        for row in &self.rows {
            let (an, sn, tn, bn) = (a.name(row.a), s.name(row.s), s.name(row.t), b.name(row.b));
            out.push(format!("{prev_a} <= {an}.{sn}    {sn}.{prev_b} <= {tn}.{bn}"));
            prev_a = format!("{an}.{tn}");
            prev_b = bn.to_string();
        }
        out.push(format!("{prev_a} <= {}", a.name(self.to.0)));
        out
    }
}

impl TensorPoset {
    /// `A ⊗_S B`; `A` needs a right and `B` a left action of the same
    /// pomonoid. A left action on `A` and a right action on `B` pass to the
    /// product. Without either outer action the product carries the trivial
    /// right action of the one-element pomonoid.
    pub fn new(a: &SPoset, b: &SPoset) -> Result<TensorPoset> {
        Self::guarded(a, b, usize::MAX)
    }

    /// As [`TensorPoset::new`], failing before the closure when `|A × B|`
    /// exceeds `max_cells`.
    pub fn guarded(a: &SPoset, b: &SPoset, max_cells: usize) -> Result<TensorPoset> {
        let s = a.require_right("the left tensor factor")?.clone();
        let s2 = b.require_left("the right tensor factor")?;
        if !same_actor(&s, s2) {
            return Err(Error::ActorMismatch("tensor factors act by different pomonoids".into()));
        }
        let (na, nb) = (a.len(), b.len());
        let cells = na * nb;
        if cells > max_cells {
            return Err(Error::SizeGuardExceeded { level: 0, size: cells });
        }
        let pair = |x: usize, y: usize| x * nb + y;
        let mut adj: Vec<BitSet> = vec![BitSet::new(cells); cells];
        for x in 0..na {
            for y in 0..nb {
                let p = pair(x, y);
                for x2 in a.poset().relation().row(x).iter() {
                    adj[p].insert(pair(x2, y));
                }
                for y2 in b.poset().relation().row(y).iter() {
                    adj[p].insert(pair(x, y2));
                }
                for u in s.elements() {
                    let (l, r) = (pair(a.act_right(x, u), y), pair(x, b.act_left(u, y)));
                    adj[l].insert(r);
                    adj[r].insert(l);
                }
            }
        }
        let preorder = reflexive_transitive_closure(&adj);
        let generators = Relation::from_rows(adj);
        let pairs = pair_sposet(a, b);
        let quotient = Quotient::from_preorder(&pairs, &preorder);
        Ok(TensorPoset {
            left: a.clone(),
            right: b.clone(),
            actor: s,
            generators,
            preorder,
            quotient,
        })
    }

    pub fn left_factor(&self) -> &SPoset {
        &self.left
    }

    pub fn right_factor(&self) -> &SPoset {
        &self.right
    }

    pub fn actor(&self) -> &Arc<Pomonoid> {
        &self.actor
    }

    /// Number of classes.
    pub fn len(&self) -> usize {
        self.quotient.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Size of `A × B`.
    pub fn cells(&self) -> usize {
        self.left.len() * self.right.len()
    }

    /// The class of `a ⊗ b`.
    pub fn class(&self, a: usize, b: usize) -> usize {
        self.quotient.class_of(a * self.right.len() + b)
    }

    /// A representative pair of a class.
    pub fn representative(&self, c: usize) -> (usize, usize) {
        let p = self.quotient.representative(c);
        (p / self.right.len(), p % self.right.len())
    }

    /// The product as an S-poset on its classes.
    pub fn sposet(&self) -> &SPoset {
        self.quotient.sposet()
    }

    pub fn quotient(&self) -> &Quotient {
        &self.quotient
    }

    /// The preorder on `A × B`, pairs indexed `a·|B| + b`.
    pub fn pair_preorder(&self) -> &Relation {
        &self.preorder
    }

    /// Whether `a ⊗ b ≤ a' ⊗ b'`.
    pub fn leq(&self, a: usize, b: usize, a2: usize, b2: usize) -> bool {
        let nb = self.right.len();
        self.preorder.contains(a * nb + b, a2 * nb + b2)
    }

    /// Decides `a ⊗ b ≤ a' ⊗ b'`, producing a scheme when it holds.
    pub fn leq_certificate(&self, a: usize, b: usize, a2: usize, b2: usize) -> Option<TensorCertificate> {
        let nb = self.right.len();
        let (p, q) = (a * nb + b, a2 * nb + b2);
        if !self.preorder.contains(p, q) {
            return None;
        }
        let one = self.actor.identity();
        let path = self.generators.path(p, q).expect("reachable in the generating graph");
        let mut rows = Vec::with_capacity(path.len());
        if path.len() == 1 {
            rows.push(SchemeRow { a, s: one, t: one, b });
        }
        for w in path.windows(2) {
            let (x, y) = (w[0] / nb, w[0] % nb);
            let (x2, y2) = (w[1] / nb, w[1] % nb);
            rows.push(self.edge_row((x, y), (x2, y2)));
        }
        Some(TensorCertificate {
            from: (a, b),
            to: (a2, b2),
            rows,
        })
    }

    fn edge_row(&self, (x, y): (usize, usize), (x2, y2): (usize, usize)) -> SchemeRow {
        let one = self.actor.identity();
        if self.left.leq(x, x2) && self.right.leq(y, y2) {
            return SchemeRow { a: x2, s: one, t: one, b: y2 };
        }
        for u in self.actor.elements() {
            // (x2·u, y) → (x2, u·y)
            if self.left.act_right(x2, u) == x && self.right.act_left(u, y) == y2 {
                return SchemeRow { a: x2, s: u, t: one, b: y2 };
            }
            // (x, u·y2) → (x·u, y2)
            if self.left.act_right(x, u) == x2 && self.right.act_left(u, y2) == y {
                return SchemeRow { a: x, s: one, t: u, b: y2 };
            }
        }
        unreachable!("every generating edge is an order or identification edge")
    }

    /// Printable name of a class, `a⊗b` for its representative.
    pub fn name(&self, c: usize) -> &str {
        self.sposet().name(c)
    }
}

/// `A × B` with componentwise order and the outer actions, names `a⊗b`.
fn pair_sposet(a: &SPoset, b: &SPoset) -> SPoset {
    let (na, nb) = (a.len(), b.len());
    let cells = na * nb;
    let names = (0..cells).map(|p| format!("{}⊗{}", a.name(p / nb), b.name(p % nb))).collect();
    let leq = Relation::from_pairs(
        cells,
        a.poset()
            .relation()
            .pairs()
            .flat_map(|(x, x2)| b.poset().relation().pairs().map(move |(y, y2)| (x * nb + y, x2 * nb + y2))),
    );
    let poset = Poset::from_closed_unchecked(names, leq);
    let left = a.left().map(|act| {
        let m = act.actor().len();
        let table = (0..cells)
            .flat_map(|p| (0..m).map(move |r| (p, r)))
            .map(|(p, r)| act.apply(p / nb, r) * nb + p % nb)
            .collect();
        Action::new(act.actor().clone(), table)
    });
    let right = b.right().map(|act| {
        let m = act.actor().len();
        let table = (0..cells)
            .flat_map(|p| (0..m).map(move |t| (p, t)))
            .map(|(p, t)| (p / nb) * nb + act.apply(p % nb, t))
            .collect();
        Action::new(act.actor().clone(), table)
    });
    let right = if left.is_none() && right.is_none() {
        let trivial = Arc::new(Pomonoid::trivial());
        Some(Action::new(trivial, (0..cells).collect()))
    } else {
        right
    };
    SPoset::from_parts_unchecked(poset, left, right)
}

/// `a ⊗ s ↦ as` from `A ⊗_S S` to `A`, checked to be an order isomorphism.
pub fn unit_iso(a: &SPoset) -> Result<(TensorPoset, SPosetMap)> {
    let s = a.require_right("the unit law")?.clone();
    let t = TensorPoset::new(a, &SPoset::regular_bi(&s))?;
    let mut image = vec![usize::MAX; t.len()];
    for x in 0..a.len() {
        for u in s.elements() {
            let c = t.class(x, u);
            let v = a.act_right(x, u);
            if image[c] != usize::MAX && image[c] != v {
                return Err(Error::IsoCheckFailed(format!(
                    "{}⊗{} lands on two different elements",
                    a.name(x),
                    s.name(u)
                )));
            }
            image[c] = v;
        }
    }
    let map = analyze_map(&image, t.sposet(), a)?;
    if !(map.flags.order_embedding && map.flags.surjective) {
        return Err(Error::IsoCheckFailed("a⊗s ↦ as is not an order isomorphism".into()));
    }
    Ok((t, map))
}

/// The two bracketings of a triple tensor product and the canonical map
/// between them.
#[derive(Clone, Debug)]
pub struct AssocIso {
    pub left_nested: TensorPoset,
    pub right_nested: TensorPoset,
    /// `((a⊗b)⊗c) ↦ (a⊗(b⊗c))` on classes.
    pub assignment: Vec<usize>,
}

/// `(A ⊗_S B) ⊗_T C → A ⊗_S (B ⊗_T C)`, checked to be an order isomorphism.
pub fn assoc_iso(a: &SPoset, b: &SPoset, c: &SPoset) -> Result<AssocIso> {
    let ab = TensorPoset::new(a, b)?;
    let bc = TensorPoset::new(b, c)?;
    let left_nested = TensorPoset::new(ab.sposet(), c)?;
    let right_nested = TensorPoset::new(a, bc.sposet())?;
    let mut assignment = vec![usize::MAX; left_nested.len()];
    for x in 0..a.len() {
        for y in 0..b.len() {
            for z in 0..c.len() {
                let l = left_nested.class(ab.class(x, y), z);
                let r = right_nested.class(x, bc.class(y, z));
                if assignment[l] != usize::MAX && assignment[l] != r {
                    return Err(Error::IsoCheckFailed(format!(
                        "({}⊗{})⊗{} has two images",
                        a.name(x),
                        b.name(y),
                        c.name(z)
                    )));
                }
                assignment[l] = r;
            }
        }
    }
    let flags = map_flags(&assignment, left_nested.sposet().poset(), right_nested.sposet().poset());
    if !(flags.order_embedding && flags.surjective) {
        return Err(Error::IsoCheckFailed("the reassociation map is not an order isomorphism".into()));
    }
    Ok(AssocIso {
        left_nested,
        right_nested,
        assignment,
    })
}

/// `f ⊗ 1: A ⊗ B → A' ⊗ B` for an S-poset map `f: A → A'`.
#[derive(Clone, Debug)]
pub struct InducedMap {
    pub source: TensorPoset,
    pub target: TensorPoset,
    pub assignment: Vec<usize>,
    pub flags: MapFlags,
}

pub fn induced_map(f: &[usize], a: &SPoset, a2: &SPoset, b: &SPoset) -> Result<InducedMap> {
    let fm = analyze_map(f, &a.right_part(), &a2.right_part())?;
    if !fm.flags.monotone {
        return Err(Error::BadInput("the map is not monotone".into()));
    }
    let source = TensorPoset::new(a, b)?;
    let target = TensorPoset::new(a2, b)?;
    let mut assignment = vec![usize::MAX; source.len()];
    for x in 0..a.len() {
        for y in 0..b.len() {
            assignment[source.class(x, y)] = target.class(f[x], y);
        }
    }
    let flags = map_flags(&assignment, source.sposet().poset(), target.sposet().poset());
    debug_assert!(flags.monotone);
    Ok(InducedMap {
        source,
        target,
        assignment,
        flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::poset::names;

    fn over_trivial(p: Poset, left: bool) -> SPoset {
        let t = Arc::new(Pomonoid::trivial());
        let act = Some(Action::new(t, (0..p.len()).collect()));
        if left {
            SPoset::from_parts_unchecked(p, act, None)
        } else {
            SPoset::from_parts_unchecked(p, None, act)
        }
    }

    #[test]
    fn identification_with_e() {
        let s = Arc::new(fixtures::strong_gap_pomonoid());
        let i = |n: &str| s.index_of(n).unwrap();
        let t = TensorPoset::new(&SPoset::regular_right(&s), &SPoset::regular_left(&s)).unwrap();
        assert_eq!(t.class(i("f"), i("e")), t.class(i("f"), i("1")));
        assert_eq!(t.len(), 5);
    }

    #[test]
    fn f_e_below_b_1() {
        let s = Arc::new(fixtures::strong_gap_pomonoid());
        let i = |n: &str| s.index_of(n).unwrap();
        let reg = SPoset::regular_right(&s);
        let t = TensorPoset::new(&reg, &SPoset::regular_bi(&s)).unwrap();
        let cert = t.leq_certificate(i("f"), i("e"), i("b"), i("1")).unwrap();
        cert.replay(&reg, &SPoset::regular_bi(&s)).unwrap();
        assert!(!t.leq(i("b"), i("1"), i("f"), i("e")));
    }

    #[test]
    fn a_1_is_below_everything() {
        let s = Arc::new(fixtures::strong_gap_pomonoid());
        let a_ = s.index_of("a").unwrap();
        let one = s.identity();
        let (reg, bi) = (SPoset::regular_right(&s), SPoset::regular_bi(&s));
        let t = TensorPoset::new(&reg, &bi).unwrap();
        for x in s.elements() {
            for y in s.elements() {
                // oracle: compare the products in S
                assert_eq!(t.leq(a_, one, x, y), s.leq(a_, s.mul(x, y)));
                let cert = t.leq_certificate(a_, one, x, y).unwrap();
                cert.replay(&reg, &bi).unwrap();
            }
        }
    }

    #[test]
    fn reflexive_query_has_one_identity_row() {
        let s = Arc::new(fixtures::strong_gap_pomonoid());
        let (reg, left) = (SPoset::regular_right(&s), SPoset::regular_left(&s));
        let t = TensorPoset::new(&reg, &left).unwrap();
        let cert = t.leq_certificate(2, 3, 2, 3).unwrap();
        assert_eq!(cert.rows, vec![SchemeRow { a: 2, s: 4, t: 4, b: 3 }]);
        cert.replay(&reg, &left).unwrap();
    }

    #[test]
    fn over_the_trivial_monoid_the_product_is_cartesian() {
        let a = over_trivial(Poset::antichain(names(&["x", "y"])), false);
        let b = over_trivial(Poset::antichain(names(&["p", "q"])), true);
        let t = TensorPoset::new(&a, &b).unwrap();
        assert_eq!(t.len(), 4);
        assert!(!t.leq(0, 0, 1, 1));
        assert!(!t.leq(0, 1, 1, 0));
        assert!(t.leq(1, 1, 1, 1));
    }

    #[test]
    fn unit_law_on_small_examples() {
        let s = Arc::new(fixtures::strong_gap_pomonoid());
        let (t, _) = unit_iso(&SPoset::regular_right(&s)).unwrap();
        assert_eq!(t.len(), 5);
        let (t, _) = unit_iso(&SPoset::one_point(None, Some(&s))).unwrap();
        assert_eq!(t.len(), 1);
        let u = fixtures::strong_gap_core(&s);
        let (t, _) = unit_iso(&SPoset::regular_right(u.as_pomonoid())).unwrap();
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn reassociation_over_the_fixture() {
        let s = Arc::new(fixtures::strong_gap_pomonoid());
        let iso = assoc_iso(&SPoset::regular_right(&s), &SPoset::regular_bi(&s), &SPoset::regular_left(&s)).unwrap();
        assert_eq!(iso.left_nested.len(), 5);
        assert_eq!(iso.right_nested.len(), 5);
    }

    #[test]
    fn reassociation_of_points() {
        let s = Arc::new(fixtures::strong_gap_pomonoid());
        let p = |l: bool, r: bool| SPoset::one_point(l.then_some(&s), r.then_some(&s));
        let iso = assoc_iso(&p(false, true), &p(true, true), &p(true, false)).unwrap();
        assert_eq!(iso.right_nested.len(), 1);
    }

    #[test]
    fn identity_induces_identity() {
        let s = Arc::new(fixtures::strong_gap_pomonoid());
        let reg = SPoset::regular_right(&s);
        let id: Vec<usize> = s.elements().collect();
        let m = induced_map(&id, &reg, &reg, &SPoset::regular_left(&s)).unwrap();
        assert_eq!(m.assignment, (0..m.source.len()).collect::<Vec<_>>());
    }

    #[test]
    fn collapsing_a_chain_is_not_injective_after_tensoring() {
        let chain = over_trivial(Poset::chain(names(&["x", "y"])), false);
        let point = over_trivial(Poset::antichain(names(&["*"])), false);
        let b = over_trivial(Poset::antichain(names(&["p"])), true);
        let m = induced_map(&[0, 0], &chain, &point, &b).unwrap();
        assert!(!m.flags.injective);
    }

    #[test]
    fn pounitary_inclusion_stays_an_embedding() {
        // U = {1, e, f} ↪ S as right U-posets, tensored with S over U
        let s = Arc::new(fixtures::strong_gap_pomonoid());
        let u = fixtures::strong_gap_core(&s);
        let phi = u.inclusion();
        let x = SPoset::regular_right(u.as_pomonoid());
        let y = SPoset::regular_right(&s).restrict_right(phi).unwrap();
        let s_over_u = SPoset::bi_over(phi);
        let m = induced_map(u.members(), &x, &y, &s_over_u).unwrap();
        assert!(m.flags.order_embedding);
    }
}
