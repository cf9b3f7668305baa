//! Finite posets and monotone maps between them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::relation::Relation;

/// A finite partially ordered set with named elements.
///
/// Elements are addressed by index; names only matter for parsing and reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    names: Vec<String>,
    leq: Relation,
}

impl Poset {
    /// Builds a poset from any generating subrelation (for instance Hasse pairs).
    pub fn from_pairs(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let leq = close_or_cycle(pairs, names.len())?.map_err(|cycle| Error::AntisymmetryViolation {
            cycle: cycle.iter().map(|&i| names[i].clone()).collect(),
        })?;
        Ok(Poset { names, leq })
    }

    /// Wraps an already closed relation, checking the partial order axioms.
    pub fn from_relation(names: Vec<String>, leq: Relation) -> Result<Self> {
        if leq.size() != names.len() {
            return Err(Error::BadInput("relation size does not match carrier".into()));
        }
        if !leq.is_reflexive() || !leq.is_transitive() {
            return Err(Error::BadInput("relation is not a closed preorder".into()));
        }
        if let Some((a, b)) = leq.antisymmetry_witness() {
            return Err(Error::AntisymmetryViolation {
                cycle: vec![names[a].clone(), names[b].clone(), names[a].clone()],
            });
        }
        Ok(Poset { names, leq })
    }

    pub(crate) fn from_closed_unchecked(names: Vec<String>, leq: Relation) -> Self {
        debug_assert!(leq.is_reflexive() && leq.is_transitive());
        debug_assert!(leq.antisymmetry_witness().is_none());
        Poset { names, leq }
    }

    pub fn antichain(names: Vec<String>) -> Self {
        let n = names.len();
        Poset {
            names,
            leq: Relation::identity(n),
        }
    }

    /// The chain `names[0] < names[1] < …`.
    pub fn chain(names: Vec<String>) -> Self {
        let n = names.len();
        let leq = Relation::from_pairs(n, (0..n).flat_map(|i| (i..n).map(move |j| (i, j))));
        Poset { names, leq }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq.contains(a, b)
    }

    pub fn relation(&self) -> &Relation {
        &self.leq
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Strict covering pairs `a ⋖ b`.
    pub fn hasse(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a == b || !self.leq(a, b) {
                    continue;
                }
                let covered = (0..n).any(|c| c != a && c != b && self.leq(a, c) && self.leq(c, b));
                if !covered {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Whether `subset` is convex: `x ≤ z ≤ y` with `x, y` in it forces `z` in it.
    pub fn is_convex(&self, subset: &[bool]) -> bool {
        self.convexity_witness(subset).is_none()
    }

    pub fn convexity_witness(&self, subset: &[bool]) -> Option<(usize, usize, usize)> {
        let n = self.len();
        for x in (0..n).filter(|&x| subset[x]) {
            for y in (0..n).filter(|&y| subset[y] && self.leq(x, y)) {
                for z in 0..n {
                    if !subset[z] && self.leq(x, z) && self.leq(z, y) {
                        return Some((x, z, y));
                    }
                }
            }
        }
        None
    }

    /// The order restricted to the given elements (in the given order).
    pub fn restrict(&self, elements: &[usize]) -> Poset {
        let names = elements.iter().map(|&e| self.names[e].clone()).collect();
        let k = elements.len();
        let leq = Relation::from_pairs(
            k,
            (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).filter(|&(i, j)| self.leq(elements[i], elements[j])),
        );
        Poset { names, leq }
    }

    pub fn renamed(&self, names: Vec<String>) -> Poset {
        assert_eq!(names.len(), self.len());
        Poset {
            names,
            leq: self.leq.clone(),
        }
    }

    /// Graphviz rendering of the Hasse diagram (bottom to top).
    pub fn to_dot(&self, title: &str) -> String {
        let mut s = format!("digraph \"{title}\" {{\n  rankdir=BT;\n");
        for n in &self.names {
            s.push_str(&format!("  \"{n}\";\n"));
        }
        for (a, b) in self.hasse() {
            s.push_str(&format!("  \"{}\" -> \"{}\";\n", self.names[a], self.names[b]));
        }
        s.push_str("}\n");
        s
    }
}

/// Reflexive-transitive closure of `pairs` on `{0, …, n-1}`; fails when the
/// closure identifies two distinct elements.
///
/// The cycle witness lists indices; [`Poset::from_pairs`] reports names instead.
pub fn closure_order(pairs: &[(usize, usize)], n: usize) -> Result<Relation> {
    close_or_cycle(pairs, n)?.map_err(|cycle| Error::AntisymmetryViolation {
        cycle: cycle.iter().map(|i| i.to_string()).collect(),
    })
}

fn close_or_cycle(
    pairs: &[(usize, usize)],
    n: usize,
) -> Result<std::result::Result<Relation, Vec<usize>>> {
    if let Some(&(a, b)) = pairs.iter().find(|&&(a, b)| a >= n || b >= n) {
        return Err(Error::BadInput(format!("pair ({a}, {b}) outside a carrier of size {n}")));
    }
    let generators = Relation::from_pairs(n, pairs.iter().copied());
    let closed = generators.closure();
    if let Some((a, b)) = closed.antisymmetry_witness() {
        let there = generators.path(a, b).unwrap_or_else(|| vec![a, b]);
        let back = generators.path(b, a).unwrap_or_else(|| vec![b, a]);
        return Ok(Err(there.into_iter().chain(back.into_iter().skip(1)).collect()));
    }
    Ok(Ok(closed))
}

/// Properties of a map between posets, all computed by exhaustive scans.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MapFlags {
    pub monotone: bool,
    pub order_embedding: bool,
    pub convex: bool,
    pub injective: bool,
    pub surjective: bool,
}

/// A total assignment between poset carriers with its computed flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneMap {
    pub assignment: Vec<usize>,
    pub flags: MapFlags,
}

impl MonotoneMap {
    pub fn analyze(assignment: Vec<usize>, source: &Poset, target: &Poset) -> Result<Self> {
        if assignment.len() != source.len() || assignment.iter().any(|&y| y >= target.len()) {
            return Err(Error::BadInput("assignment is not a total map between the carriers".into()));
        }
        let flags = map_flags(&assignment, source, target);
        Ok(MonotoneMap { assignment, flags })
    }

    pub fn apply(&self, x: usize) -> usize {
        self.assignment[x]
    }
}

pub(crate) fn map_flags(f: &[usize], source: &Poset, target: &Poset) -> MapFlags {
    let n = source.len();
    let mut monotone = true;
    let mut reflecting = true;
    for x in 0..n {
        for y in 0..n {
            let before = source.leq(x, y);
            let after = target.leq(f[x], f[y]);
            monotone &= !before || after;
            reflecting &= before || !after;
        }
    }
    let mut image = vec![false; target.len()];
    for &y in f {
        image[y] = true;
    }
    let mut seen = vec![false; target.len()];
    let injective = f.iter().all(|&y| !std::mem::replace(&mut seen[y], true));
    MapFlags {
        monotone,
        order_embedding: monotone && reflecting,
        convex: target.is_convex(&image),
        injective,
        surjective: image.iter().all(|&b| b),
    }
}

/// The first pair `(x, y)` breaking `x ≤ y ⇔ f(x) ≤ f(y)`, if any.
pub fn embedding_witness(f: &[usize], source: &Poset, target: &Poset) -> Option<(usize, usize)> {
    let n = source.len();
    (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .find(|&(x, y)| source.leq(x, y) != target.leq(f[x], f[y]))
}

pub(crate) fn names(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_element_chain() {
        let r = closure_order(&[(0, 1)], 2).unwrap();
        assert!(r.contains(0, 1) && !r.contains(1, 0) && r.contains(0, 0) && r.contains(1, 1));
    }

    #[test]
    fn two_cycle_is_rejected() {
        let err = Poset::from_pairs(names(&["x", "y"]), &[(0, 1), (1, 0)]).unwrap_err();
        match err {
            Error::AntisymmetryViolation { cycle } => assert_eq!(cycle, vec!["x", "y", "x"]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn fixture_hasse_pairs_close_to_the_diamond() {
        // a f b e 1 with a ≤ 1, e, f ≤ b
        let p = Poset::from_pairs(
            names(&["a", "f", "b", "e", "1"]),
            &[(0, 4), (0, 3), (0, 1), (4, 2), (3, 2), (1, 2)],
        )
        .unwrap();
        for x in 0..5 {
            assert!(p.leq(0, x), "a is the bottom");
            assert!(p.leq(x, 2), "b is the top");
        }
        for (x, y) in [(1, 3), (1, 4), (3, 4)] {
            assert!(!p.leq(x, y) && !p.leq(y, x));
        }
        assert_eq!(p.relation().count(), 5 + 4 + 3);
    }

    #[test]
    fn closure_is_idempotent() {
        let p = Poset::chain(names(&["0", "1", "2"]));
        let pairs: Vec<_> = p.relation().pairs().collect();
        assert_eq!(&closure_order(&pairs, 3).unwrap(), p.relation());
    }

    #[test]
    fn out_of_range_pair() {
        assert!(matches!(closure_order(&[(0, 3)], 2), Err(Error::BadInput(_))));
    }

    #[test]
    fn convexity_of_a_gap() {
        let p = Poset::chain(names(&["0", "1", "2"]));
        assert!(!p.is_convex(&[true, false, true]));
        assert_eq!(p.convexity_witness(&[true, false, true]), Some((0, 1, 2)));
        assert!(p.is_convex(&[true, true, false]));
    }
}
