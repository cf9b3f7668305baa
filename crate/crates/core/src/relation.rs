//! Dense boolean relations and the reflexive-transitive closure kernel.
//!
//! Every order in the crate (poset orders, the preorders `≤_α(R)` behind
//! congruences, tensor orders) is a [`Relation`]: an `n × n` bit matrix stored
//! row by row. Closures are computed on a generating digraph by collapsing
//! strongly connected components (Tarjan) and propagating reachability sets
//! along the condensation in reverse topological order, which costs
//! `O(edges · n / 64)` word operations.

use std::fmt;

/// Fixed-capacity bit set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn capacity(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i >> 6] >> (i & 63) & 1 == 1
    }

    /// Returns `true` if the bit was newly set.
    #[inline]
    pub fn insert(&mut self, i: usize) -> bool {
        debug_assert!(i < self.len);
        let w = &mut self.words[i >> 6];
        let mask = 1u64 << (i & 63);
        let fresh = *w & mask == 0;
        *w |= mask;
        fresh
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i >> 6] &= !(1u64 << (i & 63));
    }

    /// Returns `true` if any bit changed.
    pub fn union_with(&mut self, other: &BitSet) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut changed = false;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            let next = *a | *b;
            changed |= next != *a;
            *a = next;
        }
        changed
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * 64 + bit)
            })
        })
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A binary relation on `{0, …, n-1}`; row `i` holds every `j` with `i R j`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    rows: Vec<BitSet>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation {
            rows: vec![BitSet::new(n); n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Relation::empty(n);
        for i in 0..n {
            r.insert(i, i);
        }
        r
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = Relation::empty(n);
        for (i, j) in pairs {
            r.insert(i, j);
        }
        r
    }

    /// Wraps adjacency rows; every row must have capacity `rows.len()`.
    pub fn from_rows(rows: Vec<BitSet>) -> Self {
        debug_assert!(rows.iter().all(|r| r.capacity() == rows.len()));
        Relation { rows }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    #[inline]
    pub fn insert(&mut self, i: usize, j: usize) -> bool {
        self.rows[i].insert(j)
    }

    pub fn row(&self, i: usize) -> &BitSet {
        &self.rows[i]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |j| (i, j)))
    }

    pub fn count(&self) -> usize {
        self.rows.iter().map(BitSet::count).sum()
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.size()).all(|i| self.contains(i, i))
    }

    pub fn is_transitive(&self) -> bool {
        (0..self.size()).all(|i| self.rows[i].iter().all(|j| self.rows[j].is_subset(&self.rows[i])))
    }

    /// First pair `i != j` related both ways, if any.
    pub fn antisymmetry_witness(&self) -> Option<(usize, usize)> {
        self.pairs().find(|&(i, j)| i != j && self.contains(j, i))
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.rows.iter().zip(&other.rows).all(|(a, b)| a.is_subset(b))
    }

    pub fn converse(&self) -> Relation {
        let mut r = Relation::empty(self.size());
        for (i, j) in self.pairs() {
            r.insert(j, i);
        }
        r
    }

    pub fn union_with(&mut self, other: &Relation) -> bool {
        let mut changed = false;
        for (a, b) in self.rows.iter_mut().zip(&other.rows) {
            changed |= a.union_with(b);
        }
        changed
    }

    /// Reflexive-transitive closure.
    pub fn closure(&self) -> Relation {
        reflexive_transitive_closure(&self.rows)
    }

    /// Shortest path `from ⇝ to` along the relation's edges, endpoints included.
    pub fn path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        if from == to {
            return Some(vec![from]);
        }
        let n = self.size();
        let mut parent = vec![usize::MAX; n];
        parent[from] = from;
        let mut queue = std::collections::VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            for y in self.rows[x].iter() {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    if y == to {
                        let mut path = vec![to];
                        let mut cur = to;
                        while cur != from {
                            cur = parent[cur];
                            path.push(cur);
                        }
                        path.reverse();
                        return Some(path);
                    }
                    queue.push_back(y);
                }
            }
        }
        None
    }

    /// Strongly connected components: `(component id per node, component count)`.
    /// Ids are assigned in reverse topological order of the condensation.
    pub fn components(&self) -> (Vec<usize>, usize) {
        tarjan(&self.rows)
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.pairs()).finish()
    }
}

/// Iterative Tarjan; components are numbered sinks-first.
fn tarjan(adj: &[BitSet]) -> (Vec<usize>, usize) {
    const UNSEEN: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut comp_count = 0;
    let succ: Vec<Vec<usize>> = adj.iter().map(|r| r.iter().collect()).collect();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        // (node, next successor position)
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&(v, pos)) = call.last() {
            if pos < succ[v].len() {
                let w = succ[v][pos];
                if let Some(top) = call.last_mut() {
                    top.1 += 1;
                }
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp[w] = comp_count;
                        if w == v {
                            break;
                        }
                    }
                    comp_count += 1;
                }
            }
        }
    }
    (comp, comp_count)
}

/// Reflexive-transitive closure of the digraph whose adjacency rows are `adj`.
pub fn reflexive_transitive_closure(adj: &[BitSet]) -> Relation {
    let n = adj.len();
    let (comp, count) = tarjan(adj);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); count];
    for (v, &c) in comp.iter().enumerate() {
        members[c].push(v);
    }
    // Components come sinks-first, so every successor component is finished
    // before the component that points at it.
    let mut reach: Vec<BitSet> = Vec::with_capacity(count);
    for c in 0..count {
        let mut set = BitSet::new(n);
        for &v in &members[c] {
            set.insert(v);
        }
        for &v in &members[c] {
            for w in adj[v].iter() {
                let d = comp[w];
                if d != c {
                    set.union_with(&reach[d]);
                }
            }
        }
        reach.push(set);
    }
    Relation {
        rows: comp.iter().map(|&c| reach[c].clone()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn floyd(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
        let mut m = vec![vec![false; n]; n];
        for i in 0..n {
            m[i][i] = true;
        }
        for &(i, j) in edges {
            m[i][j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if m[i][k] && m[k][j] {
                        m[i][j] = true;
                    }
                }
            }
        }
        m
    }

    #[test]
    fn bitset_basics() {
        let mut b = BitSet::new(130);
        assert!(b.insert(0));
        assert!(b.insert(129));
        assert!(!b.insert(129));
        assert_eq!(b.iter().collect::<Vec<_>>(), vec![0, 129]);
        b.remove(0);
        assert_eq!(b.count(), 1);
    }

    #[test]
    fn closure_of_a_cycle_and_tail() {
        let r = Relation::from_pairs(4, [(0, 1), (1, 2), (2, 0), (2, 3)]);
        let c = r.closure();
        for i in 0..3 {
            for j in 0..4 {
                assert!(c.contains(i, j));
            }
        }
        assert!(!c.contains(3, 0));
        let (comp, count) = r.components();
        assert_eq!(count, 2);
        assert_eq!(comp[0], comp[1]);
        assert_ne!(comp[0], comp[3]);
    }

    #[test]
    fn path_is_shortest() {
        let r = Relation::from_pairs(4, [(0, 1), (1, 2), (2, 3), (0, 3)]);
        assert_eq!(r.path(0, 3), Some(vec![0, 3]));
        assert_eq!(r.path(3, 0), None);
        assert_eq!(r.path(2, 2), Some(vec![2]));
    }

    proptest::proptest! {
        #[test]
        fn closure_matches_floyd_warshall(n in 1usize..12, raw in proptest::collection::vec((0usize..12, 0usize..12), 0..40)) {
            let edges: Vec<_> = raw.into_iter().filter(|&(a, b)| a < n && b < n).collect();
            let c = Relation::from_pairs(n, edges.iter().copied()).closure();
            let oracle = floyd(n, &edges);
            for i in 0..n {
                for j in 0..n {
                    proptest::prop_assert_eq!(c.contains(i, j), oracle[i][j]);
                }
            }
            proptest::prop_assert_eq!(c.closure(), c);
        }
    }
}
