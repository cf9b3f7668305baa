//! Exhaustive enumeration of small pomonoids, S-posets, subpomonoids and
//! maps, plus seeded random S-posets. These feed the property suites.
//!
//! Pomonoids always have their identity at index 0. Results are labelled
//! structures; isomorphic copies are kept unless a `*_up_to_iso` variant is
//! used.

use std::collections::HashSet;
use std::sync::Arc;

use rand::Rng;

use crate::congruence::nu_congruence;
use crate::constructions::coproduct;
use crate::error::{Error, Result};
use crate::pomonoid::{Pomonoid, PomonoidMorphism, SubPomonoid};
use crate::poset::{map_flags, Poset};
use crate::relation::Relation;
use crate::sposet::{is_equivariant, Action, SPoset};

/// Largest carriers the enumerators accept.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub pomonoids: usize,
    pub sposets: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { pomonoids: 4, sposets: 3 }
    }
}

fn check_cap(requested: usize, max: usize) -> Result<()> {
    if requested > max {
        Err(Error::CapExceeded { requested, max })
    } else {
        Ok(())
    }
}

/// Every partial order on `{0, …, n-1}`, as row bitmasks.
///
/// Built one element at a time: the new element is placed above a down-set
/// and below an up-set of an order on the others, with everything in the
/// down-set below everything in the up-set.
pub fn poset_masks(n: usize) -> Vec<Vec<u32>> {
    assert!(n <= 16, "poset enumeration is for tiny carriers");
    let mut current: Vec<Vec<u32>> = vec![Vec::new()];
    for k in 0..n {
        let mut next = Vec::new();
        for rows in &current {
            let below_of = |mask: u32| (0..k).filter(move |i| mask >> i & 1 == 1);
            let down_closed = |mask: u32| below_of(mask).all(|i| (0..k).all(|j| rows[j] >> i & 1 == 0 || mask >> j & 1 == 1));
            let up_closed = |mask: u32| below_of(mask).all(|i| rows[i] & !mask == 0);
            let downs: Vec<u32> = (0..1u32 << k).filter(|&m| down_closed(m)).collect();
            let ups: Vec<u32> = (0..1u32 << k).filter(|&m| up_closed(m)).collect();
            for &d in &downs {
                for &u in &ups {
                    if d & u != 0 || below_of(d).any(|i| rows[i] & u != u) {
                        continue;
                    }
                    let mut new_rows: Vec<u32> = rows.clone();
                    for i in below_of(d) {
                        new_rows[i] |= 1 << k;
                    }
                    new_rows.push(u | 1 << k);
                    next.push(new_rows);
                }
            }
        }
        current = next;
    }
    current
}

fn mask_relation(rows: &[u32]) -> Relation {
    let n = rows.len();
    Relation::from_pairs(n, (0..n).flat_map(|i| (0..n).filter(move |&j| rows[i] >> j & 1 == 1).map(move |j| (i, j))))
}

/// Multiplication tables on `{0, …, n-1}` with identity 0, by backtracking
/// with associativity pruning.
pub fn monoid_tables(n: usize, commutative: bool, cancellative: bool) -> Vec<Vec<usize>> {
    if n == 0 {
        return Vec::new();
    }
    const FREE: usize = usize::MAX;
    let mut table = vec![FREE; n * n];
    for x in 0..n {
        table[x] = x;
        table[x * n] = x;
    }
    let cells: Vec<(usize, usize)> = (1..n)
        .flat_map(|s| (1..n).map(move |t| (s, t)))
        .filter(|&(s, t)| !commutative || s <= t)
        .collect();
    let mut out = Vec::new();
    fill_table(&mut table, n, &cells, 0, commutative, cancellative, &mut out);
    out
}

fn fill_table(
    table: &mut Vec<usize>,
    n: usize,
    cells: &[(usize, usize)],
    k: usize,
    commutative: bool,
    cancellative: bool,
    out: &mut Vec<Vec<usize>>,
) {
    if k == cells.len() {
        out.push(table.clone());
        return;
    }
    let (s, t) = cells[k];
    for v in 0..n {
        if cancellative && (0..n).any(|j| (j != t && table[s * n + j] == v) || (j != s && table[j * n + t] == v)) {
            continue;
        }
        table[s * n + t] = v;
        table[t * n + s] = if commutative { v } else { table[t * n + s] };
        if partial_associative(table, n) {
            fill_table(table, n, cells, k + 1, commutative, cancellative, out);
        }
        table[s * n + t] = usize::MAX;
        if commutative {
            table[t * n + s] = usize::MAX;
        }
    }
}

fn partial_associative(table: &[usize], n: usize) -> bool {
    const FREE: usize = usize::MAX;
    for x in 0..n {
        for y in 0..n {
            let xy = table[x * n + y];
            if xy == FREE {
                continue;
            }
            for z in 0..n {
                let yz = table[y * n + z];
                if yz == FREE {
                    continue;
                }
                let (l, r) = (table[xy * n + z], table[x * n + yz]);
                if l != FREE && r != FREE && l != r {
                    return false;
                }
            }
        }
    }
    true
}

fn compatible(table: &[usize], n: usize, rows: &[u32]) -> bool {
    for t in 0..n {
        for u in (0..n).filter(|&u| u != t && rows[t] >> u & 1 == 1) {
            for s in 0..n {
                let (a, b) = (table[s * n + t], table[s * n + u]);
                if rows[a] >> b & 1 == 0 {
                    return false;
                }
                let (a, b) = (table[t * n + s], table[u * n + s]);
                if rows[a] >> b & 1 == 0 {
                    return false;
                }
            }
        }
    }
    true
}

fn element_names(n: usize) -> Vec<String> {
    (0..n).map(|i| if i == 0 { "1".to_string() } else { format!("s{i}") }).collect()
}

fn pomonoids_from_tables(n: usize, tables: Vec<Vec<usize>>) -> Vec<Pomonoid> {
    let orders = poset_masks(n);
    let names = element_names(n);
    let mut out = Vec::new();
    for table in tables {
        for rows in &orders {
            if compatible(&table, n, rows) {
                let poset = Poset::from_closed_unchecked(names.clone(), mask_relation(rows));
                out.push(Pomonoid::from_parts_unchecked(poset, table.clone(), 0));
            }
        }
    }
    out
}

/// All pomonoids on exactly `n` labelled elements with identity 0.
pub fn pomonoids(n: usize, limits: &Limits) -> Result<Vec<Pomonoid>> {
    check_cap(n, limits.pomonoids)?;
    Ok(pomonoids_from_tables(n, monoid_tables(n, false, false)))
}

/// One pomonoid per isomorphism class on `n` elements.
pub fn pomonoids_up_to_iso(n: usize, limits: &Limits) -> Result<Vec<Pomonoid>> {
    Ok(dedup_isomorphic(pomonoids(n, limits)?))
}

/// All pomonoids with `1 ≤ |S| ≤ n`, one per isomorphism class.
pub fn pomonoids_up_to(n: usize, limits: &Limits) -> Result<Vec<Arc<Pomonoid>>> {
    check_cap(n, limits.pomonoids)?;
    let mut out = Vec::new();
    for k in 1..=n {
        out.extend(pomonoids_up_to_iso(k, limits)?.into_iter().map(Arc::new));
    }
    Ok(out)
}

/// Pomonoids whose multiplication is commutative and cancellative; on a
/// finite carrier these are exactly the abelian groups with a compatible
/// order.
pub fn commutative_cancellative_pomonoids(n: usize) -> Vec<Pomonoid> {
    let names = element_names(n);
    let mut out = Vec::new();
    for table in monoid_tables(n, true, true) {
        for cone in positive_cones(&table, n) {
            // s ≤ t iff s⁻¹t lies in the cone
            let inv: Vec<usize> = (0..n).map(|s| (0..n).find(|&t| table[s * n + t] == 0).expect("group")).collect();
            let leq = Relation::from_pairs(
                n,
                (0..n).flat_map(|s| (0..n).map(move |t| (s, t))).filter(|&(s, t)| cone[table[inv[s] * n + t]]),
            );
            let poset = Poset::from_closed_unchecked(names.clone(), leq);
            out.push(Pomonoid::from_parts_unchecked(poset, table.clone(), 0));
        }
    }
    out
}

/// Submonoids `P` of a group with `P ∩ P⁻¹ = {1}`; each is the set of
/// elements above the identity in exactly one compatible order.
fn positive_cones(table: &[usize], n: usize) -> Vec<Vec<bool>> {
    let inv: Vec<usize> = (0..n).map(|s| (0..n).find(|&t| table[s * n + t] == 0).expect("group")).collect();
    let mut out = Vec::new();
    for mask in 0..1u32 << (n - 1) {
        let member = |s: usize| s == 0 || mask >> (s - 1) & 1 == 1;
        let closed = (0..n).all(|s| (0..n).all(|t| !(member(s) && member(t)) || member(table[s * n + t])));
        let pointed = (1..n).all(|s| !(member(s) && member(inv[s])));
        if closed && pointed {
            out.push((0..n).map(member).collect());
        }
    }
    out
}

/// Keeps the first pomonoid of each isomorphism class (identity fixed).
pub fn dedup_isomorphic(items: Vec<Pomonoid>) -> Vec<Pomonoid> {
    let mut seen = HashSet::new();
    items.into_iter().filter(|s| seen.insert(canonical_form(s))).collect()
}

/// Lexicographically least encoding of `(table, order)` over relabellings
/// that fix the identity.
pub fn canonical_form(s: &Pomonoid) -> Vec<u8> {
    let n = s.len();
    let id = s.identity();
    let others: Vec<usize> = (0..n).filter(|&x| x != id).collect();
    let mut best: Option<Vec<u8>> = None;
    let mut perm: Vec<usize> = (0..others.len()).collect();
    loop {
        // new label of old element
        let mut label = vec![0usize; n];
        label[id] = 0;
        for (k, &o) in others.iter().enumerate() {
            label[o] = perm[k] + 1;
        }
        let mut inv = vec![0usize; n];
        for (old, &new) in label.iter().enumerate() {
            inv[new] = old;
        }
        let mut code = Vec::with_capacity(2 * n * n);
        for a in 0..n {
            for b in 0..n {
                code.push(label[s.mul(inv[a], inv[b])] as u8);
            }
        }
        for a in 0..n {
            for b in 0..n {
                code.push(s.leq(inv[a], inv[b]) as u8);
            }
        }
        if best.as_ref().is_none_or(|b| code < *b) {
            best = Some(code);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap_or_default()
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Keeps one S-poset from each isomorphism class under relabelling of
/// points. All inputs must share their actors.
pub fn dedup_isomorphic_sposets(items: Vec<SPoset>) -> Vec<SPoset> {
    let mut seen = HashSet::new();
    items.into_iter().filter(|a| seen.insert(sposet_canonical_form(a))).collect()
}

fn sposet_canonical_form(a: &SPoset) -> Vec<usize> {
    let n = a.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<usize>> = None;
    loop {
        let mut inv = vec![0; n];
        for (x, &y) in perm.iter().enumerate() {
            inv[y] = x;
        }
        let mut code = vec![n];
        for y in 0..n {
            for y2 in 0..n {
                code.push(usize::from(a.leq(inv[y], inv[y2])));
            }
        }
        for act in [a.left(), a.right()].into_iter().flatten() {
            let m = act.actor().len();
            for y in 0..n {
                code.extend((0..m).map(|u| perm[act.apply(inv[y], u)]));
            }
        }
        if best.as_ref().is_none_or(|b| code < *b) {
            best = Some(code);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap_or_default()
}

/// Right act tables of `s` on `n` points: `table[x·|S| + u] = x·u`.
fn act_tables(s: &Pomonoid, n: usize) -> Vec<Vec<usize>> {
    let m = s.len();
    let one = s.identity();
    let mut table = vec![usize::MAX; n * m];
    for x in 0..n {
        table[x * m + one] = x;
    }
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|x| (0..m).map(move |u| (x, u))).filter(|&(_, u)| u != one).collect();
    let mut out = Vec::new();
    fill_act(s, n, &mut table, &cells, 0, &mut out);
    out
}

fn fill_act(s: &Pomonoid, n: usize, table: &mut Vec<usize>, cells: &[(usize, usize)], k: usize, out: &mut Vec<Vec<usize>>) {
    let m = s.len();
    if k == cells.len() {
        out.push(table.clone());
        return;
    }
    let (x, u) = cells[k];
    'value: for v in 0..n {
        table[x * m + u] = v;
        // (x·u)·w = x·(uw) wherever both sides are known
        for y in 0..n {
            for a in 0..m {
                let ya = table[y * m + a];
                if ya == usize::MAX {
                    continue;
                }
                for b in 0..m {
                    let l = table[ya * m + b];
                    let r = table[y * m + s.mul(a, b)];
                    if l != usize::MAX && r != usize::MAX && l != r {
                        continue 'value;
                    }
                }
            }
        }
        fill_act(s, n, table, cells, k + 1, out);
    }
    table[x * m + u] = usize::MAX;
}

fn act_orders(n: usize, tables: &[&[usize]], orders: &[Vec<u32>]) -> Vec<Relation> {
    orders
        .iter()
        .filter(|rows| {
            tables.iter().all(|table| {
                let m = table.len() / n;
                let act = |x: usize, u: usize| table[x * m + u];
                (0..n).all(|a| {
                    (0..n).filter(|&b| rows[a] >> b & 1 == 1).all(|b| (0..m).all(|u| rows[act(a, u)] >> act(b, u) & 1 == 1))
                })
            })
        })
        .map(|rows| mask_relation(rows))
        .collect()
}

fn act_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

fn scalar_monotone(s: &Pomonoid, table: &[usize], rows: &Relation, n: usize) -> bool {
    let m = s.len();
    s.poset()
        .relation()
        .pairs()
        .all(|(u, v)| (0..n).all(|x| rows.contains(table[x * m + u], table[x * m + v])))
}

/// All right S-posets on exactly `n` labelled points.
pub fn right_sposets(s: &Arc<Pomonoid>, n: usize, limits: &Limits) -> Result<Vec<SPoset>> {
    check_cap(n, limits.sposets)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let orders = poset_masks(n);
    let mut out = Vec::new();
    for table in act_tables(s, n) {
        for leq in act_orders(n, &[&table], &orders) {
            if scalar_monotone(s, &table, &leq, n) {
                let poset = Poset::from_closed_unchecked(act_names(n), leq);
                out.push(SPoset::from_parts_unchecked(poset, None, Some(Action::new(s.clone(), table.clone()))));
            }
        }
    }
    Ok(out)
}

/// Right S-posets with `1 ≤ |A| ≤ n`.
pub fn right_sposets_up_to(s: &Arc<Pomonoid>, n: usize, limits: &Limits) -> Result<Vec<SPoset>> {
    check_cap(n, limits.sposets)?;
    let mut out = Vec::new();
    for k in 1..=n {
        out.extend(right_sposets(s, k, limits)?);
    }
    Ok(out)
}

/// All left S-posets on exactly `n` points (right `S^op`-posets, read on the left).
pub fn left_sposets(s: &Arc<Pomonoid>, n: usize, limits: &Limits) -> Result<Vec<SPoset>> {
    let op = Arc::new(s.opposite());
    Ok(right_sposets(&op, n, limits)?
        .into_iter()
        .map(|a| {
            let table = a.right().expect("right action").table().to_vec();
            SPoset::from_parts_unchecked(a.poset().clone(), Some(Action::new(s.clone(), table)), None)
        })
        .collect())
}

pub fn left_sposets_up_to(s: &Arc<Pomonoid>, n: usize, limits: &Limits) -> Result<Vec<SPoset>> {
    check_cap(n, limits.sposets)?;
    let mut out = Vec::new();
    for k in 1..=n {
        out.extend(left_sposets(s, k, limits)?);
    }
    Ok(out)
}

/// All `(S, T)`-posets on exactly `n` points.
pub fn bi_sposets(s: &Arc<Pomonoid>, t: &Arc<Pomonoid>, n: usize, limits: &Limits) -> Result<Vec<SPoset>> {
    check_cap(n, limits.sposets)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let (ms, mt) = (s.len(), t.len());
    let sop = s.opposite();
    let lefts = act_tables(&sop, n);
    let rights = act_tables(t, n);
    let orders = poset_masks(n);
    let mut out = Vec::new();
    for l in &lefts {
        for r in &rights {
            let commute = (0..n).all(|x| (0..ms).all(|a| (0..mt).all(|b| r[l[x * ms + a] * mt + b] == l[r[x * mt + b] * ms + a])));
            if !commute {
                continue;
            }
            for leq in act_orders(n, &[l, r], &orders) {
                if scalar_monotone(&sop, l, &leq, n) && scalar_monotone(t, r, &leq, n) {
                    let poset = Poset::from_closed_unchecked(act_names(n), leq);
                    out.push(SPoset::from_parts_unchecked(
                        poset,
                        Some(Action::new(s.clone(), l.clone())),
                        Some(Action::new(t.clone(), r.clone())),
                    ));
                }
            }
        }
    }
    Ok(out)
}

/// Every subpomonoid of `s`.
pub fn submonoids(s: &Arc<Pomonoid>) -> Vec<SubPomonoid> {
    let n = s.len();
    let id = s.identity();
    let others: Vec<usize> = (0..n).filter(|&x| x != id).collect();
    let mut out = Vec::new();
    for mask in 0..1u64 << others.len() {
        let mut members = vec![id];
        members.extend(others.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &x)| x));
        let closed = members.iter().all(|&a| members.iter().all(|&b| members.contains(&s.mul(a, b))));
        if closed {
            out.push(SubPomonoid::new(s.clone(), &members).expect("closed subset"));
        }
    }
    out
}

/// Every monotone equivariant map `X → Y` (same actors on the same sides).
pub fn sposet_maps(x: &SPoset, y: &SPoset) -> Vec<Vec<usize>> {
    let n = x.len();
    let mut out = Vec::new();
    let mut f = vec![usize::MAX; n];
    extend_map(x, y, &mut f, 0, &mut out);
    out
}

fn extend_map(x: &SPoset, y: &SPoset, f: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == x.len() {
        if is_equivariant(f, x, y) {
            out.push(f.clone());
        }
        return;
    }
    'value: for v in 0..y.len() {
        f[k] = v;
        for j in 0..k {
            if (x.leq(j, k) && !y.leq(f[j], v)) || (x.leq(k, j) && !y.leq(v, f[j])) {
                continue 'value;
            }
        }
        // equivariance among assigned points
        for act in [x.right().map(|a| (a, y.right())), x.left().map(|a| (a, y.left()))].into_iter().flatten() {
            let (ax, ay) = act;
            let Some(ay) = ay else { continue 'value };
            for j in 0..=k {
                for u in ax.actor().elements() {
                    let img = ax.apply(j, u);
                    if img <= k && f[img] != ay.apply(f[j], u) {
                        continue 'value;
                    }
                }
            }
        }
        extend_map(x, y, f, k + 1, out);
    }
    f[k] = usize::MAX;
}

/// Every monotone monoid morphism `U → S`.
pub fn pomonoid_morphisms(u: &Arc<Pomonoid>, s: &Arc<Pomonoid>) -> Vec<PomonoidMorphism> {
    let n = u.len();
    let mut out = Vec::new();
    let mut assign = vec![0usize; n];
    let total = s.len().pow(n as u32);
    for code in 0..total {
        let mut c = code;
        for a in assign.iter_mut() {
            *a = c % s.len();
            c /= s.len();
        }
        if assign[u.identity()] != s.identity() {
            continue;
        }
        let mult = u.elements().all(|a| u.elements().all(|b| assign[u.mul(a, b)] == s.mul(assign[a], assign[b])));
        if mult && map_flags(&assign, u.poset(), s.poset()).monotone {
            out.push(PomonoidMorphism::new(u.clone(), s.clone(), assign.clone()).expect("checked morphism"));
        }
    }
    out
}

/// A random right S-poset with at most `max_size` points: a quotient of one
/// or two copies of `S` by `ν` of a few random pairs, cut down to the subact
/// generated by one point when it is still too large.
pub fn random_right_sposet<R: Rng>(s: &Arc<Pomonoid>, max_size: usize, rng: &mut R) -> SPoset {
    assert!(max_size >= s.len().min(max_size).max(1));
    let reg = SPoset::regular_right(s);
    let base = if rng.gen_bool(0.5) {
        reg.clone()
    } else {
        coproduct(&reg, &reg).expect("same actor").object
    };
    let n = base.len();
    let k = rng.gen_range(0..=3);
    let pairs: Vec<(usize, usize)> = (0..k).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
    let q = nu_congruence(&base, &pairs).expect("pairs in range").into_sposet();
    if q.len() <= max_size {
        return q;
    }
    let x = rng.gen_range(0..q.len());
    let out = generated_subact(&q, x);
    if out.len() <= max_size {
        out
    } else {
        SPoset::one_point(None, Some(s))
    }
}

/// The subact `x·S` with the induced order.
pub fn generated_subact(a: &SPoset, x: usize) -> SPoset {
    let act = a.right().expect("right action");
    let s = act.actor();
    let mut members: Vec<usize> = s.elements().map(|u| act.apply(x, u)).collect();
    members.sort_unstable();
    members.dedup();
    let local = |v: usize| members.iter().position(|&m| m == v).expect("closed");
    let table = members.iter().flat_map(|&y| s.elements().map(move |u| (y, u))).map(|(y, u)| local(act.apply(y, u))).collect();
    SPoset::from_parts_unchecked(a.poset().restrict(&members), None, Some(Action::new(s.clone(), table)))
}
