//! Pomonoids, subpomonoids and pomonoid morphisms.

use std::sync::Arc;

use crate::error::{Error, Result, Side, Violation};
use crate::poset::{map_flags, MapFlags, Poset};
use crate::relation::Relation;

/// A finite monoid with a partial order compatible with multiplication on both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pomonoid {
    poset: Poset,
    /// `table[s * n + t] = st`
    table: Vec<usize>,
    identity: usize,
}

/// Unvalidated pomonoid data, as read from a table.
#[derive(Clone, Debug)]
pub struct PomonoidCandidate {
    pub poset: Poset,
    pub table: Vec<usize>,
    /// When `None` the identity is searched for.
    pub identity: Option<usize>,
}

impl Pomonoid {
    /// Validates a candidate, reporting every violated axiom with a witness.
    pub fn validate(candidate: PomonoidCandidate) -> Result<Pomonoid> {
        let PomonoidCandidate {
            poset,
            table,
            identity,
        } = candidate;
        let n = poset.len();
        if n == 0 {
            return Err(Error::BadInput("a pomonoid needs at least one element".into()));
        }
        if table.len() != n * n || table.iter().any(|&v| v >= n) {
            return Err(Error::Invalid(vec![Violation::TableNotTotal {
                detail: format!("expected {} entries in 0..{n}", n * n),
            }]));
        }
        let mul = |a: usize, b: usize| table[a * n + b];
        let mut violations = Vec::new();
        let is_identity = |e: usize| (0..n).all(|x| mul(e, x) == x && mul(x, e) == x);
        let identity = match identity {
            Some(e) if e < n && is_identity(e) => Some(e),
            Some(_) => None,
            None => (0..n).find(|&e| is_identity(e)),
        };
        if identity.is_none() {
            violations.push(Violation::NoIdentity);
        }
        violations.extend(semigroup_violations(&poset, &table));
        match identity {
            Some(identity) if violations.is_empty() => Ok(Pomonoid {
                poset,
                table,
                identity,
            }),
            _ => Err(Error::Invalid(violations)),
        }
    }

    /// Assembles a pomonoid whose axioms the caller has already established.
    pub(crate) fn from_parts_unchecked(poset: Poset, table: Vec<usize>, identity: usize) -> Pomonoid {
        Pomonoid {
            poset,
            table,
            identity,
        }
    }

    /// The one-element pomonoid `{1}`.
    pub fn trivial() -> Pomonoid {
        Pomonoid {
            poset: Poset::antichain(vec!["1".into()]),
            table: vec![0],
            identity: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn mul(&self, s: usize, t: usize) -> usize {
        self.table[s * self.len() + t]
    }

    #[inline]
    pub fn leq(&self, s: usize, t: usize) -> bool {
        self.poset.leq(s, t)
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn name(&self, i: usize) -> &str {
        self.poset.name(i)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.poset.index_of(name)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    /// Same carrier and order, multiplication `s ∘ t = ts`.
    pub fn opposite(&self) -> Pomonoid {
        let n = self.len();
        let mut table = vec![0; n * n];
        for s in 0..n {
            for t in 0..n {
                table[s * n + t] = self.mul(t, s);
            }
        }
        Pomonoid {
            poset: self.poset.clone(),
            table,
            identity: self.identity,
        }
    }

    pub fn with_names(&self, names: Vec<String>) -> Pomonoid {
        Pomonoid {
            poset: self.poset.renamed(names),
            table: self.table.clone(),
            identity: self.identity,
        }
    }

    pub fn is_commutative(&self) -> bool {
        self.elements()
            .all(|s| self.elements().all(|t| self.mul(s, t) == self.mul(t, s)))
    }

    /// Re-labels the carrier by `perm` (old index `i` becomes `perm[i]`).
    pub fn permuted(&self, perm: &[usize]) -> Pomonoid {
        let n = self.len();
        let mut inv = vec![0; n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[perm[a] * n + perm[b]] = perm[self.mul(a, b)];
            }
        }
        let names = (0..n).map(|i| self.name(inv[i]).to_string()).collect();
        let leq = Relation::from_pairs(
            n,
            self.poset.relation().pairs().map(|(a, b)| (perm[a], perm[b])),
        );
        Pomonoid {
            poset: Poset::from_closed_unchecked(names, leq),
            table,
            identity: perm[self.identity],
        }
    }
}

/// Associativity and two-sided compatibility violations of a (po)semigroup table.
pub(crate) fn semigroup_violations(poset: &Poset, table: &[usize]) -> Vec<Violation> {
    let n = poset.len();
    let mul = |a: usize, b: usize| table[a * n + b];
    let name = |i: usize| poset.name(i).to_string();
    let mut out = Vec::new();
    for s in 0..n {
        for t in 0..n {
            for u in 0..n {
                if mul(mul(s, t), u) != mul(s, mul(t, u)) {
                    out.push(Violation::NotAssociative {
                        s: name(s),
                        t: name(t),
                        u: name(u),
                    });
                }
            }
        }
    }
    for (t, u) in poset.relation().pairs() {
        for s in 0..n {
            if !poset.leq(mul(s, t), mul(s, u)) {
                out.push(Violation::NotCompatible {
                    s: name(s),
                    t: name(t),
                    u: name(u),
                    side: Side::Left,
                });
            }
            if !poset.leq(mul(t, s), mul(u, s)) {
                out.push(Violation::NotCompatible {
                    s: name(s),
                    t: name(t),
                    u: name(u),
                    side: Side::Right,
                });
            }
        }
    }
    out
}

/// A posemigroup: a pomonoid without the identity requirement.
#[derive(Clone, Debug)]
pub struct Posemigroup {
    pub poset: Poset,
    pub table: Vec<usize>,
}

impl Posemigroup {
    pub fn validate(poset: Poset, table: Vec<usize>) -> Result<Posemigroup> {
        let n = poset.len();
        if n == 0 || table.len() != n * n || table.iter().any(|&v| v >= n) {
            return Err(Error::Invalid(vec![Violation::TableNotTotal {
                detail: format!("expected {} entries in 0..{n}", n * n),
            }]));
        }
        let v = semigroup_violations(&poset, &table);
        if v.is_empty() {
            Ok(Posemigroup { poset, table })
        } else {
            Err(Error::Invalid(v))
        }
    }
}

/// Adjoins a fresh identity `1`, incomparable to every old element, whether
/// or not the semigroup already had an identity. The new element gets the
/// last index; old elements keep theirs.
pub fn adjoin_identity(s: &Posemigroup) -> Pomonoid {
    let n = s.poset.len();
    let m = n + 1;
    let mut fresh = "1".to_string();
    while s.poset.index_of(&fresh).is_some() {
        fresh.push('\'');
    }
    let mut names = s.poset.names().to_vec();
    names.push(fresh);
    let mut table = vec![0; m * m];
    for a in 0..m {
        for b in 0..m {
            table[a * m + b] = if a == n {
                b
            } else if b == n {
                a
            } else {
                s.table[a * n + b]
            };
        }
    }
    let mut leq = Relation::identity(m);
    for (a, b) in s.poset.relation().pairs() {
        leq.insert(a, b);
    }
    Pomonoid {
        poset: Poset::from_closed_unchecked(names, leq),
        table,
        identity: n,
    }
}

/// A monotone monoid morphism between pomonoids.
#[derive(Clone, Debug)]
pub struct PomonoidMorphism {
    pub source: Arc<Pomonoid>,
    pub target: Arc<Pomonoid>,
    pub map: Vec<usize>,
    pub flags: MapFlags,
}

impl PomonoidMorphism {
    pub fn new(source: Arc<Pomonoid>, target: Arc<Pomonoid>, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.len() || map.iter().any(|&v| v >= target.len()) {
            return Err(Error::BadInput("morphism assignment is not total".into()));
        }
        if map[source.identity()] != target.identity() {
            return Err(Error::BadInput(format!(
                "identity {} is not sent to {}",
                source.name(source.identity()),
                target.name(target.identity())
            )));
        }
        for s in source.elements() {
            for t in source.elements() {
                if map[source.mul(s, t)] != target.mul(map[s], map[t]) {
                    return Err(Error::BadInput(format!(
                        "not multiplicative at ({}, {})",
                        source.name(s),
                        source.name(t)
                    )));
                }
            }
        }
        let flags = map_flags(&map, source.poset(), target.poset());
        if !flags.monotone {
            return Err(Error::BadInput("morphism is not monotone".into()));
        }
        Ok(PomonoidMorphism {
            source,
            target,
            map,
            flags,
        })
    }

    pub fn identity_on(s: Arc<Pomonoid>) -> Self {
        let map = s.elements().collect();
        PomonoidMorphism {
            source: s.clone(),
            target: s,
            map,
            flags: MapFlags {
                monotone: true,
                order_embedding: true,
                convex: true,
                injective: true,
                surjective: true,
            },
        }
    }

    pub fn apply(&self, u: usize) -> usize {
        self.map[u]
    }

    /// Preimage of a target element, when it lies in the image of an injective map.
    pub fn preimage(&self, s: usize) -> Option<usize> {
        self.map.iter().position(|&v| v == s)
    }

    pub fn image(&self) -> Vec<bool> {
        let mut img = vec![false; self.target.len()];
        for &v in &self.map {
            img[v] = true;
        }
        img
    }

    pub fn opposite(&self) -> PomonoidMorphism {
        PomonoidMorphism {
            source: Arc::new(self.source.opposite()),
            target: Arc::new(self.target.opposite()),
            map: self.map.clone(),
            flags: self.flags,
        }
    }
}

/// A subset of a pomonoid containing the identity and closed under
/// multiplication, with the inherited order.
#[derive(Clone, Debug)]
pub struct SubPomonoid {
    ambient: Arc<Pomonoid>,
    members: Vec<usize>,
    pomonoid: Arc<Pomonoid>,
    inclusion: PomonoidMorphism,
}

impl SubPomonoid {
    pub fn new(ambient: Arc<Pomonoid>, members: &[usize]) -> Result<Self> {
        let mut members = members.to_vec();
        members.sort_unstable();
        members.dedup();
        if members.iter().any(|&m| m >= ambient.len()) {
            return Err(Error::BadInput("member index out of range".into()));
        }
        if !members.contains(&ambient.identity()) {
            return Err(Error::BadInput("subpomonoid must contain the identity".into()));
        }
        let local = |s: usize| members.iter().position(|&m| m == s);
        let k = members.len();
        let mut table = vec![0; k * k];
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate() {
                let p = ambient.mul(a, b);
                table[i * k + j] = local(p).ok_or_else(|| {
                    Error::BadInput(format!(
                        "not closed: {}·{} = {}",
                        ambient.name(a),
                        ambient.name(b),
                        ambient.name(p)
                    ))
                })?;
            }
        }
        let identity = local(ambient.identity()).expect("identity is a member");
        let pomonoid = Arc::new(Pomonoid {
            poset: ambient.poset().restrict(&members),
            table,
            identity,
        });
        let inclusion = PomonoidMorphism::new(pomonoid.clone(), ambient.clone(), members.clone())?;
        Ok(SubPomonoid {
            ambient,
            members,
            pomonoid,
            inclusion,
        })
    }

    pub fn whole(ambient: Arc<Pomonoid>) -> Self {
        let all: Vec<usize> = ambient.elements().collect();
        SubPomonoid::new(ambient, &all).expect("the whole pomonoid is a subpomonoid")
    }

    pub fn ambient(&self) -> &Arc<Pomonoid> {
        &self.ambient
    }

    /// Ambient indices of the members, ascending.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, s: usize) -> bool {
        self.members.binary_search(&s).is_ok()
    }

    /// The subpomonoid as a pomonoid in its own right (indices local to it).
    pub fn as_pomonoid(&self) -> &Arc<Pomonoid> {
        &self.pomonoid
    }

    pub fn inclusion(&self) -> &PomonoidMorphism {
        &self.inclusion
    }

    /// The same subset of the opposite pomonoid.
    pub fn opposite(&self) -> SubPomonoid {
        SubPomonoid::new(Arc::new(self.ambient.opposite()), &self.members)
            .expect("opposite of a subpomonoid is a subpomonoid")
    }
}
