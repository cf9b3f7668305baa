//! S-posets: posets with monotone actions of a pomonoid on the right, the
//! left, or both sides, and the maps between them.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result, Violation};
use crate::pomonoid::{Pomonoid, PomonoidMorphism};
use crate::poset::{map_flags, MapFlags, Poset};

/// One action table; `table[x * |actor| + s]` is `x·s` (right) or `s·x` (left).
#[derive(Clone, Debug)]
pub struct Action {
    actor: Arc<Pomonoid>,
    table: Vec<usize>,
}

impl Action {
    pub fn new(actor: Arc<Pomonoid>, table: Vec<usize>) -> Self {
        Action { actor, table }
    }

    pub fn actor(&self) -> &Arc<Pomonoid> {
        &self.actor
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, x: usize, s: usize) -> usize {
        self.table[x * self.actor.len() + s]
    }
}

impl PartialEq for Action {
    fn eq(&self, other: &Self) -> bool {
        same_actor(&self.actor, &other.actor) && self.table == other.table
    }
}

pub fn same_actor(a: &Arc<Pomonoid>, b: &Arc<Pomonoid>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ActSide {
    Right,
    Left,
    Bi,
}

/// A nonempty poset with a right action, a left action, or both.
#[derive(Clone, Debug, PartialEq)]
pub struct SPoset {
    poset: Poset,
    left: Option<Action>,
    right: Option<Action>,
}

/// Unvalidated action data.
#[derive(Clone, Debug)]
pub struct SPosetCandidate {
    pub poset: Poset,
    pub left: Option<(Arc<Pomonoid>, Vec<usize>)>,
    pub right: Option<(Arc<Pomonoid>, Vec<usize>)>,
}

impl SPoset {
    /// Validates unit, associativity, monotonicity in both variables and, for
    /// two-sided acts, `(sa)t = s(at)`.
    pub fn validate(candidate: SPosetCandidate) -> Result<SPoset> {
        let SPosetCandidate { poset, left, right } = candidate;
        let n = poset.len();
        if n == 0 {
            return Err(Error::BadInput("S-posets are nonempty".into()));
        }
        if left.is_none() && right.is_none() {
            return Err(Error::BadInput("an S-poset needs at least one action".into()));
        }
        let mut violations = Vec::new();
        for (side_is_right, data) in [(false, &left), (true, &right)] {
            let Some((actor, table)) = data else { continue };
            let m = actor.len();
            if table.len() != n * m {
                violations.push(Violation::TableNotTotal {
                    detail: format!("action table needs {} entries", n * m),
                });
                continue;
            }
            if let Some(pos) = table.iter().position(|&v| v >= n) {
                violations.push(Violation::ActionNotClosed {
                    element: poset.name(pos / m).to_string(),
                    scalar: actor.name(pos % m).to_string(),
                    value: format!("#{}", table[pos]),
                });
                continue;
            }
            violations.extend(action_violations(&poset, actor, table, side_is_right));
        }
        if violations.is_empty() {
            if let (Some((l, lt)), Some((r, rt))) = (&left, &right) {
                let (lm, rm) = (l.len(), r.len());
                'outer: for s in 0..lm {
                    for x in 0..n {
                        for t in 0..rm {
                            if rt[lt[x * lm + s] * rm + t] != lt[rt[x * rm + t] * lm + s] {
                                violations.push(Violation::ActionsDoNotCommute {
                                    left: l.name(s).into(),
                                    element: poset.name(x).into(),
                                    right: r.name(t).into(),
                                });
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
        if !violations.is_empty() {
            return Err(Error::Invalid(violations));
        }
        Ok(SPoset {
            poset,
            left: left.map(|(a, t)| Action::new(a, t)),
            right: right.map(|(a, t)| Action::new(a, t)),
        })
    }

    pub(crate) fn from_parts_unchecked(poset: Poset, left: Option<Action>, right: Option<Action>) -> SPoset {
        SPoset { poset, left, right }
    }

    /// `S` acting on itself by right multiplication.
    pub fn regular_right(s: &Arc<Pomonoid>) -> SPoset {
        SPoset {
            poset: s.poset().clone(),
            left: None,
            right: Some(Action::new(s.clone(), s.table().to_vec())),
        }
    }

    /// `S` acting on itself by left multiplication.
    pub fn regular_left(s: &Arc<Pomonoid>) -> SPoset {
        let n = s.len();
        let mut table = vec![0; n * n];
        for x in 0..n {
            for t in 0..n {
                table[x * n + t] = s.mul(t, x);
            }
        }
        SPoset {
            poset: s.poset().clone(),
            left: Some(Action::new(s.clone(), table)),
            right: None,
        }
    }

    /// `S` as an `(S, S)`-poset.
    pub fn regular_bi(s: &Arc<Pomonoid>) -> SPoset {
        let mut out = SPoset::regular_right(s);
        out.left = SPoset::regular_left(s).left;
        out
    }

    /// `S` as a `(U, S)`-poset, `U` acting on the left through `phi`.
    pub fn bi_over(phi: &PomonoidMorphism) -> SPoset {
        let s = &phi.target;
        let m = phi.source.len();
        let n = s.len();
        let mut table = vec![0; n * m];
        for x in 0..n {
            for u in 0..m {
                table[x * m + u] = s.mul(phi.apply(u), x);
            }
        }
        SPoset {
            poset: s.poset().clone(),
            left: Some(Action::new(phi.source.clone(), table)),
            right: Some(Action::new(s.clone(), s.table().to_vec())),
        }
    }

    /// The one-point act with the requested actions.
    pub fn one_point(left: Option<&Arc<Pomonoid>>, right: Option<&Arc<Pomonoid>>) -> SPoset {
        SPoset {
            poset: Poset::antichain(vec!["*".into()]),
            left: left.map(|a| Action::new(a.clone(), vec![0; a.len()])),
            right: right.map(|a| Action::new(a.clone(), vec![0; a.len()])),
        }
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.poset.leq(a, b)
    }

    pub fn name(&self, i: usize) -> &str {
        self.poset.name(i)
    }

    pub fn side(&self) -> ActSide {
        match (&self.left, &self.right) {
            (Some(_), Some(_)) => ActSide::Bi,
            (Some(_), None) => ActSide::Left,
            _ => ActSide::Right,
        }
    }

    pub fn left(&self) -> Option<&Action> {
        self.left.as_ref()
    }

    pub fn right(&self) -> Option<&Action> {
        self.right.as_ref()
    }

    pub fn right_actor(&self) -> Option<&Arc<Pomonoid>> {
        self.right.as_ref().map(Action::actor)
    }

    pub fn left_actor(&self) -> Option<&Arc<Pomonoid>> {
        self.left.as_ref().map(Action::actor)
    }

    /// `x·s`; panics when there is no right action.
    #[inline]
    pub fn act_right(&self, x: usize, s: usize) -> usize {
        self.right.as_ref().expect("right action").apply(x, s)
    }

    /// `s·x`; panics when there is no left action.
    #[inline]
    pub fn act_left(&self, s: usize, x: usize) -> usize {
        self.left.as_ref().expect("left action").apply(x, s)
    }

    pub fn require_right(&self, what: &str) -> Result<&Arc<Pomonoid>> {
        self.right_actor()
            .ok_or_else(|| Error::ActorMismatch(format!("{what} needs a right action")))
    }

    pub fn require_left(&self, what: &str) -> Result<&Arc<Pomonoid>> {
        self.left_actor()
            .ok_or_else(|| Error::ActorMismatch(format!("{what} needs a left action")))
    }

    /// Forgets the left action.
    pub fn right_part(&self) -> SPoset {
        SPoset {
            poset: self.poset.clone(),
            left: None,
            right: self.right.clone(),
        }
    }

    /// Forgets the right action.
    pub fn left_part(&self) -> SPoset {
        SPoset {
            poset: self.poset.clone(),
            left: self.left.clone(),
            right: None,
        }
    }

    /// Restriction of scalars on the right along `phi: U → S`.
    pub fn restrict_right(&self, phi: &PomonoidMorphism) -> Result<SPoset> {
        let act = self.right.as_ref().ok_or_else(|| Error::ActorMismatch("no right action to restrict".into()))?;
        if !same_actor(act.actor(), &phi.target) {
            return Err(Error::ActorMismatch("restriction target is not the right actor".into()));
        }
        let m = phi.source.len();
        let table = (0..self.len())
            .flat_map(|x| (0..m).map(move |u| (x, u)))
            .map(|(x, u)| act.apply(x, phi.apply(u)))
            .collect();
        Ok(SPoset {
            poset: self.poset.clone(),
            left: self.left.clone(),
            right: Some(Action::new(phi.source.clone(), table)),
        })
    }

    /// Restriction of scalars on the left along `phi: U → S`.
    pub fn restrict_left(&self, phi: &PomonoidMorphism) -> Result<SPoset> {
        let act = self.left.as_ref().ok_or_else(|| Error::ActorMismatch("no left action to restrict".into()))?;
        if !same_actor(act.actor(), &phi.target) {
            return Err(Error::ActorMismatch("restriction target is not the left actor".into()));
        }
        let m = phi.source.len();
        let table = (0..self.len())
            .flat_map(|x| (0..m).map(move |u| (x, u)))
            .map(|(x, u)| act.apply(x, phi.apply(u)))
            .collect();
        Ok(SPoset {
            poset: self.poset.clone(),
            left: Some(Action::new(phi.source.clone(), table)),
            right: self.right.clone(),
        })
    }

    /// Replaces the left action without revalidating.
    pub fn with_left(&self, left: Option<Action>) -> SPoset {
        SPoset {
            poset: self.poset.clone(),
            left,
            right: self.right.clone(),
        }
    }

    /// Replaces the right action without revalidating.
    pub fn with_right(&self, right: Option<Action>) -> SPoset {
        SPoset {
            poset: self.poset.clone(),
            left: self.left.clone(),
            right,
        }
    }

    /// A left `S`-poset seen as a right `S^op`-poset and vice versa.
    pub fn mirrored(&self) -> SPoset {
        let flip = |a: &Action| Action::new(Arc::new(a.actor.opposite()), a.table.clone());
        SPoset {
            poset: self.poset.clone(),
            left: self.right.as_ref().map(flip),
            right: self.left.as_ref().map(flip),
        }
    }

    pub fn renamed(&self, names: Vec<String>) -> SPoset {
        SPoset {
            poset: self.poset.renamed(names),
            left: self.left.clone(),
            right: self.right.clone(),
        }
    }
}

fn action_violations(poset: &Poset, actor: &Pomonoid, table: &[usize], right: bool) -> Vec<Violation> {
    let n = poset.len();
    let m = actor.len();
    let act = |x: usize, s: usize| table[x * m + s];
    // composite action by `s` then `t`, in the side's own order
    let product = |s: usize, t: usize| if right { actor.mul(s, t) } else { actor.mul(t, s) };
    let name = |i: usize| poset.name(i).to_string();
    let sname = |i: usize| actor.name(i).to_string();
    let mut out = Vec::new();
    for x in 0..n {
        if act(x, actor.identity()) != x {
            out.push(Violation::ActionNotUnital { element: name(x) });
        }
        for s in 0..m {
            for t in 0..m {
                // right: (xs)t = x(st); left: t(sx) = (ts)x
                if act(act(x, s), t) != act(x, product(s, t)) {
                    out.push(Violation::ActionNotAssociative {
                        element: name(x),
                        s: sname(s),
                        t: sname(t),
                    });
                }
            }
        }
    }
    for (a, b) in poset.relation().pairs() {
        for s in 0..m {
            if !poset.leq(act(a, s), act(b, s)) {
                out.push(Violation::NotMonotoneInAct {
                    a: name(a),
                    b: name(b),
                    scalar: sname(s),
                });
            }
        }
    }
    for (s, t) in actor.poset().relation().pairs() {
        for x in 0..n {
            if !poset.leq(act(x, s), act(x, t)) {
                out.push(Violation::NotMonotoneInScalar {
                    element: name(x),
                    s: sname(s),
                    t: sname(t),
                });
            }
        }
    }
    out
}

/// A map between S-posets over the same actors, with its order flags and
/// equivariance established.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SPosetMap {
    pub assignment: Vec<usize>,
    pub flags: MapFlags,
    pub equivariant: bool,
}

impl SPosetMap {
    pub fn apply(&self, x: usize) -> usize {
        self.assignment[x]
    }

    pub fn is_morphism(&self) -> bool {
        self.equivariant && self.flags.monotone
    }
}

/// Computes all flags of `f: X → Y` by exhaustive scans. Fails with the first
/// equivariance witness when `f(xs) ≠ f(x)s` (or the left dual).
pub fn analyze_map(f: &[usize], x: &SPoset, y: &SPoset) -> Result<SPosetMap> {
    check_same_actors(x, y)?;
    if f.len() != x.len() || f.iter().any(|&v| v >= y.len()) {
        return Err(Error::BadInput("assignment is not a total map between the carriers".into()));
    }
    if let Some((elem, scalar)) = equivariance_witness(f, x, y) {
        return Err(Error::NotEquivariant {
            element: x.name(elem).to_string(),
            scalar,
        });
    }
    Ok(SPosetMap {
        assignment: f.to_vec(),
        flags: map_flags(f, x.poset(), y.poset()),
        equivariant: true,
    })
}

pub(crate) fn check_same_actors(x: &SPoset, y: &SPoset) -> Result<()> {
    let ok_side = |a: Option<&Arc<Pomonoid>>, b: Option<&Arc<Pomonoid>>| match (a, b) {
        (None, None) => true,
        (Some(a), Some(b)) => same_actor(a, b),
        _ => false,
    };
    if ok_side(x.left_actor(), y.left_actor()) && ok_side(x.right_actor(), y.right_actor()) {
        Ok(())
    } else {
        Err(Error::ActorMismatch("source and target carry different actions".into()))
    }
}

/// First `(element, scalar name)` where equivariance fails, if any.
pub(crate) fn equivariance_witness(f: &[usize], x: &SPoset, y: &SPoset) -> Option<(usize, String)> {
    if let (Some(ax), Some(ay)) = (x.right(), y.right()) {
        for e in 0..x.len() {
            for s in 0..ax.actor().len() {
                if f[ax.apply(e, s)] != ay.apply(f[e], s) {
                    return Some((e, ax.actor().name(s).to_string()));
                }
            }
        }
    }
    if let (Some(ax), Some(ay)) = (x.left(), y.left()) {
        for e in 0..x.len() {
            for s in 0..ax.actor().len() {
                if f[ax.apply(e, s)] != ay.apply(f[e], s) {
                    return Some((e, ax.actor().name(s).to_string()));
                }
            }
        }
    }
    None
}

pub(crate) fn is_equivariant(f: &[usize], x: &SPoset, y: &SPoset) -> bool {
    equivariance_witness(f, x, y).is_none()
}
