//! The unitary conditions for subpomonoids and for morphisms of U-posets,
//! and the poextension properties.
//!
//! Every condition is phrased over a right `U`-act `Y` with a distinguished
//! member set `M` (`Y = S`, `M = U` for a subpomonoid; `M = im f` for a
//! morphism). Left conditions are the right conditions over the opposite
//! pomonoids.
//!
//! Right pounitarity asks that every chain
//! `m ≤ y₁u₁, y₁u'₁ ≤ y₂u₂, …, yₙu'ₙ ≤ m'` stays inside `M`. A point lies on
//! some such chain exactly when it is reachable from a chain start and can
//! reach a chain end along the step relation `y → y'` iff `yu' ≤ y'u`, so
//! the condition reduces to two reachability sets.

use std::collections::VecDeque;

use serde::Serialize;

use crate::enumerate::{right_sposets_up_to, Limits};
use crate::error::{Error, Result};
use crate::pomonoid::{PomonoidMorphism, SubPomonoid};
use crate::poset::{embedding_witness, map_flags};
use crate::sposet::{check_same_actors, equivariance_witness, same_actor, Action, SPoset};
use crate::tensor::TensorPoset;

/// Whether a verdict is decided or only checked on a bounded family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Exact,
    Bounded,
}

/// `m` and `y·u` in the relation the condition forbids for `y ∉ M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Triple {
    pub member: usize,
    pub element: usize,
    pub scalar: usize,
}

/// One link `y` of a chain, entered as `y·scalar_in` and left as `y·scalar_out`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Link {
    pub element: usize,
    pub scalar_in: usize,
    pub scalar_out: usize,
}

/// `start ≤ y₁u₁, y₁u'₁ ≤ y₂u₂, …, yₙu'ₙ ≤ end` with `links[escape]` outside `M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainWitness {
    pub start: usize,
    pub links: Vec<Link>,
    pub end: usize,
    pub escape: usize,
}

/// The five right conditions (or their left duals) with witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitaryVerdict {
    pub unitary: bool,
    pub pounitary: bool,
    pub upper_strong: bool,
    pub lower_strong: bool,
    pub strong: bool,
    /// `y·u = m` with `y ∉ M`.
    pub unitary_witnesses: Vec<Triple>,
    /// `m ≤ y·u` with `y ∉ M`.
    pub upper_witnesses: Vec<Triple>,
    /// `y·u ≤ m` with `y ∉ M`.
    pub lower_witnesses: Vec<Triple>,
    pub chain: Option<ChainWitness>,
}

impl UnitaryVerdict {
    /// The implication diagram between the five conditions.
    pub fn is_consistent(&self) -> bool {
        self.strong == (self.upper_strong && self.lower_strong)
            && (!(self.upper_strong || self.lower_strong) || self.pounitary)
            && (!self.pounitary || self.unitary)
    }
}

/// Right and left verdicts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitaryReport {
    pub right: UnitaryVerdict,
    pub left: Option<UnitaryVerdict>,
    /// Image convexity; only meaningful for morphisms.
    pub convex: bool,
}

impl UnitaryReport {
    /// Both sides pounitary (left missing counts as failing).
    pub fn pounitary(&self) -> bool {
        self.right.pounitary && self.left.as_ref().is_some_and(|l| l.pounitary)
    }

    pub fn strong(&self) -> bool {
        self.right.strong && self.left.as_ref().is_some_and(|l| l.strong)
    }
}

/// A right `U`-act with a member set.
struct Setting<'a> {
    n: usize,
    scalars: Vec<usize>,
    act: Box<dyn Fn(usize, usize) -> usize + 'a>,
    leq: Box<dyn Fn(usize, usize) -> bool + 'a>,
    member: Vec<bool>,
}

impl Setting<'_> {
    fn members(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(|&y| self.member[y])
    }

    fn outsiders(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(|&y| !self.member[y])
    }

    fn triples(&self, holds: impl Fn(usize, usize) -> bool) -> Vec<Triple> {
        let mut out = Vec::new();
        for y in self.outsiders() {
            for &u in &self.scalars {
                let yu = (self.act)(y, u);
                for m in self.members() {
                    if holds(m, yu) {
                        out.push(Triple {
                            member: m,
                            element: y,
                            scalar: u,
                        });
                    }
                }
            }
        }
        out
    }

    /// Scalars `(u', u)` with `y·u' ≤ y'·u`, if any.
    fn step(&self, y: usize, y2: usize) -> Option<(usize, usize)> {
        for &u2 in &self.scalars {
            for &u in &self.scalars {
                if (self.leq)((self.act)(y, u2), (self.act)(y2, u)) {
                    return Some((u2, u));
                }
            }
        }
        None
    }

    fn start_scalar(&self, y: usize) -> Option<(usize, usize)> {
        self.members()
            .flat_map(|m| self.scalars.iter().map(move |&u| (m, u)))
            .find(|&(m, u)| (self.leq)(m, (self.act)(y, u)))
    }

    fn end_scalar(&self, y: usize) -> Option<(usize, usize)> {
        self.scalars
            .iter()
            .flat_map(|&u| self.members().map(move |m| (u, m)))
            .find(|&(u, m)| (self.leq)((self.act)(y, u), m))
    }

    fn steps(&self) -> Vec<Vec<Option<(usize, usize)>>> {
        (0..self.n).map(|y| (0..self.n).map(|y2| self.step(y, y2)).collect()).collect()
    }

    fn verdict(&self) -> UnitaryVerdict {
        let unitary_witnesses = self.triples(|m, yu| yu == m);
        let upper_witnesses = self.triples(|m, yu| (self.leq)(m, yu));
        let lower_witnesses = self.triples(|m, yu| (self.leq)(yu, m));
        let chain = self.pounitary_witness();
        let (usr, lsr) = (upper_witnesses.is_empty(), lower_witnesses.is_empty());
        UnitaryVerdict {
            unitary: unitary_witnesses.is_empty(),
            pounitary: chain.is_none(),
            upper_strong: usr,
            lower_strong: lsr,
            strong: usr && lsr,
            unitary_witnesses,
            upper_witnesses,
            lower_witnesses,
            chain,
        }
    }

    /// A chain leaving `M`, found from the forward and backward reachable sets.
    fn pounitary_witness(&self) -> Option<ChainWitness> {
        let steps = self.steps();
        let starts: Vec<Option<(usize, usize)>> = (0..self.n).map(|y| self.start_scalar(y)).collect();
        let ends: Vec<Option<(usize, usize)>> = (0..self.n).map(|y| self.end_scalar(y)).collect();
        let forward = bfs(self.n, |y| starts[y].is_some(), |y, y2| steps[y][y2].is_some());
        let backward = bfs(self.n, |y| ends[y].is_some(), |y, y2| steps[y2][y].is_some());
        let escape = (0..self.n).find(|&y| !self.member[y] && forward[y].is_some() && backward[y].is_some())?;
        let mut to_escape = trace(&forward, escape);
        to_escape.reverse();
        let from_escape = trace(&backward, escape);
        let path: Vec<usize> = to_escape.iter().chain(from_escape.iter().skip(1)).copied().collect();
        let (start, first_in) = starts[path[0]].expect("chain start");
        let (last_out, end) = ends[*path.last().expect("nonempty")].expect("chain end");
        let mut links: Vec<Link> = path
            .iter()
            .map(|&y| Link {
                element: y,
                scalar_in: 0,
                scalar_out: 0,
            })
            .collect();
        links[0].scalar_in = first_in;
        for i in 0..path.len() - 1 {
            let (out, inn) = steps[path[i]][path[i + 1]].expect("step on path");
            links[i].scalar_out = out;
            links[i + 1].scalar_in = inn;
        }
        let k = links.len();
        links[k - 1].scalar_out = last_out;
        Some(ChainWitness {
            start,
            links,
            end,
            escape: to_escape.len() - 1,
        })
    }

    fn replay(&self, w: &ChainWitness) -> bool {
        let l = &w.links;
        if l.is_empty() || w.escape >= l.len() || self.member[l[w.escape].element] {
            return false;
        }
        let act = |k: &Link, u: usize| (self.act)(k.element, u);
        self.member[w.start]
            && self.member[w.end]
            && (self.leq)(w.start, act(&l[0], l[0].scalar_in))
            && l.windows(2).all(|p| (self.leq)(act(&p[0], p[0].scalar_out), act(&p[1], p[1].scalar_in)))
            && (self.leq)(act(&l[l.len() - 1], l[l.len() - 1].scalar_out), w.end)
            && l.iter().all(|k| self.scalars.contains(&k.scalar_in) && self.scalars.contains(&k.scalar_out))
    }

    /// Chains of at most `max_len` links, searched layer by layer over
    /// `(current point, has left M)`.
    fn bounded_chain_violation(&self, max_len: usize) -> bool {
        let start: Vec<bool> = (0..self.n).map(|y| self.start_scalar(y).is_some()).collect();
        let end: Vec<bool> = (0..self.n).map(|y| self.end_scalar(y).is_some()).collect();
        let steps: Vec<Vec<usize>> = (0..self.n)
            .map(|y| (0..self.n).filter(|&y2| self.step(y, y2).is_some()).collect())
            .collect();
        // layer[y][escaped]
        let mut layer: Vec<[bool; 2]> = (0..self.n)
            .map(|y| {
                let mut s = [false; 2];
                if start[y] {
                    s[usize::from(!self.member[y])] = true;
                }
                s
            })
            .collect();
        for _ in 0..max_len {
            if (0..self.n).any(|y| layer[y][1] && end[y]) {
                return true;
            }
            let mut next = vec![[false; 2]; self.n];
            for y in 0..self.n {
                for esc in 0..2 {
                    if !layer[y][esc] {
                        continue;
                    }
                    for &y2 in &steps[y] {
                        next[y2][usize::from(esc == 1 || !self.member[y2])] = true;
                    }
                }
            }
            if next == layer {
                break;
            }
            layer = next;
        }
        (0..self.n).any(|y| layer[y][1] && end[y])
    }
}

fn bfs(n: usize, seed: impl Fn(usize) -> bool, edge: impl Fn(usize, usize) -> bool) -> Vec<Option<usize>> {
    // parent pointers; a seed is its own parent
    let mut parent = vec![None; n];
    let mut queue = VecDeque::new();
    for y in 0..n {
        if seed(y) {
            parent[y] = Some(y);
            queue.push_back(y);
        }
    }
    while let Some(y) = queue.pop_front() {
        for y2 in 0..n {
            if parent[y2].is_none() && edge(y, y2) {
                parent[y2] = Some(y);
                queue.push_back(y2);
            }
        }
    }
    parent
}

fn trace(parent: &[Option<usize>], mut y: usize) -> Vec<usize> {
    let mut out = vec![y];
    while let Some(p) = parent[y] {
        if p == y {
            break;
        }
        out.push(p);
        y = p;
    }
    out
}

fn sub_setting(u: &SubPomonoid) -> Setting<'_> {
    let s = u.ambient();
    Setting {
        n: s.len(),
        scalars: u.members().to_vec(),
        act: Box::new(move |y, v| s.mul(y, v)),
        leq: Box::new(move |a, b| s.leq(a, b)),
        member: (0..s.len()).map(|x| u.contains(x)).collect(),
    }
}

fn map_setting<'a>(f: &[usize], y: &'a SPoset) -> Setting<'a> {
    let act = y.right().expect("right action");
    let mut member = vec![false; y.len()];
    for &v in f {
        member[v] = true;
    }
    Setting {
        n: y.len(),
        scalars: act.actor().elements().collect(),
        act: Box::new(move |p, v| act.apply(p, v)),
        leq: Box::new(move |a, b| y.leq(a, b)),
        member,
    }
}

/// Right and left verdicts for `U ≤ S`, decided exactly.
pub fn check_unitary_submonoid(u: &SubPomonoid) -> UnitaryReport {
    let right = sub_setting(u).verdict();
    let op = u.opposite();
    let left = sub_setting(&op).verdict();
    UnitaryReport {
        right,
        left: Some(left),
        convex: u.ambient().poset().is_convex(&(0..u.ambient().len()).map(|x| u.contains(x)).collect::<Vec<_>>()),
    }
}

/// Verdicts for an order embedding `f: X → Y` of `U`-posets. The left
/// verdict is present when both carry a left action.
pub fn check_unitary_morphism(f: &[usize], x: &SPoset, y: &SPoset) -> Result<UnitaryReport> {
    check_same_actors(x, y)?;
    y.require_right("a unitary check")?;
    if f.len() != x.len() || f.iter().any(|&v| v >= y.len()) {
        return Err(Error::BadInput("assignment is not a total map between the carriers".into()));
    }
    if let Some((e, scalar)) = equivariance_witness(f, x, y) {
        return Err(Error::NotEquivariant {
            element: x.name(e).to_string(),
            scalar,
        });
    }
    if let Some((a, b)) = embedding_witness(f, x.poset(), y.poset()) {
        return Err(Error::NotOrderEmbedding(format!(
            "{} and {} violate x ≤ x' ⇔ f(x) ≤ f(x')",
            x.name(a),
            x.name(b)
        )));
    }
    let right = map_setting(f, y).verdict();
    let left = if y.left().is_some() {
        let ym = y.mirrored();
        let v = map_setting(f, &ym).verdict();
        Some(v)
    } else {
        None
    };
    Ok(UnitaryReport {
        right,
        left,
        convex: map_flags(f, x.poset(), y.poset()).convex,
    })
}

/// Replays a chain witness against `U ≤ S` (right side).
pub fn replay_submonoid_chain(u: &SubPomonoid, w: &ChainWitness) -> bool {
    sub_setting(u).replay(w)
}

/// Replays a chain witness against a morphism's target (right side).
pub fn replay_morphism_chain(f: &[usize], y: &SPoset, w: &ChainWitness) -> bool {
    map_setting(f, y).replay(w)
}

/// Right pounitarity decided by bounded chain enumeration with at most
/// `|S|²` links. Independent of the reachability argument.
pub fn pounitary_by_chains(u: &SubPomonoid) -> bool {
    let n = u.ambient().len();
    !sub_setting(u).bounded_chain_violation(n * n)
}

/// If `U` is strongly right pounitary, `S ∖ U` is closed under the right
/// action of `U` and no order relation crosses between `U` and `S ∖ U`.
pub fn strong_complement_holds(u: &SubPomonoid) -> bool {
    let s = u.ambient();
    let inside = |x: usize| u.contains(x);
    let closed = s.elements().filter(|&x| !inside(x)).all(|x| u.members().iter().all(|&v| !inside(s.mul(x, v))));
    let split = s.poset().relation().pairs().all(|(a, b)| inside(a) == inside(b));
    closed && split
}

/// `x ↦ x⊗1` from a right `U`-poset into `X ⊗_U S`.
#[derive(Clone, Debug, Serialize)]
pub struct PoextensionCheck {
    pub order_embedding: bool,
    pub injective: bool,
    /// `x, x'` with `x⊗1 ≤ x'⊗1` but `x ≰ x'`.
    pub witness: Option<(usize, usize)>,
}

fn embedding_check(image: &[usize], x: &SPoset, t: &SPoset) -> PoextensionCheck {
    let flags = map_flags(image, x.poset(), t.poset());
    PoextensionCheck {
        order_embedding: flags.order_embedding,
        injective: flags.injective,
        witness: embedding_witness(image, x.poset(), t.poset()),
    }
}

/// The right poextension test at one right `U`-poset `X`.
pub fn check_poextension_for(phi: &PomonoidMorphism, x: &SPoset) -> Result<PoextensionCheck> {
    let u = x.require_right("the poextension test")?;
    if !same_actor(u, &phi.source) {
        return Err(Error::ActorMismatch("X is not a right poset over the core".into()));
    }
    let t = TensorPoset::new(&x.right_part(), &SPoset::bi_over(phi))?;
    let one = phi.target.identity();
    let image: Vec<usize> = (0..x.len()).map(|a| t.class(a, one)).collect();
    Ok(embedding_check(&image, x, t.sposet()))
}

/// `S` as an `(S, U)`-poset, `U` acting on the right through `phi`.
fn over_right(phi: &PomonoidMorphism) -> SPoset {
    let s = &phi.target;
    let m = phi.source.len();
    let table = (0..s.len()).flat_map(|x| (0..m).map(move |u| s.mul(x, phi.apply(u)))).collect();
    SPoset::regular_left(s).with_right(Some(Action::new(phi.source.clone(), table)))
}

/// `S` as a `(U, U)`-poset through `phi` on both sides.
fn over_both(phi: &PomonoidMorphism) -> SPoset {
    let s = &phi.target;
    let m = phi.source.len();
    let right = (0..s.len()).flat_map(|x| (0..m).map(move |u| s.mul(x, phi.apply(u)))).collect();
    SPoset::bi_over(phi).with_right(Some(Action::new(phi.source.clone(), right)))
}

/// The left poextension test: `x ↦ 1⊗x` into `S ⊗_U X` for a left `U`-poset.
pub fn check_left_poextension_for(phi: &PomonoidMorphism, x: &SPoset) -> Result<PoextensionCheck> {
    let u = x.require_left("the poextension test")?;
    if !same_actor(u, &phi.source) {
        return Err(Error::ActorMismatch("X is not a left poset over the core".into()));
    }
    let t = TensorPoset::new(&over_right(phi), &x.left_part())?;
    let one = phi.target.identity();
    let image: Vec<usize> = (0..x.len()).map(|a| t.class(one, a)).collect();
    Ok(embedding_check(&image, x, t.sposet()))
}

/// The two-sided test: `x⊗y ↦ x⊗1⊗y` from `X ⊗_U Y` into
/// `X ⊗_U S ⊗_U Y`, for `X` a right and `Y` a left `U`-poset.
pub fn check_two_sided_poextension_for(phi: &PomonoidMorphism, x: &SPoset, y: &SPoset) -> Result<PoextensionCheck> {
    let xr = x.right_part();
    let yl = y.left_part();
    let base = TensorPoset::new(&xr, &yl)?;
    let xs = TensorPoset::new(&xr, &over_both(phi))?;
    let xsy = TensorPoset::new(xs.sposet(), &yl)?;
    let one = phi.target.identity();
    let mut image = vec![0; base.len()];
    for a in 0..x.len() {
        for b in 0..y.len() {
            image[base.class(a, b)] = xsy.class(xs.class(a, one), b);
        }
    }
    let flags = map_flags(&image, base.sposet().poset(), xsy.sposet().poset());
    Ok(PoextensionCheck {
        order_embedding: flags.order_embedding,
        injective: flags.injective,
        witness: embedding_witness(&image, base.sposet().poset(), xsy.sposet().poset()),
    })
}

/// The right poextension property over every right `U`-poset with at most
/// `cap` points.
#[derive(Clone, Debug, Serialize)]
pub struct BoundedPoextension {
    pub holds: bool,
    pub scope: Scope,
    pub cap: usize,
    pub tested: usize,
    /// The first failing test poset and its witness.
    #[serde(skip)]
    pub failing: Option<(SPoset, PoextensionCheck)>,
}

pub fn check_poextension_bounded(phi: &PomonoidMorphism, cap: usize, limits: &Limits) -> Result<BoundedPoextension> {
    let u = &phi.source;
    let mut tested = 0;
    let mut candidates = vec![SPoset::regular_right(u)];
    candidates.extend(right_sposets_up_to(u, cap, limits)?);
    for x in candidates {
        tested += 1;
        let check = check_poextension_for(phi, &x)?;
        if !check.order_embedding {
            return Ok(BoundedPoextension {
                holds: false,
                scope: Scope::Bounded,
                cap,
                tested,
                failing: Some((x, check)),
            });
        }
    }
    Ok(BoundedPoextension {
        holds: true,
        scope: Scope::Bounded,
        cap,
        tested,
        failing: None,
    })
}

/// For a lower strongly right pounitary `f: X → Y` and a left `U`-poset
/// `A`: every `y⊗a ≤ f(x)⊗a'` in `Y ⊗_U A` has `y ∈ im f`. Returns a
/// counterexample `(y, a, x, a')` if one exists.
pub fn lemma_r2_check(f: &[usize], x: &SPoset, y: &SPoset, a: &SPoset) -> Result<Option<(usize, usize, usize, usize)>> {
    let report = check_unitary_morphism(f, x, y)?;
    if !report.right.lower_strong {
        return Err(Error::PreconditionFailed("f is not lower strongly right pounitary".into()));
    }
    let t = TensorPoset::new(&y.right_part(), &a.left_part())?;
    let mut in_image = vec![false; y.len()];
    for &v in f {
        in_image[v] = true;
    }
    for p in 0..y.len() {
        if in_image[p] {
            continue;
        }
        for q in 0..a.len() {
            for xx in 0..x.len() {
                for q2 in 0..a.len() {
                    if t.leq(p, q, f[xx], q2) {
                        return Ok(Some((p, q, xx, q2)));
                    }
                }
            }
        }
    }
    Ok(None)
}
