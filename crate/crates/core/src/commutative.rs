//! Commutative pomonoids: pocancellativity, the group of fractions `G(S)`,
//! and commutative amalgams through `S₁ ⊗_U S₂`.

use std::sync::Arc;

use serde::Serialize;

use crate::amalgam::PoAmalgam;
use crate::enumerate::{commutative_cancellative_pomonoids, pomonoid_morphisms, Limits};
use crate::error::{Error, Result};
use crate::pomonoid::{Pomonoid, PomonoidCandidate, PomonoidMorphism};
use crate::poset::{map_flags, Poset};
use crate::relation::Relation;
use crate::sposet::SPoset;
use crate::tensor::TensorPoset;
use crate::unitary::{check_poextension_bounded, check_poextension_for, BoundedPoextension};

/// `(s, t)` with `st ≠ ts`, if any.
pub fn commutativity_witness(s: &Pomonoid) -> Option<(usize, usize)> {
    s.elements()
        .flat_map(|x| s.elements().map(move |y| (x, y)))
        .find(|&(x, y)| s.mul(x, y) != s.mul(y, x))
}

pub fn is_commutative(s: &Pomonoid) -> bool {
    commutativity_witness(s).is_none()
}

/// A failure of pocancellativity: `sx ≤ sy` (left) or `xs ≤ ys` (right)
/// with `x ≰ y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CancellationWitness {
    pub side: crate::error::Side,
    pub s: usize,
    pub x: usize,
    pub y: usize,
}

pub fn pocancellativity_witness(s: &Pomonoid) -> Option<CancellationWitness> {
    use crate::error::Side;
    for a in s.elements() {
        for x in s.elements() {
            for y in s.elements() {
                if s.leq(x, y) {
                    continue;
                }
                if s.leq(s.mul(a, x), s.mul(a, y)) {
                    return Some(CancellationWitness { side: Side::Left, s: a, x, y });
                }
                if s.leq(s.mul(x, a), s.mul(y, a)) {
                    return Some(CancellationWitness { side: Side::Right, s: a, x, y });
                }
            }
        }
    }
    None
}

pub fn is_pocancellative(s: &Pomonoid) -> bool {
    pocancellativity_witness(s).is_none()
}

/// `G(S) = (S × S)/Δ` ordered by `[(s,t)] ≤ [(s',t')] ⇔ st' ≤ s't`.
#[derive(Clone, Debug)]
pub struct GroupCompletion {
    pub source: Arc<Pomonoid>,
    pub group: Arc<Pomonoid>,
    /// Class of the pair `(s, t)` at `s·|S| + t`.
    pub class: Vec<usize>,
    /// `χ(s) = [(s, 1)]`.
    pub chi: Vec<usize>,
}

impl GroupCompletion {
    pub fn class_of(&self, s: usize, t: usize) -> usize {
        self.class[s * self.source.len() + t]
    }

    /// `χ` is an order embedding.
    pub fn chi_is_embedding(&self) -> bool {
        map_flags(&self.chi, self.source.poset(), self.group.poset()).order_embedding
    }

    /// `χ` is an order isomorphism, so `S ≅ G(S)`.
    pub fn chi_is_iso(&self) -> bool {
        let f = map_flags(&self.chi, self.source.poset(), self.group.poset());
        f.order_embedding && f.surjective
    }

    /// Every class `[(s,t)]` has inverse `[(t,s)]`, `[(s,s)]` is the
    /// identity, and `[(s,t)] = [(sq,tp)][(p,q)]`.
    pub fn group_law_violations(&self) -> Vec<String> {
        let (s, g) = (&self.source, &self.group);
        let mut out = Vec::new();
        for a in s.elements() {
            if self.class_of(a, a) != g.identity() {
                out.push(format!("[({0},{0})] is not the identity", s.name(a)));
            }
            for b in s.elements() {
                if g.mul(self.class_of(a, b), self.class_of(b, a)) != g.identity() {
                    out.push(format!("[({0},{1})] has no inverse [({1},{0})]", s.name(a), s.name(b)));
                }
                for p in s.elements() {
                    for q in s.elements() {
                        let lhs = self.class_of(a, b);
                        let rhs = g.mul(self.class_of(s.mul(a, q), s.mul(b, p)), self.class_of(p, q));
                        if lhs != rhs {
                            out.push(format!("[({},{})] ≠ [(sq,tp)][(p,q)] at p={}, q={}", s.name(a), s.name(b), s.name(p), s.name(q)));
                        }
                    }
                }
            }
        }
        out
    }
}

/// Builds `G(S)`, checking that `Δ` is an equivalence and a congruence and
/// that the order is well defined on classes.
pub fn group_completion(s: &Arc<Pomonoid>) -> Result<GroupCompletion> {
    if let Some((x, y)) = commutativity_witness(s) {
        return Err(Error::PreconditionFailed(format!("{}{} ≠ {}{}", s.name(x), s.name(y), s.name(y), s.name(x))));
    }
    if let Some(w) = pocancellativity_witness(s) {
        return Err(Error::PreconditionFailed(format!(
            "not {} pocancellative at s={}, x={}, y={}",
            w.side,
            s.name(w.s),
            s.name(w.x),
            s.name(w.y)
        )));
    }
    let n = s.len();
    let pairs = n * n;
    let delta = |p: usize, q: usize| s.mul(p / n, q % n) == s.mul(q / n, p % n);
    let rel = Relation::from_pairs(pairs, (0..pairs).flat_map(|p| (0..pairs).map(move |q| (p, q))).filter(|&(p, q)| delta(p, q)));
    if !rel.is_transitive() {
        return Err(Error::PreconditionFailed("Δ is not transitive".into()));
    }
    let (class, count) = rel.components();
    let mut rep = vec![usize::MAX; count];
    for p in 0..pairs {
        if rep[class[p]] == usize::MAX {
            rep[class[p]] = p;
        }
    }
    let mul_pair = |p: usize, q: usize| s.mul(p / n, q / n) * n + s.mul(p % n, q % n);
    for p in 0..pairs {
        for q in 0..pairs {
            if class[mul_pair(p, q)] != class[mul_pair(rep[class[p]], rep[class[q]])] {
                return Err(Error::NotActCongruence("Δ is not compatible with the product".into()));
            }
        }
    }
    let pair_leq = |p: usize, q: usize| s.leq(s.mul(p / n, q % n), s.mul(q / n, p % n));
    for p in 0..pairs {
        for q in 0..pairs {
            if pair_leq(p, q) != pair_leq(rep[class[p]], rep[class[q]]) {
                return Err(Error::PreconditionFailed("the fraction order is not well defined on classes".into()));
            }
        }
    }
    let names: Vec<String> = rep.iter().map(|&p| format!("[{},{}]", s.name(p / n), s.name(p % n))).collect();
    let leq = Relation::from_pairs(count, (0..count).flat_map(|c| (0..count).map(move |d| (c, d))).filter(|&(c, d)| pair_leq(rep[c], rep[d])));
    let poset = Poset::from_relation(names, leq)?;
    let table = (0..count).flat_map(|c| (0..count).map(move |d| (c, d))).map(|(c, d)| class[mul_pair(rep[c], rep[d])]).collect();
    let one = s.identity();
    let group = Pomonoid::validate(PomonoidCandidate {
        poset,
        table,
        identity: Some(class[one * n + one]),
    })?;
    let chi = s.elements().map(|x| class[x * n + one]).collect();
    Ok(GroupCompletion {
        source: s.clone(),
        group: Arc::new(group),
        class,
        chi,
    })
}

/// `S₁ ⊗_U S₂` as a pomonoid with `λ₁(s) = s⊗1`, `λ₂(s) = 1⊗s`.
#[derive(Clone, Debug)]
pub struct CommutativeTensor {
    pub tensor: TensorPoset,
    pub pomonoid: Arc<Pomonoid>,
    pub lambda: [Vec<usize>; 2],
}

fn commutative_tensor(a: &PoAmalgam) -> Result<CommutativeTensor> {
    let (s1, s2) = (a.factor(0), a.factor(1));
    let left = SPoset::regular_bi(s1).restrict_right(a.embedding(0))?;
    let t = TensorPoset::new(&left, &SPoset::bi_over(a.embedding(1)))?;
    let m = t.len();
    let mut table = vec![usize::MAX; m * m];
    for x in s1.elements() {
        for y in s2.elements() {
            for x2 in s1.elements() {
                for y2 in s2.elements() {
                    let (c, d) = (t.class(x, y), t.class(x2, y2));
                    let v = t.class(s1.mul(x, x2), s2.mul(y, y2));
                    let slot = &mut table[c * m + d];
                    if *slot != usize::MAX && *slot != v {
                        return Err(Error::PreconditionFailed(format!(
                            "the product on {} ⊗ {} is not well defined",
                            t.name(c),
                            t.name(d)
                        )));
                    }
                    *slot = v;
                }
            }
        }
    }
    let pomonoid = Pomonoid::validate(PomonoidCandidate {
        poset: t.sposet().poset().clone(),
        table,
        identity: Some(t.class(s1.identity(), s2.identity())),
    })?;
    let lambda = [
        s1.elements().map(|x| t.class(x, s2.identity())).collect(),
        s2.elements().map(|y| t.class(s1.identity(), y)).collect(),
    ];
    Ok(CommutativeTensor {
        tensor: t,
        pomonoid: Arc::new(pomonoid),
        lambda,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CommutativeVerdict {
    StronglyPoembeddable,
    Poembeddable,
    WeaklyEmbeddable,
    NotEmbeddable,
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutativeAmalgamReport {
    pub tensor_size: usize,
    pub lambda_injective: [bool; 2],
    pub lambda_embedding: [bool; 2],
    /// `λ₁(s₁) = λ₂(s₂) ⇒ s₁ = s₂ ∈ U`.
    pub strong_condition: bool,
    pub strong_witness: Option<(String, String)>,
    pub verdict: CommutativeVerdict,
    /// Poextension of the core in each factor, over right `U`-posets up to
    /// the cap and the other factor.
    pub poextension: [bool; 2],
    pub convex: [bool; 2],
    /// Poextension and convexity hold in both factors at the tested scope.
    pub hypothesis: bool,
    /// Set when the hypothesis holds but the verdict is not strong.
    pub contradiction: Option<String>,
    #[serde(skip)]
    pub bounded: Vec<BoundedPoextension>,
    #[serde(skip)]
    pub tensor: Option<Arc<Pomonoid>>,
}

/// Decides strong poembeddability of a commutative amalgam in `S₁ ⊗_U S₂`
/// and compares the outcome with the poextension-plus-convexity criterion,
/// testing poextension on right `U`-posets of size at most `cap`.
pub fn commutative_amalgam(a: &PoAmalgam, cap: usize) -> Result<CommutativeAmalgamReport> {
    for (label, s) in [("the core", a.core()), ("factor 1", a.factor(0)), ("factor 2", a.factor(1))] {
        if let Some((x, y)) = commutativity_witness(s) {
            return Err(Error::NotCommutative(format!(
                "{label}: {}{} ≠ {}{}",
                s.name(x),
                s.name(y),
                s.name(y),
                s.name(x)
            )));
        }
    }
    let ct = commutative_tensor(a)?;
    let target = ct.pomonoid.poset();
    let flags = [0, 1].map(|j| map_flags(&ct.lambda[j], a.factor(j).poset(), target));
    let (s1, s2) = (a.factor(0), a.factor(1));
    let mut strong_witness = None;
    'outer: for x in s1.elements() {
        for y in s2.elements() {
            if ct.lambda[0][x] == ct.lambda[1][y] && !a.core_preimage(0, x).is_some_and(|u| a.core_letter(1, u) == y) {
                strong_witness = Some((s1.name(x).to_string(), s2.name(y).to_string()));
                break 'outer;
            }
        }
    }
    let strong_condition = strong_witness.is_none();
    let embedding = flags[0].order_embedding && flags[1].order_embedding;
    let verdict = if embedding && strong_condition {
        CommutativeVerdict::StronglyPoembeddable
    } else if embedding {
        CommutativeVerdict::Poembeddable
    } else if flags[0].injective && flags[1].injective {
        CommutativeVerdict::WeaklyEmbeddable
    } else {
        CommutativeVerdict::NotEmbeddable
    };
    let limits = Limits { pomonoids: 4, sposets: cap.max(1) };
    let mut bounded = Vec::new();
    let mut poextension = [false; 2];
    for j in 0..2 {
        let phi = a.embedding(j);
        let b = check_poextension_bounded(phi, cap, &limits)?;
        let other = SPoset::regular_right(a.factor(1 - j)).restrict_right(a.embedding(1 - j))?;
        poextension[j] = b.holds && check_poextension_for(phi, &other)?.order_embedding;
        bounded.push(b);
    }
    let convex = [0, 1].map(|j| a.embedding(j).flags.convex);
    let hypothesis = poextension.iter().chain(&convex).all(|&b| b);
    let contradiction = (hypothesis && verdict != CommutativeVerdict::StronglyPoembeddable)
        .then(|| format!("poextension and convexity hold but the verdict is {verdict:?}"));
    Ok(CommutativeAmalgamReport {
        tensor_size: ct.pomonoid.len(),
        lambda_injective: flags.map(|f| f.injective),
        lambda_embedding: flags.map(|f| f.order_embedding),
        strong_condition,
        strong_witness,
        verdict,
        poextension,
        convex,
        hypothesis,
        contradiction,
        bounded,
        tensor: Some(ct.pomonoid),
    })
}

/// `S₁ ⊗_U S₂` of a commutative amalgam as a pomonoid.
pub fn amalgam_tensor(a: &PoAmalgam) -> Result<(Arc<Pomonoid>, [Vec<usize>; 2])> {
    let ct = commutative_tensor(a)?;
    Ok((ct.pomonoid, ct.lambda))
}

/// The amalgam of completions `[G(U); G(S₁), G(S₂); φ'₁, φ'₂]` with
/// `φ'ᵢ([(u,v)]) = [(φᵢu, φᵢv)]`.
#[derive(Clone, Debug)]
pub struct CompletionAmalgam {
    pub core: GroupCompletion,
    pub factors: [GroupCompletion; 2],
    pub phi: [PomonoidMorphism; 2],
}

impl CompletionAmalgam {
    pub fn embeddings_are_order_embeddings(&self) -> [bool; 2] {
        [0, 1].map(|j| self.phi[j].flags.order_embedding)
    }

    pub fn amalgam(&self) -> Result<PoAmalgam> {
        PoAmalgam::new(self.phi[0].clone(), self.phi[1].clone())
    }
}

pub fn completion_amalgam(a: &PoAmalgam) -> Result<CompletionAmalgam> {
    let core = group_completion(a.core())?;
    let factors = [group_completion(a.factor(0))?, group_completion(a.factor(1))?];
    let u = a.core();
    let n = u.len();
    let mut phi = Vec::new();
    for (j, g) in factors.iter().enumerate() {
        let mut map = vec![usize::MAX; core.group.len()];
        for p in 0..n * n {
            let (x, y) = (p / n, p % n);
            let v = g.class_of(a.core_letter(j, x), a.core_letter(j, y));
            let slot = &mut map[core.class[p]];
            if *slot != usize::MAX && *slot != v {
                return Err(Error::PreconditionFailed(format!("φ'{} is not well defined on [({},{})]", j + 1, u.name(x), u.name(y))));
            }
            *slot = v;
        }
        phi.push(PomonoidMorphism::new(core.group.clone(), g.group.clone(), map)?);
    }
    let [p1, p2]: [PomonoidMorphism; 2] = phi.try_into().expect("two factors");
    Ok(CompletionAmalgam {
        core,
        factors,
        phi: [p1, p2],
    })
}

/// Outcome of the bounded search for a commutative pocancellative amalgam
/// that fails to embed strongly in its commutative tensor.
#[derive(Clone, Debug, Serialize)]
pub struct OpenProblemExperiment {
    pub max_size: usize,
    pub amalgams: usize,
    /// Amalgams whose commutative tensor is not a strong poembedding.
    pub candidates: Vec<String>,
    pub message: String,
}

/// Runs [`commutative_amalgam`] over every amalgam of commutative
/// pocancellative pomonoids with at most `max_size` elements.
pub fn experiment_open_problem(max_size: usize) -> Result<OpenProblemExperiment> {
    let all: Vec<Arc<Pomonoid>> = (1..=max_size).flat_map(commutative_cancellative_pomonoids).map(Arc::new).collect();
    let mut amalgams = 0;
    let mut candidates = Vec::new();
    for u in &all {
        for s1 in &all {
            let phis1: Vec<_> = pomonoid_morphisms(u, s1).into_iter().filter(|f| f.flags.order_embedding).collect();
            for s2 in &all {
                let phis2: Vec<_> = pomonoid_morphisms(u, s2).into_iter().filter(|f| f.flags.order_embedding).collect();
                for p1 in &phis1 {
                    for p2 in &phis2 {
                        let a = PoAmalgam::new(p1.clone(), p2.clone())?;
                        amalgams += 1;
                        let (t, lambda) = amalgam_tensor(&a)?;
                        let strong = [0, 1].iter().all(|&j| map_flags(&lambda[j], a.factor(j).poset(), t.poset()).order_embedding)
                            && s1.elements().all(|x| {
                                s2.elements().all(|y| lambda[0][x] != lambda[1][y] || a.core_preimage(0, x).is_some_and(|v| a.core_letter(1, v) == y))
                            });
                        if !strong {
                            candidates.push(format!("core of size {} into factors of sizes {} and {}", u.len(), s1.len(), s2.len()));
                        }
                    }
                }
            }
        }
    }
    let message = if candidates.is_empty() {
        "no counterexample found at this scale".to_string()
    } else {
        format!("{} candidate(s) need checking by hand; this is not a proof", candidates.len())
    };
    Ok(OpenProblemExperiment {
        max_size,
        amalgams,
        candidates,
        message,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn commutativity_scan() {
        assert!(!is_commutative(&fixtures::strong_gap_pomonoid()));
        assert!(is_commutative(&fixtures::max_chain(3)));
        assert!(is_commutative(&Pomonoid::trivial()));
    }

    #[test]
    fn pocancellativity_scan() {
        assert!(is_pocancellative(&fixtures::cyclic_group(4)));
        assert!(is_pocancellative(&Pomonoid::trivial()));
        let s = fixtures::max_chain(3);
        let w = pocancellativity_witness(&s).unwrap();
        assert!(s.leq(s.mul(w.s, w.x), s.mul(w.s, w.y)) && !s.leq(w.x, w.y));
    }

    #[test]
    fn completion_of_a_group_is_itself() {
        for n in 1..=4 {
            let s = Arc::new(fixtures::cyclic_group(n));
            let g = group_completion(&s).unwrap();
            assert!(g.chi_is_iso());
            assert!(g.group_law_violations().is_empty());
        }
    }

    #[test]
    fn completion_needs_cancellation() {
        let s = Arc::new(fixtures::max_chain(2));
        assert!(matches!(group_completion(&s), Err(Error::PreconditionFailed(_))));
    }

    #[test]
    fn degenerate_commutative_amalgam_is_strong() {
        let s = Arc::new(fixtures::max_chain(2));
        let a = fixtures::degenerate_amalgam(s.clone());
        let r = commutative_amalgam(&a, 2).unwrap();
        assert_eq!(r.tensor_size, s.len());
        assert_eq!(r.verdict, CommutativeVerdict::StronglyPoembeddable);
        assert!(r.contradiction.is_none());
    }

    #[test]
    fn noncommutative_input_is_rejected() {
        let a = fixtures::strong_gap_amalgam();
        assert!(matches!(commutative_amalgam(&a, 1), Err(Error::NotCommutative(_))));
    }

    #[test]
    fn completion_of_group_amalgam() {
        let s = Arc::new(fixtures::cyclic_group(2));
        let a = fixtures::degenerate_amalgam(s);
        let c = completion_amalgam(&a).unwrap();
        assert_eq!(c.embeddings_are_order_embeddings(), [true, true]);
        assert_eq!(c.core.group.len(), 2);
    }

    #[test]
    fn experiment_finds_nothing_small() {
        let r = experiment_open_problem(3).unwrap();
        assert!(r.amalgams > 0);
        assert_eq!(r.message, "no counterexample found at this scale");
    }
}
