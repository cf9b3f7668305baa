//! Coproducts, pushouts, direct limits over finite chains and free
//! S-extensions, with the checks that exercise their universal properties.

use std::collections::BTreeMap;

use crate::congruence::{nu_congruence, theta_congruence, Quotient};
use crate::enumerate::sposet_maps;
use crate::error::{Error, Result};
use crate::pomonoid::PomonoidMorphism;
use crate::poset::{map_flags, MapFlags, Poset};
use crate::relation::Relation;
use crate::sposet::{analyze_map, check_same_actors, is_equivariant, same_actor, Action, SPoset};
use crate::tensor::{induced_map, TensorPoset};

/// A disjoint union with its injections.
#[derive(Clone, Debug)]
pub struct Coproduct {
    pub object: SPoset,
    /// `injections[i][x]` is the image of `x` from summand `i`.
    pub injections: Vec<Vec<usize>>,
}

impl Coproduct {
    /// `(summand, element)` of a point of the union.
    pub fn locate(&self, p: usize) -> (usize, usize) {
        let mut p = p;
        for (i, inj) in self.injections.iter().enumerate() {
            if p < inj.len() {
                return (i, p);
            }
            p -= inj.len();
        }
        panic!("point outside the coproduct")
    }
}

/// `B ∪̇ C` with no order between the summands. Points are named `1.b` and `2.c`.
pub fn coproduct(b: &SPoset, c: &SPoset) -> Result<Coproduct> {
    coproduct_all(&[b.clone(), c.clone()])
}

/// Disjoint union of a nonempty family over the same actors.
pub fn coproduct_all(parts: &[SPoset]) -> Result<Coproduct> {
    let first = parts.first().ok_or_else(|| Error::BadInput("empty coproduct".into()))?;
    for p in &parts[1..] {
        check_same_actors(first, p)?;
    }
    let mut offsets = Vec::with_capacity(parts.len());
    let mut total = 0;
    for p in parts {
        offsets.push(total);
        total += p.len();
    }
    let names = parts
        .iter()
        .enumerate()
        .flat_map(|(i, p)| (0..p.len()).map(move |x| format!("{}.{}", i + 1, p.name(x))))
        .collect();
    let leq = Relation::from_pairs(
        total,
        parts
            .iter()
            .zip(&offsets)
            .flat_map(|(p, &o)| p.poset().relation().pairs().map(move |(x, y)| (x + o, y + o))),
    );
    let glue = |side: fn(&SPoset) -> Option<&Action>| {
        side(first).map(|a0| {
            let m = a0.actor().len();
            let table = parts
                .iter()
                .zip(&offsets)
                .flat_map(|(p, &o)| {
                    let act = side(p).expect("checked actors");
                    (0..p.len()).flat_map(move |x| (0..m).map(move |s| act.apply(x, s) + o))
                })
                .collect();
            Action::new(a0.actor().clone(), table)
        })
    };
    let object = SPoset::from_parts_unchecked(Poset::from_closed_unchecked(names, leq), glue(SPoset::left), glue(SPoset::right));
    let injections = parts.iter().zip(&offsets).map(|(p, &o)| (o..o + p.len()).collect()).collect();
    Ok(Coproduct { object, injections })
}

fn require_morphism(f: &[usize], x: &SPoset, y: &SPoset, what: &str) -> Result<MapFlags> {
    let m = analyze_map(f, x, y)?;
    if !m.flags.monotone {
        return Err(Error::BadInput(format!("{what} is not monotone")));
    }
    Ok(m.flags)
}

/// The pushout of `B ←f– A –g→ C`: `(B ∪̇ C)/θ(R)` with
/// `R = {(f(a), g(a))}`.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub a: SPoset,
    pub b: SPoset,
    pub c: SPoset,
    pub f: Vec<usize>,
    pub g: Vec<usize>,
    pub coproduct: Coproduct,
    pub quotient: Quotient,
    pub gamma: Vec<usize>,
    pub delta: Vec<usize>,
}

pub fn pushout(a: &SPoset, b: &SPoset, f: &[usize], c: &SPoset, g: &[usize]) -> Result<Pushout> {
    require_morphism(f, a, b, "f")?;
    require_morphism(g, a, c, "g")?;
    let coproduct = coproduct(b, c)?;
    let (ib, ic) = (&coproduct.injections[0], &coproduct.injections[1]);
    let r: Vec<(usize, usize)> = (0..a.len()).map(|x| (ib[f[x]], ic[g[x]])).collect();
    let quotient = theta_congruence(&coproduct.object, &r)?;
    let gamma = ib.iter().map(|&p| quotient.class_of(p)).collect();
    let delta = ic.iter().map(|&p| quotient.class_of(p)).collect();
    Ok(Pushout {
        a: a.clone(),
        b: b.clone(),
        c: c.clone(),
        f: f.to_vec(),
        g: g.to_vec(),
        coproduct,
        quotient,
        gamma,
        delta,
    })
}

impl Pushout {
    pub fn object(&self) -> &SPoset {
        self.quotient.sposet()
    }

    fn leq_d(&self, x: usize, y: usize) -> bool {
        self.object().leq(x, y)
    }

    /// For `γ(b) ≤ δ(c)`, points `a, a'` with `b ≤ f(a)` and `g(a') ≤ c`.
    pub fn gap_witnesses(&self, b: usize, c: usize) -> Result<(usize, usize)> {
        if !self.leq_d(self.gamma[b], self.delta[c]) {
            return Err(Error::PreconditionFailed("γ(b) ≤ δ(c) does not hold".into()));
        }
        let a1 = (0..self.a.len()).find(|&x| self.b.leq(b, self.f[x]));
        let a2 = (0..self.a.len()).find(|&x| self.c.leq(self.g[x], c));
        match (a1, a2) {
            (Some(x), Some(y)) => Ok((x, y)),
            _ => Err(Error::WitnessNotFound(format!(
                "no gap witnesses for {} and {}",
                self.b.name(b),
                self.c.name(c)
            ))),
        }
    }

    /// For `γ(b) = δ(c)`, points with `f(a'₁) ≤ b ≤ f(a₁)` and
    /// `g(a'₂) ≤ c ≤ g(a₂)`, returned as `(a'₁, a₁, a'₂, a₂)`.
    pub fn equality_witnesses(&self, b: usize, c: usize) -> Result<(usize, usize, usize, usize)> {
        if self.gamma[b] != self.delta[c] {
            return Err(Error::PreconditionFailed("γ(b) = δ(c) does not hold".into()));
        }
        let n = self.a.len();
        let find = |p: &dyn Fn(usize) -> bool| (0..n).find(|&x| p(x));
        let w = (
            find(&|x| self.b.leq(self.f[x], b)),
            find(&|x| self.b.leq(b, self.f[x])),
            find(&|x| self.c.leq(self.g[x], c)),
            find(&|x| self.c.leq(c, self.g[x])),
        );
        match w {
            (Some(p), Some(q), Some(r), Some(s)) => Ok((p, q, r, s)),
            _ => Err(Error::WitnessNotFound(format!(
                "no equality witnesses for {} and {}",
                self.b.name(b),
                self.c.name(c)
            ))),
        }
    }

    /// Checks the gap-witness property and the equality, embedding and
    /// convexity transfer properties of the square. Returns one line per
    /// violation.
    pub fn lemma_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let ff = map_flags(&self.f, self.a.poset(), self.b.poset());
        let gf = map_flags(&self.g, self.a.poset(), self.c.poset());
        let df = map_flags(&self.delta, self.c.poset(), self.object().poset());
        let cf = map_flags(&self.gamma, self.b.poset(), self.object().poset());
        for b in 0..self.b.len() {
            for c in 0..self.c.len() {
                if self.leq_d(self.gamma[b], self.delta[c]) {
                    if let Err(e) = self.gap_witnesses(b, c) {
                        out.push(format!("gap: {e}"));
                    }
                }
                if self.gamma[b] != self.delta[c] {
                    continue;
                }
                if let Err(e) = self.equality_witnesses(b, c) {
                    out.push(format!("equality: {e}"));
                }
                let fa: Vec<usize> = (0..self.a.len()).filter(|&x| self.f[x] == b).collect();
                let ga: Vec<usize> = (0..self.a.len()).filter(|&x| self.g[x] == c).collect();
                if ff.convex && gf.convex && (fa.is_empty() || ga.is_empty()) {
                    out.push(format!("convex legs: {} or {} is not an image", self.b.name(b), self.c.name(c)));
                }
                if ff.convex && gf.convex && ff.order_embedding && gf.order_embedding {
                    let common = fa.iter().filter(|x| ga.contains(x)).count();
                    if common != 1 {
                        out.push(format!("unique preimage: {common} common preimages of {} and {}", self.b.name(b), self.c.name(c)));
                    }
                }
            }
        }
        if ff.order_embedding && !df.order_embedding {
            out.push("f is an order embedding but δ is not".into());
        }
        if gf.order_embedding && !cf.order_embedding {
            out.push("g is an order embedding but γ is not".into());
        }
        if ff.convex && !df.convex {
            out.push("f is convex but δ is not".into());
        }
        if gf.convex && !cf.convex {
            out.push("g is convex but γ is not".into());
        }
        out
    }

    /// Every morphism `ψ: D → Z` with `ψγ = β` and `ψδ = κ`. A cocone
    /// (`βf = κg`) admits exactly one.
    pub fn mediating_maps(&self, z: &SPoset, beta: &[usize], kappa: &[usize]) -> Result<Vec<Vec<usize>>> {
        require_morphism(beta, &self.b, z, "β")?;
        require_morphism(kappa, &self.c, z, "κ")?;
        Ok(sposet_maps(self.object(), z)
            .into_iter()
            .filter(|psi| {
                (0..self.b.len()).all(|x| psi[self.gamma[x]] == beta[x]) && (0..self.c.len()).all(|x| psi[self.delta[x]] == kappa[x])
            })
            .collect())
    }
}

/// A finite chain `X₀ → X₁ → … → X_k` with all composite maps.
#[derive(Clone, Debug)]
pub struct DirectSystem {
    objects: Vec<SPoset>,
    maps: BTreeMap<(usize, usize), Vec<usize>>,
}

impl DirectSystem {
    /// `maps` must contain every consecutive step `(i, i+1)`; any other
    /// `(i, j)` supplied is checked against the composite of the steps.
    pub fn new(objects: Vec<SPoset>, maps: BTreeMap<(usize, usize), Vec<usize>>) -> Result<DirectSystem> {
        let k = objects.len();
        if k == 0 {
            return Err(Error::BadInput("a direct system needs at least one object".into()));
        }
        for (&(i, j), f) in &maps {
            if i > j || j >= k {
                return Err(Error::BadInput(format!("map ({i}, {j}) does not go up the chain")));
            }
            require_morphism(f, &objects[i], &objects[j], &format!("φ({i},{j})"))?;
            if i == j && f.iter().enumerate().any(|(x, &y)| x != y) {
                return Err(Error::SystemIncoherent(format!("φ({i},{i}) is not the identity")));
            }
        }
        let mut all: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for i in 0..k {
            all.insert((i, i), (0..objects[i].len()).collect());
            for j in i + 1..k {
                let step = maps
                    .get(&(j - 1, j))
                    .ok_or_else(|| Error::BadInput(format!("missing step ({}, {j})", j - 1)))?;
                let prev = &all[&(i, j - 1)];
                let composite: Vec<usize> = prev.iter().map(|&x| step[x]).collect();
                if let Some(given) = maps.get(&(i, j)) {
                    if let Some(x) = (0..given.len()).find(|&x| given[x] != composite[x]) {
                        return Err(Error::SystemIncoherent(format!(
                            "φ({i},{j}) sends {} to {} but the composite gives {}",
                            objects[i].name(x),
                            objects[j].name(given[x]),
                            objects[j].name(composite[x])
                        )));
                    }
                }
                all.insert((i, j), composite);
            }
        }
        Ok(DirectSystem { objects, maps: all })
    }

    /// A system from its consecutive steps.
    pub fn from_steps(objects: Vec<SPoset>, steps: Vec<Vec<usize>>) -> Result<DirectSystem> {
        let maps = steps.into_iter().enumerate().map(|(i, f)| ((i, i + 1), f)).collect();
        DirectSystem::new(objects, maps)
    }

    pub fn objects(&self) -> &[SPoset] {
        &self.objects
    }

    /// `φ^i_j` for `i ≤ j`.
    pub fn map(&self, i: usize, j: usize) -> &[usize] {
        &self.maps[&(i, j)]
    }
}

/// The limit of a finite chain, built as the quotient of the disjoint union
/// by `x ∼ φ^i_j(x)`.
#[derive(Clone, Debug)]
pub struct DirectLimit {
    pub coproduct: Coproduct,
    pub quotient: Quotient,
    pub legs: Vec<Vec<usize>>,
}

impl DirectLimit {
    pub fn object(&self) -> &SPoset {
        self.quotient.sposet()
    }

    /// Checks that the cocone commutes and the order, injectivity and
    /// embedding criteria for the legs. Returns one line per violation.
    pub fn lemma_violations(&self, system: &DirectSystem) -> Vec<String> {
        let k = system.objects.len();
        let obj = &system.objects;
        let mut out = Vec::new();
        for i in 0..k {
            for j in i..k {
                let f = system.map(i, j);
                if (0..obj[i].len()).any(|x| self.legs[j][f[x]] != self.legs[i][x]) {
                    out.push(format!("cocone does not commute on ({i}, {j})"));
                }
            }
        }
        for i in 0..k {
            for j in 0..k {
                let top = i.max(j);
                for x in 0..obj[i].len() {
                    for y in 0..obj[j].len() {
                        let in_limit = self.object().leq(self.legs[i][x], self.legs[j][y]);
                        let eventually = (top..k).any(|m| obj[m].leq(system.map(i, m)[x], system.map(j, m)[y]));
                        if in_limit != eventually {
                            out.push(format!("leg order of {} and {} is not eventual order", obj[i].name(x), obj[j].name(y)));
                        }
                    }
                }
            }
            let leg = map_flags(&self.legs[i], obj[i].poset(), self.object().poset());
            let later: Vec<MapFlags> = (i..k).map(|m| map_flags(system.map(i, m), obj[i].poset(), obj[m].poset())).collect();
            if leg.injective != later.iter().all(|f| f.injective) {
                out.push(format!("leg {i} injectivity disagrees with the connecting maps"));
            }
            if leg.order_embedding != later.iter().all(|f| f.order_embedding) {
                out.push(format!("leg {i} embedding disagrees with the connecting maps"));
            }
        }
        out
    }
}

pub fn direct_limit(system: &DirectSystem) -> Result<DirectLimit> {
    let coproduct = coproduct_all(&system.objects)?;
    let k = system.objects.len();
    let mut r = Vec::new();
    for i in 0..k.saturating_sub(1) {
        let f = system.map(i, i + 1);
        for (x, &y) in f.iter().enumerate() {
            r.push((coproduct.injections[i][x], coproduct.injections[i + 1][y]));
        }
    }
    let quotient = theta_congruence(&coproduct.object, &r)?;
    let legs = coproduct
        .injections
        .iter()
        .map(|inj| inj.iter().map(|&p| quotient.class_of(p)).collect())
        .collect();
    Ok(DirectLimit { coproduct, quotient, legs })
}

/// `F = (Y ⊗_U S)/ν(R)`, `R = {(f(x)⊗s, f(x')⊗s') : xs ≤ x's'}`, with
/// `g(y) = (y⊗1)ν` and `h = g∘f`.
#[derive(Clone, Debug)]
pub struct FreeExtension {
    pub phi: PomonoidMorphism,
    pub x: SPoset,
    pub y: SPoset,
    pub f: Vec<usize>,
    pub tensor: TensorPoset,
    pub generators: Vec<(usize, usize)>,
    pub quotient: Quotient,
    pub g: Vec<usize>,
    pub h: Vec<usize>,
}

/// The free `S`-extension of `f: X → Y` along `phi: U → S`. `X` is a right
/// `S`-poset and `Y` a right `U`-poset; a left action on `Y` passes to `F`.
pub fn free_extension(phi: &PomonoidMorphism, x: &SPoset, y: &SPoset, f: &[usize]) -> Result<FreeExtension> {
    free_extension_guarded(phi, x, y, f, usize::MAX)
}

/// As [`free_extension`], failing when `|Y × S|` exceeds `max_cells`.
pub fn free_extension_guarded(phi: &PomonoidMorphism, x: &SPoset, y: &SPoset, f: &[usize], max_cells: usize) -> Result<FreeExtension> {
    let s = x.require_right("the extended poset")?;
    if !same_actor(s, &phi.target) {
        return Err(Error::ActorMismatch("X is not acted on by the target of phi".into()));
    }
    let yu = y.require_right("the base poset")?;
    if !same_actor(yu, &phi.source) {
        return Err(Error::ActorMismatch("Y is not acted on by the source of phi".into()));
    }
    let xu = x.right_part().restrict_right(phi)?;
    require_morphism(f, &xu, &y.right_part(), "f")?;
    let tensor = TensorPoset::guarded(y, &SPoset::bi_over(phi), max_cells)?;
    let mut generators = Vec::new();
    for a in 0..x.len() {
        for t in s.elements() {
            for a2 in 0..x.len() {
                for t2 in s.elements() {
                    if x.leq(x.act_right(a, t), x.act_right(a2, t2)) {
                        generators.push((tensor.class(f[a], t), tensor.class(f[a2], t2)));
                    }
                }
            }
        }
    }
    generators.sort_unstable();
    generators.dedup();
    let quotient = nu_congruence(tensor.sposet(), &generators)?;
    let one = s.identity();
    let g: Vec<usize> = (0..y.len()).map(|b| quotient.class_of(tensor.class(b, one))).collect();
    let h = f.iter().map(|&b| g[b]).collect();
    Ok(FreeExtension {
        phi: phi.clone(),
        x: x.clone(),
        y: y.clone(),
        f: f.to_vec(),
        tensor,
        generators,
        quotient,
        g,
        h,
    })
}

impl FreeExtension {
    pub fn object(&self) -> &SPoset {
        self.quotient.sposet()
    }

    pub fn len(&self) -> usize {
        self.quotient.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotient.is_empty()
    }

    /// `(y⊗s)ρ`.
    pub fn class(&self, y: usize, s: usize) -> usize {
        self.quotient.class_of(self.tensor.class(y, s))
    }

    /// The right `S`-poset part of `F`.
    pub fn right_object(&self) -> SPoset {
        self.object().right_part()
    }

    /// `g` is a `U`-poset map, `h` an `S`-poset map and
    /// `(y⊗s)ρ = g(y)s`; also the order rule
    /// `y ≤ y', s ≤ s' ⇒ (y⊗s)ρ ≤ (y'⊗s')ρ`.
    pub fn law_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let s = &self.phi.target;
        let fobj = self.right_object();
        let fu = match fobj.restrict_right(&self.phi) {
            Ok(v) => v,
            Err(e) => return vec![e.to_string()],
        };
        let g_ok = is_equivariant(&self.g, &self.y.right_part(), &fu) && map_flags(&self.g, self.y.poset(), fobj.poset()).monotone;
        if !g_ok {
            out.push("g is not a U-poset map".into());
        }
        let h_ok = is_equivariant(&self.h, &self.x.right_part(), &fobj) && map_flags(&self.h, self.x.poset(), fobj.poset()).monotone;
        if !h_ok {
            out.push("h is not an S-poset map".into());
        }
        for b in 0..self.y.len() {
            for t in s.elements() {
                if self.class(b, t) != fobj.act_right(self.g[b], t) {
                    out.push(format!("({}⊗{})ρ differs from g({0}){1}", self.y.name(b), s.name(t)));
                }
                for b2 in self.y.poset().relation().row(b).iter() {
                    for t2 in s.poset().relation().row(t).iter() {
                        if !fobj.leq(self.class(b, t), self.class(b2, t2)) {
                            out.push(format!(
                                "order rule fails for {}⊗{} ≤ {}⊗{}",
                                self.y.name(b),
                                s.name(t),
                                self.y.name(b2),
                                s.name(t2)
                            ));
                        }
                    }
                }
            }
        }
        out
    }

    /// All right `S`-poset maps `ψ: F → Z` with `ψg = α`, for a target `Z`
    /// and a `U`-map `α: Y → Z` whose composite `αf` is an `S`-map.
    pub fn mediating_maps(&self, z: &SPoset, alpha: &[usize]) -> Result<Vec<Vec<usize>>> {
        let zu = z.right_part().restrict_right(&self.phi)?;
        require_morphism(alpha, &self.y.right_part(), &zu, "α")?;
        let beta: Vec<usize> = self.f.iter().map(|&b| alpha[b]).collect();
        require_morphism(&beta, &self.x.right_part(), &z.right_part(), "αf")?;
        Ok(sposet_maps(&self.right_object(), &z.right_part())
            .into_iter()
            .filter(|psi| (0..self.y.len()).all(|b| psi[self.g[b]] == alpha[b]))
            .collect())
    }
}

/// `F` compared with the pushout of `X ←eval– X ⊗_U S –f⊗1→ Y ⊗_U S`.
#[derive(Clone, Debug)]
pub struct PushoutForm {
    pub pushout: Pushout,
    /// `(y⊗s)ρ ↦ γ(y⊗s)` on the classes of `F`.
    pub iso: Vec<usize>,
}

pub fn free_extension_pushout_form(ext: &FreeExtension) -> Result<PushoutForm> {
    let phi = &ext.phi;
    let s = &phi.target;
    let over = SPoset::bi_over(phi);
    let xu = ext.x.right_part().restrict_right(phi)?;
    let yr = ext.y.right_part();
    let fx = induced_map(&ext.f, &xu, &yr, &over)?;
    let xs = fx.source.sposet().clone();
    let eval: Vec<usize> = (0..fx.source.len())
        .map(|c| {
            let (a, t) = fx.source.representative(c);
            ext.x.act_right(a, t)
        })
        .collect();
    let p = pushout(&xs, fx.target.sposet(), &fx.assignment, &ext.x.right_part(), &eval)?;
    let yt = &fx.target;
    let mut iso = vec![usize::MAX; ext.len()];
    for b in 0..ext.y.len() {
        for t in s.elements() {
            let c = ext.class(b, t);
            let d = p.gamma[yt.class(b, t)];
            if iso[c] != usize::MAX && iso[c] != d {
                return Err(Error::IsoCheckFailed(format!("class of {}⊗{} has two images", ext.y.name(b), s.name(t))));
            }
            iso[c] = d;
        }
    }
    let flags = map_flags(&iso, ext.object().poset(), p.object().poset());
    if !(flags.order_embedding && flags.surjective) {
        return Err(Error::IsoCheckFailed("F is not order isomorphic to the pushout".into()));
    }
    Ok(PushoutForm { pushout: p, iso })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::enumerate::{right_sposets_up_to, Limits};
    use crate::fixtures;
    use crate::pomonoid::Pomonoid;
    use crate::poset::names;

    fn trivial_chain(n: usize) -> SPoset {
        let t = Arc::new(Pomonoid::trivial());
        let names = (0..n).map(|i| format!("c{i}")).collect();
        SPoset::from_parts_unchecked(Poset::chain(names), None, Some(Action::new(t, (0..n).collect())))
    }

    fn trivial_point() -> SPoset {
        SPoset::one_point(None, Some(&Arc::new(Pomonoid::trivial())))
    }

    #[test]
    fn coproduct_of_points_is_an_antichain() {
        let p = trivial_point();
        let c = coproduct(&p, &p).unwrap();
        assert_eq!(c.object.len(), 2);
        assert!(!c.object.leq(0, 1) && !c.object.leq(1, 0));
        assert_eq!(c.object.name(1), "2.*");
    }

    #[test]
    fn coproduct_of_the_core_with_itself() {
        let s = Arc::new(fixtures::strong_gap_pomonoid());
        let u = fixtures::strong_gap_core(&s);
        let reg = SPoset::regular_right(u.as_pomonoid());
        let c = coproduct(&reg, &reg).unwrap();
        assert_eq!(c.object.len(), 6);
        for inj in &c.injections {
            let flags = map_flags(inj, reg.poset(), c.object.poset());
            assert!(flags.order_embedding && flags.convex);
        }
        assert_eq!(c.locate(4), (1, 1));
    }

    #[test]
    fn coproduct_rejects_mixed_actors() {
        let a = SPoset::regular_right(&Arc::new(fixtures::max_chain(1)));
        let b = SPoset::regular_right(&Arc::new(fixtures::cyclic_group(3)));
        assert!(matches!(coproduct(&a, &b), Err(Error::ActorMismatch(_))));
    }

    #[test]
    fn pushout_along_identities() {
        let a = trivial_chain(2);
        let id = vec![0, 1];
        let p = pushout(&a, &a, &id, &a, &id).unwrap();
        assert_eq!(p.object().len(), 2);
        assert!(p.object().leq(p.gamma[0], p.gamma[1]));
        assert!(p.lemma_violations().is_empty());
    }

    #[test]
    fn chains_glued_at_the_bottom() {
        let a = trivial_point();
        let b = trivial_chain(2);
        let p = pushout(&a, &b, &[0], &b, &[0]).unwrap();
        assert_eq!(p.object().len(), 3);
        assert_eq!(p.gamma[0], p.delta[0]);
        assert!(!p.object().leq(p.gamma[1], p.delta[1]) && !p.object().leq(p.delta[1], p.gamma[1]));
        assert!(p.object().leq(p.gamma[0], p.delta[1]));
        assert_eq!(p.gap_witnesses(0, 1).unwrap(), (0, 0));
        assert!(p.lemma_violations().is_empty());
        // the cocone into the three-point poset has exactly one mediating map
        let maps = p.mediating_maps(&b, &[0, 1], &[0, 1]).unwrap();
        assert_eq!(maps.len(), 1);
    }

    #[test]
    fn gap_witness_precondition() {
        let a = trivial_point();
        let b = trivial_chain(2);
        let p = pushout(&a, &b, &[0], &b, &[1]).unwrap();
        assert!(matches!(p.gap_witnesses(1, 0), Err(Error::PreconditionFailed(_))));
    }

    #[test]
    fn constant_and_embedding_systems() {
        let x = trivial_chain(2);
        let sys = DirectSystem::from_steps(vec![x.clone(), x.clone(), x.clone()], vec![vec![0, 1], vec![0, 1]]).unwrap();
        let lim = direct_limit(&sys).unwrap();
        assert_eq!(lim.object().len(), 2);
        assert!(lim.lemma_violations(&sys).is_empty());

        let big = trivial_chain(3);
        let sys = DirectSystem::from_steps(vec![x, big], vec![vec![0, 2]]).unwrap();
        let lim = direct_limit(&sys).unwrap();
        assert_eq!(lim.object().len(), 3);
        assert!(map_flags(&lim.legs[0], sys.objects()[0].poset(), lim.object().poset()).order_embedding);
        assert!(lim.lemma_violations(&sys).is_empty());
    }

    #[test]
    fn collapsing_system() {
        let sys = DirectSystem::from_steps(vec![trivial_chain(2), trivial_point()], vec![vec![0, 0]]).unwrap();
        let lim = direct_limit(&sys).unwrap();
        assert!(!map_flags(&lim.legs[0], sys.objects()[0].poset(), lim.object().poset()).injective);
        assert!(lim.lemma_violations(&sys).is_empty());
    }

    #[test]
    fn incoherent_system() {
        let x = trivial_chain(2);
        let mut maps = BTreeMap::new();
        maps.insert((0, 1), vec![0, 1]);
        maps.insert((1, 2), vec![0, 1]);
        maps.insert((0, 2), vec![1, 1]);
        assert!(matches!(DirectSystem::new(vec![x.clone(), x.clone(), x], maps), Err(Error::SystemIncoherent(_))));
    }

    #[test]
    fn extension_of_an_s_poset_is_itself() {
        let s = Arc::new(fixtures::strong_gap_pomonoid());
        let id = PomonoidMorphism::identity_on(s.clone());
        let x = SPoset::regular_right(&s);
        let ext = free_extension(&id, &x, &x, &(0..s.len()).collect::<Vec<_>>()).unwrap();
        assert_eq!(ext.len(), s.len());
        assert!(ext.law_violations().is_empty());
        let flags = map_flags(&ext.g, x.poset(), ext.object().poset());
        assert!(flags.order_embedding && flags.surjective);
        free_extension_pushout_form(&ext).unwrap();
    }

    #[test]
    fn extension_along_the_core() {
        let s = Arc::new(fixtures::strong_gap_pomonoid());
        let u = fixtures::strong_gap_core(&s);
        let phi = u.inclusion().clone();
        // X = S, Y = S as a right U-poset, f = identity
        let x = SPoset::regular_right(&s);
        let y = x.restrict_right(&phi).unwrap();
        let ext = free_extension(&phi, &x, &y, &(0..s.len()).collect::<Vec<_>>()).unwrap();
        assert!(ext.law_violations().is_empty());
        assert_eq!(ext.len(), s.len());
        free_extension_pushout_form(&ext).unwrap();
    }

    #[test]
    fn universal_property_on_small_targets() {
        let s = Arc::new(fixtures::max_chain(1));
        let u = trivial_sub(&s);
        let phi = u.inclusion().clone();
        let x = SPoset::one_point(None, Some(&s));
        let y = SPoset::from_parts_unchecked(
            Poset::chain(names(&["p", "q"])),
            None,
            Some(Action::new(u.as_pomonoid().clone(), vec![0, 1])),
        );
        let ext = free_extension(&phi, &x, &y, &[0]).unwrap();
        assert!(ext.law_violations().is_empty());
        for z in right_sposets_up_to(&s, 2, &Limits::default()).unwrap() {
            let zu = z.restrict_right(&phi).unwrap();
            for alpha in sposet_maps(&y, &zu) {
                let beta = vec![alpha[0]];
                if !is_equivariant(&beta, &x, &z) {
                    continue;
                }
                assert_eq!(ext.mediating_maps(&z, &alpha).unwrap().len(), 1);
            }
        }
    }

    fn trivial_sub(s: &Arc<Pomonoid>) -> crate::pomonoid::SubPomonoid {
        crate::pomonoid::SubPomonoid::new(s.clone(), &[s.identity()]).unwrap()
    }
}
