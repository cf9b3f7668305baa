use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::words::{replay_trace, Word, WordSearch, WordVerdict};
use super::PoAmalgam;
use crate::constructions::{free_extension_guarded, DirectSystem};
use crate::error::{Error, Result};
use crate::poset::{embedding_witness, map_flags};
use crate::sposet::SPoset;
use crate::tensor::TensorPoset;

/// Largest `|Y_{n-1}| · |S_i|` a level may start from unless overridden.
pub const DEFAULT_SIZE_GUARD: usize = 2000;

/// `POMALG_MAX_CELLS` when set to a number, else [`DEFAULT_SIZE_GUARD`].
pub fn size_guard_from_env() -> usize {
    std::env::var("POMALG_MAX_CELLS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_SIZE_GUARD)
}

/// `Y_n` as a `(U, S_i)`-poset with its connecting map from `Y_{n-1}`.
#[derive(Clone, Debug)]
pub struct TowerLevel {
    pub n: usize,
    /// Factor acting on the right, `0` for odd `n` and `1` for even `n`.
    pub factor: usize,
    pub object: SPoset,
    /// `k_{n-1}: Y_{n-1} → Y_n`; empty at level 1.
    pub k: Vec<usize>,
    /// `[…, s] = decode[y · |S_i| + s]` for `y ∈ Y_{n-1}`; level 1 reads `y = 0`.
    pub decode: Vec<usize>,
}

impl TowerLevel {
    pub fn len(&self) -> usize {
        self.object.len()
    }

    pub fn is_empty(&self) -> bool {
        self.object.is_empty()
    }
}

/// The direct system `Y_1 → Y_2 → … → Y_N` of the amalgam.
#[derive(Clone, Debug)]
pub struct Tower {
    pub amalgam: PoAmalgam,
    pub levels: Vec<TowerLevel>,
}

/// Builds `Y_1, …, Y_depth`, refusing any level whose tensor would exceed
/// `guard` cells.
pub fn build_tower(a: &PoAmalgam, depth: usize, guard: usize) -> Result<Tower> {
    if depth == 0 {
        return Err(Error::BadInput("the tower needs at least one level".into()));
    }
    let [phi1, phi2] = [a.embedding(0), a.embedding(1)];
    let s1 = a.factor(0);
    let y1 = SPoset::bi_over(phi1);
    let mut levels = vec![TowerLevel {
        n: 1,
        factor: 0,
        decode: s1.elements().collect(),
        object: y1,
        k: Vec::new(),
    }];
    if depth >= 2 {
        let s2 = a.factor(1);
        let cells = s1.len() * s2.len();
        if cells > guard {
            return Err(Error::SizeGuardExceeded { level: 2, size: cells });
        }
        let left = levels[0].object.restrict_right(phi1)?;
        let t = TensorPoset::new(&left, &SPoset::bi_over(phi2))?;
        let decode: Vec<usize> = s1.elements().flat_map(|x| s2.elements().map(move |y| (x, y))).map(|(x, y)| t.class(x, y)).collect();
        let k = s1.elements().map(|x| t.class(x, s2.identity())).collect();
        levels.push(TowerLevel {
            n: 2,
            factor: 1,
            object: t.sposet().clone(),
            k,
            decode,
        });
    }
    for n in 3..=depth {
        let i = (n + 1) % 2;
        let phi = a.embedding(i);
        let s = a.factor(i);
        let prev = &levels[n - 2];
        let cells = prev.len() * s.len();
        if cells > guard {
            return Err(Error::SizeGuardExceeded { level: n, size: cells });
        }
        let x = &levels[n - 3].object;
        let y = prev.object.restrict_right(a.embedding(prev.factor))?;
        let ext = free_extension_guarded(phi, x, &y, &prev.k, guard).map_err(|e| match e {
            Error::SizeGuardExceeded { size, .. } => Error::SizeGuardExceeded { level: n, size },
            e => e,
        })?;
        let decode = (0..prev.len()).flat_map(|b| s.elements().map(move |t| (b, t))).map(|(b, t)| ext.class(b, t)).collect();
        levels.push(TowerLevel {
            n,
            factor: i,
            object: ext.object().clone(),
            k: ext.g.clone(),
            decode,
        });
    }
    Ok(Tower {
        amalgam: a.clone(),
        levels,
    })
}

impl Tower {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, n: usize) -> &TowerLevel {
        &self.levels[n - 1]
    }

    /// `[s₁, …, s_n]` for a tuple alternating from `S₁`.
    pub fn bracket(&self, tuple: &[usize]) -> usize {
        assert!(!tuple.is_empty() && tuple.len() <= self.depth(), "bracket length outside the tower");
        let mut e = 0;
        for (l, &s) in tuple.iter().enumerate() {
            let level = &self.levels[l];
            e = level.decode[e * self.amalgam.factor(level.factor).len() + s];
        }
        e
    }

    /// `k_{n-1} ∘ … ∘ k_1: Y_1 → Y_n`.
    pub fn k_power(&self, n: usize) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.levels[0].len()).collect();
        for level in &self.levels[1..n] {
            out = out.iter().map(|&y| level.k[y]).collect();
        }
        out
    }

    /// `k_{n-1} ∘ … ∘ k_2 ∘ h¹: S₂ → Y_n` for `n ≥ 2`.
    pub fn h_power(&self, n: usize) -> Vec<usize> {
        let one = self.amalgam.factor(0).identity();
        let mut out: Vec<usize> = self.amalgam.factor(1).elements().map(|t| self.bracket(&[one, t])).collect();
        for level in &self.levels[2..n] {
            out = out.iter().map(|&y| level.k[y]).collect();
        }
        out
    }

    fn tuples(&self, n: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for l in 0..n {
            let m = self.amalgam.factor(l % 2).len();
            out = out.into_iter().flat_map(|t: Vec<usize>| (0..m).map(move |s| [t.clone(), vec![s]].concat())).collect();
        }
        out
    }

    /// Pairs `([s₁, …, s_{i−1}, 1, s_{i+1}, …, s_n], [s₁, …, s_{i−1}s_{i+1}, …, s_n, 1, 1])`
    /// at level `n` for every `2 ≤ i < n`.
    pub fn bracket_identity_pairs(&self, n: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
        let mut out = Vec::new();
        for t in self.tuples(n) {
            for i in 1..n.saturating_sub(1) {
                let one = self.amalgam.factor(i % 2).identity();
                if t[i] != one {
                    continue;
                }
                let j = (i + 1) % 2;
                let merged = self.amalgam.factor(j).mul(t[i - 1], t[i + 1]);
                let mut rhs: Vec<usize> = t[..i - 1].to_vec();
                rhs.push(merged);
                rhs.extend_from_slice(&t[i + 2..]);
                let l = rhs.len();
                rhs.push(self.amalgam.factor(l % 2).identity());
                rhs.push(self.amalgam.factor((l + 1) % 2).identity());
                out.push((t.clone(), rhs));
            }
        }
        out
    }

    /// Every bracket-identity pair whose two sides differ, at every level.
    pub fn corollary_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for n in 3..=self.depth() {
            for (l, r) in self.bracket_identity_pairs(n) {
                if self.bracket(&l) != self.bracket(&r) {
                    out.push(format!("{} != {}", self.render_bracket(&l), self.render_bracket(&r)));
                }
            }
        }
        out
    }

    /// Raising one entry of a bracket must not lower the bracket.
    pub fn monotonicity_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for n in 1..=self.depth() {
            let obj = &self.level(n).object;
            for t in self.tuples(n) {
                let b = self.bracket(&t);
                for i in 0..n {
                    let s = self.amalgam.factor(i % 2);
                    for up in s.poset().relation().row(t[i]).iter() {
                        let mut t2 = t.clone();
                        t2[i] = up;
                        if !obj.leq(b, self.bracket(&t2)) {
                            out.push(format!("{} ≰ {}", self.render_bracket(&t), self.render_bracket(&t2)));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn render_bracket(&self, tuple: &[usize]) -> String {
        let names: Vec<&str> = tuple.iter().enumerate().map(|(l, &s)| self.amalgam.factor(l % 2).name(s)).collect();
        format!("[{}]", names.join(", "))
    }

    /// The levels as `(U, U)`-posets with the maps `k_n`.
    pub fn as_direct_system(&self) -> Result<DirectSystem> {
        let mut objects = Vec::new();
        let mut steps = Vec::new();
        for level in &self.levels {
            objects.push(level.object.restrict_right(self.amalgam.embedding(level.factor))?);
            if level.n > 1 {
                steps.push(level.k.clone());
            }
        }
        DirectSystem::from_steps(objects, steps)
    }
}

/// Injectivity and order-embedding flags for `kⁿ` and `hⁿ` into `Y_{n+1}`.
#[derive(Clone, Debug, Serialize)]
pub struct LevelFlags {
    pub n: usize,
    pub size: usize,
    pub k_injective: bool,
    pub k_embedding: bool,
    pub h_injective: bool,
    pub h_embedding: bool,
}

/// A map in the tower that fails to be an order embedding.
#[derive(Clone, Debug, Serialize)]
pub struct Refutation {
    /// `"k"` or `"h"`.
    pub map: String,
    pub n: usize,
    /// Whether the map is at least injective.
    pub injective: bool,
    pub witness: String,
}

#[derive(Clone, Debug, Serialize)]
pub enum Embeddability {
    /// All tower maps are order embeddings up to the depth and the strong
    /// condition holds on `Y₂`.
    StronglyPoembeddableToDepth(usize),
    /// All tower maps are order embeddings up to the depth but `s₁⊗1 = 1⊗s₂`
    /// for some pair outside the core.
    PoembeddableToDepth(usize),
    Refuted(Refutation),
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct EmbeddabilityReport {
    pub depth: usize,
    pub levels: Vec<LevelFlags>,
    pub strong: bool,
    /// `(s₁, s₂)` with `s₁⊗1 = 1⊗s₂` that do not come from one core element.
    pub strong_witness: Option<(String, String)>,
    pub verdict: Embeddability,
}

pub fn embeddability_report(t: &Tower) -> EmbeddabilityReport {
    let a = &t.amalgam;
    let (s1, s2) = (a.factor(0), a.factor(1));
    let mut levels = Vec::new();
    let mut refutation = None;
    for n in 2..=t.depth() {
        let target = t.level(n).object.poset();
        let k = t.k_power(n);
        let h = t.h_power(n);
        let kf = map_flags(&k, s1.poset(), target);
        let hf = map_flags(&h, s2.poset(), target);
        if refutation.is_none() {
            for (name, f, flags, src) in [("k", &k, kf, s1), ("h", &h, hf, s2)] {
                if flags.order_embedding {
                    continue;
                }
                let witness = match embedding_witness(f, src.poset(), target) {
                    Some((x, y)) => format!("{} ≰ {} but their images are ordered in Y_{n}", src.name(x), src.name(y)),
                    None => "not an order embedding".into(),
                };
                refutation = Some(Refutation {
                    map: name.into(),
                    n: n - 1,
                    injective: flags.injective,
                    witness,
                });
                break;
            }
        }
        levels.push(LevelFlags {
            n: n - 1,
            size: t.level(n).len(),
            k_injective: kf.injective,
            k_embedding: kf.order_embedding,
            h_injective: hf.injective,
            h_embedding: hf.order_embedding,
        });
    }
    let mut strong_witness = None;
    if t.depth() >= 2 {
        let (k, h) = (t.k_power(2), t.h_power(2));
        'outer: for x in s1.elements() {
            for y in s2.elements() {
                if k[x] != h[y] {
                    continue;
                }
                let from_core = a.core_preimage(0, x).is_some_and(|u| a.core_letter(1, u) == y);
                if !from_core {
                    strong_witness = Some((s1.name(x).to_string(), s2.name(y).to_string()));
                    break 'outer;
                }
            }
        }
    }
    let strong = t.depth() >= 2 && strong_witness.is_none();
    let verdict = match refutation {
        Some(r) => Embeddability::Refuted(r),
        None if t.depth() < 2 => Embeddability::Unknown,
        None if strong => Embeddability::StronglyPoembeddableToDepth(t.depth()),
        None => Embeddability::PoembeddableToDepth(t.depth()),
    };
    EmbeddabilityReport {
        depth: t.depth(),
        levels,
        strong,
        strong_witness,
        verdict,
    }
}

/// Agreement between the order of `Y_n` and bounded word search.
#[derive(Clone, Debug, Default, Serialize)]
pub struct WordConsistency {
    pub level: usize,
    /// Pairs of tuples with `[s…] ≤ [t…]`.
    pub pairs: usize,
    pub yes: usize,
    pub unknown: usize,
    pub bracket_pairs: usize,
    /// Bracket-identity pairs found in both directions.
    pub bracket_yes: usize,
    /// Traces that fail to replay; always a defect.
    pub replay_failures: Vec<String>,
    /// Sample of pairs left at Unknown.
    pub unknown_sample: Vec<String>,
}

/// Runs the word search on every ordered pair of brackets at `level`, and on
/// every bracket-identity pair in both directions.
pub fn tower_vs_words(t: &Tower, level: usize, depth: usize) -> Result<WordConsistency> {
    if level == 0 || level > t.depth() {
        return Err(Error::BadInput(format!("level {level} is outside the built tower")));
    }
    let a = &t.amalgam;
    let obj = &t.level(level).object;
    let tuples = t.tuples(level);
    let mut search = WordSearch::new(a);
    let mut out = WordConsistency {
        level,
        ..Default::default()
    };
    let mut by_class: BTreeMap<usize, Vec<Word>> = BTreeMap::new();
    for tup in &tuples {
        let w = a.tuple_word(tup);
        let list = by_class.entry(t.bracket(tup)).or_default();
        if !list.contains(&w) {
            list.push(w);
        }
    }
    let cap = level + 2;
    let mut sources: HashMap<Word, Vec<(usize, &Word)>> = HashMap::new();
    for (&c, ws) in &by_class {
        for w in ws {
            for (&c2, ws2) in &by_class {
                if obj.leq(c, c2) {
                    for w2 in ws2 {
                        sources.entry(w.clone()).or_default().push((c2, w2));
                    }
                }
            }
        }
    }
    let mut keys: Vec<&Word> = sources.keys().collect();
    keys.sort();
    for w in keys {
        let reach = search.reach(w, depth, cap);
        for &(_, w2) in &sources[w] {
            out.pairs += 1;
            match reach.trace_to(w2) {
                Some(trace) => {
                    out.yes += 1;
                    if let Err(e) = replay_trace(a, w, w2, &trace) {
                        out.replay_failures.push(format!("{} → {}: {e}", a.render_word(w), a.render_word(w2)));
                    }
                }
                None => {
                    out.unknown += 1;
                    if out.unknown_sample.len() < 10 {
                        out.unknown_sample.push(format!("{} ≤ {}", a.render_word(w), a.render_word(w2)));
                    }
                }
            }
        }
    }
    if level >= 3 {
        for (l, r) in t.bracket_identity_pairs(level) {
            out.bracket_pairs += 1;
            let (wl, wr) = (a.tuple_word(&l), a.tuple_word(&r));
            let mut both = true;
            for (p, q) in [(&wl, &wr), (&wr, &wl)] {
                match search.leq(p, q, depth) {
                    WordVerdict::Yes(trace) => {
                        if let Err(e) = replay_trace(a, p, q, &trace) {
                            out.replay_failures.push(format!("{} → {}: {e}", a.render_word(p), a.render_word(q)));
                            both = false;
                        }
                    }
                    WordVerdict::Unknown => both = false,
                }
            }
            if both {
                out.bracket_yes += 1;
            }
        }
    }
    Ok(out)
}
