use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use super::PoAmalgam;
use crate::error::{Error, Result};
use crate::pomonoid::PomonoidMorphism;

/// An element of factor `factor + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Letter {
    pub factor: u8,
    pub elem: usize,
}

impl Letter {
    pub fn new(factor: usize, elem: usize) -> Letter {
        Letter {
            factor: factor as u8,
            elem,
        }
    }

    fn side(self) -> usize {
        usize::from(self.factor)
    }
}

/// A word of the free product in normal form: no identity letters and no
/// two adjacent letters from the same factor. The empty word is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// The step types generating the order of the amalgamated free product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum StepKind {
    S,
    M,
    #[serde(rename = "E(a)")]
    Ea,
    #[serde(rename = "E(b)")]
    Eb,
    #[serde(rename = "E(c)")]
    Ec,
    #[serde(rename = "E(d)")]
    Ed,
    #[serde(rename = "E(e)")]
    Ee,
    #[serde(rename = "E(f)")]
    Ef,
    O,
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StepKind::S => "S",
            StepKind::M => "M",
            StepKind::Ea => "E(a)",
            StepKind::Eb => "E(b)",
            StepKind::Ec => "E(c)",
            StepKind::Ed => "E(d)",
            StepKind::Ee => "E(e)",
            StepKind::Ef => "E(f)",
            StepKind::O => "O",
        };
        f.write_str(s)
    }
}

/// One step from the previous word. `raw` is the letter sequence exactly as
/// the step shape produces it; `to` is its normal form. An empty source word
/// is read as the single identity letter of factor `padded`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub kind: StepKind,
    pub position: usize,
    /// The core element `u` moved by an S, M or E step.
    pub scalar: Option<usize>,
    pub padded: Option<u8>,
    pub raw: Vec<Letter>,
    pub to: Word,
}

/// Outcome of a bounded search: a replayable derivation, or nothing found
/// within the bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum WordVerdict {
    Yes(Vec<StepRecord>),
    Unknown,
}

impl WordVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, WordVerdict::Yes(_))
    }
}

/// Factorisations of every element through every core letter.
#[derive(Clone, Debug)]
pub(crate) struct Divisions {
    m: usize,
    /// `a` with `a·φ(u) = s`, at `s·m + u`.
    right: Vec<Vec<usize>>,
    /// `b` with `φ(u)·b = s`.
    left: Vec<Vec<usize>>,
    /// `(a, b)` with `a·φ(u)·b = s`.
    both: Vec<Vec<(usize, usize)>>,
}

impl Divisions {
    pub(crate) fn new(phi: &PomonoidMorphism) -> Divisions {
        let s = &phi.target;
        let m = phi.source.len();
        let n = s.len();
        let mut right = vec![Vec::new(); n * m];
        let mut left = vec![Vec::new(); n * m];
        let mut both = vec![Vec::new(); n * m];
        for u in 0..m {
            let p = phi.apply(u);
            for a in 0..n {
                right[s.mul(a, p) * m + u].push(a);
                left[s.mul(p, a) * m + u].push(a);
                for b in 0..n {
                    both[s.mul(s.mul(a, p), b) * m + u].push((a, b));
                }
            }
        }
        Divisions { m, right, left, both }
    }
}

impl PoAmalgam {
    /// Multiplies adjacent letters of the same factor and drops identities.
    pub fn normalize(&self, raw: &[Letter]) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(raw.len());
        for &l in raw {
            let s = self.factor(l.side());
            if l.elem == s.identity() {
                continue;
            }
            match out.last_mut() {
                Some(top) if top.factor == l.factor => {
                    top.elem = s.mul(top.elem, l.elem);
                    if top.elem == s.identity() {
                        out.pop();
                    }
                }
                _ => out.push(l),
            }
        }
        Word(out)
    }

    /// Checks letter ranges and normalises.
    pub fn word(&self, letters: &[Letter]) -> Result<Word> {
        for l in letters {
            if l.factor > 1 || l.elem >= self.factor(l.side()).len() {
                return Err(Error::BadInput(format!("letter {l:?} is outside both factors")));
            }
        }
        Ok(self.normalize(letters))
    }

    /// Parses space-separated `factor:element` tokens such as `1:e 2:b`.
    /// The empty string and `1` denote the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "1" {
            return Ok(Word::empty());
        }
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let (f, e) = tok
                .split_once(':')
                .ok_or_else(|| Error::BadInput(format!("word token {tok:?} is not factor:element")))?;
            let j = match f {
                "1" => 0,
                "2" => 1,
                _ => return Err(Error::BadInput(format!("factor {f:?} is not 1 or 2"))),
            };
            let s = self.factor(j);
            let elem = s
                .index_of(e)
                .ok_or_else(|| Error::BadInput(format!("{e:?} is not an element of factor {f}")))?;
            letters.push(Letter::new(j, elem));
        }
        Ok(self.normalize(&letters))
    }

    pub fn render_letters(&self, letters: &[Letter]) -> String {
        if letters.is_empty() {
            return "1".into();
        }
        letters
            .iter()
            .map(|l| format!("{}:{}", l.factor + 1, self.factor(l.side()).name(l.elem)))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn render_word(&self, w: &Word) -> String {
        self.render_letters(w.letters())
    }

    /// `(s₁, …, sₙ)` with `s₁ ∈ S₁` and factors alternating.
    pub fn tuple_word(&self, tuple: &[usize]) -> Word {
        let raw: Vec<Letter> = tuple.iter().enumerate().map(|(i, &s)| Letter::new(i % 2, s)).collect();
        self.normalize(&raw)
    }

    pub fn word_mult(&self, w: &Word, w2: &Word) -> Word {
        let raw: Vec<Letter> = w.0.iter().chain(&w2.0).copied().collect();
        self.normalize(&raw)
    }

    /// Equal length, matching factors and letterwise order.
    pub fn word_syntactic_leq(&self, w: &Word, w2: &Word) -> bool {
        w.len() == w2.len()
            && w.0.iter().zip(&w2.0).all(|(a, b)| a.factor == b.factor && self.factor(a.side()).leq(a.elem, b.elem))
    }

    fn identity_letter(&self, j: usize) -> Letter {
        Letter::new(j, self.factor(j).identity())
    }

    /// Every word one E, S, M or upward O step away, each with its record.
    pub fn step_neighbors(&self, w: &Word) -> Vec<(Word, StepRecord)> {
        let mut out = Vec::new();
        if w.is_empty() {
            for j in 0..2 {
                let base = [self.identity_letter(j)];
                self.neighbors_of(&base, Some(j as u8), &mut out);
            }
        } else {
            self.neighbors_of(&w.0, None, &mut out);
        }
        let mut seen = std::collections::HashSet::new();
        out.retain(|(v, _)| v != w && seen.insert(v.clone()));
        out
    }

    fn neighbors_of(&self, base: &[Letter], padded: Option<u8>, out: &mut Vec<(Word, StepRecord)>) {
        let n = base.len();
        let core_one = self.core().identity();
        let mut push = |kind: StepKind, position: usize, scalar: Option<usize>, raw: Vec<Letter>| {
            let to = self.normalize(&raw);
            out.push((
                to.clone(),
                StepRecord {
                    kind,
                    position,
                    scalar,
                    padded,
                    raw,
                    to,
                },
            ));
        };
        for i in 0..n {
            let Letter { elem: s, .. } = base[i];
            let j = base[i].side();
            let k = 1 - j;
            let sj = self.factor(j);
            let sk = self.factor(k);
            let div = &self.tables[j];
            let m = div.m;
            // O: raise one letter
            for s2 in sj.poset().relation().row(s).iter().filter(|&t| t != s) {
                let mut raw = base.to_vec();
                raw[i] = Letter::new(j, s2);
                push(StepKind::O, i, None, raw);
            }
            for u in (0..m).filter(|&u| u != core_one) {
                let uk = Letter::new(k, self.core_letter(k, u));
                // M: s = a·u·b splits into a, u, b
                for &(a, b) in &div.both[s * m + u] {
                    let mut raw = base[..i].to_vec();
                    raw.extend([Letter::new(j, a), uk, Letter::new(j, b)]);
                    raw.extend_from_slice(&base[i + 1..]);
                    push(StepKind::M, i, Some(u), raw);
                }
                // E(c): the last letter s = a·u becomes a, u
                if i == n - 1 {
                    for &a in &div.right[s * m + u] {
                        let mut raw = base[..i].to_vec();
                        raw.extend([Letter::new(j, a), uk]);
                        push(StepKind::Ec, i, Some(u), raw);
                    }
                }
                // E(e): the first letter s = u·b becomes u, b
                if i == 0 {
                    for &b in &div.left[s * m + u] {
                        let mut raw = vec![uk, Letter::new(j, b)];
                        raw.extend_from_slice(&base[1..]);
                        push(StepKind::Ee, i, Some(u), raw);
                    }
                }
                if i + 1 < n && base[i + 1].side() == k {
                    let t = base[i + 1].elem;
                    // E(a): (s_i u, t) becomes (s_i, u t)
                    for &a in &div.right[s * m + u] {
                        let mut raw = base.to_vec();
                        raw[i] = Letter::new(j, a);
                        raw[i + 1] = Letter::new(k, sk.mul(uk.elem, t));
                        push(StepKind::Ea, i, Some(u), raw);
                    }
                    // E(b): (s, u t') becomes (s u, t')
                    let kdiv = &self.tables[k];
                    for &b in &kdiv.left[t * m + u] {
                        let mut raw = base.to_vec();
                        raw[i] = Letter::new(j, sj.mul(s, self.core_letter(j, u)));
                        raw[i + 1] = Letter::new(k, b);
                        push(StepKind::Eb, i, Some(u), raw);
                    }
                }
            }
            // steps that absorb a letter lying in the core
            let Some(u) = self.core_preimage(j, s) else { continue };
            if u == core_one {
                continue;
            }
            if i > 0 && i + 1 < n && base[i - 1].side() == k && base[i + 1].side() == k {
                // S: (p, u, q) becomes (p u q)
                let v = sk.mul(sk.mul(base[i - 1].elem, self.core_letter(k, u)), base[i + 1].elem);
                let mut raw = base[..i - 1].to_vec();
                raw.push(Letter::new(k, v));
                raw.extend_from_slice(&base[i + 2..]);
                push(StepKind::S, i, Some(u), raw);
            }
            if i == n - 1 && n >= 2 && base[i - 1].side() == k {
                // E(d): (…, p, u) becomes (…, p u)
                let mut raw = base[..i - 1].to_vec();
                raw.push(Letter::new(k, sk.mul(base[i - 1].elem, self.core_letter(k, u))));
                push(StepKind::Ed, i, Some(u), raw);
            }
            if i == 0 && n >= 2 && base[1].side() == k {
                // E(f): (u, q, …) becomes (u q, …)
                let mut raw = vec![Letter::new(k, sk.mul(self.core_letter(k, u), base[1].elem))];
                raw.extend_from_slice(&base[2..]);
                push(StepKind::Ef, i, Some(u), raw);
            }
        }
    }

    /// Searches for a derivation `w → … → w2` of at most `depth` steps whose
    /// intermediate words have at most `max(|w|, |w2|) + 2` letters.
    pub fn word_leq_bounded(&self, w: &Word, w2: &Word, depth: usize) -> WordVerdict {
        WordSearch::new(self).leq(w, w2, depth)
    }

    /// Breadth-first reachability from `w` within `depth` steps and a
    /// length cap.
    pub fn reachability(&self, w: &Word, depth: usize, cap: usize) -> Reachability {
        WordSearch::new(self).reach(w, depth, cap)
    }
}

/// Bounded searches over one amalgam that share a cache of step neighbors.
pub struct WordSearch<'a> {
    amalgam: &'a PoAmalgam,
    cache: HashMap<Word, Vec<(Word, StepRecord)>>,
}

impl<'a> WordSearch<'a> {
    pub fn new(amalgam: &'a PoAmalgam) -> WordSearch<'a> {
        WordSearch {
            amalgam,
            cache: HashMap::new(),
        }
    }

    pub fn reach(&mut self, w: &Word, depth: usize, cap: usize) -> Reachability {
        let mut parent: HashMap<Word, Option<(Word, StepRecord)>> = HashMap::new();
        parent.insert(w.clone(), None);
        let mut queue = VecDeque::from([(w.clone(), 0usize)]);
        while let Some((v, d)) = queue.pop_front() {
            if d == depth {
                continue;
            }
            let a = self.amalgam;
            let next = self.cache.entry(v.clone()).or_insert_with(|| a.step_neighbors(&v));
            for (x, rec) in next.iter() {
                if x.len() > cap || parent.contains_key(x) {
                    continue;
                }
                parent.insert(x.clone(), Some((v.clone(), rec.clone())));
                queue.push_back((x.clone(), d + 1));
            }
        }
        Reachability { parent }
    }

    /// As [`PoAmalgam::word_leq_bounded`].
    pub fn leq(&mut self, w: &Word, w2: &Word, depth: usize) -> WordVerdict {
        let cap = w.len().max(w2.len()) + 2;
        match self.reach(w, depth, cap).trace_to(w2) {
            Some(t) => WordVerdict::Yes(t),
            None => WordVerdict::Unknown,
        }
    }
}

/// Words reached by a bounded search, with a shortest derivation to each.
#[derive(Clone, Debug)]
pub struct Reachability {
    parent: HashMap<Word, Option<(Word, StepRecord)>>,
}

impl Reachability {
    pub fn contains(&self, w: &Word) -> bool {
        self.parent.contains_key(w)
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn trace_to(&self, target: &Word) -> Option<Vec<StepRecord>> {
        let mut out = Vec::new();
        let mut cur = target;
        loop {
            match self.parent.get(cur)? {
                None => break,
                Some((prev, rec)) => {
                    out.push(rec.clone());
                    cur = prev;
                }
            }
        }
        out.reverse();
        Some(out)
    }
}

/// Checks that `rec` has exactly the shape of its step type when applied to
/// `from`, and that `to` is the normal form of `raw`.
pub fn replay_step(a: &PoAmalgam, from: &Word, rec: &StepRecord) -> std::result::Result<(), String> {
    let base: Vec<Letter> = match rec.padded {
        Some(j) if from.is_empty() && j <= 1 => vec![a.identity_letter(usize::from(j))],
        Some(_) => return Err("padding applies only to the empty word".into()),
        None => from.0.clone(),
    };
    let (n, raw, i) = (base.len(), &rec.raw, rec.position);
    if i >= n {
        return Err(format!("position {i} outside a word of length {n}"));
    }
    let mul = |l: Letter, r: Letter| {
        if l.factor != r.factor {
            None
        } else {
            Some(Letter::new(l.side(), a.factor(l.side()).mul(l.elem, r.elem)))
        }
    };
    let core = |j: usize| -> std::result::Result<Letter, String> {
        let u = rec.scalar.ok_or("step needs a core element")?;
        if u >= a.core().len() {
            return Err("core element out of range".into());
        }
        Ok(Letter::new(j, a.core_letter(j, u)))
    };
    let same = |x: &[Letter], y: &[Letter]| x == y;
    let j = base[i].side();
    let k = 1 - j;
    let ok = match rec.kind {
        StepKind::O => {
            raw.len() == n
                && same(&raw[..i], &base[..i])
                && same(&raw[i + 1..], &base[i + 1..])
                && raw[i].factor == base[i].factor
                && a.factor(j).leq(base[i].elem, raw[i].elem)
        }
        StepKind::M => {
            raw.len() == n + 2
                && same(&raw[..i], &base[..i])
                && same(&raw[i + 3..], &base[i + 1..])
                && raw[i + 1] == core(k)?
                && mul(raw[i], core(j)?).and_then(|x| mul(x, raw[i + 2])) == Some(base[i])
        }
        StepKind::S => {
            i > 0
                && i + 1 < n
                && raw.len() == n - 2
                && same(&raw[..i - 1], &base[..i - 1])
                && same(&raw[i..], &base[i + 2..])
                && base[i] == core(j)?
                && mul(base[i - 1], core(k)?).and_then(|x| mul(x, base[i + 1])) == Some(raw[i - 1])
        }
        StepKind::Ea => {
            i + 1 < n
                && raw.len() == n
                && same(&raw[..i], &base[..i])
                && same(&raw[i + 2..], &base[i + 2..])
                && mul(raw[i], core(j)?) == Some(base[i])
                && mul(core(k)?, base[i + 1]) == Some(raw[i + 1])
        }
        StepKind::Eb => {
            i + 1 < n
                && raw.len() == n
                && same(&raw[..i], &base[..i])
                && same(&raw[i + 2..], &base[i + 2..])
                && mul(base[i], core(j)?) == Some(raw[i])
                && mul(core(k)?, raw[i + 1]) == Some(base[i + 1])
        }
        StepKind::Ec => {
            i == n - 1 && raw.len() == n + 1 && same(&raw[..i], &base[..i]) && raw[n] == core(k)? && mul(raw[i], core(j)?) == Some(base[i])
        }
        StepKind::Ed => {
            i == n - 1
                && n >= 2
                && raw.len() == n - 1
                && same(&raw[..i - 1], &base[..i - 1])
                && base[i] == core(j)?
                && mul(base[i - 1], core(k)?) == Some(raw[i - 1])
        }
        StepKind::Ee => {
            i == 0 && raw.len() == n + 1 && same(&raw[2..], &base[1..]) && raw[0] == core(k)? && mul(core(j)?, raw[1]) == Some(base[0])
        }
        StepKind::Ef => {
            i == 0
                && n >= 2
                && raw.len() == n - 1
                && same(&raw[1..], &base[2..])
                && base[0] == core(j)?
                && mul(core(k)?, base[1]) == Some(raw[0])
        }
    };
    if !ok {
        return Err(format!("{} step at position {i} does not match its shape", rec.kind));
    }
    if a.normalize(raw) != rec.to {
        return Err(format!("{} step result is not the normal form of its letters", rec.kind));
    }
    Ok(())
}

/// Replays a whole derivation from `from` to `to`.
pub fn replay_trace(a: &PoAmalgam, from: &Word, to: &Word, trace: &[StepRecord]) -> std::result::Result<(), String> {
    let mut cur = from.clone();
    for (n, rec) in trace.iter().enumerate() {
        replay_step(a, &cur, rec).map_err(|e| format!("step {}: {e}", n + 1))?;
        cur = rec.to.clone();
    }
    if &cur == to {
        Ok(())
    } else {
        Err("derivation ends at a different word".into())
    }
}
