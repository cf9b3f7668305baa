//! One function per subcommand. Each returns an [`Outcome`] or an input error.

use std::sync::Arc;

use pomalg::amalgam::{
    build_tower, embeddability_report, replay_trace, size_guard_from_env, tower_vs_words, Embeddability, StepRecord, WordSearch, WordVerdict,
};
use pomalg::commutative::{commutative_amalgam, experiment_open_problem, group_completion, CommutativeVerdict};
use pomalg::congruence::{is_sposet_congruence, nu_congruence, theta_congruence};
use pomalg::constructions::{free_extension, pushout};
use pomalg::enumerate::{random_right_sposet, Limits};
use pomalg::tensor::TensorPoset;
use pomalg::unitary::{
    check_poextension_bounded, check_poextension_for, check_unitary_morphism, check_unitary_submonoid, replay_morphism_chain,
    replay_submonoid_chain, ChainWitness, Triple, UnitaryVerdict,
};
use pomalg::{Error, PoAmalgam, Pomonoid, PomonoidMorphism, Poset, SPoset, SubPomonoid};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::report::{Outcome, Scope, Status, Verification};
use crate::structure::{self, MapKind, StructureFile};
use crate::{Cli, Command, SubArgs};

type CmdResult = std::result::Result<Outcome, String>;

/// Default cap on enumerated test objects for bounded suites.
const DEFAULT_SUITE_CAP: usize = 3;

pub fn dispatch(cli: &Cli, input: Option<&[u8]>) -> CmdResult {
    let file = match input {
        Some(bytes) => {
            let text = std::str::from_utf8(bytes).map_err(|_| "input is not UTF-8".to_string())?;
            Some(structure::parse(text).map_err(|e| e.to_string())?)
        }
        None => None,
    };
    let f = || file.as_ref().expect("commands with a file argument");
    let c = &cli.common;
    match &cli.command {
        Command::Validate { .. } => Ok(validate(f())),
        Command::Tensor { left, right, .. } => tensor(f(), left, right, c.verify),
        Command::Quotient { sposet, pairs, symmetric, .. } => quotient(f(), sposet, pairs, *symmetric, c.verify),
        Command::Pushout { f: fm, g, .. } => pushout_cmd(f(), fm, g, c.verify),
        Command::FreeExt { sub, x, y, map, .. } => free_ext(f(), sub, x, y, map),
        Command::Unitary { sub, within, map, .. } => unitary(f(), sub.as_deref(), within.as_deref(), map.as_deref(), c.verify),
        Command::Poext { sub, x, left, samples, .. } => poext(f(), sub, x.as_deref(), *left, *samples, c),
        Command::Amalgam { amalgam, .. } => amalgam_cmd(f(), amalgam, c),
        Command::WordLe { amalgam, lhs, rhs, .. } => word_le(f(), amalgam, lhs, rhs, c),
        Command::Tower { amalgam, .. } => tower(f(), amalgam, c),
        Command::Gcomplete { pomonoid, .. } => gcomplete(f(), pomonoid),
        Command::CommutativeAmalgam { amalgam, .. } => commutative(f(), amalgam, c),
        Command::ExperimentOpenProblem => experiment(c),
    }
}

fn input_error(e: Error) -> String {
    e.to_string()
}

fn sposet<'a>(file: &'a StructureFile, name: &str) -> std::result::Result<&'a SPoset, String> {
    file.sposet(name).map(|d| &d.sposet).ok_or_else(|| format!("no sposet named `{name}`"))
}

fn pomonoid<'a>(file: &'a StructureFile, name: &str) -> std::result::Result<&'a Arc<Pomonoid>, String> {
    file.pomonoid(name).ok_or_else(|| format!("no pomonoid named `{name}`"))
}

fn amalgam<'a>(file: &'a StructureFile, name: &str) -> std::result::Result<&'a PoAmalgam, String> {
    file.amalgam(name).map(|d| &d.amalgam).ok_or_else(|| format!("no amalgam named `{name}`"))
}

fn act_map<'a>(file: &'a StructureFile, name: &str) -> std::result::Result<(&'a [usize], &'a str, &'a str), String> {
    match file.map(name) {
        Some(m) if matches!(m.kind, MapKind::Act(_)) => Ok((m.assignment(), &m.source, &m.target)),
        Some(_) => Err(format!("`{name}` is a pomonoid morphism, not an S-poset map")),
        None => Err(format!("no map named `{name}`")),
    }
}

/// `U → S` from a declared morphism, the unique declared map between the two
/// pomonoids, or the inclusion by element names.
fn morphism(file: &StructureFile, sub: &str, within: &str) -> std::result::Result<PomonoidMorphism, String> {
    let s = pomonoid(file, within)?;
    if let Some(m) = file.map(sub) {
        return match &m.kind {
            MapKind::Morphism(phi) if m.target == within => Ok(phi.clone()),
            _ => Err(format!("`{sub}` is not a pomonoid morphism into `{within}`")),
        };
    }
    let u = pomonoid(file, sub)?;
    let declared: Vec<&PomonoidMorphism> = file
        .maps
        .iter()
        .filter(|(_, m)| m.source == sub && m.target == within)
        .filter_map(|(_, m)| match &m.kind {
            MapKind::Morphism(phi) => Some(phi),
            MapKind::Act(_) => None,
        })
        .collect();
    match declared.as_slice() {
        [phi] => return Ok((*phi).clone()),
        [] => {}
        _ => return Err(format!("several maps from `{sub}` to `{within}`; name one with --sub")),
    }
    let map = u
        .elements()
        .map(|x| s.index_of(u.name(x)).ok_or_else(|| format!("`{}` of `{sub}` is not an element of `{within}`", u.name(x))))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    PomonoidMorphism::new(u.clone(), s.clone(), map).map_err(input_error)
}

fn submonoid(phi: &PomonoidMorphism) -> std::result::Result<SubPomonoid, String> {
    if !phi.flags.order_embedding {
        return Err("the map into the ambient pomonoid is not an order embedding".into());
    }
    SubPomonoid::new(phi.target.clone(), &phi.map).map_err(input_error)
}

fn hasse_lines(p: &Poset) -> Vec<String> {
    p.hasse().iter().map(|&(a, b)| format!("  {} < {}", p.name(a), p.name(b))).collect()
}

fn poset_json(p: &Poset) -> Value {
    json!({
        "elements": p.names(),
        "covers": p.hasse().iter().map(|&(a, b)| [p.name(a), p.name(b)]).collect::<Vec<_>>(),
    })
}

fn names(p: &SPoset, xs: &[usize]) -> Vec<String> {
    xs.iter().map(|&x| p.name(x).to_string()).collect()
}

fn validate(file: &StructureFile) -> Outcome {
    let mut o = Outcome::new(Status::Completed, "valid", Scope::Exact);
    o.lines = structure::summary(file);
    o.result = json!({
        "pomonoids": file.pomonoids.iter().map(|(n, p)| json!({
            "name": n,
            "order": poset_json(p.poset()),
            "identity": p.name(p.identity()),
            "table": p.elements().map(|s| p.elements().map(|t| p.name(p.mul(s, t))).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "sposets": file.sposets.iter().map(|(n, d)| json!({"name": n, "order": poset_json(d.sposet.poset())})).collect::<Vec<_>>(),
        "maps": file.maps.iter().map(|(n, _)| n).collect::<Vec<_>>(),
        "amalgams": file.amalgams.iter().map(|(n, _)| n).collect::<Vec<_>>(),
    });
    let mut dot = String::new();
    for (n, p) in &file.pomonoids {
        dot.push_str(&p.poset().to_dot(n));
    }
    for (n, d) in &file.sposets {
        dot.push_str(&d.sposet.poset().to_dot(n));
    }
    o.dot = Some(dot);
    o
}

fn tensor(file: &StructureFile, left: &str, right: &str, verify: bool) -> CmdResult {
    let (a, b) = (sposet(file, left)?, sposet(file, right)?);
    let t = TensorPoset::new(a, b).map_err(input_error)?;
    let obj = t.sposet();
    let mut o = Outcome::new(Status::Completed, format!("{} classes", t.len()), Scope::Exact);
    o.line(format!("{left} ⊗ {right}: {} classes from {} pairs", t.len(), t.cells()));
    let classes: Vec<Value> = (0..t.len())
        .map(|c| {
            let members: Vec<String> = t.quotient().classes()[c]
                .iter()
                .map(|&p| format!("{}⊗{}", a.name(p / b.len()), b.name(p % b.len())))
                .collect();
            o.lines.push(format!("  {} = {{{}}}", obj.name(c), members.join(", ")));
            json!({"name": obj.name(c), "members": members})
        })
        .collect();
    o.line("order:");
    o.lines.extend(hasse_lines(obj.poset()));
    if verify {
        let mut v = Verification::default();
        for x in 0..a.len() {
            for y in 0..b.len() {
                for x2 in 0..a.len() {
                    for y2 in 0..b.len() {
                        if let Some(cert) = t.leq_certificate(x, y, x2, y2) {
                            let label = || format!("{}⊗{} ≤ {}⊗{}", a.name(x), b.name(y), a.name(x2), b.name(y2));
                            v.check(label, cert.replay(a, b));
                        }
                    }
                }
            }
        }
        o.verification = Some(v);
    }
    o.result = json!({"classes": classes, "order": poset_json(obj.poset())});
    o.dot = Some(obj.poset().to_dot(&format!("{left} ⊗ {right}")));
    Ok(o)
}

fn parse_pairs(a: &SPoset, text: &str) -> std::result::Result<Vec<(usize, usize)>, String> {
    let idx = |n: &str| a.poset().index_of(n).ok_or_else(|| format!("unknown element `{n}`"));
    text.split([',', ';'])
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|pair| {
            let (x, y) = pair.split_once("<=").ok_or_else(|| format!("pair `{pair}` is not written `x <= y`"))?;
            Ok((idx(x.trim())?, idx(y.trim())?))
        })
        .collect()
}

fn quotient(file: &StructureFile, name: &str, pairs: &str, symmetric: bool, verify: bool) -> CmdResult {
    let a = sposet(file, name)?;
    let r = parse_pairs(a, pairs)?;
    let q = if symmetric { theta_congruence(a, &r) } else { nu_congruence(a, &r) }.map_err(input_error)?;
    let mut o = Outcome::new(Status::Completed, format!("{} classes", q.len()), Scope::Exact);
    let label = if symmetric { "θ" } else { "ν" };
    o.line(format!("{name}/{label}(R): {} classes", q.len()));
    let classes: Vec<Value> = q
        .classes()
        .iter()
        .enumerate()
        .map(|(c, m)| {
            o.lines.push(format!("  {} = {{{}}}", q.sposet().name(c), names(a, m).join(", ")));
            json!({"name": q.sposet().name(c), "members": names(a, m)})
        })
        .collect();
    o.line("order:");
    o.lines.extend(hasse_lines(q.sposet().poset()));
    if verify {
        let mut v = Verification::default();
        let check = is_sposet_congruence(a, q.projection()).map_err(input_error)?;
        v.check(|| "kernel is an S-poset congruence".into(), if check.holds { Ok(()) } else { Err("no".into()) });
        for &(x, y) in &r {
            let ok = q.sposet().leq(q.class_of(x), q.class_of(y)) && (!symmetric || q.class_of(x) == q.class_of(y));
            v.check(|| format!("{} <= {}", a.name(x), a.name(y)), if ok { Ok(()) } else { Err("pair not identified".into()) });
        }
        o.verification = Some(v);
    }
    o.result = json!({"classes": classes, "order": poset_json(q.sposet().poset())});
    o.dot = Some(q.sposet().poset().to_dot(&format!("{name}/{label}(R)")));
    Ok(o)
}

fn pushout_cmd(file: &StructureFile, f_name: &str, g_name: &str, verify: bool) -> CmdResult {
    let (f, fa, fb) = act_map(file, f_name)?;
    let (g, ga, gc) = act_map(file, g_name)?;
    if fa != ga {
        return Err(format!("`{f_name}` and `{g_name}` start from different sposets"));
    }
    let (a, b, c) = (sposet(file, fa)?, sposet(file, fb)?, sposet(file, gc)?);
    let p = pushout(a, b, f, c, g).map_err(input_error)?;
    let d = p.object();
    let violations = p.lemma_violations();
    let status = if violations.is_empty() { Status::Completed } else { Status::Refuted };
    let verdict = if violations.is_empty() { "all pushout properties hold" } else { "pushout property violated" };
    let mut o = Outcome::new(status, verdict, Scope::Exact);
    o.line(format!("pushout of {fb} ← {fa} → {gc}: {} points", d.len()));
    o.line(format!("  γ: {}", (0..b.len()).map(|x| format!("{}↦{}", b.name(x), d.name(p.gamma[x]))).collect::<Vec<_>>().join(" ")));
    o.line(format!("  δ: {}", (0..c.len()).map(|x| format!("{}↦{}", c.name(x), d.name(p.delta[x]))).collect::<Vec<_>>().join(" ")));
    o.line("order:");
    o.lines.extend(hasse_lines(d.poset()));
    for v in &violations {
        o.line(format!("violation: {v}"));
    }
    let mut gaps = Vec::new();
    let mut v = Verification::default();
    for x in 0..b.len() {
        for y in 0..c.len() {
            if d.leq(p.gamma[x], p.delta[y]) {
                if let Ok((a1, a2)) = p.gap_witnesses(x, y) {
                    gaps.push(json!({"b": b.name(x), "c": c.name(y), "a": a.name(a1), "a_prime": a.name(a2)}));
                    let ok = b.leq(x, f[a1]) && c.leq(g[a2], y);
                    v.check(|| format!("γ({}) ≤ δ({})", b.name(x), c.name(y)), if ok { Ok(()) } else { Err("witness fails".into()) });
                }
            }
        }
    }
    if verify {
        o.verification = Some(v);
    }
    o.result = json!({
        "object": poset_json(d.poset()),
        "gamma": names(d, &p.gamma),
        "delta": names(d, &p.delta),
        "gap_witnesses": gaps,
        "violations": violations,
    });
    o.dot = Some(d.poset().to_dot("pushout"));
    Ok(o)
}

fn free_ext(file: &StructureFile, sub: &SubArgs, x: &str, y: &str, map: &str) -> CmdResult {
    let phi = morphism(file, &sub.sub, &sub.within)?;
    let (xs, ys) = (sposet(file, x)?, sposet(file, y)?);
    let (f, src, dst) = act_map(file, map)?;
    if src != x || dst != y {
        return Err(format!("`{map}` does not go from `{x}` to `{y}`"));
    }
    let ext = free_extension(&phi, xs, ys, f).map_err(input_error)?;
    let obj = ext.object();
    let violations = ext.law_violations();
    let status = if violations.is_empty() { Status::Completed } else { Status::Refuted };
    let mut o = Outcome::new(status, if violations.is_empty() { "laws hold" } else { "law violated" }, Scope::Exact);
    o.line(format!("free extension of {y} along {map}: {} points", obj.len()));
    o.line(format!("  g: {}", (0..ys.len()).map(|b| format!("{}↦{}", ys.name(b), obj.name(ext.g[b]))).collect::<Vec<_>>().join(" ")));
    o.line(format!("  h: {}", (0..xs.len()).map(|a| format!("{}↦{}", xs.name(a), obj.name(ext.h[a]))).collect::<Vec<_>>().join(" ")));
    o.line("order:");
    o.lines.extend(hasse_lines(obj.poset()));
    for v in &violations {
        o.line(format!("violation: {v}"));
    }
    o.result = json!({
        "object": poset_json(obj.poset()),
        "g": names(obj, &ext.g),
        "h": names(obj, &ext.h),
        "violations": violations,
    });
    o.dot = Some(obj.poset().to_dot("free extension"));
    Ok(o)
}

fn render_triples(ts: &[Triple], point: &dyn Fn(usize) -> String, scalar: &dyn Fn(usize) -> String) -> Vec<String> {
    ts.iter().map(|t| format!("({}, {}, {})", point(t.member), point(t.element), scalar(t.scalar))).collect()
}

fn render_chain(w: &ChainWitness, point: &dyn Fn(usize) -> String, scalar: &dyn Fn(usize) -> String) -> String {
    let mut parts = vec![point(w.start)];
    for l in &w.links {
        parts.push(format!("{}·{}", point(l.element), scalar(l.scalar_in)));
        parts.push(format!("{}·{}", point(l.element), scalar(l.scalar_out)));
    }
    parts.push(point(w.end));
    parts.chunks(2).map(|c| c.join(" ≤ ")).collect::<Vec<_>>().join(", ")
}

fn verdict_lines(o: &mut Outcome, side: &str, v: &UnitaryVerdict, point: &dyn Fn(usize) -> String, scalar: &dyn Fn(usize) -> String) -> Value {
    let yn = |b: bool| if b { "yes" } else { "no" };
    o.line(format!("{side}:"));
    o.line(format!("  unitary                  {}", yn(v.unitary)));
    o.line(format!("  pounitary                {}", yn(v.pounitary)));
    o.line(format!("  upper strongly pounitary {}", yn(v.upper_strong)));
    o.line(format!("  lower strongly pounitary {}", yn(v.lower_strong)));
    o.line(format!("  strongly pounitary       {}", yn(v.strong)));
    let upper = render_triples(&v.upper_witnesses, point, scalar);
    let lower = render_triples(&v.lower_witnesses, point, scalar);
    let unit = render_triples(&v.unitary_witnesses, point, scalar);
    if let Some(t) = upper.first() {
        o.line(format!("  upper witness (m, y, u) with m ≤ yu: {t}"));
    }
    if let Some(t) = lower.first() {
        o.line(format!("  lower witness (m, y, u) with yu ≤ m: {t}"));
    }
    let chain = v.chain.as_ref().map(|w| render_chain(w, point, scalar));
    if let Some(c) = &chain {
        o.line(format!("  chain leaving the submonoid: {c}"));
    }
    json!({
        "unitary": v.unitary,
        "pounitary": v.pounitary,
        "upper_strong": v.upper_strong,
        "lower_strong": v.lower_strong,
        "strong": v.strong,
        "unitary_witnesses": unit,
        "upper_witnesses": upper,
        "lower_witnesses": lower,
        "chain": chain,
    })
}

fn check_triples(v: &mut Verification, verdict: &UnitaryVerdict, member: &dyn Fn(usize) -> bool, act: &dyn Fn(usize, usize) -> usize, leq: &dyn Fn(usize, usize) -> bool) {
    type Holds<'a> = &'a dyn Fn(usize, usize) -> bool;
    let kinds: [(&str, &Vec<Triple>, Holds); 3] = [
        ("unitary", &verdict.unitary_witnesses, &|m, yu| m == yu),
        ("upper", &verdict.upper_witnesses, &|m, yu| leq(m, yu)),
        ("lower", &verdict.lower_witnesses, &|m, yu| leq(yu, m)),
    ];
    for (name, list, holds) in kinds {
        for t in list {
            let ok = member(t.member) && !member(t.element) && holds(t.member, act(t.element, t.scalar));
            v.check(|| format!("{name} witness {t:?}"), if ok { Ok(()) } else { Err("relation fails".into()) });
        }
    }
}

fn unitary(file: &StructureFile, sub: Option<&str>, within: Option<&str>, map: Option<&str>, verify: bool) -> CmdResult {
    let mut o = Outcome::new(Status::Completed, "", Scope::Exact);
    let mut v = Verification::default();
    match (sub, within, map) {
        (Some(sub), Some(within), None) => {
            let phi = morphism(file, sub, within)?;
            let u = submonoid(&phi)?;
            let s = u.ambient().clone();
            let report = check_unitary_submonoid(&u);
            let nm = |x: usize| s.name(x).to_string();
            let right = verdict_lines(&mut o, "right", &report.right, &nm, &nm);
            let left = report.left.as_ref().map(|l| verdict_lines(&mut o, "left", l, &nm, &nm));
            o.line(format!("convex: {}", report.convex));
            if verify {
                let member = |x: usize| u.contains(x);
                check_triples(&mut v, &report.right, &member, &|y, a| s.mul(y, a), &|a, b| s.leq(a, b));
                if let Some(l) = &report.left {
                    check_triples(&mut v, l, &member, &|y, a| s.mul(a, y), &|a, b| s.leq(a, b));
                }
                if let Some(w) = &report.right.chain {
                    v.check(|| "right chain".into(), if replay_submonoid_chain(&u, w) { Ok(()) } else { Err("chain fails".into()) });
                }
                if let Some(w) = report.left.as_ref().and_then(|l| l.chain.as_ref()) {
                    let ok = replay_submonoid_chain(&u.opposite(), w);
                    v.check(|| "left chain".into(), if ok { Ok(()) } else { Err("chain fails".into()) });
                }
            }
            o.verdict = summary_verdict(&report.right);
            o.result = json!({"right": right, "left": left, "convex": report.convex});
        }
        (None, None, Some(map)) => {
            let (f, src, dst) = act_map(file, map)?;
            let (x, y) = (sposet(file, src)?, sposet(file, dst)?);
            let report = check_unitary_morphism(f, x, y).map_err(input_error)?;
            let u = y.right_actor().expect("checked right action").clone();
            let point = |p: usize| y.name(p).to_string();
            let scalar = |a: usize| u.name(a).to_string();
            let right = verdict_lines(&mut o, "right", &report.right, &point, &scalar);
            o.line(format!("convex: {}", report.convex));
            if verify {
                let mut member = vec![false; y.len()];
                for &p in f {
                    member[p] = true;
                }
                check_triples(&mut v, &report.right, &|p| member[p], &|p, a| y.act_right(p, a), &|a, b| y.leq(a, b));
                if let Some(w) = &report.right.chain {
                    v.check(|| "right chain".into(), if replay_morphism_chain(f, y, w) { Ok(()) } else { Err("chain fails".into()) });
                }
            }
            o.verdict = summary_verdict(&report.right);
            o.result = json!({"right": right, "convex": report.convex});
        }
        _ => return Err("give either --sub and --in, or --map".into()),
    }
    if verify {
        o.verification = Some(v);
    }
    Ok(o)
}

fn summary_verdict(v: &UnitaryVerdict) -> String {
    let tags = [
        (v.unitary, "unitary"),
        (v.pounitary, "pounitary"),
        (v.upper_strong, "upper strongly pounitary"),
        (v.lower_strong, "lower strongly pounitary"),
    ];
    let held: Vec<&str> = tags.iter().filter(|t| t.0).map(|t| t.1).collect();
    if held.is_empty() {
        "right: none of the conditions".into()
    } else {
        format!("right: {}", held.join(", "))
    }
}

fn poext(file: &StructureFile, sub: &SubArgs, x: Option<&str>, left: bool, samples: usize, c: &crate::Common) -> CmdResult {
    let phi = morphism(file, &sub.sub, &sub.within)?;
    let phi = if left { phi.opposite() } else { phi };
    let side = if left { "left" } else { "right" };
    if let Some(name) = x {
        let xs = sposet(file, name)?;
        let xs = if left { xs.mirrored() } else { xs.clone() };
        let holds = check_poextension_for(&phi, &xs).map_err(input_error)?.order_embedding;
        let mut o = finish_poext(&phi, (!holds).then_some(xs), side, Scope::Exact, c.verify)?;
        o.result["tested"] = json!(1);
        return Ok(o);
    }
    let cap = c.size_cap.unwrap_or(DEFAULT_SUITE_CAP);
    let limits = Limits {
        sposets: cap.max(1),
        ..Limits::default()
    };
    let b = check_poextension_bounded(&phi, cap, &limits).map_err(input_error)?;
    let mut failing = b.failing.map(|(xs, _)| xs);
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed.unwrap_or(0));
    let mut sampled = 0;
    while failing.is_none() && sampled < samples {
        sampled += 1;
        let xs = random_right_sposet(&phi.source, 5, &mut rng);
        if !check_poextension_for(&phi, &xs).map_err(input_error)?.order_embedding {
            failing = Some(xs);
        }
    }
    let mut o = finish_poext(&phi, failing, side, Scope::Bounded, c.verify)?;
    o.result["tested"] = json!(b.tested + sampled);
    o.result["cap"] = json!(cap);
    o.result["samples"] = json!(sampled);
    Ok(o)
}

fn finish_poext(phi: &PomonoidMorphism, failing: Option<SPoset>, side: &str, scope: Scope, verify: bool) -> CmdResult {
    let Some(xs) = failing else {
        let mut o = Outcome::new(Status::Completed, format!("{side} poextension holds"), scope);
        o.line(format!("x ↦ x⊗1 is an order embedding for every tested {side} poset"));
        o.result = json!({"holds": true});
        return Ok(o);
    };
    let check = check_poextension_for(phi, &xs).map_err(input_error)?;
    let t = TensorPoset::new(&xs.right_part(), &SPoset::bi_over(phi)).map_err(input_error)?;
    let one = phi.target.identity();
    let mut o = Outcome::new(Status::Refuted, format!("{side} poextension fails"), scope);
    o.line(format!("test poset with {} points: {}", xs.len(), xs.poset().names().join(" ")));
    let mut witness = Value::Null;
    if let Some((a, b)) = check.witness {
        o.line(format!("{}⊗1 ≤ {}⊗1 but {} ≰ {}", xs.name(a), xs.name(b), xs.name(a), xs.name(b)));
        let cert = t.leq_certificate(a, one, b, one);
        if let Some(cert) = &cert {
            o.lines.extend(cert.render(&xs.right_part(), &SPoset::bi_over(phi), &phi.source).into_iter().map(|l| format!("  {l}")));
        }
        if verify {
            let mut v = Verification::default();
            match &cert {
                Some(cert) => v.check(|| "x⊗1 ≤ x'⊗1".into(), cert.replay(&xs.right_part(), &SPoset::bi_over(phi))),
                None => v.check(|| "x⊗1 ≤ x'⊗1".into(), Err("no scheme found".into())),
            }
            o.verification = Some(v);
        }
        let lines = cert.as_ref().map(|c| c.render(&xs.right_part(), &SPoset::bi_over(phi), &phi.source));
        witness = json!({"x": xs.name(a), "x_prime": xs.name(b), "scheme": cert, "scheme_lines": lines});
    }
    o.result = json!({"holds": false, "order": poset_json(xs.poset()), "witness": witness});
    Ok(o)
}

fn guard(c: &crate::Common) -> usize {
    c.size_cap.unwrap_or_else(size_guard_from_env)
}

fn amalgam_cmd(file: &StructureFile, name: &str, c: &crate::Common) -> CmdResult {
    let a = amalgam(file, name)?;
    let t = build_tower(a, c.tower, guard(c)).map_err(input_error)?;
    let r = embeddability_report(&t);
    let (status, verdict) = match &r.verdict {
        Embeddability::StronglyPoembeddableToDepth(n) => (Status::Completed, format!("strongly poembeddable to depth {n}")),
        Embeddability::PoembeddableToDepth(n) => (Status::Completed, format!("poembeddable to depth {n}, not strongly")),
        Embeddability::Refuted(x) => (Status::Refuted, format!("refuted: {}^{} {}", x.map, x.n, x.witness)),
        Embeddability::Unknown => (Status::Unknown, "unknown".to_string()),
    };
    let mut o = Outcome::new(status, verdict, if status == Status::Unknown { Scope::Unknown } else { Scope::Bounded });
    for l in &r.levels {
        o.line(format!(
            "Y_{}: {} points, k^{} embedding {}, h^{} embedding {}",
            l.n + 1,
            l.size,
            l.n,
            l.k_embedding,
            l.n,
            l.h_embedding
        ));
    }
    match &r.strong_witness {
        Some((x, y)) => o.line(format!("strong condition fails: {x}⊗1 = 1⊗{y}")),
        None => o.line("strong condition holds on Y_2"),
    }
    if c.verify && t.depth() >= 2 {
        let w = tower_vs_words(&t, 2, c.depth).map_err(input_error)?;
        let mut v = Verification::default();
        for _ in 0..w.yes {
            v.replayed += 1;
        }
        v.failures = w.replay_failures;
        o.verification = Some(v);
    }
    o.result = serde_json::to_value(&r).expect("reports serialize");
    Ok(o)
}

fn render_trace(a: &PoAmalgam, trace: &[StepRecord]) -> Vec<String> {
    trace.iter().map(|s| format!("  {} at {} → {}", s.kind, s.position, display_word(a, &s.to))).collect()
}

fn display_word(a: &PoAmalgam, w: &pomalg::Word) -> String {
    if w.is_empty() {
        "1".into()
    } else {
        a.render_word(w)
    }
}

fn word_le(file: &StructureFile, name: &str, lhs: &str, rhs: &str, c: &crate::Common) -> CmdResult {
    let a = amalgam(file, name)?;
    let w = a.parse_word(lhs).map_err(input_error)?;
    let w2 = a.parse_word(rhs).map_err(input_error)?;
    let mut search = WordSearch::new(a);
    let mut o = match search.leq(&w, &w2, c.depth) {
        WordVerdict::Yes(trace) => {
            let mut o = Outcome::new(Status::Completed, "yes", Scope::Exact);
            o.line(format!("{} ≤ {} in {} step(s)", display_word(a, &w), display_word(a, &w2), trace.len()));
            o.lines.extend(render_trace(a, &trace));
            if c.verify {
                let mut v = Verification::default();
                v.check(|| "trace".into(), replay_trace(a, &w, &w2, &trace));
                o.verification = Some(v);
            }
            o.result = json!({"verdict": "yes", "trace": trace.iter().map(|s| json!({
                "kind": s.kind.to_string(),
                "position": s.position,
                "to": display_word(a, &s.to),
            })).collect::<Vec<_>>()});
            o
        }
        WordVerdict::Unknown => {
            let mut o = Outcome::new(Status::Unknown, "unknown", Scope::Unknown);
            o.line(format!("no derivation of {} ≤ {} within {} steps", display_word(a, &w), display_word(a, &w2), c.depth));
            o.result = json!({"verdict": "unknown"});
            o
        }
    };
    o.result["depth"] = json!(c.depth);
    Ok(o)
}

fn tower(file: &StructureFile, name: &str, c: &crate::Common) -> CmdResult {
    let a = amalgam(file, name)?;
    let t = build_tower(a, c.tower, guard(c)).map_err(input_error)?;
    let corollary = t.corollary_violations();
    let monotone = t.monotonicity_violations();
    let ok = corollary.is_empty() && monotone.is_empty();
    let mut o = Outcome::new(
        if ok { Status::Completed } else { Status::Refuted },
        if ok { "bracket identities and monotonicity hold" } else { "tower law violated" },
        Scope::Bounded,
    );
    for l in &t.levels {
        o.line(format!("Y_{}: {} points", l.n, l.len()));
    }
    for v in corollary.iter().chain(&monotone).take(20) {
        o.line(format!("violation: {v}"));
    }
    o.result = json!({
        "sizes": t.levels.iter().map(|l| l.len()).collect::<Vec<_>>(),
        "bracket_violations": corollary,
        "monotonicity_violations": monotone,
    });
    let top = &t.levels.last().expect("at least one level").object;
    o.dot = Some(top.poset().to_dot(&format!("Y_{}", t.depth())));
    Ok(o)
}

fn gcomplete(file: &StructureFile, name: &str) -> CmdResult {
    let s = pomonoid(file, name)?;
    let g = match group_completion(s) {
        Ok(g) => g,
        Err(Error::PreconditionFailed(msg)) => {
            let mut o = Outcome::new(Status::Refuted, "not commutative and pocancellative", Scope::Exact);
            o.line(msg.clone());
            o.result = json!({"precondition": msg});
            return Ok(o);
        }
        Err(e) => return Err(input_error(e)),
    };
    let laws = g.group_law_violations();
    let ok = laws.is_empty() && g.chi_is_embedding();
    let mut o = Outcome::new(
        if ok { Status::Completed } else { Status::Refuted },
        if g.chi_is_iso() { "G(S) ≅ S" } else { "χ is not onto" },
        Scope::Exact,
    );
    o.line(format!("G({name}): {} classes", g.group.len()));
    o.line(format!(
        "  χ: {}",
        s.elements().map(|x| format!("{}↦{}", s.name(x), g.group.name(g.chi[x]))).collect::<Vec<_>>().join(" ")
    ));
    o.line(format!("  χ order embedding: {}, onto: {}", g.chi_is_embedding(), g.chi_is_iso()));
    for l in &laws {
        o.line(format!("violation: {l}"));
    }
    o.result = json!({
        "size": g.group.len(),
        "chi": g.chi.iter().map(|&c| g.group.name(c)).collect::<Vec<_>>(),
        "chi_embedding": g.chi_is_embedding(),
        "chi_iso": g.chi_is_iso(),
        "order": poset_json(g.group.poset()),
        "violations": laws,
    });
    o.dot = Some(g.group.poset().to_dot(&format!("G({name})")));
    Ok(o)
}

fn commutative(file: &StructureFile, name: &str, c: &crate::Common) -> CmdResult {
    let a = amalgam(file, name)?;
    let cap = c.size_cap.unwrap_or(DEFAULT_SUITE_CAP);
    let r = commutative_amalgam(a, cap).map_err(input_error)?;
    let refuted = r.contradiction.is_some() || r.verdict == CommutativeVerdict::NotEmbeddable;
    let verdict = match r.verdict {
        CommutativeVerdict::StronglyPoembeddable => "strongly poembeddable",
        CommutativeVerdict::Poembeddable => "poembeddable, not strongly",
        CommutativeVerdict::WeaklyEmbeddable => "embeddable, not as posets",
        CommutativeVerdict::NotEmbeddable => "not embeddable",
    };
    let mut o = Outcome::new(if refuted { Status::Refuted } else { Status::Completed }, verdict, Scope::Bounded);
    o.line(format!("S₁ ⊗_U S₂: {} elements", r.tensor_size));
    o.line(format!("λ order embeddings: {:?}", r.lambda_embedding));
    o.line(format!("poextension (to size {cap}): {:?}, convex: {:?}", r.poextension, r.convex));
    if let Some((x, y)) = &r.strong_witness {
        o.line(format!("strong condition fails: {x}⊗1 = 1⊗{y}"));
    }
    if let Some(m) = &r.contradiction {
        o.line(format!("contradiction: {m}"));
    }
    o.result = serde_json::to_value(&r).expect("reports serialize");
    Ok(o)
}

fn experiment(c: &crate::Common) -> CmdResult {
    let max = c.size_cap.unwrap_or(DEFAULT_SUITE_CAP);
    let e = experiment_open_problem(max).map_err(input_error)?;
    let mut o = Outcome::new(Status::Completed, e.message.clone(), Scope::Bounded);
    o.line(format!("{} amalgams of commutative pocancellative pomonoids with at most {max} elements", e.amalgams));
    for cand in &e.candidates {
        o.line(format!("candidate: {cand}"));
    }
    o.line(e.message.clone());
    o.result = serde_json::to_value(&e).expect("reports serialize");
    Ok(o)
}
