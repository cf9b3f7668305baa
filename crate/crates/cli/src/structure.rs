//! The line-oriented structure file: named pomonoids, S-posets, maps and
//! amalgams, resolved and validated on load.
//!
//! ```text
//! # comment
//! pomonoid S
//!   elements a f b e 1
//!   identity 1
//!   table
//!     a a a a a
//!     ...
//!   order a <= 1, a <= e
//! end
//!
//! sposet X over S side right
//!   elements x y
//!   act
//!     x y ...        # row per point, column per element of S: x·s
//!   order x <= y
//! end
//!
//! map i : U -> S
//!   1 -> 1, e -> e, f -> f
//! end
//!
//! amalgam A core U via i j
//! ```
//!
//! A `side bi` S-poset carries `act left` and `act right` tables; a left
//! table also has one row per point, with `s·x` in the column of `s`.

use std::fmt;
use std::sync::Arc;

use pomalg::{analyze_map, Error, PoAmalgam, Pomonoid, PomonoidCandidate, PomonoidMorphism, Poset, SPoset, SPosetCandidate};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    Unresolved,
    Validation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::Unresolved => "unresolved reference",
            ParseErrorKind::Validation => "validation error",
        };
        write!(f, "{}:{}: {kind}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

type PResult<T> = std::result::Result<T, ParseError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SideDecl {
    Right,
    Left,
    Bi,
}

impl SideDecl {
    fn keyword(self) -> &'static str {
        match self {
            SideDecl::Right => "right",
            SideDecl::Left => "left",
            SideDecl::Bi => "bi",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SPosetDecl {
    pub over: String,
    pub side: SideDecl,
    pub sposet: SPoset,
}

#[derive(Clone, Debug)]
pub enum MapKind {
    Morphism(PomonoidMorphism),
    Act(Vec<usize>),
}

#[derive(Clone, Debug)]
pub struct MapDecl {
    pub source: String,
    pub target: String,
    pub kind: MapKind,
}

impl MapDecl {
    pub fn assignment(&self) -> &[usize] {
        match &self.kind {
            MapKind::Morphism(m) => &m.map,
            MapKind::Act(a) => a,
        }
    }
}

#[derive(Clone, Debug)]
pub struct AmalgamDecl {
    pub core: String,
    pub via: [String; 2],
    pub amalgam: PoAmalgam,
}

/// Resolved structures by name, each kind in declaration order.
#[derive(Clone, Debug, Default)]
pub struct StructureFile {
    pub pomonoids: Vec<(String, Arc<Pomonoid>)>,
    pub sposets: Vec<(String, SPosetDecl)>,
    pub maps: Vec<(String, MapDecl)>,
    pub amalgams: Vec<(String, AmalgamDecl)>,
}

impl StructureFile {
    pub fn pomonoid(&self, name: &str) -> Option<&Arc<Pomonoid>> {
        self.pomonoids.iter().find(|(n, _)| n == name).map(|(_, p)| p)
    }

    pub fn sposet(&self, name: &str) -> Option<&SPosetDecl> {
        self.sposets.iter().find(|(n, _)| n == name).map(|(_, p)| p)
    }

    pub fn map(&self, name: &str) -> Option<&MapDecl> {
        self.maps.iter().find(|(n, _)| n == name).map(|(_, p)| p)
    }

    pub fn amalgam(&self, name: &str) -> Option<&AmalgamDecl> {
        self.amalgams.iter().find(|(n, _)| n == name).map(|(_, p)| p)
    }

    fn has_name(&self, name: &str) -> bool {
        self.pomonoid(name).is_some() || self.sposet(name).is_some() || self.map(name).is_some() || self.amalgam(name).is_some()
    }
}

struct Line<'a> {
    number: usize,
    text: &'a str,
    /// Tokens with their 1-based columns.
    tokens: Vec<(usize, &'a str)>,
}

fn tokenize(number: usize, raw: &str) -> Line<'_> {
    let text = raw.split('#').next().unwrap_or("");
    let mut spans: Vec<(usize, usize)> = Vec::new();
    let mut start: Option<usize> = None;
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        let next = chars.peek().map(|&(_, d)| d);
        let op_len = match (c, next) {
            ('<', Some('=')) | ('-', Some('>')) => 2,
            (':', _) => 1,
            _ => 0,
        };
        if c.is_whitespace() || c == ',' || op_len > 0 {
            if let Some(s) = start.take() {
                spans.push((s, i));
            }
            if op_len == 2 {
                chars.next();
            }
            if op_len > 0 {
                spans.push((i, i + op_len));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        spans.push((s, text.len()));
    }
    let tokens = spans.into_iter().map(|(s, e)| (text[..s].chars().count() + 1, &text[s..e])).collect();
    Line { number, text, tokens }
}

fn err<T>(kind: ParseErrorKind, line: usize, column: usize, message: impl Into<String>) -> PResult<T> {
    Err(ParseError {
        kind,
        line,
        column,
        message: message.into(),
    })
}

fn validation(line: usize, e: Error) -> ParseError {
    ParseError {
        kind: ParseErrorKind::Validation,
        line,
        column: 1,
        message: e.to_string(),
    }
}

struct Cursor<'a> {
    lines: Vec<Line<'a>>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn next(&mut self) -> Option<&Line<'a>> {
        while self.pos < self.lines.len() {
            self.pos += 1;
            if !self.lines[self.pos - 1].tokens.is_empty() {
                return Some(&self.lines[self.pos - 1]);
            }
        }
        None
    }

    fn last_line(&self) -> usize {
        self.lines.last().map_or(1, |l| l.number)
    }
}

/// Elements declared in a block, with their declaration lines.
struct Elements {
    names: Vec<String>,
    line: usize,
}

impl Elements {
    fn index(&self, line: usize, column: usize, name: &str) -> PResult<usize> {
        match self.names.iter().position(|n| n == name) {
            Some(i) => Ok(i),
            None => err(ParseErrorKind::Unresolved, line, column, format!("unknown element `{name}`")),
        }
    }
}

fn parse_elements(line: &Line) -> PResult<Elements> {
    let mut names: Vec<String> = Vec::new();
    for &(col, t) in &line.tokens[1..] {
        if names.iter().any(|n| n == t) {
            return err(ParseErrorKind::Syntax, line.number, col, format!("duplicate element `{t}`"));
        }
        names.push(t.to_string());
    }
    if names.is_empty() {
        return err(ParseErrorKind::Syntax, line.number, 1, "`elements` needs at least one name");
    }
    Ok(Elements {
        names,
        line: line.number,
    })
}

/// `x <= y` pairs, several per line, separated by commas or whitespace.
fn parse_order(line: &Line, elems: &Elements, out: &mut Vec<(usize, usize)>) -> PResult<()> {
    let toks = &line.tokens[1..];
    if !toks.len().is_multiple_of(3) {
        let col = toks.last().map_or(1, |t| t.0);
        return err(ParseErrorKind::Syntax, line.number, col, "order pairs are written `x <= y`");
    }
    for chunk in toks.chunks(3) {
        let [(c1, x), (c2, op), (c3, y)] = [chunk[0], chunk[1], chunk[2]];
        if op != "<=" {
            return err(ParseErrorKind::Syntax, line.number, c2, format!("expected `<=`, found `{op}`"));
        }
        out.push((elems.index(line.number, c1, x)?, elems.index(line.number, c3, y)?));
    }
    Ok(())
}

/// `rows` lines of `width` names from `codomain`.
fn parse_table(cur: &mut Cursor, rows: usize, width: usize, codomain: &Elements, header: usize) -> PResult<Vec<usize>> {
    let mut out = Vec::with_capacity(rows * width);
    for r in 0..rows {
        let Some(line) = cur.next() else {
            return err(ParseErrorKind::Syntax, header, 1, format!("table ends after {r} of {rows} rows"));
        };
        if line.tokens.len() != width {
            return err(
                ParseErrorKind::Syntax,
                line.number,
                1,
                format!("table row has {} entries, expected {width}", line.tokens.len()),
            );
        }
        for &(col, t) in &line.tokens {
            out.push(codomain.index(line.number, col, t)?);
        }
    }
    Ok(out)
}

fn expect_name<'a>(line: &Line<'a>, i: usize, what: &str) -> PResult<&'a str> {
    match line.tokens.get(i) {
        Some(&(_, t)) => Ok(t),
        None => err(ParseErrorKind::Syntax, line.number, line.text.chars().count() + 1, format!("expected {what}")),
    }
}

fn expect_keyword(line: &Line, i: usize, kw: &str) -> PResult<()> {
    match line.tokens.get(i) {
        Some(&(_, t)) if t == kw => Ok(()),
        Some(&(c, t)) => err(ParseErrorKind::Syntax, line.number, c, format!("expected `{kw}`, found `{t}`")),
        None => err(ParseErrorKind::Syntax, line.number, line.text.chars().count() + 1, format!("expected `{kw}`")),
    }
}

fn no_trailing(line: &Line, n: usize) -> PResult<()> {
    match line.tokens.get(n) {
        Some(&(c, t)) => err(ParseErrorKind::Syntax, line.number, c, format!("unexpected `{t}`")),
        None => Ok(()),
    }
}

pub fn parse(text: &str) -> PResult<StructureFile> {
    let lines = text.lines().enumerate().map(|(i, l)| tokenize(i + 1, l)).collect();
    let mut cur = Cursor { lines, pos: 0 };
    let mut file = StructureFile::default();
    while let Some(line) = cur.next() {
        let (col, head) = line.tokens[0];
        let number = line.number;
        let name = expect_name(line, 1, "a block name")?.to_string();
        if file.has_name(&name) {
            return err(ParseErrorKind::Syntax, number, line.tokens[1].0, format!("`{name}` is already defined"));
        }
        match head {
            "pomonoid" => {
                no_trailing(line, 2)?;
                let p = parse_pomonoid(&mut cur, number)?;
                file.pomonoids.push((name, Arc::new(p)));
            }
            "sposet" => {
                expect_keyword(line, 2, "over")?;
                let over = expect_name(line, 3, "a pomonoid name")?.to_string();
                let over_col = line.tokens[3].0;
                expect_keyword(line, 4, "side")?;
                let side = match expect_name(line, 5, "right, left or bi")? {
                    "right" => SideDecl::Right,
                    "left" => SideDecl::Left,
                    "bi" => SideDecl::Bi,
                    other => return err(ParseErrorKind::Syntax, number, line.tokens[5].0, format!("unknown side `{other}`")),
                };
                no_trailing(line, 6)?;
                let Some(s) = file.pomonoid(&over).cloned() else {
                    return err(ParseErrorKind::Unresolved, number, over_col, format!("no pomonoid named `{over}`"));
                };
                let sposet = parse_sposet(&mut cur, number, &s, side)?;
                file.sposets.push((name, SPosetDecl { over, side, sposet }));
            }
            "map" => {
                expect_keyword(line, 2, ":")?;
                let source = expect_name(line, 3, "a source name")?.to_string();
                let source_col = line.tokens[3].0;
                expect_keyword(line, 4, "->")?;
                let target = expect_name(line, 5, "a target name")?.to_string();
                let target_col = line.tokens[5].0;
                no_trailing(line, 6)?;
                let kind = parse_map(&mut cur, &file, number, (&source, source_col), (&target, target_col))?;
                file.maps.push((name, MapDecl { source, target, kind }));
            }
            "amalgam" => {
                expect_keyword(line, 2, "core")?;
                let core = expect_name(line, 3, "a core name")?.to_string();
                let core_col = line.tokens[3].0;
                expect_keyword(line, 4, "via")?;
                let m1 = expect_name(line, 5, "a map name")?.to_string();
                let m2 = expect_name(line, 6, "a map name")?.to_string();
                let cols = [line.tokens[5].0, line.tokens[6].0];
                no_trailing(line, 7)?;
                if file.pomonoid(&core).is_none() {
                    return err(ParseErrorKind::Unresolved, number, core_col, format!("no pomonoid named `{core}`"));
                }
                let mut phis = Vec::new();
                for (m, c) in [(&m1, cols[0]), (&m2, cols[1])] {
                    let phi = match file.map(m) {
                        Some(MapDecl {
                            source,
                            kind: MapKind::Morphism(phi),
                            ..
                        }) if *source == core => phi.clone(),
                        Some(_) => return err(ParseErrorKind::Syntax, number, c, format!("`{m}` is not a pomonoid morphism out of `{core}`")),
                        None => return err(ParseErrorKind::Unresolved, number, c, format!("no map named `{m}`")),
                    };
                    phis.push(phi);
                }
                let p2 = phis.pop().expect("two maps");
                let p1 = phis.pop().expect("two maps");
                let amalgam = PoAmalgam::new(p1, p2).map_err(|e| validation(number, e))?;
                file.amalgams.push((
                    name,
                    AmalgamDecl {
                        core,
                        via: [m1, m2],
                        amalgam,
                    },
                ));
            }
            other => return err(ParseErrorKind::Syntax, number, col, format!("unknown block `{other}`")),
        }
    }
    Ok(file)
}

/// Reads block lines up to `end`, handing each to `f`.
fn block_lines<'a>(cur: &mut Cursor<'a>, header: usize, mut f: impl FnMut(&mut Cursor<'a>, usize) -> PResult<()>) -> PResult<()> {
    loop {
        let Some(line) = cur.next() else {
            return err(ParseErrorKind::Syntax, cur.last_line(), 1, format!("block opened on line {header} has no `end`"));
        };
        if line.tokens[0].1 == "end" {
            return no_trailing(line, 1);
        }
        let idx = cur.pos - 1;
        f(cur, idx)?;
    }
}

fn parse_pomonoid(cur: &mut Cursor, header: usize) -> PResult<Pomonoid> {
    let mut elems: Option<Elements> = None;
    let mut identity: Option<(usize, usize, String)> = None;
    let mut table: Option<Vec<usize>> = None;
    let mut pairs = Vec::new();
    block_lines(cur, header, |cur, idx| {
        let line = &cur.lines[idx];
        let (col, kw) = line.tokens[0];
        let number = line.number;
        match kw {
            "elements" => {
                if elems.is_some() {
                    return err(ParseErrorKind::Syntax, number, col, "elements declared twice");
                }
                elems = Some(parse_elements(line)?);
            }
            "identity" => {
                let e = expect_name(line, 1, "the identity element")?;
                no_trailing(line, 2)?;
                identity = Some((number, line.tokens[1].0, e.to_string()));
            }
            "table" => {
                no_trailing(line, 1)?;
                let Some(el) = &elems else {
                    return err(ParseErrorKind::Syntax, number, col, "`table` before `elements`");
                };
                let n = el.names.len();
                table = Some(parse_table(cur, n, n, el, number)?);
            }
            "order" => {
                let Some(el) = &elems else {
                    return err(ParseErrorKind::Syntax, number, col, "`order` before `elements`");
                };
                parse_order(line, el, &mut pairs)?;
            }
            other => return err(ParseErrorKind::Syntax, number, col, format!("unknown pomonoid field `{other}`")),
        }
        Ok(())
    })?;
    let Some(elems) = elems else {
        return err(ParseErrorKind::Syntax, header, 1, "pomonoid has no `elements` line");
    };
    let Some(table) = table else {
        return err(ParseErrorKind::Syntax, header, 1, "pomonoid has no `table`");
    };
    let identity = match identity {
        Some((l, c, e)) => Some(elems.index(l, c, &e)?),
        None => None,
    };
    let poset = Poset::from_pairs(elems.names.clone(), &pairs).map_err(|e| validation(elems.line, e))?;
    Pomonoid::validate(PomonoidCandidate { poset, table, identity }).map_err(|e| validation(header, e))
}

fn parse_sposet(cur: &mut Cursor, header: usize, s: &Arc<Pomonoid>, side: SideDecl) -> PResult<SPoset> {
    let mut elems: Option<Elements> = None;
    let mut left: Option<Vec<usize>> = None;
    let mut right: Option<Vec<usize>> = None;
    let mut pairs = Vec::new();
    block_lines(cur, header, |cur, idx| {
        let line = &cur.lines[idx];
        let (col, kw) = line.tokens[0];
        let number = line.number;
        match kw {
            "elements" => {
                if elems.is_some() {
                    return err(ParseErrorKind::Syntax, number, col, "elements declared twice");
                }
                elems = Some(parse_elements(line)?);
            }
            "act" => {
                let Some(el) = &elems else {
                    return err(ParseErrorKind::Syntax, number, col, "`act` before `elements`");
                };
                let which = match (line.tokens.get(1).map(|t| t.1), side) {
                    (None, SideDecl::Right) | (Some("right"), SideDecl::Right | SideDecl::Bi) => SideDecl::Right,
                    (None, SideDecl::Left) | (Some("left"), SideDecl::Left | SideDecl::Bi) => SideDecl::Left,
                    (None, SideDecl::Bi) => return err(ParseErrorKind::Syntax, number, col, "a bi S-poset needs `act left` and `act right`"),
                    (Some(t), _) => return err(ParseErrorKind::Syntax, number, line.tokens[1].0, format!("`act {t}` does not fit side {}", side.keyword())),
                };
                no_trailing(line, if line.tokens.len() > 1 { 2 } else { 1 })?;
                let slot = if which == SideDecl::Right { &mut right } else { &mut left };
                if slot.is_some() {
                    return err(ParseErrorKind::Syntax, number, col, "action table given twice");
                }
                *slot = Some(parse_table(cur, el.names.len(), s.len(), el, number)?);
            }
            "order" => {
                let Some(el) = &elems else {
                    return err(ParseErrorKind::Syntax, number, col, "`order` before `elements`");
                };
                parse_order(line, el, &mut pairs)?;
            }
            other => return err(ParseErrorKind::Syntax, number, col, format!("unknown sposet field `{other}`")),
        }
        Ok(())
    })?;
    let Some(elems) = elems else {
        return err(ParseErrorKind::Syntax, header, 1, "sposet has no `elements` line");
    };
    let need_left = matches!(side, SideDecl::Left | SideDecl::Bi);
    let need_right = matches!(side, SideDecl::Right | SideDecl::Bi);
    if need_left != left.is_some() || need_right != right.is_some() {
        return err(ParseErrorKind::Syntax, header, 1, format!("side {} needs its action table(s)", side.keyword()));
    }
    let poset = Poset::from_pairs(elems.names.clone(), &pairs).map_err(|e| validation(elems.line, e))?;
    SPoset::validate(SPosetCandidate {
        poset,
        left: left.map(|t| (s.clone(), t)),
        right: right.map(|t| (s.clone(), t)),
    })
    .map_err(|e| validation(header, e))
}

fn parse_map(cur: &mut Cursor, file: &StructureFile, header: usize, source: (&str, usize), target: (&str, usize)) -> PResult<MapKind> {
    enum End<'f> {
        Pom(&'f Arc<Pomonoid>),
        Act(&'f SPoset),
    }
    let resolve = |(n, c): (&str, usize)| -> PResult<End> {
        if let Some(p) = file.pomonoid(n) {
            Ok(End::Pom(p))
        } else if let Some(d) = file.sposet(n) {
            Ok(End::Act(&d.sposet))
        } else {
            err(ParseErrorKind::Unresolved, header, c, format!("no pomonoid or sposet named `{n}`"))
        }
    };
    let (src, dst) = (resolve(source)?, resolve(target)?);
    let names_of = |e: &End| -> Vec<String> {
        match e {
            End::Pom(p) => p.poset().names().to_vec(),
            End::Act(a) => a.poset().names().to_vec(),
        }
    };
    let src_el = Elements {
        names: names_of(&src),
        line: header,
    };
    let dst_el = Elements {
        names: names_of(&dst),
        line: header,
    };
    let mut assignment: Vec<Option<usize>> = vec![None; src_el.names.len()];
    block_lines(cur, header, |cur, idx| {
        let line = &cur.lines[idx];
        if line.tokens.len() % 3 != 0 {
            return err(ParseErrorKind::Syntax, line.number, line.tokens[0].0, "assignments are written `x -> y`");
        }
        for chunk in line.tokens.chunks(3) {
            let [(c1, x), (c2, op), (c3, y)] = [chunk[0], chunk[1], chunk[2]];
            if op != "->" {
                return err(ParseErrorKind::Syntax, line.number, c2, format!("expected `->`, found `{op}`"));
            }
            let i = src_el.index(line.number, c1, x)?;
            let j = dst_el.index(line.number, c3, y)?;
            if assignment[i].is_some_and(|k| k != j) {
                return err(ParseErrorKind::Syntax, line.number, c1, format!("`{x}` is assigned twice"));
            }
            assignment[i] = Some(j);
        }
        Ok(())
    })?;
    let missing: Vec<&str> = src_el.names.iter().zip(&assignment).filter(|(_, a)| a.is_none()).map(|(n, _)| n.as_str()).collect();
    if !missing.is_empty() {
        return err(ParseErrorKind::Syntax, header, 1, format!("no image for {}", missing.join(", ")));
    }
    let map: Vec<usize> = assignment.into_iter().map(|a| a.expect("checked total")).collect();
    match (src, dst) {
        (End::Pom(p), End::Pom(q)) => PomonoidMorphism::new(p.clone(), q.clone(), map)
            .map(MapKind::Morphism)
            .map_err(|e| validation(header, e)),
        (End::Act(x), End::Act(y)) => {
            // Maps between posets over different pomonoids are checked by the
            // command that restricts them.
            let over = |n: &str| file.sposet(n).map(|d| (d.over.clone(), d.side));
            if over(source.0) != over(target.0) {
                return Ok(MapKind::Act(map));
            }
            let m = analyze_map(&map, x, y).map_err(|e| validation(header, e))?;
            if !m.flags.monotone {
                return Err(validation(header, Error::BadInput("the map is not monotone".into())));
            }
            Ok(MapKind::Act(map))
        }
        _ => err(ParseErrorKind::Syntax, header, 1, "a map joins two pomonoids or two sposets"),
    }
}

/// Writes the file back in canonical form; `parse(serialize(f))` resolves to
/// the same structures.
pub fn serialize(file: &StructureFile) -> String {
    let mut out = String::new();
    let push_order = |out: &mut String, p: &Poset| {
        let pairs: Vec<String> = p.hasse().iter().map(|&(a, b)| format!("{} <= {}", p.name(a), p.name(b))).collect();
        if !pairs.is_empty() {
            out.push_str(&format!("  order {}\n", pairs.join(", ")));
        }
    };
    for (name, p) in &file.pomonoids {
        out.push_str(&format!("pomonoid {name}\n  elements {}\n", p.poset().names().join(" ")));
        out.push_str(&format!("  identity {}\n  table\n", p.name(p.identity())));
        for s in p.elements() {
            let row: Vec<&str> = p.elements().map(|t| p.name(p.mul(s, t))).collect();
            out.push_str(&format!("    {}\n", row.join(" ")));
        }
        push_order(&mut out, p.poset());
        out.push_str("end\n\n");
    }
    for (name, d) in &file.sposets {
        let x = &d.sposet;
        out.push_str(&format!("sposet {name} over {} side {}\n", d.over, d.side.keyword()));
        out.push_str(&format!("  elements {}\n", x.poset().names().join(" ")));
        let m = file.pomonoid(&d.over).map_or(0, |p| p.len());
        let mut table = |label: &str, f: &dyn Fn(usize, usize) -> usize| {
            out.push_str(&format!("  act{label}\n"));
            for p in 0..x.len() {
                let row: Vec<&str> = (0..m).map(|s| x.name(f(p, s))).collect();
                out.push_str(&format!("    {}\n", row.join(" ")));
            }
        };
        match d.side {
            SideDecl::Right => table("", &|p, s| x.act_right(p, s)),
            SideDecl::Left => table("", &|p, s| x.act_left(s, p)),
            SideDecl::Bi => {
                table(" left", &|p, s| x.act_left(s, p));
                table(" right", &|p, s| x.act_right(p, s));
            }
        }
        push_order(&mut out, x.poset());
        out.push_str("end\n\n");
    }
    for (name, m) in &file.maps {
        out.push_str(&format!("map {name} : {} -> {}\n", m.source, m.target));
        let (src, dst) = (element_names(file, &m.source), element_names(file, &m.target));
        let pairs: Vec<String> = m.assignment().iter().enumerate().map(|(i, &j)| format!("{} -> {}", src[i], dst[j])).collect();
        out.push_str(&format!("  {}\nend\n\n", pairs.join(", ")));
    }
    for (name, a) in &file.amalgams {
        out.push_str(&format!("amalgam {name} core {} via {} {}\n", a.core, a.via[0], a.via[1]));
    }
    out
}

fn element_names(file: &StructureFile, name: &str) -> Vec<String> {
    if let Some(p) = file.pomonoid(name) {
        p.poset().names().to_vec()
    } else if let Some(d) = file.sposet(name) {
        d.sposet.poset().names().to_vec()
    } else {
        Vec::new()
    }
}

/// A summary of every structure, one line each.
pub fn summary(file: &StructureFile) -> Vec<String> {
    let mut out = Vec::new();
    for (name, p) in &file.pomonoids {
        out.push(format!("pomonoid {name}: {} elements, identity {}", p.len(), p.name(p.identity())));
    }
    for (name, d) in &file.sposets {
        out.push(format!("sposet {name}: {} points over {} ({})", d.sposet.len(), d.over, d.side.keyword()));
    }
    for (name, m) in &file.maps {
        let what = match m.kind {
            MapKind::Morphism(_) => "pomonoid morphism",
            MapKind::Act(_) => "S-poset map",
        };
        out.push(format!("map {name}: {} -> {} ({what})", m.source, m.target));
    }
    for (name, a) in &file.amalgams {
        out.push(format!("amalgam {name}: core {} via {} and {}", a.core, a.via[0], a.via[1]));
    }
    out
}
