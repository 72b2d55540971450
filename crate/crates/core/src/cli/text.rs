//! Line-oriented text formats.
//!
//! * `.cat`: sections `objects:`, `arrows:` (`f: a -> b`) and `relations:`
//!   (`g.f = h`, composition read right to left). Names outside the bare
//!   alphabet are written in backticks; `id_a` is the identity at `a`.
//! * span files: `category W|X|Y` blocks in `.cat` syntax followed by
//!   `functor fx: W -> X` and `functor fy: W -> Y` blocks of `obj p = a`
//!   and `arrow g = f.h` lines.
//! * `.rep`: `field F32003` or `field Q`, then `dim a = 2` and
//!   `matrix f = [[1,0],[0,1]]` with one inner list per row of the target.
//! * `.crep`: `field`, `degrees -2..2`, then `degree n` blocks in `.rep`
//!   syntax and `differential n` blocks of `d a = [[..]]` giving
//!   `X_n(a) → X_{n-1}(a)`.
//!
//! `#` starts a comment. Dimensions default to zero and matrices to zero
//! of the shape fixed by the dimensions.

use std::sync::Arc;

use crate::amalgam::Span;
use crate::catcore::{saturate, FinCategory, FunctorMap, GenId, MorId, ObjId, Path, PresentedCategory, Quiver};
use crate::error::{CliError, ParseError};
use crate::field::{Field, FieldChoice};
use crate::homotopy::ComplexRep;
use crate::linalg::Matrix;
use crate::linrep::Representation;

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

fn is_bare(c: char) -> bool {
    c.is_alphanumeric() || "_~^*|'+!@$%&?".contains(c)
}

/// A name as written in the formats.
pub fn quote(name: &str) -> String {
    if !name.is_empty() && !name.starts_with("id_") && name.chars().all(is_bare) {
        name.to_string()
    } else {
        format!("`{name}`")
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Name(String),
    Ident(String),
    Colon,
    Arrow,
    Dot,
    Eq,
    Comma,
    Other(String),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    col: usize,
}

/// One non-blank line with comments removed.
#[derive(Clone, Debug)]
struct Line<'a> {
    no: usize,
    indent: usize,
    text: &'a str,
}

fn lines(src: &str) -> Vec<Line<'_>> {
    src.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let mut in_quote = false;
            let mut end = raw.len();
            for (k, c) in raw.char_indices() {
                match c {
                    '`' => in_quote = !in_quote,
                    '#' if !in_quote => {
                        end = k;
                        break;
                    }
                    _ => {}
                }
            }
            let body = raw[..end].trim_end();
            let text = body.trim_start();
            (!text.is_empty()).then(|| Line {
                no: i + 1,
                indent: body.len() - text.len(),
                text,
            })
        })
        .collect()
}

impl Line<'_> {
    fn col(&self, offset: usize) -> usize {
        self.indent + self.text[..offset].chars().count() + 1
    }

    fn error(&self, offset: usize, message: impl Into<String>) -> ParseError {
        err(self.no, self.col(offset), message)
    }

    fn tokens(&self) -> Result<Vec<Token>, ParseError> {
        let s = self.text;
        let mut out = Vec::new();
        let mut it = s.char_indices().peekable();
        while let Some(&(k, c)) = it.peek() {
            let col = self.col(k);
            if c.is_whitespace() {
                it.next();
                continue;
            }
            let quoted = |it: &mut std::iter::Peekable<std::str::CharIndices>| -> Result<String, ParseError> {
                let start = it.next().map(|(k, _)| k).unwrap_or(s.len()) + 1;
                for (j, ch) in it.by_ref() {
                    if ch == '`' {
                        return Ok(s[start..j].to_string());
                    }
                }
                Err(self.error(start - 1, "unterminated backtick name"))
            };
            let tok = match c {
                '`' => Tok::Name(quoted(&mut it)?),
                ':' => single(&mut it, Tok::Colon),
                '.' => single(&mut it, Tok::Dot),
                '=' => single(&mut it, Tok::Eq),
                ',' => single(&mut it, Tok::Comma),
                '-' if s[k..].starts_with("->") => {
                    it.next();
                    it.next();
                    Tok::Arrow
                }
                c if is_bare(c) => {
                    let mut end = k;
                    while let Some(&(j, ch)) = it.peek() {
                        if !is_bare(ch) {
                            break;
                        }
                        end = j + ch.len_utf8();
                        it.next();
                    }
                    let word = &s[k..end];
                    if word == "id_" && it.peek().map(|&(_, ch)| ch) == Some('`') {
                        Tok::Ident(quoted(&mut it)?)
                    } else if let Some(o) = word.strip_prefix("id_").filter(|o| !o.is_empty()) {
                        Tok::Ident(o.to_string())
                    } else {
                        Tok::Name(word.to_string())
                    }
                }
                other => {
                    it.next();
                    Tok::Other(other.to_string())
                }
            };
            out.push(Token { tok, col });
        }
        Ok(out)
    }
}

fn single(it: &mut std::iter::Peekable<std::str::CharIndices>, t: Tok) -> Tok {
    it.next();
    t
}

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    fn new(line: &Line<'_>, toks: &'a [Token]) -> Self {
        Cursor {
            toks,
            pos: 0,
            line: line.no,
            end_col: line.col(line.text.len()),
        }
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.col)
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(err(self.line, self.col(), message))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn next(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos).map(|t| &t.tok);
        self.pos += 1;
        t
    }

    fn name(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Name(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => self.fail(format!("expected {what}")),
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(format!("expected {what}"))
        }
    }

    fn done(&self) -> Result<(), ParseError> {
        if self.pos < self.toks.len() {
            self.fail("unexpected trailing input")
        } else {
            Ok(())
        }
    }
}

/// A path term: identity or a chain of arrow names, resolved against `q`.
fn parse_path(cur: &mut Cursor<'_>, q: &Quiver) -> Result<(Path, usize), ParseError> {
    let col = cur.col();
    if let Some(Tok::Ident(o)) = cur.peek() {
        let o = o.clone();
        let v = q.vertex(&o).map_err(|e| err(cur.line, col, e.to_string()))?;
        cur.pos += 1;
        return Ok((Path::identity(v), col));
    }
    let mut names = vec![(cur.col(), cur.name("an arrow name")?)];
    while cur.peek() == Some(&Tok::Dot) {
        cur.pos += 1;
        names.push((cur.col(), cur.name("an arrow name")?));
    }
    let mut arrows = Vec::new();
    for (c, n) in names.iter().rev() {
        arrows.push(q.arrow(n).map_err(|e| err(cur.line, *c, e.to_string()))?);
    }
    let path = Path {
        src: q.arrows()[arrows[0]].src,
        arrows,
    };
    if !q.is_path(&path) {
        return Err(err(cur.line, col, format!("path `{}` is not composable", q.format_path(&path))));
    }
    Ok((path, col))
}

fn write_path(q: &Quiver, p: &Path) -> String {
    if p.arrows.is_empty() {
        let o = &q.vertices()[p.src];
        return if !o.is_empty() && o.chars().all(is_bare) { format!("id_{o}") } else { format!("id_`{o}`") };
    }
    p.arrows.iter().rev().map(|&a| quote(&q.arrows()[a].name)).collect::<Vec<_>>().join(".")
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Objects,
    Arrows,
    Relations,
}

fn section_header(line: &Line<'_>) -> Option<(Section, usize)> {
    for (name, s) in [("objects:", Section::Objects), ("arrows:", Section::Arrows), ("relations:", Section::Relations)] {
        if line.text.starts_with(name) {
            return Some((s, name.len()));
        }
    }
    None
}

fn parse_cat_lines(ls: &[Line<'_>]) -> Result<PresentedCategory, ParseError> {
    let mut q = Quiver::new::<&str>(&[], &[]).expect("empty quiver");
    let mut rels = Vec::new();
    let mut section = Section::None;
    for line in ls {
        let (sec, skip) = match section_header(line) {
            Some((s, k)) => (s, k),
            None => (section, 0),
        };
        section = sec;
        let rest = Line {
            no: line.no,
            indent: line.indent + skip,
            text: &line.text[skip..],
        };
        let line = &rest;
        let toks = line.tokens()?;
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor::new(line, &toks);
        match section {
            Section::None => return cur.fail("expected `objects:`, `arrows:` or `relations:`"),
            Section::Objects => {
                while cur.peek().is_some() {
                    let col = cur.col();
                    let n = cur.name("an object name")?;
                    q.add_vertex(&n).map_err(|e| err(line.no, col, e.to_string()))?;
                    if cur.peek() == Some(&Tok::Comma) {
                        cur.next();
                    }
                }
            }
            Section::Arrows => {
                let col = cur.col();
                let f = cur.name("an arrow name")?;
                cur.expect(Tok::Colon, "`:`")?;
                let scol = cur.col();
                let a = cur.name("a source object")?;
                cur.expect(Tok::Arrow, "`->`")?;
                let tcol = cur.col();
                let b = cur.name("a target object")?;
                cur.done()?;
                q.vertex(&a).map_err(|e| err(line.no, scol, e.to_string()))?;
                q.vertex(&b).map_err(|e| err(line.no, tcol, e.to_string()))?;
                q.add_arrow(&f, &a, &b).map_err(|e| err(line.no, col, e.to_string()))?;
            }
            Section::Relations => {
                let (l, col) = parse_path(&mut cur, &q)?;
                cur.expect(Tok::Eq, "`=`")?;
                let (r, _) = parse_path(&mut cur, &q)?;
                cur.done()?;
                if l.src != r.src || q.path_target(&l) != q.path_target(&r) {
                    return Err(err(
                        line.no,
                        col,
                        format!("relation `{} = {}` has mismatched endpoints", q.format_path(&l), q.format_path(&r)),
                    ));
                }
                rels.push((l, r));
            }
        }
    }
    Ok(PresentedCategory::new(q, rels).expect("relations checked while parsing"))
}

/// Parse a `.cat` presentation.
pub fn parse_cat(src: &str) -> Result<PresentedCategory, ParseError> {
    parse_cat_lines(&lines(src))
}

/// Serialize a presentation as `.cat` text.
pub fn write_cat(p: &PresentedCategory) -> String {
    let q = p.quiver();
    let mut out = String::from("objects:");
    for v in q.vertices() {
        out.push(' ');
        out.push_str(&quote(v));
    }
    out.push('\n');
    if !q.arrows().is_empty() {
        out.push_str("arrows:\n");
        for a in q.arrows() {
            out.push_str(&format!(
                "  {}: {} -> {}\n",
                quote(&a.name),
                quote(&q.vertices()[a.src]),
                quote(&q.vertices()[a.tgt])
            ));
        }
    }
    if !p.relations().is_empty() {
        out.push_str("relations:\n");
        for (l, r) in p.relations() {
            out.push_str(&format!("  {} = {}\n", write_path(q, l), write_path(q, r)));
        }
    }
    out
}

/// `.cat` text of a finite category through its complete presentation.
pub fn category_text(c: &FinCategory) -> String {
    write_cat(&c.presentation())
}

/// Saturate a presentation read from `.cat` text.
pub fn load_category(src: &str, bound: usize) -> Result<Arc<FinCategory>, CliError> {
    let p = parse_cat(src)?;
    Ok(Arc::new(saturate(&p, bound).finite()?))
}

fn block_header<'a>(line: &Line<'a>, keyword: &str) -> Option<&'a str> {
    line.text.strip_prefix(keyword).filter(|r| r.starts_with(char::is_whitespace)).map(str::trim)
}

/// Parse a span file into the span `X ← W → Y`.
pub fn parse_span(src: &str, bound: usize) -> Result<Span, CliError> {
    let ls = lines(src);
    let mut cats: Vec<(String, Arc<FinCategory>)> = Vec::new();
    let mut functors: Vec<(String, FunctorMap)> = Vec::new();
    let mut i = 0;
    while i < ls.len() {
        let line = &ls[i];
        let body_end = ls[i + 1..]
            .iter()
            .position(|l| block_header(l, "category").is_some() || block_header(l, "functor").is_some())
            .map_or(ls.len(), |k| i + 1 + k);
        let body = &ls[i + 1..body_end];
        if let Some(name) = block_header(line, "category") {
            let p = parse_cat_lines(body)?;
            let c = saturate(&p, bound).finite()?;
            cats.push((name.to_string(), Arc::new(c)));
        } else if block_header(line, "functor").is_some() {
            let toks = line.tokens()?;
            let mut cur = Cursor::new(line, &toks);
            cur.next();
            let fname = cur.name("a functor name")?;
            cur.expect(Tok::Colon, "`:`")?;
            let scol = cur.col();
            let s = cur.name("a source category")?;
            cur.expect(Tok::Arrow, "`->`")?;
            let tcol = cur.col();
            let t = cur.name("a target category")?;
            cur.done()?;
            let find = |n: &str, col: usize| {
                cats.iter()
                    .find(|(k, _)| k == n)
                    .map(|(_, c)| c.clone())
                    .ok_or_else(|| err(line.no, col, format!("unknown category `{n}`")))
            };
            let (dom, cod) = (find(&s, scol)?, find(&t, tcol)?);
            functors.push((fname, parse_functor_body(body, &dom, &cod)?));
        } else {
            return Err(line.error(0, "expected `category NAME` or `functor NAME: A -> B`").into());
        }
        i = body_end;
    }
    let take = |n: &str| {
        functors
            .iter()
            .find(|(k, _)| k == n)
            .map(|(_, f)| f.clone())
            .ok_or_else(|| err(ls.last().map_or(1, |l| l.no), 1, format!("missing functor `{n}`")))
    };
    Ok(Span::new(take("fx")?, take("fy")?)?)
}

fn parse_functor_body(body: &[Line<'_>], dom: &Arc<FinCategory>, cod: &Arc<FinCategory>) -> Result<FunctorMap, CliError> {
    let mut obj: Vec<Option<ObjId>> = vec![None; dom.num_objects()];
    let mut gens: Vec<Option<MorId>> = vec![None; dom.num_gens()];
    let cq = cod.quiver();
    for line in body {
        let toks = line.tokens()?;
        let mut cur = Cursor::new(line, &toks);
        let kind = cur.name("`obj` or `arrow`")?;
        let col = cur.col();
        let src = cur.name("a name")?;
        cur.expect(Tok::Eq, "`=`")?;
        let at = |e: crate::error::CategoryError| err(line.no, col, e.to_string());
        match kind.as_str() {
            "obj" => {
                let tcol = cur.col();
                let t = cur.name("an object name")?;
                cur.done()?;
                obj[dom.object(&src).map_err(at)?] = Some(cod.object(&t).map_err(|e| err(line.no, tcol, e.to_string()))?);
            }
            "arrow" => {
                let (p, _) = parse_path(&mut cur, &cq)?;
                cur.done()?;
                let g = dom.gen(&src).map_err(at)?;
                gens[g] = cod.path_mor(p.src, &p.arrows);
            }
            _ => return Err(err(line.no, 1, "expected `obj` or `arrow`").into()),
        }
    }
    let missing = |what: &str, name: &str| CliError::Parse(err(body.last().map_or(1, |l| l.no), 1, format!("{what} `{name}` is not mapped")));
    let obj = obj
        .iter()
        .enumerate()
        .map(|(o, v)| v.ok_or_else(|| missing("object", dom.object_name(o))))
        .collect::<Result<Vec<_>, _>>()?;
    let gens = gens
        .iter()
        .enumerate()
        .map(|(g, v)| v.ok_or_else(|| missing("arrow", &dom.gens()[g].name)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FunctorMap::new(dom.clone(), cod.clone(), obj, gens)?)
}

fn write_functor(name: &str, dom: &str, cod: &str, f: &FunctorMap) -> String {
    let mut out = format!("functor {name}: {dom} -> {cod}\n");
    let (a, b) = (f.dom(), f.cod());
    let bq = b.quiver();
    for o in 0..a.num_objects() {
        out.push_str(&format!("  obj {} = {}\n", quote(a.object_name(o)), quote(b.object_name(f.obj(o)))));
    }
    for g in 0..a.num_gens() {
        let m = b.mor(f.on_gen(g));
        let p = Path {
            src: m.src,
            arrows: m.word.clone(),
        };
        out.push_str(&format!("  arrow {} = {}\n", quote(&a.gens()[g].name), write_path(&bq, &p)));
    }
    out
}

/// Serialize a span in the span file format.
pub fn write_span(s: &Span) -> String {
    let mut out = String::new();
    for (n, c) in [("W", s.w()), ("X", s.x()), ("Y", s.y())] {
        out.push_str(&format!("category {n}\n"));
        out.push_str(&category_text(c));
    }
    out.push_str(&write_functor("fx", "W", "X", s.fx()));
    out.push_str(&write_functor("fy", "W", "Y", s.fy()));
    out
}

/// The field named by the `field` line.
pub fn field_header(src: &str) -> Result<FieldChoice, ParseError> {
    let line = lines(src).into_iter().next().ok_or_else(|| err(1, 1, "empty input"))?;
    match block_header(&line, "field") {
        Some(name) => FieldChoice::parse(name).map_err(|e| line.error(6, e.to_string())),
        None => Err(line.error(0, "expected `field F<p>` or `field Q` first")),
    }
}

fn check_field<F: Field>(ls: &[Line<'_>], field: &F) -> Result<usize, ParseError> {
    let first = ls.first().ok_or_else(|| err(1, 1, "empty input"))?;
    let name = block_header(first, "field").ok_or_else(|| first.error(0, "expected `field F<p>` or `field Q` first"))?;
    if name != field.name() {
        return Err(first.error(6, format!("field `{name}` where `{}` was expected", field.name())));
    }
    Ok(1)
}

/// Parse a matrix literal of the given shape starting at byte `at` of `line`.
fn parse_matrix<F: Field>(line: &Line<'_>, at: usize, field: &F, rows: usize, cols: usize, what: &str) -> Result<Matrix<F>, ParseError> {
    let s = &line.text[at..];
    let lead = s.len() - s.trim_start().len();
    let s = s.trim();
    let base = at + lead;
    let shape_err = |got_rows: usize, got_cols: usize| {
        line.error(
            at + lead,
            format!("{what}: expected a {rows}x{cols} matrix, got {got_rows}x{got_cols}"),
        )
    };
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| line.error(base, "expected a matrix `[[..],..]`"))?;
    let mut row_texts: Vec<(usize, &str)> = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (k, c) in inner.char_indices() {
        match c {
            '[' => {
                if depth == 0 {
                    start = k + 1;
                }
                depth += 1;
            }
            ']' => {
                depth -= 1;
                if depth == 0 {
                    row_texts.push((base + 1 + start, &inner[start..k]));
                }
            }
            ',' | ' ' | '\t' if depth == 0 => {}
            _ if depth == 0 => return Err(line.error(base + 1 + k, "expected `[` starting a row")),
            _ => {}
        }
        if !(0..=1).contains(&depth) {
            return Err(line.error(base + 1 + k, "unbalanced brackets"));
        }
    }
    if depth != 0 {
        return Err(line.error(base, "unbalanced brackets"));
    }
    let mut entries = Vec::new();
    for &(off, text) in &row_texts {
        let row: Vec<F::Elem> = if text.trim().is_empty() {
            Vec::new()
        } else {
            let mut v = Vec::new();
            let mut pos = 0;
            for part in text.split(',') {
                let lit = part.trim();
                let col = off + pos + (part.len() - part.trim_start().len());
                v.push(field.parse(lit).map_err(|e| line.error(col, e.to_string()))?);
                pos += part.len() + 1;
            }
            v
        };
        entries.push(row);
    }
    let got_cols = entries.first().map_or(cols, |r| r.len());
    if entries.len() != rows || entries.iter().any(|r| r.len() != got_cols) || (rows > 0 && got_cols != cols) {
        return Err(shape_err(entries.len(), got_cols));
    }
    Ok(Matrix::from_rows(field, rows, cols, entries).expect("shape checked"))
}

fn write_matrix<F: Field>(m: &Matrix<F>) -> String {
    let f = m.field();
    let rows: Vec<String> = m
        .to_rows()
        .iter()
        .map(|r| format!("[{}]", r.iter().map(|e| f.format(e)).collect::<Vec<_>>().join(",")))
        .collect();
    format!("[{}]", rows.join(","))
}

/// Byte offset just past `prefix NAME =` on a `dim`, `matrix` or `d` line.
fn assignment(line: &Line<'_>, keyword: &str) -> Result<Option<(String, usize, usize)>, ParseError> {
    if block_header(line, keyword).is_none() {
        return Ok(None);
    }
    let eq = line
        .text
        .char_indices()
        .scan(false, |q, (k, c)| {
            if c == '`' {
                *q = !*q;
            }
            Some((k, c, *q))
        })
        .find(|&(_, c, q)| c == '=' && !q)
        .map(|(k, _, _)| k)
        .ok_or_else(|| line.error(line.text.len(), "expected `=`"))?;
    let head = Line {
        no: line.no,
        indent: line.indent,
        text: &line.text[..eq],
    };
    let toks = head.tokens()?;
    let mut cur = Cursor::new(&head, &toks);
    cur.next();
    let col = cur.col();
    let name = cur.name("a name")?;
    cur.done()?;
    Ok(Some((name, col, eq + 1)))
}

fn parse_rep_lines<F: Field>(ls: &[Line<'_>], base: &Arc<FinCategory>, field: &F) -> Result<Representation<F>, CliError> {
    let mut dims = vec![0usize; base.num_objects()];
    let mut seen_dim = vec![false; base.num_objects()];
    let mut pending: Vec<(GenId, &Line<'_>, usize)> = Vec::new();
    for line in ls {
        if let Some((name, col, at)) = assignment(line, "dim")? {
            let o = base.object(&name).map_err(|e| err(line.no, col, e.to_string()))?;
            if std::mem::replace(&mut seen_dim[o], true) {
                return Err(err(line.no, col, format!("second `dim` for `{name}`")).into());
            }
            let v = line.text[at..].trim();
            dims[o] = v.parse().map_err(|_| line.error(at + 1, format!("`{v}` is not a dimension")))?;
        } else if let Some((name, col, at)) = assignment(line, "matrix")? {
            let g = base.gen(&name).map_err(|e| err(line.no, col, e.to_string()))?;
            if pending.iter().any(|p| p.0 == g) {
                return Err(err(line.no, col, format!("second `matrix` for `{name}`")).into());
            }
            pending.push((g, line, at));
        } else {
            return Err(line.error(0, "expected `dim NAME = n` or `matrix NAME = [[..]]`").into());
        }
    }
    let mut gens: Vec<Matrix<F>> = base.gens().iter().map(|a| Matrix::zeros(field, dims[a.tgt], dims[a.src])).collect();
    for (g, line, at) in pending {
        let a = &base.gens()[g];
        gens[g] = parse_matrix(line, at, field, dims[a.tgt], dims[a.src], &format!("arrow `{}`", a.name))?;
    }
    Ok(Representation::new(base.clone(), field.clone(), dims, gens)?)
}

/// Parse a `.rep` representation of `base` over `field`.
pub fn parse_rep<F: Field>(src: &str, base: &Arc<FinCategory>, field: &F) -> Result<Representation<F>, CliError> {
    let ls = lines(src);
    let skip = check_field(&ls, field)?;
    parse_rep_lines(&ls[skip..], base, field)
}

fn write_rep_body<F: Field>(x: &Representation<F>, indent: &str) -> String {
    let b = x.base();
    let mut out = String::new();
    for o in 0..b.num_objects() {
        out.push_str(&format!("{indent}dim {} = {}\n", quote(b.object_name(o)), x.dim(o)));
    }
    for (g, a) in b.gens().iter().enumerate() {
        out.push_str(&format!("{indent}matrix {} = {}\n", quote(&a.name), write_matrix(x.gen_matrix(g))));
    }
    out
}

/// Serialize a representation as `.rep` text.
pub fn write_rep<F: Field>(x: &Representation<F>) -> String {
    format!("field {}\n{}", x.field().name(), write_rep_body(x, ""))
}

/// Parse a `.crep` complex of representations of `base` over `field`.
pub fn parse_crep<F: Field>(src: &str, base: &Arc<FinCategory>, field: &F) -> Result<ComplexRep<F>, CliError> {
    let ls = lines(src);
    let skip = check_field(&ls, field)?;
    let head = ls.get(skip).ok_or_else(|| err(ls[0].no + 1, 1, "expected `degrees LO..HI`"))?;
    let range = block_header(head, "degrees").ok_or_else(|| head.error(0, "expected `degrees LO..HI`"))?;
    let (lo, hi) = range
        .split_once("..")
        .and_then(|(a, b)| Some((a.trim().parse::<i32>().ok()?, b.trim().parse::<i32>().ok()?)))
        .filter(|(a, b)| a <= b)
        .ok_or_else(|| head.error(8, format!("`{range}` is not a window LO..HI")))?;
    let width = (hi - lo + 1) as usize;
    let mut degrees: Vec<Option<Representation<F>>> = vec![None; width];
    let mut diffs: Vec<Option<Vec<Matrix<F>>>> = vec![None; width - 1];
    let rest = &ls[skip + 1..];
    let mut i = 0;
    let mut diff_blocks = Vec::new();
    while i < rest.len() {
        let line = &rest[i];
        let end = rest[i + 1..]
            .iter()
            .position(|l| block_header(l, "degree").is_some() || block_header(l, "differential").is_some())
            .map_or(rest.len(), |k| i + 1 + k);
        let body = &rest[i + 1..end];
        let (kw, arg) = if let Some(a) = block_header(line, "degree") {
            ("degree", a)
        } else if let Some(a) = block_header(line, "differential") {
            ("differential", a)
        } else {
            return Err(line.error(0, "expected `degree n` or `differential n`").into());
        };
        let n: i32 = arg.parse().map_err(|_| line.error(kw.len() + 1, format!("`{arg}` is not a degree")))?;
        let in_window = match kw {
            "degree" => (lo..=hi).contains(&n),
            _ => (lo + 1..=hi).contains(&n),
        };
        if !in_window {
            return Err(line.error(kw.len() + 1, format!("{kw} {n} lies outside the window {lo}..{hi}")).into());
        }
        if kw == "degree" {
            let slot = &mut degrees[(n - lo) as usize];
            if slot.is_some() {
                return Err(line.error(0, format!("second block for degree {n}")).into());
            }
            *slot = Some(parse_rep_lines(body, base, field)?);
        } else {
            diff_blocks.push((n, line, body));
        }
        i = end;
    }
    let degrees: Vec<Representation<F>> = degrees
        .into_iter()
        .map(|d| d.unwrap_or_else(|| Representation::zero(base.clone(), field.clone())))
        .collect();
    for (n, line, body) in diff_blocks {
        let k = (n - lo - 1) as usize;
        if diffs[k].is_some() {
            return Err(line.error(0, format!("second block for differential {n}")).into());
        }
        let (src, tgt) = (&degrees[k + 1], &degrees[k]);
        let mut comps: Vec<Matrix<F>> = (0..base.num_objects()).map(|o| Matrix::zeros(field, tgt.dim(o), src.dim(o))).collect();
        let mut seen = vec![false; base.num_objects()];
        for l in body {
            let (name, col, at) = assignment(l, "d")?.ok_or_else(|| l.error(0, "expected `d OBJECT = [[..]]`"))?;
            let o = base.object(&name).map_err(|e| err(l.no, col, e.to_string()))?;
            if std::mem::replace(&mut seen[o], true) {
                return Err(err(l.no, col, format!("second differential at `{name}`")).into());
            }
            comps[o] = parse_matrix(l, at, field, tgt.dim(o), src.dim(o), &format!("differential {n} at `{name}`"))?;
        }
        diffs[k] = Some(comps);
    }
    let d = diffs
        .into_iter()
        .enumerate()
        .map(|(k, d)| {
            d.unwrap_or_else(|| {
                (0..base.num_objects())
                    .map(|o| Matrix::zeros(field, degrees[k].dim(o), degrees[k + 1].dim(o)))
                    .collect()
            })
        })
        .collect();
    Ok(ComplexRep::new(lo, degrees, d)?)
}

/// Serialize a complex as `.crep` text.
pub fn write_crep<F: Field>(x: &ComplexRep<F>) -> String {
    let (lo, hi) = x.window();
    let b = x.base();
    let mut out = format!("field {}\ndegrees {lo}..{hi}\n", x.field().name());
    for n in lo..=hi {
        out.push_str(&format!("degree {n}\n"));
        out.push_str(&write_rep_body(x.degree(n).expect("in window"), "  "));
    }
    for n in lo + 1..=hi {
        out.push_str(&format!("differential {n}\n"));
        for o in 0..b.num_objects() {
            out.push_str(&format!("  d {} = {}\n", quote(b.object_name(o)), write_matrix(&x.differential(o, n))));
        }
    }
    out
}

/// The kind of value a file holds, judged from its first line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FileKind {
    Category,
    Span,
    Rep,
    Complex,
}

pub fn sniff(src: &str) -> FileKind {
    let ls = lines(src);
    match ls.first() {
        Some(l) if block_header(l, "category").is_some() => FileKind::Span,
        Some(l) if block_header(l, "field").is_some() => {
            if ls.get(1).is_some_and(|l| block_header(l, "degrees").is_some()) {
                FileKind::Complex
            } else {
                FileKind::Rep
            }
        }
        _ => FileKind::Category,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    const A2: &str = "# A2\nobjects: 1 2\narrows:\n  a: 1 -> 2\n";

    #[test]
    fn a2_presentation() {
        let p = parse_cat(A2).unwrap();
        assert_eq!(p.quiver().vertices().len(), 2);
        assert_eq!(p.quiver().arrows().len(), 1);
        assert_eq!(parse_cat(&write_cat(&p)).unwrap(), p);
    }

    #[test]
    fn relations_compose_right_to_left() {
        let src = "objects: a b c\narrows:\n  f: a -> b\n  g: b -> c\n  h: a -> c\nrelations:\n  g.f = h\n";
        let c = load_category(src, 16).unwrap();
        assert_eq!(c.hom(0, 2).len(), 1);
        let bad = "objects: a b c\narrows:\n  f: a -> b\n  g: b -> c\nrelations:\n  f.g = f\n";
        let e = parse_cat(bad).unwrap_err();
        assert_eq!((e.line, e.column), (6, 3));
    }

    #[test]
    fn quoted_names() {
        let src = "objects: `a|b.c` d\narrows:\n  `x:y`: `a|b.c` -> d\n  e: d -> d\nrelations:\n  e.e = id_d\n";
        let p = parse_cat(src).unwrap();
        assert_eq!(p.quiver().vertices()[0], "a|b.c");
        assert_eq!(parse_cat(&write_cat(&p)).unwrap(), p);
    }

    #[test]
    fn unknown_object_is_located() {
        let e = parse_cat("objects: a\narrows:\n  f: a -> b\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 11));
        assert!(e.message.contains("`b`"));
    }

    #[test]
    fn rep_shape_error_names_arrow() {
        let c = load_category(A2, 16).unwrap();
        let f = PrimeField::new(5).unwrap();
        let src = "field F5\ndim 1 = 1\ndim 2 = 2\nmatrix a = [[1,2]]\n";
        let e = parse_rep(src, &c, &f).unwrap_err().to_string();
        assert!(e.contains("arrow `a`"), "{e}");
        assert!(e.starts_with("line 4"), "{e}");
        let ok = parse_rep("field F5\ndim 1 = 1\ndim 2 = 2\nmatrix a = [[1],[2]]\n", &c, &f).unwrap();
        assert_eq!(parse_rep(&write_rep(&ok), &c, &f).unwrap(), ok);
    }

    #[test]
    fn crep_rejects_nonzero_square() {
        let c = load_category("objects: a\n", 4).unwrap();
        let f = PrimeField::new(5).unwrap();
        let src = "field F5\ndegrees 0..2\ndegree 0\n  dim a = 1\ndegree 1\n  dim a = 1\ndegree 2\n  dim a = 1\n\
                   differential 1\n  d a = [[1]]\ndifferential 2\n  d a = [[1]]\n";
        let e = parse_crep(src, &c, &f).unwrap_err().to_string();
        assert!(e.contains("`a`") && e.contains("degree 2"), "{e}");
    }

    #[test]
    fn empty_shapes_round_trip() {
        let c = load_category(A2, 16).unwrap();
        let f = PrimeField::new(7).unwrap();
        let x = parse_rep("field F7\ndim 2 = 2\n", &c, &f).unwrap();
        assert_eq!(write_rep(&x), "field F7\ndim 1 = 0\ndim 2 = 2\nmatrix a = [[],[]]\n");
        assert_eq!(parse_rep(&write_rep(&x), &c, &f).unwrap(), x);
    }

    #[test]
    fn span_round_trip() {
        let src = "category W\nobjects: p\ncategory X\nobjects: a b\narrows:\n  f: a -> b\ncategory Y\nobjects: c\n\
                   functor fx: W -> X\n  obj p = b\nfunctor fy: W -> Y\n  obj p = c\n";
        let s = parse_span(src, 16).unwrap();
        assert_eq!(s.x().num_objects(), 2);
        let again = parse_span(&write_span(&s), 16).unwrap();
        assert_eq!(again.fx().obj_map(), s.fx().obj_map());
        assert_eq!(write_span(&again), write_span(&s));
    }

    #[test]
    fn field_mismatch() {
        let c = load_category(A2, 16).unwrap();
        let e = parse_rep("field Q\n", &c, &PrimeField::new(5).unwrap()).unwrap_err();
        assert!(e.to_string().contains("F5"));
        assert_eq!(field_header("field Q\n").unwrap(), FieldChoice::Rational);
    }
}
