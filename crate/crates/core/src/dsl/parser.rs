use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::lexer::{lex, Tok, Token};
use super::*;

const KEYWORDS: &[&str] = &["algebra", "builtin", "group", "action", "basis", "unit", "strict", "elements"];

struct Parser {
    toks: Vec<Token>,
    at: usize,
}

type PResult<T> = Result<T, Diagnostic>;

fn strs(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.at + k).min(self.toks.len() - 1)].tok
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected<T>(&self, expected: Vec<String>) -> PResult<T> {
        let t = self.peek();
        Err(Diagnostic::new(t.pos, format!("unexpected {}", t.tok.describe()), expected))
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if &self.peek().tok == tok {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<Pos> {
        if self.peek().tok == tok {
            Ok(self.next().pos)
        } else {
            self.unexpected(vec![tok.symbol().to_string()])
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn ident(&mut self) -> PResult<Name> {
        match &self.peek().tok {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let t = self.next();
                let Tok::Ident(text) = t.tok else { unreachable!() };
                Ok(Name { text, pos: t.pos })
            }
            _ => self.unexpected(strs(&["identifier"])),
        }
    }

    /// Basis or group element name: an identifier or the literal `1`.
    fn name(&mut self) -> PResult<Name> {
        if let Tok::Int(s) = &self.peek().tok {
            if s == "1" {
                let t = self.next();
                return Ok(Name { text: "1".into(), pos: t.pos });
            }
            let t = self.peek();
            return Err(Diagnostic::new(t.pos, format!("`{s}` is not a valid element name"), strs(&["identifier", "1"])));
        }
        self.ident()
    }

    fn name_list(&mut self) -> PResult<Vec<Name>> {
        let mut names = vec![self.name()?];
        while self.eat(&Tok::Comma) {
            names.push(self.name()?);
        }
        self.expect(Tok::Semi)?;
        Ok(names)
    }

    fn integer(&mut self) -> PResult<(BigInt, Pos)> {
        match &self.peek().tok {
            Tok::Int(s) => {
                let n: BigInt = s.parse().expect("lexer yields digits");
                Ok((n, self.next().pos))
            }
            _ => self.unexpected(strs(&["number"])),
        }
    }

    fn rational(&mut self) -> PResult<Scalar> {
        let (num, pos) = self.integer()?;
        if self.eat(&Tok::Slash) {
            let (den, _) = self.integer()?;
            if den.is_zero() {
                return Err(Diagnostic::new(pos, "malformed rational literal", strs(&["nonzero denominator"])));
            }
            return Ok(Scalar::new(num, den));
        }
        Ok(Scalar::from_integer(num))
    }

    fn term(&mut self) -> PResult<Term> {
        if matches!(self.peek().tok, Tok::Int(_)) {
            let coeff = self.rational()?;
            if self.eat(&Tok::Star) {
                return Ok(Term { coeff, basis: Some(self.name()?) });
            }
            if matches!(self.peek().tok, Tok::Ident(_)) {
                return Ok(Term { coeff, basis: Some(self.ident()?) });
            }
            return Ok(Term { coeff, basis: None });
        }
        if matches!(self.peek().tok, Tok::Ident(_)) {
            return Ok(Term { coeff: Scalar::one(), basis: Some(self.ident()?) });
        }
        self.unexpected(strs(&["number", "basis name"]))
    }

    fn lincomb(&mut self) -> PResult<Vec<Term>> {
        let mut terms = Vec::new();
        let mut negate = if self.eat(&Tok::Minus) {
            true
        } else {
            self.eat(&Tok::Plus);
            false
        };
        loop {
            let mut t = self.term()?;
            if negate {
                t.coeff = -t.coeff;
            }
            terms.push(t);
            if self.eat(&Tok::Plus) {
                negate = false;
            } else if self.eat(&Tok::Minus) {
                negate = true;
            } else {
                return Ok(terms);
            }
        }
    }

    fn call(&mut self) -> PResult<Call> {
        let name = self.ident()?;
        let mut args = Vec::new();
        if self.eat(&Tok::LParen)
            && !self.eat(&Tok::RParen) {
                loop {
                    match &self.peek().tok {
                        Tok::Int(_) => {
                            let (n, pos) = self.integer()?;
                            let v = usize::try_from(n).map_err(|_| Diagnostic::new(pos, "parameter too large", Vec::new()))?;
                            args.push(Arg::Int(v, pos));
                        }
                        Tok::Ident(_) => args.push(Arg::Call(self.call()?)),
                        _ => return self.unexpected(strs(&["number", "identifier"])),
                    }
                    if self.eat(&Tok::RParen) {
                        break;
                    }
                    if !self.eat(&Tok::Comma) {
                        return self.unexpected(strs(&[",", ")"]));
                    }
                }
            }
        Ok(Call { name, args })
    }

    fn table(&mut self) -> PResult<TableSpec> {
        self.next();
        let name = self.ident()?;
        let strict = if self.is_keyword("strict") {
            self.next();
            true
        } else {
            false
        };
        self.expect(Tok::LBrace)?;
        let mut spec = TableSpec { name, strict, basis: Vec::new(), unit: None, relations: Vec::new() };
        loop {
            if self.eat(&Tok::RBrace) {
                return Ok(spec);
            }
            if self.is_keyword("basis") {
                let kw = self.next();
                if !spec.basis.is_empty() {
                    return Err(Diagnostic::new(kw.pos, "basis declared twice", Vec::new()));
                }
                spec.basis = self.name_list()?;
                for (i, n) in spec.basis.iter().enumerate() {
                    if spec.basis[..i].iter().any(|m| m.text == n.text) {
                        return Err(Diagnostic::new(n.pos, format!("duplicate basis name `{}`", n.text), Vec::new()));
                    }
                }
            } else if self.is_keyword("unit") {
                self.next();
                let u = self.name()?;
                self.expect(Tok::Semi)?;
                if spec.unit.is_some() {
                    return Err(Diagnostic::new(u.pos, "duplicate unit", Vec::new()));
                }
                spec.unit = Some(u);
            } else if matches!(self.peek().tok, Tok::Ident(_) | Tok::Int(_)) {
                let left = self.name()?;
                self.expect(Tok::Star)?;
                let right = self.name()?;
                self.expect(Tok::Eq)?;
                let rhs = self.lincomb()?;
                self.expect(Tok::Semi)?;
                spec.relations.push(Relation { left, right, rhs });
            } else {
                return self.unexpected(strs(&["basis", "unit", "basis name", "}"]));
            }
        }
    }

    fn group_body(&mut self, spec: &mut GroupTableSpec, allow_maps: Option<&mut Vec<ElementMap>>) -> PResult<bool> {
        if self.is_keyword("elements") {
            self.next();
            spec.elements = self.name_list()?;
            return Ok(true);
        }
        if !matches!(self.peek().tok, Tok::Ident(_) | Tok::Int(_)) {
            return Ok(false);
        }
        let first = self.name()?;
        if self.eat(&Tok::Star) {
            let second = self.name()?;
            self.expect(Tok::Eq)?;
            let out = self.name()?;
            self.expect(Tok::Semi)?;
            spec.products.push((first, second, out));
            return Ok(true);
        }
        let Some(maps) = allow_maps else {
            return self.unexpected(strs(&["*"]));
        };
        if !self.eat(&Tok::Colon) {
            return self.unexpected(strs(&["*", ":"]));
        }
        let mut images = Vec::new();
        loop {
            let src = self.name()?;
            self.expect(Tok::Arrow)?;
            images.push((src, self.lincomb()?));
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::Semi)?;
        maps.push(ElementMap { element: first, images });
        Ok(true)
    }

    fn group(&mut self) -> PResult<GroupTableSpec> {
        self.next();
        let name = self.ident()?;
        self.expect(Tok::LBrace)?;
        let mut spec = GroupTableSpec { name: Some(name), elements: Vec::new(), products: Vec::new() };
        loop {
            if self.eat(&Tok::RBrace) {
                return Ok(spec);
            }
            if !self.group_body(&mut spec, None)? {
                return self.unexpected(strs(&["elements", "element name", "}"]));
            }
        }
    }

    fn action(&mut self) -> PResult<GroupActionSpec> {
        let pos = self.next().pos;
        self.expect(Tok::LBrace)?;
        let mut named: Option<Call> = None;
        let mut table = GroupTableSpec { name: None, elements: Vec::new(), products: Vec::new() };
        let mut maps = Vec::new();
        loop {
            if self.eat(&Tok::RBrace) {
                break;
            }
            if self.is_keyword("group") {
                let kw = self.next();
                if named.is_some() {
                    return Err(Diagnostic::new(kw.pos, "group declared twice", Vec::new()));
                }
                named = Some(self.call()?);
                self.expect(Tok::Semi)?;
                continue;
            }
            if !self.group_body(&mut table, Some(&mut maps))? {
                return self.unexpected(strs(&["group", "elements", "element name", "}"]));
            }
        }
        let group = match named {
            Some(call) => {
                if !table.elements.is_empty() || !table.products.is_empty() {
                    return Err(Diagnostic::new(pos, "action gives both a named group and a table", Vec::new()));
                }
                GroupSpec::Named(call)
            }
            None => GroupSpec::Table(table),
        };
        Ok(GroupActionSpec { pos, group, maps })
    }

    fn document(&mut self) -> PResult<Document> {
        let mut doc = Document::default();
        loop {
            if self.peek().tok == Tok::Eof {
                return Ok(doc);
            }
            if self.is_keyword("algebra") {
                doc.items.push(Item::Algebra(AlgebraSpec::Table(self.table()?)));
            } else if self.is_keyword("builtin") {
                self.next();
                doc.items.push(Item::Algebra(AlgebraSpec::Builtin(self.call()?)));
                self.eat(&Tok::Semi);
            } else if self.is_keyword("group") && matches!(self.peek_at(2), Tok::LBrace) {
                doc.items.push(Item::Group(self.group()?));
            } else if self.is_keyword("action") {
                doc.items.push(Item::Action(self.action()?));
            } else {
                return self.unexpected(strs(&["algebra", "builtin", "group", "action"]));
            }
        }
    }
}

pub fn parse_document(text: &str) -> Result<Document, Diagnostic> {
    let toks = lex(text)?;
    Parser { toks, at: 0 }.document()
}

/// Parses a document and returns its last algebra definition.
pub fn parse(text: &str) -> Result<AlgebraSpec, Diagnostic> {
    let doc = parse_document(text)?;
    doc.items
        .into_iter()
        .rev()
        .find_map(|it| match it {
            Item::Algebra(a) => Some(a),
            _ => None,
        })
        .ok_or_else(|| Diagnostic::new(Pos { line: 1, col: 1 }, "no algebra defined", strs(&["algebra", "builtin"])))
}
