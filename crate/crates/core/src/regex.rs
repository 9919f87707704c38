//! Regular path query syntax.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! union   := concat (('+' | '|') concat)*
//! concat  := postfix ('.'? postfix)*
//! postfix := atom '*'*
//! atom    := SYMBOL | '(' union ')'
//! ```
//!
//! Juxtaposition is only unambiguous for one-character symbols, so a query
//! that contains an explicit `.` is tokenized with multi-character symbols
//! (maximal runs of non-operator, non-whitespace characters). Without a `.`,
//! every symbol character is its own symbol.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolId(pub u32);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RpqAst {
    Symbol(SymbolId),
    Concat(Vec<RpqAst>),
    Union(Vec<RpqAst>),
    Star(Box<RpqAst>),
    Epsilon,
}

impl RpqAst {
    /// Concatenation that flattens nested concatenations.
    pub fn concat(children: Vec<RpqAst>) -> RpqAst {
        let mut flat = Vec::with_capacity(children.len());
        for c in children {
            match c {
                RpqAst::Concat(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else if flat.is_empty() {
            RpqAst::Epsilon
        } else {
            RpqAst::Concat(flat)
        }
    }

    /// Union that flattens nested unions.
    pub fn union(children: Vec<RpqAst>) -> RpqAst {
        let mut flat = Vec::with_capacity(children.len());
        for c in children {
            match c {
                RpqAst::Union(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        assert!(!flat.is_empty(), "union needs at least one branch");
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            RpqAst::Union(flat)
        }
    }

    pub fn star(child: RpqAst) -> RpqAst {
        RpqAst::Star(Box::new(child))
    }

    pub fn is_kleene_free(&self) -> bool {
        match self {
            RpqAst::Symbol(_) | RpqAst::Epsilon => true,
            RpqAst::Star(_) => false,
            RpqAst::Concat(cs) | RpqAst::Union(cs) => cs.iter().all(RpqAst::is_kleene_free),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            RpqAst::Symbol(_) | RpqAst::Epsilon => 1,
            RpqAst::Star(c) => 1 + c.depth(),
            RpqAst::Concat(cs) | RpqAst::Union(cs) => {
                1 + cs.iter().map(RpqAst::depth).max().unwrap_or(0)
            }
        }
    }
}

/// A parsed query: the syntax tree plus the symbol table its `Symbol` nodes
/// index into, in order of first appearance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rpq {
    pub ast: RpqAst,
    pub symbols: Vec<String>,
}

impl Rpq {
    pub fn new(ast: RpqAst, symbols: Vec<String>) -> Self {
        Rpq { ast, symbols }
    }

    pub fn symbol_name(&self, s: SymbolId) -> &str {
        &self.symbols[s.0 as usize]
    }

    pub fn symbol_names(&self) -> Vec<&str> {
        self.symbols.iter().map(String::as_str).collect()
    }

    pub fn is_kleene_free(&self) -> bool {
        self.ast.is_kleene_free()
    }
}

pub fn is_kleene_free(q: &Rpq) -> bool {
    q.is_kleene_free()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolMode {
    /// Multi-character symbols if the query contains a `.`, otherwise one
    /// character per symbol.
    Auto,
    Chars,
    Tokens,
}

pub fn parse(query: &str) -> Result<Rpq> {
    parse_with(query, SymbolMode::Auto)
}

pub fn parse_with(query: &str, mode: SymbolMode) -> Result<Rpq> {
    let tokens_mode = match mode {
        SymbolMode::Auto => query.contains('.'),
        SymbolMode::Chars => false,
        SymbolMode::Tokens => true,
    };
    let tokens = tokenize(query, tokens_mode);
    let mut p = Parser {
        tokens,
        pos: 0,
        symbols: Vec::new(),
    };
    let ast = p.union()?;
    match p.peek() {
        Tok::End => {}
        Tok::RParen => return Err(p.error("unbalanced parenthesis: unexpected ')'")),
        _ => return Err(p.error("unexpected token")),
    }
    Ok(Rpq {
        ast,
        symbols: p.symbols,
    })
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Sym(String),
    LParen,
    RParen,
    Union,
    Dot,
    Star,
    End,
}

fn is_operator(c: char) -> bool {
    matches!(c, '(' | ')' | '+' | '|' | '.' | '*')
}

fn tokenize(query: &str, multi_char: bool) -> Vec<(Tok, usize)> {
    let chars: Vec<char> = query.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '+' | '|' => Tok::Union,
            '.' => Tok::Dot,
            '*' => Tok::Star,
            _ if multi_char => {
                let start = i;
                while i < chars.len() && !is_operator(chars[i]) && !chars[i].is_whitespace() {
                    i += 1;
                }
                out.push((Tok::Sym(chars[start..i].iter().collect()), start));
                continue;
            }
            _ => Tok::Sym(c.to_string()),
        };
        out.push((tok, i));
        i += 1;
    }
    out.push((Tok::End, chars.len()));
    out
}

struct Parser {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
    symbols: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].0
    }

    fn position(&self) -> usize {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) {
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
    }

    fn error(&self, message: &str) -> Error {
        Error::Query {
            position: self.position(),
            message: message.to_owned(),
        }
    }

    fn intern(&mut self, name: String) -> SymbolId {
        match self.symbols.iter().position(|s| *s == name) {
            Some(i) => SymbolId(i as u32),
            None => {
                self.symbols.push(name);
                SymbolId(self.symbols.len() as u32 - 1)
            }
        }
    }

    fn union(&mut self) -> Result<RpqAst> {
        let mut branches = vec![self.concat()?];
        while *self.peek() == Tok::Union {
            self.bump();
            branches.push(self.concat()?);
        }
        Ok(RpqAst::union(branches))
    }

    fn concat(&mut self) -> Result<RpqAst> {
        let mut items = vec![self.postfix()?];
        loop {
            match self.peek() {
                Tok::Dot => {
                    self.bump();
                    items.push(self.postfix()?);
                }
                Tok::Sym(_) | Tok::LParen => items.push(self.postfix()?),
                _ => break,
            }
        }
        Ok(RpqAst::concat(items))
    }

    fn postfix(&mut self) -> Result<RpqAst> {
        let mut node = self.atom()?;
        while *self.peek() == Tok::Star {
            self.bump();
            node = RpqAst::star(node);
        }
        Ok(node)
    }

    fn atom(&mut self) -> Result<RpqAst> {
        let prev = self.pos.checked_sub(1).map(|i| self.tokens[i].0.clone());
        match self.peek().clone() {
            Tok::Sym(name) => {
                self.bump();
                Ok(RpqAst::Symbol(self.intern(name)))
            }
            Tok::LParen => {
                self.bump();
                if *self.peek() == Tok::RParen {
                    return Err(self.error("empty group"));
                }
                let inner = self.union()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error("unbalanced parenthesis: expected ')'"));
                }
                self.bump();
                Ok(inner)
            }
            Tok::Star => Err(self.error("dangling operator '*'")),
            Tok::Dot => Err(self.error("dangling operator '.'")),
            Tok::Union => Err(self.error("empty alternation branch")),
            Tok::End if prev.is_none() => Err(self.error("empty query")),
            Tok::End => Err(self.error("dangling operator at end of query")),
            Tok::RParen => Err(self.error("empty alternation branch")),
        }
    }
}

struct Show<'a> {
    node: &'a RpqAst,
    symbols: &'a [String],
}

impl fmt::Display for Show<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sub = |node| Show {
            node,
            symbols: self.symbols,
        };
        match self.node {
            RpqAst::Symbol(s) => f.write_str(&self.symbols[s.0 as usize]),
            // Not accepted by the parser; only synthesized trees carry it.
            RpqAst::Epsilon => f.write_str("()"),
            RpqAst::Union(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str("+")?;
                    }
                    write!(f, "{}", sub(c))?;
                }
                Ok(())
            }
            RpqAst::Concat(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(".")?;
                    }
                    match c {
                        RpqAst::Union(_) => write!(f, "({})", sub(c))?,
                        _ => write!(f, "{}", sub(c))?,
                    }
                }
                Ok(())
            }
            RpqAst::Star(c) => match **c {
                RpqAst::Symbol(_) | RpqAst::Star(_) => write!(f, "{}*", sub(c)),
                _ => write!(f, "({})*", sub(c)),
            },
        }
    }
}

impl fmt::Display for Rpq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            Show {
                node: &self.ast,
                symbols: &self.symbols
            }
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(i: u32) -> RpqAst {
        RpqAst::Symbol(SymbolId(i))
    }

    #[test]
    fn parses_abc_star() {
        let q = parse("ab*c").unwrap();
        assert_eq!(q.symbols, ["a", "b", "c"]);
        assert_eq!(
            q.ast,
            RpqAst::Concat(vec![sym(0), RpqAst::star(sym(1)), sym(2)])
        );
    }

    #[test]
    fn parses_reduction_example_query() {
        let q = parse("d*(e.f+g)*").unwrap();
        assert_eq!(q.symbols, ["d", "e", "f", "g"]);
        assert_eq!(
            q.ast,
            RpqAst::Concat(vec![
                RpqAst::star(sym(0)),
                RpqAst::star(RpqAst::Union(vec![
                    RpqAst::Concat(vec![sym(1), sym(2)]),
                    sym(3)
                ]))
            ])
        );
    }

    #[test]
    fn pipe_is_union_alias() {
        assert_eq!(parse("a|b").unwrap(), parse("a+b").unwrap());
    }

    #[test]
    fn unbalanced_paren_position() {
        match parse("(ab").unwrap_err() {
            Error::Query { position, .. } => assert_eq!(position, 3),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn error_cases() {
        for (q, pos) in [
            ("a+", 2),
            ("+a", 0),
            ("a||b", 2),
            ("*a", 0),
            ("a)", 1),
            ("()", 1),
            ("", 0),
            ("a..b", 2),
            ("(a|)", 3),
        ] {
            match parse(q) {
                Err(Error::Query { position, .. }) => assert_eq!(position, pos, "query {q:?}"),
                other => panic!("{q:?} -> {other:?}"),
            }
        }
    }

    #[test]
    fn multi_char_tokens_with_dot() {
        let q = parse("knows.likes*").unwrap();
        assert_eq!(q.symbols, ["knows", "likes"]);
        let q = parse_with("knows*", SymbolMode::Tokens).unwrap();
        assert_eq!(q.ast, RpqAst::star(sym(0)));
    }

    #[test]
    fn kleene_free_detection() {
        assert!(parse("abc").unwrap().is_kleene_free());
        assert!(!parse("ab*c").unwrap().is_kleene_free());
        assert!(parse("(a+bc)(d+e)").unwrap().is_kleene_free());
    }

    #[test]
    fn display_round_trip() {
        for s in ["ab*c", "d*(e.f+g)*", "(a+b)*c", "a**", "((a))", "a(b+c)d"] {
            let q = parse(s).unwrap();
            let again = parse(&q.to_string()).unwrap();
            assert_eq!(q, again, "{s} -> {q}");
        }
    }
}
