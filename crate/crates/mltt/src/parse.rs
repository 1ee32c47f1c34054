//! Lexer and recursive-descent parser for `.mltt` sources.

use crate::error::LangError;
use crate::syntax::{Motive, Name, Span, Stmt, Term, TermKind, Type, TypeKind};

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    Num(usize),
    Bullet,
    Fun,
    Tt,
    Refl,
    J,
    Unit,
    Code,
    Id,
    Def,
    Check,
    Eval,
    LParen,
    RParen,
    LAngle,
    RAngle,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Arrow,
    FatArrow,
    Star,
    Dot,
    Proj(u8),
    Eq,
    Underscore,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Num(n) => format!("number {n}"),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", symbol(other)),
        }
    }
}

fn symbol(t: &Tok) -> &'static str {
    match t {
        Tok::Bullet => "•",
        Tok::Fun => "fun",
        Tok::Tt => "tt",
        Tok::Refl => "refl",
        Tok::J => "J",
        Tok::Unit => "Unit",
        Tok::Code => "Code",
        Tok::Id => "Id",
        Tok::Def => "def",
        Tok::Check => "check",
        Tok::Eval => "eval",
        Tok::LParen => "(",
        Tok::RParen => ")",
        Tok::LAngle => "<",
        Tok::RAngle => ">",
        Tok::LBracket => "[",
        Tok::RBracket => "]",
        Tok::Comma => ",",
        Tok::Colon => ":",
        Tok::Arrow => "->",
        Tok::FatArrow => "=>",
        Tok::Star => "*",
        Tok::Dot => ".",
        Tok::Proj(1) => ".1",
        Tok::Proj(_) => ".2",
        Tok::Eq => "=",
        Tok::Underscore => "_",
        Tok::Ident(_) | Tok::Num(_) | Tok::Eof => "",
    }
}

fn keyword(word: &str) -> Option<Tok> {
    Some(match word {
        "fun" => Tok::Fun,
        "tt" => Tok::Tt,
        "refl" => Tok::Refl,
        "J" => Tok::J,
        "Unit" => Tok::Unit,
        "Code" => Tok::Code,
        "Id" => Tok::Id,
        "def" => Tok::Def,
        "check" => Tok::Check,
        "eval" => Tok::Eval,
        "_" => Tok::Underscore,
        _ => return None,
    })
}

pub fn lex(src: &str) -> Result<Vec<(Tok, Span)>, LangError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        let next = src[i + c.len_utf8()..].chars().next();
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c == '-' && next == Some('-') {
            while chars.peek().is_some_and(|&(_, c)| c != '\n') {
                chars.next();
            }
            continue;
        }
        let two = |t: Tok| (t, Span::new(i, i + 2));
        let (tok, span) = match c {
            '-' if next == Some('>') => two(Tok::Arrow),
            '=' if next == Some('>') => two(Tok::FatArrow),
            '.' if next == Some('1') => two(Tok::Proj(1)),
            '.' if next == Some('2') => two(Tok::Proj(2)),
            c if c.is_ascii_digit() => {
                let end = src[i..].find(|c: char| !c.is_ascii_digit()).map_or(src.len(), |n| i + n);
                let n = src[i..end].parse().map_err(|_| LangError::parse(src, Span::new(i, end), "number too large"))?;
                (Tok::Num(n), Span::new(i, end))
            }
            c if c.is_alphabetic() || c == '_' => {
                let end = src[i..]
                    .find(|c: char| !(c.is_alphanumeric() || c == '_' || c == '\''))
                    .map_or(src.len(), |n| i + n);
                let word = &src[i..end];
                (keyword(word).unwrap_or_else(|| Tok::Ident(word.to_string())), Span::new(i, end))
            }
            _ => {
                let tok = match c {
                    '•' => Tok::Bullet,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '<' => Tok::LAngle,
                    '>' => Tok::RAngle,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    ',' => Tok::Comma,
                    ':' => Tok::Colon,
                    '*' => Tok::Star,
                    '.' => Tok::Dot,
                    '=' => Tok::Eq,
                    _ => {
                        return Err(LangError::parse(src, Span::new(i, i + c.len_utf8()), format!("unexpected character `{c}`")))
                    }
                };
                (tok, Span::new(i, i + c.len_utf8()))
            }
        };
        while chars.peek().is_some_and(|&(j, _)| j < span.end) {
            chars.next();
        }
        out.push((tok, span));
    }
    out.push((Tok::Eof, Span::new(src.len(), src.len())));
    Ok(out)
}

pub struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, Span)>,
    pos: usize,
    /// Local binders, outermost first.
    scope: Vec<Name>,
}

impl<'a> Parser<'a> {
    pub fn new(src: &'a str) -> Result<Self, LangError> {
        Ok(Parser { src, toks: lex(src)?, pos: 0, scope: Vec::new() })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn prev_end(&self) -> usize {
        if self.pos == 0 {
            0
        } else {
            self.toks[self.pos - 1].1.end
        }
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error(&self, msg: impl Into<String>) -> LangError {
        LangError::parse(self.src, self.span(), msg)
    }

    fn expect(&mut self, t: Tok) -> Result<Span, LangError> {
        if self.peek() == &t {
            Ok(self.bump().1)
        } else {
            Err(self.error(format!("expected `{}`, found {}", symbol(&t), self.peek().describe())))
        }
    }

    fn binder(&mut self) -> Result<Name, LangError> {
        match self.bump() {
            (Tok::Ident(s), _) => Ok(s),
            (Tok::Underscore, _) => Ok("_".into()),
            (t, span) => Err(LangError::parse(self.src, span, format!("expected a binder, found {}", t.describe()))),
        }
    }

    fn with_binders<R>(&mut self, names: &[Name], f: impl FnOnce(&mut Self) -> R) -> R {
        self.scope.extend(names.iter().cloned());
        let out = f(self);
        self.scope.truncate(self.scope.len() - names.len());
        out
    }

    pub fn at_end(&self) -> bool {
        self.peek() == &Tok::Eof
    }

    pub fn ty(&mut self) -> Result<Type, LangError> {
        let start = self.span().start;
        if self.peek() == &Tok::LParen
            && matches!(self.peek_at(1), Tok::Ident(_) | Tok::Underscore)
            && self.peek_at(2) == &Tok::Colon
        {
            self.bump();
            let name = self.binder()?;
            self.expect(Tok::Colon)?;
            let dom = self.ty()?;
            self.expect(Tok::RParen)?;
            let dependent = match self.bump() {
                (Tok::Arrow, _) => true,
                (Tok::Star, _) => false,
                (t, span) => {
                    return Err(LangError::parse(self.src, span, format!("expected `->` or `*` after a binder, found {}", t.describe())))
                }
            };
            let cod = self.with_binders(std::slice::from_ref(&name), |p| p.ty())?;
            let span = Span::new(start, self.prev_end());
            let kind = if dependent {
                TypeKind::Pi(name, Box::new(dom), Box::new(cod))
            } else {
                TypeKind::Sigma(name, Box::new(dom), Box::new(cod))
            };
            return Ok(Type::new(kind, span));
        }
        let lhs = self.product()?;
        if self.eat(&Tok::Arrow) {
            let cod = self.with_binders(&["_".to_string()], |p| p.ty())?;
            let span = Span::new(start, self.prev_end());
            return Ok(Type::new(TypeKind::Pi("_".into(), Box::new(lhs), Box::new(cod)), span));
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Type, LangError> {
        let start = self.span().start;
        let lhs = self.atom_ty()?;
        if self.eat(&Tok::Star) {
            let cod = self.with_binders(&["_".to_string()], |p| p.product())?;
            let span = Span::new(start, self.prev_end());
            return Ok(Type::new(TypeKind::Sigma("_".into(), Box::new(lhs), Box::new(cod)), span));
        }
        Ok(lhs)
    }

    fn atom_ty(&mut self) -> Result<Type, LangError> {
        let start = self.span().start;
        match self.peek().clone() {
            Tok::Unit => {
                let span = self.bump().1;
                Ok(Type::new(TypeKind::Unit, span))
            }
            Tok::Code => {
                self.bump();
                match self.bump() {
                    (Tok::Num(n), span) => Ok(Type::new(TypeKind::Code(n), Span::new(start, span.end))),
                    (t, span) => Err(LangError::parse(self.src, span, format!("expected a fiber size after `Code`, found {}", t.describe()))),
                }
            }
            Tok::Id => {
                self.bump();
                let a = self.atom_ty()?;
                let l = self.postfix()?;
                let r = self.postfix()?;
                Ok(Type::new(TypeKind::Id(Box::new(a), Box::new(l), Box::new(r)), Span::new(start, self.prev_end())))
            }
            Tok::LParen => {
                self.bump();
                let a = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(Type { kind: a.kind, span: Span::new(start, self.prev_end()) })
            }
            t => Err(self.error(format!("expected a type, found {}", t.describe()))),
        }
    }

    pub fn term(&mut self) -> Result<Term, LangError> {
        let start = self.span().start;
        if self.eat(&Tok::Fun) {
            let mut names = vec![self.binder()?];
            while matches!(self.peek(), Tok::Ident(_) | Tok::Underscore) {
                names.push(self.binder()?);
            }
            self.expect(Tok::FatArrow)?;
            let body = self.with_binders(&names, |p| p.term())?;
            let span = Span::new(start, self.prev_end());
            return Ok(names.into_iter().rev().fold(body, |b, x| Term::new(TermKind::Lam(x, Box::new(b)), span)));
        }
        self.application()
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::Tt | Tok::LAngle | Tok::LParen)
    }

    fn application(&mut self) -> Result<Term, LangError> {
        let start = self.span().start;
        let mut head = match self.peek() {
            Tok::Refl => {
                self.bump();
                let a = self.postfix()?;
                Term::new(TermKind::Refl(Box::new(a)), Span::new(start, self.prev_end()))
            }
            Tok::J => {
                self.bump();
                let motive = self.motive()?;
                let base = self.postfix()?;
                let target = self.postfix()?;
                let proof = self.postfix()?;
                let kind = TermKind::J { motive, base: Box::new(base), target: Box::new(target), proof: Box::new(proof) };
                Term::new(kind, Span::new(start, self.prev_end()))
            }
            _ => self.postfix()?,
        };
        while self.starts_atom() {
            let arg = self.postfix()?;
            head = Term::boxed_app(head, arg);
        }
        Ok(head)
    }

    fn motive(&mut self) -> Result<Motive, LangError> {
        self.expect(Tok::LParen)?;
        let point = self.binder()?;
        let proof = self.binder()?;
        self.expect(Tok::Dot)?;
        let body = self.with_binders(&[point.clone(), proof.clone()], |p| p.ty())?;
        self.expect(Tok::RParen)?;
        Ok(Motive { point, proof, body: Box::new(body) })
    }

    fn postfix(&mut self) -> Result<Term, LangError> {
        let start = self.span().start;
        let mut t = self.atom()?;
        while let Tok::Proj(k) = *self.peek() {
            self.bump();
            let span = Span::new(start, self.prev_end());
            t = Term::new(if k == 1 { TermKind::Fst(Box::new(t)) } else { TermKind::Snd(Box::new(t)) }, span);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term, LangError> {
        let start = self.span().start;
        match self.peek().clone() {
            Tok::Ident(name) => {
                let span = self.bump().1;
                let kind = match self.scope.iter().rev().position(|n| *n == name) {
                    Some(k) => TermKind::Var(k, name),
                    None => TermKind::Global(name),
                };
                Ok(Term::new(kind, span))
            }
            Tok::Tt => Ok(Term::new(TermKind::Tt, self.bump().1)),
            Tok::LAngle => {
                self.bump();
                let a = self.term()?;
                self.expect(Tok::Comma)?;
                let b = self.term()?;
                self.expect(Tok::RAngle)?;
                Ok(Term::new(TermKind::Pair(Box::new(a), Box::new(b)), Span::new(start, self.prev_end())))
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                if self.eat(&Tok::Colon) {
                    let a = self.ty()?;
                    self.expect(Tok::RParen)?;
                    return Ok(Term::new(TermKind::Ann(Box::new(t), Box::new(a)), Span::new(start, self.prev_end())));
                }
                self.expect(Tok::RParen)?;
                Ok(Term { kind: t.kind, span: Span::new(start, self.prev_end()) })
            }
            t => Err(self.error(format!("expected a term, found {}", t.describe()))),
        }
    }

    fn value(&mut self) -> Result<String, LangError> {
        match self.bump() {
            (Tok::Bullet, _) => Ok("•".into()),
            (Tok::Num(n), _) => Ok(n.to_string()),
            (Tok::LBracket, _) => {
                let mut items = vec![self.value()?];
                while self.eat(&Tok::Comma) {
                    items.push(self.value()?);
                }
                self.expect(Tok::RBracket)?;
                Ok(format!("[{}]", items.join(", ")))
            }
            (t, span) => Err(LangError::parse(self.src, span, format!("expected a value, found {}", t.describe()))),
        }
    }

    pub fn stmt(&mut self) -> Result<Stmt, LangError> {
        let start = self.span().start;
        match self.bump() {
            (Tok::Def, _) => {
                let name = match self.bump() {
                    (Tok::Ident(s), _) => s,
                    (t, span) => return Err(LangError::parse(self.src, span, format!("expected a name, found {}", t.describe()))),
                };
                self.expect(Tok::Colon)?;
                let ty = self.ty()?;
                self.expect(Tok::Eq)?;
                let body = self.term()?;
                Ok(Stmt::Def { name, ty, body, span: Span::new(start, self.prev_end()) })
            }
            (Tok::Check, _) => {
                let body = self.term()?;
                self.expect(Tok::Colon)?;
                let ty = self.ty()?;
                Ok(Stmt::Check { body, ty, span: Span::new(start, self.prev_end()) })
            }
            (Tok::Eval, _) => {
                let mut telescope = Vec::new();
                if self.eat(&Tok::LBracket) {
                    loop {
                        let name = self.binder()?;
                        self.expect(Tok::Colon)?;
                        let names: Vec<Name> = telescope.iter().map(|(n, _): &(Name, Type)| n.clone()).collect();
                        let ty = self.with_binders(&names, |p| p.ty())?;
                        telescope.push((name, ty));
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                    self.expect(Tok::RBracket)?;
                }
                let names: Vec<Name> = telescope.iter().map(|(n, _)| n.clone()).collect();
                let (body, ty) = self.with_binders(&names, |p| -> Result<_, LangError> {
                    let body = p.term()?;
                    let ty = if p.eat(&Tok::Colon) { Some(p.ty()?) } else { None };
                    Ok((body, ty))
                })?;
                let expect = if self.eat(&Tok::FatArrow) { Some(self.value()?) } else { None };
                Ok(Stmt::Eval { telescope, body, ty, expect, span: Span::new(start, self.prev_end()) })
            }
            (t, span) => Err(LangError::parse(self.src, span, format!("expected `def`, `check` or `eval`, found {}", t.describe()))),
        }
    }
}

pub fn parse_program(src: &str) -> Result<Vec<Stmt>, LangError> {
    let mut p = Parser::new(src)?;
    let mut out = Vec::new();
    while !p.at_end() {
        out.push(p.stmt()?);
    }
    Ok(out)
}

fn finish<T>(p: &Parser, value: T) -> Result<T, LangError> {
    if p.at_end() {
        Ok(value)
    } else {
        Err(p.error(format!("unexpected {}", p.peek().describe())))
    }
}

/// Parses a closed term.
pub fn parse_term(src: &str) -> Result<Term, LangError> {
    let mut p = Parser::new(src)?;
    let t = p.term()?;
    finish(&p, t)
}

/// Parses a closed type.
pub fn parse_type(src: &str) -> Result<Type, LangError> {
    let mut p = Parser::new(src)?;
    let a = p.ty()?;
    finish(&p, a)
}

/// Parses a term under the given binders, outermost first.
pub fn parse_term_in(src: &str, scope: &[Name]) -> Result<Term, LangError> {
    let mut p = Parser::new(src)?;
    p.scope = scope.to_vec();
    let t = p.term()?;
    finish(&p, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_lam_of_var() {
        let t = parse_term("fun x => x").unwrap();
        assert!(matches!(&t.kind, TermKind::Lam(_, b) if matches!(b.kind, TermKind::Var(0, _))));
    }

    #[test]
    fn annotated_pair() {
        let t = parse_term("(<tt, tt> : (x : Unit) * Unit)").unwrap();
        let TermKind::Ann(p, a) = &t.kind else { panic!("{t:?}") };
        assert!(matches!(p.kind, TermKind::Pair(..)));
        assert!(matches!(a.kind, TypeKind::Sigma(..)));
    }

    #[test]
    fn self_application_parses() {
        assert!(parse_term("fun x => x x").is_ok());
    }

    #[test]
    fn errors_are_located() {
        let err = parse_term("fun x =>\n  <x, >").unwrap_err();
        assert_eq!(err.location(), Some((2, 7)));
    }

    #[test]
    fn print_then_parse() {
        for src in [
            "fun x => fun x => x",
            "fun f => fun x => f x x",
            "(fun x => x) tt",
            "<tt, tt>.2",
            "J (x q. Id Unit x x) (refl tt) tt (refl tt)",
            "(fun p => p.1 : ((x : Unit) * Unit) -> Unit)",
            "(refl tt : Id ((_ : Unit) -> Unit) tt tt)",
        ] {
            let t = parse_term(src).unwrap();
            let printed = t.to_string();
            assert_eq!(parse_term(&printed).unwrap(), t, "{src} printed as {printed}");
        }
        let shadow = parse_term("fun x => fun y => x").unwrap();
        let TermKind::Lam(_, inner) = &shadow.kind else { panic!() };
        // Rename the inner binder to x to force freshening in the printer.
        let clash = Term::new(
            TermKind::Lam("x".into(), Box::new(Term::new(TermKind::Lam("x".into(), match &inner.kind {
                TermKind::Lam(_, b) => b.clone(),
                _ => panic!(),
            }), inner.span))),
            shadow.span,
        );
        assert_eq!(parse_term(&clash.to_string()).unwrap(), clash);
    }
}
