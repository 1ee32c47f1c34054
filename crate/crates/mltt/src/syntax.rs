//! Abstract syntax with de Bruijn indices and source spans.
//!
//! Equality ignores spans and binder names, so it is α-equivalence.

use std::fmt;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn to(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

/// Line and column (both from 1) of a byte offset.
pub fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

pub type Name = String;

#[derive(Clone, Debug)]
pub struct Type {
    pub kind: TypeKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TypeKind {
    Unit,
    /// The base type whose fiber has the given size.
    Code(usize),
    Pi(Name, Box<Type>, Box<Type>),
    Sigma(Name, Box<Type>, Box<Type>),
    Id(Box<Type>, Box<Term>, Box<Term>),
}

#[derive(Clone, Debug)]
pub struct Term {
    pub kind: TermKind,
    pub span: Span,
}

/// The motive of J: a type in the context extended by x : A and q : Id A a x.
#[derive(Clone, Debug)]
pub struct Motive {
    pub point: Name,
    pub proof: Name,
    pub body: Box<Type>,
}

impl PartialEq for Motive {
    fn eq(&self, other: &Self) -> bool {
        self.body == other.body
    }
}

#[derive(Clone, Debug)]
pub enum TermKind {
    Var(usize, Name),
    Global(Name),
    Tt,
    Lam(Name, Box<Term>),
    App(Box<Term>, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    Fst(Box<Term>),
    Snd(Box<Term>),
    Refl(Box<Term>),
    J { motive: Motive, base: Box<Term>, target: Box<Term>, proof: Box<Term> },
    Ann(Box<Term>, Box<Type>),
}

impl PartialEq for TermKind {
    fn eq(&self, other: &Self) -> bool {
        use TermKind::*;
        match (self, other) {
            (Var(i, _), Var(j, _)) => i == j,
            (Global(a), Global(b)) => a == b,
            (Tt, Tt) => true,
            (Lam(_, a), Lam(_, b)) | (Fst(a), Fst(b)) | (Snd(a), Snd(b)) | (Refl(a), Refl(b)) => a == b,
            (App(f, a), App(g, b)) | (Pair(f, a), Pair(g, b)) => f == g && a == b,
            (J { motive: m, base: b, target: t, proof: p }, J { motive: m2, base: b2, target: t2, proof: p2 }) => {
                m == m2 && b == b2 && t == t2 && p == p2
            }
            (Ann(t, a), Ann(u, b)) => t == u && a == b,
            _ => false,
        }
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl PartialEq for Type {
    fn eq(&self, other: &Self) -> bool {
        match (&self.kind, &other.kind) {
            (TypeKind::Pi(_, a, b), TypeKind::Pi(_, c, d)) | (TypeKind::Sigma(_, a, b), TypeKind::Sigma(_, c, d)) => {
                a == c && b == d
            }
            (a, b) => a == b,
        }
    }
}

impl Term {
    pub fn new(kind: TermKind, span: Span) -> Self {
        Term { kind, span }
    }

    fn boxed(kind: TermKind, span: Span) -> Box<Self> {
        Box::new(Term { kind, span })
    }
}

impl Type {
    pub fn new(kind: TypeKind, span: Span) -> Self {
        Type { kind, span }
    }
}

/// Simultaneous substitution: index k at binder depth d becomes
/// `vals[k - d]` shifted by d when k - d < vals.len(), and k - vals.len() otherwise.
/// `vals[0]` replaces the innermost variable. With empty `vals` and a shift
/// amount this is plain weakening.
struct Subst<'a> {
    vals: &'a [Term],
    shift: usize,
}

impl Subst<'_> {
    fn var(&self, k: usize, depth: usize, name: &Name, span: Span) -> Term {
        if k < depth {
            return Term::new(TermKind::Var(k, name.clone()), span);
        }
        let free = k - depth;
        if free < self.vals.len() {
            return shift_term(&self.vals[free], depth);
        }
        Term::new(TermKind::Var(free - self.vals.len() + self.shift + depth, name.clone()), span)
    }

    fn term(&self, t: &Term, d: usize) -> Term {
        use TermKind::*;
        let kind = match &t.kind {
            Var(k, name) => return self.var(*k, d, name, t.span),
            Global(n) => Global(n.clone()),
            Tt => Tt,
            Lam(x, b) => Lam(x.clone(), Box::new(self.term(b, d + 1))),
            App(f, a) => App(Box::new(self.term(f, d)), Box::new(self.term(a, d))),
            Pair(a, b) => Pair(Box::new(self.term(a, d)), Box::new(self.term(b, d))),
            Fst(p) => Fst(Box::new(self.term(p, d))),
            Snd(p) => Snd(Box::new(self.term(p, d))),
            Refl(a) => Refl(Box::new(self.term(a, d))),
            J { motive, base, target, proof } => J {
                motive: Motive {
                    point: motive.point.clone(),
                    proof: motive.proof.clone(),
                    body: Box::new(self.ty(&motive.body, d + 2)),
                },
                base: Box::new(self.term(base, d)),
                target: Box::new(self.term(target, d)),
                proof: Box::new(self.term(proof, d)),
            },
            Ann(t, a) => Ann(Box::new(self.term(t, d)), Box::new(self.ty(a, d))),
        };
        Term::new(kind, t.span)
    }

    fn ty(&self, a: &Type, d: usize) -> Type {
        use TypeKind::*;
        let kind = match &a.kind {
            Unit => Unit,
            Code(n) => Code(*n),
            Pi(x, dom, cod) => Pi(x.clone(), Box::new(self.ty(dom, d)), Box::new(self.ty(cod, d + 1))),
            Sigma(x, dom, cod) => Sigma(x.clone(), Box::new(self.ty(dom, d)), Box::new(self.ty(cod, d + 1))),
            Id(ty, l, r) => Id(Box::new(self.ty(ty, d)), Box::new(self.term(l, d)), Box::new(self.term(r, d))),
        };
        Type::new(kind, a.span)
    }
}

/// Weakens a term by `by` fresh outer binders.
pub fn shift_term(t: &Term, by: usize) -> Term {
    if by == 0 {
        return t.clone();
    }
    Subst { vals: &[], shift: by }.term(t, 0)
}

pub fn shift_type(a: &Type, by: usize) -> Type {
    if by == 0 {
        return a.clone();
    }
    Subst { vals: &[], shift: by }.ty(a, 0)
}

/// Replaces the innermost binders of `a` by `vals` (innermost first).
pub fn instantiate(a: &Type, vals: &[Term]) -> Type {
    Subst { vals, shift: 0 }.ty(a, 0)
}

pub fn var(k: usize, name: &str, span: Span) -> Term {
    Term::new(TermKind::Var(k, name.to_string()), span)
}

pub fn refl(a: Term, span: Span) -> Term {
    Term { kind: TermKind::Refl(Box::new(a)), span }
}

pub fn fst(p: Term, span: Span) -> Term {
    Term { kind: TermKind::Fst(Box::new(p)), span }
}

pub fn id_type(a: Type, l: Term, r: Term, span: Span) -> Type {
    Type::new(TypeKind::Id(Box::new(a), Box::new(l), Box::new(r)), span)
}

/// Printing with binder names freshened so that every variable resolves to
/// its own binder when parsed back.
pub struct Printer {
    names: Vec<Name>,
}

impl Printer {
    pub fn new() -> Self {
        Printer { names: Vec::new() }
    }

    /// A printer for terms under the given binders, outermost first.
    pub fn under(names: &[Name]) -> Self {
        Printer { names: names.to_vec() }
    }

    fn fresh(&self, name: &str) -> Name {
        let base = if name.is_empty() { "_" } else { name };
        if base == "_" {
            return base.to_string();
        }
        let mut candidate = base.to_string();
        while self.names.iter().any(|n| *n == candidate) {
            candidate.push('\'');
        }
        candidate
    }

    fn bind<R>(&mut self, name: &str, f: impl FnOnce(&mut Self, &str) -> R) -> R {
        let fresh = self.fresh(name);
        self.names.push(fresh.clone());
        let out = f(self, &fresh);
        self.names.pop();
        out
    }

    fn var_name(&self, k: usize) -> String {
        match self.names.len().checked_sub(k + 1) {
            Some(i) if self.names[i] != "_" => self.names[i].clone(),
            _ => format!("#{k}"),
        }
    }

    pub fn ty(&mut self, a: &Type) -> String {
        match &a.kind {
            TypeKind::Unit => "Unit".into(),
            TypeKind::Code(n) => format!("Code {n}"),
            TypeKind::Pi(x, dom, cod) | TypeKind::Sigma(x, dom, cod) if x == "_" => {
                let is_pi = matches!(a.kind, TypeKind::Pi(..));
                let wrap_dom = match &dom.kind {
                    TypeKind::Pi(..) => true,
                    TypeKind::Sigma(y, ..) => !is_pi || y != "_",
                    _ => false,
                };
                let dom = if wrap_dom { format!("({})", self.ty(dom)) } else { self.ty(dom) };
                let wrap_cod = !is_pi && match &cod.kind {
                    TypeKind::Pi(..) => true,
                    TypeKind::Sigma(y, ..) => y != "_",
                    _ => false,
                };
                let arrow = if is_pi { "->" } else { "*" };
                self.bind(x, |p, _| {
                    let cod = p.ty(cod);
                    if wrap_cod {
                        format!("{dom} {arrow} ({cod})")
                    } else {
                        format!("{dom} {arrow} {cod}")
                    }
                })
            }
            TypeKind::Pi(x, dom, cod) | TypeKind::Sigma(x, dom, cod) => {
                let arrow = if matches!(a.kind, TypeKind::Pi(..)) { "->" } else { "*" };
                let dom = self.ty(dom);
                self.bind(x, |p, x| format!("({x} : {dom}) {arrow} {}", p.ty(cod)))
            }
            TypeKind::Id(ty, l, r) => format!("Id {} {} {}", self.atom_ty(ty), self.atom(l), self.atom(r)),
        }
    }

    fn atom_ty(&mut self, a: &Type) -> String {
        match a.kind {
            TypeKind::Unit => self.ty(a),
            _ => format!("({})", self.ty(a)),
        }
    }

    pub fn term(&mut self, t: &Term) -> String {
        match &t.kind {
            TermKind::Lam(x, body) => self.bind(x, |p, x| format!("fun {x} => {}", p.term(body))),
            TermKind::App(f, a) => format!("{} {}", self.app_head(f), self.atom(a)),
            TermKind::Refl(a) => format!("refl {}", self.atom(a)),
            TermKind::J { motive, base, target, proof } => {
                let body = self.bind(&motive.point, |p, x| {
                    p.bind(&motive.proof, |p, q| format!("({x} {q}. {})", p.ty(&motive.body)))
                });
                format!("J {body} {} {} {}", self.atom(base), self.atom(target), self.atom(proof))
            }
            _ => self.atom(t),
        }
    }

    fn app_head(&mut self, t: &Term) -> String {
        match t.kind {
            TermKind::App(..) => self.term(t),
            _ => self.atom(t),
        }
    }

    fn atom(&mut self, t: &Term) -> String {
        match &t.kind {
            TermKind::Var(k, _) => self.var_name(*k),
            TermKind::Global(n) => n.clone(),
            TermKind::Tt => "tt".into(),
            TermKind::Pair(a, b) => format!("<{}, {}>", self.term(a), self.term(b)),
            TermKind::Fst(p) => format!("{}.1", self.atom(p)),
            TermKind::Snd(p) => format!("{}.2", self.atom(p)),
            TermKind::Ann(t, a) => format!("({} : {})", self.term(t), self.ty(a)),
            _ => format!("({})", self.term(t)),
        }
    }
}

impl Default for Printer {
    fn default() -> Self {
        Self::new()
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Printer::new().term(self))
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Printer::new().ty(self))
    }
}

/// A program statement.
#[derive(Clone, Debug)]
pub enum Stmt {
    Def { name: Name, ty: Type, body: Term, span: Span },
    Check { body: Term, ty: Type, span: Span },
    Eval { telescope: Vec<(Name, Type)>, body: Term, ty: Option<Type>, expect: Option<String>, span: Span },
}

impl Stmt {
    pub fn span(&self) -> Span {
        match self {
            Stmt::Def { span, .. } | Stmt::Check { span, .. } | Stmt::Eval { span, .. } => *span,
        }
    }
}

impl Term {
    pub fn boxed_app(f: Term, a: Term) -> Term {
        let span = f.span.to(a.span);
        *Term::boxed(TermKind::App(Box::new(f), Box::new(a)), span)
    }
}
