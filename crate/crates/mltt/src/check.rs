//! Bidirectional checking by interpretation into an elementary model.
//!
//! Types elaborate to maps Γ → Ty and terms to maps Γ → Tm through the
//! model's formers. Definitional equality is equality of denotations.

use std::collections::HashMap;

use clan::elementary::id_context;
use clan::universe::ContextExtension;
use clan::{bang, terminal, FinMap, FinObj};

use crate::error::LangError;
use crate::model::{print_value, Model};
use crate::parse::{parse_program, parse_term, parse_type};
use crate::syntax::{id_type, instantiate, refl, shift_term, shift_type, var, Name, Printer, Span, Stmt, Term, TermKind, Type, TypeKind};

#[derive(Clone)]
struct Entry {
    name: Name,
    ty: Type,
    ext: ContextExtension,
}

/// A context: iterated context extensions, outermost first.
#[derive(Clone, Default)]
pub struct Cx {
    entries: Vec<Entry>,
}

impl Cx {
    pub fn obj(&self) -> FinObj {
        self.entries.last().map_or_else(terminal, |e| e.ext.ext().clone())
    }

    pub fn names(&self) -> Vec<Name> {
        self.entries.iter().map(|e| e.name.clone()).collect()
    }

    fn push(&self, name: &str, ty: Type, ext: ContextExtension) -> Cx {
        let mut out = self.clone();
        out.entries.push(Entry { name: name.to_string(), ty, ext });
        out
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A checked judgment Γ ⊢ t : A with its denotation.
#[derive(Clone, Debug)]
pub struct Judgment {
    pub context: FinObj,
    pub ty: Type,
    pub ty_den: FinMap,
    pub term: FinMap,
}

struct Global {
    ty: Type,
    den: FinMap,
}

pub struct Checker<'a> {
    model: &'a Model,
    src: &'a str,
    globals: HashMap<Name, Global>,
}

impl<'a> Checker<'a> {
    pub fn new(model: &'a Model, src: &'a str) -> Self {
        Checker { model, src, globals: HashMap::new() }
    }

    fn err(&self, span: Span, msg: impl Into<String>) -> LangError {
        LangError::type_error(self.src, span, msg)
    }

    /// Located form of an error raised by the model.
    fn model_err(&self, span: Span) -> impl Fn(clan::Error) -> LangError + '_ {
        move |e| {
            let (line, col) = crate::syntax::line_col(self.src, span.start);
            match e {
                clan::Error::BoundsTooTight(msg) => LangError::Universe { line, col, msg },
                clan::Error::TypeMismatch { witness } => {
                    LangError::Type { line, col, msg: format!("the model rejects an ill-typed input at {witness}") }
                }
                other => LangError::Type { line, col, msg: other.to_string() },
            }
        }
    }

    fn show_ty(&self, cx: &Cx, a: &Type) -> String {
        Printer::under(&cx.names()).ty(a)
    }

    fn show(&self, cx: &Cx, t: &Term) -> String {
        Printer::under(&cx.names()).term(t)
    }

    fn extend(&self, cx: &Cx, name: &str, ty: &Type, den: &FinMap, span: Span) -> Result<Cx, LangError> {
        let ext = self.model.universe().context_extend(den).map_err(self.model_err(span))?;
        Ok(cx.push(name, ty.clone(), ext))
    }

    /// Γ ⊢ A type, elaborated to A: Γ → Ty.
    pub fn ty(&self, cx: &Cx, a: &Type) -> Result<FinMap, LangError> {
        let g = cx.obj();
        let f = &self.model.formers;
        let me = self.model_err(a.span);
        match &a.kind {
            TypeKind::Unit => (f.unit.unit_type)(&g).map_err(me),
            TypeKind::Code(n) => {
                let code = self.model.codes.code_of(*n).map_err(me)?;
                Ok(FinMap::constant(&g, self.model.universe().ty(), code))
            }
            TypeKind::Pi(x, dom, cod) | TypeKind::Sigma(x, dom, cod) => {
                let d = self.ty(cx, dom)?;
                let inner = self.extend(cx, x, dom, &d, dom.span)?;
                let c = self.ty(&inner, cod)?;
                let ext = &inner.entries.last().expect("just pushed").ext;
                match a.kind {
                    TypeKind::Pi(..) => (f.pi.form)(ext, &c).map_err(me),
                    _ => (f.sigma.form)(ext, &c).map_err(me),
                }
            }
            TypeKind::Id(ty, l, r) => {
                let td = self.ty(cx, ty)?;
                let ld = self.check_den(cx, l, ty, &td)?;
                let rd = self.check_den(cx, r, ty, &td)?;
                (f.id.form)(&td, &ld, &rd).map_err(me)
            }
        }
    }

    /// Γ ⊢ t ⇐ A, returning t: Γ → Tm with t ≫ tp = A.
    pub fn check(&self, cx: &Cx, t: &Term, a: &Type) -> Result<FinMap, LangError> {
        let ad = self.ty(cx, a)?;
        self.check_den(cx, t, a, &ad)
    }

    fn check_den(&self, cx: &Cx, t: &Term, a: &Type, ad: &FinMap) -> Result<FinMap, LangError> {
        let f = &self.model.formers;
        let me = self.model_err(t.span);
        let den = match (&t.kind, &a.kind) {
            (TermKind::Lam(x, body), TypeKind::Pi(_, dom, cod)) => {
                let d = self.ty(cx, dom)?;
                let inner = self.extend(cx, x, dom, &d, t.span)?;
                let b = self.check(&inner, body, cod)?;
                let c = self.ty(&inner, cod)?;
                (f.pi.lam)(&inner.entries.last().expect("just pushed").ext, &c, &b).map_err(me)?
            }
            (TermKind::Lam(..), _) => {
                return Err(self.err(t.span, format!("a function cannot have type {}", self.show_ty(cx, a))));
            }
            (TermKind::Pair(l, r), TypeKind::Sigma(x, dom, cod)) => {
                let d = self.ty(cx, dom)?;
                let ld = self.check_den(cx, l, dom, &d)?;
                let rd = self.check(cx, r, &instantiate(cod, std::slice::from_ref(l)))?;
                let inner = self.extend(cx, x, dom, &d, t.span)?;
                let c = self.ty(&inner, cod)?;
                (f.sigma.pair)(&inner.entries.last().expect("just pushed").ext, &c, &ld, &rd).map_err(me)?
            }
            (TermKind::Pair(..), _) => {
                return Err(self.err(t.span, format!("a pair cannot have type {}", self.show_ty(cx, a))));
            }
            _ => {
                let (den, found) = self.infer(cx, t)?;
                let fd = self.ty(cx, &found)?;
                if fd != *ad {
                    return Err(self.err(
                        t.span,
                        format!(
                            "{} has type {} but {} was expected",
                            self.show(cx, t),
                            self.show_ty(cx, &found),
                            self.show_ty(cx, a)
                        ),
                    ));
                }
                den
            }
        };
        self.sound(t, &den, ad)?;
        Ok(den)
    }

    /// Every accepted judgment satisfies t ≫ tp = A in the model.
    fn sound(&self, t: &Term, den: &FinMap, ad: &FinMap) -> Result<(), LangError> {
        match den.compose(self.model.tp()) {
            Ok(ty) if ty == *ad => Ok(()),
            _ => Err(self.err(t.span, "the model broke the typing equation t ≫ tp = A")),
        }
    }

    fn variable(&self, cx: &Cx, k: usize, t: &Term) -> Result<(FinMap, Type), LangError> {
        let n = cx.len();
        if k >= n {
            return Err(self.err(t.span, "unbound variable"));
        }
        let i = n - 1 - k;
        let mut den = cx.entries[i].ext.var_map().clone();
        for e in &cx.entries[i + 1..] {
            den = e.ext.display().compose(&den).map_err(self.model_err(t.span))?;
        }
        Ok((den, shift_type(&cx.entries[i].ty, k + 1)))
    }

    /// Γ ⊢ t ⇒ A.
    pub fn infer(&self, cx: &Cx, t: &Term) -> Result<(FinMap, Type), LangError> {
        let f = &self.model.formers;
        let u = self.model.universe();
        let me = self.model_err(t.span);
        let g = cx.obj();
        let (den, ty) = match &t.kind {
            TermKind::Var(k, _) => self.variable(cx, *k, t)?,
            TermKind::Global(name) => {
                let global = self.globals.get(name).ok_or_else(|| self.err(t.span, format!("unknown identifier `{name}`")))?;
                (bang(&g).compose(&global.den).map_err(me)?, global.ty.clone())
            }
            TermKind::Tt => ((f.unit.unit_term)(&g).map_err(me)?, Type::new(TypeKind::Unit, t.span)),
            TermKind::App(fun, arg) => {
                let (fd, fty) = self.infer(cx, fun)?;
                let TypeKind::Pi(x, dom, cod) = &fty.kind else {
                    return Err(self.err(fun.span, format!("{} has type {}, which is not a function type", self.show(cx, fun), self.show_ty(cx, &fty))));
                };
                let d = self.ty(cx, dom)?;
                let ad = self.check_den(cx, arg, dom, &d)?;
                let inner = self.extend(cx, x, dom, &d, t.span)?;
                let c = self.ty(&inner, cod)?;
                let ext = &inner.entries.last().expect("just pushed").ext;
                let body = (f.pi.unlam)(ext, &c, &fd).map_err(&me)?;
                let at = u.pair_sub(ext, &FinMap::identity(&g), &ad).map_err(&me)?;
                (at.compose(&body).map_err(&me)?, instantiate(cod, std::slice::from_ref(arg)))
            }
            TermKind::Fst(p) | TermKind::Snd(p) => {
                let (pd, pty) = self.infer(cx, p)?;
                let TypeKind::Sigma(x, dom, cod) = &pty.kind else {
                    return Err(self.err(p.span, format!("{} has type {}, which is not a pair type", self.show(cx, p), self.show_ty(cx, &pty))));
                };
                let d = self.ty(cx, dom)?;
                let inner = self.extend(cx, x, dom, &d, t.span)?;
                let c = self.ty(&inner, cod)?;
                let ext = &inner.entries.last().expect("just pushed").ext;
                if matches!(t.kind, TermKind::Fst(_)) {
                    ((f.sigma.fst)(ext, &c, &pd).map_err(me)?, (**dom).clone())
                } else {
                    let first = crate::syntax::fst((**p).clone(), p.span);
                    ((f.sigma.snd)(ext, &c, &pd).map_err(me)?, instantiate(cod, &[first]))
                }
            }
            TermKind::Refl(a) => {
                let (ad, aty) = self.infer(cx, a)?;
                let td = self.ty(cx, &aty)?;
                ((f.id.refl)(&td, &ad).map_err(me)?, id_type(aty, (**a).clone(), (**a).clone(), t.span))
            }
            TermKind::J { motive, base, target, proof } => {
                let (pd, pty) = self.infer(cx, proof)?;
                let TypeKind::Id(a_ty, a0, b0) = &pty.kind else {
                    return Err(self.err(proof.span, format!("{} has type {}, which is not an identity type", self.show(cx, proof), self.show_ty(cx, &pty))));
                };
                let td = self.ty(cx, a_ty)?;
                let a0d = self.check_den(cx, a0, a_ty, &td)?;
                let b0d = self.check_den(cx, b0, a_ty, &td)?;
                let bd = self.check_den(cx, target, a_ty, &td)?;
                if bd != b0d {
                    return Err(self.err(
                        target.span,
                        format!("{} is not the right endpoint {} of the proof", self.show(cx, target), self.show(cx, b0)),
                    ));
                }
                let ctx = id_context(&f.id, &td, &a0d).map_err(&me)?;
                let with_point = cx.push(&motive.point, (**a_ty).clone(), ctx.ext_a.clone());
                let path = id_type(shift_type(a_ty, 1), shift_term(a0, 1), var(0, &motive.point, t.span), t.span);
                let with_proof = with_point.push(&motive.proof, path, ctx.ext_id.clone());
                let c = self.ty(&with_proof, &motive.body)?;
                let base_ty = instantiate(&motive.body, &[refl((**a0).clone(), a0.span), (**a0).clone()]);
                let cd = self.check(cx, base, &base_ty)?;
                let elim = (f.id.j)(&ctx, &c, &cd).map_err(&me)?;
                let to_point = u.pair_sub(&ctx.ext_a, &FinMap::identity(&g), &bd).map_err(&me)?;
                let at = u.pair_sub(&ctx.ext_id, &to_point, &pd).map_err(&me)?;
                (at.compose(&elim).map_err(&me)?, instantiate(&motive.body, &[(**proof).clone(), (**target).clone()]))
            }
            TermKind::Ann(body, a) => (self.check(cx, body, a)?, (**a).clone()),
            TermKind::Lam(..) | TermKind::Pair(..) => {
                return Err(self.err(t.span, format!("cannot infer a type for {}; annotate it", self.show(cx, t))));
            }
        };
        let ad = self.ty(cx, &ty)?;
        self.sound(t, &den, &ad)?;
        Ok((den, ty))
    }

    /// Elaborates a telescope, then checks or infers a term in it.
    pub fn denote(&self, telescope: &[(Name, Type)], body: &Term, ty: Option<&Type>) -> Result<(Cx, FinMap), LangError> {
        let mut cx = Cx::default();
        for (name, a) in telescope {
            let d = self.ty(&cx, a)?;
            cx = self.extend(&cx, name, a, &d, a.span)?;
        }
        let den = match ty {
            Some(a) => self.check(&cx, body, a)?,
            None => self.infer(&cx, body)?.0,
        };
        Ok((cx, den))
    }

    /// Runs one statement, returning its printed outcome.
    pub fn stmt(&mut self, s: &Stmt) -> Result<String, LangError> {
        match s {
            Stmt::Def { name, ty, body, span } => {
                if self.globals.contains_key(name) {
                    return Err(self.err(*span, format!("`{name}` is already defined")));
                }
                let den = self.check(&Cx::default(), body, ty)?;
                let line = format!("{name} : {ty}");
                self.globals.insert(name.clone(), Global { ty: ty.clone(), den });
                Ok(line)
            }
            Stmt::Check { body, ty, .. } => {
                self.check(&Cx::default(), body, ty)?;
                Ok(format!("{body} : {ty}"))
            }
            Stmt::Eval { telescope, body, ty, expect, span } => {
                let (cx, den) = self.denote(telescope, body, ty.as_ref())?;
                let value = evaluate(self.model, &den).ok_or_else(|| {
                    let (line, col) = crate::syntax::line_col(self.src, span.start);
                    LangError::EmptyContext { line, col }
                })?;
                if let Some(expected) = expect {
                    if *expected != value {
                        let (line, col) = crate::syntax::line_col(self.src, body.span.start);
                        return Err(LangError::Mismatch { line, col, expected: expected.clone(), found: value });
                    }
                }
                Ok(format!("{} = {value}", Printer::under(&cx.names()).term(body)))
            }
        }
    }
}

/// The value of a denotation: one element for a one-element environment,
/// otherwise the list of values over all environment elements in order.
pub fn evaluate(model: &Model, den: &FinMap) -> Option<String> {
    let values: Vec<String> =
        (0..den.dom().len()).map(|g| print_value(model.universe().tm().label(den.apply(g)))).collect();
    match values.len() {
        0 => None,
        1 => values.into_iter().next(),
        _ => Some(format!("[{}]", values.join(", "))),
    }
}

/// The outcome of running a program: printed lines up to the first error.
#[derive(Debug)]
pub struct ProgramReport {
    pub lines: Vec<String>,
    pub error: Option<LangError>,
}

pub fn run_program(src: &str, model: &Model) -> ProgramReport {
    let stmts = match parse_program(src) {
        Ok(s) => s,
        Err(e) => return ProgramReport { lines: Vec::new(), error: Some(e) },
    };
    let mut checker = Checker::new(model, src);
    let mut lines = Vec::new();
    for s in &stmts {
        match checker.stmt(s) {
            Ok(line) => lines.push(line),
            Err(e) => return ProgramReport { lines, error: Some(e) },
        }
    }
    ProgramReport { lines, error: None }
}

/// Checks a closed term against a closed type, both given as source.
pub fn check_closed(model: &Model, term: &str, ty: &str) -> Result<Judgment, LangError> {
    let t = parse_term(term)?;
    let a = parse_type(ty)?;
    let checker = Checker::new(model, term);
    let cx = Cx::default();
    let ty_den = checker.ty(&cx, &a)?;
    let den = checker.check(&cx, &t, &a)?;
    Ok(Judgment { context: cx.obj(), ty: a, ty_den, term: den })
}

/// The denotation Γ → Tm of the term in a single `eval [Γ] t : A` statement.
pub fn denote(model: &Model, eval_stmt: &str) -> Result<FinMap, LangError> {
    let stmts = parse_program(eval_stmt)?;
    match stmts.as_slice() {
        [Stmt::Eval { telescope, body, ty, .. }] => {
            Ok(Checker::new(model, eval_stmt).denote(telescope, body, ty.as_ref())?.1)
        }
        _ => Err(LangError::Parse { line: 1, col: 1, msg: "expected a single eval statement".into() }),
    }
}

/// Infers and evaluates a closed term.
pub fn eval_closed(model: &Model, term: &str) -> Result<String, LangError> {
    let t = parse_term(term)?;
    let checker = Checker::new(model, term);
    let (den, _) = checker.infer(&Cx::default(), &t)?;
    evaluate(model, &den).ok_or(LangError::EmptyContext { line: 1, col: 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_denotes_the_unique_term() {
        let m = Model::propositional();
        let j = check_closed(&m, "fun x => x", "(x : Unit) -> Unit").unwrap();
        assert_eq!(j.term.compose(m.tp()).unwrap(), j.ty_den);
        assert_eq!(m.universe().ty().label(j.ty_den.apply(0)).to_string(), clan::universe::TOP);
    }

    #[test]
    fn evaluation() {
        let m = Model::propositional();
        assert_eq!(eval_closed(&m, "tt").unwrap(), "•");
        assert_eq!(eval_closed(&m, "(fun x => x : Unit -> Unit) tt").unwrap(), "•");
        assert_eq!(eval_closed(&m, "(<tt, tt> : Unit * Unit).2").unwrap(), "•");
    }

    #[test]
    fn projection_of_non_pair() {
        let m = Model::propositional();
        let err = eval_closed(&m, "tt.1").unwrap_err();
        assert!(matches!(err, LangError::Type { line: 1, col: 1, .. }), "{err}");
    }

    #[test]
    fn j_computes_on_refl() {
        let m = Model::propositional();
        let j = check_closed(&m, "J (x q. Unit) tt tt (refl tt)", "Unit").unwrap();
        let c = check_closed(&m, "tt", "Unit").unwrap();
        assert_eq!(j.term, c.term);
    }

    #[test]
    fn cardinality_models() {
        let m = Model::cardinality(4);
        assert!(check_closed(&m, "fun p => p.1", "(Code 2 * Code 1) -> Code 2").is_ok());
        let err = check_closed(&m, "fun p => p", "(Code 2 * Code 3) -> Code 2 * Code 3").unwrap_err();
        assert!(matches!(err, LangError::Universe { .. }), "{err}");
    }
}
