use std::fs;
use std::path::{Path, PathBuf};

use mltt::parse::parse_program;
use mltt::syntax::{Printer, Stmt};
use mltt::{run_program, LangError, Model};

fn corpus(dir: &str) -> Vec<(PathBuf, String)> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(dir);
    let mut files: Vec<_> = fs::read_dir(&root)
        .unwrap_or_else(|e| panic!("{}: {e}", root.display()))
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "mltt"))
        .collect();
    files.sort();
    files.into_iter().map(|p| { let src = fs::read_to_string(&p).unwrap(); (p, src) }).collect()
}

fn kind(e: &LangError) -> &'static str {
    match e {
        LangError::Parse { .. } => "parse",
        LangError::Type { .. } => "type",
        LangError::Universe { .. } => "universe",
        LangError::EmptyContext { .. } => "empty",
        LangError::Mismatch { .. } => "mismatch",
        LangError::UnknownModel(_) | LangError::Model(_) => "model",
    }
}

#[test]
fn well_typed_programs_check_and_evaluate() {
    let files = corpus("ok");
    assert!(files.len() >= 20);
    let model = Model::propositional();
    for (path, src) in files {
        assert!(src.contains("=>"), "{} has no evaluation expectation", path.display());
        let report = run_program(&src, &model);
        assert!(report.error.is_none(), "{}: {}", path.display(), report.error.unwrap());
    }
}

#[test]
fn cardinality_programs_evaluate() {
    let model = Model::cardinality(4);
    for (path, src) in corpus("card4") {
        let report = run_program(&src, &model);
        assert!(report.error.is_none(), "{}: {}", path.display(), report.error.unwrap());
    }
}

#[test]
fn ill_typed_programs_fail_where_expected() {
    let files = corpus("bad");
    assert!(files.len() >= 10);
    let model = Model::propositional();
    for (path, src) in files {
        let header = src.lines().next().and_then(|l| l.strip_prefix("-- expect: ")).expect("expect header");
        let (want_kind, at) = header.split_once(' ').unwrap();
        let (line, col) = at.split_once(':').unwrap();
        let want = (line.parse::<usize>().unwrap(), col.parse::<usize>().unwrap());
        let err = run_program(&src, &model).error.unwrap_or_else(|| panic!("{} was accepted", path.display()));
        assert_eq!(kind(&err), want_kind, "{}: {err}", path.display());
        assert_eq!(err.location(), Some(want), "{}: {err}", path.display());
    }
}

fn render(s: &Stmt) -> String {
    match s {
        Stmt::Def { name, ty, body, .. } => format!("def {name} : {ty} = {body}"),
        Stmt::Check { body, ty, .. } => format!("check {body} : {ty}"),
        Stmt::Eval { telescope, body, ty, expect, .. } => {
            let mut names = Vec::new();
            let mut parts = Vec::new();
            for (x, a) in telescope {
                parts.push(format!("{x} : {}", Printer::under(&names).ty(a)));
                names.push(x.clone());
            }
            let mut out = String::from("eval ");
            if !parts.is_empty() {
                out += &format!("[{}] ", parts.join(", "));
            }
            out += &Printer::under(&names).term(body);
            if let Some(a) = ty {
                out += &format!(" : {}", Printer::under(&names).ty(a));
            }
            if let Some(v) = expect {
                out += &format!(" => {v}");
            }
            out
        }
    }
}

fn same(a: &Stmt, b: &Stmt) -> bool {
    match (a, b) {
        (Stmt::Def { name: n, ty: t, body: x, .. }, Stmt::Def { name: m, ty: u, body: y, .. }) => n == m && t == u && x == y,
        (Stmt::Check { body: x, ty: t, .. }, Stmt::Check { body: y, ty: u, .. }) => x == y && t == u,
        (
            Stmt::Eval { telescope: g, body: x, ty: t, expect: e, .. },
            Stmt::Eval { telescope: h, body: y, ty: u, expect: f, .. },
        ) => {
            g.len() == h.len() && g.iter().zip(h).all(|((_, a), (_, b))| a == b) && x == y && t == u && e == f
        }
        _ => false,
    }
}

#[test]
fn printing_then_parsing_is_the_identity() {
    for dir in ["ok", "card4"] {
        for (path, src) in corpus(dir) {
            for stmt in parse_program(&src).unwrap() {
                let printed = render(&stmt);
                let reparsed = parse_program(&printed).unwrap_or_else(|e| panic!("{}: `{printed}`: {e}", path.display()));
                assert_eq!(reparsed.len(), 1);
                assert!(same(&stmt, &reparsed[0]), "{}: `{printed}` reparsed differently", path.display());
            }
        }
    }
}
