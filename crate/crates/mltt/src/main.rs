use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use clan::algebraic::AlgUniverse;
use clan::elementary::{
    check_elem_id, check_elem_pi, check_elem_sigma, check_elem_unit, heterogeneous_pi_sigma, mutate_constant_lam,
    mutate_swap_projections, ElemPi, ElemSigma,
};
use clan::mapclass::{check_axioms, MapClass};
use clan::poly::{apply_poly_map, compose_maps};
use clan::report::{LawReport, Verdict};
use clan::translate::{
    extract_alg_from_closure, hierarchy_corollary, principal_preclan_theorem, translate, Direction, Former,
};
use clan::universe::{build_cardinality_universe, build_propositional_universe, build_tower, Universe};
use clan::{FinMap, FinObj};
use mltt::{eval_closed, run_program, Model};

#[derive(Parser)]
#[command(name = "mltt", version, about = "Martin-Löf type theory in finite-set models")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Type-check a .mltt file.
    Check(ProgramArgs),
    /// Type-check a .mltt file and print its evaluations, or evaluate one closed term.
    Eval {
        file: Option<PathBuf>,
        #[arg(long, short = 'e')]
        expr: Option<String>,
        #[arg(long, default_value = "prop")]
        model: String,
    },
    /// Run the elementary law suites.
    Laws {
        #[arg(long, value_enum, default_value = "prop")]
        model: LawModel,
        #[arg(long, default_value_t = 3)]
        bound: usize,
        /// Comma-separated formers: unit, pi, sigma, id.
        #[arg(long, value_delimiter = ',')]
        clauses: Vec<Former>,
        /// Tower level bounds for the heterogeneous model.
        #[arg(long, value_delimiter = ',', default_value = "2,4")]
        bounds: Vec<usize>,
        #[arg(long, value_enum)]
        mutate: Option<Mutation>,
    },
    /// Polynomial functors.
    #[command(subcommand)]
    Poly(PolyCommand),
    /// Check clan axioms for a named class of maps.
    ClanCheck {
        /// all, mono, surj, surj-nonid, fibers:0,2 or below:3.
        #[arg(long)]
        class: String,
        #[arg(long, default_value_t = 3)]
        bound: usize,
        /// Axioms to check: 1-3 preclan, 4 pushforward, 5 clan.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
        axioms: Vec<u8>,
    },
    /// Algebraic formers.
    #[command(subcommand)]
    Alg(AlgCommand),
    /// Translate between elementary and algebraic formers.
    Translate {
        #[arg(long)]
        direction: Direction,
        #[arg(long)]
        former: Former,
        #[arg(long, default_value = "prop")]
        model: String,
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
    /// Check the theorems on principal classes.
    #[command(subcommand)]
    Theorem(TheoremCommand),
    /// Extract algebraic formers from closure properties of the principal class.
    Extract {
        /// prop, card<k>, or fibers:1,2 for a universe with those fiber sizes.
        #[arg(long, default_value = "prop")]
        model: String,
        /// A universe in JSON, overriding --model.
        #[arg(long)]
        universe: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        bound: usize,
    },
    /// Build universes and towers as JSON.
    #[command(subcommand)]
    Universe(UniverseCommand),
}

#[derive(Args)]
struct ProgramArgs {
    file: PathBuf,
    #[arg(long, default_value = "prop")]
    model: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum LawModel {
    Prop,
    Tower,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mutation {
    ConstantLam,
    SwapProjections,
}

#[derive(Subcommand)]
enum PolyCommand {
    /// Compute P_f X.
    Apply {
        /// The signature f: E → B: a JSON map (path or inline) or fibers:1,0,2.
        #[arg(long, alias = "signature")]
        sig: String,
        /// X as a JSON object (path or inline) or a size.
        #[arg(long, alias = "set")]
        x: String,
    },
    /// Compose two signatures: |P_(f'▷f) X| against |P_f(P_f' X)| for |X| ≤ 3.
    Compose {
        /// The outer signature f'.
        #[arg(long)]
        outer: String,
        /// The inner signature f.
        #[arg(long)]
        inner: String,
        /// Also check that the currying map is a bijection for each X.
        #[arg(long)]
        check_iso: bool,
    },
}

#[derive(Subcommand)]
enum AlgCommand {
    /// Build an algebraic former from the model and check its square.
    Check {
        #[arg(long, default_value = "prop")]
        model: String,
        #[arg(long)]
        former: Former,
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
}

#[derive(Subcommand)]
enum TheoremCommand {
    /// The principal class of a universe with Unit, Σ and Π is a π-preclan.
    Principal {
        #[arg(long, default_value = "prop")]
        model: String,
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
    /// The union of the principal classes of a tower.
    Hierarchy {
        #[arg(long, value_delimiter = ',', default_value = "2,4")]
        bounds: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
}

#[derive(Subcommand)]
enum UniverseCommand {
    /// A single universe.
    Build {
        #[arg(long, value_enum, default_value = "prop")]
        kind: UniverseKind,
        /// Largest fiber size for a cardinality universe.
        #[arg(long, default_value_t = 2)]
        max: usize,
    },
    /// Cardinality universes with lifts between consecutive levels.
    Tower {
        #[arg(long, value_delimiter = ',', default_value = "2,4")]
        bounds: Vec<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum UniverseKind {
    Prop,
    Card,
}

/// What a command produced: verdicts plus free-form lines and data.
#[derive(Default)]
struct Outcome {
    lines: Vec<String>,
    verdicts: Vec<Verdict>,
    data: Option<Value>,
    /// The lines already state every verdict.
    lines_only: bool,
}

impl Outcome {
    fn pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    fn reports(reports: impl IntoIterator<Item = LawReport>) -> Self {
        Outcome { verdicts: reports.into_iter().flat_map(|r| r.verdicts).collect(), ..Default::default() }
    }

    fn print(&self, as_json: bool) {
        if as_json {
            let mut out = json!({ "verdicts": self.verdicts.iter().map(verdict_json).collect::<Vec<_>>() });
            if let Some(data) = &self.data {
                out["data"] = data.clone();
            }
            if !self.lines.is_empty() {
                out["lines"] = json!(self.lines);
            }
            println!("{}", serde_json::to_string_pretty(&out).expect("json"));
            return;
        }
        for line in &self.lines {
            println!("{line}");
        }
        if self.lines_only {
            return;
        }
        for v in &self.verdicts {
            let status = if v.pass { "PASS" } else { "FAIL" };
            println!("{status} {:<34} {} ({} checked)", v.id, v.description, v.checked);
            if let Some(c) = &v.counterexample {
                println!("     counterexample: {c}");
            }
        }
    }
}

fn verdict_json(v: &Verdict) -> Value {
    json!({ "id": v.id, "pass": v.pass, "counterexample": v.counterexample, "checked": v.checked })
}

fn single(id: &str, description: &str, ok: bool) -> Verdict {
    let mut v = Verdict::new(id, description);
    v.record(ok, || Value::Null);
    v
}

/// Inline JSON, or a path to a JSON file.
fn load_json(arg: &str) -> Result<Value> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?
    };
    serde_json::from_str(&text).with_context(|| format!("parsing JSON from {arg}"))
}

/// A map as JSON, `{"dom": n, "cod": m, "table": [..]}` on canonical sets, or `fibers:1,0,2`.
fn load_map(arg: &str) -> Result<FinMap> {
    if let Some(rest) = arg.strip_prefix("fibers:") {
        let sizes = parse_sizes(rest)?;
        return Ok(universe_with_fibers(&sizes)?.tp().clone());
    }
    let value = load_json(arg)?;
    if let (Some(dom), Some(cod), Some(table)) =
        (value["dom"].as_u64(), value["cod"].as_u64(), value["table"].as_array())
    {
        let table = table.iter().map(|v| v.as_u64().map(|i| i as usize)).collect::<Option<Vec<_>>>();
        let table = table.context("table entries must be indices")?;
        return Ok(FinMap::new(FinObj::canonical(dom as usize), FinObj::canonical(cod as usize), table)?);
    }
    Ok(FinMap::from_json(&value)?)
}

fn parse_sizes(text: &str) -> Result<Vec<usize>> {
    text.split(',').map(|s| s.trim().parse::<usize>().with_context(|| format!("bad size `{s}`"))).collect()
}

fn load_set(arg: &str) -> Result<FinObj> {
    match arg.parse::<usize>() {
        Ok(n) => Ok(FinObj::canonical(n)),
        Err(_) => Ok(FinObj::from_json(&load_json(arg)?)?),
    }
}

/// A universe tp: Tm → Ty whose fibers have the given sizes.
fn universe_with_fibers(sizes: &[usize]) -> Result<Universe> {
    let table: Vec<usize> = sizes.iter().enumerate().flat_map(|(b, &n)| std::iter::repeat_n(b, n)).collect();
    let tp = FinMap::new(FinObj::canonical(table.len()), FinObj::canonical(sizes.len()), table)?;
    Ok(Universe::new(tp))
}

fn universe_named(name: &str) -> Result<Universe> {
    if let Some(rest) = name.strip_prefix("fibers:") {
        return universe_with_fibers(&parse_sizes(rest)?);
    }
    Ok(Model::by_name(name)?.universe().clone())
}

fn read_source(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn run_file(path: &Path, model: &str, evals_only: bool) -> Result<Outcome> {
    let model = Model::by_name(model)?;
    let src = read_source(path)?;
    let report = run_program(&src, &model);
    let mut out = Outcome::default();
    for line in report.lines {
        if !evals_only || line.contains(" = ") {
            out.lines.push(line);
        }
    }
    let mut v = Verdict::new("program", format!("{} checks in model {}", path.display(), model.name));
    v.checked = 1;
    if let Some(e) = report.error {
        v.pass = false;
        v.counterexample = Some(json!({ "error": e.to_string(), "location": e.location() }));
    }
    out.verdicts.push(v);
    Ok(out)
}

fn laws(model: LawModel, bound: usize, clauses: &[Former], bounds: &[usize], mutate: Option<Mutation>) -> Result<Outcome> {
    let wanted = |f: Former| clauses.is_empty() || clauses.contains(&f);
    let mutate_pi = |pi: ElemPi| match mutate {
        Some(Mutation::ConstantLam) => mutate_constant_lam(&pi),
        _ => pi,
    };
    let mutate_sigma = |s: ElemSigma| match mutate {
        Some(Mutation::SwapProjections) => mutate_swap_projections(&s),
        _ => s,
    };
    let mut reports = Vec::new();
    match model {
        LawModel::Prop => {
            let m = Model::propositional();
            let f = m.formers;
            if wanted(Former::Unit) {
                reports.push(check_elem_unit(&f.unit, bound));
            }
            if wanted(Former::Pi) {
                reports.push(check_elem_pi(&mutate_pi(f.pi), bound));
            }
            if wanted(Former::Sigma) {
                reports.push(check_elem_sigma(&mutate_sigma(f.sigma), bound));
            }
            if wanted(Former::Id) {
                reports.push(check_elem_id(&f.id, bound));
            }
        }
        LawModel::Tower => {
            let tower = build_tower(bounds)?;
            let (pi, sigma) = heterogeneous_pi_sigma(&tower, 0, 1)?;
            if wanted(Former::Pi) {
                reports.push(check_elem_pi(&mutate_pi(pi), bound));
            }
            if wanted(Former::Sigma) {
                reports.push(check_elem_sigma(&mutate_sigma(sigma), bound));
            }
            if reports.is_empty() {
                bail!("the tower model carries only pi and sigma");
            }
        }
    }
    Ok(Outcome::reports(reports))
}

fn poly(cmd: PolyCommand) -> Result<Outcome> {
    let mut out = Outcome::default();
    match cmd {
        PolyCommand::Apply { sig, x } => {
            let f = load_map(&sig)?;
            let x = load_set(&x)?;
            let app = apply_poly_map(&f, &x);
            let expected: usize = f.fiber_sizes().iter().map(|&n| x.len().pow(n as u32)).sum();
            out.lines.push(format!("|P_f X| = {}", app.total.len()));
            for p in 0..app.total.len() {
                out.lines.push(format!("  {}", app.total.label(p)));
            }
            out.verdicts.push(single("poly.cardinality", "|P_f X| = Σ_b |X|^|E_b|", app.total.len() == expected));
            out.data = Some(json!({ "total": app.total.to_json(), "fst": app.fst_proj.to_json() }));
        }
        PolyCommand::Compose { outer, inner, check_iso } => {
            let outer = load_map(&outer)?;
            let inner = load_map(&inner)?;
            let comp = compose_maps(&outer, &inner)?;
            out.lines.push(format!("|compDom| = {}", comp.comp_dom.len()));
            let mut sizes = Verdict::new("poly.compose.cardinality", "|P_(f'▷f) X| = |P_f(P_f' X)|");
            let mut iso = Verdict::new("poly.compose.currying", "the currying map is a bijection");
            let mut rows = Vec::new();
            for n in 0..=3 {
                let curry = comp.currying(&FinObj::canonical(n))?;
                let (lhs, rhs) = (curry.lhs.total.len(), curry.rhs.total.len());
                out.lines.push(format!("|X| = {n}: |P_(f'▷f) X| = {lhs}, |P_f(P_f' X)| = {rhs}"));
                sizes.record(lhs == rhs, || json!({ "x": n, "lhs": lhs, "rhs": rhs }));
                iso.record(curry.iso.is_bijective(), || json!({ "x": n }));
                rows.push(json!({ "x": n, "lhs": lhs, "rhs": rhs }));
            }
            out.verdicts.push(sizes);
            if check_iso {
                out.verdicts.push(iso);
            }
            out.data = Some(json!({ "signature": comp.sig.to_json(), "cardinalities": rows }));
        }
    }
    Ok(out)
}

/// A class by name, or a JSON file or literal `{"name": …, "maps": [map, …]}` listing its members.
fn load_class(arg: &str) -> Result<MapClass> {
    if let Some(c) = MapClass::by_name(arg) {
        return Ok(c);
    }
    let value = load_json(arg).with_context(|| format!("`{arg}` is neither a class name nor a JSON class"))?;
    let maps = value["maps"].as_array().context("a JSON class needs a \"maps\" array")?;
    let maps = maps.iter().map(FinMap::from_json).collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(MapClass::explicit(value["name"].as_str().unwrap_or("explicit"), maps))
}

fn alg_universe(name: &str) -> Result<(Model, AlgUniverse)> {
    let model = Model::by_name(name)?;
    let au = AlgUniverse::new(model.universe().clone(), model.universe().principal_class())?;
    Ok((model, au))
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Check(args) => run_file(&args.file, &args.model, false),
        Command::Eval { file, expr, model } => match (file, expr) {
            (Some(file), None) => run_file(&file, &model, true),
            (None, Some(expr)) => {
                let m = Model::by_name(&model)?;
                let value = eval_closed(&m, &expr)?;
                Ok(Outcome { lines: vec![value.clone()], data: Some(json!({ "value": value })), ..Default::default() })
            }
            _ => bail!("give either a file or --expr"),
        },
        Command::Laws { model, bound, clauses, bounds, mutate } => laws(model, bound, &clauses, &bounds, mutate),
        Command::Poly(cmd) => poly(cmd),
        Command::ClanCheck { class, bound, axioms } => {
            let c = load_class(&class)?;
            let reports = check_axioms(&c, bound, &axioms);
            let lines = reports
                .iter()
                .map(|a| {
                    let verdict = if a.pass { "pass" } else { "fail" };
                    match &a.counterexample {
                        Some(c) => format!("axiom={} verdict={verdict} counterexample={c}", a.axiom),
                        None => format!("axiom={} verdict={verdict}", a.axiom),
                    }
                })
                .collect();
            let verdicts = reports.iter().map(|a| a.to_verdict()).collect();
            Ok(Outcome { lines, verdicts, lines_only: true, ..Default::default() })
        }
        Command::Alg(AlgCommand::Check { model, former, bound }) => {
            let (m, au) = alg_universe(&model)?;
            let report = translate(Direction::ElemToAlg, former, &m.formers, &au, bound)?;
            Ok(Outcome { verdicts: report.verdicts, data: Some(report.structure), ..Default::default() })
        }
        Command::Translate { direction, former, model, bound } => {
            let (m, au) = alg_universe(&model)?;
            let report = translate(direction, former, &m.formers, &au, bound)?;
            let mut verdicts = report.verdicts;
            verdicts.extend(report.roundtrip);
            Ok(Outcome { verdicts, data: Some(report.structure), ..Default::default() })
        }
        Command::Theorem(TheoremCommand::Principal { model, bound }) => {
            let m = Model::by_name(&model)?;
            let report = principal_preclan_theorem(&m.formers, bound)?;
            let mut verdicts: Vec<Verdict> = report.axioms.iter().map(|a| a.to_verdict()).collect();
            verdicts.extend(report.witnesses);
            Ok(Outcome { lines: vec![format!("class: {}", report.class.name())], verdicts, ..Default::default() })
        }
        Command::Theorem(TheoremCommand::Hierarchy { bounds, bound }) => {
            let tower = build_tower(&bounds)?;
            let report = hierarchy_corollary(&tower, bound)?;
            let mut verdicts: Vec<Verdict> = report.axioms.iter().map(|a| a.to_verdict()).collect();
            verdicts.extend(report.verdicts);
            Ok(Outcome { lines: vec![format!("union: {}", report.union.name())], verdicts, ..Default::default() })
        }
        Command::Extract { model, universe, bound } => {
            let u = match universe {
                Some(path) => Universe::from_json(&load_json(&path.to_string_lossy())?)?,
                None => universe_named(&model)?,
            };
            let au = AlgUniverse::new(u.clone(), u.principal_class())?;
            let ex = extract_alg_from_closure(&au, bound)?;
            let found = |b: bool| if b { "found" } else { "none" };
            let lines = vec![
                format!("unit: {}", found(ex.unit.is_some())),
                format!("sigma: {}", found(ex.sigma.is_some())),
                format!("pi: {}", found(ex.pi.is_some())),
            ];
            Ok(Outcome { lines, data: Some(ex.to_json()), verdicts: ex.verdicts, ..Default::default() })
        }
        Command::Universe(UniverseCommand::Build { kind, max }) => {
            let u = match kind {
                UniverseKind::Prop => build_propositional_universe(),
                UniverseKind::Card => build_cardinality_universe(max),
            };
            let text = serde_json::to_string_pretty(&u.to_json())?;
            Ok(Outcome { lines: vec![text], data: Some(u.to_json()), ..Default::default() })
        }
        Command::Universe(UniverseCommand::Tower { bounds }) => {
            let tower = build_tower(&bounds)?;
            let text = serde_json::to_string_pretty(&tower.to_json())?;
            Ok(Outcome { lines: vec![text], data: Some(tower.to_json()), ..Default::default() })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let as_json = cli.json;
    match run(cli) {
        Ok(out) => {
            out.print(as_json);
            if out.pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            if as_json {
                println!("{}", json!({ "verdicts": [], "error": format!("{e:#}") }));
            } else {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(1)
        }
    }
}
